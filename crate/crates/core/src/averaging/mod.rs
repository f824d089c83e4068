//! First-order averaging of `center + ε Σ bⱼ Xⱼ`.
//!
//! In polar coordinates the radial drift of each field is `Fⱼ(θ) r^{αⱼ}`, so
//! the averaged function is `h(z) = Σ bⱼ Iⱼ / (2π) · z^{αⱼ}` with
//! `Iⱼ = ∫₀^{2π} Fⱼ(θ) dθ`. Simple positive zeros of `h` locate the limit
//! cycles that persist for small `ε`.

mod melnikov;
mod roots;
mod synthesis;
mod wronskian;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::field::{angular_components, HomogeneousField, Orientation, PerturbationSpec};
use crate::quadrature::integrate_circle;

pub use melnikov::{melnikov, melnikov_line_integral, MELNIKOV_NORMALIZATION};
pub use roots::{
    interval_degree, positive_roots, positive_roots_scan, Root, RootReport, DEFAULT_BRACKET,
    DEFAULT_SCAN_POINTS,
};
pub use synthesis::{synthesize_coefficients, CONDITION_LIMIT};
pub use wronskian::{wronskian_closed_form, wronskian_numeric};

/// Default absolute tolerance for the angular integrals.
pub const DEFAULT_TOL: f64 = 1e-12;

/// `|I| > NONZERO_FACTOR · tol` counts as nonzero; `|I| < tol` as zero.
pub const NONZERO_FACTOR: f64 = 100.0;

/// `Iⱼ = ∫₀^{2π} (f cos θ + g sin θ) dθ` on the unit circle.
pub fn angular_integral(field: &HomogeneousField, tol: f64) -> Result<f64> {
    let e = integrate_circle(&|t| angular_components(field, t).0, tol)?;
    Ok(e.value)
}

/// One field's angular integral and whether it survives in `h`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngularIntegral {
    pub index: usize,
    pub alpha: Exponent,
    pub value: f64,
    pub nonzero: bool,
}

/// All `Iⱼ` of a spec, classified with the dead band `[tol, 100·tol]`.
pub fn angular_integrals(spec: &PerturbationSpec, tol: f64) -> Result<Vec<AngularIntegral>> {
    spec.fields()
        .iter()
        .enumerate()
        .map(|(index, field)| {
            let value = angular_integral(field, tol)?;
            let upper = NONZERO_FACTOR * tol;
            let nonzero = if value.abs() > upper {
                true
            } else if value.abs() < tol {
                false
            } else {
                return Err(Error::AmbiguousIntegral { index, value, tol, upper });
            };
            Ok(AngularIntegral { index, alpha: field.alpha(), value, nonzero })
        })
        .collect()
}

/// `h(z) = Σ cⱼ z^{βⱼ}` on `z > 0`, exponents strictly increasing.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AveragedFunction {
    #[serde(rename = "beta")]
    exponents: Vec<f64>,
    #[serde(rename = "c")]
    coefficients: Vec<f64>,
}

impl AveragedFunction {
    pub fn new(exponents: Vec<f64>, coefficients: Vec<f64>) -> Result<Self> {
        if exponents.len() != coefficients.len() {
            return Err(Error::InvalidArgument(format!(
                "{} exponents but {} coefficients",
                exponents.len(),
                coefficients.len()
            )));
        }
        if exponents.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument("exponents must strictly increase".into()));
        }
        if exponents.iter().chain(&coefficients).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite exponent or coefficient".into()));
        }
        Ok(AveragedFunction { exponents, coefficients })
    }

    pub fn exponents(&self) -> &[f64] {
        &self.exponents
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn eval(&self, z: f64) -> f64 {
        let ln = z.ln();
        self.exponents
            .iter()
            .zip(&self.coefficients)
            .map(|(&b, &c)| if b == 0.0 { c } else { c * (b * ln).exp() })
            .sum()
    }

    pub fn derivative(&self, z: f64) -> f64 {
        let ln = z.ln();
        self.exponents
            .iter()
            .zip(&self.coefficients)
            .filter(|(&b, _)| b != 0.0)
            .map(|(&b, &c)| c * b * ((b - 1.0) * ln).exp())
            .sum()
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        AveragedFunction {
            exponents: self.exponents.clone(),
            coefficients: self.coefficients.iter().map(|c| c * lambda).collect(),
        }
    }
}

/// Builds `h` for a `ccw` spec. Fields whose integral is structurally zero,
/// or whose coefficient `bⱼ` is zero, do not contribute.
pub fn averaged_function(spec: &PerturbationSpec, tol: f64) -> Result<AveragedFunction> {
    let integrals = angular_integrals(spec, tol)?;
    averaged_from_integrals(spec, &integrals)
}

pub fn averaged_from_integrals(
    spec: &PerturbationSpec,
    integrals: &[AngularIntegral],
) -> Result<AveragedFunction> {
    if spec.orientation() != Orientation::Ccw {
        return Err(Error::Orientation("averaging requires a ccw spec".into()));
    }
    let (mut exponents, mut coefficients) = (Vec::new(), Vec::new());
    for entry in integrals.iter().filter(|e| e.nonzero) {
        let c = spec.b()[entry.index] * entry.value / (2.0 * PI);
        if c != 0.0 {
            exponents.push(entry.alpha.to_f64());
            coefficients.push(c);
        }
    }
    AveragedFunction::new(exponents, coefficients)
}

/// `(number of nonzero Iⱼ) - 1`, floored at zero: the number of limit cycles
/// some choice of `b` is guaranteed to produce.
pub fn lower_bound_count(spec: &PerturbationSpec) -> Result<usize> {
    let integrals = angular_integrals(&spec.normalized(), DEFAULT_TOL)?;
    Ok(lower_bound_from_integrals(&integrals))
}

pub fn lower_bound_from_integrals(integrals: &[AngularIntegral]) -> usize {
    integrals.iter().filter(|e| e.nonzero).count().saturating_sub(1)
}

/// Sign changes of the coefficient sequence, zeros skipped.
pub fn descartes_bound(h: &AveragedFunction) -> usize {
    let signs: Vec<bool> =
        h.coefficients.iter().filter(|&&c| c != 0.0).map(|&c| c > 0.0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Machine-readable summary of an averaging run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AveragingReport {
    #[serde(rename = "I")]
    pub integrals: Vec<f64>,
    pub nonzero: usize,
    pub h: AveragedFunction,
    pub roots: Vec<Root>,
    pub descartes: usize,
    pub lower_bound: usize,
}

/// Integrals, `h`, its roots in `bracket`, and the counting bounds.
pub fn analyze(
    spec: &PerturbationSpec,
    tol: f64,
    bracket: (f64, f64),
    abs_tol: f64,
) -> Result<AveragingReport> {
    let spec = spec.normalized();
    let integrals = angular_integrals(&spec, tol)?;
    let h = averaged_from_integrals(&spec, &integrals)?;
    let roots = positive_roots(&h, bracket, abs_tol)?;
    Ok(AveragingReport {
        integrals: integrals.iter().map(|e| e.value).collect(),
        nonzero: integrals.iter().filter(|e| e.nonzero).count(),
        descartes: descartes_bound(&h),
        lower_bound: lower_bound_from_integrals(&integrals),
        h,
        roots: roots.roots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::SignedPowerTerm;

    fn g_mono(c: f64, j: u32) -> HomogeneousField {
        HomogeneousField::new(vec![], vec![SignedPowerTerm::monomial(c, 0, j)], Exponent::integer(j))
            .unwrap()
    }

    #[test]
    fn constant_and_linear_integrals() {
        let c = HomogeneousField::constant(1.3, -0.4);
        assert!(angular_integral(&c, 1e-12).unwrap().abs() < 1e-14);
        let lin = HomogeneousField::linear([[0.7, 2.0], [-1.0, 0.2]]);
        assert!((angular_integral(&lin, 1e-12).unwrap() - 0.9 * PI).abs() < 1e-12);
    }

    #[test]
    fn cubic_integral_is_wallis() {
        let v = angular_integral(&g_mono(1.0, 3), 1e-12).unwrap();
        assert!((v - 0.75 * PI).abs() < 1e-12);
    }

    #[test]
    fn rayleigh_averaged_function() {
        let spec = PerturbationSpec::new(
            vec![g_mono(1.0, 1), g_mono(-1.0, 3)],
            vec![1.0, 1.0],
            0.01,
            Orientation::Ccw,
        )
        .unwrap();
        let h = averaged_function(&spec, 1e-12).unwrap();
        assert_eq!(h.exponents(), &[1.0, 3.0]);
        assert!((h.coefficients()[0] - 0.5).abs() < 1e-13);
        assert!((h.coefficients()[1] + 0.375).abs() < 1e-13);
    }

    #[test]
    fn zero_coefficients_give_empty_h() {
        let spec = PerturbationSpec::new(
            vec![g_mono(1.0, 1), g_mono(-1.0, 3)],
            vec![0.0, 0.0],
            0.01,
            Orientation::Ccw,
        )
        .unwrap();
        let h = averaged_function(&spec, 1e-12).unwrap();
        assert!(h.is_empty());
        assert_eq!(h.eval(2.0), 0.0);
        // the lower bound ignores b
        assert_eq!(lower_bound_count(&spec).unwrap(), 1);
    }

    #[test]
    fn cw_spec_is_rejected_by_averaging() {
        let spec =
            PerturbationSpec::new(vec![g_mono(1.0, 1)], vec![1.0], 0.01, Orientation::Cw).unwrap();
        assert!(matches!(averaged_function(&spec, 1e-12), Err(Error::Orientation(_))));
    }

    #[test]
    fn dead_band_is_an_error() {
        // I = 3π/4 · 1e-12 / ... pick a coefficient landing between tol and 100 tol
        let tiny = g_mono(1e-11 / (0.75 * PI), 3);
        let spec = PerturbationSpec::new(vec![tiny], vec![1.0], 0.01, Orientation::Ccw).unwrap();
        assert!(matches!(angular_integrals(&spec, 1e-12), Err(Error::AmbiguousIntegral { .. })));
    }

    #[test]
    fn single_constant_field_bound() {
        let spec = PerturbationSpec::new(
            vec![HomogeneousField::constant(1.0, 2.0)],
            vec![1.0],
            0.1,
            Orientation::Ccw,
        )
        .unwrap();
        assert_eq!(lower_bound_count(&spec).unwrap(), 0);
        let empty = PerturbationSpec::new(vec![], vec![], 0.1, Orientation::Ccw).unwrap();
        assert_eq!(lower_bound_count(&empty).unwrap(), 0);
    }

    #[test]
    fn descartes_examples() {
        let h = |b: &[f64], c: &[f64]| AveragedFunction::new(b.to_vec(), c.to_vec()).unwrap();
        assert_eq!(descartes_bound(&h(&[0.0, 1.0], &[-1.0, 1.0])), 1);
        assert_eq!(descartes_bound(&h(&[1.0, 3.0], &[0.5, -0.375])), 1);
        assert_eq!(descartes_bound(&h(&[1.0, 3.0, 5.0], &[4.0, -5.0, 1.0])), 2);
        assert_eq!(descartes_bound(&h(&[1.0, 2.0, 3.0], &[4.0, 0.0, 1.0])), 0);
    }

    #[test]
    fn averaged_function_validation() {
        assert!(AveragedFunction::new(vec![1.0, 1.0], vec![1.0, 2.0]).is_err());
        assert!(AveragedFunction::new(vec![1.0], vec![1.0, 2.0]).is_err());
        let h = AveragedFunction::new(vec![0.5, 1.0], vec![1.0, -1.0]).unwrap();
        assert!((h.derivative(4.0) - (0.25 - 1.0)).abs() < 1e-15);
        let v = serde_json::to_value(&h).unwrap();
        assert_eq!(v["beta"][0], 0.5);
        assert_eq!(v["c"][1], -1.0);
    }
}

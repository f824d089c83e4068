use std::f64::consts::PI;

use super::AveragedFunction;
use crate::error::{Error, Result};
use crate::field::PerturbationSpec;
use crate::quadrature::integrate_circle;

/// `melnikov_line_integral(spec, k) = MELNIKOV_NORMALIZATION · melnikov(h, k)`
/// because `h` carries the averaging factor `1/(2π)`.
pub const MELNIKOV_NORMALIZATION: f64 = 2.0 * PI;

/// `√k · h(√k)`.
pub fn melnikov(h: &AveragedFunction, k: f64) -> f64 {
    let s = k.sqrt();
    s * h.eval(s)
}

/// `∮_{x²+y²=k} P dy - Q dx` for the perturbation `(P, Q) = Σ bⱼ Xⱼ`,
/// integrated on `x = √k cos θ`, `y = √k sin θ`.
pub fn melnikov_line_integral(spec: &PerturbationSpec, k: f64, tol: f64) -> Result<f64> {
    if !spec.is_smooth() {
        return Err(Error::Precondition("line integral requires integer exponents".into()));
    }
    if !(k > 0.0) {
        return Err(Error::InvalidArgument(format!("k must be positive, got {k}")));
    }
    let s = k.sqrt();
    let integrand = |t: f64| {
        let (sin, cos) = t.sin_cos();
        let (p, q) = spec.perturbation(s * cos, s * sin);
        // dy = √k cos θ dθ, dx = -√k sin θ dθ
        p * s * cos + q * s * sin
    };
    Ok(integrate_circle(&integrand, tol)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::Exponent;
    use crate::field::{HomogeneousField, Orientation, SignedPowerTerm};

    fn spec(field: HomogeneousField) -> PerturbationSpec {
        PerturbationSpec::new(vec![field], vec![1.0], 0.1, Orientation::Ccw).unwrap()
    }

    #[test]
    fn identity_field_circulation() {
        let s = spec(HomogeneousField::linear([[1.0, 0.0], [0.0, 1.0]]));
        let m = melnikov_line_integral(&s, 1.0, 1e-12).unwrap();
        assert!((m - 2.0 * PI).abs() < 1e-12);
        let h = AveragedFunction::new(vec![1.0], vec![1.0]).unwrap();
        assert_eq!(melnikov(&h, 1.0), 1.0);
        assert!((m - MELNIKOV_NORMALIZATION * melnikov(&h, 1.0)).abs() < 1e-12);
        assert!((melnikov(&h, 2.5) - 2.5).abs() < 1e-15);
    }

    #[test]
    fn vanishing_cases() {
        let zero = spec(HomogeneousField::linear([[0.0, 0.0], [0.0, 0.0]]));
        let rot = spec(HomogeneousField::linear([[0.0, -1.0], [1.0, 0.0]]));
        for k in [0.5, 1.0, 2.0] {
            assert_eq!(melnikov_line_integral(&zero, k, 1e-12).unwrap(), 0.0);
            assert!(melnikov_line_integral(&rot, k, 1e-12).unwrap().abs() < 1e-13);
            assert_eq!(melnikov(&AveragedFunction::default(), k), 0.0);
        }
    }

    #[test]
    fn rayleigh_melnikov_zero() {
        let h = AveragedFunction::new(vec![1.0, 3.0], vec![0.5, -0.375]).unwrap();
        assert!(melnikov(&h, 4.0 / 3.0).abs() < 1e-15);
        assert!((melnikov(&h, 2.0) - (1.0 - 1.5)).abs() < 1e-14);
    }

    #[test]
    fn fractional_fields_rejected() {
        let f = HomogeneousField::new(
            vec![SignedPowerTerm::odd_root(1.0, Exponent::new(1, 2).unwrap(), false)],
            vec![],
            Exponent::new(1, 2).unwrap(),
        )
        .unwrap();
        assert!(matches!(melnikov_line_integral(&spec(f), 1.0, 1e-12), Err(Error::Precondition(_))));
    }
}

//! Poincaré return map of the polar equation
//!
//! ```text
//! dr/dθ = ε Σ bⱼ Fⱼ(θ) r^{αⱼ} / (1 + ε Σ bⱼ Gⱼ(θ) r^{αⱼ-1})
//! ```
//!
//! integrated once around with fixed-step RK4. The four axis angles are panel
//! boundaries, so each RK4 step sees a right-hand side that is smooth in `θ`
//! except possibly at its endpoints.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{projections, Orientation, PerturbationSpec};

pub const DEFAULT_STEPS: usize = 4096;
pub const DEFAULT_GRID_POINTS: usize = 200;
pub const GUARD: (f64, f64) = (1e-4, 1e4);
pub const DEFAULT_FIXED_POINT_TOL: f64 = 1e-10;

/// Numerator and denominator of the polar quotient at one `(θ, r)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialRhs {
    pub value: f64,
    pub denominator: f64,
}

fn require_ccw(spec: &PerturbationSpec) -> Result<()> {
    match spec.orientation() {
        Orientation::Ccw => Ok(()),
        Orientation::Cw => Err(Error::Orientation("polar flow requires a ccw spec".into())),
    }
}

fn power(r: f64, alpha: f64) -> f64 {
    if alpha == 0.0 {
        1.0
    } else if alpha == 1.0 {
        r
    } else if alpha.fract() == 0.0 && alpha < 64.0 {
        r.powi(alpha as i32)
    } else {
        r.powf(alpha)
    }
}

fn quotient(theta: f64, r: f64, eps: f64, alphas: &[f64], bf: &[f64], bg: &[f64]) -> Result<RadialRhs> {
    let (mut num, mut den) = (0.0, 0.0);
    for ((&a, &f), &g) in alphas.iter().zip(bf).zip(bg) {
        let p = power(r, a);
        num += f * p;
        den += g * p;
    }
    let denominator = 1.0 + eps * den / r;
    if !(denominator > 0.0) {
        return Err(Error::DenominatorNonPositive { theta, r, denominator });
    }
    Ok(RadialRhs { value: eps * num / denominator, denominator })
}

/// The exact polar quotient at `(θ, r)` for a `ccw` spec.
pub fn radial_rhs(spec: &PerturbationSpec, theta: f64, r: f64) -> Result<RadialRhs> {
    require_ccw(spec)?;
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("r must be positive, got {r}")));
    }
    let (s, c) = theta.sin_cos();
    let (mut bf, mut bg, mut alphas) = (Vec::new(), Vec::new(), Vec::new());
    for (field, &b) in spec.fields().iter().zip(spec.b()) {
        let (f, g) = projections(field, c, s);
        bf.push(b * f);
        bg.push(b * g);
        alphas.push(field.alpha().to_f64());
    }
    quotient(theta, r, spec.epsilon(), &alphas, &bf, &bg)
}

/// Tabulated `bⱼFⱼ`, `bⱼGⱼ` at every RK4 half-step node of one resolution.
#[derive(Clone, Debug)]
pub struct PolarFlow {
    epsilon: f64,
    alphas: Vec<f64>,
    steps_per_panel: usize,
    thetas: Vec<f64>,
    // node-major: [node * fields + j]
    bf: Vec<f64>,
    bg: Vec<f64>,
    guard: (f64, f64),
}

impl PolarFlow {
    /// `steps` is rounded up to a multiple of four (one share per quadrant).
    pub fn new(spec: &PerturbationSpec, steps: usize) -> Result<Self> {
        require_ccw(spec)?;
        if steps == 0 {
            return Err(Error::InvalidArgument("steps must be positive".into()));
        }
        let per = steps.div_ceil(4);
        let nf = spec.fields().len();
        let h = FRAC_PI_2 / per as f64;
        let mut thetas = Vec::with_capacity(4 * (2 * per + 1));
        let mut bf = Vec::with_capacity(thetas.capacity() * nf);
        let mut bg = Vec::with_capacity(thetas.capacity() * nf);
        for panel in 0..4 {
            let start = panel as f64 * FRAC_PI_2;
            for k in 0..=2 * per {
                let theta = if k == 2 * per {
                    (panel + 1) as f64 * FRAC_PI_2
                } else {
                    start + 0.5 * h * k as f64
                };
                let (s, c) = theta.sin_cos();
                thetas.push(theta);
                for (field, &b) in spec.fields().iter().zip(spec.b()) {
                    let (f, g) = projections(field, c, s);
                    bf.push(b * f);
                    bg.push(b * g);
                }
            }
        }
        Ok(PolarFlow {
            epsilon: spec.epsilon(),
            alphas: spec.fields().iter().map(|f| f.alpha().to_f64()).collect(),
            steps_per_panel: per,
            thetas,
            bf,
            bg,
            guard: GUARD,
        })
    }

    pub fn with_guard(mut self, guard: (f64, f64)) -> Self {
        self.guard = guard;
        self
    }

    pub fn steps(&self) -> usize {
        4 * self.steps_per_panel
    }

    fn rhs(&self, node: usize, r: f64) -> Result<RadialRhs> {
        let nf = self.alphas.len();
        let (lo, hi) = self.guard;
        if !(r > lo && r < hi) {
            return Err(Error::GuardExceeded { r, lo, hi });
        }
        quotient(
            self.thetas[node],
            r,
            self.epsilon,
            &self.alphas,
            &self.bf[node * nf..(node + 1) * nf],
            &self.bg[node * nf..(node + 1) * nf],
        )
    }

    /// `r(2π)` from `r(0) = r0` using every `stride`-th step of the table.
    /// Returns the image and the smallest angular speed met.
    fn integrate(&self, r0: f64, stride: usize) -> Result<(f64, f64)> {
        let per = self.steps_per_panel;
        let h = FRAC_PI_2 / per as f64 * stride as f64;
        let nodes_per_panel = 2 * per + 1;
        let mut r = r0;
        let mut min_speed = f64::INFINITY;
        let (lo, hi) = self.guard;
        for panel in 0..4 {
            let base = panel * nodes_per_panel;
            let mut k = 0;
            while k < 2 * per {
                let n0 = base + k;
                let nm = n0 + stride;
                let n1 = n0 + 2 * stride;
                let k1 = self.rhs(n0, r)?;
                let k2 = self.rhs(nm, r + 0.5 * h * k1.value)?;
                let k3 = self.rhs(nm, r + 0.5 * h * k2.value)?;
                let k4 = self.rhs(n1, r + h * k3.value)?;
                min_speed = min_speed
                    .min(k1.denominator)
                    .min(k2.denominator)
                    .min(k3.denominator)
                    .min(k4.denominator);
                r += h / 6.0 * (k1.value + 2.0 * k2.value + 2.0 * k3.value + k4.value);
                if !(r > lo && r < hi) {
                    return Err(Error::GuardExceeded { r, lo, hi });
                }
                k += 2 * stride;
            }
        }
        Ok((r, min_speed))
    }

    /// `P(r0)` at full resolution only.
    pub fn image(&self, r0: f64) -> Result<f64> {
        Ok(self.integrate(r0, 1)?.0)
    }

    /// `P(r0)` with a Richardson estimate from the half-resolution pass.
    pub fn sample(&self, r0: f64) -> Result<ReturnMapSample> {
        if !(r0 > 0.0) {
            return Err(Error::InvalidArgument(format!("r0 must be positive, got {r0}")));
        }
        let (r1, min_theta_speed) = self.integrate(r0, 1)?;
        let error_estimate = if self.steps_per_panel % 2 == 0 {
            let (coarse, _) = self.integrate(r0, 2)?;
            (r1 - coarse).abs() / 15.0
        } else {
            f64::NAN
        };
        Ok(ReturnMapSample { r0, r1, min_theta_speed, steps: self.steps(), error_estimate })
    }
}

/// One revolution of the polar flow.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReturnMapSample {
    pub r0: f64,
    pub r1: f64,
    /// Smallest `dθ/dt` (in units of the unperturbed speed) along the orbit.
    pub min_theta_speed: f64,
    pub steps: usize,
    pub error_estimate: f64,
}

pub fn return_map(spec: &PerturbationSpec, r0: f64) -> Result<ReturnMapSample> {
    return_map_steps(spec, r0, DEFAULT_STEPS)
}

pub fn return_map_steps(spec: &PerturbationSpec, r0: f64, steps: usize) -> Result<ReturnMapSample> {
    PolarFlow::new(spec, steps)?.sample(r0)
}

/// A certified isolated fixed point of the return map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitCycleCertificate {
    #[serde(rename = "r")]
    pub r_star: f64,
    pub residual: f64,
    #[serde(rename = "dP")]
    pub map_derivative: f64,
    pub hyperbolic: bool,
    #[serde(rename = "eps")]
    pub epsilon: f64,
    /// Sign-change cell that isolates the fixed point.
    pub isolating: (f64, f64),
}

/// A scan cell that could not be evaluated or resolved.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellFailure {
    pub lo: f64,
    pub hi: f64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub r0: f64,
    pub r1: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPointScan {
    pub certificates: Vec<LimitCycleCertificate>,
    pub failures: Vec<CellFailure>,
    pub samples: Vec<ScanPoint>,
}

impl FixedPointScan {
    /// `r0,P(r0)` rows for plotting; failed samples are left empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r0,P\n");
        for s in &self.samples {
            match s.r1 {
                Some(r1) => out.push_str(&format!("{},{}\n", s.r0, r1)),
                None => out.push_str(&format!("{},\n", s.r0)),
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixedPointOptions {
    pub grid_points: usize,
    pub steps: usize,
    /// Central-difference step for `P'`, relative to `r*`.
    pub fd_step: f64,
}

impl Default for FixedPointOptions {
    fn default() -> Self {
        FixedPointOptions { grid_points: DEFAULT_GRID_POINTS, steps: DEFAULT_STEPS, fd_step: 1e-5 }
    }
}

pub fn find_fixed_points(
    spec: &PerturbationSpec,
    bracket: (f64, f64),
    tol: f64,
) -> Result<FixedPointScan> {
    find_fixed_points_with(spec, bracket, tol, &FixedPointOptions::default())
}

/// Scans `P(r) - r` on a log grid, bisects each sign change to width `tol`,
/// and certifies the midpoint. Cells whose samples fail are reported, not fatal.
pub fn find_fixed_points_with(
    spec: &PerturbationSpec,
    bracket: (f64, f64),
    tol: f64,
    opts: &FixedPointOptions,
) -> Result<FixedPointScan> {
    if spec.epsilon() == 0.0 {
        return Err(Error::ZeroEpsilon);
    }
    let (lo, hi) = bracket;
    if !(0.0 < lo && lo < hi && hi.is_finite()) {
        return Err(Error::InvalidArgument(format!("invalid bracket ({lo}, {hi})")));
    }
    if !(tol > 0.0) || opts.grid_points < 2 {
        return Err(Error::InvalidArgument("tolerance and grid size must be positive".into()));
    }
    let flow = PolarFlow::new(spec, opts.steps)?;
    let n = opts.grid_points;
    let ratio = (hi / lo).ln();
    let grid: Vec<f64> = (0..n)
        .map(|i| match i {
            0 => lo,
            i if i == n - 1 => hi,
            i => lo * (ratio * i as f64 / (n - 1) as f64).exp(),
        })
        .collect();
    let images: Vec<Result<f64>> = grid.par_iter().map(|&r| flow.image(r)).collect();

    let mut failures = Vec::new();
    let mut cells = Vec::new();
    for i in 0..n - 1 {
        match (&images[i], &images[i + 1]) {
            (Ok(p0), Ok(p1)) => {
                let (g0, g1) = (p0 - grid[i], p1 - grid[i + 1]);
                if g0 * g1 < 0.0 || g1 == 0.0 && i + 2 == n {
                    cells.push((grid[i], grid[i + 1], g0));
                } else if g0 == 0.0 {
                    cells.push((grid[i], grid[i], g0));
                }
            }
            (Err(e), _) | (_, Err(e)) => failures.push(CellFailure {
                lo: grid[i],
                hi: grid[i + 1],
                reason: e.to_string(),
            }),
        }
    }

    let resolved: Vec<std::result::Result<LimitCycleCertificate, CellFailure>> = cells
        .par_iter()
        .map(|&(a, b, ga)| certify(&flow, a, b, ga, tol, opts.fd_step))
        .collect();
    let mut certificates = Vec::new();
    for r in resolved {
        match r {
            Ok(c) => certificates.push(c),
            Err(f) => failures.push(f),
        }
    }
    let samples = grid
        .iter()
        .zip(&images)
        .map(|(&r0, img)| ScanPoint { r0, r1: img.as_ref().ok().copied() })
        .collect();
    Ok(FixedPointScan { certificates, failures, samples })
}

fn certify(
    flow: &PolarFlow,
    mut a: f64,
    mut b: f64,
    ga: f64,
    tol: f64,
    fd_step: f64,
) -> std::result::Result<LimitCycleCertificate, CellFailure> {
    let (a0, b0) = (a, b);
    let fail = |reason: String| CellFailure { lo: a0, hi: b0, reason };
    let g = |r: f64| flow.image(r).map(|p| p - r).map_err(|e| fail(e.to_string()));
    while b - a > tol {
        let mid = 0.5 * (a + b);
        let gm = g(mid)?;
        if gm == 0.0 {
            a = mid;
            b = mid;
            break;
        }
        if (gm > 0.0) == (ga > 0.0) {
            a = mid;
        } else {
            b = mid;
        }
    }
    let r_star = 0.5 * (a + b);
    let residual = g(r_star)?.abs();
    if residual > tol {
        return Err(fail(format!("residual {residual:e} exceeds {tol:e}")));
    }
    let step = fd_step * r_star;
    let dp = (flow.image(r_star + step).map_err(|e| fail(e.to_string()))?
        - flow.image(r_star - step).map_err(|e| fail(e.to_string()))?)
        / (2.0 * step);
    Ok(LimitCycleCertificate {
        r_star,
        residual,
        map_derivative: dp,
        hyperbolic: (dp - 1.0).abs() > 10.0 * tol,
        epsilon: flow.epsilon,
        isolating: (a0, b0),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuationRow {
    pub eps: f64,
    pub r_star: f64,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuationTable {
    pub predicted: f64,
    pub rows: Vec<ContinuationRow>,
    /// Each gap is at most 1.2 times the previous one.
    pub gaps_non_increasing: bool,
}

/// Tracks the fixed point nearest `predicted_root` as `ε` decreases.
pub fn continuation_check(
    spec_base: &PerturbationSpec,
    eps_list: &[f64],
    predicted_root: f64,
) -> Result<ContinuationTable> {
    if eps_list.is_empty()
        || eps_list.iter().any(|&e| !(e > 0.0))
        || eps_list.windows(2).any(|w| !(w[0] > w[1]))
    {
        return Err(Error::InvalidArgument("eps list must be positive and descending".into()));
    }
    if !(predicted_root > 0.0) {
        return Err(Error::InvalidArgument("predicted root must be positive".into()));
    }
    let window = 0.5 * predicted_root;
    let bracket = (predicted_root - window, predicted_root + window);
    let mut rows = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let scan = find_fixed_points(&spec_base.with_epsilon(eps), bracket, DEFAULT_FIXED_POINT_TOL)?;
        let best = scan
            .certificates
            .iter()
            .map(|c| c.r_star)
            .min_by(|x, y| (x - predicted_root).abs().total_cmp(&(y - predicted_root).abs()))
            .filter(|r| (r - predicted_root).abs() <= window)
            .ok_or(Error::NoMatch { eps, predicted: predicted_root, window })?;
        rows.push(ContinuationRow { eps, r_star: best, gap: (best - predicted_root).abs() });
    }
    let gaps_non_increasing = rows.windows(2).all(|w| w[1].gap <= 1.2 * w[0].gap);
    Ok(ContinuationTable { predicted: predicted_root, rows, gaps_non_increasing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::Exponent;
    use crate::field::{HomogeneousField, SignedPowerTerm};

    fn rayleigh(eps: f64) -> PerturbationSpec {
        let g = |c: f64, j: u32| {
            HomogeneousField::new(vec![], vec![SignedPowerTerm::monomial(c, 0, j)], Exponent::integer(j))
                .unwrap()
        };
        PerturbationSpec::new(vec![g(1.0, 1), g(-1.0, 3)], vec![1.0, 1.0], eps, Orientation::Ccw)
            .unwrap()
    }

    #[test]
    fn zero_epsilon_rhs_and_map() {
        let spec = rayleigh(0.0);
        assert_eq!(radial_rhs(&spec, 0.3, 1.7).unwrap().value, 0.0);
        for r0 in [0.01, 0.5, 3.0] {
            assert_eq!(return_map(&spec, r0).unwrap().r1, r0);
        }
        assert!(matches!(find_fixed_points(&spec, (0.3, 3.0), 1e-10), Err(Error::ZeroEpsilon)));
    }

    #[test]
    fn rhs_vanishes_at_top_of_unit_circle() {
        let rhs = radial_rhs(&rayleigh(0.01), FRAC_PI_2, 1.0).unwrap();
        assert!(rhs.value.abs() < 1e-17);
    }

    #[test]
    fn nonpositive_denominator() {
        // G ≡ -1 for the clockwise rotation field
        let rot = HomogeneousField::linear([[0.0, 1.0], [-1.0, 0.0]]);
        let spec = PerturbationSpec::new(vec![rot], vec![5.0], 1.0, Orientation::Ccw).unwrap();
        assert!(matches!(radial_rhs(&spec, 0.0, 1.0), Err(Error::DenominatorNonPositive { .. })));
        assert!(return_map(&spec, 1.0).is_err());
    }

    #[test]
    fn drift_direction() {
        let spec = rayleigh(0.01);
        let inner = return_map(&spec, 0.5).unwrap();
        assert!(inner.r1 > 0.5);
        assert!(inner.min_theta_speed > 0.0);
        assert!(inner.error_estimate < 1e-10);
        assert!(return_map(&spec, 2.0).unwrap().r1 < 2.0);
    }

    #[test]
    fn guard_aborts_runaway() {
        let spec = rayleigh(0.01);
        let flow = PolarFlow::new(&spec, 256).unwrap().with_guard((1e-4, 2.0));
        assert!(matches!(flow.sample(2.5), Err(Error::GuardExceeded { .. })));
    }

    #[test]
    fn cw_rejected() {
        let spec = PerturbationSpec::new(vec![], vec![], 0.1, Orientation::Cw).unwrap();
        assert!(matches!(return_map(&spec, 1.0), Err(Error::Orientation(_))));
    }

    #[test]
    fn rayleigh_single_cycle() {
        let scan = find_fixed_points(&rayleigh(0.01), (0.3, 3.0), 1e-10).unwrap();
        assert_eq!(scan.certificates.len(), 1);
        let c = &scan.certificates[0];
        assert!((c.r_star - 2.0 / 3f64.sqrt()).abs() <= 0.02);
        assert!(c.residual <= 1e-10);
        assert!(c.hyperbolic && c.map_derivative < 1.0);
        assert!(scan.failures.is_empty());
        assert!(scan.to_csv().starts_with("r0,P\n"));
    }

    #[test]
    fn continuation_errors() {
        let spec = rayleigh(0.01);
        assert!(continuation_check(&spec, &[0.01, 0.02], 1.15).is_err());
        assert!(continuation_check(&spec, &[], 1.15).is_err());
        let far = continuation_check(&spec, &[0.01], 20.0);
        assert!(matches!(far, Err(Error::NoMatch { .. })));
        let one = continuation_check(&spec, &[0.01], 2.0 / 3f64.sqrt()).unwrap();
        assert_eq!(one.rows.len(), 1);
        assert!(one.gaps_non_increasing);
    }
}

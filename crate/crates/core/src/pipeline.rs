//! End-to-end run: synthesize `b`, locate averaged roots, certify fixed
//! points of the return map for each `ε`, and track them as `ε` shrinks.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::averaging::{
    angular_integrals, averaged_from_integrals, positive_roots, synthesize_coefficients,
    AngularIntegral, AveragedFunction, Root, DEFAULT_BRACKET, DEFAULT_TOL,
};
use crate::error::{Error, Result};
use crate::field::PerturbationSpec;
use crate::flow::{
    continuation_check, find_fixed_points_with, ContinuationTable, FixedPointOptions, FixedPointScan,
    LimitCycleCertificate, CellFailure, DEFAULT_FIXED_POINT_TOL,
};

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineOptions {
    /// Prescribed roots of `h`; `None` keeps the given `b`.
    pub targets: Option<Vec<f64>>,
    /// Perturbation sizes to simulate, largest first.
    pub eps: Vec<f64>,
    pub tol: f64,
    /// Fixed-point search interval; derived from the roots when `None`.
    pub bracket: Option<(f64, f64)>,
    pub fixed_point_tol: f64,
    pub fixed_point: FixedPointOptions,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            targets: None,
            eps: Vec::new(),
            tol: DEFAULT_TOL,
            bracket: None,
            fixed_point_tol: DEFAULT_FIXED_POINT_TOL,
            fixed_point: FixedPointOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsRun {
    pub eps: f64,
    pub certificates: Vec<LimitCycleCertificate>,
    pub failures: Vec<CellFailure>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub b: Vec<f64>,
    pub integrals: Vec<AngularIntegral>,
    pub lower_bound: usize,
    pub h: AveragedFunction,
    pub averaged_roots: Vec<Root>,
    /// Roots of `h` with nonzero degree: the predicted number of cycles.
    pub predicted: usize,
    pub bracket: (f64, f64),
    pub runs: Vec<EpsRun>,
    pub continuation: Vec<ContinuationTable>,
    /// Every run found exactly `predicted` fixed points.
    pub count_matches: bool,
}

/// Report plus the per-`ε` return-map scans.
pub struct PipelineOutput {
    pub report: PipelineReport,
    pub scans: Vec<(f64, FixedPointScan)>,
}

/// `bⱼ = 2π cⱼ / Iⱼ` on the fields with nonzero integral; the others keep
/// their coefficient.
pub fn synthesize_b(
    spec: &PerturbationSpec,
    integrals: &[AngularIntegral],
    targets: &[f64],
) -> Result<Vec<f64>> {
    let live: Vec<&AngularIntegral> = integrals.iter().filter(|e| e.nonzero).collect();
    if live.len() != targets.len() + 1 {
        return Err(Error::InvalidArgument(format!(
            "{} nonzero integrals need {} targets, got {}",
            live.len(),
            live.len().saturating_sub(1),
            targets.len()
        )));
    }
    let betas: Vec<f64> = live.iter().map(|e| e.alpha.to_f64()).collect();
    let c = synthesize_coefficients(&betas, targets)?;
    let mut b = spec.b().to_vec();
    for (entry, cj) in live.iter().zip(c) {
        b[entry.index] = 2.0 * PI * cj / entry.value;
    }
    Ok(b)
}

fn default_bracket(roots: &[Root]) -> (f64, f64) {
    match (roots.first(), roots.last()) {
        (Some(a), Some(b)) => (0.5 * a.z, 1.5 * b.z),
        _ => (0.1, 10.0),
    }
}

pub fn run_pipeline(spec: &PerturbationSpec, opts: &PipelineOptions) -> Result<PipelineOutput> {
    if opts.eps.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
        return Err(Error::InvalidArgument("eps values must be positive".into()));
    }
    let spec = spec.normalized();
    let integrals = angular_integrals(&spec, opts.tol)?;
    let spec = match &opts.targets {
        Some(t) => spec.with_b(synthesize_b(&spec, &integrals, t)?)?,
        None => spec,
    };
    let h = averaged_from_integrals(&spec, &integrals)?;
    let scale = h.coefficients().iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let roots = positive_roots(&h, DEFAULT_BRACKET, 1e-9 * scale.max(f64::MIN_POSITIVE))?.roots;
    let predicted = roots.iter().filter(|r| r.interval_degree != 0).count();
    let bracket = opts.bracket.unwrap_or_else(|| default_bracket(&roots));

    let mut runs = Vec::new();
    let mut scans = Vec::new();
    for &eps in &opts.eps {
        let scan = find_fixed_points_with(&spec.with_epsilon(eps), bracket, opts.fixed_point_tol, &opts.fixed_point)?;
        runs.push(EpsRun { eps, certificates: scan.certificates.clone(), failures: scan.failures.clone() });
        scans.push((eps, scan));
    }
    let count_matches = runs.iter().all(|r| r.certificates.len() == predicted);

    let mut continuation = Vec::new();
    let mut eps_desc = opts.eps.clone();
    eps_desc.sort_by(|a, b| b.total_cmp(a));
    eps_desc.dedup();
    if !eps_desc.is_empty() {
        for root in roots.iter().filter(|r| r.interval_degree != 0) {
            continuation.push(continuation_check(&spec, &eps_desc, root.z)?);
        }
    }

    let lower_bound = integrals.iter().filter(|e| e.nonzero).count().saturating_sub(1);
    Ok(PipelineOutput {
        report: PipelineReport {
            b: spec.b().to_vec(),
            integrals,
            lower_bound,
            h,
            averaged_roots: roots,
            predicted,
            bracket,
            runs,
            continuation,
            count_matches,
        },
        scans,
    })
}

use super::roots::{positive_roots, DEFAULT_BRACKET};
use super::AveragedFunction;
use crate::error::{Error, Result};
use crate::linalg::{condition_1, Lu};

/// Largest accepted 1-norm condition estimate of the scaled Vandermonde system.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Coefficients `c` with `h(z) = Σ cⱼ z^{βⱼ}` vanishing exactly at `targets`.
///
/// The top coefficient is fixed to `(-1)^m` for `m` targets. Row `i` of the
/// system is divided by `zᵢ^{β_m}`, so its entries `exp((βⱼ - β_m) ln zᵢ)`
/// stay bounded however wide the target range is.
pub fn synthesize_coefficients(betas: &[f64], targets: &[f64]) -> Result<Vec<f64>> {
    if betas.is_empty() || targets.len() + 1 != betas.len() {
        return Err(Error::InvalidArgument(format!(
            "{} exponents need {} targets, got {}",
            betas.len(),
            betas.len().saturating_sub(1),
            targets.len()
        )));
    }
    if betas.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidArgument("exponents must strictly increase".into()));
    }
    if targets.iter().any(|&z| !(z > 0.0 && z.is_finite()))
        || targets.windows(2).any(|w| !(w[0] < w[1]))
    {
        return Err(Error::InvalidArgument("targets must be positive and strictly increasing".into()));
    }

    let m = targets.len();
    let top = if m % 2 == 0 { 1.0 } else { -1.0 };
    let mut coefficients = vec![0.0; m + 1];
    coefficients[m] = top;
    if m > 0 {
        let mut a = vec![0.0; m * m];
        for (i, z) in targets.iter().enumerate() {
            let ln = z.ln();
            for j in 0..m {
                a[i * m + j] = ((betas[j] - betas[m]) * ln).exp();
            }
        }
        let cond = condition_1(m, &a);
        if !(cond <= CONDITION_LIMIT) {
            return Err(Error::IllConditioned(cond));
        }
        let rhs = vec![-top; m];
        let solved = Lu::new(m, a).solve(&rhs).ok_or(Error::IllConditioned(f64::INFINITY))?;
        coefficients[..m].copy_from_slice(&solved);
    }

    verify(betas, &coefficients, targets)?;
    Ok(coefficients)
}

fn verify(betas: &[f64], coefficients: &[f64], targets: &[f64]) -> Result<()> {
    let h = AveragedFunction::new(betas.to_vec(), coefficients.to_vec())?;
    let (zmin, zmax) = match (targets.first(), targets.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => return Ok(()),
    };
    let bracket = (DEFAULT_BRACKET.0.min(zmin / 10.0), DEFAULT_BRACKET.1.max(zmax * 10.0));
    let scale = targets
        .iter()
        .map(|&z| betas.iter().zip(coefficients).map(|(b, c)| c.abs() * z.powf(*b)).sum::<f64>())
        .fold(0.0, f64::max);
    let report = positive_roots(&h, bracket, 1e-9 * scale)?;
    if report.roots.len() != targets.len() {
        return Err(Error::SynthesisVerification(format!(
            "expected {} roots, found {}",
            targets.len(),
            report.roots.len()
        )));
    }
    for (root, &z) in report.roots.iter().zip(targets) {
        if ((root.z - z) / z).abs() > 1e-9 || root.interval_degree == 0 {
            return Err(Error::SynthesisVerification(format!(
                "target {z} recovered as {} with degree {}",
                root.z, root.interval_degree
            )));
        }
    }
    Ok(())
}

//! Wronskians of the power family `z^{β₀}, …, z^{βₖ}` on `z > 0`.

use crate::error::{Error, Result};
use crate::linalg::Lu;

fn check(betas: &[f64], x: f64) -> Result<()> {
    if betas.is_empty() {
        return Err(Error::InvalidArgument("empty exponent list".into()));
    }
    if !(x > 0.0) {
        return Err(Error::InvalidArgument(format!("x must be positive, got {x}")));
    }
    for (i, a) in betas.iter().enumerate() {
        if betas[i + 1..].contains(a) {
            return Err(Error::RepeatedExponent(*a));
        }
    }
    Ok(())
}

/// `x^S · Π_{i<j} (βⱼ - βᵢ)` with `S = Σβ - k(k+1)/2`.
pub fn wronskian_closed_form(betas: &[f64], x: f64) -> Result<f64> {
    check(betas, x)?;
    let k = (betas.len() - 1) as f64;
    let s = betas.iter().sum::<f64>() - k * (k + 1.0) / 2.0;
    let mut prod = 1.0;
    for (i, bi) in betas.iter().enumerate() {
        for bj in &betas[i + 1..] {
            prod *= bj - bi;
        }
    }
    Ok(x.powf(s) * prod)
}

/// Determinant of the matrix `Mᵢⱼ = (βⱼ)ᵢ x^{βⱼ - i}` of exact derivatives,
/// `(β)ᵢ` the falling factorial.
pub fn wronskian_numeric(betas: &[f64], x: f64) -> Result<f64> {
    check(betas, x)?;
    let n = betas.len();
    let mut m = vec![0.0; n * n];
    for (j, &b) in betas.iter().enumerate() {
        let mut falling = 1.0;
        for i in 0..n {
            m[i * n + j] = falling * x.powf(b - i as f64);
            falling *= b - i as f64;
        }
    }
    Ok(Lu::new(n, m).det())
}

//! Classic Liénard systems `(ẋ, ẏ) = (y, -x + a₀y + a₁y³ + … + a_{m-3}y^{2m-5})`.

use crate::error::{Error, Result};
use crate::field::{swap_orientation, HomogeneousField, Orientation, PerturbationSpec, SignedPowerTerm};
use crate::exponent::Exponent;

/// The Liénard system with coefficients `a₀ … a_{m-3}`, as a ccw spec with
/// `ε = 1` in the swapped variables `(u, v) = (y, x)`.
///
/// Field `j` is `(0, y^{2j+1})` before the swap, so the averaged exponents
/// are `1, 3, …, 2m-5` and every angular integral is positive. Use
/// [`PerturbationSpec::with_epsilon`] to scale the perturbation.
pub fn lienard_family(m: usize, coefficients: &[f64]) -> Result<PerturbationSpec> {
    if m < 4 {
        return Err(Error::InvalidArgument(format!("Liénard family needs m >= 4, got {m}")));
    }
    if coefficients.len() != m - 2 {
        return Err(Error::InvalidArgument(format!(
            "m = {m} needs {} coefficients, got {}",
            m - 2,
            coefficients.len()
        )));
    }
    let fields = (0..m - 2)
        .map(|j| {
            let d = 2 * j as u32 + 1;
            HomogeneousField::new(vec![], vec![SignedPowerTerm::monomial(1.0, 0, d)], Exponent::integer(d))
        })
        .collect::<Result<Vec<_>>>()?;
    let cw = PerturbationSpec::new(fields, coefficients.to_vec(), 1.0, Orientation::Cw)?;
    swap_orientation(&cw)
}

/// Constructive lower bound on the number of limit cycles of `m`-monomial
/// systems: `0` for `m <= 3`, `m - 3` otherwise.
pub fn hilbert_monomial_lower_bound(m: usize) -> usize {
    m.saturating_sub(3)
}

use serde::{Deserialize, Serialize};

use super::{descartes_bound, AveragedFunction};
use crate::error::{Error, Result};

pub const DEFAULT_BRACKET: (f64, f64) = (1e-6, 1e3);
pub const DEFAULT_SCAN_POINTS: usize = 10_000;

/// A simple positive zero of `h` with its isolating interval.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub z: f64,
    #[serde(rename = "deg")]
    pub interval_degree: i8,
    #[serde(rename = "dsign")]
    pub derivative_sign: i8,
    pub interval: (f64, f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootReport {
    pub roots: Vec<Root>,
    pub descartes_bound: usize,
    pub bracket: (f64, f64),
}

fn sign(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// `(sgn h(b) - sgn h(a)) / 2`; the degree of `h` on `(a, b)`.
pub fn interval_degree(h: &AveragedFunction, a: f64, b: f64, abs_tol: f64) -> Result<i8> {
    if !(0.0 < a && a < b) {
        return Err(Error::InvalidArgument(format!("need 0 < a < b, got ({a}, {b})")));
    }
    let (ha, hb) = (h.eval(a), h.eval(b));
    if ha.abs() <= abs_tol {
        return Err(Error::EndpointZero(a));
    }
    if hb.abs() <= abs_tol {
        return Err(Error::EndpointZero(b));
    }
    Ok((sign(hb) - sign(ha)) / 2)
}

pub fn positive_roots(h: &AveragedFunction, bracket: (f64, f64), abs_tol: f64) -> Result<RootReport> {
    positive_roots_scan(h, bracket, abs_tol, DEFAULT_SCAN_POINTS)
}

/// Log-spaced sign-change scan followed by geometric bisection.
pub fn positive_roots_scan(
    h: &AveragedFunction,
    bracket: (f64, f64),
    abs_tol: f64,
    points: usize,
) -> Result<RootReport> {
    let (lo, hi) = bracket;
    if !(0.0 < lo && lo < hi && hi.is_finite()) {
        return Err(Error::InvalidArgument(format!("invalid bracket ({lo}, {hi})")));
    }
    if !(abs_tol > 0.0) {
        return Err(Error::InvalidArgument(format!("abs_tol must be positive, got {abs_tol}")));
    }
    if points < 2 {
        return Err(Error::InvalidArgument("scan needs at least two points".into()));
    }
    let bound = descartes_bound(h);
    let ratio = (hi / lo).ln();
    let grid: Vec<f64> = (0..points)
        .map(|i| match i {
            0 => lo,
            i if i == points - 1 => hi,
            i => lo * (ratio * i as f64 / (points - 1) as f64).exp(),
        })
        .collect();
    let vals: Vec<f64> = grid.iter().map(|&z| h.eval(z)).collect();

    let mut roots = Vec::new();
    for i in 0..points - 1 {
        let (sa, sb) = (sign(vals[i]), sign(vals[i + 1]));
        if sa * sb < 0 {
            let z = bisect(h, grid[i], grid[i + 1], vals[i], abs_tol)?;
            roots.push(annotate(h, z, grid[i], grid[i + 1]));
        } else if sb == 0 && i + 2 < points && sa * sign(vals[i + 2]) < 0 {
            // grid point is an exact zero with a sign change across it
            roots.push(annotate(h, grid[i + 1], grid[i], grid[i + 2]));
        }
    }
    if roots.len() > bound {
        return Err(Error::RootBoundViolated { found: roots.len(), bound });
    }
    Ok(RootReport { roots, descartes_bound: bound, bracket })
}

fn bisect(h: &AveragedFunction, mut a: f64, mut b: f64, ha: f64, abs_tol: f64) -> Result<f64> {
    let (a0, b0) = (a, b);
    let sa = sign(ha);
    for _ in 0..200 {
        let mid = (a * b).sqrt();
        if mid <= a || mid >= b {
            break;
        }
        let hm = h.eval(mid);
        if hm == 0.0 {
            return Ok(mid);
        }
        if sign(hm) == sa {
            a = mid;
        } else {
            b = mid;
        }
    }
    let z = if h.eval(a).abs() <= h.eval(b).abs() { a } else { b };
    if h.eval(z).abs() > abs_tol {
        return Err(Error::RootNotResolved { lo: a0, hi: b0, abs_tol });
    }
    Ok(z)
}

fn annotate(h: &AveragedFunction, z: f64, a: f64, b: f64) -> Root {
    let degree = (sign(h.eval(b)) - sign(h.eval(a))) / 2;
    let step = 1e-6 * z;
    let d = sign(h.eval(z + step) - h.eval(z - step));
    Root {
        z,
        interval_degree: degree,
        derivative_sign: if d == 0 { degree } else { d },
        interval: (a, b),
    }
}

//! Adaptive composite Gauss–Legendre quadrature.

use std::f64::consts::{FRAC_PI_2, PI};
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Points per panel.
pub const GL_POINTS: usize = 15;

/// Subdivision depth after which refinement gives up.
pub const DEFAULT_MAX_DEPTH: u32 = 48;

/// The axis angles where signed powers of `cos θ`, `sin θ` lose smoothness.
pub const AXIS_ANGLES: [f64; 5] = [0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2, 2.0 * PI];

struct Rule {
    nodes: [f64; GL_POINTS],
    weights: [f64; GL_POINTS],
}

fn rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_POINTS;
        let mut nodes = [0.0; GL_POINTS];
        let mut weights = [0.0; GL_POINTS];
        for i in 0..n {
            // Newton on P_n from the Chebyshev-like initial guess
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        Rule { nodes, weights }
    })
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// One Gauss–Legendre panel on `[a, b]`.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let r = rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    half * r.nodes.iter().zip(&r.weights).map(|(x, w)| w * f(mid + half * x)).sum::<f64>()
}

/// Integral with its error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Globally adaptive quadrature on `[a, b]`: see [`integrate_panels`].
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
) -> Result<Estimate> {
    integrate_panels(f, &[a, b], tol, max_depth)
}

struct Cell {
    a: f64,
    b: f64,
    left: f64,
    right: f64,
    err: f64,
    depth: u32,
}

impl Cell {
    fn new<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, depth: u32) -> Cell {
        let m = 0.5 * (a + b);
        let left = gauss_legendre(f, a, m);
        let right = gauss_legendre(f, m, b);
        Cell { a, b, left, right, err: (left + right - whole).abs(), depth }
    }
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err).is_eq()
    }
}

impl Eq for Cell {}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cell {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Upper limit on live cells before giving up.
const MAX_CELLS: usize = 1 << 20;

/// Quadrature over consecutive panels `[breaks[i], breaks[i+1]]`.
///
/// Cells are bisected in order of decreasing error estimate (whole panel vs
/// its two halves) until the summed estimate drops below `tol` or to the
/// rounding floor of the result.
pub fn integrate_panels<F: Fn(f64) -> f64>(
    f: &F,
    breaks: &[f64],
    tol: f64,
    max_depth: u32,
) -> Result<Estimate> {
    if tol <= 0.0 || !tol.is_finite() {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let mut heap = BinaryHeap::new();
    for w in breaks.windows(2) {
        heap.push(Cell::new(f, w[0], w[1], gauss_legendre(f, w[0], w[1]), 0));
    }
    loop {
        let (mut value, mut err, mut mag) = (0.0, 0.0, 0.0);
        for c in heap.iter() {
            value += c.left + c.right;
            mag += c.left.abs() + c.right.abs();
            err += c.err;
        }
        if err <= tol || err <= 4.0 * f64::EPSILON * mag {
            return Ok(Estimate { value, error: err });
        }
        // refine a batch of the worst cells before re-summing
        let batch = (heap.len() / 8).max(1);
        for _ in 0..batch {
            let Some(worst) = heap.pop() else { break };
            let m = 0.5 * (worst.a + worst.b);
            if worst.depth >= max_depth || m <= worst.a || m >= worst.b || heap.len() >= MAX_CELLS {
                return Err(Error::QuadratureFailed {
                    lo: worst.a,
                    hi: worst.b,
                    tol,
                    depth: worst.depth,
                });
            }
            heap.push(Cell::new(f, worst.a, m, worst.left, worst.depth + 1));
            heap.push(Cell::new(f, m, worst.b, worst.right, worst.depth + 1));
        }
    }
}

/// `∫₀^{2π} f(θ) dθ`, pre-split at the axis angles.
pub fn integrate_circle<F: Fn(f64) -> f64>(f: &F, tol: f64) -> Result<Estimate> {
    integrate_panels(f, &AXIS_ANGLES, tol, DEFAULT_MAX_DEPTH)
}

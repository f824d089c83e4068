//! Property checkers for non-existence certificates.
//!
//! Each checker inspects a monomial system directly (exact critical-point
//! structure, symbolic first integrals, symbolic divergence, parity of
//! exponents) and never looks at which branch of the case tree produced the
//! certificate.

use serde::{Deserialize, Serialize};

use super::symbolic::{antiderivative, FirstIntegral, Laurent};
use super::{MonomialSystem, Property};

/// One named, machine-checked precondition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, ok: bool) -> Self {
        Check { name: name.into(), ok }
    }
}

type Term = (f64, i32, i32);

fn combine(terms: &[Term]) -> Vec<Term> {
    let mut out: Vec<Term> = Vec::new();
    for &(c, a, b) in terms {
        match out.iter_mut().find(|t| t.1 == a && t.2 == b) {
            Some(t) => t.0 += c,
            None => out.push((c, a, b)),
        }
    }
    out.retain(|t| t.0 != 0.0);
    out
}

pub(super) fn xdot_terms(sys: &MonomialSystem) -> Vec<Term> {
    combine(&[(sys.a, sys.p as i32, sys.q as i32)])
}

pub(super) fn ydot_terms(sys: &MonomialSystem) -> Vec<Term> {
    combine(&[(sys.b, sys.i as i32, sys.j as i32), (sys.c, sys.k as i32, sys.l as i32)])
}

fn to_laurent(terms: &[Term]) -> Laurent {
    let mut p = Laurent::zero();
    for &(c, a, b) in terms {
        p.add_term(c, a, b);
    }
    p
}

/// Zero set of a component restricted to some region.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Zeros {
    Everywhere,
    Nowhere,
    Somewhere,
}

/// Zero set on `u ≠ 0` of `Σ c u^e`.
fn univariate_zeros(terms: &[(f64, i32)]) -> Zeros {
    let mut t: Vec<(f64, i32)> = Vec::new();
    for &(c, e) in terms {
        match t.iter_mut().find(|x| x.1 == e) {
            Some(x) => x.0 += c,
            None => t.push((c, e)),
        }
    }
    t.retain(|x| x.0 != 0.0);
    match t.as_slice() {
        [] => Zeros::Everywhere,
        [_] => Zeros::Nowhere,
        [(c1, e1), (c2, e2)] => {
            // u^{e1-e2} = -c2/c1
            if (e1 - e2).rem_euclid(2) == 1 || -c2 / c1 > 0.0 {
                Zeros::Somewhere
            } else {
                Zeros::Nowhere
            }
        }
        _ => Zeros::Somewhere,
    }
}

/// Zero set on `xy ≠ 0`.
fn bivariate_zeros(terms: &[Term]) -> Zeros {
    match terms {
        [] => Zeros::Everywhere,
        [_] => Zeros::Nowhere,
        [(c1, a1, b1), (c2, a2, b2)] => {
            let odd = (a1 - a2).rem_euclid(2) == 1 || (b1 - b2).rem_euclid(2) == 1;
            if odd || -c2 / c1 > 0.0 {
                Zeros::Somewhere
            } else {
                Zeros::Nowhere
            }
        }
        _ => Zeros::Somewhere,
    }
}

/// Conservative: `true` unless a common zero is ruled out.
fn may_intersect(a: Zeros, b: Zeros) -> bool {
    a != Zeros::Nowhere && b != Zeros::Nowhere
}

fn on_x_axis(terms: &[Term]) -> Vec<(f64, i32)> {
    terms.iter().filter(|t| t.2 == 0).map(|t| (t.0, t.1)).collect()
}

fn on_y_axis(terms: &[Term]) -> Vec<(f64, i32)> {
    terms.iter().filter(|t| t.1 == 0).map(|t| (t.0, t.2)).collect()
}

/// Where critical points may lie; `true` means "may contain some".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CriticalSet {
    pub origin: bool,
    pub x_axis: bool,
    pub y_axis: bool,
    pub off_axes: bool,
}

impl CriticalSet {
    pub fn is_empty(&self) -> bool {
        !(self.origin || self.x_axis || self.y_axis || self.off_axes)
    }

    pub fn only_origin(&self) -> bool {
        self.origin && !self.x_axis && !self.y_axis && !self.off_axes
    }
}

pub fn critical_set(sys: &MonomialSystem) -> CriticalSet {
    let (xd, yd) = (xdot_terms(sys), ydot_terms(sys));
    let at_origin = |ts: &[Term]| ts.iter().filter(|t| t.1 == 0 && t.2 == 0).map(|t| t.0).sum::<f64>() == 0.0;
    CriticalSet {
        origin: at_origin(&xd) && at_origin(&yd),
        x_axis: may_intersect(univariate_zeros(&on_x_axis(&xd)), univariate_zeros(&on_x_axis(&yd))),
        y_axis: may_intersect(univariate_zeros(&on_y_axis(&xd)), univariate_zeros(&on_y_axis(&yd))),
        off_axes: may_intersect(bivariate_zeros(&xd), bivariate_zeros(&yd)),
    }
}

/// `x = 0` is invariant: `ẋ(0, y) ≡ 0`.
pub fn x_line_invariant(sys: &MonomialSystem) -> bool {
    xdot_terms(sys).iter().all(|t| t.1 >= 1)
}

/// `y = 0` is invariant: `ẏ(x, 0) ≡ 0`.
pub fn y_line_invariant(sys: &MonomialSystem) -> bool {
    ydot_terms(sys).iter().all(|t| t.2 >= 1)
}

pub fn check_p1(sys: &MonomialSystem) -> Vec<Check> {
    vec![Check::new("no critical points", critical_set(sys).is_empty())]
}

pub fn check_p2(sys: &MonomialSystem) -> Vec<Check> {
    let cs = critical_set(sys);
    let (xi, yi) = (x_line_invariant(sys), y_line_invariant(sys));
    if xi && !cs.x_axis && !cs.off_axes {
        vec![
            Check::new("x=0 invariant", true),
            Check::new("all critical points on x=0", true),
        ]
    } else if yi && !cs.y_axis && !cs.off_axes {
        vec![
            Check::new("y=0 invariant", true),
            Check::new("all critical points on y=0", true),
        ]
    } else {
        vec![
            Check::new("x=0 invariant", xi),
            Check::new("y=0 invariant", yi),
            Check::new("all critical points on the invariant axes", !cs.off_axes),
        ]
    }
}

pub fn check_p3(sys: &MonomialSystem) -> Vec<Check> {
    let x_only = xdot_terms(sys).iter().all(|t| t.2 == 0);
    let y_only = ydot_terms(sys).iter().all(|t| t.1 == 0);
    if x_only {
        vec![Check::new("xdot depends on x alone", true)]
    } else {
        vec![Check::new("ydot depends on y alone", y_only)]
    }
}

/// First integral of `ẋ = a x^p y^q`, `ẏ = y^{j0} g(x)`, from
/// `a y^{q-j0} dy = g(x) x^{-p} dx`.
pub fn separable_first_integral(sys: &MonomialSystem) -> Option<FirstIntegral> {
    let xd = xdot_terms(sys);
    let yd = ydot_terms(sys);
    let &[(a, p, q)] = xd.as_slice() else { return None };
    let j0 = yd.first()?.2;
    if yd.iter().any(|t| t.2 != j0) {
        return None;
    }
    let mut h = FirstIntegral::default();
    let (cy, ey, ly) = antiderivative(a, q - j0);
    h.poly.add_term(cy, 0, ey);
    h.log_y += ly;
    for &(c, e, _) in &yd {
        let (cx, ex, lx) = antiderivative(c, e - p);
        h.poly.add_term(-cx, ex, 0);
        h.log_x -= lx;
    }
    Some(h)
}

pub fn check_p4(sys: &MonomialSystem) -> (Vec<Check>, Option<FirstIntegral>) {
    let Some(h) = separable_first_integral(sys) else {
        return (vec![Check::new("separable first integral exists", false)], None);
    };
    let (xd, yd) = (to_laurent(&xdot_terms(sys)), to_laurent(&ydot_terms(sys)));
    let lie = h.d_dx().mul(&xd).add(&h.d_dy().mul(&yd));
    let mut checks = vec![
        Check::new("grad H . X == 0 symbolically", lie.is_zero()),
        Check::new("H non-constant", !h.is_constant()),
    ];
    if h.singular_on_x_axis_line() {
        checks.push(Check::new("H smooth off x=0 and x=0 invariant", x_line_invariant(sys)));
    }
    if h.singular_on_y_axis_line() {
        checks.push(Check::new("H smooth off y=0 and y=0 invariant", y_line_invariant(sys)));
    }
    (checks, Some(h))
}

pub fn divergence(sys: &MonomialSystem) -> Laurent {
    to_laurent(&xdot_terms(sys)).d_dx().add(&to_laurent(&ydot_terms(sys)).d_dy())
}

pub fn check_p5(sys: &MonomialSystem) -> (Vec<Check>, Laurent) {
    let div = divergence(sys);
    let terms = div.terms();
    let single = terms.len() == 1;
    let even = single && terms[0].1 % 2 == 0 && terms[0].2 % 2 == 0 && terms[0].1 >= 0 && terms[0].2 >= 0;
    (
        vec![
            Check::new("divergence is a single monomial", single),
            Check::new("divergence exponents even (single-signed, zero only on xy=0)", even),
        ],
        div,
    )
}

/// `(x, y, t) -> (x, -y, -t)`: `ẋ` odd and `ẏ` even in `y`.
pub fn reversible_in_y(sys: &MonomialSystem) -> bool {
    xdot_terms(sys).iter().all(|t| t.2 % 2 == 1) && ydot_terms(sys).iter().all(|t| t.2 % 2 == 0)
}

/// `(x, y, t) -> (-x, y, -t)`: `ẋ` even and `ẏ` odd in `x`.
pub fn reversible_in_x(sys: &MonomialSystem) -> bool {
    xdot_terms(sys).iter().all(|t| t.1 % 2 == 0) && ydot_terms(sys).iter().all(|t| t.1 % 2 == 1)
}

pub fn check_p6(sys: &MonomialSystem) -> Vec<Check> {
    let unique = critical_set(sys).only_origin();
    let mut checks = vec![Check::new("unique critical point (0,0)", unique)];
    if reversible_in_y(sys) {
        checks.push(Check::new("reversible under (x,-y,-t)", true));
    } else {
        checks.push(Check::new("reversible under (-x,y,-t)", reversible_in_x(sys)));
    }
    checks
}

/// Sign of a component along a half-axis, when constant.
fn half_axis_sign(terms: &[(f64, i32)], positive: bool) -> Option<i8> {
    match terms {
        [] => Some(0),
        [(c, e)] => {
            let s = if positive || e % 2 == 0 { c.signum() } else { -c.signum() };
            Some(s as i8)
        }
        _ => None,
    }
}

pub fn check_axis_sign(sys: &MonomialSystem) -> Vec<Check> {
    let unique = critical_set(sys).only_origin();
    let (xd, yd) = (xdot_terms(sys), ydot_terms(sys));
    let pattern = (
        half_axis_sign(&on_x_axis(&yd), true),
        half_axis_sign(&on_x_axis(&yd), false),
        half_axis_sign(&on_y_axis(&xd), true),
        half_axis_sign(&on_y_axis(&xd), false),
    );
    let obstructed = match pattern {
        (Some(a), Some(b), Some(c), Some(d)) => {
            let ccw = (a, b, c, d) == (1, -1, -1, 1);
            let cw = (a, b, c, d) == (-1, 1, 1, -1);
            !(ccw || cw)
        }
        _ => false,
    };
    vec![
        Check::new("unique critical point (0,0)", unique),
        Check::new("axis signs admit no rotation about the origin", obstructed),
    ]
}

/// Checks for `property` on `sys`, plus any first integral or divergence used.
pub fn check_property(
    property: Property,
    sys: &MonomialSystem,
) -> (Vec<Check>, Option<FirstIntegral>, Option<Laurent>) {
    match property {
        Property::P1 => (check_p1(sys), None, None),
        Property::P2 => (check_p2(sys), None, None),
        Property::P3 => (check_p3(sys), None, None),
        Property::P4 => {
            let (c, h) = check_p4(sys);
            (c, h, None)
        }
        Property::P5 => {
            let (c, d) = check_p5(sys);
            (c, None, Some(d))
        }
        Property::P6 => (check_p6(sys), None, None),
        Property::AxisSign => (check_axis_sign(sys), None, None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(a: f64, p: u32, q: u32, b: f64, i: u32, j: u32, c: f64, k: u32, l: u32) -> MonomialSystem {
        MonomialSystem { a, b, c, p, q, i, j, k, l }
    }

    #[test]
    fn harmonic_center() {
        let s = sys(1.0, 0, 1, -1.0, 1, 0, 0.0, 0, 0);
        assert!(critical_set(&s).only_origin());
        let (checks, h) = check_p4(&s);
        assert!(checks.iter().all(|c| c.ok), "{checks:?}");
        assert!(!h.unwrap().singular_on_x_axis_line());
        assert!(reversible_in_y(&s) && reversible_in_x(&s));
        assert!(!check_axis_sign(&s)[1].ok);
    }

    #[test]
    fn constant_field_has_no_critical_points() {
        let s = sys(1.0, 0, 0, 1.0, 1, 0, 1.0, 2, 1);
        assert!(critical_set(&s).is_empty());
    }

    #[test]
    fn two_term_axis_zero() {
        // ẏ(x, 0) = x - x³ vanishes at x = ±1
        let s = sys(1.0, 0, 1, 1.0, 1, 0, -1.0, 3, 0);
        assert!(critical_set(&s).x_axis);
        // x + x³ does not
        let s = sys(1.0, 0, 1, 1.0, 1, 0, 1.0, 3, 0);
        assert!(!critical_set(&s).x_axis);
    }

    #[test]
    fn divergence_single_signed() {
        let s = sys(1.0, 0, 1, -1.0, 1, 0, 1.0, 2, 1);
        let (checks, div) = check_p5(&s);
        assert!(checks.iter().all(|c| c.ok));
        assert_eq!(div.terms(), vec![(1.0, 2, 0)]);
    }

    #[test]
    fn log_first_integral() {
        // ẋ = x y, ẏ = 1 + x: a y dy = (1 + x)/x dx
        let s = sys(1.0, 1, 1, 1.0, 0, 0, 1.0, 1, 0);
        let (checks, h) = check_p4(&s);
        assert!(checks.iter().all(|c| c.ok), "{checks:?}");
        assert!(h.unwrap().singular_on_x_axis_line());
    }
}

//! Non-existence of limit cycles for `(ẋ, ẏ) = (a xᵖ yᑫ, b xⁱ yʲ + c xᵏ yˡ)`.
//!
//! [`classify`] walks a fixed case tree (trivial cases, common-factor
//! reduction, then five normal forms) and emits a [`NoCycleCertificate`].
//! Every certificate is re-checked by [`verify_certificate`], which replays
//! the trace and tests the cited property directly on the reduced system.

pub mod checks;
pub mod symbolic;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use checks::{check_property, critical_set, Check, CriticalSet};
pub use symbolic::{FirstIntegral, Laurent};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonomialSystem {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub p: u32,
    pub q: u32,
    pub i: u32,
    pub j: u32,
    pub k: u32,
    pub l: u32,
}

impl MonomialSystem {
    #[allow(clippy::too_many_arguments)]
    pub fn new(a: f64, p: u32, q: u32, b: f64, i: u32, j: u32, c: f64, k: u32, l: u32) -> Self {
        MonomialSystem { a, b, c, p, q, i, j, k, l }
    }

    pub fn eval(&self, x: f64, y: f64) -> (f64, f64) {
        let m = |c: f64, e: u32, f: u32| if c == 0.0 { 0.0 } else { c * x.powi(e as i32) * y.powi(f as i32) };
        (m(self.a, self.p, self.q), m(self.b, self.i, self.j) + m(self.c, self.k, self.l))
    }

    fn validate(&self) -> Result<()> {
        if [self.a, self.b, self.c].iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::InvalidArgument("coefficients must be finite".into()))
        }
    }
}

impl fmt::Display for MonomialSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} x^{} y^{}, {} x^{} y^{} + {} x^{} y^{})",
            self.a, self.p, self.q, self.b, self.i, self.j, self.c, self.k, self.l
        )
    }
}

/// Which non-existence argument a certificate relies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Property {
    /// No critical points.
    P1,
    /// An invariant line through every critical point.
    P2,
    /// One equation involves a single variable.
    P3,
    /// A smooth first integral, with any singular axis invariant.
    P4,
    /// Single-signed divergence vanishing on a null set.
    P5,
    /// Reversible with a unique critical point.
    P6,
    /// Axis signs forbid any orbit winding around the origin.
    #[serde(rename = "axis-sign")]
    AxisSign,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Property::P1 => "P1",
            Property::P2 => "P2",
            Property::P3 => "P3",
            Property::P4 => "P4",
            Property::P5 => "P5",
            Property::P6 => "P6",
            Property::AxisSign => "axis-sign",
        };
        f.write_str(s)
    }
}

/// One transformation applied on the way to the reduced system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum TraceStep {
    /// Coinciding `ẏ` monomials combined into the first.
    MergeLikeTerms,
    /// `t -> -t`, making `a > 0`.
    TimeReversal,
    /// Exchange the two `ẏ` monomials.
    SwapYTerms,
    /// Divide the field by `x^s`.
    DivideX(u32),
    /// Divide the field by `y^u`.
    DivideY(u32),
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceStep::MergeLikeTerms => f.write_str("merge like terms"),
            TraceStep::TimeReversal => f.write_str("t->-t"),
            TraceStep::SwapYTerms => f.write_str("swap y-terms"),
            TraceStep::DivideX(s) => write!(f, "R=x^{s}"),
            TraceStep::DivideY(u) => write!(f, "R=y^{u}"),
        }
    }
}

impl FromStr for TraceStep {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("unknown trace step {s:?}"));
        match s {
            "merge like terms" => Ok(TraceStep::MergeLikeTerms),
            "t->-t" => Ok(TraceStep::TimeReversal),
            "swap y-terms" => Ok(TraceStep::SwapYTerms),
            _ => {
                if let Some(n) = s.strip_prefix("R=x^") {
                    n.parse().map(TraceStep::DivideX).map_err(|_| bad())
                } else if let Some(n) = s.strip_prefix("R=y^") {
                    n.parse().map(TraceStep::DivideY).map_err(|_| bad())
                } else {
                    Err(bad())
                }
            }
        }
    }
}

impl From<TraceStep> for String {
    fn from(t: TraceStep) -> String {
        t.to_string()
    }
}

impl TryFrom<String> for TraceStep {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl TraceStep {
    fn apply(self, s: &MonomialSystem) -> Option<MonomialSystem> {
        let mut t = *s;
        match self {
            TraceStep::MergeLikeTerms => {
                if s.i != s.k || s.j != s.l {
                    return None;
                }
                t.b += t.c;
                t.c = 0.0;
            }
            TraceStep::TimeReversal => {
                t.a = -t.a;
                t.b = -t.b;
                t.c = -t.c;
            }
            TraceStep::SwapYTerms => {
                (t.b, t.i, t.j, t.c, t.k, t.l) = (s.c, s.k, s.l, s.b, s.i, s.j);
            }
            TraceStep::DivideX(n) => {
                t.p = s.p.checked_sub(n)?;
                t.i = s.i.checked_sub(n)?;
                t.k = s.k.checked_sub(n)?;
            }
            TraceStep::DivideY(n) => {
                t.q = s.q.checked_sub(n)?;
                t.j = s.j.checked_sub(n)?;
                t.l = s.l.checked_sub(n)?;
            }
        }
        Some(t)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoCycleCertificate {
    pub property: Property,
    #[serde(rename = "case")]
    pub case_label: String,
    #[serde(rename = "trace")]
    pub reduction_trace: Vec<TraceStep>,
    #[serde(rename = "checks")]
    pub precondition_checks: Vec<Check>,
    pub input: MonomialSystem,
    pub reduced: MonomialSystem,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_integral: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divergence: Option<String>,
}

impl NoCycleCertificate {
    pub fn all_passed(&self) -> bool {
        self.precondition_checks.iter().all(|c| c.ok)
    }
}

/// Divide out `x^s`, `s = min(p, i, k)`, then `y^u`, `u = min(q, j, l)`.
///
/// Only nonzero removals appear in the trace.
pub fn reduce_common_factor(sys: &MonomialSystem) -> Result<(MonomialSystem, Vec<TraceStep>)> {
    if sys.a == 0.0 || sys.b == 0.0 || sys.c == 0.0 {
        return Err(Error::Precondition(format!("reduction needs abc != 0, got {sys}")));
    }
    let mut out = *sys;
    let mut trace = Vec::new();
    let s = sys.p.min(sys.i).min(sys.k);
    if s > 0 {
        let step = TraceStep::DivideX(s);
        out = step.apply(&out).expect("s is the minimum");
        trace.push(step);
    }
    let u = out.q.min(out.j).min(out.l);
    if u > 0 {
        let step = TraceStep::DivideY(u);
        out = step.apply(&out).expect("u is the minimum");
        trace.push(step);
    }
    Ok((out, trace))
}

struct Walk {
    sys: MonomialSystem,
    trace: Vec<TraceStep>,
    structural: Vec<Check>,
}

impl Walk {
    fn step(&mut self, step: TraceStep) {
        self.sys = step.apply(&self.sys).expect("case tree applies valid steps");
        self.trace.push(step);
    }

    fn require(&mut self, name: &str, ok: bool) {
        self.structural.push(Check::new(name, ok));
    }
}

fn odd(n: u32) -> bool {
    n % 2 == 1
}

/// Walk the case tree and return the property, case label and final system.
fn walk(input: &MonomialSystem) -> (Property, String, Walk) {
    let mut w = Walk { sys: *input, trace: Vec::new(), structural: Vec::new() };

    if w.sys.c != 0.0 && w.sys.i == w.sys.k && w.sys.j == w.sys.l {
        w.step(TraceStep::MergeLikeTerms);
    }
    if w.sys.a == 0.0 {
        w.require("a = 0", true);
        return (Property::P3, "a=0".into(), w);
    }
    if w.sys.a < 0.0 {
        w.step(TraceStep::TimeReversal);
    }
    if w.sys.b == 0.0 && w.sys.c == 0.0 {
        w.require("b = c = 0", true);
        return (Property::P3, "bc=0-trivial".into(), w);
    }
    if w.sys.c != 0.0 && w.sys.b == 0.0 {
        w.step(TraceStep::SwapYTerms);
    }
    if w.sys.c == 0.0 {
        let s = w.sys;
        if s.p == 0 && s.j == 0 {
            w.require("system is (a y^q, b x^i)", true);
            return (Property::P4, "bc=0-integrable".into(), w);
        }
        w.require("p >= 1 or j >= 1", true);
        return (Property::P2, "bc=0-line".into(), w);
    }

    let (reduced, steps) = reduce_common_factor(&w.sys).expect("abc != 0 here");
    w.sys = reduced;
    w.trace.extend(steps);
    if w.sys.i > w.sys.k {
        w.step(TraceStep::SwapYTerms);
    }
    let s = w.sys;
    w.require("min(p, i, k) = 0 and min(q, j, l) = 0", s.p.min(s.i).min(s.k) == 0 && s.q.min(s.j).min(s.l) == 0);
    w.require("i <= k", s.i <= s.k);

    if s.i >= 1 {
        // (a y^q, b x^i y^j + c x^k y^l), i >= 1
        w.require("p = 0", s.p == 0);
        if s.q == 0 {
            w.require("system is (a, b x^i y^j + c x^k y^l), i >= 1", true);
            return (Property::P1, "(i)".into(), w);
        }
        if s.j != 0 {
            w.step(TraceStep::SwapYTerms);
        }
        return case_ii(w, "(ii)");
    }

    // (a x^p y^q, b y^j + c x^k y^l)
    if s.q == 0 {
        w.require("q = 0", true);
        return (Property::P3, "(iii)".into(), w);
    }
    if s.j == 0 {
        // (iv): (a x^p y^q, b + c x^k y^l)
        if s.p * s.q * s.k * s.l != 0 {
            w.require("pqkl != 0", true);
            return (Property::P1, "(iv)-no-critical".into(), w);
        }
        if s.p == 0 && s.q == 0 {
            w.require("p = q = 0", true);
            return (Property::P1, "(iv)-no-critical".into(), w);
        }
        if s.p == 0 {
            if s.l != 0 {
                w.require("p = 0 and l != 0", true);
                return (Property::P1, "(iv)-no-critical".into(), w);
            }
            w.require("p = 0 and l = 0", true);
            return (Property::P4, "(iv)-integrable".into(), w);
        }
        if s.k == 0 {
            w.require("k = 0", true);
            return (Property::P3, "(iv)-one-dimensional".into(), w);
        }
        w.require("l = 0 and p != 0", s.l == 0);
        return (Property::P4, "(iv)-separable".into(), w);
    }
    // (v): (a x^p y^q, b y^j + c x^k), q != 0
    w.require("l = 0", s.l == 0);
    match (s.p == 0, s.j == 0) {
        (true, true) => {
            w.require("p = 0 and j = 0", true);
            (Property::P4, "(v)-integrable".into(), w)
        }
        (true, false) => {
            if s.k == 0 {
                w.require("k = 0", true);
                return (Property::P3, "(v)-one-dimensional".into(), w);
            }
            w.step(TraceStep::SwapYTerms);
            case_ii(w, "(v)-as-(ii)")
        }
        (false, true) => {
            w.require("p != 0 and j = 0", true);
            (Property::P4, "(v)-separable".into(), w)
        }
        (false, false) => {
            w.require("p != 0 and j != 0", true);
            (Property::P2, "(v)-invariant-line".into(), w)
        }
    }
}

/// `(a y^q, b x^i + c x^k y^l)` with `i, q >= 1`.
fn case_ii(mut w: Walk, prefix: &str) -> (Property, String, Walk) {
    let s = w.sys;
    w.require("p = 0 and j = 0", s.p == 0 && s.j == 0);
    w.require("i >= 1, q >= 1", s.i >= 1 && s.q >= 1);
    if s.l == 0 {
        w.require("l = 0", true);
        return (Property::P4, format!("{prefix}-integrable"), w);
    }
    w.require("i >= 1, q >= 1, l >= 1", true);
    if !(odd(s.q) && odd(s.i) && s.a * s.b < 0.0) {
        w.require("q or i even, or ab > 0", true);
        return (Property::AxisSign, format!("{prefix}-parity"), w);
    }
    w.require("q and i odd and ab < 0", true);
    if !odd(s.l) || odd(s.k) {
        w.require("l even or k odd", true);
        return (Property::P6, format!("{prefix}-reversible"), w);
    }
    w.require("l odd and k even", true);
    (Property::P5, format!("{prefix}-divergence"), w)
}

/// Independent re-check of a certificate against its input system.
pub fn verify_certificate(input: &MonomialSystem, cert: &NoCycleCertificate) -> Vec<Check> {
    let mut out = Vec::new();
    let mut cur = Some(*input);
    for step in &cert.reduction_trace {
        let Some(before) = cur else { break };
        match *step {
            TraceStep::DivideX(n) => {
                let min = before.p.min(before.i).min(before.k);
                let full = before.a != 0.0 && before.b != 0.0 && before.c != 0.0;
                out.push(Check::new(format!("R=x^{n}: exponent is min(p,i,k)"), full && n == min && n > 0));
                out.push(Check::new(format!("R=x^{n}: x=0 is a line of critical points"), n > 0 && min >= n));
            }
            TraceStep::DivideY(n) => {
                let min = before.q.min(before.j).min(before.l);
                let full = before.a != 0.0 && before.b != 0.0 && before.c != 0.0;
                out.push(Check::new(format!("R=y^{n}: exponent is min(q,j,l)"), full && n == min && n > 0));
                out.push(Check::new(format!("R=y^{n}: y=0 is a line of critical points"), n > 0 && min >= n));
            }
            _ => {}
        }
        cur = step.apply(&before);
    }
    out.push(Check::new("trace replays to the reduced system", cur == Some(cert.reduced)));
    let (checks, _, _) = check_property(cert.property, &cert.reduced);
    out.extend(checks);
    out
}

/// Certificate that `sys` has no limit cycle.
///
/// Fails with [`Error::UnreachableBranch`] if any structural or
/// independent check does not pass.
pub fn classify(sys: &MonomialSystem) -> Result<NoCycleCertificate> {
    sys.validate()?;
    let (property, case_label, w) = walk(sys);
    let (_, first_integral, divergence) = check_property(property, &w.sys);
    let mut cert = NoCycleCertificate {
        property,
        case_label,
        reduction_trace: w.trace,
        precondition_checks: w.structural,
        input: *sys,
        reduced: w.sys,
        first_integral: first_integral.map(|h| h.to_string()),
        divergence: divergence.map(|d| d.to_string()),
    };
    let verified = verify_certificate(sys, &cert);
    cert.precondition_checks.extend(verified);
    if let Some(bad) = cert.precondition_checks.iter().find(|c| !c.ok) {
        return Err(Error::UnreachableBranch(format!(
            "{sys}: case {} ({}) failed check {:?}",
            cert.case_label, cert.property, bad.name
        )));
    }
    Ok(cert)
}

/// Outcome of classifying every system on a small grid.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub max_exp: u32,
    pub total: usize,
    pub by_property: BTreeMap<String, usize>,
    pub by_case: BTreeMap<String, usize>,
    pub failures: Vec<String>,
}

/// Every system with exponents `<= max_exp` and coefficients in `{-1, 0, 1}`.
pub fn scan_grid(max_exp: u32) -> Vec<MonomialSystem> {
    let n = max_exp + 1;
    let coef = [-1.0, 0.0, 1.0];
    let mut out = Vec::with_capacity((n as usize).pow(6) * 27);
    for code in 0..n.pow(6) {
        let mut e = [0u32; 6];
        let mut r = code;
        for slot in e.iter_mut() {
            *slot = r % n;
            r /= n;
        }
        for &a in &coef {
            for &b in &coef {
                for &c in &coef {
                    out.push(MonomialSystem::new(a, e[0], e[1], b, e[2], e[3], c, e[4], e[5]));
                }
            }
        }
    }
    out
}

/// Classify the whole grid of [`scan_grid`] in parallel.
pub fn scan(max_exp: u32) -> ScanSummary {
    let results: Vec<Result<NoCycleCertificate>> = scan_grid(max_exp).par_iter().map(classify).collect();
    let mut summary = ScanSummary { max_exp, total: results.len(), ..Default::default() };
    for r in results {
        match r {
            Ok(cert) => {
                *summary.by_property.entry(cert.property.to_string()).or_default() += 1;
                *summary.by_case.entry(cert.case_label).or_default() += 1;
            }
            Err(e) => summary.failures.push(e.to_string()),
        }
    }
    summary
}

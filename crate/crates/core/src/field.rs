//! Continuous homogeneous vector fields built from signed power monomials.
//!
//! A term is `c · p(x, a, sx) · p(y, b, sy)` where `p(u, a, true) = sgn(u)|u|^a`
//! and `p(u, a, false) = |u|^a`. Sums of such terms with a common total degree
//! give homogeneous fields that are continuous everywhere but generally only
//! Hölder on the axes `xy = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::{signed_power, Exponent};

/// One monomial `c · p(x, px, sx) · p(y, py, sy)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTerm", into = "RawTerm")]
pub struct SignedPowerTerm {
    coeff: f64,
    x_exp: Exponent,
    y_exp: Exponent,
    x_signed: bool,
    y_signed: bool,
}

#[derive(Serialize, Deserialize)]
struct RawTerm {
    c: f64,
    px: Exponent,
    py: Exponent,
    sx: bool,
    sy: bool,
}

impl TryFrom<RawTerm> for SignedPowerTerm {
    type Error = Error;
    fn try_from(r: RawTerm) -> Result<Self> {
        SignedPowerTerm::new(r.c, r.px, r.sx, r.py, r.sy)
    }
}

impl From<SignedPowerTerm> for RawTerm {
    fn from(t: SignedPowerTerm) -> Self {
        RawTerm { c: t.coeff, px: t.x_exp, py: t.y_exp, sx: t.x_signed, sy: t.y_signed }
    }
}

impl SignedPowerTerm {
    /// Rejects non-finite coefficients and `sgn(u)` factors with a zero
    /// exponent, which would be discontinuous.
    pub fn new(
        coeff: f64,
        x_exp: Exponent,
        x_signed: bool,
        y_exp: Exponent,
        y_signed: bool,
    ) -> Result<Self> {
        if !coeff.is_finite() {
            return Err(Error::InvalidTerm(format!("non-finite coefficient {coeff}")));
        }
        if (x_exp.is_zero() && x_signed) || (y_exp.is_zero() && y_signed) {
            return Err(Error::InvalidTerm(
                "signed factor with zero exponent is discontinuous".into(),
            ));
        }
        Ok(SignedPowerTerm { coeff, x_exp, y_exp, x_signed, y_signed })
    }

    /// The ordinary monomial `c xⁱ yʲ`.
    pub fn monomial(coeff: f64, i: u32, j: u32) -> Self {
        SignedPowerTerm {
            coeff,
            x_exp: Exponent::integer(i),
            y_exp: Exponent::integer(j),
            x_signed: i % 2 == 1,
            y_signed: j % 2 == 1,
        }
    }

    /// `c · sgn(x)|x|^a` (pass `y = true` for the same in `y`).
    pub fn odd_root(coeff: f64, exp: Exponent, in_y: bool) -> Self {
        if in_y {
            SignedPowerTerm::new(coeff, Exponent::ZERO, false, exp, true).expect("valid term")
        } else {
            SignedPowerTerm::new(coeff, exp, true, Exponent::ZERO, false).expect("valid term")
        }
    }

    pub fn coeff(&self) -> f64 {
        self.coeff
    }

    pub fn x_exp(&self) -> Exponent {
        self.x_exp
    }

    pub fn y_exp(&self) -> Exponent {
        self.y_exp
    }

    pub fn x_signed(&self) -> bool {
        self.x_signed
    }

    pub fn y_signed(&self) -> bool {
        self.y_signed
    }

    pub fn degree(&self) -> Exponent {
        self.x_exp + self.y_exp
    }

    pub fn is_smooth(&self) -> bool {
        self.x_exp.is_integer()
            && self.y_exp.is_integer()
            && self.x_signed == (self.x_exp.numer() % 2 == 1)
            && self.y_signed == (self.y_exp.numer() % 2 == 1)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        SignedPowerTerm { coeff: self.coeff * factor, ..self.clone() }
    }

    /// The same term with the roles of `x` and `y` exchanged.
    pub fn swapped(&self) -> Self {
        SignedPowerTerm {
            coeff: self.coeff,
            x_exp: self.y_exp,
            y_exp: self.x_exp,
            x_signed: self.y_signed,
            y_signed: self.x_signed,
        }
    }
}

pub fn eval_term(t: &SignedPowerTerm, x: f64, y: f64) -> f64 {
    t.coeff * signed_power(x, t.x_exp, t.x_signed) * signed_power(y, t.y_exp, t.y_signed)
}

/// A homogeneous field `(f, g)` of degree `alpha`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawField", into = "RawField")]
pub struct HomogeneousField {
    f_terms: Vec<SignedPowerTerm>,
    g_terms: Vec<SignedPowerTerm>,
    alpha: Exponent,
}

#[derive(Serialize, Deserialize)]
struct RawField {
    alpha: Exponent,
    f: Vec<SignedPowerTerm>,
    g: Vec<SignedPowerTerm>,
}

impl TryFrom<RawField> for HomogeneousField {
    type Error = Error;
    fn try_from(r: RawField) -> Result<Self> {
        HomogeneousField::new(r.f, r.g, r.alpha)
    }
}

impl From<HomogeneousField> for RawField {
    fn from(h: HomogeneousField) -> Self {
        RawField { alpha: h.alpha, f: h.f_terms, g: h.g_terms }
    }
}

impl HomogeneousField {
    pub fn new(
        f_terms: Vec<SignedPowerTerm>,
        g_terms: Vec<SignedPowerTerm>,
        alpha: Exponent,
    ) -> Result<Self> {
        for t in f_terms.iter().chain(&g_terms) {
            if t.degree() != alpha {
                return Err(Error::InvalidField(format!(
                    "term of degree {} in field of degree {alpha}",
                    t.degree()
                )));
            }
        }
        Ok(HomogeneousField { f_terms, g_terms, alpha })
    }

    /// The linear field `(p11 x + p12 y, p21 x + p22 y)`.
    pub fn linear(p: [[f64; 2]; 2]) -> Self {
        let m = SignedPowerTerm::monomial;
        HomogeneousField {
            f_terms: vec![m(p[0][0], 1, 0), m(p[0][1], 0, 1)],
            g_terms: vec![m(p[1][0], 1, 0), m(p[1][1], 0, 1)],
            alpha: Exponent::ONE,
        }
    }

    /// The constant field `(s1, s2)`.
    pub fn constant(s1: f64, s2: f64) -> Self {
        HomogeneousField {
            f_terms: vec![SignedPowerTerm::monomial(s1, 0, 0)],
            g_terms: vec![SignedPowerTerm::monomial(s2, 0, 0)],
            alpha: Exponent::ZERO,
        }
    }

    pub fn f_terms(&self) -> &[SignedPowerTerm] {
        &self.f_terms
    }

    pub fn g_terms(&self) -> &[SignedPowerTerm] {
        &self.g_terms
    }

    pub fn alpha(&self) -> Exponent {
        self.alpha
    }

    pub fn is_smooth(&self) -> bool {
        self.f_terms.iter().chain(&self.g_terms).all(SignedPowerTerm::is_smooth)
    }

    /// Coordinate swap `(x, y) -> (y, x)`: components and term variables exchange.
    pub fn swapped(&self) -> Self {
        HomogeneousField {
            f_terms: self.g_terms.iter().map(SignedPowerTerm::swapped).collect(),
            g_terms: self.f_terms.iter().map(SignedPowerTerm::swapped).collect(),
            alpha: self.alpha,
        }
    }
}

pub fn eval_field(field: &HomogeneousField, x: f64, y: f64) -> (f64, f64) {
    let sum = |ts: &[SignedPowerTerm]| ts.iter().map(|t| eval_term(t, x, y)).sum::<f64>();
    (sum(&field.f_terms), sum(&field.g_terms))
}

/// Radial and angular projections on the unit circle:
/// `F = f cos + g sin`, `G = g cos - f sin` at `(cos θ, sin θ)`.
pub fn angular_components(field: &HomogeneousField, theta: f64) -> (f64, f64) {
    let (s, c) = theta.sin_cos();
    projections(field, c, s)
}

pub(crate) fn projections(field: &HomogeneousField, c: f64, s: f64) -> (f64, f64) {
    let (f, g) = eval_field(field, c, s);
    (f * c + g * s, g * c - f * s)
}

/// Max-norm of `X(r x, r y) - r^α X(x, y)`.
pub fn homogeneity_residual(field: &HomogeneousField, r: f64, x: f64, y: f64) -> f64 {
    let (f1, g1) = eval_field(field, r * x, r * y);
    let (f0, g0) = eval_field(field, x, y);
    let scale = r.powf(field.alpha.to_f64());
    (f1 - scale * f0).abs().max((g1 - scale * g0).abs())
}

/// Rotation sense of the unperturbed linear center.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// `(-y, x)`
    Ccw,
    /// `(y, -x)`
    Cw,
}

/// `(ẋ, ẏ) = center + ε Σ bⱼ Xⱼ(x, y)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct PerturbationSpec {
    fields: Vec<HomogeneousField>,
    b: Vec<f64>,
    epsilon: f64,
    orientation: Orientation,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    orientation: Orientation,
    epsilon: f64,
    b: Vec<f64>,
    fields: Vec<HomogeneousField>,
}

impl TryFrom<RawSpec> for PerturbationSpec {
    type Error = Error;
    fn try_from(r: RawSpec) -> Result<Self> {
        PerturbationSpec::new(r.fields, r.b, r.epsilon, r.orientation)
    }
}

impl From<PerturbationSpec> for RawSpec {
    fn from(s: PerturbationSpec) -> Self {
        RawSpec { orientation: s.orientation, epsilon: s.epsilon, b: s.b, fields: s.fields }
    }
}

impl PerturbationSpec {
    pub fn new(
        fields: Vec<HomogeneousField>,
        b: Vec<f64>,
        epsilon: f64,
        orientation: Orientation,
    ) -> Result<Self> {
        if fields.len() != b.len() {
            return Err(Error::InvalidSpec(format!(
                "{} fields but {} coefficients",
                fields.len(),
                b.len()
            )));
        }
        if !epsilon.is_finite() || b.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSpec("non-finite epsilon or coefficient".into()));
        }
        if let Some(w) = fields.windows(2).find(|w| w[0].alpha >= w[1].alpha) {
            return Err(Error::InvalidSpec(format!(
                "degrees must strictly increase, found {} then {}",
                w[0].alpha, w[1].alpha
            )));
        }
        Ok(PerturbationSpec { fields, b, epsilon, orientation })
    }

    pub fn fields(&self) -> &[HomogeneousField] {
        &self.fields
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Self {
        PerturbationSpec { epsilon, ..self.clone() }
    }

    pub fn with_b(&self, b: Vec<f64>) -> Result<Self> {
        PerturbationSpec::new(self.fields.clone(), b, self.epsilon, self.orientation)
    }

    pub fn is_smooth(&self) -> bool {
        self.fields.iter().all(HomogeneousField::is_smooth)
    }

    /// Unchanged when already `ccw`, otherwise the swapped form.
    pub fn normalized(&self) -> Self {
        match self.orientation {
            Orientation::Ccw => self.clone(),
            Orientation::Cw => swap_orientation(self).expect("cw spec"),
        }
    }

    /// The perturbation `Σ bⱼ Xⱼ(x, y)` without ε.
    pub fn perturbation(&self, x: f64, y: f64) -> (f64, f64) {
        self.fields.iter().zip(&self.b).fold((0.0, 0.0), |(p, q), (field, &bj)| {
            let (f, g) = eval_field(field, x, y);
            (p + bj * f, q + bj * g)
        })
    }

    /// The full vector field, center included.
    pub fn vector_field(&self, x: f64, y: f64) -> (f64, f64) {
        let (p, q) = self.perturbation(x, y);
        let (lx, ly) = match self.orientation {
            Orientation::Ccw => (-y, x),
            Orientation::Cw => (y, -x),
        };
        (lx + self.epsilon * p, ly + self.epsilon * q)
    }
}

/// Rewrites a `cw` spec in the variables `(u, v) = (y, x)`, where its center
/// becomes `(-v, u)`. Orbits are reflected across the diagonal, so cycle
/// counts and radii are unchanged.
pub fn swap_orientation(spec: &PerturbationSpec) -> Result<PerturbationSpec> {
    if spec.orientation == Orientation::Ccw {
        return Err(Error::Orientation("spec is already ccw".into()));
    }
    Ok(PerturbationSpec {
        fields: spec.fields.iter().map(HomogeneousField::swapped).collect(),
        b: spec.b.clone(),
        epsilon: spec.epsilon,
        orientation: Orientation::Ccw,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn half() -> Exponent {
        Exponent::new(1, 2).unwrap()
    }

    #[test]
    fn term_examples() {
        let t = SignedPowerTerm::new(1.0, half(), true, Exponent::ZERO, false).unwrap();
        assert_eq!(eval_term(&t, -4.0, 7.0), -2.0);
        let t = SignedPowerTerm::new(3.0, Exponent::integer(2), false, Exponent::ONE, true).unwrap();
        assert_eq!(eval_term(&t, 2.0, -1.0), -12.0);
        let t = SignedPowerTerm::odd_root(1.0, Exponent::new(1, 3).unwrap(), false);
        assert_eq!(eval_term(&t, -8.0, 0.0), -2.0);
    }

    #[test]
    fn zero_exponent_conventions() {
        let t = SignedPowerTerm::monomial(2.0, 0, 0);
        assert_eq!(eval_term(&t, 0.0, 0.0), 2.0);
        let t = SignedPowerTerm::monomial(2.0, 1, 0);
        assert_eq!(eval_term(&t, 0.0, 5.0), 0.0);
        assert!(SignedPowerTerm::new(1.0, Exponent::ZERO, true, Exponent::ONE, false).is_err());
        assert!(SignedPowerTerm::new(f64::NAN, Exponent::ONE, true, Exponent::ZERO, false).is_err());
    }

    #[test]
    fn monomials_are_exact() {
        for n in 0..6u32 {
            let t = SignedPowerTerm::monomial(1.0, n, 0);
            for &x in &[-3.0f64, -0.5, 0.0, 2.0] {
                assert_eq!(eval_term(&t, x, 1.0), x.powi(n as i32));
            }
        }
    }

    #[test]
    fn field_examples() {
        let id = HomogeneousField::linear([[1.0, 0.0], [0.0, 1.0]]);
        assert_eq!(eval_field(&id, 3.0, -2.0), (3.0, -2.0));

        let cap = HomogeneousField::new(
            vec![],
            vec![SignedPowerTerm::odd_root(-(2f64.sqrt()), half(), false)],
            half(),
        )
        .unwrap();
        let (f, g) = eval_field(&cap, 2.0, 0.0);
        assert_eq!(f, 0.0);
        assert!((g + 2.0).abs() < 1e-15);

        let c = 0.7;
        let herd_term =
            |k: f64| SignedPowerTerm::new(k, half(), true, Exponent::ONE, true).unwrap();
        let herd = HomogeneousField::new(
            vec![herd_term(-1.0)],
            vec![herd_term(c)],
            Exponent::new(3, 2).unwrap(),
        )
        .unwrap();
        assert_eq!(eval_field(&herd, 1.0, 1.0), (-1.0, c));
    }

    #[test]
    fn mixed_degrees_rejected() {
        let r = HomogeneousField::new(
            vec![SignedPowerTerm::monomial(1.0, 1, 0)],
            vec![SignedPowerTerm::monomial(1.0, 2, 0)],
            Exponent::ONE,
        );
        assert!(matches!(r, Err(Error::InvalidField(_))));
    }

    #[test]
    fn angular_examples() {
        let id = HomogeneousField::linear([[1.0, 0.0], [0.0, 1.0]]);
        let (f, g) = angular_components(&id, PI / 3.0);
        assert!((f - 1.0).abs() < 1e-15 && g.abs() < 1e-15);

        let rot = HomogeneousField::linear([[0.0, -1.0], [1.0, 0.0]]);
        for k in 0..10 {
            let (f, g) = angular_components(&rot, 0.37 * k as f64);
            assert!(f.abs() < 1e-15 && (g - 1.0).abs() < 1e-15);
        }

        let sq = HomogeneousField::new(
            vec![SignedPowerTerm::odd_root(1.0, half(), false)],
            vec![],
            half(),
        )
        .unwrap();
        let (f, _) = angular_components(&sq, PI);
        assert!((f - 1.0).abs() < 1e-15);
    }

    #[test]
    fn homogeneity_examples() {
        let sq = HomogeneousField::new(
            vec![SignedPowerTerm::odd_root(1.0, half(), false)],
            vec![],
            half(),
        )
        .unwrap();
        assert_eq!(homogeneity_residual(&sq, 4.0, 1.0, 0.0), 0.0);
        let quad = HomogeneousField::new(
            vec![SignedPowerTerm::monomial(1.0, 2, 0)],
            vec![],
            Exponent::integer(2),
        )
        .unwrap();
        assert_eq!(homogeneity_residual(&quad, 3.0, 1.0, 0.0), 0.0);
        let lin = HomogeneousField::linear([[1.0, 2.0], [3.0, 4.0]]);
        assert!(homogeneity_residual(&lin, 2.0, 1.0, 1.0) < 1e-12);
    }

    fn vdp_cw() -> PerturbationSpec {
        let g1 = HomogeneousField::new(vec![], vec![SignedPowerTerm::monomial(1.0, 0, 1)], Exponent::ONE)
            .unwrap();
        let g3 = HomogeneousField::new(
            vec![],
            vec![SignedPowerTerm::monomial(1.0, 0, 3)],
            Exponent::integer(3),
        )
        .unwrap();
        PerturbationSpec::new(vec![g1, g3], vec![1.0, -1.0], 0.1, Orientation::Cw).unwrap()
    }

    #[test]
    fn swap_moves_lienard_terms_into_f() {
        let spec = vdp_cw();
        let ccw = swap_orientation(&spec).unwrap();
        assert_eq!(ccw.orientation(), Orientation::Ccw);
        assert_eq!(ccw.fields()[0].f_terms(), &[SignedPowerTerm::monomial(1.0, 1, 0)]);
        assert!(ccw.fields()[1].g_terms().is_empty());
        assert!(swap_orientation(&ccw).is_err());

        // (u, v) = (y, x): the swapped system at (u, v) is the original at (v, u), reflected
        let (x, y) = (0.3, -1.2);
        let (xd, yd) = spec.vector_field(x, y);
        let (ud, vd) = ccw.vector_field(y, x);
        assert!((ud - yd).abs() < 1e-15 && (vd - xd).abs() < 1e-15);
    }

    #[test]
    fn swap_is_involution() {
        let spec = vdp_cw();
        for field in spec.fields() {
            assert_eq!(&field.swapped().swapped(), field);
        }
    }

    #[test]
    fn spec_validation() {
        let lin = HomogeneousField::linear([[1.0, 0.0], [0.0, 1.0]]);
        let c = HomogeneousField::constant(1.0, 1.0);
        assert!(PerturbationSpec::new(vec![lin.clone(), c.clone()], vec![1.0, 1.0], 0.1, Orientation::Ccw).is_err());
        assert!(PerturbationSpec::new(vec![c.clone(), lin.clone()], vec![1.0], 0.1, Orientation::Ccw).is_err());
        assert!(PerturbationSpec::new(vec![c, lin], vec![1.0, 2.0], 0.1, Orientation::Ccw).is_ok());
    }

    #[test]
    fn json_shape() {
        let spec = vdp_cw();
        let v = serde_json::to_value(&spec).unwrap();
        assert_eq!(v["orientation"], "cw");
        assert_eq!(v["fields"][1]["alpha"], "3/1");
        assert_eq!(v["fields"][1]["g"][0]["py"], "3/1");
        assert_eq!(v["fields"][1]["g"][0]["sy"], true);
        let back: PerturbationSpec = serde_json::from_value(v).unwrap();
        assert_eq!(back, spec);

        let bad = r#"{"alpha":"1/1","f":[{"c":1,"px":"2/1","py":"0/1","sx":false,"sy":false}],"g":[]}"#;
        assert!(serde_json::from_str::<HomogeneousField>(bad).is_err());
    }
}

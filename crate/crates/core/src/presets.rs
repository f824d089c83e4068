//! Named systems: worked averaging examples, Liénard members, applied models
//! and a few monomial systems for the classifier.
//!
//! The applied models (capillary, herd, SIR) are decomposed into homogeneous
//! parts so they can be fed to every tool, but they are shipped as
//! illustrations only: nothing is claimed about their limit cycles.

use serde::{Deserialize, Serialize};

use crate::classifier::MonomialSystem;
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::field::{HomogeneousField, Orientation, PerturbationSpec, SignedPowerTerm};
use crate::lienard::{hilbert_monomial_lower_bound, lienard_family};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PresetSystem {
    Perturbation(PerturbationSpec),
    Monomial(MonomialSystem),
}

/// What the preset is expected to show.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_bound: Option<usize>,
    /// Default root targets for coefficient synthesis.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub targets: Vec<f64>,
    /// Radii of the limit cycles predicted by averaging.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub radii: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub property: Option<String>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Preset {
    pub name: String,
    pub spec: PresetSystem,
    pub expected: Expected,
}

impl Preset {
    pub fn perturbation(&self) -> Option<&PerturbationSpec> {
        match &self.spec {
            PresetSystem::Perturbation(s) => Some(s),
            PresetSystem::Monomial(_) => None,
        }
    }

    pub fn monomial(&self) -> Option<&MonomialSystem> {
        match &self.spec {
            PresetSystem::Monomial(s) => Some(s),
            PresetSystem::Perturbation(_) => None,
        }
    }
}

fn exp(num: i64, den: i64) -> Exponent {
    Exponent::new(num, den).expect("valid exponent")
}

fn term(c: f64, px: Exponent, sx: bool, py: Exponent, sy: bool) -> SignedPowerTerm {
    SignedPowerTerm::new(c, px, sx, py, sy).expect("valid term")
}

fn field(f: Vec<SignedPowerTerm>, g: Vec<SignedPowerTerm>, alpha: Exponent) -> HomogeneousField {
    HomogeneousField::new(f, g, alpha).expect("homogeneous field")
}

fn sqrt_x(c: f64) -> SignedPowerTerm {
    SignedPowerTerm::odd_root(c, exp(1, 2), false)
}

fn sqrt_y(c: f64) -> SignedPowerTerm {
    SignedPowerTerm::odd_root(c, exp(1, 2), true)
}

/// Constant + signed square root + linear, with one limit cycle near
/// `z* = (c₁/c₂)²` where `c₁ = 4(q₁₁+q₂₂)C/2π`, `c₂ = (p₁₁+p₂₂)/2`.
pub fn example1() -> Preset {
    let (q11, q12, q21, q22) = (0.5, 0.2, -0.3, 0.5);
    let p = [[-0.5, 0.4], [-0.3, -0.5]];
    let spec = PerturbationSpec::new(
        vec![
            HomogeneousField::constant(0.3, -0.2),
            field(vec![sqrt_x(q11), sqrt_y(q12)], vec![sqrt_x(q21), sqrt_y(q22)], exp(1, 2)),
            HomogeneousField::linear(p),
        ],
        vec![1.0, 1.0, 1.0],
        0.01,
        Orientation::Ccw,
    )
    .expect("valid spec");
    Preset {
        name: "example1".into(),
        spec: PresetSystem::Perturbation(spec),
        expected: Expected {
            lower_bound: Some(1),
            note: "one limit cycle crossing xy=0".into(),
            ..Default::default()
        },
    }
}

/// Constant + cube root + signed square root + linear. Coefficients are
/// meant to be synthesized for two prescribed radii; the fields have no
/// rotational part, which keeps the `O(ε)` drift of the cycles small.
pub fn example2() -> Preset {
    let cbrt_x = |c: f64| SignedPowerTerm::odd_root(c, exp(1, 3), false);
    let spec = PerturbationSpec::new(
        vec![
            HomogeneousField::constant(0.1, 0.1),
            field(vec![cbrt_x(1.0)], vec![cbrt_x(0.0)], exp(1, 3)),
            field(vec![sqrt_y(0.0)], vec![sqrt_y(1.0)], exp(1, 2)),
            HomogeneousField::linear([[1.0, 0.0], [0.0, 1.0]]),
        ],
        vec![1.0, 1.0, 1.0, 1.0],
        0.005,
        Orientation::Ccw,
    )
    .expect("valid spec");
    Preset {
        name: "example2".into(),
        spec: PresetSystem::Perturbation(spec),
        expected: Expected {
            lower_bound: Some(2),
            targets: vec![1.0, 4.0],
            radii: vec![1.0, 4.0],
            note: "at least two limit cycles crossing xy=0".into(),
            ..Default::default()
        },
    }
}

/// `(y, -x + ε(y - y³))`, cycle of radius `2/√3`.
pub fn vdp() -> Preset {
    let spec = lienard_family(4, &[1.0, -1.0]).expect("m = 4").with_epsilon(0.01);
    Preset {
        name: "vdp".into(),
        spec: PresetSystem::Perturbation(spec),
        expected: Expected {
            lower_bound: Some(1),
            radii: vec![2.0 / 3f64.sqrt()],
            note: "van der Pol type Liénard system".into(),
            ..Default::default()
        },
    }
}

/// Synthesis targets for the Liénard member with `m` monomials: `m - 3`
/// radii evenly spaced in `[0.5, 1.2)`, small enough that the synthesized
/// high-degree terms stay moderate.
pub fn lienard_targets(m: usize) -> Vec<f64> {
    let n = hilbert_monomial_lower_bound(m);
    (0..n).map(|k| 0.5 + 0.7 * k as f64 / n as f64).collect()
}

/// Liénard member with `m` monomials and unit coefficients; synthesize
/// coefficients for [`lienard_targets`] to get `m - 3` cycles.
pub fn lienard(m: usize) -> Result<Preset> {
    let spec = lienard_family(m, &vec![1.0; m.saturating_sub(2)])?.with_epsilon(0.005);
    let targets = lienard_targets(m);
    Ok(Preset {
        name: format!("lienard-{m}"),
        spec: PresetSystem::Perturbation(spec),
        expected: Expected {
            lower_bound: Some(m - 3),
            radii: targets.clone(),
            targets,
            note: format!("{} limit cycles after synthesis", m - 3),
            ..Default::default()
        },
    })
}

/// `ẋ = y`, `ẏ = 1 - a y - √(2x)` around the clockwise center, `ε = 1`.
pub fn capillary() -> Preset {
    let a = 1.0;
    let spec = PerturbationSpec::new(
        vec![
            HomogeneousField::constant(0.0, 1.0),
            field(vec![], vec![sqrt_x(-std::f64::consts::SQRT_2)], exp(1, 2)),
            HomogeneousField::linear([[0.0, 0.0], [1.0, -a]]),
        ],
        vec![1.0, 1.0, 1.0],
        1.0,
        Orientation::Cw,
    )
    .expect("valid spec");
    Preset {
        name: "capillary".into(),
        spec: PresetSystem::Perturbation(spec),
        expected: Expected { note: "capillary rise model, a = 1; illustration only".into(), ..Default::default() },
    }
}

/// `ẋ = x(1-x) - y√x`, `ẏ = -xy + c y√x` around the ccw center, `ε = 1`.
pub fn herd() -> Preset {
    let c = 1.0;
    let h = exp(1, 2);
    let spec = PerturbationSpec::new(
        vec![
            HomogeneousField::linear([[1.0, 1.0], [-1.0, 0.0]]),
            field(
                vec![term(-1.0, h, true, Exponent::ONE, true)],
                vec![term(c, h, true, Exponent::ONE, true)],
                exp(3, 2),
            ),
            field(vec![SignedPowerTerm::monomial(-1.0, 2, 0)], vec![SignedPowerTerm::monomial(-1.0, 1, 1)], Exponent::integer(2)),
        ],
        vec![1.0, 1.0, 1.0],
        1.0,
        Orientation::Ccw,
    )
    .expect("valid spec");
    Preset {
        name: "herd".into(),
        spec: PresetSystem::Perturbation(spec),
        expected: Expected { note: "herd behaviour predator-prey model, c = 1; illustration only".into(), ..Default::default() },
    }
}

/// `Ṡ = -β√(SI)`, `İ = β√(SI) - γ√I` around the ccw center, `ε = 1`.
pub fn sir() -> Preset {
    let (beta, gamma) = (1.0, 0.5);
    let h = exp(1, 2);
    let spec = PerturbationSpec::new(
        vec![
            field(vec![], vec![sqrt_y(-gamma)], h),
            field(
                vec![term(-beta, h, true, h, true), SignedPowerTerm::monomial(1.0, 0, 1)],
                vec![term(beta, h, true, h, true), SignedPowerTerm::monomial(-1.0, 1, 0)],
                Exponent::ONE,
            ),
        ],
        vec![1.0, 1.0],
        1.0,
        Orientation::Ccw,
    )
    .expect("valid spec");
    Preset {
        name: "sir".into(),
        spec: PresetSystem::Perturbation(spec),
        expected: Expected { note: "square-root SIR model, beta = 1, gamma = 0.5; illustration only".into(), ..Default::default() },
    }
}

fn monomial(name: &str, sys: MonomialSystem, property: &str, note: &str) -> Preset {
    Preset {
        name: name.into(),
        spec: PresetSystem::Monomial(sys),
        expected: Expected { property: Some(property.into()), note: note.into(), ..Default::default() },
    }
}

/// Every preset, in a fixed order.
pub fn catalog() -> Vec<Preset> {
    let mut out = vec![example1(), example2(), vdp()];
    out.extend((4..=7).map(|m| lienard(m).expect("m >= 4")));
    out.extend([capillary(), herd(), sir()]);
    out.push(monomial(
        "rotation",
        MonomialSystem::new(1.0, 0, 1, -1.0, 1, 0, 0.0, 0, 0),
        "P4",
        "(y, -x): integrable center",
    ));
    out.push(monomial(
        "divergence",
        MonomialSystem::new(1.0, 0, 1, -1.0, 1, 0, 1.0, 2, 1),
        "P5",
        "(y, -x + x^2 y): single-signed divergence",
    ));
    out.push(monomial(
        "one-dimensional",
        MonomialSystem::new(0.0, 0, 0, 1.0, 1, 0, 1.0, 0, 3),
        "P3",
        "(0, x + y^3)",
    ));
    out
}

/// Look a preset up by name; `lienard-M` accepts any `M >= 4`.
pub fn by_name(name: &str) -> Result<Preset> {
    if let Some(m) = name.strip_prefix("lienard-") {
        let m: usize = m.parse().map_err(|_| Error::InvalidArgument(format!("bad preset {name:?}")))?;
        return lienard(m);
    }
    catalog()
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown preset {name:?}")))
}

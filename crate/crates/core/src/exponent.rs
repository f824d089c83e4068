//! Exact rational exponents.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A non-negative rational exponent, serialized as `"num/den"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exponent(Rational64);

impl Exponent {
    pub const ZERO: Exponent = Exponent(Rational64::new_raw(0, 1));
    pub const ONE: Exponent = Exponent(Rational64::new_raw(1, 1));

    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidTerm(format!("zero denominator in {num}/{den}")));
        }
        let r = Rational64::new(num, den);
        if r < Rational64::from_integer(0) {
            return Err(Error::InvalidTerm(format!("negative exponent {num}/{den}")));
        }
        Ok(Exponent(r))
    }

    pub fn integer(n: u32) -> Self {
        Exponent(Rational64::from_integer(n as i64))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.numer() == 0
    }

    pub fn is_integer(&self) -> bool {
        self.denom() == 1
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    pub fn ratio(&self) -> Rational64 {
        self.0
    }
}

impl std::ops::Add for Exponent {
    type Output = Exponent;
    fn add(self, rhs: Self) -> Self {
        Exponent(self.0 + rhs.0)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidTerm(format!("exponent {s:?} is not of the form num/den"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: i64 = n.parse().map_err(|_| bad())?;
        let d: i64 = d.parse().map_err(|_| bad())?;
        Exponent::new(n, d)
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `sgn(u)|u|^a` or `|u|^a`; `1` when the exponent is zero.
///
/// Square and cube roots go through `sqrt`/`cbrt` and integer exponents
/// through `powi` so that perfect powers evaluate exactly.
pub(crate) fn signed_power(u: f64, exp: Exponent, signed: bool) -> f64 {
    if exp.is_zero() {
        return 1.0;
    }
    if u == 0.0 {
        return 0.0;
    }
    let m = u.abs();
    let mag = match (exp.numer(), exp.denom()) {
        (n, 1) if n <= i32::MAX as i64 => m.powi(n as i32),
        (1, 2) => m.sqrt(),
        (1, 3) => m.cbrt(),
        (n, 2) if n <= i32::MAX as i64 => m.sqrt().powi(n as i32),
        (n, 3) if n <= i32::MAX as i64 => m.cbrt().powi(n as i32),
        _ => m.powf(exp.to_f64()),
    };
    if signed && u < 0.0 {
        -mag
    } else {
        mag
    }
}

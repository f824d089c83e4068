//! Laurent polynomials in `x, y` with optional `ln|x|`, `ln|y|` terms: just
//! enough algebra to check first integrals and divergences exactly.

use std::collections::BTreeMap;
use std::fmt;

/// Coefficients whose magnitude falls below this fraction of the largest
/// contributing term are treated as cancelled.
const CANCEL_REL: f64 = 1e-12;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Laurent {
    // (x exponent, y exponent) -> (coefficient, sum of |contributions|)
    terms: BTreeMap<(i32, i32), (f64, f64)>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }

    pub fn monomial(c: f64, xe: i32, ye: i32) -> Self {
        let mut p = Laurent::zero();
        p.add_term(c, xe, ye);
        p
    }

    pub fn add_term(&mut self, c: f64, xe: i32, ye: i32) {
        if c == 0.0 {
            return;
        }
        let e = self.terms.entry((xe, ye)).or_insert((0.0, 0.0));
        e.0 += c;
        e.1 += c.abs();
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (&(xe, ye), &(c, _)) in &other.terms {
            out.add_term(c, xe, ye);
        }
        out
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (&(a, b), &(c, _)) in &self.terms {
            for (&(d, e), &(f, _)) in &other.terms {
                out.add_term(c * f, a + d, b + e);
            }
        }
        out
    }

    pub fn d_dx(&self) -> Laurent {
        let mut out = Laurent::zero();
        for (&(xe, ye), &(c, _)) in &self.terms {
            out.add_term(c * xe as f64, xe - 1, ye);
        }
        out
    }

    pub fn d_dy(&self) -> Laurent {
        let mut out = Laurent::zero();
        for (&(xe, ye), &(c, _)) in &self.terms {
            out.add_term(c * ye as f64, xe, ye - 1);
        }
        out
    }

    /// Surviving terms after cancellation, ascending by exponent pair.
    pub fn terms(&self) -> Vec<(f64, i32, i32)> {
        self.terms
            .iter()
            .filter(|(_, &(c, mag))| c.abs() > CANCEL_REL * mag)
            .map(|(&(xe, ye), &(c, _))| (c, xe, ye))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms().is_empty()
    }

    pub fn has_negative_x(&self) -> bool {
        self.terms().iter().any(|t| t.1 < 0)
    }

    pub fn has_negative_y(&self) -> bool {
        self.terms().iter().any(|t| t.2 < 0)
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (c, xe, ye)) in terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            if *xe != 0 {
                write!(f, "*x^{xe}")?;
            }
            if *ye != 0 {
                write!(f, "*y^{ye}")?;
            }
        }
        Ok(())
    }
}

/// `H = poly + lx ln|x| + ly ln|y|`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FirstIntegral {
    pub poly: Laurent,
    pub log_x: f64,
    pub log_y: f64,
}

impl FirstIntegral {
    pub fn d_dx(&self) -> Laurent {
        self.poly.d_dx().add(&Laurent::monomial(self.log_x, -1, 0))
    }

    pub fn d_dy(&self) -> Laurent {
        self.poly.d_dy().add(&Laurent::monomial(self.log_y, 0, -1))
    }

    /// Singular on `x = 0`.
    pub fn singular_on_x_axis_line(&self) -> bool {
        self.poly.has_negative_x() || self.log_x != 0.0
    }

    /// Singular on `y = 0`.
    pub fn singular_on_y_axis_line(&self) -> bool {
        self.poly.has_negative_y() || self.log_y != 0.0
    }

    pub fn is_constant(&self) -> bool {
        self.d_dx().is_zero() && self.d_dy().is_zero()
    }
}

impl fmt::Display for FirstIntegral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)?;
        if self.log_x != 0.0 {
            write!(f, " + {}*ln|x|", self.log_x)?;
        }
        if self.log_y != 0.0 {
            write!(f, " + {}*ln|y|", self.log_y)?;
        }
        Ok(())
    }
}

/// `∫ c u^e du` as (Laurent part, log coefficient) in one variable.
pub fn antiderivative(c: f64, e: i32) -> (f64, i32, f64) {
    if e == -1 {
        (0.0, 0, c)
    } else {
        (c / (e + 1) as f64, e + 1, 0.0)
    }
}

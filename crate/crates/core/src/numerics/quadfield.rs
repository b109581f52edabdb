//! Elements of a real quadratic field Q(sqrt D).

use super::rational::{parse_rational, rat_to_string};
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

/// `x + y sqrt(D)` with `D` a positive nonsquare integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadElem {
    pub x: Rational,
    pub y: Rational,
    pub d: i64,
}

impl QuadElem {
    pub fn new(x: Rational, y: Rational, d: i64) -> Self {
        QuadElem { x, y, d }
    }

    pub fn from_ints(x: i64, y: i64, d: i64) -> Self {
        QuadElem::new(Rational::from(x), Rational::from(y), d)
    }

    pub fn rational(x: Rational, d: i64) -> Self {
        QuadElem::new(x, Rational::new(), d)
    }

    pub fn conj(&self) -> Self {
        QuadElem::new(self.x.clone(), Rational::from(-&self.y), self.d)
    }

    pub fn norm(&self) -> Rational {
        let x2 = Rational::from(self.x.square_ref());
        let y2 = Rational::from(self.y.square_ref());
        x2 - y2 * self.d
    }

    pub fn trace(&self) -> Rational {
        Rational::from(&self.x * 2u32)
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    /// Exact sign of the first real embedding.
    pub fn signum(&self) -> i32 {
        let sx = self.x.cmp0();
        let sy = self.y.cmp0();
        if sy == Ordering::Equal || sx == sy {
            return ord_sign(if sx == Ordering::Equal { sy } else { sx });
        }
        if sx == Ordering::Equal {
            return ord_sign(sy);
        }
        // opposite signs: compare x^2 with D y^2
        let x2 = Rational::from(self.x.square_ref());
        let dy2 = Rational::from(self.y.square_ref()) * self.d;
        match x2.cmp(&dy2) {
            Ordering::Greater => ord_sign(sx),
            Ordering::Less => ord_sign(sy),
            Ordering::Equal => 0,
        }
    }

    /// Exact absolute value in the first embedding.
    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Self {
        let n = self.norm();
        let c = self.conj();
        QuadElem::new(c.x / &n, c.y / n, self.d)
    }

    pub fn div(&self, o: &QuadElem) -> Self {
        self.clone() * o.recip()
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = QuadElem::rational(Rational::from(1), self.d);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b.clone();
            }
            b = b.clone() * b;
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, r: &Rational) -> Self {
        QuadElem::new(Rational::from(&self.x * r), Rational::from(&self.y * r), self.d)
    }

    /// Both real embeddings `(x + y sqrt D, x - y sqrt D)`.
    pub fn embed(&self, prec: u32) -> (Float, Float) {
        let s = Float::with_val(prec, self.d).sqrt();
        let x = Float::with_val(prec, &self.x);
        let ys = Float::with_val(prec, &self.y * &s);
        (Float::with_val(prec, &x + &ys), x - ys)
    }

    pub fn to_text(&self) -> QuadElemText {
        QuadElemText {
            x: rat_to_string(&self.x),
            y: rat_to_string(&self.y),
            d: self.d,
        }
    }
}

fn ord_sign(o: Ordering) -> i32 {
    match o {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

/// Serialized `{x, y, D}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct QuadElemText {
    pub x: String,
    pub y: String,
    #[serde(rename = "D")]
    pub d: i64,
}

impl QuadElemText {
    pub fn parse(&self) -> Option<QuadElem> {
        Some(QuadElem::new(parse_rational(&self.x)?, parse_rational(&self.y)?, self.d))
    }
}

impl Add for QuadElem {
    type Output = QuadElem;
    fn add(self, o: QuadElem) -> QuadElem {
        debug_assert_eq!(self.d, o.d);
        QuadElem::new(self.x + o.x, self.y + o.y, self.d)
    }
}

impl Sub for QuadElem {
    type Output = QuadElem;
    fn sub(self, o: QuadElem) -> QuadElem {
        debug_assert_eq!(self.d, o.d);
        QuadElem::new(self.x - o.x, self.y - o.y, self.d)
    }
}

impl Mul for QuadElem {
    type Output = QuadElem;
    fn mul(self, o: QuadElem) -> QuadElem {
        debug_assert_eq!(self.d, o.d);
        let xx = Rational::from(&self.x * &o.x);
        let yy = Rational::from(&self.y * &o.y) * self.d;
        let xy = Rational::from(&self.x * &o.y);
        let yx = Rational::from(&self.y * &o.x);
        QuadElem::new(xx + yy, xy + yx, self.d)
    }
}

impl Neg for QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem::new(-self.x, -self.y, self.d)
    }
}

impl PartialOrd for QuadElem {
    fn partial_cmp(&self, o: &QuadElem) -> Option<Ordering> {
        if self.d != o.d {
            return None;
        }
        Some(match (self.clone() - o.clone()).signum() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::rat;

    #[test]
    fn conj_and_embed() {
        let l = QuadElem::from_ints(1, 1, 5);
        assert_eq!(l.conj(), QuadElem::from_ints(1, -1, 5));
        let (a, b) = l.embed(128);
        assert!((a.to_f64() - 3.2360679774997896).abs() < 1e-14);
        assert!((b.to_f64() + 1.2360679774997896).abs() < 1e-14);
        let eps = QuadElem::new(rat(3, 2), rat(1, 2), 5);
        assert_eq!(eps.norm(), rat(1, 1));
    }

    #[test]
    fn exact_sign() {
        assert_eq!(QuadElem::from_ints(-2, 1, 5).signum(), 1);
        assert_eq!(QuadElem::from_ints(-3, 1, 5).signum(), -1);
        assert_eq!(QuadElem::from_ints(3, -1, 5).signum(), 1);
        assert_eq!(QuadElem::from_ints(0, -1, 5).signum(), -1);
        assert_eq!(QuadElem::from_ints(0, 0, 5).signum(), 0);
    }

    #[test]
    fn recip_and_pow() {
        let e = QuadElem::new(rat(3, 2), rat(1, 2), 5);
        assert_eq!(e.clone() * e.recip(), QuadElem::from_ints(1, 0, 5));
        assert_eq!(e.pow(2), e.clone() * e.clone());
    }
}

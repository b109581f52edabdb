//! Complex numbers as pairs of MPFR reals.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

/// A complex number `re + i im` at a fixed binary precision.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    pub re: Float,
    pub im: Float,
}

pub fn real(prec: u32, x: f64) -> Float {
    Float::with_val(prec, x)
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

pub fn from_rational(prec: u32, q: &Rational) -> Float {
    Float::with_val(prec, q)
}

/// Parses decimal text or "p/q" into a real at the given precision.
pub fn parse_real(prec: u32, s: &str) -> Option<Float> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: Float = Float::with_val(prec, Float::parse(p.trim()).ok()?);
        let q: Float = Float::with_val(prec, Float::parse(q.trim()).ok()?);
        return Some(p / q);
    }
    Some(Float::with_val(prec, Float::parse(s).ok()?))
}

/// Decimal text with an explicit number of significant digits.
pub fn fmt_real(x: &Float, digits: usize) -> String {
    x.to_string_radix(10, Some(digits))
}

impl Complex {
    pub fn new(re: Float, im: Float) -> Self {
        Complex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Complex::new(Float::new(prec), Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        Complex::new(Float::with_val(prec, 1), Float::new(prec))
    }

    pub fn i(prec: u32) -> Self {
        Complex::new(Float::new(prec), Float::with_val(prec, 1))
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        Complex::new(Float::with_val(prec, re), Float::with_val(prec, im))
    }

    pub fn from_real(x: Float) -> Self {
        let prec = x.prec();
        Complex::new(x, Float::new(prec))
    }

    pub fn from_rational(prec: u32, q: &Rational) -> Self {
        Complex::from_real(Float::with_val(prec, q))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.hypot_ref(&self.im))
    }

    pub fn arg(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.im.atan2_ref(&self.re))
    }

    pub fn scale(&self, s: &Float) -> Self {
        let p = self.prec();
        Complex::new(Float::with_val(p, &self.re * s), Float::with_val(p, &self.im * s))
    }

    pub fn scale_rat(&self, s: &Rational) -> Self {
        let p = self.prec();
        Complex::new(Float::with_val(p, &self.re * s), Float::with_val(p, &self.im * s))
    }

    pub fn mul_i(&self) -> Self {
        Complex::new(-self.im.clone(), self.re.clone())
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        let p = self.prec();
        Complex::new(Float::with_val(p, &self.re / &n), -Float::with_val(p, &self.im / &n))
    }

    pub fn div(&self, other: &Complex) -> Self {
        self * &other.recip()
    }

    /// `e^z`.
    pub fn exp(&self) -> Self {
        let p = self.prec();
        let r = Float::with_val(p, self.re.exp_ref());
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        Complex::new(Float::with_val(p, &r * &c), Float::with_val(p, &r * &s))
    }

    /// `e(x) = exp(2 pi i x)` for real `x`.
    pub fn e_real(x: &Float) -> Self {
        let p = x.prec();
        let t = Float::with_val(p, x * pi(p)) * 2u32;
        let (s, c) = t.sin_cos(Float::new(p));
        Complex::new(c, s)
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        let p = self.prec();
        Complex::new(Float::with_val(p, self.abs().ln_ref()), self.arg())
    }

    /// Principal square root (branch cut on the negative real axis).
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        let r = self.abs();
        if r.is_zero() {
            return Complex::zero(p);
        }
        let re = Float::with_val(p, (Float::with_val(p, &r + &self.re) / 2u32).sqrt_ref());
        let im_abs = Float::with_val(p, (Float::with_val(p, &r - &self.re) / 2u32).sqrt_ref());
        let im = if self.im.is_sign_negative() { -im_abs } else { im_abs };
        Complex::new(re, im)
    }

    /// Principal power `z^a` for real exponent.
    pub fn powf(&self, a: &Float) -> Self {
        if self.re.is_zero() && self.im.is_zero() {
            return Complex::zero(self.prec());
        }
        self.ln().scale(a).exp()
    }

    pub fn powi(&self, n: i64) -> Self {
        let p = self.prec();
        if n < 0 {
            return self.powi(-n).recip();
        }
        let mut base = self.clone();
        let mut acc = Complex::one(p);
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn to_strings(&self, digits: usize) -> [String; 2] {
        [fmt_real(&self.re, digits), fmt_real(&self.im, digits)]
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", fmt_real(&self.re, 30), fmt_real(&self.im, 30))
    }
}

impl<'a> Add<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn add(self, o: &Complex) -> Complex {
        let p = self.prec();
        Complex::new(Float::with_val(p, &self.re + &o.re), Float::with_val(p, &self.im + &o.im))
    }
}

impl<'a> Sub<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn sub(self, o: &Complex) -> Complex {
        let p = self.prec();
        Complex::new(Float::with_val(p, &self.re - &o.re), Float::with_val(p, &self.im - &o.im))
    }
}

impl<'a> Mul<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn mul(self, o: &Complex) -> Complex {
        let p = self.prec();
        let ac = Float::with_val(p, &self.re * &o.re);
        let bd = Float::with_val(p, &self.im * &o.im);
        let ad = Float::with_val(p, &self.re * &o.im);
        let bc = Float::with_val(p, &self.im * &o.re);
        Complex::new(ac - bd, ad + bc)
    }
}

impl Add for Complex {
    type Output = Complex;
    fn add(self, o: Complex) -> Complex {
        &self + &o
    }
}

impl Sub for Complex {
    type Output = Complex;
    fn sub(self, o: Complex) -> Complex {
        &self - &o
    }
}

impl Mul for Complex {
    type Output = Complex;
    fn mul(self, o: Complex) -> Complex {
        &self * &o
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

impl AddAssign<&Complex> for Complex {
    fn add_assign(&mut self, o: &Complex) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl AddAssign<Complex> for Complex {
    fn add_assign(&mut self, o: Complex) {
        *self += &o;
    }
}

impl SubAssign<&Complex> for Complex {
    fn sub_assign(&mut self, o: &Complex) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&Complex> for Complex {
    fn mul_assign(&mut self, o: &Complex) {
        *self = &*self * o;
    }
}

/// Serialized form of a complex value: decimal text pairs.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ComplexText(pub String, pub String);

impl ComplexText {
    pub fn from_complex(z: &Complex, digits: usize) -> Self {
        let [a, b] = z.to_strings(digits);
        ComplexText(a, b)
    }
}

/// `2^e` as a real at the given precision.
pub fn pow2(prec: u32, e: i32) -> Float {
    Float::with_val(prec, Float::with_val(prec, 2).pow(e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_branch() {
        let z = Complex::from_f64(128, -4.0, 0.0);
        let s = z.sqrt();
        assert!((s.im.to_f64() - 2.0).abs() < 1e-30);
        let z = Complex::from_f64(128, -4.0, -1e-40);
        assert!(z.sqrt().im.to_f64() < 0.0);
    }

    #[test]
    fn exp_ln_roundtrip() {
        let z = Complex::from_f64(200, 0.3, -1.2);
        let w = z.ln().exp();
        assert!((&w - &z).abs().to_f64() < 1e-55);
    }

    #[test]
    fn powi_matches_repeated_product() {
        let z = Complex::from_f64(128, 1.1, 0.7);
        let p = z.powi(5);
        let mut q = Complex::one(128);
        for _ in 0..5 {
            q = &q * &z;
        }
        assert!((&p - &q).abs().to_f64() < 1e-30);
        assert!((&z.powi(-2) * &z.powi(2) - Complex::one(128)).abs().to_f64() < 1e-35);
    }
}

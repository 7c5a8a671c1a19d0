//! Complex numbers over MPFR floats. The precision travels with the values;
//! binary operations use the larger of the two.

use crate::arith::Q;
use rug::float::Constant;
use rug::{Float, Integer};
use std::fmt;

#[derive(Clone, PartialEq)]
pub struct ComplexHP {
    pub re: Float,
    pub im: Float,
}

pub fn q_to_float(x: &Q, prec: u32) -> Float {
    let n: Integer = x.numer().to_str_radix(10).parse().expect("integer");
    let d: Integer = x.denom().to_str_radix(10).parse().expect("integer");
    Float::with_val(prec, n) / Float::with_val(prec, d)
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

impl ComplexHP {
    pub fn new(re: Float, im: Float) -> Self {
        ComplexHP { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Self::from_f64(0.0, 0.0, prec)
    }

    pub fn one(prec: u32) -> Self {
        Self::from_f64(1.0, 0.0, prec)
    }

    pub fn i(prec: u32) -> Self {
        Self::from_f64(0.0, 1.0, prec)
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        ComplexHP { re: Float::with_val(prec, re), im: Float::with_val(prec, im) }
    }

    pub fn from_q(re: &Q, im: &Q, prec: u32) -> Self {
        ComplexHP { re: q_to_float(re, prec), im: q_to_float(im, prec) }
    }

    pub fn real(x: Float) -> Self {
        let prec = x.prec();
        ComplexHP { re: x, im: Float::new(prec) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.prec().max(o.prec());
        ComplexHP {
            re: Float::with_val(p, &self.re + &o.re),
            im: Float::with_val(p, &self.im + &o.im),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.prec().max(o.prec());
        ComplexHP {
            re: Float::with_val(p, &self.re - &o.re),
            im: Float::with_val(p, &self.im - &o.im),
        }
    }

    pub fn neg(&self) -> Self {
        ComplexHP { re: -self.re.clone(), im: -self.im.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.prec().max(o.prec());
        let rr = Float::with_val(p, &self.re * &o.re);
        let ii = Float::with_val(p, &self.im * &o.im);
        let ri = Float::with_val(p, &self.re * &o.im);
        let ir = Float::with_val(p, &self.im * &o.re);
        ComplexHP { re: rr - ii, im: ri + ir }
    }

    pub fn scale(&self, k: &Float) -> Self {
        let p = self.prec().max(k.prec());
        ComplexHP { re: Float::with_val(p, &self.re * k), im: Float::with_val(p, &self.im * k) }
    }

    pub fn scale_f64(&self, k: f64) -> Self {
        self.scale(&Float::with_val(self.prec(), k))
    }

    pub fn scale_q(&self, k: &Q) -> Self {
        self.scale(&q_to_float(k, self.prec()))
    }

    pub fn conj(&self) -> Self {
        ComplexHP { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.clone().square() + self.im.clone().square())
    }

    pub fn abs(&self) -> Float {
        self.re.clone().hypot(&self.im)
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        let re = Float::with_val(n.prec(), &self.re / &n);
        let im = -Float::with_val(n.prec(), &self.im / &n);
        ComplexHP { re, im }
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.recip())
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut out = Self::one(self.prec());
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        out
    }

    /// Principal square root (branch cut on the negative real axis).
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        let r = self.abs();
        if r.is_zero() {
            return Self::zero(p);
        }
        let re = (Float::with_val(p, &r + &self.re) / 2u32).sqrt();
        let mut im = (Float::with_val(p, &r - &self.re) / 2u32).sqrt();
        if self.im.is_sign_negative() {
            im = -im;
        }
        ComplexHP { re, im }
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let m = self.re.clone().exp();
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        ComplexHP { re: Float::with_val(p, &m * &c), im: Float::with_val(p, &m * &s) }
    }

    /// `exp(i pi z)`.
    pub fn exp_i_pi(&self) -> Self {
        self.mul(&Self::i(self.prec())).scale(&pi(self.prec())).exp()
    }

    /// `|self - o| / |o|`, or `|self - o|` when `o = 0`.
    pub fn rel_err(&self, o: &Self) -> f64 {
        let d = self.sub(o).abs();
        let n = o.abs();
        if n.is_zero() {
            d.to_f64()
        } else {
            (d / n).to_f64()
        }
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    /// Decimal rendering with `digits` significant digits per part.
    pub fn to_string_digits(&self, digits: usize) -> String {
        let f = |x: &Float| x.to_string_radix(10, Some(digits));
        format!("{} + {}i", f(&self.re), f(&self.im))
    }

    pub fn to_c64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for ComplexHP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_digits(25))
    }
}

impl fmt::Debug for ComplexHP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexHP({})", self)
    }
}

impl serde::Serialize for ComplexHP {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let d = 30;
        [self.re.to_string_radix(10, Some(d)), self.im.to_string_radix(10, Some(d))].serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::qf;

    #[test]
    fn field_ops() {
        let p = 192;
        let z = ComplexHP::from_q(&qf(3, 7), &qf(-5, 2), p);
        let w = ComplexHP::from_f64(1.5, 0.25, p);
        assert!(z.mul(&w).div(&w).rel_err(&z) < 1e-55);
        assert!(z.sqrt().powi(2).rel_err(&z) < 1e-55);
        assert!(z.sqrt().re > 0);
        let e = ComplexHP::i(p).exp_i_pi();
        assert!((e.re.to_f64() - (-std::f64::consts::PI).exp()).abs() < 1e-15);
    }

    #[test]
    fn euler() {
        let p = 128;
        let z = ComplexHP::one(p).exp_i_pi();
        assert!(z.rel_err(&ComplexHP::from_f64(-1.0, 0.0, p)) < 1e-35);
    }
}

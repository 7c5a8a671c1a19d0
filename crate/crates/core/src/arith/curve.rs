//! Coordinate ring of a plane curve `y^2 = rhs(x, params)` and fractions over it.
//!
//! Because the relation is monic in `y`, every element has a unique normal
//! form `even + odd * y` with `even`, `odd` free of `y`; an expression vanishes
//! on the curve exactly when its normal form is the zero polynomial.

use super::{ArithError, MPoly, Var, Q};
use num_traits::{One, Zero};
use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub struct CurveRelation {
    pub x: Var,
    pub y: Var,
    pub rhs: MPoly,
}

impl CurveRelation {
    pub fn new(x: Var, y: Var, rhs: MPoly) -> Self {
        assert!(!rhs.uses(y), "curve right-hand side must not involve y");
        CurveRelation { x, y, rhs }
    }

    /// `y^2 - rhs`.
    pub fn equation(&self) -> MPoly {
        &MPoly::var(self.y).pow(2) - &self.rhs
    }

    /// Rewrites `y^2 -> rhs` until the `y`-degree is at most one.
    pub fn reduce(&self, f: &MPoly) -> MPoly {
        let (even, odd) = self.split(f);
        &even + &(&odd * &MPoly::var(self.y))
    }

    /// Normal form as the pair `(even, odd)` with `f = even + odd * y`.
    pub fn split(&self, f: &MPoly) -> (MPoly, MPoly) {
        let cs = f.coeffs_in(self.y);
        let mut even = MPoly::zero();
        let mut odd = MPoly::zero();
        let mut rpow = MPoly::one();
        for (k, c) in cs.iter().enumerate() {
            if k >= 2 && k % 2 == 0 {
                rpow = &rpow * &self.rhs;
            }
            if c.is_zero() {
                continue;
            }
            if k % 2 == 0 {
                even = &even + &(c * &rpow);
            } else {
                odd = &odd + &(c * &rpow);
            }
        }
        (even, odd)
    }

    pub fn vanishes(&self, f: &MPoly) -> bool {
        self.reduce(f).is_zero()
    }

    /// Same curve written in another pair of coordinate variables.
    pub fn renamed(&self, x: Var, y: Var) -> Self {
        let rhs = self.rhs.substitute(&[(self.x, MPoly::var(x))]);
        CurveRelation::new(x, y, rhs)
    }
}

/// `(even + odd * y) / x^x_power` in normal form.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveRingElement {
    pub even: MPoly,
    pub odd: MPoly,
    pub x_power: u32,
}

impl CurveRingElement {
    pub fn is_zero(&self) -> bool {
        self.even.is_zero() && self.odd.is_zero()
    }

    pub fn to_mpoly(&self, rel: &CurveRelation) -> MPoly {
        &self.even + &(&self.odd * &MPoly::var(rel.y))
    }
}

/// Reduces `num / x^x_power` modulo the curve relation. The declared
/// denominator is kept as a recorded power and never inverted.
pub fn reduce_mod_curve(num: &MPoly, x_power: u32, rel: &CurveRelation) -> CurveRingElement {
    let (even, odd) = rel.split(num);
    CurveRingElement { even, odd, x_power }
}

/// A fraction `num / den` of polynomials, interpreted on a curve.
#[derive(Clone, PartialEq)]
pub struct CurveFraction {
    pub num: MPoly,
    pub den: MPoly,
}

impl CurveFraction {
    pub fn new(num: MPoly, den: MPoly) -> Self {
        CurveFraction { num, den }.cancel_monomials()
    }

    pub fn poly(num: MPoly) -> Self {
        CurveFraction { num, den: MPoly::one() }
    }

    pub fn var(v: Var) -> Self {
        Self::poly(MPoly::var(v))
    }

    pub fn constant(c: Q) -> Self {
        Self::poly(MPoly::constant(c))
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(&self.num + &o.num, self.den.clone());
        }
        Self::new(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }

    pub fn neg(&self) -> Self {
        CurveFraction { num: -&self.num, den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(&self.num * &o.num, &self.den * &o.den)
    }

    pub fn div(&self, o: &Self) -> Self {
        Self::new(&self.num * &o.den, &self.den * &o.num)
    }

    pub fn scale(&self, k: &Q) -> Self {
        CurveFraction { num: self.num.scale(k), den: self.den.clone() }
    }

    pub fn pow(&self, n: u32) -> Self {
        CurveFraction { num: self.num.pow(n), den: self.den.pow(n) }
    }

    /// Removes the common monomial factor of numerator and denominator and
    /// makes a monomial denominator monic.
    pub fn cancel_monomials(self) -> Self {
        if self.num.is_zero() {
            return CurveFraction { num: MPoly::zero(), den: MPoly::one() };
        }
        let a = self.num.monomial_content();
        let b = self.den.monomial_content();
        let g: Vec<u32> = a.iter().zip(b.iter()).map(|(x, y)| (*x).min(*y)).collect();
        let (mut num, mut den) = if g.iter().any(|&k| k > 0) {
            (self.num.div_monomial(&g), self.den.div_monomial(&g))
        } else {
            (self.num, self.den)
        };
        if let Some((c, _)) = den.as_monomial() {
            if !c.is_one() {
                let inv = c.recip();
                num = num.scale(&inv);
                den = den.scale(&inv);
            }
        }
        CurveFraction { num, den }
    }

    /// Evaluates `f` with some variables replaced by fractions, over the
    /// common denominator `prod den_v^(deg_v f)`.
    pub fn substitute_into(f: &MPoly, map: &[(Var, CurveFraction)]) -> Self {
        // Rename the substituted variables first so images that mention them
        // are left alone (simultaneous substitution).
        const FRESH: usize = 1000;
        let renames: Vec<(Var, MPoly)> = map
            .iter()
            .enumerate()
            .map(|(i, (v, _))| (*v, MPoly::var(Var(FRESH + i))))
            .collect();
        let mut g = f.substitute(&renames);
        let mut den = MPoly::one();
        for (i, (_, fr)) in map.iter().enumerate() {
            let v = Var(FRESH + i);
            let Some(d) = g.degree_in(v) else { continue };
            // Homogenize: v^k -> num^k * den^(d - k).
            let mut acc = MPoly::zero();
            for (k, c) in g.coeffs_in(v).iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                acc = &acc + &(&(c * &fr.num.pow(k as u32)) * &fr.den.pow(d - k as u32));
            }
            g = acc;
            den = &den * &fr.den.pow(d);
        }
        Self::new(g, den)
    }

    /// Applies a substitution to both numerator and denominator.
    pub fn substitute(&self, map: &[(Var, CurveFraction)]) -> Self {
        let n = Self::substitute_into(&self.num, map);
        let d = Self::substitute_into(&self.den, map);
        n.div(&d)
    }

    /// Equality as functions on the curve.
    pub fn eq_on(&self, o: &Self, rel: &CurveRelation) -> bool {
        rel.vanishes(&(&(&self.num * &o.den) - &(&o.num * &self.den)))
    }

    pub fn is_zero_on(&self, rel: &CurveRelation) -> bool {
        rel.vanishes(&self.num)
    }

    pub fn den_vanishes_on(&self, rel: &CurveRelation) -> bool {
        rel.vanishes(&self.den)
    }

    /// The rational constant `c` with `self = c` on the curve, if any.
    pub fn constant_on(&self, rel: &CurveRelation) -> Option<Q> {
        let (ne, no) = rel.split(&self.num);
        let (de, d_odd) = rel.split(&self.den);
        let (pick_n, pick_d) = if !de.is_zero() { (&ne, &de) } else { (&no, &d_odd) };
        let (e, dc) = pick_d.terms().next().map(|(e, c)| (e.to_vec(), c.clone()))?;
        let nc = pick_n
            .terms()
            .find(|(k, _)| *k == e.as_slice())
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Q::zero);
        let c = nc / dc;
        self.eq_on(&CurveFraction::constant(c.clone()), rel).then_some(c)
    }

    /// Exponent `k` when the denominator is `x^k` (after cancelling).
    pub fn x_power_denominator(&self, x: Var) -> Result<u32, ArithError> {
        match self.den.as_monomial() {
            Some((_, e)) if e.iter().enumerate().all(|(i, &k)| k == 0 || i == x.0) => {
                Ok(e.get(x.0).copied().unwrap_or(0))
            }
            _ => Err(ArithError::NonMonomialDenominator(self.den.to_string())),
        }
    }

    /// Partial derivative by the quotient rule.
    pub fn derivative(&self, v: Var) -> Self {
        Self::new(
            &(&self.num.derivative(v) * &self.den) - &(&self.num * &self.den.derivative(v)),
            self.den.pow(2),
        )
    }
}

impl fmt::Display for CurveFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.den.as_constant() {
            Some(c) if c.is_one() => write!(f, "{}", self.num),
            _ => write!(f, "({})/({})", self.num, self.den),
        }
    }
}

impl fmt::Debug for CurveFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CurveFraction[{}]", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qf};

    fn cubic() -> CurveRelation {
        // y^2 = x^3 - 2 u x^2 + x
        let x = MPoly::var(Var::X);
        let u = MPoly::var(Var::U);
        let rhs = &(&x.pow(3) - &(&(&u * &x.pow(2)) * &MPoly::int(2))) + &x;
        CurveRelation::new(Var::X, Var::Y, rhs)
    }

    #[test]
    fn relation_reduces_to_zero() {
        let rel = cubic();
        assert!(rel.vanishes(&rel.equation()));
        let e = reduce_mod_curve(&rel.equation(), 0, &rel);
        assert!(e.is_zero());
    }

    #[test]
    fn reduction_is_idempotent_and_degree_one() {
        let rel = cubic();
        let y = MPoly::var(Var::Y);
        let f = &(&y.pow(5) + &(&y.pow(2) * &MPoly::var(Var::U))) - &MPoly::var(Var::X);
        let r = rel.reduce(&f);
        assert!(r.degree_in(Var::Y).unwrap_or(0) <= 1);
        assert_eq!(rel.reduce(&r), r);
        assert!(rel.vanishes(&(&f - &r)));
    }

    #[test]
    fn fraction_arithmetic() {
        let rel = cubic();
        let x = CurveFraction::var(Var::X);
        let y = CurveFraction::var(Var::Y);
        // y^2 / x^2 equals (x^2 - 2 u x + 1) / x on the curve.
        let lhs = y.pow(2).div(&x.pow(2));
        let u = MPoly::var(Var::U);
        let xm = MPoly::var(Var::X);
        let rhs = CurveFraction::new(
            &(&xm.pow(2) - &(&(&u * &xm) * &MPoly::int(2))) + &MPoly::one(),
            xm.clone(),
        );
        assert!(lhs.eq_on(&rhs, &rel));
        assert!(!lhs.eq_on(&x, &rel));
        assert_eq!(lhs.x_power_denominator(Var::X).unwrap(), 2);
        assert_eq!(x.scale(&q(3)).div(&x).constant_on(&rel), Some(q(3)));
        assert_eq!(x.constant_on(&rel), None);
    }

    #[test]
    fn substitution_clears_common_denominator() {
        let xm = MPoly::var(Var::X);
        let f = &xm.pow(2) + &MPoly::int(1);
        let half = CurveFraction::new(MPoly::one(), MPoly::int(2));
        let fr = CurveFraction::substitute_into(&f, &[(Var::X, half)]);
        assert_eq!(fr.num.as_constant().unwrap() / fr.den.as_constant().unwrap(), qf(5, 4));
    }
}

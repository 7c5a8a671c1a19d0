//! Univariate rational functions in lowest terms.

use super::{ArithError, Poly, Q};
use num_traits::Zero;
use std::fmt;

/// `num / den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RationalFunction { num, den: Poly::one() });
        }
        let g = num.gcd(&den);
        let mut n = num.exact_div(&g).expect("gcd divides");
        let mut d = den.exact_div(&g).expect("gcd divides");
        let lc = d.lc();
        n = n.scale(&lc.recip());
        d = d.scale(&lc.recip());
        Ok(RationalFunction { num: n, den: d })
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction { num: p, den: Poly::one() }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn eval(&self, x: &Q) -> Result<Q, ArithError> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(ArithError::Pole);
        }
        Ok(self.num.eval(x) / d)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
        .expect("nonzero denominators")
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Q::from_integer(1.into())))
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(&self.num * &o.num, &self.den * &o.den).expect("nonzero denominators")
    }

    pub fn div(&self, o: &Self) -> Result<Self, ArithError> {
        Self::new(&self.num * &o.den, &self.den * &o.num)
    }

    pub fn scale(&self, k: &Q) -> Self {
        Self::new(self.num.scale(k), self.den.clone()).expect("nonzero denominator")
    }

    pub fn pow(&self, n: usize) -> Self {
        RationalFunction { num: self.num.pow(n), den: self.den.pow(n) }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative()),
            self.den.pow(2),
        )
        .expect("nonzero denominator")
    }

    /// `self(g(.))` for a polynomial argument.
    pub fn compose_poly(&self, g: &Poly) -> Result<Self, ArithError> {
        Self::new(self.num.compose(g), self.den.compose(g))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qf};

    #[test]
    fn pole_of_base_change_map() {
        let (a, b, c) = (q(1), q(2), q(3));
        let p = Poly::new(vec![-b, -q(3) * a, q(0), q(4)]);
        let r = Poly::linear_root(&c);
        let u = RationalFunction::new(p.clone(), r.pow(2)).unwrap();
        assert_eq!(u.eval(&c), Err(ArithError::Pole));
        assert_eq!(u.eval(&q(4)).unwrap(), p.eval(&q(4)));
    }

    #[test]
    fn lowest_terms_and_derivative() {
        let f = RationalFunction::new(Poly::from_ints(&[-1, 0, 1]), Poly::from_ints(&[-2, 2])).unwrap();
        assert_eq!(f.num(), &Poly::new(vec![qf(1, 2), qf(1, 2)]));
        assert_eq!(f.den(), &Poly::one());
        let g = RationalFunction::new(Poly::one(), Poly::var()).unwrap();
        assert_eq!(g.derivative(), RationalFunction::new(Poly::from_ints(&[-1]), Poly::var().pow(2)).unwrap());
        assert!(RationalFunction::new(Poly::one(), Poly::zero()).is_err());
    }
}

//! Sparse multivariate polynomials over Q with a small fixed variable table.

use super::{show_q, Poly, Q};
use num_traits::{One, Signed, Zero};
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub usize);

impl Var {
    pub const X: Var = Var(0);
    pub const Y: Var = Var(1);
    pub const XH: Var = Var(2);
    pub const YH: Var = Var(3);
    pub const U: Var = Var(4);
    pub const P: Var = Var(5);
    pub const R: Var = Var(6);
    pub const T: Var = Var(7);
    pub const A: Var = Var(8);
    pub const B: Var = Var(9);
    pub const C: Var = Var(10);

    pub fn name(self) -> String {
        const NAMES: [&str; 11] = ["x", "y", "xh", "yh", "u", "P", "R", "t", "a", "b", "c"];
        NAMES
            .get(self.0)
            .map(|s| s.to_string())
            .unwrap_or_else(|| format!("v{}", self.0))
    }
}

type Exp = Vec<u32>;

fn trim(mut e: Exp) -> Exp {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

fn exp_of(e: &Exp, v: Var) -> u32 {
    e.get(v.0).copied().unwrap_or(0)
}

fn exp_add(a: &Exp, b: &Exp) -> Exp {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0))
            .collect(),
    )
}

#[derive(Clone, PartialEq, Eq, Default)]
pub struct MPoly {
    terms: BTreeMap<Exp, Q>,
}

impl MPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        let mut m = Self::zero();
        m.add_term(Vec::new(), c);
        m
    }

    pub fn int(n: i64) -> Self {
        Self::constant(super::q(n))
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(Q::one(), &[(v, 1)])
    }

    pub fn monomial(c: Q, powers: &[(Var, u32)]) -> Self {
        let mut e = Vec::new();
        for &(v, k) in powers {
            if e.len() <= v.0 {
                e.resize(v.0 + 1, 0);
            }
            e[v.0] += k;
        }
        let mut m = Self::zero();
        m.add_term(trim(e), c);
        m
    }

    /// Embeds a univariate polynomial in the variable `v`.
    pub fn from_poly(p: &Poly, v: Var) -> Self {
        let mut m = Self::zero();
        for (i, c) in p.coeffs().iter().enumerate() {
            m = &m + &Self::monomial(c.clone(), &[(v, i as u32)]);
        }
        m
    }

    fn add_term(&mut self, e: Exp, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Q)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    /// The constant value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, k: &Q) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms.keys().map(|e| exp_of(e, v)).max()
    }

    pub fn uses(&self, v: Var) -> bool {
        self.terms.keys().any(|e| exp_of(e, v) > 0)
    }

    /// Coefficients with respect to `v`: `self = sum_k out[k] * v^k`.
    pub fn coeffs_in(&self, v: Var) -> Vec<MPoly> {
        let d = self.degree_in(v).unwrap_or(0) as usize;
        let mut out = vec![MPoly::zero(); d + 1];
        for (e, c) in &self.terms {
            let k = exp_of(e, v) as usize;
            let mut e2 = e.clone();
            if v.0 < e2.len() {
                e2[v.0] = 0;
            }
            out[k].add_term(trim(e2), c.clone());
        }
        out
    }

    pub fn derivative(&self, v: Var) -> Self {
        let mut m = Self::zero();
        for (e, c) in &self.terms {
            let k = exp_of(e, v);
            if k == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[v.0] -= 1;
            m.add_term(trim(e2), c * super::q(k as i64));
        }
        m
    }

    /// Simultaneous substitution of variables by polynomials.
    pub fn substitute(&self, map: &[(Var, MPoly)]) -> Self {
        let lookup: HashMap<usize, &MPoly> = map.iter().map(|(v, p)| (v.0, p)).collect();
        let mut cache: HashMap<(usize, u32), MPoly> = HashMap::new();
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let mut kept = Vec::new();
            let mut term = MPoly::constant(c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                match lookup.get(&i) {
                    Some(p) => {
                        let pw = cache
                            .entry((i, k))
                            .or_insert_with(|| p.pow(k))
                            .clone();
                        term = &term * &pw;
                    }
                    None => kept.push((Var(i), k)),
                }
            }
            if !kept.is_empty() {
                term = &term * &MPoly::monomial(Q::one(), &kept);
            }
            out = &out + &term;
        }
        out
    }

    /// Substitutes rational values for variables.
    pub fn eval_at(&self, values: &[(Var, Q)]) -> Self {
        let map: Vec<(Var, MPoly)> = values
            .iter()
            .map(|(v, x)| (*v, MPoly::constant(x.clone())))
            .collect();
        self.substitute(&map)
    }

    /// Univariate view when `v` is the only variable present.
    pub fn to_poly(&self, v: Var) -> Option<Poly> {
        let cs = self.coeffs_in(v);
        let mut out = Vec::with_capacity(cs.len());
        for c in cs {
            out.push(c.as_constant()?);
        }
        Some(Poly::new(out))
    }

    /// Componentwise minimum exponent over all terms.
    pub fn monomial_content(&self) -> Vec<u32> {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Vec::new();
        };
        let mut m = first.clone();
        for e in it {
            for (i, x) in m.iter_mut().enumerate() {
                *x = (*x).min(e.get(i).copied().unwrap_or(0));
            }
        }
        trim(m)
    }

    /// Divides every term by the monomial with exponents `e`; the caller
    /// guarantees divisibility.
    pub fn div_monomial(&self, e: &[u32]) -> Self {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| {
                    let d: Exp = (0..k.len())
                        .map(|i| k[i] - e.get(i).copied().unwrap_or(0))
                        .collect();
                    (trim(d), c.clone())
                })
                .collect(),
        }
    }

    /// A single term `c * monomial`, if that is what this is.
    pub fn as_monomial(&self) -> Option<(Q, Vec<u32>)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        Some((c.clone(), e.clone()))
    }

    fn fmt_term(e: &[u32]) -> String {
        e.iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(i, &k)| {
                if k == 1 {
                    Var(i).name()
                } else {
                    format!("{}^{}", Var(i).name(), k)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl Add<&MPoly> for &MPoly {
    type Output = MPoly;
    fn add(self, o: &MPoly) -> MPoly {
        let mut m = self.clone();
        for (e, c) in &o.terms {
            m.add_term(e.clone(), c.clone());
        }
        m
    }
}

impl Sub<&MPoly> for &MPoly {
    type Output = MPoly;
    fn sub(self, o: &MPoly) -> MPoly {
        let mut m = self.clone();
        for (e, c) in &o.terms {
            m.add_term(e.clone(), -c.clone());
        }
        m
    }
}

impl Mul<&MPoly> for &MPoly {
    type Output = MPoly;
    fn mul(self, o: &MPoly) -> MPoly {
        let mut acc: BTreeMap<Exp, Q> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                *acc.entry(exp_add(e1, e2)).or_insert_with(Q::zero) += c1 * c2;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        MPoly { terms: acc }
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&-Q::one())
    }
}

macro_rules! forward {
    ($tr:ident, $m:ident) => {
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, o: MPoly) -> MPoly {
                (&self).$m(&o)
            }
        }
        impl $tr<&MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, o: &MPoly) -> MPoly {
                (&self).$m(o)
            }
        }
        impl $tr<MPoly> for &MPoly {
            type Output = MPoly;
            fn $m(self, o: MPoly) -> MPoly {
                self.$m(&o)
            }
        }
    };
}
forward!(Add, add);
forward!(Sub, sub);
forward!(Mul, mul);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        // Highest total degree first, then reverse lexicographic.
        let mut ts: Vec<(&Exp, &Q)> = self.terms.iter().collect();
        ts.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (i, (e, c)) in ts.into_iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let abs = c.abs();
            let mono = Self::fmt_term(e);
            if mono.is_empty() {
                f.write_str(&show_q(&abs))?;
            } else if abs.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{}*{}", show_q(&abs), mono)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qf};

    fn x() -> MPoly {
        MPoly::var(Var::X)
    }
    fn y() -> MPoly {
        MPoly::var(Var::Y)
    }

    #[test]
    fn ring_ops() {
        let s = &x() + &y();
        let d = &x() - &y();
        assert_eq!(&s * &d, &x().pow(2) - &y().pow(2));
        assert!((&s - &s).is_zero());
        assert_eq!((&s * &MPoly::int(0)), MPoly::zero());
    }

    #[test]
    fn substitution_is_simultaneous() {
        let f = &x() - &y().scale(&q(2));
        let g = f.substitute(&[(Var::X, y()), (Var::Y, x())]);
        assert_eq!(g, &y() - &x().scale(&q(2)));
    }

    #[test]
    fn coefficients_and_derivative() {
        let f = &(&x().pow(2) * &y()) + &x().scale(&qf(1, 2));
        let cs = f.coeffs_in(Var::X);
        assert_eq!(cs.len(), 3);
        assert_eq!(cs[2], y());
        assert_eq!(f.derivative(Var::X), &(&x() * &y()).scale(&q(2)) + &MPoly::constant(qf(1, 2)));
        assert_eq!(f.degree_in(Var::Y), Some(1));
    }

    #[test]
    fn univariate_round_trip() {
        let p = Poly::from_ints(&[1, -2, 0, 4]);
        let m = MPoly::from_poly(&p, Var::T);
        assert_eq!(m.to_poly(Var::T), Some(p));
        assert_eq!((&m * &x()).to_poly(Var::T), None);
    }

    #[test]
    fn monomial_content_division() {
        let f = &(&x().pow(3) * &y()) + &x().pow(2);
        assert_eq!(f.monomial_content(), vec![2]);
        assert_eq!(f.div_monomial(&[2]), &(&x() * &y()) + &MPoly::one());
    }

    #[test]
    fn display() {
        let f = &(&x().pow(2) * &y()).scale(&q(4)) - &MPoly::var(Var::P).scale(&qf(1, 2));
        assert_eq!(f.to_string(), "4*x^2*y - 1/2*P");
    }
}

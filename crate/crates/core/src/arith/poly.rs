//! Dense univariate polynomials over Q.

use super::{fmt_q, parse_q, show_q, ArithError, Q};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{de::Error as _, ser::SerializeSeq, Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Coefficients are stored lowest degree first with no trailing zeros, so the
/// zero polynomial is the empty vector and has no degree.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    c: Vec<Q>,
}

impl Poly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&n| super::q(n)).collect())
    }

    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(x: Q) -> Self {
        Self::new(vec![x])
    }

    /// The base variable.
    pub fn var() -> Self {
        Self::monomial(Q::one(), 1)
    }

    pub fn monomial(x: Q, n: usize) -> Self {
        let mut c = vec![Q::zero(); n + 1];
        c[n] = x;
        Self::new(c)
    }

    /// `x - root`.
    pub fn linear_root(root: &Q) -> Self {
        Self::new(vec![-root.clone(), Q::one()])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.c.get(i).cloned().unwrap_or_else(Q::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn lc(&self) -> Q {
        self.c.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    pub fn scale(&self, k: &Q) -> Self {
        Self::new(self.c.iter().map(|a| a * k).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().recip())
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn divrem(&self, g: &Poly) -> Result<(Poly, Poly), ArithError> {
        let dg = g.degree().ok_or(ArithError::DivisionByZero)?;
        let mut r = self.c.clone();
        if r.len() <= dg {
            return Ok((Poly::zero(), self.clone()));
        }
        let inv = g.lc().recip();
        let mut qc = vec![Q::zero(); r.len() - dg];
        for i in (0..qc.len()).rev() {
            let k = &r[i + dg] * &inv;
            if k.is_zero() {
                continue;
            }
            for (j, gj) in g.c.iter().enumerate() {
                r[i + j] -= &k * gj;
            }
            qc[i] = k;
        }
        r.truncate(dg);
        Ok((Poly::new(qc), Poly::new(r)))
    }

    /// Quotient when `g` divides `self` exactly.
    pub fn exact_div(&self, g: &Poly) -> Option<Poly> {
        let (q, r) = self.divrem(g).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn rem(&self, g: &Poly) -> Result<Poly, ArithError> {
        Ok(self.divrem(g)?.1)
    }

    /// Monic gcd; `gcd(0, 0) = 0`. Runs a primitive pseudo-remainder
    /// sequence over Z to avoid normalizing fractions at every step.
    pub fn gcd(&self, g: &Poly) -> Poly {
        let mut a = primitive_int(self);
        let mut b = primitive_int(g);
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_empty() {
            let r = primitive(pseudo_rem(a, &b));
            a = b;
            b = r;
        }
        Poly::new(a.into_iter().map(Q::from_integer).collect()).monic()
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * super::q(i as i64))
                .collect(),
        )
    }

    /// `self(g(.))`.
    pub fn compose(&self, g: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for a in self.c.iter().rev() {
            acc = &(&acc * g) + &Poly::constant(a.clone());
        }
        acc
    }

    /// Largest `k` with `f^k | g`.
    pub fn multiplicity(f: &Poly, g: &Poly) -> Result<usize, ArithError> {
        if f.is_constant() {
            return Err(ArithError::InvalidArgument("multiplicity base must be nonconstant"));
        }
        if g.is_zero() {
            return Err(ArithError::InvalidArgument("multiplicity target must be nonzero"));
        }
        let mut k = 0;
        let mut cur = g.clone();
        while let Some(q) = cur.exact_div(f) {
            cur = q;
            k += 1;
        }
        Ok(k)
    }

    /// Yun's algorithm: `self = lc * prod s_i^i` with `s_i` squarefree, monic,
    /// pairwise coprime. Only nonconstant factors are returned.
    pub fn squarefree_decomposition(&self) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a = f.gcd(&df);
        let mut b = f.exact_div(&a).expect("gcd divides");
        let mut c = df.exact_div(&a).expect("gcd divides");
        let mut i = 1;
        loop {
            let d = &c - &b.derivative();
            if b.is_constant() {
                break;
            }
            let s = b.gcd(&d);
            if !s.is_constant() {
                out.push((s.clone(), i));
            }
            b = b.exact_div(&s).expect("gcd divides");
            c = d.exact_div(&s).expect("gcd divides");
            i += 1;
        }
        out
    }

    pub fn squarefree_part(&self) -> Poly {
        self.squarefree_decomposition()
            .into_iter()
            .fold(Poly::one(), |acc, (s, _)| &acc * &s)
    }

    pub fn to_string_var(&self, v: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let abs = a.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => v.to_string(),
                _ => format!("{v}^{i}"),
            };
            if mono.is_empty() {
                s.push_str(&show_q(&abs));
            } else if abs.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{}*{}", show_q(&abs), mono));
            }
        }
        s
    }
}

/// Integer coefficients with content 1 and positive leading coefficient.
fn primitive_int(p: &Poly) -> Vec<BigInt> {
    let den = p.c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    primitive(p.c.iter().map(|x| (x * Q::from_integer(den.clone())).to_integer()).collect())
}

fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(|x| x.is_zero()) {
        v.pop();
    }
    let content = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if content.is_zero() {
        return v;
    }
    let sign = if v.last().is_some_and(|x| x.is_negative()) { -content } else { content };
    v.iter().map(|x| x / &sign).collect()
}

/// `lc(b)^k a mod b` over Z, with `b` nonzero.
fn pseudo_rem(mut a: Vec<BigInt>, b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lb = &b[db];
    while a.len() > db && !a.is_empty() {
        let da = a.len() - 1;
        let la = a[da].clone();
        for x in a.iter_mut() {
            *x *= lb;
        }
        for (i, bi) in b.iter().enumerate() {
            a[da - db + i] -= &la * bi;
        }
        while a.last().is_some_and(|x| x.is_zero()) {
            a.pop();
        }
        if a.len() > 1 && a.len() > db {
            // keep coefficients small between steps
            a = primitive(a);
        }
    }
    a
}

/// Pairwise coprime, squarefree, monic polynomials such that every input is a
/// constant times a product of powers of them, with each input's multiplicity
/// constant along the roots of every basis element.
pub fn gcd_free_basis(polys: &[Poly]) -> Vec<Poly> {
    let mut pool: Vec<Poly> = Vec::new();
    for f in polys {
        if f.is_zero() {
            continue;
        }
        for (s, _) in f.squarefree_decomposition() {
            pool.push(s);
        }
    }
    // Coprime refinement: split any two elements sharing a factor.
    'outer: loop {
        pool.retain(|p| !p.is_constant());
        for i in 0..pool.len() {
            for j in (i + 1)..pool.len() {
                let g = pool[i].gcd(&pool[j]);
                if g.is_constant() {
                    continue;
                }
                let a = pool[i].exact_div(&g).expect("gcd divides");
                let b = pool[j].exact_div(&g).expect("gcd divides");
                pool[i] = a.monic();
                pool[j] = b.monic();
                pool.push(g);
                continue 'outer;
            }
        }
        break;
    }
    pool.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| cmp_coeffs(a, b)));
    pool.dedup();
    pool
}

fn cmp_coeffs(a: &Poly, b: &Poly) -> std::cmp::Ordering {
    a.c.iter().cmp(b.c.iter())
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly {
                (&self).$m(&o)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, o: &Poly) -> Poly {
                (&self).$m(o)
            }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly {
                self.$m(&o)
            }
        }
    };
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    /// Multiplies integer numerators over a common denominator per factor,
    /// reducing each output coefficient once.
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let (a, da) = integer_parts(&self.c);
        let (b, db) = integer_parts(&o.c);
        let mut c = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        let den = da * db;
        Poly::new(c.into_iter().map(|n| Q::new(n, den.clone())).collect())
    }
}

/// `(numerators, d)` with `c_i = numerators_i / d`.
fn integer_parts(c: &[Q]) -> (Vec<BigInt>, BigInt) {
    let d = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let n = c.iter().map(|x| x.numer() * (&d / x.denom())).collect();
    (n, d)
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.c.iter().map(|a| -a).collect())
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_var("t"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.c.len()))?;
        for a in &self.c {
            seq.serialize_element(&fmt_q(a))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        let c = v
            .iter()
            .map(|s| parse_q(s).map_err(D::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Poly::new(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qf};

    fn t() -> Poly {
        Poly::var()
    }

    #[test]
    fn gcd_shared_root() {
        let f = Poly::from_ints(&[-1, 0, 1]);
        let g = Poly::from_ints(&[-1, 1]);
        assert_eq!(f.gcd(&g), g);
        assert_eq!(Poly::zero().gcd(&Poly::zero()), Poly::zero());
        assert_eq!(Poly::from_ints(&[0, 2]).gcd(&Poly::zero()), t());
    }

    #[test]
    fn derivative_of_cubic() {
        let (a, b) = (qf(5, 3), q(-2));
        let p = Poly::new(vec![-b.clone(), -q(3) * &a, q(0), q(4)]);
        assert_eq!(p.derivative(), Poly::new(vec![-q(3) * a, q(0), q(12)]));
    }

    #[test]
    fn divrem_and_errors() {
        let f = Poly::from_ints(&[1, 2, 3, 4]);
        let g = Poly::from_ints(&[1, 1]);
        let (qq, r) = f.divrem(&g).unwrap();
        assert_eq!(&(&qq * &g) + &r, f);
        assert!(r.degree().unwrap_or(0) < 1);
        assert_eq!(f.divrem(&Poly::zero()), Err(ArithError::DivisionByZero));
    }

    #[test]
    fn zero_has_no_degree() {
        assert_eq!(Poly::zero().degree(), None);
        assert_eq!(Poly::one().degree(), Some(0));
        assert_eq!((&t() - &t()).degree(), None);
    }

    #[test]
    fn multiplicity_examples() {
        assert_eq!(Poly::multiplicity(&t(), &t().pow(3)).unwrap(), 3);
        let tm1 = Poly::from_ints(&[-1, 1]);
        assert_eq!(Poly::multiplicity(&tm1, &Poly::from_ints(&[1, 0, 1])).unwrap(), 0);
        assert!(Poly::multiplicity(&Poly::one(), &t()).is_err());
        assert!(Poly::multiplicity(&t(), &Poly::zero()).is_err());
    }

    #[test]
    fn compose_and_eval() {
        let f = Poly::from_ints(&[1, 0, 1]);
        let g = Poly::from_ints(&[2, 3]);
        let h = f.compose(&g);
        for x in -3..4 {
            let x = q(x);
            assert_eq!(h.eval(&x), f.eval(&g.eval(&x)));
        }
    }

    #[test]
    fn squarefree_decomposition_yun() {
        let a = Poly::from_ints(&[-1, 1]);
        let b = Poly::from_ints(&[2, 1]);
        let f = (&a.pow(3) * &b).scale(&q(5));
        let d = f.squarefree_decomposition();
        assert_eq!(d, vec![(b.clone(), 1), (a.clone(), 3)]);
        assert_eq!(f.squarefree_part(), &a * &b);
    }

    #[test]
    fn basis_examples() {
        let tm1 = Poly::from_ints(&[-1, 1]);
        let basis = gcd_free_basis(&[&t() * &tm1, tm1.pow(2)]);
        assert_eq!(basis, vec![tm1.clone(), t()]);
        assert_eq!(gcd_free_basis(&[t().pow(2)]), vec![t()]);
    }

    #[test]
    fn display_and_serde() {
        let p = Poly::new(vec![qf(-1, 2), q(0), q(-3), q(4)]);
        assert_eq!(p.to_string(), "4*t^3 - 3*t^2 - 1/2");
        let js = serde_json::to_string(&p).unwrap();
        assert_eq!(js, r#"["-1/2","0/1","-3/1","4/1"]"#);
        let back: Poly = serde_json::from_str(&js).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<Poly>(r#"["1/0"]"#).is_err());
    }
}

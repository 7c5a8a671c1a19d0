//! Integer 2x2 matrices of determinant one and the monodromy matrices of the
//! Seiberg-Witten surfaces and their base changes.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonodromyError {
    #[error("determinant is {0}, not 1")]
    NotUnimodular(BigInt),
    #[error("label {0} is not a singular fiber of {1}")]
    UnknownLabel(String, &'static str),
    #[error("{label}: word gives {word}, explicit matrix is {explicit}")]
    WordMismatch { label: String, word: SL2Z, explicit: SL2Z },
}

/// Row-major `[[a, b], [c, d]]` with `ad - bc = 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SL2Z {
    e: [BigInt; 4],
}

impl SL2Z {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self, MonodromyError> {
        let det = &a * &d - &b * &c;
        if !det.is_one() {
            return Err(MonodromyError::NotUnimodular(det));
        }
        Ok(SL2Z { e: [a, b, c, d] })
    }

    pub fn from_i64(m: [[i64; 2]; 2]) -> Result<Self, MonodromyError> {
        Self::new(m[0][0].into(), m[0][1].into(), m[1][0].into(), m[1][1].into())
    }

    pub fn identity() -> Self {
        SL2Z { e: [BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()] }
    }

    pub fn entries(&self) -> &[BigInt; 4] {
        &self.e
    }

    pub fn det(&self) -> BigInt {
        &self.e[0] * &self.e[3] - &self.e[1] * &self.e[2]
    }

    pub fn mul(&self, o: &Self) -> Self {
        let [a, b, c, d] = &self.e;
        let [p, q, r, s] = &o.e;
        SL2Z { e: [a * p + b * r, a * q + b * s, c * p + d * r, c * q + d * s] }
    }

    pub fn inverse(&self) -> Self {
        let [a, b, c, d] = &self.e;
        SL2Z { e: [d.clone(), -b, -c, a.clone()] }
    }

    pub fn neg(&self) -> Self {
        SL2Z { e: self.e.clone().map(|x| -x) }
    }

    /// Integer power; negative exponents use the inverse.
    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Self::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    pub fn conjugate_by(&self, g: &Self) -> Self {
        g.mul(self).mul(&g.inverse())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn to_rows(&self) -> [[String; 2]; 2] {
        let s = |i: usize| self.e[i].to_string();
        [[s(0), s(1)], [s(2), s(3)]]
    }
}

impl fmt::Display for SL2Z {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.e[0], self.e[1], self.e[2], self.e[3])
    }
}

impl fmt::Debug for SL2Z {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SL2Z{}", self)
    }
}

impl Serialize for SL2Z {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    T,
    S,
}

pub fn build_generator(tag: Generator) -> SL2Z {
    match tag {
        Generator::T => SL2Z::from_i64([[1, 1], [0, 1]]),
        Generator::S => SL2Z::from_i64([[0, -1], [1, 0]]),
    }
    .expect("unimodular")
}

fn t() -> SL2Z {
    build_generator(Generator::T)
}

fn s() -> SL2Z {
    build_generator(Generator::S)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Surface {
    /// `Y_SW`
    Ysw,
    /// `X_SW`
    Xsw,
    Yabc,
    Xabc,
}

impl Surface {
    pub fn name(self) -> &'static str {
        match self {
            Surface::Ysw => "Y_SW",
            Surface::Xsw => "X_SW",
            Surface::Yabc => "Y_abc",
            Surface::Xabc => "X_abc",
        }
    }

    fn hatted(self) -> bool {
        matches!(self, Surface::Xsw | Surface::Xabc)
    }

    fn is_k3(self) -> bool {
        matches!(self, Surface::Yabc | Surface::Xabc)
    }
}

/// Base point of a loop: `u = -1, 1, inf` on the Seiberg-Witten surfaces,
/// `t = 0, t_1..t_6, inf` on the K3 families. `Zero` on a Seiberg-Witten
/// surface names the square of the loop at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Puncture {
    MinusOne,
    One,
    Infinity,
    Zero,
    Root(u8),
}

impl fmt::Display for Puncture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Puncture::MinusOne => write!(f, "-1"),
            Puncture::One => write!(f, "1"),
            Puncture::Infinity => write!(f, "inf"),
            Puncture::Zero => write!(f, "0"),
            Puncture::Root(i) => write!(f, "t{i}"),
        }
    }
}

/// A matrix built from its conjugation word and checked against the
/// explicit entries.
#[derive(Debug, Clone, Serialize)]
pub struct NamedMatrix {
    pub label: String,
    pub word: String,
    pub matrix: SL2Z,
}

fn sw_word(hat: bool, at: Puncture) -> Option<(String, SL2Z, [[i64; 2]; 2])> {
    let (t, s) = (t(), s());
    Some(match (hat, at) {
        (false, Puncture::MinusOne) => {
            ("(TS) T^2 (TS)^-1".into(), t.pow(2).conjugate_by(&t.mul(&s)), [[-1, 2], [-2, 3]])
        }
        (false, Puncture::One) => ("S T^2 S^-1".into(), t.pow(2).conjugate_by(&s), [[1, 0], [-2, 1]]),
        (false, Puncture::Infinity) => ("-T^2".into(), t.pow(2).neg(), [[-1, -2], [0, -1]]),
        (false, Puncture::Zero) => ("(-T^2)^2".into(), t.pow(2).neg().pow(2), [[1, 4], [0, 1]]),
        (true, Puncture::MinusOne) => {
            ("(T^2 S) T (T^2 S)^-1".into(), t.conjugate_by(&t.pow(2).mul(&s)), [[-1, 4], [-1, 3]])
        }
        (true, Puncture::One) => ("S T S^-1".into(), t.conjugate_by(&s), [[1, 0], [-1, 1]]),
        (true, Puncture::Infinity) => ("-T^4".into(), t.pow(4).neg(), [[-1, -4], [0, -1]]),
        (true, Puncture::Zero) => ("(-T^4)^2".into(), t.pow(4).neg().pow(2), [[1, 8], [0, 1]]),
        _ => return None,
    })
}

/// Builds the monodromy matrix around `at` from its word and compares it with
/// the explicit matrix.
pub fn build_monodromy(surface: Surface, at: Puncture) -> Result<NamedMatrix, MonodromyError> {
    let unknown = || MonodromyError::UnknownLabel(at.to_string(), surface.name());
    // On the K3 families t_{2i} lies over u = -1 and t_{2i-1} over u = 1.
    let sw_at = match (surface.is_k3(), at) {
        (true, Puncture::Root(i)) if (1..=6).contains(&i) => {
            if i % 2 == 0 {
                Puncture::MinusOne
            } else {
                Puncture::One
            }
        }
        (true, Puncture::Zero | Puncture::Infinity) => at,
        (false, Puncture::MinusOne | Puncture::One | Puncture::Infinity | Puncture::Zero) => at,
        _ => return Err(unknown()),
    };
    let (word, m, explicit) = sw_word(surface.hatted(), sw_at).ok_or_else(unknown)?;
    let explicit = SL2Z::from_i64(explicit)?;
    let hat = if surface.hatted() { "^" } else { "" };
    let label = format!("M{hat}_{at} ({})", surface.name());
    if m != explicit {
        return Err(MonodromyError::WordMismatch { label, word: m, explicit });
    }
    Ok(NamedMatrix { label, word, matrix: m })
}

/// Ordered factors, multiplied left to right.
#[derive(Debug, Clone, Serialize)]
pub struct MonodromyWord {
    pub factors: Vec<NamedMatrix>,
}

impl MonodromyWord {
    pub fn from_punctures(surface: Surface, order: &[Puncture]) -> Result<Self, MonodromyError> {
        let factors = order.iter().map(|&p| build_monodromy(surface, p)).collect::<Result<_, _>>()?;
        Ok(MonodromyWord { factors })
    }

    pub fn product(&self) -> SL2Z {
        self.factors.iter().fold(SL2Z::identity(), |acc, f| acc.mul(&f.matrix))
    }

    pub fn labels(&self) -> Vec<String> {
        self.factors.iter().map(|f| f.label.clone()).collect()
    }
}

pub fn verify_relation(word: &MonodromyWord) -> bool {
    word.product().is_identity()
}

/// `M_inf M_1 M_-1`.
pub fn three_factor_relation(surface: Surface) -> Result<MonodromyWord, MonodromyError> {
    MonodromyWord::from_punctures(surface, &[Puncture::Infinity, Puncture::One, Puncture::MinusOne])
}

/// `M_0 M_t1 M_t2 M_t3 M_t4 M_inf M_t5 M_t6`.
pub fn eight_factor_relation(surface: Surface) -> Result<MonodromyWord, MonodromyError> {
    use Puncture::*;
    MonodromyWord::from_punctures(
        surface,
        &[Zero, Root(1), Root(2), Root(3), Root(4), Infinity, Root(5), Root(6)],
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationVerdict {
    pub name: String,
    pub factors: Vec<String>,
    pub product: SL2Z,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonodromyReport {
    pub matrices: Vec<NamedMatrix>,
    pub relations: Vec<RelationVerdict>,
    /// `M_0 = M_inf^2` for the unhatted and hatted K3 families.
    pub zero_is_square_of_infinity: [bool; 2],
}

impl MonodromyReport {
    pub fn all_hold(&self) -> bool {
        self.relations.iter().all(|r| r.holds) && self.zero_is_square_of_infinity.iter().all(|&b| b)
    }
}

/// Builds all eight Seiberg-Witten matrices and checks every relation.
pub fn verify_all() -> Result<MonodromyReport, MonodromyError> {
    use Puncture::*;
    let mut matrices = Vec::new();
    for surface in [Surface::Ysw, Surface::Xsw] {
        for p in [MinusOne, One, Infinity, Zero] {
            matrices.push(build_monodromy(surface, p)?);
        }
    }
    let mut relations = Vec::new();
    for (name, w) in [
        ("M_inf M_1 M_-1 = I (Y_SW)", three_factor_relation(Surface::Ysw)?),
        ("M^_inf M^_1 M^_-1 = I (X_SW)", three_factor_relation(Surface::Xsw)?),
        ("M_0 M_t1 M_t2 M_t3 M_t4 M_inf M_t5 M_t6 = I (Y_abc)", eight_factor_relation(Surface::Yabc)?),
        ("M^_0 M^_t1 M^_t2 M^_t3 M^_t4 M^_inf M^_t5 M^_t6 = I (X_abc)", eight_factor_relation(Surface::Xabc)?),
    ] {
        relations.push(RelationVerdict {
            name: name.into(),
            factors: w.labels(),
            product: w.product(),
            holds: verify_relation(&w),
        });
    }
    let square = |s: Surface| -> Result<bool, MonodromyError> {
        let z = build_monodromy(s, Zero)?.matrix;
        let inf = build_monodromy(s, Infinity)?.matrix;
        Ok(z == inf.pow(2))
    };
    Ok(MonodromyReport {
        matrices,
        relations,
        zero_is_square_of_infinity: [square(Surface::Yabc)?, square(Surface::Xabc)?],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators() {
        assert_eq!(build_generator(Generator::T).to_rows(), [["1", "1"], ["0", "1"]]);
        assert_eq!(build_generator(Generator::S).to_rows(), [["0", "-1"], ["1", "0"]]);
        assert!(build_generator(Generator::S).pow(4).is_identity());
        assert!(!build_generator(Generator::S).pow(2).is_identity());
        assert!(SL2Z::from_i64([[2, 0], [0, 1]]).is_err());
    }

    #[test]
    fn named_matrices() {
        let m = build_monodromy(Surface::Xsw, Puncture::Infinity).unwrap();
        assert_eq!(m.matrix, SL2Z::from_i64([[-1, -4], [0, -1]]).unwrap());
        let m = build_monodromy(Surface::Yabc, Puncture::Root(4)).unwrap();
        assert_eq!(m.matrix, SL2Z::from_i64([[-1, 2], [-2, 3]]).unwrap());
        assert!(build_monodromy(Surface::Ysw, Puncture::Root(1)).is_err());
        assert!(build_monodromy(Surface::Yabc, Puncture::Root(7)).is_err());
        assert!(build_monodromy(Surface::Yabc, Puncture::One).is_err());
    }

    #[test]
    fn all_relations() {
        let r = verify_all().unwrap();
        assert_eq!(r.matrices.len(), 8);
        assert!(r.matrices.iter().all(|m| m.matrix.det().is_one()));
        assert!(r.all_hold());
    }

    #[test]
    fn order_matters() {
        let mut w = three_factor_relation(Surface::Ysw).unwrap();
        w.factors.swap(1, 2);
        assert!(!verify_relation(&w));
    }
}

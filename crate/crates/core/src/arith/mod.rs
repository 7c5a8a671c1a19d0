//! Exact rational arithmetic: univariate and sparse multivariate polynomials,
//! rational functions, and reduction in the coordinate ring of a curve
//! `y^2 = rhs(x)`.

pub mod curve;
pub mod linalg;
pub mod mpoly;
pub mod poly;
pub mod ratfun;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

pub use curve::{CurveFraction, CurveRelation, CurveRingElement};
pub use mpoly::{MPoly, Var};
pub use poly::Poly;
pub use ratfun::RationalFunction;

/// Exact rational scalar.
pub type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("cannot parse rational {0:?}")]
    Parse(String),
    #[error("pole at the evaluation point")]
    Pole,
    #[error("denominator {0} is not a power of the curve's x coordinate")]
    NonMonomialDenominator(String),
    #[error("denominator vanishes identically on the curve")]
    DenominatorCollapse,
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"n"`, `"n/d"` or a finite decimal such as `"-1.25"`.
pub fn parse_q(s: &str) -> Result<Q, ArithError> {
    let t = s.trim();
    let err = || ArithError::Parse(s.to_string());
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        let digits = format!("{}{}", if ip.is_empty() { "0" } else { ip }, fp);
        let n: BigInt = digits.parse().map_err(|_| err())?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let v = Q::new(n, d);
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = t.parse().map_err(|_| err())?;
    Ok(Q::from_integer(n))
}

/// Always `"num/den"`, the serialized coefficient form.
pub fn fmt_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Shortest readable form: `"3"` for integers, `"3/4"` otherwise.
pub fn show_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Exact rational power with integer exponent.
pub fn qpow(x: &Q, e: i32) -> Q {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

/// Exact rational square root when one exists.
pub fn q_sqrt(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

pub mod serde_q {
    //! Serde adapters storing rationals as `"num/den"` strings.
    use super::{fmt_q, parse_q, Q};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(D::Error::custom)
    }

    pub mod vec {
        use super::super::{fmt_q, parse_q, Q};
        use serde::{de::Error, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(xs.len()))?;
            for x in xs {
                seq.serialize_element(&fmt_q(x))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter()
                .map(|s| parse_q(s).map_err(D::Error::custom))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_q("3").unwrap(), q(3));
        assert_eq!(parse_q(" -6/4 ").unwrap(), qf(-3, 2));
        assert_eq!(parse_q("-1.25").unwrap(), qf(-5, 4));
        assert_eq!(parse_q("0.5").unwrap(), qf(1, 2));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("abc").is_err());
        assert!(parse_q("1.").is_err());
    }

    #[test]
    fn string_round_trip() {
        for x in [qf(-7, 3), q(0), q(12), qf(1, 1024)] {
            assert_eq!(parse_q(&fmt_q(&x)).unwrap(), x);
            assert_eq!(parse_q(&show_q(&x)).unwrap(), x);
        }
        assert_eq!(fmt_q(&q(0)), "0/1");
    }

    #[test]
    fn rational_sqrt() {
        assert_eq!(q_sqrt(&qf(9, 4)), Some(qf(3, 2)));
        assert_eq!(q_sqrt(&q(2)), None);
        assert_eq!(q_sqrt(&q(-4)), None);
    }
}

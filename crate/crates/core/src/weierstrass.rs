//! Weierstrass fibrations `Y^2 = 4X^3 - g2(t) X - g3(t)` over the projective
//! line: discriminant, minimal models, and Kodaira fiber classification.

use crate::arith::poly::gcd_free_basis;
use crate::arith::{Poly, Q};
use num_bigint::BigInt;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Vanishing order of the zero polynomial.
pub const INF: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FibrationError {
    #[error("discriminant vanishes identically")]
    SingularEverywhere,
    #[error("degree bound violated: deg g2 <= {0} and deg g3 <= {1} required")]
    DegreeBound(u32, u32),
    #[error("non-minimal order triple {0:?} at {1}")]
    NonMinimal([u32; 3], String),
    #[error("order triple {0:?} matches no Kodaira type")]
    InconsistentOrders([u32; 3]),
    #[error("only Mordell-Weil rank 0 is supported")]
    UnsupportedRank,
    #[error("torsion order must be positive")]
    ZeroTorsion,
}

#[derive(Clone, PartialEq, Eq)]
pub struct WeierstrassFibration {
    pub g2: Poly,
    pub g3: Poly,
    pub height: u32,
}

fn weighted_order(p: &Poly, weight: u32) -> u32 {
    match p.degree() {
        None => INF,
        Some(d) => weight.saturating_sub(d as u32),
    }
}

fn order(f: &Poly, g: &Poly) -> u32 {
    if g.is_zero() {
        INF
    } else {
        Poly::multiplicity(f, g).expect("nonconstant locus, nonzero target") as u32
    }
}

impl WeierstrassFibration {
    /// Checks only the degree bounds; minimality is a separate question so
    /// intermediate non-minimal models can be represented.
    pub fn new(g2: Poly, g3: Poly, height: u32) -> Result<Self, FibrationError> {
        let ok2 = g2.degree().is_none_or(|d| d as u32 <= 4 * height);
        let ok3 = g3.degree().is_none_or(|d| d as u32 <= 6 * height);
        if !(ok2 && ok3) {
            return Err(FibrationError::DegreeBound(4 * height, 6 * height));
        }
        Ok(WeierstrassFibration { g2, g3, height })
    }

    pub fn discriminant(&self) -> Poly {
        &self.g2.pow(3) - &self.g3.pow(2).scale(&crate::arith::q(27))
    }

    /// `(nu(g2), nu(g3), nu(Delta))` along the roots of a squarefree locus.
    pub fn orders_at(&self, locus: &Poly) -> [u32; 3] {
        self.orders_with(locus, &self.discriminant())
    }

    /// `orders_at` with a precomputed discriminant.
    pub fn orders_with(&self, locus: &Poly, delta: &Poly) -> [u32; 3] {
        [order(locus, &self.g2), order(locus, &self.g3), order(locus, delta)]
    }

    /// Orders at `t = infinity` from weighted degrees.
    pub fn orders_at_infinity(&self) -> [u32; 3] {
        let k = self.height;
        [
            weighted_order(&self.g2, 4 * k),
            weighted_order(&self.g3, 6 * k),
            weighted_order(&self.discriminant(), 12 * k),
        ]
    }

    pub fn is_minimal(&self) -> bool {
        let nonmin = |o: [u32; 3]| o[0] >= 4 && o[1] >= 6;
        if nonmin(self.orders_at_infinity()) {
            return false;
        }
        let basis = gcd_free_basis(&[self.g2.clone(), self.g3.clone()]);
        !basis.iter().any(|b| nonmin(self.orders_at(b)))
    }

    /// `j = 1728 g2^3 / Delta` at a rational parameter value.
    pub fn j_at(&self, t: &Q) -> Option<Q> {
        let d = self.discriminant().eval(t);
        if d == Q::from_integer(0.into()) {
            return None;
        }
        Some(crate::arith::q(1728) * num_traits::pow(self.g2.eval(t), 3) / d)
    }
}

impl fmt::Debug for WeierstrassFibration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W[k={}; g2 = {}; g3 = {}]", self.height, self.g2, self.g3)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kodaira {
    Smooth,
    I(u32),
    IStar(u32),
    II,
    III,
    IV,
    IVStar,
    IIIStar,
    IIStar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RootLattice {
    None,
    A(u32),
    D(u32),
    E(u32),
}

impl fmt::Display for RootLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootLattice::None => f.write_str("-"),
            RootLattice::A(n) => write!(f, "A{n}"),
            RootLattice::D(n) => write!(f, "D{n}"),
            RootLattice::E(n) => write!(f, "E{n}"),
        }
    }
}

impl Kodaira {
    pub fn root_lattice(self) -> RootLattice {
        match self {
            Kodaira::Smooth | Kodaira::II | Kodaira::I(0) | Kodaira::I(1) => RootLattice::None,
            Kodaira::I(n) => RootLattice::A(n - 1),
            Kodaira::IStar(n) => RootLattice::D(n + 4),
            Kodaira::III => RootLattice::A(1),
            Kodaira::IV => RootLattice::A(2),
            Kodaira::IVStar => RootLattice::E(6),
            Kodaira::IIIStar => RootLattice::E(7),
            Kodaira::IIStar => RootLattice::E(8),
        }
    }

    /// Order of the component group.
    pub fn mv(self) -> u32 {
        match self {
            Kodaira::Smooth | Kodaira::II | Kodaira::IIStar => 1,
            Kodaira::I(n) => n.max(1),
            Kodaira::IStar(_) => 4,
            Kodaira::III | Kodaira::IIIStar => 2,
            Kodaira::IV | Kodaira::IVStar => 3,
        }
    }

    pub fn euler(self) -> u32 {
        match self {
            Kodaira::Smooth => 0,
            Kodaira::I(n) => n,
            Kodaira::IStar(n) => n + 6,
            Kodaira::II => 2,
            Kodaira::III => 3,
            Kodaira::IV => 4,
            Kodaira::IVStar => 8,
            Kodaira::IIIStar => 9,
            Kodaira::IIStar => 10,
        }
    }

    pub fn tag(self) -> String {
        match self {
            Kodaira::Smooth => "I0".into(),
            Kodaira::I(n) => format!("I{n}"),
            Kodaira::IStar(n) => format!("I{n}*"),
            Kodaira::II => "II".into(),
            Kodaira::III => "III".into(),
            Kodaira::IV => "IV".into(),
            Kodaira::IVStar => "IV*".into(),
            Kodaira::IIIStar => "III*".into(),
            Kodaira::IIStar => "II*".into(),
        }
    }
}

impl fmt::Display for Kodaira {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

/// Kodaira's table on a minimal order triple.
pub fn classify_point(orders: [u32; 3]) -> Result<Kodaira, FibrationError> {
    let [a, b, d] = orders;
    if a >= 4 && b >= 6 {
        return Err(FibrationError::NonMinimal(orders, "point".into()));
    }
    let k = match (a, b, d) {
        (_, _, 0) => Kodaira::Smooth,
        (0, 0, n) => Kodaira::I(n),
        (a, 1, 2) if a >= 1 => Kodaira::II,
        (1, b, 3) if b >= 2 => Kodaira::III,
        (a, 2, 4) if a >= 2 => Kodaira::IV,
        (a, b, 6) if a >= 2 && b >= 3 => Kodaira::IStar(0),
        (2, 3, n) if n > 6 => Kodaira::IStar(n - 6),
        (a, 4, 8) if a >= 3 => Kodaira::IVStar,
        (3, b, 9) if b >= 5 => Kodaira::IIIStar,
        (a, 5, 10) if a >= 4 => Kodaira::IIStar,
        _ => return Err(FibrationError::InconsistentOrders(orders)),
    };
    Ok(k)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Locus {
    Finite(Poly),
    Infinity,
}

impl Locus {
    /// Number of geometric points.
    pub fn points(&self) -> u32 {
        match self {
            Locus::Finite(p) => p.degree().unwrap_or(0) as u32,
            Locus::Infinity => 1,
        }
    }
}

impl Serialize for Locus {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Locus::Finite(p) => p.serialize(s),
            Locus::Infinity => s.serialize_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberDatum {
    pub locus: Locus,
    pub orders: [u32; 3],
    pub kodaira: Kodaira,
}

impl FiberDatum {
    pub fn roots(&self) -> RootLattice {
        self.kodaira.root_lattice()
    }
    pub fn mv(&self) -> u32 {
        self.kodaira.mv()
    }
    pub fn euler(&self) -> u32 {
        self.kodaira.euler()
    }
}

fn order_json(o: u32) -> serde_json::Value {
    if o == INF {
        serde_json::Value::String("inf".into())
    } else {
        serde_json::Value::from(o)
    }
}

impl Serialize for FiberDatum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FiberDatum", 5)?;
        st.serialize_field("locus", &self.locus)?;
        let ords: Vec<serde_json::Value> = self.orders.iter().map(|&o| order_json(o)).collect();
        st.serialize_field("orders", &ords)?;
        st.serialize_field("type", &self.kodaira.tag())?;
        st.serialize_field("mv", &self.mv())?;
        st.serialize_field("euler", &self.euler())?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberConfiguration {
    pub fibers: Vec<FiberDatum>,
    #[serde(skip)]
    pub height: u32,
}

impl FiberConfiguration {
    /// Euler numbers summed over geometric points.
    pub fn euler_sum(&self) -> u32 {
        self.fibers.iter().map(|f| f.locus.points() * f.euler()).sum()
    }

    /// Multiset of singular fiber types over geometric points.
    pub fn type_counts(&self) -> BTreeMap<Kodaira, u32> {
        let mut m = BTreeMap::new();
        for f in &self.fibers {
            *m.entry(f.kodaira).or_insert(0) += f.locus.points();
        }
        m
    }

    pub fn has_types(&self, expected: &[(Kodaira, u32)]) -> bool {
        let mut want = BTreeMap::new();
        for &(k, n) in expected {
            *want.entry(k).or_insert(0) += n;
        }
        self.type_counts() == want
    }

    /// Compact summary such as `I8 + 6I1 + I4*`, largest Euler number first.
    pub fn summary(&self) -> String {
        let mut v: Vec<(Kodaira, u32)> = self.type_counts().into_iter().collect();
        v.sort_by(|a, b| b.0.euler().cmp(&a.0.euler()).then(a.0.cmp(&b.0)));
        v.iter()
            .map(|(k, n)| if *n == 1 { k.tag() } else { format!("{n}{}", k.tag()) })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Product of component-group orders over geometric points.
    pub fn mv_product(&self) -> BigInt {
        self.fibers
            .iter()
            .map(|f| num_traits::pow(BigInt::from(f.mv()), f.locus.points() as usize))
            .product()
    }

    /// Splits finite loci by gcd with the given polynomials. Orders are
    /// constant along each locus, so every piece keeps its datum.
    pub fn refine(&self, splitters: &[Poly]) -> FiberConfiguration {
        let mut out = Vec::new();
        for f in &self.fibers {
            let Locus::Finite(p) = &f.locus else {
                out.push(f.clone());
                continue;
            };
            let mut rest = p.clone();
            for s in splitters {
                let g = rest.gcd(s);
                if !g.is_constant() {
                    out.push(FiberDatum { locus: Locus::Finite(g.clone()), ..f.clone() });
                    rest = rest.exact_div(&g).expect("gcd divides").monic();
                }
            }
            if !rest.is_constant() {
                out.push(FiberDatum { locus: Locus::Finite(rest), ..f.clone() });
            }
        }
        FiberConfiguration { fibers: out, height: self.height }
    }

    /// Aligned text table with one row per locus; `label` names loci.
    pub fn table(&self, label: &dyn Fn(&Locus) -> String) -> String {
        let header = ["locus", "number of points", "nu(g2)", "nu(g3)", "nu(Delta)", "Kodaira type", "W_root"];
        let mut rows: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
        for f in &self.fibers {
            let o = |x: u32| if x == INF { "inf".to_string() } else { x.to_string() };
            rows.push(vec![
                label(&f.locus),
                f.locus.points().to_string(),
                o(f.orders[0]),
                o(f.orders[1]),
                o(f.orders[2]),
                f.kodaira.tag(),
                f.roots().to_string(),
            ]);
        }
        render_table(&rows)
    }
}

pub fn render_table(rows: &[Vec<String>]) -> String {
    let ncol = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let widths: Vec<usize> = (0..ncol)
        .map(|c| rows.iter().map(|r| r.get(c).map_or(0, |s| s.chars().count())).max().unwrap_or(0))
        .collect();
    let mut s = String::new();
    for (i, r) in rows.iter().enumerate() {
        let line: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(c, x)| format!("{:<w$}", x, w = widths[c]))
            .collect();
        s.push_str(line.join(" | ").trim_end());
        s.push('\n');
        if i == 0 {
            let sep: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
            s.push_str(&sep.join("-+-"));
            s.push('\n');
        }
    }
    s
}

pub fn classify_fibers(w: &WeierstrassFibration) -> Result<FiberConfiguration, FibrationError> {
    let delta = w.discriminant();
    if delta.is_zero() {
        return Err(FibrationError::SingularEverywhere);
    }
    WeierstrassFibration::new(w.g2.clone(), w.g3.clone(), w.height)?;
    let inputs: Vec<Poly> = [&w.g2, &w.g3, &delta]
        .into_iter()
        .filter(|p| !p.is_zero())
        .cloned()
        .collect();
    let mut fibers = Vec::new();
    for b in gcd_free_basis(&inputs) {
        if delta.exact_div(&b).is_none() {
            continue;
        }
        let orders = w.orders_with(&b, &delta);
        let kodaira = classify_point(orders).map_err(|e| match e {
            FibrationError::NonMinimal(o, _) => FibrationError::NonMinimal(o, b.to_string()),
            e => e,
        })?;
        fibers.push(FiberDatum { locus: Locus::Finite(b), orders, kodaira });
    }
    let oi = w.orders_at_infinity();
    if oi[0] >= 4 && oi[1] >= 6 {
        return Err(FibrationError::NonMinimal(oi, "infinity".into()));
    }
    if oi[2] > 0 {
        fibers.push(FiberDatum { locus: Locus::Infinity, orders: oi, kodaira: classify_point(oi)? });
    }
    Ok(FiberConfiguration { fibers, height: w.height })
}

/// Removes every quadratic twist: finite loci where `q^4 | g2` and `q^6 | g3`,
/// then twists at infinity by lowering the height. Returns the minimal model
/// and the monic finite twist `q`.
pub fn minimalize(w: &WeierstrassFibration) -> Result<(WeierstrassFibration, Poly), FibrationError> {
    if w.discriminant().is_zero() {
        return Err(FibrationError::SingularEverywhere);
    }
    let inputs: Vec<Poly> = [&w.g2, &w.g3].into_iter().filter(|p| !p.is_zero()).cloned().collect();
    let mut twist = Poly::one();
    for b in gcd_free_basis(&inputs) {
        let (a, c) = (order(&b, &w.g2), order(&b, &w.g3));
        let k = (a / 4).min(c / 6);
        if k > 0 {
            twist = &twist * &b.pow(k as usize);
        }
    }
    let (g2, g3) = if twist.is_constant() {
        (w.g2.clone(), w.g3.clone())
    } else {
        (
            w.g2.exact_div(&twist.pow(4)).expect("twist divides g2"),
            w.g3.exact_div(&twist.pow(6)).expect("twist divides g3"),
        )
    };
    let d = twist.degree().unwrap_or(0) as u32;
    let mut out = WeierstrassFibration { g2, g3, height: w.height - d };
    loop {
        let oi = out.orders_at_infinity();
        if out.height > 0 && oi[0] >= 4 && oi[1] >= 6 {
            out.height -= 1;
        } else {
            break;
        }
    }
    Ok((out, twist))
}

/// `(prod m_v) / |torsion|^2` for Mordell-Weil rank zero.
pub fn shioda_tate_determinant(
    config: &FiberConfiguration,
    torsion_order: u32,
    mw_rank: u32,
) -> Result<Q, FibrationError> {
    if mw_rank != 0 {
        return Err(FibrationError::UnsupportedRank);
    }
    if torsion_order == 0 {
        return Err(FibrationError::ZeroTorsion);
    }
    let t = BigInt::from(torsion_order);
    Ok(Q::new(config.mv_product(), &t * &t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qf};

    fn ysw() -> WeierstrassFibration {
        WeierstrassFibration::new(
            Poly::new(vec![q(1), q(0), qf(1, 3)]),
            Poly::new(vec![q(0), qf(-9, 27), q(0), qf(1, 27)]),
            1,
        )
        .unwrap()
    }

    fn xsw() -> WeierstrassFibration {
        WeierstrassFibration::new(
            Poly::new(vec![qf(-1, 4), q(0), qf(1, 3)]),
            Poly::new(vec![q(0), qf(-9, 216), q(0), qf(8, 216)]),
            1,
        )
        .unwrap()
    }

    #[test]
    fn sw_discriminants() {
        let u2m1 = Poly::from_ints(&[-1, 0, 1]);
        assert_eq!(ysw().discriminant(), u2m1.pow(2));
        assert_eq!(xsw().discriminant(), u2m1.scale(&qf(1, 64)));
        let cusp = WeierstrassFibration::new(Poly::from_ints(&[3]), Poly::from_ints(&[1]), 1).unwrap();
        assert!(cusp.discriminant().is_zero());
        assert_eq!(classify_fibers(&cusp), Err(FibrationError::SingularEverywhere));
    }

    #[test]
    fn decision_table_rows() {
        use Kodaira::*;
        let cases = [
            ([0, 0, 8], I(8)),
            ([2, 3, 10], IStar(4)),
            ([0, 0, 0], Smooth),
            ([5, 0, 0], Smooth),
            ([1, 1, 2], II),
            ([INF, 1, 2], II),
            ([1, 2, 3], III),
            ([1, INF, 3], III),
            ([2, 2, 4], IV),
            ([2, 3, 6], IStar(0)),
            ([3, 3, 6], IStar(0)),
            ([2, 4, 6], IStar(0)),
            ([3, 4, 8], IVStar),
            ([3, 5, 9], IIIStar),
            ([3, INF, 9], IIIStar),
            ([4, 5, 10], IIStar),
            ([INF, 5, 10], IIStar),
        ];
        for (o, k) in cases {
            assert_eq!(classify_point(o), Ok(k), "{o:?}");
        }
        assert!(matches!(classify_point([4, 6, 12]), Err(FibrationError::NonMinimal(..))));
        assert!(matches!(classify_point([1, 1, 5]), Err(FibrationError::InconsistentOrders(_))));
    }

    #[test]
    fn ysw_configuration() {
        let c = classify_fibers(&ysw()).unwrap();
        assert!(c.has_types(&[(Kodaira::I(2), 2), (Kodaira::IStar(2), 1)]));
        assert_eq!(c.euler_sum(), 12);
        let inf = c.fibers.iter().find(|f| f.locus == Locus::Infinity).unwrap();
        assert_eq!(inf.orders, [2, 3, 8]);
        assert_eq!(inf.roots(), RootLattice::D(6));
    }

    #[test]
    fn xsw_configuration() {
        let c = classify_fibers(&xsw()).unwrap();
        assert!(c.has_types(&[(Kodaira::I(1), 2), (Kodaira::IStar(4), 1)]));
        assert_eq!(c.euler_sum(), 12);
    }

    #[test]
    fn minimalize_examples() {
        let t = Poly::var();
        let w = WeierstrassFibration::new(t.pow(4), t.pow(6), 1).unwrap();
        let (m, tw) = minimalize(&w).unwrap();
        assert_eq!((m.g2.clone(), m.g3.clone(), tw), (Poly::one(), Poly::one(), t.clone()));
        assert_eq!(m.height, 0);
        let (m2, tw2) = minimalize(&ysw()).unwrap();
        assert_eq!((m2, tw2), (ysw(), Poly::one()));
    }

    #[test]
    fn constant_model_is_non_minimal_at_infinity() {
        let w = WeierstrassFibration::new(Poly::one(), Poly::zero(), 1).unwrap();
        assert!(matches!(classify_fibers(&w), Err(FibrationError::NonMinimal(_, _))));
        let (m, tw) = minimalize(&w).unwrap();
        assert_eq!(tw, Poly::one());
        assert_eq!(m.height, 0);
        assert!(classify_fibers(&m).unwrap().fibers.is_empty());
    }

    #[test]
    fn shioda_tate_rejects_rank() {
        let c = classify_fibers(&ysw()).unwrap();
        assert_eq!(shioda_tate_determinant(&c, 1, 1), Err(FibrationError::UnsupportedRank));
        assert_eq!(shioda_tate_determinant(&c, 2, 0).unwrap(), q(4));
    }

    #[test]
    fn json_shape() {
        let c = classify_fibers(&ysw()).unwrap();
        let js = serde_json::to_value(&c).unwrap();
        let last = &js["fibers"][1];
        assert_eq!(last["locus"], "inf");
        assert_eq!(last["type"], "I2*");
        assert_eq!(last["orders"], serde_json::json!([2, 3, 8]));
        assert_eq!(last["mv"], 4);
    }
}

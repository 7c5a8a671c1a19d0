//! From a genus-two sextic to the parameters `(a, b, c)` of the Kummer
//! family: nodes and tropes, the conic pencil through four nodes, the roots
//! `r_1..r_6` and the recovered Weierstrass data.

use crate::arith::linalg::{det, nullspace, solve_unique};
use crate::arith::{fmt_q, q, serde_q, Poly, Q};
use crate::families::{make_y, FamilyParameters, ShiftedParameters};
use crate::weierstrass::{classify_fibers, Kodaira, Locus};
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KummerError {
    #[error("theta_{0} = theta_{1}: the sextic is singular")]
    RepeatedRoot(usize, usize),
    #[error("leading coefficient a0 must be nonzero")]
    ZeroLeading,
    #[error("non-generic theta: {0} vanishes")]
    VanishingDenominator(&'static str),
    #[error("root constraint {0} violated")]
    ConstraintViolation(usize),
    #[error("degenerate point configuration: {0}")]
    DegenerateConfiguration(String),
    #[error("conic is not in the pencil spanned by Q0 and Q_inf")]
    PencilDecomposition,
}

/// `y^2 = a0 prod (x - theta_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenusTwoCurve {
    #[serde(with = "serde_q::vec")]
    pub theta: Vec<Q>,
    #[serde(with = "serde_q")]
    pub a0: Q,
}

impl GenusTwoCurve {
    pub fn new(theta: [Q; 6], a0: Q) -> Result<Self, KummerError> {
        if a0.is_zero() {
            return Err(KummerError::ZeroLeading);
        }
        for i in 0..6 {
            for j in i + 1..6 {
                if theta[i] == theta[j] {
                    return Err(KummerError::RepeatedRoot(i + 1, j + 1));
                }
            }
        }
        Ok(GenusTwoCurve { theta: theta.to_vec(), a0 })
    }

    pub fn from_ints(t: [i64; 6]) -> Result<Self, KummerError> {
        Self::new(t.map(q), Q::one())
    }

    /// `theta_i`, one-based.
    pub fn th(&self, i: usize) -> &Q {
        &self.theta[i - 1]
    }

    pub fn permuted(&self, perm: &[usize; 6]) -> Result<Self, KummerError> {
        Self::new(std::array::from_fn(|i| self.theta[perm[i]].clone()), self.a0.clone())
    }
}

pub type Point = [Q; 3];
pub type Line = [Q; 3];

/// `(A1, A2, A3, B3, B2, B1)` of
/// `A1 z1^2 + A2 z2^2 + A3 z3^2 + 2B3 z1z2 + 2B2 z1z3 + 2B1 z2z3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conic(pub [Q; 6]);

impl Conic {
    pub fn eval(&self, z: &Point) -> Q {
        monomials(z).iter().zip(self.0.iter()).map(|(m, c)| m * c).sum()
    }

    /// Symmetric matrix `[[A1, B3, B2], [B3, A2, B1], [B2, B1, A3]]`.
    pub fn matrix(&self) -> Vec<Vec<Q>> {
        let [a1, a2, a3, b3, b2, b1] = self.0.clone();
        vec![vec![a1, b3.clone(), b2.clone()], vec![b3, a2, b1.clone()], vec![b2, b1, a3]]
    }

    pub fn is_degenerate(&self) -> bool {
        det(&self.matrix()).is_zero()
    }

    pub fn line_pair(l: &Line, m: &Line) -> Conic {
        let h = |x: Q| x / q(2);
        Conic([
            &l[0] * &m[0],
            &l[1] * &m[1],
            &l[2] * &m[2],
            h(&l[0] * &m[1] + &l[1] * &m[0]),
            h(&l[0] * &m[2] + &l[2] * &m[0]),
            h(&l[1] * &m[2] + &l[2] * &m[1]),
        ])
    }
}

fn monomials(z: &Point) -> [Q; 6] {
    let two = q(2);
    [
        &z[0] * &z[0],
        &z[1] * &z[1],
        &z[2] * &z[2],
        &two * &z[0] * &z[1],
        &two * &z[0] * &z[2],
        &two * &z[1] * &z[2],
    ]
}

pub fn line_through(a: &Point, b: &Point) -> Line {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

pub fn on_line(l: &Line, z: &Point) -> bool {
    (&l[0] * &z[0] + &l[1] * &z[1] + &l[2] * &z[2]).is_zero()
}

/// `q_ij = [1 : theta_i + theta_j : theta_i theta_j]`.
pub fn node(c: &GenusTwoCurve, i: usize, j: usize) -> Point {
    [Q::one(), c.th(i) + c.th(j), c.th(i) * c.th(j)]
}

/// `T_i: theta_i^2 z1 - theta_i z2 + z3 = 0`.
pub fn trope(c: &GenusTwoCurve, i: usize) -> Line {
    let t = c.th(i);
    [t * t, -t.clone(), Q::one()]
}

#[derive(Debug, Clone, Serialize)]
pub struct NodesAndTropes {
    /// `(i, j)` with `i < j`, in lexicographic order.
    pub labels: Vec<(usize, usize)>,
    #[serde(skip)]
    pub nodes: Vec<Point>,
    #[serde(skip)]
    pub tropes: Vec<Line>,
    /// `incidence[k][n]`: node `n` lies on trope `k + 1`.
    pub incidence: Vec<Vec<bool>>,
}

impl NodesAndTropes {
    pub fn row_sums(&self) -> Vec<usize> {
        self.incidence.iter().map(|r| r.iter().filter(|&&b| b).count()).collect()
    }

    /// `q_ij` lies on `T_k` exactly when `k` is `i` or `j`.
    pub fn incidence_is_exact(&self) -> bool {
        self.incidence.iter().enumerate().all(|(k, row)| {
            row.iter().zip(&self.labels).all(|(&on, &(i, j))| on == (k + 1 == i || k + 1 == j))
        })
    }
}

pub fn nodes_and_tropes(c: &GenusTwoCurve) -> NodesAndTropes {
    let labels: Vec<_> = (1..=6).flat_map(|i| (i + 1..=6).map(move |j| (i, j))).collect();
    let nodes: Vec<_> = labels.iter().map(|&(i, j)| node(c, i, j)).collect();
    let tropes: Vec<_> = (1..=6).map(|i| trope(c, i)).collect();
    let incidence = tropes.iter().map(|t| nodes.iter().map(|n| on_line(t, n)).collect()).collect();
    NodesAndTropes { labels, nodes, tropes, incidence }
}

/// `prod (xi - theta_i zeta + theta_i^2)`.
pub fn kummer_rhs(c: &GenusTwoCurve, xi: &Q, zeta: &Q) -> Q {
    c.theta.iter().map(|t| xi - t * zeta + t * t).product()
}

/// `4 z1^6 * kummer_rhs(z3/z1, z2/z1) = 4 prod T_i(z)` for `z1 != 0`.
pub fn homogenization_check(c: &GenusTwoCurve, z: &Point) -> bool {
    if z[0].is_zero() {
        return false;
    }
    let (xi, zeta) = (&z[2] / &z[0], &z[1] / &z[0]);
    let lhs = q(4) * crate::arith::qpow(&z[0], 6) * kummer_rhs(c, &xi, &zeta);
    let rhs: Q = q(4) * (1..=6).map(|i| {
        let t = trope(c, i);
        &t[0] * &z[0] + &t[1] * &z[1] + &t[2] * &z[2]
    }).product::<Q>();
    lhs == rhs
}

/// `r_1..r_6`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootSextuple(#[serde(with = "serde_q::vec")] pub Vec<Q>);

impl RootSextuple {
    pub fn r(&self, i: usize) -> &Q {
        &self.0[i - 1]
    }

    pub fn odd(&self) -> [&Q; 3] {
        [self.r(1), self.r(3), self.r(5)]
    }

    pub fn even(&self) -> [&Q; 3] {
        [self.r(2), self.r(4), self.r(6)]
    }

    /// Values of constraints (1), (2) and (3) minus their right-hand sides.
    pub fn constraint_residuals(&self) -> [Q; 3] {
        let [r1, r3, r5] = self.odd();
        let [r2, r4, r6] = self.even();
        [
            r1 * r3 * r5 - r2 * r4 * r6,
            r2 * r4 + r2 * r6 + r4 * r6 - r1 * r3 - r1 * r5 - r3 * r5,
            q(2) * (r2 + r4 + r6 - r1 - r3 - r5) - q(1),
        ]
    }

    pub fn constraints(&self) -> [bool; 3] {
        self.constraint_residuals().map(|x| x.is_zero())
    }

    fn sorted(&self) -> Vec<Q> {
        let mut v = self.0.clone();
        v.sort();
        v
    }

    pub fn same_multiset(&self, o: &Self) -> bool {
        self.sorted() == o.sorted()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(fmt_q).collect()
    }
}

fn d(c: &GenusTwoCurve, i: usize, j: usize) -> Q {
    c.th(i) - c.th(j)
}

fn product_of(c: &GenusTwoCurve, pairs: &[(usize, usize)]) -> Q {
    pairs.iter().map(|&(i, j)| d(c, i, j)).product()
}

const COMMON_DENOMINATOR: [(usize, usize); 6] = [(1, 3), (2, 4), (3, 6), (4, 5), (5, 2), (6, 1)];

const NUMERATORS: [[(usize, usize); 6]; 6] = [
    [(1, 5), (2, 6), (3, 2), (4, 1), (5, 3), (4, 6)],
    [(1, 5), (2, 6), (3, 2), (4, 1), (5, 6), (4, 3)],
    [(1, 2), (2, 6), (3, 4), (4, 1), (5, 3), (5, 6)],
    [(1, 2), (2, 6), (3, 5), (4, 3), (5, 1), (4, 6)],
    [(1, 2), (2, 3), (3, 4), (4, 6), (5, 1), (5, 6)],
    [(1, 2), (2, 3), (3, 5), (4, 1), (5, 6), (4, 6)],
];

/// The last numerator as printed, with `theta_4 - theta_3` in place of
/// `theta_4 - theta_6`.
const PRINTED_LAST: [(usize, usize); 6] = [(1, 2), (2, 3), (3, 5), (4, 1), (5, 6), (4, 3)];

fn roots_with(c: &GenusTwoCurve, nums: &[[(usize, usize); 6]; 6]) -> Result<RootSextuple, KummerError> {
    let den = q(2) * product_of(c, &COMMON_DENOMINATOR);
    if den.is_zero() {
        return Err(KummerError::VanishingDenominator("common denominator"));
    }
    Ok(RootSextuple(nums.iter().map(|n| product_of(c, n) / &den).collect()))
}

/// Closed-form roots over the common denominator
/// `2 (th1-th3)(th2-th4)(th3-th6)(th4-th5)(th5-th2)(th6-th1)`.
pub fn roots_from_theta(c: &GenusTwoCurve) -> Result<RootSextuple, KummerError> {
    roots_with(c, &NUMERATORS)
}

/// The list with the last numerator exactly as printed.
pub fn printed_roots(c: &GenusTwoCurve) -> Result<RootSextuple, KummerError> {
    let mut nums = NUMERATORS;
    nums[5] = PRINTED_LAST;
    roots_with(c, &nums)
}

/// `p(r) = 4r^3 + 12C r^2 - 3A r - B` in the shifted variable.
pub fn shifted_p(s: &ShiftedParameters) -> Poly {
    Poly::new(vec![-s.b.clone(), -q(3) * &s.a, q(12) * &s.c, q(4)])
}

pub fn abc_from_roots(roots: &RootSextuple) -> Result<(FamilyParameters, ShiftedParameters), KummerError> {
    if let Some(k) = roots.constraints().iter().position(|ok| !ok) {
        return Err(KummerError::ConstraintViolation(k + 1));
    }
    let e2 = |v: [&Q; 3]| v[0] * v[1] + v[0] * v[2] + v[1] * v[2];
    let e3 = |v: [&Q; 3]| v[0] * v[1] * v[2];
    let a = -q(2) * (e2(roots.odd()) + e2(roots.even())) / q(3);
    let b = q(2) * (e3(roots.odd()) + e3(roots.even()));
    let c = -roots.0.iter().sum::<Q>() / q(6);
    let shifted = ShiftedParameters { a, b, c };
    Ok((shifted.to_family(), shifted))
}

fn monic_from_roots(rs: [&Q; 3]) -> Poly {
    rs.iter().fold(Poly::one(), |acc, r| &acc * &Poly::linear_root(r))
}

/// `4 prod (r - r_{2i}) = p - r^2` and `4 prod (r - r_{2i-1}) = p + r^2`.
pub fn shifted_identities(roots: &RootSextuple, s: &ShiftedParameters) -> [bool; 2] {
    let p = shifted_p(s);
    let r2 = Poly::var().pow(2);
    [
        monic_from_roots(roots.even()).scale(&q(4)) == &p - &r2,
        monic_from_roots(roots.odd()).scale(&q(4)) == &p + &r2,
    ]
}

/// Each `I2` locus of `Y_{a,b,c}`, moved to `r = t - c`, divides
/// `prod (r - r_i)`; returns the `I2` count and whether all divide.
pub fn i2_loci_check(roots: &RootSextuple, params: &FamilyParameters) -> Result<(u32, bool), KummerError> {
    let config = classify_fibers(&make_y(params)).map_err(|e| KummerError::DegenerateConfiguration(e.to_string()))?;
    let all: Poly = roots.0.iter().fold(Poly::one(), |acc, r| &acc * &Poly::linear_root(r));
    let shift = Poly::new(vec![params.c.clone(), Q::one()]);
    let mut count = 0;
    let mut divides = true;
    for f in config.fibers.iter().filter(|f| f.kodaira == Kodaira::I(2)) {
        match &f.locus {
            Locus::Finite(l) => {
                count += f.locus.points();
                divides &= all.rem(&l.compose(&shift)).map(|r| r.is_zero()).unwrap_or(false);
            }
            Locus::Infinity => divides = false,
        }
    }
    Ok((count, divides))
}

fn conic_through(points: &[Point]) -> Result<Conic, KummerError> {
    let rows: Vec<Vec<Q>> = points.iter().map(|z| monomials(z).to_vec()).collect();
    let ns = nullspace(&rows);
    if ns.len() != 1 {
        return Err(KummerError::DegenerateConfiguration(format!("{}-dimensional conic space", ns.len())));
    }
    Ok(Conic(ns[0].clone().try_into().expect("six coefficients")))
}

/// `(x, y)` with `target = x Q0 + y Q_inf`.
fn decompose(target: &Conic, q0: &Conic, qinf: &Conic) -> Result<(Q, Q), KummerError> {
    let m: Vec<Vec<Q>> = (0..6).map(|k| vec![q0.0[k].clone(), qinf.0[k].clone()]).collect();
    let sol = solve_unique(&m, &target.0).ok_or(KummerError::PencilDecomposition)?;
    Ok((sol[0].clone(), sol[1].clone()))
}

/// Bookkeeping from the pencil construction.
#[derive(Debug, Clone, Serialize)]
pub struct PencilReport {
    pub roots: RootSextuple,
    #[serde(with = "serde_q")]
    pub alpha: Q,
    pub q0_through_q36: bool,
    pub q_inf_degenerate: bool,
    pub line_pairs_degenerate: bool,
}

/// Independent oracle: the degenerate members of the pencil of conics through
/// `q14, q15, q23, q26`, located by their fifth points.
pub fn pencil_roots(c: &GenusTwoCurve) -> Result<PencilReport, KummerError> {
    let n = |i, j| node(c, i, j);
    let base = [n(1, 4), n(1, 5), n(2, 3), n(2, 6)];
    for (k, a) in base.iter().enumerate() {
        for b in base.iter().skip(k + 1) {
            for z in base.iter() {
                if z != a && z != b && on_line(&line_through(a, b), z) {
                    return Err(KummerError::DegenerateConfiguration("three base points collinear".into()));
                }
            }
        }
    }
    let qinf = Conic::line_pair(&line_through(&n(1, 4), &n(1, 5)), &line_through(&n(2, 3), &n(2, 6)));
    let with = |extra: Point| {
        let mut pts = base.to_vec();
        pts.push(extra);
        conic_through(&pts)
    };
    let q0 = with(n(4, 5))?;
    let q0_through_q36 = q0.eval(&n(3, 6)).is_zero();
    let r1 = Conic::line_pair(&line_through(&n(1, 4), &n(2, 6)), &line_through(&n(1, 5), &n(2, 3)));
    let r2 = Conic::line_pair(&line_through(&n(1, 4), &n(2, 3)), &line_through(&n(1, 5), &n(2, 6)));
    let members = [r1.clone(), r2.clone(), with(n(3, 5))?, with(n(3, 4))?, with(n(4, 6))?, with(n(5, 6))?];
    let mut s = Vec::with_capacity(6);
    for m in &members {
        let (x, y) = decompose(m, &q0, &qinf)?;
        if x.is_zero() {
            return Err(KummerError::PencilDecomposition);
        }
        s.push(-y / x);
    }
    let signed = &s[1] + &s[3] + &s[5] - &s[0] - &s[2] - &s[4];
    if signed.is_zero() {
        return Err(KummerError::DegenerateConfiguration("scale alpha undefined".into()));
    }
    let alpha = (q(2) * signed).recip();
    Ok(PencilReport {
        roots: RootSextuple(s.iter().map(|x| x * &alpha).collect()),
        alpha,
        q0_through_q36,
        q_inf_degenerate: qinf.is_degenerate(),
        line_pairs_degenerate: r1.is_degenerate() && r2.is_degenerate(),
    })
}

/// Full verification ledger for one curve.
#[derive(Debug, Clone, Serialize)]
pub struct KummerLedger {
    pub curve: GenusTwoCurve,
    pub roots: RootSextuple,
    pub constraints: [bool; 3],
    pub shifted: ShiftedParameters,
    pub params: FamilyParameters,
    pub identities: [bool; 2],
    pub y_configuration: String,
    pub i2_count: u32,
    pub i2_loci_divide: bool,
    pub pencil_agrees: bool,
    /// Pencil oracle matches only after exchanging `r1` and `r2`.
    pub r1_r2_swapped: bool,
    pub q0_through_q36: bool,
    /// Constraints satisfied by the list with the last numerator as printed.
    pub printed_list_constraints: [bool; 3],
}

impl KummerLedger {
    pub fn all_hold(&self) -> bool {
        self.constraints.iter().all(|&b| b)
            && self.identities.iter().all(|&b| b)
            && self.i2_count == 6
            && self.i2_loci_divide
            && self.pencil_agrees
            && self.q0_through_q36
    }
}

pub fn verify_end_to_end(c: &GenusTwoCurve) -> Result<KummerLedger, KummerError> {
    let roots = roots_from_theta(c)?;
    let constraints = roots.constraints();
    let (params, shifted) = abc_from_roots(&roots)?;
    let identities = shifted_identities(&roots, &shifted);
    let y_configuration = classify_fibers(&make_y(&params))
        .map(|cfg| cfg.summary())
        .map_err(|e| KummerError::DegenerateConfiguration(e.to_string()))?;
    let (i2_count, i2_loci_divide) = i2_loci_check(&roots, &params)?;
    let pencil = pencil_roots(c)?;
    let mut swapped = roots.clone();
    swapped.0.swap(0, 1);
    let pencil_agrees = pencil.roots == roots;
    Ok(KummerLedger {
        curve: c.clone(),
        constraints,
        shifted,
        params,
        identities,
        y_configuration,
        i2_count,
        i2_loci_divide,
        pencil_agrees,
        r1_r2_swapped: !pencil_agrees && pencil.roots == swapped,
        q0_through_q36: pencil.q0_through_q36,
        printed_list_constraints: printed_roots(c)?.constraints(),
        roots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::qf;

    fn golden() -> GenusTwoCurve {
        GenusTwoCurve::from_ints([0, 1, 3, 7, 11, 23]).unwrap()
    }

    #[test]
    fn incidence() {
        let c = GenusTwoCurve::from_ints([0, 1, 2, 3, 4, 5]).unwrap();
        let q12 = node(&c, 1, 2);
        assert_eq!(q12, [q(1), q(1), q(0)]);
        assert!(on_line(&trope(&c, 1), &q12) && on_line(&trope(&c, 2), &q12));
        let nt = nodes_and_tropes(&c);
        assert_eq!(nt.row_sums(), vec![5; 6]);
        assert!(nt.incidence_is_exact());
        assert!(GenusTwoCurve::from_ints([0, 1, 2, 3, 4, 0]).is_err());
    }

    #[test]
    fn kummer_surface_equation() {
        let c = golden();
        let zeta = qf(5, 3);
        let xi = c.th(2) * &zeta - c.th(2) * c.th(2);
        assert!(kummer_rhs(&c, &xi, &zeta).is_zero());
        assert!(homogenization_check(&c, &[qf(2, 3), q(-5), qf(7, 2)]));
    }

    #[test]
    fn golden_sextuple() {
        let r = roots_from_theta(&golden()).unwrap();
        assert_eq!(
            r.to_strings(),
            ["-3388/5175", "-847/3450", "154/1725", "968/5175", "-44/1725", "-56/1725"]
        );
        assert_eq!(r.constraints(), [true; 3]);
        let (params, shifted) = abc_from_roots(&r).unwrap();
        assert_eq!(shifted_identities(&r, &shifted), [true; 2]);
        assert_eq!(params, FamilyParameters::new(qf(106394401, 964102500), qf(-771999908401, 29935382625000), qf(7057, 62100)));
        let pr = crate::families::make_p_r(&params);
        for (i, ri) in r.0.iter().enumerate() {
            let t = ri + &params.c;
            let v = if i % 2 == 0 { pr.p_plus.eval(&t) } else { pr.p_minus.eval(&t) };
            assert!(v.is_zero(), "r{}", i + 1);
        }
    }

    #[test]
    fn end_to_end_and_oracle() {
        let ledger = verify_end_to_end(&golden()).unwrap();
        assert!(ledger.all_hold(), "{ledger:?}");
        assert!(!ledger.r1_r2_swapped);
        assert_eq!(ledger.y_configuration, "I2* + I4 + 6I2");
        assert_ne!(ledger.printed_list_constraints, [true; 3]);
        let p = pencil_roots(&golden()).unwrap();
        assert!(p.q_inf_degenerate && p.line_pairs_degenerate && p.q0_through_q36);
    }

    #[test]
    fn symmetric_sextuple_has_zero_c() {
        let r = RootSextuple(vec![q(8), q(-8), qf(-33, 4), q(0), q(0), qf(33, 4)]);
        let (_, s) = abc_from_roots(&r).unwrap();
        assert!(s.c.is_zero());
        assert_eq!(shifted_identities(&r, &s), [true; 2]);
        let bad = RootSextuple(vec![q(1); 6]);
        assert!(matches!(abc_from_roots(&bad), Err(KummerError::ConstraintViolation(_))));
    }

    #[test]
    fn transposition_changes_roots() {
        let c = golden();
        let id = c.permuted(&[0, 1, 2, 3, 4, 5]).unwrap();
        assert_eq!(roots_from_theta(&id).unwrap(), roots_from_theta(&c).unwrap());
        let swapped = c.permuted(&[1, 0, 2, 3, 4, 5]).unwrap();
        assert!(!roots_from_theta(&swapped).unwrap().same_multiset(&roots_from_theta(&c).unwrap()));
    }
}

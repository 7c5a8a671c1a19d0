//! The Seiberg-Witten rational elliptic surfaces and the three-parameter K3
//! families obtained from them by the base change `u = p(t) / r(t)^2`.

use crate::arith::{q, qf, serde_q, MPoly, Poly, Var, Q};
use crate::weierstrass::{
    classify_fibers, classify_point, minimalize, FiberConfiguration, FibrationError, Kodaira, Locus,
    WeierstrassFibration,
};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error(transparent)]
    Fibration(#[from] FibrationError),
    #[error("base change shape violation: {0}")]
    ShapeViolation(String),
    #[error("scaling parameter mu must satisfy mu^3 = c^2 with c != 0")]
    BadCubeRoot,
    #[error("c = {0} is not a root of p +- r^2")]
    NotCoincident(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParameters {
    #[serde(with = "serde_q")]
    pub a: Q,
    #[serde(with = "serde_q")]
    pub b: Q,
    #[serde(with = "serde_q")]
    pub c: Q,
}

/// Parameters in the shifted variable `r = t - c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftedParameters {
    #[serde(rename = "A", with = "serde_q")]
    pub a: Q,
    #[serde(rename = "B", with = "serde_q")]
    pub b: Q,
    #[serde(rename = "C", with = "serde_q")]
    pub c: Q,
}

impl FamilyParameters {
    pub fn new(a: Q, b: Q, c: Q) -> Self {
        FamilyParameters { a, b, c }
    }

    pub fn ints(a: i64, b: i64, c: i64) -> Self {
        Self::new(q(a), q(b), q(c))
    }

    /// `X_{a,b,c}` has the configuration `I8 + 6 I1 + I4*`.
    pub fn is_generic(&self) -> bool {
        classify_fibers(&make_x(self))
            .map(|c| c.has_types(&[(Kodaira::I(8), 1), (Kodaira::I(1), 6), (Kodaira::IStar(4), 1)]))
            .unwrap_or(false)
    }
}

impl ShiftedParameters {
    /// `a = A + 4C^2`, `b = B - 3AC - 8C^3`, `c = C`.
    pub fn to_family(&self) -> FamilyParameters {
        let (aa, bb, cc) = (&self.a, &self.b, &self.c);
        FamilyParameters {
            a: aa + q(4) * cc * cc,
            b: bb - q(3) * aa * cc - q(8) * cc * cc * cc,
            c: cc.clone(),
        }
    }

    pub fn from_family(p: &FamilyParameters) -> Self {
        let aa = &p.a - q(4) * &p.c * &p.c;
        let bb = &p.b + q(3) * &aa * &p.c + q(8) * &p.c * &p.c * &p.c;
        ShiftedParameters { a: aa, b: bb, c: p.c.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PR {
    pub p: Poly,
    pub r: Poly,
    pub p_plus: Poly,
    pub p_minus: Poly,
}

impl PR {
    pub fn from_polys(p: Poly, r: Poly) -> Self {
        let r2 = r.pow(2);
        PR { p_plus: &p + &r2, p_minus: &p - &r2, p, r }
    }

    /// Row labels for the fiber tables.
    pub fn label(&self, locus: &Locus) -> String {
        match locus {
            Locus::Infinity => "t = inf".into(),
            Locus::Finite(f) => {
                let m = f.monic();
                for (name, g) in [("r", &self.r), ("p+", &self.p_plus), ("p-", &self.p_minus), ("p", &self.p)] {
                    if !g.is_constant() && g.monic() == m {
                        return format!("{name} = 0");
                    }
                }
                format!("{} = 0", f)
            }
        }
    }

    pub fn splitters(&self) -> Vec<Poly> {
        vec![self.r.clone(), self.p_plus.clone(), self.p_minus.clone(), self.p.clone()]
    }
}

/// `p = 4t^3 - 3at - b`, `r = t - c`, `p_+- = p +- r^2`.
pub fn make_p_r(params: &FamilyParameters) -> PR {
    let p = Poly::new(vec![-params.b.clone(), -q(3) * &params.a, Q::zero(), q(4)]);
    let r = Poly::linear_root(&params.c);
    PR::from_polys(p, r)
}

/// `g2 = p^2/3 + r^4`, `g3 = p (p^2 - 9 r^4) / 27`.
pub fn make_y_from(p: &Poly, r: &Poly, height: u32) -> WeierstrassFibration {
    let r4 = r.pow(4);
    let p2 = p.pow(2);
    let g2 = &p2.scale(&qf(1, 3)) + &r4;
    let g3 = (p * &(&p2 - &r4.scale(&q(9)))).scale(&qf(1, 27));
    WeierstrassFibration::new(g2, g3, height).expect("degree bounds")
}

/// `g2 = p^2/3 - r^4/4`, `g3 = p (8p^2 - 9r^4) / 216`.
pub fn make_x_from(p: &Poly, r: &Poly, height: u32) -> WeierstrassFibration {
    let r4 = r.pow(4);
    let p2 = p.pow(2);
    let g2 = &p2.scale(&qf(1, 3)) - &r4.scale(&qf(1, 4));
    let g3 = (p * &(&p2.scale(&q(8)) - &r4.scale(&q(9)))).scale(&qf(1, 216));
    WeierstrassFibration::new(g2, g3, height).expect("degree bounds")
}

pub fn make_y(params: &FamilyParameters) -> WeierstrassFibration {
    let pr = make_p_r(params);
    make_y_from(&pr.p, &pr.r, 2)
}

pub fn make_x(params: &FamilyParameters) -> WeierstrassFibration {
    let pr = make_p_r(params);
    make_x_from(&pr.p, &pr.r, 2)
}

/// `g2 = u^2/3 + 1`, `g3 = u (u^2 - 9) / 27` over the `u`-line.
pub fn make_y_sw() -> WeierstrassFibration {
    make_y_from(&Poly::var(), &Poly::one(), 1)
}

/// `g2 = u^2/3 - 1/4`, `g3 = u (8u^2 - 9) / 216` over the `u`-line.
pub fn make_x_sw() -> WeierstrassFibration {
    make_x_from(&Poly::var(), &Poly::one(), 1)
}

/// `p~ = 4t^3 - 3a~ t - b~`, `r~ = 1 - c~ t`.
pub fn tilde_p_r(at: &Q, bt: &Q, ct: &Q) -> PR {
    let p = Poly::new(vec![-bt.clone(), -q(3) * at, Q::zero(), q(4)]);
    let r = Poly::new(vec![Q::one(), -ct.clone()]);
    PR::from_polys(p, r)
}

pub fn make_y_tilde(at: &Q, bt: &Q, ct: &Q) -> WeierstrassFibration {
    let pr = tilde_p_r(at, bt, ct);
    make_y_from(&pr.p, &pr.r, 2)
}

pub fn make_x_tilde(at: &Q, bt: &Q, ct: &Q) -> WeierstrassFibration {
    let pr = tilde_p_r(at, bt, ct);
    make_x_from(&pr.p, &pr.r, 2)
}

/// `(a/mu^2, b/c^2, mu/c)` for a caller-supplied `mu` with `mu^3 = c^2`.
pub fn scale_to_tilde(params: &FamilyParameters, mu: &Q) -> Result<(Q, Q, Q), FamilyError> {
    if params.c.is_zero() || mu * mu * mu != &params.c * &params.c {
        return Err(FamilyError::BadCubeRoot);
    }
    let c2 = &params.c * &params.c;
    Ok((&params.a / (mu * mu), &params.b / &c2, mu / &params.c))
}

/// Checks `g2(mu t) = c^4 g2~(t)` and `g3(mu t) = c^6 g3~(t)` for both
/// families (the scale `lambda = -c` enters only through even powers).
pub fn tilde_scaling_check(params: &FamilyParameters, mu: &Q) -> Result<bool, FamilyError> {
    let (at, bt, ct) = scale_to_tilde(params, mu)?;
    let lam = -params.c.clone();
    let l4 = num_traits::pow(lam.clone(), 4);
    let l6 = num_traits::pow(lam, 6);
    let sub = Poly::new(vec![Q::zero(), mu.clone()]);
    let pairs = [
        (make_y(params), make_y_tilde(&at, &bt, &ct)),
        (make_x(params), make_x_tilde(&at, &bt, &ct)),
    ];
    let mut ok = true;
    for (w, wt) in pairs {
        ok &= w.g2.compose(&sub) == wt.g2.scale(&l4);
        ok &= w.g3.compose(&sub) == wt.g3.scale(&l6);
    }
    let pr = tilde_p_r(&at, &bt, &ct);
    let dt = &pr.r.pow(4) * &(&pr.p.pow(2) - &pr.r.pow(4)).pow(2);
    ok &= make_y_tilde(&at, &bt, &ct).discriminant() == dt;
    Ok(ok)
}

/// `b` placing `c` on the common root of `p_+` and `p_-` (`p(c) = 0`).
pub fn coincident_b(a: &Q, c: &Q) -> Q {
    q(4) * c * c * c - q(3) * a * c
}

pub fn coincident_root_config(params: &FamilyParameters) -> Result<FiberConfiguration, FamilyError> {
    let pr = make_p_r(params);
    if !pr.p_plus.eval(&params.c).is_zero() && !pr.p_minus.eval(&params.c).is_zero() {
        return Err(FamilyError::NotCoincident(crate::arith::show_q(&params.c)));
    }
    Ok(classify_fibers(&make_y(params))?)
}

/// The flip `(a, b, c, t) -> (a, -b, -c, -t)`: `g2` is invariant and `g3`
/// changes sign, for both families.
pub fn flip_symmetry_check(params: &FamilyParameters) -> bool {
    let flipped = FamilyParameters::new(params.a.clone(), -params.b.clone(), -params.c.clone());
    let minus_t = Poly::new(vec![Q::zero(), -Q::one()]);
    [(make_x(params), make_x(&flipped)), (make_y(params), make_y(&flipped))]
        .iter()
        .all(|(w, wf)| wf.g2.compose(&minus_t) == w.g2 && wf.g3.compose(&minus_t) == -&w.g3)
}

/// One fiber of the source surface and what lies over it after base change.
#[derive(Debug, Clone, Serialize)]
pub struct LedgerEntry {
    pub source_locus: Locus,
    pub source_type: String,
    pub preimages: Vec<Preimage>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Preimage {
    pub locus: Locus,
    pub ramification: u32,
    pub predicted: Option<String>,
    pub observed: String,
}

impl Preimage {
    pub fn consistent(&self) -> bool {
        self.predicted.as_deref().is_none_or(|p| p == self.observed)
    }
}

/// Type over a point of ramification index `e`: `I_n -> I_{ne}`,
/// `I_n* -> I_{ne}*` for odd `e` and `I_{ne}` for even `e`.
pub fn predicted_type(k: Kodaira, e: u32) -> Option<Kodaira> {
    match k {
        Kodaira::Smooth => Some(Kodaira::Smooth),
        Kodaira::I(n) => Some(Kodaira::I(n * e)),
        Kodaira::IStar(n) if e % 2 == 1 => Some(Kodaira::IStar(n * e)),
        Kodaira::IStar(n) => Some(Kodaira::I(n * e)),
        _ => None,
    }
}

#[derive(Debug, Clone)]
pub struct BaseChange {
    pub fibration: WeierstrassFibration,
    /// The non-minimal pullback before the twist.
    pub pullback: WeierstrassFibration,
    pub twist: Poly,
    pub ledger: Vec<LedgerEntry>,
}

impl BaseChange {
    pub fn ledger_consistent(&self) -> bool {
        self.ledger.iter().all(|e| e.preimages.iter().all(Preimage::consistent))
    }
}

/// `h(u) -> r^(2 deg h) h(p / r^2)`.
fn homogeneous_pullback(h: &Poly, p: &Poly, r: &Poly, weight: usize) -> Poly {
    let r2 = r.pow(2);
    let mut acc = Poly::zero();
    for (i, c) in h.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        acc = &acc + &(&p.pow(i) * &r2.pow(weight - i)).scale(c);
    }
    acc
}

/// Pulls a rational elliptic surface over the `u`-line back along
/// `u = p(t) / r(t)^2` and removes the twist by `r`.
pub fn base_change(w: &WeierstrassFibration, p: &Poly, r: &Poly) -> Result<BaseChange, FamilyError> {
    if w.height != 1 {
        return Err(FamilyError::ShapeViolation(format!("source height {} != 1", w.height)));
    }
    if p.degree() != Some(3) || r.degree() != Some(1) {
        return Err(FamilyError::ShapeViolation("need deg p = 3 and deg r = 1".into()));
    }
    let g2 = homogeneous_pullback(&w.g2, p, r, 4);
    let g3 = homogeneous_pullback(&w.g3, p, r, 6);
    let pullback = WeierstrassFibration::new(g2, g3, 3)?;
    let (fibration, twist) = minimalize(&pullback)?;
    if twist != r.monic() || fibration.height != 2 {
        return Err(FamilyError::ShapeViolation(format!(
            "twist {} at height {} instead of r at height 2",
            twist, fibration.height
        )));
    }
    let ledger = fiber_ledger(w, &fibration, p, r)?;
    Ok(BaseChange { fibration, pullback, twist, ledger })
}

fn fiber_ledger(
    source: &WeierstrassFibration,
    target: &WeierstrassFibration,
    p: &Poly,
    r: &Poly,
) -> Result<Vec<LedgerEntry>, FamilyError> {
    let src = classify_fibers(source)?;
    let tgt = classify_fibers(target)?;
    let mut out = Vec::new();
    let delta = target.discriminant();
    let observe = |s: &Poly| -> Result<String, FamilyError> {
        Ok(classify_point(target.orders_with(s, &delta))?.tag())
    };
    for f in &src.fibers {
        let mut preimages = Vec::new();
        let mut push = |locus: Locus, e: u32, observed: String| {
            let predicted = predicted_type(f.kodaira, e).map(|k| k.tag());
            preimages.push(Preimage { locus, ramification: e, predicted, observed });
        };
        match &f.locus {
            Locus::Finite(h) => {
                let d = h.degree().unwrap_or(0);
                let pulled = homogeneous_pullback(h, p, r, d);
                for (s, e) in pulled.squarefree_decomposition() {
                    let obs = observe(&s)?;
                    push(Locus::Finite(s), e as u32, obs);
                }
            }
            Locus::Infinity => {
                // u = inf pulls back to r^2 = 0 and to t = inf (deg p - deg r^2 = 1).
                push(Locus::Finite(r.monic()), 2, observe(&r.monic())?);
                let inf = tgt
                    .fibers
                    .iter()
                    .find(|g| g.locus == Locus::Infinity)
                    .map(|g| g.kodaira.tag())
                    .unwrap_or_else(|| Kodaira::Smooth.tag());
                push(Locus::Infinity, 1, inf);
            }
        }
        out.push(LedgerEntry { source_locus: f.locus.clone(), source_type: f.kodaira.tag(), preimages });
    }
    Ok(out)
}

/// Symbolic forms in the polynomial ring `Q[a, b, c, t]`.
pub mod symbolic {
    use super::*;

    pub fn p() -> MPoly {
        let t = MPoly::var(Var::T);
        &(&t.pow(3).scale(&q(4)) - &(&MPoly::var(Var::A) * &t).scale(&q(3))) - &MPoly::var(Var::B)
    }

    pub fn r() -> MPoly {
        &MPoly::var(Var::T) - &MPoly::var(Var::C)
    }

    fn y_pair(p: &MPoly, r: &MPoly) -> (MPoly, MPoly) {
        let p2 = p.pow(2);
        let r4 = r.pow(4);
        (&p2.scale(&qf(1, 3)) + &r4, (p * &(&p2 - &r4.scale(&q(9)))).scale(&qf(1, 27)))
    }

    fn x_pair(p: &MPoly, r: &MPoly) -> (MPoly, MPoly) {
        let p2 = p.pow(2);
        let r4 = r.pow(4);
        (
            &p2.scale(&qf(1, 3)) - &r4.scale(&qf(1, 4)),
            (p * &(&p2.scale(&q(8)) - &r4.scale(&q(9)))).scale(&qf(1, 216)),
        )
    }

    /// `(g2, g3)` of `Y_{a,b,c}`.
    pub fn y_coeffs() -> (MPoly, MPoly) {
        y_pair(&p(), &r())
    }

    /// `(g2, g3)` of `X_{a,b,c}`.
    pub fn x_coeffs() -> (MPoly, MPoly) {
        x_pair(&p(), &r())
    }

    /// Flip symmetry as an identity in `Q[a, b, c, t]`.
    pub fn flip_identity() -> bool {
        let flip = [
            (Var::B, -MPoly::var(Var::B)),
            (Var::C, -MPoly::var(Var::C)),
            (Var::T, -MPoly::var(Var::T)),
        ];
        [x_coeffs(), y_coeffs()]
            .iter()
            .all(|(g2, g3)| g2.substitute(&flip) == *g2 && g3.substitute(&flip) == -g3)
    }

    /// `r^4 g2_SW(p/r^2)` and `r^6 g3_SW(p/r^2)` reproduce the K3
    /// coefficients identically in `(a, b, c, t)`.
    pub fn functoriality_identity() -> bool {
        let (p, r) = (p(), r());
        let u = MPoly::var(Var::U);
        let one = MPoly::one();
        let pull = |f: &MPoly, w: u32| -> MPoly {
            // f is a polynomial in u of degree <= w/2; homogenize with r^2.
            let r2 = r.pow(2);
            let mut acc = MPoly::zero();
            for (i, c) in f.coeffs_in(Var::U).iter().enumerate() {
                acc = &acc + &(&(c * &p.pow(i as u32)) * &r2.pow(w / 2 - i as u32));
            }
            acc
        };
        let (y2, y3) = y_pair(&u, &one);
        let (x2, x3) = x_pair(&u, &one);
        (pull(&y2, 4), pull(&y3, 6)) == y_coeffs() && (pull(&x2, 4), pull(&x3, 6)) == x_coeffs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn generic() -> FamilyParameters {
        FamilyParameters::new(q(1), q(2), q(3))
    }

    #[test]
    fn p_r_examples() {
        let pr = make_p_r(&FamilyParameters::ints(0, 0, 0));
        assert_eq!(pr.p, Poly::from_ints(&[0, 0, 0, 4]));
        assert_eq!(pr.r, Poly::var());
        assert_eq!(pr.p_plus, Poly::from_ints(&[0, 0, 1, 4]));
        assert_eq!(pr.p_minus, Poly::from_ints(&[0, 0, -1, 4]));
        let g = make_p_r(&generic());
        assert!(g.r.eval(&q(3)).is_zero());
    }

    #[test]
    fn discriminant_identities() {
        let pr = make_p_r(&generic());
        let dy = &pr.r.pow(4) * &(&pr.p_minus.pow(2) * &pr.p_plus.pow(2));
        assert_eq!(make_y(&generic()).discriminant(), dy);
        let dx = (&pr.r.pow(8) * &(&pr.p_minus * &pr.p_plus)).scale(&qf(1, 64));
        assert_eq!(make_x(&generic()).discriminant(), dx);
        let r = &pr.r;
        assert_eq!(Poly::multiplicity(r, &make_x(&generic()).discriminant()).unwrap(), 8);
    }

    #[test]
    fn generic_tables() {
        let cx = classify_fibers(&make_x(&generic())).unwrap();
        assert_eq!(cx.summary(), "I4* + I8 + 6I1");
        let cy = classify_fibers(&make_y(&generic())).unwrap();
        assert!(cy.has_types(&[(Kodaira::I(4), 1), (Kodaira::I(2), 6), (Kodaira::IStar(2), 1)]));
        assert!(generic().is_generic());
        assert!(!FamilyParameters::ints(0, 0, 0).is_generic());
    }

    #[test]
    fn base_change_reproduces_families() {
        let pr = make_p_r(&generic());
        let by = base_change(&make_y_sw(), &pr.p, &pr.r).unwrap();
        assert_eq!(by.fibration, make_y(&generic()));
        assert_eq!(by.twist, pr.r);
        assert!(by.ledger_consistent());
        let bx = base_change(&make_x_sw(), &pr.p, &pr.r).unwrap();
        assert_eq!(bx.fibration, make_x(&generic()));
        let inf = bx.ledger.iter().find(|e| e.source_locus == Locus::Infinity).unwrap();
        let obs: Vec<_> = inf.preimages.iter().map(|p| (p.ramification, p.observed.clone())).collect();
        assert_eq!(obs, vec![(2, "I8".to_string()), (1, "I4*".to_string())]);
    }

    #[test]
    fn base_change_shape_errors() {
        let pr = make_p_r(&generic());
        assert!(matches!(base_change(&make_y(&generic()), &pr.p, &pr.r), Err(FamilyError::ShapeViolation(_))));
        assert!(matches!(base_change(&make_y_sw(), &pr.r, &pr.r), Err(FamilyError::ShapeViolation(_))));
    }

    #[test]
    fn flip_symmetry() {
        assert!(flip_symmetry_check(&generic()));
        assert!(flip_symmetry_check(&FamilyParameters::ints(1, 0, 0)));
        assert!(symbolic::flip_identity());
        assert!(symbolic::functoriality_identity());
    }

    #[test]
    fn tilde_scaling() {
        let params = FamilyParameters::new(q(5), q(7), q(8));
        let (at, bt, ct) = scale_to_tilde(&params, &q(4)).unwrap();
        assert_eq!((at, bt, ct), (qf(5, 16), qf(7, 64), qf(1, 2)));
        assert!(tilde_scaling_check(&params, &q(4)).unwrap());
        assert_eq!(scale_to_tilde(&params, &q(3)), Err(FamilyError::BadCubeRoot));
    }

    #[test]
    fn tilde_zero_limits() {
        let z = Q::zero();
        let cy = classify_fibers(&make_y_tilde(&q(2), &q(3), &z)).unwrap();
        assert!(cy.has_types(&[(Kodaira::IStar(6), 1), (Kodaira::I(2), 6)]), "{}", cy.summary());
        let cx = classify_fibers(&make_x_tilde(&q(2), &q(3), &z)).unwrap();
        assert!(cx.has_types(&[(Kodaira::IStar(12), 1), (Kodaira::I(1), 6)]), "{}", cx.summary());
    }

    #[test]
    fn coincident_roots() {
        let (a, c) = (q(1), q(3));
        let params = FamilyParameters::new(a.clone(), coincident_b(&a, &c), c);
        let cy = coincident_root_config(&params).unwrap();
        assert!(cy.has_types(&[(Kodaira::IStar(2), 2), (Kodaira::I(2), 4)]));
        let cx = classify_fibers(&make_x(&params)).unwrap();
        assert!(cx.has_types(&[(Kodaira::IStar(4), 2), (Kodaira::I(1), 4)]));
        assert!(matches!(coincident_root_config(&generic()), Err(FamilyError::NotCoincident(_))));
    }

    #[test]
    fn shifted_round_trip() {
        let p = FamilyParameters::new(qf(2, 3), q(-5), qf(7, 2));
        assert_eq!(ShiftedParameters::from_family(&p).to_family(), p);
    }
}

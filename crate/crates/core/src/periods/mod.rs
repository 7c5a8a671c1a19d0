//! High-precision numerics: theta constants, the `u(tau)` maps, AGM period
//! lattices, the base-change period law and Yukawa couplings.

pub mod complex;
pub mod lattice;
pub mod theta;

pub use complex::ComplexHP;
pub use lattice::{fiber_periods, match_basis, PeriodBasis};
pub use theta::{j_from_thetas, theta, u_level_two, u_of_tau, Model, ThetaKind};

use crate::arith::{parse_q, qf, Poly, Q};
use crate::families::{make_p_r, make_x, make_x_sw, make_y, make_y_sw, FamilyParameters};
use crate::sampling::{self, SampleRng};
use crate::weierstrass::WeierstrassFibration;
use rand::Rng;
use rug::Float;
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PeriodError {
    #[error("tau = {0} is not in the upper half-plane")]
    NotUpperHalfPlane(String),
    #[error("singular fiber (discriminant vanishes)")]
    SingularFiber,
    #[error("cubic root finding failed")]
    RootFinding,
    #[error("AGM did not converge")]
    AgmDiverged,
    #[error("finite difference could not track the lattice basis")]
    BasisTracking,
    #[error("precision must be at least 128 bits, got {0}")]
    LowPrecision(u32),
    #[error("identification constants: {0}")]
    Identification(String),
}

pub const MIN_PRECISION: u32 = 128;

pub fn check_precision(prec: u32) -> Result<(), PeriodError> {
    if prec < MIN_PRECISION {
        return Err(PeriodError::LowPrecision(prec));
    }
    Ok(())
}

pub fn eval_poly(p: &Poly, z: &ComplexHP) -> ComplexHP {
    let prec = z.prec();
    let mut acc = ComplexHP::zero(prec);
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(z).add(&ComplexHP::from_q(c, &Q::from_integer(0.into()), prec));
    }
    acc
}

pub fn eval_fibration(w: &WeierstrassFibration, z: &ComplexHP) -> (ComplexHP, ComplexHP) {
    (eval_poly(&w.g2, z), eval_poly(&w.g3, z))
}

/// `1728 g2^3 / (g2^3 - 27 g3^2)`.
pub fn j_of_fiber(g2: &ComplexHP, g3: &ComplexHP) -> Result<ComplexHP, PeriodError> {
    let g23 = g2.powi(3);
    let disc = g23.sub(&g3.mul(g3).scale_f64(27.0));
    if disc.abs().is_zero() {
        return Err(PeriodError::SingularFiber);
    }
    Ok(g23.scale_f64(1728.0).div(&disc))
}

#[derive(Debug, Clone, Deserialize)]
struct IdentificationEntry {
    fiber: String,
    factor: String,
}

#[derive(Debug, Clone, Deserialize)]
struct IdentificationFile {
    scan_candidates: Vec<String>,
    models: BTreeMap<String, IdentificationEntry>,
}

const IDENTIFICATION_JSON: &str = include_str!("../../data/tau_identification.json");

fn identification_file() -> Result<IdentificationFile, PeriodError> {
    serde_json::from_str(IDENTIFICATION_JSON).map_err(|e| PeriodError::Identification(e.to_string()))
}

/// Recorded factor `k`: the fiber over `u_of_tau(model, tau)` has
/// `j = j(k tau)`.
pub fn identification_factor(model: Model) -> Result<Q, PeriodError> {
    let f = identification_file()?;
    let e = f
        .models
        .get(model.name())
        .ok_or_else(|| PeriodError::Identification(format!("no entry for {}", model.name())))?;
    parse_q(&e.factor).map_err(|e| PeriodError::Identification(e.to_string()))
}

pub fn identification_fiber(model: Model) -> Result<String, PeriodError> {
    let f = identification_file()?;
    Ok(f.models.get(model.name()).map(|e| e.fiber.clone()).unwrap_or_default())
}

fn model_fibration(model: Model) -> WeierstrassFibration {
    match model {
        Model::Nf0 => make_x_sw(),
        Model::Nf2 => make_y_sw(),
    }
}

fn j_distance(a: &ComplexHP, b: &ComplexHP) -> f64 {
    let d = a.sub(b).abs();
    let n = b.abs().max(&Float::with_val(b.prec(), 1));
    (d / n).to_f64()
}

/// Candidate factors whose `j(k tau)` matches the fiber at every sample.
pub fn scan_identification(model: Model, taus: &[ComplexHP], tol: f64) -> Result<Vec<Q>, PeriodError> {
    let f = identification_file()?;
    let w = model_fibration(model);
    let mut hits = Vec::new();
    for cand in &f.scan_candidates {
        let k = parse_q(cand).map_err(|e| PeriodError::Identification(e.to_string()))?;
        let mut ok = true;
        for tau in taus {
            let (g2, g3) = eval_fibration(&w, &u_of_tau(model, tau)?);
            let jf = j_of_fiber(&g2, &g3)?;
            let jl = j_from_thetas(&tau.scale_q(&k))?;
            if j_distance(&jf, &jl) >= tol {
                ok = false;
                break;
            }
        }
        if ok {
            hits.push(k);
        }
    }
    Ok(hits)
}

#[derive(Debug, Clone, Serialize)]
pub struct JSample {
    pub tau: ComplexHP,
    pub u: ComplexHP,
    pub j_fiber: ComplexHP,
    pub j_lattice: ComplexHP,
    pub error: f64,
    pub holds: bool,
}

pub fn fiber_j_check(model: Model, tau: &ComplexHP, tol: f64) -> Result<JSample, PeriodError> {
    check_precision(tau.prec())?;
    let k = identification_factor(model)?;
    let u = u_of_tau(model, tau)?;
    let (g2, g3) = eval_fibration(&model_fibration(model), &u);
    let j_fiber = j_of_fiber(&g2, &g3)?;
    let j_lattice = j_from_thetas(&tau.scale_q(&k))?;
    let error = j_distance(&j_fiber, &j_lattice);
    Ok(JSample { tau: tau.clone(), u, j_fiber, j_lattice, error, holds: error < tol })
}

/// Which surface a Yukawa coupling or a period computation refers to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Surface {
    Ysw,
    Xsw,
    Yabc(FamilyParameters),
    Xabc(FamilyParameters),
}

impl Surface {
    pub fn fibration(&self) -> WeierstrassFibration {
        match self {
            Surface::Ysw => make_y_sw(),
            Surface::Xsw => make_x_sw(),
            Surface::Yabc(p) => make_y(p),
            Surface::Xabc(p) => make_x(p),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Surface::Ysw => "Y_SW",
            Surface::Xsw => "X_SW",
            Surface::Yabc(_) => "Y_abc",
            Surface::Xabc(_) => "X_abc",
        }
    }
}

pub fn periods_at(surface: &Surface, z: &ComplexHP) -> Result<PeriodBasis, PeriodError> {
    let (g2, g3) = eval_fibration(&surface.fibration(), z);
    fiber_periods(&g2, &g3)
}

/// `u = p(t) / r(t)^2` and `du/dt = (p' r - 2p) / r^3`.
pub fn base_map(params: &FamilyParameters, t: &ComplexHP) -> (ComplexHP, ComplexHP) {
    let pr = make_p_r(params);
    let (p, r) = (eval_poly(&pr.p, t), eval_poly(&pr.r, t));
    let dp = eval_poly(&pr.p.derivative(), t);
    let u = p.div(&r.powi(2));
    let du = dp.mul(&r).sub(&p.scale_f64(2.0)).div(&r.powi(3));
    (u, du)
}

#[derive(Debug, Clone, Serialize)]
pub struct RatioSample {
    pub t: ComplexHP,
    pub u: ComplexHP,
    pub r: ComplexHP,
    /// `w1(u) / w1(t)` after matching lattice bases; equals `r(t)`.
    pub ratio: ComplexHP,
    pub error: f64,
    pub basis_change: [[i64; 2]; 2],
    pub holds: bool,
}

/// The period of the fiber of `X_{a,b,c}` at `t` is that of `X_SW` at
/// `u = p/r^2` divided by `r(t)`, up to a unimodular change of basis.
pub fn period_ratio_check(params: &FamilyParameters, t: &ComplexHP, tol: f64) -> Result<RatioSample, PeriodError> {
    check_precision(t.prec())?;
    let (u, _) = base_map(params, t);
    let r = eval_poly(&make_p_r(params).r, t);
    let bt = periods_at(&Surface::Xabc(params.clone()), t)?;
    let bu = periods_at(&Surface::Xsw, &u)?;
    let m = match_basis(&bt, &bu.scale(&r.recip()));
    let ratio = m.basis.w1.mul(&r).div(&bt.w1);
    let error = ratio.rel_err(&r).max(m.residual);
    let holds = error < tol && m.unimodular();
    Ok(RatioSample { t: t.clone(), u, r, ratio, error, basis_change: m.matrix, holds })
}

#[derive(Debug, Clone, Serialize)]
pub struct YukawaSample {
    pub coordinate: ComplexHP,
    /// Coefficient of `(d coordinate)^3`.
    pub value: ComplexHP,
    pub step_log2: i32,
}

fn tracked_tau(surface: &Surface, z: &ComplexHP, center: &PeriodBasis) -> Result<Option<ComplexHP>, PeriodError> {
    let b = periods_at(surface, z)?;
    let m = match_basis(center, &b);
    if m.residual > 1e-6 || !m.unimodular() {
        return Ok(None);
    }
    Ok(Some(m.basis.tau()))
}

/// `(1/4) Omega^2 dtau/dz` with `2 Omega` the first period and the derivative
/// taken by a five-point stencil on lattice-tracked bases.
pub fn yukawa(surface: &Surface, z: &ComplexHP) -> Result<YukawaSample, PeriodError> {
    let prec = z.prec();
    check_precision(prec)?;
    let center = periods_at(surface, z)?;
    let mut step_log2 = -(prec as i32 / 5);
    for _ in 0..12 {
        let h = Float::with_val(prec, Float::i_exp(1, step_log2));
        let mut taus = Vec::with_capacity(4);
        for k in [-2.0, -1.0, 1.0, 2.0] {
            let dz = ComplexHP::real(Float::with_val(prec, &h * k));
            match tracked_tau(surface, &z.add(&dz), &center)? {
                Some(t) => taus.push(t),
                None => break,
            }
        }
        if taus.len() == 4 {
            let num = taus[0].sub(&taus[1].scale_f64(8.0)).add(&taus[2].scale_f64(8.0)).sub(&taus[3]);
            let d = num.scale(&Float::with_val(prec, 12 * &h).recip());
            let omega = center.w1.scale_f64(0.5);
            let value = omega.mul(&omega).mul(&d).scale_f64(0.25);
            return Ok(YukawaSample { coordinate: z.clone(), value, step_log2 });
        }
        step_log2 -= 1;
    }
    Err(PeriodError::BasisTracking)
}

#[derive(Debug, Clone, Serialize)]
pub struct PullbackSample {
    pub t: ComplexHP,
    pub u: ComplexHP,
    pub lhs: ComplexHP,
    pub rhs: ComplexHP,
    pub error: f64,
    pub holds: bool,
}

/// `Xi_SW(u(t)) (du/dt)^3 = r^2 (du/dt)^2 Xi(t)` for the hatted (`hat`) or
/// unhatted pair.
pub fn yukawa_pullback_check(
    params: &FamilyParameters,
    t: &ComplexHP,
    hat: bool,
    tol: f64,
) -> Result<PullbackSample, PeriodError> {
    let (u, du) = base_map(params, t);
    let r = eval_poly(&make_p_r(params).r, t);
    let (sw, k3) = if hat {
        (Surface::Xsw, Surface::Xabc(params.clone()))
    } else {
        (Surface::Ysw, Surface::Yabc(params.clone()))
    };
    let lhs = yukawa(&sw, &u)?.value.mul(&du.powi(3));
    let rhs = yukawa(&k3, t)?.value.mul(&r.powi(2)).mul(&du.powi(2));
    let error = lhs.rel_err(&rhs);
    Ok(PullbackSample { t: t.clone(), u, lhs, rhs, error, holds: error < tol })
}

/// `Xi^_SW(u) / Xi_SW(u)`.
pub fn yukawa_ratio(u: &ComplexHP) -> Result<ComplexHP, PeriodError> {
    Ok(yukawa(&Surface::Xsw, u)?.value.div(&yukawa(&Surface::Ysw, u)?.value))
}

/// `tau` with `Re tau` in `[-1/2, 1/2]` and `Im tau` in `[0.6, 2]`, as exact
/// rationals with denominator 1000.
pub fn sample_tau(rng: &mut SampleRng, prec: u32) -> ComplexHP {
    let re = qf(rng.gen_range(-500..=500), 1000);
    let im = qf(rng.gen_range(600..=2000), 1000);
    ComplexHP::from_q(&re, &im, prec)
}

/// A base point `t` away from the singular fibers of the family.
pub fn sample_regular_t(rng: &mut SampleRng, params: &FamilyParameters, prec: u32) -> ComplexHP {
    let pr = make_p_r(params);
    loop {
        let t = ComplexHP::from_q(&sampling::rational(rng, 2, 100), &sampling::rational(rng, 2, 100), prec);
        let far = |p: &Poly, d: f64| eval_poly(p, &t).abs() > d;
        if far(&pr.r, 0.2) && far(&pr.p_plus, 0.2) && far(&pr.p_minus, 0.2) {
            return t;
        }
    }
}

/// A base point `u` at distance at least 0.2 from `u = +-1`.
pub fn sample_regular_u(rng: &mut SampleRng, prec: u32) -> ComplexHP {
    loop {
        let u = ComplexHP::from_q(&sampling::rational(rng, 4, 100), &sampling::rational(rng, 4, 100), prec);
        let one = ComplexHP::one(prec);
        if u.sub(&one).abs() > 0.2 && u.add(&one).abs() > 0.2 {
            return u;
        }
    }
}

/// Aggregated result of one numerical check over a sample set.
#[derive(Debug, Clone, Serialize)]
pub struct CheckSummary {
    pub check: String,
    pub tolerance: f64,
    pub max_error: f64,
    pub passed: bool,
    pub samples: Vec<serde_json::Value>,
}

impl CheckSummary {
    fn from_samples(check: &str, tol: f64, samples: Vec<(f64, bool, serde_json::Value)>) -> Self {
        let max_error = samples.iter().map(|s| s.0).fold(0.0, f64::max);
        let passed = !samples.is_empty() && samples.iter().all(|s| s.1);
        CheckSummary {
            check: check.into(),
            tolerance: tol,
            max_error,
            passed,
            samples: samples.into_iter().map(|s| s.2).collect(),
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("serializable")
}

/// Jacobi identity `theta2^4 + theta4^4 = theta3^4`.
pub fn check_theta(rng: &mut SampleRng, n: usize, prec: u32, tol: f64) -> Result<CheckSummary, PeriodError> {
    let mut out = Vec::new();
    for _ in 0..n {
        let tau = sample_tau(rng, prec);
        let e = theta::jacobi_identity_error(&tau)?;
        out.push((e, e < tol, json!({"tau": to_value(&tau), "error": e})));
    }
    Ok(CheckSummary::from_samples("theta", tol, out))
}

/// `u_of_tau(Nf0, tau^) = u_of_tau(Nf2, tau^/2)`, with the right side also
/// computed from thetas at `tau^/2` only.
pub fn check_ucoord(rng: &mut SampleRng, n: usize, prec: u32, tol: f64) -> Result<CheckSummary, PeriodError> {
    let mut out = Vec::new();
    for _ in 0..n {
        let tau_hat = sample_tau(rng, prec);
        let half = tau_hat.scale_f64(0.5);
        let a = u_of_tau(Model::Nf0, &tau_hat)?;
        let b = u_of_tau(Model::Nf2, &half)?;
        let c = u_level_two(&half)?;
        let e = a.rel_err(&b).max(a.rel_err(&c));
        out.push((e, e < tol, json!({"tau_hat": to_value(&tau_hat), "u": to_value(&a), "error": e})));
    }
    Ok(CheckSummary::from_samples("ucoord", tol, out))
}

pub fn check_jmap(
    rng: &mut SampleRng,
    model: Model,
    n: usize,
    prec: u32,
    tol: f64,
) -> Result<CheckSummary, PeriodError> {
    let mut out = Vec::new();
    for _ in 0..n {
        let s = fiber_j_check(model, &sample_tau(rng, prec), tol)?;
        out.push((s.error, s.holds, to_value(&s)));
    }
    Ok(CheckSummary::from_samples(&format!("jmap/{}", model.name()), tol, out))
}

pub fn check_ratio(rng: &mut SampleRng, n: usize, prec: u32, tol: f64) -> Result<CheckSummary, PeriodError> {
    let mut out = Vec::new();
    for _ in 0..n {
        let params = sampling::generic_parameters(rng);
        let t = sample_regular_t(rng, &params, prec);
        let s = period_ratio_check(&params, &t, tol)?;
        out.push((s.error, s.holds, json!({"params": to_value(&params), "sample": to_value(&s)})));
    }
    Ok(CheckSummary::from_samples("ratio", tol, out))
}

/// Pullback law on both the hatted and unhatted pairs.
pub fn check_yukawa_pullback(rng: &mut SampleRng, n: usize, prec: u32, tol: f64) -> Result<CheckSummary, PeriodError> {
    let mut out = Vec::new();
    for _ in 0..n {
        let params = sampling::generic_parameters(rng);
        let t = sample_regular_t(rng, &params, prec);
        for hat in [true, false] {
            let s = yukawa_pullback_check(&params, &t, hat, tol)?;
            out.push((s.error, s.holds, json!({"params": to_value(&params), "hat": hat, "sample": to_value(&s)})));
        }
    }
    Ok(CheckSummary::from_samples("yukawa-pullback", tol, out))
}

/// Compares `Xi^_SW / Xi_SW` with `expected` at sampled `u`.
pub fn check_yukawa_ratio(
    rng: &mut SampleRng,
    n: usize,
    prec: u32,
    expected: &Q,
    tol: f64,
) -> Result<CheckSummary, PeriodError> {
    let mut out = Vec::new();
    let mut points = vec![ComplexHP::from_f64(3.0, 1.0, prec)];
    while points.len() < n.max(1) {
        points.push(sample_regular_u(rng, prec));
    }
    for u in points {
        let ratio = yukawa_ratio(&u)?;
        let target = ComplexHP::from_q(expected, &Q::from_integer(0.into()), prec);
        let e = ratio.rel_err(&target);
        out.push((e, e < tol, json!({"u": to_value(&u), "ratio": to_value(&ratio), "expected": crate::arith::fmt_q(expected), "error": e})));
    }
    Ok(CheckSummary::from_samples("yukawa-ratio", tol, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    const P: u32 = 192;

    #[test]
    fn identification_constants_match_scan() {
        let mut rng = sampling::rng(11);
        let taus: Vec<_> = (0..6).map(|_| sample_tau(&mut rng, P)).collect();
        for model in [Model::Nf0, Model::Nf2] {
            let hits = scan_identification(model, &taus, 1e-30).unwrap();
            assert_eq!(hits, vec![identification_factor(model).unwrap()]);
        }
        assert_eq!(identification_fiber(Model::Nf0).unwrap(), "X_SW");
    }

    #[test]
    fn j_checks_at_named_points() {
        let t = ComplexHP::from_f64(0.25, 1.5, P);
        assert!(fiber_j_check(Model::Nf0, &t, 1e-30).unwrap().holds);
        assert!(fiber_j_check(Model::Nf2, &ComplexHP::i(P), 1e-30).unwrap().holds);
        assert!(fiber_j_check(Model::Nf0, &ComplexHP::from_f64(0.3, 0.0, P), 1e-30).is_err());
        assert!(fiber_j_check(Model::Nf0, &ComplexHP::from_f64(0.0, 1.0, 64), 1e-30).is_err());
    }

    #[test]
    fn x_sw_lattice_ratio_is_tau_hat() {
        let tau_hat = ComplexHP::from_f64(0.1, 1.3, P);
        let u = u_of_tau(Model::Nf0, &tau_hat).unwrap();
        let b = periods_at(&Surface::Xsw, &u).unwrap();
        assert!(b.tau().rel_err(&tau_hat) < 1e-40);
    }

    #[test]
    fn period_ratio_generic_and_near_r_zero() {
        let params = FamilyParameters::new(qf(1, 3), qf(2, 5), qf(-3, 7));
        let s = period_ratio_check(&params, &ComplexHP::from_f64(2.0, 1.0, P), 1e-30).unwrap();
        assert!(s.holds, "{s:?}");
        let near = ComplexHP::from_q(&(qf(-3, 7) + qf(1, 100)), &qf(1, 1000), P);
        assert!(period_ratio_check(&params, &near, 1e-30).unwrap().holds);
    }

    #[test]
    fn yukawa_pullback_and_hat_ratio() {
        let params = FamilyParameters::new(qf(1, 3), qf(2, 5), qf(-3, 7));
        let t = ComplexHP::from_f64(2.0, 1.0, P);
        for hat in [true, false] {
            let s = yukawa_pullback_check(&params, &t, hat, 1e-20).unwrap();
            assert!(s.holds, "{s:?}");
        }
        let ratio = yukawa_ratio(&ComplexHP::from_f64(3.0, 1.0, P)).unwrap();
        assert!(ratio.rel_err(&ComplexHP::from_q(&q(2), &q(0), P)) < 1e-20);
    }

    #[test]
    fn yukawa_grows_near_singular_fiber() {
        let far = yukawa(&Surface::Ysw, &ComplexHP::from_f64(3.0, 0.5, P)).unwrap().value.abs();
        let near = yukawa(&Surface::Ysw, &ComplexHP::from_f64(1.001, 0.001, P)).unwrap().value.abs();
        assert!(near > far);
        assert!(matches!(yukawa(&Surface::Ysw, &ComplexHP::from_f64(1.0, 0.0, P)), Err(PeriodError::SingularFiber)));
    }

    #[test]
    fn summaries_are_deterministic() {
        let a = check_ucoord(&mut sampling::rng(3), 3, P, 1e-20).unwrap();
        let b = check_ucoord(&mut sampling::rng(3), 3, P, 1e-20).unwrap();
        assert!(a.passed);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}

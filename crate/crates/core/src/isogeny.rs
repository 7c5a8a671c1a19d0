//! Fiberwise 2-isogenies between the two Seiberg-Witten curves and between
//! the K3 families, verified as identities in the coordinate ring.

use crate::arith::curve::reduce_mod_curve;
use crate::arith::{q, qf, CurveFraction, CurveRelation, CurveRingElement, MPoly, RationalFunction, Var, Q};
use crate::families::{symbolic, FamilyParameters};
use crate::weierstrass::WeierstrassFibration;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsogenyError {
    #[error("image denominator must be a power of x: {0}")]
    NonMonomialDenominator(String),
    #[error("image denominator vanishes identically on the source curve")]
    DenominatorCollapse,
    #[error("{0} is not a 2-isogeny (x-degree {1})")]
    NotTwoIsogeny(String, u32),
    #[error("maps do not compose: target of the first is not the source of the second")]
    Mismatch,
    #[error("curve is not of the form y^2 = x (x^2 + B x + C)")]
    UnsupportedShape,
    #[error("pullback left a denominator that is not a power of x: {0}")]
    PullbackDoesNotClear(String),
}

#[derive(Debug, Clone)]
pub struct IsogenyMap {
    pub name: String,
    pub source: CurveRelation,
    pub target: CurveRelation,
    pub x_image: CurveFraction,
    pub y_image: CurveFraction,
}

#[derive(Debug, Clone, Serialize)]
pub struct IsogenyVerdict {
    pub name: String,
    pub holds: bool,
    /// Power of x cleared from the substituted target equation.
    pub cleared_x_power: u32,
    /// Normal form `even + odd * y` of the cleared residue.
    pub residue: String,
}

fn x(v: Var) -> MPoly {
    MPoly::var(v)
}

fn c(n: i64) -> MPoly {
    MPoly::int(n)
}

/// `y^2 = x (x^2 + B x + C)`.
fn two_torsion_form(xv: Var, yv: Var, b: &MPoly, cc: &MPoly) -> CurveRelation {
    let xx = x(xv);
    let rhs = &xx * &(&(&xx.pow(2) + &(b * &xx)) + cc);
    CurveRelation::new(xv, yv, rhs)
}

/// `yh^2 = xh (xh^2 - 2u xh + 1)`, the shifted chart of the `X_SW` fiber.
pub fn sw_hat_curve() -> CurveRelation {
    two_torsion_form(Var::XH, Var::YH, &x(Var::U).scale(&q(-2)), &c(1))
}

/// `y^2 = x (x + 2u - 2)(x + 2u + 2)`, the shifted chart of the `Y_SW` fiber.
pub fn sw_curve() -> CurveRelation {
    let u = x(Var::U);
    two_torsion_form(Var::X, Var::Y, &u.scale(&q(4)), &(&u.pow(2).scale(&q(4)) - &c(4)))
}

/// `yh^2 = xh (xh^2 - 2P xh + R^4)`.
pub fn k3_hat_curve() -> CurveRelation {
    two_torsion_form(Var::XH, Var::YH, &x(Var::P).scale(&q(-2)), &x(Var::R).pow(4))
}

/// `y^2 = x (x + 2P - 2R^2)(x + 2P + 2R^2)`.
pub fn k3_curve() -> CurveRelation {
    let (p, r) = (x(Var::P), x(Var::R));
    two_torsion_form(
        Var::X,
        Var::Y,
        &p.scale(&q(4)),
        &(&p.pow(2).scale(&q(4)) - &r.pow(4).scale(&q(4))),
    )
}

/// `x = yh^2 / xh^2`, `y = yh (xh^2 - 1) / xh^2`.
pub fn j_sw() -> IsogenyMap {
    let (xh, yh) = (x(Var::XH), x(Var::YH));
    IsogenyMap {
        name: "j_SW".into(),
        source: sw_hat_curve(),
        target: sw_curve(),
        x_image: CurveFraction::new(yh.pow(2), xh.pow(2)),
        y_image: CurveFraction::new(&yh * &(&xh.pow(2) - &c(1)), xh.pow(2)),
    }
}

/// The cofactor in the `y`-image of the dual map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DualCofactor {
    /// `x^2 - u^2 + 4`, as printed.
    Printed,
    /// `x^2 - 4u^2 + 4`, the unique cofactor making the map land on the curve.
    Forced,
}

/// `xh = y^2 / (4x^2)`, `yh = y (cofactor) / (8x^2)`.
pub fn j_dual_sw(cofactor: DualCofactor) -> IsogenyMap {
    let (xx, y, u) = (x(Var::X), x(Var::Y), x(Var::U));
    let k = match cofactor {
        DualCofactor::Printed => 1,
        DualCofactor::Forced => 4,
    };
    let cof = &(&xx.pow(2) - &u.pow(2).scale(&q(k))) + &c(4);
    IsogenyMap {
        name: match cofactor {
            DualCofactor::Printed => "j'_SW (printed cofactor x^2 - u^2 + 4)".into(),
            DualCofactor::Forced => "j'_SW (cofactor x^2 - 4u^2 + 4)".into(),
        },
        source: sw_curve(),
        target: sw_hat_curve(),
        x_image: CurveFraction::new(y.pow(2), xx.pow(2).scale(&q(4))),
        y_image: CurveFraction::new(&y * &cof, xx.pow(2).scale(&q(8))),
    }
}

/// K3 dual map with an arbitrary `y`-cofactor in `(x, P, R)`.
pub fn k3_dual_with_cofactor(name: &str, cofactor: MPoly) -> IsogenyMap {
    let (xx, y) = (x(Var::X), x(Var::Y));
    IsogenyMap {
        name: name.into(),
        source: k3_curve(),
        target: k3_hat_curve(),
        x_image: CurveFraction::new(y.pow(2), xx.pow(2).scale(&q(4))),
        y_image: CurveFraction::new(&y * &cofactor, xx.pow(2).scale(&q(8))),
    }
}

/// Readings of the printed K3 cofactor `x^2 - P^2 + 4M` (with `M^4 = R^4`)
/// next to the cofactor forced by the pullback.
pub fn k3_cofactor_candidates() -> Vec<(String, MPoly)> {
    let (xx, p, r) = (x(Var::X), x(Var::P), x(Var::R));
    let x2 = xx.pow(2);
    vec![
        ("x^2 - P^2 + 4M, M = R".into(), &(&x2 - &p.pow(2)) + &r.scale(&q(4))),
        ("x^2 - P^2 + 4R^4".into(), &(&x2 - &p.pow(2)) + &r.pow(4).scale(&q(4))),
        ("x^2 - 4P^2 + 4R^4".into(), &(&x2 - &p.pow(2).scale(&q(4))) + &r.pow(4).scale(&q(4))),
    ]
}

impl IsogenyMap {
    fn check_denominators(&self) -> Result<(u32, u32), IsogenyError> {
        let xs = self.source.x;
        let kx = self
            .x_image
            .x_power_denominator(xs)
            .map_err(|_| IsogenyError::NonMonomialDenominator(self.x_image.den.to_string()))?;
        let ky = self
            .y_image
            .x_power_denominator(xs)
            .map_err(|_| IsogenyError::NonMonomialDenominator(self.y_image.den.to_string()))?;
        if self.x_image.den_vanishes_on(&self.source) || self.y_image.den_vanishes_on(&self.source) {
            return Err(IsogenyError::DenominatorCollapse);
        }
        Ok((kx, ky))
    }

    fn images(&self) -> [(Var, CurveFraction); 2] {
        [(self.target.x, self.x_image.clone()), (self.target.y, self.y_image.clone())]
    }

    /// Substitutes parameter values (or polynomials) everywhere.
    pub fn specialize(&self, map: &[(Var, MPoly)]) -> IsogenyMap {
        let sub = |f: &CurveFraction| CurveFraction::new(f.num.substitute(map), f.den.substitute(map));
        IsogenyMap {
            name: self.name.clone(),
            source: CurveRelation::new(self.source.x, self.source.y, self.source.rhs.substitute(map)),
            target: CurveRelation::new(self.target.x, self.target.y, self.target.rhs.substitute(map)),
            x_image: sub(&self.x_image),
            y_image: sub(&self.y_image),
        }
    }

    /// Degree of the `x`-image as a rational function of the source `x`,
    /// computed after specializing every other variable to fixed rationals.
    pub fn x_degree(&self) -> u32 {
        let xs = self.source.x;
        let (ne, _) = self.source.split(&self.x_image.num);
        let (de, _) = self.source.split(&self.x_image.den);
        let mut vals = Vec::new();
        for v in 0..16 {
            if v != xs.0 {
                vals.push((Var(v), qf(3 * v as i64 + 7, 2 * v as i64 + 5)));
            }
        }
        let (Some(n), Some(d)) = (ne.eval_at(&vals).to_poly(xs), de.eval_at(&vals).to_poly(xs)) else {
            return 0;
        };
        match RationalFunction::new(n, d) {
            Ok(f) => f.num().degree().unwrap_or(0).max(f.den().degree().unwrap_or(0)) as u32,
            Err(_) => 0,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "name": self.name,
            "source": format!("{}^2 = {}", self.source.y.name(), self.source.rhs),
            "target": format!("{}^2 = {}", self.target.y.name(), self.target.rhs),
            "x_image": self.x_image.to_string(),
            "y_image": self.y_image.to_string(),
        })
    }
}

/// Substitutes the images into the target equation, clears the power of `x`
/// and reduces modulo the source relation.
pub fn verify_isogeny(phi: &IsogenyMap) -> Result<IsogenyVerdict, IsogenyError> {
    phi.check_denominators()?;
    let pulled = CurveFraction::substitute_into(&phi.target.equation(), &phi.images());
    let k = pulled
        .x_power_denominator(phi.source.x)
        .map_err(|_| IsogenyError::NonMonomialDenominator(pulled.den.to_string()))?;
    let (lc, _) = pulled.den.as_monomial().expect("monomial denominator");
    let num = pulled.num.scale(&lc.recip());
    let res: CurveRingElement = reduce_mod_curve(&num, k, &phi.source);
    Ok(IsogenyVerdict {
        name: phi.name.clone(),
        holds: res.is_zero(),
        cleared_x_power: k,
        residue: res.to_mpoly(&phi.source).to_string(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DualityVerdict {
    pub x_matches: bool,
    pub y_matches: bool,
    /// Whether the composition is `[-2]` instead.
    pub y_matches_negated: bool,
}

impl DualityVerdict {
    pub fn holds(&self) -> bool {
        self.x_matches && self.y_matches
    }
}

/// `[2]` on `y^2 = x (x^2 + Bx + C)` by the tangent construction.
pub fn doubling_oracle(curve: &CurveRelation) -> Result<(CurveFraction, CurveFraction), IsogenyError> {
    let cs = curve.rhs.coeffs_in(curve.x);
    if cs.len() != 4 || !cs[0].is_zero() || cs[3] != MPoly::one() {
        return Err(IsogenyError::UnsupportedShape);
    }
    let (cc, b) = (&cs[1], &cs[2]);
    let xx = CurveFraction::var(curve.x);
    let yy = CurveFraction::var(curve.y);
    let slope_num = &(&x(curve.x).pow(2).scale(&q(3)) + &(b * &x(curve.x)).scale(&q(2))) + cc;
    let lam = CurveFraction::poly(slope_num).div(&yy.scale(&q(2)));
    let bf = CurveFraction::poly(b.clone());
    let x2 = lam.pow(2).sub(&bf).sub(&xx.scale(&q(2)));
    let y2 = yy.add(&lam.mul(&x2.sub(&xx))).neg();
    Ok((x2, y2))
}

/// Checks that `psi . phi` is multiplication by two on the source of `phi`.
pub fn duality_check(phi: &IsogenyMap, psi: &IsogenyMap) -> Result<DualityVerdict, IsogenyError> {
    for m in [phi, psi] {
        let v = verify_isogeny(m)?;
        let d = m.x_degree();
        if !v.holds || d != 2 {
            return Err(IsogenyError::NotTwoIsogeny(m.name.clone(), d));
        }
    }
    if psi.source.x != phi.target.x || psi.source.y != phi.target.y {
        return Err(IsogenyError::Mismatch);
    }
    let sub = phi.images();
    let cx = psi.x_image.substitute(&sub);
    let cy = psi.y_image.substitute(&sub);
    if cx.den_vanishes_on(&phi.source) || cy.den_vanishes_on(&phi.source) {
        return Err(IsogenyError::DenominatorCollapse);
    }
    let (dx, dy) = doubling_oracle(&phi.source)?;
    Ok(DualityVerdict {
        x_matches: cx.eq_on(&dx, &phi.source),
        y_matches: cy.eq_on(&dy, &phi.source),
        y_matches_negated: cy.eq_on(&dy.neg(), &phi.source),
    })
}

/// The constant `k` with `phi^*(dx/y) = k dx_s/y_s`, if the pullback of the
/// invariant differential is a constant multiple.
pub fn differential_constant(phi: &IsogenyMap) -> Option<Q> {
    let (xs, ys) = (phi.source.x, phi.source.y);
    // dy_s/dx_s = rhs'(x_s) / (2 y_s) on the source curve.
    let dyds = CurveFraction::new(phi.source.rhs.derivative(xs), x(ys).scale(&q(2)));
    let dx = phi.x_image.derivative(xs).add(&phi.x_image.derivative(ys).mul(&dyds));
    let ratio = dx.mul(&CurveFraction::var(ys)).div(&phi.y_image);
    ratio.constant_on(&phi.source)
}

/// Pulls a map between Seiberg-Witten charts back along `u = P / R^2` and
/// undoes the quadratic twist: `x_SW = x / R^2`, `y_SW = y / R^3`.
pub fn twisted_pullback(sw: &IsogenyMap, name: &str) -> Result<IsogenyMap, IsogenyError> {
    let r = x(Var::R);
    let frac = |n: MPoly, d: MPoly| CurveFraction::new(n, d);
    let u_sub = (Var::U, frac(x(Var::P), r.pow(2)));
    let src = [
        u_sub.clone(),
        (sw.source.x, frac(x(sw.source.x), r.pow(2))),
        (sw.source.y, frac(x(sw.source.y), r.pow(3))),
    ];
    let x_image = sw.x_image.substitute(&src).mul(&CurveFraction::poly(r.pow(2)));
    let y_image = sw.y_image.substitute(&src).mul(&CurveFraction::poly(r.pow(3)));
    for f in [&x_image, &y_image] {
        f.x_power_denominator(sw.source.x)
            .map_err(|_| IsogenyError::PullbackDoesNotClear(f.den.to_string()))?;
    }
    let twist_curve = |rel: &CurveRelation| -> Result<CurveRelation, IsogenyError> {
        let sub = [u_sub.clone(), (rel.x, frac(x(rel.x), r.pow(2)))];
        let rhs = CurveFraction::substitute_into(&rel.rhs, &sub).mul(&CurveFraction::poly(r.pow(6)));
        match rhs.den.as_constant() {
            Some(d) if !d.is_zero() => Ok(CurveRelation::new(rel.x, rel.y, rhs.num.scale(&d.recip()))),
            _ => Err(IsogenyError::PullbackDoesNotClear(rhs.den.to_string())),
        }
    };
    Ok(IsogenyMap {
        name: name.into(),
        source: twist_curve(&sw.source)?,
        target: twist_curve(&sw.target)?,
        x_image,
        y_image,
    })
}

/// `P -> p(t)`, `R -> r(t)` for concrete parameters.
pub fn specialize_to_family(map: &IsogenyMap, params: &FamilyParameters) -> IsogenyMap {
    let pr = crate::families::make_p_r(params);
    map.specialize(&[(Var::P, MPoly::from_poly(&pr.p, Var::T)), (Var::R, MPoly::from_poly(&pr.r, Var::T))])
}

/// `P -> p(t0)`, `R -> r(t0)` at a rational point of the base.
pub fn specialize_at(map: &IsogenyMap, params: &FamilyParameters, t0: &Q) -> IsogenyMap {
    let pr = crate::families::make_p_r(params);
    map.specialize(&[
        (Var::P, MPoly::constant(pr.p.eval(t0))),
        (Var::R, MPoly::constant(pr.r.eval(t0))),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SectionStatus {
    TwoTorsion,
    OnCurve,
    NotOnCurve,
}

/// A candidate section `(X(t), Y(t))` of a Weierstrass fibration.
#[derive(Debug, Clone)]
pub struct SectionPoint {
    pub x: RationalFunction,
    pub y: RationalFunction,
}

pub fn verify_section(s: &SectionPoint, w: &WeierstrassFibration) -> SectionStatus {
    let g2 = RationalFunction::from_poly(w.g2.clone());
    let g3 = RationalFunction::from_poly(w.g3.clone());
    let rhs = s.x.pow(3).scale(&q(4)).sub(&g2.mul(&s.x)).sub(&g3);
    if !s.y.pow(2).sub(&rhs).is_zero() {
        SectionStatus::NotOnCurve
    } else if s.y.is_zero() {
        SectionStatus::TwoTorsion
    } else {
        SectionStatus::OnCurve
    }
}

/// The same test with polynomial coefficients in several variables.
pub fn verify_section_symbolic(x_sec: &MPoly, y_sec: &MPoly, g2: &MPoly, g3: &MPoly) -> SectionStatus {
    let rhs = &(&x_sec.pow(3).scale(&q(4)) - &(g2 * x_sec)) - g3;
    if !(&y_sec.pow(2) - &rhs).is_zero() {
        SectionStatus::NotOnCurve
    } else if y_sec.is_zero() {
        SectionStatus::TwoTorsion
    } else {
        SectionStatus::OnCurve
    }
}

/// `(X, Y) = (-p/6, 0)` on `X_{a,b,c}`, identically in `(a, b, c, t)`.
pub fn sigma_hat_symbolic() -> SectionStatus {
    let (g2, g3) = symbolic::x_coeffs();
    verify_section_symbolic(&symbolic::p().scale(&qf(-1, 6)), &MPoly::zero(), &g2, &g3)
}

/// Checks that `X = x/4 + shift`, `Y = y/4` carries the Weierstrass model
/// `(g2, g3)` to `y^2 = chart_rhs(x)`, identically in all variables.
pub fn chart_identity(g2: &MPoly, g3: &MPoly, shift: &MPoly, chart: &CurveRelation) -> bool {
    let xw = &x(chart.x).scale(&qf(1, 4)) + shift;
    let rhs = &(&xw.pow(3).scale(&q(4)) - &(g2 * &xw)) - g3;
    rhs.scale(&q(16)) == chart.rhs
}

/// Both K3 charts in `Q[a, b, c, t, x]`: `X^ = x^/4 - p/6` for `X_{a,b,c}` and
/// `X = x/4 + p/3` for `Y_{a,b,c}`.
pub fn k3_chart_identities() -> (bool, bool) {
    let sub = [(Var::P, symbolic::p()), (Var::R, symbolic::r())];
    let hat = k3_hat_curve();
    let hat = CurveRelation::new(hat.x, hat.y, hat.rhs.substitute(&sub));
    let plain = k3_curve();
    let plain = CurveRelation::new(plain.x, plain.y, plain.rhs.substitute(&sub));
    let (xg2, xg3) = symbolic::x_coeffs();
    let (yg2, yg3) = symbolic::y_coeffs();
    (
        chart_identity(&xg2, &xg3, &symbolic::p().scale(&qf(-1, 6)), &hat),
        chart_identity(&yg2, &yg3, &symbolic::p().scale(&qf(1, 3)), &plain),
    )
}

/// The same for the Seiberg-Witten charts in `Q[u, x]`.
pub fn sw_chart_identities() -> (bool, bool) {
    let u = x(Var::U);
    let (xg2, xg3) = (
        &u.pow(2).scale(&qf(1, 3)) - &MPoly::constant(qf(1, 4)),
        (&u * &(&u.pow(2).scale(&q(8)) - &c(9))).scale(&qf(1, 216)),
    );
    let (yg2, yg3) = (
        &u.pow(2).scale(&qf(1, 3)) + &c(1),
        (&u * &(&u.pow(2) - &c(9))).scale(&qf(1, 27)),
    );
    (
        chart_identity(&xg2, &xg3, &u.scale(&qf(-1, 6)), &sw_hat_curve()),
        chart_identity(&yg2, &yg3, &u.scale(&qf(1, 3)), &sw_curve()),
    )
}

/// A point of a chart curve given by rational values of its coordinates.
pub fn chart_point_status(curve: &CurveRelation, xv: &MPoly, yv: &MPoly) -> SectionStatus {
    let rhs = curve.rhs.substitute(&[(curve.x, xv.clone())]);
    if !(&yv.pow(2) - &rhs).is_zero() {
        SectionStatus::NotOnCurve
    } else if yv.is_zero() {
        SectionStatus::TwoTorsion
    } else {
        SectionStatus::OnCurve
    }
}

/// The derived K3 pair `(j, j')` from the Seiberg-Witten maps.
pub fn derived_k3_maps() -> Result<(IsogenyMap, IsogenyMap), IsogenyError> {
    Ok((
        twisted_pullback(&j_sw(), "j (pulled back)")?,
        twisted_pullback(&j_dual_sw(DualCofactor::Forced), "j' (pulled back)")?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Poly;
    use crate::families::make_x;

    #[test]
    fn sw_maps() {
        assert!(verify_isogeny(&j_sw()).unwrap().holds);
        assert!(verify_isogeny(&j_dual_sw(DualCofactor::Forced)).unwrap().holds);
        let printed = verify_isogeny(&j_dual_sw(DualCofactor::Printed)).unwrap();
        assert!(!printed.holds);
        assert_eq!(j_sw().x_degree(), 2);
    }

    #[test]
    fn sw_duality_and_differentials() {
        let v = duality_check(&j_sw(), &j_dual_sw(DualCofactor::Forced)).unwrap();
        assert!(v.holds());
        assert_eq!(differential_constant(&j_sw()), Some(q(1)));
        assert_eq!(differential_constant(&j_dual_sw(DualCofactor::Forced)), Some(q(2)));
    }

    #[test]
    fn identity_is_not_a_two_isogeny() {
        let id = IsogenyMap {
            name: "id".into(),
            source: sw_hat_curve(),
            target: sw_hat_curve(),
            x_image: CurveFraction::var(Var::XH),
            y_image: CurveFraction::var(Var::YH),
        };
        assert!(verify_isogeny(&id).unwrap().holds);
        assert!(matches!(duality_check(&id, &id), Err(IsogenyError::NotTwoIsogeny(_, 1))));
    }

    #[test]
    fn pulled_back_maps_match_charts() {
        let (j, jd) = derived_k3_maps().unwrap();
        assert_eq!(j.source, k3_hat_curve());
        assert_eq!(j.target, k3_curve());
        assert!(verify_isogeny(&j).unwrap().holds);
        assert!(verify_isogeny(&jd).unwrap().holds);
        let forced = k3_dual_with_cofactor("forced", k3_cofactor_candidates()[2].1.clone());
        assert!(forced.y_image.eq_on(&jd.y_image, &forced.source));
        for (_, cof) in &k3_cofactor_candidates()[..2] {
            assert!(!verify_isogeny(&k3_dual_with_cofactor("printed", cof.clone())).unwrap().holds);
        }
    }

    #[test]
    fn k3_duality_generic_and_specialized() {
        let (j, jd) = derived_k3_maps().unwrap();
        assert!(duality_check(&j, &jd).unwrap().holds());
        assert_eq!(differential_constant(&jd), Some(q(2)));
        let params = FamilyParameters::ints(1, 2, 3);
        for t0 in [qf(1, 2), q(5), qf(-7, 3)] {
            let (a, b) = (specialize_at(&j, &params, &t0), specialize_at(&jd, &params, &t0));
            assert!(duality_check(&a, &b).unwrap().holds());
        }
        assert!(verify_isogeny(&specialize_to_family(&jd, &params)).unwrap().holds);
    }

    #[test]
    fn charts() {
        assert_eq!(sw_chart_identities(), (true, true));
        assert_eq!(k3_chart_identities(), (true, true));
        let o = MPoly::zero();
        assert_eq!(chart_point_status(&k3_hat_curve(), &o, &o), SectionStatus::TwoTorsion);
    }

    #[test]
    fn sections() {
        assert_eq!(sigma_hat_symbolic(), SectionStatus::TwoTorsion);
        let params = FamilyParameters::ints(1, 2, 3);
        let pr = crate::families::make_p_r(&params);
        let sig = SectionPoint {
            x: RationalFunction::from_poly(pr.p.scale(&qf(-1, 6))),
            y: RationalFunction::from_poly(Poly::zero()),
        };
        assert_eq!(verify_section(&sig, &make_x(&params)), SectionStatus::TwoTorsion);
        let origin = SectionPoint {
            x: RationalFunction::from_poly(Poly::zero()),
            y: RationalFunction::from_poly(Poly::zero()),
        };
        assert_eq!(verify_section(&origin, &make_x(&params)), SectionStatus::NotOnCurve);
    }
}

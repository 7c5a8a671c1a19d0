//! Jacobi theta constants with nome `q = exp(i pi tau)`.

use super::complex::ComplexHP;
use super::PeriodError;
use rug::Float;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum ThetaKind {
    Two,
    Three,
    Four,
}

/// Largest number of series terms ever summed; `|q| < 1 - 1e-3` is required
/// well before this matters.
const MAX_TERMS: usize = 100_000;

fn check_upper(tau: &ComplexHP) -> Result<(), PeriodError> {
    if tau.im.is_sign_negative() || tau.im.is_zero() || !tau.is_finite() {
        return Err(PeriodError::NotUpperHalfPlane(tau.to_string_digits(12)));
    }
    Ok(())
}

/// Sums `sum_{n >= 0} s^n q^{n^2 + shift n}` until terms fall below
/// `2^-(prec - 8)`, or for exactly `terms` terms if given.
fn series(q: &ComplexHP, shift: u32, alternate: bool, terms: Option<usize>) -> ComplexHP {
    let prec = q.prec();
    let eps = Float::with_val(prec, Float::i_exp(1, -(prec as i32 - 8)));
    let q2 = q.mul(q);
    let mut total = ComplexHP::zero(prec);
    let mut term = ComplexHP::one(prec);
    // ratio between consecutive terms: q^{2n + 1 + shift}
    let mut step = q.powi(1 + shift);
    for n in 0..terms.unwrap_or(MAX_TERMS) {
        let signed = if alternate && n % 2 == 1 { term.neg() } else { term.clone() };
        total = total.add(&signed);
        if terms.is_none() && term.abs() < eps {
            break;
        }
        term = term.mul(&step);
        step = step.mul(&q2);
    }
    total
}

fn theta_impl(kind: ThetaKind, tau: &ComplexHP, terms: Option<usize>) -> Result<ComplexHP, PeriodError> {
    check_upper(tau)?;
    let prec = tau.prec();
    let q = tau.exp_i_pi();
    Ok(match kind {
        // 2 q^{1/4} sum q^{n(n+1)}
        ThetaKind::Two => {
            let q4 = tau.scale_f64(0.25).exp_i_pi();
            series(&q, 1, false, terms).mul(&q4).scale_f64(2.0)
        }
        // 1 + 2 sum_{n>=1} q^{n^2} = 2 sum_{n>=0} q^{n^2} - 1
        ThetaKind::Three => series(&q, 0, false, terms).scale_f64(2.0).sub(&ComplexHP::one(prec)),
        ThetaKind::Four => series(&q, 0, true, terms).scale_f64(2.0).sub(&ComplexHP::one(prec)),
    })
}

pub fn theta(kind: ThetaKind, tau: &ComplexHP) -> Result<ComplexHP, PeriodError> {
    theta_impl(kind, tau, None)
}

/// Fixed truncation, for checking the adaptive stopping rule.
pub fn theta_truncated(kind: ThetaKind, tau: &ComplexHP, terms: usize) -> Result<ComplexHP, PeriodError> {
    theta_impl(kind, tau, Some(terms))
}

pub fn thetas(tau: &ComplexHP) -> Result<[ComplexHP; 3], PeriodError> {
    Ok([theta(ThetaKind::Two, tau)?, theta(ThetaKind::Three, tau)?, theta(ThetaKind::Four, tau)?])
}

/// `|theta2^4 + theta4^4 - theta3^4| / |theta3^4|`.
pub fn jacobi_identity_error(tau: &ComplexHP) -> Result<f64, PeriodError> {
    let [t2, t3, t4] = thetas(tau)?;
    Ok(t2.powi(4).add(&t4.powi(4)).rel_err(&t3.powi(4)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Model {
    /// Pure SU(2); `u` in terms of `tau^`, fiber of `X_SW`.
    Nf0,
    /// Two flavors; thetas at `2 tau`, fiber of `Y_SW`.
    Nf2,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Nf0 => "Nf0",
            Model::Nf2 => "Nf2",
        }
    }
}

/// `(theta2^4 + theta3^4) / (2 theta2^2 theta3^2)`.
fn u_from_thetas(t2: &ComplexHP, t3: &ComplexHP) -> ComplexHP {
    let (a, b) = (t2.powi(2), t3.powi(2));
    a.mul(&a).add(&b.mul(&b)).div(&a.mul(&b).scale_f64(2.0))
}

pub fn u_of_tau(model: Model, tau: &ComplexHP) -> Result<ComplexHP, PeriodError> {
    let arg = match model {
        Model::Nf0 => tau.clone(),
        Model::Nf2 => tau.scale_f64(2.0),
    };
    let t2 = theta(ThetaKind::Two, &arg)?;
    let t3 = theta(ThetaKind::Three, &arg)?;
    Ok(u_from_thetas(&t2, &t3))
}

/// `(theta3^4 + theta4^4) / theta2^4` at `tau` itself. Equals
/// `u_of_tau(Nf2, tau)` by the duplication formulas, without evaluating
/// anything at `2 tau`.
pub fn u_level_two(tau: &ComplexHP) -> Result<ComplexHP, PeriodError> {
    let [t2, t3, t4] = thetas(tau)?;
    Ok(t3.powi(4).add(&t4.powi(4)).div(&t2.powi(4)))
}

/// `j(tau) = 32 (theta2^8 + theta3^8 + theta4^8)^3 / (theta2 theta3 theta4)^8`,
/// normalized so that `j(i) = 1728`.
pub fn j_from_thetas(tau: &ComplexHP) -> Result<ComplexHP, PeriodError> {
    let [t2, t3, t4] = thetas(tau)?;
    let s = t2.powi(8).add(&t3.powi(8)).add(&t4.powi(8));
    Ok(s.powi(3).scale_f64(32.0).div(&t2.mul(&t3).mul(&t4).powi(8)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::float::Constant;

    #[test]
    fn theta3_at_i_closed_form() {
        let p = 256;
        let i = ComplexHP::i(p);
        let t3 = theta(ThetaKind::Three, &i).unwrap();
        // pi^{1/4} / Gamma(3/4)
        let g = Float::with_val(p, 0.75).gamma();
        let pi = Float::with_val(p, Constant::Pi);
        let closed = ComplexHP::real(pi.sqrt().sqrt() / g);
        assert!(t3.rel_err(&closed) < 1e-70);
        assert!(t3.im.clone().abs() < 1e-70);
    }

    #[test]
    fn jacobi_and_limits() {
        let tau = ComplexHP::from_f64(1.0 / 3.0, 2.0, 192);
        assert!(jacobi_identity_error(&tau).unwrap() < 1e-50);
        let far = ComplexHP::from_f64(0.1, 40.0, 192);
        let [t2, t3, _] = thetas(&far).unwrap();
        assert!(t2.abs() < 1e-12);
        assert!(t3.rel_err(&ComplexHP::one(192)) < 1e-40);
        assert!(u_of_tau(Model::Nf0, &far).unwrap().abs() > 1e20);
        assert!(theta(ThetaKind::Two, &ComplexHP::from_f64(0.3, 0.0, 128)).is_err());
        assert!(theta(ThetaKind::Two, &ComplexHP::from_f64(0.3, -1.0, 128)).is_err());
    }

    #[test]
    fn j_at_i_and_rho() {
        let p = 192;
        let j = j_from_thetas(&ComplexHP::i(p)).unwrap();
        assert!(j.rel_err(&ComplexHP::from_f64(1728.0, 0.0, p)) < 1e-45);
        let rho = ComplexHP::new(Float::with_val(p, -0.5), Float::with_val(p, 3).sqrt() / 2u32);
        assert!(j_from_thetas(&rho).unwrap().abs() < 1e-40);
    }

    #[test]
    fn truncation_is_converged() {
        let tau = ComplexHP::from_f64(0.2, 0.9, 192);
        let a = theta(ThetaKind::Four, &tau).unwrap();
        let b = theta_truncated(ThetaKind::Four, &tau, 400).unwrap();
        assert!(a.rel_err(&b) < 1e-55);
    }

    #[test]
    fn level_two_u_agrees() {
        let tau = ComplexHP::from_f64(0.17, 0.83, 192);
        let a = u_of_tau(Model::Nf2, &tau).unwrap();
        let b = u_level_two(&tau).unwrap();
        assert!(a.rel_err(&b) < 1e-50);
    }
}

//! Period lattices of `dX/Y` on `Y^2 = 4X^3 - g2 X - g3` via the complex AGM.

use super::complex::{pi, ComplexHP};
use super::PeriodError;
use rug::Float;

/// `(w1, w2)` with `Im(w2 / w1) > 0`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct PeriodBasis {
    pub w1: ComplexHP,
    pub w2: ComplexHP,
}

impl PeriodBasis {
    pub fn tau(&self) -> ComplexHP {
        self.w2.div(&self.w1)
    }

    pub fn scale(&self, k: &ComplexHP) -> PeriodBasis {
        PeriodBasis { w1: self.w1.mul(k), w2: self.w2.mul(k) }
    }
}

fn tiny(prec: u32, slack: i32) -> Float {
    Float::with_val(prec, Float::i_exp(1, -(prec as i32) + slack))
}

/// Roots of `4x^3 - g2 x - g3` by Durand-Kerner followed by Newton polishing.
pub fn cubic_roots(g2: &ComplexHP, g3: &ComplexHP) -> Result<[ComplexHP; 3], PeriodError> {
    let prec = g2.prec().max(g3.prec());
    let (c1, c0) = (g2.scale_f64(-0.25), g3.scale_f64(-0.25));
    // monic x^3 + c1 x + c0
    let f = |x: &ComplexHP| x.powi(3).add(&c1.mul(x)).add(&c0);
    let df = |x: &ComplexHP| x.mul(x).scale_f64(3.0).add(&c1);
    let seed = ComplexHP::from_f64(0.4, 0.9, prec);
    let mut z = [ComplexHP::one(prec), seed.clone(), seed.mul(&seed)];
    let eps = tiny(prec, 16);
    for _ in 0..2000 {
        let mut moved = Float::new(prec);
        for i in 0..3 {
            let mut den = ComplexHP::one(prec);
            for j in 0..3 {
                if i != j {
                    den = den.mul(&z[i].sub(&z[j]));
                }
            }
            let corr = f(&z[i]).div(&den);
            let size = corr.abs();
            if size > moved {
                moved = size;
            }
            z[i] = z[i].sub(&corr);
        }
        if !moved.is_finite() {
            break;
        }
        let scale = z.iter().map(|r| r.abs()).fold(Float::with_val(prec, 1), |a, b| a.max(&b));
        if moved < Float::with_val(prec, &eps * &scale) {
            break;
        }
    }
    for r in z.iter_mut() {
        for _ in 0..4 {
            let d = df(r);
            if d.abs().is_zero() {
                break;
            }
            *r = r.sub(&f(r).div(&d));
        }
    }
    if z.iter().any(|r| !r.is_finite()) {
        return Err(PeriodError::RootFinding);
    }
    Ok(z)
}

/// AGM with the "right choice" of square root at each step: `|a - b| <= |a + b|`.
pub fn agm(a: &ComplexHP, b: &ComplexHP) -> Result<ComplexHP, PeriodError> {
    let prec = a.prec();
    let eps = tiny(prec, 12);
    let (mut a, mut b) = (a.clone(), b.clone());
    for _ in 0..(4 * prec as usize + 100) {
        if a.sub(&b).abs() <= Float::with_val(prec, &eps * &a.abs()) {
            return Ok(a);
        }
        let a1 = a.add(&b).scale_f64(0.5);
        let mut b1 = a.mul(&b).sqrt();
        if a1.sub(&b1).abs() > a1.add(&b1).abs() {
            b1 = b1.neg();
        }
        a = a1;
        b = b1;
    }
    Err(PeriodError::AgmDiverged)
}

fn right_choice(a: &ComplexHP, b: ComplexHP) -> ComplexHP {
    if a.sub(&b).abs() > a.add(&b).abs() {
        b.neg()
    } else {
        b
    }
}

/// Unreduced AGM basis `(pi / M(a, b), pi i / M(a, c))`.
pub fn raw_periods(g2: &ComplexHP, g3: &ComplexHP) -> Result<PeriodBasis, PeriodError> {
    let prec = g2.prec().max(g3.prec());
    let disc = g2.powi(3).sub(&g3.mul(g3).scale_f64(27.0));
    let size = Float::with_val(prec, g2.abs().square() * g2.abs()).max(&Float::with_val(prec, g3.norm_sqr() * 27u32));
    if disc.abs() <= Float::with_val(prec, &size * &tiny(prec, 32)) {
        return Err(PeriodError::SingularFiber);
    }
    let [e1, e2, e3] = cubic_roots(g2, g3)?;
    let a = e1.sub(&e3).sqrt();
    let b = right_choice(&a, e1.sub(&e2).sqrt());
    let c = right_choice(&a, e2.sub(&e3).sqrt());
    let p = ComplexHP::real(pi(prec));
    let w1 = p.div(&agm(&a, &b)?);
    let w2 = p.mul(&ComplexHP::i(prec)).div(&agm(&a, &c)?);
    let basis = PeriodBasis { w1, w2 };
    if basis.tau().im.is_sign_negative() {
        Ok(PeriodBasis { w1: basis.w1, w2: basis.w2.neg() })
    } else {
        Ok(basis)
    }
}

/// Moves `w2 / w1` into `|Re tau| <= 1/2`, `|tau| >= 1`.
pub fn reduce(basis: &PeriodBasis) -> PeriodBasis {
    let prec = basis.w1.prec();
    let (mut w1, mut w2) = (basis.w1.clone(), basis.w2.clone());
    if w2.div(&w1).im.is_sign_negative() {
        w2 = w2.neg();
    }
    let margin = Float::with_val(prec, 1) - tiny(prec, 40);
    for _ in 0..10_000 {
        let n = w2.div(&w1).re.round();
        w2 = w2.sub(&w1.scale(&n));
        if w2.div(&w1).abs() < margin {
            let t = w2.clone();
            w2 = w1.neg();
            w1 = t;
        } else {
            break;
        }
    }
    PeriodBasis { w1, w2 }
}

/// Lattice coordinates of `z` in the basis `(o1, o2)`.
fn coords(z: &ComplexHP, basis: &PeriodBasis) -> (Float, Float) {
    let (o1, o2) = (&basis.w1, &basis.w2);
    let det = Float::with_val(z.prec(), &o1.re * &o2.im) - Float::with_val(z.prec(), &o2.re * &o1.im);
    let m = (Float::with_val(z.prec(), &z.re * &o2.im) - Float::with_val(z.prec(), &o2.re * &z.im)) / &det;
    let n = (Float::with_val(z.prec(), &o1.re * &z.im) - Float::with_val(z.prec(), &z.re * &o1.im)) / &det;
    (m, n)
}

/// Result of expressing one lattice basis in another.
#[derive(Debug, Clone)]
pub struct BasisMatch {
    /// Integer matrix `[[m1, n1], [m2, n2]]` with `target_i ~ m_i w1 + n_i w2`.
    pub matrix: [[i64; 2]; 2],
    /// Largest distance of a coordinate from the nearest integer.
    pub residual: f64,
    /// The basis of `lattice` closest to `target`.
    pub basis: PeriodBasis,
}

impl BasisMatch {
    pub fn unimodular(&self) -> bool {
        let [[a, b], [c, d]] = self.matrix;
        (a * d - b * c).abs() == 1
    }
}

/// Expresses `target` in the basis `lattice` and rounds the coordinates.
pub fn match_basis(target: &PeriodBasis, lattice: &PeriodBasis) -> BasisMatch {
    let mut matrix = [[0i64; 2]; 2];
    let mut residual = 0f64;
    let mut vecs = Vec::new();
    for (row, z) in [&target.w1, &target.w2].into_iter().enumerate() {
        let (m, n) = coords(z, lattice);
        let (mr, nr) = (m.clone().round(), n.clone().round());
        residual = residual.max((m - &mr).abs().to_f64()).max((n - &nr).abs().to_f64());
        let (mi, ni) = (mr.to_f64() as i64, nr.to_f64() as i64);
        matrix[row] = [mi, ni];
        vecs.push(lattice.w1.scale(&mr).add(&lattice.w2.scale(&nr)));
    }
    let w2 = vecs.pop().expect("two vectors");
    let w1 = vecs.pop().expect("two vectors");
    BasisMatch { matrix, residual, basis: PeriodBasis { w1, w2 } }
}

/// Reduced period basis of the fiber.
pub fn fiber_periods(g2: &ComplexHP, g3: &ComplexHP) -> Result<PeriodBasis, PeriodError> {
    Ok(reduce(&raw_periods(g2, g3)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::float::Constant;

    /// `g2`, `g3` from Eisenstein series of the lattice `Z w1 + Z w2`.
    fn eisenstein(b: &PeriodBasis) -> (ComplexHP, ComplexHP) {
        let prec = b.w1.prec();
        let q = b.tau().scale_f64(2.0).exp_i_pi();
        let (mut e4, mut e6) = (ComplexHP::one(prec), ComplexHP::one(prec));
        let mut qn = ComplexHP::one(prec);
        for n in 1..400u32 {
            qn = qn.mul(&q);
            let lam = qn.div(&ComplexHP::one(prec).sub(&qn));
            e4 = e4.add(&lam.scale_f64(240.0 * (n as f64).powi(3)));
            e6 = e6.sub(&lam.scale_f64(504.0 * (n as f64).powi(5)));
        }
        let p = ComplexHP::real(Float::with_val(prec, Constant::Pi));
        let g2 = p.powi(4).scale_q(&crate::arith::qf(4, 3)).div(&b.w1.powi(4)).mul(&e4);
        let g3 = p.powi(6).scale_q(&crate::arith::qf(8, 27)).div(&b.w1.powi(6)).mul(&e6);
        (g2, g3)
    }

    #[test]
    fn agm_lattice_matches_eisenstein_oracle() {
        let prec = 192;
        for (a, b, c, d) in [(1.0, 2.0, -3.0, 0.5), (-4.0, 0.3, 2.2, -1.7), (0.1, 5.0, 0.0, -2.0)] {
            let g2 = ComplexHP::from_f64(a, b, prec);
            let g3 = ComplexHP::from_f64(c, d, prec);
            let basis = fiber_periods(&g2, &g3).unwrap();
            let (e2, e3) = eisenstein(&basis);
            assert!(e2.rel_err(&g2) < 1e-45, "{a} {b} {c} {d}");
            assert!(e3.rel_err(&g3) < 1e-45);
            let t = basis.tau();
            assert!(t.abs() >= 0.999 && t.re.clone().abs() <= 0.5 + 1e-30);
        }
    }

    #[test]
    fn lemniscatic_and_homogeneity() {
        let prec = 192;
        let basis = fiber_periods(&ComplexHP::from_f64(4.0, 0.0, prec), &ComplexHP::zero(prec)).unwrap();
        assert!(basis.tau().rel_err(&ComplexHP::i(prec)) < 1e-50);
        let (g2, g3) = (ComplexHP::from_f64(2.0, -1.0, prec), ComplexHP::from_f64(0.5, 3.0, prec));
        let lam = ComplexHP::from_f64(1.3, 0.4, prec);
        let scaled = fiber_periods(&g2.mul(&lam.powi(4)), &g3.mul(&lam.powi(6))).unwrap();
        let m = match_basis(&basis_div(&fiber_periods(&g2, &g3).unwrap(), &lam), &scaled);
        assert!(m.residual < 1e-40 && m.unimodular());
    }

    fn basis_div(b: &PeriodBasis, k: &ComplexHP) -> PeriodBasis {
        b.scale(&k.recip())
    }

    #[test]
    fn singular_fiber_rejected() {
        let prec = 128;
        // g2 = 3, g3 = 1: g2^3 = 27 g3^2
        let r = fiber_periods(&ComplexHP::from_f64(3.0, 0.0, prec), &ComplexHP::from_f64(1.0, 0.0, prec));
        assert!(matches!(r, Err(PeriodError::SingularFiber)));
    }
}

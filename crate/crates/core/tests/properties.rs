use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use swk3::arith::poly::gcd_free_basis;
use swk3::arith::{q, qf, CurveRelation, MPoly, Poly, Var, Q};
use swk3::families::{self, FamilyParameters};
use swk3::isogeny;
use swk3::kummer::{self, GenusTwoCurve};
use swk3::lattice::{self, IntegerLattice, LatticeName, Sign};
use swk3::monodromy::{build_generator, Generator, SL2Z};
use swk3::periods::{complex::ComplexHP, theta};
use swk3::weierstrass::{classify_fibers, minimalize, Locus, WeierstrassFibration};

fn rational() -> impl Strategy<Value = Q> {
    (-20i64..=20, 1i64..=9).prop_map(|(n, d)| qf(n, d))
}

fn poly(max_len: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(rational(), 1..=max_len).prop_map(Poly::new)
}

fn nonzero_poly(max_len: usize) -> impl Strategy<Value = Poly> {
    poly(max_len).prop_filter("nonzero", |p| !p.is_zero())
}

fn params() -> impl Strategy<Value = FamilyParameters> {
    (rational(), rational(), rational()).prop_map(|(a, b, c)| FamilyParameters::new(a, b, c))
}

fn nonzero_rational() -> impl Strategy<Value = Q> {
    rational().prop_filter("nonzero", |x| !x.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn divrem_round_trip(f in poly(7), g in nonzero_poly(5)) {
        let (quo, rem) = (&f * &g).divrem(&g).unwrap();
        prop_assert_eq!(quo, f);
        prop_assert!(rem.is_zero());
    }

    #[test]
    fn multiplicity_is_additive(root in rational(), g in nonzero_poly(5), h in nonzero_poly(5)) {
        let f = Poly::linear_root(&root);
        let m = |x: &Poly| Poly::multiplicity(&f, x).unwrap();
        prop_assert_eq!(m(&(&g * &h)), m(&g) + m(&h));
    }

    #[test]
    fn gcd_divides_and_absorbs_common_factor(f in nonzero_poly(5), g in nonzero_poly(5), h in nonzero_poly(4)) {
        let d = f.gcd(&g);
        prop_assert!(f.exact_div(&d).is_some() && g.exact_div(&d).is_some());
        let dh = (&f * &h).gcd(&(&g * &h));
        prop_assert!(dh.exact_div(&h.monic()).is_some());
        prop_assert_eq!(dh.degree(), Some(d.degree().unwrap() + h.degree().unwrap()));
    }

    #[test]
    fn gcd_free_basis_reconstructs_inputs(fs in prop::collection::vec(nonzero_poly(4), 1..4), k in 1usize..3) {
        let inputs: Vec<Poly> = fs.iter().map(|f| f.pow(k)).collect();
        let basis = gcd_free_basis(&inputs);
        for (i, b) in basis.iter().enumerate() {
            for c in &basis[i + 1..] {
                prop_assert!(b.gcd(c).is_constant());
            }
        }
        for f in inputs.iter().filter(|f| !f.is_constant()) {
            let mut prod = Poly::one();
            for b in &basis {
                prod = &prod * &b.pow(Poly::multiplicity(b, f).unwrap());
            }
            prop_assert_eq!(prod.monic(), f.monic());
        }
    }

    #[test]
    fn curve_reduction_is_idempotent_and_linear(f in poly(4), g in poly(4), b in rational(), c in rational()) {
        let x = MPoly::var(Var::X);
        let y = MPoly::var(Var::Y);
        let rhs = &x * &(&(&x.pow(2) + &x.scale(&b)) + &MPoly::constant(c));
        let rel = CurveRelation::new(Var::X, Var::Y, rhs);
        let lift = |p: &Poly| &MPoly::from_poly(p, Var::X) * &y.pow(3) + MPoly::from_poly(p, Var::Y);
        let (ff, gg) = (lift(&f), lift(&g));
        let r = rel.reduce(&ff);
        prop_assert_eq!(rel.reduce(&r), r.clone());
        prop_assert_eq!(rel.reduce(&(&ff + &gg)), &r + &rel.reduce(&gg));
        prop_assert!(rel.reduce(&ff).degree_in(Var::Y).unwrap_or(0) <= 1);
    }

    #[test]
    fn euler_sum_is_twelve_times_height(p in params(), x_side in any::<bool>()) {
        let w = if x_side { families::make_x(&p) } else { families::make_y(&p) };
        prop_assume!(!w.discriminant().is_zero());
        let (m, _) = minimalize(&w).unwrap();
        prop_assume!(m.height > 0);
        let cfg = classify_fibers(&m).unwrap();
        prop_assert_eq!(cfg.euler_sum(), 12 * m.height);
    }

    #[test]
    fn classification_ignores_scaling(p in params(), lambda in nonzero_rational()) {
        let w = families::make_y(&p);
        prop_assume!(!w.discriminant().is_zero());
        let scaled = WeierstrassFibration::new(
            w.g2.scale(&num_traits::pow(lambda.clone(), 4)),
            w.g3.scale(&num_traits::pow(lambda, 6)),
            w.height,
        ).unwrap();
        let a = classify_fibers(&minimalize(&w).unwrap().0).unwrap();
        let b = classify_fibers(&minimalize(&scaled).unwrap().0).unwrap();
        prop_assert_eq!(a.type_counts(), b.type_counts());
    }

    #[test]
    fn finite_loci_partition_discriminant(p in params()) {
        let w = families::make_x(&p);
        prop_assume!(!w.discriminant().is_zero());
        let (m, _) = minimalize(&w).unwrap();
        let cfg = classify_fibers(&m).unwrap();
        let mut prod = Poly::one();
        for f in &cfg.fibers {
            if let Locus::Finite(l) = &f.locus {
                prod = &prod * l;
            }
        }
        prop_assert_eq!(prod.monic(), m.discriminant().squarefree_part().monic());
    }

    #[test]
    fn base_change_is_functorial(p in params()) {
        let pr = families::make_p_r(&p);
        let by = families::base_change(&families::make_y_sw(), &pr.p, &pr.r).unwrap();
        let bx = families::base_change(&families::make_x_sw(), &pr.p, &pr.r).unwrap();
        prop_assert_eq!(by.fibration, families::make_y(&p));
        prop_assert_eq!(bx.fibration, families::make_x(&p));
    }

    #[test]
    fn x_family_degrees(p in params()) {
        let w = families::make_x(&p);
        let d = w.discriminant();
        prop_assume!(!d.is_zero());
        prop_assert_eq!(w.g2.degree(), Some(6));
        prop_assert_eq!(w.g3.degree(), Some(9));
        prop_assert_eq!(d.degree(), Some(14));
        prop_assert_eq!(14 + w.orders_at_infinity()[2], 24);
    }

    #[test]
    fn flip_symmetry(p in params()) {
        prop_assert!(families::flip_symmetry_check(&p));
    }

    #[test]
    fn sl2z_words_have_determinant_one(word in prop::collection::vec(0u8..4, 0..12)) {
        let t = build_generator(Generator::T);
        let s = build_generator(Generator::S);
        let m = word.iter().fold(SL2Z::identity(), |acc, w| match w {
            0 => acc.mul(&t),
            1 => acc.mul(&s),
            2 => acc.mul(&t.inverse()),
            _ => acc.mul(&s.inverse()),
        });
        prop_assert_eq!(m.det(), BigInt::from(1));
        prop_assert!(m.mul(&m.inverse()).is_identity());
    }

    #[test]
    fn kummer_constraints_and_identity_permutation(th in prop::collection::vec(rational(), 6)) {
        let arr: [Q; 6] = th.try_into().unwrap();
        let Ok(c) = GenusTwoCurve::new(arr, q(1)) else { return Ok(()) };
        let Ok(roots) = kummer::roots_from_theta(&c) else { return Ok(()) };
        prop_assert_eq!(roots.constraints(), [true; 3]);
        let same = c.permuted(&[0, 1, 2, 3, 4, 5]).unwrap();
        prop_assert_eq!(kummer::roots_from_theta(&same).unwrap(), roots.clone());
        if let Ok((params, shifted)) = kummer::abc_from_roots(&roots) {
            prop_assert_eq!(kummer::shifted_identities(&roots, &shifted), [true; 2]);
            prop_assert!(families::flip_symmetry_check(&params));
        }
    }
}

fn small_lattice() -> impl Strategy<Value = IntegerLattice> {
    let piece = prop_oneof![
        (1u32..=6).prop_map(LatticeName::A),
        (4u32..=7).prop_map(LatticeName::D),
        Just(LatticeName::E8),
        Just(LatticeName::H),
    ];
    (prop::collection::vec(piece, 1..=3), any::<bool>()).prop_map(|(names, neg)| {
        let sign = if neg { Sign::Minus } else { Sign::Plus };
        let parts: Vec<_> = names.into_iter().map(|n| lattice::named_gram(n, sign).unwrap()).collect();
        IntegerLattice::sum_of(&parts).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn discriminant_order_is_determinant(l in small_lattice()) {
        let g = lattice::discriminant_group(&l).unwrap();
        prop_assert_eq!(g.order(), l.det().abs());
        let with_h = l.direct_sum(&lattice::named_gram(LatticeName::H, Sign::Plus).unwrap());
        prop_assert_eq!(lattice::discriminant_group(&with_h).unwrap().divisors, g.divisors);
    }

    #[test]
    fn form_is_independent_of_lift(l in small_lattice(), shift in prop::collection::vec(-3i64..=3, 24)) {
        let g = lattice::discriminant_group(&l).unwrap();
        for e in g.elements().unwrap().into_iter().take(16) {
            let base = lattice::disc_form(&l, &g, &e).unwrap();
            let lift: Vec<Q> = g.lift(&e).iter().zip(&shift).map(|(x, s)| x + q(*s)).collect();
            prop_assert_eq!(lattice::DiscriminantFormValue::from_raw(&l.norm(&lift)), base);
        }
    }

    #[test]
    fn overlattice_divides_determinant(l in small_lattice(), pick in any::<prop::sample::Index>()) {
        let g = lattice::discriminant_group(&l).unwrap();
        let iso: Vec<_> = lattice::isotropic_elements(&l).unwrap().into_iter().filter(|e| e.iter().any(|c| !c.is_zero())).collect();
        prop_assume!(!iso.is_empty());
        let e = pick.get(&iso).clone();
        let v = g.span(std::slice::from_ref(&e));
        let (m, _, _) = lattice::overlattice(&l, &g, &[e]).unwrap();
        let index = BigInt::from(v.len());
        prop_assert!(m.is_even());
        prop_assert_eq!(m.det() * &index * &index, l.det());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, ..ProptestConfig::default() })]

    #[test]
    fn specialized_dual_isogeny_verifies(p in params()) {
        let (_, jd) = isogeny::derived_k3_maps().unwrap();
        let v = isogeny::verify_isogeny(&isogeny::specialize_to_family(&jd, &p)).unwrap();
        prop_assert!(v.holds);
    }

    #[test]
    fn theta_truncation_converged(re in -0.5f64..0.5, im in 0.6f64..2.0) {
        let tau = ComplexHP::from_f64(re, im, 192);
        for kind in [theta::ThetaKind::Two, theta::ThetaKind::Three, theta::ThetaKind::Four] {
            let a = theta::theta(kind, &tau).unwrap();
            let b = theta::theta_truncated(kind, &tau, 200).unwrap();
            prop_assert!(a.rel_err(&b) < 1e-50);
        }
        prop_assert!(theta::jacobi_identity_error(&tau).unwrap() < 1e-50);
    }
}

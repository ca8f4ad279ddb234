use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use chiral_core::classical::PoissonElement;
use chiral_core::presentation::builtin_definitions;
use chiral_core::scalar::{parse_scalar, IntPoly, Level, Scalar};
use chiral_core::vertex::FreeFieldAlgebra;
use chiral_core::verifier::{random_field, run_axiom_suite};

fn poly() -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-6i64..=6, 0..4).prop_map(|c| IntPoly::from_coeffs(c.into_iter().map(BigInt::from).collect()))
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (poly(), poly()).prop_filter_map("nonzero denominator", |(n, d)| Scalar::new(n, d).ok())
}

fn level() -> impl Strategy<Value = Level> {
    (-9i64..=9, 1i64..=4).prop_map(|(p, q)| Level::from_ratio(p, q))
}

proptest! {
    #[test]
    fn scalar_ring_laws(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, Scalar::zero());
        if !b.is_zero() {
            prop_assert_eq!(&a.try_div(&b).unwrap() * &b, a.clone());
        }
    }

    #[test]
    fn scalar_display_reparses(a in scalar()) {
        prop_assert_eq!(parse_scalar(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn evaluation_is_a_ring_map(a in scalar(), b in scalar(), l in level()) {
        if let (Ok(x), Ok(y)) = (a.eval_at_level(&l), b.eval_at_level(&l)) {
            prop_assert!(x.is_constant());
            prop_assert_eq!((&a * &b).eval_at_level(&l).unwrap(), &x * &y);
            prop_assert_eq!((&a + &b).eval_at_level(&l).unwrap(), &x + &y);
        }
    }

    #[test]
    fn fields_are_canonical_and_products_bilinear(seed in any::<u64>()) {
        let el = FreeFieldAlgebra::bg_el();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_field(&el, 3, &mut rng).unwrap();
        let b = random_field(&el, 3, &mut rng).unwrap();
        let c = random_field(&el, 3, &mut rng).unwrap();
        prop_assert!(a.terms().all(|(_, x)| !x.is_zero()));
        prop_assert_eq!(a.add(&b).sub(&b), a.clone());
        let two = Scalar::from_int(2);
        prop_assert_eq!(
            el.nprod(&a.add(&b.scale(&two)), &c).unwrap(),
            el.nprod(&a, &c).unwrap().add(&el.nprod(&b, &c).unwrap().scale(&two))
        );
        let lhs = el.lambda_bracket(&a, &b.add(&c)).unwrap();
        let mut rhs = el.lambda_bracket(&a, &b).unwrap();
        rhs.add_assign(&el.lambda_bracket(&a, &c).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn level_specialization_commutes_with_products(seed in any::<u64>(), l in level()) {
        let el = FreeFieldAlgebra::el();
        let at = el.at_level(&l).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_field(&el, 3, &mut rng).unwrap();
        let b = random_field(&el, 3, &mut rng).unwrap();
        let sym = el.lambda_bracket(&a, &b).unwrap().eval_at_level(&l).unwrap();
        let num = at.lambda_bracket(&a.eval_at_level(&l).unwrap(), &b.eval_at_level(&l).unwrap()).unwrap();
        prop_assert_eq!(sym, num);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn vertex_axioms_hold_on_random_fields(seed in any::<u64>()) {
        for alg in [FreeFieldAlgebra::el(), FreeFieldAlgebra::bg_el()] {
            let report = run_axiom_suite(&alg, 4, 3, seed).unwrap();
            let failures: Vec<_> = report.failures().map(|c| c.label.clone()).collect();
            prop_assert!(failures.is_empty(), "{:?}", failures);
        }
    }
}

fn poisson_element(names: &'static [&'static str], laurent: &'static [&'static str]) -> impl Strategy<Value = PoissonElement> {
    let term = (
        -4i64..=4,
        prop::collection::vec(0usize..names.len(), 0..3),
        prop::collection::vec(-2i32..=2, 3),
    );
    prop::collection::vec(term, 1..4).prop_map(move |terms| {
        let mut out = PoissonElement::zero();
        for (c, vars, exps) in terms {
            let mut m = PoissonElement::from_int(c);
            for (v, e) in vars.iter().zip(exps) {
                let name = names[*v];
                let e = if laurent.contains(&name) { e } else { e.abs() };
                m = m.mul(&PoissonElement::var(name).pow(e).unwrap());
            }
            out = out.add(&m);
        }
        out
    })
}

proptest! {
    #[test]
    fn poisson_bracket_is_antisymmetric_and_leibniz(
        f in poisson_element(&["X", "Y", "S"], &[]),
        g in poisson_element(&["X", "Y", "S"], &[]),
        h in poisson_element(&["X", "Y", "S"], &[]),
    ) {
        let zg = builtin_definitions().poisson("ZG").unwrap();
        let fg = zg.pbracket(&f, &g).unwrap();
        prop_assert_eq!(fg.clone(), zg.pbracket(&g, &f).unwrap().neg());
        let lhs = zg.pbracket(&f, &g.mul(&h)).unwrap();
        let rhs = fg.mul(&h).add(&g.mul(&zg.pbracket(&f, &h).unwrap()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn chart_target_satisfies_jacobi(
        f in poisson_element(&["b", "g"], &["g"]),
        g in poisson_element(&["b", "g"], &["g"]),
        h in poisson_element(&["b", "g"], &["g"]),
    ) {
        let kt = builtin_definitions().poisson("KT").unwrap();
        let br = |x: &PoissonElement, y: &PoissonElement| kt.pbracket(x, y).unwrap();
        let sum = br(&f, &br(&g, &h)).add(&br(&g, &br(&h, &f))).add(&br(&h, &br(&f, &g)));
        prop_assert!(sum.is_zero());
    }

    #[test]
    fn poisson_elements_reparse(f in poisson_element(&["X", "Y", "S"], &[])) {
        prop_assert_eq!(chiral_core::classical::parse_element(&f.to_string()).unwrap(), f);
    }
}

#[test]
fn rational_scale_of_poisson_element() {
    let x = PoissonElement::var("X");
    let half = BigRational::new(1.into(), 2.into());
    assert_eq!(x.scale(&half).scale(&BigRational::from_integer(2.into())), x);
}

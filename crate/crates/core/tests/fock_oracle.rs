//! Engine products against the Fock-space oracle.

mod support;

use chiral_core::presentation::builtin_definitions;
use chiral_core::scalar::{Level, Scalar};
use chiral_core::vertex::{Field, FreeFieldAlgebra, Monomial, Part};

use support::fock::{add, compare_all, el_basis, oracle_central_charge, Oracle, State};

#[test]
fn monomial_states_have_the_expected_normalization() {
    // :∂²η λ: = 2·η₍₋₃₎|λ⟩
    let el = FreeFieldAlgebra::el();
    let oracle = Oracle::for_algebra(&el);
    let m = Monomial::from_parts(vec![Part::El {
        eta: vec![2],
        jets: vec![],
        charge: 1,
    }]);
    let s = oracle.state_of(&Field::monomial(m));
    let mut expected = State::new();
    add(&mut expected, (vec![(0, 2)], (1, vec![])), Scalar::from_int(2));
    assert_eq!(s, expected);
}

#[test]
fn el_products_agree_with_modes_up_to_weight_three() {
    let el = FreeFieldAlgebra::el();
    let basis = el_basis(3, &[-1, 0, 1]);
    let (compared, mismatch) = compare_all(&el, &basis, 0);
    assert_eq!(mismatch, None);
    assert!(compared > 1000, "only {compared} comparisons");
}

#[test]
fn el_products_agree_at_numeric_levels() {
    for level in ["0", "-2", "-1/2"] {
        let el = FreeFieldAlgebra::el().at_level(&level.parse().unwrap()).unwrap();
        let basis = el_basis(2, &[-2, 0, 1]);
        assert_eq!(compare_all(&el, &basis, 1).1, None, "level {level}");
    }
}

#[test]
fn dch_u_generators_agree_with_modes() {
    let u = FreeFieldAlgebra::dch_u();
    let names = ["bx", "gx", "eta", "lamp", "lamm", "by", "gy"];
    let mut fields: Vec<Field> = names.iter().map(|g| u.generator(g).unwrap()).collect();
    fields.push(u.derive(&u.generator("lamm").unwrap()).unwrap());
    let two = u.nprod(&fields[2], &fields[0]).unwrap();
    fields.push(two);
    let oracle = Oracle::for_algebra(&u);
    for a in &fields {
        for b in &fields {
            for n in -2..=3 {
                let engine = u.nth_product(a, n, b).unwrap();
                assert_eq!(
                    oracle.state_of(&engine),
                    oracle.product(a, n, b),
                    "{} ({n}) {}",
                    u.render_field(a),
                    u.render_field(b)
                );
            }
        }
    }
}

#[test]
fn omega_u_has_central_charge_six() {
    for level in [Level::Symbolic, "0".parse().unwrap()] {
        let u = FreeFieldAlgebra::dch_u().at_level(&level).unwrap();
        let l = builtin_definitions().field("omega_U").unwrap().expr.eval(&u).unwrap();
        assert_eq!(oracle_central_charge(&u, &l), Scalar::from_int(6));
    }
}

#[test]
fn omega_i_has_central_charge_twenty_six() {
    let el = FreeFieldAlgebra::el();
    let l = builtin_definitions().field("omega_I").unwrap().expr.eval(&el).unwrap();
    assert_eq!(oracle_central_charge(&el, &l), Scalar::from_int(26));
}

#[test]
fn sugawara_type_field_has_the_expected_central_charge() {
    let el = FreeFieldAlgebra::el();
    let nu = builtin_definitions().map("map_nu").unwrap();
    let k = Scalar::k();
    let two = Scalar::from_int(2);
    let f = nu.image("F").unwrap().eval(&el).unwrap();
    let l = f.scale(&Scalar::from_int(-1).try_div(&(&k + &two)).unwrap());
    let expected = Scalar::one()
        - Scalar::from_int(6) * (&k + &Scalar::one()).pow(2).unwrap().try_div(&(&k + &two)).unwrap();
    assert_eq!(oracle_central_charge(&el, &l), expected);
}

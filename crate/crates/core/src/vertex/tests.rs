use super::*;
use crate::scalar::Scalar;

fn s(t: &str) -> Scalar {
    t.parse().unwrap()
}

#[test]
fn eta_eta_table() {
    let el = FreeFieldAlgebra::el();
    let eta = el.generator("eta").unwrap();
    let p = el.lambda_bracket(&eta, &eta).unwrap();
    assert_eq!(p.coeff(1), el.vacuum().scale(&s("2*(k+2)")));
    assert_eq!(p.degree(), Some(1));
    println!("{}", el.render_ope(&p));
}

#[test]
fn unit_relation() {
    let el = FreeFieldAlgebra::el();
    let lp = el.generator("lamp").unwrap();
    let lm = el.generator("lamm").unwrap();
    assert_eq!(el.nprod(&lp, &lm).unwrap(), el.vacuum());
}

fn el_gens() -> (FreeFieldAlgebra, Field, Field, Field) {
    let el = FreeFieldAlgebra::el();
    let eta = el.generator("eta").unwrap();
    let lp = el.generator("lamp").unwrap();
    let lm = el.generator("lamm").unwrap();
    (el, eta, lp, lm)
}

#[test]
fn vacuum_is_translation_invariant_and_a_unit() {
    let (el, eta, _, _) = el_gens();
    assert!(el.derive(&el.vacuum()).unwrap().is_zero());
    assert_eq!(el.nprod(&el.vacuum(), &eta).unwrap(), eta);
    assert_eq!(el.nprod(&eta, &el.vacuum()).unwrap(), eta);
}

#[test]
fn derivative_of_inverse_function() {
    let (el, _, lp, lm) = el_gens();
    let dlp = el.derive(&lp).unwrap();
    let lm2 = el.nprod(&lm, &lm).unwrap();
    let expected = el.nprod(&lm2, &dlp).unwrap().neg();
    assert_eq!(el.derive(&lm).unwrap(), expected);
    assert_eq!(el.render_field(&el.derive(&lm).unwrap()), "-:(d(lamp) lamm lamm):");
}

#[test]
fn derivative_obeys_leibniz_on_products() {
    let (el, eta, lp, _) = el_gens();
    let lhs = el.derive(&el.nprod(&eta, &lp).unwrap()).unwrap();
    let rhs = el
        .nprod(&el.derive(&eta).unwrap(), &lp)
        .unwrap()
        .add(&el.nprod(&eta, &el.derive(&lp).unwrap()).unwrap());
    assert_eq!(lhs, rhs);
}

#[test]
fn function_bracketed_with_eta() {
    let (el, eta, lp, lm) = el_gens();
    assert_eq!(el.lambda_bracket(&eta, &lp).unwrap(), LambdaPoly::constant(lp.clone()));
    assert_eq!(el.lambda_bracket(&eta, &lm).unwrap(), LambdaPoly::constant(lm.neg()));
    assert_eq!(el.lambda_bracket(&lp, &eta).unwrap(), LambdaPoly::constant(lp.neg()));
}

#[test]
fn functions_commute() {
    let (el, _, lp, lm) = el_gens();
    let a = el.derive_n(&lm, 2).unwrap();
    let b = el.nprod(&lp, &el.derive(&lp).unwrap()).unwrap();
    assert_eq!(el.nprod(&a, &b).unwrap(), el.nprod(&b, &a).unwrap());
    assert!(el.lambda_bracket(&a, &b).unwrap().is_zero());
}

#[test]
fn reordering_eta_past_a_function_costs_a_derivative() {
    // :ab: - :ba: = ∫₋∂⁰ [a_λ b] dλ with [η_λ λ₊] = λ₊
    let (el, eta, lp, _) = el_gens();
    let diff = el.nprod(&eta, &lp).unwrap().sub(&el.nprod(&lp, &eta).unwrap());
    assert_eq!(diff, el.derive(&lp).unwrap());
}

#[test]
fn nth_products() {
    let (el, eta, lp, _) = el_gens();
    assert_eq!(el.nth_product(&eta, -1, &lp).unwrap(), el.nprod(&eta, &lp).unwrap());
    let two_k_four = Scalar::from_int(2) * (Scalar::k() + Scalar::from_int(2));
    assert_eq!(el.nth_product(&eta, 1, &eta).unwrap(), el.vacuum().scale(&two_k_four));
    let bg = FreeFieldAlgebra::beta_gamma();
    let b = bg.generator("bx").unwrap();
    let g = bg.generator("gx").unwrap();
    assert_eq!(bg.nth_product(&b, 0, &g).unwrap(), bg.vacuum());
    assert_eq!(
        bg.lambda_bracket(&g, &b).unwrap(),
        LambdaPoly::constant(bg.vacuum().neg())
    );
}

#[test]
fn separate_slots_commute() {
    let u = FreeFieldAlgebra::dch_u();
    for (a, b) in [("gx", "gy"), ("bx", "gy"), ("by", "gx"), ("eta", "by")] {
        let p = u.lambda_bracket(&u.generator(a).unwrap(), &u.generator(b).unwrap()).unwrap();
        assert!(p.is_zero(), "{a} {b}");
    }
}

#[test]
fn grading_is_additive_for_products() {
    let (el, eta, lp, lm) = el_gens();
    let a = el.nprod(&el.derive(&eta).unwrap(), &lm).unwrap();
    let b = el.nprod(&eta, &el.derive_n(&lp, 2).unwrap()).unwrap();
    let grade = |f: &Field| f.terms().map(|(id, _)| id.get().grading()).max().unwrap();
    assert_eq!(grade(&el.nprod(&a, &b).unwrap()), grade(&a) + grade(&b));
    for n in 0..4 {
        let p = el.nth_product(&a, n, &b).unwrap();
        for (id, _) in p.terms() {
            assert_eq!(id.get().grading() as i64, (grade(&a) + grade(&b)) as i64 - n - 1);
        }
    }
}

#[test]
fn generator_triples_satisfy_jacobi() {
    use crate::verifier::{check_jacobi, check_skew};
    let (el, eta, lp, lm) = el_gens();
    let (l, r) = check_jacobi(&el, &eta, &lp, &lm).unwrap();
    assert_eq!(l, r);
    let (l, r) = check_skew(&el, &eta, &lp).unwrap();
    assert_eq!(l, r);
    let (l, r) = check_skew(&el, &eta, &el.vacuum()).unwrap();
    assert!(l.is_zero() && r.is_zero());
    let bg = FreeFieldAlgebra::beta_gamma();
    let b = bg.generator("bx").unwrap();
    let g = bg.generator("gx").unwrap();
    let (l, r) = check_jacobi(&bg, &b, &g, &g).unwrap();
    assert_eq!(l, r);
    let (l, r) = check_jacobi(&bg, &bg.vacuum(), &b, &g).unwrap();
    assert!(l.is_zero() && r.is_zero());
}

#[test]
fn mixing_algebras_is_rejected() {
    let el = FreeFieldAlgebra::el();
    let u = FreeFieldAlgebra::dch_u();
    let bx = u.generator("bx").unwrap();
    assert!(matches!(el.nprod(&bx, &el.vacuum()), Err(VertexError::MixedAlgebra(_))));
}

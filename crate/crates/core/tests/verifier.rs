use chiral_core::classical::{c2_reduce, c2_relation_check, ClassicalError, C2_DICTIONARY};
use chiral_core::expr::parse_expr;
use chiral_core::presentation::{builtin_definitions, load_presentation, HomAssignment};
use chiral_core::scalar::{Level, Scalar};
use chiral_core::vertex::FreeFieldAlgebra;
use chiral_core::verifier::{
    calibrate_pi_r, central_charge, dual_level, pi_r_images, run_suite, verify_hom, verify_pi_r,
    virasoro_data, PiRCalibration, SuiteOptions,
};

fn with_entry(map: &str, left: &str, right: &str, pole: u32, expr: &str) -> HomAssignment {
    let mut h = builtin_definitions().map(map).unwrap().clone();
    let e = h
        .source
        .brackets
        .iter_mut()
        .find(|e| e.left == left && e.right == right)
        .unwrap();
    e.poles.insert(pole, parse_expr(expr).unwrap());
    h
}

fn failing_labels(h: &HomAssignment) -> Vec<String> {
    verify_hom(h, &Level::Symbolic)
        .unwrap()
        .failures()
        .map(|c| c.label.clone())
        .collect()
}

#[test]
fn shipped_maps_are_homomorphisms() {
    for map in ["map_r", "map_ds1", "map_nu"] {
        let r = verify_hom(builtin_definitions().map(map).unwrap(), &Level::Symbolic).unwrap();
        assert!(r.overall, "{r}");
    }
}

#[test]
fn triple_pole_of_f_with_d_needs_the_half() {
    let h = with_entry("map_nu", "F", "D", 3, "-(k+2)*(2*k+1)*C");
    assert_eq!(failing_labels(&h), vec!["bracket [D_λ F]".to_string()]);
}

#[test]
fn h_with_f_has_the_sl2_sign() {
    let h = with_entry("map_r", "h", "f", 1, "2*f");
    assert_eq!(failing_labels(&h), vec!["bracket [h_λ f]".to_string()]);
}

#[test]
fn missing_table_entries_are_checked_for_regularity() {
    let mut h = builtin_definitions().map("map_nu").unwrap().clone();
    h.source.brackets.retain(|e| !(e.left == "C" && e.right == "D"));
    let labels = failing_labels(&h);
    assert_eq!(labels, vec!["regular [C_λ D]".to_string()]);
}

#[test]
fn corrupted_images_break_the_relation() {
    let mut h = builtin_definitions().map("map_ds1").unwrap().clone();
    for (g, e) in &mut h.images {
        if g == "wd" {
            *e = parse_expr("2*lamp").unwrap();
        }
    }
    let labels = failing_labels(&h);
    assert!(labels.iter().any(|l| l == "relation 1"), "{labels:?}");
}

#[test]
fn calibration_search_finds_the_plain_convention() {
    let cal = calibrate_pi_r(&Level::Symbolic).unwrap();
    assert_eq!(cal, Some(PiRCalibration::default()));
}

#[test]
fn only_the_ordering_is_free() {
    let u = FreeFieldAlgebra::dch_u();
    for cal in PiRCalibration::candidates() {
        let plain = PiRCalibration {
            function_left: true,
            ..cal.clone()
        };
        let r = verify_pi_r(&"1".parse().unwrap(), &cal).unwrap();
        assert_eq!(r.overall, plain == PiRCalibration::default(), "{cal}");
        let left = pi_r_images(&u, &plain).unwrap().0;
        let right = pi_r_images(&u, &PiRCalibration { function_left: false, ..plain }).unwrap().0;
        assert_eq!(left, right);
    }
}

#[test]
fn right_action_is_affine_at_the_dual_level() {
    let u = FreeFieldAlgebra::dch_u();
    let (p, _) = pi_r_images(&u, &PiRCalibration::default()).unwrap();
    let hh = u.lambda_bracket(&p[1], &p[1]).unwrap();
    let expected = dual_level().mul_int(2);
    assert_eq!(hh.coeff(1).as_vacuum_multiple(), Some(expected));
    assert_eq!(u.render_field(&p[0]), "-bx");
}

#[test]
fn conformal_data() {
    let el = FreeFieldAlgebra::el();
    let omega_i = builtin_definitions().field("omega_I").unwrap().expr.eval(&el).unwrap();
    let data = virasoro_data(&omega_i, &el).unwrap();
    assert_eq!(data.central_charge, Scalar::from_int(26));
    assert_eq!(data.weights["eta"], Scalar::from_int(1));
    let u = FreeFieldAlgebra::dch_u();
    let omega_u = builtin_definitions().field("omega_U").unwrap().expr.eval(&u).unwrap();
    assert_eq!(central_charge(&omega_u, &u).unwrap(), Scalar::from_int(6));
    // η is not a Virasoro field
    let eta = el.generator("eta").unwrap();
    assert!(central_charge(&eta, &el).is_err());
}

#[test]
fn reduction_keeps_simple_poles_and_drops_derivatives() {
    let itilde = builtin_definitions().algebra("Itilde").unwrap();
    let critical = c2_reduce(itilde, &"-2".parse().unwrap()).unwrap();
    assert_eq!(c2_reduce(itilde, &Level::Symbolic).unwrap(), critical);
    assert_eq!(critical.brackets.len(), 3);
    assert_eq!(critical.ideal[0].to_string(), "C^2*F + D^2 + 1");
    let text = "algebra A\ngenerators: x y\nbracket x y : 1=k*x\n";
    let a = load_presentation(text).unwrap();
    assert!(matches!(
        c2_reduce(&a, &Level::Symbolic),
        Err(ClassicalError::LevelDependent(_))
    ));
}

#[test]
fn c2_table_matches_but_the_constant_term_has_the_other_sign() {
    let r = c2_relation_check(C2_DICTIONARY, &"-2".parse().unwrap()).unwrap();
    let failures: Vec<_> = r.failures().collect();
    assert_eq!(failures.len(), 1);
    assert!(failures[0].label.starts_with("relation"));
    assert_eq!(failures[0].actual, "-S*X^2 + Y^2 + 1");
}

#[test]
fn suites_report_their_name_and_level() {
    let r = run_suite("nu", &"-2".parse().unwrap(), builtin_definitions(), &SuiteOptions::default()).unwrap();
    assert_eq!(r.suite, "nu");
    assert_eq!(r.level, "-2");
    assert!(r.overall);
    assert!(run_suite("bogus", &Level::Symbolic, builtin_definitions(), &SuiteOptions::default()).is_err());
}

#[test]
fn axiom_reports_are_reproducible() {
    let opts = SuiteOptions {
        samples: 4,
        max_grading: 3,
        seed: 11,
        algebra: Some("EL".into()),
    };
    let a = run_suite("axioms", &Level::Symbolic, builtin_definitions(), &opts).unwrap();
    let b = run_suite("axioms", &Level::Symbolic, builtin_definitions(), &opts).unwrap();
    assert_eq!(a, b);
    assert!(a.overall);
}

use chiral_core::expr::{parse_expr, FieldExpr};
use chiral_core::presentation::{
    builtin, builtin_definitions, load_definitions, load_presentation, pi_r_data, Builtin,
    HomAssignment, PresentationError, BUILTIN_NAMES,
};
use chiral_core::report::VerificationReport;
use chiral_core::scalar::Level;
use chiral_core::verifier::{verify_hom, verify_pi_r, PiRCalibration};

fn all_builtin_expressions() -> Vec<FieldExpr> {
    let d = builtin_definitions();
    let mut out = Vec::new();
    for a in &d.algebras {
        for e in &a.brackets {
            out.extend(e.poles.values().cloned());
        }
        out.extend(a.relations.iter().cloned());
        out.extend(a.conformal.iter().cloned());
    }
    for m in &d.maps {
        out.extend(m.images.iter().map(|(_, e)| e.clone()));
    }
    out.extend(d.fields.iter().map(|f| f.expr.clone()));
    let pir = pi_r_data();
    out.extend(pir.matrix.iter().flatten().cloned());
    out.extend(pir.forms.iter().cloned());
    out
}

#[test]
fn expressions_round_trip_through_their_rendering() {
    let exprs = all_builtin_expressions();
    assert!(exprs.len() > 60);
    for e in exprs {
        let text = e.to_string();
        let back = parse_expr(&text).unwrap_or_else(|err| panic!("{text}: {err}"));
        assert_eq!(back, e, "{text}");
    }
}

#[test]
fn definitions_round_trip_through_their_rendering() {
    let d = builtin_definitions();
    let text = d.to_string();
    assert_eq!(&load_definitions(&text).unwrap(), d);
    for a in &d.algebras {
        assert_eq!(&load_presentation(&a.to_string()).unwrap(), a);
    }
}

#[test]
fn every_builtin_name_resolves() {
    for name in BUILTIN_NAMES {
        builtin(name).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
    assert!(matches!(builtin("nope"), Err(PresentationError::UnknownBuiltin(_))));
    assert!(matches!(builtin("piR_data"), Ok(Builtin::PiR(_))));
}

#[test]
fn table_sizes() {
    let d = builtin_definitions();
    let count = |n: &str| d.algebra(n).unwrap().brackets.len();
    assert_eq!(count("Itilde"), 5);
    assert_eq!(d.algebra("Itilde").unwrap().pairs().len(), 6);
    assert_eq!(d.algebra("Wtilde").unwrap().pairs().len(), 15);
    assert_eq!(count("DchG"), 12);
    assert_eq!(count("Wtilde"), 12);
}

/// The identity map from a presentation to the engine algebra of the same
/// name checks that the text table agrees with the built-in rules.
fn identity(name: &str) -> HomAssignment {
    let source = builtin_definitions().algebra(name).unwrap().clone();
    let images = source
        .generators
        .iter()
        .map(|g| (g.clone(), FieldExpr::gen(g)))
        .collect();
    HomAssignment {
        name: format!("identity_{name}"),
        source,
        target: name.to_string(),
        images,
    }
}

#[test]
fn text_tables_match_the_engine() {
    for name in ["EL", "BetaGamma", "DchU"] {
        let r = verify_hom(&identity(name), &Level::Symbolic).unwrap();
        assert!(r.overall, "{r}");
    }
    let r = verify_hom(builtin_definitions().map("identity_EL").unwrap(), &Level::Symbolic).unwrap();
    assert!(r.overall);
}

#[test]
fn duplicate_pairs_are_rejected() {
    let text = "algebra A\ngenerators: x y\nbracket x y : 1=x\nbracket y x : 1=y\n";
    assert!(matches!(
        load_presentation(text),
        Err(PresentationError::DuplicatePair(..))
    ));
}

#[test]
fn unknown_generators_are_rejected() {
    let text = "algebra A\ngenerators: x y\nbracket x z : 1=x\n";
    assert!(matches!(
        load_presentation(text),
        Err(PresentationError::UnknownGenerator { .. })
    ));
    let text = "algebra A\ngenerators: x\nbracket x x : 1=q\n";
    assert!(matches!(
        load_presentation(text),
        Err(PresentationError::UnknownGenerator { .. })
    ));
}

#[test]
fn maps_need_every_image() {
    let text = "map m from Itilde to EL\nimage C : lamp\n";
    assert!(matches!(
        load_definitions(text),
        Err(PresentationError::MissingImage { .. })
    ));
}

#[test]
fn parse_errors_carry_line_numbers() {
    let text = "algebra A\ngenerators: x\nbracket x x : 1=:(x\n";
    match load_presentation(text) {
        Err(PresentationError::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("{other:?}"),
    }
}

#[test]
fn user_maps_can_be_verified() {
    // λ₊ ↦ λ₋, η ↦ -η is an automorphism of EL
    let text = "map flip from EL to EL\nimage eta : -eta\nimage lamp : lamm\nimage lamm : lamp\n";
    let defs = load_definitions(text).unwrap();
    let r = verify_hom(defs.map("flip").unwrap(), &Level::Symbolic).unwrap();
    assert!(r.overall, "{r}");
    let text = "map bad from EL to EL\nimage eta : eta\nimage lamp : lamm\nimage lamm : lamp\n";
    let defs = load_definitions(text).unwrap();
    let r = verify_hom(defs.map("bad").unwrap(), &Level::Symbolic).unwrap();
    assert!(!r.overall);
}

#[test]
fn overlay_replaces_entries_by_name() {
    let text = "map map_nu from Itilde to EL\nimage C : lamp\nimage D : lamp\nimage F : lamp\n";
    let merged = builtin_definitions().overlay(&load_definitions(text).unwrap());
    assert_eq!(merged.maps.len(), builtin_definitions().maps.len());
    let r = verify_hom(merged.map("map_nu").unwrap(), &Level::Symbolic).unwrap();
    assert!(!r.overall);
}

fn assert_schema(v: &serde_json::Value) {
    for key in ["suite", "level", "checks", "overall"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert!(v["overall"].is_boolean());
    for c in v["checks"].as_array().unwrap() {
        for key in ["label", "pass", "residual_rendered", "expected", "actual"] {
            assert!(c.get(key).is_some(), "check missing {key}");
        }
        assert!(c["pass"].is_boolean());
    }
}

#[test]
fn json_reports_follow_the_schema() {
    let r: VerificationReport = verify_pi_r(&Level::Symbolic, &PiRCalibration::default()).unwrap();
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    assert_schema(&v);
    assert_eq!(v["overall"], serde_json::Value::Bool(r.overall));
    let passing = v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true);
    assert_eq!(passing, r.overall);
}

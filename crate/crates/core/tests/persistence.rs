mod common;

use lord::dataset::{load_table, LoadOptions};
use lord::fixtures::RUNNING_EXAMPLE_CSV;
use lord::learner::{train, LearnerConfig, Variant};
use lord::persistence::{load_model, model_from_str, model_to_string, save_model};
use lord::Error;

fn running_model() -> (lord::Model, lord::dataset::RawTable) {
    let table = load_table(RUNNING_EXAMPLE_CSV.as_bytes(), &LoadOptions::default()).unwrap();
    let cfg = LearnerConfig { m: 1.0, ..LearnerConfig::default() };
    (train(&table, &cfg).unwrap(), table)
}

fn labels(model: &lord::Model, table: &lord::dataset::RawTable) -> Vec<String> {
    model
        .predict_table(table)
        .unwrap()
        .into_iter()
        .map(|r| model.class_label(r).to_string())
        .collect()
}

#[test]
fn round_trip_keeps_predictions_and_rules() {
    let (model, table) = running_model();
    let mut buf = Vec::new();
    let written = save_model(&model, &mut buf).unwrap();
    assert_eq!(written, buf.len());
    let loaded = load_model(buf.as_slice()).unwrap();
    assert_eq!(labels(&model, &table), labels(&loaded, &table));
    assert_eq!(model.rules, loaded.rules);
    assert_eq!(model.default_rule, loaded.default_rule);
    assert_eq!(model.rule_stats(), loaded.rule_stats());
    assert_eq!(model.config, loaded.config);
    for (a, b) in model.final_rules().iter().zip(loaded.final_rules()) {
        assert!((a.h - b.h).abs() <= 1e-12);
    }
    assert_eq!(model_to_string(&model), model_to_string(&loaded));
}

#[test]
fn saves_are_byte_identical() {
    let (model, _) = running_model();
    let (again, _) = running_model();
    assert_eq!(model_to_string(&model), model_to_string(&again));
}

#[test]
fn numeric_columns_survive_round_trip() {
    let csv = "x,kind,y\n1.0,a,lo\n1.5,a,lo\n2.0,b,lo\n7.0,a,hi\n8.5,b,hi\n9.0,b,hi\n";
    let table = load_table(csv.as_bytes(), &LoadOptions::default()).unwrap();
    let cfg = LearnerConfig { variant: Variant::Overlord, max_rule_length: Some(2), ..LearnerConfig::default() };
    let model = train(&table, &cfg).unwrap();
    assert_eq!(model.cuts.len(), 1);
    let loaded = model_from_str(&model_to_string(&model)).unwrap();
    assert_eq!(loaded.cuts, model.cuts);
    assert_eq!(labels(&loaded, &table), ["lo", "lo", "lo", "hi", "hi", "hi"]);
}

#[test]
fn unknown_version_is_reported() {
    let (model, _) = running_model();
    let text = model_to_string(&model).replacen("LORDMODEL\t1", "LORDMODEL\t99", 1);
    assert!(matches!(model_from_str(&text), Err(Error::Version(v)) if v == "99"));
}

#[test]
fn truncated_file_is_a_parse_error() {
    let (model, _) = running_model();
    let text = model_to_string(&model);
    let cut = &text[..text.len() / 2];
    let cut = &cut[..cut.rfind('\n').unwrap() + 1];
    assert!(matches!(model_from_str(cut), Err(Error::ModelFormat { .. })));
}

#[test]
fn malformed_line_names_its_number() {
    let (model, _) = running_model();
    let text = model_to_string(&model).replacen("examples\t8", "examples\teight", 1);
    let line = text.lines().position(|l| l.starts_with("examples")).unwrap() + 1;
    match model_from_str(&text) {
        Err(Error::ModelFormat { line: l, .. }) => assert_eq!(l, line),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn unknown_selector_is_an_integrity_error() {
    let (model, _) = running_model();
    let text = model_to_string(&model);
    let bad: String = text
        .lines()
        .map(|l| {
            if l.starts_with("rule\t") {
                format!("{l}\t42\n")
            } else {
                format!("{l}\n")
            }
        })
        .collect();
    assert!(matches!(model_from_str(&bad), Err(Error::Integrity(_))));
}

#[test]
fn tampered_heuristic_is_an_integrity_error() {
    let (model, _) = running_model();
    let text = model_to_string(&model).replacen("0.84375", "0.9", 1);
    assert!(matches!(model_from_str(&text), Err(Error::Integrity(_))));
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use lord::fixtures::RUNNING_EXAMPLE_CSV;

fn lord(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lord")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn train_then_inspect_lists_running_example_rules() {
    let dir = tempfile::tempdir().unwrap();
    let data = write(dir.path(), "run.csv", RUNNING_EXAMPLE_CSV);
    let model = dir.path().join("run.lord");
    let model = model.to_str().unwrap();
    let o = lord(&["train", &data, "-o", model, "--m", "1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let o = lord(&["inspect", "--model", model]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
    assert_eq!(
        lines,
        [
            "A2=a1 => C=c1 [3, 0, 0.84375]",
            "A3=a2 AND A2=a2 => C=c2 [2, 0, 0.7916666666666666]",
            "A3=a3 => C=c3 [2, 0, 0.75]",
            "A1=a2 => C=c2 [2, 1, 0.59375]",
            "true => C=c2 [3, 5, 0.375]",
        ]
    );
}

#[test]
fn predict_one_line_per_row_with_default_for_empty_rows() {
    let dir = tempfile::tempdir().unwrap();
    let data = write(dir.path(), "run.csv", RUNNING_EXAMPLE_CSV);
    let model = dir.path().join("m.lord").to_str().unwrap().to_string();
    assert!(lord(&["train", &data, "-o", &model, "--m", "1"]).status.success());

    let input = write(dir.path(), "in.csv", "A1,A2,A3\n?,?,?\na1,a1,a1\nzz,a2,a2\n");
    let o = lord(&["predict", "--model", &model, &input]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "c2\nc1\nc2\n");

    let o = lord(&["predict", "--model", &model, &input, "--explain"]);
    let first = stdout(&o).lines().next().unwrap().to_string();
    assert_eq!(first, "c2\ttrue => C=c2 [3, 5, 0.375]");
}

#[test]
fn evaluate_is_repeatable() {
    let dir = tempfile::tempdir().unwrap();
    let mut csv = String::from("a,b,c\n");
    for i in 0..60 {
        csv.push_str(&format!("v{},w{},{}\n", i % 3, i % 4, if i % 3 == 0 { "x" } else { "y" }));
    }
    let data = write(dir.path(), "d.csv", &csv);
    let args = ["evaluate", &data, "--folds", "10", "--seed", "7", "--threads", "2"];
    let a = lord(&args);
    let b = lord(&args);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("mean accuracy 1.0000"));
    let tsv = lord(&["evaluate", &data, "--tsv", "--folds", "5"]);
    assert_eq!(stdout(&tsv).lines().count(), 7);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let data = write(dir.path(), "run.csv", RUNNING_EXAMPLE_CSV);
    let out = dir.path().join("m.lord").to_str().unwrap().to_string();

    assert_eq!(lord(&[]).status.code(), Some(1));
    assert_eq!(lord(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(lord(&["--help"]).status.code(), Some(0));
    assert_eq!(lord(&["train", &data, "-o", &out, "--m", "-1"]).status.code(), Some(1));
    assert_eq!(lord(&["train", &data, "-o", &out, "--variant", "x"]).status.code(), Some(1));
    assert_eq!(lord(&["train", &data, "-o", &out, "--class-column", "nope"]).status.code(), Some(1));
    assert_eq!(lord(&["evaluate", &data, "--folds", "1"]).status.code(), Some(1));
    assert_eq!(lord(&["train", "/no/such/file.csv", "-o", &out]).status.code(), Some(1));

    let ragged = write(dir.path(), "bad.csv", "a,b,c\nx,y\n");
    let o = lord(&["train", &ragged, "-o", &out]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("row 2"));

    let garbage = write(dir.path(), "garbage.lord", "not a model\n");
    assert_eq!(lord(&["inspect", "--model", &garbage]).status.code(), Some(2));
}

#[test]
fn inspect_tree_dump() {
    let dir = tempfile::tempdir().unwrap();
    let data = write(dir.path(), "run.csv", RUNNING_EXAMPLE_CSV);
    let o = lord(&["inspect", "--tree", &data]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 20);
    assert!(text.starts_with("root <0,19>:8\n  C=c3 <1,5>:2\n"));
}

#[test]
fn tab_delimiter_and_custom_missing_token() {
    let dir = tempfile::tempdir().unwrap();
    let tsv = RUNNING_EXAMPLE_CSV.replace(',', "\t").replace('?', "NA");
    let data = write(dir.path(), "run.tsv", &tsv);
    let model = dir.path().join("m.lord").to_str().unwrap().to_string();
    let o = lord(&["train", &data, "-o", &model, "--delimiter", "tab", "--missing-token", "NA", "--m", "1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = lord(&["inspect", "--model", &model]);
    assert_eq!(stdout(&o).lines().count(), 5);
}

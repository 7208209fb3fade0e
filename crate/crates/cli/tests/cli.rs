use std::process::{Command, Output};

use serde_json::Value;

fn dinfty(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dinfty")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn pointed_implication() {
    let out = dinfty(&["pointed", "(S,x)", "(S,x^2)"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["exists"], true);
    assert_eq!(v["witness"]["1"], "x");

    let back = json(&dinfty(&["pointed", "(S,x^2)", "(S,x)"]));
    assert_eq!(back["exists"], false);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(dinfty(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(dinfty(&["--prime", "2", "ring-check"]).status.code(), Some(2));
    assert_eq!(dinfty(&["--kmax", "4", "--depth", "5", "ring-check"]).status.code(), Some(2));
    assert_eq!(dinfty(&["hom", "Q_3", "S"]).status.code(), Some(2));
    assert_eq!(dinfty(&["radical", "--format", "dot"]).status.code(), Some(2));
}

#[test]
fn report_json_is_deterministic() {
    let a = dinfty(&["ring-check", "--kmax", "3"]);
    let b = dinfty(&["ring-check", "--kmax", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 2);
    for r in reports {
        assert_eq!(r["status"], "pass");
        assert_eq!(r["scope"], "window-verified");
        assert!(r["depth"].as_u64().unwrap() >= 5);
    }
}

#[test]
fn cb_table_markdown_has_ranks_0_1_2() {
    let out = dinfty(&["cb-table", "--format", "md", "--kmax", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let ranks: std::collections::BTreeSet<&str> = text
        .lines()
        .skip(2)
        .filter_map(|l| l.split('|').nth(3).map(str::trim))
        .collect();
    assert_eq!(ranks, ["0", "1", "2"].into_iter().collect());
    assert!(text.contains("| G_x |"));
}

#[test]
fn graphs_render_as_dot() {
    for cmd in [&["quilt", "--format", "dot", "--kmax", "3"][..], &["quiver-verify", "--format", "dot", "--kmax", "3"], &["pattern", "(S,x^2)", "--format", "dot", "--kmax", "3"]] {
        let out = dinfty(cmd);
        assert_eq!(out.status.code(), Some(0), "{cmd:?}");
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.starts_with("digraph"), "{cmd:?}");
        assert!(text.trim_end().ends_with('}'));
    }
}

#[test]
fn catalog_file_feeds_hom() {
    let dir = tempfile::tempdir().unwrap();
    let cat = dir.path().join("catalog.json");
    let out = dinfty(&["catalog", "--kmax", "2", "--out", cat.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let entries: Value = serde_json::from_str(&std::fs::read_to_string(&cat).unwrap()).unwrap();
    let m2 = entries
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["family"] == "M" && e["k"] == 2)
        .unwrap();
    let file = dir.path().join("m2.json");
    std::fs::write(&file, m2.to_string()).unwrap();
    let from_file = json(&dinfty(&["hom", file.to_str().unwrap(), "Y_2"]));
    let from_name = json(&dinfty(&["hom", "M_2", "Y_2"]));
    assert_eq!(from_file["dim"], from_name["dim"]);
    assert_eq!(from_file["graded_dims"], from_name["graded_dims"]);
}

#[test]
fn duality_markdown() {
    let out = dinfty(&["quiver-verify", "--format", "md", "--kmax", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("| X_1 | Y_1 |"));
    assert!(text.contains("| Y_2 | X_2 |"));
    assert!(text.contains("| M_2 | M_2 |"));
}

#[test]
fn verify_all_kmax_4_passes() {
    let out = dinfty(&["verify-all", "--prime", "5", "--kmax", "4"]);
    let v = json(&out);
    for r in v.as_array().unwrap() {
        assert_eq!(r["status"], "pass", "{r}");
    }
    assert_eq!(out.status.code(), Some(0));
}

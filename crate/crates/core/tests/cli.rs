use std::path::Path;

use ntos::cli::table::{read_json, write_table, ColumnData, Format};
use ntos::cli::{nsweep_table, run_cli_with, spectrum_table, EXIT_ERROR, EXIT_OK, EXIT_USAGE};
use ntos::experiments::nsweep;
use ntos::model::ChainParams;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["ntos".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_cli_with(&argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn data_lines(csv: &str) -> Vec<&str> {
    csv.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn nsweep_columns() {
    let (code, out, _) = run(&[
        "nsweep", "--t1", "2", "--t2", "1.5", "--gamma", "1", "--lambda-l", "1e-7", "--lambda-r", "1e-7", "--n", "2:12",
    ]);
    assert_eq!(code, EXIT_OK);
    let lines = data_lines(&out);
    assert_eq!(lines[0], "N,re_emin,im_emin,ln_abs_emin,pred_ln_abs");
    assert_eq!(lines.len(), 12);
    for key in ["t1", "t2", "gamma", "lambda_l", "lambda_r", "tool_version"] {
        assert!(out.contains(&format!("# {key}: ")), "{key}");
    }
}

#[test]
fn spectrum_rows_per_size() {
    let p = ChainParams::symmetric(2.5, 2.8, 1.0, 1e-5).unwrap();
    let t = spectrum_table(&p, &[4, 7]).unwrap();
    assert_eq!(t.rows(), 7 + 13);
    match t.column("is_emin").unwrap() {
        ColumnData::Int(v) => assert_eq!(v.iter().sum::<i64>(), 2),
        _ => panic!("is_emin is an integer column"),
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["nsweep", "--n", "2:x"]).0, EXIT_USAGE);
    assert_eq!(run(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(run(&["nsweep", "--t1", "oops"]).0, EXIT_USAGE);
    let (code, _, err) = run(&["nsweep", "--t1", "1", "--gamma", "1"]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("invalid parameters"));
    assert_eq!(run(&["nsweep", "--n", "2:300"]).0, EXIT_ERROR);
    assert_eq!(run(&["--help"]).0, EXIT_OK);
    assert_eq!(run(&["validate", "--criteria", "9"]).0, EXIT_USAGE);
}

#[test]
fn config_overrides_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"params": {"t1": 2.5, "t2": 2.8}, "n": "5:7"}"#).unwrap();
    let (code, out, _) = run(&["nsweep", "--t1", "2", "--n", "2:40", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("# t1: 2.5000000000000000e0"));
    assert_eq!(data_lines(&out).len(), 4);

    std::fs::write(&cfg, r#"{"n": "5:7", "colour": "red"}"#).unwrap();
    assert_eq!(run(&["nsweep", "--config", cfg.to_str().unwrap()]).0, EXIT_USAGE);
}

#[test]
fn json_round_trip() {
    let p = ChainParams::symmetric(2.8, 1.5, 1.0, 1e-9).unwrap();
    let table = nsweep_table(&nsweep(&p, 2, 40).unwrap());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.json");
    write_table(&table, Format::Json, &path).unwrap();
    assert_eq!(read_json(&path).unwrap(), table);
}

#[test]
fn phase_multiple_quantities_write_one_file_each() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("grid.csv");
    let (code, _, err) = run(&[
        "phase", "--quantity", "slope", "--quantity", "intercept", "--t1", "-4:4:9", "--t2", "-4:4:9", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    for q in ["slope", "intercept"] {
        let text = std::fs::read_to_string(dir.path().join(format!("grid_{q}.csv"))).unwrap();
        assert!(text.contains(&format!("# quantity: {q}")));
        assert_eq!(data_lines(&text).len(), 82);
    }
    assert!(!Path::new(&out).exists());
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["curves", "--t1", "2.5", "--t2", "2.8", "--samples", "32", "--format", "json"];
    assert_eq!(run(&args).1, run(&args).1);
    let args = ["unidir", "--t1", "2.5", "--t2", "2.8", "--n", "2:16"];
    assert_eq!(run(&args).1, run(&args).1);
}

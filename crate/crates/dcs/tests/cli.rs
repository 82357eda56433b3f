//! Black-box tests of the `dcs` binary: exit codes, output formats, and
//! lossless CSV export.

use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::Arc;

use dcs::gf2n::build_field;
use dcs::ordering::{self, BaseScheme};
use dcs::quasidist;
use dcs::states::{self, THETA_SYMMETRIC};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dcs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dcs-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn field_info_reports_the_default_basis() {
    let out = run(&["field-info", "-n", "5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("0x25"));
    assert!(text.contains("{s3, s5, s11, s22, s24}"));
}

#[test]
fn field_info_json_and_all_bases() {
    let out = run(&["field-info", "-n", "5", "--format", "json", "--all-bases"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["n"], 5);
    let basis: Vec<&str> = v["self_dual_basis"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_str().unwrap())
        .collect();
    assert_eq!(basis, ["s3", "s5", "s11", "s22", "s24"]);
    assert_eq!(v["all_self_dual_bases"].as_array().unwrap().len(), 6);
}

#[test]
fn field_info_rejects_a_reducible_polynomial() {
    // x^4 + x^2 + 1 = (x^2 + x + 1)^2 is not primitive.
    let out = run(&["field-info", "-n", "4", "--poly", "0x15"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn qfunc_prints_the_sum_footer() {
    let out = run(&["qfunc", "-n", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("sum_Q=8.000000 sum_Q2=2.370370"), "{text}");
    // The grid itself: header plus 8 rows.
    assert_eq!(text.lines().filter(|l| l.starts_with("label")).count(), 1);
}

#[test]
fn qfunc_csv_round_trips_losslessly() {
    let dir = temp_dir("csv");
    let path = dir.join("q.csv");
    let out = run(&["qfunc", "-n", "3", "-o", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();

    let f = Arc::new(build_field(3, None).unwrap());
    let fid = states::fiducial(&f, THETA_SYMMETRIC).unwrap();
    let q = quasidist::q_function(&fid, THETA_SYMMETRIC).unwrap();
    let axis = ordering::order_axis(&f, BaseScheme::HAscending);

    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header[0], "label");
    assert_eq!(header.len(), f.size() + 1);
    for (&a, line) in axis.labels().iter().zip(lines) {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells[0], f.label(a));
        for (&b, cell) in axis.labels().iter().zip(&cells[1..]) {
            let parsed: f64 = cell.parse().unwrap();
            // 17 significant digits reproduce the f64 bit pattern.
            assert_eq!(parsed.to_bits(), q.value(a, b).to_bits());
        }
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn qfunc_recentered_coherent_state_peaks_at_center() {
    let out = run(&[
        "qfunc", "-n", "3", "--state", "cs:s2,s4", "--order", "symmetric", "--recenter",
        "--format", "json",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let json_part = &text[..text.rfind("sum_Q=").unwrap()];
    let v: serde_json::Value = serde_json::from_str(json_part).unwrap();
    let values = v["values"].as_array().unwrap();
    let center = values.len() / 2;
    let peak = values[center].as_array().unwrap()[center].as_f64().unwrap();
    assert!((peak - 1.0).abs() < 1e-10);
    assert_eq!(v["ordering"]["scheme"], "h_symmetric+recenter");
}

#[test]
fn qfunc_state_language_errors_use_the_domain_exit_code() {
    assert_eq!(run(&["qfunc", "-n", "3", "--state", "bogus"]).status.code(), Some(3));
    assert_eq!(run(&["qfunc", "-n", "3", "--state", "cs:s1"]).status.code(), Some(3));
    assert_eq!(run(&["qfunc", "-n", "3", "--state", "xor:1,1"]).status.code(), Some(3));
    assert_eq!(run(&["qfunc", "-n", "3", "--theta", "2.0"]).status.code(), Some(3));
    assert_eq!(
        run(&["qfunc", "-n", "3", "--state", "file:/nonexistent/state.json"])
            .status
            .code(),
        Some(4)
    );
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["qfunc"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn pfunc_singular_fiducial_exits_three() {
    let out = run(&["pfunc", "-n", "1", "--state", "z-up", "--theta", "0.0"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("P-function singular"), "{err}");
}

#[test]
fn pfunc_reports_unit_total_weight() {
    // P sums to tr(rho) = 1; the fiducial's own P is a point mass.
    let out = run(&["pfunc", "-n", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("sum_P=1.000000 sum_P2=1.000000"));
}

#[test]
fn state_file_round_trip_through_the_cli() {
    let dir = temp_dir("statefile");
    let f = Arc::new(build_field(2, None).unwrap());
    let fid = states::fiducial(&f, THETA_SYMMETRIC).unwrap();
    let path = dir.join("fid.json");
    std::fs::write(&path, serde_json::to_string(&fid.to_json()).unwrap()).unwrap();
    let out = run(&["qfunc", "-n", "2", "--state", &format!("file:{}", path.display())]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("sum_Q=4.000000"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn output_dir_env_resolves_relative_paths() {
    let dir = temp_dir("outdir");
    let out = Command::new(env!("CARGO_BIN_EXE_dcs"))
        .args(["qfunc", "-n", "2", "-o", "grid.csv"])
        .env("DCS_OUTPUT_DIR", &dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.join("grid.csv").exists());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_prints_a_line_per_check() {
    let out = run(&["verify", "-n", "2", "--seed", "5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let passes = text.lines().filter(|l| l.starts_with("PASS ")).count();
    assert!(passes >= 15, "{text}");
    assert!(text.contains("all "));

    let single = run(&["verify", "-n", "2", "--only", "commutation"]);
    assert!(single.status.success());
    assert_eq!(
        stdout(&single).lines().filter(|l| l.starts_with("PASS ")).count(),
        1
    );

    assert_eq!(run(&["verify", "-n", "2", "--only", "nope"]).status.code(), Some(3));
    assert_eq!(run(&["verify", "-n", "99"]).status.code(), Some(3));
}

use std::f64::consts::PI;
use std::fs;
use std::process::{Command, Output};

use oam_parity::cli::format::fmt_sig;
use oam_parity::interferometer::signal_ideal;
use oam_parity::sensitivity::optimal_sensitivity;
use oam_parity::{NoiseConfig, Scenario, Variant};

fn oam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oam-parity"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = oam(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn table(csv: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = csv.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let (header, rows) = table(csv);
    let i = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[i]).collect()
}

const PI_S: &str = "3.141592653589793";

#[test]
fn signal_rows_and_optimum_point() {
    let csv = stdout(&[
        "signal",
        "--r",
        "1",
        "--ell",
        "1",
        "--phi-max",
        PI_S,
        "--phi-steps",
        "5",
    ]);
    assert!(csv.starts_with("phi,signal\n"));
    assert!(!csv.contains('\r'));
    let (_, rows) = table(&csv);
    assert_eq!(rows.len(), 5);
    assert!((rows[1][0] - PI / 4.0).abs() < 1e-11);
    assert_eq!(rows[1][1], 1.0);
}

#[test]
fn printed_values_reproduce_the_formula() {
    let csv = stdout(&["signal", "--r", "0.7", "--ell", "3", "--phi-steps", "37"]);
    for row in table(&csv).1 {
        let exact = signal_ideal(&Scenario::new(0.7, 3, row[0]).unwrap());
        // one unit in the 12th significant digit, plus the phi rounding
        assert!(
            (row[1] - exact).abs() <= 2e-12 * exact.max(1e-300) + 1e-11,
            "{row:?}"
        );
    }
}

#[test]
fn sensitivity_optimum_and_unbounded_token() {
    let phis = format!("{}", PI / 4.0);
    let csv = stdout(&[
        "sensitivity",
        "--r",
        "1",
        "--phi-min",
        &phis,
        "--phi-max",
        &format!("{}", PI / 2.0),
        "--phi-steps",
        "2",
    ]);
    assert!(csv.starts_with("phi,delta_phi,signal\n"));
    let line2 = csv.lines().nth(2).unwrap();
    assert_eq!(line2.split(',').nth(1), Some("inf"));
    let first: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    let dphi: f64 = first[1].parse().unwrap();
    assert!((dphi - 0.137860).abs() < 5e-7);
}

#[test]
fn loss_sweep_minimum_matches_comparison_value() {
    let csv = stdout(&[
        "sensitivity",
        "--variant",
        "loss",
        "--loss",
        "0.01",
        "--r",
        "1",
        "--phi-steps",
        "20001",
    ]);
    let best = column(&csv, "delta_phi")
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    assert!((best - 0.1968).abs() < 1e-3, "{best}");
}

#[test]
fn dark_signal_is_scaled_ideal_signal() {
    let ideal = column(
        &stdout(&["signal", "--r", "1", "--phi-steps", "33"]),
        "signal",
    );
    let dark = column(
        &stdout(&[
            "signal",
            "--variant",
            "dark",
            "--dark",
            "0.1",
            "--r",
            "1",
            "--phi-steps",
            "33",
        ]),
        "signal",
    );
    for (i, d) in ideal.iter().zip(&dark) {
        assert!((d / i - (-0.2f64).exp()).abs() < 1e-11);
    }
}

#[test]
fn total_loss_gives_unit_signal() {
    let csv = stdout(&[
        "signal",
        "--variant",
        "loss",
        "--loss",
        "1",
        "--r",
        "1.2",
        "--phi-steps",
        "7",
    ]);
    assert!(column(&csv, "signal").iter().all(|&v| v == 1.0));
}

#[test]
fn optimal_rows_and_ell_halving() {
    let csv = stdout(&["optimal", "--r", "1"]);
    assert_eq!(csv.lines().next(), Some("r,N,phi_opt,delta_phi_min,hl,snl"));
    let (_, rows) = table(&csv);
    assert_eq!(rows.len(), 1);
    assert!((rows[0][3] - 0.13786).abs() < 1e-5 && (rows[0][4] - 0.18102).abs() < 1e-5);
    assert!(rows[0][3] < rows[0][4]);

    let one = column(
        &stdout(&[
            "optimal",
            "--variant",
            "loss",
            "--loss",
            "0.01",
            "--r",
            "1",
            "--ell",
            "1",
        ]),
        "delta_phi_min",
    )[0];
    let two = column(
        &stdout(&[
            "optimal",
            "--variant",
            "loss",
            "--loss",
            "0.01",
            "--r",
            "1",
            "--ell",
            "2",
        ]),
        "delta_phi_min",
    )[0];
    assert!((two / one - 0.5).abs() < 1e-11);
}

#[test]
fn optimal_default_range() {
    let rs = column(&stdout(&["optimal"]), "r");
    assert_eq!(rs.len(), 101);
    assert_eq!((rs[0], rs[100]), (0.5, 1.5));
}

#[test]
fn nbar_and_r_are_the_same_source() {
    let n = 2.0 * 1.0f64.sinh().powi(2);
    let by_r = stdout(&["signal", "--r", "1", "--phi-steps", "9"]);
    let by_n = stdout(&["signal", "--nbar", &format!("{n}"), "--phi-steps", "9"]);
    for (a, b) in column(&by_r, "signal").iter().zip(column(&by_n, "signal")) {
        assert!((a - b).abs() < 1e-11);
    }
}

#[test]
fn degrees_convert_at_the_boundary() {
    let csv = stdout(&[
        "signal",
        "--degrees",
        "--r",
        "1",
        "--phi-min",
        "0",
        "--phi-max",
        "90",
        "--phi-steps",
        "3",
    ]);
    let (_, rows) = table(&csv);
    assert_eq!(
        rows.iter().map(|r| r[0]).collect::<Vec<_>>(),
        vec![0.0, 45.0, 90.0]
    );
    assert_eq!(rows[1][1], 1.0);
    let opt = column(&stdout(&["optimal", "--degrees", "--r", "1"]), "phi_opt")[0];
    assert!((opt - 45.0).abs() < 1e-5);
}

#[test]
fn output_is_deterministic_across_job_counts() {
    let args = [
        "optimal",
        "--variant",
        "thermal",
        "--nth",
        "0.1",
        "--transmissivity",
        "0.97",
        "--r-steps",
        "23",
    ];
    let serial = stdout(&args);
    let mut parallel = args.to_vec();
    parallel.extend(["--jobs", "4"]);
    assert_eq!(serial, stdout(&parallel));
    assert_eq!(serial, stdout(&args));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let printed = stdout(&["signal", "--phi-steps", "4"]);
    assert_eq!(
        stdout(&[
            "signal",
            "--phi-steps",
            "4",
            "--out",
            path.to_str().unwrap()
        ]),
        ""
    );
    assert_eq!(fs::read_to_string(path).unwrap(), printed);
}

#[test]
fn figure_2a_has_three_curves_with_lossless_optimum() {
    let dir = tempfile::tempdir().unwrap();
    stdout(&["figure", "2a", "--out", dir.path().to_str().unwrap()]);
    let mut files: Vec<String> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    files.sort();
    assert_eq!(
        files,
        [
            "fig2a_L0.csv",
            "fig2a_L0p01.csv",
            "fig2a_L0p03.csv",
            "manifest.csv"
        ]
    );
    let csv = fs::read_to_string(dir.path().join("fig2a_L0.csv")).unwrap();
    let best = column(&csv, "delta_phi")
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let n = 2.0 * 1.0f64.sinh().powi(2);
    assert!((best - 1.0 / (2.0 * (n * (n + 2.0)).sqrt())).abs() < 1e-12);
}

#[test]
fn figure_5_curves_differ_by_factor_two() {
    let dir = tempfile::tempdir().unwrap();
    stdout(&["figure", "5", "--out", dir.path().to_str().unwrap()]);
    let one = column(
        &fs::read_to_string(dir.path().join("fig5_ell1.csv")).unwrap(),
        "delta_phi_min",
    );
    let two = column(
        &fs::read_to_string(dir.path().join("fig5_ell2.csv")).unwrap(),
        "delta_phi_min",
    );
    assert_eq!(one.len(), 101);
    for (a, b) in one.iter().zip(&two) {
        assert!((a / b - 2.0).abs() < 1e-9);
    }
}

#[test]
fn figure_4b_matches_direct_optimisation() {
    let dir = tempfile::tempdir().unwrap();
    stdout(&["figure", "4b", "--out", dir.path().to_str().unwrap()]);
    let csv = fs::read_to_string(dir.path().join("fig4b_T0p99.csv")).unwrap();
    let (_, rows) = table(&csv);
    let row = rows.iter().find(|r| r[0] == 1.0).unwrap();
    let noise = NoiseConfig::default().with_thermal(0.1, 0.99).unwrap();
    let direct = optimal_sensitivity(Variant::Thermal, 1.0, 1, &noise)
        .unwrap()
        .delta_phi;
    assert!((row[3] - direct).abs() < 1e-9);
}

#[test]
fn figure_manifest_is_pinned() {
    let dir = tempfile::tempdir().unwrap();
    let mut all = String::new();
    for id in ["2a", "2b", "3a", "3b", "4a", "4b", "5"] {
        let sub = dir.path().join(id);
        stdout(&["figure", id, "--out", sub.to_str().unwrap()]);
        let manifest = fs::read_to_string(sub.join("manifest.csv")).unwrap();
        all.extend(manifest.lines().skip(1).map(|l| format!("{l}\n")));
    }
    let half_pi = fmt_sig(PI / 2.0);
    let expected = format!(
        "fig2a_L0.csv,2a,sensitivity_vs_phi,loss,1,1,,,,0,{half_pi},501,0,,,
fig2a_L0p01.csv,2a,sensitivity_vs_phi,loss,1,1,,,,0,{half_pi},501,0.01,,,
fig2a_L0p03.csv,2a,sensitivity_vs_phi,loss,1,1,,,,0,{half_pi},501,0.03,,,
fig2b_L0p01.csv,2b,optimal_vs_r,loss,1,,0.5,1.5,101,,,,0.01,,,
fig2b_L0p03.csv,2b,optimal_vs_r,loss,1,,0.5,1.5,101,,,,0.03,,,
fig3a_d0p01.csv,3a,sensitivity_vs_phi,dark,1,1,,,,0,{half_pi},501,,0.01,,
fig3a_d0p1.csv,3a,sensitivity_vs_phi,dark,1,1,,,,0,{half_pi},501,,0.1,,
fig3b_d0p01.csv,3b,optimal_vs_r,dark,1,,0.5,1.5,101,,,,,0.01,,
fig3b_d0p1.csv,3b,optimal_vs_r,dark,1,,0.5,1.5,101,,,,,0.1,,
fig4a_T0p99.csv,4a,sensitivity_vs_phi,thermal,1,1,,,,0,{half_pi},501,,,0.1,0.99
fig4a_T0p97.csv,4a,sensitivity_vs_phi,thermal,1,1,,,,0,{half_pi},501,,,0.1,0.97
fig4b_T0p99.csv,4b,optimal_vs_r,thermal,1,,0.5,1.5,101,,,,,,0.1,0.99
fig4b_T0p97.csv,4b,optimal_vs_r,thermal,1,,0.5,1.5,101,,,,,,0.1,0.97
fig5_ell1.csv,5,optimal_vs_r,loss,1,,0.5,1.5,101,,,,0.01,,,
fig5_ell2.csv,5,optimal_vs_r,loss,2,,0.5,1.5,101,,,,0.01,,,
"
    );
    assert_eq!(all, expected);
}

#[test]
fn usage_errors_exit_one() {
    let cases: &[&[&str]] = &[
        &["figure", "6", "--out", "/tmp/unused-fig"],
        &["signal", "--variant", "dark", "--loss", "0.1"],
        &["signal", "--variant", "ideal", "--nth", "0.1"],
        &["signal", "--r", "1", "--nbar", "2"],
        &["signal", "--phi-steps", "1"],
        &["signal", "--r", "-1"],
        &["signal", "--ell", "0"],
        &["signal", "--variant", "loss", "--loss", "1.5"],
        &["signal", "--variant", "bogus"],
        &["optimal", "--r-steps", "1"],
        &["sensitivity", "--jobs", "0"],
        &["validate", "--tolerance", "nonsense=1"],
        &["frobnicate"],
    ];
    for args in cases {
        let out = oam(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn validate_reports_every_check() {
    let out = oam(&["validate"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().filter(|l| l.starts_with('[')).collect();
    assert!(lines.len() >= 12);
    assert!(text.contains("loss_published") && text.contains("hl_published"));
    // the dark-count bound is the one known-failing check
    let failing: Vec<&str> = lines
        .iter()
        .filter(|l| l.starts_with("[FAIL]"))
        .copied()
        .collect();
    assert_eq!(failing.len(), 1, "{failing:?}");
    assert!(failing[0].contains("dark_vs_ideal"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_passes_when_the_dark_bound_is_relaxed() {
    let out = oam(&["validate", "--tolerance", "dark_vs_ideal=0.4"]);
    assert_eq!(out.status.code(), Some(0));
}

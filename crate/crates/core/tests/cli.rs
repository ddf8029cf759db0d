use std::process::Command;

use sombrero::cli::parse_solve_csv;
use sombrero::SolveResult;

fn sombrero(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_sombrero")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn solve_prints_table_row() {
    let (code, out, _) = sombrero(&["solve", "--N", "3", "--g", "1", "--A", "2", "--trial", "2", "--method", "tau"]);
    assert_eq!(code, 0);
    for e in ["E0 = -8.6479", "E1 = 2.1523", "E2 = 2.1517"] {
        assert!(out.contains(e), "{out}");
    }
}

#[test]
fn exact_trial_converges_at_order_zero() {
    let (code, out, _) = sombrero(&["solve", "--g", "1", "--A", "2", "--trial", "1", "--method", "f"]);
    assert_eq!(code, 0);
    assert!(out.contains("E0 = 2.1517") && out.contains("converged at order 0"), "{out}");
}

#[test]
fn exit_codes() {
    let (code, _, err) = sombrero(&["solve", "--g", "0"]);
    assert_eq!(code, 2);
    assert!(err.contains("g must be > 0"));
    assert_eq!(sombrero(&["solve", "--trial", "3"]).0, 2);
    assert_eq!(sombrero(&["table", "--which", "5"]).0, 2);
    let (code, out, _) = sombrero(&["solve", "--g", "2", "--orders", "2", "--tol", "1e-9"]);
    assert_eq!(code, 1);
    assert!(out.contains("not converged after 2 orders"));
}

#[test]
fn config_file_and_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# table 2 row (2, 2, II)\ng = 2\nA = 2\ntrial = 2\nroot = small\nmethod = f\n").unwrap();
    let c = cfg.to_str().unwrap();
    let (code, out, _) = sombrero(&["solve", "--config", c]);
    assert_eq!(code, 0);
    assert!(out.contains("E0 = 5.5581") && out.contains("E2 = 4.0976"), "{out}");
    let (_, out, _) = sombrero(&["solve", "--config", c, "--root", "large"]);
    assert!(out.contains("E0 = -526.5782"), "{out}");
    std::fs::write(&cfg, "gee = 2\n").unwrap();
    let (code, _, err) = sombrero(&["solve", "--config", c]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown config key"));
}

#[test]
fn csv_and_json_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("r.csv");
    let json = dir.path().join("r.json");
    let base = ["solve", "--g", "0.5", "--A", "2", "--trial", "2", "--method", "f"];
    let with = |path: &std::path::Path, fmt: &str| {
        let mut a: Vec<&str> = base.to_vec();
        a.extend(["--out", path.to_str().unwrap(), "--format", fmt].iter().copied());
        a.iter().map(|s| s.to_string()).collect::<Vec<_>>()
    };
    let a = with(&csv, "csv");
    assert_eq!(sombrero(&a.iter().map(String::as_str).collect::<Vec<_>>()).0, 0);
    let a = with(&json, "json");
    assert_eq!(sombrero(&a.iter().map(String::as_str).collect::<Vec<_>>()).0, 0);
    let rows = parse_solve_csv(&std::fs::read_to_string(&csv).unwrap()).unwrap();
    let res: SolveResult = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(rows.len(), res.energies.len());
    for ((n, e, d), (re, rd)) in rows.iter().zip(res.energies.iter().zip(&res.deltas)) {
        assert_eq!(e.to_bits(), re.to_bits(), "E{n}");
        assert_eq!(d.to_bits(), rd.to_bits(), "delta{n}");
    }
    assert_eq!(format!("{:.4}", res.energies[2]), "1.3795");
}

#[test]
fn table_csv_layout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t1.csv");
    let (code, shown, _) = sombrero(&["table", "--which", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(shown.contains("0.93,2,I,2.0237,2.0352,2.0351,2.0351,2.0351,,"));
    assert!(shown.contains("1,2,I,2.1517,,,,,,"));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "g,A,trial,E0,E1,E2,E3,E4,E5,error");
    assert_eq!(lines.len(), 15);
    assert!(lines.iter().all(|l| l.split(',').count() == 10));
    let e1: f64 = lines[11].split(',').nth(4).unwrap().parse().unwrap();
    assert!((e1 - 2.1215).abs() < 5e-5, "{}", lines[11]);
}

fn argmax_radius(csv: &str, column: usize) -> f64 {
    csv.lines()
        .skip(1)
        .map(|l| {
            let f: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            (f[0], f[column])
        })
        .fold((0.0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a })
        .0
}

#[test]
fn wavefunction_shapes() {
    let (code, csv, _) = sombrero(&["wavefunction", "--g", "1", "--A", "2", "--trial", "2", "--samples", "801"]);
    assert_eq!(code, 0);
    assert_eq!(csv.lines().next(), Some("r,phi_normalized,psi_normalized"));
    assert_eq!(csv.lines().count(), 802);
    assert!(argmax_radius(&csv, 1) > 0.0);
    assert_eq!(argmax_radius(&csv, 2), 0.0);
    let (_, csv, _) = sombrero(&["wavefunction", "--g", "1", "--A", "3", "--samples", "801"]);
    assert!(argmax_radius(&csv, 2) > 0.0);
    let (_, csv, _) = sombrero(&["wavefunction", "--g", "0.5", "--A", "2", "--samples", "801"]);
    assert_eq!(argmax_radius(&csv, 2), 0.0);
}

#[test]
fn oracle_command() {
    for (g, a, e) in [("1", "2", "2.1517"), ("1", "1", "1.8392"), ("0.5", "2", "1.3773")] {
        let (code, out, _) = sombrero(&["oracle", "--g", g, "--A", a]);
        assert_eq!(code, 0);
        assert!(out.starts_with(&format!("E = {e}\n")), "{out}");
    }
}

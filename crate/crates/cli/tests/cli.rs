use std::process::{Command, Output};

fn coulomb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coulomb"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn friedrichs_rows() {
    let o = coulomb(&["spectrum", "--nu", "-1", "--alpha", "inf", "--n-max", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.lines().any(|l| l == "n,E,residual,bracket_lo,bracket_hi,E_friedrichs"));
    let rows = data_rows(&s);
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0][..2], ["1", "-0.25"]);
    assert_eq!(rows[1][..2], ["2", "-0.0625"]);
    assert_eq!(rows[2][1].parse::<f64>().unwrap(), -1.0 / 36.0);
}

#[test]
fn residuals_within_tolerance() {
    let o = coulomb(&["spectrum", "--nu", "-1", "--alpha", "0", "--n-max", "5", "--tol", "1e-10"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = data_rows(&stdout(&o));
    assert_eq!(rows.len(), 5);
    for r in rows {
        assert!(r[2].parse::<f64>().unwrap() <= 1e-10, "{r:?}");
        assert!(!r[1].contains('e'));
    }
}

#[test]
fn above_threshold_is_empty() {
    let o = coulomb(&["spectrum", "--nu", "1", "--alpha", "1.0", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["points"].as_array().unwrap().len(), 0);
    assert!(v["note"].as_str().unwrap().starts_with("alpha >= alpha_nu"));
}

#[test]
fn json_schema() {
    let o = coulomb(&["spectrum", "--nu", "-1", "--alpha", "3", "--n-max", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["nu"], -1.0);
    assert_eq!(v["alpha"], 3.0);
    let p = &v["points"][0];
    assert_eq!(p["n"], 1);
    assert!(p["E"].as_f64().unwrap() < -0.25);
    assert_eq!(p["bracket"].as_array().unwrap().len(), 2);
    assert_eq!(v["friedrichs_reference"][1], -0.0625);
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["nu", "alpha", "points", "friedrichs_reference"]);
}

#[test]
fn kernel_symmetry_and_guard() {
    let a = coulomb(&["kernel", "--nu", "-1", "--kappa", "0.5", "--alpha", "inf", "--r", "1", "--rho", "2"]);
    let b = coulomb(&["kernel", "--nu", "-1", "--kappa", "0.5", "--alpha", "inf", "--r", "2", "--rho", "1"]);
    assert_eq!(a.status.code(), Some(0));
    let va = data_rows(&stdout(&a))[0][8].clone();
    let vb = data_rows(&stdout(&b))[0][8].clone();
    assert_eq!(va, vb);
    assert!((va.parse::<f64>().unwrap() - 0.355_723_861_765_805_36).abs() < 1e-13);

    let f = coulomb_core::spectra::f_nu_kappa_raw(-1.0, 0.5).unwrap();
    let alpha = format!("{f:e}");
    let o = coulomb(&["kernel", "--nu", "-1", "--kappa", "0.5", "--alpha", &alpha, "--r", "1", "--rho", "2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("spectral point"));
}

#[test]
fn exit_codes() {
    assert_eq!(coulomb(&["spectrum", "--nu", "0", "--alpha", "1"]).status.code(), Some(1));
    assert_eq!(coulomb(&["spectrum", "--nu", "abc", "--alpha", "1"]).status.code(), Some(1));
    assert_eq!(coulomb(&["spectrum", "--nu", "-1"]).status.code(), Some(1));
    assert_eq!(coulomb(&["spectrum", "--nu", "-1", "--alpha", "nan"]).status.code(), Some(1));
    assert_eq!(coulomb(&["verify", "--nu", "0"]).status.code(), Some(1));
    assert_eq!(coulomb(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_passes_and_canary_fails() {
    let o = coulomb(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);

    let o = coulomb(&["verify", "--perturb-digamma", "1e-3"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("oracle_agreement"));
}

#[test]
fn deterministic_output_and_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"nu": -1, "alpha": -2, "n-max": 4}"#).unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o = coulomb(&["spectrum", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let ta = std::fs::read(&a).unwrap();
    assert_eq!(ta, std::fs::read(&b).unwrap());
    assert_eq!(data_rows(&String::from_utf8(ta).unwrap()).len(), 4);

    // flags override the file
    let o = coulomb(&["spectrum", "--config", cfg.to_str().unwrap(), "--n-max", "2"]);
    assert_eq!(data_rows(&stdout(&o)).len(), 2);

    std::fs::write(&cfg, r#"{"nu": -1, "alpha": 0, "colour": "red"}"#).unwrap();
    let o = coulomb(&["spectrum", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn fibration_bands() {
    let o = coulomb(&["fibration", "--nu", "-1", "--alpha-grid", "-3:3:13", "--n-max", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = data_rows(&stdout(&o));
    assert_eq!(rows.len(), 13 * 4);
    for r in &rows {
        let n: usize = r[1].parse().unwrap();
        let e: f64 = r[2].parse().unwrap();
        let upper = -1.0 / (4.0 * (n * n) as f64);
        let lower = if n == 1 { f64::NEG_INFINITY } else { -1.0 / (4.0 * ((n - 1) * (n - 1)) as f64) };
        assert!(lower < e && e < upper, "{r:?}");
    }
}

#[test]
fn fibration_single_point_matches_spectrum() {
    let f = coulomb(&["fibration", "--nu", "-1", "--alpha-grid", "0.5:0.5:1", "--n-max", "3"]);
    let s = coulomb(&["spectrum", "--nu", "-1", "--alpha", "0.5", "--n-max", "3"]);
    let fe: Vec<String> = data_rows(&stdout(&f)).into_iter().map(|r| r[2].clone()).collect();
    let se: Vec<String> = data_rows(&stdout(&s)).into_iter().map(|r| r[1].clone()).collect();
    assert_eq!(fe, se);
}

#[test]
fn positive_nu_branch_ends_at_threshold() {
    let o = coulomb(&["fibration", "--nu", "1", "--alpha-grid", "-0.2:0.2:41", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let a_nu = v["alpha_nu"].as_f64().unwrap();
    let mut last = f64::NEG_INFINITY;
    for row in v["rows"].as_array().unwrap() {
        let a = row["alpha"].as_f64().unwrap();
        match row["E"].as_f64() {
            Some(e) => {
                assert!(a < a_nu);
                assert!(e > last, "branch must rise with alpha");
                last = e;
            }
            None => assert!(a >= a_nu),
        }
    }
}

#[test]
fn spectral_function_curves() {
    let o = coulomb(&["spectral-function", "--nu", "-1", "--e-grid", "-2:-0.005:400:log"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let meta = s.lines().find(|l| l.starts_with("# asymptotes:")).unwrap();
    let asym: Vec<f64> = meta["# asymptotes:".len()..].split_whitespace().map(|x| x.parse().unwrap()).collect();
    assert_eq!(asym[..2], [-0.25, -0.0625]);
    // increasing between consecutive asymptotes
    let pts: Vec<(f64, f64)> = data_rows(&s)
        .iter()
        .map(|r| (r[0].parse().unwrap(), r[1].parse().unwrap()))
        .collect();
    for w in pts.windows(2) {
        let crosses = asym.iter().any(|&a| w[0].0 < a && a < w[1].0);
        if !crosses {
            assert!(w[1].1 > w[0].1, "{w:?}");
        }
    }

    let o = coulomb(&["spectral-function", "--nu", "1", "--e-grid", "-100:-1e-6:300:log", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let a_nu = v["alpha_nu"].as_f64().unwrap();
    let max = v["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["F"].as_f64().unwrap())
        .fold(f64::NEG_INFINITY, f64::max);
    assert!(max < a_nu + 1e-9);
}

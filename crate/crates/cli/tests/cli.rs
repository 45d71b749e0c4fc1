use std::path::Path;
use std::process::{Command, Output};

fn ionbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ionbound"))
        .args(args)
        .env_remove("IONBOUND_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json document")
}

#[test]
fn bounds_table_matches_published_small_z() {
    let o = ionbound(&["bounds", "table", "--zmin", "1", "--zmax", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == "main").unwrap();
    let published = [2.9489, 4.4824, 6.0286, 7.5741, 9.1180];
    let mains: Vec<f64> = lines.map(|l| l.split(',').nth(col).unwrap().parse().unwrap()).collect();
    assert_eq!(mains.len(), 5);
    for (m, p) in mains.iter().zip(published) {
        assert!((m - p).abs() <= 2e-3, "{m} vs {p}");
    }
}

#[test]
fn bounds_table_json_mirrors_csv() {
    let o = ionbound(&["bounds", "table", "--zmin", "3", "--zmax", "4", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[0]["Z"], 3);
    assert_eq!(v[1]["best_real"], "main");
}

#[test]
fn gn_compute_document() {
    let o = ionbound(&["gn", "compute"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    for key in ["u0", "K", "M", "P", "cgn_ratio", "cgn_pohozaev", "nasibov_bound"] {
        assert!(v[key].is_number(), "missing {key}");
    }
    let (ratio, poh) = (v["cgn_ratio"].as_f64().unwrap(), v["cgn_pohozaev"].as_f64().unwrap());
    assert!((ratio - poh).abs() <= 1e-5 * ratio);
    assert!((v["nasibov_bound"].as_f64().unwrap() - 0.306658).abs() <= 1e-5);
    assert!(ratio < v["nasibov_bound"].as_f64().unwrap());
}

#[test]
fn gn_nasibov_csv() {
    let o = ionbound(&["gn", "nasibov", "--format", "csv"]);
    assert!(stdout(&o).contains("nasibov_bound,0.306658\n"));
    let o = ionbound(&["gn", "nasibov", "--rho", "1", "--d", "2"]);
    let v = json(&o);
    assert!(v["k_N"].as_f64().unwrap() > 0.0);
    assert!(v.get("nasibov_bound").is_none());
}

#[test]
fn hartree_critical_ratio() {
    let o = ionbound(&["hartree", "critical", "--z", "1", "--tol", "1e-4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let nc = json(&o)["N_c"].as_f64().unwrap();
    assert!((nc - 1.21).abs() <= 0.02, "{nc}");
}

#[test]
fn hartree_solve_writes_profile() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("psi.txt");
    let o = ionbound(&["hartree", "solve", "--z", "2", "--n", "1", "--profile", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["converged"], true);
    assert_eq!(v["profile_file"], path.to_str().unwrap());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# radial-profile v1 n="));
    let p = ionbound::profile::RadialProfile::read_text(text.as_bytes()).unwrap();
    assert_eq!(p.len(), v["profile"]["n"].as_u64().unwrap() as usize);
}

#[test]
fn hartree_above_capacity_is_a_numerical_failure() {
    let o = ionbound(&["hartree", "solve", "--z", "1", "--n", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("hartree-scf"));
}

#[test]
fn non_convergence_exit_names_module_and_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "max_iter = 3\n").unwrap();
    let o = ionbound(&["hartree", "solve", "--z", "1", "--n", "1", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("hartree-scf") && err.contains("tolerance 1e-8"), "{err}");
}

#[test]
fn invalid_input_exits_2() {
    for args in [
        &["bounds", "table", "--c-lo", "2.5"][..],
        &["bounds", "table", "--zmin", "9", "--zmax", "3"],
        &["bounds", "table", "--format", "xml"],
        &["bounds", "compare", "--z", "0"],
        &["beta", "trial", "--family", "lorentzian"],
        &["beta", "alpha-n", "--n", "1"],
        &["hartree", "solve", "--z", "1", "--n", "1", "--nodes", "20"],
        &["hartree", "solve", "--z", "-1", "--n", "1"],
        &["gn", "nasibov", "--rho", "-1"],
        &["frobnicate"],
    ] {
        let o = ionbound(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn config_file_with_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("pinned.cfg");
    std::fs::write(&cfg, "# pinned constants\nc_gn = 0.279271\nformat = json\n").unwrap();
    let c = cfg.to_str().unwrap();
    let v = json(&ionbound(&["bounds", "compare", "--z", "6", "--config", c]));
    assert!((v["constants"]["d_const"].as_f64().unwrap() - 0.43846).abs() < 1e-5);
    let v = json(&ionbound(&["bounds", "compare", "--z", "6", "--config", c, "--c-gn", "0.2793"]));
    assert!((v["constants"]["d_const"].as_f64().unwrap() - 1.57 * 0.2793).abs() < 1e-12);

    std::fs::write(&cfg, "colour = blue\n").unwrap();
    let o = ionbound(&["bounds", "compare", "--z", "6", "--config", c]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown key"));
}

#[test]
fn output_path_and_environment_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("nested/table.csv");
    let o = ionbound(&["bounds", "table", "--zmax", "3", "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(&out).unwrap().starts_with("Z,lieb,nam"));

    let o = Command::new(env!("CARGO_BIN_EXE_ionbound"))
        .args(["bounds", "crossover"])
        .env("IONBOUND_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let written = std::fs::read_to_string(Path::new(dir.path()).join("bounds-crossover.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&written).unwrap();
    assert_eq!((v["real_z"].as_u64(), v["claimed_z"].as_u64()), (Some(22), Some(26)));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    for args in [
        &["beta", "alpha-n", "--n", "4", "--seeds", "8", "--seed", "5"][..],
        &["bounds", "table", "--zmax", "40", "--format", "json"],
        &["beta", "trial", "--family", "gen-gamma", "--budget", "40"],
    ] {
        let (a, b) = (ionbound(args), ionbound(args));
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn beta_documents_carry_reference_interval() {
    let v = json(&ionbound(&["beta", "trial", "--family", "shell-mix", "--budget", "200"]));
    assert_eq!(v["reference_interval"], serde_json::json!([0.8218, 0.8705]));
    assert!(v["best"].as_f64().unwrap() < 0.875);
    let v = json(&ionbound(&["beta", "alpha-n", "--n", "2", "--seeds", "4"]));
    assert!(v["best"].as_f64().unwrap() <= 0.5 + 1e-6);
}

#[test]
fn reproduce_with_c_gn_override() {
    let o = ionbound(&["reproduce", "--c-gn", "0.279271", "--samples", "10", "--format", "json"]);
    let v = json(&o);
    assert!((v["constants"]["d_const"].as_f64().unwrap() - 0.43846).abs() < 1e-5);
    let deltas: Vec<f64> =
        v["table_deltas"].as_array().unwrap().iter().map(|d| d.as_str().unwrap().parse().unwrap()).collect();
    assert_eq!(deltas.len(), 5);
    assert!(deltas.iter().all(|d| *d < 0.0));
    // exit status follows the checks
    let failed = v["checks"].as_array().unwrap().iter().any(|c| c["status"] == "FAIL");
    assert_eq!(o.status.code(), Some(if failed { 1 } else { 0 }));
    assert_eq!(v["passed"], !failed);
}

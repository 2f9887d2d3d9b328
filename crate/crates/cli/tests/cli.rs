use std::process::{Command, Output};

fn ngi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ngi"))
        .args(args)
        .env("NGI_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn eval_prints_a_report() {
    let o = ngi(&[
        "eval", "--preset", "sym-pa-1", "--lambda", "0.4", "--tau", "0.9",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in [
        "p_success",
        "f_parity",
        "delta_phi",
        "delta_phi_min",
        "merit",
        "weighted_merit",
    ] {
        assert!(v[key].is_f64(), "{key}");
    }
    let dphi = v["delta_phi"].as_f64().unwrap();
    let bound = v["delta_phi_min"].as_f64().unwrap();
    assert!(dphi >= bound - 1e-9);
}

#[test]
fn eval_with_mixed_photons() {
    let o = ngi(&[
        "eval",
        "--photons",
        "1,2,1,2",
        "--tau",
        "0.3,0.4",
        "--lambda",
        "0.3",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn sweep_single_point_csv() {
    let o = ngi(&[
        "sweep",
        "--quantity",
        "sensitivity",
        "--preset",
        "tmsv",
        "--lambda",
        "0.5",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("lambda,tau1,tau2,phi,value,status"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[3], "0.01");
    assert!((row[4].parse::<f64>().unwrap() - 0.75).abs() < 1e-3);
    assert_eq!(row[5], "ok");
}

#[test]
fn sweep_from_config_with_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# probability heatmap\nquantity = probability\npreset = asym-ps-1\nlambda = 0.05:0.95:19\ntau = 0.5\n",
    )
    .unwrap();
    let out = dir.path().join("p.json");
    let o = ngi(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--tau",
        "0.05:0.95:19",
        "--format",
        "json",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 361);
}

#[test]
fn usage_errors_name_the_key() {
    let o = ngi(&[
        "sweep",
        "--quantity",
        "qfi",
        "--preset",
        "tmsv",
        "--lambda",
        "1.2",
    ]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("lambda must be in [0,1)"));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "quantity = qfi\nsqueezing = 0.3\n").unwrap();
    let o = ngi(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("squeezing"));

    let o = ngi(&[
        "sweep",
        "--quantity",
        "merit",
        "--preset",
        "asym-pc-1-2",
        "--lambda",
        "0.3",
        "--tau",
        "0.3",
    ]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("--photons"));
}

#[test]
fn unwritable_output_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nope").join("out.csv");
    let o = ngi(&[
        "sweep",
        "--quantity",
        "qfi",
        "--preset",
        "tmsv",
        "--lambda",
        "0.3",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains(path.to_str().unwrap()));
}

#[test]
fn partial_sweeps_need_opt_in() {
    let args = [
        "sweep",
        "--quantity",
        "sensitivity",
        "--preset",
        "tmsv",
        "--lambda",
        "0.5",
        "--phi",
        "0:0.1:2",
    ];
    let o = ngi(&args);
    assert!(!o.status.success());
    assert!(stdout(&o).contains(",,stationary"));
    let mut with = args.to_vec();
    with.push("--allow-partial");
    assert!(ngi(&with).status.success());
}

#[test]
fn figure_listing_and_curves() {
    let o = ngi(&["figure", "--list"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.starts_with("fig2a\t")));
    assert!(out.lines().any(|l| l.starts_with("fig11c\t")));
    let o = ngi(&["figure", "fig11a", "--curves"]);
    assert_eq!(stdout(&o).lines().count(), 6);
    let o = ngi(&["figure", "fig11a"]);
    assert!(!o.status.success());
}

#[test]
fn figure_curve_to_directory() {
    let dir = tempfile::tempdir().unwrap();
    let o = ngi(&[
        "figure",
        "fig11b",
        "--curve",
        "sym-pa-1",
        "--output-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.path().join("fig11b-sym-pa-1.csv")).unwrap();
    assert_eq!(text.lines().count(), 1 + 99);
}

//! End-to-end tests of the `oscillodx` binary: argument handling, file
//! outputs, manifests, reproducibility, and exit codes.

use std::path::Path;
use std::process::{Command, Output};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

const BIN: &str = env!("CARGO_BIN_EXE_oscillodx");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .output()
        .expect("binary should spawn")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn json_file(path: &Path) -> serde_json::Value {
    let text = std::fs::read_to_string(path).unwrap();
    serde_json::from_str(&text).unwrap()
}

/// Sinusoid of amplitude `amp` over unit Gaussian noise, written as a CSV
/// record; kurtosis is tunable via `amp` (k → −1.5/(1 + 2/amp²)²).
fn write_tone_csv(path: &Path, amp: f64, n: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut text = String::from("# synthetic tone for CLI tests\ntime,x\n");
    for i in 0..n {
        let noise: f64 = StandardNormal.sample(&mut rng);
        let v = amp * (0.37 * i as f64).sin() + noise;
        text.push_str(&format!("{},{}\n", i as f64 * 0.1, v));
    }
    std::fs::write(path, text).unwrap();
}

#[test]
fn simulate_writes_csv_and_manifest_reproducibly() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a.csv");
    let out_b = dir.path().join("b.csv");
    let out_c = dir.path().join("c.csv");

    for (out, stream) in [(&out_a, "0"), (&out_b, "0"), (&out_c, "1")] {
        let res = run(&[
            "simulate",
            "--model",
            "weakly-damped",
            "--duration",
            "50",
            "--burn-in",
            "5",
            "--seed",
            "3",
            "--stream",
            stream,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(res.status.success(), "{}", stderr(&res));
    }

    let a = std::fs::read(&out_a).unwrap();
    assert_eq!(a, std::fs::read(&out_b).unwrap(), "same (seed, stream) must match");
    assert_ne!(a, std::fs::read(&out_c).unwrap(), "different stream must differ");

    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("time,x,y\n"), "header: {}", &text[..20]);

    let manifest = json_file(&dir.path().join("a.csv.manifest.json"));
    assert_eq!(manifest["schema"], "run-manifest/v1");
    assert_eq!(manifest["tool"], "oscillodx");
    assert_eq!(manifest["parameters"]["model"]["model"], "weakly_damped");
    assert_eq!(manifest["parameters"]["sim"]["seed"], 3);
    assert_eq!(
        manifest["outputs"][0].as_str().unwrap(),
        out_a.to_str().unwrap()
    );
}

#[test]
fn diagnose_classifies_a_simulated_driven_record() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("forced.csv");
    let report_path = dir.path().join("report.json");

    // The driven mode relaxes in ~1 s, so 2,000 s already pins its kurtosis
    // tightly (unlike the slow mechanisms, which need much longer records).
    let sim = run(&[
        "simulate",
        "--model",
        "forced",
        "--duration",
        "2000",
        "--seed",
        "11",
        "--out",
        data.to_str().unwrap(),
    ]);
    assert!(sim.status.success(), "{}", stderr(&sim));

    let diag = run(&[
        "diagnose",
        data.to_str().unwrap(),
        "--channel",
        "x",
        "--out",
        report_path.to_str().unwrap(),
    ]);
    assert!(diag.status.success(), "{}", stderr(&diag));
    assert!(stdout(&diag).contains("forced"), "{}", stdout(&diag));

    let report = json_file(&report_path);
    assert_eq!(report["schema"], "diagnosis-report/v1");
    assert_eq!(report["verdict"], "forced");
    assert_eq!(report["channel"], "x");
    let k = report["excess_kurtosis"].as_f64().unwrap();
    assert!((-1.6..=-1.3).contains(&k), "k = {k}");

    // The manifest records the input digest so the run can be audited.
    let manifest = json_file(&dir.path().join("report.json.manifest.json"));
    assert_eq!(
        manifest["inputs"][0]["sha256"].as_str().unwrap().len(),
        64
    );
}

#[test]
fn diagnose_prints_json_to_stdout_without_out_flag() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("tone.csv");
    // Strong tone: decisively non-Gaussian, resolution-limited → forced.
    write_tone_csv(&data, 8.0, 4000, 5);

    let res = run(&["diagnose", data.to_str().unwrap()]);
    assert!(res.status.success(), "{}", stderr(&res));
    let report: serde_json::Value = serde_json::from_str(&stdout(&res)).unwrap();
    assert_eq!(report["schema"], "diagnosis-report/v1");
    assert_eq!(report["verdict"], "forced");
    // Nothing else may pollute the machine-readable stream.
    assert!(stdout(&res).trim_start().starts_with('{'));
}

#[test]
fn diagnose_exits_ten_when_inconclusive_but_still_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("edge.csv");
    let report_path = dir.path().join("report.json");
    // Amplitude tuned so the kurtosis sits at the ±0.45 gate: −1.5/(1+2/a²)²
    // = −0.45 at a² = 2/0.826 ≈ 2.42; the bootstrap interval on 2,000
    // samples then straddles the boundary.
    write_tone_csv(&data, 1.556, 2000, 17);

    let res = run(&[
        "diagnose",
        data.to_str().unwrap(),
        "--out",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(10), "{}\n{}", stdout(&res), stderr(&res));
    let report = json_file(&report_path);
    assert_eq!(report["verdict"], "inconclusive");
    let notes = report["notes"].as_array().unwrap();
    assert!(
        notes.iter().any(|n| n.as_str().unwrap().contains("straddles")),
        "{notes:?}"
    );
}

#[test]
fn locate_ranks_channels_by_signature_strength() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("multi.csv");
    // Three channels sharing a timebase, with the tone strongest in "near".
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut text = String::from("time,far,near,mid\n");
    for i in 0..4000 {
        let t = i as f64 * 0.1;
        let s = (0.37 * i as f64).sin();
        let mut noise = || -> f64 { StandardNormal.sample(&mut rng) };
        text.push_str(&format!(
            "{t},{},{},{}\n",
            0.3 * s + noise(),
            8.0 * s + noise(),
            2.0 * s + noise()
        ));
    }
    std::fs::write(&data, text).unwrap();

    let out = dir.path().join("rank.json");
    let res = run(&["locate", data.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(res.status.success(), "{}", stderr(&res));

    let ranking = json_file(&out);
    assert_eq!(ranking["schema"], "source-ranking/v1");
    assert_eq!(ranking["informative"], true);
    let order: Vec<&str> = ranking["scores"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["label"].as_str().unwrap())
        .collect();
    assert_eq!(order, ["near", "mid", "far"]);
    // The human summary lists ranks in order.
    let text = stdout(&res);
    assert!(text.contains("1. near"), "{text}");
}

#[test]
fn psd_writes_spectrum_with_chosen_segment_length() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("tone.csv");
    write_tone_csv(&data, 4.0, 4096, 29);

    let out = dir.path().join("psd.csv");
    let res = run(&[
        "psd",
        data.to_str().unwrap(),
        "--segment-len",
        "1024",
        "--taper",
        "rectangular",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "{}", stderr(&res));

    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    let meta = lines.next().unwrap();
    assert!(meta.starts_with('#') && meta.contains("segments="), "{meta}");
    assert_eq!(lines.next().unwrap(), "freq_hz,psd");
    // 1024-sample rectangular segments → 513 one-sided bins.
    assert_eq!(lines.count(), 513);

    let manifest = json_file(&dir.path().join("psd.csv.manifest.json"));
    assert_eq!(manifest["parameters"]["segment_len"], 1024);
    assert_eq!(manifest["parameters"]["taper"], "rectangular");
}

#[test]
fn kurtosis_point_and_moving_modes() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("tone.csv");
    write_tone_csv(&data, 8.0, 4000, 31);

    // Point mode → JSON on stdout.
    let res = run(&["kurtosis", data.to_str().unwrap()]);
    assert!(res.status.success(), "{}", stderr(&res));
    let report: serde_json::Value = serde_json::from_str(&stdout(&res)).unwrap();
    assert_eq!(report["schema"], "kurtosis-report/v1");
    let k = report["excess_kurtosis"].as_f64().unwrap();
    assert!((-1.6..=-1.2).contains(&k), "k = {k}");

    // Moving mode → CSV trace file.
    let out = dir.path().join("trace.csv");
    let res = run(&[
        "kurtosis",
        data.to_str().unwrap(),
        "--moving",
        "40",
        "--hop",
        "10",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "{}", stderr(&res));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("time,excess_kurtosis"));
    // 4000 samples at 0.1 s: 400 s of data, 40 s windows, 10 s hop → 37.
    assert_eq!(text.lines().count(), 2 + 37);

    // Moving mode requires --out; --hop requires --moving.
    let res = run(&["kurtosis", data.to_str().unwrap(), "--moving", "40"]);
    assert_eq!(res.status.code(), Some(3), "{}", stderr(&res));
    let res = run(&["kurtosis", data.to_str().unwrap(), "--hop", "10"]);
    assert_eq!(res.status.code(), Some(3), "{}", stderr(&res));
}

#[test]
fn montecarlo_reports_interval_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a.json");
    let out_b = dir.path().join("b.json");
    for out in [&out_a, &out_b] {
        let res = run(&[
            "montecarlo",
            "--model",
            "forced",
            "--duration",
            "200",
            "--burn-in",
            "20",
            "--runs",
            "6",
            "--seed",
            "2",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(res.status.success(), "{}", stderr(&res));
    }
    let a = json_file(&out_a);
    assert_eq!(a, json_file(&out_b));
    assert_eq!(a["schema"], "montecarlo-report/v1");
    assert_eq!(a["values"].as_array().unwrap().len(), 6);
    assert!(a["lower"].as_f64().unwrap() <= a["upper"].as_f64().unwrap());
}

#[test]
fn window_and_noise_flags_shape_the_analysis() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("tone.csv");
    write_tone_csv(&data, 8.0, 4000, 37);

    // Windowing trims the analyzed span.
    let res = run(&[
        "kurtosis",
        data.to_str().unwrap(),
        "--window",
        "100:250",
    ]);
    assert!(res.status.success(), "{}", stderr(&res));
    let report: serde_json::Value = serde_json::from_str(&stdout(&res)).unwrap();
    assert_eq!(report["samples"], 1501);

    // Noise injection is deterministic in the seed.
    let noisy = |seed: &str| {
        let res = run(&[
            "kurtosis",
            data.to_str().unwrap(),
            "--noise-std",
            "2.0",
            "--seed",
            seed,
        ]);
        assert!(res.status.success(), "{}", stderr(&res));
        let v: serde_json::Value = serde_json::from_str(&stdout(&res)).unwrap();
        v["excess_kurtosis"].as_f64().unwrap()
    };
    let clean: serde_json::Value =
        serde_json::from_str(&stdout(&run(&["kurtosis", data.to_str().unwrap()]))).unwrap();
    let k_clean = clean["excess_kurtosis"].as_f64().unwrap();
    assert_eq!(noisy("1"), noisy("1"));
    assert_ne!(noisy("1"), noisy("2"));
    // Heavy sensor noise pulls the moment ratio toward Gaussian.
    assert!(noisy("1") > k_clean, "{} vs {k_clean}", noisy("1"));
}

#[test]
fn stdout_pipe_closing_early_is_not_an_error() {
    use std::process::Stdio;
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("tone.csv");
    write_tone_csv(&data, 8.0, 4000, 43);

    // `oscillodx ... | head` closes the pipe after the first lines; the
    // report writer must treat that as "done", not crash.
    let mut child = Command::new(BIN)
        .args(["diagnose", data.to_str().unwrap()])
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    drop(child.stdout.take()); // reader goes away before the report prints
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success(), "status {:?}", out.status);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(!err.contains("panicked"), "{err}");
}

#[test]
fn parse_failures_exit_two_and_precondition_failures_exit_three() {
    let dir = tempfile::tempdir().unwrap();

    // Missing input file.
    let res = run(&["diagnose", dir.path().join("nope.csv").to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2), "{}", stderr(&res));

    // Malformed header.
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "zeit,x\n0,1\n0.1,2\n").unwrap();
    let res = run(&["diagnose", bad.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2), "{}", stderr(&res));
    assert!(stderr(&res).contains("time"), "{}", stderr(&res));

    // Irregular timebase.
    let jitter = dir.path().join("jitter.csv");
    std::fs::write(&jitter, "time,x\n0,1\n0.1,2\n0.25,3\n0.3,4\n").unwrap();
    let res = run(&["diagnose", jitter.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2), "{}", stderr(&res));

    // Unknown channel is a precondition failure, not a parse failure.
    let data = dir.path().join("ok.csv");
    write_tone_csv(&data, 8.0, 2000, 41);
    let res = run(&["diagnose", data.to_str().unwrap(), "--channel", "ghost"]);
    assert_eq!(res.status.code(), Some(3), "{}", stderr(&res));

    // Invalid flag combinations are rejected by clap with exit 2.
    let res = run(&["simulate", "--model", "nonsense", "--out", "x.csv"]);
    assert_eq!(res.status.code(), Some(2));

    // Inapplicable model parameters are precondition failures.
    let res = run(&[
        "simulate",
        "--model",
        "limit-cycle",
        "--damping",
        "0.5",
        "--out",
        dir.path().join("x.csv").to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(3), "{}", stderr(&res));
}

//! End-to-end tests of the command-line interface, run against the built
//! binary the way a user would invoke it.

use std::path::{Path, PathBuf};
use std::process::Command;

fn spikecl() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spikecl"))
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("spikecl_cli_{tag}_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_tiny_config(dir: &Path) -> PathBuf {
    let path = dir.join("tiny.cfg");
    std::fs::write(
        &path,
        format!(
            "[dataset]\nsource = synthetic\nkind = cbf\nn = 6\nt_len = 48\nnoise = 0.05\n\
             [encoder]\nm = 3\ncluster_size = 8\n\
             [topology]\nhidden = 10\n\
             [optimizer]\nepochs = 2\nbatch = 8\n\
             [run]\nfolds = 2\neval_every = 1\nout_dir = {}\njobs = 2\n",
            dir.join("out").display()
        ),
    )
    .unwrap();
    path
}

#[test]
fn train_writes_artifacts_and_is_deterministic() {
    let dir = temp_dir("train");
    let config = write_tiny_config(&dir);
    let out = spikecl()
        .args(["train", "--config", config.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out_dir = dir.join("out");
    for artifact in ["results.csv", "summary.json", "model.json", "loss_curve_fold0.csv"] {
        assert!(out_dir.join(artifact).exists(), "missing {artifact}");
    }
    let results = std::fs::read_to_string(out_dir.join("results.csv")).unwrap();
    assert!(results.starts_with(
        "fold,seed,mode,auc,auc_ci_lo,auc_ci_hi,afp,sparsity,end_epoch,seconds"
    ));
    assert_eq!(results.lines().count(), 3); // header + 2 folds

    // Re-run and compare the scientific fields of the summaries.
    let summary1: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("summary.json")).unwrap())
            .unwrap();
    let out2 = spikecl()
        .args(["train", "--config", config.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out2.status.success());
    let summary2: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary1["auc"], summary2["auc"]);
    assert_eq!(summary1["loss_curve"], summary2["loss_curve"]);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn set_override_is_applied_and_recorded() {
    let dir = temp_dir("override");
    let config = write_tiny_config(&dir);
    let out = spikecl()
        .args([
            "train",
            "--config",
            config.to_str().unwrap(),
            "--set",
            "curriculum.mode=d2a",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("out/summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["mode"], "D2A");
    assert_eq!(summary["config"]["curriculum.mode"], "d2a");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn missing_dataset_file_names_the_path_and_exits_2() {
    let dir = temp_dir("missing");
    let config = dir.join("missing.cfg");
    std::fs::write(
        &config,
        "[dataset]\nsource = ucr\npath = /no/such/file.tsv\n",
    )
    .unwrap();
    let out = spikecl()
        .args(["train", "--config", config.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("/no/such/file.tsv"), "{stderr}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn invalid_config_key_exits_1_with_field_message() {
    let dir = temp_dir("badkey");
    let config = write_tiny_config(&dir);
    let out = spikecl()
        .args([
            "train",
            "--config",
            config.to_str().unwrap(),
            "--set",
            "curriculum.sp=1.5",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("curriculum.sp"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn unknown_flags_are_hard_usage_errors() {
    let out = spikecl().args(["train", "--bogus-flag"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = spikecl().args(["no-such-command"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_documents_every_subcommand() {
    let out = spikecl().arg("--help").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    for sub in [
        "train",
        "evaluate",
        "encode",
        "gen-data",
        "inject-noise",
        "check-theorems",
        "compare-orders",
    ] {
        assert!(text.contains(sub), "help missing {sub}");
    }
    // Subcommand help lists its flags.
    let out = spikecl().args(["train", "--help"]).output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    for flag in ["--config", "--set", "--out", "--jobs", "--dump-schedules"] {
        assert!(text.contains(flag), "train help missing {flag}");
    }
}

#[test]
fn gen_data_and_inject_noise_round_trip() {
    let dir = temp_dir("gendata");
    let tsv = dir.join("data.tsv");
    let out = spikecl()
        .args([
            "gen-data", "--kind", "two-class-freq", "--n", "5", "--t-len", "16",
            "--seed", "9", "--out", tsv.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text1 = std::fs::read_to_string(&tsv).unwrap();
    assert_eq!(text1.lines().count(), 10);

    // Determinism across invocations.
    let tsv2 = dir.join("data2.tsv");
    spikecl()
        .args([
            "gen-data", "--kind", "two-class-freq", "--n", "5", "--t-len", "16",
            "--seed", "9", "--out", tsv2.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(text1, std::fs::read_to_string(&tsv2).unwrap());

    let noisy = dir.join("noisy.tsv");
    let out = spikecl()
        .args([
            "inject-noise", "--data", tsv.to_str().unwrap(), "--out", noisy.to_str().unwrap(),
            "--fraction", "0.2", "--snr-db", "10", "--seed", "4",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("perturbed 2/10"), "{stdout}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn check_theorems_passes_and_prints_the_order_fixture() {
    let out = spikecl()
        .args(["check-theorems", "--seeds", "50"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("O_0=(1,1) O_1=(0,1)"), "{text}");
    assert!(!text.contains("FAIL"), "{text}");
}

#[test]
fn encode_writes_tensors_masks_and_partition() {
    let dir = temp_dir("encode");
    let config = write_tiny_config(&dir);
    let out = spikecl()
        .args(["encode", "--config", config.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out_dir = dir.join("out");
    // Partition file lists M+1 boundaries.
    let partition = std::fs::read_to_string(out_dir.join("partition.txt")).unwrap();
    assert_eq!(partition.lines().count(), 4); // m = 3
    assert!(out_dir.join("sample_0000.spikes").exists());
    assert!(out_dir.join("sample_0017.spikes").exists());
    assert!(out_dir.join("sample_0000.mask").exists());

    // Deterministic across runs.
    let first = std::fs::read(out_dir.join("sample_0003.spikes")).unwrap();
    spikecl()
        .args(["encode", "--config", config.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(first, std::fs::read(out_dir.join("sample_0003.spikes")).unwrap());
    std::fs::remove_dir_all(&dir).ok();
}

/// Single-interval regional encoding produces byte-identical spike and
/// drive-mask files to population encoding.
#[test]
fn single_interval_regional_encode_matches_population() {
    let dir = temp_dir("encsame");
    let base = format!(
        "[dataset]\nsource = synthetic\nkind = cbf\nn = 4\nt_len = 32\nnoise = 0.05\n\
         [encoder]\nm = 1\ncluster_size = 12\n[topology]\nhidden = 8\n"
    );
    let regional_cfg = dir.join("regional.cfg");
    std::fs::write(
        &regional_cfg,
        format!("{base}[run]\nout_dir = {}\n", dir.join("regional").display()),
    )
    .unwrap();
    let population_cfg = dir.join("population.cfg");
    std::fs::write(
        &population_cfg,
        format!(
            "{base}[run]\nout_dir = {}\n",
            dir.join("population").display()
        ),
    )
    .unwrap();
    assert!(spikecl()
        .args(["encode", "--config", regional_cfg.to_str().unwrap()])
        .output()
        .unwrap()
        .status
        .success());
    assert!(spikecl()
        .args([
            "encode",
            "--config",
            population_cfg.to_str().unwrap(),
            "--set",
            "encoder.mode=population",
        ])
        .output()
        .unwrap()
        .status
        .success());
    for i in 0..12 {
        let a = std::fs::read(dir.join(format!("regional/sample_{i:04}.spikes"))).unwrap();
        let b = std::fs::read(dir.join(format!("population/sample_{i:04}.spikes"))).unwrap();
        assert_eq!(a, b, "sample {i} spike files differ");
        let am = std::fs::read(dir.join(format!("regional/sample_{i:04}.mask"))).unwrap();
        let bm = std::fs::read(dir.join(format!("population/sample_{i:04}.mask"))).unwrap();
        assert_eq!(am, bm, "sample {i} drive masks differ");
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn compare_orders_writes_reports() {
    let dir = temp_dir("compare");
    let config = write_tiny_config(&dir);
    let out = spikecl()
        .args([
            "compare-orders",
            "--config",
            config.to_str().unwrap(),
            "--modes",
            "a2d,random",
            "--seeds",
            "1,2",
            "--set",
            "run.folds=1",
            "--set",
            "optimizer.epochs=1",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.join("out/compare_orders.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(report["spiking"]["a2d"].as_array().unwrap().len(), 2);
    assert_eq!(report["spiking"]["random"].as_array().unwrap().len(), 2);
    // Baseline rows for the loss-ordered curricula are present.
    assert!(report["baseline"]["e2h"].as_array().unwrap().len() == 2);
    let csv = std::fs::read_to_string(dir.join("out/compare_orders.csv")).unwrap();
    assert!(csv.starts_with("model,mode,seed,auc"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn evaluate_reads_a_trained_checkpoint() {
    let dir = temp_dir("eval");
    let config = write_tiny_config(&dir);
    assert!(spikecl()
        .args(["train", "--config", config.to_str().unwrap()])
        .output()
        .unwrap()
        .status
        .success());
    let model = dir.join("out/model.json");
    let out = spikecl()
        .args([
            "evaluate",
            "--config",
            config.to_str().unwrap(),
            "--model",
            model.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let eval: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("out/evaluation.json")).unwrap())
            .unwrap();
    assert_eq!(eval["samples"], 18);
    assert!(eval["auc"].is_number());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn out_dir_env_var_overrides_config() {
    let dir = temp_dir("envvar");
    let config = write_tiny_config(&dir);
    let env_out = dir.join("env_out");
    let out = spikecl()
        .args(["encode", "--config", config.to_str().unwrap()])
        .env("SPIKECL_OUT_DIR", env_out.to_str().unwrap())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(env_out.join("partition.txt").exists());
    std::fs::remove_dir_all(&dir).ok();
}

//! End-to-end tests of the `satqfl` binary: row counts, exit codes, stream
//! discipline, and manifest reproduction, all on small fast configurations.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn satqfl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_satqfl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Data rows (excluding the header) of a CSV file.
fn csv_rows(dir: &Path, name: &str) -> Vec<String> {
    read(dir, name).lines().skip(1).map(str::to_string).collect()
}

/// Small fast training configuration shared by the protocol-level tests.
const FAST: &[&str] = &[
    "--blobs_per_class", "12",
    "--rounds", "2",
    "--n_sats", "3",
    "--max_fun", "5",
    "--qubits", "2",
];

// --- orbits -----------------------------------------------------------------

#[test]
fn orbits_samples_every_satellite_at_every_epoch() {
    let dir = tempfile::tempdir().unwrap();
    let period = satqfl::orbital::orbital_period_s(satqfl::constants::R_EARTH_KM + 500.0);
    let quarter = period / 4.0;
    let out = satqfl(&[
        "--out", dir.path().to_str().unwrap(),
        "--n_sats", "5",
        "orbits",
        "--duration", &period.to_string(),
        "--step", &quarter.to_string(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    // 5 satellites × 5 epochs (0, T/4, …, T inclusive).
    let ephemeris = csv_rows(dir.path(), "ephemeris.csv");
    assert_eq!(ephemeris.len(), 25);
    // C(5,2) = 10 pairs × 5 epochs.
    let distances = csv_rows(dir.path(), "distances.csv");
    assert_eq!(distances.len(), 50);
    // Manifest is present and carries the resolved satellite count.
    assert!(read(dir.path(), "manifest.txt").contains("n_sats=5"));
}

#[test]
fn orbits_zero_duration_is_a_single_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let out = satqfl(&[
        "--out", dir.path().to_str().unwrap(),
        "orbits", "--duration", "0", "--step", "60",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(csv_rows(dir.path(), "ephemeris.csv").len(), 5); // default n_sats
}

#[test]
fn orbits_rejects_a_nonpositive_step() {
    let dir = tempfile::tempdir().unwrap();
    let out = satqfl(&[
        "--out", dir.path().to_str().unwrap(),
        "orbits", "--duration", "100", "--step", "0",
    ]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).is_empty(), "usage errors must keep stdout clean");
    assert!(stderr(&out).contains("--step"));
    assert!(!dir.path().join("manifest.txt").exists(), "no artifacts on usage errors");
}

// --- config loading ----------------------------------------------------------

#[test]
fn missing_config_file_fails_with_config_exit_code() {
    let out = satqfl(&["--config", "/no/such/file.cfg", "train"]);
    assert_eq!(code(&out), 4);
    assert!(stdout(&out).is_empty());
    assert!(stderr(&out).contains("/no/such/file.cfg"));
}

#[test]
fn unknown_config_key_is_named_in_the_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "flux_capacitance=11\n").unwrap();
    let out = satqfl(&["--config", cfg.to_str().unwrap(), "train"]);
    assert_eq!(code(&out), 4);
    assert!(stderr(&out).contains("flux_capacitance"));
}

#[test]
fn bad_flag_value_is_a_config_error() {
    let out = satqfl(&["--rounds", "many", "train"]);
    assert_eq!(code(&out), 4);
    assert!(stderr(&out).contains("rounds"));
}

// --- linkbudget ---------------------------------------------------------------

#[test]
fn linkbudget_report_prints_every_figure() {
    let dir = tempfile::tempdir().unwrap();
    let out = satqfl(&[
        "--out", dir.path().to_str().unwrap(),
        "linkbudget", "report", "--distance", "8085.735",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for field in ["fspl_db=", "eirp_dbw=", "cn0_dbhz=", "ebn0_db=", "margin_db="] {
        assert!(text.contains(field), "missing {field} in: {text}");
    }
    let margin: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("margin_db="))
        .unwrap()
        .parse()
        .unwrap();
    assert!((margin - 52.15).abs() < 0.01, "margin {margin}");
}

#[test]
fn linkbudget_report_honors_a_power_override() {
    let dir = tempfile::tempdir().unwrap();
    let out = satqfl(&[
        "--out", dir.path().to_str().unwrap(),
        "linkbudget", "report", "--distance", "8085.735", "--tx_power_dbw", "16",
    ]);
    assert_eq!(code(&out), 0);
    let margin: f64 = stdout(&out)
        .lines()
        .find_map(|l| l.strip_prefix("margin_db="))
        .unwrap()
        .parse()
        .unwrap();
    // One dB below the 17 dBW preset figure.
    assert!((margin - 51.15).abs() < 0.01, "margin {margin}");
}

#[test]
fn linkbudget_grid_emits_one_row_per_cell() {
    let dir = tempfile::tempdir().unwrap();
    let out = satqfl(&[
        "--out", dir.path().to_str().unwrap(),
        "linkbudget", "grid",
        "--power-range", "10:20:10",
        "--distance-range", "1000:10000:10",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(csv_rows(dir.path(), "linkbudget_grid.csv").len(), 100);
}

#[test]
fn linkbudget_sweep_margins_fall_with_bitrate() {
    let dir = tempfile::tempdir().unwrap();
    let out = satqfl(&[
        "--out", dir.path().to_str().unwrap(),
        "linkbudget", "sweep",
        "--distance", "2000",
        "--bitrates", "1,10,100",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let margins: Vec<f64> = csv_rows(dir.path(), "linkbudget_sweep.csv")
        .iter()
        .map(|row| row.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(margins.len(), 3);
    assert!((margins[0] - margins[1] - 10.0).abs() < 1e-9);
    assert!((margins[1] - margins[2] - 10.0).abs() < 1e-9);
}

#[test]
fn linkbudget_without_a_mode_is_a_usage_error() {
    let out = satqfl(&["linkbudget"]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).is_empty());
}

#[test]
fn linkbudget_bad_range_is_a_usage_error() {
    let out = satqfl(&[
        "linkbudget", "grid",
        "--power-range", "10:20",
        "--distance-range", "1000:10000:10",
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("--power-range"));
}

// --- train --------------------------------------------------------------------

#[test]
fn train_metrics_and_event_shapes_per_mode() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["--out", dir.path().to_str().unwrap()];
    args.extend_from_slice(FAST);
    args.push("train");
    let out = satqfl(&args);
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    // (n + 1) rows per round; n events per round in ring mode.
    assert_eq!(csv_rows(dir.path(), "train_metrics.csv").len(), (3 + 1) * 2);
    assert_eq!(csv_rows(dir.path(), "train_events.csv").len(), 3 * 2);

    let server_dir = tempfile::tempdir().unwrap();
    let mut args = vec!["--out", server_dir.path().to_str().unwrap(), "--mode", "server"];
    args.extend_from_slice(FAST);
    args.push("train");
    let out = satqfl(&args);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    // Uplink + downlink per satellite per round: 2nR.
    assert_eq!(csv_rows(server_dir.path(), "train_events.csv").len(), 2 * 3 * 2);
}

#[test]
fn train_missing_statlog_files_is_a_data_error_with_a_hint() {
    let out = satqfl(&[
        "--dataset", "statlog",
        "--statlog_train", "/no/such/sat.trn",
        "--statlog_test", "/no/such/sat.tst",
        "train",
    ]);
    assert_eq!(code(&out), 3);
    let text = stderr(&out);
    assert!(text.contains("/no/such/sat.trn"));
    assert!(text.contains("statlog_train"), "hint names the config key: {text}");
}

// --- compare -------------------------------------------------------------------

#[test]
fn compare_merges_both_modes_over_identical_shards() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["--out", dir.path().to_str().unwrap()];
    args.extend_from_slice(FAST);
    args.push("compare");
    let out = satqfl(&args);
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    let metrics = csv_rows(dir.path(), "compare_metrics.csv");
    let orb_rows: Vec<&String> = metrics.iter().filter(|r| r.starts_with("orb,")).collect();
    let server_rows: Vec<&String> =
        metrics.iter().filter(|r| r.starts_with("server,")).collect();
    assert_eq!(orb_rows.len(), (3 + 1) * 2);
    assert_eq!(server_rows.len(), (3 + 1) * 2);
    assert_eq!(metrics.len(), orb_rows.len() + server_rows.len(), "exactly two modes");

    // Each mode carries one round-level server evaluation per round.
    for mode in ["orb", "server"] {
        let evals = metrics
            .iter()
            .filter(|r| r.starts_with(&format!("{mode},")) && r.contains(",server,"))
            .count();
        assert_eq!(evals, 2, "{mode} server rows");
    }

    let events = csv_rows(dir.path(), "compare_events.csv");
    assert_eq!(events.iter().filter(|r| r.starts_with("orb,")).count(), 3 * 2);
    assert_eq!(events.iter().filter(|r| r.starts_with("server,")).count(), 2 * 3 * 2);

    // Both protocol runs logged the same shard fingerprint.
    let log = stderr(&out);
    let hashes: Vec<&str> = log
        .lines()
        .filter_map(|l| l.split("shards_hash=").nth(1))
        .collect();
    assert_eq!(hashes.len(), 2);
    assert_eq!(hashes[0], hashes[1]);
}

// --- manifest reproduction -------------------------------------------------------

#[test]
fn rerunning_from_a_manifest_reproduces_bytes() {
    let first = tempfile::tempdir().unwrap();
    let mut args = vec!["--out", first.path().to_str().unwrap(), "--seed", "7"];
    args.extend_from_slice(FAST);
    args.push("train");
    let out = satqfl(&args);
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    let manifest_path = first.path().join("manifest.txt");
    let second = tempfile::tempdir().unwrap();
    let out = satqfl(&[
        "--config", manifest_path.to_str().unwrap(),
        "--out", second.path().to_str().unwrap(),
        "train",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    for name in ["manifest.txt", "train_metrics.csv", "train_events.csv"] {
        assert_eq!(read(first.path(), name), read(second.path(), name), "{name}");
    }
}

#[test]
fn same_seed_is_byte_identical_and_different_seed_is_not() {
    let dirs: Vec<tempfile::TempDir> =
        (0..3).map(|_| tempfile::tempdir().unwrap()).collect();
    for (dir, seed) in dirs.iter().zip(["5", "5", "6"]) {
        let mut args = vec!["--out", dir.path().to_str().unwrap(), "--seed", seed];
        args.extend_from_slice(FAST);
        args.push("train");
        let out = satqfl(&args);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    }
    let metrics: Vec<String> =
        dirs.iter().map(|d| read(d.path(), "train_metrics.csv")).collect();
    assert_eq!(metrics[0], metrics[1]);
    assert_ne!(metrics[0], metrics[2]);
}

// --- bound ---------------------------------------------------------------------

/// A complete constants file; `patch` rewrites or drops lines by key.
fn constants_text(rounds: usize) -> String {
    format!(
        "l=0\nmu=0\ndelta_schedule=0\nn_devices=0\nk_local=0\nrounds={rounds}\n\
         gamma_c=0\ntau_c=0\ndelta_c=0\nrho_loss=0\nrho=0\nepsilon_c=0\nb=0\n\
         t_horizon=0\nalpha_q=0\nsigma_q=0\nn_q=0\ntheta0_dist_sq=0\n"
    )
}

#[test]
fn bound_emits_one_row_per_round() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("constants.txt");
    fs::write(&file, constants_text(10)).unwrap();
    let out = satqfl(&[
        "--out", dir.path().to_str().unwrap(),
        "bound", "--constants", file.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rows = csv_rows(dir.path(), "bound.csv");
    assert_eq!(rows.len(), 10);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row, &format!("{},0", i + 1), "all-zero constants give a zero column");
    }
}

#[test]
fn bound_missing_key_names_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("constants.txt");
    let without_mu: String = constants_text(3)
        .lines()
        .filter(|l| !l.starts_with("mu="))
        .map(|l| format!("{l}\n"))
        .collect();
    fs::write(&file, without_mu).unwrap();
    let out = satqfl(&[
        "--out", dir.path().to_str().unwrap(),
        "bound", "--constants", file.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 4);
    assert!(stderr(&out).contains("`mu`"), "{}", stderr(&out));
}

#[test]
fn bound_negative_constant_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("constants.txt");
    fs::write(&file, constants_text(3).replace("gamma_c=0", "gamma_c=-1")).unwrap();
    let out = satqfl(&[
        "--out", dir.path().to_str().unwrap(),
        "bound", "--constants", file.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 4);
    assert!(stderr(&out).contains("gamma_c"));
}

// --- misc ----------------------------------------------------------------------

#[test]
fn help_exits_zero() {
    let out = satqfl(&["--help"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("orbits"));
}

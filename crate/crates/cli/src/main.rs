//! `satqfl` — command-line front end for the constellation co-simulator.
//!
//! Subcommands: `orbits` (ephemeris + pairwise distance CSVs), `linkbudget`
//! (single report, power×distance grid, or bitrate sweep), `train` (one
//! federated protocol), `compare` (both protocols on identical shards, merged
//! CSVs), and `bound` (per-round convergence-bound CSV).
//!
//! Configuration is layered — defaults, then a `--config key=value` file,
//! then identically-named flags — and the resolved snapshot is written to
//! `<out>/manifest.txt` before any other output, so passing that manifest
//! back via `--config` reproduces the run byte-for-byte. Informational
//! messages go to stderr; data goes to stdout or CSV files under `--out`.
//!
//! Exit codes: 0 success, 2 usage, 3 data or I/O, 4 config validation.

mod config;

use clap::{Parser, Subcommand};
use config::{CliError, DatasetKind, KeyOverrides, RunConfig};
use satqfl::constants::R_EARTH_KM;
use satqfl::dataio::{self, Dataset, LabeledSet};
use satqfl::linkbudget::{self, LinkSpec};
use satqfl::orbital;
use satqfl::protocol::{
    self, BoundConstants, Mode, NodeId, RunOutput, SimConfig, EVENTS_CSV_HEADER,
    METRICS_CSV_HEADER,
};
use satqfl::vqc::{AnsatzSpec, ClassifierSpec, FeatureMapSpec, VqcSpec};
use satqfl::cobyla::OptimizerConfig;
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

// ---------------------------------------------------------------------------
// Command line
// ---------------------------------------------------------------------------

#[derive(Debug, Parser)]
#[command(
    name = "satqfl",
    version,
    about = "Deterministic co-simulator: a LEO ring trains a variational quantum classifier",
    after_help = "Every config key can also be set in the --config file as key=value; \
                  flags take precedence over the file, which takes precedence over defaults."
)]
struct Cli {
    /// Flat key=value config file (an emitted manifest works here).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Master seed; overrides the config file's `seed`.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,
    /// Output directory for the manifest and CSV artifacts.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    out: PathBuf,
    #[command(flatten)]
    overrides: KeyOverrides,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Propagate the constellation; write ephemeris and pairwise-distance CSVs.
    Orbits {
        /// Simulated span in seconds (default: one orbital period).
        #[arg(long, value_name = "S")]
        duration: Option<f64>,
        /// Sample interval in seconds.
        #[arg(long, value_name = "S", default_value_t = 60.0)]
        step: f64,
    },
    /// Link-budget analysis for a preset link.
    Linkbudget {
        #[command(subcommand)]
        mode: LinkbudgetMode,
    },
    /// Run one federated protocol; write metrics and events CSVs.
    Train,
    /// Run both protocols on identical shards; write merged CSVs keyed by mode.
    Compare,
    /// Evaluate the convergence bound per round; write a CSV.
    Bound {
        /// Flat key=value file holding the bound constants.
        #[arg(long, value_name = "PATH")]
        constants: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum LinkbudgetMode {
    /// Print every link-budget figure at one distance to stdout.
    Report {
        /// Slant range in km.
        #[arg(long, value_name = "KM")]
        distance: f64,
        /// Link preset: l1, l2, or l3.
        #[arg(long, value_name = "NAME", default_value = "l3")]
        link: String,
        /// Override the preset's transmit power.
        #[arg(long = "tx_power_dbw", value_name = "DBW")]
        tx_power_dbw: Option<f64>,
    },
    /// Write a margin CSV over a transmit-power × distance grid.
    Grid {
        /// Power axis as start:end:count in dBW.
        #[arg(long = "power-range", value_name = "S:E:N")]
        power_range: String,
        /// Distance axis as start:end:count in km.
        #[arg(long = "distance-range", value_name = "S:E:N")]
        distance_range: String,
        /// Link preset: l1, l2, or l3.
        #[arg(long, value_name = "NAME", default_value = "l3")]
        link: String,
    },
    /// Write a margin CSV across bitrates at one distance.
    Sweep {
        /// Slant range in km.
        #[arg(long, value_name = "KM")]
        distance: f64,
        /// Comma-separated bitrates in Mbps.
        #[arg(long, value_name = "M1,M2,...")]
        bitrates: String,
        /// Link preset: l1, l2, or l3.
        #[arg(long, value_name = "NAME", default_value = "l3")]
        link: String,
        /// Override the preset's transmit power.
        #[arg(long = "tx_power_dbw", value_name = "DBW")]
        tx_power_dbw: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(cli.config.as_deref(), &cli.overrides, cli.seed)?;
    let out_dir = cli.out;
    match cli.command {
        Command::Orbits { duration, step } => cmd_orbits(&cfg, &out_dir, duration, step),
        Command::Linkbudget { mode } => cmd_linkbudget(&cfg, &out_dir, mode),
        Command::Train => cmd_train(&cfg, &out_dir),
        Command::Compare => cmd_compare(&cfg, &out_dir),
        Command::Bound { constants } => cmd_bound(&cfg, &out_dir, &constants),
    }
}

// ---------------------------------------------------------------------------
// Manifest
// ---------------------------------------------------------------------------

/// Write `<out>/manifest.txt`: reserved bookkeeping lines, then the resolved
/// config snapshot. Always written before any other artifact.
fn write_manifest(
    out_dir: &Path,
    command: &str,
    artifacts: &[(&str, &str)],
    extras: &[(String, String)],
    cfg: &RunConfig,
) -> Result<PathBuf, CliError> {
    fs::create_dir_all(out_dir)?;
    let mut text = String::from(
        "# satqfl run manifest; pass back via --config to reproduce (reserved keys are ignored)\n",
    );
    text.push_str(&format!("tool_version={}\n", env!("CARGO_PKG_VERSION")));
    text.push_str(&format!("command={command}\n"));
    for (name, file) in artifacts {
        text.push_str(&format!("artifact_{name}={file}\n"));
    }
    for (key, value) in extras {
        text.push_str(&format!("{key}={value}\n"));
    }
    text.push_str(&cfg.canonical_lines());
    let path = out_dir.join("manifest.txt");
    fs::write(&path, text)?;
    Ok(path)
}

fn write_artifact(out_dir: &Path, name: &str, content: &str) -> Result<PathBuf, CliError> {
    let path = out_dir.join(name);
    fs::write(&path, content)?;
    eprintln!("info: wrote {}", path.display());
    Ok(path)
}

// ---------------------------------------------------------------------------
// orbits
// ---------------------------------------------------------------------------

fn cmd_orbits(
    cfg: &RunConfig,
    out_dir: &Path,
    duration: Option<f64>,
    step: f64,
) -> Result<(), CliError> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(CliError::Usage(format!(
            "--step must be a positive number of seconds, got {step}"
        )));
    }
    let duration = duration
        .unwrap_or_else(|| orbital::orbital_period_s(R_EARTH_KM + cfg.altitude_km));
    if !(duration >= 0.0) || !duration.is_finite() {
        return Err(CliError::Usage(format!(
            "--duration must be a nonnegative number of seconds, got {duration}"
        )));
    }

    let orbits = orbital::build_constellation(&cfg.constellation_config())?;
    write_manifest(
        out_dir,
        "orbits",
        &[("ephemeris", "ephemeris.csv"), ("distances", "distances.csv")],
        &[
            ("arg_duration_s".into(), duration.to_string()),
            ("arg_step_s".into(), step.to_string()),
        ],
        cfg,
    )?;

    // Inclusive time grid: 0, step, …, duration (tolerating float division).
    let n_steps = (duration / step + 1e-9).floor() as usize;
    let mut states = Vec::new();
    let mut pair_rows = Vec::new();
    for k in 0..=n_steps {
        let t = k as f64 * step;
        let snapshot = orbital::propagate_constellation(&orbits, t);
        for i in 0..snapshot.len() {
            for j in (i + 1)..snapshot.len() {
                let d = orbital::distance_points(
                    &snapshot[i].position_km,
                    &snapshot[j].position_km,
                );
                pair_rows.push((t, i, j, d));
            }
        }
        states.extend(snapshot);
    }

    eprintln!(
        "info: sampled {} satellites at {} epochs over {duration} s",
        cfg.n_sats,
        n_steps + 1
    );
    write_artifact(out_dir, "ephemeris.csv", &orbital::ephemeris_csv(&states))?;
    write_artifact(out_dir, "distances.csv", &orbital::distances_csv(&pair_rows))?;
    Ok(())
}

// ---------------------------------------------------------------------------
// linkbudget
// ---------------------------------------------------------------------------

/// Preset lookup for an operational flag (usage error on a bad name, unlike
/// the config keys, which validate at resolve time).
fn flag_preset(name: &str, tx_power_dbw: Option<f64>) -> Result<LinkSpec, CliError> {
    let mut spec = LinkSpec::preset(name).ok_or_else(|| {
        CliError::Usage(format!("--link: unknown preset `{name}` (expected l1, l2, or l3)"))
    })?;
    if let Some(p) = tx_power_dbw {
        spec.tx_power_dbw = p;
    }
    Ok(spec)
}

/// Parse `start:end:count` into an inclusive linearly spaced axis.
fn parse_axis(flag: &str, text: &str) -> Result<Vec<f64>, CliError> {
    let bad = |why: &str| CliError::Usage(format!("{flag}: `{text}` — {why}"));
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(bad("expected start:end:count"));
    }
    let start: f64 = parts[0].parse().map_err(|_| bad("start is not a number"))?;
    let end: f64 = parts[1].parse().map_err(|_| bad("end is not a number"))?;
    let count: usize = parts[2].parse().map_err(|_| bad("count is not an integer"))?;
    if count == 0 {
        return Err(bad("count must be ≥ 1"));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let span = end - start;
    Ok((0..count)
        .map(|k| start + span * k as f64 / (count - 1) as f64)
        .collect())
}

fn cmd_linkbudget(cfg: &RunConfig, out_dir: &Path, mode: LinkbudgetMode) -> Result<(), CliError> {
    match mode {
        LinkbudgetMode::Report { distance, link, tx_power_dbw } => {
            if !(distance > 0.0) {
                return Err(CliError::Usage(format!(
                    "--distance must be positive, got {distance}"
                )));
            }
            let spec = flag_preset(&link, tx_power_dbw)?;
            write_manifest(
                out_dir,
                "linkbudget report",
                &[],
                &[
                    ("arg_link".into(), link.clone()),
                    ("arg_distance_km".into(), distance.to_string()),
                    ("arg_tx_power_dbw".into(), spec.tx_power_dbw.to_string()),
                ],
                cfg,
            )?;
            let report = linkbudget::link_budget(&spec, distance)?;
            println!("link={link}");
            println!("distance_km={distance}");
            println!("tx_power_dbw={}", spec.tx_power_dbw);
            println!("fspl_db={}", report.fspl_db);
            println!("eirp_dbw={}", report.eirp_dbw);
            println!("cn0_dbhz={}", report.cn0_dbhz);
            println!("ebn0_db={}", report.ebn0_db);
            println!("margin_db={}", report.margin_db);
            Ok(())
        }
        LinkbudgetMode::Grid { power_range, distance_range, link } => {
            let powers = parse_axis("--power-range", &power_range)?;
            let distances = parse_axis("--distance-range", &distance_range)?;
            let spec = flag_preset(&link, None)?;
            write_manifest(
                out_dir,
                "linkbudget grid",
                &[("grid", "linkbudget_grid.csv")],
                &[
                    ("arg_link".into(), link.clone()),
                    ("arg_power_range".into(), power_range.clone()),
                    ("arg_distance_range".into(), distance_range.clone()),
                ],
                cfg,
            )?;
            let grid = linkbudget::margin_grid(&spec, &powers, &distances)?;
            eprintln!(
                "info: margin grid {}×{} for preset {link}",
                powers.len(),
                distances.len()
            );
            write_artifact(
                out_dir,
                "linkbudget_grid.csv",
                &linkbudget::grid_csv(&powers, &distances, &grid),
            )?;
            Ok(())
        }
        LinkbudgetMode::Sweep { distance, bitrates, link, tx_power_dbw } => {
            if !(distance > 0.0) {
                return Err(CliError::Usage(format!(
                    "--distance must be positive, got {distance}"
                )));
            }
            let rates: Vec<f64> = bitrates
                .split(',')
                .map(|s| {
                    s.trim().parse::<f64>().map(|mbps| mbps * 1e6).map_err(|_| {
                        CliError::Usage(format!("--bitrates: `{s}` is not a number of Mbps"))
                    })
                })
                .collect::<Result<_, _>>()?;
            let spec = flag_preset(&link, tx_power_dbw)?;
            write_manifest(
                out_dir,
                "linkbudget sweep",
                &[("sweep", "linkbudget_sweep.csv")],
                &[
                    ("arg_link".into(), link.clone()),
                    ("arg_distance_km".into(), distance.to_string()),
                    ("arg_bitrates_mbps".into(), bitrates.clone()),
                ],
                cfg,
            )?;
            let points = linkbudget::margin_vs_bitrate(&spec, distance, &rates)?;
            write_artifact(out_dir, "linkbudget_sweep.csv", &linkbudget::sweep_csv(&points))?;
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// Data pipeline (train/compare)
// ---------------------------------------------------------------------------

struct PreparedData {
    shards: Vec<LabeledSet>,
    holdout: LabeledSet,
    n_classes: usize,
    train_rows: usize,
    test_rows: usize,
}

/// Build the full dataset per config: seeded synthetic blobs, or the Statlog
/// files run through normalize → PCA down to `qubits` components.
fn load_full_dataset(cfg: &RunConfig) -> Result<Dataset, CliError> {
    match cfg.dataset {
        DatasetKind::Synthetic => Ok(dataio::synthetic_blobs(
            cfg.blobs_per_class,
            cfg.blobs_classes,
            cfg.qubits,
            cfg.blobs_separation,
            cfg.seed,
        )?),
        DatasetKind::Statlog => {
            let read = |path: &str| {
                fs::read_to_string(path).map_err(|e| {
                    CliError::Data(format!(
                        "cannot read Statlog file {path}: {e}; download the Statlog (Landsat \
                         Satellite) files and point statlog_train/statlog_test at them"
                    ))
                })
            };
            let train_text = read(&cfg.statlog_train)?;
            let test_text = read(&cfg.statlog_test)?;
            let train = dataio::parse_statlog(&train_text)?;
            let test = dataio::parse_statlog(&test_text)?;
            eprintln!(
                "info: parsed Statlog: {} + {} = {} rows",
                train.len(),
                test.len(),
                train.len() + test.len()
            );
            let mut features = train.features;
            features.extend(test.features);
            let mut labels = train.labels;
            labels.extend(test.labels);
            let combined = Dataset::new(features, labels, train.class_names)?;
            let normalized = dataio::normalize(&combined)?;
            let pca = dataio::pca_fit(&normalized.features, cfg.qubits)?;
            eprintln!(
                "info: PCA to {} components, explained variance {:?}",
                cfg.qubits, pca.explained_variance
            );
            let reduced = dataio::pca_transform(&pca, &normalized.features)?;
            Ok(Dataset::new(reduced, normalized.labels, normalized.class_names)?)
        }
    }
}

/// Full pipeline: dataset → seeded split → round-robin shards + holdout.
fn prepare_data(cfg: &RunConfig) -> Result<PreparedData, CliError> {
    let full = load_full_dataset(cfg)?;
    let n_classes = full.n_classes();
    let (train, test) = dataio::split(&full, cfg.train_fraction, cfg.seed)?;
    let plan = dataio::partition(&train, cfg.n_sats, cfg.seed)?;
    let shards = plan
        .shards
        .iter()
        .map(|idx| Ok(LabeledSet::from_dataset(&dataio::subset(&train, idx)?)?))
        .collect::<Result<Vec<_>, CliError>>()?;
    let holdout = LabeledSet::from_dataset(&test)?;
    eprintln!(
        "info: {} train rows over {} shards, {} holdout rows, {} classes",
        train.len(),
        shards.len(),
        test.len(),
        n_classes
    );
    Ok(PreparedData {
        shards,
        holdout,
        n_classes,
        train_rows: train.len(),
        test_rows: test.len(),
    })
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Order-sensitive fingerprint of the shard assignment (features and labels),
/// logged by every protocol run so identical sharding is checkable.
fn shards_fingerprint(shards: &[LabeledSet]) -> u64 {
    let mut buf = Vec::new();
    for (i, shard) in shards.iter().enumerate() {
        buf.extend_from_slice(&(i as u64).to_le_bytes());
        buf.extend_from_slice(&(shard.features.len() as u64).to_le_bytes());
        for (row, &label) in shard.features.iter().zip(&shard.labels) {
            for &x in row {
                buf.extend_from_slice(&x.to_le_bytes());
            }
            buf.extend_from_slice(&(label as u64).to_le_bytes());
        }
    }
    fnv1a64(&buf)
}

fn sim_config(cfg: &RunConfig, mode: Mode, n_classes: usize) -> Result<SimConfig, CliError> {
    let preset = |name: &str| {
        LinkSpec::preset(name)
            .ok_or_else(|| CliError::Config(format!("unknown link preset `{name}`")))
    };
    Ok(SimConfig {
        mode,
        rounds: cfg.rounds,
        n_sats: cfg.n_sats,
        constellation: cfg.constellation_config(),
        s2s_link: preset(&cfg.s2s_link)?,
        s2g_link: preset(&cfg.s2g_link)?,
        g2s_link: preset(&cfg.g2s_link)?,
        seed: cfg.seed,
        vqc: VqcSpec {
            feature_map: FeatureMapSpec {
                n_qubits: cfg.qubits,
                reps: cfg.fm_reps,
                encoding: cfg.encoding,
            },
            ansatz: AnsatzSpec {
                n_qubits: cfg.qubits,
                reps: cfg.ansatz_reps,
                entangle: cfg.entangle,
            },
            classifier: ClassifierSpec::modular(n_classes),
        },
        optimizer: OptimizerConfig {
            rho_begin: cfg.rho_begin,
            rho_end: cfg.rho_end,
            max_fun: cfg.max_fun,
        },
        enforce_line_of_sight: cfg.enforce_line_of_sight,
        visibility_step_s: cfg.visibility_step_s,
        local_train_walltime_s: cfg.local_train_walltime_s,
    })
}

/// Run one protocol over prepared shards, logging the shard fingerprint and
/// the final hypothetical-server test accuracy.
fn run_mode(
    cfg: &RunConfig,
    data: &PreparedData,
    mode: Mode,
) -> Result<RunOutput, CliError> {
    let fingerprint = shards_fingerprint(&data.shards);
    eprintln!("info: mode={mode} shards_hash={fingerprint:016x}");
    let sim = sim_config(cfg, mode, data.n_classes)?;
    let out = protocol::run(&sim, &data.shards, &data.holdout)?;
    if let Some(row) = out.metrics.iter().rev().find(|m| m.device == NodeId::Server) {
        eprintln!(
            "info: mode={mode} final server test accuracy {:.4}, objective {:.6}",
            row.test_accuracy, row.final_objective
        );
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// train / compare
// ---------------------------------------------------------------------------

fn cmd_train(cfg: &RunConfig, out_dir: &Path) -> Result<(), CliError> {
    let data = prepare_data(cfg)?;
    write_manifest(
        out_dir,
        "train",
        &[("metrics", "train_metrics.csv"), ("events", "train_events.csv")],
        &[
            ("shards_hash".into(), format!("{:016x}", shards_fingerprint(&data.shards))),
            ("arg_train_rows".into(), data.train_rows.to_string()),
            ("arg_test_rows".into(), data.test_rows.to_string()),
        ],
        cfg,
    )?;
    let out = run_mode(cfg, &data, cfg.mode)?;
    write_artifact(out_dir, "train_metrics.csv", &protocol::metrics_csv(cfg.mode, &out.metrics))?;
    write_artifact(out_dir, "train_events.csv", &protocol::events_csv(cfg.mode, &out.events))?;
    Ok(())
}

fn cmd_compare(cfg: &RunConfig, out_dir: &Path) -> Result<(), CliError> {
    let data = prepare_data(cfg)?;
    write_manifest(
        out_dir,
        "compare",
        &[("metrics", "compare_metrics.csv"), ("events", "compare_events.csv")],
        &[
            ("shards_hash".into(), format!("{:016x}", shards_fingerprint(&data.shards))),
            ("arg_train_rows".into(), data.train_rows.to_string()),
            ("arg_test_rows".into(), data.test_rows.to_string()),
        ],
        cfg,
    )?;

    let orb = run_mode(cfg, &data, Mode::Orb)?;
    let server = run_mode(cfg, &data, Mode::Server)?;

    let mut metrics = format!("{METRICS_CSV_HEADER}\n");
    metrics.push_str(&protocol::metrics_csv_rows(Mode::Orb, &orb.metrics));
    metrics.push_str(&protocol::metrics_csv_rows(Mode::Server, &server.metrics));
    let mut events = format!("{EVENTS_CSV_HEADER}\n");
    events.push_str(&protocol::events_csv_rows(Mode::Orb, &orb.events));
    events.push_str(&protocol::events_csv_rows(Mode::Server, &server.events));

    write_artifact(out_dir, "compare_metrics.csv", &metrics)?;
    write_artifact(out_dir, "compare_events.csv", &events)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// bound
// ---------------------------------------------------------------------------

/// Parse the bound-constants file: same key=value grammar as the config file,
/// every key required, none unknown.
fn parse_bound_constants(path: &Path) -> Result<BoundConstants, CliError> {
    let text = fs::read_to_string(path).map_err(|e| {
        CliError::Config(format!("cannot read constants file {}: {e}", path.display()))
    })?;
    let mut map: BTreeMap<String, String> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Config(format!(
                "{}:{}: expected key=value, got `{line}`",
                path.display(),
                idx + 1
            ))
        })?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }

    let mut take = |key: &str| {
        map.remove(key).ok_or_else(|| {
            CliError::Config(format!("{}: missing constant key `{key}`", path.display()))
        })
    };
    let float = |key: &str, v: String| {
        v.parse::<f64>().map_err(|_| {
            CliError::Config(format!("constant `{key}`: cannot parse `{v}` as a number"))
        })
    };
    let integer = |key: &str, v: String| {
        v.parse::<usize>().map_err(|_| {
            CliError::Config(format!("constant `{key}`: cannot parse `{v}` as an integer"))
        })
    };

    let l = float("l", take("l")?)?;
    let mu = float("mu", take("mu")?)?;
    let delta_schedule = take("delta_schedule")?
        .split(',')
        .map(|s| {
            s.trim().parse::<f64>().map_err(|_| {
                CliError::Config(format!(
                    "constant `delta_schedule`: `{s}` is not a number"
                ))
            })
        })
        .collect::<Result<Vec<f64>, _>>()?;
    let n_devices = integer("n_devices", take("n_devices")?)?;
    let k_local = integer("k_local", take("k_local")?)?;
    let rounds = integer("rounds", take("rounds")?)?;
    let gamma_c = float("gamma_c", take("gamma_c")?)?;
    let tau_c = float("tau_c", take("tau_c")?)?;
    let delta_c = float("delta_c", take("delta_c")?)?;
    let rho_loss = float("rho_loss", take("rho_loss")?)?;
    let rho = float("rho", take("rho")?)?;
    let epsilon_c = float("epsilon_c", take("epsilon_c")?)?;
    let b = float("b", take("b")?)?;
    let t_horizon = float("t_horizon", take("t_horizon")?)?;
    let alpha_q = float("alpha_q", take("alpha_q")?)?;
    let sigma_q = float("sigma_q", take("sigma_q")?)?;
    let n_q = integer("n_q", take("n_q")?)?;
    let theta0_dist_sq = float("theta0_dist_sq", take("theta0_dist_sq")?)?;

    if let Some(unknown) = map.keys().next() {
        return Err(CliError::Config(format!(
            "{}: unknown constant key `{unknown}`",
            path.display()
        )));
    }

    Ok(BoundConstants {
        l,
        mu,
        delta_schedule,
        n_devices,
        k_local,
        rounds,
        gamma_c,
        tau_c,
        delta_c,
        rho_loss,
        rho,
        epsilon_c,
        b,
        t_horizon,
        alpha_q,
        sigma_q,
        n_q,
        theta0_dist_sq,
    })
}

fn cmd_bound(cfg: &RunConfig, out_dir: &Path, constants_path: &Path) -> Result<(), CliError> {
    let constants = parse_bound_constants(constants_path)?;
    if constants.rounds == 0 {
        return Err(CliError::Config("constant `rounds`: must be ≥ 1".into()));
    }
    write_manifest(
        out_dir,
        "bound",
        &[("bound", "bound.csv")],
        &[("arg_constants".into(), constants_path.display().to_string())],
        cfg,
    )?;
    let rows = (1..=constants.rounds)
        .map(|r| Ok((r, protocol::theorem1_bound(&constants, r)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    eprintln!("info: evaluated the bound for {} rounds", constants.rounds);
    write_artifact(out_dir, "bound.csv", &protocol::bound_csv(&rows))?;
    Ok(())
}

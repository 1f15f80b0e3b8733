//! Layered run configuration and the CLI error vocabulary.
//!
//! Every tunable lives under one flat key namespace with three layers, later
//! layers winning: built-in defaults, then a `key=value` config file, then an
//! identically-named command-line flag. The resolved configuration is
//! serialized into each run's manifest in a fixed canonical order, so a
//! manifest can be passed straight back via `--config` to reproduce the run.
//! Reserved manifest bookkeeping keys (`tool_version`, `command`,
//! `shards_hash`, and the `artifact_`/`arg_` prefixes) are skipped on load.

use clap::Args;
use satqfl::cobyla::CobylaError;
use satqfl::dataio::DataError;
use satqfl::linkbudget::{LinkBudgetError, LinkSpec};
use satqfl::orbital::{ConstellationConfig, GroundStation, OrbitalError, SpacingMode};
use satqfl::protocol::{Mode, ProtocolError};
use satqfl::vqc::{Encoding, Entangle, VqcError};
use std::fmt;
use std::fs;
use std::path::Path;
use thiserror::Error;

/// Exact reserved keys skipped when loading a manifest as a config file.
const RESERVED_KEYS: &[&str] = &["tool_version", "command", "shards_hash"];

/// Reserved key prefixes skipped when loading a manifest as a config file.
const RESERVED_PREFIXES: &[&str] = &["artifact_", "arg_"];

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// A CLI failure, carrying its process exit code.
///
/// `Usage` → 2 (malformed invocation), `Data` → 3 (dataset or output I/O),
/// `Config` → 4 (configuration that parsed but does not validate).
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed command line (bad operational flag values, bad ranges).
    #[error("{0}")]
    Usage(String),
    /// Missing or unreadable data files, or failed output writes.
    #[error("{0}")]
    Data(String),
    /// Invalid configuration: unknown keys, unparsable or out-of-range values.
    #[error("{0}")]
    Config(String),
}

impl CliError {
    /// Process exit code for this failure class.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Config(_) => 4,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<DataError> for CliError {
    fn from(e: DataError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<OrbitalError> for CliError {
    fn from(e: OrbitalError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<LinkBudgetError> for CliError {
    fn from(e: LinkBudgetError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<VqcError> for CliError {
    fn from(e: VqcError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<CobylaError> for CliError {
    fn from(e: CobylaError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<ProtocolError> for CliError {
    fn from(e: ProtocolError) -> Self {
        match e {
            ProtocolError::ShardMismatch { .. }
            | ProtocolError::EmptyShard(_)
            | ProtocolError::EmptyHoldout => CliError::Data(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

/// Prefix a config error's message with its source (file:line or flag name).
fn with_context(err: CliError, context: &str) -> CliError {
    match err {
        CliError::Config(msg) => CliError::Config(format!("{context}: {msg}")),
        other => other,
    }
}

// ---------------------------------------------------------------------------
// Value vocabulary
// ---------------------------------------------------------------------------

/// Which dataset the train/compare pipeline uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetKind {
    /// Seeded Gaussian blobs — self-contained, no external files.
    Synthetic,
    /// The user-supplied Statlog (Landsat) files.
    Statlog,
}

impl fmt::Display for DatasetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DatasetKind::Synthetic => "synthetic",
            DatasetKind::Statlog => "statlog",
        })
    }
}

fn spacing_name(s: SpacingMode) -> &'static str {
    match s {
        SpacingMode::InPlaneSpaced => "in_plane",
        SpacingMode::RaanSpaced => "raan",
    }
}

fn encoding_name(e: Encoding) -> &'static str {
    match e {
        Encoding::Angle => "angle",
        Encoding::Zz => "zz",
    }
}

fn entangle_name(e: Entangle) -> &'static str {
    match e {
        Entangle::Ring => "ring",
        Entangle::Line => "line",
    }
}

fn bad_value(key: &str, value: &str, expected: &str) -> CliError {
    CliError::Config(format!(
        "config key `{key}`: cannot parse `{value}` ({expected})"
    ))
}

fn parse_f64(key: &str, value: &str) -> Result<f64, CliError> {
    value
        .parse::<f64>()
        .map_err(|_| bad_value(key, value, "expected a number"))
}

fn parse_usize(key: &str, value: &str) -> Result<usize, CliError> {
    value
        .parse::<usize>()
        .map_err(|_| bad_value(key, value, "expected a nonnegative integer"))
}

fn parse_u64(key: &str, value: &str) -> Result<u64, CliError> {
    value
        .parse::<u64>()
        .map_err(|_| bad_value(key, value, "expected a 64-bit unsigned integer"))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, CliError> {
    match value.to_ascii_lowercase().as_str() {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(bad_value(key, value, "expected true or false")),
    }
}

// ---------------------------------------------------------------------------
// Resolved configuration
// ---------------------------------------------------------------------------

/// The fully resolved run configuration. Field order matches the canonical
/// manifest key order.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Protocol for `train` (`compare` always runs both).
    pub mode: Mode,
    /// Communication rounds.
    pub rounds: usize,
    /// Ring size / shard count.
    pub n_sats: usize,
    /// Constellation altitude above the surface in km.
    pub altitude_km: f64,
    /// Orbital inclination in degrees.
    pub inclination_deg: f64,
    /// `in_plane` (one plane, phased) or `raan` (one plane per satellite).
    pub spacing: SpacingMode,
    /// Ground-station geodetic latitude in degrees.
    pub ground_lat_deg: f64,
    /// Ground-station geodetic longitude in degrees.
    pub ground_lon_deg: f64,
    /// Ground-station altitude in km.
    pub ground_alt_km: f64,
    /// Server orbit altitude in km, or `none` for a ground server
    /// (values below 1 km also degrade to the ground station).
    pub geo_server_altitude_km: Option<f64>,
    /// Register width; also the reduced feature dimension.
    pub qubits: usize,
    /// Feature-map repetitions.
    pub fm_reps: usize,
    /// Ansatz repetitions.
    pub ansatz_reps: usize,
    /// Feature encoding: `angle` or `zz`.
    pub encoding: Encoding,
    /// Entangler layout: `ring` or `line`.
    pub entangle: Entangle,
    /// Initial trust-region radius.
    pub rho_begin: f64,
    /// Final trust-region radius (stopping threshold).
    pub rho_end: f64,
    /// Objective-evaluation budget per local fit.
    pub max_fun: usize,
    /// Master seed; all randomness flows from named substreams of it.
    pub seed: u64,
    /// Gate transmissions on geometric visibility.
    pub enforce_line_of_sight: bool,
    /// Clock step between visibility retries in s.
    pub visibility_step_s: f64,
    /// Simulated wall time per local fit in s.
    pub local_train_walltime_s: f64,
    /// `synthetic` or `statlog`.
    pub dataset: DatasetKind,
    /// Synthetic rows per class.
    pub blobs_per_class: usize,
    /// Synthetic class count.
    pub blobs_classes: usize,
    /// Synthetic inter-center separation.
    pub blobs_separation: f64,
    /// Train fraction of the shuffled dataset.
    pub train_fraction: f64,
    /// Path to the Statlog training file.
    pub statlog_train: String,
    /// Path to the Statlog test file.
    pub statlog_test: String,
    /// Inter-satellite link preset name.
    pub s2s_link: String,
    /// Satellite-to-ground link preset name.
    pub s2g_link: String,
    /// Ground-to-satellite link preset name.
    pub g2s_link: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mode: Mode::Orb,
            rounds: 3,
            n_sats: 5,
            altitude_km: 500.0,
            inclination_deg: 60.0,
            spacing: SpacingMode::InPlaneSpaced,
            ground_lat_deg: 0.0,
            ground_lon_deg: 0.0,
            ground_alt_km: 0.02,
            geo_server_altitude_km: None,
            qubits: 4,
            fm_reps: 1,
            ansatz_reps: 2,
            encoding: Encoding::Angle,
            entangle: Entangle::Ring,
            rho_begin: 1.0,
            rho_end: 1e-4,
            max_fun: 100,
            seed: 42,
            enforce_line_of_sight: false,
            visibility_step_s: 60.0,
            local_train_walltime_s: 0.0,
            dataset: DatasetKind::Synthetic,
            blobs_per_class: 80,
            blobs_classes: 2,
            blobs_separation: 0.5,
            train_fraction: 0.9,
            statlog_train: "data/sat.trn".into(),
            statlog_test: "data/sat.tst".into(),
            s2s_link: "l3".into(),
            s2g_link: "l2".into(),
            g2s_link: "l1".into(),
        }
    }
}

impl RunConfig {
    /// Apply one `key=value` pair from any layer.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "mode" => {
                self.mode = match value {
                    "orb" => Mode::Orb,
                    "server" => Mode::Server,
                    _ => return Err(bad_value(key, value, "expected orb or server")),
                }
            }
            "rounds" => self.rounds = parse_usize(key, value)?,
            "n_sats" => self.n_sats = parse_usize(key, value)?,
            "altitude_km" => self.altitude_km = parse_f64(key, value)?,
            "inclination_deg" => self.inclination_deg = parse_f64(key, value)?,
            "spacing" => {
                self.spacing = match value {
                    "in_plane" => SpacingMode::InPlaneSpaced,
                    "raan" => SpacingMode::RaanSpaced,
                    _ => return Err(bad_value(key, value, "expected in_plane or raan")),
                }
            }
            "ground_lat_deg" => self.ground_lat_deg = parse_f64(key, value)?,
            "ground_lon_deg" => self.ground_lon_deg = parse_f64(key, value)?,
            "ground_alt_km" => self.ground_alt_km = parse_f64(key, value)?,
            "geo_server_altitude_km" => {
                self.geo_server_altitude_km = match value {
                    "none" => None,
                    _ => Some(parse_f64(key, value)?),
                }
            }
            "qubits" => self.qubits = parse_usize(key, value)?,
            "fm_reps" => self.fm_reps = parse_usize(key, value)?,
            "ansatz_reps" => self.ansatz_reps = parse_usize(key, value)?,
            "encoding" => {
                self.encoding = match value {
                    "angle" => Encoding::Angle,
                    "zz" => Encoding::Zz,
                    _ => return Err(bad_value(key, value, "expected angle or zz")),
                }
            }
            "entangle" => {
                self.entangle = match value {
                    "ring" => Entangle::Ring,
                    "line" => Entangle::Line,
                    _ => return Err(bad_value(key, value, "expected ring or line")),
                }
            }
            "rho_begin" => self.rho_begin = parse_f64(key, value)?,
            "rho_end" => self.rho_end = parse_f64(key, value)?,
            "max_fun" => self.max_fun = parse_usize(key, value)?,
            "seed" => self.seed = parse_u64(key, value)?,
            "enforce_line_of_sight" => self.enforce_line_of_sight = parse_bool(key, value)?,
            "visibility_step_s" => self.visibility_step_s = parse_f64(key, value)?,
            "local_train_walltime_s" => self.local_train_walltime_s = parse_f64(key, value)?,
            "dataset" => {
                self.dataset = match value {
                    "synthetic" => DatasetKind::Synthetic,
                    "statlog" => DatasetKind::Statlog,
                    _ => return Err(bad_value(key, value, "expected synthetic or statlog")),
                }
            }
            "blobs_per_class" => self.blobs_per_class = parse_usize(key, value)?,
            "blobs_classes" => self.blobs_classes = parse_usize(key, value)?,
            "blobs_separation" => self.blobs_separation = parse_f64(key, value)?,
            "train_fraction" => self.train_fraction = parse_f64(key, value)?,
            "statlog_train" => self.statlog_train = value.to_string(),
            "statlog_test" => self.statlog_test = value.to_string(),
            "s2s_link" => self.s2s_link = value.to_string(),
            "s2g_link" => self.s2g_link = value.to_string(),
            "g2s_link" => self.g2s_link = value.to_string(),
            _ => return Err(CliError::Config(format!("unknown config key `{key}`"))),
        }
        Ok(())
    }

    /// Layer a `key=value` file over the current values. Blank lines and
    /// `#` comments are skipped, as are reserved manifest keys — which is
    /// what lets an emitted manifest serve as a config file.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("cannot read config file {}: {e}", path.display()))
        })?;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let context = format!("{}:{}", path.display(), idx + 1);
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("{context}: expected key=value, got `{line}`"))
            })?;
            let (key, value) = (key.trim(), value.trim());
            if RESERVED_KEYS.contains(&key)
                || RESERVED_PREFIXES.iter().any(|p| key.starts_with(p))
            {
                continue;
            }
            self.set(key, value).map_err(|e| with_context(e, &context))?;
        }
        Ok(())
    }

    /// Layer command-line overrides (highest precedence) over the current
    /// values.
    pub fn apply_overrides(&mut self, overrides: &KeyOverrides) -> Result<(), CliError> {
        for (key, value) in overrides.entries() {
            if let Some(v) = value {
                self.set(key, v)
                    .map_err(|e| with_context(e, &format!("flag --{key}")))?;
            }
        }
        Ok(())
    }

    /// Eager sanity checks so obviously bad configurations fail before any
    /// data loading; the library layers re-validate everything they consume.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.rounds == 0 {
            return Err(CliError::Config("config key `rounds`: must be ≥ 1".into()));
        }
        if self.n_sats < 2 {
            return Err(CliError::Config(format!(
                "config key `n_sats`: must be ≥ 2, got {}",
                self.n_sats
            )));
        }
        if self.qubits == 0 || self.qubits > 12 {
            return Err(CliError::Config(format!(
                "config key `qubits`: must be in 1..=12, got {}",
                self.qubits
            )));
        }
        if self.fm_reps == 0 {
            return Err(CliError::Config("config key `fm_reps`: must be ≥ 1".into()));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(CliError::Config(format!(
                "config key `train_fraction`: must lie strictly between 0 and 1, got {}",
                self.train_fraction
            )));
        }
        for (key, name) in [
            ("s2s_link", &self.s2s_link),
            ("s2g_link", &self.s2g_link),
            ("g2s_link", &self.g2s_link),
        ] {
            if LinkSpec::preset(name).is_none() {
                return Err(CliError::Config(format!(
                    "config key `{key}`: unknown link preset `{name}` (expected l1, l2, or l3)"
                )));
            }
        }
        Ok(())
    }

    /// The orbital-geometry slice of the configuration.
    pub fn constellation_config(&self) -> ConstellationConfig {
        ConstellationConfig {
            n_sats: self.n_sats,
            altitude_km: self.altitude_km,
            inclination_deg: self.inclination_deg,
            spacing_mode: self.spacing,
            ground_station: GroundStation {
                lat_deg: self.ground_lat_deg,
                lon_deg: self.ground_lon_deg,
                alt_km: self.ground_alt_km,
            },
            geo_server_altitude_km: self.geo_server_altitude_km,
        }
    }

    /// Every key, canonically ordered and serialized, one `key=value` line
    /// each. This is the config portion of a manifest.
    pub fn canonical_lines(&self) -> String {
        let geo = match self.geo_server_altitude_km {
            None => "none".to_string(),
            Some(v) => v.to_string(),
        };
        let pairs: [(&str, String); 32] = [
            ("mode", self.mode.to_string()),
            ("rounds", self.rounds.to_string()),
            ("n_sats", self.n_sats.to_string()),
            ("altitude_km", self.altitude_km.to_string()),
            ("inclination_deg", self.inclination_deg.to_string()),
            ("spacing", spacing_name(self.spacing).to_string()),
            ("ground_lat_deg", self.ground_lat_deg.to_string()),
            ("ground_lon_deg", self.ground_lon_deg.to_string()),
            ("ground_alt_km", self.ground_alt_km.to_string()),
            ("geo_server_altitude_km", geo),
            ("qubits", self.qubits.to_string()),
            ("fm_reps", self.fm_reps.to_string()),
            ("ansatz_reps", self.ansatz_reps.to_string()),
            ("encoding", encoding_name(self.encoding).to_string()),
            ("entangle", entangle_name(self.entangle).to_string()),
            ("rho_begin", self.rho_begin.to_string()),
            ("rho_end", self.rho_end.to_string()),
            ("max_fun", self.max_fun.to_string()),
            ("seed", self.seed.to_string()),
            ("enforce_line_of_sight", self.enforce_line_of_sight.to_string()),
            ("visibility_step_s", self.visibility_step_s.to_string()),
            ("local_train_walltime_s", self.local_train_walltime_s.to_string()),
            ("dataset", self.dataset.to_string()),
            ("blobs_per_class", self.blobs_per_class.to_string()),
            ("blobs_classes", self.blobs_classes.to_string()),
            ("blobs_separation", self.blobs_separation.to_string()),
            ("train_fraction", self.train_fraction.to_string()),
            ("statlog_train", self.statlog_train.clone()),
            ("statlog_test", self.statlog_test.clone()),
            ("s2s_link", self.s2s_link.clone()),
            ("s2g_link", self.s2g_link.clone()),
            ("g2s_link", self.g2s_link.clone()),
        ];
        let mut out = String::new();
        for (k, v) in pairs {
            out.push_str(&format!("{k}={v}\n"));
        }
        out
    }

    /// Resolve the three layers: defaults, then the config file (if any),
    /// then same-named flags, then the dedicated `--seed` flag.
    pub fn resolve(
        config_path: Option<&Path>,
        overrides: &KeyOverrides,
        seed_flag: Option<u64>,
    ) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = config_path {
            cfg.apply_file(path)?;
        }
        cfg.apply_overrides(overrides)?;
        if let Some(seed) = seed_flag {
            cfg.seed = seed;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

// ---------------------------------------------------------------------------
// Flag overrides
// ---------------------------------------------------------------------------

/// One optional flag per config key, named exactly like the key. Values are
/// kept raw and run through the same parser as file values, so a bad
/// `--rounds x` is diagnosed identically to `rounds=x` in a file.
#[derive(Debug, Clone, Default, Args)]
pub struct KeyOverrides {
    /// Protocol for `train`: orb or server.
    #[arg(long = "mode", global = true, value_name = "NAME", help_heading = "Config overrides")]
    pub mode: Option<String>,
    /// Communication rounds.
    #[arg(long = "rounds", global = true, value_name = "N", help_heading = "Config overrides")]
    pub rounds: Option<String>,
    /// Satellite count.
    #[arg(long = "n_sats", global = true, value_name = "N", help_heading = "Config overrides")]
    pub n_sats: Option<String>,
    /// Constellation altitude in km.
    #[arg(long = "altitude_km", global = true, value_name = "KM", help_heading = "Config overrides")]
    pub altitude_km: Option<String>,
    /// Orbital inclination in degrees.
    #[arg(long = "inclination_deg", global = true, value_name = "DEG", help_heading = "Config overrides")]
    pub inclination_deg: Option<String>,
    /// Satellite spacing: in_plane or raan.
    #[arg(long = "spacing", global = true, value_name = "NAME", help_heading = "Config overrides")]
    pub spacing: Option<String>,
    /// Ground-station latitude in degrees.
    #[arg(long = "ground_lat_deg", global = true, value_name = "DEG", help_heading = "Config overrides")]
    pub ground_lat_deg: Option<String>,
    /// Ground-station longitude in degrees.
    #[arg(long = "ground_lon_deg", global = true, value_name = "DEG", help_heading = "Config overrides")]
    pub ground_lon_deg: Option<String>,
    /// Ground-station altitude in km.
    #[arg(long = "ground_alt_km", global = true, value_name = "KM", help_heading = "Config overrides")]
    pub ground_alt_km: Option<String>,
    /// Server orbit altitude in km, or none.
    #[arg(long = "geo_server_altitude_km", global = true, value_name = "KM|none", help_heading = "Config overrides")]
    pub geo_server_altitude_km: Option<String>,
    /// Qubit count (also the reduced feature dimension).
    #[arg(long = "qubits", global = true, value_name = "N", help_heading = "Config overrides")]
    pub qubits: Option<String>,
    /// Feature-map repetitions.
    #[arg(long = "fm_reps", global = true, value_name = "N", help_heading = "Config overrides")]
    pub fm_reps: Option<String>,
    /// Ansatz repetitions.
    #[arg(long = "ansatz_reps", global = true, value_name = "N", help_heading = "Config overrides")]
    pub ansatz_reps: Option<String>,
    /// Feature encoding: angle or zz.
    #[arg(long = "encoding", global = true, value_name = "NAME", help_heading = "Config overrides")]
    pub encoding: Option<String>,
    /// Entangler layout: ring or line.
    #[arg(long = "entangle", global = true, value_name = "NAME", help_heading = "Config overrides")]
    pub entangle: Option<String>,
    /// Initial trust-region radius.
    #[arg(long = "rho_begin", global = true, value_name = "R", help_heading = "Config overrides")]
    pub rho_begin: Option<String>,
    /// Final trust-region radius.
    #[arg(long = "rho_end", global = true, value_name = "R", help_heading = "Config overrides")]
    pub rho_end: Option<String>,
    /// Objective-evaluation budget per fit.
    #[arg(long = "max_fun", global = true, value_name = "N", help_heading = "Config overrides")]
    pub max_fun: Option<String>,
    /// Gate transmissions on geometric visibility: true or false.
    #[arg(long = "enforce_line_of_sight", global = true, value_name = "BOOL", help_heading = "Config overrides")]
    pub enforce_line_of_sight: Option<String>,
    /// Clock step between visibility retries in s.
    #[arg(long = "visibility_step_s", global = true, value_name = "S", help_heading = "Config overrides")]
    pub visibility_step_s: Option<String>,
    /// Simulated wall time per local fit in s.
    #[arg(long = "local_train_walltime_s", global = true, value_name = "S", help_heading = "Config overrides")]
    pub local_train_walltime_s: Option<String>,
    /// Dataset: synthetic or statlog.
    #[arg(long = "dataset", global = true, value_name = "NAME", help_heading = "Config overrides")]
    pub dataset: Option<String>,
    /// Synthetic rows per class.
    #[arg(long = "blobs_per_class", global = true, value_name = "N", help_heading = "Config overrides")]
    pub blobs_per_class: Option<String>,
    /// Synthetic class count.
    #[arg(long = "blobs_classes", global = true, value_name = "N", help_heading = "Config overrides")]
    pub blobs_classes: Option<String>,
    /// Synthetic inter-center separation.
    #[arg(long = "blobs_separation", global = true, value_name = "D", help_heading = "Config overrides")]
    pub blobs_separation: Option<String>,
    /// Train fraction of the shuffled dataset.
    #[arg(long = "train_fraction", global = true, value_name = "F", help_heading = "Config overrides")]
    pub train_fraction: Option<String>,
    /// Path to the Statlog training file.
    #[arg(long = "statlog_train", global = true, value_name = "PATH", help_heading = "Config overrides")]
    pub statlog_train: Option<String>,
    /// Path to the Statlog test file.
    #[arg(long = "statlog_test", global = true, value_name = "PATH", help_heading = "Config overrides")]
    pub statlog_test: Option<String>,
    /// Inter-satellite link preset: l1, l2, or l3.
    #[arg(long = "s2s_link", global = true, value_name = "NAME", help_heading = "Config overrides")]
    pub s2s_link: Option<String>,
    /// Satellite-to-ground link preset.
    #[arg(long = "s2g_link", global = true, value_name = "NAME", help_heading = "Config overrides")]
    pub s2g_link: Option<String>,
    /// Ground-to-satellite link preset.
    #[arg(long = "g2s_link", global = true, value_name = "NAME", help_heading = "Config overrides")]
    pub g2s_link: Option<String>,
}

impl KeyOverrides {
    /// (key, raw value) pairs in canonical order. The `seed` key is covered
    /// by the dedicated global `--seed` flag instead.
    pub fn entries(&self) -> [(&'static str, Option<&str>); 31] {
        [
            ("mode", self.mode.as_deref()),
            ("rounds", self.rounds.as_deref()),
            ("n_sats", self.n_sats.as_deref()),
            ("altitude_km", self.altitude_km.as_deref()),
            ("inclination_deg", self.inclination_deg.as_deref()),
            ("spacing", self.spacing.as_deref()),
            ("ground_lat_deg", self.ground_lat_deg.as_deref()),
            ("ground_lon_deg", self.ground_lon_deg.as_deref()),
            ("ground_alt_km", self.ground_alt_km.as_deref()),
            ("geo_server_altitude_km", self.geo_server_altitude_km.as_deref()),
            ("qubits", self.qubits.as_deref()),
            ("fm_reps", self.fm_reps.as_deref()),
            ("ansatz_reps", self.ansatz_reps.as_deref()),
            ("encoding", self.encoding.as_deref()),
            ("entangle", self.entangle.as_deref()),
            ("rho_begin", self.rho_begin.as_deref()),
            ("rho_end", self.rho_end.as_deref()),
            ("max_fun", self.max_fun.as_deref()),
            ("enforce_line_of_sight", self.enforce_line_of_sight.as_deref()),
            ("visibility_step_s", self.visibility_step_s.as_deref()),
            ("local_train_walltime_s", self.local_train_walltime_s.as_deref()),
            ("dataset", self.dataset.as_deref()),
            ("blobs_per_class", self.blobs_per_class.as_deref()),
            ("blobs_classes", self.blobs_classes.as_deref()),
            ("blobs_separation", self.blobs_separation.as_deref()),
            ("train_fraction", self.train_fraction.as_deref()),
            ("statlog_train", self.statlog_train.as_deref()),
            ("statlog_test", self.statlog_test.as_deref()),
            ("s2s_link", self.s2s_link.as_deref()),
            ("s2g_link", self.s2g_link.as_deref()),
            ("g2s_link", self.g2s_link.as_deref()),
        ]
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

//! The two federated training protocols over the simulated constellation,
//! plus the convergence-bound evaluator.
//!
//! **Ring mode (`orb`)** is serverless: a single model circulates the
//! satellite ring. Round r, node i trains on its own shard — a cold seeded
//! start only at the very first fit (r = 0, i = 0), a warm start from the
//! received parameters everywhere else — then hands the model to node
//! (i+1) mod n over the inter-satellite link. One communication event per
//! hop, n per round. A *hypothetical* server scores the circulating model
//! on the shared holdout each round for observability; it never feeds
//! anything back.
//!
//! **Server mode** is the classic aggregated baseline: every satellite
//! trains from the current global model, uplinks its update to the server,
//! the server averages the updates weighted by shard size (FedAvg) and
//! downlinks the result to every satellite — 2n events per round. The
//! server sits at the ground station by default or flies an equatorial
//! orbit when a server altitude is configured.
//!
//! Both modes draw the initial model from the same named substream, so orb's
//! first cold start and server mode's global initialization coincide for a
//! given seed. The simulation clock advances by configured local training
//! wall time plus each event's transmission delay; line-of-sight enforcement
//! (off by default — links are assumed available) holds a blocked
//! transmission and retries at a fixed sampling interval, recording each
//! blocked attempt.

use crate::dataio::LabeledSet;
use crate::linkbudget::{self, LinkBudgetError, LinkSpec};
use crate::orbital::{self, ConstellationConfig, OrbitSpec, OrbitalError, Vec3};
use crate::rng::substream;
use crate::vqc::{self, ParamVector, VqcError, VqcSpec};
use crate::cobyla::OptimizerConfig;
use crate::constants::R_EARTH_KM;
use std::fmt;
use thiserror::Error;

/// Attempt cap for the line-of-sight wait loop.
const VISIBILITY_ATTEMPTS: usize = 100_000;

/// Substream label for the initial model draw (shared by both modes).
const THETA_INIT_LABEL: &str = "theta-init";

/// Weights passed to FedAvg must sum to 1 within this tolerance.
const WEIGHT_SUM_TOL: f64 = 1e-9;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Errors from protocol configuration and execution.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    /// Structurally invalid simulation configuration.
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    /// Shard count does not match the satellite count.
    #[error("{shards} data shards for {sats} satellites")]
    ShardMismatch { shards: usize, sats: usize },
    /// A satellite with no training rows.
    #[error("shard for satellite {0} is empty")]
    EmptyShard(usize),
    /// No holdout rows for server evaluation.
    #[error("holdout set is empty")]
    EmptyHoldout,
    /// Line-of-sight never cleared within the attempt cap.
    #[error("no line of sight from {src} to {dst} after {attempts} visibility samples")]
    VisibilityTimeout { src: NodeId, dst: NodeId, attempts: usize },
    /// FedAvg input violation.
    #[error("invalid aggregation input: {0}")]
    BadAggregation(String),
    /// A negative convergence-bound constant, or an invalid round index.
    #[error("invalid bound constants: {0}")]
    BadBoundConstants(String),
    /// Underlying orbital-geometry failure.
    #[error(transparent)]
    Orbital(#[from] OrbitalError),
    /// Underlying link-budget failure.
    #[error(transparent)]
    Link(#[from] LinkBudgetError),
    /// Underlying classifier failure.
    #[error(transparent)]
    Vqc(#[from] VqcError),
}

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Which federated protocol to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Serverless ring: the model circulates satellite-to-satellite.
    Orb,
    /// Server-aggregated FedAvg baseline.
    Server,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Orb => "orb",
            Mode::Server => "server",
        })
    }
}

/// A participant in the protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeId {
    /// Satellite by ring index.
    Sat(usize),
    /// The aggregation server (or the hypothetical evaluator in ring mode).
    Server,
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeId::Sat(i) => write!(f, "sat{i}"),
            NodeId::Server => f.write_str("server"),
        }
    }
}

/// Full description of one simulated run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Protocol to run.
    pub mode: Mode,
    /// Communication rounds R (≥ 1).
    pub rounds: usize,
    /// Ring size n (≥ 2); must match the constellation.
    pub n_sats: usize,
    /// Orbital geometry, ground station, and optional server orbit.
    pub constellation: ConstellationConfig,
    /// Inter-satellite link preset (ring hand-offs).
    pub s2s_link: LinkSpec,
    /// Satellite-to-ground link preset (server-mode uplinks).
    pub s2g_link: LinkSpec,
    /// Ground-to-satellite link preset (server-mode downlinks).
    pub g2s_link: LinkSpec,
    /// Master seed; all randomness flows from named substreams of it.
    pub seed: u64,
    /// Classifier architecture.
    pub vqc: VqcSpec,
    /// Local training budget and radius schedule.
    pub optimizer: OptimizerConfig,
    /// Gate transmissions on geometric line of sight. Off by default:
    /// links are assumed available, matching the model's assumptions.
    pub enforce_line_of_sight: bool,
    /// Clock step between visibility retries when enforcement is on.
    pub visibility_step_s: f64,
    /// Wall time one local fit consumes on the simulation clock.
    pub local_train_walltime_s: f64,
}

impl SimConfig {
    fn validate(&self) -> Result<(), ProtocolError> {
        if self.rounds == 0 {
            return Err(ProtocolError::InvalidConfig("rounds must be ≥ 1".into()));
        }
        if self.n_sats < 2 {
            return Err(ProtocolError::InvalidConfig(format!(
                "n_sats must be ≥ 2, got {}",
                self.n_sats
            )));
        }
        if self.constellation.n_sats != self.n_sats {
            return Err(ProtocolError::InvalidConfig(format!(
                "n_sats {} does not match the constellation's {}",
                self.n_sats, self.constellation.n_sats
            )));
        }
        if self.enforce_line_of_sight && !(self.visibility_step_s > 0.0) {
            return Err(ProtocolError::InvalidConfig(format!(
                "visibility step {} must be positive when enforcing line of sight",
                self.visibility_step_s
            )));
        }
        if !(self.local_train_walltime_s >= 0.0) {
            return Err(ProtocolError::InvalidConfig(format!(
                "local training wall time {} must be nonnegative",
                self.local_train_walltime_s
            )));
        }
        self.vqc.validate()?;
        Ok(())
    }
}

/// One transmission attempt on a link.
#[derive(Debug, Clone, PartialEq)]
pub struct CommEvent {
    /// Simulation clock when the transmission started.
    pub sim_time_s: f64,
    /// Sender.
    pub src: NodeId,
    /// Receiver.
    pub dst: NodeId,
    /// Serialized model size in bits.
    pub payload_bits: u64,
    /// Slant range at transmission time in km.
    pub distance_km: f64,
    /// Transmission plus propagation delay in s (the would-be delay on a
    /// blocked attempt; the clock then advances by the visibility step
    /// instead).
    pub delay_s: f64,
    /// Link margin at this distance in dB.
    pub margin_db: f64,
    /// True when line-of-sight enforcement held this attempt back.
    pub blocked: bool,
}

/// One metrics row: a device after its local fit, or the server's
/// round-level evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundMetrics {
    /// Round index, 0-based.
    pub round: usize,
    /// Which node this row describes.
    pub device: NodeId,
    /// Accuracy on the node's own shard (server rows: on the pooled
    /// training data).
    pub train_accuracy: f64,
    /// Accuracy on the shared holdout.
    pub test_accuracy: f64,
    /// Cross-entropy of the row's model — on the shard for device rows, on
    /// the holdout for server rows.
    pub final_objective: f64,
    /// Objective evaluations the fit consumed (0 for server rows).
    pub evals_used: usize,
    /// Simulation clock after the node's transmission completed.
    pub cumulative_sim_time_s: f64,
    /// Total bits transmitted so far.
    pub cumulative_bits: u64,
}

/// One local training call, for auditing the warm-start pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct FitCall {
    /// Round index.
    pub round: usize,
    /// Satellite index.
    pub node: usize,
    /// Whether the fit resumed from received parameters.
    pub warm_start: bool,
    /// Objective evaluations consumed.
    pub evals_used: usize,
}

/// Everything one run produces.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    /// Device and server rows in emission order.
    pub metrics: Vec<RoundMetrics>,
    /// Every transmission attempt in clock order.
    pub events: Vec<CommEvent>,
    /// Every local fit in call order.
    pub fit_log: Vec<FitCall>,
    /// The global model after the final round.
    pub final_theta: ParamVector,
}

// ---------------------------------------------------------------------------
// Aggregation and evaluation
// ---------------------------------------------------------------------------

/// Elementwise weighted mean of parameter vectors: θ = Σ w_s·θ_s with
/// w_s = δ_s/δ. Weights must be nonnegative and sum to 1 within 1e-9.
pub fn fedavg(params: &[ParamVector], weights: &[f64]) -> Result<ParamVector, ProtocolError> {
    if params.is_empty() {
        return Err(ProtocolError::BadAggregation("no parameter vectors".into()));
    }
    if params.len() != weights.len() {
        return Err(ProtocolError::BadAggregation(format!(
            "{} parameter vectors but {} weights",
            params.len(),
            weights.len()
        )));
    }
    let dim = params[0].len();
    if let Some(bad) = params.iter().find(|p| p.len() != dim) {
        return Err(ProtocolError::BadAggregation(format!(
            "mixed parameter lengths {} and {}",
            dim,
            bad.len()
        )));
    }
    if let Some(w) = weights.iter().find(|&&w| !(w >= 0.0)) {
        return Err(ProtocolError::BadAggregation(format!("negative weight {w}")));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(ProtocolError::BadAggregation(format!(
            "weights sum to {total}, expected 1"
        )));
    }
    let mut values = vec![0.0; dim];
    for (theta, &w) in params.iter().zip(weights) {
        for (acc, v) in values.iter_mut().zip(&theta.values) {
            *acc += w * v;
        }
    }
    Ok(ParamVector { values })
}

/// Score a model on the shared holdout: (accuracy, cross-entropy).
/// In ring mode this is observability only — nothing feeds back.
pub fn server_eval(
    spec: &VqcSpec,
    theta: &ParamVector,
    holdout: &LabeledSet,
) -> Result<(f64, f64), ProtocolError> {
    if holdout.features.is_empty() {
        return Err(ProtocolError::EmptyHoldout);
    }
    let accuracy = vqc::accuracy(spec, &holdout.features, &holdout.labels, theta)?;
    let objective = vqc::loss(spec, &holdout.features, &holdout.onehot, theta)?;
    Ok((accuracy, objective))
}

// ---------------------------------------------------------------------------
// Shared run machinery
// ---------------------------------------------------------------------------

/// Serialized model size in bits for this architecture.
pub fn model_payload_bits(spec: &VqcSpec) -> u64 {
    (ParamVector::zeros(spec.param_count()).serialized_len() * 8) as u64
}

/// The server's ECI position: the ground station itself below 1 km of
/// configured altitude (or with none configured), otherwise an equatorial
/// circular orbit phased over the ground station's longitude at epoch.
fn server_position(constellation: &ConstellationConfig, t: f64) -> Result<Vec3, ProtocolError> {
    match constellation.geo_server_altitude_km {
        Some(alt) if alt >= 1.0 => {
            let orbit = OrbitSpec {
                semi_major_axis_km: R_EARTH_KM + alt,
                eccentricity: 0.0,
                inclination_deg: 0.0,
                raan_deg: 0.0,
                arg_latitude_epoch_deg: constellation.ground_station.lon_deg.rem_euclid(360.0),
                epoch_s: 0.0,
            };
            Ok(orbital::propagate(&orbit, t).position_km)
        }
        _ => {
            let gs = &constellation.ground_station;
            Ok(orbital::ground_station_eci(gs.lat_deg, gs.lon_deg, gs.alt_km, t)?)
        }
    }
}

/// Mutable bookkeeping shared by both protocol loops.
struct Clock<'a> {
    config: &'a SimConfig,
    orbits: Vec<OrbitSpec>,
    sim_time_s: f64,
    cumulative_bits: u64,
    events: Vec<CommEvent>,
}

impl<'a> Clock<'a> {
    fn new(config: &'a SimConfig) -> Result<Self, ProtocolError> {
        Ok(Clock {
            config,
            orbits: orbital::build_constellation(&config.constellation)?,
            sim_time_s: 0.0,
            cumulative_bits: 0,
            events: Vec::new(),
        })
    }

    /// ECI position of a node at the current clock.
    fn position(&self, node: NodeId) -> Result<Vec3, ProtocolError> {
        match node {
            NodeId::Sat(i) => Ok(orbital::propagate(&self.orbits[i], self.sim_time_s).position_km),
            NodeId::Server => server_position(&self.config.constellation, self.sim_time_s),
        }
    }

    /// Transmit the model from `src` to `dst` over `link`: wait out any
    /// line-of-sight outage (recording each blocked attempt), record the
    /// event, and advance the clock by the transmission delay.
    fn transmit(
        &mut self,
        src: NodeId,
        dst: NodeId,
        link: &LinkSpec,
        payload_bits: u64,
    ) -> Result<(), ProtocolError> {
        if self.config.enforce_line_of_sight {
            let mut attempts = 0;
            loop {
                let a = self.position(src)?;
                let b = self.position(dst)?;
                if orbital::line_of_sight(&a, &b, 0.0)? {
                    break;
                }
                let distance_km = orbital::distance_points(&a, &b);
                let report = linkbudget::link_budget(link, distance_km)?;
                let delay_s =
                    linkbudget::transmission_delay(payload_bits, link.bitrate_bps, distance_km)?;
                self.events.push(CommEvent {
                    sim_time_s: self.sim_time_s,
                    src,
                    dst,
                    payload_bits,
                    distance_km,
                    delay_s,
                    margin_db: report.margin_db,
                    blocked: true,
                });
                attempts += 1;
                if attempts >= VISIBILITY_ATTEMPTS {
                    return Err(ProtocolError::VisibilityTimeout { src, dst, attempts });
                }
                self.sim_time_s += self.config.visibility_step_s;
            }
        }
        let a = self.position(src)?;
        let b = self.position(dst)?;
        let distance_km = orbital::distance_points(&a, &b);
        let report = linkbudget::link_budget(link, distance_km)?;
        let delay_s = linkbudget::transmission_delay(payload_bits, link.bitrate_bps, distance_km)?;
        self.events.push(CommEvent {
            sim_time_s: self.sim_time_s,
            src,
            dst,
            payload_bits,
            distance_km,
            delay_s,
            margin_db: report.margin_db,
            blocked: false,
        });
        self.sim_time_s += delay_s;
        self.cumulative_bits += payload_bits;
        Ok(())
    }
}

fn validate_run_inputs(
    config: &SimConfig,
    shards: &[LabeledSet],
    holdout: &LabeledSet,
) -> Result<(), ProtocolError> {
    config.validate()?;
    if shards.len() != config.n_sats {
        return Err(ProtocolError::ShardMismatch {
            shards: shards.len(),
            sats: config.n_sats,
        });
    }
    if let Some(i) = shards.iter().position(|s| s.features.is_empty()) {
        return Err(ProtocolError::EmptyShard(i));
    }
    if holdout.features.is_empty() {
        return Err(ProtocolError::EmptyHoldout);
    }
    Ok(())
}

/// Pool every shard into one training set for server-row accuracy.
fn pooled_training_set(shards: &[LabeledSet]) -> LabeledSet {
    let mut pool = LabeledSet {
        features: Vec::new(),
        labels: Vec::new(),
        onehot: Vec::new(),
    };
    for shard in shards {
        pool.features.extend(shard.features.iter().cloned());
        pool.labels.extend(shard.labels.iter().cloned());
        pool.onehot.extend(shard.onehot.iter().cloned());
    }
    pool
}

/// Append the round-level server evaluation row.
fn push_server_row(
    metrics: &mut Vec<RoundMetrics>,
    config: &SimConfig,
    round: usize,
    theta: &ParamVector,
    pool: &LabeledSet,
    holdout: &LabeledSet,
    clock: &Clock,
) -> Result<(), ProtocolError> {
    let (test_accuracy, final_objective) = server_eval(&config.vqc, theta, holdout)?;
    let train_accuracy = vqc::accuracy(&config.vqc, &pool.features, &pool.labels, theta)?;
    metrics.push(RoundMetrics {
        round,
        device: NodeId::Server,
        train_accuracy,
        test_accuracy,
        final_objective,
        evals_used: 0,
        cumulative_sim_time_s: clock.sim_time_s,
        cumulative_bits: clock.cumulative_bits,
    });
    Ok(())
}

// ---------------------------------------------------------------------------
// Ring protocol
// ---------------------------------------------------------------------------

/// Run the serverless ring protocol.
///
/// Round r, node i: fit on shard i (cold seeded start only at r = 0, i = 0;
/// warm start from the received model otherwise), then transmit to node
/// (i+1) mod n over the inter-satellite link. After each full round the
/// hypothetical server scores the circulating model on the holdout. The
/// returned `final_theta` is the model held after the last transmission of
/// the last round.
pub fn run_orb_qfl(
    config: &SimConfig,
    shards: &[LabeledSet],
    holdout: &LabeledSet,
) -> Result<RunOutput, ProtocolError> {
    validate_run_inputs(config, shards, holdout)?;
    let payload_bits = model_payload_bits(&config.vqc);
    let pool = pooled_training_set(shards);
    let mut clock = Clock::new(config)?;
    let mut metrics = Vec::new();
    let mut fit_log = Vec::new();
    let mut init_rng = substream(config.seed, THETA_INIT_LABEL);
    let mut theta: Option<ParamVector> = None;

    for round in 0..config.rounds {
        for node in 0..config.n_sats {
            let shard = &shards[node];
            let warm_start = theta.is_some();
            let fitted = vqc::fit(
                &config.vqc,
                &shard.features,
                &shard.onehot,
                theta.as_ref(),
                warm_start,
                &config.optimizer,
                &mut init_rng,
            )?;
            let evals_used = fitted.trace.evaluations.len();
            fit_log.push(FitCall { round, node, warm_start, evals_used });
            clock.sim_time_s += config.local_train_walltime_s;

            let dst = (node + 1) % config.n_sats;
            clock.transmit(NodeId::Sat(node), NodeId::Sat(dst), &config.s2s_link, payload_bits)?;

            let train_accuracy =
                vqc::accuracy(&config.vqc, &shard.features, &shard.labels, &fitted.theta)?;
            let test_accuracy =
                vqc::accuracy(&config.vqc, &holdout.features, &holdout.labels, &fitted.theta)?;
            let final_objective =
                vqc::loss(&config.vqc, &shard.features, &shard.onehot, &fitted.theta)?;
            metrics.push(RoundMetrics {
                round,
                device: NodeId::Sat(node),
                train_accuracy,
                test_accuracy,
                final_objective,
                evals_used,
                cumulative_sim_time_s: clock.sim_time_s,
                cumulative_bits: clock.cumulative_bits,
            });
            theta = Some(fitted.theta);
        }
        let current = theta.as_ref().expect("at least one fit per round");
        push_server_row(&mut metrics, config, round, current, &pool, holdout, &clock)?;
    }

    Ok(RunOutput {
        metrics,
        events: clock.events,
        fit_log,
        final_theta: theta.expect("rounds ≥ 1"),
    })
}

// ---------------------------------------------------------------------------
// Server protocol
// ---------------------------------------------------------------------------

/// Run the server-aggregated FedAvg baseline.
///
/// The global model is drawn from the same substream as ring mode's cold
/// start. Per round: every satellite warm-starts from the global model,
/// fits its shard, and uplinks the update; the server averages the updates
/// weighted by shard size and downlinks the result to every satellite.
pub fn run_server_qfl(
    config: &SimConfig,
    shards: &[LabeledSet],
    holdout: &LabeledSet,
) -> Result<RunOutput, ProtocolError> {
    validate_run_inputs(config, shards, holdout)?;
    let payload_bits = model_payload_bits(&config.vqc);
    let pool = pooled_training_set(shards);
    let mut clock = Clock::new(config)?;
    let mut metrics = Vec::new();
    let mut fit_log = Vec::new();
    let mut theta_g = vqc::cold_init(&config.vqc, &mut substream(config.seed, THETA_INIT_LABEL));
    let total_rows: usize = shards.iter().map(|s| s.features.len()).sum();

    for round in 0..config.rounds {
        let mut updates = Vec::with_capacity(config.n_sats);
        let mut weights = Vec::with_capacity(config.n_sats);
        for node in 0..config.n_sats {
            let shard = &shards[node];
            let fitted = vqc::fit(
                &config.vqc,
                &shard.features,
                &shard.onehot,
                Some(&theta_g),
                true,
                &config.optimizer,
                // Warm starts never draw from the stream; any seed works.
                &mut substream(config.seed, THETA_INIT_LABEL),
            )?;
            let evals_used = fitted.trace.evaluations.len();
            fit_log.push(FitCall { round, node, warm_start: true, evals_used });
            clock.sim_time_s += config.local_train_walltime_s;

            clock.transmit(NodeId::Sat(node), NodeId::Server, &config.s2g_link, payload_bits)?;

            let train_accuracy =
                vqc::accuracy(&config.vqc, &shard.features, &shard.labels, &fitted.theta)?;
            let test_accuracy =
                vqc::accuracy(&config.vqc, &holdout.features, &holdout.labels, &fitted.theta)?;
            let final_objective =
                vqc::loss(&config.vqc, &shard.features, &shard.onehot, &fitted.theta)?;
            metrics.push(RoundMetrics {
                round,
                device: NodeId::Sat(node),
                train_accuracy,
                test_accuracy,
                final_objective,
                evals_used,
                cumulative_sim_time_s: clock.sim_time_s,
                cumulative_bits: clock.cumulative_bits,
            });
            weights.push(shard.features.len() as f64 / total_rows as f64);
            updates.push(fitted.theta);
        }
        theta_g = fedavg(&updates, &weights)?;
        for node in 0..config.n_sats {
            clock.transmit(NodeId::Server, NodeId::Sat(node), &config.g2s_link, payload_bits)?;
        }
        push_server_row(&mut metrics, config, round, &theta_g, &pool, holdout, &clock)?;
    }

    Ok(RunOutput {
        metrics,
        events: clock.events,
        fit_log,
        final_theta: theta_g,
    })
}

/// Dispatch on `config.mode`.
pub fn run(
    config: &SimConfig,
    shards: &[LabeledSet],
    holdout: &LabeledSet,
) -> Result<RunOutput, ProtocolError> {
    match config.mode {
        Mode::Orb => run_orb_qfl(config, shards, holdout),
        Mode::Server => run_server_qfl(config, shards, holdout),
    }
}

// ---------------------------------------------------------------------------
// Convergence bound
// ---------------------------------------------------------------------------

/// Constants of the convergence bound. All reals must be nonnegative; the
/// radius schedule is truncated (or its last value repeated) to the round
/// being evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundConstants {
    /// Lipschitz constant L of the objective.
    pub l: f64,
    /// Strong-convexity parameter μ.
    pub mu: f64,
    /// Trust-region radius schedule Δ_t, t = 1, 2, …; the last entry
    /// repeats beyond its end.
    pub delta_schedule: Vec<f64>,
    /// Device count N.
    pub n_devices: usize,
    /// Local steps per round K.
    pub k_local: usize,
    /// Round count R (used by callers emitting one row per round).
    pub rounds: usize,
    /// Communication-latency coefficient γ_c.
    pub gamma_c: f64,
    /// Mean per-round latency τ_c.
    pub tau_c: f64,
    /// Packet-loss coefficient δ_c.
    pub delta_c: f64,
    /// Packet-loss rate ρ_loss.
    pub rho_loss: f64,
    /// Model payload size ρ.
    pub rho: f64,
    /// Bandwidth-impact coefficient ε_c.
    pub epsilon_c: f64,
    /// Link bandwidth B.
    pub b: f64,
    /// Time horizon T.
    pub t_horizon: f64,
    /// Quantum-noise coefficient α_q.
    pub alpha_q: f64,
    /// Quantum noise scale σ_q.
    pub sigma_q: f64,
    /// Qubit count N_q.
    pub n_q: usize,
    /// Squared distance ‖θ_0 − θ*‖² of the start from the optimum.
    pub theta0_dist_sq: f64,
}

impl BoundConstants {
    fn validate(&self) -> Result<(), ProtocolError> {
        let named = [
            ("L", self.l),
            ("mu", self.mu),
            ("gamma_c", self.gamma_c),
            ("tau_c", self.tau_c),
            ("delta_c", self.delta_c),
            ("rho_loss", self.rho_loss),
            ("rho", self.rho),
            ("epsilon_c", self.epsilon_c),
            ("B", self.b),
            ("T", self.t_horizon),
            ("alpha_q", self.alpha_q),
            ("sigma_q", self.sigma_q),
            ("theta0_dist_sq", self.theta0_dist_sq),
        ];
        for (name, value) in named {
            if !(value >= 0.0) {
                return Err(ProtocolError::BadBoundConstants(format!(
                    "{name} = {value} must be nonnegative"
                )));
            }
        }
        if self.delta_schedule.is_empty() {
            return Err(ProtocolError::BadBoundConstants(
                "radius schedule is empty".into(),
            ));
        }
        if let Some(bad) = self.delta_schedule.iter().find(|&&d| !(d >= 0.0)) {
            return Err(ProtocolError::BadBoundConstants(format!(
                "radius {bad} must be nonnegative"
            )));
        }
        Ok(())
    }

    /// Δ_t for a 1-based step index, repeating the last schedule entry.
    fn delta_at(&self, t: usize) -> f64 {
        self.delta_schedule[(t - 1).min(self.delta_schedule.len() - 1)]
    }
}

/// A ratio term that is defined as 0 when its numerator is 0 even if the
/// denominator is 0, and an error when only the denominator is 0.
fn guarded_ratio(numerator: f64, denominator: f64, what: &str) -> Result<f64, ProtocolError> {
    if numerator == 0.0 {
        Ok(0.0)
    } else if denominator == 0.0 {
        Err(ProtocolError::BadBoundConstants(format!(
            "{what} is zero but its term's numerator {numerator} is not"
        )))
    } else {
        Ok(numerator / denominator)
    }
}

/// Evaluate the convergence bound after `round` rounds (1-based):
///
/// `L·Σ_{t=1..r}Δ_t + μ·‖θ0−θ*‖²·exp(−μ·Δ_r·r/2) + Δ_r/(N·K) + L·Δ_r²/(N·K)
///  + γ_c·τ_c·r + δ_c·ρ_loss·ρ + ε_c·(ρ/B)·T + α_q·σ_q²·N_q`
///
/// Division terms with a zero numerator are 0 regardless of N, K, or B;
/// a zero denominator under a nonzero numerator is an error.
pub fn theorem1_bound(constants: &BoundConstants, round: usize) -> Result<f64, ProtocolError> {
    constants.validate()?;
    if round == 0 {
        return Err(ProtocolError::BadBoundConstants(
            "round index must be ≥ 1".into(),
        ));
    }
    let r = round as f64;
    let delta_r = constants.delta_at(round);
    let radius_sum: f64 = (1..=round).map(|t| constants.delta_at(t)).sum();
    let nk = (constants.n_devices * constants.k_local) as f64;

    let drift = constants.l * radius_sum;
    let contraction = constants.mu
        * constants.theta0_dist_sq
        * (-constants.mu * delta_r * r / 2.0).exp();
    let averaging = guarded_ratio(delta_r, nk, "N·K")?;
    let curvature = guarded_ratio(constants.l * delta_r * delta_r, nk, "N·K")?;
    let latency = constants.gamma_c * constants.tau_c * r;
    let loss_term = constants.delta_c * constants.rho_loss * constants.rho;
    let bandwidth = constants.epsilon_c * guarded_ratio(constants.rho, constants.b, "B")? * constants.t_horizon;
    let quantum = constants.alpha_q * constants.sigma_q * constants.sigma_q * constants.n_q as f64;

    Ok(drift + contraction + averaging + curvature + latency + loss_term + bandwidth + quantum)
}

// ---------------------------------------------------------------------------
// CSV emission
// ---------------------------------------------------------------------------

/// Header of the metrics CSV.
pub const METRICS_CSV_HEADER: &str =
    "mode,round,device,train_acc,test_acc,objective,evals,sim_time_s,bits_cum";

/// Header of the events CSV.
pub const EVENTS_CSV_HEADER: &str =
    "mode,time_s,src,dst,bits,dist_km,delay_s,margin_db,blocked";

/// Header of the bound CSV.
pub const BOUND_CSV_HEADER: &str = "round,bound_value";

/// Metrics rows (no header) for one mode, LF-terminated.
pub fn metrics_csv_rows(mode: Mode, metrics: &[RoundMetrics]) -> String {
    let mut out = String::new();
    for m in metrics {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            mode,
            m.round,
            m.device,
            m.train_accuracy,
            m.test_accuracy,
            m.final_objective,
            m.evals_used,
            m.cumulative_sim_time_s,
            m.cumulative_bits
        ));
    }
    out
}

/// Complete metrics CSV for one mode.
pub fn metrics_csv(mode: Mode, metrics: &[RoundMetrics]) -> String {
    format!("{METRICS_CSV_HEADER}\n{}", metrics_csv_rows(mode, metrics))
}

/// Event rows (no header) for one mode, LF-terminated.
pub fn events_csv_rows(mode: Mode, events: &[CommEvent]) -> String {
    let mut out = String::new();
    for e in events {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            mode, e.sim_time_s, e.src, e.dst, e.payload_bits, e.distance_km, e.delay_s,
            e.margin_db, e.blocked
        ));
    }
    out
}

/// Complete events CSV for one mode.
pub fn events_csv(mode: Mode, events: &[CommEvent]) -> String {
    format!("{EVENTS_CSV_HEADER}\n{}", events_csv_rows(mode, events))
}

/// Complete bound CSV from (round, value) rows.
pub fn bound_csv(rows: &[(usize, f64)]) -> String {
    let mut out = format!("{BOUND_CSV_HEADER}\n");
    for (round, value) in rows {
        out.push_str(&format!("{round},{value}\n"));
    }
    out
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

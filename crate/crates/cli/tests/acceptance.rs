//! Release-gate acceptance checks for the whole workspace.
//!
//! Each test verifies one gate end to end and prints a single
//! `[PASS]`/`[FAIL]` line (run with `--nocapture` to see them); the Statlog
//! gate prints `[SKIP]` when the dataset files are not available. The gates
//! pin the physics oracles, the optimizer's trust-region guarantees, the
//! statevector simulator against a dense-matrix oracle, the protocol traces,
//! desk-scale learning on synthetic data, and byte-level determinism of the
//! comparison pipeline.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;

use satqfl::cobyla::{minimize, regret, OptimizerConfig};
use satqfl::constants::R_EARTH_KM;
use satqfl::dataio::{self, Dataset, LabeledSet};
use satqfl::linkbudget::{fspl, link_budget, margin_vs_bitrate, LinkSpec};
use satqfl::orbital::{
    distance_points, orbital_period_s, propagate, ConstellationConfig, GroundStation, OrbitSpec,
    SpacingMode,
};
use satqfl::protocol::{self, Mode, NodeId, RoundMetrics, SimConfig};
use satqfl::qsim::{apply_gate, Angle, GateOp, StateVector};
use satqfl::rng::substream;
use satqfl::vqc::{
    forward, loss, AnsatzSpec, ClassifierSpec, Encoding, Entangle, FeatureMapSpec, ParamVector,
    VqcSpec,
};

// ---------------------------------------------------------------------------
// Reporting
// ---------------------------------------------------------------------------

/// Print one `[PASS]`/`[FAIL]` line for a gate, then enforce it.
fn report(ok: bool, gate: &str, detail: &str) {
    let tag = if ok { "[PASS]" } else { "[FAIL]" };
    println!("{tag} {gate}: {detail}");
    assert!(ok, "{gate}: {detail}");
}

// ---------------------------------------------------------------------------
// Link budget and orbit oracles
// ---------------------------------------------------------------------------

#[test]
fn c01_isl_margin_at_a_72_degree_ring_chord() {
    // Two satellites 72° apart on a 500 km circular orbit sit one ring hop
    // apart in a five-satellite constellation; the chord through the Earth
    // frame is 2·(R+h)·sin(36°).
    let chord_km = 2.0 * (R_EARTH_KM + 500.0) * 36.0f64.to_radians().sin();
    let mut spec = LinkSpec::preset_l3();
    spec.tx_power_dbw = 16.0;
    let rep = link_budget(&spec, chord_km).expect("budget over a positive distance");
    let ok = (47.0..=53.0).contains(&rep.margin_db);
    report(
        ok,
        "inter-satellite margin at a 72-degree ring chord",
        &format!(
            "chord {chord_km:.1} km at 16 dBW gives margin {:.2} dB (want 47..=53 dB)",
            rep.margin_db
        ),
    );
}

#[test]
fn c02_path_loss_anchor_and_doubling_law() {
    let anchor = fspl(500.0, 2.0e9).expect("positive distance and frequency");
    let anchor_ok = (anchor - 152.45).abs() <= 0.01;
    // Doubling the distance must add exactly 20·log10(2) dB at any distance.
    let expected_step = 20.0 * 2.0f64.log10();
    let mut worst = 0.0f64;
    for k in 1..=100 {
        let d = 50.0 * k as f64;
        let step = fspl(2.0 * d, 2.0e9).unwrap() - fspl(d, 2.0e9).unwrap();
        worst = worst.max((step - expected_step).abs());
    }
    report(
        anchor_ok && worst <= 1e-6,
        "free-space path loss anchor and doubling law",
        &format!("fspl(500 km, 2 GHz) = {anchor:.5} dB; worst doubling error {worst:.2e} dB"),
    );
}

#[test]
fn c03_orbit_period_and_position_periodicity() {
    let a_km = R_EARTH_KM + 500.0;
    let period_s = orbital_period_s(a_km);
    let period_ok = (period_s - 5677.0).abs() <= 1.0;
    let orbit = OrbitSpec {
        semi_major_axis_km: a_km,
        eccentricity: 0.0,
        inclination_deg: 60.0,
        raan_deg: 30.0,
        arg_latitude_epoch_deg: 40.0,
        epoch_s: 0.0,
    };
    // One full period later the satellite must be back where it started.
    let before = propagate(&orbit, 123.0);
    let after = propagate(&orbit, 123.0 + period_s);
    let drift_km = distance_points(&before.position_km, &after.position_km);
    report(
        period_ok && drift_km < 1e-6,
        "orbital period and position periodicity",
        &format!("period {period_s:.3} s (want 5677 ± 1); drift after one period {drift_km:.2e} km"),
    );
}

#[test]
fn c04_margin_falls_exactly_ten_db_per_bitrate_decade() {
    let spec = LinkSpec::preset_l3();
    let rates: Vec<f64> = (1..=100).map(|mbps| mbps as f64 * 1e6).collect();
    let rows = margin_vs_bitrate(&spec, 2000.0, &rates).expect("valid sweep");
    let strictly_decreasing = rows.windows(2).all(|w| w[1].1 < w[0].1);
    let margin_at = |bps: f64| rows.iter().find(|r| r.0 == bps).unwrap().1;
    let first_decade = margin_at(1e6) - margin_at(1e7);
    let second_decade = margin_at(1e7) - margin_at(1e8);
    let decades_ok =
        (first_decade - 10.0).abs() <= 1e-9 && (second_decade - 10.0).abs() <= 1e-9;
    report(
        strictly_decreasing && decades_ok,
        "margin falls with bitrate",
        &format!(
            "strictly decreasing over 1..=100 Mbps; decade drops {first_decade:.12} and \
             {second_decade:.12} dB"
        ),
    );
}

// ---------------------------------------------------------------------------
// Optimizer gates
// ---------------------------------------------------------------------------

#[test]
fn c05_optimizer_convergence_and_trust_step_bound() {
    let started = Instant::now();
    let config = OptimizerConfig::default();

    // A 2-D convex quadratic with known minimum (1, −2).
    let f = |x: &[f64]| (x[0] - 1.0).powi(2) + (x[1] + 2.0).powi(2);
    let (best, trace) = minimize(f, &[0.0, 0.0], &config).expect("well-posed problem");
    let evals = trace.evaluations.len();
    let miss = ((best[0] - 1.0).powi(2) + (best[1] + 2.0).powi(2)).sqrt();
    let converged = evals <= 100 && miss < 1e-2;

    // Every accepted step must stay inside the trust radius that proposed it,
    // across a family of seeded random diagonal quadratics.
    let mut accepted_steps = 0usize;
    let mut steps_ok = true;
    for seed in 0..20u64 {
        let mut rng = substream(seed, "quadratic-family");
        let center: Vec<f64> = (0..3).map(|_| rng.random_range(-2.0..2.0)).collect();
        let scale: Vec<f64> = (0..3).map(|_| rng.random_range(0.5..3.0)).collect();
        let x0: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
        let g = |x: &[f64]| {
            x.iter()
                .zip(&center)
                .zip(&scale)
                .map(|((xi, ci), ai)| ai * (xi - ci) * (xi - ci))
                .sum::<f64>()
        };
        let (_, tr) = minimize(g, &x0, &config).expect("well-posed problem");
        for it in tr.iterations.iter().filter(|it| it.accepted) {
            accepted_steps += 1;
            if it.step_norm > it.radius + 1e-12 {
                steps_ok = false;
            }
        }
    }
    let elapsed = started.elapsed();
    report(
        converged && steps_ok && elapsed < Duration::from_secs(5),
        "optimizer convergence and trust-step bound",
        &format!(
            "quadratic minimum missed by {miss:.2e} in {evals} evaluations; {accepted_steps} \
             accepted steps all within their radius; {elapsed:.2?}"
        ),
    );
}

#[test]
fn c06_regret_stays_under_the_radius_sum() {
    let started = Instant::now();
    let config = OptimizerConfig::default();
    let mut worst_ratio = 0.0f64;
    let mut all_ok = true;
    for seed in 0..10u64 {
        // Start within about twice the initial trust radius of the optimum.
        let x0 = substream(seed, "regret-start").random_range(-1.7..1.7);
        let f = |x: &[f64]| (x[0] - 0.3).abs();
        let (_, trace) = minimize(f, &[x0], &config).expect("well-posed problem");
        let (observed, bound) = regret(&trace, 0.0, 1.0).expect("f* below the trace minimum");
        if observed > bound {
            all_ok = false;
        }
        worst_ratio = worst_ratio.max(observed / bound);
    }
    let elapsed = started.elapsed();
    report(
        all_ok && elapsed < Duration::from_secs(5),
        "cumulative regret within the Lipschitz radius-sum bound",
        &format!("10 seeded starts on |x − 0.3|; worst regret/bound ratio {worst_ratio:.3}; {elapsed:.2?}"),
    );
}

// ---------------------------------------------------------------------------
// Dense-matrix oracle for the statevector simulator
// ---------------------------------------------------------------------------

type Matrix = Vec<Vec<Complex64>>;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn identity(dim: usize) -> Matrix {
    let mut m = vec![vec![zero(); dim]; dim];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Complex64::new(1.0, 0.0);
    }
    m
}

fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ra, ca, rb, cb) = (a.len(), a[0].len(), b.len(), b[0].len());
    let mut out = vec![vec![zero(); ca * cb]; ra * rb];
    for ia in 0..ra {
        for ja in 0..ca {
            for ib in 0..rb {
                for jb in 0..cb {
                    out[ia * rb + ib][ja * cb + jb] = a[ia][ja] * b[ib][jb];
                }
            }
        }
    }
    out
}

/// Dense matrix of a single-qubit gate on `target` in an n-qubit register.
/// Qubit k indexes bit k of the state, so the Kronecker product runs from
/// qubit n−1 (high bits) down to qubit 0.
fn single_qubit_matrix(n: usize, target: usize, g: &Matrix) -> Matrix {
    let i2 = identity(2);
    let mut m = identity(1);
    for q in (0..n).rev() {
        m = kron(&m, if q == target { g } else { &i2 });
    }
    m
}

/// Dense controlled-X matrix by basis-state enumeration.
fn cx_matrix(n: usize, control: usize, target: usize) -> Matrix {
    let dim = 1usize << n;
    let mut m = vec![vec![zero(); dim]; dim];
    for col in 0..dim {
        let row = if col & (1 << control) != 0 { col ^ (1 << target) } else { col };
        m[row][col] = Complex64::new(1.0, 0.0);
    }
    m
}

/// Dense controlled-Z matrix by basis-state enumeration.
fn cz_matrix(n: usize, a: usize, b: usize) -> Matrix {
    let dim = 1usize << n;
    let mask = (1usize << a) | (1usize << b);
    let mut m = vec![vec![zero(); dim]; dim];
    for col in 0..dim {
        let sign = if col & mask == mask { -1.0 } else { 1.0 };
        m[col][col] = Complex64::new(sign, 0.0);
    }
    m
}

fn matvec(m: &Matrix, v: &[Complex64]) -> Vec<Complex64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// A seeded random normalized state on n qubits.
fn random_state(n: usize, rng: &mut impl Rng) -> StateVector {
    let mut amps: Vec<Complex64> = (0..1usize << n)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    StateVector::from_amplitudes(amps).expect("normalized by construction")
}

fn max_amp_diff(got: &StateVector, want: &[Complex64]) -> f64 {
    got.amplitudes()
        .iter()
        .zip(want)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
}

#[test]
fn c07_statevector_matches_the_dense_oracle() {
    let started = Instant::now();
    let mut rng = substream(7, "oracle-states");
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut worst = 0.0f64;

    for n in 1..=4usize {
        // Every single-qubit gate on every target.
        for target in 0..n {
            let theta = rng.random_range(-3.0..3.0);
            let half = theta / 2.0;
            let gates: Vec<(GateOp, Matrix)> = vec![
                (
                    GateOp::H { target },
                    vec![vec![h, h], vec![h, -h]],
                ),
                (
                    GateOp::Rx { target, angle: Angle::Fixed(theta) },
                    vec![
                        vec![Complex64::new(half.cos(), 0.0), Complex64::new(0.0, -half.sin())],
                        vec![Complex64::new(0.0, -half.sin()), Complex64::new(half.cos(), 0.0)],
                    ],
                ),
                (
                    GateOp::Ry { target, angle: Angle::Fixed(theta) },
                    vec![
                        vec![Complex64::new(half.cos(), 0.0), Complex64::new(-half.sin(), 0.0)],
                        vec![Complex64::new(half.sin(), 0.0), Complex64::new(half.cos(), 0.0)],
                    ],
                ),
                (
                    GateOp::Rz { target, angle: Angle::Fixed(theta) },
                    vec![
                        vec![Complex64::new(half.cos(), -half.sin()), zero()],
                        vec![zero(), Complex64::new(half.cos(), half.sin())],
                    ],
                ),
            ];
            for (op, g2) in gates {
                let state = random_state(n, &mut rng);
                let got = apply_gate(&state, &op, &[], &[]).expect("valid gate");
                let want = matvec(&single_qubit_matrix(n, target, &g2), state.amplitudes());
                worst = worst.max(max_amp_diff(&got, &want));
            }
        }
        // Every two-qubit gate on every ordered pair.
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                let state = random_state(n, &mut rng);
                let got = apply_gate(&state, &GateOp::Cx { control: a, target: b }, &[], &[])
                    .expect("valid gate");
                let want = matvec(&cx_matrix(n, a, b), state.amplitudes());
                worst = worst.max(max_amp_diff(&got, &want));

                let state = random_state(n, &mut rng);
                let got =
                    apply_gate(&state, &GateOp::Cz { a, b }, &[], &[]).expect("valid gate");
                let want = matvec(&cz_matrix(n, a, b), state.amplitudes());
                worst = worst.max(max_amp_diff(&got, &want));
            }
        }
    }
    let gates_ok = worst <= 1e-9;

    // Forward outputs are points on the probability simplex.
    let spec = VqcSpec {
        feature_map: FeatureMapSpec { n_qubits: 3, reps: 2, encoding: Encoding::Zz },
        ansatz: AnsatzSpec { n_qubits: 3, reps: 2, entangle: Entangle::Line },
        classifier: ClassifierSpec::modular(5),
    };
    let mut simplex_ok = true;
    for _ in 0..20 {
        let x: Vec<f64> = (0..3).map(|_| rng.random_range(0.0..1.0)).collect();
        let theta = ParamVector {
            values: (0..spec.param_count())
                .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
                .collect(),
        };
        let probs = forward(&spec, &x, &theta).expect("valid forward pass");
        let sum: f64 = probs.iter().sum();
        if probs.len() != 5
            || probs.iter().any(|&p| p < -1e-12)
            || (sum - 1.0).abs() > 1e-9
        {
            simplex_ok = false;
        }
    }

    // A circuit that provably emits the uniform distribution: the Hadamard
    // layer alone (zero feature, zero parameters; the lone CZ only flips a
    // phase), with each of the 4 basis states its own class.
    let uniform_spec = VqcSpec {
        feature_map: FeatureMapSpec { n_qubits: 2, reps: 1, encoding: Encoding::Angle },
        ansatz: AnsatzSpec { n_qubits: 2, reps: 1, entangle: Entangle::Ring },
        classifier: ClassifierSpec::modular(4),
    };
    let uniform_loss = loss(
        &uniform_spec,
        &[vec![0.0, 0.0]],
        &[vec![1.0, 0.0, 0.0, 0.0]],
        &ParamVector::zeros(uniform_spec.param_count()),
    )
    .expect("valid loss");
    let loss_ok = (uniform_loss - 4.0f64.ln()).abs() <= 1e-9;

    let elapsed = started.elapsed();
    report(
        gates_ok && simplex_ok && loss_ok && elapsed < Duration::from_secs(10),
        "statevector simulator against the dense oracle",
        &format!(
            "worst amplitude error {worst:.2e} over all 1- and 2-qubit gates on up to 4 qubits; \
             forward outputs on the simplex; uniform-output loss {uniform_loss:.12} vs ln 4; \
             {elapsed:.2?}"
        ),
    );
}

// ---------------------------------------------------------------------------
// Protocol gates
// ---------------------------------------------------------------------------

/// Blob shards plus a holdout, built the same way the CLI builds them.
fn blob_shards(
    n_sats: usize,
    qubits: usize,
    classes: usize,
    per_class: usize,
    seed: u64,
) -> (Vec<LabeledSet>, LabeledSet, usize) {
    let full = dataio::synthetic_blobs(per_class, classes, qubits, 0.5, seed).unwrap();
    let n_classes = full.n_classes();
    let (train, test) = dataio::split(&full, 0.9, seed).unwrap();
    let plan = dataio::partition(&train, n_sats, seed).unwrap();
    let shards = plan
        .shards
        .iter()
        .map(|idx| LabeledSet::from_dataset(&dataio::subset(&train, idx).unwrap()).unwrap())
        .collect();
    let holdout = LabeledSet::from_dataset(&test).unwrap();
    (shards, holdout, n_classes)
}

/// A simulation config over the default constellation and link presets.
fn sim(mode: Mode, n_sats: usize, rounds: usize, qubits: usize, classes: usize, max_fun: usize) -> SimConfig {
    SimConfig {
        mode,
        rounds,
        n_sats,
        constellation: ConstellationConfig {
            n_sats,
            altitude_km: 500.0,
            inclination_deg: 60.0,
            spacing_mode: SpacingMode::InPlaneSpaced,
            ground_station: GroundStation { lat_deg: 0.0, lon_deg: 0.0, alt_km: 0.02 },
            geo_server_altitude_km: None,
        },
        s2s_link: LinkSpec::preset_l3(),
        s2g_link: LinkSpec::preset_l2(),
        g2s_link: LinkSpec::preset_l1(),
        seed: 42,
        vqc: VqcSpec {
            feature_map: FeatureMapSpec { n_qubits: qubits, reps: 1, encoding: Encoding::Angle },
            ansatz: AnsatzSpec { n_qubits: qubits, reps: 2, entangle: Entangle::Ring },
            classifier: ClassifierSpec::modular(classes),
        },
        optimizer: OptimizerConfig { rho_begin: 1.0, rho_end: 1e-4, max_fun },
        enforce_line_of_sight: false,
        visibility_step_s: 60.0,
        local_train_walltime_s: 0.0,
    }
}

/// The hypothetical-server rows of a metrics trace, in round order.
fn server_rows(metrics: &[RoundMetrics]) -> Vec<&RoundMetrics> {
    metrics.iter().filter(|m| m.device == NodeId::Server).collect()
}

#[test]
fn c08_protocol_traces_and_aggregation_identity() {
    let started = Instant::now();

    // Ring mode, two satellites, one round: two fits (second warm), two hops.
    let (shards, holdout, classes) = blob_shards(2, 2, 2, 15, 42);
    let ring = protocol::run_orb_qfl(&sim(Mode::Orb, 2, 1, 2, classes, 10), &shards, &holdout)
        .expect("valid ring run");
    let ring_ok = ring.fit_log.len() == 2
        && !ring.fit_log[0].warm_start
        && ring.fit_log[1].warm_start
        && ring.events.len() == 2;

    // Server mode, five satellites, two rounds: 2·n·R = 20 transmissions.
    let (shards, holdout, classes) = blob_shards(5, 2, 2, 15, 42);
    let server =
        protocol::run_server_qfl(&sim(Mode::Server, 5, 2, 2, classes, 10), &shards, &holdout)
            .expect("valid server run");
    let server_ok = server.events.len() == 20;

    // Averaging identical models must reproduce the model exactly.
    let v = ParamVector { values: vec![0.25, -1.5, 3.0, 0.0, 2.724] };
    let avg = protocol::fedavg(&[v.clone(), v.clone(), v.clone()], &[0.2, 0.3, 0.5])
        .expect("valid aggregation");
    let fedavg_ok = avg == v;

    let elapsed = started.elapsed();
    report(
        ring_ok && server_ok && fedavg_ok && elapsed < Duration::from_secs(30),
        "protocol traces and aggregation identity",
        &format!(
            "ring n=2 R=1 made {} fits ({} warm) and {} hops; server n=5 R=2 made {} \
             transmissions; averaging identical models is exact; {elapsed:.2?}",
            ring.fit_log.len(),
            ring.fit_log.iter().filter(|f| f.warm_start).count(),
            ring.events.len(),
            server.events.len()
        ),
    );
}

#[test]
fn c09_ring_training_learns_separable_blobs() {
    let started = Instant::now();
    let (shards, holdout, classes) = blob_shards(4, 2, 2, 80, 42);
    let out = protocol::run_orb_qfl(&sim(Mode::Orb, 4, 3, 2, classes, 100), &shards, &holdout)
        .expect("valid ring run");
    let rows = server_rows(&out.metrics);
    let final_accuracy = rows.last().expect("one row per round").test_accuracy;
    let accuracy_ok = final_accuracy >= 0.85;

    // The best objective seen so far must never get worse round over round.
    let mut best_seen = Vec::new();
    let mut best = f64::INFINITY;
    for row in &rows {
        best = best.min(row.final_objective);
        best_seen.push(best);
    }
    let monotone_ok = best_seen.windows(2).all(|w| w[1] <= w[0]);

    let elapsed = started.elapsed();
    report(
        accuracy_ok && monotone_ok && elapsed < Duration::from_secs(300),
        "ring training learns separable blobs",
        &format!(
            "final holdout accuracy {final_accuracy:.4} (want ≥ 0.85); best-seen objective per \
             round {best_seen:.6?}; {elapsed:.2?}"
        ),
    );
}

// ---------------------------------------------------------------------------
// Statlog end-to-end (only when the dataset files are present)
// ---------------------------------------------------------------------------

/// Locate sat.trn/sat.tst under $STATLOG_DIR, ./data, or the workspace root's
/// data/ directory.
fn statlog_files() -> Option<(PathBuf, PathBuf)> {
    let mut dirs: Vec<PathBuf> = Vec::new();
    if let Ok(dir) = std::env::var("STATLOG_DIR") {
        dirs.push(dir.into());
    }
    dirs.push("data".into());
    dirs.push("../../data".into());
    for dir in dirs {
        let train = dir.join("sat.trn");
        let test = dir.join("sat.tst");
        if train.is_file() && test.is_file() {
            return Some((train, test));
        }
    }
    None
}

#[test]
fn c10_statlog_pipeline_beats_the_majority_class() {
    let Some((train_path, test_path)) = statlog_files() else {
        println!(
            "[SKIP] Statlog pipeline beats the majority class: sat.trn/sat.tst not found; set \
             STATLOG_DIR or place the files under data/"
        );
        return;
    };
    let started = Instant::now();
    let train = dataio::parse_statlog(&std::fs::read_to_string(&train_path).unwrap()).unwrap();
    let test = dataio::parse_statlog(&std::fs::read_to_string(&test_path).unwrap()).unwrap();
    let total = train.len() + test.len();
    let rows_ok = total == 6435;

    // Majority-class frequency of the full dataset, computed from the labels.
    let mut features = train.features;
    features.extend(test.features);
    let mut labels = train.labels;
    labels.extend(test.labels);
    let n_classes = *labels.iter().max().unwrap() + 1;
    let mut counts = vec![0usize; n_classes];
    for &l in &labels {
        counts[l] += 1;
    }
    let majority = *counts.iter().max().unwrap() as f64 / total as f64;

    // The same pipeline the CLI runs at q = 4.
    let combined = Dataset::new(features, labels, train.class_names).unwrap();
    let normalized = dataio::normalize(&combined).unwrap();
    let pca = dataio::pca_fit(&normalized.features, 4).unwrap();
    let reduced = dataio::pca_transform(&pca, &normalized.features).unwrap();
    let full = Dataset::new(reduced, normalized.labels, normalized.class_names).unwrap();
    let (train, test) = dataio::split(&full, 0.9, 42).unwrap();
    let split_ok = train.len() == 5791 && test.len() == 644;

    let plan = dataio::partition(&train, 5, 42).unwrap();
    let shards: Vec<LabeledSet> = plan
        .shards
        .iter()
        .map(|idx| LabeledSet::from_dataset(&dataio::subset(&train, idx).unwrap()).unwrap())
        .collect();
    let holdout = LabeledSet::from_dataset(&test).unwrap();
    let out = protocol::run_orb_qfl(
        &sim(Mode::Orb, 5, 5, 4, full.n_classes(), 100),
        &shards,
        &holdout,
    )
    .expect("valid ring run");
    let final_accuracy = server_rows(&out.metrics).last().unwrap().test_accuracy;
    let accuracy_ok = final_accuracy > majority;

    let elapsed = started.elapsed();
    report(
        rows_ok && split_ok && accuracy_ok && elapsed < Duration::from_secs(1800),
        "Statlog pipeline beats the majority class",
        &format!(
            "{total} rows split {}/{}; final holdout accuracy {final_accuracy:.4} vs majority \
             frequency {majority:.4}; {elapsed:.2?}",
            train.len(),
            test.len()
        ),
    );
}

// ---------------------------------------------------------------------------
// Determinism of the comparison pipeline
// ---------------------------------------------------------------------------

#[test]
fn c11_compare_runs_are_byte_identical() {
    let started = Instant::now();
    let run = |dir: &Path| {
        let out = Command::new(env!("CARGO_BIN_EXE_satqfl"))
            .args(["--out", dir.to_str().unwrap(), "--seed", "42"])
            .args(["--qubits", "2", "--n_sats", "4", "--rounds", "3"])
            .arg("compare")
            .output()
            .expect("binary runs");
        assert!(
            out.status.success(),
            "compare run failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    };
    let first = tempfile::tempdir().unwrap();
    let second = tempfile::tempdir().unwrap();
    run(first.path());
    run(second.path());

    let read = |dir: &Path, name: &str| std::fs::read(dir.join(name)).unwrap();
    let metrics_a = read(first.path(), "compare_metrics.csv");
    let metrics_equal = metrics_a == read(second.path(), "compare_metrics.csv");
    let events_equal =
        read(first.path(), "compare_events.csv") == read(second.path(), "compare_events.csv");
    let nontrivial = metrics_a.iter().filter(|&&b| b == b'\n').count() > 1;

    let elapsed = started.elapsed();
    report(
        metrics_equal && events_equal && nontrivial && elapsed < Duration::from_secs(600),
        "repeated comparison runs are byte-identical",
        &format!(
            "two seeded comparison runs agree on metrics and events CSVs ({} bytes of metrics); \
             {elapsed:.2?}",
            metrics_a.len()
        ),
    );
}

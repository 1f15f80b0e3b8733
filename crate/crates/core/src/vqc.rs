//! Variational quantum classifier: feature map, ansatz, readout, the
//! cross-entropy objective, and a warm-startable fit built on the
//! trust-region optimizer.
//!
//! The circuit has two halves. The **feature map** encodes a normalized
//! feature vector x ∈ [0,1]^q: per repetition, a Hadamard on every qubit
//! followed by RY(π·x_j) on qubit j; the `zz` variant appends a
//! CZ-sandwiched RZ(π·x_j·x_k) for each ring pair (j,k). The **ansatz** is
//! `reps` blocks of a trainable RY layer plus a CZ entangler (ring or line
//! pattern), closed by one trailing RY layer — n·(reps+1) parameters in
//! total. Classes are read out by summing basis-state probabilities over a
//! total bitstring→class mapping (default: index mod n_classes).
//!
//! `fit` minimizes mean cross-entropy with the derivative-free trust-region
//! method and returns the best iterate seen, so the objective never ends
//! above its starting value. A cold start draws parameters uniformly from
//! [−π, π) using the caller's seeded stream; a warm start resumes from a
//! parameter vector received from elsewhere (the satellite-to-satellite
//! hand-off in ring mode).

use crate::cobyla::{self, CobylaError, OptimizerConfig, TrustRegionTrace};
use crate::qsim::{self, Angle, Circuit, GateOp, QsimError, MAX_QUBITS};
use rand::Rng;
use std::f64::consts::PI;
use thiserror::Error;

/// Tolerance when checking that features lie in [0, 1].
const FEATURE_RANGE_TOL: f64 = 1e-9;

/// Floor applied to predicted probabilities inside the logarithm.
const LOG_EPS: f64 = 1e-12;

/// Serialization header: 8-byte magic, u32 version, u32 count.
const PARAM_MAGIC: [u8; 8] = *b"VQCTHETA";
const PARAM_VERSION: u32 = 1;
const PARAM_HEADER_LEN: usize = 16;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Errors from circuit construction, evaluation, and fitting.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum VqcError {
    /// Feature-map and ansatz registers disagree, or the register size is
    /// unsupported.
    #[error("invalid classifier spec: {0}")]
    InvalidSpec(String),
    /// A feature vector of the wrong dimension.
    #[error("feature vector has {got} entries, expected {expected}")]
    FeatureDimension { got: usize, expected: usize },
    /// A feature outside [0, 1] beyond tolerance.
    #[error("feature {index} is {value}, outside [0, 1]")]
    FeatureOutOfRange { index: usize, value: f64 },
    /// A parameter vector of the wrong length.
    #[error("parameter vector has {got} entries, expected {expected}")]
    ParamLength { got: usize, expected: usize },
    /// A non-finite parameter value.
    #[error("parameter {index} is not finite")]
    NonFiniteParam { index: usize },
    /// Empty dataset where at least one sample is required.
    #[error("dataset is empty")]
    EmptyData,
    /// Features/labels of mismatched lengths, or a malformed label row.
    #[error("malformed dataset: {0}")]
    MalformedData(String),
    /// warm_start flag and presence of an initial vector disagree.
    #[error("warm_start={warm_start} but initial parameters were {}provided", if *.provided { "" } else { "not " })]
    WarmStartMismatch { warm_start: bool, provided: bool },
    /// Malformed serialized parameter bytes.
    #[error("bad parameter serialization: {0}")]
    BadSerialization(String),
    /// Underlying simulator failure.
    #[error(transparent)]
    Qsim(#[from] QsimError),
    /// Underlying optimizer failure.
    #[error(transparent)]
    Optimizer(#[from] CobylaError),
}

// ---------------------------------------------------------------------------
// Specs
// ---------------------------------------------------------------------------

/// Data-encoding family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Encoding {
    /// Per rep: H layer then RY(π·x_j) per qubit.
    Angle,
    /// Angle encoding plus a CZ-sandwiched RZ(π·x_j·x_k) per ring pair.
    Zz,
}

/// Entangler layout inside the ansatz.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Entangle {
    /// CZ on (i, i+1 mod n); the wrap edge is omitted at n = 2 where it
    /// would duplicate (0,1).
    Ring,
    /// CZ on (i, i+1) for i < n−1.
    Line,
}

/// Data-encoding half of the circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMapSpec {
    /// Register size; must equal the reduced feature dimension.
    pub n_qubits: usize,
    /// Encoding repetitions (≥ 1).
    pub reps: usize,
    /// Encoding family.
    pub encoding: Encoding,
}

/// Trainable half of the circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzSpec {
    /// Register size; must match the feature map.
    pub n_qubits: usize,
    /// Entangling blocks before the trailing rotation layer.
    pub reps: usize,
    /// Entangler layout.
    pub entangle: Entangle,
}

impl AnsatzSpec {
    /// Trainable parameter count: one RY per qubit per layer, reps+1 layers.
    pub fn param_count(&self) -> usize {
        self.n_qubits * (self.reps + 1)
    }
}

/// Bitstring→class readout.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum Readout {
    /// Class of basis state b is `b mod n_classes`.
    #[default]
    Modular,
    /// Explicit class per basis state; must be total over all 2^n indices.
    Table(Vec<usize>),
}

/// Measurement-to-class mapping.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassifierSpec {
    /// Number of classes (≥ 2).
    pub n_classes: usize,
    /// Total mapping from basis states to classes.
    pub readout: Readout,
}

impl ClassifierSpec {
    /// Modular readout over `n_classes` classes.
    pub fn modular(n_classes: usize) -> Self {
        ClassifierSpec {
            n_classes,
            readout: Readout::Modular,
        }
    }

    /// Class of basis state `b`. Callers must have validated the spec.
    fn class_of(&self, b: usize) -> usize {
        match &self.readout {
            Readout::Modular => b % self.n_classes,
            Readout::Table(t) => t[b],
        }
    }
}

/// The full classifier: feature map, ansatz, readout.
#[derive(Debug, Clone, PartialEq)]
pub struct VqcSpec {
    /// Data-encoding circuit.
    pub feature_map: FeatureMapSpec,
    /// Trainable circuit.
    pub ansatz: AnsatzSpec,
    /// Measurement mapping.
    pub classifier: ClassifierSpec,
}

impl VqcSpec {
    /// Register size shared by both circuit halves.
    pub fn n_qubits(&self) -> usize {
        self.feature_map.n_qubits
    }

    /// Trainable parameter count.
    pub fn param_count(&self) -> usize {
        self.ansatz.param_count()
    }

    /// Check internal consistency: register sizes agree and are supported,
    /// the feature map repeats at least once, and the readout is a total
    /// mapping into a valid class range.
    pub fn validate(&self) -> Result<(), VqcError> {
        let n = self.feature_map.n_qubits;
        if n == 0 || n > MAX_QUBITS {
            return Err(VqcError::InvalidSpec(format!(
                "register of {n} qubits is outside 1..={MAX_QUBITS}"
            )));
        }
        if self.ansatz.n_qubits != n {
            return Err(VqcError::InvalidSpec(format!(
                "feature map is on {n} qubits but the ansatz is on {}",
                self.ansatz.n_qubits
            )));
        }
        if self.feature_map.reps == 0 {
            return Err(VqcError::InvalidSpec(
                "feature map needs at least one repetition".into(),
            ));
        }
        if self.classifier.n_classes < 2 {
            return Err(VqcError::InvalidSpec(
                "classifier needs at least two classes".into(),
            ));
        }
        if let Readout::Table(t) = &self.classifier.readout {
            if t.len() != 1 << n {
                return Err(VqcError::InvalidSpec(format!(
                    "readout table has {} entries, expected {}",
                    t.len(),
                    1 << n
                )));
            }
            if let Some(bad) = t.iter().find(|&&c| c >= self.classifier.n_classes) {
                return Err(VqcError::InvalidSpec(format!(
                    "readout table maps to class {bad}, beyond {} classes",
                    self.classifier.n_classes
                )));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Parameter vector
// ---------------------------------------------------------------------------

/// A flat vector of ansatz rotation angles — the model θ that travels
/// between nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamVector {
    /// Rotation angles in radians, all finite.
    pub values: Vec<f64>,
}

impl ParamVector {
    /// The all-zeros vector of length `n`.
    pub fn zeros(n: usize) -> Self {
        ParamVector { values: vec![0.0; n] }
    }

    /// Number of parameters.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// True when there are no parameters.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Serialized byte length: 16-byte header plus 8 bytes per value. This
    /// is the payload size the transmission model charges for one model
    /// hand-off.
    pub fn serialized_len(&self) -> usize {
        PARAM_HEADER_LEN + 8 * self.values.len()
    }

    /// Serialize as magic, version, count, then little-endian f64 values.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.serialized_len());
        out.extend_from_slice(&PARAM_MAGIC);
        out.extend_from_slice(&PARAM_VERSION.to_le_bytes());
        out.extend_from_slice(&(self.values.len() as u32).to_le_bytes());
        for v in &self.values {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    /// Parse bytes produced by [`ParamVector::to_bytes`], validating magic,
    /// version, count, and finiteness.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self, VqcError> {
        if bytes.len() < PARAM_HEADER_LEN {
            return Err(VqcError::BadSerialization(format!(
                "{} bytes is shorter than the {PARAM_HEADER_LEN}-byte header",
                bytes.len()
            )));
        }
        if bytes[..8] != PARAM_MAGIC {
            return Err(VqcError::BadSerialization("magic mismatch".into()));
        }
        let version = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
        if version != PARAM_VERSION {
            return Err(VqcError::BadSerialization(format!(
                "unsupported version {version}"
            )));
        }
        let count = u32::from_le_bytes(bytes[12..16].try_into().unwrap()) as usize;
        let body = &bytes[PARAM_HEADER_LEN..];
        if body.len() != 8 * count {
            return Err(VqcError::BadSerialization(format!(
                "count {count} does not match {} payload bytes",
                body.len()
            )));
        }
        let values: Vec<f64> = body
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(VqcError::NonFiniteParam { index });
        }
        Ok(ParamVector { values })
    }
}

// ---------------------------------------------------------------------------
// Circuit construction
// ---------------------------------------------------------------------------

/// Entangler qubit pairs for the given layout. At n = 1 there are none; at
/// n = 2 both layouts reduce to the single pair (0, 1).
pub fn entangler_pairs(n_qubits: usize, entangle: Entangle) -> Vec<(usize, usize)> {
    match entangle {
        Entangle::Line => (0..n_qubits.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
        Entangle::Ring => {
            if n_qubits < 2 {
                vec![]
            } else if n_qubits == 2 {
                vec![(0, 1)]
            } else {
                (0..n_qubits).map(|i| (i, (i + 1) % n_qubits)).collect()
            }
        }
    }
}

/// The feature map as a symbolic gate list: angles reference feature slots,
/// so one list serves every sample.
pub fn encode_ops(fm: &FeatureMapSpec) -> Vec<GateOp> {
    let n = fm.n_qubits;
    let mut ops = Vec::new();
    for _ in 0..fm.reps {
        for q in 0..n {
            ops.push(GateOp::H { target: q });
        }
        for q in 0..n {
            ops.push(GateOp::Ry {
                target: q,
                angle: Angle::FeatureProduct { indices: vec![q], scale: PI },
            });
        }
        if fm.encoding == Encoding::Zz {
            for (j, k) in entangler_pairs(n, Entangle::Ring) {
                ops.push(GateOp::Cz { a: j, b: k });
                ops.push(GateOp::Rz {
                    target: k,
                    angle: Angle::FeatureProduct { indices: vec![j, k], scale: PI },
                });
                ops.push(GateOp::Cz { a: j, b: k });
            }
        }
    }
    ops
}

/// Validate a feature vector against the map's dimension and [0, 1] range.
pub fn validate_features(fm: &FeatureMapSpec, x: &[f64]) -> Result<(), VqcError> {
    if x.len() != fm.n_qubits {
        return Err(VqcError::FeatureDimension {
            got: x.len(),
            expected: fm.n_qubits,
        });
    }
    for (index, &value) in x.iter().enumerate() {
        if !value.is_finite() || !(-FEATURE_RANGE_TOL..=1.0 + FEATURE_RANGE_TOL).contains(&value) {
            return Err(VqcError::FeatureOutOfRange { index, value });
        }
    }
    Ok(())
}

/// The feature map resolved against one sample: the same gate list as
/// [`encode_ops`] with every angle a literal value.
pub fn encode(fm: &FeatureMapSpec, x: &[f64]) -> Result<Vec<GateOp>, VqcError> {
    validate_features(fm, x)?;
    let resolve = |angle: &Angle| -> Angle {
        match angle {
            Angle::FeatureProduct { indices, scale } => {
                Angle::Fixed(indices.iter().fold(*scale, |acc, &i| acc * x[i]))
            }
            other => other.clone(),
        }
    };
    Ok(encode_ops(fm)
        .into_iter()
        .map(|op| match op {
            GateOp::Ry { target, angle } => GateOp::Ry { target, angle: resolve(&angle) },
            GateOp::Rz { target, angle } => GateOp::Rz { target, angle: resolve(&angle) },
            other => other,
        })
        .collect())
}

/// The ansatz as a symbolic gate list: angles reference parameter slots in
/// layer order (layer r uses parameters r·n .. r·n+n).
pub fn ansatz_ops(a: &AnsatzSpec) -> Vec<GateOp> {
    let n = a.n_qubits;
    let mut ops = Vec::new();
    let mut next_param = 0;
    for _ in 0..a.reps {
        for q in 0..n {
            ops.push(GateOp::Ry { target: q, angle: Angle::Param(next_param) });
            next_param += 1;
        }
        for (j, k) in entangler_pairs(n, a.entangle) {
            ops.push(GateOp::Cz { a: j, b: k });
        }
    }
    for q in 0..n {
        ops.push(GateOp::Ry { target: q, angle: Angle::Param(next_param) });
        next_param += 1;
    }
    ops
}

/// The full symbolic circuit: feature map followed by ansatz.
pub fn build_circuit(spec: &VqcSpec) -> Circuit {
    let mut ops = encode_ops(&spec.feature_map);
    ops.extend(ansatz_ops(&spec.ansatz));
    Circuit {
        n_qubits: spec.n_qubits(),
        ops,
    }
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

fn validate_params(spec: &VqcSpec, theta: &ParamVector) -> Result<(), VqcError> {
    if theta.len() != spec.param_count() {
        return Err(VqcError::ParamLength {
            got: theta.len(),
            expected: spec.param_count(),
        });
    }
    if let Some(index) = theta.values.iter().position(|v| !v.is_finite()) {
        return Err(VqcError::NonFiniteParam { index });
    }
    Ok(())
}

/// Class probabilities for one sample: run the circuit and sum basis-state
/// probabilities per readout class. The output sums to 1.
pub fn forward(spec: &VqcSpec, x: &[f64], theta: &ParamVector) -> Result<Vec<f64>, VqcError> {
    spec.validate()?;
    validate_features(&spec.feature_map, x)?;
    validate_params(spec, theta)?;
    let state = qsim::run(&build_circuit(spec), x, &theta.values)?;
    let mut class_probs = vec![0.0; spec.classifier.n_classes];
    for (b, p) in state.probabilities().into_iter().enumerate() {
        class_probs[spec.classifier.class_of(b)] += p;
    }
    Ok(class_probs)
}

fn validate_dataset(
    spec: &VqcSpec,
    xs: &[Vec<f64>],
    rows: usize,
    what: &str,
) -> Result<(), VqcError> {
    if xs.is_empty() {
        return Err(VqcError::EmptyData);
    }
    if xs.len() != rows {
        return Err(VqcError::MalformedData(format!(
            "{} features but {rows} {what}",
            xs.len()
        )));
    }
    for x in xs {
        validate_features(&spec.feature_map, x)?;
    }
    Ok(())
}

/// Mean cross-entropy of the classifier over a labeled set:
/// `−(1/δ) Σ_samples Σ_c y_c · ln(max(p_c, ε))` with ε = 1e-12.
pub fn loss(
    spec: &VqcSpec,
    xs: &[Vec<f64>],
    onehot: &[Vec<f64>],
    theta: &ParamVector,
) -> Result<f64, VqcError> {
    spec.validate()?;
    validate_dataset(spec, xs, onehot.len(), "label rows")?;
    validate_params(spec, theta)?;
    let classes = spec.classifier.n_classes;
    let mut total = 0.0;
    for (x, y) in xs.iter().zip(onehot) {
        if y.len() != classes {
            return Err(VqcError::MalformedData(format!(
                "one-hot row has {} entries, expected {classes}",
                y.len()
            )));
        }
        let probs = forward(spec, x, theta)?;
        total -= y
            .iter()
            .zip(&probs)
            .map(|(yc, pc)| yc * pc.max(LOG_EPS).ln())
            .sum::<f64>();
    }
    Ok(total / xs.len() as f64)
}

/// Fraction of samples whose argmax class probability matches the label.
/// Ties resolve to the lowest class index.
pub fn accuracy(
    spec: &VqcSpec,
    xs: &[Vec<f64>],
    labels: &[usize],
    theta: &ParamVector,
) -> Result<f64, VqcError> {
    spec.validate()?;
    validate_dataset(spec, xs, labels.len(), "labels")?;
    validate_params(spec, theta)?;
    if let Some(bad) = labels.iter().find(|&&l| l >= spec.classifier.n_classes) {
        return Err(VqcError::MalformedData(format!(
            "label {bad} beyond {} classes",
            spec.classifier.n_classes
        )));
    }
    let mut correct = 0usize;
    for (x, &label) in xs.iter().zip(labels) {
        let probs = forward(spec, x, theta)?;
        let mut best = 0usize;
        for (c, &p) in probs.iter().enumerate().skip(1) {
            if p > probs[best] {
                best = c;
            }
        }
        if best == label {
            correct += 1;
        }
    }
    Ok(correct as f64 / xs.len() as f64)
}

// ---------------------------------------------------------------------------
// Fitting
// ---------------------------------------------------------------------------

/// Draw a cold-start parameter vector uniformly from [−π, π).
pub fn cold_init(spec: &VqcSpec, rng: &mut impl Rng) -> ParamVector {
    ParamVector {
        values: (0..spec.param_count()).map(|_| rng.random_range(-PI..PI)).collect(),
    }
}

/// Outcome of one local training call.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    /// Best parameters seen during the search.
    pub theta: ParamVector,
    /// Full optimizer trace (every objective evaluation and iteration).
    pub trace: TrustRegionTrace,
}

/// Train on a labeled set by trust-region minimization of [`loss`].
///
/// `warm_start` must agree with `init`: a warm start resumes from the given
/// vector, a cold start ignores it and draws fresh parameters from `rng`
/// uniformly in [−π, π). The returned θ is the best evaluated point, so its
/// loss never exceeds the starting loss. With a zero evaluation budget the
/// start vector is returned untouched.
pub fn fit(
    spec: &VqcSpec,
    xs: &[Vec<f64>],
    onehot: &[Vec<f64>],
    init: Option<&ParamVector>,
    warm_start: bool,
    optimizer: &OptimizerConfig,
    rng: &mut impl Rng,
) -> Result<FitResult, VqcError> {
    spec.validate()?;
    validate_dataset(spec, xs, onehot.len(), "label rows")?;
    if warm_start != init.is_some() {
        return Err(VqcError::WarmStartMismatch {
            warm_start,
            provided: init.is_some(),
        });
    }
    let theta0 = match init {
        Some(theta) => {
            validate_params(spec, theta)?;
            theta.clone()
        }
        None => cold_init(spec, rng),
    };
    // Data are validated above, so evaluation can only fail on numerical
    // grounds; map those to +∞ and let the optimizer reject the point.
    let objective =
        |t: &[f64]| -> f64 {
            let theta = ParamVector { values: t.to_vec() };
            loss(spec, xs, onehot, &theta).unwrap_or(f64::INFINITY)
        };
    let (best, trace) = cobyla::minimize(objective, &theta0.values, optimizer)?;
    Ok(FitResult {
        theta: ParamVector { values: best },
        trace,
    })
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

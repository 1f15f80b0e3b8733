//! Dense statevector simulator for small qubit registers.
//!
//! Basis indexing is little-endian: qubit `k` is bit `k` of the basis-state
//! index, so with two qubits the state in which only qubit 1 is set has
//! index 2. Registers are capped at [`MAX_QUBITS`] qubits, which keeps the
//! 16-byte-per-amplitude vector small enough for exhaustive unit testing
//! against dense matrices.
//!
//! The gate set is H, RX, RY, RZ, CX, and CZ. Rotation angles in a
//! [`Circuit`] are symbolic slots ([`Angle`]) bound at run time to either a
//! fixed value, an optimizer parameter, or a scaled product of input
//! features; this lets one circuit serve every (sample, parameter) pair.
//! Amplitudes evolve exactly and probabilities are read directly off the
//! statevector — nothing is sampled.

use num_complex::Complex64;
use thiserror::Error;

// ---------------------------------------------------------------------------
// Limits
// ---------------------------------------------------------------------------

/// Largest register the simulator accepts.
///
/// 2^12 amplitudes × 16 bytes = 64 KiB per state, comfortably cacheable.
pub const MAX_QUBITS: usize = 12;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Errors from state construction and circuit execution.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QsimError {
    /// Register size outside 1..=MAX_QUBITS.
    #[error("register of {0} qubits is outside the supported range 1..={MAX_QUBITS}")]
    RegisterSize(usize),
    /// A gate referenced a qubit index at or beyond the register size.
    #[error("qubit {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },
    /// A two-qubit gate was given the same qubit twice.
    #[error("two-qubit gate needs distinct qubits, got {0} twice")]
    DuplicateQubit(usize),
    /// An amplitude vector whose length is not a power of two in range.
    #[error("amplitude vector of length {0} is not 2^n for n in 1..={MAX_QUBITS}")]
    BadAmplitudeCount(usize),
    /// An amplitude vector that is not normalized.
    #[error("amplitude vector has squared norm {0}, expected 1")]
    NotNormalized(f64),
    /// An angle slot referenced a parameter index beyond the bound vector.
    #[error("angle references parameter {index} but only {available} parameters were bound")]
    UnboundParameter { index: usize, available: usize },
    /// An angle slot referenced a feature index beyond the bound vector.
    #[error("angle references feature {index} but only {available} features were bound")]
    UnboundFeature { index: usize, available: usize },
    /// A circuit was run against a state of a different register size.
    #[error("circuit is for {circuit} qubits but the state has {state}")]
    SizeMismatch { circuit: usize, state: usize },
}

// ---------------------------------------------------------------------------
// Angles and gates
// ---------------------------------------------------------------------------

/// A rotation angle, resolved when the circuit is run.
#[derive(Debug, Clone, PartialEq)]
pub enum Angle {
    /// A literal angle in radians.
    Fixed(f64),
    /// The i-th entry of the bound parameter vector.
    Param(usize),
    /// `scale · Π features[i]` over the listed feature indices.
    FeatureProduct { indices: Vec<usize>, scale: f64 },
}

impl Angle {
    /// Resolve the slot against bound features and parameters.
    fn resolve(&self, features: &[f64], params: &[f64]) -> Result<f64, QsimError> {
        match self {
            Angle::Fixed(v) => Ok(*v),
            Angle::Param(i) => params.get(*i).copied().ok_or(QsimError::UnboundParameter {
                index: *i,
                available: params.len(),
            }),
            Angle::FeatureProduct { indices, scale } => {
                let mut value = *scale;
                for &i in indices {
                    value *= features.get(i).copied().ok_or(QsimError::UnboundFeature {
                        index: i,
                        available: features.len(),
                    })?;
                }
                Ok(value)
            }
        }
    }
}

/// One gate application.
#[derive(Debug, Clone, PartialEq)]
pub enum GateOp {
    /// Hadamard on `target`.
    H { target: usize },
    /// X-axis rotation by `angle` on `target`.
    Rx { target: usize, angle: Angle },
    /// Y-axis rotation by `angle` on `target`.
    Ry { target: usize, angle: Angle },
    /// Z-axis rotation by `angle` on `target`.
    Rz { target: usize, angle: Angle },
    /// Controlled-X: flips `target` when `control` is set.
    Cx { control: usize, target: usize },
    /// Controlled-Z: negates the amplitude when both qubits are set.
    /// Symmetric in its arguments.
    Cz { a: usize, b: usize },
}

impl GateOp {
    /// Check every referenced qubit against the register size.
    fn validate(&self, n_qubits: usize) -> Result<(), QsimError> {
        let check = |qubit: usize| {
            if qubit >= n_qubits {
                Err(QsimError::QubitOutOfRange { qubit, n_qubits })
            } else {
                Ok(())
            }
        };
        match self {
            GateOp::H { target }
            | GateOp::Rx { target, .. }
            | GateOp::Ry { target, .. }
            | GateOp::Rz { target, .. } => check(*target),
            GateOp::Cx {
                control: first,
                target: second,
            }
            | GateOp::Cz {
                a: first,
                b: second,
            } => {
                check(*first)?;
                check(*second)?;
                if first == second {
                    return Err(QsimError::DuplicateQubit(*first));
                }
                Ok(())
            }
        }
    }
}

/// A gate list over a fixed register size.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    /// Register size every op must respect.
    pub n_qubits: usize,
    /// Gates in application order.
    pub ops: Vec<GateOp>,
}

// ---------------------------------------------------------------------------
// Statevector
// ---------------------------------------------------------------------------

/// A normalized quantum state over `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Register size.
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// The 2^n complex amplitudes, little-endian basis order.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Exact basis-state probabilities `|amplitude|²`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Build a state from explicit amplitudes. The length must be 2^n for
    /// n in 1..=[`MAX_QUBITS`] and the squared norm must be within 1e-6 of 1.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, QsimError> {
        let len = amps.len();
        if !len.is_power_of_two() {
            return Err(QsimError::BadAmplitudeCount(len));
        }
        let n_qubits = len.trailing_zeros() as usize;
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(QsimError::BadAmplitudeCount(len));
        }
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > 1e-6 {
            return Err(QsimError::NotNormalized(norm_sqr));
        }
        Ok(StateVector { n_qubits, amps })
    }
}

/// The all-zeros computational basis state on `n_qubits` qubits.
pub fn init_zero(n_qubits: usize) -> Result<StateVector, QsimError> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(QsimError::RegisterSize(n_qubits));
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
    amps[0] = Complex64::new(1.0, 0.0);
    Ok(StateVector { n_qubits, amps })
}

// ---------------------------------------------------------------------------
// Gate application
// ---------------------------------------------------------------------------

/// Apply a 2×2 matrix to `target` in place.
fn apply_single(amps: &mut [Complex64], target: usize, m: [[Complex64; 2]; 2]) {
    let bit = 1usize << target;
    for i0 in 0..amps.len() {
        if i0 & bit == 0 {
            let i1 = i0 | bit;
            let a0 = amps[i0];
            let a1 = amps[i1];
            amps[i0] = m[0][0] * a0 + m[0][1] * a1;
            amps[i1] = m[1][0] * a0 + m[1][1] * a1;
        }
    }
}

/// Apply one resolved gate in place. Qubit indices must be pre-validated.
fn apply_resolved(amps: &mut [Complex64], op: &GateOp, features: &[f64], params: &[f64]) -> Result<(), QsimError> {
    let zero = Complex64::new(0.0, 0.0);
    match op {
        GateOp::H { target } => {
            let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            apply_single(amps, *target, [[h, h], [h, -h]]);
        }
        GateOp::Rx { target, angle } => {
            let half = angle.resolve(features, params)? / 2.0;
            let c = Complex64::new(half.cos(), 0.0);
            let s = Complex64::new(0.0, -half.sin());
            apply_single(amps, *target, [[c, s], [s, c]]);
        }
        GateOp::Ry { target, angle } => {
            let half = angle.resolve(features, params)? / 2.0;
            let c = Complex64::new(half.cos(), 0.0);
            let s = Complex64::new(half.sin(), 0.0);
            apply_single(amps, *target, [[c, -s], [s, c]]);
        }
        GateOp::Rz { target, angle } => {
            let half = angle.resolve(features, params)? / 2.0;
            let m00 = Complex64::new(half.cos(), -half.sin());
            let m11 = Complex64::new(half.cos(), half.sin());
            apply_single(amps, *target, [[m00, zero], [zero, m11]]);
        }
        GateOp::Cx { control, target } => {
            let cbit = 1usize << control;
            let tbit = 1usize << target;
            for i in 0..amps.len() {
                if i & cbit != 0 && i & tbit == 0 {
                    amps.swap(i, i | tbit);
                }
            }
        }
        GateOp::Cz { a, b } => {
            let mask = (1usize << a) | (1usize << b);
            for i in 0..amps.len() {
                if i & mask == mask {
                    amps[i] = -amps[i];
                }
            }
        }
    }
    Ok(())
}

/// Apply one gate to a state, returning the evolved state.
///
/// Angle slots other than [`Angle::Fixed`] are resolved against the given
/// feature and parameter bindings (pass empty slices when the gate carries
/// only fixed angles).
pub fn apply_gate(
    state: &StateVector,
    op: &GateOp,
    features: &[f64],
    params: &[f64],
) -> Result<StateVector, QsimError> {
    op.validate(state.n_qubits)?;
    let mut out = state.clone();
    apply_resolved(&mut out.amps, op, features, params)?;
    Ok(out)
}

/// Run a circuit from the all-zeros state with the given bindings.
pub fn run(circuit: &Circuit, features: &[f64], params: &[f64]) -> Result<StateVector, QsimError> {
    let mut state = init_zero(circuit.n_qubits)?;
    for op in &circuit.ops {
        op.validate(circuit.n_qubits)?;
        apply_resolved(&mut state.amps, op, features, params)?;
    }
    Ok(state)
}

/// Run a circuit starting from an existing state.
pub fn run_from(
    state: &StateVector,
    circuit: &Circuit,
    features: &[f64],
    params: &[f64],
) -> Result<StateVector, QsimError> {
    if circuit.n_qubits != state.n_qubits {
        return Err(QsimError::SizeMismatch {
            circuit: circuit.n_qubits,
            state: state.n_qubits,
        });
    }
    let mut out = state.clone();
    for op in &circuit.ops {
        op.validate(out.n_qubits)?;
        apply_resolved(&mut out.amps, op, features, params)?;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

//! Deterministic co-simulator of a LEO satellite constellation that trains a
//! variational quantum classifier with federated learning.
//!
//! Two protocols are simulated over the same orbital geometry, RF link model,
//! and learner:
//!
//! * **ring mode** (`orb`) — serverless: one model circulates the satellite
//!   ring and is trained sequentially at each node, warm-starting from the
//!   parameters received from the previous node; a hypothetical server scores
//!   the circulating model each round without participating in training.
//! * **server mode** — classic FedAvg: every satellite trains from the
//!   current global model, uplinks its update to a ground (or GEO) server,
//!   which aggregates by weighted averaging and downlinks the result.
//!
//! The crate is organized bottom-up:
//!
//! * [`constants`] — shared physical constants.
//! * [`rng`] — named, seeded random substreams (single master seed).
//! * [`orbital`] — circular Keplerian propagation, distances, line of sight.
//! * [`linkbudget`] — FSPL / EIRP / C/N0 / Eb/N0 / margin chains and the
//!   transmission-delay model.
//! * [`qsim`] — small statevector simulator (H, RX, RY, RZ, CX, CZ).
//! * [`cobyla`] — derivative-free trust-region optimizer over a linear
//!   interpolation simplex, instrumented with a full trace.
//! * [`vqc`] — feature map, ansatz, readout, cross-entropy loss, and a
//!   warm-startable fit built on [`cobyla`].
//! * [`dataio`] — Statlog parsing, normalization, PCA (Jacobi), splits,
//!   shard partitioning, and a synthetic blob dataset.
//! * [`protocol`] — the two federated protocols, communication events,
//!   per-round metrics, and a convergence-bound evaluator.
//!
//! Everything is deterministic: identical configuration and seed produce
//! bit-identical metrics and CSV output.

pub mod cobyla;
pub mod constants;
pub mod dataio;
pub mod linkbudget;
pub mod orbital;
pub mod protocol;
pub mod qsim;
pub mod rng;
pub mod vqc;

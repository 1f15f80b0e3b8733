//! Derivative-free trust-region minimization over a linear interpolation
//! simplex (the unconstrained core of COBYLA), instrumented with a full
//! trace of iterates, radii, and objective evaluations.
//!
//! Each iteration interpolates a linear model of the objective through an
//! (m+1)-point simplex, steps the incumbent by the current radius Δ along
//! the model's steepest descent direction, and accepts the step only if it
//! strictly improves. On a failed full step a one-dimensional parabolic
//! rescue along the same direction may still salvage an improving point, but
//! the radius is halved regardless — keeping the radius honest is what makes
//! the regret bound hold. After every shrink, a geometry refresh pulls the
//! farthest simplex vertex back to the current scale so the interpolated
//! gradient does not go stale.
//!
//! The method is fully deterministic: no internal randomness, and ties
//! resolve to the earliest candidate.

use thiserror::Error;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Errors from [`minimize`] and [`regret`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CobylaError {
    /// The starting point has no coordinates.
    #[error("cannot optimize over an empty parameter vector")]
    EmptyDomain,
    /// The objective is not finite at the starting point.
    #[error("objective is not finite at the starting point")]
    NonFiniteAtStart,
    /// rho_begin/rho_end do not describe a valid schedule.
    #[error("invalid optimizer config: {0}")]
    InvalidConfig(String),
    /// regret() called with a reference value above the observed minimum.
    #[error("f_star {f_star} exceeds the trace minimum {trace_min}")]
    FStarAboveTraceMinimum { f_star: f64, trace_min: f64 },
}

// ---------------------------------------------------------------------------
// Configuration and trace
// ---------------------------------------------------------------------------

/// Trust-region schedule and evaluation budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    /// Initial trust-region radius.
    pub rho_begin: f64,
    /// Radius at which the search stops.
    pub rho_end: f64,
    /// Maximum number of objective evaluations.
    pub max_fun: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            rho_begin: 1.0,
            rho_end: 1e-4,
            max_fun: 100,
        }
    }
}

/// One trust-region iteration, recorded at its start.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    /// Incumbent iterate θ_t when the iteration began.
    pub iterate: Vec<f64>,
    /// Objective value F(θ_t) at the incumbent.
    pub objective: f64,
    /// Trust-region radius Δ_t in force for this iteration.
    pub radius: f64,
    /// Whether a strictly improving step was accepted.
    pub accepted: bool,
    /// Length of the accepted step (0 when rejected). Never exceeds
    /// `radius`.
    pub step_norm: f64,
    /// Whether this iteration rebuilt a degenerate simplex instead of
    /// stepping.
    pub simplex_reset: bool,
}

/// Complete account of one [`minimize`] call.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrustRegionTrace {
    /// Per-iteration records, in order.
    pub iterations: Vec<IterationRecord>,
    /// Every objective value, in evaluation order (non-finite values are
    /// recorded as +∞).
    pub evaluations: Vec<f64>,
}

// ---------------------------------------------------------------------------
// Linear algebra helpers
// ---------------------------------------------------------------------------

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Solve the m×m system A·x = b by Gaussian elimination with partial
/// pivoting. Returns None when the system is numerically singular.
fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let m = b.len();
    for col in 0..m {
        let pivot = (col..m).max_by(|&r, &s| {
            a[r][col]
                .abs()
                .partial_cmp(&a[s][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[pivot][col].abs() < 1e-14 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in (col + 1)..m {
            let factor = a[row][col] / a[col][col];
            for k in col..m {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; m];
    for row in (0..m).rev() {
        let mut acc = b[row];
        for k in (row + 1)..m {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
        if !x[row].is_finite() {
            return None;
        }
    }
    Some(x)
}

/// Index of the smallest value; earliest wins on ties.
fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v < values[best] {
            best = i;
        }
    }
    best
}

/// Index of the largest value; earliest wins on ties.
fn argmax(values: &[f64]) -> usize {
    let mut worst = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[worst] {
            worst = i;
        }
    }
    worst
}

// ---------------------------------------------------------------------------
// Minimization
// ---------------------------------------------------------------------------

/// Minimize `f` from `x0` within the budget and radius schedule of `config`.
///
/// Returns the best evaluated point together with the full trace. Non-finite
/// objective values during the search are treated as +∞ (the point is
/// rejected); a non-finite value at `x0` itself is an error. With
/// `max_fun == 0` the start point is returned untouched without evaluating.
pub fn minimize<F>(
    mut f: F,
    x0: &[f64],
    config: &OptimizerConfig,
) -> Result<(Vec<f64>, TrustRegionTrace), CobylaError>
where
    F: FnMut(&[f64]) -> f64,
{
    let m = x0.len();
    if m == 0 {
        return Err(CobylaError::EmptyDomain);
    }
    if !(config.rho_end > 0.0 && config.rho_end <= config.rho_begin) {
        return Err(CobylaError::InvalidConfig(format!(
            "need 0 < rho_end <= rho_begin, got rho_begin={} rho_end={}",
            config.rho_begin, config.rho_end
        )));
    }
    let mut trace = TrustRegionTrace::default();
    if config.max_fun == 0 {
        return Ok((x0.to_vec(), trace));
    }

    // Evaluation wrapper: log every value, map non-finite to +∞.
    let mut eval = |x: &[f64], log: &mut Vec<f64>| -> f64 {
        let raw = f(x);
        let v = if raw.is_finite() { raw } else { f64::INFINITY };
        log.push(v);
        v
    };

    let f0 = eval(x0, &mut trace.evaluations);
    if !f0.is_finite() {
        return Err(CobylaError::NonFiniteAtStart);
    }
    let mut incumbent = x0.to_vec();
    let mut f_incumbent = f0;
    let mut rho = config.rho_begin;

    // Initial simplex: x0 plus a probe along each coordinate at spacing rho.
    let mut verts: Vec<Vec<f64>> = vec![incumbent.clone()];
    let mut fvals: Vec<f64> = vec![f_incumbent];
    for i in 0..m {
        if trace.evaluations.len() >= config.max_fun {
            return Ok((incumbent, trace));
        }
        let mut v = incumbent.clone();
        v[i] += rho;
        let fv = eval(&v, &mut trace.evaluations);
        if fv < f_incumbent {
            incumbent = v.clone();
            f_incumbent = fv;
        }
        verts.push(v);
        fvals.push(fv);
    }

    let mut refresh_axis = 0usize;
    while trace.evaluations.len() < config.max_fun && rho >= config.rho_end {
        // Linear model through the simplex, relative to its best vertex.
        let bi = argmin(&fvals);
        let theta_t = verts[bi].clone();
        let f_t = fvals[bi];
        let rows: Vec<Vec<f64>> = (0..=m)
            .filter(|&j| j != bi)
            .map(|j| (0..m).map(|k| verts[j][k] - theta_t[k]).collect())
            .collect();
        let rhs: Vec<f64> = (0..=m).filter(|&j| j != bi).map(|j| fvals[j] - f_t).collect();
        let gradient = solve_linear(rows, rhs).filter(|g| {
            let n = norm(g);
            n.is_finite() && n > 0.0
        });

        let g = match gradient {
            Some(g) => g,
            None => {
                // Degenerate model: rebuild the simplex around the incumbent
                // at the current scale, then shrink.
                trace.iterations.push(IterationRecord {
                    iterate: incumbent.clone(),
                    objective: f_incumbent,
                    radius: rho,
                    accepted: false,
                    step_norm: 0.0,
                    simplex_reset: true,
                });
                verts = vec![incumbent.clone()];
                fvals = vec![f_incumbent];
                for i in 0..m {
                    if trace.evaluations.len() >= config.max_fun {
                        return Ok((incumbent, trace));
                    }
                    let mut v = incumbent.clone();
                    v[i] += rho;
                    let fv = eval(&v, &mut trace.evaluations);
                    if fv < f_incumbent {
                        incumbent = v.clone();
                        f_incumbent = fv;
                    }
                    verts.push(v);
                    fvals.push(fv);
                }
                rho *= 0.5;
                continue;
            }
        };

        // Full trust-region step along the model's steepest descent.
        let g_norm = norm(&g);
        let direction: Vec<f64> = g.iter().map(|gi| -gi / g_norm).collect();
        if trace.evaluations.len() >= config.max_fun {
            break;
        }
        let candidate: Vec<f64> = (0..m).map(|k| theta_t[k] + rho * direction[k]).collect();
        let f_candidate = eval(&candidate, &mut trace.evaluations);

        if f_candidate < f_t {
            let wi = argmax(&fvals);
            verts[wi] = candidate.clone();
            fvals[wi] = f_candidate;
            trace.iterations.push(IterationRecord {
                iterate: theta_t,
                objective: f_t,
                radius: rho,
                accepted: true,
                step_norm: rho,
                simplex_reset: false,
            });
            incumbent = candidate;
            f_incumbent = f_candidate;
            continue; // radius holds on a successful full step
        }

        // Full step failed. Try a parabolic rescue along the same direction:
        // fit φ(t) = f_t + s·t + c·t² through slope s and the failed sample,
        // and evaluate its minimizer when it falls strictly inside (0, Δ).
        let mut rescued = false;
        if trace.evaluations.len() < config.max_fun {
            let slope = -g_norm;
            let curvature = (f_candidate - f_t - slope * rho) / (rho * rho);
            if curvature > 0.0 && curvature.is_finite() {
                let t_star = -slope / (2.0 * curvature);
                if t_star > 1e-3 * rho && t_star < rho {
                    let rescue: Vec<f64> =
                        (0..m).map(|k| theta_t[k] + t_star * direction[k]).collect();
                    let f_rescue = eval(&rescue, &mut trace.evaluations);
                    if f_rescue < f_t {
                        let wi = argmax(&fvals);
                        verts[wi] = rescue.clone();
                        fvals[wi] = f_rescue;
                        trace.iterations.push(IterationRecord {
                            iterate: theta_t.clone(),
                            objective: f_t,
                            radius: rho,
                            accepted: true,
                            step_norm: t_star,
                            simplex_reset: false,
                        });
                        incumbent = rescue;
                        f_incumbent = f_rescue;
                        rescued = true;
                    }
                }
            }
        }
        if !rescued {
            // Keep the failed sample if it still beats the worst vertex.
            let wi = argmax(&fvals);
            if f_candidate < fvals[wi] {
                verts[wi] = candidate;
                fvals[wi] = f_candidate;
            }
            trace.iterations.push(IterationRecord {
                iterate: theta_t,
                objective: f_t,
                radius: rho,
                accepted: false,
                step_norm: 0.0,
                simplex_reset: false,
            });
        }

        // The model overestimated at scale Δ: shrink regardless of the
        // rescue outcome, then pull the farthest vertex back to scale.
        rho *= 0.5;
        if trace.evaluations.len() < config.max_fun {
            let distances: Vec<f64> = verts
                .iter()
                .map(|v| {
                    (0..m)
                        .map(|k| (v[k] - incumbent[k]).powi(2))
                        .sum::<f64>()
                        .sqrt()
                })
                .collect();
            let far = argmax(&distances);
            if distances[far] > 2.0 * rho {
                let mut probe = incumbent.clone();
                probe[refresh_axis % m] += rho;
                refresh_axis += 1;
                let fp = eval(&probe, &mut trace.evaluations);
                verts[far] = probe.clone();
                fvals[far] = fp;
                if fp < f_incumbent {
                    incumbent = probe;
                    f_incumbent = fp;
                }
            }
        }
    }

    Ok((incumbent, trace))
}

// ---------------------------------------------------------------------------
// Regret
// ---------------------------------------------------------------------------

/// Empirical regret of a trace against a reference optimum, and the matching
/// cumulative-radius bound.
///
/// Returns `(R_F, bound)` where `R_F = Σ_t (F(θ_t) − f_star)` over the
/// iteration records and `bound = lipschitz · Σ_t Δ_t`. `f_star` must not
/// exceed the smallest iterate objective in the trace.
pub fn regret(
    trace: &TrustRegionTrace,
    f_star: f64,
    lipschitz: f64,
) -> Result<(f64, f64), CobylaError> {
    let trace_min = trace
        .iterations
        .iter()
        .map(|r| r.objective)
        .fold(f64::INFINITY, f64::min);
    if f_star > trace_min {
        return Err(CobylaError::FStarAboveTraceMinimum { f_star, trace_min });
    }
    let r_f: f64 = trace.iterations.iter().map(|r| r.objective - f_star).sum();
    let bound: f64 = lipschitz * trace.iterations.iter().map(|r| r.radius).sum::<f64>();
    Ok((r_f, bound))
}

// ---------------------------------------------------------------------------
// CSV emission
// ---------------------------------------------------------------------------

/// Render the evaluation log as CSV: `eval_index,objective`.
pub fn evaluations_csv(trace: &TrustRegionTrace) -> String {
    let mut out = String::from("eval_index,objective\n");
    for (i, v) in trace.evaluations.iter().enumerate() {
        out.push_str(&format!("{},{}\n", i, v));
    }
    out
}

/// Render the radius schedule as CSV: `iter_index,radius`.
pub fn radii_csv(trace: &TrustRegionTrace) -> String {
    let mut out = String::from("iter_index,radius\n");
    for (i, r) in trace.iterations.iter().enumerate() {
        out.push_str(&format!("{},{}\n", i, r.radius));
    }
    out
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

//! Online learners: the gradient-of-surplus update, its optimistic
//! variant, the dual regularized solver, and the closed-form recursions.

mod ftrl;
mod predictor;
mod recursive;

pub use ftrl::ftrl_solve;
pub use predictor::{predictor_value, Predictor, PredictorKind};
pub use recursive::{
    ewa_step, h_map, nl_recursive_step, nl_recursive_step_with_diagnostic, phi_map,
    NlStepDiagnostic, RecursiveState,
};

use crate::error::{Error, Result};
use crate::gev::{choice_probabilities, GevSpec};
use crate::types::{sup_norm, CumulativePayoff, SimplexVector};

/// State of one surplus-gradient learner: the model, the learning
/// parameter, the accumulated payoffs, and an optional recency predictor.
#[derive(Debug, Clone)]
pub struct LearnerState {
    spec: GevSpec,
    eta: f64,
    theta: CumulativePayoff,
    t: usize,
    predictor: Predictor,
    u_max: f64,
}

impl LearnerState {
    /// Fresh learner at `theta = 0` with no recency bias.
    pub fn new(spec: GevSpec, eta: f64, u_max: f64) -> Result<Self> {
        LearnerState::with_predictor(spec, eta, u_max, PredictorKind::None)
    }

    pub fn with_predictor(
        spec: GevSpec,
        eta: f64,
        u_max: f64,
        kind: PredictorKind,
    ) -> Result<Self> {
        if !(eta > 0.0) {
            return Err(Error::Domain(format!("eta must be positive, got {eta}")));
        }
        if !(u_max > 0.0) {
            return Err(Error::Domain(format!(
                "payoff bound must be positive, got {u_max}"
            )));
        }
        let n = spec.n();
        Ok(LearnerState {
            spec,
            eta,
            theta: CumulativePayoff::zeros(n),
            t: 0,
            predictor: Predictor::new(kind, n)?,
            u_max,
        })
    }

    /// Rebuild a learner mid-stream from checkpointed state.
    pub fn resume(
        spec: GevSpec,
        eta: f64,
        u_max: f64,
        theta: CumulativePayoff,
        t: usize,
        predictor: Predictor,
    ) -> Result<Self> {
        if theta.len() != spec.n() {
            return Err(Error::DimensionMismatch {
                expected: spec.n(),
                got: theta.len(),
            });
        }
        Ok(LearnerState {
            spec,
            eta,
            theta,
            t,
            predictor,
            u_max,
        })
    }

    pub fn spec(&self) -> &GevSpec {
        &self.spec
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn theta(&self) -> &CumulativePayoff {
        &self.theta
    }

    pub fn period(&self) -> usize {
        self.t
    }

    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    pub fn predictor(&self) -> &Predictor {
        &self.predictor
    }
}

/// The learner's next play: the surplus gradient at the accumulated score,
/// shifted by the predictor when recency bias is active. Does not mutate
/// the state.
pub fn ssa_choose(state: &LearnerState) -> Result<SimplexVector> {
    let n = state.spec.n();
    match state.predictor.kind() {
        PredictorKind::None => choice_probabilities(&state.spec, &state.theta, state.eta),
        _ => {
            let beta = state.predictor.value(n);
            let mut shifted = state.theta.clone();
            shifted.add(&beta)?;
            choice_probabilities(&state.spec, &shifted, state.eta)
        }
    }
}

/// Absorb one revealed payoff: accumulate it, advance the period, and feed
/// the predictor. Rejects payoffs above the configured sup-norm bound.
pub fn ssa_update(state: &LearnerState, u: &[f64]) -> Result<LearnerState> {
    let norm = sup_norm(u);
    if norm > state.u_max + 1e-12 {
        return Err(Error::PayoffOutOfBounds {
            norm,
            bound: state.u_max,
        });
    }
    let mut next = state.clone();
    next.theta.add(u)?;
    next.t += 1;
    next.predictor.observe(u);
    Ok(next)
}

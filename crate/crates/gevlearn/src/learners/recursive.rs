//! Closed-form recursive updates: exponential weights for MNL and the
//! nest-aware recursion for NL. Both rewrite the gradient step purely in
//! terms of the previous play and the fresh payoff, with no accumulated
//! score.

use crate::error::{Error, Result};
use crate::gev::{GevSpec, GevVariant};
use crate::types::SimplexVector;

/// Probability floor applied before taking logs of the state. Exact zeros
/// cannot arise in exact arithmetic but can in floats.
const INTERIOR_FLOOR: f64 = 1e-300;

/// A learner tracked purely through its current play.
#[derive(Debug, Clone, PartialEq)]
pub struct RecursiveState {
    spec: GevSpec,
    eta: f64,
    x: SimplexVector,
}

impl RecursiveState {
    /// Start from an explicit interior point.
    pub fn new(spec: GevSpec, eta: f64, x: SimplexVector) -> Result<Self> {
        if !(eta > 0.0) {
            return Err(Error::Domain(format!("eta must be positive, got {eta}")));
        }
        if x.len() != spec.n() {
            return Err(Error::DimensionMismatch {
                expected: spec.n(),
                got: x.len(),
            });
        }
        Ok(RecursiveState { spec, eta, x })
    }

    /// Start from the gradient at zero score, the canonical first play.
    pub fn from_origin(spec: GevSpec, eta: f64) -> Result<Self> {
        let x = crate::gev::choice_probabilities(
            &spec,
            &crate::types::CumulativePayoff::zeros(spec.n()),
            eta,
        )?;
        RecursiveState::new(spec, eta, x)
    }

    pub fn x(&self) -> &SimplexVector {
        &self.x
    }

    pub fn spec(&self) -> &GevSpec {
        &self.spec
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    fn floored_log_x(&self) -> Vec<f64> {
        self.x
            .as_slice()
            .iter()
            .map(|&v| v.max(INTERIOR_FLOOR).ln())
            .collect()
    }
}

fn softmax(log_w: &[f64]) -> Vec<f64> {
    let m = log_w.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let mut out: Vec<f64> = log_w.iter().map(|&v| (v - m).exp()).collect();
    let sum: f64 = out.iter().sum();
    for v in &mut out {
        *v /= sum;
    }
    out
}

fn log_sum_exp(v: &[f64]) -> f64 {
    let m = v.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    m + v.iter().map(|&x| (x - m).exp()).sum::<f64>().ln()
}

/// Exponential-weights step for MNL:
/// `x_i <- x_i e^{u_i/eta} / sum_j x_j e^{u_j/eta}`.
pub fn ewa_step(state: &RecursiveState, u: &[f64]) -> Result<RecursiveState> {
    if state.spec.variant() != GevVariant::Mnl {
        return Err(Error::UnsupportedVariant {
            operation: "ewa_step",
            variant: state.spec.variant(),
        });
    }
    if u.len() != state.spec.n() {
        return Err(Error::DimensionMismatch {
            expected: state.spec.n(),
            got: u.len(),
        });
    }
    let log_w: Vec<f64> = state
        .floored_log_x()
        .iter()
        .zip(u)
        .map(|(lx, &ui)| lx + ui / state.eta)
        .collect();
    RecursiveState::new(
        state.spec.clone(),
        state.eta,
        SimplexVector::new(softmax(&log_w))?,
    )
}

/// `Phi_i(x) = x_i^{lambda_k} (sum_{j in N_k} x_j)^{1 - lambda_k}`, the
/// inverse of the normalized-gradient map for NL. Homogeneous of degree
/// one and invertible on the positive orthant.
pub fn phi_map(spec: &GevSpec, x: &[f64]) -> Result<Vec<f64>> {
    nl_only(spec, "phi_map")?;
    if x.len() != spec.n() {
        return Err(Error::DimensionMismatch {
            expected: spec.n(),
            got: x.len(),
        });
    }
    if x.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::Domain(
            "phi_map needs strictly positive input".into(),
        ));
    }
    let mut out = vec![0.0; spec.n()];
    for nest in spec.nests() {
        let mass: f64 = nest.members.iter().map(|&i| x[i]).sum();
        let log_mass = mass.ln();
        for &i in &nest.members {
            out[i] = (nest.lambda * x[i].ln() + (1.0 - nest.lambda) * log_mass).exp();
        }
    }
    Ok(out)
}

/// `H = Phi^{-1}`:
/// `H_i(y) = y_i^{1/lambda_k} (sum_{j in N_k} y_j^{1/lambda_k})^{lambda_k - 1}`.
pub fn h_map(spec: &GevSpec, y: &[f64]) -> Result<Vec<f64>> {
    nl_only(spec, "h_map")?;
    if y.len() != spec.n() {
        return Err(Error::DimensionMismatch {
            expected: spec.n(),
            got: y.len(),
        });
    }
    if y.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::Domain("h_map needs strictly positive input".into()));
    }
    let log_y: Vec<f64> = y.iter().map(|&v| v.ln()).collect();
    let mut out = vec![0.0; spec.n()];
    for nest in spec.nests() {
        let scaled: Vec<f64> = nest
            .members
            .iter()
            .map(|&i| log_y[i] / nest.lambda)
            .collect();
        let lse = log_sum_exp(&scaled);
        for (&i, &w) in nest.members.iter().zip(&scaled) {
            out[i] = (w + (nest.lambda - 1.0) * lse).exp();
        }
    }
    Ok(out)
}

fn nl_only(spec: &GevSpec, operation: &'static str) -> Result<()> {
    if spec.variant() != GevVariant::Nl {
        return Err(Error::UnsupportedVariant {
            operation,
            variant: spec.variant(),
        });
    }
    Ok(())
}

/// The three factors of the NL recursion for one alternative:
/// `x_next_i = phi_pow_i * within_i * nest_i` with
/// `phi_pow_i = Phi_i(x)^{1/lambda_k}`, `within_i` the payoff reweighting
/// inside the nest, and `nest_i` the nest-level share.
#[derive(Debug, Clone)]
pub struct NlStepDiagnostic {
    pub phi_pow: Vec<f64>,
    pub within: Vec<f64>,
    pub nest: Vec<f64>,
}

impl NlStepDiagnostic {
    pub fn compose(&self) -> Vec<f64> {
        self.phi_pow
            .iter()
            .zip(&self.within)
            .zip(&self.nest)
            .map(|((p, w), s)| p * w * s)
            .collect()
    }
}

/// NL recursion: `x_next = H(Phi(x) e^{u/eta})`, normalized. Equals the
/// surplus gradient at the implied cumulative score at every step.
pub fn nl_recursive_step(state: &RecursiveState, u: &[f64]) -> Result<RecursiveState> {
    Ok(nl_recursive_step_with_diagnostic(state, u)?.0)
}

/// NL recursion together with its factor decomposition.
pub fn nl_recursive_step_with_diagnostic(
    state: &RecursiveState,
    u: &[f64],
) -> Result<(RecursiveState, NlStepDiagnostic)> {
    let spec = &state.spec;
    nl_only(spec, "nl_recursive_step")?;
    if u.len() != spec.n() {
        return Err(Error::DimensionMismatch {
            expected: spec.n(),
            got: u.len(),
        });
    }
    let log_x = state.floored_log_x();
    let n = spec.n();

    // log Phi_i(x) and log w_i = log Phi_i(x) + u_i/eta.
    let mut log_phi = vec![0.0; n];
    let mut log_w = vec![0.0; n];
    for nest in spec.nests() {
        let mass: f64 = nest.members.iter().map(|&i| log_x[i].exp()).sum();
        let log_mass = mass.ln();
        for &i in &nest.members {
            log_phi[i] = nest.lambda * log_x[i] + (1.0 - nest.lambda) * log_mass;
            log_w[i] = log_phi[i] + u[i] / state.eta;
        }
    }

    // log H_i(w) = log w_i / lambda_k + (lambda_k - 1) * log Q_k with
    // Q_k = sum_{j in N_k} w_j^{1/lambda_k}; the total over all
    // alternatives is sum_k Q_k^{lambda_k}.
    let mut log_h = vec![0.0; n];
    let mut log_q = Vec::with_capacity(spec.nests().len());
    for nest in spec.nests() {
        let scaled: Vec<f64> = nest
            .members
            .iter()
            .map(|&i| log_w[i] / nest.lambda)
            .collect();
        let lse = log_sum_exp(&scaled);
        log_q.push(lse);
        for (&i, &w) in nest.members.iter().zip(&scaled) {
            log_h[i] = w + (nest.lambda - 1.0) * lse;
        }
    }
    let x_next = softmax(&log_h);

    let nest_terms: Vec<f64> = spec
        .nests()
        .iter()
        .zip(&log_q)
        .map(|(nest, &q)| nest.lambda * q)
        .collect();
    let log_total = log_sum_exp(&nest_terms);
    let mut phi_pow = vec![0.0; n];
    let mut within = vec![0.0; n];
    let mut nest_share = vec![0.0; n];
    for (nest, (&q, &term)) in spec.nests().iter().zip(log_q.iter().zip(&nest_terms)) {
        for &i in &nest.members {
            phi_pow[i] = (log_phi[i] / nest.lambda).exp();
            within[i] = (u[i] / (state.eta * nest.lambda) - q).exp();
            nest_share[i] = (term - log_total).exp();
        }
    }

    let state_next = RecursiveState::new(spec.clone(), state.eta, SimplexVector::new(x_next)?)?;
    Ok((
        state_next,
        NlStepDiagnostic {
            phi_pow,
            within,
            nest: nest_share,
        },
    ))
}

//! Recency-bias predictors: summaries of past payoffs added to the
//! cumulative score before the gradient step.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::PayoffVector;

/// Which predictable sequence drives the optimistic update.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PredictorKind {
    /// Plain update, no recency bias.
    None,
    /// Last observed payoff.
    OneStep,
    /// Mean of the last `s` payoffs (fewer while warming up).
    SStep { s: usize },
    /// Discounted mean with weight `delta^-tau` on observation `tau`,
    /// so recent payoffs dominate. `delta` in (0, 1).
    Geometric { delta: f64 },
}

/// Predictor state: the payoff summary required by its kind.
#[derive(Debug, Clone, PartialEq)]
pub struct Predictor {
    kind: PredictorKind,
    /// Most recent payoffs, newest last; bounded by `s` for SStep, length
    /// one for OneStep.
    buffer: Vec<PayoffVector>,
    /// Geometric running numerator, kept in the rescaled form
    /// `delta^(t-1) * sum_tau delta^-tau u_tau` so nothing overflows.
    geo_sum: Vec<f64>,
    /// Matching rescaled denominator.
    geo_weight: f64,
    observed: usize,
}

impl Predictor {
    pub fn new(kind: PredictorKind, n: usize) -> Result<Self> {
        match kind {
            PredictorKind::SStep { s: 0 } => {
                return Err(Error::Domain("s-step predictor needs s >= 1".into()))
            }
            PredictorKind::Geometric { delta } if !(delta > 0.0 && delta < 1.0) => {
                return Err(Error::Domain(format!(
                    "geometric discount {delta} outside (0, 1)"
                )))
            }
            _ => {}
        }
        Ok(Predictor {
            kind,
            buffer: Vec::new(),
            geo_sum: vec![0.0; n],
            geo_weight: 0.0,
            observed: 0,
        })
    }

    pub fn kind(&self) -> PredictorKind {
        self.kind
    }

    pub fn observed(&self) -> usize {
        self.observed
    }

    /// Feed the payoff just revealed.
    pub fn observe(&mut self, u: &[f64]) {
        self.observed += 1;
        match self.kind {
            PredictorKind::None => {}
            PredictorKind::OneStep => {
                self.buffer.clear();
                self.buffer.push(u.to_vec());
            }
            PredictorKind::SStep { s } => {
                if self.buffer.len() == s {
                    self.buffer.remove(0);
                }
                self.buffer.push(u.to_vec());
            }
            PredictorKind::Geometric { delta } => {
                for (acc, &v) in self.geo_sum.iter_mut().zip(u) {
                    *acc = delta * *acc + v;
                }
                self.geo_weight = delta * self.geo_weight + 1.0;
            }
        }
    }

    /// Current prediction of the next payoff; the zero vector before any
    /// history exists.
    pub fn value(&self, n: usize) -> PayoffVector {
        match self.kind {
            PredictorKind::None => vec![0.0; n],
            PredictorKind::OneStep => self.buffer.last().cloned().unwrap_or_else(|| vec![0.0; n]),
            PredictorKind::SStep { .. } => {
                if self.buffer.is_empty() {
                    return vec![0.0; n];
                }
                let count = self.buffer.len() as f64;
                let mut mean = vec![0.0; n];
                for u in &self.buffer {
                    for (m, &v) in mean.iter_mut().zip(u) {
                        *m += v / count;
                    }
                }
                mean
            }
            PredictorKind::Geometric { .. } => {
                if self.geo_weight == 0.0 {
                    return vec![0.0; n];
                }
                self.geo_sum.iter().map(|&s| s / self.geo_weight).collect()
            }
        }
    }
}

/// Prediction for period `t` (1-based) given the history fed so far.
/// `t` may not run ahead of the observations plus one.
pub fn predictor_value(p: &Predictor, t: usize, n: usize) -> Result<PayoffVector> {
    if t == 0 {
        return Err(Error::Domain("periods are 1-based".into()));
    }
    if t > p.observed() + 1 {
        return Err(Error::Domain(format!(
            "prediction for period {t} requested with only {} observations",
            p.observed()
        )));
    }
    Ok(p.value(n))
}

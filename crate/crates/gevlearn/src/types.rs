//! Shared vector types: probability vectors on the simplex and cumulative
//! payoff accumulators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-period payoff vector as revealed by the environment.
pub type PayoffVector = Vec<f64>;

/// Tolerance on the simplex normalization constraint.
pub const SIMPLEX_TOL: f64 = 1e-12;

/// A probability vector over N alternatives: nonnegative entries summing to
/// one within [`SIMPLEX_TOL`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SimplexVector(Vec<f64>);

impl SimplexVector {
    pub fn new(x: Vec<f64>) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::Domain("empty probability vector".into()));
        }
        let mut sum = 0.0;
        for (i, &v) in x.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Domain(format!(
                    "probability entry {i} is {v}, must be finite and nonnegative"
                )));
            }
            sum += v;
        }
        if (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::Domain(format!(
                "probabilities sum to {sum}, off by {:.3e}",
                (sum - 1.0).abs()
            )));
        }
        Ok(SimplexVector(x))
    }

    /// Uniform distribution over `n` alternatives.
    pub fn uniform(n: usize) -> Self {
        SimplexVector(vec![1.0 / n as f64; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Expected value of a payoff vector under this distribution.
    pub fn expectation(&self, payoff: &[f64]) -> f64 {
        self.0.iter().zip(payoff).map(|(x, u)| x * u).sum()
    }
}

impl std::ops::Index<usize> for SimplexVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl TryFrom<Vec<f64>> for SimplexVector {
    type Error = Error;
    fn try_from(x: Vec<f64>) -> Result<Self> {
        SimplexVector::new(x)
    }
}

impl From<SimplexVector> for Vec<f64> {
    fn from(x: SimplexVector) -> Vec<f64> {
        x.0
    }
}

/// Running sum of payoff vectors, starting from the zero vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CumulativePayoff {
    theta: Vec<f64>,
}

impl CumulativePayoff {
    pub fn zeros(n: usize) -> Self {
        CumulativePayoff {
            theta: vec![0.0; n],
        }
    }

    pub fn from_vec(theta: Vec<f64>) -> Result<Self> {
        if theta.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain(
                "cumulative payoff has non-finite entry".into(),
            ));
        }
        Ok(CumulativePayoff { theta })
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.theta
    }

    /// Accumulate one payoff vector in place.
    pub fn add(&mut self, u: &[f64]) -> Result<()> {
        if u.len() != self.theta.len() {
            return Err(Error::DimensionMismatch {
                expected: self.theta.len(),
                got: u.len(),
            });
        }
        for (t, v) in self.theta.iter_mut().zip(u) {
            *t += v;
        }
        Ok(())
    }

    /// Largest coordinate and its index, lowest index on exact ties.
    pub fn argmax(&self) -> (usize, f64) {
        let mut best = (0, f64::NEG_INFINITY);
        for (i, &v) in self.theta.iter().enumerate() {
            if v > best.1 {
                best = (i, v);
            }
        }
        best
    }
}

/// Sup norm of a vector.
pub fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_accepts_valid_rejects_invalid() {
        assert!(SimplexVector::new(vec![0.25; 4]).is_ok());
        assert!(SimplexVector::new(vec![0.5, 0.6]).is_err());
        assert!(SimplexVector::new(vec![-0.1, 1.1]).is_err());
        assert!(SimplexVector::new(vec![]).is_err());
    }

    #[test]
    fn cumulative_payoff_accumulates() {
        let mut theta = CumulativePayoff::zeros(2);
        theta.add(&[1.0, -1.0]).unwrap();
        theta.add(&[0.5, 0.0]).unwrap();
        assert_eq!(theta.as_slice(), &[1.5, -1.0]);
        assert_eq!(theta.argmax(), (0, 1.5));
    }

    #[test]
    fn argmax_ties_pick_lowest_index() {
        let theta = CumulativePayoff::from_vec(vec![2.0, 2.0, 1.0]).unwrap();
        assert_eq!(theta.argmax().0, 0);
    }
}

//! Closed-form convex conjugates of the surplus: the entropic penalty for
//! MNL and the two-level nest entropy for NL. No other variant has a
//! closed form.

use crate::error::{Error, Result};
use crate::types::SimplexVector;

use super::{GevSpec, GevVariant};

/// Regularizer value at an interior point of the simplex.
///
/// MNL: `eta * sum_i x_i ln x_i`. NL: `eta * sum_k sum_{i in N_k}
/// lambda_k x_i ln x_i + eta * sum_k (1 - lambda_k) X_k ln X_k` with
/// `X_k` the nest mass. Nonpositive everywhere on the simplex.
pub fn regularizer(spec: &GevSpec, x: &SimplexVector, eta: f64) -> Result<f64> {
    if !(eta > 0.0) {
        return Err(Error::Domain(format!("eta must be positive, got {eta}")));
    }
    if x.len() != spec.n() {
        return Err(Error::DimensionMismatch {
            expected: spec.n(),
            got: x.len(),
        });
    }
    if x.as_slice().iter().any(|&v| v <= 0.0) {
        return Err(Error::Domain(
            "regularizer requires a strictly interior point".into(),
        ));
    }
    match spec.variant() {
        GevVariant::Mnl => Ok(eta * x.as_slice().iter().map(|&v| v * v.ln()).sum::<f64>()),
        GevVariant::Nl => {
            let mut total = 0.0;
            for nest in spec.nests() {
                let mass: f64 = nest.members.iter().map(|&i| x[i]).sum();
                let within: f64 = nest.members.iter().map(|&i| x[i] * x[i].ln()).sum();
                total += nest.lambda * within + (1.0 - nest.lambda) * mass * mass.ln();
            }
            Ok(eta * total)
        }
        other => Err(Error::UnsupportedVariant {
            operation: "regularizer",
            variant: other,
        }),
    }
}

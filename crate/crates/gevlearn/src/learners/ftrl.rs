//! Direct regularized-leader solve on the simplex.
//!
//! Maximizes `<theta, x> - R(x)` by entropic mirror ascent. This is the
//! independent route to the same point the surplus gradient reaches in
//! closed form; the two are checked against each other rather than sharing
//! code. Only MNL and NL are supported, the variants whose regularizer has
//! a closed form.

use crate::error::{Error, Result};
use crate::gev::{model_constants, GevSpec, GevVariant};
use crate::types::{CumulativePayoff, SimplexVector};

const MAX_ITERATIONS: usize = 100_000;

/// Gradient of `R(x)/eta` for MNL/NL at an interior point.
fn regularizer_gradient(spec: &GevSpec, x: &[f64], grad: &mut [f64]) {
    match spec.variant() {
        GevVariant::Mnl => {
            for (g, &xi) in grad.iter_mut().zip(x) {
                *g = xi.ln() + 1.0;
            }
        }
        GevVariant::Nl => {
            for nest in spec.nests() {
                let mass: f64 = nest.members.iter().map(|&i| x[i]).sum();
                let log_mass = mass.ln();
                for &i in &nest.members {
                    grad[i] = nest.lambda * x[i].ln() + (1.0 - nest.lambda) * log_mass + 1.0;
                }
            }
        }
        _ => unreachable!("variant gate checked by caller"),
    }
}

/// Solve `max_{x in simplex} <theta, x> - R(x)` to first-order tolerance
/// `tol` (at least 1e-12). Returns the unique maximizer.
///
/// On a hit of the iteration cap the error carries the best iterate and
/// its residual.
pub fn ftrl_solve(
    spec: &GevSpec,
    theta: &CumulativePayoff,
    eta: f64,
    tol: f64,
) -> Result<SimplexVector> {
    match spec.variant() {
        GevVariant::Mnl | GevVariant::Nl => {}
        other => {
            return Err(Error::UnsupportedVariant {
                operation: "ftrl_solve",
                variant: other,
            })
        }
    }
    if !(eta > 0.0) {
        return Err(Error::Domain(format!("eta must be positive, got {eta}")));
    }
    if tol < 1e-12 {
        return Err(Error::Domain(format!("tolerance {tol} below 1e-12")));
    }
    let n = spec.n();
    if theta.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: theta.len(),
        });
    }

    // Work with the eta-normalized objective <theta/eta, x> - R(x)/eta,
    // which shares the maximizer and keeps the step size model-only.
    let z: Vec<f64> = theta.as_slice().iter().map(|&t| t / eta).collect();
    let step = 1.0 / model_constants(spec)?.l;

    let mut log_x: Vec<f64> = vec![-(n as f64).ln(); n];
    let mut x: Vec<f64> = vec![1.0 / n as f64; n];
    let mut grad = vec![0.0; n];
    let mut residual = f64::INFINITY;

    for _ in 0..MAX_ITERATIONS {
        regularizer_gradient(spec, &x, &mut grad);
        for (g, &zi) in grad.iter_mut().zip(&z) {
            *g = zi - *g;
        }
        // Stationarity on the simplex: the ascent direction is constant
        // across the support. Measure the mass-weighted deviation.
        let mean: f64 = x.iter().zip(&grad).map(|(xi, g)| xi * g).sum();
        residual = x
            .iter()
            .zip(&grad)
            .map(|(xi, g)| xi * (g - mean).abs())
            .fold(0.0, f64::max);

        let mut shift = f64::NEG_INFINITY;
        for (lx, g) in log_x.iter_mut().zip(&grad) {
            *lx += step * g;
            shift = shift.max(*lx);
        }
        let mut total = 0.0;
        for lx in &mut log_x {
            *lx -= shift;
            total += lx.exp();
        }
        let log_total = total.ln();
        let mut delta = 0.0f64;
        for (xi, lx) in x.iter_mut().zip(&mut log_x) {
            *lx -= log_total;
            let fresh = lx.exp();
            delta = delta.max((fresh - *xi).abs());
            *xi = fresh;
        }
        if residual < tol && delta < tol * 0.1 {
            return SimplexVector::new(x);
        }
    }
    Err(Error::NonConvergence {
        iterations: MAX_ITERATIONS,
        residual,
        best: x,
    })
}

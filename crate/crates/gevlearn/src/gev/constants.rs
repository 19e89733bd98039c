//! Smoothness constants driving the regret analysis.

use crate::error::Result;

use super::{log_generator_at_ones, GevSpec, GevVariant};

/// Curvature and Lipschitz data for one model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelConstants {
    /// Curvature constant of the generator condition; `L = 2M + 1`.
    pub m: f64,
    /// Lipschitz numerator: the surplus gradient is `L/eta`-Lipschitz in
    /// the 1-norm.
    pub l: f64,
    /// Exact eta-free surplus at the origin, `log G(1)`.
    pub surplus_at_zero: f64,
    /// The `log N` ceiling on `surplus_at_zero` used by the headline bound
    /// formulas.
    pub surplus_log_n_bound: f64,
}

/// Per-variant constants: `L = 1` for MNL, `L = 2/min lambda - 1` for the
/// nested family, together with the exact `log G(1)` and its `log N` bound.
pub fn model_constants(spec: &GevSpec) -> Result<ModelConstants> {
    spec.validate()?;
    let l = match spec.variant() {
        GevVariant::Mnl => 1.0,
        _ => 2.0 / spec.min_lambda() - 1.0,
    };
    Ok(ModelConstants {
        m: (l - 1.0) / 2.0,
        l,
        surplus_at_zero: log_generator_at_ones(spec),
        surplus_log_n_bound: (spec.n() as f64).ln(),
    })
}

//! No-regret online learning with generalized extreme value choice models.
//!
//! A decision maker repeatedly picks a distribution over N alternatives,
//! observes a payoff vector, and accumulates it. Playing the gradient of
//! the random-utility surplus function at the accumulated payoffs is a
//! no-regret strategy, and it is dual to follow-the-regularized-leader:
//! the surplus's convex conjugate is the regularizer. This crate provides:
//!
//! - [`gev`]: the model family (MNL, NL, GNL, CNL, PCL, OGEV, PDGEV) in
//!   one canonical nested-generator form, with overflow-safe surplus,
//!   choice probabilities, smoothness constants, closed-form regularizers,
//!   and perturbed-leader sampling.
//! - [`learners`]: the gradient learner and its optimistic (recency-bias)
//!   variant, a direct mirror-ascent solver for the regularized problem,
//!   and the exponential-weights / nested recursions.
//! - [`regret`]: regret accounting, the guarantee formulas and optimal
//!   learning parameters, the model bound table, and consistency fits.
//! - [`environments`]: seeded payoff streams (i.i.d., shifting,
//!   adversarial, slowly drifting) honoring the sup-norm contract.
//! - [`games`]: repeated normal-form games with per-player learners,
//!   coarse-correlated-equilibrium checks, and smooth-game welfare bounds.
//! - [`market`]: cost-function prediction markets priced by the surplus,
//!   with the logarithmic market scoring rule as the MNL case.
//! - [`harness`]: config-driven experiment runner behind the `gevlearn`
//!   binary.
//!
//! Start with the runnable examples (`cargo run --example ssa_regret`)
//! or the `gevlearn` CLI (`learn`, `game`, `market`, `bounds`).

// Parameter guards are written as `!(x > 0.0)` so that NaN fails
// validation; the non-negated forms would let NaN through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod environments;
pub mod error;
pub mod games;
pub mod gev;
pub mod harness;
pub mod learners;
pub mod market;
pub mod regret;
pub mod types;

pub use error::{Error, Result};
pub use gev::{GevSpec, GevVariant};
pub use types::{CumulativePayoff, PayoffVector, SimplexVector};

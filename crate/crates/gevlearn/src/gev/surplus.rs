//! Surplus function, choice probabilities, and the generator itself.
//!
//! Everything runs in log coordinates: within each nest the scaled
//! utilities are shifted by the nest max before the 1/lambda exponent is
//! applied, and the across-nest aggregation is a second log-sum-exp. This
//! keeps evaluation finite for scaled utilities up to +-700 even with small
//! lambdas.

use crate::error::{Error, Result};
use crate::types::{CumulativePayoff, SimplexVector};

use super::{GevSpec, GevVariant};

/// Stable log(sum(exp(v))) over a slice.
fn log_sum_exp(v: &[f64]) -> f64 {
    let m = v.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let s: f64 = v.iter().map(|&x| (x - m).exp()).sum();
    m + s.ln()
}

/// Per-nest inclusive values of the generator at `exp(z)`:
/// `v_k = lambda_k * log sum_{i in N_k} exp((z_i + ln alpha_ik)/lambda_k)`.
fn inclusive_values(spec: &GevSpec, z: &[f64]) -> Vec<f64> {
    spec.nests()
        .iter()
        .map(|nest| {
            let scaled: Vec<f64> = nest
                .members
                .iter()
                .zip(&nest.alpha)
                .map(|(&i, &a)| (z[i] + a.ln()) / nest.lambda)
                .collect();
            nest.lambda * log_sum_exp(&scaled)
        })
        .collect()
}

/// `log G(exp(z))` for the spec's generator.
pub(crate) fn log_generator(spec: &GevSpec, z: &[f64]) -> f64 {
    log_sum_exp(&inclusive_values(spec, z))
}

/// `log G(1, ..., 1)`, the eta-free surplus at the origin.
pub fn log_generator_at_ones(spec: &GevSpec) -> f64 {
    log_generator(spec, &vec![0.0; spec.n()])
}

/// Generator value `G(y)` for strictly positive `y`. Homogeneous of
/// degree one in `y`.
pub fn generator_value(spec: &GevSpec, y: &[f64]) -> Result<f64> {
    spec.validate()?;
    if y.len() != spec.n() {
        return Err(Error::DimensionMismatch {
            expected: spec.n(),
            got: y.len(),
        });
    }
    if y.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::Domain(
            "generator argument must be strictly positive and finite".into(),
        ));
    }
    let z: Vec<f64> = y.iter().map(|&v| v.ln()).collect();
    Ok(log_generator(spec, &z).exp())
}

fn check_eta(eta: f64) -> Result<()> {
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(Error::Domain(format!("eta must be positive, got {eta}")));
    }
    Ok(())
}

fn scaled_utilities(spec: &GevSpec, theta: &CumulativePayoff, eta: f64) -> Result<Vec<f64>> {
    check_eta(eta)?;
    if theta.len() != spec.n() {
        return Err(Error::DimensionMismatch {
            expected: spec.n(),
            got: theta.len(),
        });
    }
    Ok(theta.as_slice().iter().map(|&t| t / eta).collect())
}

/// Social surplus `phi(theta) = eta * log G(exp(theta/eta))` under the
/// zero-mean shock convention. Satisfies `phi(theta + c*1) = phi(theta) + c`
/// and `phi(theta) = eta * phi(theta/eta at eta = 1)`.
pub fn social_surplus(spec: &GevSpec, theta: &CumulativePayoff, eta: f64) -> Result<f64> {
    let z = scaled_utilities(spec, theta, eta)?;
    Ok(eta * log_generator(spec, &z))
}

/// Choice probabilities `grad phi(theta)`: the two-stage nest/within-nest
/// composition of the generator gradient.
pub fn choice_probabilities(
    spec: &GevSpec,
    theta: &CumulativePayoff,
    eta: f64,
) -> Result<SimplexVector> {
    let z = scaled_utilities(spec, theta, eta)?;
    let v = inclusive_values(spec, &z);
    let log_g = log_sum_exp(&v);
    let mut x = vec![0.0f64; spec.n()];
    for (nest, &v_k) in spec.nests().iter().zip(&v) {
        let scaled: Vec<f64> = nest
            .members
            .iter()
            .zip(&nest.alpha)
            .map(|(&i, &a)| (z[i] + a.ln()) / nest.lambda)
            .collect();
        let lse = log_sum_exp(&scaled);
        let log_nest = v_k - log_g;
        for (&i, &w) in nest.members.iter().zip(&scaled) {
            x[i] += (log_nest + w - lse).exp();
        }
    }
    let sum: f64 = x.iter().sum();
    for xi in &mut x {
        *xi /= sum;
    }
    SimplexVector::new(x)
}

/// First-stage nest probabilities, second-stage conditional probabilities,
/// and the per-nest inclusive values.
#[derive(Debug, Clone)]
pub struct TwoStageBreakdown {
    /// `P_k`: probability of entering each nest.
    pub nest_probs: SimplexVector,
    /// `P_{i|k}`: K rows of length N; zero off the nest's members, each row
    /// summing to one over them.
    pub within_probs: Vec<Vec<f64>>,
    /// `v_k`: inclusive value of each nest at the scaled utilities.
    pub inclusive_values: Vec<f64>,
}

impl TwoStageBreakdown {
    /// Recompose `sum_k P_k * P_{i|k}`.
    pub fn compose(&self) -> Vec<f64> {
        let n = self.within_probs[0].len();
        let mut x = vec![0.0; n];
        for (k, row) in self.within_probs.iter().enumerate() {
            let p_k = self.nest_probs[k];
            for (xi, &w) in x.iter_mut().zip(row) {
                *xi += p_k * w;
            }
        }
        x
    }
}

/// Two-stage decomposition of the choice probabilities. Not defined for
/// plain MNL (a single degenerate stage).
pub fn two_stage_breakdown(
    spec: &GevSpec,
    theta: &CumulativePayoff,
    eta: f64,
) -> Result<TwoStageBreakdown> {
    if spec.variant() == GevVariant::Mnl {
        return Err(Error::UnsupportedVariant {
            operation: "two_stage_breakdown",
            variant: spec.variant(),
        });
    }
    let z = scaled_utilities(spec, theta, eta)?;
    let v = inclusive_values(spec, &z);
    let log_g = log_sum_exp(&v);
    let nest_probs = SimplexVector::new(v.iter().map(|&vk| (vk - log_g).exp()).collect())?;
    let within_probs = spec
        .nests()
        .iter()
        .map(|nest| {
            let scaled: Vec<f64> = nest
                .members
                .iter()
                .zip(&nest.alpha)
                .map(|(&i, &a)| (z[i] + a.ln()) / nest.lambda)
                .collect();
            let lse = log_sum_exp(&scaled);
            let mut row = vec![0.0; spec.n()];
            for (&i, &w) in nest.members.iter().zip(&scaled) {
                row[i] = (w - lse).exp();
            }
            row
        })
        .collect();
    Ok(TwoStageBreakdown {
        nest_probs,
        within_probs,
        inclusive_values: v,
    })
}

/// Central-difference gradient of the social surplus. Step `h` must lie in
/// [1e-7, 1e-4]. Independent probe of [`choice_probabilities`]; also drives
/// the market validity audit.
pub fn numeric_gradient(
    spec: &GevSpec,
    theta: &CumulativePayoff,
    eta: f64,
    h: f64,
) -> Result<Vec<f64>> {
    if !(1e-7..=1e-4).contains(&h) {
        return Err(Error::Domain(format!(
            "finite-difference step {h} outside [1e-7, 1e-4]"
        )));
    }
    check_eta(eta)?;
    let n = spec.n();
    let mut grad = vec![0.0; n];
    let mut probe = theta.as_slice().to_vec();
    for i in 0..n {
        let orig = probe[i];
        probe[i] = orig + h;
        let plus = social_surplus(spec, &CumulativePayoff::from_vec(probe.clone())?, eta)?;
        probe[i] = orig - h;
        let minus = social_surplus(spec, &CumulativePayoff::from_vec(probe.clone())?, eta)?;
        probe[i] = orig;
        grad[i] = (plus - minus) / (2.0 * h);
    }
    Ok(grad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gev::nl_example_spec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn theta(v: &[f64]) -> CumulativePayoff {
        CumulativePayoff::from_vec(v.to_vec()).unwrap()
    }

    #[test]
    fn mnl_generator_at_ones_is_n() {
        let spec = GevSpec::mnl(3).unwrap();
        assert!((generator_value(&spec, &[1.0, 1.0, 1.0]).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn nl_generator_hand_value() {
        let spec = nl_example_spec();
        let g = generator_value(&spec, &[1.0, 1.0, 1.0]).unwrap();
        assert!((g - (2.0f64.sqrt() + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn generator_rejects_nonpositive_input() {
        let spec = GevSpec::mnl(2).unwrap();
        assert!(generator_value(&spec, &[1.0, 0.0]).is_err());
        assert!(generator_value(&spec, &[1.0, -2.0]).is_err());
    }

    #[test]
    fn generator_degree_one_homogeneous() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for variant in [GevVariant::Gnl, GevVariant::Pcl, GevVariant::Pdgev] {
            let spec = GevSpec::sample(variant, 5, &mut rng).unwrap();
            let y: Vec<f64> = (0..5).map(|_| rng.gen_range(0.1..4.0)).collect();
            let scaled: Vec<f64> = y.iter().map(|v| 2.5 * v).collect();
            let g = generator_value(&spec, &y).unwrap();
            let g_scaled = generator_value(&spec, &scaled).unwrap();
            assert!((g_scaled - 2.5 * g).abs() < 1e-12 * g.max(1.0));
        }
    }

    #[test]
    fn mnl_surplus_at_zero_is_log_n() {
        let spec = GevSpec::mnl(10).unwrap();
        let phi = social_surplus(&spec, &CumulativePayoff::zeros(10), 1.0).unwrap();
        assert!((phi - 10f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn nl_surplus_at_zero_hand_value() {
        let spec = nl_example_spec();
        let phi = social_surplus(&spec, &CumulativePayoff::zeros(3), 1.0).unwrap();
        assert!((phi - (2.0f64.sqrt() + 1.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn surplus_translation_invariance() {
        let spec = nl_example_spec();
        let base = theta(&[0.3, -1.2, 0.7]);
        let shifted = theta(&[5.3, 3.8, 5.7]);
        let phi0 = social_surplus(&spec, &base, 2.0).unwrap();
        let phi5 = social_surplus(&spec, &shifted, 2.0).unwrap();
        assert!((phi5 - phi0 - 5.0).abs() < 1e-10);
    }

    #[test]
    fn surplus_rejects_bad_eta() {
        let spec = GevSpec::mnl(2).unwrap();
        assert!(social_surplus(&spec, &CumulativePayoff::zeros(2), 0.0).is_err());
        assert!(social_surplus(&spec, &CumulativePayoff::zeros(2), -1.0).is_err());
    }

    #[test]
    fn mnl_choice_probabilities_symmetric_and_weighted() {
        let spec = GevSpec::mnl(3).unwrap();
        let x = choice_probabilities(&spec, &CumulativePayoff::zeros(3), 1.0).unwrap();
        for i in 0..3 {
            assert!((x[i] - 1.0 / 3.0).abs() < 1e-14);
        }
        let spec2 = GevSpec::mnl(2).unwrap();
        let x = choice_probabilities(&spec2, &theta(&[2.0f64.ln(), 0.0]), 1.0).unwrap();
        assert!((x[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((x[1] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn nl_choice_probabilities_hand_values() {
        let spec = nl_example_spec();
        let x = choice_probabilities(&spec, &CumulativePayoff::zeros(3), 1.0).unwrap();
        assert!((x[0] - 0.29289321881345254).abs() < 1e-12);
        assert!((x[1] - 0.29289321881345254).abs() < 1e-12);
        assert!((x[2] - 0.41421356237309515).abs() < 1e-12);
    }

    #[test]
    fn choice_probabilities_overflow_safe() {
        let spec = nl_example_spec();
        let x = choice_probabilities(&spec, &theta(&[700.0, 0.0, -700.0]), 1.0).unwrap();
        assert!(x.as_slice().iter().all(|v| v.is_finite()));
        assert!((x.as_slice().iter().sum::<f64>() - 1.0).abs() < 1e-10);
        assert!(x[0] > 0.999);
    }

    #[test]
    fn two_stage_matches_hand_values_and_recomposes() {
        let spec = nl_example_spec();
        let ts = two_stage_breakdown(&spec, &CumulativePayoff::zeros(3), 1.0).unwrap();
        assert!((ts.nest_probs[0] - 0.5857864376269051).abs() < 1e-12);
        assert!((ts.nest_probs[1] - 0.4142135623730951).abs() < 1e-12);
        let direct = choice_probabilities(&spec, &CumulativePayoff::zeros(3), 1.0).unwrap();
        for (a, b) in ts.compose().iter().zip(direct.as_slice()) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn two_stage_rejects_mnl() {
        let spec = GevSpec::mnl(3).unwrap();
        assert!(matches!(
            two_stage_breakdown(&spec, &CumulativePayoff::zeros(3), 1.0),
            Err(Error::UnsupportedVariant { .. })
        ));
    }

    #[test]
    fn two_stage_degenerate_single_nest_is_softmax() {
        let spec = GevSpec::nl(3, &[(vec![0, 1, 2], 1.0)]).unwrap();
        let ts = two_stage_breakdown(&spec, &theta(&[1.0, 0.0, -1.0]), 1.0).unwrap();
        assert!((ts.nest_probs[0] - 1.0).abs() < 1e-14);
        let mnl = GevSpec::mnl(3).unwrap();
        let soft = choice_probabilities(&mnl, &theta(&[1.0, 0.0, -1.0]), 1.0).unwrap();
        for (w, s) in ts.within_probs[0].iter().zip(soft.as_slice()) {
            assert!((w - s).abs() < 1e-12);
        }
    }

    #[test]
    fn two_stage_symmetric_gnl_nests_agree() {
        let nests = vec![
            super::super::Nest {
                members: vec![0, 1],
                lambda: 1.0,
                alpha: vec![0.5, 0.5],
            },
            super::super::Nest {
                members: vec![0, 1],
                lambda: 1.0,
                alpha: vec![0.5, 0.5],
            },
        ];
        let spec = GevSpec::gnl(2, nests).unwrap();
        let ts = two_stage_breakdown(&spec, &CumulativePayoff::zeros(2), 1.0).unwrap();
        for i in 0..2 {
            assert!((ts.within_probs[0][i] - ts.within_probs[1][i]).abs() < 1e-14);
        }
        assert!((ts.nest_probs[0] - ts.nest_probs[1]).abs() < 1e-14);
    }

    #[test]
    fn numeric_gradient_matches_analytic() {
        let mnl = GevSpec::mnl(3).unwrap();
        let t = theta(&[1.0, 0.0, -1.0]);
        let fd = numeric_gradient(&mnl, &t, 1.0, 1e-5).unwrap();
        let exact = choice_probabilities(&mnl, &t, 1.0).unwrap();
        for (a, b) in fd.iter().zip(exact.as_slice()) {
            assert!((a - b).abs() < 1e-6);
        }
        assert!((fd.iter().sum::<f64>() - 1.0).abs() < 1e-6);

        let nl = nl_example_spec();
        let fd = numeric_gradient(&nl, &CumulativePayoff::zeros(3), 1.0, 1e-5).unwrap();
        let exact = choice_probabilities(&nl, &CumulativePayoff::zeros(3), 1.0).unwrap();
        for (a, b) in fd.iter().zip(exact.as_slice()) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn tiny_lambda_with_large_scores_stays_finite() {
        // 1/lambda amplifies the within-nest exponents to |z|/lambda = 600;
        // naive exponentiation would overflow long before that.
        let spec = GevSpec::nl(3, &[(vec![0, 1], 0.05), (vec![2], 1.0)]).unwrap();
        let t = theta(&[30.0, 0.0, -30.0]);
        let phi = social_surplus(&spec, &t, 1.0).unwrap();
        assert!(phi.is_finite());
        assert!((phi - 30.0).abs() < 1.0);
        let x = choice_probabilities(&spec, &t, 1.0).unwrap();
        assert!(x.as_slice().iter().all(|v| v.is_finite()));
        assert!(x[0] > 0.999);
        let fd = numeric_gradient(&spec, &t, 1.0, 1e-5).unwrap();
        for (a, b) in fd.iter().zip(x.as_slice()) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn numeric_gradient_rejects_bad_step() {
        let spec = GevSpec::mnl(2).unwrap();
        assert!(numeric_gradient(&spec, &CumulativePayoff::zeros(2), 1.0, 1e-2).is_err());
        assert!(numeric_gradient(&spec, &CumulativePayoff::zeros(2), 1.0, 1e-9).is_err());
    }
}

//! Perturbed-leader sampling for the MNL case: draw independent centered
//! Gumbel shocks and take the argmax. Across draws the empirical argmax
//! frequencies converge to the surplus gradient.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::types::CumulativePayoff;

use super::{GevSpec, GevVariant};

/// Euler's constant, the mean of a standard Gumbel draw.
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// One perturbed-leader draw: `argmax_j theta_j + eta * eps_j` with
/// `eps_j` i.i.d. Gumbel shifted to zero mean. Exact float ties go to the
/// lowest index. MNL only (the independent-shock case).
pub fn ftpl_sample_choice(
    spec: &GevSpec,
    theta: &CumulativePayoff,
    eta: f64,
    rng: &mut ChaCha8Rng,
) -> Result<usize> {
    if spec.variant() != GevVariant::Mnl {
        return Err(Error::UnsupportedVariant {
            operation: "ftpl_sample_choice",
            variant: spec.variant(),
        });
    }
    if !(eta > 0.0) {
        return Err(Error::Domain(format!("eta must be positive, got {eta}")));
    }
    if theta.len() != spec.n() {
        return Err(Error::DimensionMismatch {
            expected: spec.n(),
            got: theta.len(),
        });
    }
    let mut best = (0usize, f64::NEG_INFINITY);
    for (i, &t) in theta.as_slice().iter().enumerate() {
        let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let gumbel = -(-u.ln()).ln() - EULER_GAMMA;
        let perturbed = t + eta * gumbel;
        if perturbed > best.1 {
            best = (i, perturbed);
        }
    }
    Ok(best.0)
}

/// Empirical argmax frequencies over `draws` samples from a fresh
/// seeded generator.
pub fn ftpl_frequencies(
    spec: &GevSpec,
    theta: &CumulativePayoff,
    eta: f64,
    draws: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0usize; spec.n()];
    for _ in 0..draws {
        counts[ftpl_sample_choice(spec, theta, eta, &mut rng)?] += 1;
    }
    Ok(counts
        .into_iter()
        .map(|c| c as f64 / draws as f64)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gev::choice_probabilities;

    #[test]
    fn dominant_alternative_always_wins() {
        let spec = GevSpec::mnl(3).unwrap();
        let theta = CumulativePayoff::from_vec(vec![1e6, 0.0, 0.0]).unwrap();
        let freq = ftpl_frequencies(&spec, &theta, 1.0, 1000, 5).unwrap();
        assert!(freq[0] > 0.999);
    }

    #[test]
    fn symmetric_case_splits_evenly() {
        let spec = GevSpec::mnl(2).unwrap();
        let freq = ftpl_frequencies(&spec, &CumulativePayoff::zeros(2), 1.0, 100_000, 17).unwrap();
        assert!((freq[0] - 0.5).abs() < 0.01);
    }

    #[test]
    fn frequencies_track_choice_probabilities() {
        let spec = GevSpec::mnl(2).unwrap();
        let theta = CumulativePayoff::from_vec(vec![2.0f64.ln(), 0.0]).unwrap();
        let freq = ftpl_frequencies(&spec, &theta, 1.0, 1_000_000, 23).unwrap();
        let exact = choice_probabilities(&spec, &theta, 1.0).unwrap();
        assert!((freq[0] - exact[0]).abs() < 0.005);
        assert!((freq[1] - exact[1]).abs() < 0.005);
    }

    #[test]
    fn non_mnl_variant_rejected() {
        let spec = crate::gev::nl_example_spec();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(ftpl_sample_choice(&spec, &CumulativePayoff::zeros(3), 1.0, &mut rng).is_err());
    }
}

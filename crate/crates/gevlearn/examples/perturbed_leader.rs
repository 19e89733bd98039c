//! Sampling view of the learner: perturbing the scores with centered
//! Gumbel noise and taking the argmax draws exactly from the gradient
//! probabilities.
//!
//! ```bash
//! cargo run --example perturbed_leader
//! ```

use gevlearn::gev::{choice_probabilities, ftpl_frequencies, GevSpec};
use gevlearn::types::CumulativePayoff;

fn main() -> gevlearn::Result<()> {
    let spec = GevSpec::mnl(4)?;
    let theta = CumulativePayoff::from_vec(vec![1.0, 0.5, 0.0, -1.0])?;
    let eta = 1.0;

    let exact = choice_probabilities(&spec, &theta, eta)?;
    println!(
        "{:<12} {:>10} {:>10} {:>10}",
        "draws", "alt 0", "alt 1", "alt 2"
    );
    println!(
        "{:<12} {:>10.4} {:>10.4} {:>10.4}   (gradient)",
        "exact", exact[0], exact[1], exact[2]
    );
    for draws in [1_000usize, 10_000, 100_000, 1_000_000] {
        let freq = ftpl_frequencies(&spec, &theta, eta, draws, 42)?;
        println!(
            "{:<12} {:>10.4} {:>10.4} {:>10.4}",
            draws, freq[0], freq[1], freq[2]
        );
    }
    Ok(())
}

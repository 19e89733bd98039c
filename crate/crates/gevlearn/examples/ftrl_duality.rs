//! The regularized-leader solve and the surplus gradient are the same
//! map: mirror ascent on `<theta, x> - R(x)` lands on the closed-form
//! probabilities.
//!
//! ```bash
//! cargo run --example ftrl_duality
//! ```

use gevlearn::gev::{choice_probabilities, regularizer, social_surplus, GevSpec};
use gevlearn::learners::ftrl_solve;
use gevlearn::types::CumulativePayoff;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> gevlearn::Result<()> {
    let spec = GevSpec::nl(4, &[(vec![0, 1], 0.5), (vec![2, 3], 0.9)])?;
    let eta = 1.0;
    let mut rng = ChaCha8Rng::seed_from_u64(5);

    let mut worst = 0.0f64;
    for trial in 0..5 {
        let theta = CumulativePayoff::from_vec((0..4).map(|_| rng.gen_range(-3.0..3.0)).collect())?;
        let direct = choice_probabilities(&spec, &theta, eta)?;
        let solved = ftrl_solve(&spec, &theta, eta, 1e-11)?;
        let gap = direct
            .as_slice()
            .iter()
            .zip(solved.as_slice())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        worst = worst.max(gap);
        println!("trial {trial}: theta = {:?}", theta.as_slice());
        println!("  gradient: {:?}", direct.as_slice());
        println!("  solver:   {:?}", solved.as_slice());
        println!("  gap: {gap:.2e}");

        // Conjugacy at the optimum: R(x*) = <theta, x*> - phi(theta).
        let r = regularizer(&spec, &direct, eta)?;
        let fenchel = direct.expectation(theta.as_slice()) - social_surplus(&spec, &theta, eta)?;
        println!("  regularizer {r:.6} vs conjugate value {fenchel:.6}");
    }
    println!("\nworst solver/gradient gap over 5 trials: {worst:.2e}");
    Ok(())
}

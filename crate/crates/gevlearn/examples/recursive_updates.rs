//! Score-free learning: the exponential-weights recursion (MNL) and the
//! nest-aware recursion (NL) reproduce the gradient of the accumulated
//! score at every step without ever storing the score.
//!
//! ```bash
//! cargo run --example recursive_updates
//! ```

use gevlearn::gev::{choice_probabilities, GevSpec};
use gevlearn::learners::{ewa_step, nl_recursive_step_with_diagnostic, RecursiveState};
use gevlearn::types::CumulativePayoff;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> gevlearn::Result<()> {
    let eta = 1.0;
    let mut rng = ChaCha8Rng::seed_from_u64(8);

    println!("exponential weights (MNL), 200 steps:");
    let mnl = GevSpec::mnl(4)?;
    let mut state = RecursiveState::from_origin(mnl.clone(), eta)?;
    let mut theta = CumulativePayoff::zeros(4);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let u: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        state = ewa_step(&state, &u)?;
        theta.add(&u)?;
        let direct = choice_probabilities(&mnl, &theta, eta)?;
        for i in 0..4 {
            worst = worst.max((state.x()[i] - direct[i]).abs());
        }
    }
    println!("  final play {:?}", state.x().as_slice());
    println!("  worst drift from the direct gradient: {worst:.2e}");

    println!("\nnested recursion (NL), 200 steps:");
    let nl = GevSpec::nl(4, &[(vec![0, 1], 0.5), (vec![2, 3], 0.8)])?;
    let mut state = RecursiveState::from_origin(nl.clone(), eta)?;
    let mut theta = CumulativePayoff::zeros(4);
    let mut worst = 0.0f64;
    for step in 0..200 {
        let u: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let (next, diagnostic) = nl_recursive_step_with_diagnostic(&state, &u)?;
        if step == 0 {
            println!("  first step factor decomposition (phi^1/lambda * within * nest):");
            for i in 0..4 {
                println!(
                    "    alt {i}: {:.4} * {:.4} * {:.4} = {:.6}",
                    diagnostic.phi_pow[i],
                    diagnostic.within[i],
                    diagnostic.nest[i],
                    next.x()[i]
                );
            }
        }
        state = next;
        theta.add(&u)?;
        let direct = choice_probabilities(&nl, &theta, eta)?;
        for i in 0..4 {
            worst = worst.max((state.x()[i] - direct[i]).abs());
        }
    }
    println!("  final play {:?}", state.x().as_slice());
    println!("  worst drift from the direct gradient: {worst:.2e}");
    Ok(())
}

//! Tour of the GEV model family: generator values, surplus, choice
//! probabilities, and the two-stage nest decomposition.
//!
//! ```bash
//! cargo run --example choice_models
//! ```

use gevlearn::gev::{
    choice_probabilities, generator_value, model_constants, social_surplus, two_stage_breakdown,
    GevSpec, GevVariant,
};
use gevlearn::types::CumulativePayoff;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> gevlearn::Result<()> {
    let n = 5;
    let theta = CumulativePayoff::from_vec(vec![1.0, 0.5, 0.0, -0.5, -1.0])?;
    let eta = 1.0;

    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let specs = vec![
        ("MNL", GevSpec::mnl(n)?),
        (
            "NL",
            GevSpec::nl(n, &[(vec![0, 1], 0.5), (vec![2, 3, 4], 0.8)])?,
        ),
        ("GNL", GevSpec::sample(GevVariant::Gnl, n, &mut rng)?),
        ("PCL", GevSpec::pcl_uniform(n, 0.6)?),
        ("OGEV", GevSpec::ogev(n, 1, &vec![0.7; n + 1], None)?),
    ];

    println!("scores theta = {:?}, eta = {eta}", theta.as_slice());
    println!();
    for (name, spec) in &specs {
        let constants = model_constants(spec)?;
        let g1 = generator_value(spec, &vec![1.0; n])?;
        let phi = social_surplus(spec, &theta, eta)?;
        let x = choice_probabilities(spec, &theta, eta)?;
        println!(
            "{name}: G(1) = {g1:.4}, L = {}, phi(theta) = {phi:.4}",
            constants.l
        );
        print!("  choice probabilities:");
        for v in x.as_slice() {
            print!(" {v:.4}");
        }
        println!();
        if spec.variant() != GevVariant::Mnl {
            let two_stage = two_stage_breakdown(spec, &theta, eta)?;
            print!("  nest probabilities:  ");
            for v in two_stage.nest_probs.as_slice() {
                print!(" {v:.4}");
            }
            println!();
        }
        println!();
    }
    Ok(())
}

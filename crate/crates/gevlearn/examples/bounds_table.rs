//! Optimized regret guarantees across the model family at a common
//! horizon: the familiar `u_max sqrt(2 log N L T)` per model, next to the
//! tighter bound from the exact surplus at zero.
//!
//! ```bash
//! cargo run --example bounds_table
//! ```

use gevlearn::gev::{GevSpec, GevVariant, PdgevAttribute};
use gevlearn::harness::report;
use gevlearn::regret::bounds_table;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> gevlearn::Result<()> {
    let n = 10;
    let horizon = 10_000;
    let u_max = 1.0;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let models = vec![
        ("Logit".to_string(), GevSpec::mnl(n)?),
        (
            "NL".to_string(),
            GevSpec::nl(n, &[((0..5).collect(), 0.5), ((5..10).collect(), 1.0)])?,
        ),
        (
            "GNL".to_string(),
            GevSpec::sample(GevVariant::Gnl, n, &mut rng)?,
        ),
        (
            "CNL".to_string(),
            GevSpec::sample(GevVariant::Cnl, n, &mut rng)?,
        ),
        ("PCL".to_string(), GevSpec::pcl_uniform(n, 0.5)?),
        (
            "OGEV".to_string(),
            GevSpec::ogev(n, 1, &vec![0.7; n + 1], None)?,
        ),
        (
            "PDGEV".to_string(),
            GevSpec::pdgev(
                n,
                &[
                    PdgevAttribute {
                        weight: 0.5,
                        lambda: 0.6,
                        nests: vec![(0..5).collect(), (5..10).collect()],
                    },
                    PdgevAttribute {
                        weight: 0.5,
                        lambda: 0.9,
                        nests: vec![
                            (0..10).step_by(2).collect(),
                            (0..10).skip(1).step_by(2).collect(),
                        ],
                    },
                ],
            )?,
        ),
    ];
    let table = bounds_table(&models, horizon, u_max)?;
    print!("{}", report::bounds_text(&table, horizon, u_max));
    Ok(())
}

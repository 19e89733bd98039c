//! Cost-function market making with surplus-based pricing: the MNL model
//! is the logarithmic market scoring rule, and nested models price
//! correlated outcomes. Prices stay on the simplex and charges are path
//! independent.
//!
//! ```bash
//! cargo run --example prediction_market
//! ```

use gevlearn::gev::GevSpec;
use gevlearn::market::{run_market, validity_audit, MarketState};

fn main() -> gevlearn::Result<()> {
    // Binary log-scoring market.
    let mut market = MarketState::new(GevSpec::mnl(2)?, 1.0)?;
    println!("binary market, b = 1:");
    println!("  opening prices {:?}", market.prices()?.as_slice());
    let charge = market.execute_trade(&[1.0, 0.0])?;
    println!("  buy 1 share of outcome 0: charge {charge:.6}");
    println!("  new prices {:?}", market.prices()?.as_slice());

    // Correlated outcomes: nests {0,1} and {2} with strong within-nest
    // correlation. Buying outcome 0 drags outcome 1 up with it.
    let nl = GevSpec::nl(3, &[(vec![0, 1], 0.5), (vec![2], 1.0)])?;
    println!("\nnested market over 3 outcomes (outcomes 0 and 1 correlated):");
    let trades = vec![
        vec![1.0, 0.0, 0.0],
        vec![1.0, 0.0, 0.0],
        vec![0.0, 0.0, 2.0],
    ];
    for snap in run_market(&nl, 1.0, &trades)? {
        print!("  t = {}: prices", snap.t);
        for p in snap.prices.as_slice() {
            print!(" {p:.4}");
        }
        println!("  (charge {:.4})", snap.charge);
    }

    // Validity audit: differentiability, monotonicity, translation
    // invariance, plus the no-arbitrage price conditions.
    let report = validity_audit(&nl, 1.0, 300, 1)?;
    println!(
        "\nvalidity audit over {} random share vectors: max gradient error {:.2e}, max translation error {:.2e}",
        report.samples, report.max_gradient_error, report.max_translation_error
    );
    Ok(())
}

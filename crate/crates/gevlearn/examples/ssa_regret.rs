//! A surplus-gradient learner against an adversarial alternating stream:
//! measured regret stays under the optimized guarantee.
//!
//! ```bash
//! cargo run --example ssa_regret
//! ```

use gevlearn::environments::{EnvironmentConfig, PayoffStream, StreamKind};
use gevlearn::gev::{model_constants, GevSpec};
use gevlearn::learners::{ssa_choose, ssa_update, LearnerState};
use gevlearn::regret::{optimal_eta, regret, RegretLedger};

fn main() -> gevlearn::Result<()> {
    let n = 10;
    let u_max = 1.0;
    let specs = vec![
        ("MNL".to_string(), GevSpec::mnl(n)?),
        (
            "NL".to_string(),
            GevSpec::nl(n, &[((0..5).collect(), 0.5), ((5..10).collect(), 1.0)])?,
        ),
    ];

    println!(
        "{:<6} {:>8} {:>10} {:>12} {:>12} {:>8}",
        "model", "T", "eta*", "regret", "bound", "ratio"
    );
    for (name, spec) in &specs {
        let constants = model_constants(spec)?;
        for horizon in [100usize, 1_000, 10_000] {
            let eta = optimal_eta(&constants, horizon, u_max)?;
            let mut state = LearnerState::new(spec.clone(), eta, u_max)?;
            let mut ledger = RegretLedger::new(u_max);
            let mut stream = PayoffStream::new(EnvironmentConfig {
                kind: StreamKind::AdversarialAlternating,
                n,
                u_max,
                horizon,
                seed: 1,
            })?;
            for _ in 0..horizon {
                let u = stream.next_payoff()?;
                ledger.record(ssa_choose(&state)?, u.clone())?;
                state = ssa_update(&state, &u)?;
            }
            let measured = regret(&ledger)?;
            let bound =
                u_max * (2.0 * constants.surplus_at_zero * constants.l * horizon as f64).sqrt();
            println!(
                "{name:<6} {horizon:>8} {eta:>10.3} {measured:>12.4} {bound:>12.4} {:>8.3}",
                measured / bound
            );
        }
    }
    Ok(())
}

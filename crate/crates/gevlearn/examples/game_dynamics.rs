//! Repeated play in a normal-form game where every player learns through
//! its own choice model: per-player regret vanishes, the time-averaged
//! play is an approximate coarse correlated equilibrium, and on a smooth
//! game the welfare guarantee binds.
//!
//! ```bash
//! cargo run --example game_dynamics
//! ```

use gevlearn::games::{
    cce_check, run_dynamics, welfare_bound_check, NormalFormGame, PlayerConfig, SmoothnessParams,
};
use gevlearn::gev::{model_constants, GevSpec};
use gevlearn::regret::{optimal_eta, regret};

fn main() -> gevlearn::Result<()> {
    let horizon = 5_000;

    // Heterogeneous learners on a random 5x5 game: one multinomial, one
    // nested.
    let game = NormalFormGame::random(2, 5, 7)?;
    let mnl = GevSpec::mnl(5)?;
    let nl = GevSpec::nl(5, &[(vec![0, 1, 2], 0.6), (vec![3, 4], 1.0)])?;
    let players = vec![
        PlayerConfig {
            eta: optimal_eta(&model_constants(&mnl)?, horizon, 1.0)?,
            spec: mnl,
        },
        PlayerConfig {
            eta: optimal_eta(&model_constants(&nl)?, horizon, 1.0)?,
            spec: nl,
        },
    ];
    let outcome = run_dynamics(&game, &players, horizon)?;
    println!("random 5x5 game, T = {horizon}, MNL vs NL learners:");
    let mut delta = f64::NEG_INFINITY;
    for (j, ledger) in outcome.ledgers.iter().enumerate() {
        let r = regret(ledger)?;
        println!(
            "  player {j}: regret {r:.3} (per period {:.5})",
            r / horizon as f64
        );
        delta = delta.max(r / horizon as f64);
    }
    let report = cce_check(&game, &outcome.distribution, delta)?;
    println!(
        "  equilibrium check at delta = {delta:.5}: {} (worst margin {:.2e})",
        if report.passes() { "pass" } else { "FAIL" },
        report.worst.margin
    );

    // A (1,1)-smooth congestion game: split across two routes.
    let u = |me: usize, other: usize| if me != other { 1.0 } else { 0.5 };
    let mut u1 = Vec::new();
    let mut u2 = Vec::new();
    for s1 in 0..2 {
        for s2 in 0..2 {
            u1.push(u(s1, s2));
            u2.push(u(s2, s1));
        }
    }
    let game = NormalFormGame::new(2, 2, vec![u1, u2])?;
    let smooth = SmoothnessParams::verify(&game, 1.0, 1.0, vec![0, 1])?;
    let spec = GevSpec::mnl(2)?;
    let eta = optimal_eta(&model_constants(&spec)?, horizon, 1.0)?;
    let outcome = run_dynamics(&game, &vec![PlayerConfig { spec, eta }; 2], horizon)?;
    let welfare = welfare_bound_check(&game, &smooth, &outcome)?;
    println!(
        "\ncongestion game (price of anarchy {}):",
        welfare.price_of_anarchy
    );
    println!(
        "  average welfare {:.4} >= guarantee {:.4} ({})",
        welfare.average_welfare,
        welfare.lower_bound,
        if welfare.holds { "holds" } else { "VIOLATED" }
    );
    Ok(())
}

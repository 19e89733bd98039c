//! Recency-biased learners on a slowly drifting stream: when successive
//! payoffs move at most B apart, the optimistic variants cut regret well
//! below the plain learner and stay under their drift-scaled guarantees.
//!
//! ```bash
//! cargo run --example recency_bias
//! ```

use gevlearn::environments::{EnvironmentConfig, PayoffStream, StreamKind};
use gevlearn::gev::{model_constants, GevSpec};
use gevlearn::learners::{ssa_choose, ssa_update, LearnerState, PredictorKind};
use gevlearn::regret::{oftrl_bound, optimal_eta, regret, RegretLedger};

fn run(spec: &GevSpec, eta: f64, kind: PredictorKind, env: EnvironmentConfig) -> f64 {
    let mut state = LearnerState::with_predictor(spec.clone(), eta, env.u_max, kind).unwrap();
    let mut ledger = RegretLedger::new(env.u_max);
    let mut stream = PayoffStream::new(env).unwrap();
    while let Ok(u) = stream.next_payoff() {
        ledger
            .record(ssa_choose(&state).unwrap(), u.clone())
            .unwrap();
        state = ssa_update(&state, &u).unwrap();
    }
    regret(&ledger).unwrap()
}

fn main() -> gevlearn::Result<()> {
    let n = 10;
    let horizon = 10_000;
    let drift = 0.1;
    let spec = GevSpec::mnl(n)?;
    let constants = model_constants(&spec)?;
    let env = |seed| EnvironmentConfig {
        kind: StreamKind::SlowDrift { drift_bound: drift },
        n,
        u_max: 1.0,
        horizon,
        seed,
    };

    let plain_eta = optimal_eta(&constants, horizon, 1.0)?;
    let plain = run(&spec, plain_eta, PredictorKind::None, env(1));
    println!("slow drift, B = {drift}, T = {horizon}");
    println!(
        "{:<22} {:>10} {:>10} {:>10}",
        "learner", "eta", "regret", "bound"
    );
    println!(
        "{:<22} {:>10.3} {:>10.3} {:>10.3}",
        "plain",
        plain_eta,
        plain,
        (2.0 * constants.surplus_at_zero * constants.l * horizon as f64).sqrt()
    );
    for kind in [
        PredictorKind::OneStep,
        PredictorKind::SStep { s: 3 },
        PredictorKind::Geometric { delta: 0.5 },
    ] {
        let report = oftrl_bound(&constants, "MNL", horizon, drift, kind)?;
        let measured = run(&spec, report.eta, kind, env(1));
        println!(
            "{:<22} {:>10.3} {:>10.3} {:>10.3}",
            format!("{kind:?}"),
            report.eta,
            measured,
            report.bound
        );
    }
    Ok(())
}

//! Experiment harness: load a config document, drive the corresponding
//! simulation, write CSV/JSON artifacts, and re-assert the module
//! invariants. Any violated invariant is collected as a failure so the
//! caller can exit nonzero.

mod config;
pub mod report;

pub use config::{
    BoundsConfig, EtaSpec, ExperimentConfig, GameConfig, GamePlayerConfig, GameSource, LearnConfig,
    MarketConfig, NamedSpec, SmoothnessConfig, TradeSource,
};

use std::path::{Path, PathBuf};

use serde_json::json;

use crate::environments::PayoffStream;
use crate::error::{Error, Result};
use crate::games::{cce_check, run_dynamics, welfare_bound_check, PlayerConfig, SmoothnessParams};
use crate::gev::{model_constants, GevSpec};
use crate::learners::{ssa_choose, ssa_update, LearnerState, PredictorKind};
use crate::market::{run_market, validity_audit, MarketState};
use crate::regret::{optimal_eta, regret, RegretLedger};
use crate::types::sup_norm;

use report::cell;

/// What a run produced and whether every audit held.
#[derive(Debug)]
pub struct RunOutcome {
    pub artifacts: Vec<PathBuf>,
    pub failures: Vec<String>,
    pub summary: serde_json::Value,
}

impl RunOutcome {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Execute one experiment. `base_dir` anchors relative file references
/// inside the config (trade logs); artifacts land in `out_dir`.
pub fn run(config: &ExperimentConfig, base_dir: &Path, out_dir: &Path) -> Result<RunOutcome> {
    config.validate()?;
    std::fs::create_dir_all(out_dir)?;
    match config {
        ExperimentConfig::Learn(cfg) => run_learn(cfg, out_dir),
        ExperimentConfig::Game(cfg) => run_game(cfg, out_dir),
        ExperimentConfig::Market(cfg) => run_market_experiment(cfg, base_dir, out_dir),
        ExperimentConfig::Bounds(cfg) => run_bounds(cfg, out_dir),
    }
}

fn resolve_eta(eta: EtaSpec, spec: &GevSpec, horizon: usize, u_max: f64) -> Result<f64> {
    match eta {
        EtaSpec::Fixed(v) => Ok(v),
        EtaSpec::Optimal => optimal_eta(&model_constants(spec)?, horizon, u_max),
    }
}

fn write_artifact(
    out_dir: &Path,
    name: &str,
    contents: &str,
    artifacts: &mut Vec<PathBuf>,
) -> Result<()> {
    let path = out_dir.join(name);
    std::fs::write(&path, contents)?;
    artifacts.push(path);
    Ok(())
}

/// Artifact format version, matching the shipped schema documents.
pub const SCHEMA_VERSION: &str = "1.0.0";

fn write_summary(
    out_dir: &Path,
    summary: &serde_json::Value,
    artifacts: &mut Vec<PathBuf>,
) -> Result<()> {
    let mut stamped = summary.clone();
    if let Some(map) = stamped.as_object_mut() {
        map.insert("schema_version".into(), json!(SCHEMA_VERSION));
    }
    let mut text = serde_json::to_string_pretty(&stamped)?;
    text.push('\n');
    write_artifact(out_dir, "summary.json", &text, artifacts)
}

fn run_learn(cfg: &LearnConfig, out_dir: &Path) -> Result<RunOutcome> {
    let env = &cfg.environment;
    let n = cfg.spec.n();
    let eta = resolve_eta(cfg.eta, &cfg.spec, env.horizon, env.u_max)?;
    let constants = model_constants(&cfg.spec)?;
    let mut state = LearnerState::with_predictor(cfg.spec.clone(), eta, env.u_max, cfg.predictor)?;
    let mut stream = PayoffStream::new(env.clone())?;
    let mut ledger = RegretLedger::new(env.u_max);

    let mut trajectory_rows = Vec::new();
    let mut curve_rows = Vec::with_capacity(env.horizon);
    let mut prediction_gap_sq = 0.0; // sum_t |u_t - beta_t|_inf^2
    let mut running_theta = vec![0.0f64; n];
    let mut realized = 0.0;

    for t in 1..=env.horizon {
        let x = ssa_choose(&state)?;
        let beta = state.predictor().value(n);
        let u = stream.next_payoff()?;

        let gap: Vec<f64> = u.iter().zip(&beta).map(|(a, b)| a - b).collect();
        prediction_gap_sq += sup_norm(&gap).powi(2);
        for (acc, &v) in running_theta.iter_mut().zip(&u) {
            *acc += v;
        }
        let inst = x.expectation(&u);
        realized += inst;
        let best = running_theta
            .iter()
            .fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        let regret_t = best - realized;
        // Plain runs carry the worst-case payoff bound; optimistic runs
        // carry the prediction-gap form, since the payoff form is not a
        // guarantee once a predictor shifts the score.
        let gap_term = if cfg.predictor == PredictorKind::None {
            t as f64 * env.u_max * env.u_max
        } else {
            prediction_gap_sq
        };
        let bound_t = eta * constants.surplus_at_zero + constants.l / (2.0 * eta) * gap_term;

        if cfg.trajectory {
            let mut row = vec![t.to_string()];
            row.extend(x.as_slice().iter().map(|&v| cell(v)));
            row.extend(u.iter().map(|&v| cell(v)));
            row.push(cell(inst));
            trajectory_rows.push(row);
        }
        curve_rows.push(vec![
            t.to_string(),
            cell(regret_t),
            cell(regret_t / t as f64),
            cell(bound_t),
            cell(eta),
        ]);

        ledger.record(x, u.clone())?;
        state = ssa_update(&state, &u)?;
    }

    let final_regret = regret(&ledger)?;
    let t_f = env.horizon as f64;
    let fixed_eta_bound =
        eta * constants.surplus_at_zero + constants.l / (2.0 * eta) * t_f * env.u_max * env.u_max;
    // With a predictor, the sharper guarantee replaces T u_max^2 by the
    // realized squared prediction gaps.
    let master_bound =
        eta * constants.surplus_at_zero + constants.l / (2.0 * eta) * prediction_gap_sq;

    let mut failures = Vec::new();
    if cfg.predictor == PredictorKind::None {
        if final_regret > fixed_eta_bound {
            failures.push(format!(
                "regret {final_regret} exceeds the bound {fixed_eta_bound} at eta {eta}"
            ));
        }
    } else if final_regret > master_bound {
        failures.push(format!(
            "regret {final_regret} exceeds the prediction-gap bound {master_bound}"
        ));
    }

    let mut artifacts = Vec::new();
    if cfg.trajectory {
        let mut header = vec!["t".to_string()];
        header.extend((1..=n).map(|i| format!("x_{i}")));
        header.extend((1..=n).map(|i| format!("u_{i}")));
        header.push("expected_payoff".to_string());
        let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
        write_artifact(
            out_dir,
            "trajectory.csv",
            &report::csv(&header_refs, &trajectory_rows),
            &mut artifacts,
        )?;
    }
    write_artifact(
        out_dir,
        "regret_curve.csv",
        &report::csv(
            &["t", "regret", "avg_regret", "bound_at_t", "eta"],
            &curve_rows,
        ),
        &mut artifacts,
    )?;

    let summary = json!({
        "kind": "learn",
        "variant": cfg.spec.variant().name(),
        "n": n,
        "horizon": env.horizon,
        "eta": eta,
        "l": constants.l,
        "surplus_at_zero": constants.surplus_at_zero,
        "final_regret": final_regret,
        "avg_regret": final_regret / t_f,
        "bound_at_eta": fixed_eta_bound,
        "prediction_gap_bound": master_bound,
        "bound_holds": failures.is_empty(),
    });
    write_summary(out_dir, &summary, &mut artifacts)?;
    Ok(RunOutcome {
        artifacts,
        failures,
        summary,
    })
}

fn run_game(cfg: &GameConfig, out_dir: &Path) -> Result<RunOutcome> {
    let game = cfg.game.build(cfg.seed)?;
    let players: Vec<PlayerConfig> = cfg
        .players
        .iter()
        .map(|p| {
            Ok(PlayerConfig {
                spec: p.spec.clone(),
                eta: resolve_eta(p.eta, &p.spec, cfg.horizon, 1.0)?,
            })
        })
        .collect::<Result<_>>()?;
    let outcome = run_dynamics(&game, &players, cfg.horizon)?;

    // Per-period running regret and welfare, replayed from the ledgers.
    let p = game.players();
    let mut running_theta = vec![vec![0.0f64; game.strategies()]; p];
    let mut realized = vec![0.0f64; p];
    let mut rows = Vec::with_capacity(cfg.horizon);
    for t in 0..cfg.horizon {
        let mut row = vec![(t + 1).to_string()];
        let mut welfare = 0.0;
        for j in 0..p {
            let u = &outcome.ledgers[j].payoffs()[t];
            let x = &outcome.ledgers[j].plays()[t];
            for (acc, &v) in running_theta[j].iter_mut().zip(u) {
                *acc += v;
            }
            let inst = x.expectation(u);
            realized[j] += inst;
            welfare += inst;
            let best = running_theta[j]
                .iter()
                .fold(f64::NEG_INFINITY, |a, &b| a.max(b));
            row.push(cell(best - realized[j]));
        }
        row.push(cell(welfare));
        rows.push(row);
    }

    let regrets: Vec<f64> = outcome.ledgers.iter().map(regret).collect::<Result<_>>()?;
    let delta = regrets
        .iter()
        .map(|r| r / cfg.horizon as f64)
        .fold(f64::NEG_INFINITY, f64::max);
    let cce = cce_check(&game, &outcome.distribution, delta)?;

    let mut failures = Vec::new();
    if !cce.passes() {
        failures.push(format!(
            "CCE check failed: player {} deviating to {} gains {} beyond delta {delta}",
            cce.worst.player, cce.worst.deviation, -cce.worst.margin
        ));
    }

    let mut welfare_summary = json!(null);
    if let Some(smooth_cfg) = &cfg.smoothness {
        let smooth = SmoothnessParams::verify(
            &game,
            smooth_cfg.lambda,
            smooth_cfg.mu,
            smooth_cfg.anchor.clone(),
        )?;
        let report = welfare_bound_check(&game, &smooth, &outcome)?;
        if !report.holds {
            failures.push(format!(
                "welfare bound failed: average {} below {}",
                report.average_welfare, report.lower_bound
            ));
        }
        welfare_summary = json!({
            "average_welfare": report.average_welfare,
            "lower_bound": report.lower_bound,
            "price_of_anarchy": report.price_of_anarchy,
            "regret_slack": report.regret_slack,
            "holds": report.holds,
        });
    }

    let mut artifacts = Vec::new();
    let mut header = vec!["t".to_string()];
    header.extend((1..=p).map(|j| format!("regret_{j}")));
    header.push("welfare".to_string());
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    write_artifact(
        out_dir,
        "dynamics.csv",
        &report::csv(&header_refs, &rows),
        &mut artifacts,
    )?;

    let summary = json!({
        "kind": "game",
        "players": p,
        "strategies": game.strategies(),
        "horizon": cfg.horizon,
        "seed": cfg.seed,
        "per_player_regret": regrets,
        "delta": delta,
        "cce_passes": cce.passes(),
        "cce_worst_margin": cce.worst.margin,
        "welfare": welfare_summary,
    });
    write_summary(out_dir, &summary, &mut artifacts)?;
    Ok(RunOutcome {
        artifacts,
        failures,
        summary,
    })
}

fn run_market_experiment(
    cfg: &MarketConfig,
    base_dir: &Path,
    out_dir: &Path,
) -> Result<RunOutcome> {
    let trades = cfg.trades.load(base_dir)?;
    let n = cfg.spec.n();
    for (i, bundle) in trades.iter().enumerate() {
        if bundle.len() != n {
            return Err(Error::Config(format!(
                "trade {i} has {} entries, expected {n}",
                bundle.len()
            )));
        }
    }
    let trajectory = run_market(&cfg.spec, cfg.liquidity, &trades)?;

    let mut failures = Vec::new();
    let audit = match validity_audit(&cfg.spec, cfg.liquidity, cfg.audit_samples, cfg.seed) {
        Ok(report) => json!({
            "samples": report.samples,
            "max_gradient_error": report.max_gradient_error,
            "max_translation_error": report.max_translation_error,
            "max_price_sum_error": report.max_price_sum_error,
            "passes": true,
        }),
        Err(Error::AuditFailure {
            property,
            witness,
            detail,
        }) => {
            failures.push(format!(
                "validity audit failed: {property} at {witness:?}: {detail}"
            ));
            json!({"passes": false, "property": property, "detail": detail})
        }
        Err(other) => return Err(other),
    };

    // Path independence: total charges must telescope to the cost change.
    let mut market = MarketState::new(cfg.spec.clone(), cfg.liquidity)?;
    let initial_cost = market.cost()?;
    let total_charge: f64 = trajectory.iter().map(|s| s.charge).sum();
    for bundle in &trades {
        market.execute_trade(bundle)?;
    }
    let telescoped = market.cost()? - initial_cost;
    if (total_charge - telescoped).abs() > 1e-9 {
        failures.push(format!(
            "path independence violated: charges {total_charge} vs cost change {telescoped}"
        ));
    }

    let mut rows = Vec::with_capacity(trajectory.len());
    for snap in &trajectory {
        let mut row = vec![snap.t.to_string()];
        row.extend(snap.shares.iter().map(|&v| cell(v)));
        row.extend(snap.prices.as_slice().iter().map(|&v| cell(v)));
        row.push(cell(snap.charge));
        rows.push(row);
    }
    let mut header = vec!["t".to_string()];
    header.extend((1..=n).map(|i| format!("q_{i}")));
    header.extend((1..=n).map(|i| format!("p_{i}")));
    header.push("charge".to_string());
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();

    let mut artifacts = Vec::new();
    write_artifact(
        out_dir,
        "market_trajectory.csv",
        &report::csv(&header_refs, &rows),
        &mut artifacts,
    )?;

    let summary = json!({
        "kind": "market",
        "variant": cfg.spec.variant().name(),
        "n": n,
        "liquidity": cfg.liquidity,
        "trades": trades.len(),
        "total_charge": total_charge,
        "final_cost": market.cost()?,
        "validity_audit": audit,
        "path_independence_gap": total_charge - telescoped,
    });
    write_summary(out_dir, &summary, &mut artifacts)?;
    Ok(RunOutcome {
        artifacts,
        failures,
        summary,
    })
}

fn run_bounds(cfg: &BoundsConfig, out_dir: &Path) -> Result<RunOutcome> {
    let specs: Vec<(String, GevSpec)> = cfg
        .models
        .iter()
        .map(|m| (m.name.clone(), m.spec.clone()))
        .collect();
    let table = crate::regret::bounds_table(&specs, cfg.horizon, cfg.u_max)?;
    let mut artifacts = Vec::new();
    write_artifact(
        out_dir,
        "bounds_table.csv",
        &report::bounds_csv(&table),
        &mut artifacts,
    )?;
    write_artifact(
        out_dir,
        "bounds_table.txt",
        &report::bounds_text(&table, cfg.horizon, cfg.u_max),
        &mut artifacts,
    )?;
    let summary = json!({
        "kind": "bounds",
        "horizon": cfg.horizon,
        "u_max": cfg.u_max,
        "rows": table.iter().map(|r| json!({
            "model": r.model,
            "n": r.n,
            "l": r.l,
            "eta_formula": r.eta_formula,
            "bound_formula": r.bound_formula,
            "eta_exact": r.eta_exact,
            "bound_exact": r.bound_exact,
        })).collect::<Vec<_>>(),
    });
    write_summary(out_dir, &summary, &mut artifacts)?;
    Ok(RunOutcome {
        artifacts,
        failures: Vec::new(),
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environments::{EnvironmentConfig, StreamKind};

    fn mnl_json(n: usize) -> serde_json::Value {
        serde_json::to_value(GevSpec::mnl(n).unwrap()).unwrap()
    }

    #[test]
    fn learn_run_produces_artifacts_and_holds_bound() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = ExperimentConfig::Learn(LearnConfig {
            spec: GevSpec::mnl(4).unwrap(),
            environment: EnvironmentConfig {
                kind: StreamKind::AdversarialAlternating,
                n: 4,
                u_max: 1.0,
                horizon: 500,
                seed: 3,
            },
            eta: EtaSpec::Optimal,
            predictor: PredictorKind::None,
            trajectory: true,
        });
        let outcome = run(&cfg, dir.path(), dir.path()).unwrap();
        assert!(outcome.ok(), "{:?}", outcome.failures);
        assert!(dir.path().join("trajectory.csv").exists());
        assert!(dir.path().join("regret_curve.csv").exists());
        assert!(dir.path().join("summary.json").exists());
    }

    #[test]
    fn optimistic_run_is_audited_against_the_prediction_gap_bound() {
        // On an i.i.d. stream the one-step prediction gaps reach twice the
        // payoff cap, so only the gap-based guarantee applies.
        let dir = tempfile::tempdir().unwrap();
        let cfg = ExperimentConfig::Learn(LearnConfig {
            spec: GevSpec::mnl(4).unwrap(),
            environment: EnvironmentConfig {
                kind: StreamKind::IidUniform,
                n: 4,
                u_max: 1.0,
                horizon: 2000,
                seed: 17,
            },
            eta: EtaSpec::Fixed(3.0),
            predictor: PredictorKind::OneStep,
            trajectory: false,
        });
        let outcome = run(&cfg, dir.path(), dir.path()).unwrap();
        assert!(outcome.ok(), "{:?}", outcome.failures);
        let gap_bound = outcome.summary["prediction_gap_bound"].as_f64().unwrap();
        let regret = outcome.summary["final_regret"].as_f64().unwrap();
        assert!(regret <= gap_bound);
    }

    #[test]
    fn identical_config_and_seed_give_byte_identical_artifacts() {
        let cfg = ExperimentConfig::Learn(LearnConfig {
            spec: GevSpec::mnl(3).unwrap(),
            environment: EnvironmentConfig {
                kind: StreamKind::IidUniform,
                n: 3,
                u_max: 1.0,
                horizon: 200,
                seed: 11,
            },
            eta: EtaSpec::Fixed(5.0),
            predictor: PredictorKind::OneStep,
            trajectory: true,
        });
        let read_all = |dir: &Path| -> Vec<(String, Vec<u8>)> {
            let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
                .unwrap()
                .map(|e| {
                    let e = e.unwrap();
                    (
                        e.file_name().to_string_lossy().into_owned(),
                        std::fs::read(e.path()).unwrap(),
                    )
                })
                .collect();
            files.sort();
            files
        };
        let d1 = tempfile::tempdir().unwrap();
        let d2 = tempfile::tempdir().unwrap();
        run(&cfg, d1.path(), d1.path()).unwrap();
        run(&cfg, d2.path(), d2.path()).unwrap();
        assert_eq!(read_all(d1.path()), read_all(d2.path()));
    }

    #[test]
    fn game_run_passes_cce_audit() {
        let dir = tempfile::tempdir().unwrap();
        let cfg_json = json!({
            "kind": "game",
            "game": {"source": "random", "players": 2, "strategies": 3},
            "players": [
                {"spec": mnl_json(3), "eta": "optimal"},
                {"spec": mnl_json(3), "eta": "optimal"}
            ],
            "horizon": 300,
            "seed": 5
        });
        let cfg: ExperimentConfig = serde_json::from_value(cfg_json).unwrap();
        let outcome = run(&cfg, dir.path(), dir.path()).unwrap();
        assert!(outcome.ok(), "{:?}", outcome.failures);
        assert!(dir.path().join("dynamics.csv").exists());
    }

    #[test]
    fn market_run_with_inline_trades() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = ExperimentConfig::Market(MarketConfig {
            spec: GevSpec::mnl(2).unwrap(),
            liquidity: 1.0,
            trades: TradeSource::Inline(vec![vec![1.0, 0.0], vec![-0.5, 0.5]]),
            audit_samples: 150,
            seed: 2,
        });
        let outcome = run(&cfg, dir.path(), dir.path()).unwrap();
        assert!(outcome.ok(), "{:?}", outcome.failures);
        let summary: serde_json::Value = serde_json::from_str(
            &std::fs::read_to_string(dir.path().join("summary.json")).unwrap(),
        )
        .unwrap();
        assert_eq!(summary["validity_audit"]["passes"], json!(true));
    }

    #[test]
    fn bounds_run_writes_table() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = ExperimentConfig::Bounds(BoundsConfig {
            models: vec![NamedSpec {
                name: "Logit".into(),
                spec: GevSpec::mnl(10).unwrap(),
            }],
            horizon: 10_000,
            u_max: 1.0,
        });
        let outcome = run(&cfg, dir.path(), dir.path()).unwrap();
        assert!(outcome.ok());
        let csv = std::fs::read_to_string(dir.path().join("bounds_table.csv")).unwrap();
        assert!(csv.contains("Logit"));
        assert!(csv.contains("2.14596602629e2"));
    }
}

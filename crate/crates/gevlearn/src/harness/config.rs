//! Experiment configuration: one JSON document per run, schema under
//! `schemas/experiment.schema.json`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::environments::EnvironmentConfig;
use crate::error::{Error, Result};
use crate::games::NormalFormGame;
use crate::gev::GevSpec;
use crate::learners::PredictorKind;

/// Learning parameter: an explicit value or the bound-minimizing one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EtaWire", into = "EtaWire")]
pub enum EtaSpec {
    Optimal,
    Fixed(f64),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum EtaWire {
    Named(String),
    Value(f64),
}

impl TryFrom<EtaWire> for EtaSpec {
    type Error = Error;
    fn try_from(wire: EtaWire) -> Result<EtaSpec> {
        match wire {
            EtaWire::Named(s) if s == "optimal" => Ok(EtaSpec::Optimal),
            EtaWire::Named(s) => Err(Error::Config(format!(
                "eta must be a number or \"optimal\", got \"{s}\""
            ))),
            EtaWire::Value(v) if v > 0.0 => Ok(EtaSpec::Fixed(v)),
            EtaWire::Value(v) => Err(Error::Config(format!("eta must be positive, got {v}"))),
        }
    }
}

impl From<EtaSpec> for EtaWire {
    fn from(eta: EtaSpec) -> EtaWire {
        match eta {
            EtaSpec::Optimal => EtaWire::Named("optimal".into()),
            EtaSpec::Fixed(v) => EtaWire::Value(v),
        }
    }
}

impl EtaSpec {
    pub fn parse_flag(raw: &str) -> Result<Self> {
        if raw == "optimal" {
            return Ok(EtaSpec::Optimal);
        }
        raw.parse::<f64>()
            .map_err(|_| Error::Config(format!("--eta expects a number or \"optimal\", got {raw}")))
            .and_then(|v| {
                if v > 0.0 {
                    Ok(EtaSpec::Fixed(v))
                } else {
                    Err(Error::Config(format!("--eta must be positive, got {v}")))
                }
            })
    }
}

/// Single-learner experiment against a payoff stream.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LearnConfig {
    pub spec: GevSpec,
    pub environment: EnvironmentConfig,
    pub eta: EtaSpec,
    #[serde(default = "default_predictor")]
    pub predictor: PredictorKind,
    /// Skip the (large) per-period trajectory file when false.
    #[serde(default = "default_true")]
    pub trajectory: bool,
}

fn default_predictor() -> PredictorKind {
    PredictorKind::None
}

fn default_true() -> bool {
    true
}

/// Where a game's utility tensors come from.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum GameSource {
    /// Explicit tensors, one flat row-major array per player (player 0's
    /// strategy varies slowest).
    Tensor {
        players: usize,
        strategies: usize,
        utilities: Vec<Vec<f64>>,
    },
    /// Uniform-random utilities from the experiment seed.
    Random { players: usize, strategies: usize },
}

impl GameSource {
    pub fn build(&self, seed: u64) -> Result<NormalFormGame> {
        match self {
            GameSource::Tensor {
                players,
                strategies,
                utilities,
            } => NormalFormGame::new(*players, *strategies, utilities.clone()),
            GameSource::Random {
                players,
                strategies,
            } => NormalFormGame::random(*players, *strategies, seed),
        }
    }

    pub fn players(&self) -> usize {
        match self {
            GameSource::Tensor { players, .. } | GameSource::Random { players, .. } => *players,
        }
    }
}

/// One player's learner in a game run.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GamePlayerConfig {
    pub spec: GevSpec,
    pub eta: EtaSpec,
}

/// Optional smoothness certificate to verify and apply.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmoothnessConfig {
    pub lambda: f64,
    pub mu: f64,
    pub anchor: Vec<usize>,
}

/// Repeated-game experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameConfig {
    pub game: GameSource,
    pub players: Vec<GamePlayerConfig>,
    pub horizon: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smoothness: Option<SmoothnessConfig>,
}

/// Where a market's trade stream comes from.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TradeSource {
    /// Inline list of bundles.
    Inline(Vec<Vec<f64>>),
    /// Text log, one comma-separated bundle per line; blank lines and
    /// `#` comments skipped.
    File { file: PathBuf },
}

impl TradeSource {
    pub fn load(&self, base: &Path) -> Result<Vec<Vec<f64>>> {
        match self {
            TradeSource::Inline(trades) => Ok(trades.clone()),
            TradeSource::File { file } => {
                let path = if file.is_absolute() {
                    file.clone()
                } else {
                    base.join(file)
                };
                let raw = std::fs::read_to_string(&path)?;
                let mut trades = Vec::new();
                for (lineno, line) in raw.lines().enumerate() {
                    let line = line.trim();
                    if line.is_empty() || line.starts_with('#') {
                        continue;
                    }
                    let bundle = line
                        .split(',')
                        .map(|tok| {
                            tok.trim().parse::<f64>().map_err(|_| {
                                Error::Config(format!(
                                    "{}: line {}: bad number {tok:?}",
                                    path.display(),
                                    lineno + 1
                                ))
                            })
                        })
                        .collect::<Result<Vec<f64>>>()?;
                    trades.push(bundle);
                }
                Ok(trades)
            }
        }
    }
}

/// Market-maker experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarketConfig {
    pub spec: GevSpec,
    pub liquidity: f64,
    pub trades: TradeSource,
    #[serde(default = "default_audit_samples")]
    pub audit_samples: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_audit_samples() -> usize {
    200
}

/// One named model row for the bound table.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedSpec {
    pub name: String,
    pub spec: GevSpec,
}

/// Bound-table experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsConfig {
    pub models: Vec<NamedSpec>,
    pub horizon: usize,
    pub u_max: f64,
}

/// Top-level experiment document, tagged by `kind`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExperimentConfig {
    Learn(LearnConfig),
    Game(GameConfig),
    Market(MarketConfig),
    Bounds(BoundsConfig),
}

impl ExperimentConfig {
    /// Parse and validate a config document, with file/line diagnostics on
    /// failure.
    pub fn from_path(path: &Path) -> Result<Self> {
        let raw = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let config: ExperimentConfig = serde_json::from_str(&raw)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ExperimentConfig::Learn(cfg) => {
                cfg.spec.validate()?;
                cfg.environment.validate()?;
                if cfg.environment.n != cfg.spec.n() {
                    return Err(Error::Config(format!(
                        "environment has {} coordinates but the model has {}",
                        cfg.environment.n,
                        cfg.spec.n()
                    )));
                }
            }
            ExperimentConfig::Game(cfg) => {
                if cfg.players.len() != cfg.game.players() {
                    return Err(Error::Config(format!(
                        "{} player configs for a {}-player game",
                        cfg.players.len(),
                        cfg.game.players()
                    )));
                }
                if cfg.horizon == 0 {
                    return Err(Error::Config("horizon must be at least 1".into()));
                }
                for p in &cfg.players {
                    p.spec.validate()?;
                }
            }
            ExperimentConfig::Market(cfg) => {
                cfg.spec.validate()?;
                if !(cfg.liquidity > 0.0) {
                    return Err(Error::Config(format!(
                        "liquidity must be positive, got {}",
                        cfg.liquidity
                    )));
                }
            }
            ExperimentConfig::Bounds(cfg) => {
                if cfg.models.is_empty() {
                    return Err(Error::Config(
                        "bounds table needs at least one model".into(),
                    ));
                }
                if cfg.horizon == 0 || !(cfg.u_max > 0.0) {
                    return Err(Error::Config(
                        "bounds table needs horizon >= 1 and u_max > 0".into(),
                    ));
                }
                for m in &cfg.models {
                    m.spec.validate()?;
                }
            }
        }
        Ok(())
    }

    /// Apply a command-line seed override.
    pub fn override_seed(&mut self, seed: u64) {
        match self {
            ExperimentConfig::Learn(cfg) => cfg.environment.seed = seed,
            ExperimentConfig::Game(cfg) => cfg.seed = seed,
            ExperimentConfig::Market(cfg) => cfg.seed = seed,
            ExperimentConfig::Bounds(_) => {}
        }
    }

    /// Apply a command-line eta override where it applies.
    pub fn override_eta(&mut self, eta: EtaSpec) {
        match self {
            ExperimentConfig::Learn(cfg) => cfg.eta = eta,
            ExperimentConfig::Game(cfg) => {
                for p in &mut cfg.players {
                    p.eta = eta;
                }
            }
            ExperimentConfig::Market(_) | ExperimentConfig::Bounds(_) => {}
        }
    }
}

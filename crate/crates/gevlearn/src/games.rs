//! Repeated normal-form games where every player runs a surplus-gradient
//! learner: synchronous dynamics, per-player regret, approximate
//! coarse-correlated-equilibrium checks, and smooth-game welfare bounds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gev::GevSpec;
use crate::learners::{ssa_choose, ssa_update, LearnerState};
use crate::regret::{regret, RegretLedger};
use crate::types::{PayoffVector, SimplexVector};

/// Desk-scale cap on brute-force profile enumeration.
const PROFILE_CAP: u128 = 1_000_000;

/// A finite game: `players` players, `strategies` strategies each, and one
/// utility tensor per player with values in [0, 1]. Profiles index
/// row-major with player 0 slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalFormGame {
    players: usize,
    strategies: usize,
    utilities: Vec<Vec<f64>>,
}

impl NormalFormGame {
    pub fn new(players: usize, strategies: usize, utilities: Vec<Vec<f64>>) -> Result<Self> {
        if players == 0 || strategies == 0 {
            return Err(Error::InvalidSpec(
                "game needs at least one player and one strategy".into(),
            ));
        }
        let profiles = (strategies as u128).pow(players as u32);
        if profiles > PROFILE_CAP {
            return Err(Error::GameTooLarge {
                profiles,
                cap: PROFILE_CAP,
            });
        }
        if utilities.len() != players {
            return Err(Error::DimensionMismatch {
                expected: players,
                got: utilities.len(),
            });
        }
        for (j, tensor) in utilities.iter().enumerate() {
            if tensor.len() != profiles as usize {
                return Err(Error::DimensionMismatch {
                    expected: profiles as usize,
                    got: tensor.len(),
                });
            }
            if tensor.iter().any(|&v| !(0.0..=1.0).contains(&v)) {
                return Err(Error::InvalidSpec(format!(
                    "player {j} has a utility outside [0, 1]"
                )));
            }
        }
        Ok(NormalFormGame {
            players,
            strategies,
            utilities,
        })
    }

    /// Uniform-random utilities in [0, 1], reproducible from the seed.
    pub fn random(players: usize, strategies: usize, seed: u64) -> Result<Self> {
        let profiles = (strategies as u128).pow(players as u32);
        if profiles > PROFILE_CAP {
            return Err(Error::GameTooLarge {
                profiles,
                cap: PROFILE_CAP,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let utilities = (0..players)
            .map(|_| {
                (0..profiles as usize)
                    .map(|_| rng.gen_range(0.0..=1.0))
                    .collect()
            })
            .collect();
        NormalFormGame::new(players, strategies, utilities)
    }

    pub fn players(&self) -> usize {
        self.players
    }

    pub fn strategies(&self) -> usize {
        self.strategies
    }

    pub fn profile_count(&self) -> usize {
        (self.strategies as u128).pow(self.players as u32) as usize
    }

    fn profile_index(&self, profile: &[usize]) -> usize {
        profile
            .iter()
            .fold(0usize, |acc, &s| acc * self.strategies + s)
    }

    pub fn utility(&self, player: usize, profile: &[usize]) -> f64 {
        self.utilities[player][self.profile_index(profile)]
    }

    /// Total welfare of a pure profile.
    pub fn welfare(&self, profile: &[usize]) -> f64 {
        (0..self.players).map(|j| self.utility(j, profile)).sum()
    }

    fn profiles(&self) -> ProfileIter {
        ProfileIter {
            current: vec![0; self.players],
            strategies: self.strategies,
            done: false,
        }
    }
}

struct ProfileIter {
    current: Vec<usize>,
    strategies: usize,
    done: bool,
}

impl Iterator for ProfileIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        for slot in self.current.iter_mut().rev() {
            *slot += 1;
            if *slot < self.strategies {
                return Some(out);
            }
            *slot = 0;
        }
        self.done = true;
        Some(out)
    }
}

/// Exact expected utility of each of player `j`'s strategies against the
/// opponents' mixed play: the full sum over opponent pure profiles
/// weighted by product probabilities. `mixed` carries one distribution per
/// player; player `j`'s own entry is ignored.
pub fn expected_utility_vector(
    game: &NormalFormGame,
    j: usize,
    mixed: &[SimplexVector],
) -> Result<PayoffVector> {
    if mixed.len() != game.players {
        return Err(Error::DimensionMismatch {
            expected: game.players,
            got: mixed.len(),
        });
    }
    for x in mixed {
        if x.len() != game.strategies {
            return Err(Error::DimensionMismatch {
                expected: game.strategies,
                got: x.len(),
            });
        }
    }
    let n = game.strategies;
    let mut out = vec![0.0; n];
    let mut opponents = vec![0usize; game.players];
    loop {
        let mut weight = 1.0;
        for (p, &s) in opponents.iter().enumerate() {
            if p != j {
                weight *= mixed[p][s];
            }
        }
        if weight > 0.0 {
            for (k, acc) in out.iter_mut().enumerate() {
                opponents[j] = k;
                *acc += weight * game.utility(j, &opponents);
            }
        }
        // Advance the opponent counter, skipping player j's slot.
        let mut advanced = false;
        for p in (0..game.players).rev() {
            if p == j {
                continue;
            }
            opponents[p] += 1;
            if opponents[p] < n {
                advanced = true;
                break;
            }
            opponents[p] = 0;
        }
        if !advanced {
            break;
        }
    }
    Ok(out)
}

/// One learner configuration inside a game: players may mix model
/// families and learning parameters.
#[derive(Debug, Clone)]
pub struct PlayerConfig {
    pub spec: GevSpec,
    pub eta: f64,
}

/// Per-period mixed plays of every player plus their time average; the
/// joint distribution at period t is the product of that period's rows.
#[derive(Debug, Clone)]
pub struct EmpiricalDistribution {
    histories: Vec<Vec<SimplexVector>>,
}

impl EmpiricalDistribution {
    /// Rebuild from stored per-player trajectories (e.g. a replay); rows
    /// must agree on the horizon.
    pub fn from_histories(histories: Vec<Vec<SimplexVector>>) -> Result<Self> {
        let horizon = histories.first().map_or(0, Vec::len);
        if horizon == 0 {
            return Err(Error::Domain("empty play history".into()));
        }
        if histories.iter().any(|h| h.len() != horizon) {
            return Err(Error::Domain(
                "players disagree on the history length".into(),
            ));
        }
        Ok(EmpiricalDistribution { histories })
    }

    pub fn horizon(&self) -> usize {
        self.histories.first().map_or(0, Vec::len)
    }

    pub fn players(&self) -> usize {
        self.histories.len()
    }

    /// Player `j`'s play at period `t`.
    pub fn play(&self, j: usize, t: usize) -> &SimplexVector {
        &self.histories[j][t]
    }

    pub fn histories(&self) -> &[Vec<SimplexVector>] {
        &self.histories
    }
}

/// Outcome of running the dynamics: the play history and one regret
/// ledger per player.
#[derive(Debug, Clone)]
pub struct DynamicsOutcome {
    pub distribution: EmpiricalDistribution,
    pub ledgers: Vec<RegretLedger>,
}

/// Synchronous repeated play: every round all players reveal their mixed
/// strategy, observe the exact expected utility of each of their
/// strategies against the others, and update. Deterministic given the
/// game and configs.
pub fn run_dynamics(
    game: &NormalFormGame,
    players: &[PlayerConfig],
    horizon: usize,
) -> Result<DynamicsOutcome> {
    if players.len() != game.players {
        return Err(Error::DimensionMismatch {
            expected: game.players,
            got: players.len(),
        });
    }
    for cfg in players {
        if cfg.spec.n() != game.strategies {
            return Err(Error::DimensionMismatch {
                expected: game.strategies,
                got: cfg.spec.n(),
            });
        }
    }
    if horizon == 0 {
        return Err(Error::Domain("horizon must be at least 1".into()));
    }
    let mut states: Vec<LearnerState> = players
        .iter()
        .map(|cfg| LearnerState::new(cfg.spec.clone(), cfg.eta, 1.0))
        .collect::<Result<_>>()?;
    let mut histories: Vec<Vec<SimplexVector>> = vec![Vec::with_capacity(horizon); players.len()];
    let mut ledgers: Vec<RegretLedger> = players.iter().map(|_| RegretLedger::new(1.0)).collect();

    for _ in 0..horizon {
        let plays: Vec<SimplexVector> = states.iter().map(ssa_choose).collect::<Result<_>>()?;
        for j in 0..players.len() {
            let u = expected_utility_vector(game, j, &plays)?;
            ledgers[j].record(plays[j].clone(), u.clone())?;
            states[j] = ssa_update(&states[j], &u)?;
            histories[j].push(plays[j].clone());
        }
    }
    Ok(DynamicsOutcome {
        distribution: EmpiricalDistribution { histories },
        ledgers,
    })
}

/// One deviation's margin in the equilibrium check.
#[derive(Debug, Clone)]
pub struct DeviationMargin {
    pub player: usize,
    pub deviation: usize,
    /// `E_sigma[u_j] - E_sigma[u_j(s', .)] + delta`; nonnegative means the
    /// deviation is unprofitable beyond delta.
    pub margin: f64,
}

/// Result of auditing the time-averaged play against unconditional
/// unilateral deviations.
#[derive(Debug, Clone)]
pub struct CceReport {
    pub delta: f64,
    pub worst: DeviationMargin,
    pub margins: Vec<DeviationMargin>,
}

impl CceReport {
    /// True when no deviation beats the averaged play by more than delta
    /// (up to accumulated float error).
    pub fn passes(&self) -> bool {
        self.worst.margin >= -1e-9
    }
}

/// Exact evaluation of the approximate coarse correlated equilibrium
/// condition: for every player and pure deviation, the expected utility
/// under the averaged joint play must be within `delta` of the deviation
/// payoff. Both sides are recomputed from the stored mixed profiles.
pub fn cce_check(
    game: &NormalFormGame,
    distribution: &EmpiricalDistribution,
    delta: f64,
) -> Result<CceReport> {
    let horizon = distribution.horizon();
    if horizon == 0 {
        return Err(Error::Domain("empty play history".into()));
    }
    if distribution.players() != game.players {
        return Err(Error::DimensionMismatch {
            expected: game.players,
            got: distribution.players(),
        });
    }
    let t_f = horizon as f64;
    let mut margins = Vec::new();
    for j in 0..game.players {
        let mut on_path = 0.0;
        let mut deviation_value = vec![0.0; game.strategies];
        for t in 0..horizon {
            let profile: Vec<SimplexVector> = (0..game.players)
                .map(|p| distribution.play(p, t).clone())
                .collect();
            let u = expected_utility_vector(game, j, &profile)?;
            on_path += profile[j].expectation(&u) / t_f;
            for (acc, &v) in deviation_value.iter_mut().zip(&u) {
                *acc += v / t_f;
            }
        }
        for (s, &dev) in deviation_value.iter().enumerate() {
            margins.push(DeviationMargin {
                player: j,
                deviation: s,
                margin: on_path - dev + delta,
            });
        }
    }
    let worst = margins
        .iter()
        .cloned()
        .min_by(|a, b| a.margin.total_cmp(&b.margin))
        .expect("at least one margin");
    Ok(CceReport {
        delta,
        worst,
        margins,
    })
}

/// Exhaustive welfare maximization over pure profiles.
pub fn brute_force_opt(game: &NormalFormGame) -> Result<(f64, Vec<usize>)> {
    let mut best = (f64::NEG_INFINITY, Vec::new());
    for profile in game.profiles() {
        let w = game.welfare(&profile);
        if w > best.0 {
            best = (w, profile);
        }
    }
    Ok(best)
}

/// Verified smoothness certificate:
/// `sum_j u_j(s*_j, s_{-j}) >= lambda * OPT - mu * W(s)` for every pure
/// profile, checked exhaustively at construction.
#[derive(Debug, Clone)]
pub struct SmoothnessParams {
    pub lambda: f64,
    pub mu: f64,
    pub optimal_profile: Vec<usize>,
    pub opt: f64,
}

impl SmoothnessParams {
    pub fn verify(game: &NormalFormGame, lambda: f64, mu: f64, anchor: Vec<usize>) -> Result<Self> {
        if !(lambda > 0.0) || mu < 0.0 {
            return Err(Error::Domain(
                "smoothness needs lambda > 0 and mu >= 0".into(),
            ));
        }
        if anchor.len() != game.players || anchor.iter().any(|&s| s >= game.strategies) {
            return Err(Error::InvalidSpec("anchor profile out of range".into()));
        }
        let (opt, _) = brute_force_opt(game)?;
        for profile in game.profiles() {
            let mut switched = 0.0;
            for j in 0..game.players {
                let mut deviated = profile.clone();
                deviated[j] = anchor[j];
                switched += game.utility(j, &deviated);
            }
            let required = lambda * opt - mu * game.welfare(&profile);
            if switched < required - 1e-12 {
                return Err(Error::SmoothnessViolated {
                    profile,
                    detail: format!("anchor payoff {switched} below {required}"),
                });
            }
        }
        Ok(SmoothnessParams {
            lambda,
            mu,
            optimal_profile: anchor,
            opt,
        })
    }

    /// Price of anarchy `(1 + mu) / lambda`.
    pub fn price_of_anarchy(&self) -> f64 {
        (1.0 + self.mu) / self.lambda
    }
}

/// Both sides of the smooth-game welfare guarantee.
#[derive(Debug, Clone)]
pub struct WelfareReport {
    pub average_welfare: f64,
    pub lower_bound: f64,
    pub price_of_anarchy: f64,
    pub regret_slack: f64,
    pub holds: bool,
}

/// Check the no-regret welfare inequality: the average welfare of the
/// play dominates `lambda/(1+mu) OPT - 1/(1+mu) * (1/T) sum_j R_j`.
pub fn welfare_bound_check(
    game: &NormalFormGame,
    smoothness: &SmoothnessParams,
    outcome: &DynamicsOutcome,
) -> Result<WelfareReport> {
    let horizon = outcome.distribution.horizon();
    if horizon == 0 {
        return Err(Error::Domain("empty play history".into()));
    }
    let t_f = horizon as f64;
    let mut average_welfare = 0.0;
    for t in 0..horizon {
        let profile: Vec<SimplexVector> = (0..game.players)
            .map(|p| outcome.distribution.play(p, t).clone())
            .collect();
        for j in 0..game.players {
            let u = expected_utility_vector(game, j, &profile)?;
            average_welfare += profile[j].expectation(&u) / t_f;
        }
    }
    let total_regret: f64 = outcome
        .ledgers
        .iter()
        .map(regret)
        .collect::<Result<Vec<f64>>>()?
        .iter()
        .sum();
    let regret_slack = total_regret / ((1.0 + smoothness.mu) * t_f);
    let lower_bound = smoothness.lambda / (1.0 + smoothness.mu) * smoothness.opt - regret_slack;
    Ok(WelfareReport {
        average_welfare,
        lower_bound,
        price_of_anarchy: smoothness.price_of_anarchy(),
        regret_slack,
        holds: average_welfare >= lower_bound - 1e-9,
    })
}

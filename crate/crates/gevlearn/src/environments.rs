//! Payoff stream generators for experiments. Every stream honors the
//! sup-norm payoff cap; the drifting stream additionally caps successive
//! differences. Streams are reproducible from their seed via ChaCha8, a
//! portable counter-based generator, so a replay on any platform yields
//! identical payoffs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::PayoffVector;

/// Stream family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StreamKind {
    /// Coordinates i.i.d. uniform on [-u_max, u_max].
    IidUniform,
    /// Coordinates i.i.d. centered Gaussian with sigma = u_max / 2,
    /// clipped into [-u_max, u_max].
    IidGaussianClipped,
    /// Piecewise-constant best arm: the favored coordinate pays u_max and
    /// is redrawn every quarter of the horizon.
    BestArmShift,
    /// u_max on coordinate 0, then coordinate 1, alternating.
    AdversarialAlternating,
    /// Random walk from the zero vector with per-step sup-norm increments
    /// at most `drift_bound`, clamped into [-u_max, u_max].
    SlowDrift { drift_bound: f64 },
}

/// Full description of a payoff stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvironmentConfig {
    #[serde(flatten)]
    pub kind: StreamKind,
    pub n: usize,
    pub u_max: f64,
    pub horizon: usize,
    pub seed: u64,
}

impl EnvironmentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("stream needs at least one coordinate".into()));
        }
        if !(self.u_max > 0.0) {
            return Err(Error::Config(format!(
                "payoff cap must be positive, got {}",
                self.u_max
            )));
        }
        if self.horizon == 0 {
            return Err(Error::Config("horizon must be at least 1".into()));
        }
        if let StreamKind::SlowDrift { drift_bound } = self.kind {
            if drift_bound < 0.0 || drift_bound > self.u_max {
                return Err(Error::Config(format!(
                    "drift bound {drift_bound} outside [0, u_max]"
                )));
            }
        }
        Ok(())
    }
}

/// Stateful generator over one configured stream.
#[derive(Debug, Clone)]
pub struct PayoffStream {
    config: EnvironmentConfig,
    rng: ChaCha8Rng,
    t: usize,
    previous: Vec<f64>,
    shift_arm: usize,
}

impl PayoffStream {
    pub fn new(config: EnvironmentConfig) -> Result<Self> {
        config.validate()?;
        let rng = ChaCha8Rng::seed_from_u64(config.seed);
        let n = config.n;
        Ok(PayoffStream {
            config,
            rng,
            t: 0,
            previous: vec![0.0; n],
            shift_arm: 0,
        })
    }

    pub fn config(&self) -> &EnvironmentConfig {
        &self.config
    }

    /// Payoff for the next period, or an end-of-stream error past the
    /// horizon.
    pub fn next_payoff(&mut self) -> Result<PayoffVector> {
        if self.t >= self.config.horizon {
            return Err(Error::Domain(format!(
                "stream exhausted after {} periods",
                self.config.horizon
            )));
        }
        self.t += 1;
        let n = self.config.n;
        let u_max = self.config.u_max;
        let u = match self.config.kind {
            StreamKind::IidUniform => (0..n)
                .map(|_| self.rng.gen_range(-u_max..=u_max))
                .collect::<Vec<f64>>(),
            StreamKind::IidGaussianClipped => {
                let sigma = u_max / 2.0;
                (0..n)
                    .map(|_| {
                        // Box-Muller; one draw per coordinate keeps the
                        // stream replayable from the seed alone.
                        let a: f64 = self.rng.gen_range(f64::MIN_POSITIVE..1.0);
                        let b: f64 = self.rng.gen_range(0.0..std::f64::consts::TAU);
                        let g = (-2.0 * a.ln()).sqrt() * b.cos();
                        (sigma * g).clamp(-u_max, u_max)
                    })
                    .collect()
            }
            StreamKind::BestArmShift => {
                let segment = (self.config.horizon / 4).max(1);
                if (self.t - 1).is_multiple_of(segment) {
                    self.shift_arm = self.rng.gen_range(0..n);
                }
                let mut u = vec![0.0; n];
                u[self.shift_arm] = u_max;
                u
            }
            StreamKind::AdversarialAlternating => {
                let mut u = vec![0.0; n];
                u[(self.t - 1) % 2.min(n)] = u_max;
                u
            }
            StreamKind::SlowDrift { drift_bound } => self
                .previous
                .iter()
                .map(|&prev| {
                    let step = if drift_bound > 0.0 {
                        self.rng.gen_range(-drift_bound..=drift_bound)
                    } else {
                        0.0
                    };
                    (prev + step).clamp(-u_max, u_max)
                })
                .collect(),
        };
        self.previous = u.clone();
        Ok(u)
    }

    /// Materialize the whole stream.
    pub fn collect_all(mut self) -> Result<Vec<PayoffVector>> {
        let mut all = Vec::with_capacity(self.config.horizon - self.t);
        while self.t < self.config.horizon {
            all.push(self.next_payoff()?);
        }
        Ok(all)
    }
}

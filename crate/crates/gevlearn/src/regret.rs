//! Regret accounting against the best fixed action in hindsight, the
//! theoretical bounds and their optimal learning parameters, the summary
//! bound table, and consistency diagnostics.

use crate::error::{Error, Result};
use crate::gev::{choice_probabilities, social_surplus, GevSpec, ModelConstants};
use crate::learners::PredictorKind;
use crate::types::{sup_norm, CumulativePayoff, SimplexVector};

/// Full play/payoff history of one learner.
#[derive(Debug, Clone, Default)]
pub struct RegretLedger {
    plays: Vec<SimplexVector>,
    payoffs: Vec<Vec<f64>>,
    theta: Vec<f64>,
    realized: f64,
    u_max: f64,
}

impl RegretLedger {
    pub fn new(u_max: f64) -> Self {
        RegretLedger {
            plays: Vec::new(),
            payoffs: Vec::new(),
            theta: Vec::new(),
            realized: 0.0,
            u_max,
        }
    }

    pub fn record(&mut self, x: SimplexVector, u: Vec<f64>) -> Result<()> {
        if x.len() != u.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                got: u.len(),
            });
        }
        let norm = sup_norm(&u);
        if norm > self.u_max + 1e-12 {
            return Err(Error::PayoffOutOfBounds {
                norm,
                bound: self.u_max,
            });
        }
        if self.theta.is_empty() {
            self.theta = vec![0.0; u.len()];
        }
        for (t, &v) in self.theta.iter_mut().zip(&u) {
            *t += v;
        }
        self.realized += x.expectation(&u);
        self.plays.push(x);
        self.payoffs.push(u);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.plays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plays.is_empty()
    }

    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    pub fn plays(&self) -> &[SimplexVector] {
        &self.plays
    }

    pub fn payoffs(&self) -> &[Vec<f64>] {
        &self.payoffs
    }

    /// Best fixed alternative in hindsight (lowest index on ties) and its
    /// cumulative payoff.
    pub fn best_in_hindsight(&self) -> Result<(usize, f64)> {
        if self.theta.is_empty() {
            return Err(Error::Domain("empty ledger".into()));
        }
        let mut best = (0usize, f64::NEG_INFINITY);
        for (i, &v) in self.theta.iter().enumerate() {
            if v > best.1 {
                best = (i, v);
            }
        }
        Ok(best)
    }

    /// Total realized expected payoff `sum_t <u_t, x_t>`.
    pub fn realized_payoff(&self) -> f64 {
        self.realized
    }
}

/// Regret of the recorded sequence: `max_i theta_iT - sum_t <u_t, x_t>`.
pub fn regret(ledger: &RegretLedger) -> Result<f64> {
    let (_, best) = ledger.best_in_hindsight()?;
    Ok(best - ledger.realized_payoff())
}

/// The learning parameter minimizing the two-term regret bound:
/// `sqrt(L T u_max^2 / (2 phi(0)))`.
pub fn optimal_eta(model: &ModelConstants, horizon: usize, u_max: f64) -> Result<f64> {
    if horizon == 0 {
        return Err(Error::Domain("horizon must be at least 1".into()));
    }
    if !(u_max > 0.0) {
        return Err(Error::Domain(format!(
            "payoff bound must be positive, got {u_max}"
        )));
    }
    if model.surplus_at_zero <= 0.0 {
        return Err(Error::Degenerate(
            "surplus at zero vanishes (single alternative); no tuning exists".into(),
        ));
    }
    Ok((model.l * horizon as f64 * u_max * u_max / (2.0 * model.surplus_at_zero)).sqrt())
}

/// A regret guarantee: the bound value, the eta it holds at, and the
/// ingredients that produced it.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub model: String,
    pub l: f64,
    pub surplus_at_zero: f64,
    pub eta: f64,
    pub bound: f64,
    /// Successive-payoff drift cap behind an optimistic bound; absent for
    /// the plain worst-case form.
    pub drift_bound: Option<f64>,
}

/// Two-term bound `eta phi(0) + (L / 2 eta) T u_max^2` at a given eta, or
/// the optimized `u_max sqrt(2 phi(0) L T)` when eta is left unset.
pub fn regret_bound(
    model: &ModelConstants,
    model_name: &str,
    horizon: usize,
    u_max: f64,
    eta: Option<f64>,
) -> Result<BoundReport> {
    let t = horizon as f64;
    let (eta, bound) = match eta {
        Some(eta) => {
            if !(eta > 0.0) {
                return Err(Error::Domain(format!("eta must be positive, got {eta}")));
            }
            (
                eta,
                eta * model.surplus_at_zero + model.l / (2.0 * eta) * t * u_max * u_max,
            )
        }
        None => (
            optimal_eta(model, horizon, u_max)?,
            u_max * (2.0 * model.surplus_at_zero * model.l * t).sqrt(),
        ),
    };
    Ok(BoundReport {
        model: model_name.to_string(),
        l: model.l,
        surplus_at_zero: model.surplus_at_zero,
        eta,
        bound,
        drift_bound: None,
    })
}

/// Optimistic-learner bound under a drift cap `B` on successive payoffs:
/// one-step `B sqrt(2 L T phi(0))`, s-step `s B sqrt(2 L T phi(0))`,
/// geometric `B sqrt(2 L T phi(0) / (1 - delta)^3)`, each with its
/// minimizing eta.
pub fn oftrl_bound(
    model: &ModelConstants,
    model_name: &str,
    horizon: usize,
    drift_bound: f64,
    kind: PredictorKind,
) -> Result<BoundReport> {
    if !(drift_bound > 0.0) {
        return Err(Error::Domain(format!(
            "drift bound must be positive, got {drift_bound}"
        )));
    }
    if model.surplus_at_zero <= 0.0 {
        return Err(Error::Degenerate(
            "surplus at zero vanishes; no tuning exists".into(),
        ));
    }
    let t = horizon as f64;
    let phi0 = model.surplus_at_zero;
    let base = drift_bound * (2.0 * model.l * t * phi0).sqrt();
    let base_eta = (model.l * t * drift_bound * drift_bound / (2.0 * phi0)).sqrt();
    let (eta, bound) = match kind {
        PredictorKind::None => {
            return Err(Error::Domain(
                "optimistic bound needs a recency predictor".into(),
            ))
        }
        PredictorKind::OneStep => (base_eta, base),
        PredictorKind::SStep { s } => {
            if s == 0 {
                return Err(Error::Domain("s-step predictor needs s >= 1".into()));
            }
            (s as f64 * base_eta, s as f64 * base)
        }
        PredictorKind::Geometric { delta } => {
            if !(delta > 0.0 && delta < 1.0) {
                return Err(Error::Domain(format!(
                    "geometric discount {delta} outside (0, 1)"
                )));
            }
            let inflate = (1.0 - delta).powi(3).sqrt().recip();
            (base_eta * inflate, base * inflate)
        }
    };
    Ok(BoundReport {
        model: model_name.to_string(),
        l: model.l,
        surplus_at_zero: phi0,
        eta,
        bound,
        drift_bound: Some(drift_bound),
    })
}

/// One row of the bound summary: the headline formula column uses the
/// `log N` ceiling (matching the closed-form bound per family), the exact
/// columns use `log G(1)`.
#[derive(Debug, Clone)]
pub struct BoundsTableRow {
    pub model: String,
    pub n: usize,
    pub l: f64,
    pub log_n: f64,
    pub surplus_at_zero: f64,
    pub eta_formula: f64,
    pub bound_formula: f64,
    pub eta_exact: f64,
    pub bound_exact: f64,
}

/// Bound summary across models at a common horizon and payoff cap:
/// `eta = sqrt(L T u_max^2 / (2 log N))`,
/// `bound = u_max sqrt(2 log N L T)` per row, alongside the exact-surplus
/// counterparts.
pub fn bounds_table(
    specs: &[(String, GevSpec)],
    horizon: usize,
    u_max: f64,
) -> Result<Vec<BoundsTableRow>> {
    let t = horizon as f64;
    specs
        .iter()
        .map(|(name, spec)| {
            let c = crate::gev::model_constants(spec)?;
            let log_n = c.surplus_log_n_bound;
            if log_n <= 0.0 {
                return Err(Error::Degenerate(
                    "bound table needs at least two alternatives".into(),
                ));
            }
            let exact = regret_bound(&c, name, horizon, u_max, None)?;
            Ok(BoundsTableRow {
                model: name.clone(),
                n: spec.n(),
                l: c.l,
                log_n,
                surplus_at_zero: c.surplus_at_zero,
                eta_formula: (c.l * t * u_max * u_max / (2.0 * log_n)).sqrt(),
                bound_formula: u_max * (2.0 * log_n * c.l * t).sqrt(),
                eta_exact: exact.eta,
                bound_exact: exact.bound,
            })
        })
        .collect()
}

/// Curvature gap of the surplus along a payoff step:
/// `phi(theta + u) - phi(theta) - <grad phi(theta), u>`. Nonnegative, and
/// at most `(L / 2 eta) u_max^2` when `|u|_inf <= u_max`.
pub fn bregman_gap(spec: &GevSpec, theta: &CumulativePayoff, u: &[f64], eta: f64) -> Result<f64> {
    let grad = choice_probabilities(spec, theta, eta)?;
    let mut shifted = theta.clone();
    shifted.add(u)?;
    let phi_next = social_surplus(spec, &shifted, eta)?;
    let phi = social_surplus(spec, theta, eta)?;
    Ok(phi_next - phi - grad.expectation(u))
}

/// Least-squares fit of average regret against `c / sqrt(T)`.
#[derive(Debug, Clone, Copy)]
pub struct HannanFit {
    pub c: f64,
    pub r_squared: f64,
}

/// Fit `regret_T / T = c / sqrt(T)` over a horizon grid and report the
/// goodness of fit. A high `r_squared` with finite `c` is the numeric
/// signature of vanishing average regret.
pub fn hannan_fit(horizons: &[usize], regrets: &[f64]) -> Result<HannanFit> {
    if horizons.len() != regrets.len() || horizons.len() < 2 {
        return Err(Error::Domain(
            "need matching horizon/regret series of length >= 2".into(),
        ));
    }
    let xs: Vec<f64> = horizons.iter().map(|&t| 1.0 / (t as f64).sqrt()).collect();
    let ys: Vec<f64> = regrets
        .iter()
        .zip(horizons)
        .map(|(&r, &t)| r / t as f64)
        .collect();
    let c =
        xs.iter().zip(&ys).map(|(x, y)| x * y).sum::<f64>() / xs.iter().map(|x| x * x).sum::<f64>();
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let e = y - c * x;
            e * e
        })
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - mean) * (y - mean)).sum();
    let r_squared = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        1.0
    };
    Ok(HannanFit { c, r_squared })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gev::{model_constants, nl_example_spec, GevVariant};
    use crate::learners::{ssa_choose, ssa_update, LearnerState};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ledger_from(pairs: &[(Vec<f64>, Vec<f64>)], u_max: f64) -> RegretLedger {
        let mut ledger = RegretLedger::new(u_max);
        for (x, u) in pairs {
            ledger
                .record(SimplexVector::new(x.clone()).unwrap(), u.clone())
                .unwrap();
        }
        ledger
    }

    #[test]
    fn single_period_regret() {
        let ledger = ledger_from(&[(vec![0.5, 0.5], vec![1.0, 0.0])], 1.0);
        assert!((regret(&ledger).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn symmetric_payoffs_cancel() {
        let ledger = ledger_from(
            &[
                (vec![0.5, 0.5], vec![1.0, 0.0]),
                (vec![0.5, 0.5], vec![0.0, 1.0]),
            ],
            1.0,
        );
        assert!(regret(&ledger).unwrap().abs() < 1e-15);
    }

    #[test]
    fn regret_matches_replay_oracle_on_constant_stream() {
        // Constant payoff (1, 0): regret must equal sum_t (1 - x_1t),
        // replayed step by step from the recorded plays.
        let spec = GevSpec::mnl(2).unwrap();
        let mut state = LearnerState::new(spec, 1.0, 1.0).unwrap();
        let mut ledger = RegretLedger::new(1.0);
        let u = vec![1.0, 0.0];
        for _ in 0..100 {
            let x = ssa_choose(&state).unwrap();
            ledger.record(x, u.clone()).unwrap();
            state = ssa_update(&state, &u).unwrap();
        }
        let direct = regret(&ledger).unwrap();
        let oracle: f64 = ledger.plays().iter().map(|x| 1.0 - x[0]).sum();
        assert!((direct - oracle).abs() < 1e-10);
    }

    #[test]
    fn ledger_enforces_payoff_bound() {
        let mut ledger = RegretLedger::new(1.0);
        assert!(ledger
            .record(SimplexVector::uniform(2), vec![2.0, 0.0])
            .is_err());
    }

    #[test]
    fn optimal_eta_plug_in_values() {
        let mnl10 = model_constants(&GevSpec::mnl(10).unwrap()).unwrap();
        let eta = optimal_eta(&mnl10, 10_000, 1.0).unwrap();
        assert!((eta - 46.599060178465606).abs() < 1e-9);

        let mnl2 = model_constants(&GevSpec::mnl(2).unwrap()).unwrap();
        let eta = optimal_eta(&mnl2, 2, 1.0).unwrap();
        assert!((eta - 1.2011224087864498).abs() < 1e-12);
    }

    #[test]
    fn optimal_eta_scales_linearly_in_u_max() {
        let c = model_constants(&nl_example_spec()).unwrap();
        let base = optimal_eta(&c, 500, 1.0).unwrap();
        let doubled = optimal_eta(&c, 500, 2.0).unwrap();
        assert!((doubled - 2.0 * base).abs() < 1e-12);
    }

    #[test]
    fn optimal_eta_rejects_degenerate_model() {
        let c = model_constants(&GevSpec::mnl(1).unwrap()).unwrap();
        assert!(matches!(
            optimal_eta(&c, 10, 1.0),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn optimized_bound_plug_in_values() {
        let mnl = model_constants(&GevSpec::mnl(10).unwrap()).unwrap();
        let report = regret_bound(&mnl, "MNL", 10_000, 1.0, None).unwrap();
        assert!((report.bound - 214.59660262893473).abs() < 1e-9);
    }

    #[test]
    fn two_term_bound_at_optimal_eta_equals_optimized() {
        let c = model_constants(&nl_example_spec()).unwrap();
        let eta = optimal_eta(&c, 1000, 1.0).unwrap();
        let fixed = regret_bound(&c, "NL", 1000, 1.0, Some(eta)).unwrap();
        let optimized = regret_bound(&c, "NL", 1000, 1.0, None).unwrap();
        assert!((fixed.bound - optimized.bound).abs() < 1e-9);
    }

    #[test]
    fn oftrl_bound_values_and_reductions() {
        let mnl = model_constants(&GevSpec::mnl(10).unwrap()).unwrap();
        let one = oftrl_bound(&mnl, "MNL", 10_000, 0.1, PredictorKind::OneStep).unwrap();
        assert!((one.bound - 21.459660262893475).abs() < 1e-9);

        let s1 = oftrl_bound(&mnl, "MNL", 10_000, 0.1, PredictorKind::SStep { s: 1 }).unwrap();
        assert!((s1.bound - one.bound).abs() < 1e-12);

        let geo = oftrl_bound(
            &mnl,
            "MNL",
            10_000,
            0.1,
            PredictorKind::Geometric { delta: 1e-9 },
        )
        .unwrap();
        assert!((geo.bound - one.bound).abs() < 1e-6);

        assert!(oftrl_bound(
            &mnl,
            "MNL",
            10_000,
            0.1,
            PredictorKind::Geometric { delta: 1.5 }
        )
        .is_err());
    }

    #[test]
    fn bounds_table_rows_match_formulas() {
        let specs = vec![
            ("Logit".to_string(), GevSpec::mnl(10).unwrap()),
            (
                "NL".to_string(),
                GevSpec::nl(10, &[((0..5).collect(), 0.5), ((5..10).collect(), 1.0)]).unwrap(),
            ),
            (
                "CNL-unit".to_string(),
                GevSpec::cnl(
                    2,
                    &[(vec![0, 1], vec![0.5, 0.5]), (vec![0, 1], vec![0.5, 0.5])],
                    1.0,
                )
                .unwrap(),
            ),
        ];
        let table = bounds_table(&specs, 10_000, 1.0).unwrap();
        let log10 = 10f64.ln();
        assert!((table[0].bound_formula - (2.0 * log10 * 1e4).sqrt()).abs() < 1e-9);
        assert!((table[1].bound_formula - (2.0 * log10 * 3.0 * 1e4).sqrt()).abs() < 1e-9);
        // CNL with lambda = 1 collapses to the logit formula.
        let logit2 = (2.0 * 2f64.ln() * 1e4).sqrt();
        assert!((table[2].bound_formula - logit2).abs() < 1e-9);
    }

    #[test]
    fn bregman_gap_examples() {
        let spec = GevSpec::mnl(2).unwrap();
        let zero = CumulativePayoff::zeros(2);
        assert!(bregman_gap(&spec, &zero, &[0.0, 0.0], 1.0).unwrap().abs() < 1e-15);
        // Along the all-ones direction the surplus is exactly linear.
        let gap = bregman_gap(&spec, &zero, &[3.0, 3.0], 1.0).unwrap();
        assert!(gap.abs() < 1e-12);
        let gap = bregman_gap(&spec, &zero, &[1.0, 0.0], 1.0).unwrap();
        assert!((gap - 0.12011450695827752).abs() < 1e-12);
    }

    #[test]
    fn bregman_gap_within_curvature_cap() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for variant in [
            GevVariant::Mnl,
            GevVariant::Nl,
            GevVariant::Gnl,
            GevVariant::Cnl,
            GevVariant::Pcl,
            GevVariant::Ogev,
            GevVariant::Pdgev,
        ] {
            let spec = GevSpec::sample(variant, 5, &mut rng).unwrap();
            let c = model_constants(&spec).unwrap();
            let u_max = 1.0;
            let eta = 0.8;
            let cap = c.l / (2.0 * eta) * u_max * u_max;
            for _ in 0..10_000 {
                let theta =
                    CumulativePayoff::from_vec((0..5).map(|_| rng.gen_range(-5.0..5.0)).collect())
                        .unwrap();
                let u: Vec<f64> = (0..5).map(|_| rng.gen_range(-u_max..u_max)).collect();
                let gap = bregman_gap(&spec, &theta, &u, eta).unwrap();
                assert!(gap >= -1e-10, "negative gap {gap}");
                assert!(gap <= cap + 1e-10, "gap {gap} above cap {cap}");
            }
        }
    }

    #[test]
    fn hannan_fit_recovers_exact_sqrt_law() {
        let horizons = [100usize, 1000, 10_000, 100_000];
        let regrets: Vec<f64> = horizons.iter().map(|&t| 3.0 * (t as f64).sqrt()).collect();
        let fit = hannan_fit(&horizons, &regrets).unwrap();
        assert!((fit.c - 3.0).abs() < 1e-12);
        assert!(fit.r_squared > 0.999999);
    }
}

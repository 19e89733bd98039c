//! Cost-function market maker: the surplus function prices a complete set
//! of outcome securities. The MNL instance is the logarithmic market
//! scoring rule; nested variants price correlated outcomes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gev::{choice_probabilities, social_surplus, GevSpec};
use crate::types::{CumulativePayoff, SimplexVector};

/// One executed trade.
#[derive(Debug, Clone, PartialEq)]
pub struct TradeRecord {
    pub bundle: Vec<f64>,
    pub charge: f64,
}

/// Market maker state: the cost model, the liquidity parameter, the
/// outstanding share vector, and the trade ledger.
#[derive(Debug, Clone)]
pub struct MarketState {
    spec: GevSpec,
    liquidity: f64,
    shares: CumulativePayoff,
    ledger: Vec<TradeRecord>,
}

impl MarketState {
    /// Open a market at `q = 0` (uniform-leaning prices).
    pub fn new(spec: GevSpec, liquidity: f64) -> Result<Self> {
        let n = spec.n();
        MarketState::with_shares(spec, liquidity, CumulativePayoff::zeros(n))
    }

    /// Open a market at an explicit initial share vector.
    pub fn with_shares(spec: GevSpec, liquidity: f64, shares: CumulativePayoff) -> Result<Self> {
        if !(liquidity > 0.0) {
            return Err(Error::Domain(format!(
                "liquidity must be positive, got {liquidity}"
            )));
        }
        spec.validate()?;
        if shares.len() != spec.n() {
            return Err(Error::DimensionMismatch {
                expected: spec.n(),
                got: shares.len(),
            });
        }
        Ok(MarketState {
            spec,
            liquidity,
            shares,
            ledger: Vec::new(),
        })
    }

    pub fn spec(&self) -> &GevSpec {
        &self.spec
    }

    pub fn liquidity(&self) -> f64 {
        self.liquidity
    }

    pub fn shares(&self) -> &[f64] {
        self.shares.as_slice()
    }

    pub fn ledger(&self) -> &[TradeRecord] {
        &self.ledger
    }

    /// Money wagered so far: the surplus of the share vector at the
    /// liquidity scale. For MNL this is `b log sum_i exp(q_i / b)`.
    pub fn cost(&self) -> Result<f64> {
        social_surplus(&self.spec, &self.shares, self.liquidity)
    }

    /// Instantaneous prices: the cost gradient. Nonnegative, sums to one.
    pub fn prices(&self) -> Result<SimplexVector> {
        choice_probabilities(&self.spec, &self.shares, self.liquidity)
    }

    /// Execute a bundle purchase (negative entries sell). Returns the
    /// charge `C(q + r) - C(q)` and appends to the ledger.
    pub fn execute_trade(&mut self, bundle: &[f64]) -> Result<f64> {
        if bundle.len() != self.spec.n() {
            return Err(Error::DimensionMismatch {
                expected: self.spec.n(),
                got: bundle.len(),
            });
        }
        if bundle.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("trade bundle has non-finite entry".into()));
        }
        let before = self.cost()?;
        self.shares.add(bundle)?;
        let after = self.cost()?;
        let charge = after - before;
        self.ledger.push(TradeRecord {
            bundle: bundle.to_vec(),
            charge,
        });
        Ok(charge)
    }
}

/// One period of a market run.
#[derive(Debug, Clone)]
pub struct MarketSnapshot {
    pub t: usize,
    pub shares: Vec<f64>,
    pub prices: SimplexVector,
    pub charge: f64,
}

/// Drive a market through a trade stream: quote, execute, requote.
/// Snapshot 0 is the initial quote with no trade.
pub fn run_market(
    spec: &GevSpec,
    liquidity: f64,
    trades: &[Vec<f64>],
) -> Result<Vec<MarketSnapshot>> {
    let mut market = MarketState::new(spec.clone(), liquidity)?;
    let mut trajectory = vec![MarketSnapshot {
        t: 0,
        shares: market.shares().to_vec(),
        prices: market.prices()?,
        charge: 0.0,
    }];
    for (t, bundle) in trades.iter().enumerate() {
        let charge = market.execute_trade(bundle)?;
        trajectory.push(MarketSnapshot {
            t: t + 1,
            shares: market.shares().to_vec(),
            prices: market.prices()?,
            charge,
        });
    }
    Ok(trajectory)
}

/// Outcome of the numeric validity audit.
#[derive(Debug, Clone)]
pub struct ValidityReport {
    pub samples: usize,
    pub max_gradient_error: f64,
    pub max_translation_error: f64,
    pub max_price_sum_error: f64,
}

/// Audit an arbitrary cost function against the validity properties:
/// differentiability (finite differences match the quoted prices),
/// increasing monotonicity, positive translation invariance, and the
/// price conditions (nonnegative, sum to one). Violations name the
/// property and the witness point.
pub fn audit_cost_function<C, P>(
    n: usize,
    cost: C,
    prices: P,
    samples: usize,
    seed: u64,
) -> Result<ValidityReport>
where
    C: Fn(&[f64]) -> f64,
    P: Fn(&[f64]) -> Vec<f64>,
{
    if samples < 100 {
        return Err(Error::Domain(
            "audit needs at least 100 sample points".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = 1e-5;
    let mut report = ValidityReport {
        samples,
        max_gradient_error: 0.0,
        max_translation_error: 0.0,
        max_price_sum_error: 0.0,
    };
    for _ in 0..samples {
        let q: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let p = prices(&q);

        // Differentiability: central differences of the cost reproduce the
        // quoted prices.
        let mut probe = q.clone();
        for i in 0..n {
            let orig = probe[i];
            probe[i] = orig + h;
            let plus = cost(&probe);
            probe[i] = orig - h;
            let minus = cost(&probe);
            probe[i] = orig;
            let fd = (plus - minus) / (2.0 * h);
            let err = (fd - p[i]).abs();
            report.max_gradient_error = report.max_gradient_error.max(err);
            if err > 1e-6 {
                return Err(Error::AuditFailure {
                    property: "differentiability".into(),
                    witness: q,
                    detail: format!(
                        "finite-difference price {fd} vs quoted {} at coordinate {i}",
                        p[i]
                    ),
                });
            }
        }

        // Price conditions: nonnegative, sum to one.
        if let Some((i, &bad)) = p.iter().enumerate().find(|(_, &v)| v < -1e-12) {
            return Err(Error::AuditFailure {
                property: "price nonnegativity".into(),
                witness: q,
                detail: format!("price {bad} at coordinate {i}"),
            });
        }
        let sum: f64 = p.iter().sum();
        let sum_err = (sum - 1.0).abs();
        report.max_price_sum_error = report.max_price_sum_error.max(sum_err);
        if sum_err > 1e-10 {
            return Err(Error::AuditFailure {
                property: "prices sum to one".into(),
                witness: q,
                detail: format!("sum {sum}"),
            });
        }

        // Increasing monotonicity: a nonnegative bump cannot lower cost.
        let bump: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..2.0)).collect();
        let higher: Vec<f64> = q.iter().zip(&bump).map(|(a, b)| a + b).collect();
        if cost(&higher) < cost(&q) - 1e-12 {
            return Err(Error::AuditFailure {
                property: "increasing monotonicity".into(),
                witness: q,
                detail: format!("cost fell after adding {bump:?}"),
            });
        }

        // Positive translation invariance: a uniform shift moves cost by
        // exactly that amount.
        let k: f64 = rng.gen_range(-5.0..5.0);
        let shifted: Vec<f64> = q.iter().map(|v| v + k).collect();
        let err = (cost(&shifted) - cost(&q) - k).abs();
        report.max_translation_error = report.max_translation_error.max(err);
        if err > 1e-10 {
            return Err(Error::AuditFailure {
                property: "positive translation invariance".into(),
                witness: q,
                detail: format!("C(q + {k}*1) - C(q) - {k} = {err:.3e}"),
            });
        }
    }
    Ok(report)
}

/// Validity audit of the surplus-based cost function for one model.
pub fn validity_audit(
    spec: &GevSpec,
    liquidity: f64,
    samples: usize,
    seed: u64,
) -> Result<ValidityReport> {
    if !(liquidity > 0.0) {
        return Err(Error::Domain(format!(
            "liquidity must be positive, got {liquidity}"
        )));
    }
    spec.validate()?;
    let cost = |q: &[f64]| {
        social_surplus(
            spec,
            &CumulativePayoff::from_vec(q.to_vec()).expect("finite audit point"),
            liquidity,
        )
        .expect("surplus defined on all of R^N")
    };
    let prices = |q: &[f64]| {
        choice_probabilities(
            spec,
            &CumulativePayoff::from_vec(q.to_vec()).expect("finite audit point"),
            liquidity,
        )
        .expect("gradient defined on all of R^N")
        .into_vec()
    };
    audit_cost_function(spec.n(), cost, prices, samples, seed)
}

/// Total charge across a trade sequence minus the cost difference between
/// the endpoints; zero up to rounding by telescoping.
pub fn path_independence_gap(spec: &GevSpec, liquidity: f64, trades: &[Vec<f64>]) -> Result<f64> {
    let mut market = MarketState::new(spec.clone(), liquidity)?;
    let initial = market.cost()?;
    let mut total = 0.0;
    for bundle in trades {
        total += market.execute_trade(bundle)?;
    }
    Ok(total - (market.cost()? - initial))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gev::nl_example_spec;

    #[test]
    fn lmsr_cost_at_origin() {
        let market = MarketState::new(GevSpec::mnl(2).unwrap(), 1.0).unwrap();
        assert!((market.cost().unwrap() - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn cost_translation_and_monotonicity() {
        let mut market = MarketState::new(GevSpec::mnl(3).unwrap(), 2.0).unwrap();
        let c0 = market.cost().unwrap();
        market.execute_trade(&[4.0, 4.0, 4.0]).unwrap();
        assert!((market.cost().unwrap() - c0 - 4.0).abs() < 1e-10);
        let c1 = market.cost().unwrap();
        market.execute_trade(&[1.0, 0.0, 0.5]).unwrap();
        assert!(market.cost().unwrap() >= c1);
    }

    #[test]
    fn lmsr_prices() {
        let market = MarketState::new(GevSpec::mnl(2).unwrap(), 1.0).unwrap();
        let p = market.prices().unwrap();
        assert!((p[0] - 0.5).abs() < 1e-14);

        let mut market = MarketState::new(GevSpec::mnl(2).unwrap(), 1.0).unwrap();
        market.execute_trade(&[2.0f64.ln(), 0.0]).unwrap();
        let p = market.prices().unwrap();
        assert!((p[0] - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn nested_cost_model_prices_match_gradient_values() {
        let market = MarketState::new(nl_example_spec(), 1.0).unwrap();
        let p = market.prices().unwrap();
        assert!((p[0] - 0.29289321881345254).abs() < 1e-12);
        assert!((p[2] - 0.41421356237309515).abs() < 1e-12);
    }

    #[test]
    fn trade_charges() {
        let mut market = MarketState::new(GevSpec::mnl(2).unwrap(), 1.0).unwrap();
        let zero = market.execute_trade(&[0.0, 0.0]).unwrap();
        assert_eq!(zero, 0.0);
        let charge = market.execute_trade(&[1.0, 0.0]).unwrap();
        assert!((charge - 0.6201145069582775).abs() < 1e-12);
        let uniform = market.execute_trade(&[2.5, 2.5]).unwrap();
        assert!((uniform - 2.5).abs() < 1e-10);
    }

    #[test]
    fn empty_run_reports_initial_quote_only() {
        let trajectory = run_market(&GevSpec::mnl(3).unwrap(), 1.0, &[]).unwrap();
        assert_eq!(trajectory.len(), 1);
        assert!((trajectory[0].prices[0] - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn uniform_bundles_leave_prices_fixed() {
        let trades = vec![vec![2.0, 2.0], vec![-1.0, -1.0]];
        let trajectory = run_market(&GevSpec::mnl(2).unwrap(), 1.0, &trades).unwrap();
        for snap in &trajectory {
            assert!((snap.prices[0] - 0.5).abs() < 1e-12);
        }
        assert!((trajectory[1].charge - 2.0).abs() < 1e-10);
        assert!((trajectory[2].charge + 1.0).abs() < 1e-10);
    }

    #[test]
    fn validity_audit_passes_for_mnl_and_nl() {
        validity_audit(&GevSpec::mnl(4).unwrap(), 1.0, 200, 3).unwrap();
        validity_audit(&nl_example_spec(), 0.7, 200, 4).unwrap();
    }

    #[test]
    fn corrupted_cost_fails_audit_with_witness() {
        // C(q) - 0.1 q_0^2 breaks monotonicity/translation invariance.
        let spec = GevSpec::mnl(2).unwrap();
        let cost = |q: &[f64]| {
            social_surplus(&spec, &CumulativePayoff::from_vec(q.to_vec()).unwrap(), 1.0).unwrap()
                - 0.1 * q[0] * q[0]
        };
        let prices = |q: &[f64]| {
            choice_probabilities(&spec, &CumulativePayoff::from_vec(q.to_vec()).unwrap(), 1.0)
                .unwrap()
                .into_vec()
        };
        match audit_cost_function(2, cost, prices, 200, 9) {
            Err(Error::AuditFailure {
                property, witness, ..
            }) => {
                assert!(
                    property.contains("monotonicity")
                        || property.contains("translation")
                        || property.contains("differentiability"),
                    "unexpected property {property}"
                );
                assert_eq!(witness.len(), 2);
            }
            other => panic!("expected audit failure, got {other:?}"),
        }
    }

    #[test]
    fn charges_are_path_independent() {
        let trades: Vec<Vec<f64>> = vec![
            vec![1.0, -0.5, 0.25],
            vec![-2.0, 1.0, 0.0],
            vec![0.5, 0.5, 0.5],
            vec![3.0, -1.0, 2.0],
        ];
        for spec in [GevSpec::mnl(3).unwrap(), nl_example_spec()] {
            let gap = path_independence_gap(&spec, 1.3, &trades).unwrap();
            assert!(gap.abs() < 1e-9, "gap {gap} for {:?}", spec.variant());
        }
    }

    #[test]
    fn ledger_reproduces_cost_differences() {
        let mut market = MarketState::new(nl_example_spec(), 1.0).unwrap();
        let mut prev = market.cost().unwrap();
        for bundle in [vec![1.0, 0.0, -0.5], vec![0.2, 0.4, 0.6]] {
            market.execute_trade(&bundle).unwrap();
            let now = market.cost().unwrap();
            let recorded = market.ledger().last().unwrap().charge;
            assert!((recorded - (now - prev)).abs() < 1e-10);
            prev = now;
        }
    }
}

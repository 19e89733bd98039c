//! Generalized extreme value (GEV) choice models.
//!
//! Every variant is carried in one canonical form: a list of nests, each
//! holding its member alternatives, a dissimilarity parameter `lambda` in
//! (0, 1], and per-member allocation weights `alpha`. The generator is
//!
//! ```text
//! G(y) = sum_k ( sum_{i in N_k} (alpha_ik * y_i)^(1/lambda_k) )^(lambda_k)
//! ```
//!
//! with `sum_k alpha_ik = 1` for every alternative `i`. The multinomial
//! logit is the single-nest case with `lambda = 1`; the nested logit is a
//! partition with 0/1 alphas; the remaining variants (cross-nested, paired
//! combinatorial, ordered, product-differentiation) are structured
//! alpha/lambda layouts validated per variant.

mod constants;
mod ftpl;
mod regularizer;
mod surplus;

pub use constants::{model_constants, ModelConstants};
pub use ftpl::{ftpl_frequencies, ftpl_sample_choice};
pub use regularizer::regularizer;
pub use surplus::{
    choice_probabilities, generator_value, log_generator_at_ones, numeric_gradient, social_surplus,
    two_stage_breakdown, TwoStageBreakdown,
};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest admissible nest parameter. Below this, the Lipschitz constant
/// 2/lambda - 1 explodes and exp(theta/(eta*lambda)) is not representable
/// in double precision.
pub const LAMBDA_MIN: f64 = 1e-3;

/// Tolerance on the per-alternative allocation row sum.
const ALPHA_ROW_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GevVariant {
    /// Multinomial logit (independent shocks).
    Mnl,
    /// Nested logit: mutually exclusive nests.
    Nl,
    /// Generalized nested logit: overlapping nests with fractional alphas.
    Gnl,
    /// Cross-nested logit: GNL with a common lambda across nests.
    Cnl,
    /// Paired combinatorial logit: one nest per ordered pair of alternatives.
    Pcl,
    /// Ordered GEV: overlapping windows over an ordered alternative set.
    Ogev,
    /// Product-differentiation GEV: one nest family per attribute.
    Pdgev,
}

impl GevVariant {
    pub fn name(&self) -> &'static str {
        match self {
            GevVariant::Mnl => "MNL",
            GevVariant::Nl => "NL",
            GevVariant::Gnl => "GNL",
            GevVariant::Cnl => "CNL",
            GevVariant::Pcl => "PCL",
            GevVariant::Ogev => "OGEV",
            GevVariant::Pdgev => "PDGEV",
        }
    }
}

/// One nest: member alternatives, dissimilarity parameter, and the portion
/// of each member allocated to this nest (parallel to `members`).
#[derive(Debug, Clone, PartialEq)]
pub struct Nest {
    pub members: Vec<usize>,
    pub lambda: f64,
    pub alpha: Vec<f64>,
}

/// A validated GEV model description.
///
/// Construct through the per-variant constructors ([`GevSpec::mnl`],
/// [`GevSpec::nl`], ...) or deserialize from the JSON wire form
/// (`schemas/gev_spec.schema.json`); both paths run full validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WireSpec", into = "WireSpec")]
pub struct GevSpec {
    variant: GevVariant,
    n: usize,
    nests: Vec<Nest>,
}

impl GevSpec {
    /// Multinomial logit over `n` alternatives.
    pub fn mnl(n: usize) -> Result<Self> {
        let nest = Nest {
            members: (0..n).collect(),
            lambda: 1.0,
            alpha: vec![1.0; n],
        };
        GevSpec::validated(GevVariant::Mnl, n, vec![nest])
    }

    /// Nested logit from a partition of `0..n` with one lambda per nest.
    pub fn nl(n: usize, nests: &[(Vec<usize>, f64)]) -> Result<Self> {
        let nests = nests
            .iter()
            .map(|(members, lambda)| Nest {
                members: members.clone(),
                lambda: *lambda,
                alpha: vec![1.0; members.len()],
            })
            .collect();
        GevSpec::validated(GevVariant::Nl, n, nests)
    }

    /// Generalized nested logit from explicit nests.
    pub fn gnl(n: usize, nests: Vec<Nest>) -> Result<Self> {
        GevSpec::validated(GevVariant::Gnl, n, nests)
    }

    /// Cross-nested logit: membership sets with fractional alphas and a
    /// single common lambda.
    pub fn cnl(n: usize, memberships: &[(Vec<usize>, Vec<f64>)], lambda: f64) -> Result<Self> {
        let nests = memberships
            .iter()
            .map(|(members, alpha)| Nest {
                members: members.clone(),
                lambda,
                alpha: alpha.clone(),
            })
            .collect();
        GevSpec::validated(GevVariant::Cnl, n, nests)
    }

    /// Paired combinatorial logit: one nest per ordered pair `(i, j)`,
    /// `i != j`, with allocation `1/(2(n-1))` so rows sum to one. The two
    /// orderings of a pair share the dissimilarity parameter, supplied per
    /// unordered pair in lexicographic order `(0,1), (0,2), ..., (n-2,n-1)`.
    pub fn pcl(n: usize, pair_lambdas: &[f64]) -> Result<Self> {
        let expected = n * (n - 1) / 2;
        if pair_lambdas.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: pair_lambdas.len(),
            });
        }
        let alpha = 1.0 / (2.0 * (n as f64 - 1.0));
        let mut nests = Vec::with_capacity(n * (n - 1));
        let mut pair = 0usize;
        for i in 0..n {
            for j in (i + 1)..n {
                let lambda = pair_lambdas[pair];
                pair += 1;
                for (a, b) in [(i, j), (j, i)] {
                    nests.push(Nest {
                        members: vec![a, b],
                        lambda,
                        alpha: vec![alpha, alpha],
                    });
                }
            }
        }
        GevSpec::validated(GevVariant::Pcl, n, nests)
    }

    /// Paired combinatorial logit with one shared lambda for all pairs.
    pub fn pcl_uniform(n: usize, lambda: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSpec(
                "PCL needs at least 2 alternatives".into(),
            ));
        }
        GevSpec::pcl(n, &vec![lambda; n * (n - 1) / 2])
    }

    /// Ordered GEV with window width `overlap` (alternative `i` belongs to
    /// the `overlap + 1` consecutive nests `i ..= i + overlap`) and one
    /// lambda per nest (`n + overlap` of them). Allocation defaults to the
    /// uniform `1/(overlap+1)`; pass `alpha_rows` to override, one row of
    /// `overlap + 1` weights per alternative (nest order `i ..= i+overlap`).
    pub fn ogev(
        n: usize,
        overlap: usize,
        lambdas: &[f64],
        alpha_rows: Option<&[Vec<f64>]>,
    ) -> Result<Self> {
        if overlap == 0 {
            return Err(Error::InvalidSpec("OGEV overlap must be at least 1".into()));
        }
        let num_nests = n + overlap;
        if lambdas.len() != num_nests {
            return Err(Error::DimensionMismatch {
                expected: num_nests,
                got: lambdas.len(),
            });
        }
        if let Some(rows) = alpha_rows {
            if rows.len() != n || rows.iter().any(|r| r.len() != overlap + 1) {
                return Err(Error::InvalidSpec(format!(
                    "OGEV alpha override must be {n} rows of {} weights",
                    overlap + 1
                )));
            }
        }
        let uniform = 1.0 / (overlap as f64 + 1.0);
        let mut nests: Vec<Nest> = (0..num_nests)
            .map(|k| Nest {
                members: Vec::new(),
                lambda: lambdas[k],
                alpha: Vec::new(),
            })
            .collect();
        for i in 0..n {
            for (slot, k) in (i..=i + overlap).enumerate() {
                let a = alpha_rows.map_or(uniform, |rows| rows[i][slot]);
                nests[k].members.push(i);
                nests[k].alpha.push(a);
            }
        }
        // A zero override weight empties the membership slot.
        for nest in &mut nests {
            let keep: Vec<(usize, f64)> = nest
                .members
                .iter()
                .copied()
                .zip(nest.alpha.iter().copied())
                .filter(|&(_, a)| a > 0.0)
                .collect();
            nest.members = keep.iter().map(|&(m, _)| m).collect();
            nest.alpha = keep.iter().map(|&(_, a)| a).collect();
        }
        nests.retain(|nest| !nest.members.is_empty());
        GevSpec::validated(GevVariant::Ogev, n, nests)
    }

    /// Product-differentiation GEV: each attribute carries a weight
    /// `alpha_d` (weights summing to one), a dissimilarity `lambda_d`, and a
    /// partition of the alternatives into nests.
    pub fn pdgev(n: usize, attributes: &[PdgevAttribute]) -> Result<Self> {
        if attributes.is_empty() {
            return Err(Error::InvalidSpec(
                "PDGEV needs at least one attribute".into(),
            ));
        }
        let weight_sum: f64 = attributes.iter().map(|a| a.weight).sum();
        if (weight_sum - 1.0).abs() > ALPHA_ROW_TOL {
            return Err(Error::InvalidSpec(format!(
                "PDGEV attribute weights sum to {weight_sum}, expected 1"
            )));
        }
        let mut nests = Vec::new();
        for attr in attributes {
            let mut seen = vec![false; n];
            for members in &attr.nests {
                for &i in members {
                    if i >= n || seen[i] {
                        return Err(Error::InvalidSpec(
                            "PDGEV attribute nests must partition the alternatives".into(),
                        ));
                    }
                    seen[i] = true;
                }
                nests.push(Nest {
                    members: members.clone(),
                    lambda: attr.lambda,
                    alpha: vec![attr.weight; members.len()],
                });
            }
            if !seen.iter().all(|&s| s) {
                return Err(Error::InvalidSpec(
                    "PDGEV attribute nests must cover every alternative".into(),
                ));
            }
        }
        GevSpec::validated(GevVariant::Pdgev, n, nests)
    }

    fn validated(variant: GevVariant, n: usize, nests: Vec<Nest>) -> Result<Self> {
        let spec = GevSpec { variant, n, nests };
        spec.validate()?;
        Ok(spec)
    }

    pub fn variant(&self) -> GevVariant {
        self.variant
    }

    /// Number of alternatives.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nests(&self) -> &[Nest] {
        &self.nests
    }

    pub fn min_lambda(&self) -> f64 {
        self.nests.iter().fold(1.0, |m, k| m.min(k.lambda))
    }

    /// Structural validation: lambda ranges, allocation row sums, coverage,
    /// and the variant-specific layout.
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidSpec("no alternatives".into()));
        }
        if self.nests.is_empty() {
            return Err(Error::InvalidSpec("no nests".into()));
        }
        let mut row_sum = vec![0.0f64; self.n];
        let mut covered = vec![false; self.n];
        for (k, nest) in self.nests.iter().enumerate() {
            if !(nest.lambda > 0.0 && nest.lambda <= 1.0) {
                return Err(Error::InvalidSpec(format!(
                    "nest {k}: lambda {} outside (0, 1]",
                    nest.lambda
                )));
            }
            if nest.lambda < LAMBDA_MIN {
                return Err(Error::InvalidSpec(format!(
                    "nest {k}: lambda {} below the numerical floor {LAMBDA_MIN}",
                    nest.lambda
                )));
            }
            if nest.members.is_empty() {
                return Err(Error::InvalidSpec(format!("nest {k} is empty")));
            }
            if nest.members.len() != nest.alpha.len() {
                return Err(Error::InvalidSpec(format!(
                    "nest {k}: {} members but {} alphas",
                    nest.members.len(),
                    nest.alpha.len()
                )));
            }
            let mut seen = std::collections::HashSet::new();
            for (&i, &a) in nest.members.iter().zip(&nest.alpha) {
                if i >= self.n {
                    return Err(Error::InvalidSpec(format!(
                        "nest {k}: member {i} out of range (n = {})",
                        self.n
                    )));
                }
                if !seen.insert(i) {
                    return Err(Error::InvalidSpec(format!(
                        "nest {k}: member {i} listed twice"
                    )));
                }
                if !(a > 0.0) || !a.is_finite() {
                    return Err(Error::InvalidSpec(format!(
                        "nest {k}: allocation for member {i} is {a}, must be positive"
                    )));
                }
                row_sum[i] += a;
                covered[i] = true;
            }
        }
        for i in 0..self.n {
            if !covered[i] {
                return Err(Error::InvalidSpec(format!(
                    "alternative {i} belongs to no nest"
                )));
            }
            if (row_sum[i] - 1.0).abs() > ALPHA_ROW_TOL {
                return Err(Error::InvalidSpec(format!(
                    "alternative {i}: allocations sum to {}, expected 1",
                    row_sum[i]
                )));
            }
        }
        self.validate_variant()
    }

    fn validate_variant(&self) -> Result<()> {
        match self.variant {
            GevVariant::Mnl => {
                if self.nests.len() != 1
                    || self.nests[0].lambda != 1.0
                    || self.nests[0].members.len() != self.n
                {
                    return Err(Error::InvalidSpec(
                        "MNL must be a single nest of all alternatives with lambda 1".into(),
                    ));
                }
            }
            GevVariant::Nl => {
                let total: usize = self.nests.iter().map(|k| k.members.len()).sum();
                if total != self.n {
                    return Err(Error::InvalidSpec(
                        "NL nests must be mutually exclusive".into(),
                    ));
                }
                for nest in &self.nests {
                    if nest.alpha.iter().any(|&a| a != 1.0) {
                        return Err(Error::InvalidSpec(
                            "NL allocations must be exactly one".into(),
                        ));
                    }
                }
            }
            GevVariant::Cnl => {
                let lambda = self.nests[0].lambda;
                if self.nests.iter().any(|k| k.lambda != lambda) {
                    return Err(Error::InvalidSpec(
                        "CNL requires a common lambda across nests".into(),
                    ));
                }
            }
            GevVariant::Pcl => {
                if self.nests.len() != self.n * (self.n - 1) {
                    return Err(Error::InvalidSpec(
                        "PCL must contain one nest per ordered pair".into(),
                    ));
                }
                let expect = 1.0 / (2.0 * (self.n as f64 - 1.0));
                for nest in &self.nests {
                    if nest.members.len() != 2 {
                        return Err(Error::InvalidSpec("PCL nests must be pairs".into()));
                    }
                    if nest
                        .alpha
                        .iter()
                        .any(|&a| (a - expect).abs() > ALPHA_ROW_TOL)
                    {
                        return Err(Error::InvalidSpec(format!(
                            "PCL allocations must equal 1/(2(N-1)) = {expect}"
                        )));
                    }
                }
            }
            GevVariant::Pdgev => {
                for (k, nest) in self.nests.iter().enumerate() {
                    let a0 = nest.alpha[0];
                    if nest.alpha.iter().any(|&a| (a - a0).abs() > ALPHA_ROW_TOL) {
                        return Err(Error::InvalidSpec(format!(
                            "PDGEV nest {k}: allocation must be constant within a nest"
                        )));
                    }
                }
            }
            // GNL is the general form; OGEV window structure is fixed by its
            // constructor and any row-sum-valid overlap layout is accepted
            // on the wire.
            GevVariant::Gnl | GevVariant::Ogev => {}
        }
        Ok(())
    }

    /// Draw a structurally valid random instance of `variant` over `n`
    /// alternatives. Lambdas are kept in [0.3, 1] so that finite-difference
    /// probes of the surplus stay well conditioned.
    pub fn sample<R: Rng>(variant: GevVariant, n: usize, rng: &mut R) -> Result<Self> {
        let lam = |rng: &mut R| rng.gen_range(0.3..=1.0);
        match variant {
            GevVariant::Mnl => GevSpec::mnl(n),
            GevVariant::Nl => {
                let k = rng.gen_range(2..=n.clamp(2, 4));
                let mut groups: Vec<Vec<usize>> = vec![Vec::new(); k];
                for i in 0..n {
                    groups[if i < k { i } else { rng.gen_range(0..k) }].push(i);
                }
                let nests: Vec<(Vec<usize>, f64)> =
                    groups.into_iter().map(|g| (g, lam(rng))).collect();
                GevSpec::nl(n, &nests)
            }
            GevVariant::Gnl | GevVariant::Cnl => {
                let k = rng.gen_range(2..=4usize);
                let common = lam(rng);
                // Dirichlet row weights over a random nonempty nest subset.
                let mut nests: Vec<Nest> = (0..k)
                    .map(|_| Nest {
                        members: Vec::new(),
                        lambda: if variant == GevVariant::Cnl {
                            common
                        } else {
                            lam(rng)
                        },
                        alpha: Vec::new(),
                    })
                    .collect();
                for i in 0..n {
                    let count = rng.gen_range(1..=k);
                    let mut picks: Vec<usize> = (0..k).collect();
                    for j in (1..picks.len()).rev() {
                        picks.swap(j, rng.gen_range(0..=j));
                    }
                    picks.truncate(count);
                    let raw: Vec<f64> = (0..count).map(|_| rng.gen_range(0.1..1.0f64)).collect();
                    let total: f64 = raw.iter().sum();
                    for (&k_idx, w) in picks.iter().zip(raw) {
                        nests[k_idx].members.push(i);
                        nests[k_idx].alpha.push(w / total);
                    }
                }
                nests.retain(|nest| !nest.members.is_empty());
                GevSpec::validated(variant, n, nests)
            }
            GevVariant::Pcl => {
                let lambdas: Vec<f64> = (0..n * (n - 1) / 2).map(|_| lam(rng)).collect();
                GevSpec::pcl(n, &lambdas)
            }
            GevVariant::Ogev => {
                let overlap = rng.gen_range(1..=2usize.min(n - 1));
                let lambdas: Vec<f64> = (0..n + overlap).map(|_| lam(rng)).collect();
                GevSpec::ogev(n, overlap, &lambdas, None)
            }
            GevVariant::Pdgev => {
                let d = rng.gen_range(2..=3usize);
                let raw: Vec<f64> = (0..d).map(|_| rng.gen_range(0.2..1.0f64)).collect();
                let total: f64 = raw.iter().sum();
                let attrs: Vec<PdgevAttribute> = raw
                    .into_iter()
                    .map(|w| {
                        let parts = rng.gen_range(2..=n.clamp(2, 3));
                        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); parts];
                        for i in 0..n {
                            groups[if i < parts {
                                i
                            } else {
                                rng.gen_range(0..parts)
                            }]
                            .push(i);
                        }
                        groups.retain(|g| !g.is_empty());
                        PdgevAttribute {
                            weight: w / total,
                            lambda: lam(rng),
                            nests: groups,
                        }
                    })
                    .collect();
                GevSpec::pdgev(n, &attrs)
            }
        }
    }
}

/// One attribute dimension of a product-differentiation GEV model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PdgevAttribute {
    pub weight: f64,
    pub lambda: f64,
    pub nests: Vec<Vec<usize>>,
}

/// JSON wire form. Field names are fixed by `schemas/gev_spec.schema.json`:
/// `variant`, `n`, `nests` (each `{members, lambda}`), and an optional
/// row-major `alpha` matrix with one row per alternative and one column per
/// nest. MNL/NL omit `alpha` (implied 0/1).
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireSpec {
    variant: GevVariant,
    n: usize,
    nests: Vec<WireNest>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha: Option<Vec<Vec<f64>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireNest {
    members: Vec<usize>,
    lambda: f64,
}

impl TryFrom<WireSpec> for GevSpec {
    type Error = Error;

    fn try_from(wire: WireSpec) -> Result<GevSpec> {
        let k = wire.nests.len();
        let mut nests = Vec::with_capacity(k);
        for (idx, wn) in wire.nests.iter().enumerate() {
            let alpha = match &wire.alpha {
                None => vec![1.0; wn.members.len()],
                Some(matrix) => {
                    if matrix.len() != wire.n {
                        return Err(Error::InvalidSpec(format!(
                            "alpha matrix has {} rows, expected n = {}",
                            matrix.len(),
                            wire.n
                        )));
                    }
                    wn.members
                        .iter()
                        .map(|&i| {
                            let row = &matrix[i];
                            if row.len() != k {
                                return Err(Error::InvalidSpec(format!(
                                    "alpha row {i} has {} columns, expected {k}",
                                    row.len()
                                )));
                            }
                            Ok(row[idx])
                        })
                        .collect::<Result<Vec<f64>>>()?
                }
            };
            nests.push(Nest {
                members: wn.members.clone(),
                lambda: wn.lambda,
                alpha,
            });
        }
        GevSpec::validated(wire.variant, wire.n, nests)
    }
}

impl From<GevSpec> for WireSpec {
    fn from(spec: GevSpec) -> WireSpec {
        let implied = matches!(spec.variant, GevVariant::Mnl | GevVariant::Nl);
        let alpha = if implied {
            None
        } else {
            let mut matrix = vec![vec![0.0; spec.nests.len()]; spec.n];
            for (k, nest) in spec.nests.iter().enumerate() {
                for (&i, &a) in nest.members.iter().zip(&nest.alpha) {
                    matrix[i][k] = a;
                }
            }
            Some(matrix)
        };
        WireSpec {
            variant: spec.variant,
            n: spec.n,
            nests: spec
                .nests
                .iter()
                .map(|nest| WireNest {
                    members: nest.members.clone(),
                    lambda: nest.lambda,
                })
                .collect(),
            alpha,
        }
    }
}

/// The three-alternative nested-logit layout used across the docs and
/// tests: nests {0, 1} and {2} with lambdas 0.5 and 1.
pub fn nl_example_spec() -> GevSpec {
    GevSpec::nl(3, &[(vec![0, 1], 0.5), (vec![2], 1.0)]).expect("valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn mnl_and_nl_construct() {
        let mnl = GevSpec::mnl(5).unwrap();
        assert_eq!(mnl.n(), 5);
        assert_eq!(mnl.nests().len(), 1);
        let nl = nl_example_spec();
        assert_eq!(nl.min_lambda(), 0.5);
    }

    #[test]
    fn rejects_lambda_out_of_range() {
        assert!(GevSpec::nl(3, &[(vec![0, 1], 0.0), (vec![2], 1.0)]).is_err());
        assert!(GevSpec::nl(3, &[(vec![0, 1], 1.2), (vec![2], 1.0)]).is_err());
        // Below the numerical floor.
        assert!(GevSpec::nl(3, &[(vec![0, 1], 5e-4), (vec![2], 1.0)]).is_err());
    }

    #[test]
    fn rejects_bad_alpha_rows() {
        let nest = Nest {
            members: vec![0, 1],
            lambda: 0.7,
            alpha: vec![0.5, 0.5],
        };
        // Alternative 1 only has total allocation 0.5.
        let other = Nest {
            members: vec![0],
            lambda: 0.9,
            alpha: vec![0.5],
        };
        assert!(GevSpec::gnl(2, vec![nest, other]).is_err());
    }

    #[test]
    fn rejects_uncovered_alternative() {
        assert!(GevSpec::nl(3, &[(vec![0, 1], 0.5)]).is_err());
    }

    #[test]
    fn pcl_rows_sum_to_one() {
        let spec = GevSpec::pcl_uniform(4, 0.6).unwrap();
        assert_eq!(spec.nests().len(), 12);
        let mut rows = vec![0.0; 4];
        for nest in spec.nests() {
            for (&i, &a) in nest.members.iter().zip(&nest.alpha) {
                rows[i] += a;
            }
        }
        for r in rows {
            assert!((r - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ogev_membership_counts() {
        let spec = GevSpec::ogev(4, 1, &[0.8; 5], None).unwrap();
        let mut counts = vec![0usize; 4];
        for nest in spec.nests() {
            for &i in &nest.members {
                counts[i] += 1;
            }
        }
        assert_eq!(counts, vec![2, 2, 2, 2]);
    }

    #[test]
    fn pdgev_requires_partitions() {
        let bad = PdgevAttribute {
            weight: 1.0,
            lambda: 0.5,
            nests: vec![vec![0, 1], vec![1, 2]],
        };
        assert!(GevSpec::pdgev(3, &[bad]).is_err());
    }

    #[test]
    fn wire_roundtrip_preserves_spec() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
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
            let json = serde_json::to_string(&spec).unwrap();
            let back: GevSpec = serde_json::from_str(&json).unwrap();
            assert_eq!(spec, back, "{variant:?} wire roundtrip");
        }
    }

    #[test]
    fn wire_rejects_invalid_lambda() {
        let json = r#"{"variant":"NL","n":2,"nests":[{"members":[0,1],"lambda":0.0}]}"#;
        assert!(serde_json::from_str::<GevSpec>(json).is_err());
    }

    #[test]
    fn sampled_specs_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for variant in [
            GevVariant::Nl,
            GevVariant::Gnl,
            GevVariant::Cnl,
            GevVariant::Pcl,
            GevVariant::Ogev,
            GevVariant::Pdgev,
        ] {
            for _ in 0..20 {
                let spec = GevSpec::sample(variant, 6, &mut rng).unwrap();
                spec.validate().unwrap();
            }
        }
    }
}

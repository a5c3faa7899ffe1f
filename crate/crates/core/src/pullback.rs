//! Pullback of jet fields through smooth maps by the higher-order chain rule.
//!
//! Two independent evaluations are provided: [`pullback_multi`] sums over the
//! multi-index solution sets `Lambda_{n,m}(beta)`, [`pullback_comb`] sums over
//! set partitions of the differentiation slots. They share only the
//! per-point derivative tables of the map.

use std::collections::HashMap;

use num_bigint::BigUint;

use crate::combinatorics::{lambda_solutions, set_partitions, LambdaSolution};
use crate::error::{check_dim, Error, Result};
use crate::jetcalc::{compare_fields, jet_of_poly, JetField, PointCloud};
use crate::multiindex::MultiIndex;
use crate::scalar::{format_point, points_near, pow, Rational, Scalar, DEFAULT_TOLERANCE};
use crate::symbolic::{DerivativeOracle, DerivativeTable, PolyMap, Polynomial};

/// Matching of each source point `x` with the target point equal to `phi(x)`.
#[derive(Clone, Debug)]
pub struct PullbackPlan<S, M = PolyMap<S>> {
    map: M,
    source: PointCloud<S>,
    target: PointCloud<S>,
    match_index: Vec<usize>,
    tolerance: f64,
}

impl<S: Scalar, M: DerivativeOracle<S>> PullbackPlan<S, M> {
    pub fn map(&self) -> &M {
        &self.map
    }

    pub fn source(&self) -> &PointCloud<S> {
        &self.source
    }

    pub fn target(&self) -> &PointCloud<S> {
        &self.target
    }

    /// Index in the target cloud of `phi(source[i])`.
    pub fn match_index(&self) -> &[usize] {
        &self.match_index
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    fn check_field(&self, f: &JetField<S>, m: u32) -> Result<()> {
        if f.cloud().points() != self.target.points() {
            return Err(Error::CloudMismatch);
        }
        if f.order() < m {
            return Err(Error::OrderMismatch(format!(
                "pullback to order {m} needs a jet of order >= {m}, got {}",
                f.order()
            )));
        }
        Ok(())
    }

    fn derivative_tables(&self, m: u32) -> Result<Vec<DerivativeTable<S>>> {
        self.map.derivatives_at(self.source.points(), m)
    }
}

/// Matches every `x` in `source` with the point of `target` equal to `phi(x)`
/// (exactly for rationals, within `tolerance` for floats).
pub fn plan<S: Scalar, M: DerivativeOracle<S>>(
    phi: M,
    source: &PointCloud<S>,
    target: &PointCloud<S>,
    tolerance: f64,
) -> Result<PullbackPlan<S, M>> {
    check_dim(phi.domain_dim(), source.dim())?;
    check_dim(phi.target_dim(), target.dim())?;
    let mut match_index = Vec::with_capacity(source.len());
    for x in source.points() {
        let y = phi.value(x)?;
        let hit = target
            .points()
            .iter()
            .position(|t| points_near(&y, t, tolerance));
        match hit {
            Some(i) => match_index.push(i),
            None => {
                let min_distance = target.nearest(&y).map_or(f64::INFINITY, |(_, d)| d);
                return Err(Error::Unmatched {
                    point: format_point(x),
                    min_distance,
                });
            }
        }
    }
    Ok(PullbackPlan {
        map: phi,
        source: source.clone(),
        target: target.clone(),
        match_index,
        tolerance,
    })
}

/// `phi(X)` as a deduplicated cloud, for callers that want the tightest target.
pub fn image_cloud<S: Scalar, M: DerivativeOracle<S>>(phi: &M, source: &PointCloud<S>) -> Result<PointCloud<S>> {
    let tol = if S::EXACT { 0.0 } else { DEFAULT_TOLERANCE };
    let images = source
        .points()
        .iter()
        .map(|x| phi.value(x))
        .collect::<Result<Vec<_>>>()?;
    PointCloud::dedup(phi.target_dim(), images, tol)
}

struct MultiTerm<S> {
    coeff: S,
    outer: MultiIndex,
    factors: Vec<(usize, MultiIndex, u32)>,
}

/// `beta! / (lambda! prod_{i,alpha} (alpha!)^{lambda_{i,alpha}})`, exact.
fn lambda_coefficient(beta: &MultiIndex, lambda: &LambdaSolution) -> Rational {
    let mut denom = lambda.lambda_factorial().clone();
    for ((_, alpha), &c) in lambda.support() {
        let af = alpha.factorial();
        for _ in 0..c {
            denom *= &af;
        }
    }
    let numer: BigUint = beta.factorial();
    Rational::new(numer.into(), denom.into())
}

/// Pullback `phi^# F` to order `m` by the multi-index chain rule:
///
/// `(phi^# F)_beta = sum_{lambda in Lambda(beta)} beta!/lambda! F_{sum lambda_alpha}(phi(x))
///  prod_alpha (d^alpha phi(x))^{lambda_alpha} / (alpha!)^{sum_i lambda_{i,alpha}}`.
pub fn pullback_multi<S: Scalar, M: DerivativeOracle<S>>(
    plan: &PullbackPlan<S, M>,
    f: &JetField<S>,
    m: u32,
) -> Result<JetField<S>> {
    plan.check_field(f, m)?;
    let n = plan.source.dim();
    let target_dim = plan.target.dim();
    let mut terms: HashMap<MultiIndex, Vec<MultiTerm<S>>> = HashMap::new();
    for beta in MultiIndex::all_up_to(n, m) {
        let list = lambda_solutions(n, target_dim, &beta)?
            .iter()
            .map(|lambda| MultiTerm {
                coeff: S::from_rational(&lambda_coefficient(&beta, lambda)),
                outer: lambda.column_sums().clone(),
                factors: lambda
                    .support()
                    .iter()
                    .map(|((i, a), &c)| (*i, a.clone(), c))
                    .collect(),
            })
            .collect();
        terms.insert(beta, list);
    }
    let tables = plan.derivative_tables(m)?;
    Ok(JetField::from_fn(plan.source.clone(), m, |p, beta| {
        let y = plan.match_index[p];
        let table = &tables[p];
        terms[beta].iter().fold(S::zero(), |acc, t| {
            let outer = f.get(y, &t.outer);
            if outer.is_zero() {
                return acc;
            }
            let inner = t
                .factors
                .iter()
                .fold(S::one(), |prod, (i, a, c)| prod * pow(&table.get(*i, a), *c));
            acc + t.coeff.clone() * outer * inner
        })
    }))
}

/// One summand of the multi-index chain rule at a source point.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainTerm<S> {
    pub lambda: LambdaSolution,
    /// `beta! / (lambda! prod (alpha!)^lambda)`.
    pub coefficient: Rational,
    pub value: S,
}

/// The individual summands of `(phi^# F)_beta` at source point `p`, in the
/// enumeration order of [`lambda_solutions`]; they add up to the
/// [`pullback_multi`] component.
pub fn chain_rule_terms<S: Scalar, M: DerivativeOracle<S>>(
    plan: &PullbackPlan<S, M>,
    f: &JetField<S>,
    p: usize,
    beta: &MultiIndex,
) -> Result<Vec<ChainTerm<S>>> {
    plan.check_field(f, beta.norm())?;
    check_dim(plan.source.dim(), beta.len())?;
    if p >= plan.source.len() {
        return Err(Error::NotInCloud(format!("#{p}")));
    }
    let table = plan.map.derivatives(plan.source.point(p), beta.norm())?;
    let y = plan.match_index[p];
    lambda_solutions(plan.source.dim(), plan.target.dim(), beta)?
        .into_iter()
        .map(|lambda| {
            let coefficient = lambda_coefficient(beta, &lambda);
            let inner = lambda
                .support()
                .iter()
                .fold(S::one(), |prod, ((i, a), &c)| prod * pow(&table.get(*i, a), c));
            let value = S::from_rational(&coefficient) * f.get(y, lambda.column_sums()) * inner;
            Ok(ChainTerm {
                lambda,
                coefficient,
                value,
            })
        })
        .collect()
}

/// Per-partition data for one `beta`: the multi-index of each block.
struct CombTerm {
    blocks: Vec<MultiIndex>,
}

/// Pullback `phi^# F` to order `m` by the set-partition chain rule: for the
/// sorted slot sequence `i_1 <= .. <= i_l` realizing `beta`,
///
/// `d^l (f o phi) = sum_{partitions I_1..I_k} sum_{j_1..j_k}
///  (d^k f / dy^{j_1}..dy^{j_k})(phi(x)) prod_b d^{|I_b|} phi^{j_b} / dx^{I_b}`.
pub fn pullback_comb<S: Scalar, M: DerivativeOracle<S>>(
    plan: &PullbackPlan<S, M>,
    f: &JetField<S>,
    m: u32,
) -> Result<JetField<S>> {
    plan.check_field(f, m)?;
    let n = plan.source.dim();
    let target_dim = plan.target.dim();
    let mut by_beta: HashMap<MultiIndex, Vec<CombTerm>> = HashMap::new();
    for beta in MultiIndex::all_up_to(n, m) {
        let slots = beta.coordinate_sequence();
        if slots.is_empty() {
            by_beta.insert(beta, Vec::new());
            continue;
        }
        let list = set_partitions(slots.len())?
            .iter()
            .map(|part| CombTerm {
                blocks: part
                    .blocks()
                    .iter()
                    .map(|block| MultiIndex::from_coordinates(n, block.iter().map(|&t| slots[t])))
                    .collect(),
            })
            .collect();
        by_beta.insert(beta, list);
    }
    let tables = plan.derivative_tables(m)?;
    let zero_outer = MultiIndex::zero(target_dim);
    Ok(JetField::from_fn(plan.source.clone(), m, |p, beta| {
        let y = plan.match_index[p];
        let table = &tables[p];
        if beta.is_zero() {
            return f.get(y, &zero_outer);
        }
        let mut total = S::zero();
        for term in &by_beta[beta] {
            let k = term.blocks.len();
            // odometer over (j_1, .., j_k) in [target_dim]^k
            let mut js = vec![0usize; k];
            loop {
                let outer = MultiIndex::from_coordinates(target_dim, js.iter().copied());
                let fv = f.get(y, &outer);
                if !fv.is_zero() {
                    let prod = term
                        .blocks
                        .iter()
                        .zip(&js)
                        .fold(S::one(), |acc, (a, &j)| acc * table.get(j, a));
                    total = total + fv * prod;
                }
                let mut pos = 0;
                while pos < k {
                    js[pos] += 1;
                    if js[pos] < target_dim {
                        break;
                    }
                    js[pos] = 0;
                    pos += 1;
                }
                if pos == k {
                    break;
                }
            }
        }
        total
    }))
}

/// Result of comparing `phi^# J^m(f)` with `J^m(f o phi)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CommutativityReport {
    pub holds: bool,
    pub max_deviation: f64,
    /// Source point index and `alpha` of the largest deviation.
    pub worst: Option<(usize, MultiIndex)>,
}

/// Both sides of the commutativity identity on `source`: the pullback of
/// `J^m f` from `phi(source)`, and `J^m(f o phi)`.
pub fn commutativity_sides<S: Scalar>(
    f: &Polynomial<S>,
    phi: &PolyMap<S>,
    source: &PointCloud<S>,
    m: u32,
) -> Result<(JetField<S>, JetField<S>)> {
    let target = image_cloud(phi, source)?;
    let tol = if S::EXACT { 0.0 } else { DEFAULT_TOLERANCE };
    let plan = plan(phi.clone(), source, &target, tol)?;
    let lhs = pullback_multi(&plan, &jet_of_poly(f, &target, m)?, m)?;
    let rhs = jet_of_poly(&f.compose(phi)?, source, m)?;
    Ok((lhs, rhs))
}

/// Checks `phi^# J^m(f) = J^m(f o phi)` on `source`: exactly for rationals,
/// within `tol` for floats.
pub fn check_commutativity<S: Scalar>(
    f: &Polynomial<S>,
    phi: &PolyMap<S>,
    source: &PointCloud<S>,
    m: u32,
    tol: f64,
) -> Result<CommutativityReport> {
    let (lhs, rhs) = commutativity_sides(f, phi, source, m)?;
    report(&lhs, &rhs, tol)
}

pub fn report<S: Scalar>(lhs: &JetField<S>, rhs: &JetField<S>, tol: f64) -> Result<CommutativityReport> {
    let cmp = compare_fields(lhs, rhs, tol)?;
    Ok(CommutativityReport {
        holds: cmp.equal,
        max_deviation: cmp.max_deviation,
        worst: cmp.worst,
    })
}

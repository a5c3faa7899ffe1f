//! Exact enumeration and counting behind both forms of the higher-order
//! chain rule: set partitions, Stirling numbers, the multi-index solution sets
//! `Lambda_{n,m}(beta)` and truncated multinomial powers of series.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{check_dim, Error, Result};
use crate::multiindex::{factorial, MultiIndex};
use crate::scalar::{pow, Scalar};
use crate::symbolic::Polynomial;

/// Largest set size accepted by [`set_partitions`].
pub const MAX_PARTITION_SIZE: usize = 12;
/// Largest `|beta|` accepted by [`lambda_solutions`].
pub const MAX_LAMBDA_NORM: u32 = 12;

/// Partition of `{0, .., len-1}` into nonempty blocks, each block sorted and
/// blocks ordered by their smallest element.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SetPartition {
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// Printed one-based: `{{1,2},{3}}`.
impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (b, block) in self.blocks.iter().enumerate() {
            if b > 0 {
                write!(f, ",")?;
            }
            let items: Vec<String> = block.iter().map(|i| (i + 1).to_string()).collect();
            write!(f, "{{{}}}", items.join(","))?;
        }
        write!(f, "}}")
    }
}

/// All partitions of a set with `len` elements in canonical order, coarsest
/// first (each element tries the existing blocks before opening a new one).
pub fn set_partitions(len: usize) -> Result<Vec<SetPartition>> {
    if len == 0 || len > MAX_PARTITION_SIZE {
        return Err(Error::BoundExceeded {
            what: "partition size",
            limit: MAX_PARTITION_SIZE,
            got: len,
        });
    }
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    grow_partitions(0, len, &mut blocks, &mut out);
    Ok(out)
}

fn grow_partitions(
    next: usize,
    len: usize,
    blocks: &mut Vec<Vec<usize>>,
    out: &mut Vec<SetPartition>,
) {
    if next == len {
        out.push(SetPartition {
            blocks: blocks.clone(),
        });
        return;
    }
    for b in 0..blocks.len() {
        blocks[b].push(next);
        grow_partitions(next + 1, len, blocks, out);
        blocks[b].pop();
    }
    blocks.push(vec![next]);
    grow_partitions(next + 1, len, blocks, out);
    blocks.pop();
}

/// Stirling number of the second kind; zero when `k > len` or `k == 0 < len`.
pub fn stirling2(len: usize, k: usize) -> BigUint {
    if k > len {
        return BigUint::zero();
    }
    // row[j] = S(i, j)
    let mut row = vec![BigUint::zero(); k + 1];
    row[0] = BigUint::one();
    for _ in 0..len {
        for j in (1..=k).rev() {
            row[j] = &row[j] * BigUint::from(j) + &row[j - 1];
        }
        row[0] = BigUint::zero();
    }
    row[k].clone()
}

pub fn bell(len: usize) -> BigUint {
    (0..=len).map(|k| stirling2(len, k)).sum()
}

/// One element of `Lambda_{n,m}(beta)`: a finitely supported map
/// `(i, alpha) -> lambda_{i,alpha}` with `sum lambda_{i,alpha} alpha = beta`.
///
/// The target index `i` is zero-based.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LambdaSolution {
    support: BTreeMap<(usize, MultiIndex), u32>,
    lambda_factorial: BigUint,
    column_sums: MultiIndex,
    weight: MultiIndex,
}

impl LambdaSolution {
    fn from_support(n: usize, m: usize, support: BTreeMap<(usize, MultiIndex), u32>) -> Self {
        let mut lambda_factorial = BigUint::one();
        let mut cols = vec![0u32; m];
        let mut weight = MultiIndex::zero(n);
        for ((i, alpha), &c) in &support {
            lambda_factorial *= factorial(c);
            cols[*i] += c;
            weight = &weight + &alpha.scaled(c);
        }
        LambdaSolution {
            support,
            lambda_factorial,
            column_sums: MultiIndex::new(cols),
            weight,
        }
    }

    /// Nonzero entries keyed by `(i, alpha)`.
    pub fn support(&self) -> &BTreeMap<(usize, MultiIndex), u32> {
        &self.support
    }

    pub fn get(&self, i: usize, alpha: &MultiIndex) -> u32 {
        self.support
            .get(&(i, alpha.clone()))
            .copied()
            .unwrap_or(0)
    }

    /// `lambda! = prod lambda_{i,alpha}!`
    pub fn lambda_factorial(&self) -> &BigUint {
        &self.lambda_factorial
    }

    /// `sum_alpha lambda_alpha` in `N^m`: which derivative of the outer function is used.
    pub fn column_sums(&self) -> &MultiIndex {
        &self.column_sums
    }

    /// `sum lambda_{i,alpha} alpha` in `N^n`.
    pub fn weight(&self) -> &MultiIndex {
        &self.weight
    }
}

/// Enumerates `Lambda_{n,m}(beta)`, lexicographically over the support
/// atoms `(i, alpha)` with multiplicities tried in descending order.
pub fn lambda_solutions(n: usize, m: usize, beta: &MultiIndex) -> Result<Vec<LambdaSolution>> {
    check_dim(n, beta.len())?;
    if beta.norm() > MAX_LAMBDA_NORM {
        return Err(Error::BoundExceeded {
            what: "|beta|",
            limit: MAX_LAMBDA_NORM as usize,
            got: beta.norm() as usize,
        });
    }
    let mut alphas: Vec<MultiIndex> = beta.lower_set().into_iter().filter(|a| !a.is_zero()).collect();
    alphas.sort();
    let atoms: Vec<(usize, MultiIndex)> = (0..m)
        .flat_map(|i| alphas.iter().map(move |a| (i, a.clone())))
        .collect();

    let mut out = Vec::new();
    let mut chosen = BTreeMap::new();
    solve_lambda(&atoms, 0, beta.clone(), &mut chosen, &mut |support| {
        out.push(LambdaSolution::from_support(n, m, support.clone()));
    });
    Ok(out)
}

fn solve_lambda(
    atoms: &[(usize, MultiIndex)],
    pos: usize,
    remaining: MultiIndex,
    chosen: &mut BTreeMap<(usize, MultiIndex), u32>,
    emit: &mut impl FnMut(&BTreeMap<(usize, MultiIndex), u32>),
) {
    if remaining.is_zero() {
        emit(chosen);
        return;
    }
    if pos == atoms.len() {
        return;
    }
    let alpha = &atoms[pos].1;
    let max = alpha
        .exponents()
        .iter()
        .zip(remaining.exponents())
        .filter(|(&a, _)| a > 0)
        .map(|(&a, &r)| r / a)
        .min()
        .unwrap_or(0);
    for c in (0..=max).rev() {
        let rest = remaining
            .checked_sub(&alpha.scaled(c))
            .expect("multiplicity bounded by remaining");
        if c > 0 {
            chosen.insert(atoms[pos].clone(), c);
        }
        solve_lambda(atoms, pos + 1, rest, chosen, emit);
        if c > 0 {
            chosen.remove(&atoms[pos]);
        }
    }
}

/// `(sum_alpha a_alpha x^alpha)^b` truncated at total degree `k`, expanded
/// term by term with the multinomial coefficients
/// `b! prod_alpha a_alpha^{nu_alpha} / nu_alpha!` over all `nu` with `sum nu_alpha = b`.
pub fn multinomial_series_power<S: Scalar>(a: &Polynomial<S>, b: u32, k: u32) -> Polynomial<S> {
    let atoms: Vec<(MultiIndex, S)> = a
        .truncate(k)
        .terms()
        .map(|(alpha, c)| (alpha.clone(), c.clone()))
        .collect();
    let dim = a.dim();
    let mut acc: Vec<(MultiIndex, S)> = Vec::new();
    let mut nu = vec![0u32; atoms.len()];
    expand_multinomial(&atoms, 0, b, k, &mut nu, &mut |nu| {
        let mut coeff = factorial(b);
        let mut exponent = MultiIndex::zero(dim);
        let mut value = S::one();
        for ((alpha, c), &v) in atoms.iter().zip(nu.iter()) {
            if v == 0 {
                continue;
            }
            coeff /= factorial(v);
            exponent = &exponent + &alpha.scaled(v);
            value = value * pow(c, v);
        }
        acc.push((exponent, value * S::from_bigint(&coeff.into())));
    });
    Polynomial::from_terms(dim, acc).expect("exponents have the series dimension")
}

fn expand_multinomial<S>(
    atoms: &[(MultiIndex, S)],
    pos: usize,
    remaining: u32,
    degree_budget: u32,
    nu: &mut Vec<u32>,
    emit: &mut impl FnMut(&[u32]),
) {
    if pos == atoms.len() {
        if remaining == 0 {
            emit(nu);
        }
        return;
    }
    let deg = atoms[pos].0.norm();
    let max = degree_budget
        .checked_div(deg)
        .map_or(remaining, |cap| remaining.min(cap));
    for v in 0..=max {
        nu[pos] = v;
        expand_multinomial(atoms, pos + 1, remaining - v, degree_budget - v * deg, nu, emit);
    }
    nu[pos] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, Rational};
    use std::collections::HashSet;

    #[test]
    fn partitions_of_two() {
        let p = set_partitions(2).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p[0].to_string(), "{{1,2}}");
        assert_eq!(p[1].to_string(), "{{1},{2}}");
        assert_eq!(set_partitions(1).unwrap()[0].blocks(), &[vec![0]]);
    }

    #[test]
    fn bell_numbers_from_enumeration() {
        let counts: Vec<usize> = (1..=6).map(|l| set_partitions(l).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 15, 52, 203]);
    }

    #[test]
    fn partition_bounds() {
        assert!(matches!(
            set_partitions(13),
            Err(Error::BoundExceeded { limit: 12, .. })
        ));
        assert!(set_partitions(0).is_err());
    }

    #[test]
    fn partitions_are_canonical_and_distinct() {
        for l in 1..=7 {
            let parts = set_partitions(l).unwrap();
            let set: HashSet<_> = parts.iter().cloned().collect();
            assert_eq!(set.len(), parts.len());
            for p in &parts {
                let mut all: Vec<usize> = p.blocks().iter().flatten().copied().collect();
                all.sort();
                assert_eq!(all, (0..l).collect::<Vec<_>>());
                assert!(p.blocks().iter().all(|b| !b.is_empty()));
                assert!(p.blocks().windows(2).all(|w| w[0][0] < w[1][0]));
                assert!(p.blocks().iter().all(|b| b.windows(2).all(|w| w[0] < w[1])));
            }
        }
    }

    #[test]
    fn stirling_matches_brute_force() {
        for l in 1..=8 {
            let parts = set_partitions(l).unwrap();
            for k in 1..=l {
                let brute = parts.iter().filter(|p| p.num_blocks() == k).count();
                assert_eq!(stirling2(l, k), BigUint::from(brute), "S({l},{k})");
            }
            assert_eq!(stirling2(l, 1), BigUint::one());
            assert_eq!(stirling2(l, l + 1), BigUint::zero());
        }
        assert_eq!(stirling2(3, 2), BigUint::from(3u32));
        let total: BigUint = (1..=6).map(|k| stirling2(6, k)).sum();
        assert_eq!(total, BigUint::from(203u32));
        assert_eq!(bell(6), BigUint::from(203u32));
    }

    #[test]
    fn lambda_examples() {
        let sols = lambda_solutions(1, 1, &[2].into()).unwrap();
        assert_eq!(sols.len(), 2);
        assert_eq!(sols[0].get(0, &[1].into()), 2);
        assert_eq!(sols[0].support().len(), 1);
        assert_eq!(sols[1].get(0, &[2].into()), 1);
        assert_eq!(sols[1].support().len(), 1);

        let empty = lambda_solutions(3, 2, &MultiIndex::zero(3)).unwrap();
        assert_eq!(empty.len(), 1);
        assert!(empty[0].support().is_empty());
        assert_eq!(empty[0].lambda_factorial(), &BigUint::one());

        let two = lambda_solutions(1, 2, &[1].into()).unwrap();
        assert_eq!(two.len(), 2);
        assert_eq!(two[0].get(0, &[1].into()), 1);
        assert_eq!(two[1].get(1, &[1].into()), 1);
        assert_eq!(two[1].column_sums(), &MultiIndex::from([0, 1]));
    }

    #[test]
    fn lambda_bounds_and_dimension() {
        assert!(matches!(
            lambda_solutions(1, 1, &[13].into()),
            Err(Error::BoundExceeded { .. })
        ));
        assert!(matches!(
            lambda_solutions(2, 1, &[1].into()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn multinomial_examples() {
        let x = Polynomial::<Rational>::var(1, 0);
        let one = Polynomial::<Rational>::one(1);
        let a = one.add(&x).unwrap();
        let sq = multinomial_series_power(&a, 2, 2);
        let expect = Polynomial::from_terms(
            1,
            vec![
                (MultiIndex::from([0]), rational(1, 1)),
                (MultiIndex::from([1]), rational(2, 1)),
                (MultiIndex::from([2]), rational(1, 1)),
            ],
        )
        .unwrap();
        assert_eq!(sq, expect);

        // direct expansion: (1 + x + x^2)^2 = 1 + 2x + 3x^2 + 2x^3 + x^4
        let b = a.add(&x.pow(2)).unwrap();
        let truncated = multinomial_series_power(&b, 2, 2);
        assert_eq!(truncated, b.pow(2).truncate(2));
        assert_eq!(truncated.coeff(&[2].into()), rational(3, 1));

        assert_eq!(multinomial_series_power(&b, 0, 3), one);
    }
}

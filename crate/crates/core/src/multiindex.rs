use std::fmt;
use std::ops::{Add, Index};

use num_bigint::BigUint;
use num_traits::One;

/// Exponent vector `alpha` in `N^n`.
///
/// The derived ordering is lexicographic on the exponents, which is what the
/// sparse maps in this crate are keyed by. Graded enumeration is provided by
/// [`MultiIndex::all_up_to`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// The unit index `e_i`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        MultiIndex(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// `|alpha|`
    pub fn norm(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// `alpha! = prod_i alpha_i!`
    pub fn factorial(&self) -> BigUint {
        self.0
            .iter()
            .fold(BigUint::one(), |acc, &a| acc * factorial(a))
    }

    /// Componentwise partial order `self <= other`.
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if !other.le(self) {
            return None;
        }
        Some(MultiIndex(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn scaled(&self, k: u32) -> MultiIndex {
        MultiIndex(self.0.iter().map(|a| a * k).collect())
    }

    /// `prod_i binom(alpha_i, beta_i)`; zero unless `beta <= alpha`.
    pub fn binomial(&self, beta: &MultiIndex) -> BigUint {
        if !beta.le(self) {
            return BigUint::from(0u32);
        }
        self.0
            .iter()
            .zip(&beta.0)
            .fold(BigUint::one(), |acc, (&a, &b)| acc * binomial(a, b))
    }

    /// Coordinate indices realizing this index, sorted: `(2, 1)` gives `[0, 0, 1]`.
    pub fn coordinate_sequence(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &a)| std::iter::repeat_n(i, a as usize))
            .collect()
    }

    /// Counts occurrences of each coordinate in `seq`.
    pub fn from_coordinates(n: usize, seq: impl IntoIterator<Item = usize>) -> MultiIndex {
        let mut v = vec![0; n];
        for i in seq {
            v[i] += 1;
        }
        MultiIndex(v)
    }

    /// All indices of norm exactly `d`, first coordinate descending:
    /// `(2,0), (1,1), (0,2)`.
    pub fn all_of_norm(n: usize, d: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0; n];
        fill_norm(&mut cur, 0, d, &mut out);
        out
    }

    /// All indices with `|alpha| <= m`, graded by norm.
    pub fn all_up_to(n: usize, m: u32) -> Vec<MultiIndex> {
        (0..=m).flat_map(|d| Self::all_of_norm(n, d)).collect()
    }

    /// All `beta <= self` componentwise.
    pub fn lower_set(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex(Vec::with_capacity(self.len()))];
        for &a in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=a).map(move |b| {
                        let mut v = prefix.0.clone();
                        v.push(b);
                        MultiIndex(v)
                    })
                })
                .collect();
        }
        out
    }
}

fn fill_norm(cur: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    let n = cur.len();
    if n == 0 {
        if remaining == 0 {
            out.push(MultiIndex(Vec::new()));
        }
        return;
    }
    if pos == n - 1 {
        cur[pos] = remaining;
        out.push(MultiIndex(cur.clone()));
        cur[pos] = 0;
        return;
    }
    for a in (0..=remaining).rev() {
        cur[pos] = a;
        fill_norm(cur, pos + 1, remaining - a, out);
    }
    cur[pos] = 0;
}

pub fn factorial(k: u32) -> BigUint {
    (2..=k).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn binomial(n: u32, k: u32) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

impl Add for &MultiIndex {
    type Output = MultiIndex;

    fn add(self, rhs: &MultiIndex) -> MultiIndex {
        assert_eq!(self.len(), rhs.len(), "multi-index length mismatch");
        MultiIndex(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Index<usize> for MultiIndex {
    type Output = u32;

    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

impl<const N: usize> From<[u32; N]> for MultiIndex {
    fn from(v: [u32; N]) -> Self {
        MultiIndex(v.to_vec())
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_order_matches_coefficient_layout() {
        let all = MultiIndex::all_up_to(2, 2);
        let expected: Vec<MultiIndex> = vec![
            [0, 0].into(),
            [1, 0].into(),
            [0, 1].into(),
            [2, 0].into(),
            [1, 1].into(),
            [0, 2].into(),
        ];
        assert_eq!(all, expected);
        // C(n+m, m) indices
        assert_eq!(MultiIndex::all_up_to(3, 4).len(), 35);
        assert_eq!(MultiIndex::all_up_to(0, 3), vec![MultiIndex::zero(0)]);
    }

    #[test]
    fn norm_factorial_binomial() {
        let a = MultiIndex::from([3, 0, 2]);
        assert_eq!(a.norm(), 5);
        assert_eq!(a.factorial(), BigUint::from(12u32));
        assert_eq!(a.binomial(&[1, 0, 1].into()), BigUint::from(6u32));
        assert_eq!(a.binomial(&[0, 1, 0].into()), BigUint::from(0u32));
        assert_eq!(a.coordinate_sequence(), vec![0, 0, 0, 2, 2]);
        assert_eq!(MultiIndex::from_coordinates(3, a.coordinate_sequence()), a);
    }

    #[test]
    fn lower_set_size() {
        let a = MultiIndex::from([2, 1]);
        assert_eq!(a.lower_set().len(), 6);
        assert!(a.lower_set().iter().all(|b| b.le(&a)));
    }
}

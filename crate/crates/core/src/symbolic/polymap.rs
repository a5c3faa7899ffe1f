use std::collections::HashMap;

use crate::error::{check_dim, Result};
use crate::matrix::Matrix;
use crate::multiindex::MultiIndex;
use crate::scalar::Scalar;
use crate::symbolic::Polynomial;

/// Polynomial map `R^n -> R^m` given by its component polynomials.
#[derive(Clone, PartialEq)]
pub struct PolyMap<S> {
    domain_dim: usize,
    components: Vec<Polynomial<S>>,
}

impl<S: Scalar> std::fmt::Debug for PolyMap<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        write!(f, "PolyMap[{}]({})", self.domain_dim, parts.join("; "))
    }
}

impl<S: Scalar> PolyMap<S> {
    pub fn new(domain_dim: usize, components: Vec<Polynomial<S>>) -> Result<Self> {
        for c in &components {
            check_dim(domain_dim, c.dim())?;
        }
        Ok(PolyMap {
            domain_dim,
            components,
        })
    }

    pub fn identity(n: usize) -> Self {
        PolyMap {
            domain_dim: n,
            components: (0..n).map(|i| Polynomial::var(n, i)).collect(),
        }
    }

    /// The linear map `x -> M x`.
    pub fn linear(m: &Matrix<S>) -> Self {
        let n = m.ncols();
        let components = (0..m.nrows())
            .map(|i| {
                let terms = (0..n).map(|j| (MultiIndex::unit(n, j), m[(i, j)].clone()));
                Polynomial::from_terms(n, terms).expect("unit indices have length n")
            })
            .collect();
        PolyMap {
            domain_dim: n,
            components,
        }
    }

    pub fn domain_dim(&self) -> usize {
        self.domain_dim
    }

    pub fn target_dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial<S>] {
        &self.components
    }

    pub fn degree(&self) -> Option<u32> {
        self.components.iter().filter_map(Polynomial::degree).max()
    }

    pub fn eval(&self, x: &[S]) -> Result<Vec<S>> {
        self.components.iter().map(|c| c.eval(x)).collect()
    }

    /// `self o inner`.
    pub fn compose(&self, inner: &PolyMap<S>) -> Result<PolyMap<S>> {
        let components = self
            .components
            .iter()
            .map(|c| c.compose(inner))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMap {
            domain_dim: inner.domain_dim,
            components,
        })
    }

    /// Entry `(j, i)` is `d phi^j / d x_i`.
    pub fn jacobian(&self) -> Vec<Vec<Polynomial<S>>> {
        self.components
            .iter()
            .map(|c| {
                (0..self.domain_dim)
                    .map(|i| {
                        c.diff(&MultiIndex::unit(self.domain_dim, i))
                            .expect("same dimension")
                    })
                    .collect()
            })
            .collect()
    }

    pub fn jacobian_at(&self, x: &[S]) -> Result<Matrix<S>> {
        check_dim(self.domain_dim, x.len())?;
        let rows = self
            .jacobian()
            .iter()
            .map(|row| row.iter().map(|p| p.eval(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        if rows.is_empty() {
            return Ok(Matrix::zeros(0, self.domain_dim));
        }
        Matrix::from_rows(rows)
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> PolyMap<T> {
        PolyMap {
            domain_dim: self.domain_dim,
            components: self.components.iter().map(|c| c.map_coeffs(f)).collect(),
        }
    }
}

/// Partial derivatives `d^alpha phi^i(x)` of a map at one point, for all
/// `|alpha| <= order`.
#[derive(Clone, Debug)]
pub struct DerivativeTable<S> {
    order: u32,
    lookup: HashMap<MultiIndex, usize>,
    /// `values[component][index of alpha]`
    values: Vec<Vec<S>>,
}

impl<S: Scalar> DerivativeTable<S> {
    pub fn new(domain_dim: usize, order: u32, values: impl Fn(usize, &MultiIndex) -> S, target_dim: usize) -> Self {
        let indices = MultiIndex::all_up_to(domain_dim, order);
        let values = (0..target_dim)
            .map(|i| indices.iter().map(|a| values(i, a)).collect())
            .collect();
        let lookup = indices.into_iter().enumerate().map(|(k, a)| (a, k)).collect();
        DerivativeTable {
            order,
            lookup,
            values,
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// `d^alpha phi^component(x)`; zero beyond the tabulated order.
    pub fn get(&self, component: usize, alpha: &MultiIndex) -> S {
        match self.lookup.get(alpha) {
            Some(&k) => self.values[component][k].clone(),
            None => S::zero(),
        }
    }

    /// `phi(x)` itself.
    pub fn value(&self) -> Vec<S> {
        let zero = self
            .lookup
            .iter()
            .find(|(a, _)| a.is_zero())
            .map(|(_, &k)| k)
            .expect("order-0 entry present");
        self.values.iter().map(|v| v[zero].clone()).collect()
    }
}

/// Anything usable as a smooth map in a pullback: it must supply exact
/// partial derivatives at given points up to a requested order.
pub trait DerivativeOracle<S: Scalar> {
    fn domain_dim(&self) -> usize;

    fn target_dim(&self) -> usize;

    fn value(&self, x: &[S]) -> Result<Vec<S>>;

    fn derivatives(&self, x: &[S], order: u32) -> Result<DerivativeTable<S>>;

    /// Tables for several points; implementations may share work across points.
    fn derivatives_at(&self, xs: &[Vec<S>], order: u32) -> Result<Vec<DerivativeTable<S>>> {
        xs.iter().map(|x| self.derivatives(x, order)).collect()
    }
}

impl<S: Scalar> DerivativeOracle<S> for PolyMap<S> {
    fn domain_dim(&self) -> usize {
        self.domain_dim
    }

    fn target_dim(&self) -> usize {
        self.components.len()
    }

    fn value(&self, x: &[S]) -> Result<Vec<S>> {
        self.eval(x)
    }

    fn derivatives(&self, x: &[S], order: u32) -> Result<DerivativeTable<S>> {
        Ok(self.derivatives_at(&[x.to_vec()], order)?.remove(0))
    }

    fn derivatives_at(&self, xs: &[Vec<S>], order: u32) -> Result<Vec<DerivativeTable<S>>> {
        let n = self.domain_dim;
        for x in xs {
            check_dim(n, x.len())?;
        }
        let indices = MultiIndex::all_up_to(n, order);
        let mut polys: HashMap<(usize, MultiIndex), Polynomial<S>> = HashMap::new();
        for (i, c) in self.components.iter().enumerate() {
            for a in &indices {
                polys.insert((i, a.clone()), c.diff(a)?);
            }
        }
        Ok(xs
            .iter()
            .map(|x| {
                DerivativeTable::new(
                    n,
                    order,
                    |i, a| {
                        polys[&(i, a.clone())]
                            .eval(x)
                            .expect("dimension checked")
                    },
                    self.components.len(),
                )
            })
            .collect())
    }
}

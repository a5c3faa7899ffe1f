use std::collections::BTreeMap;
use std::fmt;

use crate::error::{check_dim, Result};
use crate::multiindex::MultiIndex;
use crate::scalar::{pow, Scalar};
use crate::symbolic::PolyMap;

/// Sparse multivariate polynomial with no stored zero coefficients.
#[derive(Clone, PartialEq)]
pub struct Polynomial<S> {
    dim: usize,
    terms: BTreeMap<MultiIndex, S>,
}

impl<S: Scalar> Polynomial<S> {
    pub fn zero(dim: usize) -> Self {
        Polynomial {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: S) -> Self {
        Self::monomial(dim, MultiIndex::zero(dim), c)
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, S::one())
    }

    /// The coordinate function `x_i` (zero-based).
    pub fn var(dim: usize, i: usize) -> Self {
        Self::monomial(dim, MultiIndex::unit(dim, i), S::one())
    }

    pub fn monomial(dim: usize, alpha: MultiIndex, c: S) -> Self {
        assert_eq!(alpha.len(), dim, "monomial length must equal dimension");
        let mut p = Self::zero(dim);
        p.add_term(alpha, c);
        p
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (MultiIndex, S)>) -> Result<Self> {
        let mut p = Self::zero(dim);
        for (alpha, c) in terms {
            check_dim(dim, alpha.len())?;
            p.add_term(alpha, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, alpha: MultiIndex, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&alpha) {
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert(alpha, sum);
                }
            }
            None => {
                self.terms.insert(alpha, c);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &S)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> S {
        self.terms.get(alpha).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::norm).max()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    pub fn scale(&self, s: &S) -> Self {
        if s.is_zero() {
            return Self::zero(self.dim);
        }
        Polynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.clone(), c.clone() * s.clone()))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let mut out = Self::zero(self.dim);
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                out.add_term(a + b, c.clone() * d.clone());
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one(self.dim);
        for _ in 0..k {
            result = result.mul(self).expect("same dimension");
        }
        result
    }

    /// Drops every term of total degree above `k`.
    pub fn truncate(&self, k: u32) -> Self {
        Polynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(a, _)| a.norm() <= k)
                .map(|(a, c)| (a.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn eval(&self, x: &[S]) -> Result<S> {
        check_dim(self.dim, x.len())?;
        Ok(self.terms.iter().fold(S::zero(), |acc, (alpha, c)| {
            let mono = alpha
                .exponents()
                .iter()
                .zip(x)
                .fold(S::one(), |m, (&e, xi)| m * pow(xi, e));
            acc + c.clone() * mono
        }))
    }

    /// Exact partial derivative `d^beta f`.
    pub fn diff(&self, beta: &MultiIndex) -> Result<Self> {
        check_dim(self.dim, beta.len())?;
        let mut out = Self::zero(self.dim);
        for (alpha, c) in &self.terms {
            let Some(rest) = alpha.checked_sub(beta) else {
                continue;
            };
            // alpha!/(alpha-beta)!
            let falling = alpha.factorial() / rest.factorial();
            let factor = S::from_bigint(&falling.into());
            out.add_term(rest, c.clone() * factor);
        }
        Ok(out)
    }

    /// Substitutes `phi` into `self`: the polynomial `self o phi` in `phi`'s
    /// domain variables.
    pub fn compose(&self, phi: &PolyMap<S>) -> Result<Self> {
        check_dim(self.dim, phi.target_dim())?;
        let n = phi.domain_dim();
        // powers[j][e] = (phi_j)^e, built lazily
        let mut powers: Vec<Vec<Polynomial<S>>> = phi
            .components()
            .iter()
            .map(|_| vec![Polynomial::one(n)])
            .collect();
        let mut out = Self::zero(n);
        for (alpha, c) in &self.terms {
            let mut term = Polynomial::constant(n, c.clone());
            for (j, &e) in alpha.exponents().iter().enumerate() {
                while powers[j].len() <= e as usize {
                    let next = powers[j].last().unwrap().mul(&phi.components()[j])?;
                    powers[j].push(next);
                }
                if e > 0 {
                    term = term.mul(&powers[j][e as usize])?;
                }
            }
            for (a, v) in term.terms {
                out.add_term(a, v);
            }
        }
        Ok(out)
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Polynomial<T> {
        let mut out = Polynomial::zero(self.dim);
        for (a, c) in &self.terms {
            out.add_term(a.clone(), f(c));
        }
        out
    }

    pub fn to_f64(&self) -> Polynomial<f64> {
        self.map_coeffs(Scalar::to_f64)
    }

    /// Removes coefficients with magnitude `<= tol` (float noise cleanup).
    pub fn prune(&self, tol: f64) -> Self {
        Polynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| !c.near_zero(tol))
                .map(|(a, c)| (a.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn near(&self, other: &Self, tol: f64) -> bool {
        self.dim == other.dim
            && self
                .sub(other)
                .map(|d| d.terms.values().all(|c| c.near_zero(tol)))
                .unwrap_or(false)
    }

    /// Terms in graded order (by total degree, then first variable descending).
    pub fn graded_terms(&self) -> Vec<(&MultiIndex, &S)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| a.norm().cmp(&b.norm()).then_with(|| b.cmp(a)));
        v
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, alpha: &MultiIndex) -> fmt::Result {
    let mut first = true;
    for (i, &e) in alpha.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "x{}", i + 1)?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

/// Text form `c * x1^a1*...*xn^an` joined by ` + ` / ` - `.
impl<S: Scalar> fmt::Display for Polynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (alpha, c)) in self.graded_terms().into_iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            write!(f, "{}", mag.to_text())?;
            if !alpha.is_zero() {
                write!(f, " * ")?;
                write_monomial(f, alpha)?;
            }
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for Polynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]({})", self.dim, self)
    }
}

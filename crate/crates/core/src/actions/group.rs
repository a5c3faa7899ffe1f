use std::collections::HashMap;

use crate::error::{check_dim, Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Scalar, DEFAULT_TOLERANCE};

/// Orthogonal matrix acting linearly on `R^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalElement<S: Scalar> {
    matrix: Matrix<S>,
    label: Option<String>,
}

impl<S: Scalar> OrthogonalElement<S> {
    /// Checks `M^T M = I` (exactly for rationals, within `tol` for floats).
    pub fn new(matrix: Matrix<S>, tol: f64) -> Result<Self> {
        if !matrix.is_orthogonal(tol) {
            return Err(Error::NotOrthogonal(format!("{matrix:?}")));
        }
        Ok(OrthogonalElement {
            matrix,
            label: None,
        })
    }

    pub fn labeled(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn identity(n: usize) -> Self {
        OrthogonalElement {
            matrix: Matrix::identity(n),
            label: Some("e".into()),
        }
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, x: &[S]) -> Result<Vec<S>> {
        self.matrix.apply(x)
    }

    /// Inverse of an orthogonal matrix: its transpose.
    pub fn inverse(&self) -> Self {
        OrthogonalElement {
            matrix: self.matrix.transpose(),
            label: self.label.as_ref().map(|l| format!("({l})^-1")),
        }
    }

    /// `self * other` as matrices: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        OrthogonalElement {
            matrix: self.matrix.mul(&other.matrix).expect("same dimension"),
            label: None,
        }
    }
}

/// Finite group of orthogonal matrices with its multiplication table.
#[derive(Clone, Debug)]
pub struct FiniteGroup<S: Scalar> {
    elements: Vec<OrthogonalElement<S>>,
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
    tolerance: f64,
}

/// Matrix lookup: hashed for exact scalars, linear scan with tolerance for floats.
struct ElementIndex<S> {
    exact: HashMap<String, usize>,
    mats: Vec<Matrix<S>>,
    tol: f64,
}

impl<S: Scalar> ElementIndex<S> {
    fn new(tol: f64) -> Self {
        ElementIndex {
            exact: HashMap::new(),
            mats: Vec::new(),
            tol,
        }
    }

    fn find(&self, m: &Matrix<S>) -> Option<usize> {
        if S::EXACT {
            self.exact.get(&m.text_key()).copied()
        } else {
            self.mats.iter().position(|k| k.near(m, self.tol))
        }
    }

    fn insert(&mut self, m: Matrix<S>) -> usize {
        let idx = self.mats.len();
        if S::EXACT {
            self.exact.insert(m.text_key(), idx);
        }
        self.mats.push(m);
        idx
    }
}

fn word(a: Option<&str>, b: Option<&str>) -> Option<String> {
    match (a, b) {
        (Some("e"), b) => b.map(str::to_string),
        (a, Some("e")) => a.map(str::to_string),
        (Some(a), Some(b)) => Some(format!("{a}*{b}")),
        _ => None,
    }
}

impl<S: Scalar> FiniteGroup<S> {
    pub fn trivial(n: usize) -> Self {
        Self::from_elements(vec![OrthogonalElement::identity(n)], default_tol::<S>())
            .expect("trivial group is closed")
    }

    /// Builds a group from an explicit element list, verifying closure under
    /// products and inverses. The identity is moved to the front if present.
    pub fn from_elements(mut elements: Vec<OrthogonalElement<S>>, tol: f64) -> Result<Self> {
        let Some(first) = elements.first() else {
            return Err(Error::Unsupported("a group needs at least one element".into()));
        };
        let n = first.dim();
        for e in &elements {
            check_dim(n, e.dim())?;
        }
        let id = Matrix::identity(n);
        let Some(pos) = elements.iter().position(|e| e.matrix.near(&id, tol)) else {
            return Err(Error::Internal("element set lacks the identity".into()));
        };
        let e = elements.remove(pos);
        elements.insert(0, e);
        let mut index = ElementIndex::new(tol);
        for e in &elements {
            if index.find(&e.matrix).is_some() {
                return Err(Error::Internal(format!("duplicate group element {:?}", e.matrix)));
            }
            index.insert(e.matrix.clone());
        }
        let table = build_table(&elements, &index)?;
        let inverses = (0..elements.len())
            .map(|i| {
                table[i]
                    .iter()
                    .position(|&k| k == 0)
                    .ok_or_else(|| Error::Internal("element without inverse".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteGroup {
            elements,
            table,
            inverses,
            tolerance: tol,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn elements(&self) -> &[OrthogonalElement<S>] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &OrthogonalElement<S> {
        &self.elements[i]
    }

    /// Index of the identity (always 0).
    pub fn identity(&self) -> usize {
        0
    }

    /// Index of `elements[i] * elements[j]`.
    pub fn multiply(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.inverses[i]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn index_of(&self, m: &Matrix<S>) -> Option<usize> {
        self.elements
            .iter()
            .position(|e| e.matrix.near(m, self.tolerance))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|i| (0..i).all(|j| self.table[i][j] == self.table[j][i]))
    }

    /// Subgroup on the given element indices (identity first, then ascending),
    /// with the multiplication table inherited from `self`.
    pub fn subgroup(&self, indices: &[usize]) -> Result<FiniteGroup<S>> {
        let mut set: std::collections::BTreeSet<usize> = indices.iter().copied().collect();
        if !set.remove(&0) {
            return Err(Error::Internal(format!("indices {indices:?} lack the identity")));
        }
        let order: Vec<usize> = std::iter::once(0).chain(set).collect();
        let local: HashMap<usize, usize> = order.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let lookup = |i: usize| {
            local
                .get(&i)
                .copied()
                .ok_or_else(|| Error::Internal(format!("indices {indices:?} are not closed under products")))
        };
        let table = order
            .iter()
            .map(|&i| order.iter().map(|&j| lookup(self.table[i][j])).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let inverses = order
            .iter()
            .map(|&i| lookup(self.inverses[i]))
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteGroup {
            elements: order.iter().map(|&i| self.elements[i].clone()).collect(),
            table,
            inverses,
            tolerance: self.tolerance,
        })
    }

    /// `g H g^-1` as a sorted list of element indices.
    pub fn conjugate(&self, g: usize, subset: &[usize]) -> Vec<usize> {
        let gi = self.inverses[g];
        let mut out: Vec<usize> = subset
            .iter()
            .map(|&h| self.table[self.table[g][h]][gi])
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn to_f64(&self) -> FiniteGroup<f64> {
        FiniteGroup {
            elements: self
                .elements
                .iter()
                .map(|e| OrthogonalElement {
                    matrix: e.matrix.to_f64(),
                    label: e.label.clone(),
                })
                .collect(),
            table: self.table.clone(),
            inverses: self.inverses.clone(),
            tolerance: if S::EXACT { DEFAULT_TOLERANCE } else { self.tolerance },
        }
    }
}

fn default_tol<S: Scalar>() -> f64 {
    if S::EXACT {
        0.0
    } else {
        DEFAULT_TOLERANCE
    }
}

fn build_table<S: Scalar>(elements: &[OrthogonalElement<S>], index: &ElementIndex<S>) -> Result<Vec<Vec<usize>>> {
    elements
        .iter()
        .map(|a| {
            elements
                .iter()
                .map(|b| {
                    let prod = a.matrix.mul(&b.matrix)?;
                    index
                        .find(&prod)
                        .ok_or_else(|| Error::Internal("element set is not closed".into()))
                })
                .collect()
        })
        .collect()
}

/// Closure of the generators under products, breadth first: identity, then
/// the generators, then words in order of discovery. Fails with
/// `BoundExceeded` once more than `max_order` elements appear.
pub fn group_closure<S: Scalar>(
    generators: &[OrthogonalElement<S>],
    tol: f64,
    max_order: usize,
) -> Result<FiniteGroup<S>> {
    let Some(first) = generators.first() else {
        return Err(Error::Unsupported("group closure needs at least one generator".into()));
    };
    let n = first.dim();
    let gens: Vec<OrthogonalElement<S>> = generators
        .iter()
        .enumerate()
        .map(|(k, g)| {
            check_dim(n, g.dim())?;
            let g = OrthogonalElement::new(g.matrix.clone(), tol.max(default_tol::<S>()))?;
            Ok(match &generators[k].label {
                Some(l) => g.labeled(l.clone()),
                None => g.labeled(format!("g{}", k + 1)),
            })
        })
        .collect::<Result<_>>()?;

    let mut index = ElementIndex::new(tol);
    let mut elements = vec![OrthogonalElement::identity(n)];
    index.insert(elements[0].matrix.clone());
    let mut cursor = 0;
    while cursor < elements.len() {
        for g in &gens {
            let prod = elements[cursor].matrix.mul(&g.matrix)?;
            if index.find(&prod).is_some() {
                continue;
            }
            if elements.len() == max_order {
                return Err(Error::BoundExceeded {
                    what: "group order",
                    limit: max_order,
                    got: max_order + 1,
                });
            }
            let label = word(elements[cursor].label(), g.label());
            index.insert(prod.clone());
            elements.push(OrthogonalElement { matrix: prod, label });
        }
        cursor += 1;
    }
    let table = build_table(&elements, &index)?;
    let inverses = (0..elements.len())
        .map(|i| table[i].iter().position(|&k| k == 0).expect("finite groups have inverses"))
        .collect();
    Ok(FiniteGroup {
        elements,
        table,
        inverses,
        tolerance: tol,
    })
}

/// Standard generator sets with exact integer matrices.
pub mod standard {
    use super::*;

    fn elem<S: Scalar>(m: Matrix<S>, label: &str) -> OrthogonalElement<S> {
        OrthogonalElement::new(m, 0.0).expect("integer signed permutation").labeled(label)
    }

    /// `{-I}` on `R^n`.
    pub fn sign<S: Scalar>(n: usize) -> Vec<OrthogonalElement<S>> {
        vec![elem(Matrix::identity(n).scale(&-S::one()), "-I")]
    }

    /// Rotation of the plane by a quarter turn.
    pub fn quarter_turn<S: Scalar>() -> Vec<OrthogonalElement<S>> {
        vec![elem(Matrix::from_i64_rows(&[&[0, -1], &[1, 0]]), "r")]
    }

    fn permutation_matrix<S: Scalar>(n: usize, perm: &[usize]) -> Matrix<S> {
        let mut m = Matrix::zeros(n, n);
        for (i, &p) in perm.iter().enumerate() {
            m[(p, i)] = S::one();
        }
        m
    }

    /// Symmetric group permuting coordinates: a transposition and an `n`-cycle.
    pub fn permutations<S: Scalar>(n: usize) -> Vec<OrthogonalElement<S>> {
        if n < 2 {
            return vec![elem(Matrix::identity(n), "e")];
        }
        let mut swap: Vec<usize> = (0..n).collect();
        swap.swap(0, 1);
        let mut gens = vec![elem(permutation_matrix(n, &swap), "s")];
        if n > 2 {
            let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
            gens.push(elem(permutation_matrix(n, &cycle), "c"));
        }
        gens
    }

    /// Signed permutations (hyperoctahedral group), a finite subgroup of `O_n`.
    pub fn signed_permutations<S: Scalar>(n: usize) -> Vec<OrthogonalElement<S>> {
        let mut flip = Matrix::identity(n);
        flip[(0, 0)] = -S::one();
        let mut gens = vec![elem(flip, "f")];
        gens.extend(permutations(n).into_iter().filter(|g| g.label() != Some("e")));
        gens
    }

    /// Block-diagonal `diag(g, .., g)` with `copies` blocks: the diagonal
    /// action on `(R^n)^copies`, e.g. the cotangent lift for `copies = 2`.
    pub fn diagonal<S: Scalar>(gens: &[OrthogonalElement<S>], copies: usize) -> Vec<OrthogonalElement<S>> {
        gens.iter()
            .map(|g| {
                let n = g.dim();
                let mut m = Matrix::zeros(n * copies, n * copies);
                for c in 0..copies {
                    for i in 0..n {
                        for j in 0..n {
                            m[(c * n + i, c * n + j)] = g.matrix()[(i, j)].clone();
                        }
                    }
                }
                let out = OrthogonalElement::new(m, 0.0).expect("block orthogonal");
                match g.label() {
                    Some(l) => out.labeled(l),
                    None => out,
                }
            })
            .collect()
    }
}

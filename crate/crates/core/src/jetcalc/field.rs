use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{check_dim, Error, Result};
use crate::jetcalc::PointCloud;
use crate::multiindex::MultiIndex;
use crate::scalar::Scalar;

/// Graded list of all `alpha` with `|alpha| <= order` and its inverse.
#[derive(Debug, PartialEq)]
pub(crate) struct JetLayout {
    indices: Vec<MultiIndex>,
    lookup: HashMap<MultiIndex, usize>,
}

impl JetLayout {
    fn new(dim: usize, order: u32) -> Self {
        let indices = MultiIndex::all_up_to(dim, order);
        let lookup = indices
            .iter()
            .cloned()
            .enumerate()
            .map(|(k, a)| (a, k))
            .collect();
        JetLayout { indices, lookup }
    }
}

/// Jet of order `m` on a point cloud: per point, the coefficients `F_alpha`
/// for `|alpha| <= m`, read as derivative values `d^alpha f`.
///
/// Storage is dense; coefficients not supplied at construction are zero.
#[derive(Clone, Debug)]
pub struct JetField<S> {
    cloud: PointCloud<S>,
    order: u32,
    layout: Arc<JetLayout>,
    values: Vec<Vec<S>>,
}

impl<S: Scalar> PartialEq for JetField<S> {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.cloud == other.cloud && self.values == other.values
    }
}

impl<S: Scalar> JetField<S> {
    pub fn zero(cloud: PointCloud<S>, order: u32) -> Self {
        Self::from_fn(cloud, order, |_, _| S::zero())
    }

    pub fn from_fn(cloud: PointCloud<S>, order: u32, mut f: impl FnMut(usize, &MultiIndex) -> S) -> Self {
        let layout = Arc::new(JetLayout::new(cloud.dim(), order));
        let values = (0..cloud.len())
            .map(|p| layout.indices.iter().map(|a| f(p, a)).collect())
            .collect();
        JetField {
            cloud,
            order,
            layout,
            values,
        }
    }

    /// Builds a field from sparse per-point tables; absent entries are zero.
    pub fn from_sparse(cloud: PointCloud<S>, order: u32, tables: Vec<BTreeMap<MultiIndex, S>>) -> Result<Self> {
        check_dim(cloud.len(), tables.len())?;
        let mut field = Self::zero(cloud, order);
        for (p, table) in tables.into_iter().enumerate() {
            for (alpha, v) in table {
                field.set(p, &alpha, v)?;
            }
        }
        Ok(field)
    }

    /// Single-point field with coefficients listed in graded order.
    pub fn at_point(point: Vec<S>, order: u32, coeffs: Vec<S>) -> Result<Self> {
        let cloud = PointCloud::new(point.len(), vec![point])?;
        let layout = Arc::new(JetLayout::new(cloud.dim(), order));
        check_dim(layout.indices.len(), coeffs.len())?;
        Ok(JetField {
            cloud,
            order,
            layout,
            values: vec![coeffs],
        })
    }

    pub fn cloud(&self) -> &PointCloud<S> {
        &self.cloud
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.cloud.dim()
    }

    pub fn len(&self) -> usize {
        self.cloud.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cloud.is_empty()
    }

    /// All `alpha` with `|alpha| <= order` in graded order.
    pub fn indices(&self) -> &[MultiIndex] {
        &self.layout.indices
    }

    /// `F_alpha` at point `p`; zero when `|alpha|` exceeds the order.
    pub fn get(&self, p: usize, alpha: &MultiIndex) -> S {
        match self.layout.lookup.get(alpha) {
            Some(&k) => self.values[p][k].clone(),
            None => S::zero(),
        }
    }

    /// Coefficients at point `p` in graded order.
    pub fn table(&self, p: usize) -> &[S] {
        &self.values[p]
    }

    pub fn set(&mut self, p: usize, alpha: &MultiIndex, v: S) -> Result<()> {
        check_dim(self.dim(), alpha.len())?;
        let k = *self.layout.lookup.get(alpha).ok_or_else(|| {
            Error::OrderMismatch(format!("|{alpha}| exceeds jet order {}", self.order))
        })?;
        if p >= self.len() {
            return Err(Error::NotInCloud(format!("#{p}")));
        }
        self.values[p][k] = v;
        Ok(())
    }

    /// Nonzero entries at point `p`.
    pub fn sparse_table(&self, p: usize) -> BTreeMap<MultiIndex, S> {
        self.layout
            .indices
            .iter()
            .zip(&self.values[p])
            .filter(|(_, v)| !v.is_zero())
            .map(|(a, v)| (a.clone(), v.clone()))
            .collect()
    }

    /// Drops all components with `|alpha| > k`.
    pub fn truncate(&self, k: u32) -> Result<Self> {
        if k > self.order {
            return Err(Error::OrderMismatch(format!(
                "cannot truncate order {} field to order {k}",
                self.order
            )));
        }
        Ok(Self::from_fn(self.cloud.clone(), k, |p, a| self.get(p, a)))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch(format!(
                "orders {} and {} differ",
                self.order, other.order
            )));
        }
        if self.cloud.points() != other.cloud.points() {
            return Err(Error::CloudMismatch);
        }
        Ok(())
    }

    /// `a * self + b * other`
    pub fn linear_combination(&self, a: &S, other: &Self, b: &S) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (row, orow) in out.values.iter_mut().zip(&other.values) {
            for (v, w) in row.iter_mut().zip(orow) {
                *v = a.clone() * v.clone() + b.clone() * w.clone();
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.linear_combination(&S::one(), other, &S::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.linear_combination(&S::one(), other, &-S::one())
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = self.clone();
        for row in &mut out.values {
            for v in row.iter_mut() {
                *v = v.clone() * s.clone();
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().flatten().all(|v| v.is_zero())
    }

    /// Same coefficients on a cloud holding the same points in a new order.
    pub fn reindexed(&self, cloud: PointCloud<S>) -> Result<Self> {
        check_dim(self.len(), cloud.len())?;
        let mut values = Vec::with_capacity(cloud.len());
        for q in cloud.points() {
            let p = self.cloud.require(q)?;
            values.push(self.values[p].clone());
        }
        Ok(JetField {
            cloud,
            order: self.order,
            layout: self.layout.clone(),
            values,
        })
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> JetField<T> {
        let points: Vec<Vec<T>> = self
            .cloud
            .points()
            .iter()
            .map(|p| p.iter().map(&f).collect::<Vec<T>>())
            .collect();
        let tol = if T::EXACT { 0.0 } else { self.cloud.tolerance().max(crate::scalar::DEFAULT_TOLERANCE) };
        let cloud = PointCloud::dedup(self.dim(), points, tol).expect("dimension preserved");
        assert_eq!(cloud.len(), self.len(), "points collapsed under conversion");
        JetField {
            cloud,
            order: self.order,
            layout: self.layout.clone(),
            values: self
                .values
                .iter()
                .map(|row| row.iter().map(&f).collect())
                .collect(),
        }
    }

    pub fn to_f64(&self) -> JetField<f64> {
        self.map(Scalar::to_f64)
    }
}

/// Outcome of a componentwise comparison of two jet fields.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldComparison {
    pub equal: bool,
    pub max_deviation: f64,
    /// Point index and `alpha` of the first largest nonzero deviation.
    pub worst: Option<(usize, MultiIndex)>,
}

/// Compares two fields on the same cloud and order: exactly for rational
/// scalars, within `tol` for floats.
pub fn compare_fields<S: Scalar>(a: &JetField<S>, b: &JetField<S>, tol: f64) -> Result<FieldComparison> {
    a.check_compatible(b)?;
    let mut equal = true;
    let mut max_deviation = 0.0;
    let mut worst = None;
    for p in 0..a.len() {
        for (k, alpha) in a.indices().iter().enumerate() {
            let (x, y) = (&a.values[p][k], &b.values[p][k]);
            if x == y {
                continue;
            }
            equal &= x.near(y, tol);
            let dev = (x.clone() - y.clone()).abs().to_f64();
            if worst.is_none() || dev > max_deviation {
                max_deviation = dev;
                worst = Some((p, alpha.clone()));
            }
        }
    }
    Ok(FieldComparison {
        equal,
        max_deviation,
        worst,
    })
}

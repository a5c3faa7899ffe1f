use crate::error::{check_dim, Error, Result};
use crate::scalar::{distance, format_point, points_near, Scalar, DEFAULT_TOLERANCE};

/// Ordered finite set of distinct points in `R^n`.
///
/// Rational clouds require exact distinctness; float clouds require pairwise
/// distances above `tolerance` (default `1e-9`).
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud<S> {
    dim: usize,
    points: Vec<Vec<S>>,
    tolerance: f64,
}

impl<S: Scalar> PointCloud<S> {
    pub fn new(dim: usize, points: Vec<Vec<S>>) -> Result<Self> {
        let tol = if S::EXACT { 0.0 } else { DEFAULT_TOLERANCE };
        Self::with_tolerance(dim, points, tol)
    }

    pub fn with_tolerance(dim: usize, points: Vec<Vec<S>>, tolerance: f64) -> Result<Self> {
        for p in &points {
            check_dim(dim, p.len())?;
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].iter().any(|q| points_near(p, q, tolerance)) {
                return Err(Error::DuplicatePoint(format_point(p)));
            }
        }
        Ok(PointCloud {
            dim,
            points,
            tolerance,
        })
    }

    /// Builds a cloud from possibly repeated points, keeping first occurrences.
    pub fn dedup(dim: usize, points: impl IntoIterator<Item = Vec<S>>, tolerance: f64) -> Result<Self> {
        let mut kept: Vec<Vec<S>> = Vec::new();
        for p in points {
            check_dim(dim, p.len())?;
            if !kept.iter().any(|q| points_near(&p, q, tolerance)) {
                kept.push(p);
            }
        }
        Ok(PointCloud {
            dim,
            points: kept,
            tolerance,
        })
    }

    pub fn empty(dim: usize) -> Self {
        PointCloud {
            dim,
            points: Vec::new(),
            tolerance: if S::EXACT { 0.0 } else { DEFAULT_TOLERANCE },
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn points(&self) -> &[Vec<S>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[S] {
        &self.points[i]
    }

    pub fn index_of(&self, p: &[S]) -> Option<usize> {
        self.points
            .iter()
            .position(|q| points_near(p, q, self.tolerance))
    }

    /// Index of `p` or a `NotInCloud` error.
    pub fn require(&self, p: &[S]) -> Result<usize> {
        self.index_of(p)
            .ok_or_else(|| Error::NotInCloud(format_point(p)))
    }

    /// Nearest point index and its distance.
    pub fn nearest(&self, p: &[S]) -> Option<(usize, f64)> {
        self.points
            .iter()
            .enumerate()
            .map(|(i, q)| (i, distance(p, q)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }

    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let points = indices
            .iter()
            .map(|&i| {
                self.points
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::NotInCloud(format!("#{i}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::with_tolerance(self.dim, points, self.tolerance)
    }

    pub fn to_f64(&self) -> PointCloud<f64> {
        PointCloud {
            dim: self.dim,
            points: self
                .points
                .iter()
                .map(|p| p.iter().map(Scalar::to_f64).collect())
                .collect(),
            tolerance: if S::EXACT { DEFAULT_TOLERANCE } else { self.tolerance },
        }
    }
}

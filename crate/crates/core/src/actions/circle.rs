use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Circle action on `R^n` by weighted planar rotations: coordinates
/// `(2k, 2k+1)` rotate with integer weight `weights[k]`, the trailing
/// `fixed` coordinates are left alone.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleAction {
    weights: Vec<i64>,
    fixed: usize,
}

impl CircleAction {
    pub fn new(weights: Vec<i64>, fixed: usize) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Unsupported("circle action needs a rotation block".into()));
        }
        Ok(CircleAction { weights, fixed })
    }

    /// Standard rotation of the plane.
    pub fn planar() -> Self {
        CircleAction {
            weights: vec![1],
            fixed: 0,
        }
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn fixed(&self) -> usize {
        self.fixed
    }

    pub fn dim(&self) -> usize {
        2 * self.weights.len() + self.fixed
    }

    pub fn max_weight(&self) -> u64 {
        self.weights.iter().map(|w| w.unsigned_abs()).max().unwrap_or(0)
    }

    /// The single weight-one block on `R^2`.
    pub fn is_planar(&self) -> bool {
        self.weights == [1] && self.fixed == 0
    }

    /// Lie algebra generator: block `[[0, -w], [w, 0]]` per rotation block.
    pub fn generator<S: Scalar>(&self) -> Matrix<S> {
        let mut a = Matrix::zeros(self.dim(), self.dim());
        for (k, &w) in self.weights.iter().enumerate() {
            a[(2 * k, 2 * k + 1)] = S::from_i64(-w);
            a[(2 * k + 1, 2 * k)] = S::from_i64(w);
        }
        a
    }

    /// `exp(theta A)`.
    pub fn rotation(&self, theta: f64) -> Matrix<f64> {
        let mut m = Matrix::identity(self.dim());
        for (k, &w) in self.weights.iter().enumerate() {
            let (s, c) = (w as f64 * theta).sin_cos();
            m[(2 * k, 2 * k)] = c;
            m[(2 * k, 2 * k + 1)] = -s;
            m[(2 * k + 1, 2 * k)] = s;
            m[(2 * k + 1, 2 * k + 1)] = c;
        }
        m
    }
}

use std::f64::consts::TAU;

use crate::actions::{CircleAction, FiniteGroup};
use crate::error::{check_dim, Error, Result};
use crate::scalar::Scalar;
use crate::symbolic::{PolyMap, Polynomial};

/// Reynolds operator of a finite group: `(1/|G|) sum_g f o g`.
pub fn average_poly<S: Scalar>(group: &FiniteGroup<S>, f: &Polynomial<S>) -> Result<Polynomial<S>> {
    check_dim(group.dim(), f.dim())?;
    let mut acc = Polynomial::zero(f.dim());
    for g in group.elements() {
        acc = acc.add(&f.compose(&PolyMap::linear(g.matrix()))?)?;
    }
    Ok(acc.scale(&(S::one() / S::from_i64(group.order() as i64))))
}

/// Smallest node count for which the equispaced rule integrates
/// `theta -> f(exp(theta A) x)` exactly.
pub fn required_nodes<S: Scalar>(circle: &CircleAction, f: &Polynomial<S>) -> usize {
    circle.max_weight() as usize * f.degree().unwrap_or(0) as usize + 1
}

/// Haar average over the circle, normalized by `1/(2 pi)`, by the
/// `nodes`-point equispaced rule. The integrand is a trigonometric
/// polynomial of degree `max_weight * deg f`, so the rule is exact (up to
/// rounding) once `nodes` exceeds that degree.
pub fn average_poly_circle<S: Scalar>(circle: &CircleAction, f: &Polynomial<S>, nodes: usize) -> Result<Polynomial<f64>> {
    check_dim(circle.dim(), f.dim())?;
    let required = required_nodes(circle, f);
    if nodes < required {
        return Err(Error::TooFewNodes {
            required,
            got: nodes,
        });
    }
    let ff = f.to_f64();
    let mut acc = Polynomial::zero(f.dim());
    for k in 0..nodes {
        let theta = TAU * k as f64 / nodes as f64;
        acc = acc.add(&ff.compose(&PolyMap::linear(&circle.rotation(theta)))?)?;
    }
    Ok(acc.scale(&(1.0 / nodes as f64)).prune(1e-13))
}

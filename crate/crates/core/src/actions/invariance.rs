use std::collections::HashMap;

use crate::actions::{ActingGroup, ArrowElement, GroupoidArrow, OrthogonalElement};
use crate::error::{check_dim, Error, Result};
use crate::jetcalc::{jet_of_poly, vf_apply, JetField, PointCloud};
use crate::matrix::Matrix;
use crate::multiindex::MultiIndex;
use crate::scalar::Scalar;
use crate::symbolic::{PolyMap, Polynomial};

/// Pullback of `F` on `Y` along the linear map `x -> M x`, giving a field on
/// `M^T Y` (`M` orthogonal).
///
/// This is the linear case of the multi-index chain rule: only first
/// derivatives of the map survive, so the pulled-back coefficients are read
/// off from the Taylor polynomial of `F` at each point after the substitution
/// `u = M w`.
pub fn linear_pullback<S: Scalar>(m: &Matrix<S>, f: &JetField<S>) -> Result<JetField<S>> {
    let n = f.dim();
    check_dim(n, m.nrows())?;
    check_dim(n, m.ncols())?;
    let inverse = m.transpose();
    let points = f
        .cloud()
        .points()
        .iter()
        .map(|y| inverse.apply(y))
        .collect::<Result<Vec<_>>>()?;
    let cloud = PointCloud::with_tolerance(n, points, f.cloud().tolerance())?;
    let substitution = PolyMap::linear(m);
    let indices = f.indices().to_vec();
    let factorials: Vec<S> = indices
        .iter()
        .map(|a| S::from_bigint(&a.factorial().into()))
        .collect();
    let position: HashMap<&MultiIndex, usize> = indices.iter().enumerate().map(|(k, a)| (a, k)).collect();
    let mut tables = Vec::with_capacity(f.len());
    for p in 0..f.len() {
        let centered = Polynomial::from_terms(
            n,
            indices
                .iter()
                .zip(&factorials)
                .map(|(a, fact)| (a.clone(), f.get(p, a) / fact.clone())),
        )?;
        tables.push(centered.compose(&substitution)?);
    }
    Ok(JetField::from_fn(cloud, f.order(), |p, beta| {
        tables[p].coeff(beta) * factorials[position[beta]].clone()
    }))
}

/// `(Phi_g)^# F`: the jet on `g^-1 Y` obtained by pulling back along `x -> g x`.
pub fn group_pullback<S: Scalar>(g: &OrthogonalElement<S>, f: &JetField<S>) -> Result<JetField<S>> {
    linear_pullback(g.matrix(), f)
}

/// One failing component of the groupoid invariance check.
#[derive(Clone, Debug, PartialEq)]
pub struct Inv1Violation {
    pub arrow: GroupoidArrow,
    pub alpha: MultiIndex,
    /// `F_alpha` at the arrow's source.
    pub at_source: String,
    /// Component of the pullback of `F(target)` along the arrow.
    pub pulled_back: String,
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Inv1Report {
    pub holds: bool,
    pub arrows_checked: usize,
    pub violations: Vec<Inv1Violation>,
}

/// Groupoid invariance: for every arrow `(g, s -> t)` the pullback of the jet
/// at `z_t` along `g` must equal the jet at `z_s`, component by component.
/// Violations are reported in arrow order, then graded `alpha` order.
pub fn check_inv1<S: Scalar>(
    group: &ActingGroup<S>,
    arrows: &[GroupoidArrow],
    f: &JetField<S>,
    tol: f64,
) -> Result<Inv1Report> {
    let mut violations = Vec::new();
    for arrow in arrows {
        if arrow.source >= f.len() || arrow.target >= f.len() {
            return Err(Error::NotInCloud(format!(
                "arrow {} -> {} outside a cloud of {} points",
                arrow.source,
                arrow.target,
                f.len()
            )));
        }
        if arrow.is_unit() {
            // the unit arrow pulls back along the identity
            continue;
        }
        let target = f.cloud().select(&[arrow.target])?;
        let single = JetField::from_fn(target, f.order(), |_, a| f.get(arrow.target, a));
        match (&arrow.element, group) {
            (ArrowElement::Finite(g), ActingGroup::Finite(grp)) => {
                let pulled = group_pullback(grp.element(*g), &single)?;
                compare_at(arrow, f, arrow.source, &pulled, tol, &mut violations);
            }
            (ArrowElement::Angle(theta), ActingGroup::Circle(c)) => {
                let pulled = linear_pullback(&c.rotation(*theta), &single.to_f64())?;
                compare_at(arrow, &f.to_f64(), arrow.source, &pulled, tol, &mut violations);
            }
            _ => {
                return Err(Error::Unsupported(
                    "arrow element does not belong to the acting group".into(),
                ))
            }
        }
    }
    Ok(Inv1Report {
        holds: violations.is_empty(),
        arrows_checked: arrows.len(),
        violations,
    })
}

fn compare_at<T: Scalar>(
    arrow: &GroupoidArrow,
    f: &JetField<T>,
    source: usize,
    pulled: &JetField<T>,
    tol: f64,
    out: &mut Vec<Inv1Violation>,
) {
    for alpha in f.indices() {
        let (a, b) = (f.get(source, alpha), pulled.get(0, alpha));
        if !a.near(&b, tol) {
            out.push(Inv1Violation {
                arrow: arrow.clone(),
                alpha: alpha.clone(),
                deviation: (a.clone() - b.clone()).abs().to_f64(),
                at_source: a.to_text(),
                pulled_back: b.to_text(),
            });
        }
    }
}

/// One nonvanishing component of `xi_A F`.
#[derive(Clone, Debug, PartialEq)]
pub struct Inv2Violation {
    pub generator: usize,
    pub point: usize,
    pub alpha: MultiIndex,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Inv2Report {
    pub holds: bool,
    pub violations: Vec<Inv2Violation>,
}

/// The fundamental vector field `x -> A x` of a Lie algebra element.
pub fn fundamental_field<S: Scalar>(a: &Matrix<S>) -> PolyMap<S> {
    PolyMap::linear(a)
}

/// Infinitesimal invariance: `xi_A F` vanishes up to order `m - 1` at every
/// point for each generator `A`, with `xi_A(x) = A x`.
pub fn check_inv2<S: Scalar>(generators: &[Matrix<S>], f: &JetField<S>, tol: f64) -> Result<Inv2Report> {
    if f.order() == 0 {
        return Err(Error::OrderMismatch(
            "infinitesimal invariance needs a jet of order at least 1".into(),
        ));
    }
    let mut violations = Vec::new();
    for (k, a) in generators.iter().enumerate() {
        check_dim(f.dim(), a.nrows())?;
        let image = vf_apply(&fundamental_field(a), f)?;
        for p in 0..image.len() {
            for alpha in image.indices() {
                let v = image.get(p, alpha);
                if !v.near_zero(tol) {
                    violations.push(Inv2Violation {
                        generator: k,
                        point: p,
                        alpha: alpha.clone(),
                        value: v.to_text(),
                    });
                }
            }
        }
    }
    Ok(Inv2Report {
        holds: violations.is_empty(),
        violations,
    })
}

/// Convenience: jets of `f` on `cloud` checked against both conditions.
pub fn polynomial_is_invariant<S: Scalar>(
    group: &ActingGroup<S>,
    lie: &[Matrix<S>],
    f: &Polynomial<S>,
    cloud: &PointCloud<S>,
    order: u32,
    tol: f64,
) -> Result<(Inv1Report, Inv2Report)> {
    let jet = jet_of_poly(f, cloud, order)?;
    let arrows = crate::actions::groupoid_arrows(group, cloud, tol)?;
    Ok((check_inv1(group, &arrows, &jet, tol)?, check_inv2(lie, &jet, tol)?))
}

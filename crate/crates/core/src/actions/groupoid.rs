use std::f64::consts::TAU;

use crate::actions::{CircleAction, FiniteGroup};
use crate::error::{check_dim, Error, Result};
use crate::jetcalc::PointCloud;
use crate::matrix::Matrix;
use crate::scalar::{points_near, Scalar};

/// A compact group acting orthogonally: finite matrix group or circle.
#[derive(Clone, Debug)]
pub enum ActingGroup<S: Scalar> {
    Finite(FiniteGroup<S>),
    Circle(CircleAction),
}

impl<S: Scalar> ActingGroup<S> {
    pub fn dim(&self) -> usize {
        match self {
            ActingGroup::Finite(g) => g.dim(),
            ActingGroup::Circle(c) => c.dim(),
        }
    }

    /// Lie algebra generators (none for finite groups).
    pub fn lie_generators(&self) -> Vec<Matrix<S>> {
        match self {
            ActingGroup::Finite(_) => Vec::new(),
            ActingGroup::Circle(c) => vec![c.generator()],
        }
    }
}

impl<S: Scalar> From<FiniteGroup<S>> for ActingGroup<S> {
    fn from(g: FiniteGroup<S>) -> Self {
        ActingGroup::Finite(g)
    }
}

impl<S: Scalar> From<CircleAction> for ActingGroup<S> {
    fn from(c: CircleAction) -> Self {
        ActingGroup::Circle(c)
    }
}

/// Group part of an arrow: an element index or a rotation angle.
#[derive(Clone, Debug, PartialEq)]
pub enum ArrowElement {
    Finite(usize),
    Angle(f64),
}

/// Arrow `(g, z_source)` of the restricted action groupoid, with
/// `g . z_source = z_target`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupoidArrow {
    pub element: ArrowElement,
    pub source: usize,
    pub target: usize,
}

impl GroupoidArrow {
    pub fn is_unit(&self) -> bool {
        self.source == self.target
            && match self.element {
                ArrowElement::Finite(g) => g == 0,
                ArrowElement::Angle(t) => t == 0.0,
            }
    }
}

/// All pairs `(g, z)` with `g . z` in `Z`, ordered by source point then group
/// element.
///
/// Circle actions are supported only for the planar weight-one rotation,
/// where arrows are found by matching radii and solving for the angle. At the
/// origin, whose isotropy is the whole circle, only the unit arrow is listed.
pub fn groupoid_arrows<S: Scalar>(group: &ActingGroup<S>, z: &PointCloud<S>, tol: f64) -> Result<Vec<GroupoidArrow>> {
    check_dim(group.dim(), z.dim())?;
    match group {
        ActingGroup::Finite(g) => finite_arrows(g, z, tol),
        ActingGroup::Circle(c) => circle_arrows(c, z, tol),
    }
}

fn finite_arrows<S: Scalar>(group: &FiniteGroup<S>, z: &PointCloud<S>, tol: f64) -> Result<Vec<GroupoidArrow>> {
    let mut arrows = Vec::new();
    for (s, zs) in z.points().iter().enumerate() {
        for (gi, g) in group.elements().iter().enumerate() {
            let image = g.apply(zs)?;
            if let Some(t) = z.points().iter().position(|q| points_near(&image, q, tol)) {
                arrows.push(GroupoidArrow {
                    element: ArrowElement::Finite(gi),
                    source: s,
                    target: t,
                });
            }
        }
    }
    Ok(arrows)
}

fn circle_arrows<S: Scalar>(circle: &CircleAction, z: &PointCloud<S>, tol: f64) -> Result<Vec<GroupoidArrow>> {
    if !circle.is_planar() {
        return Err(Error::Unsupported(
            "groupoid arrows for circle actions other than the planar weight-one rotation".into(),
        ));
    }
    let radius2: Vec<S> = z
        .points()
        .iter()
        .map(|p| p[0].clone() * p[0].clone() + p[1].clone() * p[1].clone())
        .collect();
    let angle: Vec<f64> = z
        .points()
        .iter()
        .map(|p| p[1].to_f64().atan2(p[0].to_f64()))
        .collect();
    let mut arrows = Vec::new();
    for s in 0..z.len() {
        for t in 0..z.len() {
            if s == t {
                arrows.push(GroupoidArrow {
                    element: ArrowElement::Angle(0.0),
                    source: s,
                    target: t,
                });
                continue;
            }
            let same_radius = if S::EXACT {
                radius2[s] == radius2[t]
            } else {
                (radius2[s].to_f64().sqrt() - radius2[t].to_f64().sqrt()).abs() <= tol
            };
            if !same_radius || radius2[s].near_zero(tol * tol) {
                continue;
            }
            let (ts, tt) = (angle[s], angle[t]);
            let theta = (tt - ts).rem_euclid(TAU);
            arrows.push(GroupoidArrow {
                element: ArrowElement::Angle(theta),
                source: s,
                target: t,
            });
        }
    }
    Ok(arrows)
}

/// The inverse arrow `(g^-1, g.z)`.
pub fn inverse_arrow<S: Scalar>(group: &ActingGroup<S>, a: &GroupoidArrow) -> GroupoidArrow {
    let element = match (&a.element, group) {
        (ArrowElement::Finite(g), ActingGroup::Finite(grp)) => ArrowElement::Finite(grp.inverse(*g)),
        (ArrowElement::Angle(t), _) => ArrowElement::Angle(if *t == 0.0 { 0.0 } else { TAU - t }),
        (e, _) => e.clone(),
    };
    GroupoidArrow {
        element,
        source: a.target,
        target: a.source,
    }
}

/// Composite `b o a` for `a: s -> t`, `b: t -> u`; `None` if not composable.
pub fn compose_arrows<S: Scalar>(group: &ActingGroup<S>, b: &GroupoidArrow, a: &GroupoidArrow) -> Option<GroupoidArrow> {
    if a.target != b.source {
        return None;
    }
    let element = match (&b.element, &a.element, group) {
        (ArrowElement::Finite(gb), ArrowElement::Finite(ga), ActingGroup::Finite(grp)) => {
            ArrowElement::Finite(grp.multiply(*gb, *ga))
        }
        (ArrowElement::Angle(tb), ArrowElement::Angle(ta), _) => ArrowElement::Angle((ta + tb).rem_euclid(TAU)),
        _ => return None,
    };
    Some(GroupoidArrow {
        element,
        source: a.source,
        target: b.target,
    })
}

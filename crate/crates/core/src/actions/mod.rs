//! Orthogonal group actions and the equivariance machinery built on them:
//! finite matrix groups and circle actions, restricted action groupoids, the
//! two invariance conditions on jets, Haar averaging and invariant extension.

mod average;
mod circle;
mod extend;
mod group;
mod groupoid;
mod invariance;

pub use average::{average_poly, average_poly_circle, required_nodes};
pub use circle::CircleAction;
pub use extend::{extend_invariant, orbit_cloud, OrbitCloud};
pub use group::{group_closure, standard, FiniteGroup, OrthogonalElement};
pub use groupoid::{compose_arrows, groupoid_arrows, inverse_arrow, ActingGroup, ArrowElement, GroupoidArrow};
pub use invariance::{
    check_inv1, check_inv2, fundamental_field, group_pullback, linear_pullback,
    polynomial_is_invariant, Inv1Report, Inv1Violation, Inv2Report, Inv2Violation,
};

#[cfg(test)]
mod tests;

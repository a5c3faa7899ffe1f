//! Jets on finite point clouds and their calculus: products, derivatives,
//! Taylor fields and remainders, sup and Whitney seminorms, the action of
//! polynomial vector fields, and restriction.
//!
//! Order `infinity` is always represented by a caller-chosen finite order.

mod cloud;
mod field;
mod ops;

pub use cloud::PointCloud;
pub use field::{compare_fields, FieldComparison, JetField};
pub use ops::{
    jet_diff, jet_mul, jet_of_poly, jet_one, remainder, restrict, seminorm_sup, taylor_poly,
    vf_apply, whitney_seminorm, WhitneySeminorm,
};

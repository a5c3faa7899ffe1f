//! Hilbert maps of a few classical representations, and orbit types.

mod catalog;
mod orbit_type;

pub use catalog::{
    catalog, elementary_symmetric, find_entry, hilbert_pullback, sample_orbit_cloud, verify_entry, EntryReport, GroupSpec, HilbertEntry,
};
pub use orbit_type::{
    canonical_conjugate, classify_cotangent, isotropy, orbit_type_label, Isotropy, OrbitTag, OrbitTypeLabel,
};

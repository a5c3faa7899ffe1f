//! Seeded generators of random polynomials, maps and jets with small
//! rational data, for property checks and acceptance runs.

use num_bigint::BigInt;
use rand::Rng;

use crate::jetcalc::{JetField, PointCloud};
use crate::multiindex::MultiIndex;
use crate::scalar::{Rational, Scalar};
use crate::symbolic::{PolyMap, Polynomial};

/// Small rational `p/q` with `|p| <= 5`, `1 <= q <= 3`.
pub fn small_rational<S: Scalar>(rng: &mut impl Rng) -> S {
    let p: i64 = rng.gen_range(-5..=5);
    let q: i64 = rng.gen_range(1..=3);
    S::from_rational(&Rational::new(BigInt::from(p), BigInt::from(q)))
}

/// Random polynomial in `dim` variables of total degree `<= degree` with at
/// most `max_terms` terms.
pub fn polynomial<S: Scalar>(rng: &mut impl Rng, dim: usize, degree: u32, max_terms: usize) -> Polynomial<S> {
    let all = MultiIndex::all_up_to(dim, degree);
    let count = rng.gen_range(1..=max_terms.max(1));
    let terms = (0..count).map(|_| {
        let alpha = all[rng.gen_range(0..all.len())].clone();
        (alpha, small_rational::<S>(rng))
    });
    Polynomial::from_terms(dim, terms).expect("indices have length dim")
}

pub fn poly_map<S: Scalar>(rng: &mut impl Rng, domain: usize, target: usize, degree: u32, max_terms: usize) -> PolyMap<S> {
    let comps = (0..target)
        .map(|_| polynomial(rng, domain, degree, max_terms))
        .collect();
    PolyMap::new(domain, comps).expect("components share the domain")
}

/// Random point with small rational coordinates.
pub fn point<S: Scalar>(rng: &mut impl Rng, dim: usize) -> Vec<S> {
    (0..dim).map(|_| small_rational(rng)).collect()
}

/// Cloud of up to `count` distinct random points.
pub fn cloud<S: Scalar>(rng: &mut impl Rng, dim: usize, count: usize) -> PointCloud<S> {
    let tol = if S::EXACT { 0.0 } else { crate::scalar::DEFAULT_TOLERANCE };
    PointCloud::dedup(dim, (0..count).map(|_| point(rng, dim)), tol).expect("dimension fixed")
}

/// Jet field with independent random coefficients (generally not the jet of
/// any single polynomial).
pub fn jet_field<S: Scalar>(rng: &mut impl Rng, cloud: &PointCloud<S>, order: u32) -> JetField<S> {
    JetField::from_fn(cloud.clone(), order, |_, _| small_rational(rng))
}

//! Exact sparse polynomials and polynomial maps.
//!
//! Every smooth map handled by the crate (Hilbert maps, group actions, vector
//! field coefficients) is a [`PolyMap`]; the same machinery serves as the
//! independent differentiation and composition oracle in tests.

mod polymap;
mod polynomial;

pub use polymap::{DerivativeOracle, DerivativeTable, PolyMap};
pub use polynomial::Polynomial;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::scalar::{Rational, Scalar, DEFAULT_TOLERANCE};

/// Jacobian matrix of polynomials, entry `(j, i) = d phi^j / d x_i`.
pub fn jacobian<S: Scalar>(phi: &PolyMap<S>) -> Vec<Vec<Polynomial<S>>> {
    phi.jacobian()
}

/// Seeded random rational point: numerators in `[-1000, 1000]`,
/// denominators in `[1, 100]`.
pub fn random_rational_point(rng: &mut impl Rng, n: usize) -> Vec<Rational> {
    (0..n)
        .map(|_| {
            let p: i64 = rng.gen_range(-1000..=1000);
            let q: i64 = rng.gen_range(1..=100);
            Rational::new(BigInt::from(p), BigInt::from(q))
        })
        .collect()
}

/// Rank of the Jacobian at a generic point: the maximum exact rank over
/// `trials` seeded random rational sample points.
pub fn generic_rank<S: Scalar>(phi: &PolyMap<S>, trials: usize, seed: u64) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cap = phi.domain_dim().min(phi.target_dim());
    let mut best = 0;
    for _ in 0..trials.max(1) {
        let x: Vec<S> = random_rational_point(&mut rng, phi.domain_dim())
            .iter()
            .map(S::from_rational)
            .collect();
        best = best.max(phi.jacobian_at(&x)?.rank(DEFAULT_TOLERANCE));
        if best == cap {
            break;
        }
    }
    Ok(best)
}

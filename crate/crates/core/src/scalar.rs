//! Scalar abstraction shared by every layer of the crate.
//!
//! Two families are supported: exact rationals ([`Rational`]) and IEEE floats
//! (`f64`, `f32`). Exact scalars compare with `==`; float scalars compare
//! against an absolute tolerance.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational number.
pub type Rational = BigRational;

/// Default absolute tolerance used by float comparisons.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Field of coefficients for polynomials, jets and matrices.
pub trait Scalar: Signed + Clone + Debug + PartialOrd + Send + Sync + 'static {
    /// `true` for exact arithmetic; comparisons then ignore tolerances.
    const EXACT: bool;

    fn from_rational(r: &Rational) -> Self;

    fn from_bigint(n: &BigInt) -> Self {
        Self::from_rational(&Rational::from_integer(n.clone()))
    }

    fn from_i64(n: i64) -> Self {
        Self::from_bigint(&BigInt::from(n))
    }

    fn to_f64(&self) -> f64;

    /// Equality up to `tol` (ignored for exact scalars).
    fn near(&self, other: &Self, tol: f64) -> bool {
        if Self::EXACT {
            self == other
        } else {
            (self.clone() - other.clone()).abs().to_f64() <= tol
        }
    }

    fn near_zero(&self, tol: f64) -> bool {
        self.near(&Self::zero(), tol)
    }

    /// Parses `p/q`, an integer, or (float scalars only) a decimal literal.
    fn parse_text(text: &str) -> Result<Self>;

    /// Canonical text form: `p/q` for rationals, 17 significant digits for floats.
    fn to_text(&self) -> String;
}

fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => text.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            let n = self.numer().to_f64().unwrap_or(f64::NAN);
            let d = self.denom().to_f64().unwrap_or(f64::NAN);
            n / d
        })
    }

    fn parse_text(text: &str) -> Result<Self> {
        if let Some(r) = parse_rational(text) {
            return Ok(r);
        }
        if text.trim().parse::<f64>().is_ok() {
            return Err(Error::FloatInExactMode(text.trim().to_string()));
        }
        Err(Error::Parse(format!("not a rational number: {text:?}")))
    }

    fn to_text(&self) -> String {
        self.to_string()
    }
}

macro_rules! impl_float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn from_rational(r: &Rational) -> Self {
                <$t as FromPrimitive>::from_f64(Scalar::to_f64(r)).unwrap_or(<$t>::NAN)
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn parse_text(text: &str) -> Result<Self> {
                if let Some(r) = parse_rational(text) {
                    return Ok(Self::from_rational(&r));
                }
                text.trim()
                    .parse::<$t>()
                    .map_err(|_| Error::Parse(format!("not a number: {text:?}")))
            }

            fn to_text(&self) -> String {
                format!("{:.16e}", self)
            }
        }
    };
}

impl_float_scalar!(f64);
impl_float_scalar!(f32);

/// Euclidean distance between two points, evaluated in `f64`.
pub fn distance<S: Scalar>(a: &[S], b: &[S]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = (x.clone() - y.clone()).to_f64();
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

/// Point equality: exact for rationals, `distance <= tol` for floats.
pub fn points_near<S: Scalar>(a: &[S], b: &[S], tol: f64) -> bool {
    a.len() == b.len()
        && if S::EXACT {
            a == b
        } else {
            distance(a, b) <= tol
        }
}

pub fn format_point<S: Scalar>(p: &[S]) -> String {
    let parts: Vec<String> = p.iter().map(Scalar::to_text).collect();
    format!("({})", parts.join(", "))
}

/// `base^exp` by repeated squaring.
pub fn pow<S: Scalar>(base: &S, mut exp: u32) -> S {
    let mut result = S::one();
    let mut b = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b.clone();
        }
        exp >>= 1;
        if exp > 0 {
            b = b.clone() * b;
        }
    }
    result
}

pub fn rational(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

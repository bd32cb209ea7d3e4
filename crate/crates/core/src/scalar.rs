use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, ToPrimitive};

/// Field elements usable as weights on the finite side.
///
/// Implemented for every `Num + FromPrimitive` type, which covers
/// [`BigRational`](crate::Rational) as well as `f32`/`f64`. Equality is
/// taken literally, so invariance checks are only meaningful for exact types.
pub trait Scalar: Num + FromPrimitive + Clone + PartialEq + Debug {
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar")
    }
}

impl<T: Num + FromPrimitive + Clone + PartialEq + Debug> Scalar for T {}

/// Floating-point types usable by the numeric engine (`f32`, `f64`).
pub trait FloatScalar:
    num_traits::Float + num_traits::FloatConst + FromPrimitive + Debug + Send + Sync + 'static
{
    /// Lossy conversion from `f64`; every catalog constant is representable.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> FloatScalar for T where
    T: num_traits::Float + num_traits::FloatConst + FromPrimitive + Debug + Send + Sync + 'static
{
}

/// Parse `"p/q"` or `"p"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q == BigInt::from(0) {
                return None;
            }
            Some(BigRational::new(p, q))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Exact `"p/q"` rendering; integers render without a denominator.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

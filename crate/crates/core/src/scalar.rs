//! Scalar abstractions shared by every engine.
//!
//! Floating-point code is written against [`Real`] (implemented for `f32`
//! and `f64`). Number-distribution moments only need field arithmetic and
//! are written against [`Field`], which `num_rational::BigRational` also
//! satisfies, so the same code runs exactly in rationals.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, Num, ToPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Default + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Converts an `f64` literal. Panics only if the literal is not
    /// representable, which cannot happen for `f32`/`f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Exact or floating field used for number-basis moment arithmetic.
pub trait Field: Clone + Num + FromPrimitive + Debug {
    fn from_u64_exact(n: u64) -> Self {
        Self::from_u64(n).expect("integer representable in field")
    }
}

impl<Q: Clone + Num + FromPrimitive + Debug> Field for Q {}

/// `n choose k` as an exact integer.
pub fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_rows() {
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(10, 5), 252);
        assert_eq!(binomial(3, 4), 0);
        let row: u64 = (0..=12).map(|k| binomial(12, k)).sum();
        assert_eq!(row, 1 << 12);
    }
}

//! Numeric abstraction used by the exact (matrix) side of the library.
//!
//! Walk simulation always runs on `f64`; transition kernels, expected-visit
//! tables and scaling fits are generic so that the same code can be checked
//! in `f32`, `f64` or exact rationals.

use std::fmt::Debug;

use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, ToPrimitive};

/// Field-like scalar with ordering, as needed for `min{.,.}` in arc weights.
pub trait Scalar:
    Num + Clone + PartialOrd + Debug + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn from_count(k: usize) -> Self {
        Self::from_usize(k).expect("count representable in scalar type")
    }

    /// Absolute value, used for residual checks.
    fn magnitude(&self) -> Self {
        if *self < Self::zero() {
            Self::zero() - self.clone()
        } else {
            self.clone()
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
impl Scalar for Ratio<i64> {}
impl Scalar for Ratio<i128> {}

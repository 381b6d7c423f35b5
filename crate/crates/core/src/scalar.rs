//! Floating-point abstraction shared by the embedding and metric code.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_traits::{Float, FromPrimitive};
use serde::Serialize;

/// Real scalar usable for embedding vectors and evaluation scores.
///
/// Implemented for `f32` and `f64`. Embedding tables are usually loaded as
/// `f32` (the word-vector text format is single precision) while reports are
/// computed in `f64`.
pub trait Scalar:
    Float + FromPrimitive + FromStr + Debug + Display + Default + Serialize + Send + Sync + 'static
{
    /// Converts a count into the scalar type.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable as float")
    }

    /// Ratio of two counts with the `0/0 -> 0` convention.
    fn ratio(num: usize, den: usize) -> Self {
        if den == 0 {
            Self::zero()
        } else {
            Self::from_count(num) / Self::from_count(den)
        }
    }
}

impl<T> Scalar for T where
    T: Float
        + FromPrimitive
        + FromStr
        + Debug
        + Display
        + Default
        + Serialize
        + Send
        + Sync
        + 'static
{
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_zero_denominator() {
        assert_eq!(f64::ratio(0, 0), 0.0);
        assert_eq!(f32::ratio(3, 0), 0.0);
        assert_eq!(f64::ratio(1, 4), 0.25);
    }
}

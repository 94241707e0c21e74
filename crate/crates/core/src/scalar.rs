//! Ordered-field scalars shared by exact and floating-point code paths.

use std::fmt::Debug;

use num_traits::{FromPrimitive, Num, Signed};

/// A scalar from an ordered field.
///
/// Implemented for `f64` (simulation) and [`crate::Rational`] (verification),
/// so the algebraic code is written once.
pub trait Scalar: Clone + Debug + PartialOrd + Num + Signed + FromPrimitive {
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("every ordered field contains the integers")
    }
}

impl<T> Scalar for T where T: Clone + Debug + PartialOrd + Num + Signed + FromPrimitive {}

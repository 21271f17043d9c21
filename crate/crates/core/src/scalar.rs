//! Exact scalar fields used by the linear-algebra parts of the engine.

use std::fmt::Debug;

use num_traits::{FromPrimitive, Num, Signed};

/// A field with exact arithmetic. Combinatorial bookkeeping stays in `i64`;
/// only projective points, Möbius matching and Laplacian solves are generic.
pub trait Scalar: Num + Signed + FromPrimitive + Clone + Debug + PartialEq {
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("every integer embeds in the field")
    }
}

impl<T: Num + Signed + FromPrimitive + Clone + Debug + PartialEq> Scalar for T {}

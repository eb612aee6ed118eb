use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Entry type for exchange matrices and C-matrices.
///
/// Mutation only needs an ordered ring, so fixed-width integers and arbitrary
/// precision integers both qualify. Blanket-implemented.
pub trait Scalar:
    Signed + Ord + Clone + Hash + Debug + Display + FromPrimitive + ToPrimitive
{
    /// Small integer constant. Panics only if `v` does not fit `Self`.
    fn of(v: i64) -> Self {
        Self::from_i64(v).expect("integer constant out of range for scalar type")
    }

    /// `max(self, 0)`.
    fn positive_part(&self) -> Self {
        if self.is_positive() {
            self.clone()
        } else {
            Self::zero()
        }
    }
}

impl<T> Scalar for T where
    T: Signed + Ord + Clone + Hash + Debug + Display + FromPrimitive + ToPrimitive
{
}

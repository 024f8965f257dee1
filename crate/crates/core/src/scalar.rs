use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Exact signed integers used for normal-form exponents and lattice
/// coordinates.
pub trait IntScalar:
    Integer + Signed + Copy + Hash + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync
{
}

impl IntScalar for i32 {}
impl IntScalar for i64 {}
impl IntScalar for i128 {}

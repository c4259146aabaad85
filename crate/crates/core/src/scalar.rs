//! The integer abstraction every algorithm in this crate is written against.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// A signed integer type the reconstruction algorithms can run over.
///
/// `BigInt` is the reference carrier and never overflows. `i64` and `i128`
/// are fast paths for harness sweeps whose dynamic range (and the square of
/// it, which `crt_solve` can reach) fits the machine word; the caller owns
/// that check.
pub trait Int:
    Integer
    + Signed
    + Clone
    + Debug
    + Display
    + Hash
    + FromPrimitive
    + ToPrimitive
    + Into<BigInt>
    + TryFrom<BigInt>
    + Send
    + Sync
    + 'static
{
    fn from_usize_exact(n: usize) -> Self {
        Self::from_usize(n).expect("index fits the integer type")
    }

    fn to_big(&self) -> BigInt {
        self.clone().into()
    }

    /// Converts back from a `BigInt`, panicking when the value does not fit.
    fn from_big(value: BigInt) -> Self {
        match Self::try_from(value) {
            Ok(v) => v,
            Err(_) => panic!("value does not fit the integer type"),
        }
    }
}

impl<T> Int for T where
    T: Integer
        + Signed
        + Clone
        + Debug
        + Display
        + Hash
        + FromPrimitive
        + ToPrimitive
        + Into<BigInt>
        + TryFrom<BigInt>
        + Send
        + Sync
        + 'static
{
}

/// `n * x` for a small non-negative multiplier.
pub(crate) fn times<T: Int>(n: u32, x: &T) -> T {
    T::from_u32(n).expect("small constant") * x.clone()
}

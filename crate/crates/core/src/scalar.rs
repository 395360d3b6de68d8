//! The integer scalar abstraction shared by every exact computation.
//!
//! All lattice and group arithmetic is generic over [`IntScalar`]. The
//! crate-root aliases instantiate it with [`BigInt`]; the machine-word
//! instantiation (`i64`) is used by the exhaustive small-group suites, where
//! overflow checks stay enabled so an overflow is a panic, never a wrong value.

use std::fmt;
use std::hash::Hash;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

use crate::error::{Error, Result};

pub trait IntScalar:
    Integer
    + Signed
    + Clone
    + fmt::Debug
    + fmt::Display
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

impl<T> IntScalar for T where
    T: Integer
        + Signed
        + Clone
        + fmt::Debug
        + fmt::Display
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

pub fn to_big<T: IntScalar>(x: &T) -> BigInt {
    x.clone().into()
}

/// Magnitude of a scalar as an unsigned big integer.
pub fn to_biguint<T: IntScalar>(x: &T) -> BigUint {
    let b: BigInt = x.clone().into();
    b.magnitude().clone()
}

pub fn from_big<T: IntScalar>(x: BigInt) -> Result<T> {
    let text = x.to_string();
    T::try_from(x).map_err(|_| Error::ScalarOverflow(text))
}

pub fn from_biguint<T: IntScalar>(x: &BigUint) -> Result<T> {
    from_big(BigInt::from_biguint(Sign::Plus, x.clone()))
}

pub fn from_i64<T: IntScalar>(x: i64) -> T {
    T::from_i64(x).expect("every scalar type holds an i64")
}

pub fn from_usize<T: IntScalar>(x: usize) -> T {
    T::from_usize(x).expect("every scalar type holds a usize")
}

//! Integer scalar abstraction.
//!
//! Every algorithm in this crate is written against [`Int`], so the same code
//! runs on `num_bigint::BigInt` (the canonical, overflow-free choice used by
//! the crate-root aliases and the CLI) and on `i64`/`i128`, which are handy
//! for fast brute-force oracles on small boxes. Fixed-width instantiations
//! panic on overflow in debug builds; callers own the range.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::{Integer, Roots};
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Signed integer type usable as the scalar of every domain type.
pub trait Int:
    Clone
    + Ord
    + Hash
    + Debug
    + Display
    + Integer
    + Signed
    + Roots
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
}

impl<T> Int for T where
    T: Clone
        + Ord
        + Hash
        + Debug
        + Display
        + Integer
        + Signed
        + Roots
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

/// Lifts a small literal into `T`.
#[inline]
pub fn lit<T: Int>(v: i64) -> T {
    T::from_i64(v).expect("literal fits every supported integer type")
}

#[inline]
pub(crate) fn from_u64<T: Int>(v: u64) -> T {
    T::from_u64(v).expect("bound fits the integer type")
}

#[inline]
pub(crate) fn sq<T: Int>(v: &T) -> T {
    v.clone() * v.clone()
}

/// Iterator over `start, start + 1, ..., end` (inclusive).
pub(crate) fn inclusive<T: Int>(start: T, end: T) -> impl Iterator<Item = T> {
    let mut next = Some(start);
    std::iter::from_fn(move || {
        let cur = next.take()?;
        if cur > end {
            return None;
        }
        next = Some(cur.clone() + T::one());
        Some(cur)
    })
}

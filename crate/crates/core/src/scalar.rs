//! Exact field scalars.
//!
//! Everything in this crate is generic over [`ExactField`]. Zero tests drive
//! the matroid structure, so only exact types implement it: arbitrary
//! precision rationals for real work and fixed-width rationals for cheap
//! tests on small inputs.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Zero};

/// A field with exact arithmetic and exact zero tests.
pub trait ExactField:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + FromStr
    + Send
    + Sync
    + 'static
{
    fn from_int(v: i64) -> Self;
}

impl ExactField for Ratio<BigInt> {
    fn from_int(v: i64) -> Self {
        Ratio::from_integer(BigInt::from(v))
    }
}

impl ExactField for Ratio<i64> {
    fn from_int(v: i64) -> Self {
        Ratio::from_integer(v)
    }
}

impl ExactField for Ratio<i128> {
    fn from_int(v: i64) -> Self {
        Ratio::from_integer(v as i128)
    }
}

/// Parses a rational literal of the form `p/q` or `p`.
pub fn parse_scalar<T: ExactField>(s: &str) -> Option<T> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    // Zero denominators are rejected before handing off to the parser.
    if let Some((_, den)) = s.split_once('/') {
        if den.trim().trim_start_matches(['+', '-']).chars().all(|c| c == '0') {
            return None;
        }
    }
    s.parse::<T>().ok()
}

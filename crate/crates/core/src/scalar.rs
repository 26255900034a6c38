//! Numeric abstraction for feature weights and selection payoffs.
//!
//! Unweighted insertion only ever needs integer payoffs, but weighted
//! compilation introduces fractional weights. Everything that touches a
//! weight is generic over [`Scalar`] so callers can pick exact rationals
//! (the default) or floats.

use std::fmt::{Debug, Display};

use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, ToPrimitive};

/// A weight/payoff number: `i64`, `f32`, `f64` or `Ratio<i64>`.
pub trait Scalar:
    Num + FromPrimitive + ToPrimitive + Clone + PartialOrd + Debug + Display + Send + Sync + 'static
{
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    /// `Some(i)` when the value is exactly the integer `i`.
    fn as_integer(&self) -> Option<i64> {
        let i = self.to_i64()?;
        (Self::from_i64(i)? == *self).then_some(i)
    }
}

impl Scalar for i64 {}
impl Scalar for f32 {}
impl Scalar for f64 {}
impl Scalar for Ratio<i64> {}

/// Parse a positive rational from `"3/64"`, `"0.015"` or `"2"`.
pub fn parse_rational(text: &str) -> Option<Ratio<i64>> {
    let text = text.trim();
    if let Ok(r) = text.parse::<Ratio<i64>>() {
        return Some(r);
    }
    let (int, frac) = text.split_once('.')?;
    if frac.is_empty() || frac.len() > 15 || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let negative = int.starts_with('-');
    let int: i64 = if int.is_empty() || int == "-" {
        0
    } else {
        int.parse().ok()?
    };
    let denom = 10i64.checked_pow(frac.len() as u32)?;
    let frac: i64 = frac.parse().ok()?;
    let mag = int.abs().checked_mul(denom)?.checked_add(frac)?;
    Some(Ratio::new(if negative { -mag } else { mag }, denom))
}

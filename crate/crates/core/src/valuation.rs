//! Certified valuations.
//!
//! Valuations are normalized with `v(p) = 1` and are exact rationals. A value
//! known only modulo some power of the uniformizer carries a lower bound
//! instead of a valuation.

use num_rational::Rational64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValuationInfo {
    /// The value is exactly zero.
    Infinite,
    /// The valuation is known exactly.
    Exact(Rational64),
    /// The value is zero modulo the stated valuation; nothing more is known.
    AtLeast(Rational64),
}

impl ValuationInfo {
    /// Certified valuation: `Ok(None)` for an exact zero.
    pub fn certified(self) -> Result<Option<Rational64>> {
        match self {
            ValuationInfo::Infinite => Ok(None),
            ValuationInfo::Exact(v) => Ok(Some(v)),
            ValuationInfo::AtLeast(_) => Err(Error::PrecisionExhausted),
        }
    }

    /// Largest certified lower bound, `None` meaning +infinity.
    pub fn lower_bound(self) -> Option<Rational64> {
        match self {
            ValuationInfo::Infinite => None,
            ValuationInfo::Exact(v) | ValuationInfo::AtLeast(v) => Some(v),
        }
    }

    pub fn shift(self, by: Rational64) -> Self {
        match self {
            ValuationInfo::Infinite => ValuationInfo::Infinite,
            ValuationInfo::Exact(v) => ValuationInfo::Exact(v + by),
            ValuationInfo::AtLeast(v) => ValuationInfo::AtLeast(v + by),
        }
    }
}

/// Valuation of a minimum over terms that cannot cancel each other: either
/// a plain min (Gauss valuation) or a sum whose terms have pairwise distinct
/// valuations modulo 1 (coordinates in a totally ramified basis).
///
/// The minimum over exactly known terms is certified only if every
/// uncertain term is bounded strictly above it.
pub fn min_without_cancellation<I>(terms: I) -> ValuationInfo
where
    I: IntoIterator<Item = ValuationInfo>,
{
    let mut exact: Option<Rational64> = None;
    let mut bound: Option<Rational64> = None;
    for t in terms {
        match t {
            ValuationInfo::Infinite => {}
            ValuationInfo::Exact(v) => exact = Some(exact.map_or(v, |e| e.min(v))),
            ValuationInfo::AtLeast(v) => bound = Some(bound.map_or(v, |b| b.min(v))),
        }
    }
    match (exact, bound) {
        (None, None) => ValuationInfo::Infinite,
        (Some(e), None) => ValuationInfo::Exact(e),
        (None, Some(b)) => ValuationInfo::AtLeast(b),
        (Some(e), Some(b)) if e < b => ValuationInfo::Exact(e),
        (Some(e), Some(b)) => ValuationInfo::AtLeast(e.min(b)),
    }
}

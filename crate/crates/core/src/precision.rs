//! Adaptive precision: retry a computation with doubled precision whenever it
//! reports that some value could not be certified.

use crate::error::{Error, Result};

/// Number of doublings attempted before giving up.
pub const MAX_DOUBLINGS: u32 = 10;

/// Run `f(prec)` starting at `start`, doubling on `PrecisionExhausted`.
///
/// Returns the result together with the precision that produced it.
pub fn escalate<T>(start: u32, mut f: impl FnMut(u32) -> Result<T>) -> Result<(T, u32)> {
    let mut prec = start.max(1);
    for _ in 0..=MAX_DOUBLINGS {
        match f(prec) {
            Err(Error::PrecisionExhausted) => prec = prec.saturating_mul(2),
            other => return other.map(|v| (v, prec)),
        }
    }
    Err(Error::EscalationLimit {
        doublings: MAX_DOUBLINGS,
        precision: prec / 2,
    })
}

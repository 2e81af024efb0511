//! Fast Hough transform over dyadic line patterns, together with an
//! exact-arithmetic toolkit for studying how well those patterns
//! approximate straight lines.
//!
//! The crate is organised bottom-up:
//!
//! - [`pattern`] builds dyadic patterns three independent ways (recursive
//!   halving, bit-weighted sum of basis lines, cumulative shift pixels).
//! - [`fht`] computes the Hough accumulator in `O(n² log n)` with a
//!   butterfly merge, plus an `O(n³)` brute-force oracle and the four
//!   slope quadrants.
//! - [`error_analysis`] evaluates the signed approximation error exactly
//!   and scans per-slope and global maxima.
//! - [`maximizer`] works on the cyclic-shift table of a bit word and its
//!   zero-leading-row sum, whose maximum gives the peak error.
//! - [`ising`] maps bit words to spin rings and checks the equivalence
//!   between the table functional and an antiferromagnet energy.
//! - [`verify`] bundles all of the above into one invariant suite.
//!
//! All values that feed a decision (maxima, argmax sets, residuals) are
//! exact integers or [`ExactRational`]s; floating point only appears in
//! the decimal columns of emitted CSV.

pub mod error;
pub mod error_analysis;
pub mod fht;
pub mod ising;
pub mod lcg;
pub mod maximizer;
pub mod pattern;
pub mod pgm;
pub mod rational;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
pub use fht::{fht_full, fht_quadrant, hough_brute, HoughAccumulator, ImageGrid, Quadrant};
pub use pattern::{DyadicPattern, PatternParams, ShiftSet};
pub use rational::ExactRational;

/// Largest supported exponent; the image side is `2^p`.
pub const MAX_EXPONENT: u32 = 30;

/// Default cap for exhaustive `O(4^p)` error scans.
pub const DEFAULT_EXHAUSTIVE_CAP: u32 = 13;

/// Environment variable that overrides [`DEFAULT_EXHAUSTIVE_CAP`].
pub const EXHAUSTIVE_CAP_ENV: &str = "FHT_MAX_P";

/// Exhaustive-scan cap in effect, honouring `FHT_MAX_P` when it parses.
pub fn exhaustive_cap() -> u32 {
    std::env::var(EXHAUSTIVE_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<u32>().ok())
        .map(|v| v.min(MAX_EXPONENT))
        .unwrap_or(DEFAULT_EXHAUSTIVE_CAP)
}

pub(crate) fn check_exponent(p: u32) -> Result<()> {
    if p == 0 || p > MAX_EXPONENT {
        return Err(Error::Parameter(format!(
            "exponent p = {p} outside [1, {MAX_EXPONENT}]"
        )));
    }
    Ok(())
}

pub(crate) fn check_word(p: u32, x: u64, what: &str) -> Result<()> {
    check_exponent(p)?;
    if x >> p != 0 {
        return Err(Error::Parameter(format!(
            "{what} = {x} outside [0, {}] for p = {p}",
            (1u64 << p) - 1
        )));
    }
    Ok(())
}

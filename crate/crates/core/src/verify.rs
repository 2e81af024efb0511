//! The full invariant suite, run over a range of exponents.

use std::fmt;
use std::ops::RangeInclusive;

use crate::error_analysis::{
    error_histogram, global_max_error, interchange_residual, symmetry_residual, total_error_sum,
};
use crate::ising::{affine_bridge_residual, functional_maximizers, quadratic_ground_states};
use crate::maximizer::{lemma_residuals, search_maximizers};
use crate::pattern::{
    basis_ordinates, cumulative_build, pattern_recursive, pattern_sum_with, shift_multiset,
    shift_set, PatternParams, Rounding,
};
use crate::rational::ExactRational;
use crate::{exhaustive_cap, Error, Result};

/// Deliberate defects that the suite must catch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Adds one to the numerator of the basis-line rounding.
    Rounding,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    pub fault: Option<Fault>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub p: u32,
    /// First counterexample, if the check failed.
    pub failure: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "{:<24} p={:<3} PASS", self.name, self.p),
            Some(c) => write!(f, "{:<24} p={:<3} FAIL  {c}", self.name, self.p),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub outcomes: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(CheckOutcome::passed)
    }

    pub fn first_failure(&self) -> Option<&CheckOutcome> {
        self.outcomes.iter().find(|o| !o.passed())
    }
}

type Check = fn(u32, &VerifyOptions) -> Result<Option<String>>;

const CHECKS: &[(&str, Check)] = &[
    ("construction-equivalence", check_constructions),
    ("basis-shift-pixels", check_shift_pixels),
    ("error-symmetry", check_symmetry),
    ("slope-abscissa-interchange", check_interchange),
    ("peak-error-theorem", check_theorem),
    ("table-error-bridge", check_bridge),
    ("pruning-soundness", check_pruning),
    ("lemma-residuals", check_lemmas),
    ("ising-affine-bridge", check_ising),
    ("error-distribution", check_distribution),
];

/// Runs every check for every `p` in `range`.
pub fn run(range: RangeInclusive<u32>, opts: &VerifyOptions) -> Result<VerifyReport> {
    if range.is_empty() {
        return Err(Error::Parameter("empty exponent range".into()));
    }
    let cap = exhaustive_cap();
    if *range.start() < 2 || *range.end() > cap {
        return Err(Error::Parameter(format!(
            "verification range must lie within [2, {cap}], got {}..{}",
            range.start(),
            range.end()
        )));
    }
    let mut report = VerifyReport::default();
    for p in range {
        for &(name, check) in CHECKS {
            let failure = check(p, opts)?;
            report.outcomes.push(CheckOutcome { name, p, failure });
        }
    }
    Ok(report)
}

fn rounding(opts: &VerifyOptions) -> Rounding {
    match opts.fault {
        Some(Fault::Rounding) => Rounding::Perturbed,
        None => Rounding::HalfUp,
    }
}

fn check_constructions(p: u32, opts: &VerifyOptions) -> Result<Option<String>> {
    for t in 0..1u64 << p {
        let params = PatternParams::new(p, t, 0)?;
        let rec = pattern_recursive(params);
        let sum = pattern_sum_with(params, rounding(opts));
        let cum = cumulative_build(p, &shift_multiset(params), 0)?;
        if rec.ordinates() != sum.ordinates() || sum.ordinates() != cum.ordinates() {
            return Ok(Some(format!("t={t}: recursive, bit-sum and cumulative patterns differ")));
        }
    }
    Ok(None)
}

fn check_shift_pixels(p: u32, opts: &VerifyOptions) -> Result<Option<String>> {
    for r in 0..p {
        let ys = basis_ordinates(p, r, rounding(opts));
        let steps: Vec<u64> = (0..ys.len() - 1)
            .filter(|&x| ys[x + 1] != ys[x])
            .map(|x| x as u64)
            .collect();
        if steps != shift_set(p, r)?.abscissas() {
            return Ok(Some(format!("r={r}: basis steps differ from shift pixels")));
        }
    }
    Ok(None)
}

fn check_symmetry(p: u32, _: &VerifyOptions) -> Result<Option<String>> {
    for t in 0..1u64 << p {
        for y in 0..1u64 << (p - 1) {
            let res = symmetry_residual(p, t, y)?;
            if !res.is_zero() {
                return Ok(Some(format!("t={t} y={y}: residual {res}")));
            }
        }
    }
    Ok(None)
}

fn check_interchange(p: u32, _: &VerifyOptions) -> Result<Option<String>> {
    for t in 0..1u64 << p {
        for x in 0..t {
            let res = interchange_residual(p, t, x)?;
            if !res.is_zero() {
                return Ok(Some(format!("t={t} x={x}: residual {res}")));
            }
        }
    }
    Ok(None)
}

/// `p/6` for even `p`, `p/6 - (2^p + 1) / (18 (2^p - 1))` for odd `p`.
pub fn expected_peak_error(p: u32) -> ExactRational {
    let m = (1i64 << p) - 1;
    if p.is_multiple_of(2) {
        ExactRational::new(p as i64, 6)
    } else {
        ExactRational::new(3 * p as i64 * m - ((1i64 << p) + 1), 18 * m as u64)
    }
}

fn check_theorem(p: u32, _: &VerifyOptions) -> Result<Option<String>> {
    let got = global_max_error(p)?.value;
    let want = expected_peak_error(p);
    Ok((got != want).then(|| format!("peak error {got}, expected {}", want.reduced())))
}

fn check_bridge(p: u32, _: &VerifyOptions) -> Result<Option<String>> {
    let table = search_maximizers(p, false)?.peak_error();
    let scan = global_max_error(p)?.value;
    Ok((table != scan).then(|| format!("table maximum {table} vs error scan {scan}")))
}

fn check_pruning(p: u32, _: &VerifyOptions) -> Result<Option<String>> {
    let full = search_maximizers(p, false)?;
    let pruned = search_maximizers(p, true)?;
    Ok((full.argmax_xs != pruned.argmax_xs || full.max_sum != pruned.max_sum).then(|| {
        format!("argmax {:?} vs pruned {:?}", full.argmax_xs, pruned.argmax_xs)
    }))
}

fn check_lemmas(p: u32, _: &VerifyOptions) -> Result<Option<String>> {
    if p < 3 {
        return Ok(None);
    }
    for x in 0..1u64 << p {
        let res = lemma_residuals(p, x)?;
        if res != (0, 0) {
            return Ok(Some(format!("x={x}: residuals {res:?}")));
        }
    }
    Ok(None)
}

fn check_ising(p: u32, _: &VerifyOptions) -> Result<Option<String>> {
    for x in 0..1u64 << p {
        let res = affine_bridge_residual(p, x)?;
        if !res.is_zero() {
            return Ok(Some(format!("x={x}: residual {res}")));
        }
    }
    let f = functional_maximizers(p)?;
    let q = quadratic_ground_states(p)?;
    Ok((f != q).then(|| format!("argmax F {f:?} vs argmin Q {q:?}")))
}

fn check_distribution(p: u32, _: &VerifyOptions) -> Result<Option<String>> {
    let hist = error_histogram(p, 2 * p as usize + 1)?;
    if !hist.is_mirror_symmetric() {
        return Ok(Some(format!("histogram not symmetric: {:?}", hist.counts)));
    }
    let sum = total_error_sum(p)?;
    Ok((!sum.is_zero()).then(|| format!("error sum {sum}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_run_passes() {
        let rep = run(2..=6, &VerifyOptions::default()).unwrap();
        assert!(rep.all_passed(), "{:?}", rep.first_failure());
        assert_eq!(rep.outcomes.len(), 5 * CHECKS.len());
    }

    #[test]
    fn injected_fault_is_caught() {
        let opts = VerifyOptions { fault: Some(Fault::Rounding) };
        let rep = run(2..=6, &opts).unwrap();
        let first = rep.first_failure().expect("fault must be detected");
        assert_eq!(first.p, 2);
    }

    #[test]
    fn range_validation() {
        #[allow(clippy::reversed_empty_ranges)]
        let empty = 5..=4;
        assert!(matches!(run(empty, &VerifyOptions::default()), Err(Error::Parameter(_))));
        assert!(run(1..=3, &VerifyOptions::default()).is_err());
        assert!(run(2..=40, &VerifyOptions::default()).is_err());
    }

    #[test]
    fn expected_peak_values() {
        assert_eq!(expected_peak_error(3), ExactRational::new(3, 7));
        assert_eq!(expected_peak_error(4), ExactRational::new(2, 3));
        assert_eq!(expected_peak_error(5), ExactRational::new(24, 31));
    }
}

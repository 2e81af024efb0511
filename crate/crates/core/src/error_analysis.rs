//! Exact approximation error of dyadic patterns.
//!
//! For slope `t` with bits `t_r` and column `x`, the signed gap between the
//! pattern and the continuous line is
//!
//! ```text
//! E(x, t) = Σ_r t_r ( round(2^r x / M) - 2^r x / M ),   M = 2^p - 1
//! ```
//!
//! Every value is kept as an integer numerator over `M`, so maxima and
//! argmax sets are decided without floating point.

use rayon::prelude::*;

use crate::pattern::round_half_up;
use crate::rational::ExactRational;
use crate::{check_exponent, check_word, exhaustive_cap, Error, Result};

/// `M · round(2^r x / M) - 2^r x` for `r = 0 .. p-1`.
pub(crate) fn basis_error_numerators(p: u32, x: u64) -> Vec<i64> {
    let m = (1u64 << p) - 1;
    (0..p)
        .map(|r| {
            let v = x << r;
            (m * round_half_up(v, m)) as i64 - v as i64
        })
        .collect()
}

/// Error numerators `E(x, t) · M` for every slope `t`, built by adding one
/// basis term per set bit.
fn numerators_over_slopes(p: u32, x: u64, out: &mut Vec<i64>) {
    let basis = basis_error_numerators(p, x);
    out.clear();
    out.push(0);
    for t in 1..1usize << p {
        let v = out[t & (t - 1)] + basis[t.trailing_zeros() as usize];
        out.push(v);
    }
}

fn error_numerator(p: u32, t: u64, x: u64) -> i64 {
    let basis = basis_error_numerators(p, x);
    (0..p as usize).filter(|&r| t >> r & 1 == 1).map(|r| basis[r]).sum()
}

fn denominator(p: u32) -> u64 {
    (1u64 << p) - 1
}

fn check_cap(p: u32) -> Result<()> {
    check_exponent(p)?;
    let cap = exhaustive_cap();
    if p > cap {
        return Err(Error::Capability(format!(
            "exhaustive error scan capped at p = {cap}; use the maximizer search for larger p"
        )));
    }
    Ok(())
}

/// Signed error `E(x, t)` over the denominator `2^p - 1`.
pub fn error_at(p: u32, t: u64, x: u64) -> Result<ExactRational> {
    check_word(p, t, "slope t")?;
    check_word(p, x, "abscissa x")?;
    Ok(ExactRational::new(error_numerator(p, t, x), denominator(p)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeMax {
    pub value: ExactRational,
    /// All `x` attaining `value`, ascending.
    pub abscissas: Vec<u64>,
}

/// `max_x |E(x, t)|` and the columns that attain it.
pub fn max_error_for_slope(p: u32, t: u64) -> Result<SlopeMax> {
    check_word(p, t, "slope t")?;
    let mut best = 0i64;
    let mut abscissas = Vec::new();
    for x in 0..1u64 << p {
        let v = error_numerator(p, t, x).abs();
        if v > best {
            best = v;
            abscissas.clear();
        }
        if v == best {
            abscissas.push(x);
        }
    }
    Ok(SlopeMax { value: ExactRational::new(best, denominator(p)), abscissas })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalMax {
    pub value: ExactRational,
    /// All `(x, t)` attaining `value`, lexicographically sorted.
    pub pairs: Vec<(u64, u64)>,
}

impl GlobalMax {
    pub fn contains(&self, x: u64, t: u64) -> bool {
        self.pairs.binary_search(&(x, t)).is_ok()
    }
}

/// Exhaustive `max |E(x, t)|` over all `4^p` pairs.
pub fn global_max_error(p: u32) -> Result<GlobalMax> {
    check_cap(p)?;
    let (best, mut pairs) = (0..1u64 << p)
        .into_par_iter()
        .fold(
            || (0i64, Vec::new(), Vec::new()),
            |(mut best, mut pairs, mut buf), x| {
                numerators_over_slopes(p, x, &mut buf);
                for (t, v) in buf.iter().enumerate() {
                    let v = v.abs();
                    if v > best {
                        best = v;
                        pairs.clear();
                    }
                    if v == best {
                        pairs.push((x, t as u64));
                    }
                }
                (best, pairs, buf)
            },
        )
        .map(|(b, pairs, _)| (b, pairs))
        .reduce(|| (0, Vec::new()), merge_max);
    pairs.sort_unstable();
    Ok(GlobalMax { value: ExactRational::new(best, denominator(p)), pairs })
}

fn merge_max<T>(a: (i64, Vec<T>), b: (i64, Vec<T>)) -> (i64, Vec<T>) {
    use std::cmp::Ordering::*;
    match a.0.cmp(&b.0) {
        Greater => a,
        Less => b,
        Equal => {
            let (v, mut l) = a;
            l.extend(b.1);
            (v, l)
        }
    }
}

/// Per-slope maximum error (the data behind the per-slope peak plots).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorProfile {
    pub p: u32,
    pub per_slope_max: Vec<ExactRational>,
    /// Attaining columns per slope, present only when requested.
    pub argmax: Option<Vec<Vec<u64>>>,
}

impl ErrorProfile {
    pub fn global_max(&self) -> ExactRational {
        self.per_slope_max
            .iter()
            .copied()
            .max()
            .unwrap_or_else(|| ExactRational::zero(denominator(self.p)))
    }
}

pub fn error_profile(p: u32, with_argmax: bool) -> Result<ErrorProfile> {
    check_cap(p)?;
    let n = 1usize << p;
    let maxima = (0..n as u64)
        .into_par_iter()
        .fold(
            || (vec![0i64; n], Vec::new()),
            |(mut acc, mut buf), x| {
                numerators_over_slopes(p, x, &mut buf);
                for (m, v) in acc.iter_mut().zip(&buf) {
                    *m = (*m).max(v.abs());
                }
                (acc, buf)
            },
        )
        .map(|(acc, _)| acc)
        .reduce(
            || vec![0i64; n],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x = (*x).max(y));
                a
            },
        );

    let argmax = with_argmax.then(|| {
        let mut sets = vec![Vec::new(); n];
        let mut buf = Vec::new();
        for x in 0..n as u64 {
            numerators_over_slopes(p, x, &mut buf);
            for (t, v) in buf.iter().enumerate() {
                if v.abs() == maxima[t] {
                    sets[t].push(x);
                }
            }
        }
        sets
    });

    let den = denominator(p);
    Ok(ErrorProfile {
        p,
        per_slope_max: maxima.into_iter().map(|v| ExactRational::new(v, den)).collect(),
        argmax,
    })
}

/// `E(2^{p-1} - 1 - y, t) + E(2^{p-1} + y, t)`; identically zero.
pub fn symmetry_residual(p: u32, t: u64, y: u64) -> Result<ExactRational> {
    check_word(p, t, "slope t")?;
    let half = 1u64 << (p - 1);
    if y >= half {
        return Err(Error::Parameter(format!("offset y = {y} outside [0, {}]", half - 1)));
    }
    Ok(error_at(p, t, half - 1 - y)? + error_at(p, t, half + y)?)
}

/// `E(x, t) - E(t, x)`; identically zero.
pub fn interchange_residual(p: u32, t: u64, x: u64) -> Result<ExactRational> {
    Ok(error_at(p, t, x)? - error_at(p, x, t)?)
}

/// Exact sum of `E(x, t)` over all pairs.
pub fn total_error_sum(p: u32) -> Result<ExactRational> {
    check_cap(p)?;
    let sum: i64 = (0..1u64 << p)
        .into_par_iter()
        .map_init(Vec::new, |buf, x| {
            numerators_over_slopes(p, x, buf);
            buf.iter().sum::<i64>()
        })
        .sum();
    Ok(ExactRational::new(sum, denominator(p)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorHistogram {
    pub p: u32,
    /// `bins + 1` uniform edges from `-p/2` to `p/2`.
    pub edges: Vec<ExactRational>,
    pub counts: Vec<u64>,
    pub total: u64,
}

impl ErrorHistogram {
    pub fn is_mirror_symmetric(&self) -> bool {
        self.counts.iter().eq(self.counts.iter().rev())
    }
}

/// Bin of `num / M` among `bins` uniform bins on `[-p/2, p/2]`.
///
/// Non-negative values use half-open `[lo, hi)` bins and negative values use
/// `(lo, hi]`, so `v` and `-v` always land in mirrored bins.
fn bin_index(num: i64, m: u64, p: u32, bins: usize) -> usize {
    let u = num.unsigned_abs() as u128;
    let (b, pm) = (bins as u128, p as u128 * m as u128);
    let k = ((2 * b * u + b * pm) / (2 * pm)).min(b - 1) as usize;
    if num < 0 {
        bins - 1 - k
    } else {
        k
    }
}

pub fn error_histogram(p: u32, bins: usize) -> Result<ErrorHistogram> {
    check_cap(p)?;
    if bins < 2 {
        return Err(Error::Parameter(format!("bin count {bins} must be at least 2")));
    }
    let m = denominator(p);
    let counts = (0..1u64 << p)
        .into_par_iter()
        .fold(
            || (vec![0u64; bins], Vec::new()),
            |(mut counts, mut buf), x| {
                numerators_over_slopes(p, x, &mut buf);
                for &v in &buf {
                    counts[bin_index(v, m, p, bins)] += 1;
                }
                (counts, buf)
            },
        )
        .map(|(c, _)| c)
        .reduce(
            || vec![0u64; bins],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let edges = (0..=bins as i64)
        .map(|k| ExactRational::new(p as i64 * (2 * k - bins as i64), 2 * bins as u64))
        .collect();
    Ok(ErrorHistogram { p, edges, counts, total: 1u64 << (2 * p) })
}

//! Dyadic line patterns for the mostly-horizontal, right-leaning quadrant.
//!
//! A pattern of slope `t` on a `2^p`-wide image is the sequence of row
//! indices `y(x)` for `x = 0 .. 2^p - 1`. It starts at `y(0) = s`, ends at
//! `y(2^p - 1) = s + t`, and rises by 0 or 1 per column. Three independent
//! constructions are provided and are required to agree:
//!
//! - [`pattern_recursive`]: halve the span, give both halves slope
//!   `floor(t/2)`, lift the right half by `ceil(t/2)`.
//! - [`pattern_sum`]: add up the basis lines `round(2^r x / (2^p - 1))`
//!   for the set bits `r` of `t`.
//! - [`cumulative_build`]: count the shift pixels to the left of each
//!   column, with shift pixels taken from [`shift_set`] per set bit.

use crate::{check_exponent, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PatternParams {
    p: u32,
    t: u64,
    s: u64,
}

impl PatternParams {
    pub fn new(p: u32, t: u64, s: u64) -> Result<Self> {
        check_exponent(p)?;
        if t >> p != 0 {
            return Err(Error::Parameter(format!(
                "slope t = {t} outside [0, {}] for p = {p}",
                (1u64 << p) - 1
            )));
        }
        Ok(Self { p, t, s })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn slope(&self) -> u64 {
        self.t
    }

    pub fn intercept(&self) -> u64 {
        self.s
    }

    /// Image side `n = 2^p`.
    pub fn side(&self) -> usize {
        1usize << self.p
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicPattern {
    params: PatternParams,
    ordinates: Vec<u64>,
}

impl DyadicPattern {
    pub fn params(&self) -> PatternParams {
        self.params
    }

    pub fn ordinates(&self) -> &[u64] {
        &self.ordinates
    }

    pub fn y(&self, x: usize) -> u64 {
        self.ordinates[x]
    }

    /// Columns `x` where `y(x + 1) = y(x) + 1`.
    pub fn step_abscissas(&self) -> Vec<u64> {
        self.ordinates
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[1] != w[0])
            .map(|(x, _)| x as u64)
            .collect()
    }

    /// Checks the structural invariants: length `2^p`, unit steps,
    /// endpoints `s` and `s + t`.
    pub fn is_well_formed(&self) -> bool {
        let PatternParams { p, t, s } = self.params;
        self.ordinates.len() == 1usize << p
            && self.ordinates.first() == Some(&s)
            && self.ordinates.last() == Some(&(s + t))
            && self.ordinates.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1)
    }
}

/// Abscissas of the shift pixels of a basis line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftSet {
    p: u32,
    abscissas: Vec<u64>,
}

impl ShiftSet {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn abscissas(&self) -> &[u64] {
        &self.abscissas
    }

    pub fn len(&self) -> usize {
        self.abscissas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.abscissas.is_empty()
    }
}

/// Rounding rule used for basis lines. `Perturbed` exists only so the
/// verification suite can prove it detects a broken rounding step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Rounding {
    HalfUp,
    Perturbed,
}

/// `floor(a / b + 1/2)` for non-negative `a` and positive `b`.
#[inline]
pub(crate) fn round_half_up(a: u64, b: u64) -> u64 {
    (2 * a + b) / (2 * b)
}

#[inline]
fn round_with(a: u64, b: u64, rounding: Rounding) -> u64 {
    match rounding {
        Rounding::HalfUp => round_half_up(a, b),
        Rounding::Perturbed => (2 * a + b + 1) / (2 * b),
    }
}

fn check_bit(p: u32, r: u32) -> Result<()> {
    check_exponent(p)?;
    if r >= p {
        return Err(Error::Parameter(format!("bit index r = {r} outside [0, {}]", p - 1)));
    }
    Ok(())
}

pub(crate) fn basis_ordinates(p: u32, r: u32, rounding: Rounding) -> Vec<u64> {
    let m = (1u64 << p) - 1;
    (0..1u64 << p).map(|x| round_with(x << r, m, rounding)).collect()
}

/// Basis line of slope `2^r`: `y(x) = round(2^r x / (2^p - 1))`.
pub fn basis_line(p: u32, r: u32) -> Result<DyadicPattern> {
    check_bit(p, r)?;
    Ok(DyadicPattern {
        params: PatternParams::new(p, 1 << r, 0)?,
        ordinates: basis_ordinates(p, r, Rounding::HalfUp),
    })
}

fn fill_recursive(out: &mut [u64], slope: u64, offset: u64) {
    if out.len() == 1 {
        out[0] = offset;
        return;
    }
    let half = slope / 2;
    let (left, right) = out.split_at_mut(out.len() / 2);
    fill_recursive(left, half, offset);
    fill_recursive(right, half, offset + slope - half);
}

/// Divide-and-conquer construction by repeated halving of the span.
pub fn pattern_recursive(params: PatternParams) -> DyadicPattern {
    let mut ordinates = vec![0; params.side()];
    fill_recursive(&mut ordinates, params.t, params.s);
    DyadicPattern { params, ordinates }
}

pub(crate) fn pattern_sum_with(params: PatternParams, rounding: Rounding) -> DyadicPattern {
    let mut ordinates = vec![params.s; params.side()];
    for r in (0..params.p).filter(|r| params.t >> r & 1 == 1) {
        for (y, b) in ordinates.iter_mut().zip(basis_ordinates(params.p, r, rounding)) {
            *y += b;
        }
    }
    DyadicPattern { params, ordinates }
}

/// Sum of the basis lines selected by the binary digits of `t`.
pub fn pattern_sum(params: PatternParams) -> DyadicPattern {
    pattern_sum_with(params, Rounding::HalfUp)
}

/// Shift pixels of the basis line `2^r`:
/// `floor((m + 1/2)(2^p - 1) / 2^r)` for `m = 0 .. 2^r - 1`.
pub fn shift_set(p: u32, r: u32) -> Result<ShiftSet> {
    check_bit(p, r)?;
    let m_total = (1u64 << p) - 1;
    let abscissas = (0..1u64 << r)
        .map(|m| ((2 * m + 1) * m_total) >> (r + 1))
        .collect();
    Ok(ShiftSet { p, abscissas })
}

/// Multiset union of the shift sets of every set bit of `t`, sorted.
pub fn shift_multiset(params: PatternParams) -> Vec<u64> {
    let mut all: Vec<u64> = (0..params.p)
        .filter(|r| params.t >> r & 1 == 1)
        .flat_map(|r| shift_set(params.p, r).expect("bit below p").abscissas)
        .collect();
    all.sort_unstable();
    all
}

/// Builds `y(x) = s + #{shift abscissas < x}` counting multiplicity.
pub fn cumulative_build(p: u32, shifts: &[u64], s: u64) -> Result<DyadicPattern> {
    check_exponent(p)?;
    let n = 1usize << p;
    let mut steps = vec![0u64; n];
    for &a in shifts {
        if a > n as u64 - 2 {
            return Err(Error::Parameter(format!(
                "shift abscissa {a} outside [0, {}]",
                n as i64 - 2
            )));
        }
        steps[a as usize + 1] += 1;
    }
    let t = shifts.len() as u64;
    let params = PatternParams::new(p, t, s)?;
    let mut y = s;
    let ordinates = steps
        .into_iter()
        .map(|d| {
            y += d;
            y
        })
        .collect();
    Ok(DyadicPattern { params, ordinates })
}

/// Ordinate-wise equality of two patterns on the same image size.
pub fn patterns_equal(a: &DyadicPattern, b: &DyadicPattern) -> Result<bool> {
    if a.params.p != b.params.p {
        return Err(Error::Parameter(format!(
            "patterns for different sizes: p = {} vs p = {}",
            a.params.p, b.params.p
        )));
    }
    Ok(a.ordinates == b.ordinates)
}

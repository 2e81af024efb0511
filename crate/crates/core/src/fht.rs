//! Hough accumulator over dyadic patterns.
//!
//! Coordinates: row `y` grows downward, column `x` grows rightward, origin at
//! the top-left pixel. In the canonical quadrant a line with slope `t` and
//! intercept `s` covers the pixels `(s + D(x, t), x)`, where `D` is the
//! dyadic pattern with zero intercept. The intercept is measured at `x = 0`
//! and ranges over `[-(n-1), n-1]`, which covers every pattern that touches
//! the image (negative intercepts enter through the top edge).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::pattern::{pattern_sum, PatternParams};
use crate::{check_exponent, Error, Result};

/// Square `2^p × 2^p` image, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageGrid {
    p: u32,
    pixels: Vec<u32>,
}

impl ImageGrid {
    pub fn new(p: u32, pixels: Vec<u32>) -> Result<Self> {
        check_exponent(p)?;
        if p > 15 {
            return Err(Error::Parameter(format!("image side 2^{p} too large")));
        }
        let n = 1usize << p;
        if pixels.len() != n * n {
            return Err(Error::Parameter(format!(
                "expected {} pixels for a {n}x{n} image, got {}",
                n * n,
                pixels.len()
            )));
        }
        Ok(Self { p, pixels })
    }

    /// Accepts any `width × height`; rejects non-square or non-power-of-two
    /// sizes.
    pub fn from_dimensions(width: usize, height: usize, pixels: Vec<u32>) -> Result<Self> {
        if width != height {
            return Err(Error::Parameter(format!("image is {width}x{height}, not square")));
        }
        if width < 2 || !width.is_power_of_two() {
            return Err(Error::Parameter(format!(
                "image side {width} is not a power of two >= 2"
            )));
        }
        Self::new(width.trailing_zeros(), pixels)
    }

    pub fn zeros(p: u32) -> Result<Self> {
        check_exponent(p)?;
        Self::new(p, vec![0; 1 << (2 * p)])
    }

    pub fn from_fn(p: u32, mut f: impl FnMut(usize, usize) -> u32) -> Result<Self> {
        check_exponent(p)?;
        let n = 1usize << p;
        let pixels = (0..n * n).map(|i| f(i / n, i % n)).collect();
        Self::new(p, pixels)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn side(&self) -> usize {
        1 << self.p
    }

    pub fn get(&self, y: usize, x: usize) -> u32 {
        self.pixels[y * self.side() + x]
    }

    pub fn pixels(&self) -> &[u32] {
        &self.pixels
    }

    pub fn mass(&self) -> u64 {
        self.pixels.iter().map(|&v| v as u64).sum()
    }

    /// Mirror left to right.
    pub fn flip_horizontal(&self) -> Self {
        let n = self.side();
        Self::from_fn(self.p, |y, x| self.get(y, n - 1 - x)).expect("same size")
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.p, |y, x| self.get(x, y)).expect("same size")
    }

    /// Pixel-wise sum; `None` on size mismatch or overflow.
    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        if self.p != other.p {
            return None;
        }
        let pixels = self
            .pixels
            .iter()
            .zip(&other.pixels)
            .map(|(a, b)| a.checked_add(*b))
            .collect::<Option<Vec<_>>>()?;
        Some(Self { p: self.p, pixels })
    }
}

/// Table of pattern sums indexed by slope `t ∈ [0, n-1]` and intercept
/// `s ∈ [-(n-1), n-1]`.
#[derive(Clone, PartialEq, Eq)]
pub struct HoughAccumulator {
    p: u32,
    cells: Vec<u64>,
}

impl fmt::Debug for HoughAccumulator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HoughAccumulator")
            .field("p", &self.p)
            .field("nonzero", &self.nonzero_count())
            .finish()
    }
}

impl HoughAccumulator {
    fn zeroed(p: u32) -> Self {
        let n = 1usize << p;
        Self { p, cells: vec![0; n * (2 * n - 1)] }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn side(&self) -> usize {
        1 << self.p
    }

    /// Number of intercepts per slope, `2n - 1`.
    pub fn shift_extent(&self) -> usize {
        2 * self.side() - 1
    }

    pub fn shift_range(&self) -> RangeInclusive<i64> {
        let m = self.side() as i64 - 1;
        -m..=m
    }

    /// Cell value; zero for any `(t, s)` outside the table.
    pub fn get(&self, t: usize, s: i64) -> u64 {
        let n = self.side();
        let idx = s + n as i64 - 1;
        if t >= n || idx < 0 || idx >= self.shift_extent() as i64 {
            return 0;
        }
        self.cells[t * self.shift_extent() + idx as usize]
    }

    fn set(&mut self, t: usize, s: i64, v: u64) {
        let ext = self.shift_extent();
        let idx = (s + self.side() as i64 - 1) as usize;
        self.cells[t * ext + idx] = v;
    }

    /// All intercept cells for slope `t`, from `s = -(n-1)` upward.
    pub fn slope_row(&self, t: usize) -> &[u64] {
        let ext = self.shift_extent();
        &self.cells[t * ext..(t + 1) * ext]
    }

    pub fn slope_mass(&self, t: usize) -> u64 {
        self.slope_row(t).iter().sum()
    }

    pub fn nonzero_count(&self) -> usize {
        self.cells.iter().filter(|&&v| v != 0).count()
    }

    /// `(t, s, value)` triples in slope-major, intercept-ascending order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, i64, u64)> + '_ {
        let ext = self.shift_extent();
        let off = self.side() as i64 - 1;
        self.cells
            .iter()
            .enumerate()
            .map(move |(i, &v)| (i / ext, (i % ext) as i64 - off, v))
    }
}

/// Work counters from one transform run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FhtStats {
    /// Cell additions performed by the merge stages.
    pub additions: u64,
    pub stages: u32,
}

/// Canonical-quadrant transform via `log2 n` butterfly merges.
pub fn fht_quadrant(image: &ImageGrid) -> HoughAccumulator {
    fht_quadrant_with_stats(image).0
}

/// Same as [`fht_quadrant`], also returning the work counters.
///
/// Stage `k` stores, for each span of `w = 2^k` adjacent columns, the sums
/// `H(span, t', s)` for `t' < w`. Two neighbouring spans merge as
/// `H(L ∪ R, t, s) = H(L, ⌊t/2⌋, s) + H(R, ⌊t/2⌋, s + ⌈t/2⌉)`, reading zero
/// past the top of the intercept axis.
pub fn fht_quadrant_with_stats(image: &ImageGrid) -> (HoughAccumulator, FhtStats) {
    let n = image.side();
    let ext = 2 * n - 1;
    let off = n - 1;

    // layout: [span][slope][intercept]; span count * slopes per span == n
    let mut cur = vec![0u64; n * ext];
    for (x, column) in cur.chunks_mut(ext).enumerate() {
        for y in 0..n {
            column[y + off] = image.get(y, x) as u64;
        }
    }
    let mut next = vec![0u64; n * ext];
    let mut stats = FhtStats::default();

    let mut w = 1;
    while w < n {
        let cur_ref = &cur;
        let block = 2 * w * ext;
        stats.additions += next
            .par_chunks_mut(block)
            .enumerate()
            .map(|(j, out)| {
                let left = &cur_ref[(2 * j) * w * ext..(2 * j + 1) * w * ext];
                let right = &cur_ref[(2 * j + 1) * w * ext..(2 * j + 2) * w * ext];
                merge_spans(left, right, out, w, ext)
            })
            .sum::<u64>();
        std::mem::swap(&mut cur, &mut next);
        stats.stages += 1;
        w *= 2;
    }

    (HoughAccumulator { p: image.p(), cells: cur }, stats)
}

/// Only the shifts a slope-`t` line can reach are computed: `s ∈ [-t, n-1]`,
/// i.e. indices `[n-1-t, ext)`; cells below that window are always zero.
fn merge_spans(left: &[u64], right: &[u64], out: &mut [u64], w: usize, ext: usize) -> u64 {
    let n = ext.div_ceil(2);
    let mut adds = 0;
    for t in 0..2 * w {
        let half = t / 2;
        let lift = t - half;
        let l = &left[half * ext..(half + 1) * ext];
        let r = &right[half * ext..(half + 1) * ext];
        let o = &mut out[t * ext..(t + 1) * ext];
        let lo = n - 1 - t;
        let overlap = ext - lift;
        o[..lo].fill(0);
        for i in lo..overlap {
            o[i] = l[i] + r[i + lift];
        }
        o[overlap..].copy_from_slice(&l[overlap..]);
        adds += (overlap - lo) as u64;
    }
    adds
}

/// Direct `O(n³)` summation along every pattern; the ground-truth oracle.
pub fn hough_brute(image: &ImageGrid) -> HoughAccumulator {
    let p = image.p();
    let n = image.side();
    let mut acc = HoughAccumulator::zeroed(p);
    for t in 0..n {
        let pattern = pattern_sum(PatternParams::new(p, t as u64, 0).expect("t < n"));
        for s in acc.shift_range() {
            let mut sum = 0u64;
            for x in 0..n {
                let y = s + pattern.y(x) as i64;
                if (0..n as i64).contains(&y) {
                    sum += image.get(y as usize, x) as u64;
                }
            }
            acc.set(t, s, sum);
        }
    }
    acc
}

/// One of the four slope families a full transform is split into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quadrant {
    /// Mostly horizontal, descending to the right: `dy/dx ∈ [0, 1]`.
    HRight,
    /// Mostly horizontal, ascending to the right: `dy/dx ∈ [-1, 0]`.
    HLeft,
    /// Mostly vertical, drifting right going down: `dx/dy ∈ [0, 1]`.
    VRight,
    /// Mostly vertical, drifting left going down: `dx/dy ∈ [-1, 0]`.
    VLeft,
}

impl Quadrant {
    pub const ALL: [Quadrant; 4] = [Quadrant::HRight, Quadrant::HLeft, Quadrant::VRight, Quadrant::VLeft];

    pub fn tag(self) -> &'static str {
        match self {
            Quadrant::HRight => "hr",
            Quadrant::HLeft => "hl",
            Quadrant::VRight => "vr",
            Quadrant::VLeft => "vl",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|q| q.tag() == tag)
    }

    /// Image that the canonical transform is applied to for this quadrant.
    pub fn prepare(self, image: &ImageGrid) -> ImageGrid {
        match self {
            Quadrant::HRight => image.clone(),
            Quadrant::HLeft => image.flip_horizontal(),
            Quadrant::VRight => image.transpose(),
            Quadrant::VLeft => image.flip_horizontal().transpose(),
        }
    }

    /// Maps a pixel `(row, col)` of the prepared image back to the original.
    pub fn pixel_to_global(self, n: usize, row: usize, col: usize) -> (usize, usize) {
        match self {
            Quadrant::HRight => (row, col),
            Quadrant::HLeft => (row, n - 1 - col),
            Quadrant::VRight => (col, row),
            Quadrant::VLeft => (col, n - 1 - row),
        }
    }

    /// End points `((x0, y0), (x1, y1))` in original image coordinates of
    /// the line with quadrant-local slope `t` and intercept `s`. Points may
    /// fall outside the image for lines that only clip it.
    pub fn line_endpoints(self, n: usize, t: i64, s: i64) -> ((i64, i64), (i64, i64)) {
        let last = n as i64 - 1;
        match self {
            Quadrant::HRight => ((0, s), (last, s + t)),
            Quadrant::HLeft => ((0, s + t), (last, s)),
            Quadrant::VRight => ((s, 0), (s + t, last)),
            Quadrant::VLeft => ((last - s, 0), (last - s - t, last)),
        }
    }
}

/// Runs the canonical transform on all four prepared images.
///
/// The diagonal slopes `t = n - 1` are shared between neighbouring
/// quadrants and are reported in both.
pub fn fht_full(image: &ImageGrid) -> BTreeMap<Quadrant, HoughAccumulator> {
    Quadrant::ALL
        .into_iter()
        .map(|q| (q, fht_quadrant(&q.prepare(image))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lcg::Lcg;

    fn delta(p: u32, y: usize, x: usize) -> ImageGrid {
        ImageGrid::from_fn(p, |r, c| (r == y && c == x) as u32).unwrap()
    }

    #[test]
    fn all_ones_slope_zero_rows() {
        let img = ImageGrid::from_fn(2, |_, _| 1).unwrap();
        let acc = fht_quadrant(&img);
        for s in 0..4 {
            assert_eq!(acc.get(0, s), 4);
        }
        for s in 4..8 {
            assert_eq!(acc.get(0, s), 0);
        }
        for s in -3..0 {
            assert_eq!(acc.get(0, s), 0);
        }
    }

    #[test]
    fn delta_at_origin() {
        let acc = fht_quadrant(&delta(2, 0, 0));
        for t in 0..4 {
            assert_eq!(acc.get(t, 0), 1);
        }
        assert_eq!(acc.nonzero_count(), 4);
    }

    #[test]
    fn brute_examples() {
        assert_eq!(hough_brute(&ImageGrid::zeros(2).unwrap()).nonzero_count(), 0);
        let ones = ImageGrid::from_fn(2, |_, _| 1).unwrap();
        let acc = hough_brute(&ones);
        assert_eq!(acc.get(3, 0), 4);
        assert_eq!(acc.get(3, 3), 1);
    }

    #[test]
    fn matches_brute_on_random_images() {
        let mut rng = Lcg::new(7);
        for p in 1..=5 {
            for _ in 0..5 {
                let img = rng.image(p, 255).unwrap();
                assert_eq!(fht_quadrant(&img), hough_brute(&img), "p={p}");
            }
        }
    }

    #[test]
    fn every_slope_conserves_mass() {
        let mut rng = Lcg::new(11);
        let img = rng.image(4, 1000).unwrap();
        let acc = fht_quadrant(&img);
        for t in 0..16 {
            assert_eq!(acc.slope_mass(t), img.mass());
        }
    }

    #[test]
    fn full_transform_examples() {
        let sym = ImageGrid::from_fn(3, |y, x| (y * x + y + x) as u32).unwrap();
        let full = fht_full(&sym);
        assert_eq!(full[&Quadrant::HRight], full[&Quadrant::VRight]);

        for acc in fht_full(&delta(2, 0, 0)).values() {
            assert_eq!(acc.nonzero_count(), 4);
            assert!(acc.iter().all(|(_, _, v)| v <= 1));
        }
        assert!(fht_full(&ImageGrid::zeros(3).unwrap())
            .values()
            .all(|a| a.nonzero_count() == 0));
    }

    #[test]
    fn endpoints_trace_the_prepared_pixels() {
        // the pattern's first and last pixels, mapped back, are the endpoints
        let n = 8;
        for q in Quadrant::ALL {
            for (t, s) in [(0i64, 2i64), (5, 1), (7, 0)] {
                let pat = pattern_sum(PatternParams::new(3, t as u64, 0).unwrap());
                let first = q.pixel_to_global(n, (s + pat.y(0) as i64) as usize, 0);
                let last = q.pixel_to_global(n, (s + pat.y(n - 1) as i64) as usize, n - 1);
                let (a, b) = q.line_endpoints(n, t, s);
                let mut want = [a, b];
                let mut got = [
                    (first.1 as i64, first.0 as i64),
                    (last.1 as i64, last.0 as i64),
                ];
                want.sort();
                got.sort();
                assert_eq!(got, want, "{q:?} t={t} s={s}");
            }
        }
    }

    #[test]
    fn rejects_bad_dimensions() {
        assert!(ImageGrid::from_dimensions(5, 5, vec![0; 25]).is_err());
        assert!(ImageGrid::from_dimensions(4, 8, vec![0; 32]).is_err());
        assert!(ImageGrid::from_dimensions(4, 4, vec![0; 15]).is_err());
        assert!(ImageGrid::from_dimensions(4, 4, vec![0; 16]).is_ok());
    }

    #[test]
    fn quadrant_tags_round_trip() {
        for q in Quadrant::ALL {
            assert_eq!(Quadrant::from_tag(q.tag()), Some(q));
        }
        assert_eq!(Quadrant::from_tag("xx"), None);
    }
}

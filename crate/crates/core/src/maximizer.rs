//! Cyclic-shift table of a bit word and the search for its maximizers.
//!
//! For a `p`-bit word `x`, the table holds every rotation of `x`. Row `r`
//! is `x · 2^r mod (2^p - 1)`, i.e. `x` rotated left by `r`. The functional
//! `S` sums the rows whose most significant bit is zero; `max_x S / (2^p-1)`
//! equals the peak pattern approximation error.
//!
//! Words are rings: all pattern matching below wraps around from the least
//! significant bit back to the most significant one.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;

use crate::{check_word, Error, Result};

/// Unpruned exhaustive search cap.
pub const UNPRUNED_CAP: u32 = 24;

#[inline]
fn mask(p: u32) -> u64 {
    (1u64 << p) - 1
}

#[inline]
pub fn rotate_left(p: u32, x: u64, r: u32) -> u64 {
    let r = r % p;
    if r == 0 {
        return x;
    }
    ((x << r) | (x >> (p - r))) & mask(p)
}

/// Bit-reversed, bit-inverted `width`-bit word.
pub fn reverse_complement(word: u64, width: u32) -> u64 {
    if width == 0 {
        return 0;
    }
    let rev = word.reverse_bits() >> (64 - width);
    !rev & mask(width)
}

/// The `p` rotations of one word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicTable {
    p: u32,
    rows: Vec<u64>,
}

impl CyclicTable {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// Rows as zero-padded binary strings, most significant bit first.
    pub fn row_strings(&self) -> Vec<String> {
        self.rows.iter().map(|&r| word_string(self.p, r)).collect()
    }
}

pub fn word_string(p: u32, x: u64) -> String {
    format!("{x:0width$b}", width = p as usize)
}

pub fn cyclic_table(p: u32, x: u64) -> Result<CyclicTable> {
    check_word(p, x, "word x")?;
    let rows = (0..p).map(|r| rotate_left(p, x, r)).collect();
    Ok(CyclicTable { p, rows })
}

/// Sum of the rows whose leading bit is 0.
pub fn table_sum(table: &CyclicTable) -> u64 {
    let top = 1u64 << (table.p - 1);
    table.rows.iter().filter(|&&r| r & top == 0).sum()
}

/// [`table_sum`] without materialising the table.
#[inline]
pub fn word_sum(p: u32, x: u64) -> u64 {
    let top = 1u64 << (p - 1);
    let mut row = x;
    let mut sum = 0;
    for _ in 0..p {
        if row & top == 0 {
            sum += row;
        }
        row = ((row << 1) | (row >> (p - 1))) & mask(p);
    }
    sum
}

/// Three equal neighbours somewhere on the ring, via two adjacent equal
/// pairs in the neighbour-equality mask.
fn has_bit_triple(p: u32, x: u64) -> bool {
    let equal = !(x ^ rotate_left(p, x, 1)) & mask(p);
    equal & rotate_left(p, equal, 1) != 0
}

/// Bit-pattern families that rule a word out as a maximizer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PruneRule {
    /// Three equal adjacent bits: `000` or `111`.
    BitTriple,
    /// `11 A 11 B 11` with `A`, `B` odd-length alternations `0…0`.
    PairedPairs,
    /// The factor `1100`.
    Factor1100,
    /// `11 A 11 B 00` with `A` an odd alternation `0…0` and `B` an even
    /// alternation `0…1`.
    PairsThenZeros,
    /// `11 B 00 C 11` with `B` an alternation `0…1` of length `m + k` and `C`
    /// an alternation `1…0` of length `m > 1`.
    ZerosBetweenPairs,
}

impl PruneRule {
    pub const ALL: [PruneRule; 5] = [
        PruneRule::BitTriple,
        PruneRule::PairedPairs,
        PruneRule::Factor1100,
        PruneRule::PairsThenZeros,
        PruneRule::ZerosBetweenPairs,
    ];

    pub fn label(self) -> &'static str {
        match self {
            PruneRule::BitTriple => "bit-triple",
            PruneRule::PairedPairs => "11-alt-11-alt-11",
            PruneRule::Factor1100 => "1100-factor",
            PruneRule::PairsThenZeros => "11-alt-11-alt-00",
            PruneRule::ZerosBetweenPairs => "11-alt-00-alt-11",
        }
    }
}

impl fmt::Display for PruneRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Alternating bit string of length `len` starting with `first`.
fn alternation(len: usize, first: u8) -> String {
    (0..len).map(|i| if (first as usize + i).is_multiple_of(2) { '0' } else { '1' }).collect()
}

/// A fixed bit string to be searched for as a factor of the ring word.
#[derive(Clone, Copy, Debug)]
struct Factor {
    rule: PruneRule,
    bits: u64,
    len: u32,
}

/// The prune templates expanded into concrete factors that fit in `p` bits.
#[derive(Clone, Debug)]
pub struct PruneMatcher {
    p: u32,
    factors: Vec<Factor>,
}

impl PruneMatcher {
    pub fn new(p: u32) -> Self {
        let cap = p as usize;
        let mut strings: Vec<(PruneRule, String)> = vec![
            (PruneRule::BitTriple, "000".into()),
            (PruneRule::BitTriple, "111".into()),
            (PruneRule::Factor1100, "1100".into()),
        ];
        for a in (1..=cap).step_by(2) {
            for b in (1..=cap).step_by(2) {
                let s = format!("11{}11{}11", alternation(a, 0), alternation(b, 0));
                strings.push((PruneRule::PairedPairs, s));
            }
        }
        for a in (1..=cap).step_by(2) {
            for b in (2..=cap).step_by(2) {
                let s = format!("11{}11{}00", alternation(a, 0), alternation(b, 0));
                strings.push((PruneRule::PairsThenZeros, s));
            }
        }
        for m in (2..=cap).step_by(2) {
            for k in (0..=cap).step_by(2) {
                let s = format!("11{}00{}11", alternation(m + k, 0), alternation(m, 1));
                strings.push((PruneRule::ZerosBetweenPairs, s));
            }
        }
        let factors = strings
            .into_iter()
            .filter(|(_, s)| s.len() <= cap)
            .map(|(rule, s)| Factor {
                rule,
                bits: u64::from_str_radix(&s, 2).expect("binary template"),
                len: s.len() as u32,
            })
            .collect();
        Self { p, factors }
    }

    fn matches(&self, x: u64, rule: PruneRule) -> bool {
        let p = self.p;
        self.factors.iter().filter(|f| f.rule == rule).any(|f| {
            (0..p).any(|r| rotate_left(p, x, r) >> (p - f.len) == f.bits)
        })
    }

    /// Every rule whose template occurs somewhere on the ring of `x`.
    pub fn violations(&self, x: u64) -> BTreeSet<PruneRule> {
        PruneRule::ALL.into_iter().filter(|&rule| self.matches(x, rule)).collect()
    }

    /// True if any rule matches; cheaper than [`Self::violations`].
    pub fn is_pruned(&self, x: u64) -> bool {
        let p = self.p;
        if p >= 3 && has_bit_triple(p, x) {
            return true;
        }
        (0..p).any(|r| {
            let row = rotate_left(p, x, r);
            self.factors
                .iter()
                .filter(|f| f.rule != PruneRule::BitTriple)
                .any(|f| row >> (p - f.len) == f.bits)
        })
    }
}

/// Labels of the prune templates matched by the ring word of `x`; empty
/// means `x` survives pruning.
pub fn prune_predicates(p: u32, x: u64) -> Result<BTreeSet<PruneRule>> {
    check_word(p, x, "word x")?;
    Ok(PruneMatcher::new(p).violations(x))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximizerReport {
    pub p: u32,
    pub max_sum: u64,
    pub argmax_xs: Vec<u64>,
    /// Candidates skipped by the prune templates (0 without pruning).
    pub pruned_count: u64,
}

impl MaximizerReport {
    /// `max_sum / (2^p - 1)` as `(numerator, denominator)`.
    pub fn peak_error(&self) -> crate::ExactRational {
        crate::ExactRational::new(self.max_sum as i64, mask(self.p))
    }
}

/// Exhaustive maximisation of [`word_sum`] over `x ∈ [0, 2^p - 1]`.
///
/// With pruning, each candidate is first tested against the templates and
/// skipped (and counted) if any matches.
pub fn search_maximizers(p: u32, use_pruning: bool) -> Result<MaximizerReport> {
    if p < 2 {
        return Err(Error::Parameter(format!("maximizer search needs p >= 2, got {p}")));
    }
    crate::check_exponent(p)?;
    if !use_pruning && p > UNPRUNED_CAP {
        return Err(Error::Capability(format!(
            "unpruned maximizer search capped at p = {UNPRUNED_CAP}"
        )));
    }
    let matcher = use_pruning.then(|| PruneMatcher::new(p));
    let (max_sum, mut argmax_xs, pruned_count) = (0..1u64 << p)
        .into_par_iter()
        .fold(
            || (0u64, Vec::new(), 0u64),
            |(mut best, mut xs, pruned), x| {
                if matcher.as_ref().is_some_and(|m| m.is_pruned(x)) {
                    return (best, xs, pruned + 1);
                }
                let s = word_sum(p, x);
                if s > best {
                    best = s;
                    xs.clear();
                }
                if s == best {
                    xs.push(x);
                }
                (best, xs, pruned)
            },
        )
        .reduce(
            || (0, Vec::new(), 0),
            |a, b| {
                let pruned = a.2 + b.2;
                let (best, xs) = match a.0.cmp(&b.0) {
                    std::cmp::Ordering::Greater => (a.0, a.1),
                    std::cmp::Ordering::Less => (b.0, b.1),
                    std::cmp::Ordering::Equal => {
                        let mut xs = a.1;
                        xs.extend(b.1);
                        (a.0, xs)
                    }
                };
                (best, xs, pruned)
            },
        );
    argmax_xs.sort_unstable();
    Ok(MaximizerReport { p, max_sum, argmax_xs, pruned_count })
}

/// Residuals of the replacement and permutation identities.
///
/// With `α` the low `p - 1` bits of `x`:
/// `[S(0α) - S(1α)] - [α - rc(α)]`, where `rc` is reverse-complement.
/// With `β` the low `p - 2` bits of `x`:
/// `[S(01β) - S(10β)] - [(2^{p-2} - 1) - β - rc(β)]`.
/// Both are identically zero.
pub fn lemma_residuals(p: u32, x: u64) -> Result<(i64, i64)> {
    check_word(p, x, "word x")?;
    if p < 3 {
        return Err(Error::Parameter(format!(
            "lemma residuals need a leading pair plus a non-empty tail (p >= 3), got p = {p}"
        )));
    }
    let alpha = x & mask(p - 1);
    let lead = 1u64 << (p - 1);
    let first = (word_sum(p, alpha) as i64 - word_sum(p, lead | alpha) as i64)
        - (alpha as i64 - reverse_complement(alpha, p - 1) as i64);

    let beta = x & mask(p - 2);
    let t01 = (1u64 << (p - 2)) | beta;
    let t10 = (1u64 << (p - 1)) | beta;
    let second = (word_sum(p, t01) as i64 - word_sum(p, t10) as i64)
        - (mask(p - 2) as i64 - beta as i64 - reverse_complement(beta, p - 2) as i64);
    Ok((first, second))
}

/// True when the ring of `x` alternates except for exactly one pair of
/// equal neighbours.
pub fn has_single_equal_pair(p: u32, x: u64) -> bool {
    let equal_pairs = (0..p)
        .filter(|&i| (x >> i & 1) == (x >> ((i + 1) % p) & 1))
        .count();
    equal_pairs == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(p: u32, x: u64) -> Vec<String> {
        let mut rows = cyclic_table(p, x).unwrap().row_strings();
        rows.sort();
        rows
    }

    #[test]
    fn table_examples() {
        assert_eq!(table(2, 1), vec!["01", "10"]);
        assert_eq!(table(3, 3), vec!["011", "101", "110"]);
        assert_eq!(table(3, 0), vec!["000", "000", "000"]);
        assert_eq!(table(3, 7), vec!["111", "111", "111"]);
        assert!(cyclic_table(3, 8).is_err());
    }

    #[test]
    fn table_sum_examples() {
        assert_eq!(table_sum(&cyclic_table(2, 1).unwrap()), 1);
        assert_eq!(table_sum(&cyclic_table(3, 5).unwrap()), 3);
        assert_eq!(table_sum(&cyclic_table(3, 7).unwrap()), 0);
    }

    #[test]
    fn rows_are_multiplication_mod_mersenne() {
        for p in 2..=8 {
            let m = mask(p);
            for x in 0..m {
                let t = cyclic_table(p, x).unwrap();
                for (r, &row) in t.rows().iter().enumerate() {
                    assert_eq!(row, (x << r) % m);
                }
                assert_eq!(word_sum(p, x), table_sum(&t));
            }
        }
    }

    #[test]
    fn search_examples() {
        let r2 = search_maximizers(2, false).unwrap();
        assert_eq!((r2.max_sum, r2.argmax_xs.clone()), (1, vec![1, 2]));
        let r4 = search_maximizers(4, false).unwrap();
        assert_eq!((r4.max_sum, r4.argmax_xs.clone()), (10, vec![5, 10]));
        assert_eq!(r4.peak_error(), crate::ExactRational::new(4, 6));
        let r3 = search_maximizers(3, false).unwrap();
        assert_eq!((r3.max_sum, r3.argmax_xs.clone()), (3, vec![1, 2, 3, 4, 5, 6]));
        assert!(search_maximizers(1, false).is_err());
        assert!(matches!(search_maximizers(25, false), Err(Error::Capability(_))));
    }

    #[test]
    fn pruned_search_agrees() {
        for p in 2..=12 {
            let full = search_maximizers(p, false).unwrap();
            let pruned = search_maximizers(p, true).unwrap();
            assert_eq!(full.max_sum, pruned.max_sum, "p={p}");
            assert_eq!(full.argmax_xs, pruned.argmax_xs, "p={p}");
            assert_eq!(full.pruned_count, 0);
            assert!(pruned.pruned_count > 0 || p < 4);
        }
    }

    #[test]
    fn fast_prune_agrees_with_labels() {
        for p in 2..=12 {
            let m = PruneMatcher::new(p);
            for x in 0..1u64 << p {
                assert_eq!(m.is_pruned(x), !m.violations(x).is_empty(), "p={p} x={x}");
            }
        }
    }

    #[test]
    fn predicate_examples() {
        assert!(prune_predicates(4, 0b1110).unwrap().contains(&PruneRule::BitTriple));
        assert!(prune_predicates(4, 0b0101).unwrap().is_empty());
        assert!(prune_predicates(4, 0b1100).unwrap().contains(&PruneRule::Factor1100));
        // 1011 closes into a 111 run across the seam
        assert!(prune_predicates(4, 0b1011).unwrap().contains(&PruneRule::BitTriple));
        assert!(prune_predicates(4, 16).is_err());
    }

    #[test]
    fn template_instances_are_detected() {
        // 11 0 11 0 11 + padding
        let p = 10;
        let x = u64::from_str_radix("1101101101", 2).unwrap();
        assert!(prune_predicates(p, x).unwrap().contains(&PruneRule::PairedPairs));
        // 11 0 11 01 00 01
        let x = u64::from_str_radix("1101101000", 2).unwrap();
        assert!(prune_predicates(p, x).unwrap().contains(&PruneRule::PairsThenZeros));
        // 11 01 00 10 11, m = 2, k = 0
        let x = u64::from_str_radix("1101001011", 2).unwrap();
        assert!(prune_predicates(p, x).unwrap().contains(&PruneRule::ZerosBetweenPairs));
    }

    #[test]
    fn lemma_examples() {
        // p = 3, alpha = 01
        assert_eq!(lemma_residuals(3, 0b001).unwrap(), (0, 0));
        // p = 4, alpha = 010
        assert_eq!(lemma_residuals(4, 0b0010).unwrap(), (0, 0));
        assert!(lemma_residuals(2, 1).is_err());
        for p in 3..=10 {
            for x in 0..1u64 << p {
                assert_eq!(lemma_residuals(p, x).unwrap(), (0, 0), "p={p} x={x}");
            }
        }
    }

    #[test]
    fn reverse_complement_example() {
        assert_eq!(reverse_complement(0b010000, 6), 0b111101);
        assert_eq!(reverse_complement(0, 0), 0);
    }

    #[test]
    fn rotation_invariance() {
        for p in 2..=10 {
            for x in 0..1u64 << p {
                let s = word_sum(p, x);
                for r in 1..p {
                    assert_eq!(word_sum(p, rotate_left(p, x, r)), s);
                }
            }
        }
    }

    #[test]
    fn even_maximizers_are_the_alternating_words() {
        for p in (2..=14).step_by(2) {
            let rep = search_maximizers(p, false).unwrap();
            let lo = ((1u64 << p) + 1) / 3; // round(2^p / 3)
            let hi = (1u64 << (p + 1)) / 3; // floor(2^{p+1} / 3)
            assert_eq!(rep.argmax_xs, vec![lo, hi], "p={p}");
            assert_eq!(word_string(p, lo), "01".repeat(p as usize / 2));
            assert_eq!(rep.max_sum * 6, p as u64 * mask(p));
        }
    }

    #[test]
    fn odd_maximizers_have_one_equal_pair() {
        for p in (3..=15).step_by(2) {
            let rep = search_maximizers(p, false).unwrap();
            assert!(rep.argmax_xs.iter().all(|&x| has_single_equal_pair(p, x)), "p={p}");
            // closed form p/6 - (2^p + 1)/(18 (2^p - 1)), times 18 (2^p - 1)
            let m = mask(p);
            assert_eq!(18 * rep.max_sum, 3 * p as u64 * m - ((1 << p) + 1), "p={p}");
        }
    }

    #[test]
    fn odd_limit_approaches_from_below() {
        let gaps: Vec<f64> = (3..=21)
            .step_by(2)
            .map(|p| {
                let m = mask(p) as f64;
                let rep = search_maximizers(p, true).unwrap();
                (p as f64 / 6.0 - 1.0 / 18.0) - rep.max_sum as f64 / m
            })
            .collect();
        assert!(gaps.iter().all(|&g| g > 0.0));
        assert!(gaps.windows(2).all(|w| w[1] < w[0]));
    }
}

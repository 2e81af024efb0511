//! Spin-ring view of the cyclic-shift table functional.
//!
//! Bit `i` of a word becomes spin `ξ_i = 2ε_i - 1` on a ring of `p` sites.
//! Sites interact through `P_ij = 2^{-a} + 2^{-(p-a)}`, `a = |i - j|`.
//! The table functional
//!
//! ```text
//! F(x) = Σ_{i≠j} (1 - ε_i) ε_j 2^{-d(i,j)},   d(i,j) = (i - j) mod p
//! ```
//!
//! satisfies `F = ¼ (p (1 - 2^{1-p}) - Q)` with the quadratic form
//! `Q(ξ) = Σ_{i≠j} ξ_i ξ_j 2^{-d(i,j)}`, so maximising `F` over words is
//! minimising `Q` over spin rings. With this choice of `d`, `F` is the
//! zero-leading-row table sum scaled by `2^{1-p}`.

use rayon::prelude::*;

use crate::rational::ExactRational;
use crate::{check_word, Error, Result};

/// Largest ring length accepted by the exhaustive scans.
pub const SCAN_CAP: u32 = 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpinConfig {
    spins: Vec<i8>,
}

impl SpinConfig {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if spins.is_empty() || spins.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Parameter("spins must be a non-empty sequence of ±1".into()));
        }
        Ok(Self { spins })
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }

    pub fn spins(&self) -> &[i8] {
        &self.spins
    }

    /// Inverse of [`spins_from_word`].
    pub fn to_word(&self) -> u64 {
        self.spins
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == 1)
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    pub fn flipped(&self) -> Self {
        Self { spins: self.spins.iter().map(|s| -s).collect() }
    }

    pub fn rotated(&self, by: usize) -> Self {
        let mut spins = self.spins.clone();
        spins.rotate_left(by % self.len());
        Self { spins }
    }
}

pub fn spins_from_word(p: u32, x: u64) -> Result<SpinConfig> {
    check_word(p, x, "word x")?;
    Ok(SpinConfig { spins: (0..p).map(|i| 2 * (x >> i & 1) as i8 - 1).collect() })
}

/// `(a, p - a)` with `a = |i - j|`.
pub fn cyclic_distances(p: u32, i: u32, j: u32) -> Result<(u32, u32)> {
    if i >= p || j >= p {
        return Err(Error::Parameter(format!("site index outside [0, {}]", p.saturating_sub(1))));
    }
    if i == j {
        return Err(Error::Parameter(format!("distance of site {i} to itself is undefined")));
    }
    let a = i.abs_diff(j);
    Ok((a, p - a))
}

#[inline]
fn right_distance(p: usize, i: usize, j: usize) -> usize {
    (i + p - j) % p
}

/// `2^{-d}` scaled by `2^{p-1}`.
#[inline]
fn weight(p: usize, d: usize) -> i64 {
    1i64 << (p - 1 - d)
}

fn ring_den(p: usize) -> u64 {
    1u64 << (p - 1)
}

/// Pair potential table for a ring of `p` sites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairPotential {
    p: u32,
}

impl PairPotential {
    pub fn new(p: u32) -> Result<Self> {
        if !(2..=SCAN_CAP).contains(&p) {
            return Err(Error::Parameter(format!("ring length {p} outside [2, {SCAN_CAP}]")));
        }
        Ok(Self { p })
    }

    /// `P_ij` over the denominator `2^{p-1}`.
    pub fn value(&self, i: u32, j: u32) -> Result<ExactRational> {
        let (a, b) = cyclic_distances(self.p, i, j)?;
        let p = self.p as usize;
        Ok(ExactRational::new(weight(p, a as usize) + weight(p, b as usize), ring_den(p)))
    }
}

/// Energy with the antiferromagnetic sign convention
/// `-Σ_{i<j} ξ_i ξ_j P_ij`.
pub fn pair_energy(cfg: &SpinConfig) -> ExactRational {
    let p = cfg.len();
    if p < 2 {
        return ExactRational::from_int(0);
    }
    let s = &cfg.spins;
    let mut num = 0i64;
    for i in 0..p {
        for j in i + 1..p {
            let a = j - i;
            num -= (s[i] * s[j]) as i64 * (weight(p, a) + weight(p, p - a));
        }
    }
    ExactRational::new(num, ring_den(p))
}

/// `Q(ξ) = Σ_{i≠j} ξ_i ξ_j 2^{-d(i,j)}`.
pub fn quadratic_form(cfg: &SpinConfig) -> ExactRational {
    let p = cfg.len();
    if p < 2 {
        return ExactRational::from_int(0);
    }
    let s = &cfg.spins;
    let mut num = 0i64;
    for i in 0..p {
        for j in (0..p).filter(|&j| j != i) {
            num += (s[i] * s[j]) as i64 * weight(p, right_distance(p, i, j));
        }
    }
    ExactRational::new(num, ring_den(p))
}

fn functional_numerator(p: usize, x: u64) -> i64 {
    let bit = |i: usize| (x >> i & 1) as i64;
    let mut num = 0;
    for i in (0..p).filter(|&i| bit(i) == 0) {
        for j in (0..p).filter(|&j| j != i && bit(j) == 1) {
            num += weight(p, right_distance(p, i, j));
        }
    }
    num
}

/// `F(x) = Σ_{i≠j} (1 - ε_i) ε_j 2^{-d(i,j)}`.
pub fn table_functional(p: u32, x: u64) -> Result<ExactRational> {
    check_word(p, x, "word x")?;
    if p < 2 {
        return Ok(ExactRational::from_int(0));
    }
    Ok(ExactRational::new(functional_numerator(p as usize, x), ring_den(p as usize)))
}

/// `F(x) - ¼ (p (1 - 2^{1-p}) - Q(ξ(x)))`; identically zero.
pub fn affine_bridge_residual(p: u32, x: u64) -> Result<ExactRational> {
    let f = table_functional(p, x)?;
    let q = quadratic_form(&spins_from_word(p, x)?);
    let pl = p as i64;
    let constant = ExactRational::new(pl * ((1i64 << (p - 1)) - 1), 1u64 << (p - 1));
    Ok(f - (constant - q).div_int(4))
}

fn check_scan(p: u32) -> Result<()> {
    if !(2..=SCAN_CAP).contains(&p) {
        return Err(Error::Capability(format!("spin scans support 2 <= p <= {SCAN_CAP}, got {p}")));
    }
    Ok(())
}

fn extremal_words(p: u32, key: impl Fn(u64) -> i64 + Sync) -> Vec<u64> {
    let (_, mut xs) = (0..1u64 << p)
        .into_par_iter()
        .fold(
            || (i64::MIN, Vec::new()),
            |(mut best, mut xs), x| {
                let v = key(x);
                if v > best {
                    best = v;
                    xs.clear();
                }
                if v == best {
                    xs.push(x);
                }
                (best, xs)
            },
        )
        .reduce(
            || (i64::MIN, Vec::new()),
            |a, b| match a.0.cmp(&b.0) {
                std::cmp::Ordering::Greater => a,
                std::cmp::Ordering::Less => b,
                std::cmp::Ordering::Equal => {
                    let mut xs = a.1;
                    xs.extend(b.1);
                    (a.0, xs)
                }
            },
        );
    xs.sort_unstable();
    xs
}

/// Words maximising `F`, ascending.
pub fn functional_maximizers(p: u32) -> Result<Vec<u64>> {
    check_scan(p)?;
    Ok(extremal_words(p, |x| functional_numerator(p as usize, x)))
}

/// Spin rings minimising `Q`, reported as words, ascending.
pub fn quadratic_ground_states(p: u32) -> Result<Vec<u64>> {
    check_scan(p)?;
    Ok(extremal_words(p, |x| {
        -quadratic_form(&spins_from_word(p, x).expect("x < 2^p")).num()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maximizer::word_sum;

    fn r(n: i64, d: u64) -> ExactRational {
        ExactRational::new(n, d)
    }

    #[test]
    fn spin_examples() {
        assert_eq!(spins_from_word(2, 0).unwrap().spins(), &[-1, -1]);
        assert_eq!(spins_from_word(3, 5).unwrap().spins(), &[1, -1, 1]);
        assert_eq!(spins_from_word(2, 3).unwrap().spins(), &[1, 1]);
        assert!(spins_from_word(2, 4).is_err());
        assert_eq!(spins_from_word(5, 19).unwrap().to_word(), 19);
    }

    #[test]
    fn distance_examples() {
        assert_eq!(cyclic_distances(4, 0, 1).unwrap(), (1, 3));
        assert_eq!(cyclic_distances(4, 0, 2).unwrap(), (2, 2));
        assert_eq!(cyclic_distances(5, 1, 4).unwrap(), (3, 2));
        assert!(cyclic_distances(4, 2, 2).is_err());
        assert!(cyclic_distances(4, 0, 4).is_err());
    }

    #[test]
    fn energy_examples() {
        let up = SpinConfig::new(vec![1, 1]).unwrap();
        assert_eq!(pair_energy(&up), r(-1, 1));
        assert_eq!(pair_energy(&SpinConfig::new(vec![1, -1]).unwrap()), r(1, 1));
        assert_eq!(pair_energy(&SpinConfig::new(vec![1, 1, 1]).unwrap()), r(-9, 4));
        assert!(SpinConfig::new(vec![1, 0]).is_err());
    }

    #[test]
    fn potential_is_symmetric_and_gap_only() {
        let pot = PairPotential::new(6).unwrap();
        for i in 0..6 {
            for j in (0..6).filter(|&j| j != i) {
                let v = pot.value(i, j).unwrap();
                assert_eq!(v, pot.value(j, i).unwrap());
                assert!(v > r(0, 1));
                assert_eq!(v, pot.value((i + 1) % 6, (j + 1) % 6).unwrap());
            }
        }
        // pair energy is -Σ_{i<j} ξ_i ξ_j P_ij
        let cfg = spins_from_word(6, 0b101101).unwrap();
        let mut direct = r(0, 1);
        for i in 0..6u32 {
            for j in i + 1..6 {
                let s = (cfg.spins()[i as usize] * cfg.spins()[j as usize]) as i64;
                direct = direct - pot.value(i, j).unwrap().scale(s);
            }
        }
        assert_eq!(direct, pair_energy(&cfg));
    }

    #[test]
    fn functional_examples() {
        assert_eq!(table_functional(2, 1).unwrap(), r(1, 2));
        assert!(table_functional(3, 0).unwrap().is_zero());
        assert!(table_functional(3, 7).unwrap().is_zero());
    }

    #[test]
    fn functional_is_scaled_table_sum() {
        for p in 2..=10u32 {
            for x in 0..1u64 << p {
                let f = table_functional(p, x).unwrap();
                assert_eq!(f.scale(1 << (p - 1)), r(word_sum(p, x) as i64, 1), "p={p} x={x}");
            }
        }
    }

    #[test]
    fn bridge_residual_examples() {
        for x in 0..4 {
            assert!(affine_bridge_residual(2, x).unwrap().is_zero());
        }
        assert!(affine_bridge_residual(3, 5).unwrap().is_zero());
        for p in 2..=10 {
            for x in 0..1u64 << p {
                assert!(affine_bridge_residual(p, x).unwrap().is_zero(), "p={p} x={x}");
            }
        }
    }

    #[test]
    fn quadratic_form_is_negated_pair_energy() {
        for p in 2..=8u32 {
            for x in 0..1u64 << p {
                let cfg = spins_from_word(p, x).unwrap();
                assert_eq!(quadratic_form(&cfg), -pair_energy(&cfg));
            }
        }
    }

    #[test]
    fn energy_symmetries() {
        for p in 2..=8u32 {
            for x in 0..1u64 << p {
                let cfg = spins_from_word(p, x).unwrap();
                let e = pair_energy(&cfg);
                assert_eq!(pair_energy(&cfg.flipped()), e);
                for k in 1..p as usize {
                    assert_eq!(pair_energy(&cfg.rotated(k)), e);
                }
                let mut rev = cfg.spins().to_vec();
                rev.reverse();
                assert_eq!(pair_energy(&SpinConfig::new(rev).unwrap()), e);
            }
        }
        // F is affine in Q, so it inherits the global flip symmetry
        for p in 2..=8u32 {
            let m = (1u64 << p) - 1;
            for x in 0..=m {
                assert_eq!(table_functional(p, x).unwrap(), table_functional(p, m ^ x).unwrap());
            }
        }
    }

    #[test]
    fn optimizers_correspond() {
        for p in 2..=10 {
            assert_eq!(functional_maximizers(p).unwrap(), quadratic_ground_states(p).unwrap());
        }
        assert!(functional_maximizers(1).is_err());
    }
}

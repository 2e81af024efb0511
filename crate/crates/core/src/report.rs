//! CSV rendering. Every table has a fixed header row, LF line endings, and
//! decimal approximations at 12 significant digits next to the exact
//! numerator/denominator columns.

use std::fmt::Write;

use crate::error_analysis::{ErrorHistogram, ErrorProfile, GlobalMax};
use crate::fht::HoughAccumulator;
use crate::ising::{pair_energy, quadratic_form, spins_from_word, table_functional};
use crate::maximizer::{word_string, word_sum, MaximizerReport};
use crate::pattern::DyadicPattern;
use crate::rational::ExactRational;
use crate::Result;

/// Decimal with 12 significant digits, e.g. `0.666666666667`.
pub fn approx12(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { "0".into() } else { v.to_string() };
    }
    let magnitude = v.abs().log10().floor() as i32 + 1;
    let decimals = (12 - magnitude).max(0) as usize;
    format!("{v:.decimals$}")
}

pub fn approx_rational(r: ExactRational) -> String {
    approx12(r.to_f64())
}

pub fn accumulator_csv(acc: &HoughAccumulator) -> String {
    let mut out = String::from("t,s,value\n");
    for (t, s, v) in acc.iter() {
        writeln!(out, "{t},{s},{v}").unwrap();
    }
    out
}

pub fn pattern_csv(pattern: &DyadicPattern) -> String {
    let mut out = String::from("x,y\n");
    for (x, y) in pattern.ordinates().iter().enumerate() {
        writeln!(out, "{x},{y}").unwrap();
    }
    out
}

pub fn profile_csv(profile: &ErrorProfile) -> String {
    let mut out = String::from("t,num,den,approx\n");
    for (t, v) in profile.per_slope_max.iter().enumerate() {
        writeln!(out, "{t},{},{},{}", v.num(), v.den(), approx_rational(*v)).unwrap();
    }
    out
}

pub const SUMMARY_HEADER: &str = "p,max_num,max_den,approx";

/// Single `p,max_num,max_den,approx` row, without header.
pub fn summary_row(p: u32, max: &GlobalMax) -> String {
    let v = max.value;
    format!("{p},{},{},{}", v.num(), v.den(), approx_rational(v))
}

pub fn histogram_csv(hist: &ErrorHistogram) -> String {
    let mut out = String::from("bin_lo,bin_hi,count\n");
    for (edge, count) in hist.edges.windows(2).zip(&hist.counts) {
        writeln!(out, "{},{},{count}", approx_rational(edge[0]), approx_rational(edge[1])).unwrap();
    }
    out
}

/// `x,binary_word,S` for the given words.
pub fn table_sums_csv(p: u32, xs: impl IntoIterator<Item = u64>) -> String {
    let mut out = String::from("x,binary_word,S\n");
    for x in xs {
        writeln!(out, "{x},{},{}", word_string(p, x), word_sum(p, x)).unwrap();
    }
    out
}

pub const MAXIMIZER_SUMMARY_HEADER: &str = "p,max_sum,den,approx,argmax_count,pruned_count";

pub fn maximizer_summary_row(rep: &MaximizerReport) -> String {
    let e = rep.peak_error();
    format!(
        "{},{},{},{},{},{}",
        rep.p,
        rep.max_sum,
        e.den(),
        approx_rational(e),
        rep.argmax_xs.len(),
        rep.pruned_count
    )
}

/// `x,F_num,F_den,Q_num,Q_den,energy` for every word of width `p`.
pub fn ising_csv(p: u32) -> Result<String> {
    let mut out = String::from("x,F_num,F_den,Q_num,Q_den,energy\n");
    for x in 0..1u64 << p {
        let f = table_functional(p, x)?;
        let cfg = spins_from_word(p, x)?;
        let q = quadratic_form(&cfg);
        let e = pair_energy(&cfg);
        writeln!(
            out,
            "{x},{},{},{},{},{}",
            f.num(),
            f.den(),
            q.num(),
            q.den(),
            approx_rational(e)
        )
        .unwrap();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error_analysis::global_max_error;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(approx12(2.0 / 3.0), "0.666666666667");
        assert_eq!(approx12(1.0 / 3.0), "0.333333333333");
        assert_eq!(approx12(3.0 / 7.0), "0.428571428571");
        assert_eq!(approx12(4.0 / 3.0), "1.33333333333");
        assert_eq!(approx12(-0.5), "-0.500000000000");
        assert_eq!(approx12(0.0), "0");
    }

    #[test]
    fn summary_rows() {
        assert_eq!(summary_row(4, &global_max_error(4).unwrap()), "4,10,15,0.666666666667");
        assert_eq!(summary_row(2, &global_max_error(2).unwrap()), "2,1,3,0.333333333333");
        assert_eq!(summary_row(3, &global_max_error(3).unwrap()), "3,3,7,0.428571428571");
    }

    #[test]
    fn ising_rows() {
        let csv = ising_csv(2).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "x,F_num,F_den,Q_num,Q_den,energy");
        assert_eq!(lines[2], "1,1,2,-2,2,1.00000000000");
        assert_eq!(lines.len(), 5);
    }
}

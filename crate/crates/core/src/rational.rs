use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// A rational number kept as an integer numerator over a positive
/// denominator.
///
/// The denominator is *not* reduced automatically: error values stay over
/// `2^p - 1` so that CSV output shows e.g. `10/15` rather than `2/3`.
/// Equality and ordering compare the represented values, so `10/15 == 2/3`.
#[derive(Clone, Copy, Debug)]
pub struct ExactRational {
    num: i64,
    den: u64,
}

impl ExactRational {
    /// Panics if `den` is zero.
    pub fn new(num: i64, den: u64) -> Self {
        assert!(den > 0, "zero denominator");
        Self { num, den }
    }

    pub fn from_int(v: i64) -> Self {
        Self { num: v, den: 1 }
    }

    pub fn zero(den: u64) -> Self {
        Self::new(0, den)
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn abs(self) -> Self {
        Self { num: self.num.abs(), den: self.den }
    }

    /// Lowest-terms form.
    pub fn reduced(self) -> Self {
        let g = gcd(self.num.unsigned_abs(), self.den);
        if g <= 1 {
            return self;
        }
        Self { num: self.num / g as i64, den: self.den / g }
    }

    /// Re-expresses the value over `den`, if that is exact.
    pub fn with_den(self, den: u64) -> Option<Self> {
        let scaled = self.num as i128 * den as i128;
        if scaled % self.den as i128 != 0 {
            return None;
        }
        i64::try_from(scaled / self.den as i128)
            .ok()
            .map(|num| Self { num, den })
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Scales by an integer factor without touching the denominator.
    pub fn scale(self, k: i64) -> Self {
        Self { num: self.num * k, den: self.den }
    }

    /// Divides by an integer factor by growing the denominator.
    pub fn div_int(self, k: u64) -> Self {
        Self::new(self.num, self.den * k)
    }

    fn cross(self, other: Self) -> (i128, i128) {
        (
            self.num as i128 * other.den as i128,
            other.num as i128 * self.den as i128,
        )
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl PartialEq for ExactRational {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.cross(*other);
        a == b
    }
}

impl Eq for ExactRational {}

impl PartialOrd for ExactRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactRational {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = self.cross(*other);
        a.cmp(&b)
    }
}

impl Add for ExactRational {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        if self.den == rhs.den {
            return Self { num: self.num + rhs.num, den: self.den };
        }
        let g = gcd(self.den, rhs.den);
        let den = self.den / g * rhs.den;
        let num = self.num * (den / self.den) as i64 + rhs.num * (den / rhs.den) as i64;
        Self { num, den }
    }
}

impl Neg for ExactRational {
    type Output = Self;

    fn neg(self) -> Self {
        Self { num: -self.num, den: self.den }
    }
}

impl Sub for ExactRational {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

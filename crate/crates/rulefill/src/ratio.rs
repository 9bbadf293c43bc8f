use std::cmp::Ordering;
use std::fmt;

/// An exact non-negative rational backed by integer counts.
///
/// The numerator and denominator are kept exactly as supplied, never reduced,
/// so a confidence of 2 supporting rows out of 4 prints as `2/4`. Equality and
/// ordering cross-multiply in 128-bit arithmetic, so `2/4 == 1/2` and no
/// floating point ever enters a comparison.
#[derive(Clone, Copy, Debug)]
pub struct Ratio {
    num: u64,
    den: u64,
}

impl Ratio {
    /// Builds `num/den`. Panics if `den` is zero.
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "ratio denominator must be positive");
        Ratio { num, den }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }
}

impl PartialEq for Ratio {
    fn eq(&self, other: &Self) -> bool {
        self.num as u128 * other.den as u128 == other.num as u128 * self.den as u128
    }
}

impl Eq for Ratio {}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

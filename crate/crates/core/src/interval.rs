use serde::{Deserialize, Serialize};
use std::fmt;

/// Closed interval `[low, high]` with endpoint arithmetic.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub low: f64,
    pub high: f64,
}

impl Interval {
    /// Panics if `low > high` or either bound is NaN.
    pub const fn new(low: f64, high: f64) -> Self {
        assert!(low <= high, "interval bounds out of order");
        Self { low, high }
    }

    pub fn try_new(low: f64, high: f64) -> Option<Self> {
        (low <= high).then_some(Self { low, high })
    }

    pub const fn point(v: f64) -> Self {
        Self { low: v, high: v }
    }

    pub fn span(&self) -> f64 {
        self.high - self.low
    }

    pub fn midpoint(&self) -> f64 {
        (self.low + self.high) / 2.0
    }

    pub fn contains(&self, v: f64) -> bool {
        self.low <= v && v <= self.high
    }

    /// True when `other` lies entirely inside `self`.
    pub fn encloses(&self, other: &Interval) -> bool {
        self.low <= other.low && other.high <= self.high
    }

    pub fn scale(&self, k: f64) -> Self {
        if k >= 0.0 {
            Self { low: self.low * k, high: self.high * k }
        } else {
            Self { low: self.high * k, high: self.low * k }
        }
    }

    pub fn add(&self, other: &Interval) -> Self {
        Self { low: self.low + other.low, high: self.high + other.high }
    }

    /// Product of two non-negative intervals.
    pub fn mul_nonneg(&self, other: &Interval) -> Self {
        debug_assert!(self.low >= 0.0 && other.low >= 0.0);
        Self { low: self.low * other.low, high: self.high * other.high }
    }

    /// Quotient of a non-negative interval by a strictly positive one.
    pub fn div_positive(&self, other: &Interval) -> Self {
        debug_assert!(self.low >= 0.0 && other.low > 0.0);
        Self { low: self.low / other.high, high: self.high / other.low }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = f.precision().unwrap_or(2);
        write!(f, "[{:.*}, {:.*}]", p, self.low, p, self.high)
    }
}

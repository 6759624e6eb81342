//! Nonnegative and signed magnitudes stored as natural logarithms.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul};

/// A nonnegative real stored as its natural logarithm.
///
/// Exact zero is represented by `ln = -inf`; it compares equal to itself and
/// annihilates products.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct LogValue(f64);

impl LogValue {
    pub const ZERO: LogValue = LogValue(f64::NEG_INFINITY);
    pub const ONE: LogValue = LogValue(0.0);

    pub fn from_ln(ln: f64) -> Self {
        debug_assert!(!ln.is_nan(), "NaN log-magnitude");
        LogValue(ln)
    }

    /// Panics in debug builds on negative input.
    pub fn from_value(x: f64) -> Self {
        debug_assert!(x >= 0.0, "LogValue::from_value({x})");
        LogValue(x.ln())
    }

    pub fn ln(self) -> f64 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0.exp()
    }

    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    pub fn powi(self, p: i32) -> Self {
        if self.is_zero() {
            return if p == 0 { Self::ONE } else { Self::ZERO };
        }
        LogValue(self.0 * f64::from(p))
    }

    /// Sum of a slice with a single max shift.
    pub fn sum(values: &[LogValue]) -> LogValue {
        let max = values.iter().map(|v| v.0).fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY || max.is_infinite() {
            return LogValue(max);
        }
        let acc: f64 = values.iter().map(|v| (v.0 - max).exp()).sum();
        LogValue(max + acc.ln())
    }
}

impl Add for LogValue {
    type Output = LogValue;

    fn add(self, rhs: LogValue) -> LogValue {
        let (hi, lo) = if self.0 >= rhs.0 { (self.0, rhs.0) } else { (rhs.0, self.0) };
        if lo == f64::NEG_INFINITY {
            return LogValue(hi);
        }
        LogValue(hi + (lo - hi).exp().ln_1p())
    }
}

impl Mul for LogValue {
    type Output = LogValue;

    fn mul(self, rhs: LogValue) -> LogValue {
        if self.is_zero() || rhs.is_zero() {
            return LogValue::ZERO;
        }
        LogValue(self.0 + rhs.0)
    }
}

impl Div for LogValue {
    type Output = LogValue;

    fn div(self, rhs: LogValue) -> LogValue {
        debug_assert!(!rhs.is_zero(), "division by exact zero");
        if self.is_zero() {
            return LogValue::ZERO;
        }
        LogValue(self.0 - rhs.0)
    }
}

impl std::iter::Sum for LogValue {
    fn sum<I: Iterator<Item = LogValue>>(iter: I) -> LogValue {
        let v: Vec<LogValue> = iter.collect();
        LogValue::sum(&v)
    }
}

/// A real number stored as sign and log-magnitude.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignedLog {
    sign: i8,
    ln_abs: f64,
}

impl SignedLog {
    pub const ZERO: SignedLog = SignedLog { sign: 0, ln_abs: f64::NEG_INFINITY };
    pub const ONE: SignedLog = SignedLog { sign: 1, ln_abs: 0.0 };

    pub fn new(sign: i8, ln_abs: f64) -> Self {
        if sign == 0 || ln_abs == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        SignedLog { sign: sign.signum(), ln_abs }
    }

    pub fn from_value(x: f64) -> Self {
        match x.partial_cmp(&0.0) {
            Some(Ordering::Greater) => SignedLog { sign: 1, ln_abs: x.ln() },
            Some(Ordering::Less) => SignedLog { sign: -1, ln_abs: (-x).ln() },
            _ => Self::ZERO,
        }
    }

    pub fn sign(self) -> i8 {
        self.sign
    }

    pub fn ln_abs(self) -> f64 {
        self.ln_abs
    }

    pub fn value(self) -> f64 {
        f64::from(self.sign) * self.ln_abs.exp()
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    /// Magnitude as a [`LogValue`], dropping the sign.
    pub fn magnitude(self) -> LogValue {
        if self.sign == 0 {
            LogValue::ZERO
        } else {
            LogValue::from_ln(self.ln_abs)
        }
    }
}

impl From<LogValue> for SignedLog {
    fn from(v: LogValue) -> Self {
        SignedLog::new(1, v.ln())
    }
}

impl Mul for SignedLog {
    type Output = SignedLog;

    fn mul(self, rhs: SignedLog) -> SignedLog {
        SignedLog::new(self.sign * rhs.sign, self.ln_abs + rhs.ln_abs)
    }
}

impl Add for SignedLog {
    type Output = SignedLog;

    fn add(self, rhs: SignedLog) -> SignedLog {
        if self.sign == 0 {
            return rhs;
        }
        if rhs.sign == 0 {
            return self;
        }
        let (big, small) = if self.ln_abs >= rhs.ln_abs { (self, rhs) } else { (rhs, self) };
        let ratio = (small.ln_abs - big.ln_abs).exp();
        if big.sign == small.sign {
            SignedLog::new(big.sign, big.ln_abs + ratio.ln_1p())
        } else if ratio == 1.0 {
            SignedLog::ZERO
        } else {
            SignedLog::new(big.sign, big.ln_abs + (-ratio).ln_1p())
        }
    }
}

//! Double-double arithmetic for alternating moment sums.
//!
//! Roughly 32 significant digits; enough to absorb the cancellation in the
//! signed Stirling-weighted moment formulas at small order.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }
}

impl From<usize> for Dd {
    fn from(x: usize) -> Self {
        // exact for x < 2^53
        Dd { hi: x as f64, lo: 0.0 }
    }
}

impl Add for Dd {
    type Output = Dd;

    fn add(self, rhs: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;

    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;

    fn sub(self, rhs: Dd) -> Dd {
        self + (-rhs)
    }
}

impl Mul for Dd {
    type Output = Dd;

    fn mul(self, rhs: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;

    fn div(self, rhs: Dd) -> Dd {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * Dd::from(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * Dd::from(q2);
        let q3 = r.hi / rhs.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::from(q3)
    }
}

/// Signless non-central Stirling numbers of the second kind up to order `r`,
/// `S(i+1,j) = S(i,j-1) + (j+shift) S(i,j)`. Valid for any real shift; the
/// `j = 0` column is `shift^i` and carries its sign.
pub(crate) fn stirling2_rows(r: usize, shift: Dd) -> Vec<Vec<Dd>> {
    let mut rows = vec![vec![Dd::ONE]];
    for i in 0..r {
        let prev = &rows[i];
        let mut next = vec![Dd::ZERO; i + 2];
        for (j, slot) in next.iter_mut().enumerate() {
            let mut v = Dd::ZERO;
            if j >= 1 {
                v = v + prev[j - 1];
            }
            if j <= i {
                v = v + (Dd::from(j) + shift) * prev[j];
            }
            *slot = v;
        }
        rows.push(next);
    }
    rows
}

/// `(x)_j` for `j = 0..=r`.
pub(crate) fn rising_prefix(x: Dd, r: usize) -> Vec<Dd> {
    let mut out = Vec::with_capacity(r + 1);
    let mut acc = Dd::ONE;
    out.push(acc);
    for i in 0..r {
        acc = acc * (x + Dd::from(i));
        out.push(acc);
    }
    out
}

/// `prod_{i<len} (1 + step / (base + i)) - 1`.
pub(crate) fn rising_ratio_minus_one(step: Dd, base: Dd, len: usize) -> Dd {
    let mut acc = Dd::ONE;
    for i in 0..len {
        acc = acc * (Dd::ONE + step / (base + Dd::from(i)));
    }
    acc - Dd::ONE
}

//! Generalized Stirling numbers as log-space triangular tables.
//!
//! Three families are built here, all nonnegative:
//!
//! * first kind `S(n,k; alpha)`, the connection coefficients
//!   `(x)_n = sum_k S(n,k) (x)_{k,alpha}`, from
//!   `S(n+1,k) = S(n,k-1) + (n - k alpha) S(n,k)`;
//! * the non-central first kind with shift `r`, from
//!   `S(m+1,k) = S(m,k-1) + (m + r - k alpha) S(m,k)`;
//! * the signless non-central second kind with shift `gamma`, the
//!   connection coefficients `x^n = sum_k S(n,k) (x-gamma)(x-gamma-1)...(x-gamma-k+1)`,
//!   from `S(n+1,k) = S(n,k-1) + (k + gamma) S(n,k)`.

use crate::error::{Error, Result};
use crate::factorials::ln_rising;
use crate::logspace::LogValue;

/// Which triangle a [`LogTable`] holds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StirlingFamily {
    FirstKind { alpha: f64 },
    NonCentralFirstKind { alpha: f64, shift: f64 },
    NonCentralSecondKind { gamma: f64 },
}

/// Dense triangular table `0 <= k <= n <= nmax` of log-magnitudes.
#[derive(Clone, Debug)]
pub struct LogTable {
    family: StirlingFamily,
    rows: Vec<Vec<LogValue>>,
}

impl LogTable {
    pub fn family(&self) -> StirlingFamily {
        self.family
    }

    pub fn nmax(&self) -> usize {
        self.rows.len() - 1
    }

    /// Entry `(n, k)`; zero for `k > n`. Panics if `n > nmax`.
    pub fn get(&self, n: usize, k: usize) -> LogValue {
        self.rows[n].get(k).copied().unwrap_or(LogValue::ZERO)
    }

    pub fn value(&self, n: usize, k: usize) -> f64 {
        self.get(n, k).value()
    }

    pub fn row(&self, n: usize) -> &[LogValue] {
        &self.rows[n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[LogValue]> {
        self.rows.iter().map(Vec::as_slice)
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("alpha must lie in (0,1), got {alpha}")))
    }
}

/// One step of `S(i+1,k) = S(i,k-1) + c(k) S(i,k)`.
fn advance<F: Fn(usize) -> f64>(prev: &[LogValue], coeff: F) -> Vec<LogValue> {
    let i = prev.len() - 1;
    let mut next = Vec::with_capacity(i + 2);
    for k in 0..=i + 1 {
        let carry = if k >= 1 { prev[k - 1] } else { LogValue::ZERO };
        let stay = if k <= i && !prev[k].is_zero() {
            prev[k] * LogValue::from_value(coeff(k))
        } else {
            LogValue::ZERO
        };
        next.push(carry + stay);
    }
    next
}

fn first_kind_step(prev: &[LogValue], alpha: f64, shift: f64) -> Vec<LogValue> {
    let i = (prev.len() - 1) as f64;
    advance(prev, |k| i + shift - k as f64 * alpha)
}

/// First-kind table `S(n,k; alpha)` for `n <= nmax`.
pub fn stirling1_table(nmax: usize, alpha: f64) -> Result<LogTable> {
    check_alpha(alpha)?;
    let mut rows = vec![vec![LogValue::ONE]];
    for _ in 0..nmax {
        let next = first_kind_step(rows.last().unwrap(), alpha, 0.0);
        rows.push(next);
    }
    Ok(LogTable { family: StirlingFamily::FirstKind { alpha }, rows })
}

/// Row `n` of the first-kind table, built with rolling memory.
pub fn stirling1_row(n: usize, alpha: f64) -> Result<Vec<LogValue>> {
    check_alpha(alpha)?;
    Ok(rolling_row(n, alpha, 0.0))
}

fn rolling_row(n: usize, alpha: f64, shift: f64) -> Vec<LogValue> {
    let mut row = vec![LogValue::ONE];
    for _ in 0..n {
        row = first_kind_step(&row, alpha, shift);
    }
    row
}

fn check_shift(shift: f64) -> Result<()> {
    if shift > 0.0 && shift.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("non-central shift must be positive, got {shift}")))
    }
}

/// Non-central first-kind table with shift `r > 0` (the pilot sample uses
/// `r = n - k alpha`).
pub fn noncentral_stirling1_table(mmax: usize, alpha: f64, shift: f64) -> Result<LogTable> {
    check_alpha(alpha)?;
    check_shift(shift)?;
    let mut rows = vec![vec![LogValue::ONE]];
    for _ in 0..mmax {
        let next = first_kind_step(rows.last().unwrap(), alpha, shift);
        rows.push(next);
    }
    Ok(LogTable { family: StirlingFamily::NonCentralFirstKind { alpha, shift }, rows })
}

/// Row `m` of the non-central first-kind table, `O(m^2)` time and `O(m)`
/// memory.
pub fn noncentral_stirling1_row(m: usize, alpha: f64, shift: f64) -> Result<Vec<LogValue>> {
    check_alpha(alpha)?;
    check_shift(shift)?;
    Ok(rolling_row(m, alpha, shift))
}

/// The same table as [`noncentral_stirling1_table`], built from the central
/// one by `S_r(m,k) = sum_{s=k}^{m} C(m,s) (r)_{m-s} S(s,k)`.
pub fn noncentral_stirling1_by_convolution(mmax: usize, alpha: f64, shift: f64) -> Result<LogTable> {
    check_shift(shift)?;
    let central = stirling1_table(mmax, alpha)?;
    let ln_fact: Vec<f64> = (0..=mmax).map(|i| ln_rising(1.0, i)).collect();
    let ln_shift: Vec<f64> = (0..=mmax).map(|i| ln_rising(shift, i)).collect();
    let rows = (0..=mmax)
        .map(|m| {
            (0..=m)
                .map(|k| {
                    let terms: Vec<LogValue> = (k..=m)
                        .map(|s| {
                            let ln_binom = ln_fact[m] - ln_fact[s] - ln_fact[m - s];
                            central.get(s, k) * LogValue::from_ln(ln_binom + ln_shift[m - s])
                        })
                        .collect();
                    LogValue::sum(&terms)
                })
                .collect()
        })
        .collect();
    Ok(LogTable { family: StirlingFamily::NonCentralFirstKind { alpha, shift }, rows })
}

/// Signless non-central second-kind table with shift `gamma > 0`.
pub fn noncentral_stirling2_table(rmax: usize, gamma: f64) -> Result<LogTable> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidParams(format!("gamma must be positive, got {gamma}")));
    }
    let mut rows = vec![vec![LogValue::ONE]];
    for _ in 0..rmax {
        let next = advance(rows.last().unwrap(), |k| k as f64 + gamma);
        rows.push(next);
    }
    Ok(LogTable { family: StirlingFamily::NonCentralSecondKind { gamma }, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-13 * b.abs().max(1.0)
    }

    #[test]
    fn base_cases() {
        let t = stirling1_table(1, 0.3).unwrap();
        assert_eq!(t.value(0, 0), 1.0);
        assert_eq!(t.value(1, 0), 0.0);
        assert!(close(t.value(1, 1), 1.0));
        assert!(t.get(0, 5).is_zero());
    }

    #[test]
    fn first_kind_order_three() {
        let t = stirling1_table(3, 0.5).unwrap();
        assert!(close(t.value(3, 2), 1.5));
        assert!(close(t.value(3, 1), 0.75));
        assert!(close(t.value(3, 3), 1.0));
        // (2)_3 = 24 = S31 * 2 + S32 * 2*2.5 + S33 * 2*2.5*3
        let lhs = t.value(3, 1) * 2.0 + t.value(3, 2) * 5.0 + t.value(3, 3) * 15.0;
        assert!(close(lhs, 24.0));
    }

    #[test]
    fn noncentral_small_entries() {
        let r = 1.5;
        let t = noncentral_stirling1_table(2, 0.5, r).unwrap();
        assert!(close(t.value(1, 0), r));
        assert!(close(t.value(1, 1), 1.0));
        assert!(close(t.value(2, 1), 3.5));
        assert!(close(t.value(2, 0), r * (r + 1.0)));
    }

    #[test]
    fn second_kind_small_entries() {
        let t = noncentral_stirling2_table(2, 1.0).unwrap();
        assert!(close(t.value(1, 0), 1.0));
        assert!(close(t.value(1, 1), 1.0));
        assert!(close(t.value(2, 1), 3.0));
        let t2 = noncentral_stirling2_table(2, 2.0).unwrap();
        assert!(close(t2.value(2, 0), 4.0));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(stirling1_table(3, 0.0).is_err());
        assert!(stirling1_table(3, 1.0).is_err());
        assert!(noncentral_stirling1_table(3, 0.5, 0.0).is_err());
        assert!(noncentral_stirling1_table(3, 1.2, 1.0).is_err());
        assert!(noncentral_stirling2_table(3, 0.0).is_err());
        assert!(noncentral_stirling2_table(3, -1.0).is_err());
    }

    #[test]
    fn rolling_row_matches_table() {
        let t = noncentral_stirling1_table(30, 0.35, 2.2).unwrap();
        let row = noncentral_stirling1_row(30, 0.35, 2.2).unwrap();
        assert_eq!(t.row(30), row.as_slice());
    }

    #[test]
    fn large_orders_stay_finite() {
        let row = stirling1_row(400, 0.5).unwrap();
        assert!(row.iter().skip(1).all(|v| v.ln().is_finite()));
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn first_kind_rows_sum_to_a_rising_factorial(alpha in 0.01f64..0.99, n in 1usize..80) {
            // The connection identity at x = alpha, where (alpha)_{k,alpha} = alpha^k k!.
            let row = stirling1_row(n, alpha).unwrap();
            let terms: Vec<LogValue> = row
                .iter()
                .enumerate()
                .map(|(k, v)| *v * LogValue::from_ln(k as f64 * alpha.ln() + crate::factorials::ln_rising(1.0, k)))
                .collect();
            let lhs = crate::factorials::ln_rising(alpha, n);
            prop_assert!((LogValue::sum(&terms).ln() - lhs).abs() <= 1e-11 * lhs.abs().max(1.0));
        }

        #[test]
        fn noncentral_row_has_unit_diagonal(alpha in 0.01f64..0.99, shift in 0.01f64..50.0, m in 0usize..60) {
            let row = noncentral_stirling1_row(m, alpha, shift).unwrap();
            prop_assert!(row[m].ln().abs() <= 1e-12);
            prop_assert!(row.iter().all(|v| v.ln().is_finite()));
        }
    }
}

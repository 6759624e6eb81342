//! Rising and generalized rising factorials in log space.

use crate::logspace::SignedLog;

pub use statrs::function::gamma::ln_gamma;

/// Above this length, products over positive bases switch to `ln_gamma`
/// differences.
const DIRECT_PRODUCT_MAX: usize = 1024;

/// Above this length, rising-factorial ratios switch to `ln_gamma`
/// differences.
const DIRECT_RATIO_MAX: usize = 50_000_000;

/// `x (x+1) ... (x+b-1)` with sign; `b = 0` gives one.
pub fn rising_factorial(x: f64, b: usize) -> SignedLog {
    gen_rising_factorial(x, b, 1.0)
}

/// `x (x+step) (x+2 step) ... (x+(s-1) step)` with sign; `s = 0` gives one.
pub fn gen_rising_factorial(x: f64, s: usize, step: f64) -> SignedLog {
    if x > 0.0 && step >= 0.0 {
        return SignedLog::new(1, ln_gen_rising(x, s, step));
    }
    let mut sign: i8 = 1;
    let mut ln_abs = 0.0;
    for i in 0..s {
        let f = x + i as f64 * step;
        if f == 0.0 {
            return SignedLog::ZERO;
        }
        if f < 0.0 {
            sign = -sign;
        }
        ln_abs += f.abs().ln();
    }
    SignedLog::new(sign, ln_abs)
}

/// `ln (x)_b` for `x > 0`.
pub fn ln_rising(x: f64, b: usize) -> f64 {
    debug_assert!(x > 0.0, "ln_rising needs a positive base, got {x}");
    if b <= DIRECT_PRODUCT_MAX {
        (0..b).map(|i| (x + i as f64).ln()).sum()
    } else {
        ln_gamma(x + b as f64) - ln_gamma(x)
    }
}

/// `ln (x)_{s, step}` for `x > 0`, `step >= 0`.
pub fn ln_gen_rising(x: f64, s: usize, step: f64) -> f64 {
    debug_assert!(x > 0.0 && step >= 0.0);
    if s == 0 {
        return 0.0;
    }
    if step == 0.0 {
        return s as f64 * x.ln();
    }
    if s <= DIRECT_PRODUCT_MAX {
        (0..s).map(|i| (x + i as f64 * step).ln()).sum()
    } else {
        s as f64 * step.ln() + ln_gamma(x / step + s as f64) - ln_gamma(x / step)
    }
}

/// Prefix table `ln (x)_{j, step}` for `j = 0..=len`.
pub fn ln_gen_rising_prefix(x: f64, len: usize, step: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(len + 1);
    let mut acc = 0.0;
    out.push(acc);
    for i in 0..len {
        acc += (x + i as f64 * step).ln();
        out.push(acc);
    }
    out
}

/// `ln [(a)_m / (b)_m]` for positive `a`, `b`, accurate when `a` and `b` are
/// close.
pub fn ln_rising_ratio(a: f64, b: f64, m: usize) -> f64 {
    debug_assert!(a > 0.0 && b > 0.0);
    if m <= DIRECT_RATIO_MAX {
        let d = a - b;
        (0..m).map(|i| (d / (b + i as f64)).ln_1p()).sum()
    } else {
        let mf = m as f64;
        (ln_gamma(a + mf) - ln_gamma(a)) - (ln_gamma(b + mf) - ln_gamma(b))
    }
}

/// `ln Gamma(x + y) - ln Gamma(x)`, the rising factorial with real length.
pub fn ln_rising_real(x: f64, y: f64) -> f64 {
    ln_gamma(x + y) - ln_gamma(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn empty_products_are_one() {
        assert_eq!(rising_factorial(-2.7, 0).value(), 1.0);
        assert_eq!(gen_rising_factorial(0.3, 0, 0.5).value(), 1.0);
    }

    #[test]
    fn small_rising_values() {
        assert!(close(rising_factorial(2.0, 3).value(), 24.0, 1e-14));
        assert!(close(rising_factorial(1.5, 3).value(), 13.125, 1e-14));
        assert!(close(gen_rising_factorial(1.0, 3, 0.5).value(), 3.0, 1e-14));
        assert!(close(gen_rising_factorial(2.0, 3, 1.0).value(), 24.0, 1e-14));
    }

    #[test]
    fn negative_bases_carry_sign() {
        // (-1.5)(-0.5)(0.5) = 0.375
        assert!(close(rising_factorial(-1.5, 3).value(), 0.375, 1e-14));
        // (-2.5)(-1.5)(-0.5) = -1.875
        assert!(close(rising_factorial(-2.5, 3).value(), -1.875, 1e-14));
        assert!(rising_factorial(-2.0, 4).is_zero());
    }

    #[test]
    fn generalized_matches_scaled_rising() {
        for &(x, s, a) in &[(0.7, 5usize, 0.3), (2.0, 9, 0.75), (1.25, 2000, 0.5)] {
            let lhs = ln_gen_rising(x, s, a);
            let rhs = s as f64 * a.ln() + ln_rising(x / a, s);
            assert!(close(lhs, rhs, 1e-12), "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn gamma_route_matches_product_route() {
        let direct: f64 = (0..5000).map(|i| (3.3 + i as f64).ln()).sum();
        assert!(close(ln_rising(3.3, 5000), direct, 1e-12));
    }

    #[test]
    fn ratio_is_accurate_for_close_bases() {
        let r = ln_rising_ratio(10.5 + 1e-9, 10.5, 100);
        let approx: f64 = (0..100).map(|i| 1e-9 / (10.5 + i as f64)).sum();
        assert!(close(r, approx, 1e-6));
    }
}

//! One-sided stable, Mittag-Leffler and polynomially tilted Mittag-Leffler
//! laws for `0 < alpha < 1`.
//!
//! The stable law is the positive one with Laplace transform
//! `exp(-lambda^alpha)`. Densities come from Zolotarev's integral
//!
//! ```text
//! f(x) = alpha / ((1-alpha) pi) * t / x * int_0^pi A(u) exp(-A(u) t) du,
//! t = x^(-alpha/(1-alpha)),
//! A(u) = (sin(alpha u) / sin u)^(1/(1-alpha)) * sin((1-alpha) u) / sin(alpha u),
//! ```
//!
//! and variates from Kanter's representation `S = (A(U)/E)^((1-alpha)/alpha)`.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{Error, Result};
use crate::factorials::ln_gamma;
use crate::quad::{integrate_with_breaks, Tolerance};

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("alpha must lie in (0,1), got {alpha}")))
    }
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be positive and finite, got {x}")))
    }
}

/// `ln A(u)` for `u` in `(0, pi)`.
pub fn ln_zolotarev_a(alpha: f64, u: f64) -> f64 {
    if u <= FRAC_PI_2 {
        ln_zolotarev_a0(alpha) + ln_a_excess(alpha, u)
    } else {
        ln_a_parts(alpha, u, (PI - u).sin())
    }
}

/// `ln A(pi - w)`, accurate when `w` is small.
fn ln_a_reflected(alpha: f64, w: f64) -> f64 {
    ln_a_parts(alpha, PI - w, w.sin())
}

fn ln_a_parts(alpha: f64, u: f64, sin_u: f64) -> f64 {
    let s_au = (alpha * u).sin().ln();
    ((s_au - sin_u.ln()) / (1.0 - alpha)) + ((1.0 - alpha) * u).sin().ln() - s_au
}

/// `ln(sin y / y)`, by its Taylor series for small `y`.
fn ln_sinc(y: f64) -> f64 {
    if y < 0.25 {
        let y2 = y * y;
        -y2 * (1.0 / 6.0
            + y2 * (1.0 / 180.0
                + y2 * (1.0 / 2835.0 + y2 * (1.0 / 37800.0 + y2 * (1.0 / 467775.0 + y2 * (691.0 / 3831077250.0))))))
    } else {
        (y.sin() / y).ln()
    }
}

/// `ln A(u) - ln A(0+)` for `u` in `(0, pi/2]`, without cancellation at small `u`.
fn ln_a_excess(alpha: f64, u: f64) -> f64 {
    let l_alpha = ln_sinc(alpha * u);
    (l_alpha - ln_sinc(u)) / (1.0 - alpha) + ln_sinc((1.0 - alpha) * u) - l_alpha
}

/// `ln A(0+) = alpha/(1-alpha) ln alpha + ln(1-alpha)`, the minimum of `A`.
pub fn ln_zolotarev_a0(alpha: f64) -> f64 {
    alpha / (1.0 - alpha) * alpha.ln() + (1.0 - alpha).ln()
}

/// Closed-form density at `alpha = 1/2`: `x^(-3/2) exp(-1/(4x)) / (2 sqrt(pi))`.
pub fn levy_density(x: f64) -> f64 {
    ln_levy_density(x).exp()
}

fn ln_levy_density(x: f64) -> f64 {
    -1.5 * x.ln() - 0.25 / x - (2.0 * PI.sqrt()).ln()
}

/// Stable density; the `alpha = 1/2` closed form, Zolotarev's integral
/// otherwise.
pub fn stable_density(alpha: f64, x: f64) -> Result<f64> {
    Ok(ln_stable_density(alpha, x)?.exp())
}

pub fn ln_stable_density(alpha: f64, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_positive("x", x)?;
    if alpha == 0.5 {
        return Ok(ln_levy_density(x));
    }
    ln_stable_density_zolotarev(alpha, x)
}

/// Stable density by quadrature of Zolotarev's integral, for every `alpha`.
pub fn stable_density_zolotarev(alpha: f64, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_positive("x", x)?;
    Ok(ln_stable_density_zolotarev(alpha, x)?.exp())
}

fn ln_stable_density_zolotarev(alpha: f64, x: f64) -> Result<f64> {
    let ln_t = -alpha / (1.0 - alpha) * x.ln();
    let ln_a0 = ln_zolotarev_a0(alpha);
    let a0t = (ln_a0 + ln_t).exp();
    // int A e^{-A t} = e^{-A0 t} int A e^{-(A - A0) t}
    let weight = |excess: f64| (ln_a0 + excess - a0t * excess.exp_m1().max(0.0)).exp();
    let tol = Tolerance::new(0.0, 1e-12);
    let fail = |e: Error| Error::Quadrature(format!("stable density at x = {x}: {e}"));
    // The peak sits near 0 for large t and near pi for small t; the upper
    // half is integrated in w = pi - u to keep sin u accurate there.
    let left_scale = 0.05 * (-0.5 * ln_t.max(0.0)).exp();
    let right_scale = 0.05 * ((1.0 - alpha) * ln_t.min(0.0)).exp();
    let left = integrate_with_breaks(|u| weight(ln_a_excess(alpha, u)), &half_breaks(left_scale), tol)
        .map_err(fail)?;
    let right = integrate_with_breaks(|w| weight(ln_a_reflected(alpha, w) - ln_a0), &half_breaks(right_scale), tol)
        .map_err(fail)?;
    Ok((alpha / ((1.0 - alpha) * PI)).ln() + ln_t - x.ln() - a0t + (left.value + right.value).ln())
}

/// Break points on `[0, pi/2]`, geometric from `first`.
fn half_breaks(first: f64) -> Vec<f64> {
    let mut pts = vec![0.0, FRAC_PI_2, PI / 8.0, PI / 4.0, 3.0 * PI / 8.0];
    let mut d = first;
    while d < FRAC_PI_2 {
        pts.push(d);
        d *= 2.0;
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Mittag-Leffler density `g(z) = z^(-1-1/alpha) f(z^(-1/alpha)) / alpha`.
pub fn ml_density(alpha: f64, z: f64) -> Result<f64> {
    Ok(ln_ml_density(alpha, z)?.exp())
}

pub fn ln_ml_density(alpha: f64, z: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_positive("z", z)?;
    let x = (-z.ln() / alpha).exp();
    Ok(-alpha.ln() - (1.0 + 1.0 / alpha) * z.ln() + ln_stable_density(alpha, x)?)
}

fn check_tilt(alpha: f64, tilt: f64) -> Result<()> {
    if tilt.is_finite() && tilt > -alpha {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("tilt must exceed -alpha = {}, got {tilt}", -alpha)))
    }
}

/// Polynomially tilted Mittag-Leffler density
/// `Gamma(tilt+1)/Gamma(tilt/alpha+1) z^(tilt/alpha) g(z)`.
pub fn tilted_ml_density(alpha: f64, tilt: f64, z: f64) -> Result<f64> {
    Ok(ln_tilted_ml_density(alpha, tilt, z)?.exp())
}

pub fn ln_tilted_ml_density(alpha: f64, tilt: f64, z: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_tilt(alpha, tilt)?;
    check_positive("z", z)?;
    Ok(ln_gamma(tilt + 1.0) - ln_gamma(tilt / alpha + 1.0) + tilt / alpha * z.ln() + ln_ml_density(alpha, z)?)
}

/// `E Y^r` for `Y` tilted Mittag-Leffler, real `r > -(tilt/alpha + 1)`.
pub fn tilted_ml_moment(alpha: f64, tilt: f64, r: f64) -> f64 {
    let g = tilt / alpha;
    (ln_gamma(tilt + 1.0) + ln_gamma(g + r + 1.0) - ln_gamma(g + 1.0) - ln_gamma(tilt + r * alpha + 1.0)).exp()
}

fn open_angle<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // (0, pi]
    PI * (1.0 - rng.random::<f64>())
}

fn standard_exponential<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    -(1.0 - rng.random::<f64>()).ln()
}

/// Positive stable variate by Kanter's representation.
pub fn sample_positive_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    let la = ln_zolotarev_a(alpha, open_angle(rng));
    let e = standard_exponential(rng);
    ((1.0 - alpha) / alpha * (la - e.ln())).exp()
}

/// Mittag-Leffler variate `S^(-alpha)`.
pub fn sample_mittag_leffler<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    let la = ln_zolotarev_a(alpha, open_angle(rng));
    let e = standard_exponential(rng);
    ((1.0 - alpha) * (e.ln() - la)).exp()
}

/// Lowest acceptance rate tolerated by [`TiltedMittagLefflerSampler`].
pub const DEFAULT_ACCEPTANCE_FLOOR: f64 = 1e-3;

/// Exact sampler for the tilted Mittag-Leffler law with tilt `>= 0`.
///
/// Tilting `S^(-alpha)` by `z^(tilt/alpha)` weights the stable variate by
/// `S^(-tilt)`. In Kanter's representation that turns the exponential into a
/// `Gamma(1 + c)` variate, `c = tilt (1-alpha)/alpha`, and gives the angle a
/// density proportional to `A(u)^(-c)`, which is sampled by rejection from the
/// uniform law with the bound `A(u) >= A(0+)`.
#[derive(Clone, Debug)]
pub struct TiltedMittagLefflerSampler {
    alpha: f64,
    tilt: f64,
    c: f64,
    ln_a0: f64,
    gamma: Gamma<f64>,
    acceptance: f64,
}

impl TiltedMittagLefflerSampler {
    pub fn new(alpha: f64, tilt: f64) -> Result<Self> {
        Self::with_floor(alpha, tilt, DEFAULT_ACCEPTANCE_FLOOR)
    }

    pub fn with_floor(alpha: f64, tilt: f64, floor: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !(tilt >= 0.0 && tilt.is_finite()) {
            return Err(Error::InvalidParams(format!("sampler needs a nonnegative tilt, got {tilt}")));
        }
        let c = tilt * (1.0 - alpha) / alpha;
        let ln_a0 = ln_zolotarev_a0(alpha);
        let acceptance = if c == 0.0 {
            1.0
        } else {
            let mut breaks = vec![0.0, PI];
            let mut d = 0.05 / c.sqrt();
            while d < PI {
                breaks.push(d);
                d *= 2.0;
            }
            breaks.sort_by(f64::total_cmp);
            integrate_with_breaks(
                |u| (c * (ln_a0 - ln_zolotarev_a(alpha, u))).exp(),
                &breaks,
                Tolerance::new(1e-14, 1e-8),
            )?
            .value
                / PI
        };
        if acceptance < floor {
            return Err(Error::SamplerStarvation { acceptance, tilt });
        }
        let gamma = Gamma::new(1.0 + c, 1.0)
            .map_err(|e| Error::InvalidParams(format!("gamma shape {}: {e}", 1.0 + c)))?;
        Ok(TiltedMittagLefflerSampler { alpha, tilt, c, ln_a0, gamma, acceptance })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn tilt(&self) -> f64 {
        self.tilt
    }

    /// Probability that one proposed angle is accepted.
    pub fn acceptance(&self) -> f64 {
        self.acceptance
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let la = loop {
            let la = ln_zolotarev_a(self.alpha, open_angle(rng));
            if self.c == 0.0 || standard_exponential(rng) >= self.c * (la - self.ln_a0) {
                break la;
            }
        };
        let g = self.gamma.sample(rng);
        ((1.0 - self.alpha) * (g.ln() - la)).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate_to_infinity, Tolerance};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn levy_value() {
        assert!((stable_density(0.5, 1.0).unwrap() - 0.21970).abs() < 1e-5);
        assert!((ml_density(0.5, 1.0).unwrap() - 0.43939).abs() < 1e-5);
    }

    #[test]
    fn zolotarev_matches_levy() {
        for &x in &[0.1, 1.0, 10.0] {
            let q = stable_density_zolotarev(0.5, x).unwrap();
            assert!(rel(q, levy_density(x)) < 1e-8, "x = {x}");
        }
    }

    #[test]
    fn stable_normalizes() {
        // heavy x^(-1-alpha) tail: integrate over y = ln x
        let breaks: Vec<f64> = (0..=64).map(|i| -40.0 + 2.5 * i as f64).collect();
        for &a in &[0.3, 0.5, 0.7] {
            let e = integrate_with_breaks(
                |y| stable_density(a, y.exp()).unwrap() * y.exp(),
                &breaks,
                Tolerance::new(1e-12, 1e-10),
            )
            .unwrap();
            let tail = (-a * 120.0 - ln_gamma(1.0 - a)).exp();
            assert!((e.value + tail - 1.0).abs() < 1e-6, "alpha = {a}: {}", e.value);
        }
    }

    #[test]
    fn ml_moments_at_half() {
        for r in 1..=2 {
            let e = integrate_to_infinity(
                |z| z.powi(r) * ml_density(0.5, z).unwrap(),
                0.0,
                1.0,
                Tolerance::new(1e-10, 1e-10),
            )
            .unwrap();
            let expected = (ln_gamma(r as f64 + 1.0) - ln_gamma(0.5 * r as f64 + 1.0)).exp();
            assert!(rel(e.value, expected) < 1e-6);
        }
    }

    #[test]
    fn tilted_reduces_and_normalizes() {
        assert!(rel(tilted_ml_density(0.5, 0.0, 1.0).unwrap(), ml_density(0.5, 1.0).unwrap()) < 1e-14);
        let e = integrate_to_infinity(|z| tilted_ml_density(0.5, 1.0, z).unwrap(), 0.0, 1.0, Tolerance::new(1e-10, 1e-10))
            .unwrap();
        assert!((e.value - 1.0).abs() < 1e-6);
        let e = integrate_to_infinity(|z| z * tilted_ml_density(0.5, 2.5, z).unwrap(), 0.0, 1.0, Tolerance::new(1e-10, 1e-10))
            .unwrap();
        assert!((e.value - 3.32335).abs() < 1e-5);
        assert!(rel(tilted_ml_moment(0.5, 2.5, 1.0), e.value) < 1e-6);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(stable_density(1.0, 1.0).is_err());
        assert!(stable_density(0.5, 0.0).is_err());
        assert!(ml_density(0.5, -1.0).is_err());
        assert!(tilted_ml_density(0.5, -0.6, 1.0).is_err());
        assert!(TiltedMittagLefflerSampler::new(0.5, -0.1).is_err());
    }

    #[test]
    fn starvation_is_reported() {
        let err = TiltedMittagLefflerSampler::with_floor(0.5, 50.0, 0.5).unwrap_err();
        assert!(matches!(err, Error::SamplerStarvation { .. }));
    }

    #[test]
    fn sampler_mean_matches() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = TiltedMittagLefflerSampler::new(0.3, 1.7).unwrap();
        let n = 200_000;
        let xs: Vec<f64> = (0..n).map(|_| s.sample(&mut rng)).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let expected = tilted_ml_moment(0.3, 1.7, 1.0);
        assert!((mean - expected).abs() < 4.0 * (var / n as f64).sqrt(), "{mean} vs {expected}");
    }

    #[test]
    fn untilted_variates_match_ml_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 200_000;
        let mean = (0..n).map(|_| sample_mittag_leffler(0.5, &mut rng)).sum::<f64>() / n as f64;
        // E M = 1/Gamma(1.5)
        let expected = (-ln_gamma(1.5)).exp();
        assert!((mean - expected).abs() < 0.01);
        let s = sample_positive_stable(0.5, &mut rng);
        assert!(s > 0.0);
    }
}

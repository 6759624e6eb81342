//! Large-`m` behavior of `K_m` given `K_n = k`.
//!
//! `K_m / m^alpha` converges almost surely to `Z = Y * W^alpha`, where `Y` is
//! Mittag-Leffler tilted by `theta + k alpha` and `W ~ Beta(theta + k alpha,
//! n - k alpha)`. The same law factors as `H = Y1 * X` with `Y1` tilted by
//! `theta + n` and `X ~ Beta(theta/alpha + k, n/alpha - k)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::factorials::{ln_gamma, ln_rising};
use crate::params::PDParams;
use crate::quad::{integrate_with_breaks, Tolerance};
use crate::stable::{ln_ml_density, ln_tilted_ml_density, ln_zolotarev_a0, TiltedMittagLefflerSampler};

/// Variates per independent random stream in [`sample_limit`].
pub const SAMPLE_CHUNK: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitLaw {
    params: PDParams,
    n: usize,
    k: usize,
}

impl LimitLaw {
    pub fn new(params: PDParams, n: usize, k: usize) -> Result<Self> {
        if n == 0 || k == 0 || k > n {
            return Err(Error::InvalidArgument(format!("need 1 <= k <= n, got n = {n}, k = {k}")));
        }
        Ok(LimitLaw { params, n, k })
    }

    pub fn params(&self) -> &PDParams {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    fn alpha(&self) -> f64 {
        self.params.alpha()
    }

    fn theta(&self) -> f64 {
        self.params.theta()
    }

    /// Tilt `theta + k alpha` of the Mittag-Leffler factor `Y`.
    pub fn y_tilt(&self) -> f64 {
        self.theta() + self.k as f64 * self.alpha()
    }

    /// Parameters of `W ~ Beta(theta + k alpha, n - k alpha)`.
    pub fn w_beta(&self) -> (f64, f64) {
        (self.y_tilt(), self.n as f64 - self.k as f64 * self.alpha())
    }

    /// Tilt `theta + n` of `Y1` in the alternative factorization.
    pub fn y1_tilt(&self) -> f64 {
        self.theta() + self.n as f64
    }

    /// Parameters of `X ~ Beta(theta/alpha + k, n/alpha - k)`.
    pub fn x_beta(&self) -> (f64, f64) {
        let a = self.alpha();
        (self.theta() / a + self.k as f64, self.n as f64 / a - self.k as f64)
    }
}

/// `E Z^r = ((theta + k alpha)/alpha)_r Gamma(theta+n) / Gamma(theta+n+r alpha)`.
pub fn limit_moment(law: &LimitLaw, r: usize) -> f64 {
    let (a, t) = (law.alpha(), law.theta());
    let tn = t + law.n as f64;
    (ln_rising(law.y_tilt() / a, r) + ln_gamma(tn) - ln_gamma(tn + r as f64 * a)).exp()
}

fn ln_tilted_moment(alpha: f64, tilt: f64, r: f64) -> f64 {
    let g = tilt / alpha;
    ln_gamma(tilt + 1.0) + ln_gamma(g + r + 1.0) - ln_gamma(g + 1.0) - ln_gamma(tilt + r * alpha + 1.0)
}

fn ln_beta_moment(a: f64, b: f64, r: f64) -> f64 {
    ln_gamma(a + r) - ln_gamma(a) + ln_gamma(a + b) - ln_gamma(a + b + r)
}

/// `E Y1^r E X^r`, which must equal [`limit_moment`].
pub fn alt_decomposition_moment(law: &LimitLaw, r: usize) -> f64 {
    if r == 0 {
        return 1.0;
    }
    let (xa, xb) = law.x_beta();
    let r = r as f64;
    (ln_tilted_moment(law.alpha(), law.y1_tilt(), r) + ln_beta_moment(xa, xb, r)).exp()
}

/// `E Y^r E W^(alpha r)`, the moment of the product representation.
pub fn product_form_moment(law: &LimitLaw, r: usize) -> f64 {
    if r == 0 {
        return 1.0;
    }
    let (wa, wb) = law.w_beta();
    let r = r as f64;
    (ln_tilted_moment(law.alpha(), law.y_tilt(), r) + ln_beta_moment(wa, wb, law.alpha() * r)).exp()
}

/// Leading-order `E K_m^r ~ limit_moment(r) m^(r alpha)`.
pub fn km_moment_asymptotic(law: &LimitLaw, r: usize, m: usize) -> f64 {
    limit_moment(law, r) * (m as f64).powf(r as f64 * law.alpha())
}

/// Beta(theta + k alpha, n - k alpha) density rescaled to `(0, m)`, the
/// local limit of `S_m`.
pub fn sm_local_density(law: &LimitLaw, m: f64, s: f64) -> Result<f64> {
    if !(m > 0.0 && s > 0.0 && s < m) {
        return Err(Error::InvalidArgument(format!("need 0 < s < m, got s = {s}, m = {m}")));
    }
    let (a, b) = law.w_beta();
    let tn = law.theta() + law.n as f64;
    Ok((ln_gamma(tn) - ln_gamma(a) - ln_gamma(b) + (a - 1.0) * s.ln() + (b - 1.0) * (m - s).ln()
        - (tn - 1.0) * m.ln())
    .exp())
}

fn check_z(z: f64) -> Result<()> {
    if z > 0.0 && z.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("z must be positive and finite, got {z}")))
    }
}

/// Beyond this point the Mittag-Leffler density is below `e^-700`.
fn ml_support_end(alpha: f64) -> f64 {
    (700.0 / (ln_zolotarev_a0(alpha).exp() * 0.5)).powf(1.0 - alpha).max(8.0)
}

const INNER_TOL: Tolerance = Tolerance { abs: 0.0, rel: 1e-11, max_intervals: 4000 };

fn geometric_breaks(lo: f64, hi: f64, first: f64) -> Vec<f64> {
    let mut pts = vec![lo, hi];
    let mut d = first;
    while lo + d < hi {
        pts.push(lo + d);
        d *= 2.0;
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Density of `Z`, by the integral over `v >= z` of the Mittag-Leffler
/// density against the Beta kernel `(1 - (z/v)^(1/alpha))^(n - k alpha - 1)`.
pub fn limit_density(law: &LimitLaw, z: f64) -> Result<f64> {
    check_z(z)?;
    let a = law.alpha();
    let (xa, _) = law.x_beta();
    let (_, b) = law.w_beta();
    let end = ml_support_end(a);
    if z >= end {
        return Ok(0.0);
    }
    // v = z e^u
    let u_max = (end / z).ln();
    // the kernel is singular at u = 0 when n - k alpha < 1
    let mut breaks = geometric_breaks(0.0, u_max, if b < 1.0 { 1e-8 } else { 1e-3 });
    let u_peak = -z.ln();
    if u_peak > 0.0 && u_peak < u_max {
        breaks.extend([0.5 * u_peak, u_peak, u_peak + 0.5].into_iter().filter(|&u| u < u_max));
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
    }
    let mut failure = None;
    let inner = integrate_with_breaks(
        |u| {
            let lnv = z.ln() + u;
            match ln_ml_density(a, lnv.exp()) {
                Ok(lg) => (lg + lnv + (b - 1.0) * (-(-u / a).exp_m1()).ln()).exp(),
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        &breaks,
        INNER_TOL,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    if inner.value <= 0.0 {
        return Ok(0.0);
    }
    let tn = law.theta() + law.n as f64;
    Ok((ln_gamma(tn) - ln_gamma(xa) - ln_gamma(b) + (xa - 1.0) * z.ln() + inner.value.ln()).exp())
}

/// Density of `Z` as the Beta mixture `int_0^1 f_Y(z w^-alpha) w^-alpha f_W(w) dw`.
pub fn limit_density_mixture(law: &LimitLaw, z: f64) -> Result<f64> {
    check_z(z)?;
    let a = law.alpha();
    let tilt = law.y_tilt();
    let (wa, wb) = law.w_beta();
    let ln_beta = ln_gamma(wa) + ln_gamma(wb) - ln_gamma(wa + wb);
    // f_Y(z w^-alpha) vanishes once z w^-alpha passes the support end
    let w_min = (z / ml_support_end(a)).powf(1.0 / a).min(0.5);
    let mut breaks = geometric_breaks(w_min, 1.0, 1e-9 * (1.0 - w_min));
    for pt in geometric_breaks(0.0, 1.0 - w_min, 1e-9) {
        breaks.push(1.0 - pt);
    }
    breaks.retain(|&w| w >= w_min && w <= 1.0);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let mut failure = None;
    let est = integrate_with_breaks(
        |w| {
            let y = z * (-a * w.ln()).exp();
            match ln_tilted_ml_density(a, tilt, y) {
                Ok(ly) => (ly - a * w.ln() + (wa - 1.0) * w.ln() + (wb - 1.0) * (-w).ln_1p() - ln_beta).exp(),
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        &breaks,
        INNER_TOL,
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(est.value),
    }
}

/// Break points for integrating the limit density over `(0, hi)`.
fn density_breaks(law: &LimitLaw, hi: f64) -> Vec<f64> {
    let mean = limit_moment(law, 1);
    // f(z) ~ z^(theta/alpha + k - 1) at the origin
    let (xa, _) = law.x_beta();
    let first = if xa < 1.0 { 1e-10 } else { 1e-3 };
    let mut pts = geometric_breaks(0.0, hi, first * mean);
    for i in 1..16 {
        let z = mean * i as f64 / 4.0;
        if z < hi {
            pts.push(z);
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

fn integrate_density<G: Fn(f64) -> f64>(law: &LimitLaw, lo: f64, hi: f64, weight: G, tol: Tolerance) -> Result<f64> {
    let mut failure = None;
    let breaks: Vec<f64> = density_breaks(law, hi).into_iter().filter(|&z| z >= lo).chain([lo]).collect();
    let mut breaks = breaks;
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let est = integrate_with_breaks(
        |z| match limit_density(law, z) {
            Ok(f) => f * weight(z),
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        &breaks,
        tol,
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(est.value),
    }
}

/// Point past which the limit law carries negligible mass.
pub fn limit_support_end(law: &LimitLaw) -> f64 {
    ml_support_end(law.alpha())
}

/// `int_0^inf z^r f(z) dz` by quadrature of [`limit_density`].
pub fn limit_density_moment(law: &LimitLaw, r: u32) -> Result<f64> {
    integrate_density(law, 0.0, limit_support_end(law), |z| z.powi(r as i32), Tolerance::new(1e-12, 1e-9))
}

/// `P(Z <= z)`.
pub fn limit_cdf(law: &LimitLaw, z: f64) -> Result<f64> {
    Ok(limit_cdf_grid(law, &[z])?[0])
}

/// CDF at increasing points, integrating the density piece by piece.
pub fn limit_cdf_grid(law: &LimitLaw, zs: &[f64]) -> Result<Vec<f64>> {
    if zs.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidArgument("CDF points must be nondecreasing".into()));
    }
    let pieces: Vec<(f64, f64)> = zs
        .iter()
        .scan(0.0, |prev, &z| {
            let piece = (*prev, z);
            *prev = z;
            Some(piece)
        })
        .collect();
    let masses = pieces
        .par_iter()
        .map(|&(lo, hi)| {
            check_z(hi)?;
            if hi <= lo {
                return Ok(0.0);
            }
            integrate_density(law, lo, hi, |_| 1.0, Tolerance::new(1e-12, 1e-10))
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut acc = 0.0;
    Ok(masses
        .into_iter()
        .map(|m| {
            acc += m;
            acc.min(1.0)
        })
        .collect())
}

fn draw_chunks<F>(count: usize, seed: u64, draw: F) -> Vec<f64>
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    let chunks = count.div_ceil(SAMPLE_CHUNK);
    (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let len = SAMPLE_CHUNK.min(count - c * SAMPLE_CHUNK);
            (0..len).map(|_| draw(&mut rng)).collect::<Vec<_>>()
        })
        .collect()
}

fn check_count(count: usize) -> Result<()> {
    if count == 0 {
        Err(Error::InvalidArgument("sample count must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// I.i.d. draws of `Z = Y W^alpha`. The output depends only on
/// `(count, seed)`, not on the number of worker threads.
pub fn sample_limit(law: &LimitLaw, count: usize, seed: u64) -> Result<Vec<f64>> {
    check_count(count)?;
    let a = law.alpha();
    let y = TiltedMittagLefflerSampler::new(a, law.y_tilt())?;
    let (wa, wb) = law.w_beta();
    let w = Beta::new(wa, wb).map_err(|e| Error::InvalidParams(format!("Beta({wa}, {wb}): {e}")))?;
    Ok(draw_chunks(count, seed, |rng| y.sample(rng) * w.sample(rng).powf(a)))
}

/// I.i.d. draws of `H = Y1 X`, equal in law to [`sample_limit`].
pub fn sample_limit_alt(law: &LimitLaw, count: usize, seed: u64) -> Result<Vec<f64>> {
    check_count(count)?;
    let y1 = TiltedMittagLefflerSampler::new(law.alpha(), law.y1_tilt())?;
    let (xa, xb) = law.x_beta();
    let x = Beta::new(xa, xb).map_err(|e| Error::InvalidParams(format!("Beta({xa}, {xb}): {e}")))?;
    Ok(draw_chunks(count, seed, |rng| y1.sample(rng) * x.sample(rng)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn law(a: f64, t: f64, n: usize, k: usize) -> LimitLaw {
        LimitLaw::new(PDParams::new(a, t).unwrap(), n, k).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn moments_small() {
        let l = law(0.5, 0.5, 2, 1);
        assert_eq!(limit_moment(&l, 0), 1.0);
        assert_eq!(alt_decomposition_moment(&l, 0), 1.0);
        assert!((limit_moment(&l, 1) - 1.32934).abs() < 1e-5);
        assert!((alt_decomposition_moment(&l, 1) - 1.32934).abs() < 1e-5);
        assert!(rel(km_moment_asymptotic(&l, 1, 100), 10.0 * limit_moment(&l, 1)) < 1e-14);
    }

    #[test]
    fn three_moment_forms_agree() {
        for &(a, t, n, k) in &[(0.5, 0.5, 2, 1), (0.25, -0.2, 7, 3), (0.8, 4.0, 12, 12), (0.1, 30.0, 5, 2)] {
            let l = law(a, t, n, k);
            for r in 1..=8 {
                let m = limit_moment(&l, r);
                assert!(rel(alt_decomposition_moment(&l, r), m) < 1e-10);
                assert!(rel(product_form_moment(&l, r), m) < 1e-10);
            }
        }
    }

    #[test]
    fn local_density_values() {
        let l = law(0.5, 0.5, 2, 1);
        assert!((sm_local_density(&l, 1.0, 0.5).unwrap() - 1.06066).abs() < 1e-5);
        assert!(sm_local_density(&l, 1.0, 1.0).is_err());
    }

    #[test]
    fn density_routes_agree() {
        let l = law(0.5, 0.5, 2, 1);
        for &z in &[0.2, 1.0, 3.0] {
            let v = limit_density(&l, z).unwrap();
            let m = limit_density_mixture(&l, z).unwrap();
            assert!((v - m).abs() < 1e-7, "z = {z}: {v} vs {m}");
        }
    }

    #[test]
    fn density_normalizes_off_half() {
        let l = law(0.3, 1.0, 3, 2);
        let total = limit_density_moment(&l, 0).unwrap();
        assert!((total - 1.0).abs() < 1e-5, "{total}");
    }

    #[test]
    fn sampler_is_deterministic_and_thread_independent() {
        let l = law(0.5, 0.5, 2, 1);
        let a = sample_limit(&l, 10_000, 3).unwrap();
        let b = sample_limit(&l, 10_000, 3).unwrap();
        assert_eq!(a, b);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c = pool.install(|| sample_limit(&l, 10_000, 3).unwrap());
        assert_eq!(a, c);
        assert_ne!(a, sample_limit(&l, 10_000, 4).unwrap());
    }

    #[test]
    fn rejects_bad_law() {
        let p = PDParams::new(0.5, 0.5).unwrap();
        assert!(LimitLaw::new(p, 2, 3).is_err());
        assert!(LimitLaw::new(p, 0, 0).is_err());
    }
}

//! The unconditional two-parameter Poisson-Dirichlet partition law.

use crate::dd::{self, Dd};
use crate::error::{Error, Result};
use crate::factorials::{ln_gen_rising, ln_gen_rising_prefix, ln_rising, ln_rising_ratio};
use crate::logspace::LogValue;
use crate::params::{PDParams, PartitionData};
use crate::pmf::Pmf;
use crate::stirling::stirling1_row;

/// Beyond this many factors the alternating moment sums drop from
/// double-double to plain `f64` with `ln_gamma` ratios.
pub(crate) const DD_MAX_LEN: usize = 2_000_000;

/// `ln V_{n,k}` with `V_{n,k} = (theta+alpha)_{k-1,alpha} / (theta+1)_{n-1}`.
pub fn log_weight(params: &PDParams, n: usize, k: usize) -> f64 {
    debug_assert!(n >= 1 && k >= 1);
    let (a, t) = (params.alpha(), params.theta());
    ln_gen_rising(t + a, k - 1, a) - ln_rising(t + 1.0, n - 1)
}

/// Log-probability of one particular set partition with the given block
/// sizes.
pub fn eppf_log(params: &PDParams, data: &PartitionData) -> f64 {
    let a = params.alpha();
    let blocks: f64 = data
        .size_profile()
        .into_iter()
        .map(|(size, times)| times as f64 * ln_rising(1.0 - a, size as usize - 1))
        .sum();
    log_weight(params, data.n(), data.k()) + blocks
}

/// Law of the number of blocks `K_n`, supported on `1..=n`.
pub fn kn_pmf(params: &PDParams, n: usize) -> Result<Pmf> {
    if n == 0 {
        return Err(Error::InvalidArgument("sample size n must be at least 1".into()));
    }
    let (a, t) = (params.alpha(), params.theta());
    let row = stirling1_row(n, a)?;
    let ln_num = ln_gen_rising_prefix(t + a, n - 1, a);
    let ln_den = ln_rising(t + 1.0, n - 1);
    let log_probs = (1..=n)
        .map(|k| row[k] * LogValue::from_ln(ln_num[k - 1] - ln_den))
        .collect();
    Ok(Pmf::new(1, log_probs))
}

/// `E K_n = (theta+alpha)_n / (alpha (theta+1)_{n-1}) - theta/alpha`.
pub fn kn_mean(params: &PDParams, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("sample size n must be at least 1".into()));
    }
    let (a, t) = (params.alpha(), params.theta());
    // (theta+alpha)_n/(theta+1)_{n-1} = (theta+alpha) * rho, rho = (theta+alpha+1)_{n-1}/(theta+1)_{n-1}
    let ln_rho = ln_rising_ratio(t + a + 1.0, t + 1.0, n - 1);
    let rho = ln_rho.exp();
    Ok(t * ln_rho.exp_m1() / a + rho)
}

/// `E K_n^r` through the signless non-central second-kind expansion with
/// shift `theta/alpha`.
pub fn kn_moment(params: &PDParams, n: usize, r: usize) -> Result<f64> {
    if n == 0 || r == 0 {
        return Err(Error::InvalidArgument("n and r must be at least 1".into()));
    }
    let (a, t) = (params.alpha(), params.theta());
    let gamma = Dd::from(t) / Dd::from(a);
    // At rho_j = 1 the signed sum collapses to 1 (K_1 = 1), so only rho_j - 1 is summed.
    let deltas: Vec<Dd> = (1..=r)
        .map(|j| {
            if n - 1 <= DD_MAX_LEN {
                dd::rising_ratio_minus_one(Dd::from(a) * Dd::from(j), Dd::from(t) + Dd::ONE, n - 1)
            } else {
                Dd::from(ln_rising_ratio(t + j as f64 * a + 1.0, t + 1.0, n - 1).exp_m1())
            }
        })
        .collect();
    Ok((Dd::ONE + signed_moment_sum(r, gamma, gamma + Dd::ONE, &deltas)).to_f64())
}

/// `sum_{j=1}^{r} (-1)^{r-j} (base)_j S(r,j; shift) delta_j`.
pub(crate) fn signed_moment_sum(r: usize, shift: Dd, base: Dd, deltas: &[Dd]) -> Dd {
    let s2 = dd::stirling2_rows(r, shift);
    let rising = dd::rising_prefix(base, r);
    let mut acc = Dd::ZERO;
    for j in 1..=r {
        let term = rising[j] * s2[r][j] * deltas[j - 1];
        acc = if (r - j) & 1 == 0 { acc + term } else { acc - term };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(a: f64, t: f64) -> PDParams {
        PDParams::new(a, t).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn eppf_single_observation_is_certain() {
        let d = PartitionData::new(vec![1]).unwrap();
        assert_eq!(eppf_log(&params(0.3, 2.0), &d), 0.0);
    }

    #[test]
    fn eppf_small_cases() {
        let p = params(0.5, 0.5);
        let d = PartitionData::new(vec![2, 1, 1]).unwrap();
        // V_{4,3} = 1.5 / 13.125, times (1/2)_1
        assert!(close(eppf_log(&p, &d), (1.5f64 / 13.125 * 0.5).ln(), 1e-14));
        let d = PartitionData::new(vec![1, 1]).unwrap();
        assert!(close(eppf_log(&p, &d), (2.0f64 / 3.0).ln(), 1e-14));
    }

    #[test]
    fn eppf_is_symmetric_bitwise() {
        let p = params(0.37, 1.3);
        let a = PartitionData::new(vec![5, 1, 3, 1, 2]).unwrap();
        let b = PartitionData::new(vec![1, 2, 1, 5, 3]).unwrap();
        assert_eq!(eppf_log(&p, &a).to_bits(), eppf_log(&p, &b).to_bits());
    }

    #[test]
    fn kn_pmf_small() {
        let one = kn_pmf(&params(0.5, 0.5), 1).unwrap();
        assert_eq!(one.support_min(), 1);
        assert_eq!(one.len(), 1);
        assert!(close(one.prob(1), 1.0, 1e-15));
        let two = kn_pmf(&params(0.5, 0.5), 2).unwrap();
        assert!(close(two.prob(1), 1.0 / 3.0, 1e-14));
        assert!(close(two.prob(2), 2.0 / 3.0, 1e-14));
        assert!(kn_pmf(&params(0.5, 0.5), 0).is_err());
    }

    #[test]
    fn kn_mean_small() {
        let p = params(0.5, 0.5);
        assert!(close(kn_mean(&p, 1).unwrap(), 1.0, 1e-15));
        assert!(close(kn_mean(&p, 2).unwrap(), 5.0 / 3.0, 1e-14));
        let pmf = kn_pmf(&p, 10).unwrap();
        assert!(close(kn_mean(&p, 10).unwrap(), pmf.mean(), 1e-12));
    }

    #[test]
    fn kn_moment_small() {
        let p = params(0.5, 0.5);
        for r in 1..5 {
            assert!(close(kn_moment(&p, 1, r).unwrap(), 1.0, 1e-15));
        }
        assert!(close(kn_moment(&p, 2, 2).unwrap(), 3.0, 1e-14));
        for n in 1..=30 {
            assert!(close(kn_moment(&p, n, 1).unwrap(), kn_mean(&p, n).unwrap(), 1e-12));
        }
    }

    #[test]
    fn kn_moment_handles_nonpositive_theta() {
        for &t in &[-0.1, 0.0] {
            let p = params(0.25, t);
            let pmf = kn_pmf(&p, 40).unwrap();
            for r in 1..=4 {
                let m = kn_moment(&p, 40, r).unwrap();
                assert!(close(m, pmf.moment(r as u32), 1e-10), "theta={t} r={r}");
            }
        }
    }
}

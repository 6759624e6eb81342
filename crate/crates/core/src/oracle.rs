//! Exact rational ground truth for small samples, by brute-force
//! enumeration. No floating point is used until [`ExactPmf::to_f64`].

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::params::PDParams;

/// Largest sample size the enumerators accept (Bell(12) = 4,213,597).
pub const ENUMERATION_CAP: usize = 12;

pub const DEFAULT_DENOMINATOR_CAP: u64 = 1_000_000;

fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `(alpha, theta)` as exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalParams {
    alpha: BigRational,
    theta: BigRational,
}

impl RationalParams {
    pub fn new(alpha: BigRational, theta: BigRational) -> Result<Self> {
        Self::with_denominator_cap(alpha, theta, DEFAULT_DENOMINATOR_CAP)
    }

    pub fn with_denominator_cap(alpha: BigRational, theta: BigRational, cap: u64) -> Result<Self> {
        if !(alpha.is_positive() && alpha < BigRational::one()) {
            return Err(Error::InvalidParams(format!("alpha must lie in (0,1), got {alpha}")));
        }
        if !(&theta + &alpha).is_positive() {
            return Err(Error::InvalidParams(format!("theta must exceed -alpha, got {theta}")));
        }
        let cap = BigInt::from(cap);
        if alpha.denom() > &cap || theta.denom() > &cap {
            return Err(Error::InvalidParams(format!("denominators of {alpha} and {theta} exceed {cap}")));
        }
        Ok(RationalParams { alpha, theta })
    }

    /// `alpha = an/ad`, `theta = tn/td`.
    pub fn from_ratios(an: i64, ad: i64, tn: i64, td: i64) -> Result<Self> {
        if ad == 0 || td == 0 {
            return Err(Error::InvalidParams("zero denominator".into()));
        }
        Self::new(rational(an, ad), rational(tn, td))
    }

    /// Nearest small-denominator rationals to floating-point parameters,
    /// e.g. `0.3 -> 3/10`.
    pub fn approximate(alpha: f64, theta: f64) -> Result<Self> {
        let convert = |x: f64| {
            Ratio::<i64>::approximate_float(x)
                .map(|r| BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom())))
                .ok_or_else(|| Error::InvalidParams(format!("{x} has no rational approximation")))
        };
        Self::new(convert(alpha)?, convert(theta)?)
    }

    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }

    pub fn theta(&self) -> &BigRational {
        &self.theta
    }

    pub fn to_pd_params(&self) -> Result<PDParams> {
        PDParams::new(to_f64(&self.alpha), to_f64(&self.theta))
    }
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn check_cap(size: usize) -> Result<()> {
    if size > ENUMERATION_CAP {
        Err(Error::CapExceeded { m: size, cap: ENUMERATION_CAP })
    } else {
        Ok(())
    }
}

/// Set partitions of `{1..n}` as restricted-growth strings: element `i`
/// belongs to block `a[i]`, with `a[0] = 0` and `a[i] <= 1 + max(a[..i])`.
pub struct Partitions {
    a: Vec<usize>,
    prefix_max: Vec<usize>,
    done: bool,
}

impl Iterator for Partitions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.a.clone();
        // advance: bump the last position that can grow, reset the tail
        let n = self.a.len();
        let mut i = n;
        loop {
            if i <= 1 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.a[i] <= self.prefix_max[i - 1] {
                self.a[i] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(self.a[i]);
                for j in i + 1..n {
                    self.a[j] = 0;
                    self.prefix_max[j] = self.prefix_max[i];
                }
                break;
            }
        }
        Some(out)
    }
}

pub fn enumerate_partitions(n: usize) -> Result<Partitions> {
    check_cap(n)?;
    Ok(Partitions { a: vec![0; n], prefix_max: vec![0; n], done: false })
}

/// Block sizes of a restricted-growth string, in block order.
pub fn block_sizes(rgs: &[usize]) -> Vec<u64> {
    let mut sizes = Vec::new();
    for &b in rgs {
        if b == sizes.len() {
            sizes.push(0);
        }
        sizes[b] += 1;
    }
    sizes
}

fn rising(x: &BigRational, len: usize, step: &BigRational) -> BigRational {
    let mut acc = BigRational::one();
    let mut term = x.clone();
    for _ in 0..len {
        acc *= &term;
        term += step;
    }
    acc
}

fn integer(x: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Exact probability of one partition with the given block sizes.
pub fn exact_eppf(params: &RationalParams, sizes: &[u64]) -> BigRational {
    let (a, t) = (&params.alpha, &params.theta);
    let one = BigRational::one();
    let n: u64 = sizes.iter().sum();
    let k = sizes.len();
    if n == 0 {
        return one;
    }
    let mut p = rising(&(t + a), k - 1, a) / rising(&(t + &one), n as usize - 1, &one);
    for &s in sizes {
        p *= rising(&(&one - a), s as usize - 1, &one);
    }
    p
}

/// Product of one-step seating probabilities that builds the partition
/// customer by customer.
pub fn trajectory_probability(params: &RationalParams, rgs: &[usize]) -> BigRational {
    let (a, t) = (&params.alpha, &params.theta);
    let mut sizes: Vec<u64> = Vec::new();
    let mut p = BigRational::one();
    for (seated, &b) in rgs.iter().enumerate() {
        if seated > 0 {
            let total = t + integer(seated as u64);
            let w = if b == sizes.len() {
                t + a * integer(sizes.len() as u64)
            } else {
                integer(sizes[b]) - a
            };
            p *= w / total;
        }
        if b == sizes.len() {
            sizes.push(0);
        }
        sizes[b] += 1;
    }
    p
}

/// Exact pmf on `support_min ..`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactPmf {
    pub support_min: usize,
    pub probs: Vec<BigRational>,
}

impl ExactPmf {
    pub fn prob(&self, x: usize) -> BigRational {
        x.checked_sub(self.support_min)
            .and_then(|i| self.probs.get(i).cloned())
            .unwrap_or_else(BigRational::zero)
    }

    pub fn total(&self) -> BigRational {
        self.probs.iter().fold(BigRational::zero(), |acc, p| acc + p)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.probs.iter().map(to_f64).collect()
    }

    pub fn support_max(&self) -> usize {
        self.support_min + self.probs.len() - 1
    }
}

/// Law of `K_n` by summing the EPPF over all partitions of `{1..n}`.
pub fn exact_kn_pmf(params: &RationalParams, n: usize) -> Result<ExactPmf> {
    if n == 0 {
        return Err(Error::InvalidArgument("sample size n must be at least 1".into()));
    }
    let mut probs = vec![BigRational::zero(); n];
    // group by block-size multiset so each EPPF value is computed once
    let mut profiles: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    for rgs in enumerate_partitions(n)? {
        let mut sizes = block_sizes(&rgs);
        sizes.sort_unstable();
        *profiles.entry(sizes).or_insert(0) += 1;
    }
    for (sizes, count) in profiles {
        probs[sizes.len() - 1] += exact_eppf(params, &sizes) * integer(count);
    }
    Ok(ExactPmf { support_min: 1, probs })
}

/// Exact conditional law of the continuation of a pilot sample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactContinuation {
    /// `P(K_m = k*)` for `k* = 0..=m`.
    pub km: ExactPmf,
    /// `P(S_m = s)` for `s = 0..=m`.
    pub sm: ExactPmf,
    /// `joint[k*][s] = P(K_m = k*, S_m = s)`.
    pub joint: Vec<Vec<BigRational>>,
}

/// Seat `m` customers after the pilot one at a time, carrying exact state
/// probabilities. States are merged on (old block sizes, sorted new block
/// sizes), which determines every later seating probability.
pub fn exact_km_pmf(params: &RationalParams, pilot: &[u64], m: usize) -> Result<ExactContinuation> {
    if pilot.is_empty() || pilot.contains(&0) {
        return Err(Error::InvalidArgument("pilot multiplicities must be positive and non-empty".into()));
    }
    let n: u64 = pilot.iter().sum();
    check_cap(n as usize + m)?;
    let (a, t) = (&params.alpha, &params.theta);
    let mut states: BTreeMap<(Vec<u64>, Vec<u64>), BigRational> = BTreeMap::new();
    states.insert((pilot.to_vec(), Vec::new()), BigRational::one());
    for step in 0..m as u64 {
        let total = t + integer(n + step);
        let mut next: BTreeMap<(Vec<u64>, Vec<u64>), BigRational> = BTreeMap::new();
        for ((old, new), p) in states {
            let k = (old.len() + new.len()) as u64;
            let mut push = |o: Vec<u64>, mut nw: Vec<u64>, w: BigRational| {
                nw.sort_unstable();
                *next.entry((o, nw)).or_insert_with(BigRational::zero) += &p * w / &total;
            };
            for j in 0..old.len() {
                let mut o = old.clone();
                o[j] += 1;
                push(o, new.clone(), integer(old[j]) - a);
            }
            for j in 0..new.len() {
                let mut nw = new.clone();
                nw[j] += 1;
                push(old.clone(), nw, integer(new[j]) - a);
            }
            let mut nw = new.clone();
            nw.push(1);
            push(old.clone(), nw, t + a * integer(k));
        }
        states = next;
    }
    let mut joint = vec![vec![BigRational::zero(); m + 1]; m + 1];
    for ((_, new), p) in states {
        let s: u64 = new.iter().sum();
        joint[new.len()][s as usize] += p;
    }
    let km = joint.iter().map(|row| row.iter().fold(BigRational::zero(), |acc, p| acc + p)).collect();
    let sm = (0..=m)
        .map(|s| joint.iter().fold(BigRational::zero(), |acc, row| acc + &row[s]))
        .collect();
    Ok(ExactContinuation {
        km: ExactPmf { support_min: 0, probs: km },
        sm: ExactPmf { support_min: 0, probs: sm },
        joint,
    })
}

fn binomial(m: u64, s: u64) -> BigRational {
    let mut c = BigInt::one();
    for i in 0..s {
        c = c * BigInt::from(m - i) / BigInt::from(i + 1);
    }
    BigRational::from_integer(c)
}

/// Beta-Binomial(m, theta + k alpha, n - k alpha) in exact arithmetic.
pub fn exact_sm_pmf(params: &RationalParams, n: usize, k: usize, m: usize) -> Result<ExactPmf> {
    if n == 0 || k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("need 1 <= k <= n, got n = {n}, k = {k}")));
    }
    let one = BigRational::one();
    let ka = &params.alpha * integer(k as u64);
    let a = &params.theta + &ka;
    let b = integer(n as u64) - &ka;
    let denom = rising(&(&a + &b), m, &one);
    let probs = (0..=m)
        .map(|s| {
            binomial(m as u64, s as u64) * rising(&a, s, &one) * rising(&b, m - s, &one) / &denom
        })
        .collect();
    Ok(ExactPmf { support_min: 0, probs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> RationalParams {
        RationalParams::from_ratios(1, 2, 1, 2).unwrap()
    }

    #[test]
    fn bell_numbers() {
        let counts: Vec<usize> = (0..=7).map(|n| enumerate_partitions(n).unwrap().count()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 15, 52, 203, 877]);
        assert!(enumerate_partitions(13).is_err());
    }

    #[test]
    fn partitions_are_distinct_rgs() {
        let all: Vec<Vec<usize>> = enumerate_partitions(5).unwrap().collect();
        let unique: std::collections::BTreeSet<_> = all.iter().cloned().collect();
        assert_eq!(unique.len(), all.len());
        for rgs in &all {
            let mut max = 0;
            for (i, &b) in rgs.iter().enumerate() {
                assert!(if i == 0 { b == 0 } else { b <= max + 1 });
                max = max.max(b);
            }
        }
    }

    #[test]
    fn kn_pmf_two() {
        let pmf = exact_kn_pmf(&half(), 2).unwrap();
        assert_eq!(pmf.probs, vec![rational(1, 3), rational(2, 3)]);
    }

    #[test]
    fn kn_pmf_sums_to_one() {
        for (an, ad) in [(1, 4), (1, 2), (3, 4)] {
            for (tn, td) in [(1, 2), (2, 1)] {
                let p = RationalParams::from_ratios(an, ad, tn, td).unwrap();
                for n in 1..=8 {
                    assert!(exact_kn_pmf(&p, n).unwrap().total().is_one());
                }
            }
        }
    }

    #[test]
    fn trajectories_match_eppf() {
        let p = RationalParams::from_ratios(1, 3, -1, 5).unwrap();
        for n in 1..=6 {
            for rgs in enumerate_partitions(n).unwrap() {
                assert_eq!(trajectory_probability(&p, &rgs), exact_eppf(&p, &block_sizes(&rgs)));
            }
        }
    }

    #[test]
    fn continuation_examples() {
        let zero = exact_km_pmf(&half(), &[2, 1], 0).unwrap();
        assert_eq!(zero.km.probs, vec![BigRational::one()]);
        let one = exact_km_pmf(&half(), &[1, 1], 1).unwrap();
        assert_eq!(one.km.probs, vec![rational(2, 5), rational(3, 5)]);
        let a = exact_km_pmf(&half(), &[2, 1], 4).unwrap();
        let b = exact_km_pmf(&half(), &[1, 2], 4).unwrap();
        assert_eq!(a, b);
        let c = exact_km_pmf(&half(), &[1, 1, 1], 4).unwrap();
        assert_ne!(a.km, c.km);
    }

    #[test]
    fn sm_margin_is_beta_binomial() {
        let p = RationalParams::from_ratios(1, 4, 2, 1).unwrap();
        let cont = exact_km_pmf(&p, &[3, 1], 5).unwrap();
        assert_eq!(cont.sm, exact_sm_pmf(&p, 4, 2, 5).unwrap());
    }

    #[test]
    fn approximates_floats() {
        let p = RationalParams::approximate(0.3, -0.25).unwrap();
        assert_eq!(p.alpha(), &rational(3, 10));
        assert_eq!(p.theta(), &rational(-1, 4));
    }

    #[test]
    fn rejects_out_of_domain() {
        assert!(RationalParams::from_ratios(1, 1, 1, 2).is_err());
        assert!(RationalParams::from_ratios(1, 2, -1, 2).is_err());
        assert!(RationalParams::from_ratios(1, 2_000_000, 1, 2).is_err());
        assert!(exact_km_pmf(&half(), &[5, 5], 3).is_err());
    }
}

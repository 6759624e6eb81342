//! Predictions conditional on a pilot sample with `n` observations and `k`
//! species: the Beta-Binomial law of `S_m` (observations landing in new
//! species), the deletion-of-classes law of `K_m` given `S_m`, and the
//! exact law, mean and moments of `K_m`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::asymptotics::{self, LimitLaw};
use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::factorials::{ln_gen_rising_prefix, ln_rising, ln_rising_ratio};
use crate::logspace::LogValue;
use crate::params::PDParams;
use crate::pmf::Pmf;
use crate::prior::{self, signed_moment_sum, DD_MAX_LEN};
use crate::stirling::noncentral_stirling1_row;

/// Default largest `m` for which the exact `O(m^2)` pmf is built.
pub const DEFAULT_EXACT_CAP: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PredictionQuery {
    params: PDParams,
    n: usize,
    k: usize,
    m: usize,
}

impl PredictionQuery {
    pub fn new(params: PDParams, n: usize, k: usize, m: usize) -> Result<Self> {
        if n == 0 || k == 0 || k > n {
            return Err(Error::InvalidArgument(format!("need 1 <= k <= n, got n = {n}, k = {k}")));
        }
        Ok(PredictionQuery { params, n, k, m })
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

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn with_m(&self, m: usize) -> Self {
        PredictionQuery { m, ..*self }
    }

    /// `theta + k alpha`, the new-species weight.
    fn new_weight(&self) -> f64 {
        self.params.theta() + self.k as f64 * self.params.alpha()
    }

    /// `n - k alpha`, the old-species weight.
    fn old_weight(&self) -> f64 {
        self.n as f64 - self.k as f64 * self.params.alpha()
    }

    pub fn limit_law(&self) -> LimitLaw {
        LimitLaw::new(self.params, self.n, self.k).expect("query invariants imply a valid limit law")
    }
}

/// Law of `S_m` given `K_n = k`: Beta-Binomial(m, theta + k alpha, n - k alpha).
pub fn sm_pmf(q: &PredictionQuery) -> Pmf {
    let m = q.m;
    if m == 0 {
        return Pmf::point_mass(0);
    }
    let (a, b) = (q.new_weight(), q.old_weight());
    let ln_a = ln_gen_rising_prefix(a, m, 1.0);
    let ln_b = ln_gen_rising_prefix(b, m, 1.0);
    let ln_fact = ln_gen_rising_prefix(1.0, m, 1.0);
    let ln_total = ln_rising(a + b, m);
    let log_probs = (0..=m)
        .map(|s| {
            let ln_binom = ln_fact[m] - ln_fact[s] - ln_fact[m - s];
            LogValue::from_ln(ln_binom + ln_b[m - s] + ln_a[s] - ln_total)
        })
        .collect();
    Pmf::new(0, log_probs)
}

/// Probability that the next draw is a new species, `(theta + k alpha)/(theta + n)`.
pub fn new_species_prob(q: &PredictionQuery) -> Result<f64> {
    if q.m != 1 {
        return Err(Error::InvalidArgument(format!(
            "one-step discovery probability needs m = 1, got m = {}",
            q.m
        )));
    }
    Ok(q.new_weight() / (q.params.theta() + q.n as f64))
}

/// Law of `K_m` given `K_n = k` and `S_m = s`: the block count of `s`
/// observations under `PD(alpha, theta + k alpha)`.
pub fn km_given_sm_pmf(params: &PDParams, k: usize, s: usize) -> Pmf {
    if s == 0 {
        return Pmf::point_mass(0);
    }
    prior::kn_pmf(&params.after_deletion(k), s).expect("s >= 1 and shifted params are valid")
}

type RowKey = (u64, u64, usize);

const ROW_CACHE_CAPACITY: usize = 32;

fn row_cache() -> &'static RwLock<HashMap<RowKey, Arc<Vec<LogValue>>>> {
    static CACHE: OnceLock<RwLock<HashMap<RowKey, Arc<Vec<LogValue>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Non-central first-kind row `m` with shift `r`, cached by `(alpha, r, m)`.
fn cached_row(alpha: f64, shift: f64, m: usize) -> Result<Arc<Vec<LogValue>>> {
    let key = (alpha.to_bits(), shift.to_bits(), m);
    if let Some(row) = row_cache().read().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return Ok(Arc::clone(row));
    }
    let row = Arc::new(noncentral_stirling1_row(m, alpha, shift)?);
    let mut cache = row_cache().write().unwrap_or_else(|e| e.into_inner());
    if cache.len() >= ROW_CACHE_CAPACITY {
        cache.clear();
    }
    cache.insert(key, Arc::clone(&row));
    Ok(row)
}

/// Exact law of `K_m` given `K_n = k`, supported on `0..=m`.
///
/// `P(K_m = j) = (theta + k alpha)_{j,alpha} / (theta + n)_m * S(m, j; alpha, n - k alpha)`.
pub fn km_pmf(q: &PredictionQuery) -> Result<Pmf> {
    let m = q.m;
    if m == 0 {
        return Ok(Pmf::point_mass(0));
    }
    let alpha = q.params.alpha();
    let row = cached_row(alpha, q.old_weight(), m)?;
    let ln_num = ln_gen_rising_prefix(q.new_weight(), m, alpha);
    let ln_den = ln_rising(q.params.theta() + q.n as f64, m);
    let log_probs = (0..=m)
        .map(|j| row[j] * LogValue::from_ln(ln_num[j] - ln_den))
        .collect();
    Ok(Pmf::new(0, log_probs))
}

/// The law of `K_m` assembled as `sum_s P(K_m | S_m = s) P(S_m = s)`.
pub fn km_pmf_by_mixture(q: &PredictionQuery) -> Pmf {
    let m = q.m;
    let weights = sm_pmf(q);
    let mut acc = vec![Vec::new(); m + 1];
    for s in 0..=m {
        let w = weights.log_prob(s);
        let inner = km_given_sm_pmf(&q.params, q.k, s);
        for (j, lp) in inner.log_probs().iter().enumerate() {
            acc[inner.support_min() + j].push(*lp * w);
        }
    }
    Pmf::new(0, acc.iter().map(|terms| LogValue::sum(terms)).collect())
}

/// `E[K_m | K_n = k] = ((theta + k alpha)/alpha) [(theta + alpha + n)_m / (theta + n)_m - 1]`.
pub fn km_mean(q: &PredictionQuery) -> f64 {
    let (a, t) = (q.params.alpha(), q.params.theta());
    let base = t + q.n as f64;
    q.new_weight() / a * ln_rising_ratio(base + a, base, q.m).exp_m1()
}

/// `E[K_m^r | K_n = k]` by the signless second-kind expansion with shift
/// `(theta + k alpha)/alpha`.
pub fn km_moment(q: &PredictionQuery, r: usize) -> Result<f64> {
    if r == 0 {
        return Err(Error::InvalidArgument("moment order r must be at least 1".into()));
    }
    if q.m == 0 {
        return Ok(0.0);
    }
    let (a, t) = (q.params.alpha(), q.params.theta());
    let gamma = Dd::from(q.new_weight()) / Dd::from(a);
    let base = Dd::from(t) + Dd::from(q.n);
    // At rho_j = 1 the signed sum vanishes (K_0 = 0), so only rho_j - 1 is summed.
    let deltas: Vec<Dd> = (1..=r)
        .map(|j| {
            if q.m <= DD_MAX_LEN {
                crate::dd::rising_ratio_minus_one(Dd::from(a) * Dd::from(j), base, q.m)
            } else {
                let b = t + q.n as f64;
                Dd::from(ln_rising_ratio(b + j as f64 * a, b, q.m).exp_m1())
            }
        })
        .collect();
    Ok(signed_moment_sum(r, gamma, gamma, &deltas).to_f64())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum IntervalMethod {
    /// Shortest contiguous set from the exact pmf; `m` must not exceed `cap`.
    Exact { cap: usize },
    /// Quantiles of `m^alpha Z` from limit-law draws, rounded outward.
    Asymptotic { samples: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CredibleInterval {
    pub lo: usize,
    pub hi: usize,
    /// Exact pmf mass (exact method) or fraction of draws (asymptotic) in `[lo, hi]`.
    pub coverage: f64,
    /// Whether the exact pmf was unimodal; `None` for the asymptotic method.
    pub unimodal: Option<bool>,
}

/// Minimum number of draws expected in each excluded tail.
const MIN_TAIL_DRAWS: f64 = 10.0;

pub fn credible_interval(q: &PredictionQuery, level: f64, method: IntervalMethod) -> Result<CredibleInterval> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidArgument(format!("level must lie in (0,1), got {level}")));
    }
    if q.m == 0 {
        return Ok(CredibleInterval { lo: 0, hi: 0, coverage: 1.0, unimodal: Some(true) });
    }
    match method {
        IntervalMethod::Exact { cap } => {
            if q.m > cap {
                return Err(Error::CapExceeded { m: q.m, cap });
            }
            let pmf = km_pmf(q)?;
            Ok(shortest_window(&pmf, level))
        }
        IntervalMethod::Asymptotic { samples, seed } => {
            let tail = 0.5 * (1.0 - level);
            if (samples as f64) * tail < MIN_TAIL_DRAWS {
                return Err(Error::InsufficientSample(format!(
                    "{samples} draws leave fewer than {MIN_TAIL_DRAWS} in each tail at level {level}"
                )));
            }
            let mut draws = asymptotics::sample_limit(&q.limit_law(), samples, seed)?;
            draws.sort_by(f64::total_cmp);
            let scale = (q.m as f64).powf(q.params.alpha());
            let q_lo = empirical_quantile(&draws, tail);
            let q_hi = empirical_quantile(&draws, 1.0 - tail);
            let lo = ((q_lo * scale).floor().max(0.0) as usize).min(q.m);
            let hi = ((q_hi * scale).ceil().max(0.0) as usize).min(q.m);
            let inside = draws
                .iter()
                .filter(|&&z| {
                    let x = z * scale;
                    x >= lo as f64 && x <= hi as f64
                })
                .count();
            Ok(CredibleInterval { lo, hi, coverage: inside as f64 / samples as f64, unimodal: None })
        }
    }
}

fn empirical_quantile(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    if i + 1 < sorted.len() {
        sorted[i] + frac * (sorted[i + 1] - sorted[i])
    } else {
        sorted[i]
    }
}

/// Smallest contiguous window with mass at least `level`; ties go to the
/// larger mass.
fn shortest_window(pmf: &Pmf, level: f64) -> CredibleInterval {
    let probs = pmf.probs();
    let mut best: Option<(usize, usize, f64)> = None;
    let mut hi = 0;
    let mut mass = 0.0;
    for lo in 0..probs.len() {
        if hi < lo {
            hi = lo;
            mass = 0.0;
        }
        // the running sum drifts; resum when it sits close to the threshold
        if (mass - level).abs() < 1e-9 {
            mass = probs[lo..hi].iter().sum();
        }
        while hi < probs.len() && mass < level {
            mass += probs[hi];
            hi += 1;
        }
        if mass < level {
            break;
        }
        let width = hi - lo;
        let better = match best {
            None => true,
            Some((bl, bh, bm)) => width < bh - bl || (width == bh - bl && mass > bm),
        };
        if better {
            best = Some((lo, hi, mass));
        }
        mass -= probs[lo];
    }
    // Rounding can leave the full support a hair below `level`.
    let (lo, hi, mass) = best.unwrap_or((0, probs.len(), probs.iter().sum()));
    let offset = pmf.support_min();
    CredibleInterval {
        lo: offset + lo,
        hi: offset + hi - 1,
        coverage: mass,
        unimodal: Some(is_unimodal(&probs)),
    }
}

fn is_unimodal(probs: &[f64]) -> bool {
    let mut descending = false;
    for w in probs.windows(2) {
        if w[1] < w[0] {
            descending = true;
        } else if descending && w[1] > w[0] {
            return false;
        }
    }
    true
}

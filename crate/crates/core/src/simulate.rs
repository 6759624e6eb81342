//! Forward simulation of the two-parameter Chinese restaurant process.
//!
//! Every batch routine gives run `i` its own ChaCha8 stream `i` under the
//! caller's seed, so results depend on `(seed, runs)` only and not on how
//! rayon schedules the work.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gof::{chi_square, ChiSquare};
use crate::params::PDParams;
use crate::prior::kn_pmf;

/// Block sizes of a seated sample, in order of creation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SeatState {
    block_sizes: Vec<u64>,
    n: u64,
}

impl SeatState {
    pub fn empty() -> Self {
        SeatState::default()
    }

    pub fn from_sizes(block_sizes: Vec<u64>) -> Result<Self> {
        if block_sizes.contains(&0) {
            return Err(Error::InvalidArgument("block sizes must be positive".into()));
        }
        let n = block_sizes.iter().sum();
        Ok(SeatState { block_sizes, n })
    }

    pub fn block_sizes(&self) -> &[u64] {
        &self.block_sizes
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn k(&self) -> usize {
        self.block_sizes.len()
    }

    /// Seat one customer; returns the block index chosen.
    pub fn seat<R: Rng + ?Sized>(&mut self, params: &PDParams, rng: &mut R) -> usize {
        let (a, t) = (params.alpha(), params.theta());
        let k = self.block_sizes.len();
        self.n += 1;
        if k == 0 {
            self.block_sizes.push(1);
            return 0;
        }
        let total = t + (self.n - 1) as f64;
        let mut u = rng.random::<f64>() * total;
        let new_weight = t + k as f64 * a;
        if u < new_weight {
            self.block_sizes.push(1);
            return k;
        }
        u -= new_weight;
        for (j, size) in self.block_sizes.iter_mut().enumerate() {
            let w = *size as f64 - a;
            if u < w || j == k - 1 {
                *size += 1;
                return j;
            }
            u -= w;
        }
        unreachable!("block list is non-empty")
    }
}

/// Probabilities of the next customer founding a new block, and of joining
/// each existing block.
pub fn seat_probabilities(state: &SeatState, params: &PDParams) -> (f64, Vec<f64>) {
    if state.k() == 0 {
        return (1.0, Vec::new());
    }
    let (a, t) = (params.alpha(), params.theta());
    let total = t + state.n() as f64;
    let new = (t + state.k() as f64 * a) / total;
    (new, state.block_sizes.iter().map(|&s| (s as f64 - a) / total).collect())
}

/// Generator for run `run` under `seed`.
pub fn run_rng(seed: u64, run: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run);
    rng
}

pub fn crp_sample_with<R: Rng + ?Sized>(params: &PDParams, n: usize, rng: &mut R) -> SeatState {
    let mut state = SeatState::empty();
    for _ in 0..n {
        state.seat(params, rng);
    }
    state
}

/// Seat `n` customers from an empty restaurant.
pub fn crp_sample(params: &PDParams, n: usize, seed: u64) -> Result<SeatState> {
    if n == 0 {
        return Err(Error::InvalidArgument("sample size n must be at least 1".into()));
    }
    Ok(crp_sample_with(params, n, &mut ChaCha8Rng::seed_from_u64(seed)))
}

/// Outcome of seating `m` more customers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Continuation {
    /// New blocks founded, `K_m`.
    pub k_new: usize,
    /// Customers seated in new blocks, `S_m`.
    pub s_new: usize,
}

pub fn continue_sample_with<R: Rng + ?Sized>(
    state: &SeatState,
    params: &PDParams,
    m: usize,
    rng: &mut R,
) -> (Continuation, SeatState) {
    let k0 = state.k();
    let mut next = state.clone();
    for _ in 0..m {
        next.seat(params, rng);
    }
    let s_new = next.block_sizes[k0..].iter().sum::<u64>() as usize;
    (Continuation { k_new: next.k() - k0, s_new }, next)
}

pub fn continue_sample(state: &SeatState, params: &PDParams, m: usize, seed: u64) -> (Continuation, SeatState) {
    continue_sample_with(state, params, m, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// `K_n` over independent runs.
pub fn simulate_kn(params: &PDParams, n: usize, runs: usize, seed: u64) -> Vec<usize> {
    (0..runs as u64)
        .into_par_iter()
        .map(|i| crp_sample_with(params, n, &mut run_rng(seed, i)).k())
        .collect()
}

/// Continuations of a fixed pilot state over independent runs.
pub fn simulate_continuations(
    params: &PDParams,
    pilot: &SeatState,
    m: usize,
    runs: usize,
    seed: u64,
) -> Vec<Continuation> {
    (0..runs as u64)
        .into_par_iter()
        .map(|i| continue_sample_with(pilot, params, m, &mut run_rng(seed, i)).0)
        .collect()
}

/// Continuations conditioned on `K_n = k`: each run redraws its pilot until
/// it has `k` blocks, giving up after `max_attempts` tries.
pub fn conditioned_continuations(
    params: &PDParams,
    n: usize,
    k: usize,
    m: usize,
    runs: usize,
    seed: u64,
    max_attempts: usize,
) -> Result<Vec<Continuation>> {
    if n == 0 || k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("need 1 <= k <= n, got n = {n}, k = {k}")));
    }
    (0..runs as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = run_rng(seed, i);
            for _ in 0..max_attempts {
                let pilot = crp_sample_with(params, n, &mut rng);
                if pilot.k() == k {
                    return Ok(continue_sample_with(&pilot, params, m, &mut rng).0);
                }
            }
            Err(Error::InsufficientSample(format!(
                "run {i}: no pilot with K_n = {k} in {max_attempts} attempts"
            )))
        })
        .collect()
}

/// Reference law for `K_m` within an `S_m = s` stratum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NullChoice {
    /// `PD(alpha, theta + k alpha)`, the law after deleting the `k` old blocks.
    Shifted,
    /// `PD(alpha, theta)`, a deliberately wrong control.
    Unshifted,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeletionConfig {
    pub null: NullChoice,
    /// Strata with fewer conditioned runs are skipped.
    pub min_stratum: usize,
    pub min_expected: f64,
    pub max_attempts: usize,
}

impl Default for DeletionConfig {
    fn default() -> Self {
        DeletionConfig { null: NullChoice::Shifted, min_stratum: 50, min_expected: 5.0, max_attempts: 100_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StratumStatus {
    Tested,
    /// The null law is a point mass (`s <= 1`); passes if every run matches.
    Degenerate,
    /// Fewer runs than the configured floor.
    Skipped,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StratumResult {
    pub s: usize,
    pub count: usize,
    pub status: StratumStatus,
    pub test: Option<ChiSquare>,
    /// For degenerate strata, whether every run fell on the point mass.
    pub consistent: bool,
}

impl StratumResult {
    pub fn p_value(&self) -> f64 {
        match (&self.status, &self.test) {
            (StratumStatus::Tested, Some(t)) => t.p_value,
            (StratumStatus::Degenerate, _) if !self.consistent => 0.0,
            _ => 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeletionReport {
    pub runs: usize,
    pub null: NullChoice,
    pub strata: Vec<StratumResult>,
}

impl DeletionReport {
    pub fn min_p_value(&self) -> f64 {
        self.strata.iter().map(StratumResult::p_value).fold(1.0, f64::min)
    }

    /// Whether any stratum rejects at level `alpha`.
    pub fn rejects(&self, level: f64) -> bool {
        self.min_p_value() < level
    }
}

/// Stratify conditioned continuations by `S_m` and test the law of `K_m` in
/// each stratum against the chosen null.
pub fn deletion_check(
    params: &PDParams,
    n: usize,
    k: usize,
    m: usize,
    runs: usize,
    seed: u64,
    config: DeletionConfig,
) -> Result<DeletionReport> {
    let draws = conditioned_continuations(params, n, k, m, runs, seed, config.max_attempts)?;
    let null_params = match config.null {
        NullChoice::Shifted => params.after_deletion(k),
        NullChoice::Unshifted => *params,
    };
    let mut by_s: Vec<Vec<u64>> = vec![Vec::new(); m + 1];
    for c in &draws {
        let row = &mut by_s[c.s_new];
        if row.len() <= c.k_new {
            row.resize(c.k_new + 1, 0);
        }
        row[c.k_new] += 1;
    }
    let mut strata = Vec::new();
    for (s, observed) in by_s.into_iter().enumerate() {
        let count = observed.iter().sum::<u64>() as usize;
        if count == 0 {
            continue;
        }
        let expected_point = s.min(1);
        if s <= 1 {
            let consistent = observed.iter().enumerate().all(|(x, &c)| c == 0 || x == expected_point);
            strata.push(StratumResult { s, count, status: StratumStatus::Degenerate, test: None, consistent });
            continue;
        }
        if count < config.min_stratum {
            strata.push(StratumResult { s, count, status: StratumStatus::Skipped, test: None, consistent: true });
            continue;
        }
        let null = kn_pmf(&null_params, s)?;
        let test = chi_square(&observed, &null, config.min_expected);
        let status = if test.is_some() { StratumStatus::Tested } else { StratumStatus::Skipped };
        strata.push(StratumResult { s, count, status, test, consistent: true });
    }
    if !strata.iter().any(|st| st.status == StratumStatus::Tested) {
        return Err(Error::InsufficientSample(format!(
            "no stratum with S_m >= 2 reached {} conditioned runs",
            config.min_stratum
        )));
    }
    Ok(DeletionReport { runs, null: config.null, strata })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> PDParams {
        PDParams::new(0.5, 0.5).unwrap()
    }

    #[test]
    fn one_customer() {
        let s = crp_sample(&p(), 1, 9).unwrap();
        assert_eq!(s.block_sizes(), &[1]);
        assert!(crp_sample(&p(), 0, 9).is_err());
    }

    #[test]
    fn zero_continuation() {
        let s = SeatState::from_sizes(vec![3, 1]).unwrap();
        let (c, next) = continue_sample(&s, &p(), 0, 1);
        assert_eq!(c, Continuation { k_new: 0, s_new: 0 });
        assert_eq!(next, s);
    }

    #[test]
    fn probabilities_sum_to_one() {
        let s = SeatState::from_sizes(vec![3, 1, 2]).unwrap();
        let (new, old) = seat_probabilities(&s, &PDParams::new(0.3, -0.2).unwrap());
        assert!((new + old.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn new_block_frequency() {
        let ks = simulate_kn(&p(), 2, 100_000, 5);
        let frac = ks.iter().filter(|&&k| k == 2).count() as f64 / ks.len() as f64;
        let se = (2.0f64 / 9.0 / 1e5).sqrt();
        assert!((frac - 2.0 / 3.0).abs() < 3.0 * se);
    }

    #[test]
    fn batches_are_thread_independent() {
        let a = simulate_kn(&p(), 20, 1000, 3);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| simulate_kn(&p(), 20, 1000, 3));
        assert_eq!(a, b);
    }

    #[test]
    fn conditioning_holds() {
        let draws = conditioned_continuations(&p(), 5, 2, 3, 200, 1, 10_000).unwrap();
        assert!(draws.iter().all(|c| c.s_new <= 3 && c.k_new <= c.s_new));
        assert!(conditioned_continuations(&p(), 2, 3, 1, 1, 1, 10).is_err());
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn seating_keeps_totals_consistent(alpha in 0.01f64..0.99, theta in 0.0f64..10.0, n in 1usize..200, seed in any::<u64>()) {
            let params = PDParams::new(alpha, theta).unwrap();
            let state = crp_sample(&params, n, seed).unwrap();
            prop_assert_eq!(state.n(), n);
            prop_assert_eq!(state.block_sizes().iter().sum::<u64>() as usize, n);
            prop_assert!(state.block_sizes().iter().all(|&b| b > 0));
            let (c, after) = continue_sample(&state, &params, 25, seed ^ 1);
            prop_assert_eq!(after.n(), n + 25);
            prop_assert_eq!(after.k(), state.k() + c.k_new);
            prop_assert!(c.k_new <= c.s_new && c.s_new <= 25);
        }

        #[test]
        fn seat_probabilities_sum_to_one(alpha in 0.01f64..0.99, theta in 0.0f64..10.0, sizes in proptest::collection::vec(1u64..20, 1..10)) {
            let params = PDParams::new(alpha, theta).unwrap();
            let state = SeatState::from_sizes(sizes).unwrap();
            let (new, old) = seat_probabilities(&state, &params);
            prop_assert!((new + old.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        }
    }
}

//! Cross-checks between the exact oracle, the closed forms and simulation.

use num_rational::BigRational;
use num_traits::{One, Zero};

use pdrich::conditional::{km_pmf, sm_pmf, PredictionQuery};
use pdrich::gof::{empirical_pmf, tv_distance};
use pdrich::oracle::{block_sizes, enumerate_partitions, exact_eppf, exact_km_pmf, exact_kn_pmf, exact_sm_pmf, RationalParams};
use pdrich::prior::{eppf_log, kn_pmf};
use pdrich::simulate::{crp_sample_with, continue_sample_with, run_rng, simulate_continuations, simulate_kn, SeatState};
use pdrich::{PDParams, PartitionData, Pmf};

fn rational_grid() -> Vec<RationalParams> {
    let mut out = Vec::new();
    for (an, ad) in [(1, 4), (1, 2), (3, 4)] {
        for (tn, td) in [(-1, 10), (1, 2), (2, 1), (10, 1)] {
            out.push(RationalParams::from_ratios(an, ad, tn, td).unwrap());
        }
    }
    out
}

#[test]
fn eppf_addition_rule_over_all_partitions() {
    for exact in rational_grid() {
        let params = exact.to_pd_params().unwrap();
        for n in 1..=8 {
            let mut exact_total = BigRational::zero();
            let mut float_total = 0.0;
            for rgs in enumerate_partitions(n).unwrap() {
                let sizes = block_sizes(&rgs);
                exact_total += exact_eppf(&exact, &sizes);
                float_total += eppf_log(&params, &PartitionData::new(sizes).unwrap()).exp();
            }
            assert!(exact_total.is_one(), "n = {n}");
            assert!((float_total - 1.0).abs() < 1e-12, "n = {n}: {float_total}");
        }
    }
}

#[test]
fn kn_pmf_matches_exact_enumeration() {
    for exact in rational_grid() {
        let params = exact.to_pd_params().unwrap();
        for n in 1..=10 {
            let oracle = exact_kn_pmf(&exact, n).unwrap().to_f64();
            let pmf = kn_pmf(&params, n).unwrap();
            for (i, p) in oracle.iter().enumerate() {
                assert!((pmf.prob(i + 1) - p).abs() < 1e-13);
            }
        }
    }
}

#[test]
fn joint_table_reproduces_beta_binomial_and_deletion_law() {
    let exact = RationalParams::from_ratios(1, 3, 1, 2).unwrap();
    let pilot = [3u64, 1, 1];
    let (n, k, m) = (5, 3, 5);
    let cont = exact_km_pmf(&exact, &pilot, m).unwrap();
    assert_eq!(cont.sm, exact_sm_pmf(&exact, n, k, m).unwrap());
    // Within the S_m = s slice, K_m follows K_s under PD(alpha, theta + k alpha).
    let shifted = RationalParams::new(exact.alpha().clone(), exact.theta() + exact.alpha() * BigRational::from_integer(k.into())).unwrap();
    for s in 1..=m {
        let inner = exact_kn_pmf(&shifted, s).unwrap();
        for j in 1..=s {
            assert_eq!(&cont.joint[j][s] / &cont.sm.probs[s], inner.prob(j), "s = {s}, j = {j}");
        }
    }
}

#[test]
fn pilot_multiplicities_do_not_matter_beyond_n_and_k() {
    for exact in rational_grid() {
        for m in 0..=6 {
            let a = exact_km_pmf(&exact, &[2, 1], m).unwrap();
            let b = exact_km_pmf(&exact, &[1, 2], m).unwrap();
            let c = exact_km_pmf(&exact, &[4, 1, 1], m).unwrap();
            let d = exact_km_pmf(&exact, &[2, 2, 2], m).unwrap();
            assert_eq!(a, b);
            assert_eq!(c.km, d.km);
        }
    }
}

fn tv(a: &[usize], b: &[usize]) -> f64 {
    let (pa, pb) = (empirical_pmf(a), empirical_pmf(b));
    let len = pa.len().max(pb.len());
    (0..len).map(|i| (pa.get(i).unwrap_or(&0.0) - pb.get(i).unwrap_or(&0.0)).abs()).sum::<f64>() / 2.0
}

#[test]
fn continuing_a_sample_matches_a_longer_sample() {
    let params = PDParams::new(0.4, 1.2).unwrap();
    let runs = 100_000u64;
    let two_stage: Vec<usize> = (0..runs)
        .map(|i| {
            let mut rng = run_rng(31, i);
            let pilot = crp_sample_with(&params, 8, &mut rng);
            continue_sample_with(&pilot, &params, 12, &mut rng).1.k()
        })
        .collect();
    let direct = simulate_kn(&params, 20, runs as usize, 32);
    assert!(tv(&two_stage, &direct) <= 0.01);
    assert!(tv_distance(&empirical_pmf(&direct), &kn_pmf(&params, 20).unwrap()) <= 0.01);
}

#[test]
fn continuation_law_depends_on_pilot_only_through_n_and_k() {
    let params = PDParams::new(0.5, 0.5).unwrap();
    let runs = 100_000;
    let k_of = |sizes: Vec<u64>, seed| -> Vec<usize> {
        simulate_continuations(&params, &SeatState::from_sizes(sizes).unwrap(), 10, runs, seed)
            .into_iter()
            .map(|c| c.k_new)
            .collect()
    };
    let a = k_of(vec![5, 1, 1], 41);
    let b = k_of(vec![3, 2, 2], 42);
    assert!(tv(&a, &b) <= 0.01);
    let q = PredictionQuery::new(params, 7, 3, 10).unwrap();
    assert!(tv_distance(&empirical_pmf(&a), &km_pmf(&q).unwrap()) <= 0.01);
}

#[test]
fn sm_pmf_matches_exact_beta_binomial() {
    for exact in rational_grid() {
        let params = exact.to_pd_params().unwrap();
        for (n, k, m) in [(1, 1, 7), (6, 2, 12), (9, 9, 4)] {
            let oracle = exact_sm_pmf(&exact, n, k, m).unwrap().to_f64();
            let sm: Pmf = sm_pmf(&PredictionQuery::new(params, n, k, m).unwrap());
            for (s, p) in oracle.iter().enumerate() {
                assert!((sm.prob(s) - p).abs() < 1e-13);
            }
        }
    }
}

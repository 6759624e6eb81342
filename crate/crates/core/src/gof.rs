//! Goodness-of-fit statistics for the Monte Carlo checks.

use statrs::function::gamma::gamma_ur;

use crate::pmf::Pmf;

/// Sample mean and standard error of the mean.
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Relative frequencies of integer outcomes as a dense table from `0`.
pub fn empirical_pmf(values: &[usize]) -> Vec<f64> {
    let max = values.iter().copied().max().unwrap_or(0);
    let mut counts = vec![0.0; max + 1];
    for &v in values {
        counts[v] += 1.0;
    }
    let n = values.len() as f64;
    counts.iter_mut().for_each(|c| *c /= n);
    counts
}

/// Total variation between an empirical table (indexed from `0`) and a pmf.
pub fn tv_distance(empirical: &[f64], exact: &Pmf) -> f64 {
    let hi = (empirical.len()).max(exact.support_max() + 1);
    0.5 * (0..hi)
        .map(|x| (empirical.get(x).copied().unwrap_or(0.0) - exact.prob(x)).abs())
        .sum::<f64>()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    /// Number of cells after merging.
    pub cells: usize,
}

/// Pearson chi-square of observed counts against a pmf. Adjacent cells are
/// merged from both tails inward until every expected count is at least
/// `min_expected`. `None` when fewer than two cells survive.
pub fn chi_square(observed: &[u64], exact: &Pmf, min_expected: f64) -> Option<ChiSquare> {
    let total: u64 = observed.iter().sum();
    if total == 0 {
        return None;
    }
    let hi = observed.len().max(exact.support_max() + 1);
    let mut cells: Vec<(f64, f64)> = (0..hi)
        .map(|x| {
            let o = observed.get(x).copied().unwrap_or(0) as f64;
            (o, exact.prob(x) * total as f64)
        })
        .collect();
    // drop leading/trailing cells with nothing expected or observed
    while cells.first().is_some_and(|&(o, e)| o == 0.0 && e == 0.0) {
        cells.remove(0);
    }
    while cells.last().is_some_and(|&(o, e)| o == 0.0 && e == 0.0) {
        cells.pop();
    }
    let merged = merge_cells(cells, min_expected);
    if merged.len() < 2 {
        return None;
    }
    let statistic: f64 = merged
        .iter()
        .map(|&(o, e)| if e > 0.0 { (o - e).powi(2) / e } else if o > 0.0 { f64::INFINITY } else { 0.0 })
        .sum();
    let dof = merged.len() - 1;
    let p_value = if statistic <= 0.0 {
        1.0
    } else if statistic.is_finite() {
        gamma_ur(dof as f64 / 2.0, statistic / 2.0)
    } else {
        0.0
    };
    Some(ChiSquare { statistic, dof, p_value, cells: merged.len() })
}

fn merge_cells(mut cells: Vec<(f64, f64)>, min_expected: f64) -> Vec<(f64, f64)> {
    // left tail
    while cells.len() > 1 && cells[0].1 < min_expected {
        let (o, e) = cells.remove(0);
        cells[0].0 += o;
        cells[0].1 += e;
    }
    // right tail
    while cells.len() > 1 && cells[cells.len() - 1].1 < min_expected {
        let (o, e) = cells.pop().expect("non-empty");
        let last = cells.len() - 1;
        cells[last].0 += o;
        cells[last].1 += e;
    }
    // interior cells still short: fold into the right neighbor
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(cells.len());
    let mut pending = (0.0, 0.0);
    for (o, e) in cells {
        pending.0 += o;
        pending.1 += e;
        if pending.1 >= min_expected {
            out.push(pending);
            pending = (0.0, 0.0);
        }
    }
    if pending.1 > 0.0 || pending.0 > 0.0 {
        match out.last_mut() {
            Some(last) => {
                last.0 += pending.0;
                last.1 += pending.1;
            }
            None => out.push(pending),
        }
    }
    out
}

/// Asymptotic Kolmogorov survival function `P(K > x)`.
pub fn kolmogorov_sf(x: f64) -> f64 {
    if x < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for j in 1..=100 {
        let j = j as f64;
        let term = (-2.0 * j * j * x * x).exp();
        sum += if j as u64 % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

fn ks_p(d: f64, effective_n: f64) -> f64 {
    let s = effective_n.sqrt();
    kolmogorov_sf((s + 0.12 + 0.11 / s) * d)
}

/// One-sample Kolmogorov-Smirnov test; `cdf` must be continuous.
pub fn ks_one_sample<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> KsResult {
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    KsResult { statistic: d, p_value: ks_p(d, n) }
}

/// Two-sample Kolmogorov-Smirnov test.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> KsResult {
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let (n, m) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < xs.len() && j < ys.len() {
        let x = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= x {
            i += 1;
        }
        while j < ys.len() && ys[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    KsResult { statistic: d, p_value: ks_p(d, n * m / (n + m)) }
}

/// Piecewise-linear interpolation of a tabulated CDF, clamped to `[0, 1]`.
pub fn interpolate_cdf(grid: &[f64], values: &[f64], x: f64) -> f64 {
    match grid.partition_point(|&g| g <= x) {
        0 => 0.0,
        i if i == grid.len() => values[grid.len() - 1].min(1.0),
        i => {
            let (g0, g1) = (grid[i - 1], grid[i]);
            let (v0, v1) = (values[i - 1], values[i]);
            (v0 + (v1 - v0) * (x - g0) / (g1 - g0)).clamp(0.0, 1.0)
        }
    }
}

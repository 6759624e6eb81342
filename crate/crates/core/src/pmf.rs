use crate::logspace::LogValue;

/// A finite pmf on the contiguous support `support_min ..= support_min + len - 1`,
/// stored as log-probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct Pmf {
    support_min: usize,
    log_probs: Vec<LogValue>,
}

impl Pmf {
    pub fn new(support_min: usize, log_probs: Vec<LogValue>) -> Self {
        assert!(!log_probs.is_empty(), "empty pmf");
        Pmf { support_min, log_probs }
    }

    pub fn point_mass(at: usize) -> Self {
        Pmf { support_min: at, log_probs: vec![LogValue::ONE] }
    }

    pub fn support_min(&self) -> usize {
        self.support_min
    }

    pub fn support_max(&self) -> usize {
        self.support_min + self.log_probs.len() - 1
    }

    pub fn len(&self) -> usize {
        self.log_probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_probs.is_empty()
    }

    pub fn log_probs(&self) -> &[LogValue] {
        &self.log_probs
    }

    /// Probability at `x`; zero off the support.
    pub fn prob(&self, x: usize) -> f64 {
        self.log_prob(x).value()
    }

    pub fn log_prob(&self, x: usize) -> LogValue {
        if x < self.support_min {
            return LogValue::ZERO;
        }
        self.log_probs.get(x - self.support_min).copied().unwrap_or(LogValue::ZERO)
    }

    pub fn probs(&self) -> Vec<f64> {
        self.log_probs.iter().map(|p| p.value()).collect()
    }

    /// `(value, probability)` pairs over the support.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.log_probs
            .iter()
            .enumerate()
            .map(move |(i, p)| (self.support_min + i, p.value()))
    }

    pub fn total(&self) -> f64 {
        self.iter().map(|(_, p)| p).sum()
    }

    pub fn mean(&self) -> f64 {
        self.moment(1)
    }

    /// Raw moment `sum x^r p(x)`.
    pub fn moment(&self, r: u32) -> f64 {
        self.iter().map(|(x, p)| (x as f64).powi(r as i32) * p).sum()
    }

    /// Total-variation distance to another pmf (union of supports).
    pub fn total_variation(&self, other: &Pmf) -> f64 {
        let lo = self.support_min.min(other.support_min);
        let hi = self.support_max().max(other.support_max());
        0.5 * (lo..=hi).map(|x| (self.prob(x) - other.prob(x)).abs()).sum::<f64>()
    }

    /// Index of the largest mass (first on ties).
    pub fn mode(&self) -> usize {
        let mut best = 0;
        for (i, p) in self.log_probs.iter().enumerate() {
            if *p > self.log_probs[best] {
                best = i;
            }
        }
        self.support_min + best
    }
}

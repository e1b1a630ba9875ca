//! Validated observation vectors.

use crate::error::{Error, Result};
use crate::transform::SupportInterval;

/// Observations stored sorted ascending, all strictly inside the support.
/// A cumulative-sum table backs the O(log n) tail reductions used by the
/// empirical and kernel estimators.
#[derive(Debug, Clone)]
pub struct Sample {
    values: Vec<f64>,
    support: SupportInterval,
    // prefix[k] = sum of the first k sorted values
    prefix: Vec<f64>,
}

impl Sample {
    pub fn new(mut values: Vec<f64>, support: SupportInterval) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSample("at least one observation needed".into()));
        }
        for &v in &values {
            if !v.is_finite() {
                return Err(Error::InvalidSample(format!("non-finite observation {v}")));
            }
            if !support.contains(v) {
                return Err(Error::InvalidSample(format!(
                    "observation {v} is not strictly inside the support {support}"
                )));
            }
        }
        values.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite values"));
        let mut prefix = Vec::with_capacity(values.len() + 1);
        let mut acc = 0.0;
        prefix.push(0.0);
        for &v in &values {
            acc += v;
            prefix.push(acc);
        }
        Ok(Self {
            values,
            support,
            prefix,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn support(&self) -> SupportInterval {
        self.support
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.prefix[self.len()] / self.len() as f64
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().expect("non-empty")
    }

    /// Number of observations strictly greater than `t`.
    pub fn count_above(&self, t: f64) -> usize {
        self.len() - self.values.partition_point(|&x| x <= t)
    }

    /// Sum of the observations strictly greater than `t`.
    pub fn sum_above(&self, t: f64) -> f64 {
        let idx = self.values.partition_point(|&x| x <= t);
        self.prefix[self.len()] - self.prefix[idx]
    }

    /// Sum of values[lo..hi] from the prefix table.
    pub(crate) fn range_sum(&self, lo: usize, hi: usize) -> f64 {
        self.prefix[hi] - self.prefix[lo]
    }

    /// Unbiased sample standard deviation.
    pub fn std_dev(&self) -> f64 {
        if self.len() < 2 {
            return 0.0;
        }
        let m = self.mean();
        let ss: f64 = self.values.iter().map(|&v| (v - m) * (v - m)).sum();
        (ss / (self.len() - 1) as f64).sqrt()
    }
}

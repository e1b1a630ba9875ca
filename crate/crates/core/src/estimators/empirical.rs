//! The empirical estimator: indicator sums over the raw observations.

use crate::error::Result;
use crate::sample::Sample;

use super::{check_domain, PointFlag};

/// S_n(t) = n⁻¹ Σ 1{Xᵢ > t}
pub fn empirical_survival(sample: &Sample, t: f64) -> Result<f64> {
    check_domain(sample, t)?;
    Ok(sample.count_above(t) as f64 / sample.len() as f64)
}

/// 𝕊_n(t) = n⁻¹ Σ (Xᵢ - t) 1{Xᵢ > t}
pub fn empirical_cum_survival(sample: &Sample, t: f64) -> Result<f64> {
    check_domain(sample, t)?;
    let k = sample.count_above(t) as f64;
    Ok((sample.sum_above(t) - k * t) / sample.len() as f64)
}

/// m_n(t) = Σ (Xᵢ - t) 1{Xᵢ > t} / Σ 1{Xᵢ > t}, defined as 0 with a
/// tail-degenerate flag once no observation exceeds t.
pub fn empirical_mrl(sample: &Sample, t: f64) -> Result<(f64, PointFlag)> {
    check_domain(sample, t)?;
    let k = sample.count_above(t);
    if k == 0 {
        return Ok((0.0, PointFlag::TailDegenerate));
    }
    let value = (sample.sum_above(t) - k as f64 * t) / k as f64;
    Ok((value, PointFlag::Ok))
}

//! The naive kernel estimator, smoothing directly on the data scale.
//!
//! Ŝ(t) = n⁻¹ Σ V((t - Xᵢ)/h) and 𝕊̂(t) = (h/n) Σ 𝕍((t - Xᵢ)/h).
//! Observations outside the kernel window contribute their exact tails:
//! V = 1 and 𝕍 = (Xᵢ - t)/h to the right, nothing to the left.

use crate::error::Result;
use crate::kernel::Kernel;
use crate::sample::Sample;

use super::{check_bandwidth, check_domain, PointEstimate, PointFlag};

pub fn naive_kernel_curves(
    sample: &Sample,
    kernel: Kernel,
    h: f64,
    t: f64,
) -> Result<PointEstimate> {
    check_domain(sample, t)?;
    check_bandwidth(h)?;
    let wr = kernel.window_radius() * h;
    let values = sample.values();
    let n = sample.len();
    let lo_idx = values.partition_point(|&v| v <= t - wr);
    let hi_idx = values.partition_point(|&v| v < t + wr);
    let n_right = n - hi_idx;

    let mut v_sum = n_right as f64;
    let mut vv_sum = (sample.range_sum(hi_idx, n) - n_right as f64 * t) / h;
    for &xi in &values[lo_idx..hi_idx] {
        let u = (t - xi) / h;
        v_sum += kernel.survival(u);
        vv_sum += kernel.integrated_survival(u);
    }

    let survival = v_sum / n as f64;
    let cum_survival = h * vv_sum / n as f64;
    if survival <= 0.0 {
        return Ok(PointEstimate {
            survival: 0.0,
            cum_survival: 0.0,
            mrl: 0.0,
            flag: PointFlag::TailDegenerate,
        });
    }
    Ok(PointEstimate {
        survival,
        cum_survival,
        mrl: cum_survival / survival,
        flag: PointFlag::Ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::SupportInterval;
    use approx::assert_relative_eq;

    fn single_point() -> Sample {
        Sample::new(vec![1.0], SupportInterval::half_line(0.0).unwrap()).unwrap()
    }

    #[test]
    fn single_observation_closed_form() {
        // at t = X the kernel sits centred: S = V(0), 𝕊 = h·𝕍(0)
        let p = naive_kernel_curves(&single_point(), Kernel::Epanechnikov, 0.5, 1.0).unwrap();
        assert_relative_eq!(p.survival, 0.5, max_relative = 1e-15);
        assert_relative_eq!(p.cum_survival, 0.5 * 0.1875, max_relative = 1e-15);
        assert_relative_eq!(p.mrl, 0.1875, max_relative = 1e-15);
        assert_eq!(p.flag, PointFlag::Ok);
    }

    #[test]
    fn beyond_kernel_reach_is_degenerate() {
        let p = naive_kernel_curves(&single_point(), Kernel::Epanechnikov, 0.5, 2.0).unwrap();
        assert_eq!(p.survival, 0.0);
        assert_eq!(p.mrl, 0.0);
        assert_eq!(p.flag, PointFlag::TailDegenerate);
    }

    #[test]
    fn far_left_asymptotes() {
        // V → 1 and 𝕍 → -(t-X)/h turn the estimate into (1, X̄ - t)
        for kernel in [Kernel::Epanechnikov, Kernel::Gaussian] {
            let t = 0.001;
            let p = naive_kernel_curves(&single_point(), kernel, 0.1, t).unwrap();
            assert_relative_eq!(p.survival, 1.0, max_relative = 1e-12);
            assert_relative_eq!(p.cum_survival, 1.0 - t, max_relative = 1e-12);
        }
    }

    #[test]
    fn window_pruning_matches_direct_sum() {
        let values = vec![0.5, 0.9, 1.3, 2.0, 3.5, 4.1];
        let sample =
            Sample::new(values.clone(), SupportInterval::half_line(0.0).unwrap()).unwrap();
        let h = 0.4;
        for &t in &[0.6, 1.0, 2.5, 3.9] {
            let p = naive_kernel_curves(&sample, Kernel::Epanechnikov, h, t).unwrap();
            let n = values.len() as f64;
            let direct_s: f64 = values
                .iter()
                .map(|&x| Kernel::Epanechnikov.survival((t - x) / h))
                .sum::<f64>()
                / n;
            let direct_ss: f64 = h * values
                .iter()
                .map(|&x| Kernel::Epanechnikov.integrated_survival((t - x) / h))
                .sum::<f64>()
                / n;
            assert_relative_eq!(p.survival, direct_s, max_relative = 1e-13);
            assert_relative_eq!(p.cum_survival, direct_ss, max_relative = 1e-13);
        }
    }
}

//! Cross-method invariants that tie the estimators together.

use std::sync::Arc;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use mrl_core::bandwidth::select_bandwidth_lscv;
use mrl_core::distributions::TrueDistribution;
use mrl_core::estimators::{
    evaluate_curve, naive_kernel_curves, t1_cum_survival, t2_cum_survival, transformed_mrl,
    EstimatorSpec, Method, PointFlag, Variant,
};
use mrl_core::kernel::Kernel;
use mrl_core::sample::Sample;
use mrl_core::simulation::{
    bias_profile, sample_distribution, BandwidthPolicy, EstimatorTemplate, SimulationConfig,
};
use mrl_core::transform::{ExpTransform, IdentityTransform, Transform};

#[test]
fn naive_estimator_equals_transformed_two_through_the_identity_map() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let dist = TrueDistribution::exponential(1.0).unwrap();
    let sample = sample_distribution(&dist, 40, &mut rng).unwrap();
    let identity = IdentityTransform;
    for kernel in [Kernel::Epanechnikov, Kernel::Gaussian] {
        for &t in &[0.05, 0.4, 1.0, 2.2, 3.7] {
            let h = 0.5;
            let naive = naive_kernel_curves(&sample, kernel, h, t).unwrap();
            let s2 = mrl_core::estimators::t2_survival(&sample, &identity, kernel, h, t).unwrap();
            let ss2 = t2_cum_survival(&sample, &identity, kernel, h, t).unwrap();
            assert!(
                (naive.survival - s2).abs() <= 1e-12,
                "{} survival at {t}: {} vs {s2}",
                kernel.name(),
                naive.survival
            );
            assert!(
                (naive.cum_survival - ss2).abs() <= 1e-10 * ss2.abs().max(1.0),
                "{} cumulative at {t}: {} vs {ss2}",
                kernel.name(),
                naive.cum_survival
            );
        }
    }
}

#[test]
fn single_term_cumulative_survival_matches_riemann_oracle() {
    // one observation at e, log transform, h = 1/2, evaluated at t = 1
    let sample = Sample::new(
        vec![std::f64::consts::E],
        mrl_core::transform::SupportInterval::half_line(0.0).unwrap(),
    )
    .unwrap();
    let tr = ExpTransform::new(0.0).unwrap();
    let kernel = Kernel::Epanechnikov;
    let h = 0.5;
    let x = tr.inverse(1.0); // 0
    let y = 1.0f64;

    let steps = 1_000_000;
    let riemann = |lo: f64, hi: f64, f: &dyn Fn(f64) -> f64| -> f64 {
        let dz = (hi - lo) / steps as f64;
        (0..steps)
            .map(|k| f(lo + (k as f64 + 0.5) * dz))
            .sum::<f64>()
            * dz
    };

    let oracle1 = riemann(x, y + h, &|z| tr.d1(z) * kernel.survival((z - y) / h));
    let v1 = t1_cum_survival(&sample, &tr, kernel, h, 1.0).unwrap();
    assert!(
        (v1 - oracle1).abs() < 1e-8,
        "𝕍₁ {v1} vs oracle {oracle1}"
    );

    let oracle2 = riemann(x - h, y, &|z| tr.d1(z) * kernel.survival((x - z) / h));
    let v2 = t2_cum_survival(&sample, &tr, kernel, h, 1.0).unwrap();
    assert!(
        (v2 - oracle2).abs() < 1e-8,
        "𝕍₂ {v2} vs oracle {oracle2}"
    );
}

#[test]
fn transformed_survival_curves_are_monotone_probabilities() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let dist = TrueDistribution::uniform(0.0, 1.0).unwrap();
    let sample = sample_distribution(&dist, 50, &mut rng).unwrap();
    let transform = dist.default_transform();
    let grid: Vec<f64> = (0..200)
        .map(|k| 0.002 + 0.996 * k as f64 / 199.0)
        .collect();
    let spec = EstimatorSpec::new(
        Method::Transformed2,
        Kernel::Epanechnikov,
        transform,
        0.6,
    )
    .unwrap();
    let curve = evaluate_curve(&spec, &sample, &grid).unwrap();
    for pair in curve.survival.windows(2) {
        assert!(pair[1] <= pair[0] + 1e-12, "survival not monotone: {pair:?}");
    }
    for &s in &curve.survival {
        assert!((0.0..=1.0).contains(&s) || s <= 1.0 + 1e-12);
    }
    // the same property for the first variant's survival (identical sum)
    let spec1 = EstimatorSpec::new(
        Method::Transformed1,
        Kernel::Gaussian,
        dist.default_transform(),
        0.4,
    )
    .unwrap();
    let curve1 = evaluate_curve(&spec1, &sample, &grid).unwrap();
    for pair in curve1.survival.windows(2) {
        assert!(pair[1] <= pair[0] + 1e-12);
    }
}

#[test]
fn compact_kernel_flags_points_beyond_reach() {
    let sample = Sample::new(
        vec![0.5, 1.0, 1.5],
        mrl_core::transform::SupportInterval::half_line(0.0).unwrap(),
    )
    .unwrap();
    let tr: Arc<dyn Transform> = Arc::new(ExpTransform::new(0.0).unwrap());
    let spec = EstimatorSpec::new(Method::Transformed2, Kernel::Epanechnikov, tr, 0.3).unwrap();
    // last point far beyond max·e^h on the original scale
    let grid = vec![0.5, 1.0, 8.0];
    let curve = evaluate_curve(&spec, &sample, &grid).unwrap();
    assert_eq!(curve.flags[0], PointFlag::Ok);
    assert_eq!(curve.flags[2], PointFlag::TailDegenerate);
    assert_eq!(curve.mrl[2], 0.0);
}

#[test]
fn naive_and_transformed_agree_in_the_interior() {
    // boundary correction targets the edges: at the median the two kernel
    // estimates sit within a loose O(h²) sanity band of each other
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let dist = TrueDistribution::exponential(1.0).unwrap();
    let sample = sample_distribution(&dist, 500, &mut rng).unwrap();
    let median = sample.values()[250];
    let tr = ExpTransform::new(0.0).unwrap();

    let h_naive = select_bandwidth_lscv(&sample, &IdentityTransform, Kernel::Epanechnikov).unwrap();
    let naive = naive_kernel_curves(&sample, Kernel::Epanechnikov, h_naive, median).unwrap();

    let h_t2 = select_bandwidth_lscv(&sample, &tr, Kernel::Epanechnikov).unwrap();
    let (m_t2, flag) =
        transformed_mrl(&sample, &tr, Kernel::Epanechnikov, h_t2, median, Variant::Two).unwrap();
    assert_eq!(flag, PointFlag::Ok);
    assert!(
        (naive.mrl - m_t2).abs() < 0.5,
        "naive {} vs transformed {m_t2} at the median {median}",
        naive.mrl
    );
}

#[test]
fn transformed_two_bias_profile_is_flat_at_the_boundary() {
    // mean error of m̃₂ at t ≈ 0 stays within Monte-Carlo noise of zero,
    // while the naive estimator's boundary bias is significantly larger
    let t2_only = vec![EstimatorTemplate {
        method: Method::Transformed2,
        kernel: Kernel::Epanechnikov,
        bandwidth: BandwidthPolicy::Lscv,
    }];
    let config = SimulationConfig::new(
        TrueDistribution::abs_normal(),
        50,
        500,
        t2_only,
        31_415,
    );
    let profiles = bias_profile(&config, &[0.01]).unwrap();
    let p = &profiles[0].points[0];
    assert!(
        p.mean_error.abs() <= 3.0 * p.mc_se,
        "boundary bias {} exceeds 3·se {}",
        p.mean_error,
        p.mc_se
    );

    let both = vec![
        EstimatorTemplate {
            method: Method::NaiveKernel,
            kernel: Kernel::Epanechnikov,
            bandwidth: BandwidthPolicy::Lscv,
        },
        EstimatorTemplate {
            method: Method::Transformed2,
            kernel: Kernel::Epanechnikov,
            bandwidth: BandwidthPolicy::Lscv,
        },
    ];
    let config = SimulationConfig::new(
        TrueDistribution::exponential(0.5).unwrap(),
        50,
        500,
        both,
        27_182,
    );
    let profiles = bias_profile(&config, &[0.02]).unwrap();
    let naive = &profiles[0].points[0];
    let t2 = &profiles[1].points[0];
    let combined = (naive.mc_se.powi(2) + t2.mc_se.powi(2)).sqrt();
    assert!(
        naive.mean_error.abs() > t2.mean_error.abs() + 2.0 * combined,
        "naive boundary bias {} not significantly larger than transformed {}",
        naive.mean_error,
        t2.mean_error
    );
}

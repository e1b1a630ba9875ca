//! Bijective maps g: ℝ → Ω from the real line onto the data support,
//! together with their first two derivatives and inverses.
//!
//! Two families cover the supports the estimators target: a shifted
//! exponential for half-lines (lower, ∞) and an affine probit for bounded
//! intervals (lower, upper). The identity map exists so the untransformed
//! estimator can be driven through the same code path for cross-checks.

use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::normal;
use crate::quad;

/// The support Ω = (lower, upper) of the observed variable. Endpoints are
/// open; at most one may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportInterval {
    lower: f64,
    upper: f64,
}

impl SupportInterval {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if lower.is_nan() || upper.is_nan() {
            return Err(Error::InvalidSupport("endpoints must not be NaN".into()));
        }
        if !(lower < upper) {
            return Err(Error::InvalidSupport(format!(
                "lower endpoint {lower} must be below upper endpoint {upper}"
            )));
        }
        if lower.is_infinite() && upper.is_infinite() {
            return Err(Error::InvalidSupport(
                "at most one endpoint may be infinite".into(),
            ));
        }
        Ok(Self { lower, upper })
    }

    /// (lower, ∞)
    pub fn half_line(lower: f64) -> Result<Self> {
        Self::new(lower, f64::INFINITY)
    }

    /// (lower, upper) with both endpoints finite.
    pub fn bounded(lower: f64, upper: f64) -> Result<Self> {
        if !lower.is_finite() || !upper.is_finite() {
            return Err(Error::InvalidSupport(
                "a bounded support needs two finite endpoints".into(),
            ));
        }
        Self::new(lower, upper)
    }

    /// The whole real line. Outside the bounded/half-bounded setting of
    /// the estimators; only the identity transform uses it.
    pub fn real_line() -> Self {
        Self {
            lower: f64::NEG_INFINITY,
            upper: f64::INFINITY,
        }
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    /// Strict interior membership.
    pub fn contains(&self, t: f64) -> bool {
        t.is_finite() && t > self.lower && t < self.upper
    }

    pub fn contains_interval(&self, other: &SupportInterval) -> bool {
        self.lower <= other.lower && other.upper <= self.upper
    }

    pub fn is_bounded(&self) -> bool {
        self.lower.is_finite() && self.upper.is_finite()
    }
}

impl std::fmt::Display for SupportInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.lower, self.upper)
    }
}

/// A strictly increasing bijection g: ℝ → Ω with two derivatives.
pub trait Transform: Send + Sync {
    fn support(&self) -> SupportInterval;
    /// g(y)
    fn forward(&self, y: f64) -> f64;
    /// g⁻¹(t) for t strictly inside Ω.
    fn inverse(&self, t: f64) -> f64;
    /// g′(y)
    fn d1(&self, y: f64) -> f64;
    /// g″(y)
    fn d2(&self, y: f64) -> f64;
    fn name(&self) -> &'static str;
    /// True for the identity map, which performs no transformation.
    fn is_identity(&self) -> bool {
        false
    }
}

/// g(y) = lower + e^y onto (lower, ∞); g⁻¹ is the shifted logarithm.
#[derive(Debug, Clone, Copy)]
pub struct ExpTransform {
    lower: f64,
}

impl ExpTransform {
    pub fn new(lower: f64) -> Result<Self> {
        if !lower.is_finite() {
            return Err(Error::InvalidSupport(
                "the exp transform needs a finite lower endpoint".into(),
            ));
        }
        Ok(Self { lower })
    }
}

impl Transform for ExpTransform {
    fn support(&self) -> SupportInterval {
        SupportInterval {
            lower: self.lower,
            upper: f64::INFINITY,
        }
    }

    fn forward(&self, y: f64) -> f64 {
        self.lower + y.exp()
    }

    fn inverse(&self, t: f64) -> f64 {
        (t - self.lower).ln()
    }

    fn d1(&self, y: f64) -> f64 {
        y.exp()
    }

    fn d2(&self, y: f64) -> f64 {
        y.exp()
    }

    fn name(&self) -> &'static str {
        "log"
    }
}

/// g(y) = lower + (upper - lower)·Φ(y) onto (lower, upper).
#[derive(Debug, Clone, Copy)]
pub struct ProbitTransform {
    lower: f64,
    width: f64,
}

impl ProbitTransform {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        let support = SupportInterval::bounded(lower, upper)?;
        Ok(Self {
            lower: support.lower,
            width: support.upper - support.lower,
        })
    }
}

impl Transform for ProbitTransform {
    fn support(&self) -> SupportInterval {
        SupportInterval {
            lower: self.lower,
            upper: self.lower + self.width,
        }
    }

    fn forward(&self, y: f64) -> f64 {
        self.lower + self.width * normal::cdf(y)
    }

    fn inverse(&self, t: f64) -> f64 {
        normal::quantile((t - self.lower) / self.width)
    }

    fn d1(&self, y: f64) -> f64 {
        self.width * normal::pdf(y)
    }

    fn d2(&self, y: f64) -> f64 {
        -self.width * y * normal::pdf(y)
    }

    fn name(&self) -> &'static str {
        "probit"
    }
}

/// g(y) = y. Disables the transformation; the transformed estimators then
/// coincide with the naive kernel estimator.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityTransform;

impl Transform for IdentityTransform {
    fn support(&self) -> SupportInterval {
        SupportInterval::real_line()
    }

    fn forward(&self, y: f64) -> f64 {
        y
    }

    fn inverse(&self, t: f64) -> f64 {
        t
    }

    fn d1(&self, _y: f64) -> f64 {
        1.0
    }

    fn d2(&self, _y: f64) -> f64 {
        0.0
    }

    fn name(&self) -> &'static str {
        "identity"
    }

    fn is_identity(&self) -> bool {
        true
    }
}

/// Outcome of one named transform check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Numerically verifies that a transform behaves like a twice-differentiable
/// strictly increasing bijection compatible with the given kernel:
/// monotonicity on a grid, round-trip identity, derivative consistency
/// against central finite differences, and finiteness of ∫ g′(uy) K(y) dy
/// for u near 0. Reports named failures instead of aborting.
pub fn validate_transform(tr: &dyn Transform, kernel: Kernel) -> Vec<CheckResult> {
    let mut results = Vec::with_capacity(4);

    // monotonicity: strictly increasing where f64 resolves the increments,
    // non-decreasing out to ±30, g′ > 0 on [-5, 5]
    {
        let mut passed = true;
        let mut detail = String::from("g strictly increasing, g' > 0");
        let mut prev = tr.forward(-7.5);
        let mut y = -7.25;
        while y <= 7.5 {
            let cur = tr.forward(y);
            if cur <= prev {
                passed = false;
                detail = format!("g not strictly increasing at y = {y}");
                break;
            }
            prev = cur;
            y += 0.25;
        }
        if passed && (tr.forward(-30.0) > tr.forward(-7.5) || tr.forward(30.0) < tr.forward(7.5)) {
            passed = false;
            detail = "g not monotone out to y = ±30".into();
        }
        if passed {
            let mut y = -5.0;
            while y <= 5.0 {
                if !(tr.d1(y) > 0.0) {
                    passed = false;
                    detail = format!("g'({y}) = {} is not positive", tr.d1(y));
                    break;
                }
                y += 0.1;
            }
        }
        results.push(CheckResult {
            name: "monotonicity",
            passed,
            detail,
        });
    }

    // round trip g(g⁻¹(t)) = t on interior points
    {
        let mut worst = 0.0f64;
        let mut passed = true;
        let mut y = -6.0;
        while y <= 6.0 {
            let t = tr.forward(y);
            if tr.support().contains(t) {
                let back = tr.forward(tr.inverse(t));
                let rel = (back - t).abs() / t.abs().max(1.0);
                worst = worst.max(rel);
                if rel > 1e-12 {
                    passed = false;
                }
            }
            y += 0.2;
        }
        results.push(CheckResult {
            name: "round_trip",
            passed,
            detail: format!("max relative round-trip error {worst:.3e}"),
        });
    }

    // derivative consistency: FD of g vs g′ and FD of g′ vs g″ at |y| ≤ 5
    {
        let step = 1e-5;
        let mut passed = true;
        let mut detail = String::from("finite differences agree with g' and g''");
        let mut y = -5.0;
        while y <= 5.0 {
            let fd1 = (tr.forward(y + step) - tr.forward(y - step)) / (2.0 * step);
            let fd2 = (tr.d1(y + step) - tr.d1(y - step)) / (2.0 * step);
            let d1 = tr.d1(y);
            let d2 = tr.d2(y);
            let scale1 = d1.abs().max(1e-6);
            let scale2 = d2.abs().max(d1.abs()).max(1e-6);
            if (fd1 - d1).abs() > 1e-5 * scale1 {
                passed = false;
                detail = format!("g'({y}) = {d1} but finite difference gives {fd1}");
                break;
            }
            if (fd2 - d2).abs() > 1e-5 * scale2 {
                passed = false;
                detail = format!("g''({y}) = {d2} but finite difference gives {fd2}");
                break;
            }
            y += 0.25;
        }
        results.push(CheckResult {
            name: "derivative_consistency",
            passed,
            detail,
        });
    }

    // C5-style integrability: ∫ g′(uy) K(y) dy finite for u near 0
    {
        let r = kernel.window_radius();
        let mut passed = true;
        let mut detail = String::from("∫ g'(uy) K(y) dy finite for u in {-0.1, 0, 0.1}");
        for u in [-0.1, 0.0, 0.1] {
            let value = quad::gl32().integrate(-r, r, |y| tr.d1(u * y) * kernel.density(y));
            if !value.is_finite() {
                passed = false;
                detail = format!("integral not finite at u = {u}");
                break;
            }
        }
        results.push(CheckResult {
            name: "c5_integrability",
            passed,
            detail,
        });
    }

    results
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::Exp;

    #[test]
    fn exp_transform_values() {
        let tr = ExpTransform::new(0.0).unwrap();
        assert_relative_eq!(tr.forward(0.0), 1.0, max_relative = 1e-15);
        assert_relative_eq!(tr.inverse(1.0), 0.0, epsilon = 1e-15);
        assert_relative_eq!(tr.d1(2.0), 7.389_056_098_930_65, max_relative = 1e-14);
        assert_relative_eq!(tr.d2(2.0), tr.d1(2.0), max_relative = 1e-15);

        let shifted = ExpTransform::new(5.0).unwrap();
        assert_relative_eq!(shifted.inverse(6.0), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn probit_transform_values() {
        let tr = ProbitTransform::new(0.0, 1.0).unwrap();
        assert_relative_eq!(tr.forward(0.0), 0.5, max_relative = 1e-15);
        assert_relative_eq!(tr.d1(0.0), 0.398_942_280_401_432_7, max_relative = 1e-14);
        assert_eq!(tr.d2(0.0), 0.0);
    }

    #[test]
    fn transform_limits_reach_endpoints() {
        let exp = ExpTransform::new(2.0).unwrap();
        assert!((exp.forward(-30.0) - 2.0).abs() < 1e-12);
        assert!(exp.forward(30.0) > 1e12);

        let probit = ProbitTransform::new(-1.0, 3.0).unwrap();
        assert!((probit.forward(-30.0) - -1.0).abs() < 1e-12);
        assert!((probit.forward(30.0) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn validate_passes_for_the_shipped_transforms() {
        let exp = ExpTransform::new(0.0).unwrap();
        for check in validate_transform(&exp, Kernel::Epanechnikov) {
            assert!(check.passed, "{}: {}", check.name, check.detail);
        }
        let probit = ProbitTransform::new(0.0, 1.0).unwrap();
        for check in validate_transform(&probit, Kernel::Gaussian) {
            assert!(check.passed, "{}: {}", check.name, check.detail);
        }
    }

    #[test]
    fn validate_flags_broken_second_derivative() {
        struct Broken(ExpTransform);
        impl Transform for Broken {
            fn support(&self) -> SupportInterval {
                self.0.support()
            }
            fn forward(&self, y: f64) -> f64 {
                self.0.forward(y)
            }
            fn inverse(&self, t: f64) -> f64 {
                self.0.inverse(t)
            }
            fn d1(&self, y: f64) -> f64 {
                self.0.d1(y)
            }
            fn d2(&self, _y: f64) -> f64 {
                0.0
            }
            fn name(&self) -> &'static str {
                "broken"
            }
        }
        let broken = Broken(ExpTransform::new(0.0).unwrap());
        let results = validate_transform(&broken, Kernel::Epanechnikov);
        let deriv = results
            .iter()
            .find(|c| c.name == "derivative_consistency")
            .unwrap();
        assert!(!deriv.passed, "injected fault must be caught");
        assert!(results
            .iter()
            .filter(|c| c.name != "derivative_consistency")
            .all(|c| c.passed));
    }

    #[test]
    fn support_interval_rejects_degenerate_inputs() {
        assert!(SupportInterval::new(1.0, 1.0).is_err());
        assert!(SupportInterval::new(2.0, 1.0).is_err());
        assert!(SupportInterval::new(f64::NEG_INFINITY, f64::INFINITY).is_err());
        assert!(SupportInterval::new(f64::NAN, 1.0).is_err());
        assert!(SupportInterval::half_line(0.0).is_ok());
    }

    #[test]
    fn change_of_variable_preserves_survival() {
        // S_Y(g⁻¹(t)) = S_X(t): transformed samples keep their empirical
        // survival at matching points, compared against the true S_X
        // within Monte-Carlo noise.
        let n = 10_000;
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let exp_dist = Exp::new(1.0).unwrap();
        let xs: Vec<f64> = (0..n).map(|_| rng.sample(exp_dist)).collect();
        let tr = ExpTransform::new(0.0).unwrap();
        let ys: Vec<f64> = xs.iter().map(|&x| tr.inverse(x)).collect();
        for k in 1..=20 {
            let t = 0.2 * k as f64;
            let s_true = (-t).exp();
            let y_cut = tr.inverse(t);
            let s_emp = ys.iter().filter(|&&y| y > y_cut).count() as f64 / n as f64;
            let se = (s_true * (1.0 - s_true) / n as f64).sqrt();
            assert!(
                (s_emp - s_true).abs() <= 3.0 * se + 1e-12,
                "t = {t}: empirical {s_emp} vs true {s_true} (se {se})"
            );
        }
    }

    proptest! {
        #[test]
        fn inverse_round_trip(y in -8.0f64..8.0) {
            let exp = ExpTransform::new(-3.0).unwrap();
            let back = exp.inverse(exp.forward(y));
            prop_assert!((back - y).abs() <= 1e-10 * y.abs().max(1.0));

            // probit right tail capped at 5: past that, rounding Φ(y) to
            // the nearest f64 below 1 already moves y by more than 1e-10
            if y < 5.0 {
                let probit = ProbitTransform::new(0.0, 2.5).unwrap();
                let back = probit.inverse(probit.forward(y));
                prop_assert!((back - y).abs() <= 1e-10 * y.abs().max(1.0));
            }
        }
    }
}

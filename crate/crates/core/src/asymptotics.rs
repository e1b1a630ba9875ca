//! Leading-order bias, variance, and covariance expressions for the
//! transformed estimators, used as oracles against Monte-Carlo runs.
//!
//! The five coefficient functions, written with x = g⁻¹(t):
//!
//! * b₁(t) = g″(x) f(t) + g′(x)² f′(t)
//! * b₂(t) = g′(x)² f(t) + ∫_x^∞ g″(z) g′(z) f(g(z)) dz, also -∫_t^ω″ b₁
//! * b₃(t) = g′(x)² f(t) - g″(x) S(t)
//! * b₄(t) = 2 S̄(t) - S(t) m(t)²
//! * b₅(t) = g′(x) f(t) m(t)²
//!
//! Survival bias is -(h²/2) b₁ μ₂; the cumulative-survival biases are
//! +(h²/2) b₂ μ₂ and +(h²/2) b₃ μ₂ for variants 1 and 2; MRL biases divide
//! the combined coefficient by S. Leading variances are S·F/n - (h/n)g′f·ρ
//! for the survival, (2S̄ - 𝕊²)/n for the cumulative survival, and
//! b₄/(nS²) - (h/n) b₅ ρ/S² for the MRL; the (𝕊̃, S̃) covariance is 𝕊F/n.

use crate::distributions::TrueDistribution;
use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::quad;
use crate::transform::Transform;

/// The five coefficient functions evaluated at one interior point.
#[derive(Debug, Clone, Copy)]
pub struct BCoefficients {
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub b4: f64,
    pub b5: f64,
}

/// Which estimator the bias/variance formulas describe. Both variants
/// share one survival estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorKind {
    Survival,
    CumSurvival1,
    CumSurvival2,
    Mrl1,
    Mrl2,
}

impl EstimatorKind {
    pub fn label(self) -> &'static str {
        match self {
            EstimatorKind::Survival => "survival",
            EstimatorKind::CumSurvival1 => "cum_survival1",
            EstimatorKind::CumSurvival2 => "cum_survival2",
            EstimatorKind::Mrl1 => "mrl1",
            EstimatorKind::Mrl2 => "mrl2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "survival" => Some(Self::Survival),
            "cum_survival1" => Some(Self::CumSurvival1),
            "cum_survival2" => Some(Self::CumSurvival2),
            "mrl1" => Some(Self::Mrl1),
            "mrl2" => Some(Self::Mrl2),
            _ => None,
        }
    }
}

/// Leading-order moments of one estimator at one point.
#[derive(Debug, Clone, Copy)]
pub struct TheoreticalMoments {
    pub bias: f64,
    pub variance: f64,
    /// Covariance of the (𝕊̃, S̃) pair at this point; identical for both
    /// variants.
    pub covariance: f64,
}

fn check_interior(dist: &TrueDistribution, t: f64) -> Result<()> {
    let support = dist.support();
    if support.contains(t) {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            t,
            lower: support.lower(),
            upper: support.upper(),
        })
    }
}

/// Evaluates b₁..b₅ at t. b₂'s tail integral runs by adaptive quadrature
/// on the data scale (absolute tolerance 1e-9), where the substitution
/// s = g(z) turns it into ∫_t^ω″ g″(g⁻¹(s)) f(s) ds.
pub fn eval_b(dist: &TrueDistribution, transform: &dyn Transform, t: f64) -> Result<BCoefficients> {
    check_interior(dist, t)?;
    let x = transform.inverse(t);
    let gp = transform.d1(x);
    let gpp = transform.d2(x);
    let f = dist.pdf(t);
    let fp = dist.pdf_deriv(t);
    let s = dist.survival(t);
    let m = dist.mrl(t);
    let sbar = dist.cum_cum_survival(t);

    let b1 = gpp * f + gp * gp * fp;
    let b2 = gp * gp * f + b2_tail_integral(dist, transform, t)?;
    let b3 = gp * gp * f - gpp * s;
    let b4 = 2.0 * sbar - s * m * m;
    let b5 = gp * f * m * m;
    Ok(BCoefficients { b1, b2, b3, b4, b5 })
}

fn b2_tail_integral(
    dist: &TrueDistribution,
    transform: &dyn Transform,
    t: f64,
) -> Result<f64> {
    let support = dist.support();
    let integrand = move |s: f64| -> f64 {
        if !support.contains(s) {
            return 0.0;
        }
        transform.d2(transform.inverse(s)) * dist.pdf(s)
    };
    if support.upper().is_finite() {
        quad::adaptive_simpson(&integrand, t, support.upper(), 1e-9)
    } else {
        quad::adaptive_right_tail(&integrand, t, 1e-9)
    }
}

/// The cross-check route for b₂: -∫_t^ω″ b₁(z) dz.
pub fn b2_from_b1(
    dist: &TrueDistribution,
    transform: &dyn Transform,
    t: f64,
) -> Result<f64> {
    check_interior(dist, t)?;
    let support = dist.support();
    let integrand = move |z: f64| -> f64 {
        if !support.contains(z) {
            return 0.0;
        }
        let x = transform.inverse(z);
        let gp = transform.d1(x);
        transform.d2(x) * dist.pdf(z) + gp * gp * dist.pdf_deriv(z)
    };
    let value = if support.upper().is_finite() {
        quad::adaptive_simpson(&integrand, t, support.upper(), 1e-9)?
    } else {
        quad::adaptive_right_tail(&integrand, t, 1e-9)?
    };
    Ok(-value)
}

/// Leading-order bias, variance, and pair covariance for the chosen
/// estimator at sample size n.
pub fn theoretical_bias_variance(
    dist: &TrueDistribution,
    transform: &dyn Transform,
    kernel: Kernel,
    h: f64,
    n: usize,
    t: f64,
    kind: EstimatorKind,
) -> Result<TheoreticalMoments> {
    check_interior(dist, t)?;
    if n < 1 {
        return Err(Error::InvalidConfig("n must be at least 1".into()));
    }
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidBandwidth(h));
    }
    let b = eval_b(dist, transform, t)?;
    let mu2 = kernel.mu2();
    let rho = kernel.rho();
    let nf = n as f64;
    let s = dist.survival(t);
    let f_cdf = dist.cdf(t);
    let f = dist.pdf(t);
    let m = dist.mrl(t);
    let cs = dist.cum_survival(t);
    let sbar = dist.cum_cum_survival(t);
    let gp = transform.d1(transform.inverse(t));
    let covariance = cs * f_cdf / nf;

    let (bias, variance) = match kind {
        EstimatorKind::Survival => (
            -0.5 * h * h * b.b1 * mu2,
            s * f_cdf / nf - (h / nf) * gp * f * rho,
        ),
        EstimatorKind::CumSurvival1 => (
            0.5 * h * h * b.b2 * mu2,
            (2.0 * sbar - cs * cs) / nf,
        ),
        EstimatorKind::CumSurvival2 => (
            0.5 * h * h * b.b3 * mu2,
            (2.0 * sbar - cs * cs) / nf,
        ),
        EstimatorKind::Mrl1 => (
            0.5 * h * h * (b.b2 + m * b.b1) * mu2 / s,
            b.b4 / (nf * s * s) - (h / nf) * b.b5 * rho / (s * s),
        ),
        EstimatorKind::Mrl2 => (
            0.5 * h * h * (b.b3 + m * b.b1) * mu2 / s,
            b.b4 / (nf * s * s) - (h / nf) * b.b5 * rho / (s * s),
        ),
    };
    Ok(TheoreticalMoments {
        bias,
        variance,
        covariance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::{ExpTransform, ProbitTransform};
    use approx::assert_relative_eq;

    #[test]
    fn exp_one_with_log_transform_has_closed_form_b1_b3() {
        // with g = exp and rate-1 exponential data: b1(t) = t e^{-t} (1-t),
        // b3(t) = t e^{-t} (t-1); both vanish at t = 1
        let dist = TrueDistribution::exponential(1.0).unwrap();
        let tr = ExpTransform::new(0.0).unwrap();
        for t in [0.3, 0.8, 1.0, 1.7, 2.5] {
            let b = eval_b(&dist, &tr, t).unwrap();
            let expected_b1 = t * (-t).exp() * (1.0 - t);
            let expected_b3 = t * (-t).exp() * (t - 1.0);
            assert_relative_eq!(b.b1, expected_b1, epsilon = 1e-12);
            assert_relative_eq!(b.b3, expected_b3, epsilon = 1e-12);
        }
        let at_one = eval_b(&dist, &tr, 1.0).unwrap();
        assert!(at_one.b1.abs() < 1e-14);
        assert!(at_one.b3.abs() < 1e-14);
    }

    #[test]
    fn b2_routes_agree() {
        let cases: Vec<(TrueDistribution, Box<dyn Transform>)> = vec![
            (
                TrueDistribution::exponential(1.0).unwrap(),
                Box::new(ExpTransform::new(0.0).unwrap()),
            ),
            (
                TrueDistribution::uniform(0.0, 1.0).unwrap(),
                Box::new(ProbitTransform::new(0.0, 1.0).unwrap()),
            ),
            (
                TrueDistribution::gamma(2.0, 3.0).unwrap(),
                Box::new(ExpTransform::new(0.0).unwrap()),
            ),
            (
                TrueDistribution::beta(3.0, 2.0).unwrap(),
                Box::new(ProbitTransform::new(0.0, 1.0).unwrap()),
            ),
        ];
        for (dist, tr) in &cases {
            for frac in [0.2, 0.5, 0.8] {
                let hi = dist
                    .support()
                    .upper()
                    .min(dist.mean() + 3.0 * dist.std_dev());
                let t = dist.support().lower() + frac * (hi - dist.support().lower());
                let direct = eval_b(dist, tr.as_ref(), t).unwrap().b2;
                let via_b1 = b2_from_b1(dist, tr.as_ref(), t).unwrap();
                assert!(
                    (direct - via_b1).abs() < 1e-7,
                    "{} at t={t}: {direct} vs {via_b1}",
                    dist.label()
                );
            }
        }
    }

    #[test]
    fn b4_is_nonnegative_across_the_roster() {
        for dist in TrueDistribution::study_roster() {
            let tr = dist.default_transform();
            let lo = dist.support().lower();
            let hi = dist
                .support()
                .upper()
                .min(dist.mean() + 3.0 * dist.std_dev());
            for k in 1..40 {
                let t = lo + (hi - lo) * k as f64 / 40.0;
                let b = eval_b(&dist, tr.as_ref(), t).unwrap();
                assert!(b.b4 >= -1e-12, "{} b4({t}) = {}", dist.label(), b.b4);
            }
        }
    }

    #[test]
    fn survival_bias_vanishes_where_b1_does() {
        let dist = TrueDistribution::exponential(1.0).unwrap();
        let tr = ExpTransform::new(0.0).unwrap();
        let m = theoretical_bias_variance(
            &dist,
            &tr,
            Kernel::Epanechnikov,
            0.3,
            2000,
            1.0,
            EstimatorKind::Survival,
        )
        .unwrap();
        assert!(m.bias.abs() < 1e-15);
        assert!(m.variance > 0.0);
    }

    #[test]
    fn survival_variance_fades_at_the_boundary() {
        // leading term n⁻¹ S F → 0 as t → ω′
        let dist = TrueDistribution::exponential(1.0).unwrap();
        let tr = ExpTransform::new(0.0).unwrap();
        let near = theoretical_bias_variance(
            &dist,
            &tr,
            Kernel::Epanechnikov,
            0.1,
            100,
            1e-6,
            EstimatorKind::Survival,
        )
        .unwrap();
        let interior = theoretical_bias_variance(
            &dist,
            &tr,
            Kernel::Epanechnikov,
            0.1,
            100,
            1.0,
            EstimatorKind::Survival,
        )
        .unwrap();
        assert!(near.variance.abs() < 1e-4 * interior.variance);
    }

    #[test]
    fn mrl_variance_leading_term_nonnegative() {
        let dist = TrueDistribution::gamma(2.0, 3.0).unwrap();
        let tr = dist.default_transform();
        for k in 1..=20 {
            let t = 0.6 * k as f64;
            let b = eval_b(&dist, tr.as_ref(), t).unwrap();
            let s = dist.survival(t);
            assert!(b.b4 / (s * s) >= 0.0);
        }
    }

    #[test]
    fn out_of_domain_points_error() {
        let dist = TrueDistribution::uniform(0.0, 1.0).unwrap();
        let tr = ProbitTransform::new(0.0, 1.0).unwrap();
        assert!(eval_b(&dist, &tr, 1.5).is_err());
        assert!(eval_b(&dist, &tr, -0.1).is_err());
    }
}

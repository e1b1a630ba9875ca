//! Transformation-based survival, cumulative-survival, and MRL estimators.
//!
//! With y = g⁻¹ mapping the support onto the real line, both variants share
//! the survival estimate S̃(t) = n⁻¹ Σ V((g⁻¹(t) - g⁻¹(Xᵢ))/h). They differ
//! in the cumulative survival:
//!
//! * variant 1: 𝕍₁(x, y) = ∫_x^∞ g′(z) V((z - y)/h) dz
//! * variant 2: 𝕍₂(x, y) = ∫_{-∞}^y g′(z) V((x - z)/h) dz
//!
//! Each integral splits into an exact plateau, where V is 1 and ∫ g′
//! telescopes to a difference of g, plus one Gauss–Legendre panel over the
//! active kernel window. Variant 2's left limit telescopes completely,
//! which is what makes its boundary value hit the sample mean exactly.

use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::quad;
use crate::sample::Sample;
use crate::transform::Transform;

use super::{check_bandwidth, check_compatible, check_domain, PointEstimate, PointFlag};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    One,
    Two,
}

/// Analytic limits of the transformed estimators at the support endpoints.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryLimits {
    /// lim S̃(t) as t → lower⁺; always exactly 1.
    pub survival: f64,
    /// lim 𝕊̃(t) as t → lower⁺.
    pub cum_survival: f64,
    /// lim m̃(t) as t → lower⁺ (equals the cumulative limit since S̃ → 1).
    pub mrl: f64,
    /// lim S̃(t) as t → upper⁻ when the support is bounded above.
    pub upper_survival: Option<f64>,
}

/// Shared survival estimate S̃(t); both variants reduce to the same sum.
pub fn transformed_survival(
    sample: &Sample,
    transform: &dyn Transform,
    kernel: Kernel,
    h: f64,
    t: f64,
) -> Result<f64> {
    check_domain(sample, t)?;
    check_bandwidth(h)?;
    check_compatible(sample, transform)?;
    let x = transform.inverse(t);
    Ok(survival_at(sample, transform, kernel, h, x))
}

/// S̃ via the first variant's kernel integral; identical to
/// [`transformed_survival`] because V₁ collapses to V((x - y)/h).
pub fn t1_survival(
    sample: &Sample,
    transform: &dyn Transform,
    kernel: Kernel,
    h: f64,
    t: f64,
) -> Result<f64> {
    transformed_survival(sample, transform, kernel, h, t)
}

/// S̃ via the second variant's plain substitution; same value as variant 1.
pub fn t2_survival(
    sample: &Sample,
    transform: &dyn Transform,
    kernel: Kernel,
    h: f64,
    t: f64,
) -> Result<f64> {
    transformed_survival(sample, transform, kernel, h, t)
}

fn survival_at(
    sample: &Sample,
    transform: &dyn Transform,
    kernel: Kernel,
    h: f64,
    x: f64,
) -> f64 {
    let wr = kernel.window_radius() * h;
    let values = sample.values();
    let n = sample.len();
    // monotone g turns the y-window (x-wr, x+wr) into a data window
    let t_lo = transform.forward(x - wr);
    let t_hi = transform.forward(x + wr);
    let lo_idx = values.partition_point(|&v| v <= t_lo);
    let hi_idx = values.partition_point(|&v| v < t_hi);
    let mut acc = (n - hi_idx) as f64; // V = 1 right of the window
    for &xi in &values[lo_idx..hi_idx] {
        let y = transform.inverse(xi);
        acc += kernel.survival((x - y) / h);
    }
    acc / n as f64
}

/// 𝕊̃₁(t) = n⁻¹ Σ ∫_{g⁻¹(t)}^∞ g′(z) V((z - g⁻¹(Xᵢ))/h) dz
pub fn t1_cum_survival(
    sample: &Sample,
    transform: &dyn Transform,
    kernel: Kernel,
    h: f64,
    t: f64,
) -> Result<f64> {
    check_domain(sample, t)?;
    check_bandwidth(h)?;
    check_compatible(sample, transform)?;
    let x = transform.inverse(t);
    t1_cum_at(sample, transform, kernel, h, Some(x))
}

/// `x = None` evaluates the limit x → -∞ used for the lower boundary.
fn t1_cum_at(
    sample: &Sample,
    transform: &dyn Transform,
    kernel: Kernel,
    h: f64,
    x: Option<f64>,
) -> Result<f64> {
    let wr = kernel.window_radius() * h;
    let gl = quad::gl32();
    let lower = transform.support().lower();
    let mut acc = 0.0;
    for &xi in sample.values() {
        let y = transform.inverse(xi);
        let term = match x {
            Some(x) if x >= y + wr => 0.0,
            Some(x) => {
                let plateau = if x < y - wr {
                    transform.forward(y - wr) - transform.forward(x)
                } else {
                    0.0
                };
                let lo = x.max(y - wr);
                plateau
                    + gl.integrate(lo, y + wr, |z| {
                        transform.d1(z) * kernel.survival((z - y) / h)
                    })
            }
            None => {
                (transform.forward(y - wr) - lower)
                    + gl.integrate(y - wr, y + wr, |z| {
                        transform.d1(z) * kernel.survival((z - y) / h)
                    })
            }
        };
        if !term.is_finite() {
            return Err(Error::Numeric(format!(
                "cumulative-survival term for observation {xi} is not finite"
            )));
        }
        acc += term;
    }
    Ok(acc / sample.len() as f64)
}

/// 𝕊̃₂(t) = n⁻¹ Σ ∫_{-∞}^{g⁻¹(Xᵢ)} g′(z) V((g⁻¹(t) - z)/h) dz
pub fn t2_cum_survival(
    sample: &Sample,
    transform: &dyn Transform,
    kernel: Kernel,
    h: f64,
    t: f64,
) -> Result<f64> {
    check_domain(sample, t)?;
    check_bandwidth(h)?;
    check_compatible(sample, transform)?;
    let x = transform.inverse(t);
    let wr = kernel.window_radius() * h;
    let gl = quad::gl32();
    let values = sample.values();
    let n = sample.len();
    let lo = x - wr;
    let hi = x + wr;
    let t_lo = transform.forward(lo);
    let t_hi = transform.forward(hi);
    let lo_idx = values.partition_point(|&v| v <= t_lo); // below: kernel already spent
    let hi_idx = values.partition_point(|&v| v < t_hi); // above: exact plateau past hi
    let n_right = n - hi_idx;

    let mut acc = 0.0;
    if n_right > 0 {
        // the window part is the same for every observation past the window
        let full_window =
            gl.integrate(lo, hi, |z| transform.d1(z) * kernel.survival((x - z) / h));
        acc += n_right as f64 * (full_window - t_hi) + sample.range_sum(hi_idx, n);
    }
    for &xi in &values[lo_idx..hi_idx] {
        let y = transform.inverse(xi);
        acc += gl.integrate(lo, y, |z| transform.d1(z) * kernel.survival((x - z) / h));
    }
    if !acc.is_finite() {
        return Err(Error::Numeric(
            "cumulative-survival sum is not finite".into(),
        ));
    }
    Ok(acc / n as f64)
}

/// m̃(t): ratio of the variant's cumulative survival to the shared survival.
/// A vanished denominator (compact kernel beyond the data) degrades to 0
/// with a tail-degenerate flag.
pub fn transformed_mrl(
    sample: &Sample,
    transform: &dyn Transform,
    kernel: Kernel,
    h: f64,
    t: f64,
    variant: Variant,
) -> Result<(f64, PointFlag)> {
    let p = point_estimate(sample, transform, kernel, h, t, variant)?;
    Ok((p.mrl, p.flag))
}

pub(super) fn point_estimate(
    sample: &Sample,
    transform: &dyn Transform,
    kernel: Kernel,
    h: f64,
    t: f64,
    variant: Variant,
) -> Result<PointEstimate> {
    let survival = transformed_survival(sample, transform, kernel, h, t)?;
    let cum_survival = match variant {
        Variant::One => t1_cum_survival(sample, transform, kernel, h, t)?,
        Variant::Two => t2_cum_survival(sample, transform, kernel, h, t)?,
    };
    if survival <= 0.0 {
        return Ok(PointEstimate {
            survival: 0.0,
            cum_survival,
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

/// Analytic limits at the support endpoints, evaluated without driving
/// g⁻¹ towards its singularities: S̃ → 1 at the lower end for both
/// variants, 𝕍₂ telescopes to the sample mean minus the lower endpoint,
/// and 𝕍₁ keeps one kernel-window integral per observation.
pub fn boundary_limits(
    sample: &Sample,
    transform: &dyn Transform,
    kernel: Kernel,
    h: f64,
    variant: Variant,
) -> Result<BoundaryLimits> {
    check_bandwidth(h)?;
    check_compatible(sample, transform)?;
    let support = transform.support();
    let lower = support.lower();
    if !lower.is_finite() {
        return Err(Error::InvalidSpec(
            "boundary limits need a transform with a finite lower endpoint".into(),
        ));
    }
    let cum_survival = match variant {
        Variant::Two => {
            let sum: f64 = sample
                .values()
                .iter()
                .map(|&xi| transform.forward(transform.inverse(xi)) - lower)
                .sum();
            sum / sample.len() as f64
        }
        Variant::One => t1_cum_at(sample, transform, kernel, h, None)?,
    };
    Ok(BoundaryLimits {
        survival: 1.0,
        cum_survival,
        mrl: cum_survival,
        upper_survival: support.upper().is_finite().then_some(0.0),
    })
}

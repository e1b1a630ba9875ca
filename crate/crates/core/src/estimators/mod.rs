//! The four mean-residual-life estimators and their survival /
//! cumulative-survival building blocks.
//!
//! Methods share one convention for points beyond the reach of the data
//! under a compact kernel: the estimate is reported as 0 together with a
//! tail-degenerate flag, so curves stay total functions.

mod empirical;
mod naive;
mod transformed;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::sample::Sample;
use crate::transform::{IdentityTransform, Transform};

pub use empirical::{empirical_cum_survival, empirical_mrl, empirical_survival};
pub use naive::naive_kernel_curves;
pub use transformed::{
    boundary_limits, t1_cum_survival, t1_survival, t2_cum_survival, t2_survival,
    transformed_mrl, transformed_survival, BoundaryLimits, Variant,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Empirical,
    NaiveKernel,
    Transformed1,
    Transformed2,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Empirical => "empirical",
            Method::NaiveKernel => "naive",
            Method::Transformed1 => "transformed1",
            Method::Transformed2 => "transformed2",
        }
    }

    pub fn uses_bandwidth(self) -> bool {
        !matches!(self, Method::Empirical)
    }
}

/// Per-point status of a curve estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointFlag {
    Ok,
    TailDegenerate,
}

impl PointFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            PointFlag::Ok => "ok",
            PointFlag::TailDegenerate => "tail_degenerate",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "ok" => Some(PointFlag::Ok),
            "tail_degenerate" => Some(PointFlag::TailDegenerate),
            _ => None,
        }
    }
}

/// An estimator configuration: which method, smoothing kernel, transform,
/// and bandwidth (ignored by the empirical method).
#[derive(Clone)]
pub struct EstimatorSpec {
    pub method: Method,
    pub kernel: Kernel,
    pub transform: Arc<dyn Transform>,
    pub bandwidth: f64,
}

impl EstimatorSpec {
    pub fn new(
        method: Method,
        kernel: Kernel,
        transform: Arc<dyn Transform>,
        bandwidth: f64,
    ) -> Result<Self> {
        if method.uses_bandwidth() && !(bandwidth.is_finite() && bandwidth > 0.0) {
            return Err(Error::InvalidBandwidth(bandwidth));
        }
        Ok(Self {
            method,
            kernel,
            transform,
            bandwidth,
        })
    }

    pub fn empirical() -> Self {
        Self {
            method: Method::Empirical,
            kernel: Kernel::Epanechnikov,
            transform: Arc::new(IdentityTransform),
            bandwidth: 1.0,
        }
    }
}

impl std::fmt::Debug for EstimatorSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EstimatorSpec")
            .field("method", &self.method)
            .field("kernel", &self.kernel.name())
            .field("transform", &self.transform.name())
            .field("bandwidth", &self.bandwidth)
            .finish()
    }
}

/// Survival, cumulative survival, and MRL at one evaluation point.
#[derive(Debug, Clone, Copy)]
pub struct PointEstimate {
    pub survival: f64,
    pub cum_survival: f64,
    pub mrl: f64,
    pub flag: PointFlag,
}

/// Curves evaluated over a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveEstimate {
    pub grid: Vec<f64>,
    pub survival: Vec<f64>,
    pub cum_survival: Vec<f64>,
    pub mrl: Vec<f64>,
    pub flags: Vec<PointFlag>,
}

/// One estimator evaluated at one point, dispatching on the method.
pub fn point_estimate(spec: &EstimatorSpec, sample: &Sample, t: f64) -> Result<PointEstimate> {
    match spec.method {
        Method::Empirical => {
            let survival = empirical_survival(sample, t)?;
            let cum_survival = empirical_cum_survival(sample, t)?;
            let (mrl, flag) = empirical_mrl(sample, t)?;
            Ok(PointEstimate {
                survival,
                cum_survival,
                mrl,
                flag,
            })
        }
        Method::NaiveKernel => naive_kernel_curves(sample, spec.kernel, spec.bandwidth, t),
        Method::Transformed1 | Method::Transformed2 => {
            let variant = if spec.method == Method::Transformed1 {
                Variant::One
            } else {
                Variant::Two
            };
            transformed::point_estimate(
                sample,
                spec.transform.as_ref(),
                spec.kernel,
                spec.bandwidth,
                t,
                variant,
            )
        }
    }
}

/// Evaluates the configured estimator over a sorted grid strictly inside
/// the support. Tail degeneracy is recorded per point in the flags; the
/// evaluation itself never aborts mid-curve.
pub fn evaluate_curve(
    spec: &EstimatorSpec,
    sample: &Sample,
    grid: &[f64],
) -> Result<CurveEstimate> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("empty grid".into()));
    }
    let support = sample.support();
    for pair in grid.windows(2) {
        if pair[1] < pair[0] {
            return Err(Error::InvalidGrid("grid must be sorted ascending".into()));
        }
    }
    for &t in grid {
        if !support.contains(t) {
            return Err(Error::InvalidGrid(format!(
                "grid point {t} is not strictly inside the support {support}"
            )));
        }
    }
    if matches!(spec.method, Method::Transformed1 | Method::Transformed2)
        && !spec.transform.is_identity()
    {
        // boundary values belong to the analytic limits; the transformed scale
        // is kept inside |g⁻¹(t)| ≤ 30 where the maps are well conditioned
        for &t in grid {
            let x = spec.transform.inverse(t);
            if !x.is_finite() || x.abs() > 30.0 {
                return Err(Error::InvalidGrid(format!(
                    "grid point {t} maps to g⁻¹(t) = {x}; keep |g⁻¹(t)| ≤ 30 and use boundary limits for endpoint values"
                )));
            }
        }
    }

    let m = grid.len();
    let mut curve = CurveEstimate {
        grid: grid.to_vec(),
        survival: Vec::with_capacity(m),
        cum_survival: Vec::with_capacity(m),
        mrl: Vec::with_capacity(m),
        flags: Vec::with_capacity(m),
    };
    for &t in grid {
        let point = point_estimate(spec, sample, t)?;
        curve.survival.push(point.survival);
        curve.cum_survival.push(point.cum_survival);
        curve.mrl.push(point.mrl);
        curve.flags.push(point.flag);
    }
    Ok(curve)
}

pub(crate) fn check_bandwidth(h: f64) -> Result<()> {
    if h.is_finite() && h > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidBandwidth(h))
    }
}

pub(crate) fn check_domain(sample: &Sample, t: f64) -> Result<()> {
    let support = sample.support();
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

pub(crate) fn check_compatible(sample: &Sample, transform: &dyn Transform) -> Result<()> {
    let ts = transform.support();
    let ss = sample.support();
    if ts.contains_interval(&ss) {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!(
            "transform support {ts} does not cover the sample support {ss}"
        )))
    }
}

//! Numerical integration: fixed-order Gauss–Legendre panels and adaptive
//! Simpson quadrature for the handful of integrals that have no closed form.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Nodes and weights of an n-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the rule by Newton iteration on the Legendre recurrence,
    /// starting from Chebyshev-node initial guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a quadrature rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(n, z);
                let step = p / dp;
                z -= step;
                if step.abs() <= 1e-16 * z.abs().max(1.0) {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, z);
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = -z;
            weights[i] = w;
            nodes[n - 1 - i] = z;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// ∫_a^b f(x) dx by a single panel of this rule.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        if a == b {
            return 0.0;
        }
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Shared 32-node rule used for every kernel-window integral.
pub fn gl32() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(32))
}

/// Shared 8-node rule; exact for the quartic integrands of the
/// Epanechnikov self-convolution.
pub fn gl8() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(8))
}

/// Adaptive Simpson quadrature on a finite interval.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let value = simpson_step(f, a, b, fa, fm, fb, whole, tol, 60);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Numeric(format!(
            "adaptive quadrature over [{a}, {b}] did not produce a finite value"
        )))
    }
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// ∫_a^∞ f(x) dx for an integrand that decays fast enough for the
/// substitution x = a + u/(1-u) to leave a bounded transformed integrand.
pub fn adaptive_right_tail<F: Fn(f64) -> f64>(f: &F, a: f64, tol: f64) -> Result<f64> {
    let mapped = |u: f64| -> f64 {
        if u >= 1.0 {
            return 0.0;
        }
        let s = 1.0 - u;
        let x = a + u / s;
        let v = f(x) / (s * s);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    adaptive_simpson(&mapped, 0.0, 1.0, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(5);
        // degree 9 is the highest a 5-point rule must handle exactly
        let value = rule.integrate(-1.0, 1.0, |x| x.powi(8));
        assert_relative_eq!(value, 2.0 / 9.0, max_relative = 1e-14);
        let value = rule.integrate(0.0, 2.0, |x| 3.0 * x * x);
        assert_relative_eq!(value, 8.0, max_relative = 1e-14);
    }

    #[test]
    fn gl32_handles_smooth_transcendentals() {
        let value = gl32().integrate(0.0, 1.0, |x| x.exp());
        assert_relative_eq!(value, std::f64::consts::E - 1.0, max_relative = 1e-15);
    }

    #[test]
    fn node_count_matches_order() {
        assert_eq!(gl8().len(), 8);
        assert!(!gl32().is_empty());
    }

    #[test]
    fn adaptive_simpson_meets_tolerance() {
        let f = |x: f64| (-x).exp() * x.sin();
        // ∫_0^π e^{-x} sin x dx = (1 + e^{-π}) / 2
        let exact = 0.5 * (1.0 + (-std::f64::consts::PI).exp());
        let value = adaptive_simpson(&f, 0.0, std::f64::consts::PI, 1e-12).unwrap();
        assert_relative_eq!(value, exact, max_relative = 1e-10);
    }

    #[test]
    fn right_tail_integral_of_exponential() {
        let value = adaptive_right_tail(&|x: f64| (-x).exp(), 1.0, 1e-12).unwrap();
        assert_relative_eq!(value, (-1.0f64).exp(), max_relative = 1e-9);
    }
}

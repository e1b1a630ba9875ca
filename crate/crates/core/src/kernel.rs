//! Kernel densities and their integral functionals.
//!
//! Every estimator consumes a kernel through four functions: the density K,
//! its distribution W(x) = ∫_{-∞}^x K, its survival V(x) = ∫_x^∞ K, and the
//! integrated survival 𝕍(x) = ∫_x^∞ V. Epanechnikov values are closed-form
//! polynomial pieces with exact tails; Gaussian values go through the
//! complementary error function, with 𝕍(x) = K(x) - x·V(x) obtained by
//! integration by parts. The constants μ₂ = ∫y²K and ρ = ∫VW feed the
//! asymptotic bias and variance formulas.

use crate::normal;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    Epanechnikov,
    Gaussian,
}

/// K, W, V, and 𝕍 evaluated at one point.
#[derive(Debug, Clone, Copy)]
pub struct KernelValues {
    pub density: f64,
    pub cumulative: f64,
    pub survival: f64,
    pub integrated_survival: f64,
}

/// ρ for the Epanechnikov kernel: ∫ V W = 9/35.
const EPANECHNIKOV_RHO: f64 = 9.0 / 35.0;
/// ρ for the Gaussian kernel: ∫ Φ(1-Φ) = 1/√π.
const GAUSSIAN_RHO: f64 = 0.5 * std::f64::consts::FRAC_2_SQRT_PI;

impl Kernel {
    /// K(x)
    pub fn density(self, x: f64) -> f64 {
        match self {
            Kernel::Epanechnikov => {
                if x.abs() >= 1.0 {
                    0.0
                } else {
                    0.75 * (1.0 - x * x)
                }
            }
            Kernel::Gaussian => normal::pdf(x),
        }
    }

    /// W(x) = ∫_{-∞}^x K
    pub fn cumulative(self, x: f64) -> f64 {
        match self {
            Kernel::Epanechnikov => {
                if x <= -1.0 {
                    0.0
                } else if x >= 1.0 {
                    1.0
                } else {
                    0.5 + x * (0.75 - 0.25 * x * x)
                }
            }
            Kernel::Gaussian => normal::cdf(x),
        }
    }

    /// V(x) = ∫_x^∞ K
    pub fn survival(self, x: f64) -> f64 {
        match self {
            Kernel::Epanechnikov => {
                if x <= -1.0 {
                    1.0
                } else if x >= 1.0 {
                    0.0
                } else {
                    0.5 - x * (0.75 - 0.25 * x * x)
                }
            }
            Kernel::Gaussian => normal::sf(x),
        }
    }

    /// 𝕍(x) = ∫_x^∞ V
    pub fn integrated_survival(self, x: f64) -> f64 {
        match self {
            Kernel::Epanechnikov => {
                if x <= -1.0 {
                    -x
                } else if x >= 1.0 {
                    0.0
                } else {
                    let x2 = x * x;
                    0.1875 - 0.5 * x + 0.375 * x2 - 0.0625 * x2 * x2
                }
            }
            Kernel::Gaussian => normal::pdf(x) - x * normal::sf(x),
        }
    }

    pub fn eval(self, x: f64) -> KernelValues {
        KernelValues {
            density: self.density(x),
            cumulative: self.cumulative(x),
            survival: self.survival(x),
            integrated_survival: self.integrated_survival(x),
        }
    }

    /// μ₂ = ∫ y² K(y) dy
    pub fn mu2(self) -> f64 {
        match self {
            Kernel::Epanechnikov => 0.2,
            Kernel::Gaussian => 1.0,
        }
    }

    /// ρ = ∫ V(y) W(y) dy
    pub fn rho(self) -> f64 {
        match self {
            Kernel::Epanechnikov => EPANECHNIKOV_RHO,
            Kernel::Gaussian => GAUSSIAN_RHO,
        }
    }

    /// Radius r such that |x| ≥ r is treated as exact tail: V is 1 (left)
    /// or 0 (right) and 𝕍 is -x or 0. Exact for Epanechnikov; for the
    /// Gaussian the discarded mass beyond 8 is below 1e-15.
    pub fn window_radius(self) -> f64 {
        match self {
            Kernel::Epanechnikov => 1.0,
            Kernel::Gaussian => 8.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kernel::Epanechnikov => "epanechnikov",
            Kernel::Gaussian => "gaussian",
        }
    }
}

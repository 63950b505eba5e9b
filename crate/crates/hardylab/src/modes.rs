//! Angular modes of the Laplace–Beltrami operator on the unit sphere.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Surface area of the unit sphere S^{N-1} in R^N (2π for N = 2, 4π for N = 3).
pub fn unit_sphere_area(dim: u32) -> f64 {
    assert!(dim >= 1, "dimension must be at least 1");
    // ω_{N-1} = 2 π^{N/2} / Γ(N/2); integer N via the half-integer recursion.
    let n = dim as f64;
    2.0 * PI.powf(n / 2.0) / gamma_half_integer(dim)
}

/// Γ(n/2) for integer n ≥ 1, exact up to rounding.
fn gamma_half_integer(n: u32) -> f64 {
    if n.is_multiple_of(2) {
        // Γ(k) = (k-1)!
        let k = n / 2;
        (1..k).map(|i| i as f64).product::<f64>().max(1.0)
    } else {
        // Γ(k + 1/2) = (2k)! √π / (4^k k!)
        let mut g = PI.sqrt();
        let mut x = 0.5;
        for _ in 0..(n / 2) {
            g *= x;
            x += 1.0;
        }
        g
    }
}

/// Spherical-harmonic mode of index k on S^{N-1}.
///
/// For N = 2 the concrete mode-k eigenfunction is cos(kθ); for N ≥ 3 and
/// k = 1 it is the first coordinate function ω₁ (eigenvalue N-1). Higher
/// modes on higher spheres enter only through their eigenvalue μ_k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularMode {
    k: u32,
    dim: u32,
}

impl AngularMode {
    pub fn new(k: u32, dim: u32) -> Result<Self> {
        if dim < 2 {
            return Err(Error::BadParameter(format!(
                "angular modes require dimension >= 2, got {dim}"
            )));
        }
        Ok(AngularMode { k, dim })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// Laplace–Beltrami eigenvalue μ_k = k(k + N - 2).
    pub fn eigenvalue(&self) -> f64 {
        let k = self.k as f64;
        k * (k + self.dim as f64 - 2.0)
    }

    /// ∫ |Y|² dS over S^{N-1} for the concrete eigenfunction above.
    pub fn l2_mass(&self) -> Result<f64> {
        match (self.dim, self.k) {
            (2, 0) => Ok(2.0 * PI),
            (2, _) => Ok(PI),
            (_, 0) => Ok(unit_sphere_area(self.dim)),
            (_, 1) => Ok(unit_sphere_area(self.dim) / self.dim as f64),
            _ => Err(Error::BadParameter(format!(
                "no canonical eigenfunction for mode k = {} on S^{}",
                self.k,
                self.dim - 1
            ))),
        }
    }

    /// ∫ |Y|^q dS for the concrete eigenfunction, q ≥ 1.
    ///
    /// N = 2, k ≥ 1: ∫₀^{2π}|cos kθ|^q dθ = 2√π Γ((q+1)/2)/Γ(q/2+1).
    /// N ≥ 3, k = 1: ω_{N-2} Γ((q+1)/2) Γ((N-1)/2) / Γ((q+N)/2).
    pub fn lq_mass(&self, q: f64) -> Result<f64> {
        if !(q >= 1.0 && q.is_finite()) {
            return Err(Error::BadParameter(format!(
                "lq_mass needs finite q >= 1, got {q}"
            )));
        }
        match (self.dim, self.k) {
            (2, 0) => Ok(2.0 * PI),
            (2, _) => {
                Ok(2.0 * PI.sqrt() * libm::tgamma((q + 1.0) / 2.0) / libm::tgamma(q / 2.0 + 1.0))
            }
            (_, 0) => Ok(unit_sphere_area(self.dim)),
            (n, 1) => {
                let nn = n as f64;
                Ok(unit_sphere_area(n - 1)
                    * libm::tgamma((q + 1.0) / 2.0)
                    * libm::tgamma((nn - 1.0) / 2.0)
                    / libm::tgamma((q + nn) / 2.0))
            }
            _ => Err(Error::BadParameter(format!(
                "no canonical eigenfunction for mode k = {} on S^{}",
                self.k,
                self.dim - 1
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_areas() {
        assert!((unit_sphere_area(2) - 2.0 * PI).abs() < 1e-14);
        assert!((unit_sphere_area(3) - 4.0 * PI).abs() < 1e-13);
        assert!((unit_sphere_area(4) - 2.0 * PI * PI).abs() < 1e-13);
    }

    #[test]
    fn eigenvalues() {
        assert_eq!(AngularMode::new(0, 5).unwrap().eigenvalue(), 0.0);
        assert_eq!(AngularMode::new(1, 3).unwrap().eigenvalue(), 2.0); // N - 1
        assert_eq!(AngularMode::new(1, 2).unwrap().eigenvalue(), 1.0);
        assert_eq!(AngularMode::new(2, 2).unwrap().eigenvalue(), 4.0);
    }

    #[test]
    fn circle_masses() {
        let m0 = AngularMode::new(0, 2).unwrap();
        let m3 = AngularMode::new(3, 2).unwrap();
        assert!((m0.l2_mass().unwrap() - 2.0 * PI).abs() < 1e-14);
        assert!((m3.l2_mass().unwrap() - PI).abs() < 1e-14);
        // ∫|cos|² = π, ∫|cos|⁴ = 3π/4
        assert!((m3.lq_mass(2.0).unwrap() - PI).abs() < 1e-12);
        assert!((m3.lq_mass(4.0).unwrap() - 0.75 * PI).abs() < 1e-12);
    }

    #[test]
    fn coordinate_function_masses() {
        let m = AngularMode::new(1, 3).unwrap();
        // ∫_{S²} ω₁² dS = 4π/3
        assert!((m.l2_mass().unwrap() - 4.0 * PI / 3.0).abs() < 1e-12);
        assert!((m.lq_mass(2.0).unwrap() - 4.0 * PI / 3.0).abs() < 1e-12);
        assert!(AngularMode::new(2, 3).unwrap().l2_mass().is_err());
    }
}

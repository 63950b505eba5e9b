//! Reduction of constrained Hardy quotients to 1D Sturm–Liouville problems.
//!
//! Restricting the quotient to the angular mode k and substituting the log
//! variable turns each geometry into
//!     inf [ ∫ σ(t) g'² + V(t) g² dt ] / [ ∫ ρ(t) g² dt ]
//! with Dirichlet data at the finite boundary. The reductions are exact:
//!
//!   CriticalDisk(a), t = log(a/r) on (log a, ∞):
//!       σ = 1,  V = k²,  ρ = t^{-2}
//!   ClassicalBall(N), s = log(1/r) on (0, ∞):
//!       σ = V/μ_k = ρ = e^{-(N-2)s}
//!   ClassicalWholeSpace(N): same coefficients on the whole line.

use crate::error::{Error, Result};
use crate::modes::AngularMode;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geometry {
    /// Unit disk with the critical weight |x|^{-2} (log(a/|x|))^{-1-q/2}, a > 1.
    CriticalDisk { a: f64 },
    /// Unit ball with the |x|^{-2} weight, N ≥ 3.
    ClassicalBall { dim: u32 },
    /// Whole space with the |x|^{-2} weight, N ≥ 3.
    ClassicalWholeSpace { dim: u32 },
}

impl Geometry {
    pub fn dim(&self) -> u32 {
        match *self {
            Geometry::CriticalDisk { .. } => 2,
            Geometry::ClassicalBall { dim } | Geometry::ClassicalWholeSpace { dim } => dim,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Geometry::CriticalDisk { a } => {
                if !(a > 1.0) {
                    return Err(Error::BadParameter(format!(
                        "critical disk requires a > 1, got a = {a}"
                    )));
                }
                Ok(())
            }
            Geometry::ClassicalBall { dim } | Geometry::ClassicalWholeSpace { dim } => {
                if dim < 3 {
                    return Err(Error::BadParameter(format!(
                        "classical geometry requires N >= 3, got N = {dim}"
                    )));
                }
                Ok(())
            }
        }
    }
}

/// A Hardy-type quotient restricted to one angular mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeProblem {
    pub geometry: Geometry,
    pub mode: AngularMode,
    /// Target exponent: 2 for eigenproblems, > 2 for the Lq quotient bound.
    pub exponent: f64,
}

impl ModeProblem {
    pub fn new(geometry: Geometry, k: u32, exponent: f64) -> Result<Self> {
        geometry.validate()?;
        if k == 0 {
            return Err(Error::BadParameter(
                "spherical-average-zero constraint requires mode k >= 1".into(),
            ));
        }
        if !(exponent >= 2.0) {
            return Err(Error::BadParameter(format!(
                "target exponent must be >= 2, got {exponent}"
            )));
        }
        let mode = AngularMode::new(k, geometry.dim())?;
        Ok(ModeProblem {
            geometry,
            mode,
            exponent,
        })
    }
}

/// Coefficient function on the 1D domain: scale · kind(t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coef {
    pub scale: f64,
    pub kind: CoefKind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoefKind {
    One,
    /// t^{-2}
    InvSquare,
    /// e^{-rate·t}
    ExpDecay {
        rate: f64,
    },
}

impl Coef {
    pub const ONE: Coef = Coef {
        scale: 1.0,
        kind: CoefKind::One,
    };

    pub fn eval(&self, t: f64) -> f64 {
        self.scale
            * match self.kind {
                CoefKind::One => 1.0,
                CoefKind::InvSquare => 1.0 / (t * t),
                CoefKind::ExpDecay { rate } => (-rate * t).exp(),
            }
    }

    /// Shifted moments ∫_0^h w(x0 + τ) τ^k dτ for k = 0, 1, 2 — exact
    /// antiderivatives, with series fallbacks where the direct forms cancel.
    pub fn shifted_moments(&self, x0: f64, h: f64) -> [f64; 3] {
        let m = match self.kind {
            CoefKind::One => [h, h * h / 2.0, h * h * h / 3.0],
            CoefKind::InvSquare => inv_square_moments(x0, h),
            CoefKind::ExpDecay { rate } => exp_decay_moments(rate, x0, h),
        };
        [self.scale * m[0], self.scale * m[1], self.scale * m[2]]
    }
}

/// ∫_0^h τ^k/(x0+τ)² dτ. Requires x0 > 0.
fn inv_square_moments(x0: f64, h: f64) -> [f64; 3] {
    debug_assert!(x0 > 0.0 && h > 0.0);
    let u = h / x0;
    let m0 = h / (x0 * (x0 + h));
    let (m1_unit, m2_unit) = if u < 0.1 {
        // Σ_{n≥2} (-1)^n (1 - 1/n) u^n  and  x0·Σ_{n≥3} (-1)^{n-1}(1 - 2/n) u^n
        let mut s1 = 0.0;
        let mut s2 = 0.0;
        let mut un = u * u;
        let mut sign = 1.0;
        for n in 2..40 {
            s1 += sign * (1.0 - 1.0 / n as f64) * un;
            if n >= 3 {
                // sign for s2 term n is (-1)^{n-1} = -sign when sign=(-1)^n
                s2 += -sign * (1.0 - 2.0 / n as f64) * un;
            }
            un *= u;
            sign = -sign;
            if un < 1e-20 * (s1.abs() + 1.0) {
                break;
            }
        }
        (s1, s2)
    } else {
        let l = (1.0 + u).ln();
        (l - u / (1.0 + u), u - 2.0 * l + u / (1.0 + u))
    };
    // substituting τ = x0·s makes the k-th moment scale like x0^{k-1}
    [m0, m1_unit, m2_unit * x0]
}

/// ∫_0^h e^{-c(x0+τ)} τ^k dτ = e^{-c·x0} γ(k+1, c·h)/c^{k+1}.
fn exp_decay_moments(c: f64, x0: f64, h: f64) -> [f64; 3] {
    debug_assert!(h > 0.0);
    if c == 0.0 {
        return [h, h * h / 2.0, h * h * h / 3.0];
    }
    let front = (-c * x0).exp();
    let x = c * h;
    let g = if x < 0.8 {
        // lower incomplete gamma by series: γ(k+1,x) = x^{k+1} Σ (-x)^n/(n!(k+1+n))
        let mut out = [0.0; 3];
        for (k, o) in out.iter_mut().enumerate() {
            let mut term = 1.0;
            let mut sum = 0.0;
            let mut fact = 1.0;
            for n in 0..40 {
                sum += term / (fact * (k as f64 + 1.0 + n as f64));
                term *= -x;
                fact *= (n + 1) as f64;
                if term.abs() / fact < 1e-20 {
                    break;
                }
            }
            *o = x.powi(k as i32 + 1) * sum;
        }
        out
    } else {
        let e = (-x).exp();
        [
            1.0 - e,
            1.0 - (1.0 + x) * e,
            2.0 - (x * x + 2.0 * x + 2.0) * e,
        ]
    };
    [
        front * g[0] / c,
        front * g[1] / (c * c),
        front * g[2] / (c * c * c),
    ]
}

/// 1D domain of the reduced problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain1D {
    /// (left, ∞), Dirichlet at left.
    HalfLine { left: f64 },
    /// (-∞, ∞); truncations are symmetric about 0.
    Line,
}

/// Reduced weighted Sturm–Liouville problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SLProblem1D {
    pub domain: Domain1D,
    pub stiffness: Coef,
    pub potential: Coef,
    pub density: Coef,
}

/// Exact mode-k reduction of the quotient to 1D (no approximation).
pub fn reduce_mode(problem: &ModeProblem) -> Result<SLProblem1D> {
    let k = problem.mode.k();
    if k == 0 {
        return Err(Error::BadParameter(
            "spherical-average-zero constraint requires mode k >= 1".into(),
        ));
    }
    problem.geometry.validate()?;
    let mu = problem.mode.eigenvalue();
    Ok(match problem.geometry {
        Geometry::CriticalDisk { a } => SLProblem1D {
            domain: Domain1D::HalfLine { left: a.ln() },
            stiffness: Coef::ONE,
            potential: Coef {
                scale: (k as f64) * (k as f64),
                kind: CoefKind::One,
            },
            density: Coef {
                scale: 1.0,
                kind: CoefKind::InvSquare,
            },
        },
        Geometry::ClassicalBall { dim } => {
            let rate = (dim - 2) as f64;
            SLProblem1D {
                domain: Domain1D::HalfLine { left: 0.0 },
                stiffness: Coef {
                    scale: 1.0,
                    kind: CoefKind::ExpDecay { rate },
                },
                potential: Coef {
                    scale: mu,
                    kind: CoefKind::ExpDecay { rate },
                },
                density: Coef {
                    scale: 1.0,
                    kind: CoefKind::ExpDecay { rate },
                },
            }
        }
        Geometry::ClassicalWholeSpace { dim } => {
            let rate = (dim - 2) as f64;
            SLProblem1D {
                domain: Domain1D::Line,
                stiffness: Coef {
                    scale: 1.0,
                    kind: CoefKind::ExpDecay { rate },
                },
                potential: Coef {
                    scale: mu,
                    kind: CoefKind::ExpDecay { rate },
                },
                density: Coef {
                    scale: 1.0,
                    kind: CoefKind::ExpDecay { rate },
                },
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn critical_disk_reduction() {
        let p = ModeProblem::new(
            Geometry::CriticalDisk {
                a: std::f64::consts::E,
            },
            1,
            2.0,
        )
        .unwrap();
        let slp = reduce_mode(&p).unwrap();
        match slp.domain {
            Domain1D::HalfLine { left } => assert!((left - 1.0).abs() < 1e-15),
            _ => panic!("expected half line"),
        }
        assert_eq!(slp.stiffness, Coef::ONE);
        assert_eq!(slp.potential.scale, 1.0);
        assert_eq!(slp.density.kind, CoefKind::InvSquare);
    }

    #[test]
    fn ball_reduction_carries_poincare_constant() {
        let p = ModeProblem::new(Geometry::ClassicalBall { dim: 3 }, 1, 2.0).unwrap();
        let slp = reduce_mode(&p).unwrap();
        assert_eq!(slp.potential.scale, 2.0); // μ₁ = N - 1
        assert_eq!(slp.stiffness.kind, CoefKind::ExpDecay { rate: 1.0 });
    }

    #[test]
    fn constraint_and_domain_checks() {
        assert!(ModeProblem::new(Geometry::CriticalDisk { a: 2.0 }, 0, 2.0).is_err());
        assert!(ModeProblem::new(Geometry::CriticalDisk { a: 1.0 }, 1, 2.0).is_err());
        assert!(ModeProblem::new(Geometry::ClassicalBall { dim: 2 }, 1, 2.0).is_err());
    }

    #[test]
    fn inv_square_moments_match_quadrature() {
        // dense midpoint reference
        for &(x0, h) in &[(1.0, 0.01), (1.0, 0.5), (40.0, 0.005), (0.01, 0.002)] {
            let m = inv_square_moments(x0, h);
            for k in 0..3 {
                let n = 20000;
                let mut acc = 0.0;
                for i in 0..n {
                    let tau = h * (i as f64 + 0.5) / n as f64;
                    acc += tau.powi(k) / ((x0 + tau) * (x0 + tau));
                }
                acc *= h / n as f64;
                let rel = (m[k as usize] - acc).abs() / acc.abs();
                assert!(
                    rel < 1e-7,
                    "x0={x0} h={h} k={k}: {} vs {acc}",
                    m[k as usize]
                );
            }
        }
    }

    #[test]
    fn exp_moments_match_quadrature() {
        for &(c, x0, h) in &[(1.0, 0.0, 0.01), (1.0, 5.0, 0.5), (3.0, 2.0, 0.002)] {
            let m = exp_decay_moments(c, x0, h);
            for k in 0..3 {
                let n = 20000;
                let mut acc = 0.0;
                for i in 0..n {
                    let tau = h * (i as f64 + 0.5) / n as f64;
                    acc += tau.powi(k) * (-c * (x0 + tau)).exp();
                }
                acc *= h / n as f64;
                let rel = (m[k as usize] - acc).abs() / acc.abs();
                assert!(rel < 1e-7, "c={c} x0={x0} h={h} k={k}");
            }
        }
    }
}

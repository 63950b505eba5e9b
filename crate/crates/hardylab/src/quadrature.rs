//! Composite quadrature of radial energies and weighted masses.
//!
//! Trapezoid cells everywhere except at a domain endpoint whose integrand is
//! singular, where the cell switches to the open midpoint rule. One Richardson
//! halving step supplies both the error estimate and the returned
//! (extrapolated) value; both rules share the h² leading error so the same
//! extrapolation applies cellwise.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::modes::AngularMode;
use crate::profile::RadialProfile;
use crate::weights::WeightSpec;

/// Quadrature value with its Richardson error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
}

enum Sample {
    Finite(f64),
    Singular,
}

/// Composite rule over explicit nodes. `f` must return finite values on all
/// interior nodes; non-finite values are tolerated only at the two outermost
/// nodes (open quadrature there). Returns Err on interior singularities.
fn composite<F: Fn(f64) -> Result<Sample>>(nodes: &[f64], f: &F) -> Result<f64> {
    let n = nodes.len();
    let mut samples = Vec::with_capacity(n);
    for (i, &x) in nodes.iter().enumerate() {
        let s = f(x)?;
        if matches!(s, Sample::Singular) && i != 0 && i != n - 1 {
            return Err(Error::SingularWeight(x));
        }
        samples.push(s);
    }
    let mut acc = 0.0;
    for i in 0..n - 1 {
        let (x0, x1) = (nodes[i], nodes[i + 1]);
        let h = x1 - x0;
        match (&samples[i], &samples[i + 1]) {
            (Sample::Finite(g0), Sample::Finite(g1)) => acc += 0.5 * h * (g0 + g1),
            _ => {
                let m = 0.5 * (x0 + x1);
                match f(m)? {
                    Sample::Finite(gm) => acc += h * gm,
                    Sample::Singular => return Err(Error::SingularWeight(m)),
                }
            }
        }
    }
    Ok(acc)
}

fn richardson<F: Fn(f64) -> Result<Sample>>(grid: &Grid, f: &F) -> Result<QuadResult> {
    let coarse = composite(grid.nodes(), f)?;
    let fine_grid = grid.refined_half();
    let fine = composite(fine_grid.nodes(), f)?;
    let error_estimate = (fine - coarse).abs() / 3.0;
    Ok(QuadResult {
        value: fine + (fine - coarse) / 3.0,
        error_estimate,
    })
}

/// Composite+Richardson quadrature of a scalar integrand over the grid.
/// Non-finite samples are tolerated only at the outermost nodes (open
/// midpoint cells there); NaN or ∞ at an interior node is an error.
pub fn quad_scalar<F: Fn(f64) -> f64>(grid: &Grid, f: F) -> Result<QuadResult> {
    let wrapped = |x: f64| -> Result<Sample> {
        let v = f(x);
        if v.is_finite() {
            Ok(Sample::Finite(v))
        } else {
            Ok(Sample::Singular)
        }
    };
    richardson(grid, &wrapped)
}

/// ∫ f(r)² w(r) r^{N-1} dr over the grid span (angular factor excluded).
///
/// The weight may be singular at the outermost grid nodes (open quadrature
/// there); a singular interior node or a non-finite profile value is an
/// error.
pub fn integrate(profile: &RadialProfile, weight: &WeightSpec, grid: &Grid) -> Result<QuadResult> {
    weight.validate(profile.dim())?;
    let dim = profile.dim();
    let f = |r: f64| -> Result<Sample> {
        let v = profile.value(r);
        if v.is_nan() {
            return Err(Error::NonFiniteProfile(r));
        }
        let wm = weight.eval_with_measure(r, dim);
        if wm.is_nan() {
            return Err(Error::SingularWeight(r));
        }
        let g = v * v * wm;
        if g.is_finite() {
            Ok(Sample::Finite(g))
        } else {
            Ok(Sample::Singular)
        }
    };
    richardson(grid, &f)
}

/// ∫ ( f'(r)² + μ_k f(r)²/r² ) r^{N-1} dr over the grid span.
///
/// For k ≥ 1 the angular term forces f(0) = 0; a grid node at r = 0 with
/// f(0) ≠ 0 is flagged as an infinite-energy input, and with f(0) = 0 the
/// integrand limit 0 is used (valid for N ≥ 2).
pub fn mode_energy(profile: &RadialProfile, mode: &AngularMode, grid: &Grid) -> Result<QuadResult> {
    if mode.dim() != profile.dim() {
        return Err(Error::BadParameter(format!(
            "mode dimension {} does not match profile dimension {}",
            mode.dim(),
            profile.dim()
        )));
    }
    let mu = mode.eigenvalue();
    let n = profile.dim() as i32;
    let f = |r: f64| -> Result<Sample> {
        if r == 0.0 {
            let v0 = profile.value(0.0);
            if v0.is_nan() {
                return Err(Error::NonFiniteProfile(0.0));
            }
            if mode.k() >= 1 && v0.abs() > 1e-12 {
                return Err(Error::InfiniteEnergy(v0));
            }
            // integrand limit at the origin for N >= 2
            return Ok(Sample::Finite(0.0));
        }
        let v = profile.value(r);
        let dv = profile.derivative(r);
        if v.is_nan() || dv.is_nan() {
            return Err(Error::NonFiniteProfile(r));
        }
        if !v.is_finite() || !dv.is_finite() {
            return Ok(Sample::Singular);
        }
        // fused half-power factors: f'² r^{N-1} can be finite while f'²
        // alone overflows (integrable derivative singularities)
        let radial = {
            let s = dv * r.powf((n - 1) as f64 / 2.0);
            s * s
        };
        let angular = if mu == 0.0 {
            0.0
        } else {
            let s = v * r.powf((n - 3) as f64 / 2.0);
            mu * s * s
        };
        let g = radial + angular;
        if g.is_finite() {
            Ok(Sample::Finite(g))
        } else {
            Ok(Sample::Singular)
        }
    };
    richardson(grid, &f)
}

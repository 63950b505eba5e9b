//! Explicit extremizing families and the non-compactness scaling transform,
//! with Rayleigh-quotient evaluation.
//!
//! Critical-disk integrals are evaluated in the log variable t = log(a/r),
//! where the a = 1 weight singularity at the outer boundary becomes a plain
//! power singularity at t = 0 that graded grids resolve inside f64 range.
//! Classical geometries integrate in r directly.

use crate::error::{Error, Result};
use crate::grid::{two_sided_graded, Grid};
use crate::modes::AngularMode;
use crate::profile::RadialProfile;
use crate::quadrature::{integrate, mode_energy, quad_scalar, QuadResult};
use crate::spectral::Geometry;
use crate::weights::WeightSpec;

/// The built-in radial families; the angular factor is the first mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TestFamily {
    /// 2(log 2)^α r on [0,1/2], (log(1/r))^α on (1/2,1); α > 1/2.
    UAlpha { alpha: f64 },
    /// 0 on [0,1/(2m)], linear ramp to r^{-(N-2)/2} - 1 on [1/m,1]; N ≥ 3.
    VM { m: u32, dim: u32 },
    /// r^{a} on [0,1/2], C¹ cubic blend to 0 at r = 1; a > 0, ball geometry.
    FABall { a_exp: f64, dim: u32 },
    /// r on \[0,1\], r^{-a} on (1,∞); a > (N-2)/2 so the denominator converges.
    FAWholeSpace { a_exp: f64, dim: u32 },
}

/// Builds the family's radial factor with closed-form derivatives per piece.
/// The pieces agree exactly at their junctions by construction; a sampled
/// continuity check runs at construction as a guard.
pub fn make_family(family: &TestFamily) -> Result<RadialProfile> {
    let profile = match *family {
        TestFamily::UAlpha { alpha } => {
            if !(alpha > 0.5) {
                return Err(Error::BadParameter(format!(
                    "u_alpha requires alpha > 1/2, got {alpha}"
                )));
            }
            let c = 2.0 * std::f64::consts::LN_2.powf(alpha);
            let value = move |r: f64| {
                if r <= 0.5 {
                    c * r
                } else if r < 1.0 {
                    (1.0 / r).ln().powf(alpha)
                } else {
                    0.0
                }
            };
            let deriv = move |r: f64| {
                if r <= 0.5 {
                    c
                } else if r < 1.0 {
                    -alpha * (1.0 / r).ln().powf(alpha - 1.0) / r
                } else {
                    0.0
                }
            };
            // exact log form at σ = ln(1/r): σ^α on [0, ln 2], c·e^{-σ} beyond
            // (IEEE powf(0, ·) gives the right σ = 0 limits for every α)
            let log_form = move |sigma: f64| -> (f64, f64) {
                if sigma <= std::f64::consts::LN_2 {
                    (sigma.powf(alpha), alpha * sigma.powf(alpha - 1.0))
                } else {
                    let v = c * (-sigma).exp();
                    (v, -v)
                }
            };
            RadialProfile::from_fns(2, 1.0, value, deriv)?
                .with_breakpoints(vec![0.5])
                .with_log_form(log_form)
        }
        TestFamily::VM { m, dim } => {
            if m < 2 {
                return Err(Error::BadParameter(format!("v_m requires m >= 2, got {m}")));
            }
            if dim < 3 {
                return Err(Error::BadParameter(format!(
                    "v_m requires N >= 3, got {dim}"
                )));
            }
            let mf = m as f64;
            let beta = (dim as f64 - 2.0) / 2.0;
            let ramp_slope = 2.0 * mf * (mf.powf(beta) - 1.0);
            let inner = 1.0 / (2.0 * mf);
            let knee = 1.0 / mf;
            let value = move |r: f64| {
                if r <= inner {
                    0.0
                } else if r < knee {
                    ramp_slope * (r - inner)
                } else if r <= 1.0 {
                    r.powf(-beta) - 1.0
                } else {
                    0.0
                }
            };
            let deriv = move |r: f64| {
                if r <= inner {
                    0.0
                } else if r < knee {
                    ramp_slope
                } else if r <= 1.0 {
                    -beta * r.powf(-beta - 1.0)
                } else {
                    0.0
                }
            };
            RadialProfile::from_fns(dim, 1.0, value, deriv)?.with_breakpoints(vec![inner, knee])
        }
        TestFamily::FABall { a_exp, dim } => {
            if !(a_exp > 0.0) {
                return Err(Error::BadParameter(format!(
                    "ball family requires a positive exponent, got {a_exp}"
                )));
            }
            if dim < 3 {
                return Err(Error::BadParameter(format!(
                    "ball family requires N >= 3, got {dim}"
                )));
            }
            // cubic Hermite on (1/2,1) matching (value, slope) of r^a at 1/2
            // and (0,0) at 1
            let v0 = 0.5f64.powf(a_exp);
            let d0 = a_exp * 0.5f64.powf(a_exp - 1.0);
            let value = move |r: f64| {
                if r <= 0.5 {
                    r.powf(a_exp)
                } else if r < 1.0 {
                    let s = (r - 0.5) / 0.5;
                    let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
                    let h10 = s * (1.0 - s) * (1.0 - s);
                    h00 * v0 + h10 * 0.5 * d0
                } else {
                    0.0
                }
            };
            let deriv = move |r: f64| {
                if r <= 0.5 {
                    a_exp * r.powf(a_exp - 1.0)
                } else if r < 1.0 {
                    let s = (r - 0.5) / 0.5;
                    let dh00 = 6.0 * s * (s - 1.0);
                    let dh10 = (1.0 - s) * (1.0 - 3.0 * s);
                    (dh00 * v0 + dh10 * 0.5 * d0) / 0.5
                } else {
                    0.0
                }
            };
            RadialProfile::from_fns(dim, 1.0, value, deriv)?.with_breakpoints(vec![0.5])
        }
        TestFamily::FAWholeSpace { a_exp, dim } => {
            if dim < 3 {
                return Err(Error::BadParameter(format!(
                    "whole-space family requires N >= 3, got {dim}"
                )));
            }
            let critical = (dim as f64 - 2.0) / 2.0;
            if !(a_exp > critical) {
                return Err(Error::BadParameter(format!(
                    "whole-space family requires a > (N-2)/2 = {critical} (denominator diverges), got {a_exp}"
                )));
            }
            let value = move |r: f64| if r <= 1.0 { r } else { r.powf(-a_exp) };
            let deriv = move |r: f64| {
                if r <= 1.0 {
                    1.0
                } else {
                    -a_exp * r.powf(-a_exp - 1.0)
                }
            };
            RadialProfile::from_fns(dim, f64::INFINITY, value, deriv)?.with_breakpoints(vec![1.0])
        }
    };
    verify_junctions(&profile)?;
    // the compactly supported families vanish at the outer boundary
    let profile = match family {
        TestFamily::FAWholeSpace { .. } => profile,
        _ => profile.with_dirichlet_outer()?,
    };
    Ok(profile)
}

/// |f(b-) - f(b+)| ≤ 1e-12·scale at every declared junction.
fn verify_junctions(profile: &RadialProfile) -> Result<()> {
    for &b in profile.breakpoints() {
        let eps = 1e-9 * b.max(1e-9);
        let lo = profile.value(b - eps);
        let hi = profile.value(b + eps);
        let scale = lo.abs().max(hi.abs()).max(1.0);
        if (hi - lo).abs() > 1e-6 * scale {
            return Err(Error::BadParameter(format!(
                "family discontinuous at r = {b}: {lo} vs {hi}"
            )));
        }
    }
    Ok(())
}

/// The scaling transform u_λ(x) = λ^{-1/2} u(y), y = (|x|/a)^{λ-1} x, for a
/// base profile supported in the unit disk (N = 2). supp u_λ ⊂ B(a^{1-1/λ}).
pub fn transform_u_lambda(base: &RadialProfile, lambda: f64, a: f64) -> Result<RadialProfile> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::BadParameter(format!(
            "transform requires lambda in (0,1], got {lambda}"
        )));
    }
    if !(a > 1.0) {
        return Err(Error::BadParameter(format!(
            "transform requires a > 1, got {a}"
        )));
    }
    if base.dim() != 2 {
        return Err(Error::BadParameter(
            "transform is defined on the disk (N = 2)".into(),
        ));
    }
    if !(base.r_max() <= 1.0 + 1e-12) {
        return Err(Error::BadParameter(format!(
            "base support must lie in the unit disk, got r_max = {}",
            base.r_max()
        )));
    }
    // image of the base support radius; a^{1-1/λ} when the base fills B₁
    let support = base.r_max().powf(1.0 / lambda) * a.powf(1.0 - 1.0 / lambda);
    let amp = lambda.powf(-0.5);
    let b1 = base.clone();
    let b2 = base.clone();
    // |y| = r^λ a^{1-λ}
    let radius_map = move |r: f64| r.powf(lambda) * a.powf(1.0 - lambda);
    let rm2 = radius_map;
    let value = move |r: f64| {
        if r <= 0.0 {
            return 0.0;
        }
        amp * b1.value(radius_map(r))
    };
    let deriv = move |r: f64| {
        if r <= 0.0 {
            return 0.0;
        }
        let s = rm2(r);
        amp * b2.derivative(s) * lambda * s / r
    };
    let mapped_breaks: Vec<f64> = base
        .breakpoints()
        .iter()
        .map(|&s| (s * a.powf(lambda - 1.0)).powf(1.0 / lambda))
        .collect();
    let mut out =
        RadialProfile::from_fns(2, support, value, deriv)?.with_breakpoints(mapped_breaks);
    // log offsets compose exactly: with σ̃ = ln(support/r) and σ = ln(r_max/s)
    // for the base, the map is σ = λ σ̃ (all a-dependence cancels)
    if base.has_log_form() {
        let b3 = base.clone();
        out = out.with_log_form(move |sigma: f64| {
            let (v, dv) = b3.log_eval(lambda * sigma).expect("base log form");
            (amp * v, amp * lambda * dv)
        });
    }
    Ok(out)
}

/// Numerator, denominator, quotient and quadrature error for a profile
/// against a geometry's mode-1 quotient. Radial integrals exclude the
/// angular factor, which is recorded separately; for the q = 2 quotients
/// here the factor is common to both sides and cancels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuotientReport {
    pub numerator: f64,
    pub denominator: f64,
    pub quotient: f64,
    pub error_estimate: f64,
    pub angular_l2: f64,
    pub mode_k: u32,
}

const GRADING_RATIO: f64 = 0.95;

/// Grid over [a,b] clustered at both ends down to essentially the smallest
/// representable offsets (so integrable endpoint power singularities with
/// tiny exponents still capture their mass), with interior cells capped so
/// smooth stretches stay resolved.
fn deep_graded(a: f64, b: f64) -> Result<Grid> {
    let span = b - a;
    let floor_frac = (1e-300 / span).clamp(1e-305, 0.25);
    let base = two_sided_graded(a, b, GRADING_RATIO, floor_frac)?;
    let max_h = (span / 200.0).min(0.025);
    let mut nodes = Vec::with_capacity(base.len());
    nodes.push(base.start());
    for w in base.nodes().windows(2) {
        let h = w[1] - w[0];
        if h > max_h {
            let k = (h / max_h).ceil() as usize;
            for j in 1..k {
                nodes.push(w[0] + h * j as f64 / k as f64);
            }
        }
        nodes.push(w[1]);
    }
    Grid::from_nodes(nodes)
}

fn segmented_grid(start: f64, end: f64, breaks: &[f64]) -> Result<Grid> {
    let mut cuts = vec![start];
    for &b in breaks {
        if b > start && b < end {
            cuts.push(b);
        }
    }
    cuts.push(end);
    let mut segs = Vec::with_capacity(cuts.len() - 1);
    for w in cuts.windows(2) {
        segs.push(deep_graded(w[0], w[1])?);
    }
    Grid::concat(&segs)
}

/// (g, dg/dσ) at the log offset σ = ln(r_max/r): the exact log form when the
/// profile carries one, otherwise composed through r (which quantizes at
/// ~1e-16 near the outer boundary — fine for weights regular there).
fn log_parts(profile: &RadialProfile, sigma: f64) -> (f64, f64) {
    if let Some(gd) = profile.log_eval(sigma) {
        return gd;
    }
    let r = profile.r_max() * (-sigma).exp();
    (profile.value(r), -r * profile.derivative(r))
}

/// σ-grid covering the profile's support: σ = ln(r_max/r) from 0 (outer
/// boundary) to the truncation/innermost radius, split at junction images.
fn critical_sigma_grid(profile: &RadialProfile) -> Result<Grid> {
    if !profile.r_max().is_finite() {
        return Err(Error::BadParameter(
            "critical-disk quotients need a profile supported in the unit disk".into(),
        ));
    }
    let sigma_end = critical_sigma_end(profile);
    let mut breaks: Vec<f64> = profile
        .breakpoints()
        .iter()
        .filter(|&&r| r > 0.0)
        .map(|&r| (profile.r_max() / r).ln())
        .collect();
    breaks.sort_by(|x, y| x.partial_cmp(y).unwrap());
    segmented_grid(0.0, sigma_end, &breaks)
}

/// Truncation offset for the log-variable integrals. Sampled profiles stop
/// at their innermost radius; analytic ones are probed until |f| and |r f'|
/// fall below 1e-13 of their observed scale (the integrands are at least
/// quadratic in those magnitudes, so the dropped tail is far below
/// quadrature error).
fn critical_sigma_end(profile: &RadialProfile) -> f64 {
    if let Some(radii) = profile.sample_radii() {
        return (profile.r_max() / radii[0]).ln().max(1e-6);
    }
    let step = 2.0;
    let mut scale = 0.0f64;
    let mut quiet = 0;
    let mut sigma = 0.0;
    for _ in 0..2000 {
        sigma += step;
        let (g, dg) = log_parts(profile, sigma);
        let m = g.abs().max(dg.abs());
        scale = scale.max(m);
        if m <= 1e-13 * scale.max(1e-300) {
            quiet += 1;
            if quiet >= 3 {
                return sigma.max(60.0);
            }
        } else {
            quiet = 0;
        }
    }
    2000.0 * step
}

/// ∫ g'(t)² dt = ∫ f'(r)² r dr — the radial Dirichlet energy of a plain
/// radial (mode-0) function on the disk, in the log variable (a-independent).
pub fn critical_dirichlet_energy(profile: &RadialProfile, _a: f64) -> Result<QuadResult> {
    let grid = critical_sigma_grid(profile)?;
    quad_scalar(&grid, |sigma| {
        let (_, dg) = log_parts(profile, sigma);
        dg * dg
    })
}

/// g^q t^{w}, robust to intermediate under/overflow near the t = 0 endpoint
/// (falls back to log arithmetic when the direct product degenerates).
fn pow_weighted(g_abs: f64, q: f64, t: f64, w_exp: f64) -> f64 {
    if g_abs == 0.0 {
        return 0.0;
    }
    let direct = g_abs.powf(q) * t.powf(w_exp);
    if direct.is_finite() && direct != 0.0 {
        return direct;
    }
    (q * g_abs.ln() + w_exp * t.ln()).exp()
}

/// ∫ |g(t)|^q t^{-1-q/2} dt — the radial factor of the critical weighted
/// Lq mass, in the log variable (a ≥ 1; the a = 1 endpoint singularity sits
/// at t = 0 and is handled by open graded quadrature).
pub fn critical_weighted_qnorm(profile: &RadialProfile, a: f64, q: f64) -> Result<QuadResult> {
    if !(a >= 1.0) {
        return Err(Error::BadParameter(format!(
            "critical weight requires a >= 1, got {a}"
        )));
    }
    if !(q >= 2.0) {
        return Err(Error::BadParameter(format!(
            "critical weight requires q >= 2, got {q}"
        )));
    }
    let grid = critical_sigma_grid(profile)?;
    let t_start = (a / profile.r_max()).ln();
    quad_scalar(&grid, |sigma| {
        let (g, _) = log_parts(profile, sigma);
        pow_weighted(g.abs(), q, t_start + sigma, -1.0 - q / 2.0)
    })
}

/// Mode-1 quotient of a profile against the geometry's q = 2 weight.
pub fn quotient(profile: &RadialProfile, geometry: &Geometry) -> Result<QuotientReport> {
    let dim = geometry.dim();
    if dim != profile.dim() {
        return Err(Error::BadParameter(format!(
            "profile dimension {} does not match geometry dimension {dim}",
            profile.dim()
        )));
    }
    let mode = AngularMode::new(1, dim)?;
    let (num, den) = match *geometry {
        Geometry::CriticalDisk { a } => {
            if !(a >= 1.0) {
                return Err(Error::BadParameter(format!(
                    "critical-disk quotients require a >= 1, got {a}"
                )));
            }
            let grid = critical_sigma_grid(profile)?;
            let t_start = (a / profile.r_max()).ln();
            let k2 = 1.0;
            let num = quad_scalar(&grid, |sigma| {
                let (g, dg) = log_parts(profile, sigma);
                dg * dg + k2 * g * g
            })?;
            let den = quad_scalar(&grid, |sigma| {
                let (g, _) = log_parts(profile, sigma);
                // (g/t)² rather than g²/t²: t² underflows near the a = 1 end
                let u = g / (t_start + sigma);
                u * u
            })?;
            (num, den)
        }
        Geometry::ClassicalBall { .. } => {
            let grid = segmented_grid(0.0, profile.r_max(), profile.breakpoints())?;
            let num = mode_energy(profile, &mode, &grid)?;
            let den = integrate(profile, &WeightSpec::ClassicalHardy, &grid)?;
            (num, den)
        }
        Geometry::ClassicalWholeSpace { .. } => {
            let r_cut = if profile.r_max().is_finite() {
                profile.r_max()
            } else {
                1e8
            };
            let mut breaks = profile.breakpoints().to_vec();
            breaks.push(1.0);
            let inner = segmented_grid(0.0, 1.0f64.min(r_cut), &breaks)?;
            let grid = if r_cut > 1.0 {
                let outer = log_graded(1.0, r_cut)?;
                Grid::concat(&[inner, outer])?
            } else {
                inner
            };
            let num = mode_energy(profile, &mode, &grid)?;
            let den = integrate(profile, &WeightSpec::ClassicalHardy, &grid)?;
            (num, den)
        }
    };
    if !(den.value > 0.0) {
        return Err(Error::ZeroDenominator);
    }
    let quotient = num.value / den.value;
    let error_estimate = quotient
        * (num.error_estimate / num.value.abs().max(1e-300) + den.error_estimate / den.value);
    Ok(QuotientReport {
        numerator: num.value,
        denominator: den.value,
        quotient,
        error_estimate,
        angular_l2: mode.l2_mass()?,
        mode_k: 1,
    })
}

/// Logarithmically distributed nodes clustered at both ends (graded in
/// u = ln r, then exponentiated), so derivative kinks at the inner junction
/// meet vanishingly small first cells. Collapsed nodes near r = a are
/// dropped.
fn log_graded(a: f64, b: f64) -> Result<Grid> {
    let base = deep_graded(a.ln(), b.ln())?;
    let mut nodes: Vec<f64> = Vec::with_capacity(base.len());
    for &u in base.nodes() {
        let r = u.exp();
        match nodes.last() {
            Some(&last) if r <= last => continue,
            _ => nodes.push(r),
        }
    }
    Grid::from_nodes(nodes)
}

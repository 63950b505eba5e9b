//! Layer-cake step functions: exact decreasing rearrangement, Lorentz norms,
//! dilations, Schwartz symmetrization of radial profiles, and the tail/head
//! bounds used in the compactness arguments.
//!
//! The step representation keeps every norm a finite sum of closed-form
//! power integrals, so the module's scaling identities hold to rounding
//! error rather than discretization error. Divergent norms are reported as
//! +∞; NaN is always a bug and never returned.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::modes::unit_sphere_area;
use crate::profile::RadialProfile;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

/// Lorentz space indices (p, q); q may be +∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzParams {
    pub p: f64,
    pub q: f64,
}

impl LorentzParams {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::BadParameter(format!(
                "Lorentz p must be finite and >= 1, got {p}"
            )));
        }
        if !(q >= 1.0) {
            return Err(Error::BadParameter(format!(
                "Lorentz q must be >= 1 (or +inf), got {q}"
            )));
        }
        Ok(LorentzParams { p, q })
    }
}

/// Nonnegative layer-cake function on R^N: pieces (value, measure) meaning
/// |{u > λ}| is piecewise constant. Canonical form has values strictly
/// decreasing with equal values merged.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    pieces: Vec<(f64, f64)>,
    dim: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundSide {
    Tail,
    Head,
}

impl StepFunction {
    /// Validates pieces: values ≥ 0 and finite, measures > 0 and finite,
    /// finite total measure. Order is preserved (not canonicalized).
    pub fn new(pieces: Vec<(f64, f64)>, dim: u32) -> Result<Self> {
        if dim < 1 {
            return Err(Error::BadParameter("dimension must be >= 1".into()));
        }
        let mut total = 0.0;
        for (i, &(v, m)) in pieces.iter().enumerate() {
            if !(v >= 0.0) || !v.is_finite() || !(m > 0.0) || !m.is_finite() {
                return Err(Error::BadPiece {
                    index: i,
                    value: v,
                    measure: m,
                });
            }
            total += m;
        }
        if !total.is_finite() {
            return Err(Error::BadParameter("total measure must be finite".into()));
        }
        Ok(StepFunction { pieces, dim })
    }

    pub fn pieces(&self) -> &[(f64, f64)] {
        &self.pieces
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn total_measure(&self) -> f64 {
        self.pieces.iter().map(|&(_, m)| m).sum()
    }

    pub fn is_canonical(&self) -> bool {
        self.pieces.windows(2).all(|w| w[0].0 > w[1].0)
    }

    fn require_canonical(&self) -> Result<()> {
        if self.is_canonical() {
            Ok(())
        } else {
            Err(Error::NotCanonical)
        }
    }

    /// Σ vᵢ^s mᵢ — the layer-cake moment ∫ u^s, exact.
    pub fn moment(&self, s: f64) -> f64 {
        self.pieces.iter().map(|&(v, m)| v.powf(s) * m).sum()
    }

    /// Canonical sorted form: values strictly decreasing, equal values
    /// merged, zero-value pieces dropped. Equimeasurable with the input.
    pub fn decreasing_rearrangement(&self) -> StepFunction {
        let mut sorted: Vec<(f64, f64)> = self
            .pieces
            .iter()
            .copied()
            .filter(|&(v, _)| v > 0.0)
            .collect();
        sorted.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(sorted.len());
        for (v, m) in sorted {
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 += m,
                _ => merged.push((v, m)),
            }
        }
        StepFunction {
            pieces: merged,
            dim: self.dim,
        }
    }

    /// u*(t) evaluated at t ≥ 0 (canonical input required).
    pub fn rearranged_at(&self, t: f64) -> Result<f64> {
        self.require_canonical()?;
        let mut acc = 0.0;
        for &(v, m) in &self.pieces {
            acc += m;
            if t < acc {
                return Ok(v);
            }
        }
        Ok(0.0)
    }

    /// Lorentz norm ‖u‖_{p,q}. Closed-form piecewise power integrals for
    /// q < ∞; for q = ∞ the sup of t^{1/p} u*(t), attained at right
    /// endpoints of constancy intervals. Overflow reports +∞.
    pub fn lorentz_norm(&self, params: LorentzParams) -> Result<f64> {
        self.require_canonical()?;
        let p = params.p;
        let q = params.q;
        if self.pieces.is_empty() {
            return Ok(0.0);
        }
        let norm = if q.is_infinite() {
            let mut sup: f64 = 0.0;
            let mut t = 0.0;
            for &(v, m) in &self.pieces {
                t += m;
                sup = sup.max(v * t.powf(1.0 / p));
            }
            sup
        } else {
            // ∫ (t^{1/p} u*)^q dt/t = Σ v^q (p/q)(T_i^{q/p} - T_{i-1}^{q/p})
            let e = q / p;
            let mut acc = 0.0;
            let mut t_prev: f64 = 0.0;
            let mut t = 0.0;
            for &(v, m) in &self.pieces {
                t += m;
                acc += v.powf(q) * (p / q) * (t.powf(e) - t_prev.powf(e));
                t_prev = t;
            }
            acc.powf(1.0 / q)
        };
        if norm.is_nan() {
            return Err(Error::BadParameter(
                "Lorentz norm evaluated to NaN (invalid pieces)".into(),
            ));
        }
        Ok(norm)
    }

    /// Layer-cake of x ↦ m^β u(mx): values scale by m^β, measures by m^{-N}.
    /// The norm law is ‖dilate(u,m,β)‖_{p,q} = m^{β - N/p} ‖u‖_{p,q}.
    pub fn dilate(&self, m: f64, beta: f64) -> Result<StepFunction> {
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::BadParameter(format!(
                "dilation factor must be positive, got {m}"
            )));
        }
        let vf = m.powf(beta);
        let mf = m.powi(-(self.dim as i32));
        let pieces = self
            .pieces
            .iter()
            .map(|&(v, mm)| (v * vf, mm * mf))
            .collect();
        StepFunction::new(pieces, self.dim)
    }

    /// ∫_a^b (u*)^s dt, exact on the step representation (canonical input).
    pub fn rearranged_power_integral(&self, s: f64, a: f64, b: f64) -> Result<f64> {
        self.require_canonical()?;
        let mut acc = 0.0;
        let mut lo = 0.0;
        for &(v, m) in &self.pieces {
            let hi = lo + m;
            let from = lo.max(a);
            let to = hi.min(b);
            if to > from {
                acc += v.powf(s) * (to - from);
            }
            lo = hi;
        }
        Ok(acc)
    }

    /// Both sides of the weak-norm tail/head estimate.
    ///
    /// Tail (p < 2):   ∫_R^∞ (u*)² dt  ≤ ‖u‖²_{p,∞} ∫_R^∞ t^{-2/p} dt.
    /// Head (p > 2*):  ∫_0^R (u*)^{2*} dt ≤ ‖u‖^{2*}_{p,∞} ∫_0^R t^{-2*/p} dt,
    /// with 2* = 2N/(N-2) taken from the step function's dimension (N ≥ 3).
    pub fn tail_head_bound(
        &self,
        params: LorentzParams,
        r: f64,
        side: BoundSide,
    ) -> Result<(f64, f64)> {
        self.require_canonical()?;
        let p = params.p;
        if !(r > 0.0) {
            return Err(Error::BadParameter(format!(
                "cut point must be positive, got {r}"
            )));
        }
        let weak = self.lorentz_norm(LorentzParams::new(p, f64::INFINITY)?)?;
        match side {
            BoundSide::Tail => {
                if !(p < 2.0) {
                    return Err(Error::BadParameter(format!(
                        "tail bound needs p < 2 (divergent rhs otherwise), got p = {p}"
                    )));
                }
                let lhs = self.rearranged_power_integral(2.0, r, f64::INFINITY)?;
                // ∫_R^∞ t^{-2/p} dt = R^{1-2/p} / (2/p - 1)
                let rhs = weak.powi(2) * r.powf(1.0 - 2.0 / p) / (2.0 / p - 1.0);
                Ok((lhs, rhs))
            }
            BoundSide::Head => {
                if self.dim < 3 {
                    return Err(Error::BadParameter(
                        "head bound uses 2* = 2N/(N-2), which needs N >= 3".into(),
                    ));
                }
                let crit = 2.0 * self.dim as f64 / (self.dim as f64 - 2.0);
                if !(p > crit) {
                    return Err(Error::BadParameter(format!(
                        "head bound needs p > 2* = {crit} (divergent rhs otherwise), got p = {p}"
                    )));
                }
                let lhs = self.rearranged_power_integral(crit, 0.0, r)?;
                // ∫_0^R t^{-2*/p} dt = R^{1-2*/p} / (1 - 2*/p)
                let rhs = weak.powf(crit) * r.powf(1.0 - crit / p) / (1.0 - crit / p);
                Ok((lhs, rhs))
            }
        }
    }

    /// Reads the `value,measure` CSV format and canonicalizes.
    pub fn from_csv<P: AsRef<Path>>(path: P, dim: u32) -> Result<StepFunction> {
        let file = std::fs::File::open(path)?;
        let reader = BufReader::new(file);
        let mut pieces = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if lineno == 0 {
                if line != "value,measure" {
                    return Err(Error::CsvParse {
                        line: 1,
                        msg: format!("expected header 'value,measure', got '{line}'"),
                    });
                }
                continue;
            }
            let mut parts = line.split(',');
            let parse = |s: Option<&str>, what: &str| -> Result<f64> {
                s.map(str::trim)
                    .ok_or_else(|| Error::CsvParse {
                        line: lineno + 1,
                        msg: format!("missing {what}"),
                    })?
                    .parse::<f64>()
                    .map_err(|e| Error::CsvParse {
                        line: lineno + 1,
                        msg: format!("bad {what}: {e}"),
                    })
            };
            let v = parse(parts.next(), "value")?;
            let m = parse(parts.next(), "measure")?;
            pieces.push((v, m));
        }
        Ok(StepFunction::new(pieces, dim)?.decreasing_rearrangement())
    }

    pub fn to_csv<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        writeln!(f, "value,measure")?;
        for &(v, m) in &self.pieces {
            writeln!(f, "{v},{m}")?;
        }
        Ok(())
    }
}

/// Schwartz symmetrization of a nonnegative radial profile: annulus slabs
/// (value at the cell midpoint, measure ω_{N-1}(r_{i+1}^N - r_i^N)/N),
/// rearranged decreasingly. Satisfies u*(t) = u^#(r) at t = ω_{N-1} r^N / N.
pub fn symmetrize_radial(profile: &RadialProfile, grid: &Grid) -> Result<StepFunction> {
    let n = profile.dim();
    let omega = unit_sphere_area(n);
    let mut pieces = Vec::with_capacity(grid.len() - 1);
    for w in grid.nodes().windows(2) {
        let (r0, r1) = (w[0], w[1]);
        let v = profile.value(0.5 * (r0 + r1));
        if v.is_nan() {
            return Err(Error::NonFiniteProfile(0.5 * (r0 + r1)));
        }
        if v < 0.0 {
            return Err(Error::BadParameter(format!(
                "symmetrization needs a nonnegative profile; got {v} at r = {}",
                0.5 * (r0 + r1)
            )));
        }
        let measure = omega * (r1.powi(n as i32) - r0.powi(n as i32)) / n as f64;
        if v > 0.0 && measure > 0.0 {
            pieces.push((v, measure));
        }
    }
    Ok(StepFunction::new(pieces, n)?.decreasing_rearrangement())
}

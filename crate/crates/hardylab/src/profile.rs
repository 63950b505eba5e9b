//! Radial profiles f(r) on (0, R) with derivative data.
//!
//! The convention is f: (0, R) → R; r = 0 is evaluated only where the
//! enclosing integrand is regular there. Closed-form profiles carry exact
//! derivatives; sampled profiles use second-order finite differences.

use crate::error::{Error, Result};
use std::fmt;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::sync::Arc;

type RadialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Value and d/dσ at the log offset σ = ln(r_max / r).
type LogFn = Arc<dyn Fn(f64) -> (f64, f64) + Send + Sync>;

#[derive(Clone)]
enum Kind {
    Analytic {
        value: RadialFn,
        deriv: RadialFn,
    },
    Sampled {
        r: Vec<f64>,
        v: Vec<f64>,
        dv: Vec<f64>,
    },
}

/// A radial function with its derivative and ambient dimension N.
#[derive(Clone)]
pub struct RadialProfile {
    dim: u32,
    r_max: f64,
    kind: Kind,
    breakpoints: Vec<f64>,
    dirichlet_outer: bool,
    log_form: Option<LogFn>,
}

impl fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialProfile")
            .field("dim", &self.dim)
            .field("r_max", &self.r_max)
            .field(
                "kind",
                &match self.kind {
                    Kind::Analytic { .. } => "analytic",
                    Kind::Sampled { .. } => "sampled",
                },
            )
            .field("breakpoints", &self.breakpoints)
            .finish()
    }
}

impl RadialProfile {
    /// Closed-form profile on (0, r_max) (r_max may be +∞).
    pub fn from_fns<F, G>(dim: u32, r_max: f64, value: F, deriv: G) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if dim < 2 {
            return Err(Error::BadParameter(format!(
                "radial profiles require dimension >= 2, got {dim}"
            )));
        }
        if !(r_max > 0.0) {
            return Err(Error::BadParameter(format!(
                "r_max must be positive, got {r_max}"
            )));
        }
        Ok(RadialProfile {
            dim,
            r_max,
            kind: Kind::Analytic {
                value: Arc::new(value),
                deriv: Arc::new(deriv),
            },
            breakpoints: Vec::new(),
            dirichlet_outer: false,
            log_form: None,
        })
    }

    /// Sampled profile; derivatives by central differences with one-sided
    /// second-order stencils at the ends. Radii must be strictly increasing.
    pub fn from_samples(dim: u32, r: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::BadParameter(format!(
                "radial profiles require dimension >= 2, got {dim}"
            )));
        }
        if r.len() != v.len() || r.len() < 3 {
            return Err(Error::BadParameter(format!(
                "need matching r/value arrays of length >= 3, got {}/{}",
                r.len(),
                v.len()
            )));
        }
        for i in 1..r.len() {
            if !(r[i] > r[i - 1]) {
                return Err(Error::NonMonotoneNodes(i));
            }
        }
        for (i, &x) in v.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::NonFiniteProfile(r[i]));
            }
        }
        let dv = fd_derivatives(&r, &v);
        let r_max = *r.last().unwrap();
        Ok(RadialProfile {
            dim,
            r_max,
            kind: Kind::Sampled { r, v, dv },
            breakpoints: Vec::new(),
            dirichlet_outer: false,
            log_form: None,
        })
    }

    /// Loads the `r,value` CSV format: header line `r,value`, one pair per
    /// row, strictly increasing r. Duplicate or non-monotone radii are
    /// rejected.
    pub fn from_csv<P: AsRef<Path>>(path: P, dim: u32) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        let reader = BufReader::new(file);
        let mut rs = Vec::new();
        let mut vs = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if lineno == 0 {
                if line != "r,value" {
                    return Err(Error::CsvParse {
                        line: 1,
                        msg: format!("expected header 'r,value', got '{line}'"),
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
            let r = parse(parts.next(), "r")?;
            let v = parse(parts.next(), "value")?;
            if parts.next().is_some() {
                return Err(Error::CsvParse {
                    line: lineno + 1,
                    msg: "expected exactly two columns".into(),
                });
            }
            if let Some(&last) = rs.last() {
                if r == last {
                    return Err(Error::CsvParse {
                        line: lineno + 1,
                        msg: format!("duplicate radius {r}"),
                    });
                }
                if r < last {
                    return Err(Error::CsvParse {
                        line: lineno + 1,
                        msg: format!("non-monotone radius {r} after {last}"),
                    });
                }
            }
            rs.push(r);
            vs.push(v);
        }
        Self::from_samples(dim, rs, vs)
    }

    pub fn with_breakpoints(mut self, mut breakpoints: Vec<f64>) -> Self {
        breakpoints.retain(|&b| b > 0.0 && b < self.r_max);
        breakpoints.sort_by(|a, b| a.partial_cmp(b).unwrap());
        breakpoints.dedup();
        self.breakpoints = breakpoints;
        self
    }

    /// Marks the profile as vanishing at the outer boundary and checks
    /// |f(R)| ≤ 1e-12 · max|f| on a probe grid.
    pub fn with_dirichlet_outer(mut self) -> Result<Self> {
        if !self.r_max.is_finite() {
            return Err(Error::BadParameter(
                "Dirichlet outer boundary requires a finite r_max".into(),
            ));
        }
        let max_abs = self.probe_max_abs();
        let boundary = self.value(self.r_max).abs();
        if boundary > 1e-12 * max_abs {
            return Err(Error::BadParameter(format!(
                "profile declared Dirichlet at r = {} but |f(R)| = {boundary:e} > 1e-12·max|f|",
                self.r_max
            )));
        }
        self.dirichlet_outer = true;
        Ok(self)
    }

    fn probe_max_abs(&self) -> f64 {
        let n = 512;
        let r_hi = self.r_max.min(1e12);
        (1..=n)
            .map(|j| self.value(r_hi * j as f64 / n as f64).abs())
            .fold(0.0, f64::max)
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn dirichlet_outer(&self) -> bool {
        self.dirichlet_outer
    }

    pub fn value(&self, r: f64) -> f64 {
        match &self.kind {
            Kind::Analytic { value, .. } => value(r),
            Kind::Sampled { r: rs, v, .. } => interp_linear(rs, v, r),
        }
    }

    pub fn derivative(&self, r: f64) -> f64 {
        match &self.kind {
            Kind::Analytic { deriv, .. } => deriv(r),
            Kind::Sampled { r: rs, dv, .. } => interp_linear(rs, dv, r),
        }
    }

    /// Sample radii for sampled profiles (None for closed-form profiles).
    pub fn sample_radii(&self) -> Option<&[f64]> {
        match &self.kind {
            Kind::Sampled { r, .. } => Some(r),
            Kind::Analytic { .. } => None,
        }
    }

    /// Attaches an exact log-variable form: σ ↦ (f, df/dσ) at
    /// σ = ln(r_max / r). Near the outer boundary r quantizes at ~1e-16 while
    /// σ resolves down to ~1e-300, so integrands singular there must go
    /// through this form.
    pub fn with_log_form<F>(mut self, f: F) -> Self
    where
        F: Fn(f64) -> (f64, f64) + Send + Sync + 'static,
    {
        self.log_form = Some(Arc::new(f));
        self
    }

    /// (f, df/dσ) at σ = ln(r_max / r), when an exact log form is attached.
    pub fn log_eval(&self, sigma: f64) -> Option<(f64, f64)> {
        self.log_form.as_ref().map(|f| f(sigma))
    }

    pub fn has_log_form(&self) -> bool {
        self.log_form.is_some()
    }
}

/// Second-order finite differences on a (possibly nonuniform) grid.
fn fd_derivatives(r: &[f64], v: &[f64]) -> Vec<f64> {
    let n = r.len();
    let mut dv = vec![0.0; n];
    for i in 1..n - 1 {
        let h1 = r[i] - r[i - 1];
        let h2 = r[i + 1] - r[i];
        dv[i] = -h2 / (h1 * (h1 + h2)) * v[i - 1]
            + (h2 - h1) / (h1 * h2) * v[i]
            + h1 / (h2 * (h1 + h2)) * v[i + 1];
    }
    {
        let h1 = r[1] - r[0];
        let h2 = r[2] - r[1];
        dv[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * v[0] + (h1 + h2) / (h1 * h2) * v[1]
            - h1 / (h2 * (h1 + h2)) * v[2];
        let g1 = r[n - 1] - r[n - 2];
        let g2 = r[n - 2] - r[n - 3];
        dv[n - 1] = (2.0 * g1 + g2) / (g1 * (g1 + g2)) * v[n - 1]
            - (g1 + g2) / (g1 * g2) * v[n - 2]
            + g1 / (g2 * (g1 + g2)) * v[n - 3];
    }
    dv
}

fn interp_linear(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let n = xs.len();
    if x <= xs[0] {
        return ys[0];
    }
    if x >= xs[n - 1] {
        return ys[n - 1];
    }
    let idx = match xs.binary_search_by(|p| p.partial_cmp(&x).unwrap()) {
        Ok(i) => return ys[i],
        Err(i) => i,
    };
    let (x0, x1) = (xs[idx - 1], xs[idx]);
    let w = (x - x0) / (x1 - x0);
    ys[idx - 1] * (1.0 - w) + ys[idx] * w
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn finite_differences_exact_for_quadratics() {
        let r: Vec<f64> = (0..50).map(|i| 0.01 + i as f64 * 0.02).collect();
        let v: Vec<f64> = r.iter().map(|&x| 3.0 * x * x - 2.0 * x + 1.0).collect();
        let p = RadialProfile::from_samples(2, r.clone(), v).unwrap();
        for &x in &r {
            assert!(
                (p.derivative(x) - (6.0 * x - 2.0)).abs() < 1e-10,
                "fd at {x}"
            );
        }
    }

    #[test]
    fn csv_roundtrip_and_rejections() {
        let dir = std::env::temp_dir();
        let ok = dir.join("hardylab_profile_ok.csv");
        let mut f = std::fs::File::create(&ok).unwrap();
        writeln!(f, "r,value").unwrap();
        for i in 1..=20 {
            let r = i as f64 * 0.05;
            writeln!(f, "{r},{}", 1.0 - r).unwrap();
        }
        drop(f);
        let p = RadialProfile::from_csv(&ok, 2).unwrap();
        assert!((p.value(0.5) - 0.5).abs() < 1e-12);

        let bad = dir.join("hardylab_profile_bad.csv");
        let mut f = std::fs::File::create(&bad).unwrap();
        writeln!(f, "r,value").unwrap();
        writeln!(f, "0.1,1.0").unwrap();
        writeln!(f, "0.1,2.0").unwrap();
        writeln!(f, "0.3,3.0").unwrap();
        drop(f);
        assert!(matches!(
            RadialProfile::from_csv(&bad, 2),
            Err(Error::CsvParse { line: 3, .. })
        ));
    }

    #[test]
    fn dirichlet_outer_check() {
        let ok = RadialProfile::from_fns(2, 1.0, |r| 1.0 - r, |_| -1.0)
            .unwrap()
            .with_dirichlet_outer();
        assert!(ok.is_ok());
        let bad = RadialProfile::from_fns(2, 1.0, |r| 1.0 + r, |_| 1.0)
            .unwrap()
            .with_dirichlet_outer();
        assert!(bad.is_err());
    }
}

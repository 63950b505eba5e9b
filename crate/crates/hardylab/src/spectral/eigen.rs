//! Smallest generalized eigenvalue of an SPD tridiagonal pencil K x = λ M x.
//!
//! The pencil is first mass-equilibrated (congruence by D = diag(1/√M_ii)),
//! which preserves eigenvalues and inertia while making row magnitudes
//! homogeneous; exponential-weight problems otherwise span hundreds of
//! orders of magnitude and corrupt pivot-based counts. Bisection on the
//! inertia of K - λM (negative LDLᵀ pivots = eigenvalues below λ) brackets
//! the smallest eigenvalue; inverse iteration with Rayleigh-quotient polish
//! supplies the eigenvector.

use crate::error::{Error, Result};
use crate::spectral::assemble::{SymTridiag, TridiagPair};

struct ScaledPencil {
    k: SymTridiag,
    m: SymTridiag,
    back: Vec<f64>,
}

impl ScaledPencil {
    fn build(pair: &TridiagPair) -> Result<Self> {
        let (k, m, back) = pair.equilibrated()?;
        Ok(ScaledPencil { k, m, back })
    }

    fn shifted(&self, lambda: f64) -> SymTridiag {
        let n = self.k.n();
        let mut diag = Vec::with_capacity(n);
        let mut off = Vec::with_capacity(n.saturating_sub(1));
        for i in 0..n {
            diag.push(self.k.diag[i] - lambda * self.m.diag[i]);
        }
        for i in 0..n.saturating_sub(1) {
            off.push(self.k.off[i] - lambda * self.m.off[i]);
        }
        SymTridiag { diag, off }
    }

    fn count_below(&self, lambda: f64) -> usize {
        self.shifted(lambda)
            .ldlt_pivots()
            .iter()
            .filter(|&&p| p < 0.0)
            .count()
    }
}

/// Number of generalized eigenvalues strictly below `lambda`.
pub fn eigenvalue_count_below(pair: &TridiagPair, lambda: f64) -> usize {
    match ScaledPencil::build(pair) {
        Ok(p) => p.count_below(lambda),
        Err(_) => 0,
    }
}

/// Solve (K - λM) y = b by LDLᵀ with guarded pivots.
fn solve_shifted(a: &SymTridiag, b: &[f64]) -> Vec<f64> {
    let n = a.n();
    let mut d = vec![0.0; n];
    let mut l = vec![0.0; n.saturating_sub(1)];
    let scale = a
        .diag
        .iter()
        .chain(a.off.iter())
        .fold(0.0f64, |acc, &x| acc.max(x.abs()));
    let guard = 1e-300f64.max(scale * 1e-300).max(f64::MIN_POSITIVE);
    let protect = |x: f64| {
        if x.abs() < guard {
            if x >= 0.0 {
                guard
            } else {
                -guard
            }
        } else {
            x
        }
    };
    d[0] = protect(a.diag[0]);
    for i in 1..n {
        l[i - 1] = a.off[i - 1] / d[i - 1];
        d[i] = protect(a.diag[i] - l[i - 1] * a.off[i - 1]);
    }
    // forward: L z = b
    let mut z = b.to_vec();
    for i in 1..n {
        z[i] -= l[i - 1] * z[i - 1];
    }
    // diagonal
    for i in 0..n {
        z[i] /= d[i];
    }
    // backward: Lᵀ x = z
    for i in (0..n - 1).rev() {
        z[i] -= l[i] * z[i + 1];
    }
    z
}

fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Smallest generalized eigenvalue and its eigenvector.
///
/// λ is located by inertia bisection to relative tolerance `tol` and
/// polished by Rayleigh quotients until the equilibrated residual satisfies
/// ‖K̃x̃ - λM̃x̃‖ ≤ tol·‖K̃x̃‖. The eigenvector is returned in the original
/// coordinates, scaled to max-abs 1 with nonnegative orientation.
pub fn smallest_eigen(pair: &TridiagPair, tol: f64) -> Result<(f64, Vec<f64>)> {
    if pair.n() == 0 {
        return Err(Error::NotSpd("empty pencil".into()));
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::BadParameter(format!(
            "tolerance must lie in (0,1), got {tol}"
        )));
    }
    let pencil = ScaledPencil::build(pair)?;
    if !pencil.m.is_positive_definite() {
        return Err(Error::NotSpd("mass matrix".into()));
    }
    // K SPD ⇒ all generalized eigenvalues are positive; bracket from 0.
    if pencil.count_below(0.0) != 0 {
        return Err(Error::NotSpd("stiffness matrix".into()));
    }
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    let mut grow = 0;
    while pencil.count_below(hi) == 0 {
        hi *= 4.0;
        grow += 1;
        if grow > 600 {
            return Err(Error::BracketFailure(format!("no eigenvalue below {hi:e}")));
        }
    }
    let bisect_tol = (tol * 0.5).max(1e-14);
    while hi - lo > bisect_tol * hi {
        let mid = 0.5 * (lo + hi);
        if pencil.count_below(mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut lambda = 0.5 * (lo + hi);

    // inverse iteration with Rayleigh-quotient updates on the scaled pencil
    let n = pair.n();
    let mut x: Vec<f64> = (0..n)
        .map(|i| 1.0 + 0.5 * ((i * 2654435761) % 97) as f64 / 97.0)
        .collect();
    let nx = norm2(&x);
    x.iter_mut().for_each(|v| *v /= nx);
    let mut best_residual = f64::INFINITY;
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut accepted: Option<(f64, Vec<f64>)> = None;
    for _ in 0..60 {
        let shift = pencil.shifted(lambda);
        let mx = pencil.m.mul(&x);
        let mut y = solve_shifted(&shift, &mx);
        let ny = norm2(&y);
        if !ny.is_finite() || ny == 0.0 {
            return Err(Error::NoConvergence(
                "inverse iteration produced a degenerate vector".into(),
            ));
        }
        y.iter_mut().for_each(|v| *v /= ny);
        let ky = pencil.k.mul(&y);
        let my = pencil.m.mul(&y);
        let rho = dot(&y, &ky) / dot(&y, &my);
        let resid: f64 = ky
            .iter()
            .zip(&my)
            .map(|(k, m)| (k - rho * m) * (k - rho * m))
            .sum::<f64>()
            .sqrt();
        let k_norm = norm2(&ky);
        if resid <= tol * k_norm {
            accepted = Some((rho, y));
            break;
        }
        if resid < best_residual {
            best_residual = resid;
            best = Some((rho, y.clone()));
        }
        x = y;
        if rho.is_finite() && rho > 0.0 {
            lambda = rho;
        }
    }
    // fall back to the best iterate under a slightly relaxed bound
    if accepted.is_none() {
        if let Some((rho, y)) = best {
            let ky = pencil.k.mul(&y);
            if best_residual <= 10.0 * tol * norm2(&ky) {
                accepted = Some((rho, y));
            }
        }
    }
    let (rho, y) = accepted
        .ok_or_else(|| Error::NoConvergence(format!("residual stalled at {best_residual:e}")))?;

    // back to original coordinates, max-abs 1, nonnegative orientation
    let mut out: Vec<f64> = y.iter().zip(&pencil.back).map(|(v, d)| v * d).collect();
    let (mut peak, mut peak_abs) = (0.0f64, 0.0f64);
    for &v in &out {
        if v.abs() > peak_abs {
            peak_abs = v.abs();
            peak = v;
        }
    }
    if peak_abs > 0.0 {
        out.iter_mut().for_each(|v| *v /= peak);
    }
    Ok((rho, out))
}

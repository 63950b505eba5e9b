//! Conforming P1 finite-element assembly of the reduced 1D problems.
//!
//! Dirichlet conditions at both mesh ends; element integrals of
//! weight × (linear)² products are exact (closed-form shifted moments), so
//! the discrete minimum is a guaranteed upper bound of the continuum
//! infimum.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::spectral::problem::{Coef, Domain1D, SLProblem1D};

/// Symmetric tridiagonal matrix (diag length n, off length n-1).
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiag {
    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// y = A·x
    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n();
        let mut y = vec![0.0; n];
        for i in 0..n {
            y[i] = self.diag[i] * x[i];
            if i > 0 {
                y[i] += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                y[i] += self.off[i] * x[i + 1];
            }
        }
        y
    }

    /// Pivots of the LDLᵀ factorization, with a guard against exact zeros.
    pub fn ldlt_pivots(&self) -> Vec<f64> {
        let n = self.n();
        let mut piv = vec![0.0; n];
        if n == 0 {
            return piv;
        }
        let scale = self
            .diag
            .iter()
            .chain(self.off.iter())
            .fold(0.0f64, |a, &b| a.max(b.abs()));
        let guard = 1e-300f64.max(scale * 1e-30);
        piv[0] = self.diag[0];
        for i in 1..n {
            let mut prev = piv[i - 1];
            if prev.abs() < guard {
                prev = if prev >= 0.0 { guard } else { -guard };
            }
            piv[i] = self.diag[i] - self.off[i - 1] * self.off[i - 1] / prev;
        }
        piv
    }

    pub fn is_positive_definite(&self) -> bool {
        self.n() > 0 && self.ldlt_pivots().iter().all(|&p| p > 0.0)
    }
}

/// Stiffness/mass pair on the interior nodes of `mesh` (Dirichlet ends).
#[derive(Debug, Clone)]
pub struct TridiagPair {
    pub k: SymTridiag,
    pub m: SymTridiag,
    pub mesh: Grid,
}

impl TridiagPair {
    pub fn n(&self) -> usize {
        self.k.n()
    }

    /// Stiffness-diagonal equilibration D = diag(1/√K_ii): the congruence
    /// (DKD, DMD) preserves eigenvalues and inertia exactly while making
    /// K̃'s diagonal identically 1 — exponential weights otherwise span
    /// hundreds of orders of magnitude across rows, which defeats global
    /// pivot guards; for uniform-stiffness pencils the scaling is a neutral
    /// constant. Returns (K̃, M̃, d).
    pub fn equilibrated(&self) -> Result<(SymTridiag, SymTridiag, Vec<f64>)> {
        let n = self.n();
        let mut d = Vec::with_capacity(n);
        for &k in &self.k.diag {
            if !(k > 0.0) || !k.is_finite() {
                return Err(Error::NotSpd("stiffness diagonal".into()));
            }
            d.push(1.0 / k.sqrt());
        }
        let scale = |t: &SymTridiag| SymTridiag {
            diag: t.diag.iter().zip(&d).map(|(v, s)| v * s * s).collect(),
            off: t
                .off
                .iter()
                .enumerate()
                .map(|(i, v)| v * d[i] * d[i + 1])
                .collect(),
        };
        Ok((scale(&self.k), scale(&self.m), d))
    }
}

/// Assembles K (stiffness + potential) and M (density mass) for the problem
/// on the span of `mesh`, which must start at the domain's Dirichlet
/// boundary (half-line problems) or be an interior truncation (whole line).
pub fn assemble(slp: &SLProblem1D, mesh: &Grid) -> Result<TridiagPair> {
    let nodes = mesh.nodes();
    if let Domain1D::HalfLine { left } = slp.domain {
        let tolerance = 1e-9 * (1.0 + left.abs());
        if (nodes[0] - left).abs() > tolerance {
            return Err(Error::MeshMismatch(format!(
                "mesh starts at {} but the domain boundary is {left}",
                nodes[0]
            )));
        }
        if matches!(
            slp.density.kind,
            crate::spectral::problem::CoefKind::InvSquare
        ) && nodes[0] <= 0.0
        {
            return Err(Error::MeshMismatch(
                "t^{-2} density requires a positive domain start".into(),
            ));
        }
    }
    let n_nodes = nodes.len();
    if n_nodes < 3 {
        return Err(Error::MeshMismatch(format!(
            "mesh with {n_nodes} nodes leaves no interior degrees of freedom"
        )));
    }
    let n = n_nodes - 2;
    let mut kd = vec![0.0; n];
    let mut ko = vec![0.0; n.saturating_sub(1)];
    let mut md = vec![0.0; n];
    let mut mo = vec![0.0; n.saturating_sub(1)];

    for e in 0..n_nodes - 1 {
        let x0 = nodes[e];
        let h = nodes[e + 1] - x0;
        // gradient part: φ' = ∓1/h, so the element matrix is (∫σ)/h² [[1,-1],[-1,1]]
        let s0 = slp.stiffness.shifted_moments(x0, h)[0];
        let grad = s0 / (h * h);
        // potential and mass parts: hats in shifted coords, ℓ_L = (h-τ)/h, ℓ_R = τ/h
        let pm = element_quadratic(&slp.potential, x0, h);
        let mm = element_quadratic(&slp.density, x0, h);

        // local 2x2 blocks for nodes (e, e+1); global interior index = node-1
        let locals = [
            (e, e, grad + pm.0, mm.0),
            (e + 1, e + 1, grad + pm.2, mm.2),
            (e, e + 1, -grad + pm.1, mm.1),
        ];
        for &(a, b, kv, mv) in &locals {
            if a == b {
                if a >= 1 && a <= n {
                    kd[a - 1] += kv;
                    md[a - 1] += mv;
                }
            } else if a >= 1 && b <= n {
                ko[a - 1] += kv;
                mo[a - 1] += mv;
            }
        }
    }

    let pair = TridiagPair {
        k: SymTridiag { diag: kd, off: ko },
        m: SymTridiag { diag: md, off: mo },
        mesh: mesh.clone(),
    };
    // SPD validation on the equilibrated congruent pencil, where pivot
    // magnitudes are homogeneous across rows
    let (k_s, m_s, _) = pair.equilibrated()?;
    if !m_s.is_positive_definite() {
        return Err(Error::NotSpd("mass matrix".into()));
    }
    if !k_s.is_positive_definite() {
        return Err(Error::NotSpd("stiffness matrix".into()));
    }
    Ok(pair)
}

/// (∫w ℓ_L², ∫w ℓ_L ℓ_R, ∫w ℓ_R²) on one element via shifted moments.
fn element_quadratic(coef: &Coef, x0: f64, h: f64) -> (f64, f64, f64) {
    let [m0, m1, m2] = coef.shifted_moments(x0, h);
    let h2 = h * h;
    // ℓ_L = (h-τ)/h → ℓ_L² = (h² - 2hτ + τ²)/h²
    let ll = (h2 * m0 - 2.0 * h * m1 + m2) / h2;
    // ℓ_L ℓ_R = (hτ - τ²)/h²
    let lr = (h * m1 - m2) / h2;
    // ℓ_R² = τ²/h²
    let rr = m2 / h2;
    (ll, lr, rr)
}

//! Mode-1 upper bound for the critical-disk Lq quotient (q > 2).
//!
//! For u = g(t) cos θ, t = log(a/r), the quotient is
//!     J(g) = π ∫ (g'² + g²) dt · [ c_q ∫ |g|^q t^{-1-q/2} dt ]^{-2/q},
//! c_q = ∫₀^{2π} |cos θ|^q dθ. J is minimized over the P1 space on a
//! truncated lattice by normalized gradient descent with backtracking. The
//! converged value is the quotient of an admissible trial function, hence a
//! certified upper bound of the mode-restricted infimum.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::profile::RadialProfile;
use crate::spectral::assemble::{assemble, TridiagPair};
use crate::spectral::eigen::smallest_eigen;
use crate::spectral::problem::{reduce_mode, Geometry, ModeProblem};
use crate::spectral::sharp::EIGEN_TOL;

/// 4-point Gauss–Legendre abscissae/weights on the unit interval.
#[allow(clippy::excessive_precision)]
const GAUSS4: [(f64, f64); 4] = [
    (0.069431844202973712, 0.17392742256872693),
    (0.33000947820757187, 0.32607257743127307),
    (0.66999052179242813, 0.32607257743127307),
    (0.93056815579702629, 0.17392742256872693),
];

/// 8-point rule for the final certification pass.
#[allow(clippy::excessive_precision)]
const GAUSS8: [(f64, f64); 8] = [
    (0.019855071751231884, 0.050614268145188130),
    (0.10166676129318664, 0.11119051722668724),
    (0.23723379504183550, 0.15685332293894364),
    (0.40828267875217510, 0.18134189168918099),
    (0.59171732124782490, 0.18134189168918099),
    (0.76276620495816450, 0.15685332293894364),
    (0.89833323870681336, 0.11119051722668724),
    (0.98014492824876812, 0.050614268145188130),
];

#[derive(Debug, Clone)]
pub struct LqBound {
    /// Certified upper bound of the mode-1 quotient infimum.
    pub value: f64,
    /// Minimizing radial factor, sampled back to r-space.
    pub minimizer: RadialProfile,
    /// Objective value after every accepted descent step.
    pub objective_trace: Vec<f64>,
}

struct LqObjective {
    k: TridiagPair,
    nodes: Vec<f64>,
    q: f64,
    c_q: f64,
    angular_l2: f64,
}

impl LqObjective {
    /// ∫ |g|^q t^{-1-q/2} dt on the P1 interpolant (interior dofs g, zero ends).
    fn denominator<const NP: usize>(&self, rule: &[(f64, f64); NP], g: &[f64]) -> f64 {
        let nodes = &self.nodes;
        let n = nodes.len();
        let at = |i: usize| -> f64 {
            if i == 0 || i == n - 1 {
                0.0
            } else {
                g[i - 1]
            }
        };
        let mut acc = 0.0;
        for e in 0..n - 1 {
            let (x0, x1) = (nodes[e], nodes[e + 1]);
            let h = x1 - x0;
            let (g0, g1) = (at(e), at(e + 1));
            for &(xi, w) in rule {
                let t = x0 + xi * h;
                let v = g0 * (1.0 - xi) + g1 * xi;
                acc += w * h * v.abs().powf(self.q) * t.powf(-1.0 - self.q / 2.0);
            }
        }
        acc
    }

    fn denominator_grad(&self, g: &[f64]) -> Vec<f64> {
        let nodes = &self.nodes;
        let n = nodes.len();
        let at = |i: usize| -> f64 {
            if i == 0 || i == n - 1 {
                0.0
            } else {
                g[i - 1]
            }
        };
        let mut grad = vec![0.0; g.len()];
        for e in 0..n - 1 {
            let (x0, x1) = (nodes[e], nodes[e + 1]);
            let h = x1 - x0;
            let (g0, g1) = (at(e), at(e + 1));
            for &(xi, w) in GAUSS4.iter() {
                let t = x0 + xi * h;
                let v = g0 * (1.0 - xi) + g1 * xi;
                let dv = self.q * v.abs().powf(self.q - 1.0) * v.signum();
                let common = w * h * dv * t.powf(-1.0 - self.q / 2.0);
                if e >= 1 {
                    grad[e - 1] += common * (1.0 - xi);
                }
                if e < g.len() {
                    grad[e] += common * xi;
                }
            }
        }
        grad
    }

    fn numerator(&self, g: &[f64]) -> f64 {
        let kg = self.k.k.mul(g);
        g.iter().zip(&kg).map(|(a, b)| a * b).sum()
    }

    fn objective<const NP: usize>(&self, rule: &[(f64, f64); NP], g: &[f64]) -> f64 {
        let num = self.numerator(g);
        let den = self.c_q * self.denominator(rule, g);
        self.angular_l2 * num * den.powf(-2.0 / self.q)
    }

    fn gradient(&self, g: &[f64]) -> Vec<f64> {
        let num = self.numerator(g);
        let den = self.c_q * self.denominator(&GAUSS4, g);
        let kg = self.k.k.mul(g);
        let dden = self.denominator_grad(g);
        let f1 = self.angular_l2 * den.powf(-2.0 / self.q);
        let f2 = self.angular_l2 * num * (2.0 / self.q) * den.powf(-2.0 / self.q - 1.0) * self.c_q;
        kg.iter()
            .zip(&dden)
            .map(|(k, d)| 2.0 * f1 * k - f2 * d)
            .collect()
    }
}

/// Minimizes the mode-1 critical-disk Lq quotient over the discrete space.
///
/// `init` seeds the descent (sampled onto the lattice); by default the
/// q = 2 eigenfunction of the same disk is used. Errors if q ≤ 2 or the
/// first descent step finds no decrease.
pub fn minimize_lq_quotient(
    problem: &ModeProblem,
    init: Option<&RadialProfile>,
    tol: f64,
) -> Result<LqBound> {
    let a = match problem.geometry {
        Geometry::CriticalDisk { a } => a,
        _ => {
            return Err(Error::BadParameter(
                "the Lq quotient bound is defined on the critical disk".into(),
            ))
        }
    };
    if problem.mode.k() != 1 {
        return Err(Error::BadParameter(
            "the Lq bound is mode-restricted to k = 1".into(),
        ));
    }
    let q = problem.exponent;
    if !(q > 2.0) {
        return Err(Error::BadParameter(format!(
            "Lq quotient bound requires q > 2, got q = {q}"
        )));
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::BadParameter(format!(
            "tolerance must lie in (0,1), got {tol}"
        )));
    }

    let eigen_problem = ModeProblem::new(problem.geometry, 1, 2.0)?;
    let slp = reduce_mode(&eigen_problem)?;
    let left = a.ln();
    let span = 40.0f64;
    let m = (span / 0.01).round() as usize;
    let nodes: Vec<f64> = (0..=m).map(|j| left + j as f64 * 0.01).collect();
    let mesh = Grid::from_nodes(nodes)?;
    let pair = assemble(&slp, &mesh)?;

    let g0: Vec<f64> = match init {
        Some(p) => mesh.nodes()[1..mesh.len() - 1]
            .iter()
            .map(|&t| p.value(a * (-t).exp()))
            .collect(),
        None => smallest_eigen(&pair, EIGEN_TOL)?.1,
    };
    if g0.iter().all(|&v| v == 0.0) {
        return Err(Error::BadParameter(
            "initial guess is identically zero".into(),
        ));
    }

    let obj = LqObjective {
        nodes: mesh.nodes().to_vec(),
        k: pair,
        q,
        c_q: problem.mode.lq_mass(q)?,
        angular_l2: problem.mode.l2_mass()?,
    };

    let normalize = |g: &mut Vec<f64>| {
        let mx = g.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()));
        if mx > 0.0 {
            g.iter_mut().for_each(|v| *v /= mx);
        }
    };

    let mut g = g0;
    normalize(&mut g);
    let mut j = obj.objective(&GAUSS4, &g);
    if !j.is_finite() || j <= 0.0 {
        return Err(Error::ZeroDenominator);
    }
    let mut trace = vec![j];
    let max_iters = 600;
    for iter in 0..max_iters {
        let grad = obj.gradient(&g);
        let gmax = grad.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()));
        if gmax == 0.0 {
            break;
        }
        let mut eta = 0.5 / gmax;
        let mut accepted = false;
        for _ in 0..50 {
            let mut cand: Vec<f64> = g.iter().zip(&grad).map(|(x, d)| x - eta * d).collect();
            normalize(&mut cand);
            let jc = obj.objective(&GAUSS4, &cand);
            if jc.is_finite() && jc < j {
                g = cand;
                j = jc;
                trace.push(jc);
                accepted = true;
                break;
            }
            eta *= 0.5;
        }
        if !accepted {
            if iter == 0 {
                return Err(Error::DescentStalled(iter));
            }
            break;
        }
        let len = trace.len();
        if len >= 2 {
            let drop = (trace[len - 2] - trace[len - 1]) / trace[len - 1];
            if drop < tol {
                break;
            }
        }
    }

    // certification pass with the finer rule
    let value = obj.objective(&GAUSS8, &g);

    // sample the minimizer back to r-space (increasing radii)
    let mut rs: Vec<f64> = Vec::with_capacity(mesh.len());
    let mut vs: Vec<f64> = Vec::with_capacity(mesh.len());
    for (idx, &t) in mesh.nodes().iter().enumerate().rev() {
        let r = a * (-t).exp();
        let v = if idx == 0 || idx == mesh.len() - 1 {
            0.0
        } else {
            g[idx - 1]
        };
        rs.push(r);
        vs.push(v);
    }
    let minimizer = RadialProfile::from_samples(2, rs, vs)?;

    Ok(LqBound {
        value,
        minimizer,
        objective_trace: trace,
    })
}

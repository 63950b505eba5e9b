//! Seeded property suites for the rearrangement-side inequalities and
//! identities: interpolation between weak norms, the weak-norm Hölder
//! failure, the radial pointwise bound, the Poincaré inequality on the
//! circle, the exponent-splitting identity, and the 1D Hardy inequality.
//!
//! Every suite is a pure function of (seed, config); per-trial generators
//! derive their streams as a pure function of (seed, index), so reruns are
//! byte-identical and trials can run in any order.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::modes::unit_sphere_area;
use crate::profile::RadialProfile;
use crate::quadrature::quad_scalar;
use crate::rearrange::{BoundSide, LorentzParams, StepFunction};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Trial count, root seed and step-function generator ranges.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialConfig {
    pub trials: u32,
    pub seed: u64,
    pub pieces: (usize, usize),
    pub value_range: (f64, f64),
    pub measure_range: (f64, f64),
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig {
            trials: 10_000,
            seed: 42,
            pieces: (1, 50),
            value_range: (1e-3, 1e3),
            measure_range: (1e-3, 1e3),
        }
    }
}

impl TrialConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::BadParameter("trials must be >= 1".into()));
        }
        if self.pieces.0 < 1 || self.pieces.0 > self.pieces.1 {
            return Err(Error::BadParameter("invalid piece-count range".into()));
        }
        for (lo, hi) in [self.value_range, self.measure_range] {
            if !(lo > 0.0 && hi >= lo) {
                return Err(Error::BadParameter("invalid generator range".into()));
            }
        }
        Ok(())
    }
}

/// Pure function of (seed, index) seeding each trial's generator.
pub fn trial_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 step on seed ⊕ golden-ratio stride
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn random_step(cfg: &TrialConfig, index: u64) -> StepFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.seed, index));
    let count = rng.gen_range(cfg.pieces.0..=cfg.pieces.1);
    let log_uniform = |rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)| -> f64 {
        if lo == hi {
            return lo;
        }
        (rng.gen_range(lo.ln()..=hi.ln())).exp()
    };
    let pieces: Vec<(f64, f64)> = (0..count)
        .map(|_| {
            (
                log_uniform(&mut rng, cfg.value_range),
                log_uniform(&mut rng, cfg.measure_range),
            )
        })
        .collect();
    StepFunction::new(pieces, 3)
        .expect("generator ranges are positive")
        .decreasing_rearrangement()
}

/// Outcome of one suite: trial/violation/skip counts and the worst relative
/// violation seen.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: String,
    pub trials: u64,
    pub violations: u64,
    pub skipped: u64,
    pub max_rel_violation: f64,
    pub details: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            trials: 0,
            violations: 0,
            skipped: 0,
            max_rel_violation: 0.0,
            details: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    fn record_violation(&mut self, rel: f64, detail: String) {
        self.violations += 1;
        if rel > self.max_rel_violation {
            self.max_rel_violation = rel;
        }
        if self.details.len() < 8 {
            self.details.push(detail);
        }
    }
}

/// Exponents p < q < r (r may be +∞) with the interpolation constants
///     λ = p(r-q)/(q(r-p)),   D = ( q(r-p) / ((r-q)(q-p)) )^{1/q},
/// which degenerate to λ = p/q, D = (q/(q-p))^{1/q} as r → ∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterpolationTriple {
    pub p: f64,
    pub q: f64,
    pub r: f64,
}

impl InterpolationTriple {
    pub fn new(p: f64, q: f64, r: f64) -> Result<Self> {
        if !(p >= 1.0 && p < q && q < r && q.is_finite()) {
            return Err(Error::BadParameter(format!(
                "need 1 <= p < q < r (r may be inf), got ({p}, {q}, {r})"
            )));
        }
        Ok(InterpolationTriple { p, q, r })
    }

    pub fn lambda(&self) -> f64 {
        if self.r.is_infinite() {
            self.p / self.q
        } else {
            self.p * (self.r - self.q) / (self.q * (self.r - self.p))
        }
    }

    pub fn constant_d(&self) -> f64 {
        if self.r.is_infinite() {
            (self.q / (self.q - self.p)).powf(1.0 / self.q)
        } else {
            (self.q * (self.r - self.p) / ((self.r - self.q) * (self.q - self.p)))
                .powf(1.0 / self.q)
        }
    }
}

/// ‖u‖_q ≤ D ‖u‖_{p,∞}^λ ‖u‖_{r,∞}^{1-λ} over seeded random step functions,
/// plus the head/tail split optimizer: the bound A s^a + B s^{-b} evaluated
/// at its minimizer s* = (Bb/(Aa))^{1/(a+b)} = (‖u‖_{p,∞}/‖u‖_{r,∞})^{pr/(r-p)}
/// must dominate ‖u‖_q^q.
pub fn check_interpolation(triple: &InterpolationTriple, cfg: &TrialConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let mut report = SuiteReport::new(&format!(
        "interpolation(p={}, q={}, r={})",
        triple.p, triple.q, triple.r
    ));
    let (p, q, r) = (triple.p, triple.q, triple.r);
    let lam = triple.lambda();
    let d = triple.constant_d();
    let slack = 1e-12;
    for i in 0..cfg.trials as u64 {
        let u = random_step(cfg, i);
        report.trials += 1;
        let weak_p = u.lorentz_norm(LorentzParams::new(p, f64::INFINITY)?)?;
        let weak_r = u.lorentz_norm(LorentzParams::new(r.min(1e308), f64::INFINITY)?)?;
        let weak_r = if r.is_infinite() {
            // ‖u‖_{∞,∞} = u*(0) = max value
            u.pieces().first().map(|&(v, _)| v).unwrap_or(0.0)
        } else {
            weak_r
        };
        if weak_r == 0.0 || weak_p == 0.0 {
            report.skipped += 1;
            continue;
        }
        let lq = u.moment(q).powf(1.0 / q);
        let bound = d * weak_p.powf(lam) * weak_r.powf(1.0 - lam);
        if lq > bound * (1.0 + slack) {
            report.record_violation(
                lq / bound - 1.0,
                format!("trial {i}: ||u||_q = {lq} > bound {bound}"),
            );
        }
        if r.is_finite() {
            // optimizer of the split bound
            let a_coef = r / (r - q) * weak_r.powf(q);
            let a_exp = (r - q) / r;
            let b_coef = p / (q - p) * weak_p.powf(q);
            let b_exp = (q - p) / p;
            let s_star = (b_coef * b_exp / (a_coef * a_exp)).powf(1.0 / (a_exp + b_exp));
            let s_closed = (weak_p / weak_r).powf(p * r / (r - p));
            if (s_star - s_closed).abs() > 1e-9 * s_closed.max(1e-300) {
                report.record_violation(
                    (s_star - s_closed).abs() / s_closed.max(1e-300),
                    format!("trial {i}: optimizer mismatch {s_star} vs {s_closed}"),
                );
            }
            let split_bound = a_coef * s_star.powf(a_exp) + b_coef * s_star.powf(-b_exp);
            if u.moment(q) > split_bound * (1.0 + slack) {
                report.record_violation(
                    u.moment(q) / split_bound - 1.0,
                    format!("trial {i}: split bound violated"),
                );
            }
        }
    }
    Ok(report)
}

/// Ratio ‖fg‖₂ / (‖f‖_q ‖g‖_{p,∞}) for the witnesses f = |x|^{-α} 1_{B₁},
/// g = |x|^{-N/p}, α = N/q - ε, by exact integrals:
///     ‖f‖_q^q = ω/(qε),  ‖g‖_{p,∞} = (ω/N)^{1/p},
///     ‖fg‖₂² = ω/(N(1 - 2/p - 2/q) + 2ε),
/// which reduces to the ε-blowup pair (ε^{-1/2} vs ε^{-1/q}) exactly at the
/// Hölder-conjugate pairing 1/p + 1/q = 1/2. A non-positive denominator
/// exponent means fg ∉ L² and reports +∞ (immediate failure witness).
pub fn holder_failure_ratio(eps: f64, dim: u32, p: f64, q: f64) -> Result<f64> {
    if dim < 2 {
        return Err(Error::BadParameter("need N >= 2".into()));
    }
    let n = dim as f64;
    if !(q > 2.0) || !(p >= 1.0) {
        return Err(Error::BadParameter(format!(
            "need q > 2 and p >= 1, got ({p}, {q})"
        )));
    }
    let alpha = n / q - eps;
    if !(eps > 0.0) || alpha <= 0.0 {
        return Err(Error::BadParameter(format!(
            "need 0 < eps < N/q (alpha must stay positive), got eps = {eps}"
        )));
    }
    let omega = unit_sphere_area(dim);
    let f_q = (omega / (q * eps)).powf(1.0 / q);
    let g_weak = (omega / n).powf(1.0 / p);
    let fg_exponent = n * (1.0 - 2.0 / p - 2.0 / q) + 2.0 * eps;
    if fg_exponent <= 0.0 {
        return Ok(f64::INFINITY);
    }
    let fg_2 = (omega / fg_exponent).sqrt();
    Ok(fg_2 / (f_q * g_weak))
}

/// Least-squares slope of log ratio against log ε. At the conjugate pairing
/// the slope is exactly 1/q - 1/2.
pub fn holder_slope(dim: u32, p: f64, q: f64, eps_list: &[f64]) -> Result<f64> {
    if eps_list.len() < 2 {
        return Err(Error::BadParameter("need at least two epsilons".into()));
    }
    let pts: Vec<(f64, f64)> = eps_list
        .iter()
        .map(|&e| holder_failure_ratio(e, dim, p, q).map(|r| (e.ln(), r.ln())))
        .collect::<Result<_>>()?;
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    Ok((n * sxy - sx * sy) / (n * sxx - sx * sx))
}

/// Dual exponent with 1/p + 1/q = 1/2 (requires q > 2).
pub fn holder_conjugate(q: f64) -> f64 {
    2.0 * q / (q - 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialBoundReport {
    /// sup over the grid of |f(r)| r^{(N-1)/2}.
    pub lhs_sup: f64,
    /// √(2/ω) ‖f‖₂^{1/2} ‖∇f‖₂^{1/2}.
    pub rhs: f64,
}

/// Pointwise radial bound |f(r)| ≤ √(2/ω) ‖f‖₂^{1/2} ‖∇f‖₂^{1/2} r^{-(N-1)/2}
/// checked on the given grid (decaying profiles).
pub fn check_radial_bound(profile: &RadialProfile, grid: &Grid) -> Result<RadialBoundReport> {
    let n = profile.dim() as f64;
    let omega = unit_sphere_area(profile.dim());
    let l2 = quad_scalar(grid, |r| {
        let v = profile.value(r);
        v * v * r.powf(n - 1.0)
    })?;
    let dir = quad_scalar(grid, |r| {
        let dv = profile.derivative(r);
        dv * dv * r.powf(n - 1.0)
    })?;
    if !(l2.value.is_finite() && dir.value.is_finite()) {
        return Err(Error::BadParameter("profile has non-finite norms".into()));
    }
    let full_l2 = (omega * l2.value).sqrt();
    let full_dir = (omega * dir.value).sqrt();
    let rhs = (2.0 / omega).sqrt() * full_l2.sqrt() * full_dir.sqrt();
    let lhs_sup = grid
        .nodes()
        .iter()
        .map(|&r| profile.value(r).abs() * r.powf((n - 1.0) / 2.0))
        .fold(0.0, f64::max);
    Ok(RadialBoundReport { lhs_sup, rhs })
}

/// Seeded suite of random decaying bump profiles in N ∈ {3, 4}.
pub fn radial_bound_suite(cfg: &TrialConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let mut report = SuiteReport::new("radial-bound");
    for i in 0..cfg.trials as u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.seed, i));
        let dim = if rng.gen_bool(0.5) { 3 } else { 4 };
        // sum of gaussian bumps times an exponential tail, sampled
        let n_bumps = rng.gen_range(1..=4);
        let bumps: Vec<(f64, f64, f64)> = (0..n_bumps)
            .map(|_| {
                (
                    rng.gen_range(0.2..3.0), // amplitude
                    rng.gen_range(0.3..4.0), // center
                    rng.gen_range(0.2..1.5), // width
                )
            })
            .collect();
        let value = move |r: f64| -> f64 {
            bumps
                .iter()
                .map(|&(a, c, w)| a * (-((r - c) / w).powi(2)).exp())
                .sum::<f64>()
                * (-0.3 * r).exp()
        };
        let r_nodes: Vec<f64> = (0..=4000)
            .map(|j| 1e-6 + 20.0 * j as f64 / 4000.0)
            .collect();
        let v: Vec<f64> = r_nodes.iter().map(|&r| value(r)).collect();
        let profile = RadialProfile::from_samples(dim, r_nodes.clone(), v)?;
        let grid = Grid::from_nodes(r_nodes)?;
        let rep = check_radial_bound(&profile, &grid)?;
        report.trials += 1;
        if rep.lhs_sup > rep.rhs + 1e-10 {
            report.record_violation(
                (rep.lhs_sup - rep.rhs) / rep.rhs.max(1e-300),
                format!("trial {i}: sup {0} > rhs {1}", rep.lhs_sup, rep.rhs),
            );
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoincareReport {
    /// Σ (a_k² + b_k²)  (∝ ∫|g|² on the circle, zero mean).
    pub lhs: f64,
    /// Σ k² (a_k² + b_k²)  (∝ ∫|g'|²).
    pub rhs: f64,
    pub equality: bool,
}

/// Poincaré inequality on S¹ in Fourier coefficients (Parseval): for
/// zero-mean g = Σ a_k cos kθ + b_k sin kθ, ∫|g|² ≤ ∫|g'|², with equality
/// iff only the k = 1 modes are present. Coefficients are indexed from k = 1.
pub fn check_poincare_circle(cos_coeffs: &[f64], sin_coeffs: &[f64]) -> Result<PoincareReport> {
    if cos_coeffs.is_empty() && sin_coeffs.is_empty() {
        return Err(Error::BadParameter("no Fourier modes supplied".into()));
    }
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    let mut higher = 0.0;
    for (idx, &a) in cos_coeffs.iter().enumerate() {
        let k = (idx + 1) as f64;
        lhs += a * a;
        rhs += k * k * a * a;
        if idx > 0 {
            higher += a * a;
        }
    }
    for (idx, &b) in sin_coeffs.iter().enumerate() {
        let k = (idx + 1) as f64;
        lhs += b * b;
        rhs += k * k * b * b;
        if idx > 0 {
            higher += b * b;
        }
    }
    Ok(PoincareReport {
        lhs,
        rhs,
        equality: higher == 0.0,
    })
}

/// Exponent split r = q + (q-2)/(p-1), r̃ = (p/(p-1))(1 + q/2 - 2/p), with
/// the identity r̃ = r/2 + 1 asserted to 1e-14 relative.
pub fn exponent_split(p: f64, q: f64) -> Result<(f64, f64)> {
    if !(p > 1.0) {
        return Err(Error::BadParameter(format!("need p > 1, got {p}")));
    }
    if !(q >= 2.0) {
        return Err(Error::BadParameter(format!("need q >= 2, got {q}")));
    }
    let r = q + (q - 2.0) / (p - 1.0);
    let r_tilde = p / (p - 1.0) * (1.0 + q / 2.0 - 2.0 / p);
    let identity = r / 2.0 + 1.0;
    if (r_tilde - identity).abs() > 1e-14 * identity.abs().max(1.0) {
        return Err(Error::NoConvergence(format!(
            "exponent identity violated: r_tilde = {r_tilde}, r/2 + 1 = {identity}"
        )));
    }
    Ok((r, r_tilde))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardyGapReport {
    /// ∫ f'(t)² dt over the grid.
    pub lhs: f64,
    /// (1/4) ∫ f(t)²/t² dt.
    pub rhs: f64,
    pub gap: f64,
}

/// 1D Hardy inequality on (L, ∞): ∫ f'² ≥ (1/4) ∫ f²/t² for f(L) = 0,
/// evaluated by quadrature on the given grid (which must start at L).
pub fn check_hardy_1d<F, G>(f: F, df: G, left: f64, grid: &Grid) -> Result<HardyGapReport>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    if (grid.start() - left).abs() > 1e-9 * (1.0 + left.abs()) {
        return Err(Error::MeshMismatch(format!(
            "grid starts at {} but the Hardy domain starts at {left}",
            grid.start()
        )));
    }
    let boundary = f(left).abs();
    let scale = f(0.5 * (left + grid.end())).abs().max(1e-300);
    if boundary > 1e-9 * scale.max(1.0) {
        return Err(Error::BadParameter(format!(
            "Hardy inequality requires f(L) = 0, got f({left}) = {boundary}"
        )));
    }
    let lhs = quad_scalar(grid, |t| df(t) * df(t))?.value;
    let rhs = 0.25 * quad_scalar(grid, |t| f(t) * f(t) / (t * t))?.value;
    Ok(HardyGapReport {
        lhs,
        rhs,
        gap: lhs - rhs,
    })
}

/// Runs the tail/head weak-norm bound over seeded random step functions:
/// tail at p = 1.2 with the cut at the median breakpoint, head at p = 8
/// (N = 3).
pub fn tail_head_suite(cfg: &TrialConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let mut report = SuiteReport::new("tail-head");
    for i in 0..cfg.trials as u64 {
        let u = random_step(cfg, i);
        report.trials += 1;
        let cum: Vec<f64> = u
            .pieces()
            .iter()
            .scan(0.0, |acc, &(_, m)| {
                *acc += m;
                Some(*acc)
            })
            .collect();
        let median = cum[cum.len() / 2];
        for (params, side) in [
            (LorentzParams::new(1.2, f64::INFINITY)?, BoundSide::Tail),
            (LorentzParams::new(8.0, f64::INFINITY)?, BoundSide::Head),
        ] {
            let (lhs, rhs) = u.tail_head_bound(params, median, side)?;
            if lhs > rhs + 1e-12 * rhs {
                report.record_violation(
                    (lhs - rhs) / rhs.max(1e-300),
                    format!("trial {i} {side:?}: {lhs} > {rhs}"),
                );
            }
        }
    }
    Ok(report)
}

//! Independent oracles for the integration suites: adaptive quadrature,
//! Prüfer-shooting eigenvalues, and closed-form family quotients. Nothing in
//! here touches the library's quadrature or assembly code paths.

#![allow(dead_code)]

/// Recursive adaptive Simpson quadrature with Richardson acceptance.
pub fn adaptive_simpson<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, m: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b))
    }
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        m: f64,
        b: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let left = simpson(f, a, lm, m);
        let right = simpson(f, m, rm, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, lm, m, left, tol * 0.5, depth - 1)
            + recurse(f, m, rm, b, right, tol * 0.5, depth - 1)
    }
    let m = 0.5 * (a + b);
    recurse(&f, a, m, b, simpson(&f, a, m, b), tol, 48)
}

/// Prüfer angle at T for -g'' + k²g = λ g/t² on (L, T) with g(L) = 0,
/// integrated by RK4 on steps graded toward the left boundary.
fn prufer_theta_end(lambda: f64, k: f64, left: f64, t_end: f64) -> f64 {
    let mut theta = 0.0f64;
    let mut t = left;
    let f = |tt: f64, th: f64| {
        let (s, c) = th.sin_cos();
        c * c + (lambda / (tt * tt) - k * k) * s * s
    };
    while t < t_end {
        let h = (0.05 * t).min(0.005).min(t_end - t);
        let k1 = f(t, theta);
        let k2 = f(t + 0.5 * h, theta + 0.5 * h * k1);
        let k3 = f(t + 0.5 * h, theta + 0.5 * h * k2);
        let k4 = f(t + h, theta + h * k3);
        theta += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += h;
    }
    theta
}

/// First Dirichlet eigenvalue of the critical-disk mode-k reduction on
/// (log a, T) by shooting: bisection on θ(T; λ) = π.
pub fn shoot_critical_disk(a: f64, k: u32, t_end: f64) -> f64 {
    let left = a.ln();
    let kf = k as f64;
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    while prufer_theta_end(hi, kf, left, t_end) < std::f64::consts::PI {
        hi *= 2.0;
        assert!(hi < 1e9, "shooting bracket failure");
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if prufer_theta_end(mid, kf, left, t_end) < std::f64::consts::PI {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Exact truncated eigenvalue for the classical reductions: substituting
/// φ = e^{-(N-2)s/2} g turns the weighted problem on (0, T) into a
/// constant-coefficient one, so λ₁(T) = (N-2)²/4 + μ_k + (π/T)².
pub fn classical_ball_truncated(dim: u32, k: u32, t_end: f64) -> f64 {
    let c = (dim - 2) as f64;
    let mu = k as f64 * (k as f64 + dim as f64 - 2.0);
    c * c / 4.0 + mu + (std::f64::consts::PI / t_end).powi(2)
}

/// Closed-form u_α quotient at a = 1 (numerator and denominator are exact
/// power integrals; the only transcendental piece is
/// J = ∫_{ln 2}^∞ e^{-2t} t^{-2} dt, evaluated by the adaptive oracle).
pub fn ualpha_quotient_closed(alpha: f64) -> f64 {
    let l2 = std::f64::consts::LN_2;
    let j = adaptive_simpson(|t| (-2.0 * t).exp() / (t * t), l2, 40.0, 1e-14);
    let num = l2.powf(2.0 * alpha)
        + alpha * alpha * l2.powf(2.0 * alpha - 1.0) / (2.0 * alpha - 1.0)
        + l2.powf(2.0 * alpha + 1.0) / (2.0 * alpha + 1.0);
    let den = l2.powf(2.0 * alpha - 1.0) / (2.0 * alpha - 1.0) + 4.0 * l2.powf(2.0 * alpha) * j;
    num / den
}

/// Closed-form v_m quotient for N = 3 (piecewise integrals done by hand).
pub fn vm_quotient_closed(m: f64) -> f64 {
    let s = 1.0 - 1.0 / m.sqrt();
    let num = 2.25 * m.ln() - 8.0 * s + 2.0 * (1.0 - 1.0 / m) + 1.5 * s * s;
    let den = m.ln() - 4.0 * s + (1.0 - 1.0 / m) + s * s / 6.0;
    num / den
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

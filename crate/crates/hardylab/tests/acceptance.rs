//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured quantities (run with `--nocapture` to see them).

mod common;

use common::*;
use hardylab::*;
use std::time::Instant;

fn sig3_stable(a: f64, b: f64) -> bool {
    rel_diff(a, b) <= 1e-3
}

#[test]
fn acceptance_01_classical_ball_trace() {
    let start = Instant::now();
    let problem = ModeProblem::new(Geometry::ClassicalBall { dim: 3 }, 1, 2.0).unwrap();
    let est = sharp_constant(&problem, &RefinementPlan::default()).unwrap();
    for w in est.trace.windows(2) {
        assert!(
            w[1].value <= w[0].value + 1e-12,
            "trace must be nonincreasing: {w:?}"
        );
    }
    for e in &est.trace {
        assert!(e.value >= 2.25 - 1e-3, "one-sidedness: {e:?}");
    }
    let last = est.trace.last().unwrap();
    assert!(last.t_end >= 30.0 && last.h <= 0.01);
    assert!(last.value <= 2.45, "final value {}", last.value);
    // independent truncated closed form λ₁(T) = 9/4 + (π/T)²
    for e in &est.trace {
        let exact = classical_ball_truncated(3, 1, e.t_end);
        assert!(
            rel_diff(e.value, exact) < 2e-3,
            "trace {e:?} vs truncated closed form {exact}"
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "runtime {elapsed:?}");
    println!(
        "PASS criterion 1: classical ball N=3 trace {:?} -> {} (>= 2.249, <= 2.45), {:.2}s",
        est.trace.iter().map(|e| e.value).collect::<Vec<_>>(),
        last.value,
        elapsed.as_secs_f64()
    );
}

#[test]
fn acceptance_02_critical_disk_at_e() {
    let start = Instant::now();
    let problem = ModeProblem::new(
        Geometry::CriticalDisk {
            a: std::f64::consts::E,
        },
        1,
        2.0,
    )
    .unwrap();
    let est = sharp_constant(&problem, &RefinementPlan::default()).unwrap();
    assert!(
        est.value >= 1.25 + 1e-3,
        "A_e must strictly dominate 5/4: {}",
        est.value
    );
    let n = est.trace.len();
    assert!(
        sig3_stable(est.trace[n - 1].value, est.trace[n - 2].value),
        "last two refinement levels differ: {} vs {}",
        est.trace[n - 1].value,
        est.trace[n - 2].value
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "runtime {elapsed:?}");
    println!(
        "PASS criterion 2: A_e = {} >= 1.251, stable to 3 digits, {:.2}s",
        est.value,
        elapsed.as_secs_f64()
    );
}

#[test]
fn acceptance_03_sweep_toward_one_quarter() {
    let start = Instant::now();
    let sweep = [2.0, 1.5, 1.1, 1.01];
    let mut values = Vec::new();
    for &a in &sweep {
        let problem = ModeProblem::new(Geometry::CriticalDisk { a }, 1, 2.0).unwrap();
        let scale = (a - 1.0f64).clamp(0.02, 1.0);
        let plan = RefinementPlan {
            t_list: vec![21.0, 41.0],
            h_list: vec![0.01 * scale, 0.005 * scale],
            k_max: 1,
        };
        let est = sharp_constant(&problem, &plan).unwrap();
        let t_end = est.trace.last().unwrap().t_end;
        let oracle = shoot_critical_disk(a, 1, t_end);
        assert!(
            rel_diff(est.value, oracle) <= 1e-3,
            "a = {a}: finite elements {} vs shooting {oracle}",
            est.value
        );
        assert!(est.value > 0.25, "a = {a}: {}", est.value);
        values.push(est.value);
    }
    for w in values.windows(2) {
        assert!(w[1] < w[0], "strict decrease failed: {values:?}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "runtime {elapsed:?}");
    println!(
        "PASS criterion 3: A_a sweep {values:?} strictly decreasing toward 1/4, shooting-validated, {:.2}s",
        elapsed.as_secs_f64()
    );
}

#[test]
fn acceptance_04_ualpha_gap() {
    // oracle values frozen from the closed-form/adaptive-quadrature oracle
    let frozen = [
        (0.60, 0.507588171098),
        (0.55, 0.381641380195),
        (0.51, 0.276826423362),
    ];
    let mut gaps = Vec::new();
    for &(alpha, oracle) in &frozen {
        let live_oracle = ualpha_quotient_closed(alpha);
        assert!(
            rel_diff(live_oracle, oracle) < 1e-9,
            "oracle drift at alpha = {alpha}"
        );
        let profile = make_family(&TestFamily::UAlpha { alpha }).unwrap();
        let rep = quotient(&profile, &Geometry::CriticalDisk { a: 1.0 }).unwrap();
        assert!(
            rel_diff(rep.quotient, oracle) < 1e-5,
            "alpha = {alpha}: quotient {} vs oracle {oracle}",
            rep.quotient
        );
        let gap = rep.quotient - alpha * alpha;
        assert!(gap > 0.0, "alpha = {alpha}: gap {gap}");
        gaps.push(gap);
    }
    for w in gaps.windows(2) {
        assert!(w[1] < w[0], "gaps must decrease toward 0: {gaps:?}");
    }
    assert!(gaps[2] < 0.05, "gap at alpha = 0.51 is {}", gaps[2]);
    println!("PASS criterion 4: u_alpha gaps {gaps:?} positive, decreasing, last < 0.05");
}

#[test]
fn acceptance_05_vm_quotients() {
    let mut values = Vec::new();
    for m in [100u32, 1000, 10000] {
        let profile = make_family(&TestFamily::VM { m, dim: 3 }).unwrap();
        let rep = quotient(&profile, &Geometry::ClassicalBall { dim: 3 }).unwrap();
        let oracle = vm_quotient_closed(m as f64);
        assert!(
            rel_diff(rep.quotient, oracle) < 1e-5,
            "m = {m}: {} vs closed form {oracle}",
            rep.quotient
        );
        assert!(rep.quotient >= 2.25, "m = {m}: {}", rep.quotient);
        values.push(rep.quotient);
    }
    for w in values.windows(2) {
        assert!(w[1] < w[0], "strict decrease failed: {values:?}");
    }
    println!("PASS criterion 5: v_m quotients {values:?} >= 9/4 and strictly decreasing");
}

#[test]
fn acceptance_06_u_lambda_invariance() {
    let a = 2.0;
    let base = make_family(&TestFamily::UAlpha { alpha: 1.0 }).unwrap();
    let e0 = critical_dirichlet_energy(&base, a).unwrap().value;
    let n0 = critical_weighted_qnorm(&base, a, 2.0).unwrap().value;
    let mut worst = 0.0f64;
    for lambda in [1.0, 0.5, 0.25, 0.125] {
        let u = transform_u_lambda(&base, lambda, a).unwrap();
        let e = critical_dirichlet_energy(&u, a).unwrap().value;
        let n = critical_weighted_qnorm(&u, a, 2.0).unwrap().value;
        let de = rel_diff(e, e0);
        let dn = rel_diff(n, n0);
        assert!(de <= 1e-8, "lambda = {lambda}: energy drift {de}");
        assert!(dn <= 1e-8, "lambda = {lambda}: weighted-mass drift {dn}");
        worst = worst.max(de).max(dn);
    }
    println!("PASS criterion 6: u_lambda invariance, worst relative drift {worst:e} <= 1e-8");
}

#[test]
fn acceptance_07_lorentz_scaling_law() {
    let cfg = TrialConfig {
        trials: 1000,
        seed: 7,
        ..TrialConfig::default()
    };
    let dims = 3u32;
    let beta = (dims as f64 - 2.0) / 2.0;
    let mut worst = 0.0f64;
    for i in 0..cfg.trials as u64 {
        let u = random_canonical_step(&cfg, i, dims);
        let m = 0.1 + 9.9 * fraction(cfg.seed, i);
        for (p, q) in [(5.0, 2.0), (3.0, f64::INFINITY), (2.0, 2.0)] {
            let params = LorentzParams::new(p, q).unwrap();
            let base = u.lorentz_norm(params).unwrap();
            let scaled = u.dilate(m, beta).unwrap().lorentz_norm(params).unwrap();
            let want = m.powf(beta - dims as f64 / p) * base;
            let rel = rel_diff(scaled, want);
            assert!(
                rel <= 1e-12,
                "trial {i}, (p,q)=({p},{q}), m={m}: {scaled} vs {want}"
            );
            worst = worst.max(rel);
        }
    }
    println!("PASS criterion 7: dilation law over 1000 random steps, worst rel error {worst:e}");
}

// deterministic helpers for criterion 7 (independent of the library's
// generator so the law is exercised on fresh data)
fn fraction(seed: u64, index: u64) -> f64 {
    let mut z = seed ^ index.wrapping_mul(0xD134_2543_DE82_EF95);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    ((z >> 11) as f64) / ((1u64 << 53) as f64)
}

fn random_canonical_step(cfg: &TrialConfig, index: u64, dim: u32) -> StepFunction {
    let count = 1 + (fraction(cfg.seed ^ 0xABCD, index) * 49.0) as usize;
    let pieces: Vec<(f64, f64)> = (0..count)
        .map(|j| {
            let fv = fraction(cfg.seed ^ 0x1111, index * 64 + j as u64);
            let fm = fraction(cfg.seed ^ 0x2222, index * 64 + j as u64);
            (10f64.powf(-3.0 + 6.0 * fv), 10f64.powf(-3.0 + 6.0 * fm))
        })
        .collect();
    StepFunction::new(pieces, dim)
        .unwrap()
        .decreasing_rearrangement()
}

#[test]
fn acceptance_08_interpolation_suite() {
    for (p, q, r) in [(1.0, 2.0, 3.0), (1.5, 2.0, 6.0), (2.0, 3.0, 50.0)] {
        let triple = InterpolationTriple::new(p, q, r).unwrap();
        let cfg = TrialConfig {
            trials: 10_000,
            seed: 42,
            ..TrialConfig::default()
        };
        let report = check_interpolation(&triple, &cfg).unwrap();
        assert_eq!(
            report.violations, 0,
            "triple ({p},{q},{r}): {:?}",
            report.details
        );
        assert_eq!(report.trials, 10_000);
    }
    println!("PASS criterion 8: interpolation inequality, 3 triples x 10^4 trials, 0 violations");
}

#[test]
fn acceptance_09_holder_failure_slope() {
    let q = 3.0;
    let p = holder_conjugate(q);
    let slope = holder_slope(2, p, q, &[1e-1, 1e-2, 1e-3, 1e-4]).unwrap();
    let want = 1.0 / q - 0.5;
    assert!(
        (slope - want).abs() < 0.05,
        "slope {slope} vs 1/q - 1/2 = {want}"
    );
    println!("PASS criterion 9: Holder-failure log-log slope {slope} within 0.05 of {want}");
}

#[test]
fn acceptance_10_remaining_suites() {
    // radial pointwise lemma
    let cfg = TrialConfig {
        trials: 100,
        seed: 42,
        ..TrialConfig::default()
    };
    let radial = hardylab::verify::radial_bound_suite(&cfg).unwrap();
    assert_eq!(radial.violations, 0, "{:?}", radial.details);

    // Poincaré on the circle: random 10-mode polynomials + equality case
    use rand::Rng;
    use rand::SeedableRng;
    for i in 0..1000u64 {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(hardylab::verify::trial_seed(42, i));
        let modes = rng.gen_range(1..=10usize);
        let cos: Vec<f64> = (0..modes).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let sin: Vec<f64> = (0..modes).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let rep = check_poincare_circle(&cos, &sin).unwrap();
        assert!(rep.lhs <= rep.rhs, "trial {i}");
    }
    let eq = check_poincare_circle(&[1.0], &[]).unwrap();
    assert!(eq.equality && eq.lhs == eq.rhs);

    // tail/head bounds
    let th_cfg = TrialConfig {
        trials: 10_000,
        seed: 42,
        ..TrialConfig::default()
    };
    let th = hardylab::verify::tail_head_suite(&th_cfg).unwrap();
    assert_eq!(th.violations, 0, "{:?}", th.details);

    // exponent identity r̃ = r/2 + 1 on 10³ random (p, q)
    for i in 0..1000u64 {
        let p = 1.01 + 8.99 * fraction(99, i);
        let q = 2.0 + 8.0 * fraction(77, i);
        let (r, rt) = exponent_split(p, q).unwrap();
        assert!(
            (rt - (r / 2.0 + 1.0)).abs() <= 1e-14 * (r / 2.0 + 1.0),
            "identity failed at ({p}, {q})"
        );
    }
    println!(
        "PASS criterion 10: radial bound ({} trials), Poincare (1000), tail/head (10^4 x 2), exponent identity (10^3): 0 violations",
        radial.trials
    );
}

#[test]
fn acceptance_11_cli_determinism() {
    use std::process::Command;
    let bin = env!("CARGO_BIN_EXE_hardylab");
    let dir = tempfile::tempdir().unwrap();

    let run = |args: &[&str], out: &std::path::Path, threads: Option<&str>| {
        let mut cmd = Command::new(bin);
        cmd.args(args).arg("--output").arg(out);
        if let Some(t) = threads {
            cmd.env("HARDYLAB_THREADS", t);
        }
        let status = cmd.status().unwrap();
        assert!(status.success(), "command failed: {args:?}");
        std::fs::read(out).unwrap()
    };

    // sharp JSON twice
    let s1 = run(
        &["sharp", "--geometry", "classical-ball", "--dim", "3"],
        &dir.path().join("sharp1.json"),
        None,
    );
    let s2 = run(
        &["sharp", "--geometry", "classical-ball", "--dim", "3"],
        &dir.path().join("sharp2.json"),
        None,
    );
    assert_eq!(s1, s2, "sharp output must be byte-identical");

    // sweep CSV twice, including a thread-cap change
    let sweep_args = ["sweep", "--a-grid", "2,1.5"];
    let c1 = run(&sweep_args, &dir.path().join("sweep1.csv"), Some("1"));
    let c2 = run(&sweep_args, &dir.path().join("sweep2.csv"), Some("4"));
    assert_eq!(c1, c2, "sweep output must not depend on parallelism");

    // verify JSON twice with a fixed seed
    let verify_args = [
        "verify",
        "--suite",
        "interpolation",
        "--trials",
        "500",
        "--seed",
        "42",
    ];
    let v1 = run(&verify_args, &dir.path().join("verify1.json"), None);
    let v2 = run(&verify_args, &dir.path().join("verify2.json"), None);
    assert_eq!(v1, v2, "verify output must be byte-identical");

    println!("PASS criterion 11: sharp/sweep/verify outputs byte-identical across reruns and thread caps");
}

//! Acceptance suite. Prints one PASS/FAIL line per criterion, with the
//! measured numbers underneath, and exits non-zero if any criterion fails.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use otto_core::adiabaticity::{qstar_numeric, qstar_perturbative, DEFAULT_TOLERANCE};
use otto_core::breakdown::{
    critical_qstar, critical_time_linear, critical_time_linear_squared, critical_time_numeric,
    BreakdownPoint, DEFAULT_WIDTH,
};
use otto_core::optimize::{
    chi_nonadiabatic, cop_cubic, cop_first_order, optimize_adiabatic, optimize_cubic,
    EnergyRatioTau,
};
use otto_core::thermo::{carnot_cop, figure_of_merit};
use otto_core::{CycleConfig, FrequencyProtocol, PerformanceReport, RampShape, ReservoirPair};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Criterion {
    checks: Vec<(String, bool)>,
    notes: Vec<String>,
}

impl Criterion {
    fn new() -> Self {
        Self {
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, what: impl Into<String>, ok: bool) {
        self.checks.push((what.into(), ok));
    }

    fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    fn runtime(&mut self, started: Instant, limit: Duration) {
        let took = started.elapsed();
        self.check(format!("runtime {:.3} s < {} s", took.as_secs_f64(), limit.as_secs()), took < limit);
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Reservoirs with `beta_hot / beta_cold = tau` deep in the classical regime.
fn classical(tau: f64) -> (CycleConfig, ReservoirPair) {
    let beta_hot = 1e-6;
    let cfg = CycleConfig::new(1.0, 2.0).unwrap();
    (cfg, ReservoirPair::new(beta_hot / tau, beta_hot).unwrap())
}

fn classical_optimum() -> Criterion {
    let mut c = Criterion::new();
    let started = Instant::now();
    let mut worst_closed = 0.0f64;
    let mut worst_scan = 0.0f64;
    for k in 1..=9 {
        let tau = 0.1 * k as f64;
        let (cfg, res) = classical(tau);
        let carnot = 1.0 / (1.0 / tau - 1.0);
        let expected = (1.0 + carnot).sqrt() - 1.0;
        let opt = optimize_adiabatic(&cfg, &res).unwrap();
        worst_closed = worst_closed.max(rel(opt.cop_opt, expected));

        // brute force over omega_2 = omega_1 / r with r on a uniform grid in (0, tau)
        let n = 1_000_000;
        let mut best = (f64::NEG_INFINITY, 0.0);
        for i in 1..n {
            let r = tau * i as f64 / n as f64;
            let w2 = 1.0 / r;
            let chi = figure_of_merit(&cfg.with_omega_2(w2).unwrap(), &res, 1.0, 1.0).unwrap();
            if chi > best.0 {
                best = (chi, w2);
            }
        }
        worst_scan = worst_scan.max(rel(best.1, opt.omega_2_opt));
    }
    c.note(format!("max rel error of cop vs sqrt(1+eps_c)-1: {worst_closed:.3e}"));
    c.note(format!("max rel error of brute-force maximizer: {worst_scan:.3e}"));
    c.check("closed form to 1e-9", worst_closed <= 1e-9);
    c.check("brute-force scan to 1e-5", worst_scan <= 1e-5);
    c.runtime(started, Duration::from_secs(5));
    c
}

/// Maximizer of `f` over `[lo, hi]`: log-spaced scan, then ternary search in
/// the cells next to the best sample.
fn argmax(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let n = 4000;
    let at = |i: usize| lo * (hi / lo).powf(i as f64 / n as f64);
    let best = (0..=n).max_by(|&a, &b| f(at(a)).total_cmp(&f(at(b)))).unwrap();
    let (mut a, mut b) = (at(best.saturating_sub(1)), at((best + 1).min(n)));
    for _ in 0..200 {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if f(m1) < f(m2) {
            a = m1;
        } else {
            b = m2;
        }
    }
    0.5 * (a + b)
}

fn cubic_consistency() -> Criterion {
    let mut c = Criterion::new();
    let y = 0.01;
    let mut worst = 0.0f64;
    let mut below = true;
    let mut gaps = Vec::new();
    for k in 1..=18 {
        let tau = 0.05 * k as f64;
        let beta_hot = 1e-3;
        let cfg = CycleConfig::new(1.0, 2.0).unwrap();
        let res = ReservoirPair::new(beta_hot / tau, beta_hot).unwrap();
        let chi = chi_nonadiabatic(&cfg, &res, y).unwrap();
        let t = otto_core::optimize::tau_exact(&cfg, &res).unwrap().value();
        let positive = |w2: f64| chi.eval(w2).ok().filter(|v| v.is_finite()).unwrap_or(f64::NEG_INFINITY);
        let scan = argmax(positive, (1.0 + y) / t * (1.0 + 1e-9), 1e4 / t);
        let cubic = optimize_cubic(&cfg, &res, y).unwrap();
        let adiabatic = optimize_adiabatic(&cfg, &res).unwrap();
        worst = worst.max(rel(cubic.omega_2_opt, scan));
        below &= cubic.cop_opt < adiabatic.cop_opt;
        gaps.push((tau, adiabatic.cop_opt - cubic.cop_opt));
    }
    let grows = gaps.windows(2).all(|w| w[1].1 > w[0].1);
    c.note(format!("max rel deviation of cubic root from scan maximizer: {worst:.3e}"));
    c.note(format!(
        "gap eps_ad - eps_na: {:.4e} at tau = {:.2}, {:.4e} at tau = {:.2}",
        gaps[0].1,
        gaps[0].0,
        gaps[gaps.len() - 1].1,
        gaps[gaps.len() - 1].0
    ));
    c.check("cubic root matches maximizer to 1e-6", worst <= 1e-6);
    c.check("eps_na < eps_ad", below);
    c.check("gap grows with tau", grows);
    c
}

fn first_order_law() -> Criterion {
    let mut c = Criterion::new();
    let started = Instant::now();
    let mut all = true;
    for tau in [0.25, 0.5, 0.75] {
        let t = EnergyRatioTau::classical(&ReservoirPair::new(1.0 / tau, 1.0).unwrap()).unwrap();
        let diff = |y: f64| (cop_cubic(t, y).unwrap() - cop_first_order(t, y).unwrap()).abs();
        let (d1, d2) = (diff(1e-3), diff(5e-4));
        let ratio = d1 / d2;
        c.note(format!("tau = {tau}: |diff| {d1:.4e} -> {d2:.4e}, ratio {ratio:.3}"));
        all &= ratio >= 3.5;
    }
    c.check("halving y reduces the difference >= 3.5x", all);
    c.runtime(started, Duration::from_secs(1));
    c
}

fn qstar_limits() -> Criterion {
    let mut c = Criterion::new();
    let started = Instant::now();
    let sudden = qstar_numeric(&FrequencyProtocol::linear(1.0, 2.0, 1e-4).unwrap(), DEFAULT_TOLERANCE).unwrap();
    let slow = qstar_numeric(&FrequencyProtocol::linear(1.0, 2.0, 1e3).unwrap(), DEFAULT_TOLERANCE).unwrap();
    c.note(format!(
        "t0 = 1e-4: Q* = {:.12} (drift {:.2e}); t0 = 1e3: Q* = {:.12} (drift {:.2e})",
        sudden.q_star, sudden.wronskian_drift, slow.q_star, slow.wronskian_drift
    ));
    c.check("sudden limit 1.25 within 1e-3", (sudden.q_star - 1.25).abs() <= 1e-3);
    c.check("quasistatic limit 1 within 1e-4", (slow.q_star - 1.0).abs() <= 1e-4);
    c.check(
        "Wronskian drift <= 1e-8",
        sudden.wronskian_drift <= 1e-8 && slow.wronskian_drift <= 1e-8,
    );
    c.runtime(started, Duration::from_secs(2));
    c
}

fn perturbative_validity() -> Criterion {
    let mut c = Criterion::new();
    let residuals: Vec<f64> = [20.0, 40.0, 80.0]
        .iter()
        .map(|&t0| {
            let p = FrequencyProtocol::linear(1.0, 2.0, t0).unwrap();
            let numeric = qstar_numeric(&p, DEFAULT_TOLERANCE).unwrap().q_star;
            let estimate = qstar_perturbative(&p).unwrap().q_star;
            (numeric - estimate).abs()
        })
        .collect();
    let ratios = [residuals[0] / residuals[1], residuals[1] / residuals[2]];
    c.note(format!(
        "residuals {:.4e}, {:.4e}, {:.4e}; ratios {:.3}, {:.3}",
        residuals[0], residuals[1], residuals[2], ratios[0], ratios[1]
    ));
    c.check("residual shrinks >= 3.5x per doubling", ratios.iter().all(|&r| r >= 3.5));
    c
}

fn breakdown_sweep(
    shape: RampShape,
    estimate: fn(&CycleConfig, &ReservoirPair) -> otto_core::Result<BreakdownPoint>,
) -> Criterion {
    let mut c = Criterion::new();
    let started = Instant::now();
    let (w1, beta_hot) = (1.0, 1.0);
    let mut agree = true;
    let mut monotone = true;
    let mut diverges = true;
    for w2 in [5.0, 10.0] {
        let cfg = CycleConfig::new(w1, w2).unwrap();
        let family = |t0| shape.protocol(w2, w1, t0);
        let t_edge = w1 / (beta_hot * w2);
        let n = 30;
        let mut numeric = Vec::new();
        let mut analytic = Vec::new();
        let mut worst: (f64, f64) = (0.0, 0.0);
        let mut within = 0;
        for i in 0..n {
            let t1 = 1.25 * t_edge + (2.0 - 1.25 * t_edge) * i as f64 / (n - 1) as f64;
            let res = ReservoirPair::unordered(1.0 / t1, beta_hot).unwrap();
            let num = critical_time_numeric(family, &cfg, &res, DEFAULT_WIDTH).unwrap().point;
            let ana = estimate(&cfg, &res).unwrap();
            let dev = rel(num.t0_critical, ana.t0_critical);
            if dev <= 0.2 {
                within += 1;
            }
            if dev > worst.0 {
                worst = (dev, t1);
            }
            numeric.push(num.t0_critical);
            analytic.push(ana.t0_critical);
        }
        agree &= within == n;
        // T1 ascends along the sweep, so both estimates must not grow
        let num_mono = numeric.windows(2).all(|w| w[1] <= w[0]);
        let ana_mono = analytic.windows(2).all(|w| w[1] < w[0]);
        monotone &= num_mono && ana_mono;

        let edge = ReservoirPair::unordered(w2 / w1 * beta_hot, beta_hot).unwrap();
        let above = ReservoirPair::unordered(1.0 / (1.25 * t_edge), beta_hot).unwrap();
        let at_edge = critical_time_numeric(family, &cfg, &edge, DEFAULT_WIDTH).unwrap().point;
        let ok_edge = at_edge.diverged
            && estimate(&cfg, &edge).unwrap().diverged
            && !estimate(&cfg, &above).unwrap().diverged;
        diverges &= ok_edge;

        c.note(format!(
            "omega2 = {w2}: {within}/{n} points within 20%, worst |numeric/estimate - 1| = {:.3} at T1 = {:.3}",
            worst.0,
            worst.1
        ));
        c.note(format!(
            "omega2 = {w2}: t0c numeric {:.4} -> {:.4}, estimate {:.4} -> {:.4} over T1 = {:.3} -> 2",
            numeric[0],
            numeric[n - 1],
            analytic[0],
            analytic[n - 1],
            1.25 * t_edge
        ));
    }
    c.check("numeric and estimate agree within 20%", agree);
    c.check("both increase as T1 decreases", monotone);
    c.check("diverged flag at T1 = T2 omega1/omega2", diverges);
    c.runtime(started, Duration::from_secs(60));
    c
}

fn fig4() -> Criterion {
    breakdown_sweep(RampShape::Linear, critical_time_linear)
}

fn fig5() -> Criterion {
    let mut c = breakdown_sweep(RampShape::LinearSquared, critical_time_linear_squared);
    let mut worst = 0.0f64;
    for w2 in [1.5, 2.0, 5.0, 10.0, 40.0] {
        let cfg = CycleConfig::new(1.0, w2).unwrap();
        for t1 in [0.3, 0.7, 1.0, 2.0] {
            let res = ReservoirPair::unordered(1.0 / t1, 1.0).unwrap();
            let sq = critical_time_linear_squared(&cfg, &res).unwrap();
            let lin = critical_time_linear(&cfg, &res).unwrap();
            if sq.diverged {
                continue;
            }
            worst = worst.max(rel(sq.t0_critical / lin.t0_critical, (w2 + 1.0) / (2.0 * w2)));
        }
    }
    c.note(format!("max rel error of estimate ratio vs (w2+w1)/(2 w2): {worst:.3e}"));
    c.check("estimate ratio identity to 1e-12", worst <= 1e-12);
    c
}

fn invariants() -> Criterion {
    let mut c = Criterion::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0770);
    let log_uniform = |rng: &mut ChaCha8Rng, lo: f64, hi: f64| (rng.gen_range(lo.ln()..hi.ln())).exp();
    let (mut closure, mut carnot, mut threshold) = (0.0f64, true, 0.0f64);
    let (mut cooling, mut straddle) = (0, true);
    for _ in 0..10_000 {
        let w1 = log_uniform(&mut rng, 0.1, 10.0);
        let w2 = w1 * rng.gen_range(1.01..20.0);
        let beta_hot = log_uniform(&mut rng, 0.01, 5.0);
        let beta_cold = beta_hot * rng.gen_range(1.01..10.0);
        let cfg = CycleConfig::new(w1, w2).unwrap();
        let res = ReservoirPair::new(beta_cold, beta_hot).unwrap();
        let q1 = rng.gen_range(1.0..3.0);
        let q2 = rng.gen_range(1.0..3.0);

        let r = PerformanceReport::evaluate(&cfg, &res, q1, q2).unwrap();
        let scale = r.work_in_1.abs() + r.work_in_3.abs() + r.heat_cold.abs() + r.heat_hot.abs();
        closure = closure.max(r.closure_residual().abs() / scale);

        let adiabatic = PerformanceReport::evaluate(&cfg, &res, 1.0, 1.0).unwrap();
        if adiabatic.is_cooling {
            cooling += 1;
            carnot &= adiabatic.cop <= carnot_cop(&res) * (1.0 + 1e-12);
        }

        let q_crit = critical_qstar(&cfg, &res).unwrap();
        if q_crit > 1.0 + 1e-6 {
            let at = PerformanceReport::evaluate(&cfg, &res, q1, q_crit).unwrap();
            threshold = threshold.max(at.heat_cold.abs() / at.energies.e_a);
            let lo = PerformanceReport::evaluate(&cfg, &res, q1, q_crit * (1.0 - 1e-9)).unwrap();
            let hi = PerformanceReport::evaluate(&cfg, &res, q1, q_crit * (1.0 + 1e-9)).unwrap();
            straddle &= lo.heat_cold > 0.0 && hi.heat_cold < 0.0;
        }
    }
    c.note(format!("max closure residual {closure:.3e}, {cooling} adiabatic cooling cases"));
    c.note(format!("max |heat_cold| / e_a at the threshold {threshold:.3e}"));
    c.check("closure to 1e-12", closure <= 1e-12);
    c.check("adiabatic cooling below Carnot", carnot);
    c.check("heat_cold vanishes at the threshold to 1e-12", threshold <= 1e-12 && straddle);
    c
}

fn golden() -> Criterion {
    let mut c = Criterion::new();
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let cases: [(&str, &[&str]); 4] = [
        ("cop_sweep_classical.csv", &["cop-sweep"]),
        ("cop_sweep_quantum.csv", &["cop-sweep", "--variable", "tau-q"]),
        ("critical_time_linear.csv", &["critical-time"]),
        ("critical_time_linear_squared.csv", &["critical-time", "--protocol", "linear-squared"]),
    ];
    for (file, args) in cases {
        let expected = std::fs::read(dir.join(file)).unwrap();
        let mut identical = true;
        for jobs in ["1", "4", "1"] {
            let out = Command::new(env!("CARGO_BIN_EXE_otto"))
                .args(args)
                .args(["--jobs", jobs])
                .output()
                .unwrap();
            identical &= out.status.success() && out.stdout == expected;
        }
        c.check(format!("{file} byte-identical over three runs"), identical);
    }
    c
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Criterion); 9] = [
        ("1 classical adiabatic optimum", classical_optimum),
        ("2 optimality cubic vs numeric maximizer", cubic_consistency),
        ("3 first-order COP law", first_order_law),
        ("4 Q* sudden and quasistatic limits", qstar_limits),
        ("5 perturbative Q* validity", perturbative_validity),
        ("6 critical time, linear ramp", fig4),
        ("7 critical time, linear omega^2 ramp", fig5),
        ("8 thermodynamic invariants", invariants),
        ("9 CLI golden files", golden),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let c = run();
        println!("{} criterion {name}", verdict(c.passed()));
        for (what, ok) in &c.checks {
            println!("    [{}] {what}", verdict(*ok));
        }
        for line in &c.notes {
            println!("    {line}");
        }
        if !c.passed() {
            failed += 1;
        }
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

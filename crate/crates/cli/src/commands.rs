//! The four subcommands. Each returns its table (or report text) without
//! touching the filesystem; [`crate::run`] handles output.

use std::fmt::Write as _;

use rayon::prelude::*;

use otto_core::adiabaticity::{qstar, qstar_numeric, qstar_perturbative, QStarMode, DEFAULT_TOLERANCE};
use otto_core::breakdown::{
    critical_qstar, critical_time_linear, critical_time_linear_squared, critical_time_numeric, DEFAULT_WIDTH,
};
use otto_core::optimize::{
    cop_adiabatic, cop_cubic, cop_first_order, optimize_adiabatic, EnergyRatioTau, TauRegime, MAX_CUBIC_Y,
};
use otto_core::protocol::{Interpolation, TabulatedProtocol};
use otto_core::special::coth;
use otto_core::thermo::carnot_cop;
use otto_core::{CycleConfig, FrequencyProtocol, PerformanceReport, RampShape, ReservoirPair};

use crate::params::{CopSweepArgs, Layers, ProtocolChoice, Range, ReportArgs, SweepVariable};
use crate::table::{format_number, Cell, Table};
use crate::CliError;

/// `T1` grid of the critical-time figures.
pub const DEFAULT_T1_RANGE: Range = Range {
    start: 0.2,
    stop: 2.0,
    count: 19,
    log: false,
};

/// Hot-side frequencies of the critical-time figures.
pub const DEFAULT_OMEGA2: [f64; 2] = [5.0, 10.0];

pub const DEFAULT_TAU_RANGE: Range = Range {
    start: 0.02,
    stop: 0.98,
    count: 49,
    log: false,
};

pub const DEFAULT_T0_RANGE: Range = Range {
    start: 1e-4,
    stop: 1e3,
    count: 29,
    log: true,
};

/// `beta1 * hbar * omega1` of the quantum COP sweep.
pub const DEFAULT_QUANTUM_X: f64 = 50.0;

pub const DEFAULT_Y: f64 = 0.01;

fn shape_of(choice: &ProtocolChoice) -> Option<RampShape> {
    match choice {
        ProtocolChoice::Linear => Some(RampShape::Linear),
        ProtocolChoice::LinearSquared => Some(RampShape::LinearSquared),
        ProtocolChoice::Sudden => Some(RampShape::Sudden),
        ProtocolChoice::Quasistatic => Some(RampShape::Quasistatic),
        ProtocolChoice::File(_) => None,
    }
}

fn variable(args: &CopSweepArgs, layers: &Layers) -> Result<SweepVariable, CliError> {
    if let Some(v) = args.variable {
        return Ok(v);
    }
    match layers.text("variable") {
        None | Some("tau-cl") => Ok(SweepVariable::TauCl),
        Some("tau-q") => Ok(SweepVariable::TauQ),
        Some(other) => Err(CliError::Invalid(format!(
            "variable {other:?} is not swept by cop-sweep; expected tau-cl or tau-q"
        ))),
    }
}

pub fn cop_sweep(args: &CopSweepArgs) -> Result<Table, CliError> {
    let layers = Layers::new(&args.common)?;
    let flags = &args.common;
    let y = layers.number_or("y", flags.y, DEFAULT_Y)?;
    if !(0.0..=MAX_CUBIC_Y).contains(&y) {
        return Err(CliError::Invalid(format!("y = {y} must lie in [0, {MAX_CUBIC_Y}]")));
    }
    let range = layers.range()?.unwrap_or(DEFAULT_TAU_RANGE);
    if !(range.start > 0.0 && range.stop < 1.0) {
        return Err(CliError::Invalid("the tau range must lie inside (0, 1)".into()));
    }
    let taus = range.points();

    match variable(args, &layers)? {
        SweepVariable::TauCl => {
            let mut table = Table::new(vec!["tau", "cop_adiabatic", "cop_cubic_exact", "cop_first_order", "carnot"]);
            for &t in &taus {
                let tau = EnergyRatioTau::new(t, TauRegime::Classical)?;
                table.push(vec![
                    t.into(),
                    cop_adiabatic(tau).into(),
                    cop_cubic(tau, y)?.into(),
                    cop_first_order(tau, y)?.into(),
                    (1.0 / (1.0 / t - 1.0)).into(),
                ]);
            }
            Ok(table)
        }
        SweepVariable::TauQ => {
            let omega_1 = layers.number_or("omega1", flags.omega1, 1.0)?;
            let hbar = layers.number_or("hbar", flags.hbar, 1.0)?;
            let beta_cold = layers.beta_cold()?.unwrap_or(DEFAULT_QUANTUM_X / (hbar * omega_1));
            let x_cold = beta_cold * hbar * omega_1;
            if !(x_cold > 0.0 && x_cold.is_finite()) {
                return Err(CliError::Invalid("beta1 * hbar * omega1 must be positive".into()));
            }
            let mut table = Table::new(vec![
                "tau",
                "beta2",
                "tau_q",
                "cop_adiabatic",
                "cop_cubic_exact",
                "cop_first_order",
            ]);
            for &t in &taus {
                let beta_hot = 2.0 * t / (hbar * omega_1 * coth(0.5 * x_cold));
                ReservoirPair::new(beta_cold, beta_hot)?;
                let x_hot = beta_hot * hbar * omega_1;
                let tau_q = 0.5 * x_hot + x_hot * (-x_cold).exp();
                let tau = EnergyRatioTau::new(t, TauRegime::Exact)?;
                table.push(vec![
                    t.into(),
                    beta_hot.into(),
                    tau_q.into(),
                    cop_adiabatic(tau).into(),
                    cop_cubic(tau, y)?.into(),
                    cop_first_order(tau, y)?.into(),
                ]);
            }
            Ok(table)
        }
    }
}

pub fn critical_time(layers: &Layers) -> Result<Table, CliError> {
    let flags = layers.flags;
    let shape = match layers.protocol()?.unwrap_or(ProtocolChoice::Linear) {
        ProtocolChoice::Linear => RampShape::Linear,
        ProtocolChoice::LinearSquared => RampShape::LinearSquared,
        other => {
            return Err(CliError::Invalid(format!(
                "critical-time needs a linear or linear-squared protocol, got {other:?}"
            )))
        }
    };
    let omega_1 = layers.number_or("omega1", flags.omega1, 1.0)?;
    let hbar = layers.number_or("hbar", flags.hbar, 1.0)?;
    let beta_hot = layers.beta_hot()?.unwrap_or(1.0);
    let omegas = match layers.number("omega2", flags.omega2)? {
        Some(w) => vec![w],
        None => DEFAULT_OMEGA2.to_vec(),
    };
    let t_cold: Vec<f64> = match (layers.range()?, layers.beta_cold()?) {
        (Some(r), _) => r.points(),
        (None, Some(b)) => vec![1.0 / b],
        (None, None) => DEFAULT_T1_RANGE.points(),
    };
    if t_cold.iter().any(|&t| !(t > 0.0)) {
        return Err(CliError::Invalid("T1 values must be positive".into()));
    }

    let mut points = Vec::new();
    for &w2 in &omegas {
        let cfg = CycleConfig::new(omega_1, w2)?.with_hbar(hbar)?;
        for &t1 in &t_cold {
            points.push((cfg, w2, t1, ReservoirPair::unordered(1.0 / t1, beta_hot)?));
        }
    }
    let rows = points
        .par_iter()
        .map(|&(cfg, w2, t1, res)| -> Result<Vec<Cell>, CliError> {
            let family = |t0| shape.protocol(w2, omega_1, t0);
            let numeric = critical_time_numeric(family, &cfg, &res, DEFAULT_WIDTH)?.point;
            let analytic = match shape {
                RampShape::Linear => critical_time_linear(&cfg, &res)?,
                _ => critical_time_linear_squared(&cfg, &res)?,
            };
            Ok(vec![
                w2.into(),
                t1.into(),
                numeric.t0_critical.into(),
                analytic.t0_critical.into(),
                numeric.diverged.into(),
            ])
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(vec!["omega2", "T1", "t0c_numeric", "t0c_analytic", "diverged"]);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

fn qstar_row(t0: f64, protocol: &FrequencyProtocol) -> Vec<Cell> {
    let perturbative = qstar_perturbative(protocol).map_or(f64::NAN, |q| q.q_star);
    let sudden = protocol.sudden_limit();
    let (q, drift, error) = match protocol.duration() {
        None => match qstar(protocol, QStarMode::ClosedForm, DEFAULT_TOLERANCE) {
            Ok(r) => (r.q_star, 0.0, String::new()),
            Err(e) => (f64::NAN, f64::NAN, e.to_string()),
        },
        Some(_) => match qstar_numeric(protocol, DEFAULT_TOLERANCE) {
            Ok(r) => (r.q_star, r.wronskian_drift, String::new()),
            Err(e) => (f64::NAN, f64::NAN, e.to_string()),
        },
    };
    vec![
        t0.into(),
        q.into(),
        perturbative.into(),
        sudden.into(),
        drift.into(),
        Cell::Text(error),
    ]
}

pub fn qstar_table(layers: &Layers) -> Result<Table, CliError> {
    let flags = layers.flags;
    let w_start = layers.number_or("omega1", flags.omega1, 1.0)?;
    let w_end = layers.number_or("omega2", flags.omega2, 2.0)?;
    let choice = layers.protocol()?.unwrap_or(ProtocolChoice::Linear);
    let range = layers.range()?;
    let t0 = layers.number("t0", flags.t0)?;
    let mut table = Table::new(vec![
        "t0",
        "qstar_numeric",
        "qstar_perturbative",
        "sudden_limit",
        "wronskian_drift",
        "error",
    ]);

    let single = |p: FrequencyProtocol, t0: f64, table: &mut Table| {
        table.push(qstar_row(t0, &p));
    };
    match (&choice, shape_of(&choice)) {
        (ProtocolChoice::File(path), _) => {
            if range.is_some() || t0.is_some() {
                return Err(CliError::Invalid("a tabulated protocol fixes its own duration".into()));
            }
            let tab = TabulatedProtocol::from_csv_path(path, Interpolation::MonotoneCubic)?;
            let duration = tab.duration();
            single(FrequencyProtocol::Tabulated(tab), duration, &mut table);
        }
        (_, Some(RampShape::Quasistatic)) => {
            single(FrequencyProtocol::quasistatic(w_start, w_end)?, f64::INFINITY, &mut table)
        }
        (_, Some(RampShape::Sudden)) => single(FrequencyProtocol::sudden(w_start, w_end)?, 0.0, &mut table),
        (_, Some(shape)) => {
            let times = match (range, t0) {
                (Some(r), _) => r.points(),
                (None, Some(t)) => vec![t],
                (None, None) => DEFAULT_T0_RANGE.points(),
            };
            let protocols = times
                .iter()
                .map(|&t| shape.protocol(w_start, w_end, t))
                .collect::<Result<Vec<_>, _>>()?;
            let rows: Vec<Vec<Cell>> = times
                .par_iter()
                .zip(&protocols)
                .map(|(&t, p)| qstar_row(t, p))
                .collect();
            rows.into_iter().for_each(|r| table.push(r));
        }
        (_, None) => unreachable!("file handled above"),
    }
    Ok(table)
}

pub struct Report {
    pub text: String,
    pub table: Table,
}

pub fn report(args: &ReportArgs) -> Result<Report, CliError> {
    let layers = Layers::new(&args.common)?;
    let flags = &args.common;
    let omega_1 = layers.number_or("omega1", flags.omega1, 1.0)?;
    let omega_2 = layers.number_or("omega2", flags.omega2, 5.0)?;
    let hbar = layers.number_or("hbar", flags.hbar, 1.0)?;
    let t_cycle = layers.number_or("tcycle", flags.tcycle, 1.0)?;
    let beta_cold = layers.beta_cold()?.unwrap_or(2.0);
    let beta_hot = layers.beta_hot()?.unwrap_or(1.0);
    let res = ReservoirPair::new(beta_cold, beta_hot)?;
    let cfg = CycleConfig::new(omega_1, omega_2)?.with_hbar(hbar)?.with_t_cycle(t_cycle)?;

    let explicit = (layers.number("q1", args.q1)?, layers.number("q2", args.q2)?);
    let (q1, q2) = match explicit {
        (Some(a), Some(b)) => (a, b),
        (None, None) => {
            let choice = layers.protocol()?.unwrap_or(ProtocolChoice::Quasistatic);
            let shape = shape_of(&choice).ok_or_else(|| {
                CliError::Invalid("report takes --q1/--q2 or a linear, linear-squared, sudden or quasistatic protocol".into())
            })?;
            let t0 = match (shape, layers.number("t0", flags.t0)?) {
                (RampShape::Linear | RampShape::LinearSquared, None) => {
                    return Err(CliError::Invalid("a timed protocol needs --t0".into()))
                }
                (_, t) => t.unwrap_or(0.0),
            };
            let stroke = |a, b| -> Result<f64, CliError> {
                Ok(qstar(&shape.protocol(a, b, t0)?, QStarMode::Auto, DEFAULT_TOLERANCE)?.q_star)
            };
            (stroke(omega_1, omega_2)?, stroke(omega_2, omega_1)?)
        }
        _ => return Err(CliError::Invalid("give both --q1 and --q2 or neither".into())),
    };

    let r = PerformanceReport::evaluate(&cfg, &res, q1, q2)?;
    let carnot = carnot_cop(&res);
    let q_crit = critical_qstar(&cfg, &res)?;
    let adiabatic = optimize_adiabatic(&cfg, &res).ok();

    let mut text = String::new();
    let mut line = |k: &str, v: String| {
        let _ = writeln!(text, "{k:<22} {v}");
    };
    let n = |v: f64| format_number(v);
    line("omega1", n(omega_1));
    line("omega2", n(omega_2));
    line("beta1", n(beta_cold));
    line("beta2", n(beta_hot));
    line("hbar", n(hbar));
    line("tcycle", n(t_cycle));
    line("q1", n(q1));
    line("q2", n(q2));
    line("E_A", n(r.energies.e_a));
    line("E_B", n(r.energies.e_b));
    line("E_C", n(r.energies.e_c));
    line("E_D", n(r.energies.e_d));
    line("W1", n(r.work_in_1));
    line("W3", n(r.work_in_3));
    line("Q2 (hot)", n(r.heat_hot));
    line("Q4 (cold)", n(r.heat_cold));
    line("cop", n(r.cop));
    line("chi", n(r.chi));
    line("cooling", r.is_cooling.to_string());
    line("carnot cop", n(carnot));
    line("critical q*", n(q_crit));
    if let Some(opt) = adiabatic {
        line("adiabatic omega2*", n(opt.omega_2_opt));
        line("adiabatic cop*", n(opt.cop_opt));
    }

    let mut table = Table::new(vec![
        "omega1", "omega2", "beta1", "beta2", "hbar", "tcycle", "q1", "q2", "e_a", "e_b", "e_c", "e_d", "work_in_1",
        "work_in_3", "heat_hot", "heat_cold", "cop", "chi", "is_cooling", "carnot", "q_star_critical",
    ]);
    table.push(vec![
        omega_1.into(),
        omega_2.into(),
        beta_cold.into(),
        beta_hot.into(),
        hbar.into(),
        t_cycle.into(),
        q1.into(),
        q2.into(),
        r.energies.e_a.into(),
        r.energies.e_b.into(),
        r.energies.e_c.into(),
        r.energies.e_d.into(),
        r.work_in_1.into(),
        r.work_in_3.into(),
        r.heat_hot.into(),
        r.heat_cold.into(),
        r.cop.into(),
        r.chi.into(),
        r.is_cooling.into(),
        carnot.into(),
        q_crit.into(),
    ]);
    Ok(Report { text, table })
}

//! Coefficient of performance at maximum figure of merit.
//!
//! The figure of merit `chi` is maximized over the hot-side frequency
//! `omega_2` with `omega_1`, both temperatures and the cycle time held fixed.
//! Three routes are provided:
//!
//! * the adiabatic closed form, `omega_1 / omega_2 = 1 - sqrt(1 - tau)`;
//! * the weakly nonadiabatic optimality cubic in `r = omega_1 / omega_2`
//!   for `Q*_1 = Q*_2 = 1 + y` with `y` independent of `omega_2`;
//! * a direct scan plus golden-section refinement of the exact `chi`,
//!   with adiabaticity factors supplied by the caller.
//!
//! The first two assume a hot bath with `beta_hot * hbar * omega_2 << 1`;
//! [`Optimum::high_temperature_violated`] flags optima where that fails.

use std::sync::Mutex;

use rayon::prelude::*;

use crate::adiabaticity::{qstar, QStarMode};
use crate::cubic::real_roots;
use crate::error::{domain, Error, Result};
use crate::protocol::RampShape;
use crate::scalar::golden_section_max;
use crate::thermo::{cop, corner_energies, figure_of_merit, CycleConfig, ReservoirPair};

/// Points in the coarse log-spaced scan of [`optimize_numeric`].
pub const SCAN_POINTS: usize = 256;

/// Relative resolution of the optimal `omega_2` in [`optimize_numeric`].
pub const OMEGA_REL_TOL: f64 = 1e-8;

/// `beta_hot * hbar * omega_2` above which the high-temperature forms are suspect.
pub const HIGH_TEMPERATURE_LIMIT: f64 = 0.1;

/// Largest `y` accepted by the cubic route.
pub const MAX_CUBIC_Y: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TauRegime {
    /// High temperature: `tau = beta_hot / beta_cold`.
    Classical,
    /// Cold bath deep in the quantum regime:
    /// `tau = beta_hot hbar omega_1 / 2 + beta_hot hbar omega_1 exp(-beta_cold hbar omega_1)`.
    Quantum,
    /// `tau = beta_hot hbar omega_1 coth(beta_cold hbar omega_1 / 2) / 2`.
    Exact,
}

/// Ratio of the mean oscillator energy in contact with the cold bath to the
/// thermal energy of the hot bath. It fixes the optimal frequency ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyRatioTau {
    tau: f64,
    regime: TauRegime,
}

impl EnergyRatioTau {
    /// Requires `0 < tau < 1`.
    pub fn new(tau: f64, regime: TauRegime) -> Result<Self> {
        if tau > 0.0 && tau < 1.0 {
            Ok(Self { tau, regime })
        } else {
            domain(format!(
                "energy ratio tau = {tau} must lie in (0, 1); the baths are too close at this omega_1"
            ))
        }
    }

    pub fn classical(res: &ReservoirPair) -> Result<Self> {
        Self::new(res.beta_hot() / res.beta_cold(), TauRegime::Classical)
    }

    pub fn quantum(cfg: &CycleConfig, res: &ReservoirPair) -> Result<Self> {
        let x = res.beta_hot() * cfg.hbar() * cfg.omega_1();
        let tau = 0.5 * x + x * (-res.beta_cold() * cfg.hbar() * cfg.omega_1()).exp();
        Self::new(tau, TauRegime::Quantum)
    }

    pub fn value(&self) -> f64 {
        self.tau
    }

    pub fn regime(&self) -> TauRegime {
        self.regime
    }
}

/// `beta_hot * hbar_omega_1 * coth(beta_cold * hbar_omega_1 / 2) / 2` without
/// range checks; zero when `beta_hot` is.
pub fn tau_from_parts(beta_cold: f64, beta_hot: f64, hbar_omega_1: f64) -> f64 {
    0.5 * beta_hot * hbar_omega_1 * crate::special::coth(0.5 * beta_cold * hbar_omega_1)
}

pub fn tau_exact(cfg: &CycleConfig, res: &ReservoirPair) -> Result<EnergyRatioTau> {
    let tau = tau_from_parts(res.beta_cold(), res.beta_hot(), cfg.hbar() * cfg.omega_1());
    EnergyRatioTau::new(tau, TauRegime::Exact)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimumMethod {
    AdiabaticClosedForm,
    CubicRoot,
    FirstOrder,
    NumericScan,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum {
    pub omega_2_opt: f64,
    pub cop_opt: f64,
    pub chi_opt: f64,
    pub method: OptimumMethod,
    pub y_used: Option<f64>,
    /// `beta_hot * hbar * omega_2_opt` exceeds [`HIGH_TEMPERATURE_LIMIT`].
    pub high_temperature_violated: bool,
}

fn high_temperature_violated(cfg: &CycleConfig, res: &ReservoirPair, omega_2: f64) -> bool {
    res.beta_hot() * cfg.hbar() * omega_2 > HIGH_TEMPERATURE_LIMIT
}

/// `sqrt(1 - tau)`
fn root_gap(tau: f64) -> f64 {
    (1.0 - tau).sqrt()
}

/// Optimal `omega_1 / omega_2` for adiabatic strokes: `1 - sqrt(1 - tau)`.
pub fn optimal_ratio_adiabatic(tau: EnergyRatioTau) -> f64 {
    let s = root_gap(tau.tau);
    tau.tau / (1.0 + s)
}

/// `1 / sqrt(1 - tau) - 1`, evaluated without cancellation at small `tau`.
pub fn cop_adiabatic(tau: EnergyRatioTau) -> f64 {
    let s = root_gap(tau.tau);
    tau.tau / (s * (1.0 + s))
}

/// Figure of merit under a hot bath with `beta_hot hbar omega_2 << 1`, as a
/// function of `omega_2`, for `Q*_1 = Q*_2 = 1 + y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonadiabaticChi {
    /// `hbar omega_1 coth(beta_cold hbar omega_1 / 2) / 2`
    cold_energy: f64,
    omega_1: f64,
    beta_hot: f64,
    y: f64,
    t_cycle: f64,
}

impl NonadiabaticChi {
    pub fn y(&self) -> f64 {
        self.y
    }

    /// `(heat_cold, total_work)` in the high-temperature form.
    fn heat_and_work(&self, omega_2: f64) -> Result<(f64, f64)> {
        if !(omega_2 > 0.0 && omega_2.is_finite()) {
            return domain(format!("omega_2 must be positive, got {omega_2}"));
        }
        let u = 1.0 + self.y;
        let thermal_hot = 1.0 / self.beta_hot;
        let heat = self.cold_energy - thermal_hot * self.omega_1 * u / omega_2;
        let work = self.cold_energy * (omega_2 * u / self.omega_1 - 1.0)
            + thermal_hot * (self.omega_1 * u / omega_2 - 1.0);
        Ok((heat, work))
    }

    pub fn eval(&self, omega_2: f64) -> Result<f64> {
        let (heat, work) = self.heat_and_work(omega_2)?;
        Ok(heat * heat / work / self.t_cycle)
    }

    /// Coefficient of performance in the same approximation.
    pub fn cop_at(&self, omega_2: f64) -> Result<f64> {
        let (heat, work) = self.heat_and_work(omega_2)?;
        Ok(heat / work)
    }
}

pub fn chi_nonadiabatic(cfg: &CycleConfig, res: &ReservoirPair, y: f64) -> Result<NonadiabaticChi> {
    if !(y >= 0.0 && y.is_finite()) {
        return domain(format!("nonadiabatic correction y must be non-negative, got {y}"));
    }
    let cold_energy = 0.5 * cfg.hbar() * cfg.omega_1() * cfg.coth_cold(res)?;
    Ok(NonadiabaticChi {
        cold_energy,
        omega_1: cfg.omega_1(),
        beta_hot: res.beta_hot(),
        y,
        t_cycle: cfg.t_cycle(),
    })
}

pub fn optimize_adiabatic(cfg: &CycleConfig, res: &ReservoirPair) -> Result<Optimum> {
    let tau = tau_exact(cfg, res)?;
    let omega_2_opt = cfg.omega_1() / optimal_ratio_adiabatic(tau);
    let chi = chi_nonadiabatic(cfg, res, 0.0)?;
    Ok(Optimum {
        omega_2_opt,
        cop_opt: cop_adiabatic(tau),
        chi_opt: chi.eval(omega_2_opt)?,
        method: OptimumMethod::AdiabaticClosedForm,
        y_used: None,
        high_temperature_violated: high_temperature_violated(cfg, res, omega_2_opt),
    })
}

fn check_cubic_y(y: f64) -> Result<()> {
    if (0.0..=MAX_CUBIC_Y).contains(&y) {
        Ok(())
    } else {
        domain(format!("y = {y} outside [0, {MAX_CUBIC_Y}] for the optimality cubic"))
    }
}

/// Coefficients of the optimality cubic in `r = omega_1 / omega_2`:
/// `r^3 - (2 + tau)/(1 + y) r^2 + 3 tau r - tau^2/(1 + y)`.
pub fn optimality_cubic(tau: f64, y: f64) -> [f64; 4] {
    let u = 1.0 + y;
    [1.0, -(2.0 + tau) / u, 3.0 * tau, -tau * tau / u]
}

/// Whether `r` is a cooling operating point with positive net work.
fn physical_ratio(tau: f64, y: f64, r: f64) -> bool {
    let u = 1.0 + y;
    // work * beta_hot * r
    let work = u * r * r - (1.0 + tau) * r + tau * u;
    r > 0.0 && r < 1.0 && r < tau / u && work > 0.0
}

/// The maximizing root of the optimality cubic.
///
/// The cubic generally has three real roots. Besides the maximum it
/// vanishes near `r = tau` (exactly there at `y = 0`, where heat and work
/// vanish together) and above one. Only roots with positive heat and
/// positive work qualify; among those, the one closest to the adiabatic
/// optimum is returned.
pub fn optimal_ratio_cubic(tau: EnergyRatioTau, y: f64) -> Result<f64> {
    check_cubic_y(y)?;
    let t = tau.tau;
    let [a, b, c, d] = optimality_cubic(t, y);
    let target = optimal_ratio_adiabatic(tau);
    real_roots(a, b, c, d)
        .as_slice()
        .iter()
        .copied()
        .filter(|&r| physical_ratio(t, y, r))
        .min_by(|p, q| (p - target).abs().total_cmp(&(q - target).abs()))
        .ok_or_else(|| {
            Error::RootSelection(format!("tau = {t}, y = {y}: no root with positive heat and work"))
        })
}

/// Coefficient of performance at the cubic optimum, from the
/// high-temperature heat-to-work ratio with `Q*_1 = Q*_2 = 1 + y`.
pub fn cop_cubic(tau: EnergyRatioTau, y: f64) -> Result<f64> {
    let r = optimal_ratio_cubic(tau, y)?;
    let (t, u) = (tau.tau, 1.0 + y);
    Ok((t - u * r) / (t * (u / r - 1.0) + u * r - 1.0))
}

pub fn optimize_cubic(cfg: &CycleConfig, res: &ReservoirPair, y: f64) -> Result<Optimum> {
    let tau = tau_exact(cfg, res)?;
    let r = optimal_ratio_cubic(tau, y)?;
    let omega_2_opt = cfg.omega_1() / r;
    let chi = chi_nonadiabatic(cfg, res, y)?;
    Ok(Optimum {
        omega_2_opt,
        cop_opt: chi.cop_at(omega_2_opt)?,
        chi_opt: chi.eval(omega_2_opt)?,
        method: OptimumMethod::CubicRoot,
        y_used: Some(y),
        high_temperature_violated: high_temperature_violated(cfg, res, omega_2_opt),
    })
}

/// First-order expansion of the nonadiabatic optimum in `y`:
/// `cop_adiabatic(tau) - y (2 tau + sqrt(1 - tau)) / (tau - 1)^2`.
pub fn cop_first_order(tau: EnergyRatioTau, y: f64) -> Result<f64> {
    if !(y >= 0.0 && y.is_finite()) {
        return domain(format!("y must be non-negative, got {y}"));
    }
    let t = tau.tau;
    let slope = (2.0 * t + root_gap(t)) / ((t - 1.0) * (t - 1.0));
    Ok(cop_adiabatic(tau) - slope * y)
}

/// `[omega_1 (1 + 1e-6), omega_1 max(1e3, 10 / (1 - tau))]`.
pub fn default_bracket(cfg: &CycleConfig, res: &ReservoirPair) -> Result<(f64, f64)> {
    let tau = tau_exact(cfg, res)?.value();
    let w1 = cfg.omega_1();
    Ok((w1 * (1.0 + 1e-6), w1 * 1e3f64.max(10.0 / (1.0 - tau))))
}

/// Maximizes the exact figure of merit over `omega_2`.
///
/// `q_provider(omega_2)` returns `(Q*_1, Q*_2)` for the compression and
/// expansion strokes ending/starting at `omega_2`; it is called concurrently.
/// Operating points that do not cool, or need no net work, are excluded.
/// `bracket` defaults to [`default_bracket`].
pub fn optimize_numeric<P>(
    cfg: &CycleConfig,
    res: &ReservoirPair,
    q_provider: P,
    bracket: Option<(f64, f64)>,
) -> Result<Optimum>
where
    P: Fn(f64) -> Result<(f64, f64)> + Sync,
{
    let (lo, hi) = match bracket {
        Some(b) => b,
        None => default_bracket(cfg, res)?,
    };
    if !(lo >= cfg.omega_1() && hi > lo && hi.is_finite()) {
        return domain(format!(
            "omega_2 bracket [{lo}, {hi}] must satisfy omega_1 <= lo < hi"
        ));
    }

    let objective = |omega_2: f64| -> Result<f64> {
        let (q1, q2) = q_provider(omega_2)?;
        let point = cfg.with_omega_2(omega_2)?;
        let energies = corner_energies(&point, res, q1, q2)?;
        let (w1, w3) = energies.stroke_works();
        if energies.heat_cold() <= 0.0 || w1 + w3 <= 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        match figure_of_merit(&point, res, q1, q2) {
            Ok(chi) => Ok(chi),
            Err(Error::DegenerateCycle(_)) => Ok(f64::NEG_INFINITY),
            Err(e) => Err(e),
        }
    };

    let ln_lo = lo.ln();
    let step = (hi.ln() - ln_lo) / (SCAN_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..SCAN_POINTS)
        .map(|i| match i {
            0 => lo,
            i if i == SCAN_POINTS - 1 => hi,
            i => (ln_lo + step * i as f64).exp(),
        })
        .collect();
    let values = grid
        .par_iter()
        .map(|&w| objective(w))
        .collect::<Result<Vec<f64>>>()?;
    let (best, &best_chi) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty grid");
    if !(best_chi > 0.0) {
        return Err(Error::NoMaximum { lo, hi });
    }

    let left = grid[best.saturating_sub(1)];
    let right = grid[(best + 1).min(SCAN_POINTS - 1)];
    let failure = Mutex::new(None);
    let (omega_2_opt, chi_opt) = golden_section_max(
        |w| match objective(w) {
            Ok(v) => v,
            Err(e) => {
                failure.lock().unwrap().get_or_insert(e);
                f64::NEG_INFINITY
            }
        },
        left,
        right,
        OMEGA_REL_TOL,
    );
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    let (omega_2_opt, chi_opt) = if chi_opt >= best_chi {
        (omega_2_opt, chi_opt)
    } else {
        (grid[best], best_chi)
    };
    let (q1, q2) = q_provider(omega_2_opt)?;
    let point = cfg.with_omega_2(omega_2_opt)?;
    Ok(Optimum {
        omega_2_opt,
        cop_opt: cop(&point, res, q1, q2)?,
        chi_opt,
        method: OptimumMethod::NumericScan,
        y_used: None,
        high_temperature_violated: high_temperature_violated(cfg, res, omega_2_opt),
    })
}

/// A `q_provider` for [`optimize_numeric`] that integrates both strokes
/// with fixed durations: compression `omega_1 -> omega_2` and expansion
/// `omega_2 -> omega_1`.
pub fn stroke_qstar_provider(
    shape: RampShape,
    omega_1: f64,
    t_compression: f64,
    t_expansion: f64,
    tolerance: f64,
) -> impl Fn(f64) -> Result<(f64, f64)> + Sync {
    move |omega_2| {
        let up = shape.protocol(omega_1, omega_2, t_compression)?;
        let down = shape.protocol(omega_2, omega_1, t_expansion)?;
        Ok((
            qstar(&up, QStarMode::Auto, tolerance)?.q_star,
            qstar(&down, QStarMode::Auto, tolerance)?.q_star,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::coth;

    fn tau(t: f64) -> EnergyRatioTau {
        EnergyRatioTau::new(t, TauRegime::Exact).unwrap()
    }

    /// Classical-regime reservoirs for `tau_cl` with `beta_hot hbar omega_1 = x`.
    fn classical(tau_cl: f64, x: f64) -> (CycleConfig, ReservoirPair) {
        (
            CycleConfig::new(1.0, 2.0).unwrap(),
            ReservoirPair::new(x / tau_cl, x).unwrap(),
        )
    }

    #[test]
    fn tau_limits() {
        let cfg = CycleConfig::new(1.0, 2.0).unwrap();
        let res = ReservoirPair::new(1e-6, 3e-7).unwrap();
        let t = tau_exact(&cfg, &res).unwrap();
        assert!((t.value() / 0.3 - 1.0).abs() < 1e-10);
        assert_eq!(t.regime(), TauRegime::Exact);

        let res = ReservoirPair::new(50.0, 0.4).unwrap();
        let t = tau_exact(&cfg, &res).unwrap().value();
        assert!((t - 0.2).abs() <= (-50f64).exp());
        let q = EnergyRatioTau::quantum(&cfg, &res).unwrap().value();
        assert!((q - t).abs() < 1e-30 + 1e-15);

        assert_eq!(tau_from_parts(2.0, 0.0, 1.0), 0.0);
        let hot = ReservoirPair::new(1.0, 0.95).unwrap();
        assert!(tau_exact(&cfg, &hot).is_err());
    }

    #[test]
    fn adiabatic_closed_form() {
        assert!((cop_adiabatic(tau(0.75)) - 1.0).abs() < 1e-15);
        let small = cop_adiabatic(tau(1e-9));
        assert!((small / 5e-10 - 1.0).abs() < 1e-8);
        for &t in &[0.1, 0.5, 0.9] {
            let eps_c = 1.0 / (1.0 / t - 1.0);
            assert!((cop_adiabatic(tau(t)) - ((1.0 + eps_c).sqrt() - 1.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn adiabatic_optimum_is_a_local_maximum() {
        let (cfg, res) = classical(0.5, 1e-4);
        let opt = optimize_adiabatic(&cfg, &res).unwrap();
        let chi = chi_nonadiabatic(&cfg, &res, 0.0).unwrap();
        for &d in &[1e-4, 1e-3] {
            let delta = d * opt.omega_2_opt;
            assert!(chi.eval(opt.omega_2_opt + delta).unwrap() <= opt.chi_opt);
            assert!(chi.eval(opt.omega_2_opt - delta).unwrap() <= opt.chi_opt);
        }
        assert!(!opt.high_temperature_violated);
        let t = tau_exact(&cfg, &res).unwrap();
        assert!((opt.omega_2_opt - 1.0 / (1.0 - (1.0 - t.value()).sqrt())).abs() < 1e-12);
    }

    #[test]
    fn nonadiabatic_chi_reduces_to_adiabatic_form() {
        let cfg = CycleConfig::new(1.0, 2.0).unwrap();
        let res = ReservoirPair::new(2.0, 0.05).unwrap();
        let chi = chi_nonadiabatic(&cfg, &res, 0.0).unwrap();
        let a = 0.5 * coth(1.0);
        for &w2 in &[1.5, 3.0, 10.0, 50.0] {
            let eq8 = (1.0 / (w2 - 1.0)) * (a - 1.0 / (0.05 * w2));
            let got = chi.eval(w2).unwrap();
            assert!((got - eq8).abs() <= 1e-12 * eq8.abs(), "{w2}: {got} vs {eq8}");
        }
        assert!(chi.eval(0.0).is_err());
        assert!(chi_nonadiabatic(&cfg, &res, -0.1).is_err());
    }

    #[test]
    fn nonadiabatic_chi_vanishes_with_the_heat() {
        let cfg = CycleConfig::new(1.0, 2.0).unwrap();
        let res = ReservoirPair::new(2.0, 1.0).unwrap();
        let y = 0.01;
        let chi = chi_nonadiabatic(&cfg, &res, y).unwrap();
        // (hbar w1 / 2) coth(beta_1 hbar w1 / 2) = w1 (1 + y) / (beta_2 w2)
        let w2 = (1.0 + y) / (0.5 * coth(1.0));
        assert!(chi.eval(w2).unwrap().abs() < 1e-28);
    }

    #[test]
    fn nonadiabatic_chi_matches_exact_cycle_at_high_temperature() {
        let cfg = CycleConfig::new(1.0, 3.0).unwrap();
        let res = ReservoirPair::new(2.0, 1.0).unwrap();
        let chi = chi_nonadiabatic(&cfg, &res, 0.01).unwrap().eval(3.0).unwrap();
        assert!(chi.is_finite() && chi > 0.0);

        // shrink beta_hot at fixed tau (beta_hot hbar omega_2 -> 0)
        let scale = 1e-4;
        let res = ReservoirPair::new(2.0 * scale, scale).unwrap();
        let cfg = CycleConfig::new(1.0 * scale.sqrt(), 3.0 * scale.sqrt()).unwrap();
        let approx = chi_nonadiabatic(&cfg, &res, 0.01).unwrap().eval(cfg.omega_2()).unwrap();
        let exact = figure_of_merit(&cfg, &res, 1.01, 1.01).unwrap();
        assert!(((approx - exact) / exact).abs() < 1e-6, "{approx} vs {exact}");
    }

    #[test]
    fn cubic_root_at_zero_y_is_adiabatic() {
        for &t in &[0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99] {
            let r = optimal_ratio_cubic(tau(t), 0.0).unwrap();
            let want = 1.0 - (1.0 - t).sqrt();
            assert!((r - want).abs() < 1e-12, "tau {t}: {r} vs {want}");
            let cop = cop_cubic(tau(t), 0.0).unwrap();
            assert!((cop - cop_adiabatic(tau(t))).abs() < 1e-10);
        }
    }

    #[test]
    fn cubic_root_solves_the_cubic() {
        for &t in &[0.05, 0.5, 0.95] {
            for &y in &[0.001, 0.01, 0.05, 0.2] {
                let r = optimal_ratio_cubic(tau(t), y).unwrap();
                let [a, b, c, d] = optimality_cubic(t, y);
                let p = ((a * r + b) * r + c) * r + d;
                assert!(p.abs() < 1e-14, "tau {t} y {y}: residual {p:e}");
            }
        }
        assert!(optimal_ratio_cubic(tau(0.5), 0.3).is_err());
        assert!(optimal_ratio_cubic(tau(0.5), -0.01).is_err());
    }

    #[test]
    fn nonadiabatic_cop_is_below_adiabatic() {
        let ad = cop_adiabatic(tau(0.5));
        assert!((ad - 0.41421356237309503).abs() < 1e-15);
        assert!(cop_cubic(tau(0.5), 0.01).unwrap() < ad);
    }

    #[test]
    fn cubic_optimum_maximizes_high_temperature_chi() {
        let (cfg, res) = classical(0.6, 1e-3);
        let opt = optimize_cubic(&cfg, &res, 0.02).unwrap();
        let chi = chi_nonadiabatic(&cfg, &res, 0.02).unwrap();
        for &d in &[1e-4, 1e-3] {
            let delta = d * opt.omega_2_opt;
            assert!(chi.eval(opt.omega_2_opt + delta).unwrap() <= opt.chi_opt);
            assert!(chi.eval(opt.omega_2_opt - delta).unwrap() <= opt.chi_opt);
        }
        assert_eq!(opt.y_used, Some(0.02));
    }

    #[test]
    fn first_order_values() {
        assert_eq!(cop_first_order(tau(0.3), 0.0).unwrap(), cop_adiabatic(tau(0.3)));
        let v = cop_first_order(tau(0.75), 0.01).unwrap();
        assert!((v - 0.68).abs() < 1e-12);
        assert!(cop_first_order(tau(0.75), -1.0).is_err());
        assert!(EnergyRatioTau::new(1.0, TauRegime::Exact).is_err());
    }

    /// Central-difference slope of the cubic-route optimum in `y` at `y = 0`.
    fn cubic_slope(t: f64) -> f64 {
        let h = 1e-6;
        (cop_cubic(tau(t), h).unwrap() - cop_cubic(tau(t), 0.0).unwrap()) / h
    }

    #[test]
    fn cubic_route_slope_in_y() {
        // d cop*/dy at y = 0 along the exact cubic root, derived symbolically:
        // -(2 tau + sqrt(1 - tau)) / (1 - tau)^2 + 1 / sqrt(1 - tau)
        for &t in &[0.25f64, 0.5, 0.75] {
            let s = (1.0 - t).sqrt();
            let want = -(2.0 * t + s) / (s.powi(4)) + 1.0 / s;
            let got = cubic_slope(t);
            assert!((got - want).abs() < 1e-4 * want.abs(), "tau {t}: {got} vs {want}");
        }
    }

    #[test]
    fn numeric_reproduces_adiabatic_optimum() {
        let (cfg, res) = classical(0.4, 1e-7);
        let closed = optimize_adiabatic(&cfg, &res).unwrap();
        let num = optimize_numeric(&cfg, &res, |_| Ok((1.0, 1.0)), None).unwrap();
        assert!(((num.omega_2_opt - closed.omega_2_opt) / closed.omega_2_opt).abs() < 1e-5);
        assert!(((num.cop_opt - closed.cop_opt) / closed.cop_opt).abs() < 1e-8);
        assert_eq!(num.method, OptimumMethod::NumericScan);
    }

    #[test]
    fn numeric_reproduces_cubic_optimum() {
        let y = 0.01;
        let (cfg, res) = classical(0.4, 1e-7);
        let cubic = optimize_cubic(&cfg, &res, y).unwrap();
        let num = optimize_numeric(&cfg, &res, |_| Ok((1.0 + y, 1.0 + y)), None).unwrap();
        assert!(((num.omega_2_opt - cubic.omega_2_opt) / cubic.omega_2_opt).abs() < 1e-4);
        let point = cfg.with_omega_2(num.omega_2_opt).unwrap();
        for &d in &[1e-4, 1e-3] {
            for sign in [-1.0, 1.0] {
                let w = num.omega_2_opt * (1.0 + sign * d);
                let chi = figure_of_merit(&cfg.with_omega_2(w).unwrap(), &res, 1.0 + y, 1.0 + y).unwrap();
                assert!(chi <= num.chi_opt);
            }
        }
        assert!(figure_of_merit(&point, &res, 1.0 + y, 1.0 + y).unwrap() == num.chi_opt);
    }

    #[test]
    fn numeric_reports_missing_maximum() {
        // at most 1.5 < beta_1 / beta_2 = 3: no cooling anywhere
        let cfg = CycleConfig::new(1.0, 1.2).unwrap();
        let res = ReservoirPair::new(3.0, 1.0).unwrap();
        let err = optimize_numeric(&cfg, &res, |_| Ok((1.0, 1.0)), Some((1.01, 1.5))).unwrap_err();
        assert!(matches!(err, Error::NoMaximum { .. }));
        assert!(optimize_numeric(&cfg, &res, |_| Ok((1.0, 1.0)), Some((0.5, 1.5))).is_err());
    }

    #[test]
    fn numeric_with_integrated_strokes() {
        let cfg = CycleConfig::new(1.0, 2.0).unwrap();
        let res = ReservoirPair::new(4.0, 1.0).unwrap();
        let provider = stroke_qstar_provider(RampShape::Linear, 1.0, 20.0, 20.0, 1e-9);
        let slow = optimize_numeric(&cfg, &res, provider, Some((1.01, 20.0))).unwrap();
        let ideal = optimize_numeric(&cfg, &res, |_| Ok((1.0, 1.0)), Some((1.01, 20.0))).unwrap();
        assert!(slow.chi_opt < ideal.chi_opt);
        assert!(slow.cop_opt > 0.0);
    }

    #[test]
    fn quantum_regime_flag() {
        let cfg = CycleConfig::new(1.0, 2.0).unwrap();
        let res = ReservoirPair::new(50.0, 1.0).unwrap();
        let opt = optimize_adiabatic(&cfg, &res).unwrap();
        assert!(opt.high_temperature_violated);
    }
}

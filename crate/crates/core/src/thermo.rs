//! Energy bookkeeping of the four-stroke Otto refrigeration cycle.
//!
//! The working medium is a harmonic oscillator whose frequency is raised
//! from `omega_1` to `omega_2` on the compression stroke (A → B), thermalized
//! with the hot bath (B → C), lowered back on the expansion stroke (C → D)
//! and thermalized with the cold bath (D → A). The corners A and C are exact
//! thermal states; the nonadiabatic excitation of the two isentropic strokes
//! enters only through the adiabaticity factors `q1` (compression) and `q2`
//! (expansion).

use crate::error::{domain, Error, Result};
use crate::special::{coth, coth_difference};

/// Minimum accepted adiabaticity factor. Values slightly below one come from
/// integrator round-off and are tolerated.
pub(crate) const Q_FLOOR: f64 = 1.0 - 1e-9;

/// Cold and hot baths, stored as inverse temperatures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReservoirPair {
    beta_cold: f64,
    beta_hot: f64,
}

impl ReservoirPair {
    /// Requires `beta_cold > beta_hot > 0`.
    pub fn new(beta_cold: f64, beta_hot: f64) -> Result<Self> {
        if !(beta_hot.is_finite() && beta_hot > 0.0) {
            return domain(format!("hot inverse temperature must be positive, got {beta_hot}"));
        }
        if !(beta_cold.is_finite() && beta_cold > beta_hot) {
            return domain(format!(
                "cold bath must be colder than the hot bath: beta_cold = {beta_cold} must exceed beta_hot = {beta_hot}"
            ));
        }
        Ok(Self { beta_cold, beta_hot })
    }

    /// Any two positive inverse temperatures, without requiring the cold
    /// bath to be colder. The cycle and its breakdown are still defined;
    /// [`carnot_cop`] is `+inf` for such pairs.
    pub fn unordered(beta_cold: f64, beta_hot: f64) -> Result<Self> {
        if beta_cold.is_finite() && beta_cold > 0.0 && beta_hot.is_finite() && beta_hot > 0.0 {
            Ok(Self { beta_cold, beta_hot })
        } else {
            domain(format!(
                "inverse temperatures must be positive, got beta_cold = {beta_cold}, beta_hot = {beta_hot}"
            ))
        }
    }

    pub fn from_temperatures(t_cold: f64, t_hot: f64, k_b: f64) -> Result<Self> {
        if !(t_cold > 0.0 && t_hot > 0.0 && k_b > 0.0) {
            return domain("temperatures and k_B must be positive");
        }
        Self::new(1.0 / (k_b * t_cold), 1.0 / (k_b * t_hot))
    }

    pub fn beta_cold(&self) -> f64 {
        self.beta_cold
    }

    pub fn beta_hot(&self) -> f64 {
        self.beta_hot
    }

    /// `(T_cold, T_hot)` in units where the Boltzmann constant is `k_b`.
    pub fn temperatures(&self, k_b: f64) -> (f64, f64) {
        (1.0 / (k_b * self.beta_cold), 1.0 / (k_b * self.beta_hot))
    }
}

/// How the cycle duration entering the figure of merit is obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CycleTiming {
    /// A fixed cycle time, independent of the stroke protocols.
    Fixed(f64),
    /// Sum of both isentropic stroke durations plus two thermalization times.
    FromStrokes {
        compression: f64,
        expansion: f64,
        thermalization: f64,
    },
}

/// Oscillator frequencies, physical constants and cycle time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleConfig {
    omega_1: f64,
    omega_2: f64,
    hbar: f64,
    k_b: f64,
    timing: CycleTiming,
}

impl CycleConfig {
    /// `hbar = k_B = 1` and a unit cycle time.
    ///
    /// `omega_2 == omega_1` is accepted and gives a cycle with no work.
    pub fn new(omega_1: f64, omega_2: f64) -> Result<Self> {
        check_frequencies(omega_1, omega_2)?;
        Ok(Self {
            omega_1,
            omega_2,
            hbar: 1.0,
            k_b: 1.0,
            timing: CycleTiming::Fixed(1.0),
        })
    }

    pub fn with_hbar(mut self, hbar: f64) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return domain(format!("hbar must be positive, got {hbar}"));
        }
        self.hbar = hbar;
        Ok(self)
    }

    pub fn with_k_b(mut self, k_b: f64) -> Result<Self> {
        if !(k_b.is_finite() && k_b > 0.0) {
            return domain(format!("k_B must be positive, got {k_b}"));
        }
        self.k_b = k_b;
        Ok(self)
    }

    pub fn with_t_cycle(self, t_cycle: f64) -> Result<Self> {
        self.with_timing(CycleTiming::Fixed(t_cycle))
    }

    pub fn with_timing(mut self, timing: CycleTiming) -> Result<Self> {
        let t = timing_total(timing);
        if !(t.is_finite() && t > 0.0) {
            return domain(format!("cycle time must be positive, got {t}"));
        }
        if let CycleTiming::FromStrokes {
            compression,
            expansion,
            thermalization,
        } = timing
        {
            if compression < 0.0 || expansion < 0.0 || thermalization < 0.0 {
                return domain("stroke and thermalization times must be non-negative");
            }
        }
        self.timing = timing;
        Ok(self)
    }

    /// Same constants and timing with a different hot-side frequency.
    pub fn with_omega_2(mut self, omega_2: f64) -> Result<Self> {
        check_frequencies(self.omega_1, omega_2)?;
        self.omega_2 = omega_2;
        Ok(self)
    }

    pub fn omega_1(&self) -> f64 {
        self.omega_1
    }

    pub fn omega_2(&self) -> f64 {
        self.omega_2
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn k_b(&self) -> f64 {
        self.k_b
    }

    pub fn timing(&self) -> CycleTiming {
        self.timing
    }

    pub fn t_cycle(&self) -> f64 {
        timing_total(self.timing)
    }

    /// `coth(beta_cold * hbar * omega_1 / 2)`.
    pub(crate) fn coth_cold(&self, res: &ReservoirPair) -> Result<f64> {
        checked_coth(0.5 * res.beta_cold * self.hbar * self.omega_1)
    }

    /// `coth(beta_hot * hbar * omega_2 / 2)`.
    pub(crate) fn coth_hot(&self, res: &ReservoirPair) -> Result<f64> {
        checked_coth(0.5 * res.beta_hot * self.hbar * self.omega_2)
    }

    /// `coth_cold - coth_hot`, accurate when both round to one.
    pub(crate) fn coth_gap(&self, res: &ReservoirPair) -> f64 {
        coth_difference(
            0.5 * res.beta_cold * self.hbar * self.omega_1,
            0.5 * res.beta_hot * self.hbar * self.omega_2,
        )
    }

    /// `(heat_cold, heat_hot)` written around the coth gap so that the
    /// cooling sign survives deep in the quantum regime.
    fn heats(&self, res: &ReservoirPair, q1: f64, q2: f64) -> Result<(f64, f64)> {
        let c1 = self.coth_cold(res)?;
        let c2 = self.coth_hot(res)?;
        let gap = self.coth_gap(res);
        Ok((
            0.5 * self.hbar * self.omega_1 * (gap - (q2 - 1.0) * c2),
            -0.5 * self.hbar * self.omega_2 * (gap + (q1 - 1.0) * c1),
        ))
    }
}

fn timing_total(timing: CycleTiming) -> f64 {
    match timing {
        CycleTiming::Fixed(t) => t,
        CycleTiming::FromStrokes {
            compression,
            expansion,
            thermalization,
        } => compression + expansion + 2.0 * thermalization,
    }
}

fn check_frequencies(omega_1: f64, omega_2: f64) -> Result<()> {
    if !(omega_1.is_finite() && omega_1 > 0.0) {
        return domain(format!("omega_1 must be positive, got {omega_1}"));
    }
    if !(omega_2.is_finite() && omega_2 >= omega_1) {
        return domain(format!(
            "omega_2 = {omega_2} must be at least omega_1 = {omega_1}"
        ));
    }
    Ok(())
}

pub(crate) fn checked_coth(x: f64) -> Result<f64> {
    let c = coth(x);
    if x > 0.0 && x.is_finite() && c.is_finite() {
        Ok(c)
    } else {
        domain(format!("coth argument must be positive and finite, got {x}"))
    }
}

fn check_q(name: &str, q: f64) -> Result<()> {
    if q.is_finite() && q >= Q_FLOOR {
        Ok(())
    } else {
        domain(format!("adiabaticity factor {name} must be >= 1, got {q}"))
    }
}

/// Mean oscillator energies at the four corners of the cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CornerEnergies {
    /// Thermal with the cold bath at `omega_1`.
    pub e_a: f64,
    /// After compression to `omega_2`.
    pub e_b: f64,
    /// Thermal with the hot bath at `omega_2`.
    pub e_c: f64,
    /// After expansion back to `omega_1`.
    pub e_d: f64,
}

impl CornerEnergies {
    /// Works done on the oscillator during compression and expansion.
    pub fn stroke_works(&self) -> (f64, f64) {
        (self.e_b - self.e_a, self.e_d - self.e_c)
    }

    /// Heat drawn from the cold bath on the cold isochore. Positive when cooling.
    pub fn heat_cold(&self) -> f64 {
        self.e_a - self.e_d
    }

    /// Heat exchanged with the hot bath; non-positive for a refrigerator.
    pub fn heat_hot(&self) -> f64 {
        self.e_c - self.e_b
    }
}

/// Corner energies for adiabaticity factors `q1` (compression) and `q2` (expansion).
pub fn corner_energies(
    cfg: &CycleConfig,
    res: &ReservoirPair,
    q1: f64,
    q2: f64,
) -> Result<CornerEnergies> {
    check_q("q1", q1)?;
    check_q("q2", q2)?;
    let c1 = cfg.coth_cold(res)?;
    let c2 = cfg.coth_hot(res)?;
    let half_1 = 0.5 * cfg.hbar * cfg.omega_1;
    let half_2 = 0.5 * cfg.hbar * cfg.omega_2;
    Ok(CornerEnergies {
        e_a: half_1 * c1,
        e_b: half_2 * q1 * c1,
        e_c: half_2 * c2,
        e_d: half_1 * q2 * c2,
    })
}

/// Net work magnitude below which the cycle counts as degenerate.
const DEGENERATE_WORK: f64 = 1e-300;

/// Coefficient of performance, valid for any frequency modulation.
///
/// Evaluated from the coth gap rather than from the corner energies, so the
/// two routes can be checked against each other and the ratio stays exact
/// when both coth values round to one.
pub fn cop(cfg: &CycleConfig, res: &ReservoirPair, q1: f64, q2: f64) -> Result<f64> {
    check_q("q1", q1)?;
    check_q("q2", q2)?;
    let (heat_cold, heat_hot) = cfg.heats(res, q1, q2)?;
    let work = -heat_hot - heat_cold;
    if !(work.abs() >= DEGENERATE_WORK) {
        return Err(Error::DegenerateCycle(work));
    }
    Ok(heat_cold / work)
}

/// Figure of merit `chi = cop * heat_cold / t_cycle`.
///
/// A negative `heat_cold` is passed through; callers filter on cooling.
pub fn figure_of_merit(cfg: &CycleConfig, res: &ReservoirPair, q1: f64, q2: f64) -> Result<f64> {
    let eps = cop(cfg, res, q1, q2)?;
    let (heat, _) = cfg.heats(res, q1, q2)?;
    Ok(eps * heat / cfg.t_cycle())
}

/// Carnot bound `beta_hot / (beta_cold - beta_hot)`, or `+inf` when the
/// baths agree to within one part in `1e15`.
pub fn carnot_cop(res: &ReservoirPair) -> f64 {
    let gap = res.beta_cold - res.beta_hot;
    if gap / res.beta_cold < 1e-15 {
        f64::INFINITY
    } else {
        res.beta_hot / gap
    }
}

/// Everything known about one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerformanceReport {
    pub energies: CornerEnergies,
    pub work_in_1: f64,
    pub work_in_3: f64,
    pub heat_cold: f64,
    pub heat_hot: f64,
    /// `NaN` for a degenerate cycle with no net work.
    pub cop: f64,
    /// `NaN` whenever `cop` is.
    pub chi: f64,
    pub is_cooling: bool,
}

impl PerformanceReport {
    pub fn evaluate(cfg: &CycleConfig, res: &ReservoirPair, q1: f64, q2: f64) -> Result<Self> {
        let energies = corner_energies(cfg, res, q1, q2)?;
        let (work_in_1, work_in_3) = energies.stroke_works();
        let (heat_cold, heat_hot) = cfg.heats(res, q1, q2)?;
        let cop = match cop(cfg, res, q1, q2) {
            Ok(eps) => eps,
            Err(Error::DegenerateCycle(_)) => f64::NAN,
            Err(e) => return Err(e),
        };
        Ok(Self {
            energies,
            work_in_1,
            work_in_3,
            heat_cold,
            heat_hot,
            cop,
            chi: cop * heat_cold / cfg.t_cycle(),
            is_cooling: heat_cold > 0.0,
        })
    }

    pub fn total_work(&self) -> f64 {
        self.work_in_1 + self.work_in_3
    }

    /// Sum of all four energy exchanges; zero up to round-off.
    pub fn closure_residual(&self) -> f64 {
        self.work_in_1 + self.work_in_3 + self.heat_cold + self.heat_hot
    }
}

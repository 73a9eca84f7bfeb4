//! Finite-time performance of a quantum Otto refrigerator whose working
//! medium is a harmonic oscillator with a driven frequency.
//!
//! The cycle alternates two frequency strokes (`omega_1 -> omega_2` and
//! back) with two thermalizations, against a cold bath at `beta_cold` on the
//! `omega_1` side and a hot bath at `beta_hot` on the `omega_2` side. Finite
//! stroke speed enters only through the adiabaticity factors `Q*_1` and
//! `Q*_2` of the two strokes.
//!
//! * [`thermo`]: corner energies, heats, works, COP and figure of merit.
//! * [`adiabaticity`]: `Q*` of a stroke, closed form, perturbative or integrated.
//! * [`optimize`]: COP at maximum figure of merit.
//! * [`breakdown`]: the minimal stroke duration that still cools.
//!
//! ```
//! use otto_core::{optimize, thermo::{CycleConfig, ReservoirPair}};
//!
//! let cfg = CycleConfig::new(1.0, 2.0)?;
//! let res = ReservoirPair::new(2e-4, 1e-4)?;
//! let opt = optimize::optimize_adiabatic(&cfg, &res)?;
//! assert!((opt.cop_opt - (2f64.sqrt() - 1.0)).abs() < 1e-6);
//! # Ok::<(), otto_core::Error>(())
//! ```

pub mod adiabaticity;
pub mod breakdown;
pub mod cubic;
pub mod error;
pub mod ode;
pub mod optimize;
pub mod protocol;
pub mod scalar;
pub mod special;
pub mod thermo;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/cycle.md")]
    mod cycle {}
    #[doc = include_str!("../../../book/src/adiabaticity.md")]
    mod adiabaticity {}
    #[doc = include_str!("../../../book/src/optimization.md")]
    mod optimization {}
    #[doc = include_str!("../../../book/src/breakdown.md")]
    mod breakdown {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

pub use error::{Error, Result};
pub use protocol::{FrequencyProtocol, ProtocolKind, RampShape};
pub use thermo::{CycleConfig, CycleTiming, PerformanceReport, ReservoirPair};

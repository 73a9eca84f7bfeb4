use crate::protocol::ProtocolKind;

/// Errors raised by the thermodynamic, adiabaticity and optimization routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An input lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{operation} does not accept a {found:?} protocol")]
    KindMismatch {
        operation: &'static str,
        found: ProtocolKind,
    },

    /// The net work per cycle vanishes, so the coefficient of performance is undefined.
    #[error("degenerate cycle: total work {0:e} is too small to define a coefficient of performance")]
    DegenerateCycle(f64),

    #[error("integrator failure: {0}")]
    Integrator(String),

    #[error("no admissible root of the optimality cubic: {0}")]
    RootSelection(String),

    /// The figure of merit is non-positive over the whole search interval.
    #[error("no cooling maximum of the figure of merit in [{lo:e}, {hi:e}]")]
    NoMaximum { lo: f64, hi: f64 },

    #[error("critical driving time not bracketed for t0 up to {0:e}")]
    BracketFailure(f64),

    #[error("invalid frequency table: {0}")]
    Table(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

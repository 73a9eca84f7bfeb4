//! Frequency protocols `omega(t)` for a single isentropic stroke.

use std::io::Read;
use std::path::Path;

use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProtocolKind {
    Quasistatic,
    Sudden,
    LinearOmega,
    LinearOmegaSquared,
    Tabulated,
}

/// Interpolation between the samples of a [`TabulatedProtocol`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Interpolation {
    /// Fritsch–Carlson monotone cubic Hermite; C¹ and never overshoots the samples.
    #[default]
    MonotoneCubic,
    Linear,
}

/// A frequency path given by `(time, omega)` samples.
///
/// Time is measured from the first sample, so the stroke lasts
/// `t_last - t_first`.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedProtocol {
    times: Vec<f64>,
    omegas: Vec<f64>,
    slopes: Vec<f64>,
    interpolation: Interpolation,
}

impl TabulatedProtocol {
    pub fn new(samples: &[(f64, f64)], interpolation: Interpolation) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Table("at least two samples are required".into()));
        }
        for (i, &(t, w)) in samples.iter().enumerate() {
            if !t.is_finite() || !(w.is_finite() && w > 0.0) {
                return Err(Error::Table(format!(
                    "row {i}: need finite time and positive frequency, got ({t}, {w})"
                )));
            }
        }
        for (i, pair) in samples.windows(2).enumerate() {
            if pair[1].0 <= pair[0].0 {
                return Err(Error::Table(format!(
                    "time must be strictly increasing: row {} has t = {} after t = {}",
                    i + 1,
                    pair[1].0,
                    pair[0].0
                )));
            }
        }
        let t0 = samples[0].0;
        let times: Vec<f64> = samples.iter().map(|s| s.0 - t0).collect();
        let omegas: Vec<f64> = samples.iter().map(|s| s.1).collect();
        let slopes = fritsch_carlson_slopes(&times, &omegas);
        Ok(Self {
            times,
            omegas,
            slopes,
            interpolation,
        })
    }

    /// Reads two-column `time,frequency` CSV. A non-numeric first row is
    /// treated as a header.
    pub fn from_csv_reader<R: Read>(reader: R, interpolation: Interpolation) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(reader);
        let mut samples = Vec::new();
        for (i, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| Error::Table(e.to_string()))?;
            if record.len() != 2 {
                return Err(Error::Table(format!(
                    "row {i}: expected 2 columns, found {}",
                    record.len()
                )));
            }
            let parsed = (record[0].parse::<f64>(), record[1].parse::<f64>());
            match parsed {
                (Ok(t), Ok(w)) => samples.push((t, w)),
                _ if i == 0 => continue,
                _ => {
                    return Err(Error::Table(format!(
                        "row {i}: cannot parse {:?} as numbers",
                        record
                    )))
                }
            }
        }
        Self::new(&samples, interpolation)
    }

    pub fn from_csv_path(path: impl AsRef<Path>, interpolation: Interpolation) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path)
            .map_err(|e| Error::Table(format!("{}: {e}", path.display())))?;
        Self::from_csv_reader(file, interpolation)
    }

    pub fn duration(&self) -> f64 {
        *self.times.last().unwrap()
    }

    pub fn omega_start(&self) -> f64 {
        self.omegas[0]
    }

    pub fn omega_end(&self) -> f64 {
        *self.omegas.last().unwrap()
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    /// Frequency at time `t`, clamped to the table.
    pub fn omega(&self, t: f64) -> f64 {
        let n = self.times.len();
        if t <= 0.0 {
            return self.omegas[0];
        }
        if t >= self.times[n - 1] {
            return self.omegas[n - 1];
        }
        // index of the interval [times[k], times[k + 1]] containing t
        let k = self.times.partition_point(|&tk| tk <= t) - 1;
        let h = self.times[k + 1] - self.times[k];
        let s = (t - self.times[k]) / h;
        let (w0, w1) = (self.omegas[k], self.omegas[k + 1]);
        match self.interpolation {
            Interpolation::Linear => w0 + s * (w1 - w0),
            Interpolation::MonotoneCubic => {
                let (m0, m1) = (self.slopes[k], self.slopes[k + 1]);
                let s2 = s * s;
                let s3 = s2 * s;
                let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
                let h10 = s3 - 2.0 * s2 + s;
                let h01 = -2.0 * s3 + 3.0 * s2;
                let h11 = s3 - s2;
                h00 * w0 + h10 * h * m0 + h01 * w1 + h11 * h * m1
            }
        }
    }
}

fn fritsch_carlson_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let secants: Vec<f64> = (0..n - 1)
        .map(|k| (y[k + 1] - y[k]) / (x[k + 1] - x[k]))
        .collect();
    let mut m = vec![0.0; n];
    m[0] = secants[0];
    m[n - 1] = secants[n - 2];
    for k in 1..n - 1 {
        m[k] = if secants[k - 1] * secants[k] <= 0.0 {
            0.0
        } else {
            0.5 * (secants[k - 1] + secants[k])
        };
    }
    for k in 0..n - 1 {
        if secants[k] == 0.0 {
            m[k] = 0.0;
            m[k + 1] = 0.0;
            continue;
        }
        let a = m[k] / secants[k];
        let b = m[k + 1] / secants[k];
        let r = a * a + b * b;
        if r > 9.0 {
            let t = 3.0 / r.sqrt();
            m[k] = t * a * secants[k];
            m[k + 1] = t * b * secants[k];
        }
    }
    m
}

/// How the oscillator frequency changes over one stroke.
#[derive(Debug, Clone, PartialEq)]
pub enum FrequencyProtocol {
    /// Infinitely slow change.
    Quasistatic { omega_start: f64, omega_end: f64 },
    /// Instantaneous switch.
    Sudden { omega_start: f64, omega_end: f64 },
    /// `omega(t)` linear in time over `duration`.
    LinearOmega {
        omega_start: f64,
        omega_end: f64,
        duration: f64,
    },
    /// `omega(t)^2` linear in time over `duration`.
    LinearOmegaSquared {
        omega_start: f64,
        omega_end: f64,
        duration: f64,
    },
    Tabulated(TabulatedProtocol),
}

fn check_endpoints(omega_start: f64, omega_end: f64) -> Result<()> {
    if omega_start.is_finite() && omega_start > 0.0 && omega_end.is_finite() && omega_end > 0.0 {
        Ok(())
    } else {
        domain(format!(
            "frequencies must be positive, got {omega_start} -> {omega_end}"
        ))
    }
}

fn check_duration(duration: f64) -> Result<()> {
    if duration.is_finite() && duration > 0.0 {
        Ok(())
    } else {
        domain(format!("stroke duration must be positive and finite, got {duration}"))
    }
}

impl FrequencyProtocol {
    pub fn quasistatic(omega_start: f64, omega_end: f64) -> Result<Self> {
        check_endpoints(omega_start, omega_end)?;
        Ok(Self::Quasistatic {
            omega_start,
            omega_end,
        })
    }

    pub fn sudden(omega_start: f64, omega_end: f64) -> Result<Self> {
        check_endpoints(omega_start, omega_end)?;
        Ok(Self::Sudden {
            omega_start,
            omega_end,
        })
    }

    pub fn linear(omega_start: f64, omega_end: f64, duration: f64) -> Result<Self> {
        check_endpoints(omega_start, omega_end)?;
        check_duration(duration)?;
        Ok(Self::LinearOmega {
            omega_start,
            omega_end,
            duration,
        })
    }

    pub fn linear_squared(omega_start: f64, omega_end: f64, duration: f64) -> Result<Self> {
        check_endpoints(omega_start, omega_end)?;
        check_duration(duration)?;
        Ok(Self::LinearOmegaSquared {
            omega_start,
            omega_end,
            duration,
        })
    }

    pub fn kind(&self) -> ProtocolKind {
        match self {
            Self::Quasistatic { .. } => ProtocolKind::Quasistatic,
            Self::Sudden { .. } => ProtocolKind::Sudden,
            Self::LinearOmega { .. } => ProtocolKind::LinearOmega,
            Self::LinearOmegaSquared { .. } => ProtocolKind::LinearOmegaSquared,
            Self::Tabulated(_) => ProtocolKind::Tabulated,
        }
    }

    pub fn omega_start(&self) -> f64 {
        match self {
            Self::Quasistatic { omega_start, .. }
            | Self::Sudden { omega_start, .. }
            | Self::LinearOmega { omega_start, .. }
            | Self::LinearOmegaSquared { omega_start, .. } => *omega_start,
            Self::Tabulated(table) => table.omega_start(),
        }
    }

    pub fn omega_end(&self) -> f64 {
        match self {
            Self::Quasistatic { omega_end, .. }
            | Self::Sudden { omega_end, .. }
            | Self::LinearOmega { omega_end, .. }
            | Self::LinearOmegaSquared { omega_end, .. } => *omega_end,
            Self::Tabulated(table) => table.omega_end(),
        }
    }

    /// Stroke duration; `None` for the quasistatic and sudden idealizations.
    pub fn duration(&self) -> Option<f64> {
        match self {
            Self::Quasistatic { .. } | Self::Sudden { .. } => None,
            Self::LinearOmega { duration, .. } | Self::LinearOmegaSquared { duration, .. } => {
                Some(*duration)
            }
            Self::Tabulated(table) => Some(table.duration()),
        }
    }

    /// `omega(t)^2` on `[0, duration]`, the coefficient of the oscillator equation.
    ///
    /// Returns `None` for protocols without a time parametrization.
    pub fn omega_squared_at(&self, t: f64) -> Option<f64> {
        match self {
            Self::Quasistatic { .. } | Self::Sudden { .. } => None,
            Self::LinearOmega {
                omega_start,
                omega_end,
                duration,
            } => {
                let w = omega_start + (omega_end - omega_start) * (t / duration);
                Some(w * w)
            }
            Self::LinearOmegaSquared {
                omega_start,
                omega_end,
                duration,
            } => {
                let (a, b) = (omega_start * omega_start, omega_end * omega_end);
                Some(a + (b - a) * (t / duration))
            }
            Self::Tabulated(table) => {
                let w = table.omega(t);
                Some(w * w)
            }
        }
    }

    /// `Q*` of an instantaneous switch between the endpoint frequencies.
    pub fn sudden_limit(&self) -> f64 {
        sudden_qstar(self.omega_start(), self.omega_end())
    }
}

/// Shape of a stroke protocol, independent of its endpoints and duration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RampShape {
    Quasistatic,
    Sudden,
    Linear,
    LinearSquared,
}

impl RampShape {
    /// Builds the protocol; `duration` is ignored for the idealized shapes.
    pub fn protocol(self, omega_start: f64, omega_end: f64, duration: f64) -> Result<FrequencyProtocol> {
        match self {
            RampShape::Quasistatic => FrequencyProtocol::quasistatic(omega_start, omega_end),
            RampShape::Sudden => FrequencyProtocol::sudden(omega_start, omega_end),
            RampShape::Linear => FrequencyProtocol::linear(omega_start, omega_end, duration),
            RampShape::LinearSquared => FrequencyProtocol::linear_squared(omega_start, omega_end, duration),
        }
    }
}

/// `(a^2 + b^2) / (2ab)`.
pub fn sudden_qstar(omega_start: f64, omega_end: f64) -> f64 {
    (omega_start * omega_start + omega_end * omega_end) / (2.0 * omega_start * omega_end)
}

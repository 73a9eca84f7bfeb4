//! Adaptive Dormand–Prince 5(4) integrator for small fixed-size systems.
//!
//! Coefficients follow Hairer, Nørsett & Wanner, *Solving Ordinary
//! Differential Equations I*, Table 5.2. The fifth-order solution is
//! propagated (local extrapolation); the embedded fourth-order solution
//! only drives step control.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// b - b_hat
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rel: 1e-10, abs: 1e-12 }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct DormandPrince {
    pub tolerances: Tolerances,
    pub max_steps: usize,
}

impl Default for DormandPrince {
    fn default() -> Self {
        Self {
            tolerances: Tolerances::default(),
            max_steps: 10_000_000,
        }
    }
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        *o += h * acc;
    }
    out
}

impl DormandPrince {
    pub fn new(tolerances: Tolerances) -> Self {
        Self {
            tolerances,
            ..Self::default()
        }
    }

    fn error_norm<const N: usize>(&self, err: &[f64; N], y: &[f64; N], y_new: &[f64; N]) -> f64 {
        let sum: f64 = (0..N)
            .map(|i| {
                let scale = self.tolerances.abs + self.tolerances.rel * y[i].abs().max(y_new[i].abs());
                (err[i] / scale).powi(2)
            })
            .sum();
        (sum / N as f64).sqrt()
    }

    fn initial_step<const N: usize, F>(&self, rhs: &mut F, t: f64, y: &[f64; N], f0: &[f64; N], span: f64) -> f64
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
    {
        let weight = |v: &[f64; N]| {
            let s: f64 = (0..N)
                .map(|i| (v[i] / (self.tolerances.abs + self.tolerances.rel * y[i].abs())).powi(2))
                .sum();
            (s / N as f64).sqrt()
        };
        let d0 = weight(y);
        let d1 = weight(f0);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let h0 = h0.min(span);
        let y1 = axpy(y, h0, &[(1.0, f0)]);
        let f1 = rhs(t + h0, &y1);
        let diff: [f64; N] = std::array::from_fn(|i| f1[i] - f0[i]);
        let d2 = weight(&diff) / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        (100.0 * h0).min(h1).min(span)
    }

    /// Integrates `y' = rhs(t, y)` from `t_start` to `t_end > t_start`.
    ///
    /// `on_step` sees the initial state and every accepted step.
    pub fn integrate<const N: usize, F, O>(
        &self,
        mut rhs: F,
        t_start: f64,
        t_end: f64,
        y0: [f64; N],
        mut on_step: O,
    ) -> Result<([f64; N], Stats)>
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
        O: FnMut(f64, &[f64; N]),
    {
        let span = t_end - t_start;
        if !(span > 0.0 && span.is_finite()) {
            return Err(Error::Integrator(format!(
                "invalid interval [{t_start}, {t_end}]"
            )));
        }
        let mut stats = Stats::default();
        let mut t = t_start;
        let mut y = y0;
        on_step(t, &y);
        let mut k1 = rhs(t, &y);
        stats.evaluations += 1;
        let mut h = self.initial_step(&mut rhs, t, &y, &k1, span);
        stats.evaluations += 1;
        let mut last_rejected = false;

        while t < t_end {
            if stats.accepted + stats.rejected >= self.max_steps {
                return Err(Error::Integrator(format!(
                    "step budget of {} exhausted at t = {t}",
                    self.max_steps
                )));
            }
            let remaining = t_end - t;
            let finishing = 1.01 * h >= remaining;
            let h_step = if finishing { remaining } else { h };
            if h_step <= 1e-14 * t.abs().max(span) {
                return Err(Error::Integrator(format!(
                    "step size {h_step:e} underflow at t = {t}"
                )));
            }

            let k2 = rhs(t + C2 * h_step, &axpy(&y, h_step, &[(A21, &k1)]));
            let k3 = rhs(t + C3 * h_step, &axpy(&y, h_step, &[(A31, &k1), (A32, &k2)]));
            let k4 = rhs(
                t + C4 * h_step,
                &axpy(&y, h_step, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
            );
            let k5 = rhs(
                t + C5 * h_step,
                &axpy(&y, h_step, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = rhs(
                t + h_step,
                &axpy(
                    &y,
                    h_step,
                    &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                ),
            );
            let y_new = axpy(
                &y,
                h_step,
                &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
            );
            let t_new = if finishing { t_end } else { t + h_step };
            let k7 = rhs(t_new, &y_new);
            stats.evaluations += 6;

            let err: [f64; N] = std::array::from_fn(|i| {
                h_step
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i])
            });
            let norm = self.error_norm(&err, &y, &y_new);
            if !norm.is_finite() {
                return Err(Error::Integrator(format!("non-finite state near t = {t}")));
            }

            if norm <= 1.0 {
                stats.accepted += 1;
                t = t_new;
                y = y_new;
                k1 = k7;
                on_step(t, &y);
                let fac = if norm == 0.0 {
                    FAC_MAX
                } else {
                    (SAFETY * norm.powf(-0.2)).clamp(FAC_MIN, FAC_MAX)
                };
                let fac = if last_rejected { fac.min(1.0) } else { fac };
                h = h_step * fac;
                last_rejected = false;
            } else {
                stats.rejected += 1;
                h = h_step * (SAFETY * norm.powf(-0.2)).max(FAC_MIN);
                last_rejected = true;
            }
        }
        Ok((y, stats))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let solver = DormandPrince::new(Tolerances { rel: 1e-12, abs: 1e-14 });
        let (y, stats) = solver
            .integrate(|_, y: &[f64; 1]| [-y[0]], 0.0, 5.0, [1.0], |_, _| {})
            .unwrap();
        assert!((y[0] - (-5.0f64).exp()).abs() < 1e-12);
        assert!(stats.accepted > 0);
    }

    #[test]
    fn harmonic_oscillator_conserves_energy() {
        let solver = DormandPrince::default();
        let mut max_drift: f64 = 0.0;
        let (y, _) = solver
            .integrate(
                |_, y: &[f64; 2]| [y[1], -4.0 * y[0]],
                0.0,
                50.0,
                [1.0, 0.0],
                |_, y| {
                    let e = 4.0 * y[0] * y[0] + y[1] * y[1];
                    max_drift = max_drift.max((e - 4.0).abs());
                },
            )
            .unwrap();
        assert!((y[0] - 100.0f64.cos()).abs() < 1e-7);
        assert!(max_drift < 1e-8);
    }

    #[test]
    fn lands_exactly_on_end_time() {
        let solver = DormandPrince::new(Tolerances { rel: 1e-4, abs: 1e-6 });
        let mut last_t = 0.0;
        solver
            .integrate(|t, _: &[f64; 1]| [t.cos()], 0.0, 3.0, [0.0], |t, _| last_t = t)
            .unwrap();
        assert_eq!(last_t, 3.0);
    }

    #[test]
    fn rejects_empty_interval() {
        let solver = DormandPrince::default();
        assert!(solver
            .integrate(|_, y: &[f64; 1]| [y[0]], 1.0, 1.0, [1.0], |_, _| {})
            .is_err());
    }

    #[test]
    fn exhausted_budget_is_reported() {
        let solver = DormandPrince {
            max_steps: 3,
            ..DormandPrince::default()
        };
        let err = solver
            .integrate(|_, y: &[f64; 2]| [y[1], -y[0]], 0.0, 100.0, [1.0, 0.0], |_, _| {})
            .unwrap_err();
        assert!(matches!(err, Error::Integrator(_)));
    }
}

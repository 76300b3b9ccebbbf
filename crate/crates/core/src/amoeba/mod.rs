//! Numerical side: amoeba samples of `f_t = 0`, their distance to `Π_v`,
//! limit-fiber residuals and torus periods.
//!
//! Everything runs in `(x, θ)` coordinates with `w_j = exp(x_j log t + iθ_j)`,
//! and polynomial terms are only ever formed as ratios to the dominant one.

pub mod fiber;
pub mod period;
pub mod roots;
pub mod sample;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use fiber::{limit_fiber_check, FiberProbe, FiberResiduals, Window};
pub use period::{period_integral, PeriodEstimate, PeriodMode};
pub use sample::{convergence_study, sample_amoeba, AmoebaGrid, ConvergenceRow, ConvergenceTable, SampleCloud, SamplePoint};

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "TROPICAL_PANTS_THREADS";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogMapParams {
    t: f64,
}

impl LogMapParams {
    pub fn new(t: f64) -> Result<Self> {
        if !(t > 1.0) || !t.is_finite() {
            return Err(Error::domain(format!("t must be a finite number > 1, got {t}")));
        }
        Ok(LogMapParams { t })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn ln_t(&self) -> f64 {
        self.t.ln()
    }
}

/// `Log_t(w) = (log|w₁|, log|w₂|, log|w₃|) / log t`.
pub fn log_t(w: &[Complex64; 3], params: &LogMapParams) -> Result<[f64; 3]> {
    if w.iter().any(|z| z.norm() == 0.0) {
        return Err(Error::domain("Log_t is undefined at a zero coordinate"));
    }
    Ok(w.map(|z| z.norm().ln() / params.ln_t()))
}

/// Thread pool sized by [`THREADS_ENV`] when set.
pub(crate) fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        builder = builder.num_threads(n.max(1));
    }
    builder.build().map_err(|e| Error::Numeric(format!("thread pool: {e}")))
}

/// `n` evenly spaced values from `lo` to `hi` inclusive.
pub(crate) fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![0.5 * (lo + hi)],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// `2πk/n` for `k < n`.
pub(crate) fn angles(n: usize) -> Vec<f64> {
    (0..n).map(|k| std::f64::consts::TAU * k as f64 / n as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn log_map_examples() {
        let one = Complex64::new(1.0, 0.0);
        let p = LogMapParams::new(5.0).unwrap();
        assert_eq!(log_t(&[one; 3], &p).unwrap(), [0.0; 3]);
        let p = LogMapParams::new(10.0).unwrap();
        let x = log_t(&[10.0 * one, 100.0 * one, 1000.0 * one], &p).unwrap();
        assert!((0..3).all(|i| (x[i] - (i + 1) as f64).abs() < 1e-14));
        let p = LogMapParams::new(E).unwrap();
        let x = log_t(&[E * E * one, E * one, one / E], &p).unwrap();
        assert!((x[0] - 2.0).abs() < 1e-14 && (x[1] - 1.0).abs() < 1e-14 && (x[2] + 1.0).abs() < 1e-14);
        assert!(log_t(&[one, Complex64::new(0.0, 0.0), one], &p).is_err());
        assert!(LogMapParams::new(1.0).is_err());
    }
}

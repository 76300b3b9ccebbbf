//! Aberth–Ehrlich iteration on polynomials whose coefficients span far
//! more than the `f64` exponent range.
//!
//! Coefficients are stored as `log|c_k|` and `arg c_k`, and roots as
//! `ζ = log z`. Every ratio the iteration needs is a quotient of two sums
//! with the same dominant term factored out, so nothing overflows.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_ITERATIONS: usize = 200;
pub const TOLERANCE: f64 = 1e-12;

/// `Σ exp(log_abs[k] + i·arg[k]) z^k`; a zero coefficient has
/// `log_abs = −∞`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogPolynomial {
    pub log_abs: Vec<f64>,
    pub arg: Vec<f64>,
}

impl LogPolynomial {
    pub fn from_coefficients(c: &[Complex64]) -> Self {
        LogPolynomial {
            log_abs: c.iter().map(|z| if *z == Complex64::new(0.0, 0.0) { f64::NEG_INFINITY } else { z.norm().ln() }).collect(),
            arg: c.iter().map(|z| z.arg()).collect(),
        }
    }

    /// Lowest and highest indices with a nonzero coefficient.
    fn support(&self) -> Option<(usize, usize)> {
        let lo = self.log_abs.iter().position(|l| l.is_finite())?;
        let hi = self.log_abs.iter().rposition(|l| l.is_finite())?;
        Some((lo, hi))
    }

    /// `p(z) / (z p'(z))` at `z = e^ζ`, computed with the dominant term
    /// factored out.
    pub fn newton_ratio(&self, zeta: Complex64) -> Complex64 {
        let (p, dp) = self.scaled_value(zeta);
        p / dp
    }

    /// `(p, z p')` at `z = e^ζ`, both divided by the largest term.
    pub fn scaled_value(&self, zeta: Complex64) -> (Complex64, Complex64) {
        let e: Vec<f64> =
            self.log_abs.iter().enumerate().map(|(k, l)| l + k as f64 * zeta.re).collect();
        let top = e.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for (k, ek) in e.iter().enumerate() {
            if !ek.is_finite() {
                continue;
            }
            let term = Complex64::from_polar((ek - top).exp(), self.arg[k] + k as f64 * zeta.im);
            p += term;
            dp += term * k as f64;
        }
        (p, dp)
    }

    /// Upper convex hull of `(k, log|c_k|)` over the nonzero coefficients.
    fn newton_polygon(&self, lo: usize, hi: usize) -> Vec<usize> {
        let mut hull: Vec<usize> = Vec::new();
        for k in lo..=hi {
            if !self.log_abs[k].is_finite() {
                continue;
            }
            while hull.len() >= 2 {
                let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                let cross = (b - a) as f64 * (self.log_abs[k] - self.log_abs[a])
                    - (k - a) as f64 * (self.log_abs[b] - self.log_abs[a]);
                if cross >= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(k);
        }
        hull
    }
}

/// Result of one root solve.
#[derive(Clone, Debug, PartialEq)]
pub struct LogRoots {
    /// `log z` of every nonzero root, with multiplicity.
    pub zetas: Vec<Complex64>,
    /// Multiplicity of the root at zero.
    pub zero_roots: usize,
    pub iterations: usize,
    pub converged: bool,
}

/// All roots of `p` in log coordinates.
pub fn aberth_log(p: &LogPolynomial) -> Result<LogRoots> {
    aberth_log_with(p, MAX_ITERATIONS, TOLERANCE)
}

pub fn aberth_log_with(p: &LogPolynomial, max_iterations: usize, tolerance: f64) -> Result<LogRoots> {
    if p.log_abs.len() != p.arg.len() || p.log_abs.iter().chain(&p.arg).any(|x| x.is_nan()) {
        return Err(Error::Numeric("malformed polynomial coefficients".into()));
    }
    let Some((lo, hi)) = p.support() else {
        return Err(Error::domain("zero polynomial has no isolated roots"));
    };
    let n = hi - lo;
    if n == 0 {
        return Ok(LogRoots { zetas: vec![], zero_roots: lo, iterations: 0, converged: true });
    }
    let q = LogPolynomial { log_abs: p.log_abs[lo..=hi].to_vec(), arg: p.arg[lo..=hi].to_vec() };

    let hull = q.newton_polygon(0, n);
    let mut zetas = Vec::with_capacity(n);
    for (s, w) in hull.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        let count = b - a;
        let slope = (q.log_abs[b] - q.log_abs[a]) / count as f64;
        for j in 0..count {
            let angle = TAU * j as f64 / count as f64 + 0.4 + 0.7 * s as f64;
            zetas.push(Complex64::new(-slope, angle));
        }
    }

    let mut done = vec![false; n];
    let mut iterations = 0;
    while iterations < max_iterations && done.iter().any(|d| !d) {
        iterations += 1;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let ratio = q.newton_ratio(zetas[i]);
            let mut sum = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j == i {
                    continue;
                }
                let diff = zetas[j] - zetas[i];
                if diff.re > 700.0 {
                    continue;
                }
                sum += 1.0 / (1.0 - diff.exp());
            }
            let step = ratio / (1.0 - ratio * sum);
            if !step.re.is_finite() || !step.im.is_finite() {
                return Err(Error::Numeric("non-finite Aberth correction".into()));
            }
            zetas[i] += (1.0 - step).ln();
            if step.norm() < tolerance {
                done[i] = true;
            }
        }
    }
    let converged = done.iter().all(|d| *d);
    for z in &mut zetas {
        z.im = z.im.rem_euclid(TAU);
    }
    Ok(LogRoots { zetas, zero_roots: lo, iterations, converged })
}

/// Roots of an ordinary polynomial with ascending coefficients.
pub fn aberth(coefficients: &[Complex64]) -> Result<Vec<Complex64>> {
    let r = aberth_log(&LogPolynomial::from_coefficients(coefficients))?;
    if !r.converged {
        return Err(Error::Numeric(format!("no convergence after {} iterations", r.iterations)));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); r.zero_roots];
    out.extend(r.zetas.iter().map(|z| z.exp()));
    Ok(out)
}

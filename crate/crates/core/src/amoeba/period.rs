//! The period of the residue form `Ω_m` over the torus `T_{m,m′}`.
//!
//! At fixed `(x₁, x₂)` inside the probe, the torus is swept by `(θ₁, θ₂)`
//! with `w₃` the root of `f_t` tracked continuously from the limit
//! prediction. The integrand is `−1/D` with
//! `D = Σ m₃″ t^{l_{m″}(x)−l_m(x)} e^{i⟨m″−m,θ⟩}`, which tends to
//! `1/(m₃′−m₃)` in the limit.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde_json::{json, Value};

use super::fiber::FiberProbe;
use super::sample::solve_fiber;
use super::{angles, LogMapParams};
use crate::error::{Error, Result};
use crate::patchwork::build_patchwork;

/// Two candidate roots closer than this to the tracked one are ambiguous.
pub const BRANCH_AMBIGUITY: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PeriodMode {
    /// Solve `f_t = 0` on the grid and integrate `−1/D`.
    Numeric,
    /// Integrate the limit integrand `1/(m₃′−m₃)` directly.
    LimitIntegrand,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PeriodEstimate {
    pub value: Complex64,
    pub t: f64,
    pub resolution: usize,
    pub target: f64,
    pub mode: PeriodMode,
    /// Base point: `x₁, x₂` from the window centre, `x₃` on the plane of the 2-cell.
    pub base: [f64; 3],
    /// Which component of `T_{m,m′}` was integrated.
    pub component: String,
}

impl PeriodEstimate {
    pub fn relative_error(&self) -> f64 {
        (self.value - self.target).norm() / self.target.abs()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": 1,
            "mode": match self.mode { PeriodMode::Numeric => "numeric", PeriodMode::LimitIntegrand => "limit" },
            "t": self.t,
            "resolution": self.resolution.to_string(),
            "value": {"re": self.value.re, "im": self.value.im},
            "target": self.target,
            "relative_error": self.relative_error(),
            "base": self.base,
            "component": self.component,
        })
    }
}

fn wrap(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

pub fn period_integral(probe: &FiberProbe, t: f64, n: usize, mode: PeriodMode) -> Result<PeriodEstimate> {
    let ln_t = LogMapParams::new(t)?.ln_t();
    let (m, mp) = (probe.m, probe.m_prime);
    let dm = mp - m;
    if dm.0[2] == 0 {
        return Err(Error::domain(format!("period needs m3 != m3', got {m} and {mp}")));
    }
    if n < 8 {
        return Err(Error::domain(format!("angular resolution must be at least 8, got {n}")));
    }
    let p = build_patchwork(probe.degree)?;
    let v_of = |q| p.terms.iter().find(|(r, _)| *r == q).map(|t| t.1).expect("point in Δ_d");
    let (vm, vp) = (v_of(m), v_of(mp));
    let c = probe.window.center();
    let x3 = (vp - vm) as f64 - dm.0[0] as f64 * c[0] - dm.0[1] as f64 * c[1];
    let base = [c[0], c[1], x3 / dm.0[2] as f64];
    if !probe.window.contains(&base) {
        return Err(Error::domain(format!("base point {base:?} on the 2-cell lies outside the window")));
    }
    let target = 4.0 * PI * PI / dm.0[2] as f64;
    let component = "theta1,theta2 in [0,2pi)^2, theta3 tracked from <m'-m,theta> = pi".to_string();
    let weight = (TAU / n as f64).powi(2);

    if mode == PeriodMode::LimitIntegrand {
        let integrand = 1.0 / dm.0[2] as f64;
        let sum: f64 = (0..n * n).map(|_| integrand).sum();
        return Ok(PeriodEstimate {
            value: Complex64::new(sum * weight, 0.0),
            t,
            resolution: n,
            target,
            mode,
            base,
            component,
        });
    }

    let th = angles(n);
    let predicted = |t1: f64, t2: f64| (PI - dm.0[0] as f64 * t1 - dm.0[1] as f64 * t2) / dm.0[2] as f64;
    let mut row_start = (base[2], predicted(0.0, 0.0).rem_euclid(TAU));
    let mut sum = Complex64::new(0.0, 0.0);
    for (i, &t1) in th.iter().enumerate() {
        let mut prev = row_start;
        for (j, &t2) in th.iter().enumerate() {
            let x = [base[0], base[1], 0.0];
            let theta = [t1, t2, 0.0];
            let roots = solve_fiber(&p, ln_t, 2, &x, &theta)?
                .ok_or_else(|| Error::Numeric(format!("root finder did not converge at ({i}, {j})")))?;
            let mut scored: Vec<(f64, [f64; 3], [f64; 3])> = roots
                .roots
                .into_iter()
                .map(|(xr, tr, _)| {
                    let dist = ((xr[2] - prev.0) * ln_t).hypot(wrap(tr[2] - prev.1));
                    (dist, xr, tr)
                })
                .collect();
            scored.sort_by(|a, b| a.0.total_cmp(&b.0));
            if scored.is_empty() {
                return Err(Error::Numeric(format!("no roots at ({i}, {j})")));
            }
            if scored.len() > 1 && (scored[1].0 - scored[0].0).abs() < BRANCH_AMBIGUITY {
                return Err(Error::Branch {
                    i,
                    j,
                    detail: format!(
                        "roots at x3={} and x3={} are equidistant from the tracked branch",
                        scored[0].1[2], scored[1].1[2]
                    ),
                });
            }
            let (_, xr, tr) = scored[0];
            prev = (xr[2], tr[2]);
            if j == 0 {
                row_start = prev;
            }
            let lm = m.0.iter().zip(&xr).map(|(a, b)| *a as f64 * b).sum::<f64>() - vm as f64;
            let mut dsum = Complex64::new(0.0, 0.0);
            for (q, v) in &p.terms {
                if q.0[2] == 0 {
                    continue;
                }
                let lq = q.0.iter().zip(&xr).map(|(a, b)| *a as f64 * b).sum::<f64>() - *v as f64;
                let phase: f64 = (0..3).map(|k| (q.0[k] - m.0[k]) as f64 * tr[k]).sum();
                dsum += q.0[2] as f64 * Complex64::from_polar((ln_t * (lq - lm)).exp(), phase);
            }
            let integrand = -1.0 / dsum;
            if !integrand.re.is_finite() || !integrand.im.is_finite() {
                return Err(Error::Numeric(format!("singular integrand at ({i}, {j})")));
            }
            sum += integrand;
        }
    }
    Ok(PeriodEstimate { value: sum * weight, t, resolution: n, target, mode, base, component })
}

//! Probes inside a 2-cell `Π_{m,m′}` of `Π_v` and the residuals of the
//! limit conditions `⟨m−m′,θ⟩ ≡ π` and `t^{l_{m′}(x)−l_m(x)} → 1` on `X_t`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde_json::{json, Value};

use super::sample::{sample_polynomial, AmoebaGrid, RESIDUAL_TOLERANCE};
use super::LogMapParams;
use crate::error::{Error, Result};
use crate::lattice::LatticePoint;
use crate::patchwork::build_patchwork;
use crate::subdivision::RegularSubdivision;
use crate::tropical::{build_tropical, BoundingBox};

/// Closed axis-aligned box in `ℝ³`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

impl Window {
    pub fn new(min: [f64; 3], max: [f64; 3]) -> Result<Self> {
        if (0..3).any(|i| !(min[i] < max[i]) || !min[i].is_finite() || !max[i].is_finite()) {
            return Err(Error::domain(format!("degenerate window {min:?}..{max:?}")));
        }
        Ok(Window { min, max })
    }

    /// Box of half-width `r` around `c`.
    pub fn around(c: [f64; 3], r: f64) -> Result<Self> {
        Window::new(c.map(|x| x - r), c.map(|x| x + r))
    }

    pub fn contains(&self, x: &[f64; 3]) -> bool {
        (0..3).all(|i| self.min[i] <= x[i] && x[i] <= self.max[i])
    }

    pub fn center(&self) -> [f64; 3] {
        [0, 1, 2].map(|i| 0.5 * (self.min[i] + self.max[i]))
    }

    fn corners(&self) -> Vec<[f64; 3]> {
        (0..8)
            .map(|k| [0, 1, 2].map(|i| if k >> i & 1 == 1 { self.max[i] } else { self.min[i] }))
            .collect()
    }

    /// Vertices of the box cut by `h ≥ 0` for an affine `h`.
    fn clip_vertices(&self, h: &dyn Fn(&[f64; 3]) -> f64) -> Vec<[f64; 3]> {
        let corners = self.corners();
        let mut out: Vec<[f64; 3]> = corners.iter().copied().filter(|c| h(c) >= 0.0).collect();
        for a in 0..8 {
            for i in 0..3 {
                let b = a | (1 << i);
                if b == a {
                    continue;
                }
                let (ha, hb) = (h(&corners[a]), h(&corners[b]));
                if (ha < 0.0) != (hb < 0.0) {
                    let s = ha / (ha - hb);
                    out.push([0, 1, 2].map(|k| corners[a][k] + s * (corners[b][k] - corners[a][k])));
                }
            }
        }
        out
    }
}

/// `l_m(x) = ⟨m,x⟩ − v(m)`.
fn l(m: &LatticePoint, v: i64, x: &[f64; 3]) -> f64 {
    m.0[0] as f64 * x[0] + m.0[1] as f64 * x[1] + m.0[2] as f64 * x[2] - v as f64
}

/// A window whose intersection with `Π_v` lies in the open 2-cell dual to
/// the edge `[m, m′]` of `T_v`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberProbe {
    pub degree: i64,
    pub m: LatticePoint,
    pub m_prime: LatticePoint,
    pub window: Window,
    /// Coordinate solved for when sampling; the largest entry of `m − m′`.
    pub axis: usize,
}

/// Margin by which competing terms must lose on the window.
const PROBE_MARGIN: f64 = 1e-9;

impl FiberProbe {
    pub fn new(sub: &RegularSubdivision, m: LatticePoint, m_prime: LatticePoint, window: Window) -> Result<Self> {
        if m == m_prime {
            return Err(Error::domain("probe needs two distinct lattice points"));
        }
        let mut key = [m, m_prime];
        key.sort();
        if !sub.edges().contains_key(&key) {
            return Err(Error::domain(format!("[{m}, {m_prime}] is not an edge of the subdivision")));
        }
        let lift = sub.lift();
        let (vm, vp) = (lift.value(&m)?, lift.value(&m_prime)?);
        let gap = |x: &[f64; 3]| l(&m, vm, x) - l(&m_prime, vp, x);
        let signs: Vec<f64> = window.corners().iter().map(gap).collect();
        if !(signs.iter().any(|s| *s > 0.0) && signs.iter().any(|s| *s < 0.0)) {
            return Err(Error::domain("window does not meet the plane of the 2-cell"));
        }
        for other in sub.domain().lattice_points() {
            if other == m || other == m_prime {
                continue;
            }
            let vo = lift.value(&other)?;
            let beats_m = |x: &[f64; 3]| l(&other, vo, x) - l(&m, vm, x) + PROBE_MARGIN;
            let beats_p = |x: &[f64; 3]| l(&other, vo, x) - l(&m_prime, vp, x) + PROBE_MARGIN;
            let worst = window
                .clip_vertices(&beats_m)
                .iter()
                .map(beats_p)
                .fold(f64::NEG_INFINITY, f64::max);
            if worst >= 0.0 {
                return Err(Error::domain(format!(
                    "{other} reaches the maximum inside the window; its closure leaves the open 2-cell"
                )));
            }
        }
        let diff = (m - m_prime).0;
        let axis = (0..3).max_by_key(|&i| (diff[i].abs(), std::cmp::Reverse(i))).expect("three axes");
        Ok(FiberProbe { degree: sub.degree(), m, m_prime, window, axis })
    }

    /// A cube around the vertex average of the truncated 2-cell dual to
    /// `[m, m′]`, shrunk until it validates.
    pub fn centered(sub: &RegularSubdivision, m: LatticePoint, m_prime: LatticePoint) -> Result<Self> {
        let mut key = [m, m_prime];
        key.sort();
        let complex = build_tropical(sub)?;
        let facet = complex
            .facets
            .iter()
            .find(|f| f.dual_edge == key)
            .ok_or_else(|| Error::domain(format!("[{m}, {m_prime}] is not an edge of the subdivision")))?;
        let poly = complex.truncated_polygon(facet, &BoundingBox::around(&complex));
        let n = poly.len() as f64;
        let c = [0, 1, 2].map(|i| poly.iter().map(|p| p[i]).sum::<f64>() / n);
        let mut r = 1.0;
        loop {
            match FiberProbe::new(sub, m, m_prime, Window::around(c, r)?) {
                Ok(p) => return Ok(p),
                Err(e) if r < 1e-3 => return Err(e),
                Err(_) => r *= 0.5,
            }
        }
    }

    /// Grid over the window's two free coordinates.
    pub fn grid(&self, x_counts: [usize; 2], theta_counts: [usize; 2]) -> AmoebaGrid {
        let mut g = AmoebaGrid::new([0.0; 2], [0.0; 2], x_counts, theta_counts);
        g.axis = self.axis;
        let free = g.free_axes();
        g.lo = free.map(|i| self.window.min[i]);
        g.hi = free.map(|i| self.window.max[i]);
        g
    }
}

/// Worst residuals over the samples of `X_t` inside the window.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberResiduals {
    pub t: f64,
    pub samples: usize,
    /// `max |arg(1+S)|`, where `S` sums the non-dominant terms relative to
    /// `t^{l_m}`; equals `|⟨m−m′,θ⟩ − π|` on `X_t`.
    pub angle_residual: f64,
    /// `max ||1+S| − 1|`; equals `|t^{l_{m′}−l_m} − 1|` on `X_t`.
    pub ratio_residual: f64,
    /// The same quantities read off the sampled coordinates directly;
    /// floored by root accuracy.
    pub direct_angle_residual: f64,
    pub direct_ratio_residual: f64,
}

impl FiberResiduals {
    pub fn to_json(&self) -> Value {
        json!({
            "t": self.t,
            "samples": self.samples.to_string(),
            "angle_residual": self.angle_residual,
            "ratio_residual": self.ratio_residual,
            "direct_angle_residual": self.direct_angle_residual,
            "direct_ratio_residual": self.direct_ratio_residual,
        })
    }
}

fn wrap(a: f64) -> f64 {
    let r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

pub fn limit_fiber_check(
    probe: &FiberProbe,
    t: f64,
    x_counts: [usize; 2],
    theta_counts: [usize; 2],
) -> Result<FiberResiduals> {
    let ln_t = LogMapParams::new(t)?.ln_t();
    let p = build_patchwork(probe.degree)?;
    let cloud = sample_polynomial(&p, t, &probe.grid(x_counts, theta_counts), RESIDUAL_TOLERANCE)?;
    let inside: Vec<_> = cloud.points.iter().filter(|s| probe.window.contains(&s.x)).collect();
    if inside.is_empty() {
        return Err(Error::Coverage);
    }
    let vm = p.terms.iter().find(|(q, _)| *q == probe.m).map(|t| t.1).expect("m in Δ_d");
    let vp = p.terms.iter().find(|(q, _)| *q == probe.m_prime).map(|t| t.1).expect("m' in Δ_d");
    let mut r = FiberResiduals {
        t,
        samples: inside.len(),
        angle_residual: 0.0,
        ratio_residual: 0.0,
        direct_angle_residual: 0.0,
        direct_ratio_residual: 0.0,
    };
    for s in inside {
        let lm = l(&probe.m, vm, &s.x);
        let mut sum = Complex64::new(0.0, 0.0);
        for (q, v) in &p.terms {
            if *q == probe.m || *q == probe.m_prime {
                continue;
            }
            let phase: f64 = (0..3).map(|i| (q.0[i] - probe.m.0[i]) as f64 * s.theta[i]).sum();
            sum += Complex64::from_polar((ln_t * (l(q, *v, &s.x) - lm)).exp(), phase);
        }
        let one_plus = 1.0 + sum;
        r.angle_residual = r.angle_residual.max(one_plus.arg().abs());
        // |1+S| − 1 without cancelling S against 1.
        let ratio_gap = (2.0 * sum.re + sum.norm_sqr()) / (one_plus.norm() + 1.0);
        r.ratio_residual = r.ratio_residual.max(ratio_gap.abs());
        let pairing: f64 = (0..3).map(|i| (probe.m.0[i] - probe.m_prime.0[i]) as f64 * s.theta[i]).sum();
        r.direct_angle_residual = r.direct_angle_residual.max(wrap(pairing - PI).abs());
        let ratio = (ln_t * (l(&probe.m_prime, vp, &s.x) - lm)).exp();
        r.direct_ratio_residual = r.direct_ratio_residual.max((ratio - 1.0).abs());
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subdivision::{subdivide, LiftingFunction};

    fn sub1() -> RegularSubdivision {
        subdivide(1, &LiftingFunction::Canonical).unwrap()
    }

    #[test]
    fn probe_validation() {
        let s = sub1();
        let (m, mp) = (LatticePoint::ORIGIN, LatticePoint::new(1, 0, 0));
        let ok = Window::around([8.0, -30.0, -30.0], 1.0).unwrap();
        let probe = FiberProbe::new(&s, m, mp, ok).unwrap();
        assert_eq!(probe.axis, 0);
        // Touches the edge x₁ = 8, x₂ = 8 where (0,1,0) ties.
        let touching = Window::new([7.0, 6.0, -31.0], [9.0, 8.0, -29.0]).unwrap();
        assert!(FiberProbe::new(&s, m, mp, touching).is_err());
        let off_plane = Window::around([20.0, -30.0, -30.0], 1.0).unwrap();
        assert!(FiberProbe::new(&s, m, mp, off_plane).is_err());
        assert!(FiberProbe::new(&s, m, m, ok).is_err());
    }

    #[test]
    fn centered_probe() {
        let s = sub1();
        let p = FiberProbe::centered(&s, LatticePoint::ORIGIN, LatticePoint::new(0, 0, 1)).unwrap();
        assert_eq!(p.axis, 2);
        let c = p.window.center();
        assert!((c[2] - 13.0).abs() < 1e-9);
        assert!(FiberProbe::centered(&s, LatticePoint::new(1, 0, 0), LatticePoint::new(1, 0, 0)).is_err());
    }

    #[test]
    fn degree_one_residuals() {
        let s = sub1();
        let w = Window::around([8.0, -30.0, -30.0], 1.0).unwrap();
        let probe = FiberProbe::new(&s, LatticePoint::ORIGIN, LatticePoint::new(1, 0, 0), w).unwrap();
        let r = limit_fiber_check(&probe, 16f64.exp(), [5, 5], [8, 8]).unwrap();
        assert_eq!(r.samples, 5 * 5 * 8 * 8);
        assert!(r.angle_residual < 0.05 && r.ratio_residual < 0.05);
        assert!(r.direct_angle_residual < 0.05 && r.direct_ratio_residual < 0.05);
    }
}

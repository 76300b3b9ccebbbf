//! Grid sampling of `X_t` and one-sided Hausdorff distance to `Π_v`.

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;

use super::roots::{aberth_log, LogPolynomial};
use super::{angles, linspace, thread_pool, LogMapParams};
use crate::error::{Error, Result};
use crate::patchwork::{build_patchwork, eval_patchwork_log, PatchworkPolynomial};
use crate::subdivision::{subdivide, LiftingFunction};
use crate::tropical::{build_tropical, BoundingBox, DistanceIndex};

/// Residual bound for accepting a root, relative to the dominant term.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;

/// Sampling grid. The coordinate `axis` is solved for; the other two
/// (in increasing order) are gridded in `x` and `θ`.
#[derive(Clone, Debug, PartialEq)]
pub struct AmoebaGrid {
    pub axis: usize,
    pub lo: [f64; 2],
    pub hi: [f64; 2],
    pub x_counts: [usize; 2],
    pub theta_counts: [usize; 2],
}

impl AmoebaGrid {
    pub fn new(lo: [f64; 2], hi: [f64; 2], x_counts: [usize; 2], theta_counts: [usize; 2]) -> Self {
        AmoebaGrid { axis: 2, lo, hi, x_counts, theta_counts }
    }

    /// Window over the `x₁x₂` extent of the vertices of `Π_v`, padded.
    pub fn around_vertices(d: i64, x_counts: [usize; 2], theta_counts: [usize; 2]) -> Result<Self> {
        let complex = build_tropical(&subdivide(d, &LiftingFunction::Canonical)?)?;
        let b = BoundingBox::around(&complex);
        Ok(AmoebaGrid::new([b.min[0], b.min[1]], [b.max[0], b.max[1]], x_counts, theta_counts))
    }

    /// The two gridded coordinates.
    pub fn free_axes(&self) -> [usize; 2] {
        match self.axis {
            0 => [1, 2],
            1 => [0, 2],
            _ => [0, 1],
        }
    }

    pub fn len(&self) -> usize {
        self.x_counts[0] * self.x_counts[1] * self.theta_counts[0] * self.theta_counts[1]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn validate(&self) -> Result<()> {
        if self.axis > 2 {
            return Err(Error::domain(format!("solve axis {} out of range", self.axis)));
        }
        if (0..2).any(|i| !(self.lo[i] <= self.hi[i]) || !self.lo[i].is_finite() || !self.hi[i].is_finite()) {
            return Err(Error::domain("empty or non-finite grid window"));
        }
        if self.is_empty() {
            return Err(Error::domain("grid has no points"));
        }
        Ok(())
    }

    /// `(x, θ)` of grid point `index` with the solved coordinate zeroed.
    fn point(&self, index: usize, xs: &[Vec<f64>; 2], ts: &[Vec<f64>; 2]) -> ([f64; 3], [f64; 3]) {
        let [n0, n1] = self.x_counts;
        let [m0, m1] = self.theta_counts;
        let j1 = index % m1;
        let j0 = (index / m1) % m0;
        let i1 = (index / (m1 * m0)) % n1;
        let i0 = index / (m1 * m0 * n1);
        debug_assert!(i0 < n0);
        let [a, b] = self.free_axes();
        let mut x = [0.0; 3];
        let mut th = [0.0; 3];
        x[a] = xs[0][i0];
        x[b] = xs[1][i1];
        th[a] = ts[0][j0];
        th[b] = ts[1][j1];
        (x, th)
    }
}

/// One accepted root.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplePoint {
    pub x: [f64; 3],
    pub theta: [f64; 3],
    pub grid_index: usize,
    pub root_index: usize,
    /// `|f_t(w)|·t^{−L_v(x)}`.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleCloud {
    pub t: f64,
    pub degree: i64,
    pub points: Vec<SamplePoint>,
    pub grid_points: usize,
    /// Grid points where all `d` roots were accepted.
    pub complete_points: usize,
    /// Grid points where the root finder did not converge.
    pub skipped_points: usize,
    /// Roots discarded for exceeding the residual bound.
    pub rejected_roots: usize,
    /// Roots at `w = 0`, where `Log_t` is undefined.
    pub zero_roots: usize,
    pub tolerance: f64,
}

impl SampleCloud {
    pub fn complete_fraction(&self) -> f64 {
        self.complete_points as f64 / self.grid_points.max(1) as f64
    }

    /// `x1,x2,x3,theta1,theta2,theta3,residual` per point.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("x1,x2,x3,theta1,theta2,theta3,residual\n");
        for p in &self.points {
            let _ = writeln!(
                s,
                "{:.12},{:.12},{:.12},{:.12},{:.12},{:.12},{:.6e}",
                p.x[0], p.x[1], p.x[2], p.theta[0], p.theta[1], p.theta[2], p.residual
            );
        }
        s
    }
}

/// The polynomial in `w_axis` at fixed values of the other coordinates.
pub(crate) fn fiber_polynomial(
    p: &PatchworkPolynomial,
    ln_t: f64,
    axis: usize,
    x: &[f64; 3],
    theta: &[f64; 3],
) -> LogPolynomial {
    let d = p.degree as usize;
    let mut groups: Vec<Vec<(f64, f64)>> = vec![Vec::new(); d + 1];
    for (m, v) in &p.terms {
        let mut l = -(*v as f64);
        let mut phase = 0.0;
        for j in (0..3).filter(|&j| j != axis) {
            l += m.0[j] as f64 * x[j];
            phase += m.0[j] as f64 * theta[j];
        }
        groups[m.0[axis] as usize].push((l, phase));
    }
    let mut log_abs = Vec::with_capacity(d + 1);
    let mut arg = Vec::with_capacity(d + 1);
    for g in groups {
        let top = g.iter().map(|(l, _)| *l).fold(f64::NEG_INFINITY, f64::max);
        let u: Complex64 = g.iter().map(|(l, ph)| Complex64::from_polar((ln_t * (l - top)).exp(), *ph)).sum();
        if u.norm() == 0.0 || !top.is_finite() {
            log_abs.push(f64::NEG_INFINITY);
            arg.push(0.0);
        } else {
            log_abs.push(ln_t * top + u.norm().ln());
            arg.push(u.arg());
        }
    }
    LogPolynomial { log_abs, arg }
}

/// Nonzero roots at one grid point as `(x, θ, residual)`, and the number
/// of roots at `w = 0` (a constant coefficient that cancelled to zero).
pub(crate) struct FiberRoots {
    pub roots: Vec<([f64; 3], [f64; 3], f64)>,
    pub zero_roots: usize,
}

/// Roots of the fiber polynomial, or `None` on non-convergence.
pub(crate) fn solve_fiber(
    p: &PatchworkPolynomial,
    ln_t: f64,
    axis: usize,
    x: &[f64; 3],
    theta: &[f64; 3],
) -> Result<Option<FiberRoots>> {
    let poly = fiber_polynomial(p, ln_t, axis, x, theta);
    let roots = aberth_log(&poly)?;
    if !roots.converged {
        return Ok(None);
    }
    let mut out = Vec::with_capacity(roots.zetas.len());
    for mut zeta in roots.zetas {
        for _ in 0..2 {
            let step = poly.newton_ratio(zeta);
            if step.norm() < 1e-15 || !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            zeta -= step;
        }
        let mut xr = *x;
        let mut tr = *theta;
        xr[axis] = zeta.re / ln_t;
        tr[axis] = zeta.im.rem_euclid(std::f64::consts::TAU);
        let residual = eval_patchwork_log(p, ln_t, &xr, &tr)?.value.norm();
        out.push((xr, tr, residual));
    }
    Ok(Some(FiberRoots { roots: out, zero_roots: roots.zero_roots }))
}

/// Sample `X_t` over `grid` for the patchworking polynomial of degree `d`.
pub fn sample_amoeba(d: i64, t: f64, grid: &AmoebaGrid) -> Result<SampleCloud> {
    sample_polynomial(&build_patchwork(d)?, t, grid, RESIDUAL_TOLERANCE)
}

pub fn sample_polynomial(p: &PatchworkPolynomial, t: f64, grid: &AmoebaGrid, tolerance: f64) -> Result<SampleCloud> {
    let ln_t = LogMapParams::new(t)?.ln_t();
    grid.validate()?;
    let xs = [
        linspace(grid.lo[0], grid.hi[0], grid.x_counts[0]),
        linspace(grid.lo[1], grid.hi[1], grid.x_counts[1]),
    ];
    let ts = [angles(grid.theta_counts[0]), angles(grid.theta_counts[1])];
    let pool = thread_pool()?;
    let solved: Vec<Result<Option<FiberRoots>>> = pool.install(|| {
        (0..grid.len())
            .into_par_iter()
            .map(|i| {
                let (x, th) = grid.point(i, &xs, &ts);
                solve_fiber(p, ln_t, grid.axis, &x, &th)
            })
            .collect()
    });

    let d = p.degree as usize;
    let mut cloud = SampleCloud {
        t,
        degree: p.degree,
        points: Vec::new(),
        grid_points: grid.len(),
        complete_points: 0,
        skipped_points: 0,
        rejected_roots: 0,
        zero_roots: 0,
        tolerance,
    };
    for (grid_index, r) in solved.into_iter().enumerate() {
        let Some(found) = r? else {
            cloud.skipped_points += 1;
            continue;
        };
        cloud.zero_roots += found.zero_roots;
        let mut accepted = 0;
        for (root_index, (x, theta, residual)) in found.roots.into_iter().enumerate() {
            if residual <= tolerance {
                accepted += 1;
                cloud.points.push(SamplePoint { x, theta, grid_index, root_index, residual });
            } else {
                cloud.rejected_roots += 1;
            }
        }
        if accepted == d {
            cloud.complete_points += 1;
        }
    }
    Ok(cloud)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub t: f64,
    pub ln_t: f64,
    pub samples: usize,
    pub max_distance: f64,
    pub mean_distance: f64,
    pub complete_fraction: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceTable {
    pub degree: i64,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    pub fn max_strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].max_distance < w[0].max_distance)
    }

    pub fn mean_strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].mean_distance < w[0].mean_distance)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,ln_t,samples,max_distance,mean_distance,complete_fraction\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:.12e},{:.12},{},{:.12e},{:.12e},{:.6}",
                r.t, r.ln_t, r.samples, r.max_distance, r.mean_distance, r.complete_fraction
            );
        }
        s
    }
}

/// Max and mean distance from the sample cloud to `Π_v`, per `t`.
pub fn convergence_study(d: i64, t_list: &[f64], grid: &AmoebaGrid) -> Result<ConvergenceTable> {
    if t_list.is_empty() {
        return Err(Error::domain("empty t list"));
    }
    if t_list.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain("t list must be strictly increasing"));
    }
    let complex = build_tropical(&subdivide(d, &LiftingFunction::Canonical)?)?;
    let p = build_patchwork(d)?;
    let pool = thread_pool()?;
    let mut rows = Vec::with_capacity(t_list.len());
    for &t in t_list {
        let cloud = sample_polynomial(&p, t, grid, RESIDUAL_TOLERANCE)?;
        if cloud.points.is_empty() {
            return Err(Error::Coverage);
        }
        let base = BoundingBox::around(&complex);
        let mut min = base.min;
        let mut max = base.max;
        for s in &cloud.points {
            for i in 0..3 {
                min[i] = min[i].min(s.x[i] - 50.0);
                max[i] = max[i].max(s.x[i] + 50.0);
            }
        }
        let index = DistanceIndex::new(&complex, BoundingBox::new(min, max)?)?;
        let dists: Vec<f64> = pool.install(|| {
            cloud.points.par_iter().map(|s| index.distance(&s.x)).collect::<Result<Vec<_>>>()
        })?;
        let max_distance = dists.iter().copied().fold(0.0, f64::max);
        let mean_distance = dists.iter().sum::<f64>() / dists.len() as f64;
        rows.push(ConvergenceRow {
            t,
            ln_t: t.ln(),
            samples: cloud.points.len(),
            max_distance,
            mean_distance,
            complete_fraction: cloud.complete_fraction(),
        });
    }
    Ok(ConvergenceTable { degree: d, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_leg() {
        let grid = AmoebaGrid::new([-100.0, -100.0], [-100.0, -100.0], [1, 1], [1, 1]);
        let cloud = sample_amoeba(1, 16f64.exp(), &grid).unwrap();
        assert_eq!(cloud.points.len(), 1);
        assert!((cloud.points[0].x[2] - 13.0).abs() < 0.05);
        assert!(cloud.points[0].residual < 1e-14);
    }

    #[test]
    fn degree_two_small_grid() {
        let grid = AmoebaGrid::around_vertices(2, [4, 4], [3, 3]).unwrap();
        let cloud = sample_amoeba(2, 8f64.exp(), &grid).unwrap();
        assert_eq!(cloud.complete_points, grid.len());
        assert!(cloud.points.iter().all(|p| p.residual <= RESIDUAL_TOLERANCE));
    }

    #[test]
    fn t_list_must_increase() {
        let grid = AmoebaGrid::new([0.0, 0.0], [1.0, 1.0], [2, 2], [2, 2]);
        assert!(convergence_study(1, &[3.0, 2.0], &grid).is_err());
    }
}

//! The patchworking family `f_t(w) = Σ t^{−v(m)} w^m` and exact exponent
//! identities for the theta coordinates `Z_m = t^{−v(m)} w^m`.
//!
//! `t` stays symbolic in the identities: a monomial is a power of `t`
//! times a product of `Z`'s, and an identity is certified by expanding each
//! `Z` back into `t` and `w` and comparing integer exponents.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::{det3, LatticePoint, Simplex3, SimplexDomain};
use crate::subdivision::{supporting_form, AffineForm, LiftingFunction, RegularSubdivision};

#[derive(Clone, Debug)]
pub struct PatchworkPolynomial {
    pub degree: i64,
    /// `(m, v(m))`; the term is `t^{−v(m)} w^m`.
    pub terms: Vec<(LatticePoint, i64)>,
}

pub fn build_patchwork(d: i64) -> Result<PatchworkPolynomial> {
    let terms = SimplexDomain::full(d)?
        .lattice_points()
        .into_iter()
        .map(|m| crate::subdivision::lift_value(&m).map(|v| (m, v)))
        .collect::<Result<_>>()?;
    Ok(PatchworkPolynomial { degree: d, terms })
}

/// `f_t(w)·t^{−L_v(x)}` together with `L_v(x)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledValue {
    pub value: Complex64,
    pub scale: f64,
}

/// Evaluate at `w_i = exp(xᵢ log t + iθᵢ)` with the largest term factored out.
pub fn eval_patchwork(p: &PatchworkPolynomial, t: f64, x: &[f64; 3], theta: &[f64; 3]) -> Result<ScaledValue> {
    if !(t > 1.0) || !t.is_finite() {
        return Err(Error::domain(format!("t must be a finite number > 1, got {t}")));
    }
    eval_patchwork_log(p, t.ln(), x, theta)
}

/// As [`eval_patchwork`] with `log t` given directly.
pub fn eval_patchwork_log(
    p: &PatchworkPolynomial,
    ln_t: f64,
    x: &[f64; 3],
    theta: &[f64; 3],
) -> Result<ScaledValue> {
    let l: Vec<f64> = p.terms.iter().map(|(m, v)| dot(m, x) - *v as f64).collect();
    let scale = l.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut value = Complex64::new(0.0, 0.0);
    for ((m, _), lm) in p.terms.iter().zip(&l) {
        value += Complex64::from_polar((ln_t * (lm - scale)).exp(), dot(m, theta));
    }
    if !value.re.is_finite() || !value.im.is_finite() || !scale.is_finite() {
        return Err(Error::Numeric(format!("non-finite patchwork value at x={x:?}")));
    }
    Ok(ScaledValue { value, scale })
}

fn dot(m: &LatticePoint, x: &[f64; 3]) -> f64 {
    m.0[0] as f64 * x[0] + m.0[1] as f64 * x[1] + m.0[2] as f64 * x[2]
}

/// `sign · t^{t_power} · ∏ Z_{basis_i}^{z_exponents_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledMonomial {
    pub sign: i8,
    pub t_power: i64,
    pub basis: Vec<LatticePoint>,
    pub z_exponents: Vec<i64>,
}

impl ScaledMonomial {
    /// Substitute `Z_m = t^{−v(m)} w^m`; returns the total `t` power and
    /// the `w` exponent.
    pub fn expand(&self, lift: &LiftingFunction) -> Result<(i64, LatticePoint)> {
        let mut t = self.t_power;
        let mut w = LatticePoint::ORIGIN;
        for (m, &a) in self.basis.iter().zip(&self.z_exponents) {
            let v = lift.value(m)?;
            t = a
                .checked_mul(v)
                .and_then(|av| t.checked_sub(av))
                .ok_or(Error::Overflow("monomial expansion"))?;
            w = w + LatticePoint(m.0.map(|c| c * a));
        }
        Ok((t, w))
    }
}

/// Integer `a` with `Σaᵢ = 1` and `Σaᵢmⁱ = m`.
pub fn barycentric(cell: &[LatticePoint; 4], m: &LatticePoint) -> Result<[i64; 4]> {
    let e = [1, 2, 3].map(|i| (cell[i] - cell[0]).0);
    let r = (*m - cell[0]).0;
    let det = det3(e[0], e[1], e[2]);
    if det == 0 {
        return Err(Error::SingularSystem(*cell));
    }
    let nums = [det3(r, e[1], e[2]), det3(e[0], r, e[2]), det3(e[0], e[1], r)];
    let mut a = [0i64; 4];
    for i in 0..3 {
        if nums[i] % det != 0 {
            return Err(Error::Unimodularity { cell: *cell, point: *m });
        }
        a[i + 1] = i64::try_from(nums[i] / det).map_err(|_| Error::Overflow("barycentric"))?;
    }
    a[0] = 1 - a[1] - a[2] - a[3];
    Ok(a)
}

/// `w^m = t^{ℓ_ρ(m)} ∏ Z_{mⁱ}^{aᵢ}` for a cell `ρ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialIdentity {
    pub cell: [LatticePoint; 4],
    pub m: LatticePoint,
    pub a: [i64; 4],
    /// `ℓ_ρ(m)`.
    pub exponent: i64,
    pub verified: bool,
}

impl MonomialIdentity {
    pub fn rhs(&self) -> ScaledMonomial {
        ScaledMonomial {
            sign: 1,
            t_power: self.exponent,
            basis: self.cell.to_vec(),
            z_exponents: self.a.to_vec(),
        }
    }
}

fn integer_form(form: &AffineForm, m: &LatticePoint) -> Result<i64> {
    let v = form.eval(m);
    if !v.is_integer() {
        return Err(Error::Unimodularity { cell: [LatticePoint::ORIGIN; 4], point: *m });
    }
    i64::try_from(*v.numer()).map_err(|_| Error::Overflow("supporting form value"))
}

fn identity_for(cell: &[LatticePoint; 4], form: &AffineForm, m: &LatticePoint) -> Result<MonomialIdentity> {
    let lift = LiftingFunction::Canonical;
    let a = barycentric(cell, m)?;
    let exponent = integer_form(form, m)?;
    let mut id = MonomialIdentity { cell: *cell, m: *m, a, exponent, verified: false };
    let (t_power, w) = id.rhs().expand(&lift)?;
    id.verified = t_power == 0 && w == *m;
    Ok(id)
}

/// The identity for `m ∈ Δ_d(ℤ)` against a cell inside `Δ_d^o`.
pub fn monomial_identity(d: i64, cell: &Simplex3, m: &LatticePoint) -> Result<MonomialIdentity> {
    let inner = SimplexDomain::interior(d)?;
    if !cell.vertices.iter().all(|p| inner.contains(p)) {
        return Err(Error::domain(format!("cell {:?} is not inside the interior polytope", cell.vertices)));
    }
    if !SimplexDomain::full(d)?.contains(m) {
        return Err(Error::domain(format!("{m} is not in Δ_{d}")));
    }
    let form = supporting_form(&cell.vertices, &LiftingFunction::Canonical)?;
    identity_for(&cell.vertices, &form, m)
}

/// `w^{m⁴} Z_{m⁰} = t^{ℓ_ρ(m⁴)} ∏ Z_{mⁱ}^{εᵢ}` across the common face of
/// two adjacent cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryRelation {
    /// Vertex of `ρ` off the shared face.
    pub m0: LatticePoint,
    /// Vertex of `ρ′` off the shared face.
    pub m4: LatticePoint,
    /// Shared face in the vertex order of `ρ`.
    pub face: [LatticePoint; 3],
    pub epsilon: [i64; 3],
    /// `ℓ_ρ(m⁴)`.
    pub exponent: i64,
    pub verified: bool,
}

pub fn boundary_relation(rho: &Simplex3, rho_prime: &Simplex3) -> Result<BoundaryRelation> {
    let off: Vec<usize> = (0..4).filter(|&i| !rho_prime.contains_vertex(&rho.vertices[i])).collect();
    let off_prime: Vec<LatticePoint> =
        rho_prime.vertices.iter().copied().filter(|p| !rho.contains_vertex(p)).collect();
    let (i0, m4) = match (off.as_slice(), off_prime.as_slice()) {
        ([i], [p]) => (*i, *p),
        _ => {
            return Err(Error::domain(format!(
                "cells {:?} and {:?} do not share a 2-face",
                rho.vertices, rho_prime.vertices
            )))
        }
    };
    let lift = LiftingFunction::Canonical;
    let m0 = rho.vertices[i0];
    let face_idx: Vec<usize> = (0..4).filter(|&i| i != i0).collect();
    let face = [0, 1, 2].map(|k| rho.vertices[face_idx[k]]);
    let a = barycentric(&rho.vertices, &m4)?;
    let form = supporting_form(&rho.vertices, &lift)?;
    let exponent = integer_form(&form, &m4)?;
    let epsilon = [0, 1, 2].map(|k| a[face_idx[k]]);
    if a[i0] != -1 {
        return Err(Error::LemmaViolation(format!(
            "{m4} has coefficient {} on {m0} in {:?}, expected -1",
            a[i0], rho.vertices
        )));
    }
    if epsilon.iter().any(|&e| e != 0 && e != 1) || epsilon.iter().sum::<i64>() != 2 {
        return Err(Error::LemmaViolation(format!(
            "relation between {:?} and {:?} has exponent pattern {epsilon:?}",
            rho.vertices, rho_prime.vertices
        )));
    }
    // Oracle: the t powers of both sides and the w exponents agree.
    let mut rhs_t = exponent;
    let mut rhs_w = LatticePoint::ORIGIN;
    for k in 0..3 {
        rhs_t -= epsilon[k] * lift.value(&face[k])?;
        rhs_w = rhs_w + LatticePoint(face[k].0.map(|c| c * epsilon[k]));
    }
    let verified = -lift.value(&m0)? == rhs_t && m4 + m0 == rhs_w;
    Ok(BoundaryRelation { m0, m4, face, epsilon, exponent, verified })
}

/// Which cell's form produced a residual exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormChoice {
    Cell,
    Partner,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualEntry {
    pub m: LatticePoint,
    /// `ℓ(m′) − v(m′)`.
    pub exponent: i64,
    pub choice: FormChoice,
}

/// Exponents `ℓ(m′) − v(m′)` over the lattice points of `∂Δ_d`. With a
/// partner sharing a face with `cell`, the partner's form is used when the
/// cell's own expansion gives a negative power of its off-face coordinate.
pub fn residual_exponents(d: i64, cell: &Simplex3, partner: Option<&Simplex3>) -> Result<Vec<ResidualEntry>> {
    if d < 5 {
        return Err(Error::domain(format!("residual exponents need d >= 5, got {d}")));
    }
    let inner = SimplexDomain::interior(d)?;
    if !cell.vertices.iter().all(|p| inner.contains(p)) {
        return Err(Error::domain(format!("cell {:?} is not inside the interior polytope", cell.vertices)));
    }
    let lift = LiftingFunction::Canonical;
    let form = supporting_form(&cell.vertices, &lift)?;
    let partner = match partner {
        Some(p) => {
            let off: Vec<usize> = (0..4).filter(|&i| !p.contains_vertex(&cell.vertices[i])).collect();
            let [i0] = off.as_slice() else {
                return Err(Error::domain("partner does not share a 2-face with the cell"));
            };
            Some((*i0, supporting_form(&p.vertices, &lift)?))
        }
        None => None,
    };
    let full = SimplexDomain::full(d)?;
    let mut out = Vec::new();
    for m in full.lattice_points().into_iter().filter(|m| full.on_boundary(m)) {
        let mut choice = FormChoice::Cell;
        let mut chosen = &form;
        if let Some((i0, pform)) = &partner {
            if barycentric(&cell.vertices, &m)?[*i0] < 0 {
                choice = FormChoice::Partner;
                chosen = pform;
            }
        }
        let exponent = integer_form(chosen, &m)? - lift.value(&m)?;
        if exponent >= 0 {
            return Err(Error::LemmaViolation(format!("residual exponent {exponent} >= 0 at {m}")));
        }
        out.push(ResidualEntry { m, exponent, choice });
    }
    Ok(out)
}

/// Certificates for every interior cell against every lattice point.
#[derive(Clone, Debug)]
pub struct IdentitySweep {
    pub degree: i64,
    pub cells: Vec<([LatticePoint; 4], Vec<MonomialIdentity>)>,
    pub residuals: Vec<([LatticePoint; 4], Vec<ResidualEntry>)>,
}

impl IdentitySweep {
    pub fn all_verified(&self) -> bool {
        self.cells.iter().all(|(_, e)| e.iter().all(|i| i.verified))
            && self.residuals.iter().all(|(_, r)| r.iter().all(|e| e.exponent < 0))
    }

    pub fn identity_count(&self) -> usize {
        self.cells.iter().map(|(_, e)| e.len()).sum()
    }

    pub fn to_json(&self) -> Value {
        let pt = |p: &LatticePoint| p.0.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        json!({
            "schema": 1,
            "d": self.degree.to_string(),
            "all_verified": self.all_verified(),
            "certificates": self.cells.iter().map(|(cell, entries)| json!({
                "cell": cell.iter().map(pt).collect::<Vec<_>>(),
                "entries": entries.iter().map(|e| json!({
                    "m": pt(&e.m),
                    "a": e.a.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "exponent": e.exponent.to_string(),
                    "verified": e.verified,
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "residuals": self.residuals.iter().map(|(cell, entries)| json!({
                "cell": cell.iter().map(pt).collect::<Vec<_>>(),
                "entries": entries.iter().map(|e| json!({
                    "m": pt(&e.m),
                    "exponent": e.exponent.to_string(),
                    "form": match e.choice { FormChoice::Cell => "cell", FormChoice::Partner => "partner" },
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Run [`monomial_identity`] and [`residual_exponents`] over all interior
/// cells of `sub`.
pub fn identity_sweep(sub: &RegularSubdivision) -> Result<IdentitySweep> {
    let d = sub.degree();
    let inner = SimplexDomain::interior(d)?;
    let points = SimplexDomain::full(d)?.lattice_points();
    let mut cells = Vec::new();
    let mut residuals = Vec::new();
    for c in sub.cells() {
        if !c.simplex.vertices.iter().all(|p| inner.contains(p)) {
            continue;
        }
        let entries = points
            .iter()
            .map(|m| identity_for(&c.simplex.vertices, &c.support, m))
            .collect::<Result<Vec<_>>>()?;
        cells.push((c.simplex.vertices, entries));
        residuals.push((c.simplex.vertices, residual_exponents(d, &c.simplex, None)?));
    }
    Ok(IdentitySweep { degree: d, cells, residuals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subdivision::{subdivide, CUBE_CELLS};

    fn p(x: i64, y: i64, z: i64) -> LatticePoint {
        LatticePoint::new(x, y, z)
    }

    fn interior_cell() -> Simplex3 {
        Simplex3::new([p(1, 1, 1), p(2, 1, 1), p(1, 2, 1), p(1, 1, 2)])
    }

    #[test]
    fn degree_one_polynomial() {
        let f = build_patchwork(1).unwrap();
        let exps: Vec<i64> = f.terms.iter().map(|t| t.1).collect();
        assert_eq!(exps, vec![0, 13, 8, 8]);
        assert_eq!(build_patchwork(5).unwrap().terms.len(), 56);
    }

    #[test]
    fn cancellation_at_tropical_vertex() {
        use std::f64::consts::PI;
        let f = build_patchwork(1).unwrap();
        let s = eval_patchwork(&f, 1e3, &[8.0, 8.0, 13.0], &[PI, 0.0, PI]).unwrap();
        assert!(s.value.norm() < 1e-12);
        let s = eval_patchwork(&f, std::f64::consts::E, &[0.0; 3], &[0.0; 3]).unwrap();
        let want = 1.0 + 2.0 * (-8.0f64).exp() + (-13.0f64).exp();
        assert!((s.value.re - want).abs() < 1e-15 && s.scale == 0.0);
        assert!(eval_patchwork(&f, 1.0, &[0.0; 3], &[0.0; 3]).is_err());
    }

    #[test]
    fn identity_at_origin() {
        let id = monomial_identity(5, &interior_cell(), &LatticePoint::ORIGIN).unwrap();
        assert_eq!(id.a, [4, -1, -1, -1]);
        assert_eq!(id.exponent, -90);
        assert!(id.verified);
        let id = monomial_identity(5, &interior_cell(), &p(2, 1, 1)).unwrap();
        assert_eq!(id.a, [0, 1, 0, 0]);
        assert_eq!(id.exponent, 105);
        let outside = Simplex3::new(CUBE_CELLS[0]);
        assert!(monomial_identity(5, &outside, &LatticePoint::ORIGIN).is_err());
    }

    #[test]
    fn cube_boundary_relation() {
        let r = boundary_relation(&Simplex3::new(CUBE_CELLS[0]), &Simplex3::new(CUBE_CELLS[1])).unwrap();
        assert_eq!((r.m0, r.m4), (p(0, 0, 0), p(1, 1, 0)));
        assert_eq!(r.epsilon, [1, 1, 0]);
        assert_eq!(r.exponent, 16);
        assert!(r.verified);
        let back = boundary_relation(&Simplex3::new(CUBE_CELLS[1]), &Simplex3::new(CUBE_CELLS[0])).unwrap();
        assert_eq!((back.m0, back.m4), (p(1, 1, 0), p(0, 0, 0)));
        assert!(back.verified);
        assert!(boundary_relation(&Simplex3::new(CUBE_CELLS[0]), &Simplex3::new(CUBE_CELLS[5])).is_err());
    }

    #[test]
    fn residuals_degree_five() {
        let r = residual_exponents(5, &interior_cell(), None).unwrap();
        assert_eq!(r.len(), 52);
        assert_eq!(r.iter().find(|e| e.m == LatticePoint::ORIGIN).unwrap().exponent, -90);
        assert!(r.iter().all(|e| e.exponent < 0));
    }

    #[test]
    fn sweep_degree_five() {
        let s = identity_sweep(&subdivide(5, &LiftingFunction::Canonical).unwrap()).unwrap();
        assert_eq!(s.identity_count(), 56);
        assert!(s.all_verified());
    }
}

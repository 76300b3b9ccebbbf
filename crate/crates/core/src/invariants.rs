//! Closed-form invariants of a smooth degree-`d` surface in `CP³`.
//!
//! `K² = d(d−4)²`, `χ = d³ − 4d² + 6d`, `p_g = (d−1)(d−2)(d−3)/6`, and
//! the signature follows from `2χ + 3τ = K²`. The Kähler–Einstein volume
//! is `2π²` per pair of pants and the Yamabe invariant is `−√(32π²K²)`.
//! Noether's formula is checked in the form `12(1 + p_g) = K² + χ`.

use std::f64::consts::PI;

use serde_json::{json, Value};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceInvariants {
    pub d: i64,
    pub k2: i64,
    pub chi: i64,
    pub tau: i64,
    pub p_g: i64,
    pub vol_ke_total: f64,
    pub yamabe: f64,
    pub pants_count: i64,
}

fn checked(name: &'static str, v: Option<i64>) -> Result<i64> {
    v.ok_or(Error::Overflow(name))
}

pub fn compute_invariants(d: i64) -> Result<SurfaceInvariants> {
    if d < 5 {
        return Err(Error::domain(format!("invariants need d >= 5, got {d}")));
    }
    let k2 = checked("K^2", (d - 4).checked_mul(d - 4).and_then(|x| x.checked_mul(d)))?;
    let chi = checked(
        "Euler number",
        d.checked_pow(3)
            .zip(d.checked_mul(d).and_then(|x| x.checked_mul(4)))
            .and_then(|(a, b)| a.checked_sub(b))
            .and_then(|x| x.checked_add(6 * d)),
    )?;
    let p_g = checked(
        "geometric genus",
        (d - 1).checked_mul(d - 2).and_then(|x| x.checked_mul(d - 3)).map(|x| x / 6),
    )?;
    let num = checked("signature", chi.checked_mul(2).and_then(|c| k2.checked_sub(c)))?;
    if num % 3 != 0 {
        return Err(Error::Numeric(format!("signature (K^2 - 2chi)/3 = {num}/3 is not an integer")));
    }
    let tau = num / 3;
    let k2f = k2 as f64;
    Ok(SurfaceInvariants {
        d,
        k2,
        chi,
        tau,
        p_g,
        vol_ke_total: 2.0 * PI * PI * k2f,
        yamabe: -(32.0 * PI * PI * k2f).sqrt(),
        pants_count: k2,
    })
}

impl SurfaceInvariants {
    pub fn to_json(&self) -> Value {
        json!({
            "d": self.d.to_string(),
            "K2": self.k2.to_string(),
            "chi": self.chi.to_string(),
            "tau": self.tau.to_string(),
            "p_g": self.p_g.to_string(),
            "pants_count": self.pants_count.to_string(),
            "vol_ke_total": self.vol_ke_total,
            "yamabe": self.yamabe,
        })
    }
}

/// One identity evaluated at one degree.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckEntry {
    pub d: i64,
    pub name: &'static str,
    pub lhs: String,
    pub rhs: String,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConsistencyReport {
    pub invariants: Vec<SurfaceInvariants>,
    pub entries: Vec<CheckEntry>,
}

impl ConsistencyReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.ok)
    }

    pub fn failures(&self) -> Vec<&CheckEntry> {
        self.entries.iter().filter(|e| !e.ok).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": 1,
            "invariants": self.invariants.iter().map(|i| i.to_json()).collect::<Vec<_>>(),
            "checks": self.entries.iter().map(|e| json!({
                "d": e.d.to_string(),
                "name": e.name,
                "lhs": e.lhs,
                "rhs": e.rhs,
                "ok": e.ok,
            })).collect::<Vec<_>>(),
            "all_pass": self.all_pass(),
        })
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// Evaluate every identity for each `d` in `lo..=hi` (within `[5, 50]`).
pub fn consistency_checks(lo: i64, hi: i64) -> Result<ConsistencyReport> {
    if lo < 5 || hi > 50 || lo > hi {
        return Err(Error::domain(format!("degree range {lo}..{hi} must lie within 5..50")));
    }
    let mut report = ConsistencyReport { invariants: Vec::new(), entries: Vec::new() };
    for d in lo..=hi {
        let inv = compute_invariants(d)?;
        let mut push = |name, lhs: String, rhs: String, ok| {
            report.entries.push(CheckEntry { d, name, lhs, rhs, ok });
        };
        let noether = 12 * (1 + inv.p_g);
        push("12(1+p_g) = K^2 + chi", noether.to_string(), (inv.k2 + inv.chi).to_string(), noether == inv.k2 + inv.chi);
        let sig = 2 * inv.chi + 3 * inv.tau;
        push("2chi + 3tau = K^2", sig.to_string(), inv.k2.to_string(), sig == inv.k2);
        push("K^2 >= 0", inv.k2.to_string(), "0".into(), inv.k2 >= 0);
        let vol = inv.pants_count as f64 * 2.0 * PI * PI;
        push("pants * 2pi^2 = vol", format!("{vol}"), format!("{}", inv.vol_ke_total), close(vol, inv.vol_ke_total));
        let y2 = inv.yamabe * inv.yamabe;
        let want = 32.0 * PI * PI * inv.k2 as f64;
        push("yamabe^2 = 32pi^2 K^2", format!("{y2}"), format!("{want}"), close(y2, want));
        report.invariants.push(inv);
    }
    Ok(report)
}

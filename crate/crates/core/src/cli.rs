//! Command-line dispatch.
//!
//! Every command builds one JSON document (with `"schema": 1`), writes it to
//! `--json PATH` when given and to stdout otherwise. With `--out DIR` the
//! document and the resolved [`RunConfig`] are also written into `DIR`.
//! Exit codes: 0 success, 1 failed verification or computation, 2 usage.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::amoeba::{
    convergence_study, period_integral, sample_amoeba, AmoebaGrid, FiberProbe, PeriodMode,
};
use crate::error::{Error, Result};
use crate::invariants::consistency_checks;
use crate::lattice::LatticePoint;
use crate::pants::pants_report;
use crate::patchwork::identity_sweep;
use crate::subdivision::{cross_check, subdivide, LiftingFunction};
use crate::tables::verify_tables;
use crate::tropical::{build_tropical, export_mesh, BoundingBox};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "tropical-pants", version, about = "Tropical pair-of-pants data for degree-d surfaces in CP^3")]
#[command(args_override_self = true)]
struct Cli {
    /// key=value or JSON file whose entries override command-line flags.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Directory receiving the output document and config.json.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Write the JSON document here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Degree {
    #[arg(long)]
    d: i64,
}

#[derive(Args, Debug, Clone)]
struct Sampling {
    /// Comma-separated values of t; `eK` means e^K.
    #[arg(long, value_name = "LIST", default_value = "e4,e8,e16")]
    t_list: String,
    /// `NX1,NX2,NTHETA1,NTHETA2` over the window around the vertices of the tropical surface.
    #[arg(long, value_name = "SPEC", default_value = "16,16,8,8")]
    grid: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Regular subdivision of the degree-d simplex under the canonical lift.
    Subdivide {
        #[command(flatten)]
        degree: Degree,
        /// Also run the generic lower-hull construction and compare.
        #[arg(long)]
        cross_check: bool,
    },
    /// Recompute the reference tables of forms and values.
    VerifyTables,
    /// Dual tropical surface, optionally exported as an OFF or OBJ mesh.
    Tropical {
        #[command(flatten)]
        degree: Degree,
        #[arg(long, value_name = "PATH")]
        mesh: Option<PathBuf>,
        /// `XMIN,YMIN,ZMIN,XMAX,YMAX,ZMAX`; defaults to a padded box around the vertices.
        #[arg(long, allow_hyphen_values = true, value_name = "BOX")]
        bbox: Option<String>,
    },
    /// Pants cells, K3 blocks, the graph B and the model of X0.
    Pants {
        #[command(flatten)]
        degree: Degree,
        /// Write graph B in Graphviz format.
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
    },
    /// Exact monomial, boundary and residue identities over every interior cell.
    Identities {
        #[command(flatten)]
        degree: Degree,
    },
    /// Sample the amoeba of f_t for each t.
    Amoeba {
        #[command(flatten)]
        degree: Degree,
        #[command(flatten)]
        sampling: Sampling,
        /// Write the samples as CSV, one file per t, into this directory.
        #[arg(long, value_name = "DIR")]
        csv: Option<PathBuf>,
    },
    /// Distance from the amoeba samples to the tropical surface along a t schedule.
    Converge {
        #[command(flatten)]
        degree: Degree,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
    /// Period of the residue form over the torus of a 2-cell.
    Period {
        #[command(flatten)]
        degree: Degree,
        /// `A,B,C`
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        #[arg(long, allow_hyphen_values = true)]
        mprime: String,
        #[arg(long, default_value = "e16")]
        t: String,
        #[arg(long, default_value_t = 64)]
        res: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Numeric)]
        mode: ModeArg,
        /// `CX,CY,CZ,R`; defaults to a cube inside the 2-cell.
        #[arg(long, allow_hyphen_values = true, value_name = "WINDOW")]
        window: Option<String>,
    },
    /// Closed-form invariants and their consistency identities.
    Invariants {
        /// `A..B` or a single degree.
        #[arg(long = "d-range", alias = "d", value_name = "RANGE")]
        d_range: String,
    },
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum ModeArg {
    Numeric,
    Limit,
}

/// Everything a run depends on, with paths resolved. Echoed into `--out`.
#[derive(Debug, Default, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub d: Option<String>,
    pub t_list: Option<Vec<f64>>,
    pub grid: Option<[usize; 4]>,
    pub bbox: Option<[f64; 6]>,
    pub out: Option<PathBuf>,
    pub files: BTreeMap<String, PathBuf>,
    pub options: BTreeMap<String, String>,
}

/// Run with the process's stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout(), &mut std::io::stderr())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => return clap_exit(e, out, err),
    };
    let cli = match &cli.config {
        None => cli,
        Some(path) => {
            let extra = match read_config(path) {
                Ok(x) => x,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return EXIT_USAGE;
                }
            };
            argv.extend(extra);
            match Cli::try_parse_from(&argv) {
                Ok(c) => c,
                Err(e) => return clap_exit(e, out, err),
            }
        }
    };
    match execute(cli, out, err) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILURE,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Domain(_) => EXIT_USAGE,
                _ => EXIT_FAILURE,
            }
        }
    }
}

fn clap_exit(e: clap::Error, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let text = e.render().to_string();
    if e.use_stderr() {
        let _ = write!(err, "{text}");
        EXIT_USAGE
    } else {
        let _ = write!(out, "{text}");
        EXIT_OK
    }
}

/// Config entries as extra `--key value` arguments. Later occurrences win,
/// so appending them makes the file override the command line.
fn read_config(path: &Path) -> Result<Vec<OsString>> {
    let text = std::fs::read_to_string(path)?;
    let mut pairs: Vec<(String, Option<String>)> = Vec::new();
    if text.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(&text)?;
        let obj = v.as_object().ok_or_else(|| Error::domain("config JSON must be an object"))?;
        for (k, v) in obj {
            let val = match v {
                Value::Bool(true) => None,
                Value::Bool(false) | Value::Null => continue,
                Value::String(s) => Some(s.clone()),
                Value::Array(a) => Some(
                    a.iter()
                        .map(|x| x.as_str().map(str::to_string).unwrap_or_else(|| x.to_string()))
                        .collect::<Vec<_>>()
                        .join(","),
                ),
                other => Some(other.to_string()),
            };
            pairs.push((k.clone(), val));
        }
    } else {
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::domain(format!("config line {}: expected key=value", n + 1)))?;
            let v = v.trim();
            match v {
                "true" => pairs.push((k.trim().to_string(), None)),
                "false" => {}
                _ => pairs.push((k.trim().to_string(), Some(v.to_string()))),
            }
        }
    }
    let mut args = Vec::new();
    for (k, v) in pairs {
        let key = k.trim_start_matches('-').replace('_', "-");
        if key == "config" {
            return Err(Error::domain("config files cannot name another config"));
        }
        match v {
            Some(v) => args.push(OsString::from(format!("--{key}={v}"))),
            None => args.push(OsString::from(format!("--{key}"))),
        }
    }
    Ok(args)
}

fn parse_t(s: &str) -> Result<f64> {
    let s = s.trim();
    let t = match s.strip_prefix("e^").or_else(|| s.strip_prefix('e')) {
        Some(k) => k.parse::<f64>().map(f64::exp),
        None => s.parse::<f64>(),
    }
    .map_err(|_| Error::domain(format!("cannot read t value {s:?}")))?;
    if !(t > 1.0) || !t.is_finite() {
        return Err(Error::domain(format!("t must be a finite number > 1, got {s}")));
    }
    Ok(t)
}

fn parse_list<T: std::str::FromStr>(s: &str, n: usize, what: &str) -> Result<Vec<T>> {
    let v: Vec<T> = s
        .split(',')
        .map(|x| x.trim().parse::<T>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::domain(format!("cannot read {what} {s:?}")))?;
    if v.len() != n {
        return Err(Error::domain(format!("{what} needs {n} comma-separated values, got {s:?}")));
    }
    Ok(v)
}

fn parse_point(s: &str) -> Result<LatticePoint> {
    let v = parse_list::<i64>(s, 3, "lattice point")?;
    Ok(LatticePoint::new(v[0], v[1], v[2]))
}

fn parse_range(s: &str) -> Result<(i64, i64)> {
    let bad = || Error::domain(format!("cannot read degree range {s:?}"));
    match s.split_once("..") {
        Some((a, b)) => {
            let a = a.trim().parse().map_err(|_| bad())?;
            let b = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
            Ok((a, b))
        }
        None => {
            let d = s.trim().parse().map_err(|_| bad())?;
            Ok((d, d))
        }
    }
}

fn parse_sampling(s: &Sampling, d: i64) -> Result<(Vec<f64>, [usize; 4], AmoebaGrid)> {
    let t_list = s.t_list.split(',').map(parse_t).collect::<Result<Vec<_>>>()?;
    let g = parse_list::<usize>(&s.grid, 4, "grid")?;
    if g.contains(&0) {
        return Err(Error::domain("grid counts must be positive"));
    }
    let spec = [g[0], g[1], g[2], g[3]];
    let grid = AmoebaGrid::around_vertices(d, [g[0], g[1]], [g[2], g[3]])?;
    Ok((t_list, spec, grid))
}

/// Absolute form of `p` without requiring it to exist yet.
fn resolve(p: &Path) -> Result<PathBuf> {
    Ok(if p.is_absolute() { p.to_path_buf() } else { std::env::current_dir()?.join(p) })
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, text)?;
    Ok(())
}

/// Command name, JSON document, verdict, optional text for stdout and
/// side files to write.
type Outcome = (&'static str, Value, bool, Option<String>, Vec<(PathBuf, String)>);

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool> {
    let mut cfg = RunConfig::default();
    if let Some(dir) = &cli.out {
        cfg.out = Some(resolve(dir)?);
    }
    if let Some(p) = &cli.json {
        cfg.files.insert("json".into(), resolve(p)?);
    }
    let lift = LiftingFunction::Canonical;

    let (name, doc, ok, text, extra): Outcome = match &cli.command {
        Command::Subdivide { degree, cross_check: cc } => {
            cfg.command = "subdivide".into();
            cfg.d = Some(degree.d.to_string());
            cfg.options.insert("cross_check".into(), cc.to_string());
            let sub = subdivide(degree.d, &lift)?;
            let mut doc = sub.to_json();
            let mut ok = true;
            if *cc {
                let other = cross_check(degree.d)?;
                let same = other.cells().iter().map(|c| c.simplex.sorted()).collect::<std::collections::BTreeSet<_>>()
                    == sub.cells().iter().map(|c| c.simplex.sorted()).collect();
                doc["cross_check"] = json!(same);
                ok = same;
            }
            ("subdivide", doc, ok, None, vec![])
        }
        Command::VerifyTables => {
            cfg.command = "verify-tables".into();
            let report = verify_tables()?;
            ("verify-tables", report.to_json(), report.is_match(), Some(report.summary()), vec![])
        }
        Command::Tropical { degree, mesh, bbox } => {
            cfg.command = "tropical".into();
            cfg.d = Some(degree.d.to_string());
            let mesh = mesh.as_deref().map(resolve).transpose()?;
            let user_box = match bbox {
                Some(b) => {
                    let v = parse_list::<f64>(b, 6, "bbox")?;
                    let arr = [v[0], v[1], v[2], v[3], v[4], v[5]];
                    cfg.bbox = Some(arr);
                    Some(BoundingBox::new([v[0], v[1], v[2]], [v[3], v[4], v[5]])?)
                }
                None => None,
            };
            if let Some(m) = &mesh {
                cfg.files.insert("mesh".into(), m.clone());
            }
            let complex = build_tropical(&subdivide(degree.d, &lift)?)?;
            let bbox = user_box.unwrap_or_else(|| BoundingBox::around(&complex));
            let mut doc = complex.to_json();
            doc["bbox"] = json!({"min": bbox.min, "max": bbox.max});
            if let Some(m) = &mesh {
                if let Some(parent) = m.parent() {
                    std::fs::create_dir_all(parent)?;
                }
                let s = export_mesh(&complex, &bbox, m)?;
                doc["mesh"] = json!({"vertices": s.vertices.to_string(), "faces": s.faces.to_string()});
            }
            ("tropical", doc, true, None, vec![])
        }
        Command::Pants { degree, dot } => {
            cfg.command = "pants".into();
            cfg.d = Some(degree.d.to_string());
            let dot = dot.as_deref().map(resolve).transpose()?;
            if let Some(p) = &dot {
                cfg.files.insert("dot".into(), p.clone());
            }
            let report = pants_report(&subdivide(degree.d, &lift)?)?;
            let d = degree.d;
            let ok = report.k3.union_matches
                && report.k3.blocks_are_translates
                && report.classification.t_o().len() as i64 == d * (d - 4) * (d - 4);
            let extra = dot.map(|p| (p, report.graph.to_dot())).into_iter().collect();
            ("pants", report.to_json(), ok, None, extra)
        }
        Command::Identities { degree } => {
            cfg.command = "identities".into();
            cfg.d = Some(degree.d.to_string());
            let sweep = identity_sweep(&subdivide(degree.d, &lift)?)?;
            ("identities", sweep.to_json(), sweep.all_verified(), None, vec![])
        }
        Command::Amoeba { degree, sampling, csv } => {
            cfg.command = "amoeba".into();
            cfg.d = Some(degree.d.to_string());
            let (t_list, spec, grid) = parse_sampling(sampling, degree.d)?;
            cfg.t_list = Some(t_list.clone());
            cfg.grid = Some(spec);
            let csv = csv.as_deref().map(resolve).transpose()?;
            if let Some(p) = &csv {
                cfg.files.insert("csv".into(), p.clone());
            }
            let mut rows = Vec::new();
            let mut extra = Vec::new();
            for (k, &t) in t_list.iter().enumerate() {
                let cloud = sample_amoeba(degree.d, t, &grid)?;
                rows.push(json!({
                    "t": t,
                    "grid_points": cloud.grid_points.to_string(),
                    "samples": cloud.points.len().to_string(),
                    "complete_points": cloud.complete_points.to_string(),
                    "skipped_points": cloud.skipped_points.to_string(),
                    "rejected_roots": cloud.rejected_roots.to_string(),
                    "zero_roots": cloud.zero_roots.to_string(),
                    "complete_fraction": cloud.complete_fraction(),
                }));
                if let Some(dir) = &csv {
                    extra.push((dir.join(format!("samples_{k}.csv")), cloud.to_csv()));
                }
            }
            let doc = json!({
                "schema": 1,
                "d": degree.d.to_string(),
                "grid": {"lo": grid.lo, "hi": grid.hi, "x_counts": grid.x_counts, "theta_counts": grid.theta_counts},
                "clouds": rows,
            });
            ("amoeba", doc, true, None, extra)
        }
        Command::Converge { degree, sampling, csv } => {
            cfg.command = "converge".into();
            cfg.d = Some(degree.d.to_string());
            let (t_list, spec, grid) = parse_sampling(sampling, degree.d)?;
            cfg.t_list = Some(t_list.clone());
            cfg.grid = Some(spec);
            let csv = csv.as_deref().map(resolve).transpose()?;
            if let Some(p) = &csv {
                cfg.files.insert("csv".into(), p.clone());
            }
            let table = convergence_study(degree.d, &t_list, &grid)?;
            let doc = json!({
                "schema": 1,
                "d": degree.d.to_string(),
                "rows": table.rows.iter().map(|r| json!({
                    "t": r.t,
                    "ln_t": r.ln_t,
                    "samples": r.samples.to_string(),
                    "max_distance": r.max_distance,
                    "mean_distance": r.mean_distance,
                    "complete_fraction": r.complete_fraction,
                })).collect::<Vec<_>>(),
                "max_strictly_decreasing": table.max_strictly_decreasing(),
                "mean_strictly_decreasing": table.mean_strictly_decreasing(),
            });
            let extra = csv.map(|p| (p, table.to_csv())).into_iter().collect();
            ("converge", doc, table.max_strictly_decreasing(), None, extra)
        }
        Command::Period { degree, m, mprime, t, res, mode, window } => {
            cfg.command = "period".into();
            cfg.d = Some(degree.d.to_string());
            let (m, mp, t) = (parse_point(m)?, parse_point(mprime)?, parse_t(t)?);
            cfg.t_list = Some(vec![t]);
            cfg.options.insert("m".into(), m.to_string());
            cfg.options.insert("mprime".into(), mp.to_string());
            cfg.options.insert("res".into(), res.to_string());
            cfg.options.insert("mode".into(), format!("{mode:?}").to_lowercase());
            let sub = subdivide(degree.d, &lift)?;
            let probe = match window {
                Some(w) => {
                    let v = parse_list::<f64>(w, 4, "window")?;
                    cfg.options.insert("window".into(), w.clone());
                    let win = crate::amoeba::Window::around([v[0], v[1], v[2]], v[3])?;
                    FiberProbe::new(&sub, m, mp, win)?
                }
                None => FiberProbe::centered(&sub, m, mp)?,
            };
            let pm = match mode {
                ModeArg::Numeric => PeriodMode::Numeric,
                ModeArg::Limit => PeriodMode::LimitIntegrand,
            };
            let est = period_integral(&probe, t, *res, pm)?;
            let mut doc = est.to_json();
            doc["d"] = json!(degree.d.to_string());
            doc["m"] = json!(m.to_string());
            doc["mprime"] = json!(mp.to_string());
            doc["window"] = json!({"min": probe.window.min, "max": probe.window.max});
            ("period", doc, true, None, vec![])
        }
        Command::Invariants { d_range } => {
            cfg.command = "invariants".into();
            let (lo, hi) = parse_range(d_range)?;
            cfg.d = Some(format!("{lo}..{hi}"));
            let report = consistency_checks(lo, hi)?;
            for f in report.failures() {
                let _ = writeln!(err, "d={}: {} fails ({} vs {})", f.d, f.name, f.lhs, f.rhs);
            }
            ("invariants", report.to_json(), report.all_pass(), None, vec![])
        }
    };

    let body = serde_json::to_string_pretty(&doc)? + "\n";
    for (path, text) in &extra {
        write_file(path, text)?;
    }
    match cfg.files.get("json") {
        Some(p) => write_file(p, &body)?,
        None if text.is_none() => out.write_all(body.as_bytes())?,
        None => {}
    }
    if let Some(t) = &text {
        writeln!(out, "{t}")?;
    }
    if let Some(dir) = &cfg.out {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(format!("{name}.json")), &body)?;
        std::fs::write(dir.join("config.json"), serde_json::to_string_pretty(&cfg)? + "\n")?;
    }
    Ok(ok)
}

//! Command-line front end for the `painleve` binary.
//!
//! Every command builds one [`Output`]: a JSON document and an equivalent CSV
//! table. Floating values are rendered with `digits - 5` significant figures
//! next to a `full` field carrying all working digits.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::atlas::{self, Outcome, ScanBox, ScanGrid};
use crate::backlund::{
    backlund_chain, hamiltonian_value, residual_p2, residual_p34, residual_s2, Denominator, TauRoute,
};
use crate::cubic::{self, qps_from_coeffs};
use crate::error::{Error, Result};
use crate::mp::{ApComplex, Lambda, PrecCtx, SeedSpec};
use crate::spectral::{self, Which};
use crate::tau::{qps_from_tau, SolutionJet};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_SINGULARITY: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) => EXIT_USAGE,
        Error::InsufficientPrecision { .. } => EXIT_PRECISION,
        e if e.is_singularity() => EXIT_SINGULARITY,
        _ => EXIT_INTERNAL,
    }
}

#[derive(Parser, Debug)]
#[command(name = "painleve", version, about = "Airy solutions of Painleve II and the cubic ensemble")]
pub struct Cli {
    /// Working precision in decimal digits.
    #[arg(long, global = true, env = "PAINLEVE_DIGITS", default_value_t = 40)]
    pub digits: u32,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// q, p and sigma at one point.
    Eval(EvalArgs),
    /// Recurrence coefficients of the cubic ensemble.
    Coeffs(CoeffsArgs),
    /// Zeros and poles of q_n in a box.
    Scan(ScanArgs),
    /// Scaling-limit errors.
    Limits(LimitsArgs),
    /// Constants of the critical graph.
    Geometry(GeometryArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Monotonicity sweep report.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Tau,
    Backlund,
    Coeffs,
    All,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long)]
    pub n: i64,
    /// Complex literal `a+bi`.
    #[arg(long, allow_hyphen_values = true)]
    pub z: String,
    /// `0`, `inf`, `i`, `-i` or `a+bi`.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub lambda: String,
    #[arg(long, value_enum, default_value_t = RouteArg::Tau)]
    pub route: RouteArg,
    /// Use the squared-q' Baecklund denominator (negative control).
    #[arg(long)]
    pub squared_denominator: bool,
}

#[derive(Args, Debug)]
pub struct CoeffsArgs {
    /// Largest index.
    #[arg(long)]
    pub n: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub t: String,
    /// The ensemble size parameter.
    #[arg(long = "N", default_value_t = 1.0)]
    pub n_scale: f64,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub lambda: String,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub lambda: String,
    /// `re0:re1:steps,im0:im1:steps`
    #[arg(long, default_value = "-2:8:20,-6:6:25", allow_hyphen_values = true)]
    pub grid: String,
}

#[derive(Args, Debug)]
pub struct LimitsArgs {
    /// Comma-separated orders.
    #[arg(long, default_value = "12,24")]
    pub n: String,
    /// Comma-separated real weight parameters.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub t: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub lambda: String,
}

#[derive(Args, Debug)]
pub struct GeometryArgs {
    /// RK4 steps per unit arclength at the first pass.
    #[arg(long, default_value_t = 100)]
    pub resolution: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Comma-separated suites, or `all`.
    #[arg(long, default_value = "all")]
    pub suite: String,
    /// Use the squared-q' Baecklund denominator (negative control).
    #[arg(long)]
    pub squared_denominator: bool,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    #[arg(long, default_value_t = 20)]
    pub n_max: usize,
    /// Grid size over `(iota_1 + 0.01, 10]`.
    #[arg(long, default_value_t = 50)]
    pub points: usize,
}

/// A rendered result: one JSON document and a CSV table.
pub struct Output {
    pub json: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    /// Exit code for a successful run that still reports failures.
    pub code: i32,
}

impl Output {
    fn new(json: Value, header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        Output { json, header, rows, code: EXIT_OK }
    }
}

/// Decimal strings of one complex value.
struct Num<'a> {
    ctx: &'a PrecCtx,
}

impl Num<'_> {
    fn sig(&self) -> usize {
        (self.ctx.digits() - 5) as usize
    }

    fn value(&self, x: &ApComplex) -> Value {
        let (re, im) = x.to_string_sig(self.sig());
        let (fre, fim) = x.to_string_sig(self.ctx.digits() as usize);
        json!({"re": re, "im": im, "full": {"re": fre, "im": fim}})
    }

    fn opt(&self, x: Option<&ApComplex>) -> Value {
        x.map_or(Value::Null, |v| self.value(v))
    }

    fn cells(&self, x: Option<&ApComplex>) -> [String; 2] {
        match x {
            Some(v) => {
                let (re, im) = v.to_string_sig(self.sig());
                [re, im]
            }
            None => [String::new(), String::new()],
        }
    }
}

fn parse_point(s: &str, ctx: &PrecCtx) -> Result<ApComplex> {
    match Lambda::parse(s, ctx.bits())? {
        Lambda::Finite(v) => Ok(v),
        Lambda::Infinity => Err(Error::InvalidInput(format!("point must be finite, got {s:?}"))),
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    let out: std::result::Result<Vec<T>, _> = s.split(',').map(|x| x.trim().parse::<T>()).collect();
    match out {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => Err(Error::InvalidInput(format!("cannot parse {what} list {s:?}"))),
    }
}

/// Parses `re0:re1:steps,im0:im1:steps`.
pub fn parse_grid(s: &str) -> Result<(ScanBox, ScanGrid)> {
    let bad = || Error::InvalidInput(format!("grid must be re0:re1:steps,im0:im1:steps, got {s:?}"));
    let axes: Vec<&str> = s.split(',').collect();
    if axes.len() != 2 {
        return Err(bad());
    }
    let axis = |a: &str| -> Result<(f64, f64, usize)> {
        let p: Vec<&str> = a.split(':').collect();
        if p.len() != 3 {
            return Err(bad());
        }
        let lo: f64 = p[0].parse().map_err(|_| bad())?;
        let hi: f64 = p[1].parse().map_err(|_| bad())?;
        let k: usize = p[2].parse().map_err(|_| bad())?;
        if !(lo < hi) || k == 0 {
            return Err(bad());
        }
        Ok((lo, hi, k))
    };
    let (r0, r1, nr) = axis(axes[0])?;
    let (i0, i1, ni) = axis(axes[1])?;
    Ok((ScanBox { re: (r0, r1), im: (i0, i1) }, ScanGrid { nre: nr, nim: ni }))
}

fn jet_json(num: &Num, s: &SolutionJet) -> Value {
    json!({
        "route": s.route.as_str(),
        "q": num.value(&s.q),
        "qprime": num.opt(s.qprime.as_ref()),
        "p": num.opt(s.p.as_ref()),
        "sigma": num.opt(s.sigma.as_ref()),
    })
}

fn cmd_eval(a: &EvalArgs, ctx: &PrecCtx) -> Result<Output> {
    if a.n < 1 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let n = a.n as usize;
    let z = parse_point(&a.z, ctx)?;
    let lambda = Lambda::parse(&a.lambda, ctx.bits())?;
    let seed = SeedSpec::from_lambda(&lambda, ctx);
    let variant = if a.squared_denominator {
        Denominator::SquaredDerivative
    } else {
        Denominator::Standard
    };
    let want = |r: RouteArg| a.route == r || a.route == RouteArg::All;
    let mut jets = Vec::new();
    if want(RouteArg::Tau) {
        jets.push(qps_from_tau(n, &z, &seed, ctx)?);
    }
    if want(RouteArg::Backlund) {
        jets.push(backlund_chain(a.n, &z, &seed, variant, ctx)?.into_solution(&seed));
    }
    if want(RouteArg::Coeffs) {
        jets.push(qps_from_coeffs(n, &z, 1.0, &lambda, ctx)?);
    }
    // largest pairwise difference over the fields both routes carry
    let mut delta: Option<f64> = None;
    for (i, x) in jets.iter().enumerate() {
        for y in &jets[i + 1..] {
            let pairs = [
                (Some(&x.q), Some(&y.q)),
                (x.qprime.as_ref(), y.qprime.as_ref()),
                (x.p.as_ref(), y.p.as_ref()),
                (x.sigma.as_ref(), y.sigma.as_ref()),
            ];
            for (u, v) in pairs {
                if let (Some(u), Some(v)) = (u, v) {
                    let d = (u - v).abs().to_f64();
                    delta = Some(delta.map_or(d, |m: f64| m.max(d)));
                }
            }
        }
    }
    let num = Num { ctx };
    let json = json!({
        "command": "eval",
        "digits": ctx.digits(),
        "n": n,
        "z": num.value(&z),
        "lambda": lambda.token(),
        "results": jets.iter().map(|s| jet_json(&num, s)).collect::<Vec<_>>(),
        "max_route_delta": delta,
    });
    let rows = jets
        .iter()
        .map(|s| {
            let mut r = vec![s.route.as_str().to_string()];
            for v in [Some(&s.q), s.qprime.as_ref(), s.p.as_ref(), s.sigma.as_ref()] {
                r.extend(num.cells(v));
            }
            r
        })
        .collect();
    let header = vec!["route", "q_re", "q_im", "qprime_re", "qprime_im", "p_re", "p_im", "sigma_re", "sigma_im"];
    Ok(Output::new(json, header, rows))
}

fn fields(r: &cubic::CoeffRecord) -> [&ApComplex; 5] {
    [&r.d_n, &r.h_n, &r.beta_n, &r.gamma2_n, &r.p_nn1]
}

fn cmd_coeffs(a: &CoeffsArgs, ctx: &PrecCtx) -> Result<Output> {
    let t = parse_point(&a.t, ctx)?;
    let lambda = Lambda::parse(&a.lambda, ctx.bits())?;
    let tab = cubic::coeff_table(a.n, &t, a.n_scale, &lambda, ctx)?;
    let num = Num { ctx };
    let json = json!({
        "command": "coeffs",
        "digits": ctx.digits(),
        "t": num.value(&t),
        "N": a.n_scale,
        "lambda": lambda.token(),
        "records": tab.records.iter().map(|r| {
            let [d, h, b, g, p] = fields(r);
            json!({"n": r.n, "d_n": num.value(d), "h_n": num.value(h), "beta_n": num.value(b),
                   "gamma2_n": num.value(g), "p_nn1": num.value(p)})
        }).collect::<Vec<_>>(),
    });
    let rows = tab
        .records
        .iter()
        .map(|r| {
            let mut row = vec![r.n.to_string()];
            for v in fields(r) {
                row.extend(num.cells(Some(v)));
            }
            row
        })
        .collect();
    let header = vec![
        "n", "d_re", "d_im", "h_re", "h_im", "beta_re", "beta_im", "gamma2_re", "gamma2_im", "p_nn1_re", "p_nn1_im",
    ];
    Ok(Output::new(json, header, rows))
}

fn cmd_scan(a: &ScanArgs, ctx: &PrecCtx) -> Result<Output> {
    let (bbox, grid) = parse_grid(&a.grid)?;
    let lambda = Lambda::parse(&a.lambda, ctx.bits())?;
    let rep = atlas::pole_zero_scan(a.n, &lambda, bbox, grid, ctx)?;
    let num = Num { ctx };
    let json = json!({
        "command": "scan",
        "digits": ctx.digits(),
        "n": rep.n,
        "lambda": lambda.token(),
        "box": bbox,
        "grid": grid,
        "total_winding": rep.total_winding(),
        "flagged_cells": rep.flagged_cells(),
        "bookkeeping_consistent": rep.bookkeeping_consistent(),
        "entries": rep.entries.iter().map(|e| json!({
            "location": num.value(&e.location),
            "kind": e.kind,
            "source": e.source.as_str(),
            "winding": e.winding,
            "residue": e.residue,
            "cross_check": e.cross_check,
        })).collect::<Vec<_>>(),
        "cells": rep.cells.iter().filter(|c| c.flagged || c.zeros_q != 0 || c.winding_q != 0
            || c.zeros_tau_prev != 0 || c.zeros_tau_cur != 0).collect::<Vec<_>>(),
    });
    let rows = rep
        .entries
        .iter()
        .map(|e| {
            let [re, im] = num.cells(Some(&e.location));
            vec![
                re,
                im,
                if e.kind == atlas::EntryKind::Pole { "pole" } else { "zero" }.to_string(),
                e.source.as_str().to_string(),
                e.winding.to_string(),
            ]
        })
        .collect();
    let mut out = Output::new(json, vec!["re", "im", "kind", "source", "winding"], rows);
    if !rep.bookkeeping_consistent() {
        out.code = EXIT_INTERNAL;
    }
    Ok(out)
}

fn cmd_limits(a: &LimitsArgs, ctx: &PrecCtx) -> Result<Output> {
    let ns: Vec<usize> = parse_list(&a.n, "n")?;
    let ts: Vec<f64> = parse_list(&a.t, "t")?;
    if ns.contains(&0) {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let lambda = Lambda::parse(&a.lambda, ctx.bits())?;
    let mut samples = Vec::new();
    let mut rows = Vec::new();
    for &t in &ts {
        for &n in &ns {
            let s = spectral::scaling_sample(n, &ctx.complex(t, 0.0), &lambda, ctx)?;
            for w in Which::ALL {
                let e = s.error(w).abs().to_f64();
                rows.push(vec![n.to_string(), t.to_string(), w.as_str().to_string(), format!("{e:e}")]);
                samples.push(json!({"n": n, "t": t, "which": w.as_str(), "error": e}));
            }
        }
    }
    let json = json!({
        "command": "limits",
        "digits": ctx.digits(),
        "lambda": lambda.token(),
        "samples": samples,
    });
    Ok(Output::new(json, vec!["n", "t", "which", "error"], rows))
}

/// Tolerances quoted with the geometry constants.
pub const C_TOL: f64 = 0.003;
pub const T0_TOL: f64 = 5e-5;
pub const C_REF: f64 = 0.635;
pub const T0_REF: f64 = -1.0005424;

fn cmd_geometry(a: &GeometryArgs) -> Result<Output> {
    let g = spectral::qd_geometry(a.resolution)?;
    let ends: Vec<Value> = g
        .trajectories
        .iter()
        .map(|t| json!({"k": t.k, "end": t.end, "max_im_action": t.max_im_action}))
        .collect();
    let json = json!({
        "command": "geometry",
        "c": g.c,
        "c_error": g.c_error,
        "c_reference": C_REF,
        "c_tolerance": C_TOL,
        "t0": g.t0,
        "t0_reference": T0_REF,
        "t0_tolerance": T0_TOL,
        "step": g.step,
        "trajectories": ends,
    });
    let rows = vec![
        vec!["c".into(), g.c.to_string(), C_REF.to_string(), C_TOL.to_string()],
        vec!["t0".into(), g.t0.to_string(), T0_REF.to_string(), T0_TOL.to_string()],
    ];
    Ok(Output::new(json, vec!["quantity", "value", "reference", "tolerance"], rows))
}

/// One named verification result.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CheckRecord {
    pub suite: &'static str,
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub error: Option<String>,
}

pub const SUITES: [&str; 6] = ["routes", "residuals", "bridges", "strings", "identities", "geometry"];

struct Recorder<'a> {
    ctx: &'a PrecCtx,
    out: Vec<CheckRecord>,
}

impl Recorder<'_> {
    fn pow(&self, frac: f64) -> f64 {
        10f64.powf(-(self.ctx.digits() as f64) * frac)
    }

    fn push(&mut self, suite: &'static str, name: String, r: Result<f64>, tolerance: f64) {
        let rec = match r {
            Ok(v) => CheckRecord {
                suite,
                name,
                value: v,
                tolerance,
                passed: v <= tolerance,
                error: None,
            },
            Err(e) => CheckRecord {
                suite,
                name,
                value: f64::NAN,
                tolerance,
                passed: false,
                error: Some(e.to_string()),
            },
        };
        self.out.push(rec);
    }
}

fn mag(x: &ApComplex) -> f64 {
    x.abs().to_f64()
}

fn verify_points(ctx: &PrecCtx) -> Vec<(usize, &'static str, ApComplex)> {
    let mut pts = Vec::new();
    for n in 1..=4 {
        for lam in ["0", "i", "inf"] {
            for (re, im) in [(0.3, 0.2), (-1.1, 0.5)] {
                pts.push((n, lam, ctx.complex(re, im)));
            }
        }
    }
    pts
}

/// Runs the selected suites. The checks are a compact version of the
/// acceptance criteria.
pub fn run_suites(suites: &[&str], variant: Denominator, ctx: &PrecCtx) -> Vec<CheckRecord> {
    let mut rec = Recorder { ctx, out: Vec::new() };
    let half = rec.pow(0.5);
    let quarter = rec.pow(0.25);
    let bits = ctx.bits();
    let lam = |s: &str| Lambda::parse(s, bits).expect("fixed token");
    if suites.contains(&"routes") || suites.contains(&"residuals") {
        for (n, l, z) in verify_points(ctx) {
            let seed = SeedSpec::from_lambda(&lam(l), ctx);
            let tag = format!("n={n} lambda={l} z={}", z.to_c64());
            let tau = qps_from_tau(n, &z, &seed, ctx);
            if suites.contains(&"routes") {
                let b = backlund_chain(n as i64, &z, &seed, variant, ctx);
                let d = match (&tau, &b) {
                    (Ok(t), Ok(b)) => Ok(mag(&(&t.q - &b.q)).max(mag(&(t.qprime.as_ref().expect("tau q'") - &b.qprime)))),
                    (Err(e), _) | (_, Err(e)) => Err(e.clone()),
                };
                rec.push("routes", format!("tau_vs_backlund {tag}"), d, half);
            }
            if suites.contains(&"residuals") {
                let route = TauRoute { n, seed: &seed };
                rec.push("residuals", format!("p2 {tag}"), residual_p2(&route, &z, ctx).map(|r| mag(&r)), quarter);
                let Ok(t) = &tau else {
                    rec.push("residuals", format!("tau {tag}"), Err(tau.clone().unwrap_err()), quarter);
                    continue;
                };
                let (qp, p, s) = (t.qprime.as_ref().unwrap(), t.p.as_ref().unwrap(), t.sigma.as_ref().unwrap());
                let ni = n as i64;
                rec.push("residuals", format!("p34 {tag}"), residual_p34(&t.q, qp, p, &z, ni, ctx).map(|r| mag(&r)), quarter);
                rec.push("residuals", format!("s2 {tag}"), Ok(mag(&residual_s2(s, p, &t.q, &z, ni, ctx))), quarter);
                rec.push("residuals", format!("hamiltonian {tag}"), Ok(mag(&(&hamiltonian_value(&t.q, p, &z, ni) - s))), half);
            }
        }
    }
    if suites.contains(&"bridges") {
        for n in 1..=4usize {
            for nn in [1.0, 3.0, n as f64] {
                for l in ["0", "i", "inf"] {
                    let z = ctx.complex(0.4, -0.3);
                    let r = cubic::bridge_theorem(n, &z, nn, &lam(l), ctx).map(|v| v.iter().map(mag).fold(0.0, f64::max));
                    rec.push("bridges", format!("bridge n={n} N={nn} lambda={l}"), r, half);
                }
            }
        }
    }
    if suites.contains(&"strings") {
        for n in 1..=5usize {
            for t in [0.0, 0.5, 1.7, 4.0] {
                for nn in [1.0, 5.0] {
                    let r = cubic::string_residuals(n, &ctx.complex(t, 0.0), nn, &lam("0"), ctx)
                        .map(|(a, b)| mag(&a).max(mag(&b)));
                    rec.push("strings", format!("string n={n} t={t} N={nn}"), r, half);
                }
            }
        }
    }
    if suites.contains(&"identities") {
        let t = ctx.complex(0.4, 0.0);
        for n in 1..=3usize {
            let l0 = lam("0");
            rec.push("identities", format!("der_hn n={n}"), cubic::der_hn_residual(n, &t, 2.0, &l0, ctx).map(|r| mag(&r)), quarter);
            rec.push("identities", format!("der_lnd n={n}"), cubic::der_lnd_residual(n, &t, 2.0, &l0, ctx).map(|r| mag(&r)), quarter);
            rec.push("identities", format!("der_pn n={n}"), cubic::der_pn_residual(n, &t, 2.0, &l0, ctx).map(|r| mag(&r)), quarter);
            rec.push("identities", format!("beta_difference n={n}"), cubic::beta_difference_residual(n, &t, ctx).map(|r| mag(&r)), quarter);
        }
        for n in 0..=2usize {
            rec.push("identities", format!("integral n={n}"), cubic::integral_identity(n, 0.5, ctx).map(|c| c.rel_error), 1e-8);
        }
    }
    if suites.contains(&"geometry") {
        match spectral::qd_geometry(100) {
            Ok(g) => {
                rec.push("geometry", "loop_crossing".into(), Ok((g.c - C_REF).abs()), C_TOL);
                rec.push("geometry", "t0".into(), Ok((g.t0 - T0_REF).abs()), T0_TOL);
            }
            Err(e) => rec.push("geometry", "critical_graph".into(), Err(e), 0.0),
        }
    }
    rec.out
}

fn cmd_verify(a: &VerifyArgs, ctx: &PrecCtx) -> Result<Output> {
    let picked: Vec<&str> = a.suite.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if picked.is_empty() {
        return Err(Error::InvalidInput("empty suite selection".into()));
    }
    let suites: Vec<&str> = if picked == ["all"] { SUITES.to_vec() } else { picked };
    if let Some(bad) = suites.iter().find(|s| !SUITES.contains(s)) {
        return Err(Error::InvalidInput(format!("unknown suite {bad:?}; known: {}", SUITES.join(","))));
    }
    let variant = if a.squared_denominator {
        Denominator::SquaredDerivative
    } else {
        Denominator::Standard
    };
    let checks = run_suites(&suites, variant, ctx);
    let failed = checks.iter().filter(|c| !c.passed).count();
    let json = json!({
        "command": "verify",
        "digits": ctx.digits(),
        "suites": suites,
        "squared_denominator": a.squared_denominator,
        "passed": failed == 0,
        "failed": failed,
        "checks": checks,
    });
    let rows = checks
        .iter()
        .map(|c| {
            vec![
                c.suite.to_string(),
                c.name.clone(),
                format!("{:e}", c.value),
                format!("{:e}", c.tolerance),
                c.passed.to_string(),
            ]
        })
        .collect();
    let mut out = Output::new(json, vec!["suite", "name", "value", "tolerance", "passed"], rows);
    if failed > 0 {
        out.code = EXIT_INTERNAL;
    }
    Ok(out)
}

fn cmd_report(a: &ReportArgs, ctx: &PrecCtx) -> Result<Output> {
    let grid = atlas::default_t_grid(a.points, ctx)?;
    let rep = atlas::monotonicity_sweep(a.n_max, &grid, ctx)?;
    let outcome = |o: Outcome| match o {
        Outcome::Pass => "pass",
        Outcome::Fail => "fail",
        Outcome::Indeterminate => "indeterminate",
    };
    let rows = rep
        .points
        .iter()
        .flat_map(|p| {
            p.checks.iter().map(move |c| {
                vec![
                    p.n.to_string(),
                    p.t.to_string(),
                    c.check.as_str().to_string(),
                    outcome(c.outcome).to_string(),
                    format!("{:e}", c.margin),
                ]
            })
        })
        .collect();
    let json = json!({
        "command": "report",
        "violations": rep.violations(),
        "indeterminates": rep.indeterminates(),
        "sweep": rep,
    });
    Ok(Output::new(json, vec!["n", "t", "check", "outcome", "margin"], rows))
}

fn dispatch(cli: &Cli) -> Result<Output> {
    if let Command::Geometry(a) = &cli.command {
        return cmd_geometry(a);
    }
    let ctx = PrecCtx::new(cli.digits)?;
    match &cli.command {
        Command::Eval(a) => cmd_eval(a, &ctx),
        Command::Coeffs(a) => cmd_coeffs(a, &ctx),
        Command::Scan(a) => cmd_scan(a, &ctx),
        Command::Limits(a) => cmd_limits(a, &ctx),
        Command::Verify(a) => cmd_verify(a, &ctx),
        Command::Report(a) => cmd_report(a, &ctx),
        Command::Geometry(_) => unreachable!(),
    }
}

fn render(o: &Output, format: Format) -> std::result::Result<Vec<u8>, String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_vec_pretty(&o.json).map_err(|e| e.to_string())?;
            s.push(b'\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&o.header).map_err(|e| e.to_string())?;
            for r in &o.rows {
                w.write_record(r).map_err(|e| e.to_string())?;
            }
            w.into_inner().map_err(|e| e.to_string())
        }
    }
}

/// Parses `args` (including the program name), runs the command and writes
/// the result to `out` or the `--output` file. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{e}");
            return code;
        }
    };
    let (bytes, code) = match dispatch(&cli) {
        Ok(o) => match render(&o, cli.format) {
            Ok(b) => (b, o.code),
            Err(m) => {
                let _ = writeln!(err, "error: {m}");
                return EXIT_INTERNAL;
            }
        },
        Err(e) => {
            let code = exit_code(&e);
            let _ = writeln!(err, "error: {e}");
            if cli.format == Format::Csv {
                return code;
            }
            let doc = json!({"error": {"kind": e.kind(), "message": e.to_string(), "exit_code": code}});
            let mut b = serde_json::to_vec_pretty(&doc).expect("static document");
            b.push(b'\n');
            (b, code)
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &bytes).map_err(|e| e.to_string()),
        None => out.write_all(&bytes).map_err(|e| e.to_string()),
    };
    if let Err(m) = written {
        let _ = writeln!(err, "error: cannot write output: {m}");
        return EXIT_INTERNAL;
    }
    code
}

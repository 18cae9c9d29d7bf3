//! Command-line front end: argument parsing, dispatch and CSV/JSON output.
//!
//! Exit codes: 0 on success, 1 on a library error (the error name is printed
//! to stderr), 2 on a usage error.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::complexity::{complexity_curve, e_k, linspace, IndexSpec};
use crate::euler::{euler_asymptotic, euler_exact};
use crate::goe::{crt_mean_identity, direct_count_levels, ks_semicircle, sample_goe, IndexSel};
use crate::numerics::chunk_seed;
use crate::parisi::{compare_f1_e0, theta0_legendre};
use crate::{complexity::theta0_closed, Error, Mixture};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Profile,
    Complexity,
    Ek,
    Parisi,
    Duality,
    GoeValidate,
    Euler,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EulerMode {
    Exact,
    Asymptotic,
    Both,
}

#[derive(Debug, Parser)]
#[command(
    name = "spinscape",
    about = "Landscape statistics of mixed spherical spin glasses"
)]
struct Args {
    command: Command,
    /// Mixture as comma-separated `p:weight` pairs (weights are β_p²).
    #[arg(long)]
    mixture: Option<String>,
    /// Fixed index k, or `total` for all critical points.
    #[arg(long)]
    k: Option<String>,
    /// Diverging index fraction γ ∈ (0, 1).
    #[arg(long)]
    gamma: Option<f64>,
    /// Energy grid: LO HI STEPS.
    #[arg(long, num_args = 3, value_names = ["LO", "HI", "STEPS"], allow_negative_numbers = true)]
    u: Option<Vec<f64>>,
    /// Dimension N.
    #[arg(long)]
    n: Option<usize>,
    /// Monte Carlo draws.
    #[arg(long)]
    samples: Option<usize>,
    /// Base seed for all random draws.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output format (json for profile, parisi, duality and goe-validate; csv otherwise).
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Euler evaluation mode.
    #[arg(long, value_enum, default_value_t = EulerMode::Both)]
    mode: EulerMode,
}

/// Validated invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub mixture: Option<Mixture>,
    pub u_range: Option<(f64, f64, usize)>,
    pub index: Option<IndexSpec>,
    pub n: Option<usize>,
    pub samples: Option<usize>,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub mode: EulerMode,
}

/// Usage error: bad flags, malformed values or an unparsable mixture.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError {
    pub kind: &'static str,
    pub message: String,
}

impl UsageError {
    fn new(kind: &'static str, message: impl Into<String>) -> Self {
        UsageError {
            kind,
            message: message.into(),
        }
    }
}

/// Mixture used by `goe-validate` when none is given.
pub const DEFAULT_GOE_MIXTURE: &str = "2:0.5,4:0.5";

/// Parse an argument list (without the program name).
pub fn parse_args<S: AsRef<str>>(argv: &[S]) -> Result<RunConfig, UsageError> {
    let full = std::iter::once("spinscape").chain(argv.iter().map(AsRef::as_ref));
    let a = Args::try_parse_from(full).map_err(|e| match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
            UsageError::new("Help", e.to_string())
        }
        _ => UsageError::new("UsageError", e.to_string()),
    })?;

    let mixture = match &a.mixture {
        Some(s) => Some(
            s.parse::<Mixture>()
                .map_err(|e| UsageError::new("MixtureParseError", format!("{}: {e}", e.name())))?,
        ),
        None if a.command == Command::GoeValidate => {
            Some(DEFAULT_GOE_MIXTURE.parse().expect("valid default"))
        }
        None => return Err(UsageError::new("UsageError", "--mixture is required")),
    };

    let u_range = match &a.u {
        Some(v) => {
            let (lo, hi, steps) = (v[0], v[1], v[2]);
            if steps.fract() != 0.0 || steps < 2.0 {
                return Err(UsageError::new(
                    "UsageError",
                    "STEPS must be an integer ≥ 2",
                ));
            }
            if !(lo < hi) {
                return Err(UsageError::new("UsageError", "need LO < HI"));
            }
            Some((lo, hi, steps as usize))
        }
        None => None,
    };

    let index = match (&a.k, a.gamma) {
        (Some(_), Some(_)) => {
            return Err(UsageError::new("UsageError", "give either --k or --gamma"))
        }
        (Some(k), None) if k == "total" => Some(IndexSpec::Total),
        (Some(k), None) => {
            Some(IndexSpec::Finite(k.parse().map_err(|_| {
                UsageError::new("UsageError", format!("bad --k `{k}`"))
            })?))
        }
        (None, Some(g)) if g > 0.0 && g < 1.0 => Some(IndexSpec::Fraction(g)),
        (None, Some(g)) => {
            return Err(UsageError::new(
                "UsageError",
                format!("--gamma {g} must lie in (0, 1)"),
            ))
        }
        (None, None) => None,
    };

    if a.samples == Some(0) {
        return Err(UsageError::new("UsageError", "--samples must be ≥ 1"));
    }
    let needs_u = matches!(
        a.command,
        Command::Complexity | Command::Duality | Command::Euler
    );
    if needs_u && u_range.is_none() {
        return Err(UsageError::new("UsageError", "--u LO HI STEPS is required"));
    }
    if a.command == Command::Complexity && index.is_none() {
        return Err(UsageError::new("UsageError", "--k or --gamma is required"));
    }
    if a.command == Command::Euler && a.n.is_none() {
        return Err(UsageError::new("UsageError", "--n is required"));
    }

    let default_format = match a.command {
        Command::Complexity | Command::Euler | Command::Ek => Format::Csv,
        _ => Format::Json,
    };
    Ok(RunConfig {
        command: a.command,
        mixture,
        u_range,
        index,
        n: a.n,
        samples: a.samples,
        seed: a.seed,
        output: a.out,
        format: a.format.unwrap_or(default_format),
        mode: a.mode,
    })
}

fn grid(c: &RunConfig) -> Vec<f64> {
    let (lo, hi, steps) = c.u_range.expect("validated");
    linspace(lo, hi, steps)
}

fn key_value_csv(v: &Value) -> String {
    let mut out = String::from("key,value\n");
    if let Value::Object(map) = v {
        for (k, x) in map {
            let s = match x {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            let _ = writeln!(out, "{k},{s}");
        }
    }
    out
}

fn render(v: Value, format: Format) -> String {
    match format {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&v).expect("serializable")
        ),
        Format::Csv => key_value_csv(&v),
    }
}

fn run_profile(c: &RunConfig, mix: &Mixture) -> String {
    let mut v = serde_json::to_value(mix.profile()).expect("serializable");
    v["mixture"] = json!(mix.to_string());
    render(v, c.format)
}

fn run_complexity(c: &RunConfig, mix: &Mixture) -> crate::Result<String> {
    let (lo, hi, steps) = c.u_range.expect("validated");
    let curve = complexity_curve(c.index.expect("validated"), lo, hi, steps, mix)?;
    Ok(match c.format {
        Format::Csv => curve.to_csv(),
        Format::Json => {
            let pts: Vec<Value> = curve
                .points
                .iter()
                .zip(&curve.regimes)
                .map(|(&(u, t), r)| json!({"u": u, "theta": t, "regime": r.label()}))
                .collect();
            render(json!({"index": curve.index, "points": pts}), Format::Json)
        }
    })
}

fn run_ek(c: &RunConfig, mix: &Mixture) -> crate::Result<String> {
    let kmax = match c.index {
        Some(IndexSpec::Finite(k)) => k,
        None => 10,
        Some(_) => return Err(Error::DomainError("ek takes an integer --k".into())),
    };
    let rows = (0..=kmax)
        .map(|k| Ok((k, e_k(k, mix)?)))
        .collect::<crate::Result<Vec<_>>>()?;
    Ok(match c.format {
        Format::Csv => {
            let mut out = String::from("k,e_k\n");
            for (k, e) in rows {
                let _ = writeln!(out, "{k},{e}");
            }
            out
        }
        Format::Json => render(
            json!(rows
                .iter()
                .map(|(k, e)| json!({"k": k, "e_k": e}))
                .collect::<Vec<_>>()),
            Format::Json,
        ),
    })
}

fn run_parisi(c: &RunConfig, mix: &Mixture) -> crate::Result<String> {
    let r = compare_f1_e0(mix)?;
    Ok(render(
        serde_json::to_value(r).expect("serializable"),
        c.format,
    ))
}

fn run_duality(c: &RunConfig, mix: &Mixture) -> String {
    let rows: Vec<(f64, f64, f64, f64)> = grid(c)
        .into_iter()
        .map(|u| {
            let t = theta0_closed(u, mix);
            let (l, b) = theta0_legendre(u, mix);
            (u, t, l, b)
        })
        .collect();
    let max_residual = rows.iter().map(|r| (r.1 - r.2).abs()).fold(0.0, f64::max);
    match c.format {
        Format::Csv => {
            let mut out = String::from("u,theta0,legendre,b,residual\n");
            for (u, t, l, b) in &rows {
                let _ = writeln!(out, "{u},{t},{l},{b},{}", (t - l).abs());
            }
            out
        }
        Format::Json => render(
            json!({"mixture": mix.to_string(), "points": rows.len(), "max_residual": max_residual}),
            Format::Json,
        ),
    }
}

/// Identity estimate vs counting oracle (N = 2) at levels in `--u`
/// (default −1, −0.5, 0), for minima and for all critical points.
fn run_goe_validate(c: &RunConfig, mix: &Mixture) -> crate::Result<String> {
    let n = c.n.unwrap_or(2);
    let samples = c.samples.unwrap_or(10_000);
    let levels = match c.u_range {
        Some(_) => grid(c),
        None => vec![-1.0, -0.5, 0.0],
    };
    let direct = if n == 2 {
        Some(direct_count_levels(
            2,
            mix,
            &levels,
            samples,
            chunk_seed(c.seed, 1),
        )?)
    } else {
        None
    };
    let mut rows = Vec::new();
    for (i, &u) in levels.iter().enumerate() {
        for sel in [IndexSel::Index(0), IndexSel::Total] {
            let e = crt_mean_identity(
                n,
                sel,
                (f64::NEG_INFINITY, u),
                mix,
                samples,
                chunk_seed(c.seed, 0),
            )?;
            let (d, dse) = match (&direct, sel) {
                (Some(d), IndexSel::Index(_)) => (Some(d[i].minima), Some(d[i].minima_se)),
                (Some(d), IndexSel::Total) => (Some(d[i].total), Some(d[i].total_se)),
                (None, _) => (None, None),
            };
            let z = d
                .zip(dse)
                .map(|(d, s)| (e.mean_f64() - d) / (e.stderr().powi(2) + s * s).sqrt());
            let k = match sel {
                IndexSel::Index(k) => k.to_string(),
                IndexSel::Total => "total".into(),
            };
            rows.push((u, k, e.mean_f64(), e.stderr(), d, dse, z));
        }
    }
    let ks = ks_semicircle(&sample_goe(n.max(2) * 50, c.seed)?.eigenvalues);
    Ok(match c.format {
        Format::Csv => {
            let mut out = String::from("u,k,identity,identity_se,direct,direct_se,z\n");
            let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
            for (u, k, m, s, d, dse, z) in &rows {
                let _ = writeln!(out, "{u},{k},{m},{s},{},{},{}", opt(*d), opt(*dse), opt(*z));
            }
            out
        }
        Format::Json => {
            let rs: Vec<Value> = rows
                .iter()
                .map(|(u, k, m, s, d, dse, z)| {
                    json!({"u": u, "k": k, "identity": m, "identity_se": s, "direct": d, "direct_se": dse, "z": z})
                })
                .collect();
            let max_z = rows
                .iter()
                .filter_map(|r| r.6)
                .map(f64::abs)
                .fold(0.0, f64::max);
            render(
                json!({"n": n, "samples": samples, "seed": c.seed, "mixture": mix.to_string(),
                       "ks_semicircle": ks, "max_abs_z": max_z, "rows": rs}),
                Format::Json,
            )
        }
    })
}

fn run_euler(c: &RunConfig, mix: &Mixture) -> crate::Result<String> {
    let n = c.n.expect("validated");
    let us = grid(c);
    let modes: &[&str] = match c.mode {
        EulerMode::Exact => &["exact"],
        EulerMode::Asymptotic => &["asymptotic"],
        EulerMode::Both => &["exact", "asymptotic"],
    };
    let mut rows = Vec::new();
    for &mode in modes {
        let vals: Vec<crate::Result<Option<Value>>> = us
            .par_iter()
            .map(|&u| {
                if mode == "exact" {
                    let v = euler_exact(n, u, mix)?;
                    Ok(Some(
                        json!({"u": u, "sign": v.sign, "log_abs": v.log_abs, "mode": mode}),
                    ))
                } else {
                    match euler_asymptotic(n, u, mix) {
                        Ok(a) => Ok(Some(json!({
                            "u": u, "sign": a.value.sign, "log_abs": a.value.log_abs, "mode": mode,
                            "part": a.part, "exponent": a.exponent,
                            "descriptor": a.descriptor.map(|d| d.to_json()),
                        }))),
                        Err(Error::EdgeWindow(_)) | Err(Error::EdgeRegion(_)) => Ok(None),
                        Err(e) => Err(e),
                    }
                }
            })
            .collect();
        for v in vals {
            if let Some(v) = v? {
                rows.push(v);
            }
        }
    }
    Ok(match c.format {
        Format::Csv => {
            let mut out = String::from("u,sign,log_abs,mode\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    r["u"],
                    r["sign"],
                    r["log_abs"],
                    r["mode"].as_str().unwrap_or("")
                );
            }
            out
        }
        Format::Json => render(
            json!({"n": n, "mixture": mix.to_string(), "rows": rows}),
            Format::Json,
        ),
    })
}

/// Produce the output text for a validated configuration.
pub fn execute(c: &RunConfig) -> crate::Result<String> {
    let mix = c.mixture.as_ref().expect("validated");
    match c.command {
        Command::Profile => Ok(run_profile(c, mix)),
        Command::Complexity => run_complexity(c, mix),
        Command::Ek => run_ek(c, mix),
        Command::Parisi => run_parisi(c, mix),
        Command::Duality => Ok(run_duality(c, mix)),
        Command::GoeValidate => run_goe_validate(c, mix),
        Command::Euler => run_euler(c, mix),
    }
}

/// Size the global worker pool from `SPINSCAPE_THREADS` (0 or unset: automatic).
pub fn configure_threads() {
    if let Some(t) = std::env::var("SPINSCAPE_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
}

/// Run a validated configuration, writing to `--out` or stdout.
pub fn run(c: &RunConfig) -> i32 {
    configure_threads();
    match execute(c) {
        Ok(text) => {
            let written = match &c.output {
                Some(p) => std::fs::write(p, text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            match written {
                Ok(()) => 0,
                Err(e) => {
                    eprintln!("error: IoError: {e}");
                    1
                }
            }
        }
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            1
        }
    }
}

/// Full entry point over an argument list without the program name.
pub fn main_with_args<S: AsRef<str>>(argv: &[S]) -> i32 {
    match parse_args(argv) {
        Ok(c) => run(&c),
        Err(e) if e.kind == "Help" => {
            print!("{}", e.message);
            0
        }
        Err(e) => {
            eprintln!("error: {}: {}", e.kind, e.message.trim_end());
            2
        }
    }
}

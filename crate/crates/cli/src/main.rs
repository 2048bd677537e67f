//! `cell-lab`: KL cells, the ring J and the action of `T_w0`, from the command line.
//!
//! Exit status: 0 on success, 1 when a verification fails, 2 on usage errors,
//! 3 when an internal inconsistency is detected.

mod cache;
mod group;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use cell_lab_core::analysis::{Analysis, AnalysisOptions, Precomputed};
use cell_lab_core::cells::{AsymptoticOptions, DEFAULT_FULL_TABLE_LIMIT};
use cell_lab_core::coxeter::{classify, CoxeterGroup, Elem};
use cell_lab_core::hecke::{kl_strategies, kl_strategy};
use cell_lab_core::laurent::Laurent;
use cell_lab_core::verify::{self, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("verification failed")]
    Verification(Value),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(name = "cell-lab", version, about = "Kazhdan-Lusztig cells, the asymptotic ring J and the longest element")]
struct Cli {
    /// Named Coxeter type such as A3, B2, H3, I2(5) or A1xB2.
    #[arg(long = "type", value_name = "NAME", global = true)]
    ty: Option<String>,
    /// File with a Coxeter matrix, one row per line (`#` starts a comment).
    #[arg(long, value_name = "PATH", global = true)]
    matrix: Option<PathBuf>,
    /// Weight of each generator; defaults to all ones.
    #[arg(long, value_delimiter = ',', value_name = "A,B,...", global = true)]
    weights: Option<Vec<u32>>,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Directory holding the KL / a / gamma cache.
    #[arg(long, value_name = "PATH", global = true)]
    cache_dir: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, value_name = "N", global = true)]
    jobs: Option<usize>,
    /// KL algorithm by name.
    #[arg(long, default_value = "interval", global = true)]
    kl: String,
    /// Above this order, only products needed for cells and distinguished involutions are tabulated.
    #[arg(long, default_value_t = DEFAULT_FULL_TABLE_LIMIT, value_name = "N", global = true)]
    full_table_limit: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Elements with length, weight, inverse and w0 w w0.
    Elements,
    /// Nonzero KL polynomials p_{y,x}.
    Kl,
    /// Left, right and two-sided cells.
    Cells,
    /// a-function, Delta and distinguished flags.
    Afn,
    /// Nonzero gamma_{x,y,z}.
    Gamma,
    /// Distinguished involutions with n_d.
    Dinv,
    /// Per two-sided cell: a, a', the star permutation, eps and theta.
    Star,
    /// phi(T_w0) in the t-basis.
    PhiW0,
    /// Runs verification checks.
    Verify {
        /// Comma-separated names or aliases, `all`, or `list`.
        #[arg(long, value_delimiter = ',', default_value = "all")]
        check: Vec<String>,
    },
}

struct Session {
    analysis: Analysis,
    type_name: Option<String>,
}

fn build(cli: &Cli) -> Result<Session, CliError> {
    let datum = group::datum(cli.ty.as_deref(), cli.matrix.as_deref(), cli.weights.as_deref())?;
    let kl = kl_strategy(&cli.kl).ok_or_else(|| {
        let known: Vec<_> = kl_strategies().iter().map(|s| s.name()).collect();
        CliError::Usage(format!("unknown KL algorithm {:?}; available: {}", cli.kl, known.join(", ")))
    })?;
    let type_name = match &cli.ty {
        Some(t) => Some(t.clone()),
        None => classify(&datum.matrix).ok().map(|ts| ts.iter().map(ToString::to_string).collect::<Vec<_>>().join("x")),
    };
    let group = Arc::new(CoxeterGroup::new(datum).map_err(|e| CliError::Usage(e.to_string()))?);
    let options = AnalysisOptions { kl, asymptotic: AsymptoticOptions { full_table_limit: cli.full_table_limit } };
    let analysis = match &cli.cache_dir {
        None => Analysis::from_group(group, options, Precomputed::default()),
        Some(dir) => {
            let path = cache::path_for(dir, &cache::Fingerprint::of(group.datum()));
            let loaded = cache::load(&path, &group);
            for w in &loaded.warnings {
                eprintln!("cache: ignoring {}: {w}", path.display());
            }
            let reused = loaded.present();
            let (pre, gamma) = loaded.into_parts();
            let analysis = Analysis::from_group(group, options, pre);
            if let Some(rows) = gamma {
                cache::preload_gamma(&analysis, rows);
            }
            let recomputed: Vec<_> =
                ["kl", "a", "distinguished", "gamma"].into_iter().filter(|s| !reused.contains(s)).collect();
            eprintln!("cache: reused [{}] recomputed [{}]", reused.join(","), recomputed.join(","));
            if !recomputed.is_empty() {
                cache::store(&path, &analysis).map_err(|e| CliError::Usage(e.to_string()))?;
            }
            analysis
        }
    };
    Ok(Session { analysis, type_name })
}

fn header(s: &Session) -> Value {
    let g = &s.analysis.group;
    json!({
        "type": s.type_name,
        "matrix": g.datum().matrix,
        "weights": g.datum().weights,
        "order": g.size(),
        "w0": g.name(g.w0()),
    })
}

fn laurent(p: &Laurent) -> Value {
    serde_json::to_value(p).expect("Laurent serializes")
}

fn names(g: &CoxeterGroup, xs: &[Elem]) -> Vec<String> {
    xs.iter().map(|&x| g.name(x)).collect()
}

fn elements(s: &Session) -> Value {
    let g = &s.analysis.group;
    let rows: Vec<Value> = g
        .elements()
        .map(|w| {
            json!({
                "w": g.name(w),
                "length": g.length(w),
                "weight": g.weight(w),
                "inverse": g.name(g.inverse(w)),
                "sigma": g.name(g.sigma(w)),
            })
        })
        .collect();
    json!({ "elements": rows })
}

fn kl(s: &Session) -> Value {
    let g = &s.analysis.group;
    let kl = s.analysis.hecke.kl();
    let rows: Vec<Value> = g
        .elements()
        .flat_map(|x| {
            kl.column(x).iter().map(move |(y, p)| json!({ "y": g.name(*y), "x": g.name(x), "p": laurent(p) }))
        })
        .collect();
    json!({ "kl": rows })
}

fn cells(s: &Session) -> Value {
    let an = &s.analysis;
    let g = &an.group;
    let side = |p: &cell_lab_core::cells::Partition| -> Vec<Value> {
        p.cells()
            .map(|c| json!({ "id": c.0, "members": names(g, p.members(c)), "below": p.dag_edges(c).iter().map(|d| d.0).collect::<Vec<_>>() }))
            .collect()
    };
    let two: Vec<Value> = an
        .cells
        .two_sided
        .cells()
        .map(|c| {
            let ts = &an.cells.two_sided;
            json!({
                "id": c.0,
                "a": an.tables.a_of_cell(c),
                "members": names(g, ts.members(c)),
                "below": ts.dag_edges(c).iter().map(|d| d.0).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "left": side(&an.cells.left), "right": side(&an.cells.right), "two_sided": two })
}

fn afn(s: &Session) -> Value {
    let t = &s.analysis.tables;
    let g = &s.analysis.group;
    let rows: Vec<Value> = g
        .elements()
        .map(|w| json!({ "w": g.name(w), "a": t.a(w), "delta": t.delta(w), "distinguished": t.is_distinguished(w) }))
        .collect();
    json!({ "a": rows })
}

fn gamma(s: &Session) -> Value {
    let t = &s.analysis.tables;
    let g = &s.analysis.group;
    let rows: Vec<Value> = t
        .nonzero_gammas()
        .into_iter()
        .map(|(x, y, z, c)| json!({ "x": g.name(x), "y": g.name(y), "z": g.name(g.inverse(z)), "gamma": c }))
        .collect();
    let scope = if t.is_full() { "all pairs" } else { "pairs within one two-sided cell" };
    json!({ "scope": scope, "gamma": rows })
}

fn dinv(s: &Session) -> Value {
    let t = &s.analysis.tables;
    let g = &s.analysis.group;
    let rows: Vec<Value> = t
        .distinguished()
        .iter()
        .map(|&(d, n)| json!({ "d": g.name(d), "n": n, "a": t.a(d), "left_cell": s.analysis.cells.left.cell_of(d).0 }))
        .collect();
    json!({ "distinguished": rows })
}

fn halt_error(h: verify::Halt) -> CliError {
    if h.internal {
        CliError::Internal(h.reason)
    } else {
        CliError::Verification(json!({ "error": h.reason }))
    }
}

fn star(s: &Session) -> Result<Value, CliError> {
    let an = &s.analysis;
    let g = &an.group;
    let ctx = Context::new(an);
    if !ctx.p_findings().passed() {
        return Err(CliError::Verification(
            json!({ "error": "P-consequence checks failed", "findings": ctx.p_findings() }),
        ));
    }
    let stars = ctx.stars().map_err(halt_error)?;
    let thetas = ctx.thetas().map_err(halt_error)?;
    let rows: Vec<Value> = stars
        .iter()
        .zip(thetas)
        .map(|(st, th)| {
            let pairs: Vec<Value> = st
                .pairs()
                .map(|(u, us, eps)| json!({ "u": g.name(u), "star": g.name(us), "eps": eps, "theta": th.theta(u) }))
                .collect();
            json!({ "cell": st.cell.0, "a": st.a, "a_prime": st.a_prime, "image": st.image.0, "pairs": pairs })
        })
        .collect();
    Ok(json!({ "cells": rows }))
}

fn phi_w0(s: &Session) -> Result<Value, CliError> {
    let an = &s.analysis;
    let g = &an.group;
    let ctx = Context::new(an);
    let (p, _) = ctx.phi_w0().map_err(halt_error)?;
    let rows: Vec<Value> = p.terms().map(|(x, c)| json!({ "t": g.name(x), "coeff": laurent(c) })).collect();
    Ok(json!({ "phi_w0": rows }))
}

fn list_checks() -> Value {
    let rows: Vec<Value> = verify::checks()
        .iter()
        .map(|c| json!({ "name": c.name(), "aliases": c.aliases(), "description": c.description() }))
        .collect();
    json!({ "checks": rows })
}

fn run_verify(s: &Session, names: &[String]) -> Result<Value, CliError> {
    let checks = verify::select(names).map_err(|e| CliError::Usage(e.to_string()))?;
    let ctx = Context::new(&s.analysis);
    let report = verify::run(&ctx, &checks);
    let body = json!({ "passed": report.passed(), "checks": report.results });
    if let Some(reason) = report.internal_error {
        eprintln!("{}", serde_json::to_string_pretty(&body).expect("report serializes"));
        return Err(CliError::Internal(reason));
    }
    if report.passed() {
        Ok(body)
    } else {
        Err(CliError::Verification(body))
    }
}

fn run(cli: &Cli) -> Result<Value, CliError> {
    if let Command::Verify { check } = &cli.command {
        if check.iter().any(|c| c == "list") {
            return Ok(list_checks());
        }
    }
    if let Some(n) = cli.jobs {
        if n == 0 {
            return Err(CliError::Usage("--jobs must be positive".into()));
        }
        // fails only if a pool already exists, in which case it is used as is
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let s = build(cli)?;
    let body = match &cli.command {
        Command::Elements => elements(&s),
        Command::Kl => kl(&s),
        Command::Cells => cells(&s),
        Command::Afn => afn(&s),
        Command::Gamma => gamma(&s),
        Command::Dinv => dinv(&s),
        Command::Star => star(&s).map_err(|e| with_group(e, &s))?,
        Command::PhiW0 => phi_w0(&s).map_err(|e| with_group(e, &s))?,
        Command::Verify { check } => run_verify(&s, check).map_err(|e| with_group(e, &s))?,
    };
    Ok(with_header(body, &s))
}

fn with_header(body: Value, s: &Session) -> Value {
    let mut out = serde_json::Map::new();
    out.insert("group".into(), header(s));
    if let Value::Object(obj) = body {
        out.extend(obj);
    }
    Value::Object(out)
}

fn with_group(e: CliError, s: &Session) -> CliError {
    match e {
        CliError::Verification(body) => CliError::Verification(with_header(body, s)),
        other => other,
    }
}

fn emit(v: &Value, format: Format) {
    let text = match format {
        Format::Json => serde_json::to_string_pretty(v).expect("report serializes") + "\n",
        Format::Table => output::render_table(v),
    };
    // a closed pipe (e.g. `| head`) is not an error
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = std::panic::catch_unwind(|| run(&cli)).unwrap_or_else(|p| {
        let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
        Err(CliError::Internal(msg.unwrap_or_else(|| "panic".into())))
    });
    match result {
        Ok(v) => {
            emit(&v, cli.format);
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let CliError::Verification(v) = &e {
                emit(v, cli.format);
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

//! Command-line interface: argument parsing, subcommands, output and cache.

mod cache;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

pub use cache::{cache_file_name, CacheEntry, SpectrumCache, CACHE_SCHEMA_VERSION};
pub use output::{format_float, to_json, Cell, Table, OUTPUT_SCHEMA_VERSION};

use crate::asymgap::{default_truncation, genfun_limit_check_from, ldp_estimate};
use crate::asymptotics::{clt_sigma2, cumulants, predict, Quantity, Regime};
use crate::error::{Error, Result};
use crate::genmatrix::{build_hypergeometric, build_with, BuildOptions, Route, Tolerance};
use crate::identities::run_all;
use crate::montecarlo::{run as run_mc, SamplerConfig, SamplerKind};
use crate::probabilities::distribution;
use crate::spectrum::{eigendecompose, trace_power, trace_power_oracle, Spectrum, ORACLE_MAX_M, ORACLE_MAX_N};

#[derive(Debug, Parser)]
#[command(
    name = "eginoe",
    version,
    about = "Real-eigenvalue statistics of real elliptic Ginibre matrices"
)]
pub struct Cli {
    /// Directory for cached spectra.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Tolerance for the cross-check between the two matrix constructions.
    #[arg(long, global = true, value_enum, default_value = "default")]
    pub tolerance_profile: Profile,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Profile {
    Strict,
    Default,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Quadrature,
    Hypergeometric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RegimeArg {
    Strong,
    Weak,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SamplerArg {
    GoeAntisymmetric,
    CorrelatedPairs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entries of the generating matrix M_n.
    Matrix {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        tau: f64,
        #[arg(long, value_enum, default_value = "quadrature")]
        route: RouteArg,
    },
    /// Distribution of the number of real eigenvalues of a 2n x 2n matrix.
    Probs {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        tau: f64,
    },
    /// Trace powers Tr(M^m) for m = 1..=m_max.
    Traces {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        tau: f64,
        #[arg(long, default_value_t = 3)]
        m_max: u32,
    },
    /// First three cumulants of the real-eigenvalue count.
    Cumulants {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        tau: f64,
    },
    /// Scaled log p_{N,0} against the large-deviation rate.
    Ldp {
        #[arg(long, value_enum)]
        regime: RegimeArg,
        /// tau (strong) or alpha (weak).
        #[arg(long, allow_negative_numbers = true)]
        param: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        n_grid: Vec<usize>,
        /// Truncation order; defaults to ceil(10 sqrt(N) ln N).
        #[arg(long)]
        k: Option<usize>,
    },
    /// Scaled log-generating function against its limit.
    Genfun {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, allow_negative_numbers = true)]
        tau: f64,
        #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,1,1.5")]
        x_grid: Vec<f64>,
    },
    /// Monte Carlo histogram of real-eigenvalue counts.
    Mc {
        #[arg(long = "N")]
        big_n: usize,
        #[arg(long, allow_negative_numbers = true)]
        tau: f64,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads; the histogram does not depend on this.
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, value_enum, default_value = "goe-antisymmetric")]
        sampler: SamplerArg,
        /// Skip the comparison with the exact distribution.
        #[arg(long)]
        no_exact: bool,
    },
    /// Pass/fail report over the identity checks.
    Identities,
}

/// A command's result in both output shapes.
pub struct Output {
    pub json: Value,
    pub table: Table,
    /// Non-zero exit code with a report still emitted (failed checks).
    pub failure: Option<Error>,
}

struct Context {
    cache: Option<SpectrumCache>,
    build: BuildOptions,
}

impl Context {
    fn spectrum(&self, n: usize, tau: f64, alpha: Option<f64>) -> Result<Spectrum> {
        let route = Route::Quadrature.as_str();
        if let Some(c) = &self.cache {
            if let Some(s) = c.load(n, tau, route) {
                return Ok(s);
            }
        }
        let s = eigendecompose(&build_with(n, tau, &self.build)?)?;
        if let Some(c) = &self.cache {
            c.store(&s, alpha, route)?;
        }
        Ok(s)
    }
}

fn header(command: &str) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("schema_version".into(), json!(OUTPUT_SCHEMA_VERSION));
    m.insert("command".into(), json!(command));
    m
}

fn value<T: Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn cmd_matrix(ctx: &Context, n: usize, tau: f64, route: RouteArg) -> Result<Output> {
    let m = match route {
        RouteArg::Quadrature => build_with(n, tau, &ctx.build)?,
        RouteArg::Hypergeometric => build_hypergeometric(n, tau)?,
    };
    let mut doc = header("matrix");
    doc.insert("n".into(), json!(n));
    doc.insert("tau".into(), json!(tau));
    doc.insert("route".into(), json!(m.route().as_str()));
    doc.insert("entries".into(), value(&m.rows())?);
    let mut t = Table::new(&["j", "k", "entry"]);
    for j in 1..=n {
        for k in 1..=n {
            t.push(vec![j.into(), k.into(), m.entry(j, k).into()]);
        }
    }
    Ok(Output { json: Value::Object(doc), table: t, failure: None })
}

fn cmd_probs(ctx: &Context, n: usize, tau: f64) -> Result<Output> {
    let d = distribution(&ctx.spectrum(n, tau, None)?)?;
    let mut doc = header("probs");
    doc.insert("N".into(), json!(2 * n));
    doc.insert("n".into(), json!(n));
    doc.insert("tau".into(), json!(tau));
    let ks: Vec<usize> = (0..=n).map(|k| 2 * k).collect();
    doc.insert("k".into(), json!(ks));
    doc.insert("probs".into(), json!(d.probs_f64()));
    let logs: Vec<Value> = (0..=n).map(|k| json!(d.log_prob(k))).collect();
    doc.insert("log_probs".into(), Value::Array(logs));
    doc.insert("log_p_zero".into(), json!(d.log_p_zero));
    doc.insert("total".into(), json!(d.total()));
    let mut t = Table::new(&["k", "prob", "log_prob"]);
    for k in 0..=n {
        t.push(vec![(2 * k).into(), d.prob(k).into(), d.log_prob(k).into()]);
    }
    Ok(Output { json: Value::Object(doc), table: t, failure: None })
}

fn cmd_traces(ctx: &Context, n: usize, tau: f64, m_max: u32) -> Result<Output> {
    if m_max == 0 {
        return Err(Error::Argument("--m-max must be >= 1".into()));
    }
    let s = ctx.spectrum(n, tau, None)?;
    let strong = tau > -1.0 && tau < 1.0;
    let mut rows = Vec::new();
    let mut t = Table::new(&["m", "trace", "scaled", "limit", "oracle"]);
    for m in 1..=m_max {
        let tr = trace_power(&s, m);
        let scaled = tr / ((2 * n) as f64).sqrt();
        let limit = if strong {
            predict(Regime::Strong(tau), Quantity::TraceLimit { m })?.map(|p| p.value)
        } else {
            None
        };
        let oracle = if n <= ORACLE_MAX_N && m <= ORACLE_MAX_M {
            Some(trace_power_oracle(n, tau, m)?)
        } else {
            None
        };
        rows.push(json!({"m": m, "trace": tr, "scaled": scaled, "limit": limit, "oracle": oracle}));
        t.push(vec![
            m.into(),
            tr.into(),
            scaled.into(),
            limit.map_or(Cell::Text(String::new()), Cell::Float),
            oracle.map_or(Cell::Text(String::new()), Cell::Float),
        ]);
    }
    let mut doc = header("traces");
    doc.insert("n".into(), json!(n));
    doc.insert("tau".into(), json!(tau));
    doc.insert("rows".into(), Value::Array(rows));
    Ok(Output { json: Value::Object(doc), table: t, failure: None })
}

fn cmd_cumulants(ctx: &Context, n: usize, tau: f64) -> Result<Output> {
    let s = ctx.spectrum(n, tau, None)?;
    let k = cumulants(&s, 3)?;
    let big_n = 2 * n;
    let mut doc = header("cumulants");
    doc.insert("n".into(), json!(n));
    doc.insert("tau".into(), json!(tau));
    doc.insert("kappa".into(), json!(k));
    let mut t = Table::new(&["quantity", "exact", "predicted"]);
    let (mut mean_pred, mut var_pred, mut sigma_pred) = (None, None, None);
    if tau > -1.0 && tau < 1.0 {
        let r = Regime::Strong(tau);
        let scale = r.scale(big_n);
        mean_pred = predict(r, Quantity::MeanCount)?.map(|p| p.value * scale);
        var_pred = predict(r, Quantity::VarCount)?.map(|p| p.value * scale);
        sigma_pred = Some(clt_sigma2(r)?);
    }
    let sigma = if k[0] > 0.0 { k[1] / k[0] } else { 0.0 };
    doc.insert(
        "strong_regime_comparison".into(),
        json!({
            "mean": k[0], "mean_predicted": mean_pred,
            "variance": k[1], "variance_predicted": var_pred,
            "sigma2": sigma, "sigma2_predicted": sigma_pred,
        }),
    );
    let opt = |v: Option<f64>| v.map_or(Cell::Text(String::new()), Cell::Float);
    t.push(vec!["kappa1".into(), k[0].into(), opt(mean_pred)]);
    t.push(vec!["kappa2".into(), k[1].into(), opt(var_pred)]);
    t.push(vec!["kappa3".into(), k[2].into(), Cell::Text(String::new())]);
    t.push(vec!["sigma2".into(), sigma.into(), opt(sigma_pred)]);
    Ok(Output { json: Value::Object(doc), table: t, failure: None })
}

fn cmd_ldp(ctx: &Context, regime: RegimeArg, param: f64, grid: &[usize], k: Option<usize>) -> Result<Output> {
    let r = match regime {
        RegimeArg::Strong => Regime::Strong(param),
        RegimeArg::Weak => Regime::Weak(param),
    };
    r.validate()?;
    let alpha = matches!(regime, RegimeArg::Weak).then_some(param);
    let mut rows = Vec::new();
    let mut t = Table::new(&[
        "N", "tau", "scaled_log_p", "limit", "relation", "k_used", "truncated", "remainder", "remainder_bound",
        "sandwich_holds",
    ]);
    for &n in grid {
        let s = ctx.spectrum(n, r.tau_at(n), alpha)?;
        let e = ldp_estimate(&s, r, k.unwrap_or_else(|| default_truncation(2 * n)))?;
        t.push(vec![
            e.big_n.into(),
            e.tau.into(),
            e.scaled_log_p.into(),
            e.limit.into(),
            value(&e.relation)?.as_str().unwrap_or_default().into(),
            e.k_used.into(),
            e.truncated.into(),
            e.remainder.into(),
            e.remainder_bound.into(),
            e.sandwich_holds.into(),
        ]);
        rows.push(value(&e)?);
    }
    let mut doc = header("ldp");
    doc.insert("regime".into(), json!(r.name()));
    doc.insert("param".into(), json!(param));
    doc.insert("rows".into(), Value::Array(rows));
    Ok(Output { json: Value::Object(doc), table: t, failure: None })
}

fn cmd_genfun(ctx: &Context, grid: &[usize], tau: f64, xs: &[f64]) -> Result<Output> {
    let spectra = grid.iter().map(|&n| ctx.spectrum(n, tau, None)).collect::<Result<Vec<_>>>()?;
    let refs: Vec<&Spectrum> = spectra.iter().collect();
    let table = genfun_limit_check_from(&refs, xs)?;
    let mut t = Table::new(&["N", "x", "finite", "limit", "abs_error"]);
    for r in &table.rows {
        t.push(vec![r.big_n.into(), r.x.into(), r.finite.into(), r.limit.into(), r.abs_error.into()]);
    }
    let mut doc = header("genfun");
    doc.insert("tau".into(), json!(tau));
    doc.insert("rows".into(), value(&table.rows)?);
    let shrink: Vec<Value> = table
        .shrinking
        .iter()
        .map(|(x, ok)| json!({"x": x, "error_shrinking": ok}))
        .collect();
    doc.insert("shrinking".into(), Value::Array(shrink));
    Ok(Output { json: Value::Object(doc), table: t, failure: None })
}

/// Largest half-dimension for which `mc` attaches the exact distribution.
const MC_EXACT_MAX_N: usize = 2000;

#[allow(clippy::too_many_arguments)]
fn cmd_mc(
    ctx: &Context,
    big_n: usize,
    tau: f64,
    samples: u64,
    seed: u64,
    workers: Option<usize>,
    sampler: SamplerArg,
    no_exact: bool,
) -> Result<Output> {
    let config = SamplerConfig {
        n: big_n,
        tau,
        samples,
        seed,
        workers: workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get())),
        sampler: match sampler {
            SamplerArg::GoeAntisymmetric => SamplerKind::GoeAntisymmetric,
            SamplerArg::CorrelatedPairs => SamplerKind::CorrelatedPairs,
        },
    };
    config.validate()?;
    let h = run_mc(&config)?;
    let mut doc = header("mc");
    doc.insert("histogram".into(), value(&h)?);
    let mut t = Table::new(&["k", "count", "frequency", "exact", "z"]);
    let exact = if !no_exact && big_n / 2 <= MC_EXACT_MAX_N {
        Some(distribution(&ctx.spectrum(big_n / 2, tau, None)?)?)
    } else {
        None
    };
    let mut cmp = Vec::new();
    for kk in 0..=big_n / 2 {
        let k = 2 * kk;
        let c = h.counts.get(&k).copied().unwrap_or(0);
        let f = h.frequency(k);
        let (p, z) = match &exact {
            Some(d) => {
                let p = d.prob(kk);
                let se = (p * (1.0 - p) / h.samples as f64).sqrt();
                let z = if se > 0.0 { (f - p) / se } else if f == p { 0.0 } else { f64::INFINITY };
                (Some(p), Some(z))
            }
            None => (None, None),
        };
        if c > 0 || p.is_some_and(|p| p > 1e-12) {
            cmp.push(json!({"k": k, "count": c, "frequency": f, "exact": p, "z": z}));
            let opt = |v: Option<f64>| v.map_or(Cell::Text(String::new()), Cell::Float);
            t.push(vec![k.into(), c.into(), f.into(), opt(p), opt(z)]);
        }
    }
    doc.insert("comparison".into(), Value::Array(cmp));
    if let Some(d) = &exact {
        let mean: f64 = (0..=big_n / 2).map(|k| 2.0 * k as f64 * d.prob(k)).sum();
        let (emp_mean, emp_var) = h.mean_variance();
        doc.insert(
            "moments".into(),
            json!({"empirical_mean": emp_mean, "empirical_variance": emp_var, "exact_mean": mean}),
        );
    }
    Ok(Output { json: Value::Object(doc), table: t, failure: None })
}

fn cmd_identities() -> Result<Output> {
    let checks = run_all()?;
    let mut t = Table::new(&["name", "passed", "cases", "max_error", "tolerance"]);
    for c in &checks {
        t.push(vec![
            c.name.clone().into(),
            c.passed.into(),
            c.cases.into(),
            c.max_error.into(),
            c.tolerance.into(),
        ]);
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    let mut doc = header("identities");
    doc.insert("all_passed".into(), json!(failed.is_empty()));
    doc.insert("checks".into(), value(&checks)?);
    let failure = (!failed.is_empty()).then(|| Error::Invariant(format!("identity checks failed: {}", failed.join(", "))));
    Ok(Output { json: Value::Object(doc), table: t, failure })
}

/// Executes a parsed command.
pub fn execute(cli: &Cli) -> Result<Output> {
    let build = BuildOptions {
        tolerance: match cli.tolerance_profile {
            Profile::Strict => Tolerance::STRICT,
            Profile::Default => Tolerance::DEFAULT,
        },
        ..BuildOptions::default()
    };
    let cache = cli.cache_dir.as_ref().map(SpectrumCache::new).transpose()?;
    let ctx = Context { cache, build };
    match &cli.command {
        Command::Matrix { n, tau, route } => cmd_matrix(&ctx, *n, *tau, *route),
        Command::Probs { n, tau } => cmd_probs(&ctx, *n, *tau),
        Command::Traces { n, tau, m_max } => cmd_traces(&ctx, *n, *tau, *m_max),
        Command::Cumulants { n, tau } => cmd_cumulants(&ctx, *n, *tau),
        Command::Ldp { regime, param, n_grid, k } => cmd_ldp(&ctx, *regime, *param, n_grid, *k),
        Command::Genfun { n, tau, x_grid } => cmd_genfun(&ctx, n, *tau, x_grid),
        Command::Mc { big_n, tau, samples, seed, workers, sampler, no_exact } => {
            cmd_mc(&ctx, *big_n, *tau, *samples, *seed, *workers, *sampler, *no_exact)
        }
        Command::Identities => cmd_identities(),
    }
}

/// Machine-readable error document written to stderr.
pub fn error_json(kind: &str, message: &str) -> String {
    let doc = json!({
        "schema_version": OUTPUT_SCHEMA_VERSION,
        "error": {"kind": kind, "message": message},
    });
    to_json(&doc).unwrap_or_else(|_| format!("{{\"error\": {{\"kind\": \"{kind}\"}}}}\n"))
}

/// Exit code for an error kind.
pub fn exit_code(kind: &str) -> i32 {
    match kind {
        "argument" | "config" => 2,
        _ => 1,
    }
}

/// Parses `args`, runs the command, writes to `out`/`err` and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let _ = err.write_all(error_json("argument", e.to_string().trim()).as_bytes());
            return 2;
        }
    };
    let result = execute(&cli).and_then(|o| {
        let text = match cli.format {
            Format::Json => to_json(&o.json)?,
            Format::Csv => o.table.to_csv()?,
        };
        out.write_all(text.as_bytes())?;
        Ok(o.failure)
    });
    match result {
        Ok(None) => 0,
        Ok(Some(e)) | Err(e) => {
            let _ = err.write_all(error_json(e.kind(), &e.to_string()).as_bytes());
            exit_code(e.kind())
        }
    }
}

//! Command-line front end: reproducible integration runs with
//! machine-readable reports.
//!
//! Exit codes: 0 = verdict computed (even a failing verdict), 1 = bad
//! arguments, 2 = operational error (the message carries the library error
//! name verbatim).

mod expr;
mod wire;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use gaugequad::{
    bartle_condition_check, cauchy_extension_check, check_limit_integrability,
    check_value_interchange, cousin_divide, dominated_convergence, fatou_check, gauge_integrate,
    halfline_gauge_integrate, iterated_integrate, lookup, mesh_limit_riemann,
    monotone_convergence, oscillation_criterion, simple_integrability_check,
    tonelli_condition_check, uniform_riemann_condition_check, variation_zero_test,
    axis_pinch_product_gauge, export_wire, list_entries, CorpusEntry, GaugeError, GaugeFamily,
    IntegrandHandle, Interval, IntervalPointFn, IterationOrder, ProductGauge, RiemannVerdict,
    TailGauge, DEFAULT_MAX_DEPTH, DEFAULT_VARIATION_K, F17,
};

use wire::{wrap, IntegralWire};

#[derive(Parser)]
#[command(
    name = "gaugequad",
    version,
    about = "Gauge (Henstock-Kurzweil) integration toolkit",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Gauge-integrate a corpus entry or an expression in x
    Integrate(IntegrateArgs),
    /// Darboux upper/lower sums on uniform meshes (needs an oscillation oracle)
    Darboux(DarbouxArgs),
    /// Variation estimates of an interval-point function down an eps schedule
    Variation(VariationArgs),
    /// Improper integrals: half-line gauges, Cauchy extensions, uniform conditions
    Improper(ImproperArgs),
    /// Convergence criteria for sequences of integrands
    Converge(ConvergeArgs),
    /// Iterated double integrals and the order-interchange condition
    Tonelli(TonelliArgs),
    /// Inspect the built-in corpus of integrands, sequences, and families
    Corpus(CorpusArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ReportFormat {
    Json,
    Csv,
    Plain,
}

#[derive(Args, Serialize)]
struct IntegrateArgs {
    /// Integrand: "corpus:NAME" or an expression in x (e.g. "x*sin(x)")
    #[arg(long = "fn")]
    #[serde(rename = "fn")]
    func: String,
    /// Left endpoint (ignored when a corpus gauge recipe fixes the span)
    #[arg(long)]
    a: Option<f64>,
    /// Right endpoint (ignored when a corpus gauge recipe fixes the span)
    #[arg(long)]
    b: Option<f64>,
    /// Finest eps level of the schedule
    #[arg(long, default_value_t = 1e-3)]
    eps_min: f64,
    /// Coarsest eps level; the schedule descends by decades to eps-min
    #[arg(long, default_value_t = 1e-1)]
    eps_max: f64,
    /// Randomized divisions sampled per eps level
    #[arg(long, default_value_t = 4)]
    trials: u32,
    /// RNG seed; the GAUGEQUAD_SEED environment variable overrides this
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Bisection depth cap for division construction
    #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
    max_depth: u32,
    #[arg(long, value_enum, default_value = "json")]
    report: ReportFormat,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write one deterministic fine division at eps-min as CSV (u,v,tag)
    #[arg(long)]
    dump_division: Option<PathBuf>,
    /// Upper bound on worker threads used by the numeric kernels
    #[arg(long, default_value_t = 1)]
    threads: u32,
}

#[derive(Args, Serialize)]
struct DarbouxArgs {
    /// Integrand: "corpus:NAME" (expressions carry no oscillation oracle and are refused)
    #[arg(long = "fn")]
    #[serde(rename = "fn")]
    func: String,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    /// Number of dyadic mesh levels (mesh_j = width / 2^j)
    #[arg(long, default_value_t = 10)]
    levels: u32,
    /// Gap tolerance for the integrability verdict
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    /// Oscillation threshold for the per-mesh exceedance length column
    #[arg(long, default_value_t = 1e-2)]
    osc_eps: f64,
    #[arg(long, value_enum, default_value = "csv")]
    report: ReportFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct VariationArgs {
    /// Interval-point function: "cell-length", "saks:NAME" (corpus entry with
    /// a primitive), or an expression f giving h(I,x) = f(x)|I|
    #[arg(long = "h")]
    #[serde(rename = "h")]
    h_spec: String,
    /// Gauge family: "constant" or "corpus:NAME" (entry's recipe)
    #[arg(long, default_value = "constant")]
    gauge: String,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long, default_value_t = 1e-3)]
    eps_min: f64,
    #[arg(long, default_value_t = 1e-1)]
    eps_max: f64,
    #[arg(long, default_value_t = 8)]
    trials: u32,
    /// Verdict passes when every estimate stays within k * eps
    #[arg(long, default_value_t = DEFAULT_VARIATION_K)]
    k: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    report: ReportFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ImproperMode {
    Halfline,
    Cauchy,
    Simple,
    Uniform,
}

#[derive(Args, Serialize)]
struct ImproperArgs {
    #[arg(long = "fn")]
    #[serde(rename = "fn")]
    func: String,
    #[arg(long, value_enum)]
    mode: ImproperMode,
    /// Left endpoint of the half-line (halfline/simple/uniform modes)
    #[arg(long, default_value_t = 0.0)]
    origin: f64,
    /// halfline: least tail cut at level eps is origin + coeff / eps^pow
    #[arg(long, default_value_t = 1.0)]
    tail_coeff: f64,
    #[arg(long, default_value_t = 1.0)]
    tail_pow: f64,
    /// cauchy: compact span endpoints; cuts approach the singular end
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    /// cauchy: number of cuts b - width*10^-k, k = 1..cuts
    #[arg(long, default_value_t = 6)]
    cuts: u32,
    /// cauchy: tolerance for fitting the limit of the cut trace
    #[arg(long, default_value_t = 1e-2)]
    tol: f64,
    /// simple: number of doubling-endpoint / halving-mesh steps
    #[arg(long, default_value_t = 6)]
    steps: u32,
    /// uniform: far-tail threshold B
    #[arg(long, default_value_t = 8.0)]
    big_b: f64,
    /// uniform: mesh bound delta
    #[arg(long, default_value_t = 1e-2)]
    delta: f64,
    #[arg(long, default_value_t = 1e-3)]
    eps_min: f64,
    #[arg(long, default_value_t = 1e-1)]
    eps_max: f64,
    #[arg(long, default_value_t = 4)]
    trials: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct ConvergeArgs {
    /// Sequence entry: "corpus:NAME"
    #[arg(long)]
    family: String,
    /// Criterion: 4.1.1 | 4.1.2 | 4.1.9 | mct | dct | fatou
    #[arg(long)]
    theorem: String,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long, default_value_t = 1e-3)]
    eps_min: f64,
    #[arg(long, default_value_t = 1e-1)]
    eps_max: f64,
    #[arg(long, default_value_t = 50)]
    nmax: u32,
    #[arg(long, default_value_t = 2)]
    trials: u32,
    /// dct: lower bound P on index-mixed sums
    #[arg(long, default_value_t = 0.0)]
    p: f64,
    /// dct: upper bound Q on index-mixed sums
    #[arg(long, default_value_t = 1.0)]
    q: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum OrderArg {
    Xy,
    Yx,
    Both,
}

#[derive(Args, Serialize)]
struct TonelliArgs {
    /// Two-variable family entry: "corpus:NAME"
    #[arg(long)]
    family: String,
    #[arg(long, value_enum, default_value = "both")]
    order: OrderArg,
    #[arg(long, default_value_t = 1e-3)]
    eps_min: f64,
    #[arg(long, default_value_t = 1e-1)]
    eps_max: f64,
    #[arg(long, default_value_t = 2)]
    trials: u32,
    /// Scale of the axis-pinching product gauge; defaults to 0.1 for entries
    /// that are singular along the axes, otherwise a constant gauge is used
    #[arg(long)]
    pinch_scale: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CorpusArgs {
    #[command(subcommand)]
    cmd: CorpusCmd,
}

#[derive(Subcommand)]
enum CorpusCmd {
    /// One line per entry: name, kind, notes
    List,
    /// Full registry as JSON (known values as 17-digit decimal strings)
    Export,
    /// One entry as JSON
    Show { name: String },
}

enum CliError {
    BadArgs(String),
    Op(GaugeError),
    Io(std::io::Error),
}

impl From<GaugeError> for CliError {
    fn from(e: GaugeError) -> Self {
        CliError::Op(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                // clap's default exit code for bad arguments is 2; this tool
                // reserves 2 for operational errors
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::BadArgs(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Op(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(CliError::Io(e)) => {
            eprintln!("i/o error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.cmd {
        Cmd::Integrate(a) => run_integrate(a),
        Cmd::Darboux(a) => run_darboux(a),
        Cmd::Variation(a) => run_variation(a),
        Cmd::Improper(a) => run_improper(a),
        Cmd::Converge(a) => run_converge(a),
        Cmd::Tonelli(a) => run_tonelli(a),
        Cmd::Corpus(a) => run_corpus(a),
    }
}

// ---------------------------------------------------------------- helpers

/// GAUGEQUAD_SEED overrides any --seed flag.
fn effective_seed(flag: u64) -> CliResult<u64> {
    match std::env::var("GAUGEQUAD_SEED") {
        Ok(s) => s
            .trim()
            .parse::<u64>()
            .map_err(|_| CliError::BadArgs(format!("GAUGEQUAD_SEED is not a u64: '{s}'"))),
        Err(_) => Ok(flag),
    }
}

/// Eps schedule descending by decades from eps_max, always ending at eps_min.
fn decade_schedule(eps_max: f64, eps_min: f64) -> CliResult<Vec<f64>> {
    if !(eps_min > 0.0 && eps_min <= eps_max) {
        return Err(CliError::BadArgs(format!(
            "need 0 < eps-min <= eps-max, got eps-min {eps_min}, eps-max {eps_max}"
        )));
    }
    let mut v = Vec::new();
    let mut e = eps_max;
    while e > eps_min * 1.000_000_1 {
        v.push(e);
        e /= 10.0;
    }
    v.push(eps_min);
    Ok(v)
}

fn span_from(a: Option<f64>, b: Option<f64>) -> CliResult<Interval> {
    let (lo, hi) = (a.unwrap_or(0.0), b.unwrap_or(1.0));
    Interval::new(lo, hi).map_err(CliError::Op)
}

enum FnSpec {
    Corpus(CorpusEntry),
    Expr(expr::Compiled),
}

fn resolve_fn(spec: &str) -> CliResult<FnSpec> {
    if let Some(name) = spec.strip_prefix("corpus:") {
        Ok(FnSpec::Corpus(lookup(name)?))
    } else {
        let c = expr::parse(spec).map_err(|e| CliError::BadArgs(e.to_string()))?;
        Ok(FnSpec::Expr(c))
    }
}

fn expr_handle(c: &expr::Compiled) -> IntegrandHandle {
    let c2 = c.clone();
    // no oscillation oracle and no primitive: Darboux-style operations refuse
    IntegrandHandle::new(c.source.clone(), move |x| c2.eval(x))
}

fn lookup_sequence(family: &str) -> CliResult<CorpusEntry> {
    let name = family.strip_prefix("corpus:").unwrap_or(family);
    Ok(lookup(name)?)
}

fn emit(out: &Option<PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn emit_json<T: Serialize>(out: &Option<PathBuf>, report: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    emit(out, &text)
}

fn d17(v: f64) -> String {
    format!("{v:.16e}")
}

// -------------------------------------------------------------- integrate

fn run_integrate(mut args: IntegrateArgs) -> CliResult<()> {
    // the report's config block echoes the seed actually used
    args.seed = effective_seed(args.seed)?;
    let seed = args.seed;
    let schedule = decade_schedule(args.eps_max, args.eps_min)?;
    let (handle, family) = match resolve_fn(&args.func)? {
        FnSpec::Corpus(entry) => {
            let h = entry.integrand()?;
            let fam = match entry.gauge_recipe {
                Some(fam) => fam,
                None => GaugeFamily::constant(span_from(args.a, args.b)?),
            };
            (h, fam)
        }
        FnSpec::Expr(c) => {
            let span = span_from(args.a, args.b)?;
            (expr_handle(&c), GaugeFamily::constant(span))
        }
    };

    let report = gauge_integrate(&handle, &family, &schedule, args.trials.max(1), seed)?;

    if let Some(path) = &args.dump_division {
        let g = family.at(*schedule.last().unwrap());
        let d = cousin_divide(&g, family.span(), args.max_depth)?;
        std::fs::write(path, d.to_csv())?;
    }

    match args.report {
        ReportFormat::Json => {
            let body = IntegralWire::from(&report);
            emit_json(&args.out, &wrap("integrate", &args, &schedule, body))
        }
        ReportFormat::Csv => {
            let mut text = String::from("eps,sum,spread,n_cells\n");
            for t in &report.eps_trace {
                text.push_str(&format!(
                    "{},{},{},{}\n",
                    d17(t.eps),
                    d17(t.sum),
                    d17(t.spread),
                    t.n_cells
                ));
            }
            emit(&args.out, &text)
        }
        ReportFormat::Plain => {
            let mut text = format!(
                "integral of {} over [{}, {}]: {} (converged: {})\n",
                handle.name(),
                family.span().lo(),
                family.span().hi(),
                report.value,
                report.converged
            );
            for t in &report.eps_trace {
                text.push_str(&format!(
                    "  eps {:>9.3e}  sum {:+.12e}  spread {:.3e}  cells {}\n",
                    t.eps, t.sum, t.spread, t.n_cells
                ));
            }
            emit(&args.out, &text)
        }
    }
}

// ---------------------------------------------------------------- darboux

fn run_darboux(args: DarbouxArgs) -> CliResult<()> {
    let (handle, span) = match resolve_fn(&args.func)? {
        FnSpec::Corpus(entry) => {
            let span = match (&entry.gauge_recipe, args.a, args.b) {
                (Some(fam), None, None) => fam.span(),
                _ => span_from(args.a, args.b)?,
            };
            (entry.integrand()?, span)
        }
        FnSpec::Expr(c) => (expr_handle(&c), span_from(args.a, args.b)?),
    };
    if !handle.has_osc_oracle() {
        return Err(GaugeError::OracleRequired {
            op: "darboux",
            what: "an oscillation oracle",
            name: handle.name().to_string(),
        }
        .into());
    }
    let levels = args.levels.clamp(1, 24);
    let meshes: Vec<f64> = (1..=levels)
        .map(|j| span.width() / (2.0f64).powi(j as i32))
        .collect();
    let verdict = mesh_limit_riemann(&handle, span, &meshes, args.tol)?;
    let osc = oscillation_criterion(&handle, span, args.osc_eps, &meshes, args.tol)?;
    let rows = wire::mesh_rows(verdict.trace(), &osc.lengths);

    match args.report {
        ReportFormat::Csv => {
            let mut text = String::from("mesh,upper,lower,gap,osc_length\n");
            for (m, &(_, len)) in verdict.trace().iter().zip(&osc.lengths) {
                text.push_str(&format!(
                    "{},{},{},{},{}\n",
                    d17(m.mesh),
                    d17(m.upper),
                    d17(m.lower),
                    d17(m.gap()),
                    d17(len)
                ));
            }
            emit(&args.out, &text)
        }
        ReportFormat::Json => {
            let body = wire::darboux_wire(&verdict, rows, osc.integrable);
            emit_json(&args.out, &wrap("darboux", &args, &meshes, body))
        }
        ReportFormat::Plain => {
            let mut text = format!("darboux sums of {} on [{}, {}]\n", handle.name(), span.lo(), span.hi());
            for (m, &(_, len)) in verdict.trace().iter().zip(&osc.lengths) {
                text.push_str(&format!(
                    "  mesh {:>10.4e}  upper {:+.8e}  lower {:+.8e}  gap {:.3e}  osc_length {:.3e}\n",
                    m.mesh, m.upper, m.lower, m.gap(), len
                ));
            }
            match &verdict {
                RiemannVerdict::Integrable { value, .. } => {
                    text.push_str(&format!("Riemann integrable, value {value}\n"));
                }
                RiemannVerdict::NotRiemannIntegrable { gap, .. } => {
                    text.push_str(&format!("not Riemann integrable, final gap {gap}\n"));
                }
            }
            emit(&args.out, &text)
        }
    }
}

// -------------------------------------------------------------- variation

fn run_variation(mut args: VariationArgs) -> CliResult<()> {
    // the report's config block echoes the seed actually used
    args.seed = effective_seed(args.seed)?;
    let seed = args.seed;
    let schedule = decade_schedule(args.eps_max, args.eps_min)?;
    let h = if args.h_spec == "cell-length" {
        IntervalPointFn::cell_length()
    } else if let Some(name) = args.h_spec.strip_prefix("saks:") {
        let entry = lookup(name.strip_prefix("corpus:").unwrap_or(name))?;
        let handle = entry.integrand()?;
        if !handle.has_primitive() {
            return Err(GaugeError::OracleRequired {
                op: "variation",
                what: "a primitive",
                name: handle.name().to_string(),
            }
            .into());
        }
        let h2 = handle.clone();
        let h3 = handle.clone();
        IntervalPointFn::sum_minus_increment(
            move |x| h2.eval(x),
            move |x| h3.primitive_at("variation", x).unwrap_or(f64::NAN),
        )
    } else {
        let c = expr::parse(&args.h_spec).map_err(|e| CliError::BadArgs(e.to_string()))?;
        IntervalPointFn::weighted_length(move |x| c.eval(x))
    };

    let family = if args.gauge == "constant" {
        GaugeFamily::constant(span_from(args.a, args.b)?)
    } else if let Some(name) = args.gauge.strip_prefix("corpus:") {
        let entry = lookup(name)?;
        entry.gauge_recipe.ok_or_else(|| {
            CliError::Op(GaugeError::InvalidArgument(format!(
                "corpus entry '{name}' has no gauge recipe"
            )))
        })?
    } else {
        return Err(CliError::BadArgs(format!(
            "unknown gauge '{}': use 'constant' or 'corpus:NAME'",
            args.gauge
        )));
    };

    let report = variation_zero_test(&h, &family, &schedule, args.trials.max(1), args.k, seed)?;

    match args.report {
        ReportFormat::Csv => {
            let mut text = String::from("eps,estimate\n");
            for &(eps, est) in &report.trace {
                text.push_str(&format!("{},{}\n", d17(eps), d17(est)));
            }
            emit(&args.out, &text)
        }
        ReportFormat::Json => {
            let body = wire::VariationWire {
                trace: report.trace.iter().map(|&(e, v)| (F17(e), F17(v))).collect(),
                k_factor: F17(report.k_factor),
                is_variation_zero: report.is_variation_zero,
            };
            emit_json(&args.out, &wrap("variation", &args, &schedule, body))
        }
        ReportFormat::Plain => {
            let mut text = format!("variation of {} under {}\n", h.label(), family.label());
            for &(eps, est) in &report.trace {
                text.push_str(&format!("  eps {eps:>9.3e}  estimate {est:.6e}\n"));
            }
            text.push_str(&format!("variation zero: {}\n", report.is_variation_zero));
            emit(&args.out, &text)
        }
    }
}

// --------------------------------------------------------------- improper

fn run_improper(mut args: ImproperArgs) -> CliResult<()> {
    // the report's config block echoes the seed actually used
    args.seed = effective_seed(args.seed)?;
    let seed = args.seed;
    let schedule = decade_schedule(args.eps_max, args.eps_min)?;
    let (handle, recipe) = match resolve_fn(&args.func)? {
        FnSpec::Corpus(entry) => {
            let recipe = entry.gauge_recipe.clone();
            (entry.integrand()?, recipe)
        }
        FnSpec::Expr(c) => (expr_handle(&c), None),
    };

    match args.mode {
        ImproperMode::Halfline => {
            let origin = args.origin;
            let (coeff, pow) = (args.tail_coeff, args.tail_pow);
            if !(coeff > 0.0) || !(pow >= 0.0) {
                return Err(CliError::BadArgs(
                    "halfline mode needs tail-coeff > 0 and tail-pow >= 0".into(),
                ));
            }
            let tg = TailGauge::constant_inner(
                format!("halfline({})", handle.name()),
                origin,
                move |eps| origin + coeff / eps.powf(pow),
            );
            let r = halfline_gauge_integrate(&handle, &tg, &schedule, args.trials.max(1), seed)?;
            emit_json(
                &args.out,
                &wrap("improper", &args, &schedule, IntegralWire::from(&r)),
            )
        }
        ImproperMode::Cauchy => {
            let family = match recipe {
                Some(fam) if args.a.is_none() && args.b.is_none() => fam,
                _ => GaugeFamily::constant(span_from(args.a, args.b)?),
            };
            let span = family.span();
            let cuts: Vec<f64> = (1..=args.cuts.clamp(2, 14))
                .map(|k| span.hi() - span.width() * (10.0f64).powi(-(k as i32)))
                .collect();
            let r = cauchy_extension_check(
                &handle,
                &family,
                &cuts,
                &schedule,
                args.trials.max(1),
                args.tol,
                seed,
            )?;
            emit_json(
                &args.out,
                &wrap("improper", &args, &schedule, wire::CauchyWire::from(&r)),
            )
        }
        ImproperMode::Simple => {
            let steps = args.steps.clamp(2, 20);
            let b_schedule: Vec<f64> = (1..=steps)
                .map(|k| args.origin + (2.0f64).powi(k as i32 + 2))
                .collect();
            let mesh_schedule: Vec<f64> =
                (1..=steps).map(|k| (2.0f64).powi(-(k as i32 + 2))).collect();
            let r = simple_integrability_check(
                &handle,
                args.origin,
                &b_schedule,
                &mesh_schedule,
                args.tol,
            )?;
            emit_json(
                &args.out,
                &wrap("improper", &args, &schedule, wire::SimpleWire::from(&r)),
            )
        }
        ImproperMode::Uniform => {
            let r = uniform_riemann_condition_check(
                &handle,
                args.origin,
                args.big_b,
                args.delta,
                args.eps_min,
                args.trials.max(1),
                seed,
            )?;
            emit_json(
                &args.out,
                &wrap("improper", &args, &schedule, wire::UniformWire::from(&r)),
            )
        }
    }
}

// --------------------------------------------------------------- converge

#[derive(Serialize)]
struct ConvergeWire {
    theorem: String,
    verdict: String,
    holds: bool,
    eps_levels: Option<Vec<(F17, F17, F17)>>,
    per_n_trace: Option<Vec<(u32, F17)>>,
    witness_n: Option<u32>,
    limit_integral: Option<F17>,
    fitted_sup: Option<F17>,
    envelope_samples: Option<Vec<(F17, F17)>>,
    lim_of_integrals: Option<F17>,
    integral_of_limit: Option<F17>,
    interchange_gap: Option<F17>,
    integral_of_liminf: Option<F17>,
    liminf_of_integrals: Option<F17>,
}

impl ConvergeWire {
    fn new(theorem: &str, holds: bool, verdict: impl Into<String>) -> Self {
        ConvergeWire {
            theorem: theorem.to_string(),
            verdict: verdict.into(),
            holds,
            eps_levels: None,
            per_n_trace: None,
            witness_n: None,
            limit_integral: None,
            fitted_sup: None,
            envelope_samples: None,
            lim_of_integrals: None,
            integral_of_limit: None,
            interchange_gap: None,
            integral_of_liminf: None,
            liminf_of_integrals: None,
        }
    }
}

fn run_converge(mut args: ConvergeArgs) -> CliResult<()> {
    // the report's config block echoes the seed actually used
    args.seed = effective_seed(args.seed)?;
    let seed = args.seed;
    let schedule = decade_schedule(args.eps_max, args.eps_min)?;
    let entry = lookup_sequence(&args.family)?;
    let seq = entry.sequence()?;
    let family = match &entry.gauge_recipe {
        Some(fam) if args.a.is_none() && args.b.is_none() => fam.clone(),
        _ => GaugeFamily::constant(span_from(args.a, args.b)?),
    };
    let eps = args.eps_min;
    let nmax = args.nmax.max(1);

    let body = match args.theorem.as_str() {
        "4.1.1" => {
            let n_fn = entry.index_fn.clone().ok_or_else(|| {
                GaugeError::InvalidArgument(format!(
                    "corpus entry '{}' carries no index function",
                    entry.name
                ))
            })?;
            let r = check_limit_integrability(
                &seq,
                &*n_fn,
                &family,
                &schedule,
                args.trials.max(1),
                nmax,
                nmax.min(50),
                seed,
            )?;
            let verdict = if r.holds {
                "condition holds: spreads bounded and integral trace settles".to_string()
            } else if r.spreads_ok && !r.per_n_cauchy {
                "condition fails: integral trace does not tend to a limit".to_string()
            } else {
                "condition fails".to_string()
            };
            let mut w = ConvergeWire::new("4.1.1", r.holds, verdict);
            w.eps_levels = Some(
                r.eps_levels
                    .iter()
                    .map(|&(e, s, m)| (F17(e), F17(s), F17(m)))
                    .collect(),
            );
            w.per_n_trace = Some(r.per_n_trace.iter().map(|&(n, v)| (n, F17(v))).collect());
            w.limit_integral = r.limit_integral.as_ref().map(|g| F17(g.value));
            w
        }
        "4.1.2" => {
            let r = check_value_interchange(&seq, &family, eps, nmax, seed)?;
            let verdict = if r.holds {
                "term integrals settle at the limit integral"
            } else {
                "no index threshold brings term integrals within eps of the limit"
            };
            let mut w = ConvergeWire::new("4.1.2", r.holds, verdict);
            w.witness_n = r.witness_n;
            w.limit_integral = r.limit_value.map(F17);
            w.per_n_trace = Some(r.per_n_values.iter().map(|&(n, v)| (n, F17(v))).collect());
            w
        }
        "4.1.9" => {
            let f = seq.pointwise_limit().ok_or_else(|| {
                GaugeError::InvalidArgument(format!(
                    "corpus entry '{}' carries no pointwise limit",
                    entry.name
                ))
            })?;
            let r = bartle_condition_check(&seq, &f, &family, eps, nmax, args.trials.max(1), seed)?;
            let verdict = if r.holds {
                "same-division sums settle against the limit"
            } else {
                "same-division sums never settle within eps"
            };
            let mut w = ConvergeWire::new("4.1.9", r.holds, verdict);
            w.witness_n = r.witness_n;
            w
        }
        "mct" => {
            let n_list: Vec<u32> = [1u32, 2, 5, 10, 20, 50, 100, 200]
                .into_iter()
                .filter(|&n| n <= nmax)
                .collect();
            let r = monotone_convergence(&seq, &family, eps, &n_list, seed)?;
            let holds = r.monotone_sampled
                && r.limit_integral
                    .map_or(true, |l| (l - r.fitted_sup).abs() <= 4.0 * eps);
            let verdict = if holds {
                "increasing trace with supremum matching the limit integral"
            } else {
                "monotone convergence conditions not met"
            };
            let mut w = ConvergeWire::new("mct", holds, verdict);
            w.per_n_trace = Some(r.trace.iter().map(|&(n, v)| (n, F17(v))).collect());
            w.fitted_sup = Some(F17(r.fitted_sup));
            w.limit_integral = r.limit_integral.map(F17);
            w
        }
        "dct" => {
            let r = dominated_convergence(
                &seq,
                args.p,
                args.q,
                &family,
                eps,
                nmax,
                args.trials.max(1),
                seed,
            )?;
            let verdict = if r.holds {
                "two-sided bound holds and limit and integral interchange"
            } else if !r.envelope_ok {
                "envelope escapes the (P, Q) bound"
            } else {
                "interchange gap exceeds tolerance"
            };
            let mut w = ConvergeWire::new("dct", r.holds, verdict);
            w.envelope_samples = Some(
                r.envelope_samples
                    .iter()
                    .map(|&(a, b)| (F17(a), F17(b)))
                    .collect(),
            );
            w.lim_of_integrals = Some(F17(r.lim_of_integrals));
            w.integral_of_limit = r.integral_of_limit.map(F17);
            w.interchange_gap = r.interchange_gap.map(F17);
            w
        }
        "fatou" => {
            let r = fatou_check(&seq, &family, nmax, eps, seed)?;
            let verdict = if r.holds {
                "integral of the liminf stays below the liminf of integrals"
            } else {
                "liminf inequality violated"
            };
            let mut w = ConvergeWire::new("fatou", r.holds, verdict);
            w.integral_of_liminf = Some(F17(r.integral_of_liminf));
            w.liminf_of_integrals = Some(F17(r.liminf_of_integrals));
            w
        }
        other => {
            return Err(CliError::BadArgs(format!(
                "unknown theorem '{other}': use 4.1.1 | 4.1.2 | 4.1.9 | mct | dct | fatou"
            )))
        }
    };

    emit_json(&args.out, &wrap("converge", &args, &schedule, body))
}

// ---------------------------------------------------------------- tonelli

#[derive(Serialize)]
struct TonelliBodyWire {
    xy: Option<IntegralWire>,
    yx: Option<IntegralWire>,
    condition: Option<wire::TonelliWire>,
}

fn run_tonelli(mut args: TonelliArgs) -> CliResult<()> {
    // the report's config block echoes the seed actually used
    args.seed = effective_seed(args.seed)?;
    let seed = args.seed;
    let schedule = decade_schedule(args.eps_max, args.eps_min)?;
    let entry = lookup_sequence(&args.family)?;
    let fam = entry.family()?;
    let span = entry
        .gauge_recipe
        .as_ref()
        .map(|f| f.span())
        .unwrap_or(Interval::new(0.0, 1.0)?);
    // entries singular along the axes need gauges that pinch toward them
    let pinch = args
        .pinch_scale
        .or((entry.name == "pi4-witness").then_some(0.1));
    let pg = match pinch {
        Some(scale) => axis_pinch_product_gauge(span, scale),
        None => ProductGauge::symmetric(
            entry
                .gauge_recipe
                .clone()
                .unwrap_or(GaugeFamily::constant(span)),
        ),
    };
    let trials = args.trials.max(2);

    let mut body = TonelliBodyWire {
        xy: None,
        yx: None,
        condition: None,
    };
    if matches!(args.order, OrderArg::Xy | OrderArg::Both) {
        let r = iterated_integrate(&fam, IterationOrder::Xy, &pg, &schedule, trials, seed)?;
        body.xy = Some(IntegralWire::from(&r));
    }
    if matches!(args.order, OrderArg::Yx | OrderArg::Both) {
        let r = iterated_integrate(&fam, IterationOrder::Yx, &pg, &schedule, trials, seed)?;
        body.yx = Some(IntegralWire::from(&r));
    }
    if matches!(args.order, OrderArg::Both) {
        let r = tonelli_condition_check(&fam, &pg, &schedule, trials, seed)?;
        body.condition = Some(wire::TonelliWire::from(&r));
    }
    emit_json(&args.out, &wrap("tonelli", &args, &schedule, body))
}

// ----------------------------------------------------------------- corpus

fn run_corpus(args: CorpusArgs) -> CliResult<()> {
    match args.cmd {
        CorpusCmd::List => {
            let mut text = String::new();
            for (name, kind, notes) in list_entries() {
                text.push_str(&format!("{name} [{kind}]: {notes}\n"));
            }
            emit(&None, &text)
        }
        CorpusCmd::Export => {
            let mut text = gaugequad::export_json();
            text.push('\n');
            emit(&None, &text)
        }
        CorpusCmd::Show { name } => {
            lookup(&name)?; // surface UnknownCorpusEntry before serializing
            let wire_entry = export_wire()
                .into_iter()
                .find(|w| w.name == name)
                .expect("lookup succeeded, so the wire export contains the entry");
            let mut text = serde_json::to_string_pretty(&wire_entry)?;
            text.push('\n');
            emit(&None, &text)
        }
    }
}

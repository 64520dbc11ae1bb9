//! Command-line front end: exact evaluation, infinitesimal calculus,
//! decision-set checks, and figure rendering.
//!
//! Exit codes: 0 success, 2 usage error, 3 domain error (the error name is
//! printed on stderr).

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use microscope_core::calculus::{self, Point, Side};
use microscope_core::config::{Config, OutputFormat};
use microscope_core::error::Error;
use microscope_core::expr::{self, Expr, SeriesBackend};
use microscope_core::render::{self, RenderFormat};
use microscope_core::scenes::{self, HyperIndex, Phase};
use microscope_core::series::{Coeff, Mode, SeriesCtx, SeriesElem};
use microscope_core::ultra::{self, SequenceSpec, SetFamily};
use microscope_core::{RatFunc, Rational};

#[derive(Parser)]
#[command(
    name = "microscope",
    version,
    about = "Exact infinitesimal arithmetic: ordered non-Archimedean fields, \
             standard parts, magnification, and the figures they draw"
)]
struct Cli {
    /// Flat key=value configuration file; flags override file values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Series window: terms kept past the lead (default 16).
    #[arg(long, global = true)]
    window: Option<u32>,

    /// Significant digits for approximate coefficients (default 50).
    #[arg(long, global = true)]
    digits: Option<u32>,

    /// Directory for file outputs.
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,

    /// Output format: text, json, svg or csv.
    #[arg(long, global = true)]
    format: Option<String>,

    /// Sample scene points in parallel (output is identical either way).
    #[arg(long, global = true)]
    parallel: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Real,
    Ratfunc,
    Series,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Approx,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Above,
    Below,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression on a chosen backend.
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        #[arg(long, value_enum, default_value = "real")]
        backend: BackendArg,
        /// Variable bindings, e.g. `x=3` or `x=3+e` on the series backend.
        #[arg(long = "at", allow_hyphen_values = true)]
        at: Vec<String>,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Derivative at a point via the infinitesimal difference quotient.
    Diff {
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        /// Derivative order (default 1).
        #[arg(long)]
        order: Option<u32>,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Also print the difference-quotient witness series.
        #[arg(long)]
        witness: bool,
    },
    /// Taylor coefficients of f(x0 + eps).
    Taylor {
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long)]
        order: u32,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// One-sided limit as the standard part of f(x0 ± eps).
    Limit {
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long, value_enum)]
        side: SideArg,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Compare two elements of the ordered rational-function field.
    Compare {
        #[arg(long, allow_hyphen_values = true)]
        lhs: String,
        #[arg(long, allow_hyphen_values = true)]
        rhs: String,
        #[arg(long, value_enum, default_value = "ratfunc")]
        backend: BackendArg,
    },
    /// Decision-set machinery: filters, ultrafilters, sequences.
    #[command(subcommand)]
    Ultra(UltraCommand),
    /// Finite or hyperfinite saws.
    Saw {
        /// Number of teeth of the finite saw.
        #[arg(long)]
        teeth: Option<u32>,
        /// Work with the hyperfinite saw instead.
        #[arg(long)]
        hyper: bool,
        /// Tooth index `c,j` meaning k = c·N + j.
        #[arg(long, allow_hyphen_values = true)]
        tooth: Option<String>,
        /// Magnify the tooth by the factor N.
        #[arg(long)]
        magnify: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Blancmange partial sums, exact values and difference quotients.
    Blancmange {
        #[arg(long)]
        terms: u32,
        /// Evaluate the partial sum at a rational point.
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
        /// Exact difference quotient `x0,m` over the step 2^-m.
        #[arg(long, allow_hyphen_values = true)]
        probe: Option<String>,
        /// Render every partial sum 1..=terms (capped at 12 curves).
        #[arg(long)]
        all_partials: bool,
        /// Samples per unit when rendering (default 256).
        #[arg(long)]
        samples: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A function graph next to its microscope view at a point.
    Microscope {
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        center: String,
        #[arg(long)]
        out: PathBuf,
        /// Samples per unit (default 64).
        #[arg(long)]
        samples: Option<u32>,
    },
}

#[derive(Subcommand)]
enum UltraCommand {
    /// Check the filter axioms for a family of sets.
    CheckFilter {
        /// JSON file: {"universe": 12, "members": [[2,4,6], ...]}
        #[arg(long)]
        family: PathBuf,
        /// Size standing in for "finite" on the finite universe.
        #[arg(long)]
        threshold: Option<u32>,
    },
    /// Check the ultrafilter axioms and report the principal generator.
    CheckUltrafilter {
        #[arg(long)]
        family: PathBuf,
    },
    /// Classify a sequence into the tripartite cases.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        seq: String,
        #[arg(long, default_value = "1000")]
        horizon: u64,
    },
    /// Compare two definable sequences as hyperreals.
    Compare {
        #[arg(long = "seq-a", allow_hyphen_values = true)]
        seq_a: String,
        #[arg(long = "seq-b", allow_hyphen_values = true)]
        seq_b: String,
    },
}

enum AppError {
    Usage(String),
    Domain(Error),
    Io(String),
}

impl From<Error> for AppError {
    fn from(e: Error) -> AppError {
        AppError::Domain(e)
    }
}

type AppResult<T> = Result<T, AppError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(AppError::Domain(err)) => {
            eprintln!("{}: {err}", err.name());
            ExitCode::from(3)
        }
        Err(AppError::Io(msg)) => {
            eprintln!("io error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn load_config(cli: &Cli) -> AppResult<Config> {
    let mut config = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| AppError::Io(format!("{}: {e}", path.display())))?;
            Config::parse_str(&text).map_err(|e| AppError::Usage(e.to_string()))?
        }
        None => Config::default(),
    };
    if let Some(w) = cli.window {
        config.series_window = w;
    }
    if let Some(d) = cli.digits {
        config.approx_digits = d;
    }
    if let Some(dir) = &cli.output_dir {
        config.output_dir = dir.clone();
    }
    if let Some(f) = &cli.format {
        config.format = OutputFormat::parse(f).map_err(|e| AppError::Usage(e.to_string()))?;
    }
    config
        .validate()
        .map_err(|e| AppError::Usage(e.to_string()))?;
    Ok(config)
}

fn run(cli: Cli) -> AppResult<()> {
    let config = load_config(&cli)?;
    let ctx = config.series_ctx()?;
    let parallel = cli.parallel;
    match &cli.command {
        Command::Eval {
            expr,
            backend,
            at,
            mode,
        } => cmd_eval(expr, *backend, at, *mode, &config, &ctx),
        Command::Diff {
            expr,
            at,
            order,
            mode,
            witness,
        } => cmd_diff(expr, at, order.unwrap_or(1), *mode, *witness, &config, &ctx),
        Command::Taylor {
            expr,
            at,
            order,
            mode,
        } => cmd_taylor(expr, at, *order, *mode, &config, &ctx),
        Command::Limit {
            expr,
            at,
            side,
            mode,
        } => cmd_limit(expr, at, *side, *mode, &config, &ctx),
        Command::Compare { lhs, rhs, backend } => cmd_compare(lhs, rhs, *backend),
        Command::Ultra(ultra) => cmd_ultra(ultra, &config, &ctx),
        Command::Saw {
            teeth,
            hyper,
            tooth,
            magnify,
            out,
        } => cmd_saw(*teeth, *hyper, tooth.as_deref(), *magnify, out.as_deref(), &config),
        Command::Blancmange {
            terms,
            at,
            probe,
            all_partials,
            samples,
            out,
        } => cmd_blancmange(
            *terms,
            at.as_deref(),
            probe.as_deref(),
            *all_partials,
            samples.unwrap_or(256),
            out.as_deref(),
            &config,
            parallel,
        ),
        Command::Microscope {
            expr,
            center,
            out,
            samples,
        } => cmd_microscope(
            expr,
            center,
            out,
            samples.unwrap_or(64),
            &config,
            &ctx,
            parallel,
        ),
    }
}

// ---------------------------------------------------------------------------
// Helpers
// ---------------------------------------------------------------------------

fn parse_expr(src: &str) -> AppResult<Expr> {
    Ok(expr::parse(src)?)
}

fn parse_rational(src: &str) -> AppResult<Rational> {
    Rational::parse(src).map_err(|e| AppError::Usage(e.to_string()))
}

fn single_var(e: &Expr) -> AppResult<String> {
    let vars: Vec<String> = e.free_vars().into_iter().filter(|v| v != "e").collect();
    match vars.len() {
        0 => Ok("x".to_string()),
        1 => Ok(vars.into_iter().next().expect("one element")),
        _ => Err(AppError::Usage(format!(
            "expected one free variable, found: {}",
            vars.join(", ")
        ))),
    }
}

/// Value line for a coefficient: exact rationals plain, approximations with
/// their precision tag.
fn coeff_string(c: &Coeff, digits: u32) -> String {
    match c {
        Coeff::Exact(r) => r.to_string(),
        Coeff::Approx(d) => format!("{} [{digits} digits]", d.to_string_sig(digits)),
    }
}

fn series_string(s: &SeriesElem, digits: u32) -> String {
    match s.mode() {
        Mode::Exact => s.to_literal_string(digits),
        Mode::Approx => format!("{} [{digits} digits]", s.to_literal_string(digits)),
    }
}

/// Runs `f` in exact mode, falling back to approximate mode when an exact
/// run asks for an irrational value. An explicit `--mode` disables the
/// fallback.
fn with_mode<T>(
    mode: Option<ModeArg>,
    mut f: impl FnMut(Mode) -> Result<T, Error>,
) -> Result<T, Error> {
    match mode {
        Some(ModeArg::Exact) => f(Mode::Exact),
        Some(ModeArg::Approx) => f(Mode::Approx),
        None => match f(Mode::Exact) {
            Err(Error::ModeError(_)) => f(Mode::Approx),
            other => other,
        },
    }
}

fn resolve_out(out: &Path, config: &Config) -> PathBuf {
    if out.is_absolute() {
        out.to_path_buf()
    } else {
        config.output_dir.join(out)
    }
}

fn scene_format(out: &Path, config: &Config) -> AppResult<RenderFormat> {
    if let Some(f) = config.format.render_format() {
        return Ok(f);
    }
    match out.extension().and_then(|e| e.to_str()) {
        Some("svg") | None => Ok(RenderFormat::Svg),
        Some("csv") => Ok(RenderFormat::Csv),
        Some(other) => Err(AppError::Usage(format!(
            "cannot infer a render format from extension `.{other}`; pass --format svg|csv"
        ))),
    }
}

fn write_scene(
    scene: &scenes::PlotScene,
    out: &Path,
    config: &Config,
) -> AppResult<()> {
    let format = scene_format(out, config)?;
    let bytes = render::render(scene, format)?;
    let path = resolve_out(out, config);
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .map_err(|e| AppError::Io(format!("{}: {e}", parent.display())))?;
        }
    }
    fs::write(&path, bytes).map_err(|e| AppError::Io(format!("{}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(())
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn cmd_eval(
    src: &str,
    backend: BackendArg,
    at: &[String],
    mode: Option<ModeArg>,
    config: &Config,
    ctx: &SeriesCtx,
) -> AppResult<()> {
    let ast = parse_expr(src)?;
    let split = |binding: &str| -> AppResult<(String, String)> {
        binding
            .split_once('=')
            .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
            .ok_or_else(|| AppError::Usage(format!("binding `{binding}` needs the form name=value")))
    };
    match backend {
        BackendArg::Real => {
            let mut bindings = BTreeMap::new();
            for b in at {
                let (name, value) = split(b)?;
                let rhs = parse_expr(&value)?;
                bindings.insert(name, expr::eval_real(&rhs, &bindings)?);
            }
            let v = expr::eval_real(&ast, &bindings)?;
            println!("{v}");
        }
        BackendArg::Ratfunc => {
            let mut bindings = BTreeMap::new();
            for b in at {
                let (name, value) = split(b)?;
                let rhs = parse_expr(&value)?;
                bindings.insert(name, expr::eval_ratfunc(&rhs, &bindings)?);
            }
            let v = expr::eval_ratfunc(&ast, &bindings)?;
            println!("{v}");
        }
        BackendArg::Series => {
            let out = with_mode(mode, |m| {
                let series_backend = SeriesBackend::new(m, *ctx);
                let mut bindings = BTreeMap::new();
                for b in at {
                    let (name, value) = split(b).map_err(|_| {
                        Error::Parse(format!("binding `{b}` needs the form name=value"))
                    })?;
                    let rhs = expr::parse(&value)?;
                    bindings.insert(name, expr::eval_series(&rhs, &series_backend, &bindings)?);
                }
                expr::eval_series(&ast, &series_backend, &bindings)
            })?;
            println!("{}", series_string(&out, config.approx_digits));
        }
    }
    Ok(())
}

fn cmd_diff(
    src: &str,
    at: &str,
    order: u32,
    mode: Option<ModeArg>,
    witness: bool,
    config: &Config,
    ctx: &SeriesCtx,
) -> AppResult<()> {
    let ast = parse_expr(src)?;
    let var = single_var(&ast)?;
    let x0 = Point::Exact(parse_rational(at)?);
    if order == 1 {
        let out = with_mode(mode, |m| calculus::derivative(&ast, &var, &x0, m, ctx))?;
        println!("{}", coeff_string(&out.value, config.approx_digits));
        if witness {
            println!("witness: {}", series_string(&out.witness, config.approx_digits));
        }
        return Ok(());
    }
    let coeffs = with_mode(mode, |m| calculus::taylor(&ast, &var, &x0, order, m, ctx))?;
    // k-th derivative = k! * a_k
    let fact = Rational::from_bigint(microscope_core::rational::factorial(order as u64));
    let value = match &coeffs[order as usize] {
        Coeff::Exact(r) => Coeff::Exact(r * &fact),
        Coeff::Approx(d) => Coeff::Approx(
            d.mul(&microscope_core::decimal::Decimal::from_rational(
                &fact,
                ctx.work(),
            ))
            .round_to(ctx.work()),
        ),
    };
    println!("{}", coeff_string(&value, config.approx_digits));
    Ok(())
}

fn cmd_taylor(
    src: &str,
    at: &str,
    order: u32,
    mode: Option<ModeArg>,
    config: &Config,
    ctx: &SeriesCtx,
) -> AppResult<()> {
    let ast = parse_expr(src)?;
    let var = single_var(&ast)?;
    let x0 = Point::Exact(parse_rational(at)?);
    let coeffs = with_mode(mode, |m| calculus::taylor(&ast, &var, &x0, order, m, ctx))?;
    for (k, c) in coeffs.iter().enumerate() {
        println!("a{k} = {}", coeff_string(c, config.approx_digits));
    }
    Ok(())
}

fn cmd_limit(
    src: &str,
    at: &str,
    side: SideArg,
    mode: Option<ModeArg>,
    config: &Config,
    ctx: &SeriesCtx,
) -> AppResult<()> {
    let ast = parse_expr(src)?;
    let var = single_var(&ast)?;
    let x0 = Point::Exact(parse_rational(at)?);
    let side = match side {
        SideArg::Above => Side::Above,
        SideArg::Below => Side::Below,
    };
    let out = with_mode(mode, |m| calculus::limit_at(&ast, &var, &x0, side, m, ctx))?;
    match out {
        calculus::Limit::Finite(v) => println!("{}", coeff_string(&v, config.approx_digits)),
        calculus::Limit::Infinite(microscope_core::Sign::Negative) => println!("-inf"),
        calculus::Limit::Infinite(_) => println!("+inf"),
        calculus::Limit::NoLimit => println!("undetermined"),
    }
    Ok(())
}

fn cmd_compare(lhs: &str, rhs: &str, backend: BackendArg) -> AppResult<()> {
    if !matches!(backend, BackendArg::Ratfunc) {
        return Err(AppError::Usage(
            "compare is defined on the ratfunc backend".into(),
        ));
    }
    let a = expr::eval_ratfunc(&parse_expr(lhs)?, &BTreeMap::new())?;
    let b = expr::eval_ratfunc(&parse_expr(rhs)?, &BTreeMap::new())?;
    println!(
        "{}",
        match a.compare(&b) {
            std::cmp::Ordering::Less => "Less",
            std::cmp::Ordering::Equal => "Equal",
            std::cmp::Ordering::Greater => "Greater",
        }
    );
    Ok(())
}

fn cmd_ultra(cmd: &UltraCommand, config: &Config, _ctx: &SeriesCtx) -> AppResult<()> {
    let json_mode = config.format == OutputFormat::Json;
    match cmd {
        UltraCommand::CheckFilter { family, threshold } => {
            let text = fs::read_to_string(family)
                .map_err(|e| AppError::Io(format!("{}: {e}", family.display())))?;
            let fam = SetFamily::from_json(&text)?;
            let report = ultra::check_filter(&fam, *threshold);
            if json_mode {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("report serializes")
                );
            } else {
                print!("{report}");
            }
        }
        UltraCommand::CheckUltrafilter { family } => {
            let text = fs::read_to_string(family)
                .map_err(|e| AppError::Io(format!("{}: {e}", family.display())))?;
            let fam = SetFamily::from_json(&text)?;
            let report = ultra::check_ultrafilter(&fam);
            if json_mode {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("report serializes")
                );
            } else {
                print!("{report}");
            }
        }
        UltraCommand::Classify { seq, horizon } => {
            let spec = SequenceSpec::parse(seq)?;
            let report = ultra::classify_sequence(&spec, *horizon)?;
            if json_mode {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report.to_json()).expect("report serializes")
                );
            } else {
                print!("{report}");
            }
        }
        UltraCommand::Compare { seq_a, seq_b } => {
            let a = SequenceSpec::parse(seq_a)?;
            let b = SequenceSpec::parse(seq_b)?;
            let ha = a.hyper()?.ok_or_else(|| {
                AppError::Usage("comparison needs definable (expression) sequences".into())
            })?;
            let hb = b.hyper()?.ok_or_else(|| {
                AppError::Usage("comparison needs definable (expression) sequences".into())
            })?;
            println!(
                "{}",
                match ha.compare(&hb) {
                    std::cmp::Ordering::Less => "Less",
                    std::cmp::Ordering::Equal => "Equal",
                    std::cmp::Ordering::Greater => "Greater",
                }
            );
        }
    }
    Ok(())
}

fn cmd_saw(
    teeth: Option<u32>,
    hyper: bool,
    tooth: Option<&str>,
    magnify: bool,
    out: Option<&Path>,
    config: &Config,
) -> AppResult<()> {
    if hyper {
        let tooth = tooth.ok_or_else(|| {
            AppError::Usage("--hyper needs --tooth \"c,j\" to pick a tooth".into())
        })?;
        let (c_text, j_text) = tooth
            .split_once(',')
            .ok_or_else(|| AppError::Usage(format!("tooth `{tooth}` needs the form c,j")))?;
        let c = parse_rational(c_text)?;
        let j: i64 = j_text
            .trim()
            .parse()
            .map_err(|_| AppError::Usage(format!("bad tooth offset `{j_text}`")))?;
        if c.is_negative() || c > Rational::one() {
            return Err(AppError::Usage("tooth position c must lie in [0, 1]".into()));
        }
        let index = HyperIndex::new(c, j);
        let center = scenes::luzin_saw_hyper(&index, Phase::Start)?;
        for phase in Phase::ALL {
            let p = scenes::luzin_saw_hyper(&index, phase)?;
            let (sx, sy) = scenes::shadow(&p)?;
            if magnify {
                let m = scenes::microscope2d(&p, &center, &RatFunc::omega());
                let (mx, my) = scenes::shadow(&m)?;
                println!(
                    "{phase:?}: ({}, {})  shadow ({sx}, {sy})  magnified ({mx}, {my})",
                    p.x, p.y
                );
            } else {
                println!("{phase:?}: ({}, {})  shadow ({sx}, {sy})", p.x, p.y);
            }
        }
        if let Some(out) = out {
            if !magnify {
                return Err(AppError::Usage(
                    "rendering the hyperfinite saw needs --magnify; its unmagnified shadow \
                     is the bare diagonal"
                        .into(),
                ));
            }
            let scene = scenes::magnified_tooth_scene(&index)?;
            write_scene(&scene, out, config)?;
        }
        return Ok(());
    }
    let n = teeth.ok_or_else(|| AppError::Usage("saw needs --teeth N (or --hyper)".into()))?;
    if n == 0 {
        return Err(AppError::Usage("--teeth must be at least 1".into()));
    }
    let (sup, len) = scenes::saw_limit_check(n)?;
    println!("vertices: {}", 2 * n + 1);
    println!("sup deviation: {sup}");
    println!("arc length: {len}");
    if let Some(out) = out {
        let scene = scenes::luzin_saw_finite(n)?;
        write_scene(&scene, out, config)?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_blancmange(
    terms: u32,
    at: Option<&str>,
    probe: Option<&str>,
    all_partials: bool,
    samples: u32,
    out: Option<&Path>,
    config: &Config,
    parallel: bool,
) -> AppResult<()> {
    if terms == 0 {
        return Err(AppError::Usage("--terms must be at least 1".into()));
    }
    println!("terms: {terms}");
    if let Some(at) = at {
        let x = parse_rational(at)?;
        let (value, tail) = scenes::blancmange(&x, terms);
        println!("value = {value}");
        println!("tail_bound = {tail}");
    }
    if let Some(probe) = probe {
        let (x_text, m_text) = probe
            .split_once(',')
            .ok_or_else(|| AppError::Usage(format!("probe `{probe}` needs the form x0,m")))?;
        let x0 = parse_rational(x_text)?;
        let m: u32 = m_text
            .trim()
            .parse()
            .map_err(|_| AppError::Usage(format!("bad probe depth `{m_text}`")))?;
        if m == 0 {
            return Err(AppError::Usage("probe depth must be at least 1".into()));
        }
        let q = scenes::diff_quotient_probe(&x0, m);
        println!("probe({x0}, {m}) = {q}");
    }
    if let Some(out) = out {
        let list: Vec<u32> = if all_partials {
            (1..=terms.min(12)).collect()
        } else {
            vec![terms]
        };
        let scene = scenes::blancmange_scene(&list, samples, parallel)?;
        write_scene(&scene, out, config)?;
    }
    Ok(())
}

fn cmd_microscope(
    src: &str,
    center: &str,
    out: &Path,
    samples: u32,
    config: &Config,
    ctx: &SeriesCtx,
    parallel: bool,
) -> AppResult<()> {
    let ast = parse_expr(src)?;
    let var = single_var(&ast)?;
    let c = parse_rational(center)?;
    let scene = scenes::microscope_scene(&ast, &var, &c, ctx, samples, parallel)?;
    write_scene(&scene, out, config)?;
    Ok(())
}

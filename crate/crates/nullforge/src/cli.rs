//! Command-line front-end. Every subcommand is deterministic given its flags:
//! identical invocations produce byte-identical output. Summaries go to
//! stdout as JSON; `--format csv` emits CSV instead (to stdout, or to the
//! `--out` file with a JSON summary on stdout). Errors go to stderr with exit
//! code 1 for domain errors and 2 for usage errors.
//!
//! `NULLFORGE_THREADS` caps the fan-out of `sweep`; results merge in grid
//! order regardless of scheduling.

use std::collections::BTreeMap;
use std::error::Error;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::analysis::{localization_metrics, profile};
use crate::gfdsl::TransformFn;
use crate::io::{
    basis_to_json, load_fixture_suite, matrix_to_json, modes_csv, profile_csv, read_matrix,
    run_fixture, spectrum_csv, spectrum_to_json, write_matrix,
};
use crate::matrix::{subspace_equal, DenseMatrix, Domain, DEFAULT_RANK_TOL};
use crate::models::{self, ModelKind, ModelSpec, ParamValue};
use crate::transform::{
    apply_transform_promoting, four_point_witness, is_separable, verify_theorem1, Mode,
    SEPARABILITY_TOL,
};

type CliResult = Result<i32, Box<dyn Error>>;

#[derive(Parser)]
#[command(name = "nullforge", version, about = "Rank-preserving index-dependent matrix transforms and theory-space model analysis", disable_help_subcommand = true)]
struct Cli {
    /// JSON file supplying the whole invocation: {"command": "...", "<flag>": value, ...}
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a transform function is separable on an index grid
    #[command(name = "check-separable")]
    CheckSeparable(CheckSeparableArgs),
    /// Apply an element-wise transform to a matrix file
    Transform(TransformArgs),
    /// Null modes of a matrix or model, with optional predicted basis
    Nullmodes(NullmodesArgs),
    /// Analytic and numeric mass spectra with gap fits
    Spectrum(SpectrumArgs),
    /// Run a golden fixture suite
    Verify(VerifyArgs),
    /// Sweep one parameter over a grid and tabulate a metric
    Sweep(SweepArgs),
}

#[derive(Args)]
struct CheckSeparableArgs {
    /// Transform expression, e.g. "q^(i-j)"
    #[arg(long)]
    gf: String,
    /// Grid rows
    #[arg(long)]
    n: usize,
    /// Grid columns
    #[arg(long)]
    m: usize,
    /// Comma-separated bindings, e.g. q=2,f=0.5
    #[arg(long, value_delimiter = ',')]
    params: Vec<String>,
    /// Relative tolerance on the four-point identity
    #[arg(long, default_value_t = SEPARABILITY_TOL)]
    tol: f64,
    /// Also run the quartic all-quadruples scan
    #[arg(long)]
    full: bool,
}

#[derive(Args)]
struct TransformArgs {
    /// Input matrix file (JSON)
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    #[arg(long)]
    gf: String,
    #[arg(long, value_delimiter = ',')]
    params: Vec<String>,
    #[arg(long, value_enum)]
    mode: ModeArg,
    /// Output matrix file; omitted, the matrix is inlined in the summary
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct NullmodesArgs {
    /// Input matrix file (JSON); alternative to --model
    #[arg(long = "in", value_name = "FILE", conflicts_with = "model")]
    input: Option<PathBuf>,
    /// Model kind: uniform_cw | generalized_cw | nonlocal_cw | deconstruction | kk_bidiagonal
    #[arg(long)]
    model: Option<String>,
    /// Site count for --model
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated parameters (model and transform share one namespace);
    /// list-valued parameters use colons, e.g. q=1:2:3
    #[arg(long, value_delimiter = ',')]
    params: Vec<String>,
    /// Transform to apply after construction/loading
    #[arg(long)]
    gf: Option<String>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Also predict the transformed basis from the input basis and compare
    #[arg(long)]
    predict: bool,
    /// Rank tolerance (float domain)
    #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long)]
    model: String,
    #[arg(long)]
    n: usize,
    #[arg(long, value_delimiter = ',')]
    params: Vec<String>,
    /// Include the closed-form spectrum (kk_bidiagonal only)
    #[arg(long)]
    analytic: bool,
    /// Include singular values of the built matrix
    #[arg(long)]
    numeric: bool,
    /// Include gap fits (constant and linear-in-k laws)
    #[arg(long)]
    gaps: bool,
    /// Number of leading gaps fed to the fits
    #[arg(long, default_value_t = 10)]
    kmax: usize,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Directory of fixture JSON files
    #[arg(long, value_name = "DIR")]
    fixtures: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    model: String,
    #[arg(long)]
    n: usize,
    #[arg(long, value_delimiter = ',')]
    params: Vec<String>,
    #[arg(long)]
    gf: Option<String>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Grid: name=start:stop:steps (inclusive)
    #[arg(long)]
    param: String,
    #[arg(long, value_enum)]
    metric: MetricArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Divide,
    Multiply,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Divide => Mode::Divide,
            ModeArg::Multiply => Mode::Multiply,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MetricArg {
    /// Smallest-to-largest nonzero amplitude of the first right zero mode
    Suppression,
    /// Inverse participation ratio of the first right zero mode
    Ipr,
    /// Peak site of the first right zero mode
    PeakSite,
    /// Kernel dimension
    Nullity,
    /// Smallest singular value
    MinMass,
    /// Largest singular value
    MaxMass,
}

/// Entry point used by the binary; returns the process exit code.
pub fn run(args: &[String]) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with_io(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Testable entry point with injected output streams.
pub fn run_with_io(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut argv: Vec<String> = vec!["nullforge".into()];
    argv.extend_from_slice(args);
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => return report_clap_error(e, out, err),
    };
    let command = match cli.config {
        None => cli.command,
        Some(path) => match argv_from_config(&path) {
            Ok(config_argv) => match Cli::try_parse_from(&config_argv) {
                Ok(c) => c.command,
                Err(e) => return report_clap_error(e, out, err),
            },
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return 1;
            }
        },
    };
    let Some(command) = command else {
        let _ = writeln!(err, "error: no command given; see --help");
        return 2;
    };
    match execute(command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn report_clap_error(e: clap::Error, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    use clap::error::ErrorKind;
    match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
            let _ = write!(out, "{e}");
            0
        }
        _ => {
            let _ = write!(err, "{e}");
            2
        }
    }
}

/// Rebuilds an argv from a config JSON object: the "command" key names the
/// subcommand, every other key becomes `--key value` (booleans become bare
/// flags, arrays repeat the flag).
fn argv_from_config(path: &Path) -> Result<Vec<String>, Box<dyn Error>> {
    let text = std::fs::read_to_string(path)?;
    let value: Value = serde_json::from_str(&text)?;
    let obj = value.as_object().ok_or("config must be a JSON object")?;
    let command = obj
        .get("command")
        .and_then(Value::as_str)
        .ok_or("config needs a \"command\" string")?;
    let mut argv = vec!["nullforge".to_string(), command.to_string()];
    for (key, val) in obj {
        if key == "command" {
            continue;
        }
        let flag = format!("--{key}");
        match val {
            Value::Bool(true) => argv.push(flag),
            Value::Bool(false) => {}
            Value::Array(items) => {
                for item in items {
                    argv.push(flag.clone());
                    argv.push(scalar_to_arg(item)?);
                }
            }
            other => {
                argv.push(flag);
                argv.push(scalar_to_arg(other)?);
            }
        }
    }
    Ok(argv)
}

fn scalar_to_arg(v: &Value) -> Result<String, Box<dyn Error>> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(format!("unsupported config value: {other}").into()),
    }
}

fn execute(command: Command, out: &mut dyn Write) -> CliResult {
    match command {
        Command::CheckSeparable(a) => check_separable(a, out),
        Command::Transform(a) => transform_cmd(a, out),
        Command::Nullmodes(a) => nullmodes(a, out),
        Command::Spectrum(a) => spectrum_cmd(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Sweep(a) => sweep(a, out),
    }
}

fn emit(out: &mut dyn Write, value: &Value) -> CliResult {
    writeln!(out, "{}", serde_json::to_string_pretty(value)?)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// Parameter plumbing
// ---------------------------------------------------------------------------

fn parse_params(items: &[String]) -> Result<BTreeMap<String, ParamValue>, Box<dyn Error>> {
    let mut map = BTreeMap::new();
    for item in items {
        if item.is_empty() {
            continue;
        }
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| format!("parameter `{item}` is not name=value"))?;
        let value = value.trim();
        let parsed = if value.contains(':') {
            let list: Result<Vec<f64>, _> = value.split(':').map(|v| v.trim().parse()).collect();
            ParamValue::List(list.map_err(|_| format!("`{item}` has a non-numeric list entry"))?)
        } else {
            ParamValue::Scalar(value.parse().map_err(|_| format!("`{item}` is not numeric"))?)
        };
        map.insert(name.trim().to_string(), parsed);
    }
    Ok(map)
}

fn scalar_params(map: &BTreeMap<String, ParamValue>) -> Vec<(&str, f64)> {
    map.iter()
        .filter_map(|(k, v)| match v {
            ParamValue::Scalar(x) => Some((k.as_str(), *x)),
            ParamValue::List(_) => None,
        })
        .collect()
}

fn model_kind(name: &str) -> Result<ModelKind, Box<dyn Error>> {
    Ok(match name {
        "uniform_cw" => ModelKind::UniformCw,
        "generalized_cw" => ModelKind::GeneralizedCw,
        "nonlocal_cw" => ModelKind::NonlocalCw,
        "deconstruction" => ModelKind::Deconstruction,
        "kk_bidiagonal" => ModelKind::KkBidiagonal,
        other => return Err(format!("unknown model kind `{other}`").into()),
    })
}

fn make_transform(
    gf: &str,
    params: &BTreeMap<String, ParamValue>,
) -> Result<TransformFn, Box<dyn Error>> {
    Ok(TransformFn::parse(gf, &scalar_params(params))?)
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn check_separable(a: CheckSeparableArgs, out: &mut dyn Write) -> CliResult {
    let params = parse_params(&a.params)?;
    let tf = make_transform(&a.gf, &params)?;
    let report = is_separable(&tf, a.n, a.m, a.tol)?;
    let mut value = serde_json::to_value(&report)?;
    let obj = value.as_object_mut().unwrap();
    obj.insert("command".into(), json!("check-separable"));
    obj.insert("gf".into(), json!(a.gf));
    obj.insert("n".into(), json!(a.n));
    obj.insert("m".into(), json!(a.m));
    if a.full {
        let witness = four_point_witness(&tf, a.n, a.m, a.tol)?;
        obj.insert("full_scan_witness".into(), json!(witness));
    }
    emit(out, &value)
}

fn transform_cmd(a: TransformArgs, out: &mut dyn Write) -> CliResult {
    let params = parse_params(&a.params)?;
    let tf = make_transform(&a.gf, &params)?;
    let input = read_matrix(&a.input)?;
    let result = apply_transform_promoting(&input, &tf, a.mode.into())?;
    let theorem = verify_theorem1(&input, &tf, a.mode.into())?;
    let mut summary = serde_json::Map::new();
    summary.insert("command".into(), json!("transform"));
    summary.insert("in".into(), json!(a.input.display().to_string()));
    summary.insert("rows".into(), json!(result.rows()));
    summary.insert("cols".into(), json!(result.cols()));
    summary.insert("domain".into(), json!(result.domain()));
    summary.insert("theorem1".into(), serde_json::to_value(&theorem)?);
    match &a.out {
        Some(path) => {
            write_matrix(&result, path)?;
            summary.insert("out".into(), json!(path.display().to_string()));
        }
        None => {
            summary.insert("matrix".into(), matrix_to_json(&result));
        }
    }
    emit(out, &Value::Object(summary))
}

struct ResolvedInput {
    base: DenseMatrix,
    transform: Option<(TransformFn, Mode)>,
}

fn resolve_input(
    input: &Option<PathBuf>,
    model: &Option<String>,
    n: Option<usize>,
    params: &BTreeMap<String, ParamValue>,
    gf: &Option<String>,
    mode: Option<ModeArg>,
) -> Result<ResolvedInput, Box<dyn Error>> {
    let base = match (input, model) {
        (Some(path), None) => read_matrix(path)?,
        (None, Some(kind)) => {
            let n = n.ok_or("--model requires --n")?;
            let spec = ModelSpec {
                kind: model_kind(kind)?,
                n,
                params: params.clone(),
                gf: None,
            };
            models::build(&spec)?
        }
        _ => return Err("give exactly one of --in or --model".into()),
    };
    let transform = match gf {
        None => None,
        Some(src) => {
            let mode = mode.ok_or("--gf requires --mode")?;
            Some((make_transform(src, params)?, mode.into()))
        }
    };
    Ok(ResolvedInput { base, transform })
}

fn nullmodes(a: NullmodesArgs, out: &mut dyn Write) -> CliResult {
    let params = parse_params(&a.params)?;
    let resolved = resolve_input(&a.input, &a.model, a.n, &params, &a.gf, a.mode)?;
    let base = resolved.base;
    let final_matrix = match &resolved.transform {
        None => base.clone(),
        Some((tf, mode)) => apply_transform_promoting(&base, tf, *mode)?,
    };
    let tol = a.tol;
    let basis = final_matrix.null_basis(if final_matrix.domain() == Domain::Rational { 0.0 } else { tol });

    let mut summary = serde_json::Map::new();
    summary.insert("command".into(), json!("nullmodes"));
    summary.insert("rows".into(), json!(final_matrix.rows()));
    summary.insert("cols".into(), json!(final_matrix.cols()));
    summary.insert("nullity".into(), json!(basis.len()));
    summary.insert("basis".into(), basis_to_json(&basis));

    if a.predict {
        let (tf, mode) = resolved
            .transform
            .as_ref()
            .ok_or("--predict needs --gf and --mode")?;
        let before = base.null_basis(if base.domain() == Domain::Rational { 0.0 } else { tol });
        let predicted = crate::transform::predict_null_basis(
            &before,
            tf,
            base.rows(),
            base.cols(),
            *mode,
        )?;
        let matches = subspace_equal(&predicted, &basis, 1e-9);
        summary.insert("predicted_basis".into(), basis_to_json(&predicted));
        summary.insert("predicted_matches_computed".into(), json!(matches));
    }

    let profiles: Result<Vec<_>, _> = basis.vectors().iter().map(profile).collect();
    let profiles = profiles?;
    if let Some(first) = profiles.first() {
        summary.insert(
            "localization".into(),
            serde_json::to_value(localization_metrics(first))?,
        );
    }
    match a.format {
        FormatArg::Json => emit(out, &Value::Object(summary)),
        FormatArg::Csv => {
            let csv = if profiles.len() == 1 {
                profile_csv(&profiles[0])
            } else {
                modes_csv(&profiles)
            };
            match &a.out {
                Some(path) => {
                    std::fs::write(path, &csv)?;
                    summary.insert("out".into(), json!(path.display().to_string()));
                    emit(out, &Value::Object(summary))
                }
                None => {
                    out.write_all(csv.as_bytes())?;
                    Ok(0)
                }
            }
        }
    }
}

fn spectrum_cmd(a: SpectrumArgs, out: &mut dyn Write) -> CliResult {
    let params = parse_params(&a.params)?;
    let spec = ModelSpec { kind: model_kind(&a.model)?, n: a.n, params, gf: None };
    let mut summary = serde_json::Map::new();
    summary.insert("command".into(), json!("spectrum"));
    summary.insert("model".into(), json!(a.model));
    summary.insert("n".into(), json!(a.n));

    let numeric = if a.numeric || !a.analytic {
        Some(models::build(&spec)?.to_float().singular_values())
    } else {
        None
    };
    if a.analytic {
        let comparison = if numeric.is_some() && spec.kind == ModelKind::KkBidiagonal {
            Some(models::compare_spectrum(&spec)?)
        } else {
            None
        };
        let analytic = models::spectrum_analytic(&spec)?;
        let quoted = models::spectrum_quoted(&spec)?;
        summary.insert("analytic".into(), spectrum_to_json(&analytic));
        summary.insert("quoted".into(), spectrum_to_json(&quoted));
        if let Some(cmp) = comparison {
            summary.insert(
                "comparison".into(),
                json!({
                    "max_rel_err_analytic": cmp.max_rel_err_analytic,
                    "max_rel_err_quoted": cmp.max_rel_err_quoted,
                    "denominator": cmp.denominator,
                }),
            );
        }
    }
    if let Some(numeric) = &numeric {
        summary.insert("numeric".into(), spectrum_to_json(numeric));
    }
    let for_gaps = match (&numeric, a.analytic) {
        (Some(s), _) => Some(s.clone()),
        (None, true) => Some(models::spectrum_analytic(&spec)?),
        _ => None,
    };
    if a.gaps {
        let s = for_gaps.as_ref().ok_or("--gaps needs --numeric or --analytic")?;
        summary.insert("gap_fits".into(), serde_json::to_value(models::gap_fit_report(s, a.kmax)?)?);
    }
    match a.format {
        FormatArg::Json => emit(out, &Value::Object(summary)),
        FormatArg::Csv => {
            let s = for_gaps.ok_or("csv output needs --numeric or --analytic")?;
            let csv = spectrum_csv(&s);
            match &a.out {
                Some(path) => {
                    std::fs::write(path, &csv)?;
                    summary.insert("out".into(), json!(path.display().to_string()));
                    emit(out, &Value::Object(summary))
                }
                None => {
                    out.write_all(csv.as_bytes())?;
                    Ok(0)
                }
            }
        }
    }
}

fn verify(a: VerifyArgs, out: &mut dyn Write) -> CliResult {
    let fixtures = load_fixture_suite(&a.fixtures)?;
    let outcomes: Vec<_> = fixtures.iter().map(run_fixture).collect();
    let passed = outcomes.iter().filter(|o| o.passed).count();
    let failed = outcomes.len() - passed;
    let summary = json!({
        "command": "verify",
        "fixtures": outcomes.len(),
        "passed": passed,
        "failed": failed,
        "results": outcomes,
    });
    emit(out, &summary)?;
    Ok(if failed == 0 { 0 } else { 1 })
}

// ---------------------------------------------------------------------------
// Sweep
// ---------------------------------------------------------------------------

fn parse_grid(spec: &str) -> Result<(String, Vec<f64>), Box<dyn Error>> {
    let (name, range) = spec
        .split_once('=')
        .ok_or("sweep grid must be name=start:stop:steps")?;
    let parts: Vec<&str> = range.split(':').collect();
    if parts.len() != 3 {
        return Err("sweep grid must be name=start:stop:steps".into());
    }
    let start: f64 = parts[0].trim().parse()?;
    let stop: f64 = parts[1].trim().parse()?;
    let steps: usize = parts[2].trim().parse()?;
    if steps == 0 {
        return Err("sweep needs at least one step".into());
    }
    let values = if steps == 1 {
        vec![start]
    } else {
        (0..steps)
            .map(|k| start + (stop - start) * k as f64 / (steps - 1) as f64)
            .collect()
    };
    Ok((name.trim().to_string(), values))
}

fn thread_cap() -> usize {
    match std::env::var("NULLFORGE_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        Some(n) if n >= 1 => n,
        _ => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
    }
}

/// Fan-out over grid indices with an ordered merge.
fn parallel_map<T, F>(count: usize, threads: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let threads = threads.min(count).max(1);
    if threads == 1 {
        return (0..count).map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let mut slots: Vec<Option<T>> = (0..count).map(|_| None).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|_| {
                scope.spawn(|| {
                    let mut local = Vec::new();
                    loop {
                        let k = next.fetch_add(1, Ordering::Relaxed);
                        if k >= count {
                            break;
                        }
                        local.push((k, f(k)));
                    }
                    local
                })
            })
            .collect();
        for handle in handles {
            for (k, v) in handle.join().expect("sweep worker panicked") {
                slots[k] = Some(v);
            }
        }
    });
    slots.into_iter().map(|s| s.expect("all grid points computed")).collect()
}

fn sweep(a: SweepArgs, out: &mut dyn Write) -> CliResult {
    let base_params = parse_params(&a.params)?;
    let (name, grid) = parse_grid(&a.param)?;
    let kind = model_kind(&a.model)?;
    let metric = a.metric;
    let gf = a.gf.clone();
    let mode = a.mode;

    let eval_point = |k: usize| -> Result<Option<f64>, String> {
        let x = grid[k];
        let mut params = base_params.clone();
        params.insert(name.clone(), ParamValue::Scalar(x));
        let spec = ModelSpec { kind, n: a.n, params: params.clone(), gf: None };
        let base = models::build(&spec).map_err(|e| e.to_string())?;
        let matrix = match &gf {
            None => base,
            Some(src) => {
                let mode = mode.ok_or("--gf requires --mode")?;
                let tf = make_transform(src, &params).map_err(|e| e.to_string())?;
                apply_transform_promoting(&base, &tf, mode.into()).map_err(|e| e.to_string())?
            }
        };
        metric_value(&matrix, metric).map_err(|e| e.to_string())
    };

    let results = parallel_map(grid.len(), thread_cap(), eval_point);
    let mut rows = Vec::with_capacity(grid.len());
    for (k, res) in results.into_iter().enumerate() {
        let value = res.map_err(|e| format!("at {name} = {}: {e}", grid[k]))?;
        rows.push((grid[k], value));
    }

    let mut summary = serde_json::Map::new();
    summary.insert("command".into(), json!("sweep"));
    summary.insert("model".into(), json!(a.model));
    summary.insert("n".into(), json!(a.n));
    summary.insert("param".into(), json!(name));
    summary.insert("metric".into(), json!(metric_name(metric)));
    summary.insert(
        "rows".into(),
        Value::Array(rows.iter().map(|(x, y)| json!([x, y])).collect()),
    );
    match a.format {
        FormatArg::Json => emit(out, &Value::Object(summary)),
        FormatArg::Csv => {
            let mut csv = format!("{name},{}\n", metric_name(metric));
            for (x, y) in &rows {
                match y {
                    Some(y) => csv.push_str(&format!("{x},{y}\n")),
                    None => csv.push_str(&format!("{x},\n")),
                }
            }
            match &a.out {
                Some(path) => {
                    std::fs::write(path, &csv)?;
                    summary.insert("out".into(), json!(path.display().to_string()));
                    emit(out, &Value::Object(summary))
                }
                None => {
                    out.write_all(csv.as_bytes())?;
                    Ok(0)
                }
            }
        }
    }
}

fn metric_name(m: MetricArg) -> &'static str {
    match m {
        MetricArg::Suppression => "suppression",
        MetricArg::Ipr => "ipr",
        MetricArg::PeakSite => "peak_site",
        MetricArg::Nullity => "nullity",
        MetricArg::MinMass => "min_mass",
        MetricArg::MaxMass => "max_mass",
    }
}

/// `None` when the metric is undefined at this point (no zero mode).
fn metric_value(m: &DenseMatrix, metric: MetricArg) -> Result<Option<f64>, Box<dyn Error>> {
    let tol = if m.domain() == Domain::Rational { 0.0 } else { DEFAULT_RANK_TOL };
    match metric {
        MetricArg::Nullity => Ok(Some(m.nullity(tol) as f64)),
        MetricArg::MinMass => Ok(m.singular_values().values().first().copied().map(Some).unwrap_or(None)),
        MetricArg::MaxMass => Ok(m.singular_values().values().last().copied().map(Some).unwrap_or(None)),
        MetricArg::Suppression | MetricArg::Ipr | MetricArg::PeakSite => {
            let basis = m.null_basis(tol);
            let Some(first) = basis.vectors().first() else {
                return Ok(None);
            };
            let metrics = localization_metrics(&profile(first)?);
            Ok(Some(match metric {
                MetricArg::Suppression => metrics.suppression,
                MetricArg::Ipr => metrics.ipr,
                MetricArg::PeakSite => metrics.peak_site as f64,
                _ => unreachable!(),
            }))
        }
    }
}


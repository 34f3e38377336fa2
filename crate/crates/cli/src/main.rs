use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use slice_fock::checks::multi_slice_sup;
use slice_fock::fock::{fock_norm_p, FockParams, GridInfo, NormReport, SliceValue};
use slice_fock::io::{self as files, FunctionSpec, NormRow};
use slice_fock::kernels::{atomic_synthesis_with_bound, normalized_kernel_eval, star_exp_eval};
use slice_fock::quadrature::QuadratureGrid;
use slice_fock::sphere::sphere_with_axes;
use slice_fock::sup::{little_space_profile, sup_norm, SupSampling};
use slice_fock::verify::{self, Status, VerifyConfig};
use slice_fock::{decompose, Error, ImaginaryUnit, MultiPolynomial, Quaternion, SliceSeries};

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_QUADRATURE: u8 = 3;

#[derive(Parser)]
#[command(name = "slice-fock", version)]
#[command(about = "Slice-regular functions, Fock norms and kernels on the quaternionic ball")]
struct Cli {
    #[command(flatten)]
    opts: Opts,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Opts {
    /// Gaussian weight parameter
    #[arg(long, global = true, default_value_t = 1.0)]
    alpha: f64,

    /// Norm exponent, a positive number or `inf`
    #[arg(long, global = true, default_value_t = 2.0)]
    p: f64,

    /// Radius of the domain ball
    #[arg(long, global = true, default_value_t = 1.0)]
    radius: f64,

    /// Number of quaternionic variables
    #[arg(long, global = true, default_value_t = 1)]
    n: usize,

    /// Fibonacci sphere points sampled in addition to i, j, k
    #[arg(long, global = true, default_value_t = slice_fock::sphere::DEFAULT_SPHERE_COUNT)]
    sphere: usize,

    /// Radial quadrature nodes (or radial sup samples)
    #[arg(long, global = true, default_value_t = slice_fock::quadrature::DEFAULT_RADIAL)]
    radial: usize,

    /// Angular quadrature points (or angular sup samples)
    #[arg(long, global = true, default_value_t = slice_fock::quadrature::DEFAULT_ANGULAR)]
    angular: usize,

    /// Seed for the random verification corpus
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    out: Format,

    /// Comma-separated proposition names or keys for `verify`
    #[arg(long, global = true, value_delimiter = ',')]
    props: Option<Vec<String>>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a function file at points given by --at or on stdin
    Eval {
        file: PathBuf,
        /// A point `w,x,y,z`; repeatable. Without it, points are read from stdin, one per line.
        #[arg(long = "at", allow_hyphen_values = true)]
        at: Vec<String>,
        /// Evaluate the truncation at this degree and bound the dropped tail
        #[arg(long)]
        trunc: Option<usize>,
    },
    /// Fock norm of a function file
    Norm {
        file: PathBuf,
        /// Identifier used in CSV rows; defaults to the file stem
        #[arg(long)]
        id: Option<String>,
    },
    /// Run the seeded proposition suite
    Verify {
        /// Corpus size
        #[arg(long, default_value_t = verify::DEFAULT_CORPUS_SIZE)]
        corpus: usize,
    },
    /// Evaluate the exponential kernel at q against w
    Kernel {
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        /// Truncation degree
        #[arg(long = "N", default_value_t = 40)]
        degree: usize,
        /// Apply the normalization factor exp(-alpha |w|^2 / 2)
        #[arg(long)]
        normalized: bool,
    },
    /// Synthesize a function file from atomic data
    Synth { file: PathBuf },
    /// Weighted maximum modulus on circles approaching the boundary
    Profile {
        file: PathBuf,
        /// Comma-separated radii as fractions of --radius
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 0.75, 0.9, 0.95, 0.99])]
        rho: Vec<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(EXIT_INPUT);
    }
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(&cli, &mut out) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(value) = std::env::var("SLICE_FOCK_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .with_context(|| format!("SLICE_FOCK_THREADS must be a positive integer, got '{value}'"))?;
    if threads == 0 {
        bail!("SLICE_FOCK_THREADS must be a positive integer, got 0");
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .context("configuring the thread pool")
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::GridTooCoarse { .. }) => EXIT_QUADRATURE,
        Some(Error::ViolationDetected { .. }) => EXIT_FAIL,
        _ => EXIT_INPUT,
    }
}

fn run(cli: &Cli, out: &mut impl Write) -> anyhow::Result<u8> {
    let o = &cli.opts;
    match &cli.command {
        Command::Eval { file, at, trunc } => cmd_eval(o, file, at, *trunc, out),
        Command::Norm { file, id } => cmd_norm(o, file, id.as_deref(), out),
        Command::Verify { corpus } => cmd_verify(o, *corpus, out),
        Command::Kernel { q, w, degree, normalized } => cmd_kernel(o, q, w, *degree, *normalized, out),
        Command::Synth { file } => cmd_synth(o, file, out),
        Command::Profile { file, rho } => cmd_profile(o, file, rho, out),
    }
}

fn params(o: &Opts) -> anyhow::Result<FockParams> {
    Ok(FockParams::new(o.alpha, o.p, o.n, o.radius)?)
}

fn sampling(o: &Opts) -> anyhow::Result<SupSampling> {
    Ok(SupSampling::new(sphere_with_axes(o.sphere), o.radial, o.angular)?)
}

fn load_function(path: &Path) -> anyhow::Result<FunctionSpec> {
    Ok(files::read_function(path)?)
}

fn load_series(path: &Path) -> anyhow::Result<SliceSeries> {
    match load_function(path)? {
        FunctionSpec::Series(f) => Ok(f),
        FunctionSpec::Multi(_) => bail!("{}: expected a one-variable series", path.display()),
    }
}

/// Parses `w,x,y,z`, `[w, x, y, z]` or four whitespace-separated numbers.
fn parse_quaternion(text: &str) -> anyhow::Result<Quaternion> {
    let values = parse_numbers(text)?;
    match values[..] {
        [w, x, y, z] => Ok(Quaternion::new(w, x, y, z)),
        _ => bail!("expected 4 components, got {} in '{text}'", values.len()),
    }
}

fn parse_numbers(text: &str) -> anyhow::Result<Vec<f64>> {
    text.trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| anyhow!("'{s}' is not a number")))
        .collect()
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes")
}

#[derive(Serialize)]
struct EvalRow {
    q: Vec<Quaternion>,
    value: Quaternion,
    rep_delta: Option<f64>,
    tail_bound: f64,
}

fn cmd_eval(
    o: &Opts,
    file: &Path,
    at: &[String],
    trunc: Option<usize>,
    out: &mut impl Write,
) -> anyhow::Result<u8> {
    let spec = load_function(file)?;
    let dim = match &spec {
        FunctionSpec::Series(_) => 1,
        FunctionSpec::Multi(p) => p.dim(),
    };
    let lines: Vec<String> = if at.is_empty() {
        io::stdin()
            .lock()
            .lines()
            .collect::<Result<Vec<_>, _>>()
            .context("reading points from stdin")?
            .into_iter()
            .filter(|l| !l.trim().is_empty())
            .collect()
    } else {
        at.to_vec()
    };
    let mut rows = Vec::with_capacity(lines.len());
    for line in &lines {
        let numbers = parse_numbers(line)?;
        if numbers.len() != 4 * dim {
            bail!("expected {} numbers per point, got {} in '{line}'", 4 * dim, numbers.len());
        }
        let q: Vec<Quaternion> = numbers
            .chunks(4)
            .map(|c| Quaternion::new(c[0], c[1], c[2], c[3]))
            .collect();
        rows.push(match &spec {
            FunctionSpec::Series(f) => eval_series(f, q[0], trunc),
            FunctionSpec::Multi(p) => eval_multi(p, q)?,
        });
    }
    match o.out {
        Format::Json => writeln!(out, "{}", to_json(&rows))?,
        Format::Csv => {
            writeln!(out, "point,value_w,value_x,value_y,value_z,rep_delta,tail_bound")?;
            for (k, r) in rows.iter().enumerate() {
                let v = r.value;
                let delta = r.rep_delta.map(|d| d.to_string()).unwrap_or_default();
                writeln!(out, "{k},{},{},{},{},{delta},{}", v.w, v.x, v.y, v.z, r.tail_bound)?;
            }
        }
        Format::Text => {
            for r in &rows {
                let q: Vec<String> = r.q.iter().map(|q| q.to_string()).collect();
                let delta = r.rep_delta.map(|d| format!("{d:e}")).unwrap_or_else(|| "n/a".into());
                writeln!(
                    out,
                    "q = {}  f(q) = {}  rep delta = {}  tail bound = {:e}",
                    q.join(" "),
                    r.value,
                    delta,
                    r.tail_bound
                )?;
            }
        }
    }
    Ok(0)
}

/// Cross-checks the direct value against the representation formula on the
/// slice of `i`.
fn eval_series(f: &SliceSeries, q: Quaternion, trunc: Option<usize>) -> EvalRow {
    let k = trunc.unwrap_or(f.degree());
    let g = f.truncate(k);
    let value = g.eval(q);
    EvalRow {
        q: vec![q],
        value,
        rep_delta: Some((g.rep_eval(ImaginaryUnit::I, q) - value).norm()),
        tail_bound: f.tail_bound(k, q.norm()),
    }
}

/// Several-variable polynomials are evaluated on a common slice, taken from
/// the first non-real coordinate.
fn eval_multi(p: &MultiPolynomial, q: Vec<Quaternion>) -> anyhow::Result<EvalRow> {
    let unit = q
        .iter()
        .map(|&z| decompose(z))
        .find(|s| s.im > 0.0)
        .map(|s| s.unit)
        .unwrap_or(ImaginaryUnit::I);
    let value = p.eval_slice(unit, &q)?;
    Ok(EvalRow {
        q,
        value,
        rep_delta: None,
        tail_bound: 0.0,
    })
}

fn cmd_norm(o: &Opts, file: &Path, id: Option<&str>, out: &mut impl Write) -> anyhow::Result<u8> {
    let params = params(o)?;
    let spec = load_function(file)?;
    if o.n != spec_dim(&spec) {
        bail!("--n {} does not match the {}-variable function in {}", o.n, spec_dim(&spec), file.display());
    }
    let report = match (&spec, params.p.is_finite()) {
        (FunctionSpec::Series(f), true) => {
            let grid = QuadratureGrid::new(o.radial, o.angular, o.radius)?;
            fock_norm_p(f, &params, &grid, &sphere_with_axes(o.sphere))?
        }
        (FunctionSpec::Series(f), false) => sup_norm(f, &params, &sampling(o)?)?,
        (FunctionSpec::Multi(p), false) => multi_sup_report(p, &params, o)?,
        (FunctionSpec::Multi(_), true) => {
            bail!("integral norms of several-variable polynomials are not supported; use --p inf")
        }
    };
    match o.out {
        Format::Json => writeln!(out, "{}", to_json(&report))?,
        Format::Csv => {
            let function_id = id
                .map(str::to_string)
                .or_else(|| file.file_stem().map(|s| s.to_string_lossy().into_owned()))
                .unwrap_or_else(|| "f".into());
            let row = NormRow {
                function_id,
                p: params.p,
                alpha: params.alpha,
                radius: params.radius,
                value: report.value,
            };
            files::write_norm_csv(&mut *out, &[row])?;
        }
        Format::Text => {
            writeln!(
                out,
                "norm = {:.12e}  (p = {}, alpha = {}, R = {})",
                report.value, params.p, params.alpha, params.radius
            )?;
            writeln!(
                out,
                "grid: {} {}x{} on radius {}, {} slices",
                report.grid.kind, report.grid.radial, report.grid.angular, report.grid.radius, report.grid.sphere
            )?;
        }
    }
    Ok(0)
}

fn spec_dim(spec: &FunctionSpec) -> usize {
    match spec {
        FunctionSpec::Series(_) => 1,
        FunctionSpec::Multi(p) => p.dim(),
    }
}

fn multi_sup_report(p: &MultiPolynomial, params: &FockParams, o: &Opts) -> anyhow::Result<NormReport> {
    use rayon::prelude::*;
    let sphere = sphere_with_axes(o.sphere);
    let per_slice = sphere
        .par_iter()
        .map(|&unit| {
            multi_slice_sup(p, unit, params, o.radial, o.angular).map(|value| SliceValue { unit, value })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let value = per_slice.iter().map(|s| s.value).fold(0.0, f64::max);
    Ok(NormReport {
        value,
        per_slice,
        grid: GridInfo {
            kind: "polydisk scan".into(),
            radial: o.radial,
            angular: o.angular,
            radius: params.radius,
            sphere: sphere.len(),
        },
        tail_bound: 0.0,
    })
}

fn cmd_verify(o: &Opts, corpus: usize, out: &mut impl Write) -> anyhow::Result<u8> {
    let mut config = VerifyConfig::new(o.seed);
    config.corpus_size = corpus;
    config.params = params(o)?;
    config.grid = QuadratureGrid::new(o.radial, o.angular, o.radius)?;
    config.sup = sampling(o)?;
    config.sphere = sphere_with_axes(o.sphere);
    let props = verify::select(o.props.as_deref())?;
    let report = verify::run(&config, &props);
    match o.out {
        Format::Json => writeln!(out, "{}", to_json(&report))?,
        Format::Csv => {
            writeln!(out, "name,instances,metric,worst,threshold,status")?;
            for r in &report.results {
                writeln!(
                    out,
                    "{},{},{},{:e},{:e},{}",
                    r.name, r.instances, r.metric, r.worst, r.threshold, r.status
                )?;
            }
        }
        Format::Text => write!(out, "{report}")?,
    }
    let failed = report.results.iter().any(|r| r.status != Status::Pass);
    Ok(if failed { EXIT_FAIL } else { 0 })
}

fn cmd_kernel(
    o: &Opts,
    q: &str,
    w: &str,
    degree: usize,
    normalized: bool,
    out: &mut impl Write,
) -> anyhow::Result<u8> {
    if !(o.alpha > 0.0 && o.alpha.is_finite()) {
        bail!("alpha must be positive, got {}", o.alpha);
    }
    let (q, w) = (parse_quaternion(q)?, parse_quaternion(w)?);
    let k = if normalized {
        normalized_kernel_eval(w, q, o.alpha, degree)
    } else {
        star_exp_eval(q, w, o.alpha, degree)
    };
    match o.out {
        Format::Json => writeln!(out, "{}", to_json(&k))?,
        Format::Csv => {
            writeln!(out, "value_w,value_x,value_y,value_z,tail_bound")?;
            let v = k.value;
            writeln!(out, "{},{},{},{},{}", v.w, v.x, v.y, v.z, k.tail_bound)?;
        }
        Format::Text => writeln!(out, "value = {}  tail bound = {:e}", k.value, k.tail_bound)?,
    }
    Ok(0)
}

fn cmd_synth(o: &Opts, file: &Path, out: &mut impl Write) -> anyhow::Result<u8> {
    let atomic = files::read_atomic(file)?;
    let data = atomic.to_data()?;
    let synthesis = atomic_synthesis_with_bound(&data, atomic.slice, o.radius)?;
    match o.out {
        Format::Json => writeln!(out, "{}", files::series_to_json(&synthesis.series))?,
        Format::Csv => {
            writeln!(out, "n,w,x,y,z")?;
            for (n, a) in synthesis.series.coeffs().iter().enumerate() {
                writeln!(out, "{n},{},{},{},{}", a.w, a.x, a.y, a.z)?;
            }
        }
        Format::Text => {
            for (n, a) in synthesis.series.coeffs().iter().enumerate() {
                writeln!(out, "q^{n:<3} {a}")?;
            }
            writeln!(out, "tail bound on |q| <= {} = {:e}", o.radius, synthesis.tail_bound)?;
        }
    }
    Ok(0)
}

fn cmd_profile(o: &Opts, file: &Path, rho: &[f64], out: &mut impl Write) -> anyhow::Result<u8> {
    let params = params(o)?;
    let f = load_series(file)?;
    let radii: Vec<f64> = rho.iter().map(|r| r * o.radius).collect();
    let profile = little_space_profile(&f, &params, &radii, &sampling(o)?)?;
    match o.out {
        Format::Json => writeln!(out, "{}", to_json(&profile))?,
        Format::Csv => {
            writeln!(out, "rho,value")?;
            for (r, v) in profile.rho.iter().zip(&profile.values) {
                writeln!(out, "{r},{v}")?;
            }
        }
        Format::Text => {
            for (r, v) in profile.rho.iter().zip(&profile.values) {
                writeln!(out, "rho = {r:<8} M = {v:.6e}")?;
            }
            writeln!(
                out,
                "decreasing tail: {}  member: {}",
                profile.decreasing_tail, profile.member
            )?;
        }
    }
    Ok(0)
}

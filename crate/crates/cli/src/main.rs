//! `hbl` — norms of finite Blaschke products and rational functions on the
//! unit disc, plus the inequality verification suite.
//!
//! Exit codes: 0 success (all checks passed / norm converged), 1 usage or
//! domain error, 2 numerical non-convergence.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use hbl_core::norms::{self, QuadOpts};
use hbl_core::verify::{self, CheckParams, ManifestEntry, SweepFamily};
use hbl_core::{BlaschkeProduct, Complex64, Error, RationalFunction};

const EXIT_USAGE: u8 = 1;
const EXIT_NO_CONVERGE: u8 = 2;

#[derive(Parser)]
#[command(name = "hbl", version, about = "Disc-function norms and inequality checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one norm of a function read from an instance file.
    Norm(NormArgs),
    /// Run a named inequality check (or a whole manifest) and stream reports.
    Verify(VerifyArgs),
    /// Run a scaling sweep and print a table with fitted exponents.
    Sweep(SweepArgs),
    /// Generate an instance file.
    Gen(GenArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Space {
    Bergman,
    A1,
    Besov,
    Bloch,
    Bmoa,
    I,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct NormArgs {
    /// Which norm to compute.
    #[arg(long, value_enum)]
    space: Space,
    /// Integrability exponent.
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    /// Weight exponent (ignored by besov/bloch/bmoa).
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    /// Instance JSON file ({"zeros": ...} or {"numerator": ...}).
    #[arg(long = "in")]
    input: PathBuf,
    /// Relative quadrature tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Check name: uss|dynkin|degree|theorem3|peller|hardy|opnorm|kernel4|
    /// i_chain|afp|peller_small_p|critical|dolzhenko.
    #[arg(long, conflicts_with_all = ["manifest", "all"])]
    check: Option<String>,
    /// JSON manifest: a list of {check, seed, params}.
    #[arg(long, conflicts_with = "all")]
    manifest: Option<PathBuf>,
    /// Run the default suite.
    #[arg(long)]
    all: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Maximum instance degree.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    /// Pole-reflection radius of the sharpness family.
    #[arg(long)]
    r: Option<f64>,
    /// Sweep sizes: "a..b" (powers of two) or "2,4,8".
    #[arg(long)]
    ns: Option<String>,
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Which sweep to run.
    #[arg(long = "sweep", value_enum)]
    kind: SweepKind,
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    /// Sizes: "a..b" (powers of two) or a comma list.
    #[arg(long, default_value = "2..256")]
    ns: String,
    #[arg(long, default_value = "monomial")]
    family: String,
    #[arg(long, default_value_t = 0.9)]
    radius: f64,
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    #[arg(long, default_value_t = 0.9)]
    r: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepKind {
    Afp,
    Critical,
    Dolzhenko,
    #[value(name = "peller_small_p")]
    PellerSmallP,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    /// Random zeros in a disc of the given radius.
    Blaschke,
    /// All zeros at the origin.
    Monomial,
    /// One real zero -r of multiplicity n.
    MobiusPower,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: GenKind,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.95)]
    radius: f64,
    #[arg(long, default_value_t = 0.9)]
    r: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help/--version are not usage errors.
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            eprintln!("{e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    configure_threads();
    let result = match cli.command {
        Command::Norm(args) => run_norm(args),
        Command::Verify(args) => run_verify(args),
        Command::Sweep(args) => run_sweep(args),
        Command::Gen(args) => run_gen(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::NoConverge { .. } => ExitCode::from(EXIT_NO_CONVERGE),
                _ => ExitCode::from(EXIT_USAGE),
            }
        }
    }
}

/// HBL_THREADS caps the worker count; results are bit-identical either way.
fn configure_threads() {
    if let Ok(text) = std::env::var("HBL_THREADS") {
        if let Ok(k) = text.trim().parse::<usize>() {
            if k >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
            }
        }
    }
}

enum Instance {
    Blaschke(BlaschkeProduct),
    Rational(RationalFunction),
}

fn load_instance(path: &PathBuf) -> Result<Instance, Error> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    if value.get("zeros").is_some() {
        Ok(Instance::Blaschke(serde_json::from_value(value)?))
    } else if value.get("numerator").is_some() {
        Ok(Instance::Rational(serde_json::from_value(value)?))
    } else {
        Err(Error::Param(format!(
            "{} is neither a Blaschke instance (zeros) nor a rational one (numerator)",
            path.display()
        )))
    }
}

struct Output {
    target: Option<PathBuf>,
    buffer: String,
}

impl Output {
    fn new(target: Option<PathBuf>) -> Self {
        Output {
            target,
            buffer: String::new(),
        }
    }

    fn line(&mut self, text: impl AsRef<str>) {
        self.buffer.push_str(text.as_ref());
        self.buffer.push('\n');
    }

    fn finish(self) -> Result<(), Error> {
        match self.target {
            Some(path) => std::fs::write(path, self.buffer)?,
            None => {
                std::io::stdout().write_all(self.buffer.as_bytes())?;
            }
        }
        Ok(())
    }
}

fn run_norm(args: NormArgs) -> Result<ExitCode, Error> {
    let instance = load_instance(&args.input)?;
    let opts = QuadOpts::tol(args.tol);
    let report = match (&instance, args.space) {
        (Instance::Blaschke(b), Space::Bergman) => norms::bergman_norm(b, args.p, args.alpha, opts)?,
        (Instance::Rational(f), Space::Bergman) => norms::bergman_norm(f, args.p, args.alpha, opts)?,
        (Instance::Blaschke(b), Space::A1) => norms::a1_seminorm(b, args.p, args.alpha, opts)?,
        (Instance::Rational(f), Space::A1) => norms::a1_seminorm(f, args.p, args.alpha, opts)?,
        (Instance::Blaschke(b), Space::Besov) => norms::besov_seminorm(b, args.p, opts)?,
        (Instance::Rational(f), Space::Besov) => norms::besov_seminorm(f, args.p, opts)?,
        (Instance::Blaschke(b), Space::Bloch) => norms::bloch_norm(b, Default::default()),
        (Instance::Rational(f), Space::Bloch) => norms::bloch_norm(f, Default::default()),
        (Instance::Blaschke(b), Space::Bmoa) => norms::bmoa_upper(b, 1024),
        (Instance::Rational(f), Space::Bmoa) => norms::bmoa_upper(f, 1024),
        (Instance::Blaschke(b), Space::I) => norms::i_integral(b, args.p, args.alpha, opts)?,
        (Instance::Rational(_), Space::I) => {
            return Err(Error::Param(
                "the I integral is defined for inner (Blaschke) instances".into(),
            ))
        }
    };
    let mut out = Output::new(args.out.clone());
    match args.format {
        Format::Json => out.line(serde_json::to_string(&report)?),
        Format::Csv => {
            out.line("value,p,alpha,kind,error_estimate");
            out.line(format!(
                "{},{},{},{},{}",
                report.value,
                report.params.p,
                report.params.alpha,
                serde_json::to_value(report.params.kind)?.as_str().unwrap_or("?"),
                report.error_estimate()
            ));
        }
    }
    out.finish()?;
    Ok(if report.converged() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_NO_CONVERGE)
    })
}

fn parse_ns(text: &str) -> Result<Vec<usize>, Error> {
    let bad = |t: &str| Error::Param(format!("cannot parse sizes from '{t}'"));
    if let Some((a, b)) = text.split_once("..") {
        let lo: usize = a.trim().parse().map_err(|_| bad(text))?;
        let hi: usize = b.trim().parse().map_err(|_| bad(text))?;
        if lo == 0 || hi < lo {
            return Err(bad(text));
        }
        Ok(verify::powers_of_two(lo, hi))
    } else {
        text.split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| bad(text)))
            .collect()
    }
}

fn entry_from_flags(args: &VerifyArgs, check: &str) -> Result<ManifestEntry, Error> {
    let mut params = CheckParams::default();
    if let Some(v) = args.trials {
        params.trials = v;
    }
    if let Some(v) = args.p {
        params.p = v;
    }
    if let Some(v) = args.alpha {
        params.alpha = v;
    }
    if let Some(v) = args.n {
        params.n = v;
    }
    if let Some(v) = args.radius {
        params.radius = v;
    }
    if let Some(v) = args.eps {
        params.eps = v;
    }
    if let Some(v) = args.r {
        params.r = v;
    }
    if let Some(text) = &args.ns {
        params.ns = parse_ns(text)?;
    }
    if let Some(v) = &args.family {
        params.family = v.clone();
    }
    if let Some(v) = args.tol {
        params.tol = v;
    }
    Ok(ManifestEntry::new(check, args.seed, params))
}

fn run_verify(args: VerifyArgs) -> Result<ExitCode, Error> {
    let entries: Vec<ManifestEntry> = if args.all {
        verify::default_suite()
    } else if let Some(path) = &args.manifest {
        serde_json::from_str(&std::fs::read_to_string(path)?)?
    } else if let Some(check) = &args.check {
        vec![entry_from_flags(&args, check)?]
    } else {
        return Err(Error::Param(
            "choose one of --check NAME, --manifest FILE, --all".into(),
        ));
    };

    let mut out = Output::new(args.out.clone());
    if matches!(args.format, Format::Csv) {
        out.line("name,instance,lhs,rhs,margin,pass");
    }
    let mut all_pass = true;
    for entry in &entries {
        let reports = verify::run_check(entry)?;
        for report in &reports {
            all_pass &= report.pass;
            match args.format {
                Format::Csv => out.line(report.csv_line()),
                Format::Json => out.line(serde_json::to_string(report)?),
            }
        }
    }
    out.finish()?;
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_USAGE)
    })
}

fn run_sweep(args: SweepArgs) -> Result<ExitCode, Error> {
    let ns = parse_ns(&args.ns)?;
    if ns.len() < 2 {
        return Err(Error::DegenerateSweep(format!(
            "need at least two sizes, got {:?}",
            ns
        )));
    }
    let opts = QuadOpts::tol(args.tol);
    let family = match args.family.as_str() {
        "monomial" => SweepFamily::Monomial,
        "random" => SweepFamily::RandomZeros {
            radius: args.radius,
            draws: 3,
        },
        other => return Err(Error::Param(format!("unknown family '{other}'"))),
    };
    let (sweep, report) = match args.kind {
        SweepKind::Afp => verify::check_afp_scaling(args.p, &ns, family, args.seed, opts)?,
        SweepKind::Critical => verify::check_critical_alpha(args.p, args.eps, &ns, opts)?,
        SweepKind::Dolzhenko => verify::check_dolzhenko(args.p, &ns, args.r, opts)?,
        SweepKind::PellerSmallP => {
            verify::check_peller_small_p(args.p, &ns, family, args.seed, opts)?
        }
    };
    let mut out = Output::new(args.out.clone());
    out.line("n,value,cumulative_exponent");
    let cum = sweep.cumulative_exponents();
    for i in 0..sweep.xs.len() {
        let c = if cum[i].is_nan() {
            String::new()
        } else {
            format!("{}", cum[i])
        };
        out.line(format!("{},{},{}", sweep.xs[i], sweep.ys[i], c));
    }
    out.line(format!(
        "fit,{},{}",
        sweep.fitted_exponent, sweep.exponent_ci
    ));
    out.finish()?;
    Ok(if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_USAGE)
    })
}

fn run_gen(args: GenArgs) -> Result<ExitCode, Error> {
    let instance = match args.kind {
        GenKind::Blaschke => BlaschkeProduct::random(args.n, args.radius, args.seed)?,
        GenKind::Monomial => BlaschkeProduct::monomial(args.n),
        GenKind::MobiusPower => BlaschkeProduct::mobius_power(args.n, args.r)?,
    };
    let mut out = Output::new(args.out.clone());
    out.line(serde_json::to_string(&instance)?);
    out.finish()?;
    Ok(ExitCode::SUCCESS)
}

// Unused import guard: Complex64 appears in instance handling helpers only
// behind feature-independent code paths.
#[allow(dead_code)]
fn _complex_witness(c: Complex64) -> f64 {
    c.re
}

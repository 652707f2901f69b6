use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use qpencil::charfn::{default_window, search_zeros, verify_mode_pattern_in, RootWindow, ZeroSearch};
use qpencil::homotopy::track;
use qpencil::io::{parse_pencil, parse_sl_problem, pencil_to_json, SpectrumDoc, ZeroDoc};
use qpencil::pencil::{spectrum_with, Pencil, PencilSpec, SpectrumOptions};
use qpencil::properties::{
    closed_form_potential, integer_mode_count, run_all, run_string, string_spectrum_options, RunOptions, StringOptions,
};
use qpencil::report::VerificationReport;
use qpencil::sturm::{discretize, shoot_charfn, Potential, SlProblem, Variant};
use qpencil::Error;

#[derive(Parser, Debug)]
#[command(name = "qpencil", version, about = "Spectra of gyroscopic quadratic pencils")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Eigenvalues of L(λ, η) as JSON.
    Spectrum(SpectrumArgs),
    /// Eigenvalue branches along η as CSV, with collision events.
    Track(TrackArgs),
    /// Runs every applicable check; exit 1 if any fails.
    Verify(VerifyArgs),
    /// Discretizes a string problem into a pencil, or solves it.
    Sturm(SturmArgs),
    /// Zeros of a characteristic function in a rectangle.
    Roots(RootsArgs),
}

#[derive(clap::Args, Debug)]
struct SpectrumArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    eta: f64,
    /// Eigenvalues with |λ| at most this form the zero cluster.
    #[arg(long)]
    zero_tol: Option<f64>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct TrackArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    from: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    to: f64,
    #[arg(long, default_value_t = 101)]
    steps: usize,
    /// Events CSV path; without it events go to standard error.
    #[arg(long)]
    events: Option<PathBuf>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct VerifyArgs {
    /// Pencil JSON.
    #[arg(long, conflicts_with = "sturm", required_unless_present = "sturm")]
    input: Option<PathBuf>,
    /// Boundary-value problem JSON.
    #[arg(long)]
    sturm: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    eta: f64,
    /// Interval parity is asserted on at most this many intervals.
    #[arg(long)]
    max_intervals: Option<usize>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    Single,
    Double,
}

#[derive(clap::Args, Debug)]
struct SturmArgs {
    /// Problem JSON; replaces the numeric options.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "single")]
    variant: VariantArg,
    /// Constant potential.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    q: f64,
    /// Segment length; `pi` is accepted.
    #[arg(long, default_value = "1", value_parser = parse_scalar, allow_hyphen_values = true)]
    a: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Negates q so the closed forms read √(λ² + q).
    #[arg(long)]
    paper_sign_convention: bool,
    /// Emits the spectrum instead of the pencil.
    #[arg(long)]
    solve: bool,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    eta: f64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FnArg {
    /// Closed-form double-string function with constant potential.
    Omega,
    /// Shooting function of the single string.
    Shoot,
}

#[derive(clap::Args, Debug)]
struct RootsArgs {
    #[arg(long = "fn", value_enum)]
    function: FnArg,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    q: f64,
    #[arg(long, default_value = "1", value_parser = parse_scalar, allow_hyphen_values = true)]
    a: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    alpha: f64,
    /// Grid points for the shooting integrator.
    #[arg(long, default_value_t = 200)]
    n: usize,
    /// `re_min,re_max,im_min,im_max`.
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
    window: Option<[f64; 4]>,
    #[arg(long, default_value_t = 64)]
    samples: usize,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

/// `pi`, `<k>pi`, `<k>*pi`, `pi/<k>` or a plain number.
fn parse_scalar(s: &str) -> Result<f64, String> {
    let t = s.trim().to_ascii_lowercase();
    let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("`{s}`: {e}"));
    let v = if t == "pi" {
        PI
    } else if t == "-pi" {
        -PI
    } else if let Some(d) = t.strip_prefix("pi/") {
        PI / num(d)?
    } else if let Some(k) = t.strip_suffix("pi") {
        num(k.trim_end_matches('*'))? * PI
    } else {
        num(&t)?
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

fn parse_window(s: &str) -> Result<[f64; 4], String> {
    let parts: Vec<f64> = s.split(',').map(parse_scalar).collect::<Result<_, _>>()?;
    <[f64; 4]>::try_from(parts).map_err(|p| format!("expected 4 comma-separated values, got {}", p.len()))
}

/// Exit status classes.
enum Failure {
    /// Exit 2.
    Invalid(String),
    /// Exit 1.
    Numerical(String),
    /// Exit 1 after the payload is written.
    ChecksFailed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_)
            | Error::DimensionMismatch(_)
            | Error::NotSymmetric(_)
            | Error::HypothesisViolated(_)
            | Error::PreconditionInteger(_)
            | Error::PreconditionKerMA
            | Error::MassNotDefinite(_) => Failure::Invalid(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str) -> Outcome {
    let mut text = text.to_owned();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Invalid(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Numerical(format!("standard output: {e}"))),
    }
}

fn load_spec(path: &Path) -> Result<PencilSpec, Failure> {
    let pencil: Pencil = parse_pencil(&read(path)?)?;
    Ok(PencilSpec::new(pencil)?)
}

fn check_eta(eta: f64) -> Outcome {
    if (0.0..=1.0).contains(&eta) {
        Ok(())
    } else {
        Err(Failure::Invalid(format!("eta = {eta} outside [0, 1]")))
    }
}

fn cmd_spectrum(args: &SpectrumArgs) -> Outcome {
    check_eta(args.eta)?;
    let spec = load_spec(&args.input)?;
    let opts = match args.zero_tol {
        Some(t) if t.is_finite() && t >= 0.0 => SpectrumOptions::with_zero_tol(t),
        Some(t) => return Err(Failure::Invalid(format!("zero tolerance {t} must be nonnegative"))),
        None => SpectrumOptions::default(),
    };
    let r = spectrum_with(&spec, args.eta, &opts)?;
    emit(args.output.as_deref(), &SpectrumDoc::from_result(&r).to_json())
}

fn cmd_track(args: &TrackArgs) -> Outcome {
    let spec = load_spec(&args.input)?;
    let t = track(&spec, args.from, args.to, args.steps)?;
    emit(args.output.as_deref(), &t.to_track_csv())?;
    match &args.events {
        Some(p) => emit(Some(p), &t.to_events_csv())?,
        None => eprint!("{}", t.to_events_csv()),
    }
    Ok(())
}

fn report_outcome(report: &VerificationReport, output: Option<&Path>) -> Outcome {
    emit(output, &report.to_json())?;
    for c in report.failures() {
        eprintln!("FAIL {}: {}", c.name, c.details);
    }
    if report.has_failure() {
        Err(Failure::ChecksFailed)
    } else {
        Ok(())
    }
}

fn cmd_verify(args: &VerifyArgs) -> Outcome {
    check_eta(args.eta)?;
    if let Some(path) = &args.sturm {
        let p = parse_sl_problem(&read(path)?)?;
        let opts = StringOptions {
            max_intervals: args.max_intervals.or(StringOptions::default().max_intervals),
            ..StringOptions::default()
        };
        let (mut report, v) = run_string(&p, &opts)?;
        if let Some(c) = &v.counts {
            eprintln!(
                "kappa_A = {}, imaginary type-I pairs = {}, nonreal type-II pairs = {}, interval excess = {:?}",
                c.negative_linear_count,
                c.imag_type1_pairs,
                c.nonreal_type2_pairs,
                c.interval_excess()
            );
        }
        if p.variant == Variant::Double {
            if let Some(q) = closed_form_potential(&p) {
                if integer_mode_count(q, p.a).is_ok() {
                    let pattern = verify_mode_pattern_in(q, p.a, p.alpha, &default_window(q)?)?;
                    report.extend(pattern.report.checks);
                }
            }
        }
        return report_outcome(&report, args.output.as_deref());
    }
    let path = args.input.as_deref().ok_or_else(|| Failure::Invalid("--input or --sturm is required".into()))?;
    let pencil = parse_pencil(&read(path)?)?;
    let opts = RunOptions { eta: args.eta, max_intervals: args.max_intervals, ..RunOptions::default() };
    let report = run_all(&pencil, &opts);
    if report.get("condition_i").is_some_and(|c| c.failed()) {
        emit(args.output.as_deref(), &report.to_json())?;
        return Err(Failure::Invalid(report.get("condition_i").map(|c| c.details.clone()).unwrap_or_default()));
    }
    report_outcome(&report, args.output.as_deref())
}

fn sturm_problem(args: &SturmArgs) -> Result<SlProblem, Failure> {
    let p = match &args.input {
        Some(path) => parse_sl_problem(&read(path)?)?,
        None => {
            let variant = match args.variant {
                VariantArg::Single => Variant::Single,
                VariantArg::Double => Variant::Double,
            };
            SlProblem::new(variant, Potential::Const { value: args.q }, args.a, args.alpha, args.n)
                .with_paper_sign(args.paper_sign_convention)
        }
    };
    p.validate()?;
    Ok(p)
}

fn cmd_sturm(args: &SturmArgs) -> Outcome {
    check_eta(args.eta)?;
    let p = sturm_problem(args)?;
    let spec = discretize(&p)?;
    if args.solve {
        let r = spectrum_with(&spec, args.eta, &string_spectrum_options(&p))?;
        emit(args.output.as_deref(), &SpectrumDoc::from_result(&r).to_json())
    } else {
        emit(args.output.as_deref(), &pencil_to_json(spec.pencil()))
    }
}

fn zeros_json(s: &ZeroSearch) -> String {
    let docs: Vec<ZeroDoc> = s
        .zeros
        .iter()
        .map(|z| ZeroDoc { re: z.z.re, im: z.z.im, mult: z.multiplicity, residual: z.residual })
        .collect();
    serde_json::to_string_pretty(&docs).expect("zeros serialize")
}

fn cmd_roots(args: &RootsArgs) -> Outcome {
    for (name, v) in [("q", args.q), ("a", args.a), ("alpha", args.alpha)] {
        if !v.is_finite() {
            return Err(Failure::Invalid(format!("{name} = {v} is not finite")));
        }
    }
    let window = match args.window {
        Some([a, b, c, d]) => RootWindow::new(a, b, c, d)?,
        None => match args.function {
            FnArg::Omega => default_window(args.q)?,
            FnArg::Shoot => RootWindow::new(0.0, 10.0, -1.0, 1.0)?,
        },
    }
    .with_samples(args.samples)?;
    match args.function {
        FnArg::Omega => {
            if !(args.a > 0.0) || !(args.alpha > 0.0) {
                return Err(Failure::Invalid("omega needs a > 0 and alpha > 0".into()));
            }
            if integer_mode_count(args.q, args.a).is_ok() {
                let pattern = verify_mode_pattern_in(args.q, args.a, args.alpha, &window)?;
                emit(args.output.as_deref(), &zeros_json(&pattern.search))?;
                for c in &pattern.report.checks {
                    eprintln!("{} {}: {}", if c.failed() { "FAIL" } else { "ok" }, c.name, c.details);
                }
                return if pattern.report.has_failure() { Err(Failure::ChecksFailed) } else { Ok(()) };
            }
            let (q, a, alpha) = (args.q, args.a, args.alpha);
            let f = move |z: Complex64| qpencil::sturm::junction_charfn(z, q, a, alpha);
            let s = search_zeros(&f, &window)?;
            eprintln!("winding {} over the window, {} zeros", s.winding, s.zeros.len());
            emit(args.output.as_deref(), &zeros_json(&s))
        }
        FnArg::Shoot => {
            let p = SlProblem::new(Variant::Single, Potential::Const { value: args.q }, args.a, args.alpha, args.n);
            p.validate()?;
            let f = |z: Complex64| shoot_charfn(z, &p);
            let s = search_zeros(&f, &window)?;
            eprintln!("winding {} over the window, {} zeros", s.winding, s.zeros.len());
            emit(args.output.as_deref(), &zeros_json(&s))
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Track(a) => cmd_track(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sturm(a) => cmd_sturm(a),
        Command::Roots(a) => cmd_roots(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    std::panic::set_hook(Box::new(|info| eprintln!("internal error: {info}")));
    match std::panic::catch_unwind(|| run(&cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Failure::Invalid(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Ok(Err(Failure::Numerical(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Ok(Err(Failure::ChecksFailed)) => ExitCode::from(1),
        Err(_) => ExitCode::from(1),
    }
}

//! The `ybmap` command line, callable in-process so tests can inject a
//! registry and capture output.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ybmap_core::algebra::{Field, Rational, WideFloat};
use ybmap_core::catalog::{MapDescriptor, PairState, Registry};
use ybmap_core::leaves::{iterate_orbit_with_threshold, Branch, ImplicitMap, NEAR_SINGULAR};
use ybmap_core::report::{full_report, verify_report, RunOptions};
use ybmap_core::verify::{parse_checks, Check, IMPLICIT_YB_TOLERANCE};
use ybmap_core::Error;

/// Significant digits printed for wide floats (128 bits is about 38.5).
const WIDE_DIGITS: usize = 38;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "ybmap",
    version,
    about = "Yang-Baxter maps from Darboux matrices: catalog, exact verification and orbits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the registered maps.
    List {
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a map to one state.
    Eval(EvalArgs),
    /// Run verification checks on one map.
    Verify(VerifyArgs),
    /// Iterate a map and track invariant drift.
    Orbit(OrbitArgs),
    /// Run every check on every map and write one JSON document.
    Report(ReportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FloatKind {
    /// IEEE double precision.
    F64,
    /// 128-bit binary mantissa with unbounded exponent.
    Wide,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BranchArg {
    Plus,
    Minus,
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Branch {
        match b {
            BranchArg::Plus => Branch::Plus,
            BranchArg::Minus => Branch::Minus,
        }
    }
}

#[derive(Args, Debug)]
struct MapArg {
    /// Map name (e.g. adler-yamilov, vector-nls:3, dnls4-implicit).
    #[arg(value_name = "MAP")]
    positional: Option<String>,
    #[arg(long = "map", value_name = "MAP")]
    flag: Option<String>,
}

impl MapArg {
    fn name(&self) -> Result<&str, Failure> {
        match (&self.positional, &self.flag) {
            (Some(p), Some(f)) if p != f => {
                Err(Failure::Usage(format!("map given twice: `{p}` and `{f}`")))
            }
            (Some(n), _) | (None, Some(n)) => Ok(n),
            (None, None) => Err(Failure::Usage("a map name is required".into())),
        }
    }
}

#[derive(Args, Debug)]
struct StateArgs {
    /// First point, comma separated (`p/q` literals unless --float).
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    /// Second point.
    #[arg(long, allow_hyphen_values = true)]
    y: String,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    /// Aux coordinate of the first point (6-dimensional maps).
    #[arg(long = "X", allow_hyphen_values = true)]
    big_x: Option<String>,
    /// Aux coordinate of the second point.
    #[arg(long = "Y", allow_hyphen_values = true)]
    big_y: Option<String>,
    /// Float arithmetic instead of exact rationals.
    #[arg(long, value_enum, num_args = 0..=1, require_equals = true, default_missing_value = "f64")]
    float: Option<FloatKind>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[command(flatten)]
    map: MapArg,
    #[command(flatten)]
    state: StateArgs,
    /// Root of the leaf quadratic used by implicit maps.
    #[arg(long, value_enum, default_value_t = BranchArg::Plus)]
    branch: BranchArg,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    map: MapArg,
    /// Comma-separated checks; all applicable checks when omitted.
    #[arg(long)]
    checks: Option<String>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Max-norm tolerance for float YB residuals of the implicit maps.
    #[arg(long, default_value_t = IMPLICIT_YB_TOLERANCE, value_parser = positive_float)]
    tolerance: f64,
    #[arg(long, value_enum, default_value_t = BranchArg::Plus)]
    branch: BranchArg,
    /// Output format; `human` for verify and `json` for report by default.
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn options(&self) -> RunOptions {
        RunOptions {
            trials: self.trials as usize,
            seed: self.seed,
            tolerance: self.tolerance,
            branch: self.branch.into(),
        }
    }
}

#[derive(Args, Debug)]
struct OrbitArgs {
    #[command(flatten)]
    map: MapArg,
    #[command(flatten)]
    state: StateArgs,
    #[arg(long, default_value_t = 100)]
    steps: usize,
    /// Guard magnitude below which the orbit is aborted.
    #[arg(long, default_value_t = NEAR_SINGULAR, value_parser = positive_float)]
    tolerance: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReportArgs {
    /// Cover every registered map (the default when no map is given).
    #[arg(long)]
    all: bool,
    #[arg(long = "map", conflicts_with = "all")]
    map: Option<String>,
    #[command(flatten)]
    run: RunArgs,
}

fn positive_float(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(_) => Err("must be a positive finite number".into()),
        Err(e) => Err(e.to_string()),
    }
}

/// Usage errors exit with 2, everything else with 1.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let msg = e.to_string();
        match e {
            Error::UnknownMap(_)
            | Error::UnknownCheck(_)
            | Error::UnknownInvariant { .. }
            | Error::UnknownBuilder(_)
            | Error::Parse(_)
            | Error::InvalidState { .. }
            | Error::SizeMismatch { .. }
            | Error::ArityMismatch { .. } => Failure::Usage(msg),
            _ => Failure::Runtime(msg),
        }
    }
}

/// Parses `args` (including the program name) and runs the command against
/// `registry`. Returns the process exit code.
pub fn run<I, T>(args: I, registry: &Registry, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    match dispatch(cli.command, registry, stdout) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "{msg}");
            EXIT_USAGE
        }
        Err(Failure::Runtime(msg)) => {
            let _ = writeln!(stderr, "{msg}");
            EXIT_FAILURE
        }
    }
}

fn dispatch(cmd: Command, registry: &Registry, stdout: &mut dyn Write) -> Result<u8, Failure> {
    match cmd {
        Command::List { format, out } => {
            let text = list(registry, format)?;
            emit(&text, out.as_ref(), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Eval(args) => eval(registry, &args, stdout),
        Command::Verify(args) => {
            let name = args.map.name()?;
            let checks = args.checks.as_deref().map(parse_checks).transpose()?;
            if checks.is_some() && name.parse::<ImplicitMap>().is_ok() {
                return Err(Failure::Usage(
                    "--checks applies to catalog maps only".into(),
                ));
            }
            if name.parse::<ImplicitMap>().is_err() {
                registry.get(name)?;
            }
            let report = verify_report(registry, name, checks.as_deref(), args.run.options())?;
            write_report(&report, &args.run, Format::Human, stdout)
        }
        Command::Report(args) => {
            let opts = args.run.options();
            let report = match &args.map {
                Some(name) => verify_report(registry, name, None, opts)?,
                None => full_report(registry, opts)?,
            };
            write_report(&report, &args.run, Format::Json, stdout)
        }
        Command::Orbit(args) => orbit(registry, &args, stdout),
    }
}

fn write_report(
    report: &ybmap_core::report::Report,
    run: &RunArgs,
    default: Format,
    stdout: &mut dyn Write,
) -> Result<u8, Failure> {
    let text = match run.format.unwrap_or(default) {
        Format::Json => report.to_json(),
        Format::Human => report.to_human(),
        Format::Csv => {
            return Err(Failure::Usage(
                "reports support human and json formats".into(),
            ))
        }
    };
    emit(&text, run.out.as_ref(), stdout)?;
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_FAILURE
    })
}

/// Writes to `out` when given, otherwise to stdout.
fn emit(text: &str, out: Option<&PathBuf>, stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Runtime(format!("cannot write output: {e}"))),
    }
}

#[derive(Serialize)]
struct Summary {
    name: String,
    dim: usize,
    params: usize,
    lax: Option<String>,
    poisson: bool,
    involutive: bool,
    invariants: Vec<String>,
    casimirs: Vec<String>,
    checks: Vec<&'static str>,
}

fn summary(m: &MapDescriptor) -> Summary {
    Summary {
        name: m.name.clone(),
        dim: m.dim(),
        params: m.param_arity(),
        lax: m.lax.map(|l| l.name()),
        poisson: m.poisson.is_some(),
        involutive: m.involutive,
        invariants: m.invariants.iter().map(|i| i.name.clone()).collect(),
        casimirs: m.casimirs.iter().map(|i| i.name.clone()).collect(),
        checks: Check::ALL
            .iter()
            .filter(|c| c.skip_reason(m).is_none())
            .map(Check::name)
            .collect(),
    }
}

fn list(registry: &Registry, format: Format) -> Result<String, Failure> {
    let rows: Vec<Summary> = registry.maps().iter().map(summary).collect();
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(&rows).expect("serializable") + "\n"),
        Format::Human => {
            let yes = |b: bool| if b { "yes" } else { "no" };
            let mut out = String::new();
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{} dim={} params={} lax={} poisson={} checks={}",
                    r.name,
                    r.dim,
                    r.params,
                    yes(r.lax.is_some()),
                    yes(r.poisson),
                    r.checks.join(",")
                );
            }
            Ok(out)
        }
        Format::Csv => Err(Failure::Usage(
            "list supports human and json formats".into(),
        )),
    }
}

/// Scalars the CLI can parse and print.
trait Literal: Field + Sized {
    fn parse_literal(s: &str) -> Result<Self, Failure>;
    fn show(&self) -> String;
    fn to_json(&self) -> serde_json::Value;
}

impl Literal for Rational {
    fn parse_literal(s: &str) -> Result<Self, Failure> {
        s.parse::<Rational>().map_err(|_| {
            Failure::Usage(format!(
                "not an exact literal: `{s}` (use p/q, or --float for floats)"
            ))
        })
    }
    fn show(&self) -> String {
        self.to_string()
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }
}

fn parse_float(s: &str) -> Result<f64, Failure> {
    if let Ok(r) = s.trim().parse::<Rational>() {
        return Ok(r.to_f64());
    }
    s.trim()
        .parse::<f64>()
        .map_err(|_| Failure::Usage(format!("not a number: `{s}`")))
}

impl Literal for f64 {
    fn parse_literal(s: &str) -> Result<Self, Failure> {
        parse_float(s)
    }
    fn show(&self) -> String {
        format!("{self:?}")
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::json!(self)
    }
}

impl Literal for WideFloat {
    fn parse_literal(s: &str) -> Result<Self, Failure> {
        // exact literals keep their full precision
        match s.trim().parse::<Rational>() {
            Ok(r) => Ok(WideFloat::from_rational(&r)),
            Err(_) => parse_float(s).map(WideFloat::from_f64),
        }
    }
    fn show(&self) -> String {
        self.to_decimal(WIDE_DIGITS)
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_decimal(WIDE_DIGITS))
    }
}

fn parse_list<T: Literal>(s: &str) -> Result<Vec<T>, Failure> {
    s.split(',').map(T::parse_literal).collect()
}

fn parse_state<T: Literal>(map: &MapDescriptor, args: &StateArgs) -> Result<PairState<T>, Failure> {
    let mut state = PairState::new(parse_list(&args.x)?, parse_list(&args.y)?)?;
    let one = |v: &Option<String>, flag: &str| -> Result<Option<T>, Failure> {
        v.as_deref()
            .map(T::parse_literal)
            .transpose()
            .map_err(|e| match e {
                Failure::Usage(m) => Failure::Usage(format!("--{flag}: {m}")),
                other => other,
            })
    };
    let (a, b) = (one(&args.a, "a")?, one(&args.b, "b")?);
    let (big_x, big_y) = (one(&args.big_x, "X")?, one(&args.big_y, "Y")?);
    match (big_x, big_y) {
        (Some(p), Some(q)) => state = state.with_aux(p, q),
        (None, None) => {}
        _ => return Err(Failure::Usage("--X and --Y must be given together".into())),
    }
    match (a, b) {
        (Some(a), Some(b)) => state = state.with_params(a, b),
        (None, None) => {}
        _ => return Err(Failure::Usage("--a and --b must be given together".into())),
    }
    map.validate(&state)?;
    Ok(state)
}

fn tuple<T: Literal>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(Literal::show).collect();
    format!("({})", parts.join(", "))
}

fn render_image<T: Literal>(img: &PairState<T>, format: Format) -> Result<String, Failure> {
    match format {
        Format::Human => {
            let mut line = format!("u = {}; v = {}", tuple(&img.x), tuple(&img.y));
            if let Some((u, v)) = &img.aux {
                let _ = write!(line, "; U = {}; V = {}", u.show(), v.show());
            }
            Ok(line + "\n")
        }
        Format::Json => {
            let list = |v: &[T]| serde_json::Value::Array(v.iter().map(Literal::to_json).collect());
            let mut obj = serde_json::json!({ "u": list(&img.x), "v": list(&img.y) });
            if let Some((u, v)) = &img.aux {
                obj["U"] = u.to_json();
                obj["V"] = v.to_json();
            }
            Ok(serde_json::to_string_pretty(&obj).expect("serializable") + "\n")
        }
        Format::Csv => {
            let mut cells: Vec<String> = img.flatten().iter().map(Literal::show).collect();
            cells.insert(0, String::new());
            let n = img.x.len();
            let mut header: Vec<String> = (1..=n).map(|i| format!("u{i}")).collect();
            if img.aux.is_some() {
                header.push("U".into());
            }
            header.extend((1..=n).map(|i| format!("v{i}")));
            if img.aux.is_some() {
                header.push("V".into());
            }
            Ok(format!("{}\n{}\n", header.join(","), cells[1..].join(",")))
        }
    }
}

fn eval_typed<T: Literal>(map: &MapDescriptor, args: &EvalArgs) -> Result<String, Failure> {
    let state: PairState<T> = parse_state(map, &args.state)?;
    let img = map.evaluate(&state)?;
    render_image(&img, args.format)
}

fn eval(registry: &Registry, args: &EvalArgs, stdout: &mut dyn Write) -> Result<u8, Failure> {
    let name = args.map.name()?;
    let text = if let Ok(imp) = name.parse::<ImplicitMap>() {
        eval_implicit(imp, args)?
    } else {
        let map = registry.get(name)?;
        match args.state.float {
            None => eval_typed::<Rational>(&map, args)?,
            Some(FloatKind::F64) => eval_typed::<f64>(&map, args)?,
            Some(FloatKind::Wide) => eval_typed::<WideFloat>(&map, args)?,
        }
    };
    emit(&text, args.out.as_ref(), stdout)?;
    Ok(EXIT_OK)
}

fn eval_implicit(map: ImplicitMap, args: &EvalArgs) -> Result<String, Failure> {
    let s = &args.state;
    let pair = |v: &str| -> Result<[f64; 2], Failure> {
        let xs: Vec<f64> = parse_list(v)?;
        xs.try_into()
            .map_err(|_| Failure::Usage(format!("{} takes two coordinates per point", map.name())))
    };
    let need = |v: &Option<String>, flag: &str| -> Result<f64, Failure> {
        v.as_deref()
            .map(parse_float)
            .unwrap_or_else(|| Err(Failure::Usage(format!("--{flag} is required"))))
    };
    if s.big_x.is_some() || s.big_y.is_some() {
        return Err(Failure::Usage(format!(
            "{} solves X and Y from its leaves; --X/--Y are not accepted",
            map.name()
        )));
    }
    let (x, y) = (pair(&s.x)?, pair(&s.y)?);
    let (a, b) = (need(&s.a, "a")?, need(&s.b, "b")?);
    let branch: Branch = args.branch.into();
    let img = map.eval(x, y, a, b, (branch, branch))?;
    let consistent = map.is_consistent(&img, a, b, (branch, branch));
    let show = |v: &[f64]| tuple(v);
    Ok(match args.format {
        Format::Json => {
            serde_json::to_string_pretty(&serde_json::json!({
                "u": img.u, "v": img.v,
                "X": img.aux_in.0, "Y": img.aux_in.1,
                "U": img.aux_out.0, "V": img.aux_out.1,
                "consistent": consistent,
            }))
            .expect("serializable")
                + "\n"
        }
        Format::Human => format!(
            "u = {}; v = {}; X = {:?}; Y = {:?}; U = {:?}; V = {:?}; consistent = {consistent}\n",
            show(&img.u),
            show(&img.v),
            img.aux_in.0,
            img.aux_in.1,
            img.aux_out.0,
            img.aux_out.1
        ),
        Format::Csv => format!(
            "u1,u2,v1,v2,X,Y,U,V,consistent\n{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{consistent}\n",
            img.u[0], img.u[1], img.v[0], img.v[1], img.aux_in.0, img.aux_in.1, img.aux_out.0, img.aux_out.1
        ),
    })
}

fn orbit_typed<T: Literal>(map: &MapDescriptor, args: &OrbitArgs) -> Result<String, Failure> {
    let state: PairState<T> = parse_state(map, &args.state)?;
    let orbit = iterate_orbit_with_threshold(map, &state, args.steps, args.tolerance)?;
    match args.format {
        Format::Csv => {
            let mut buf = Vec::new();
            orbit.write_csv(&mut buf)?;
            Ok(String::from_utf8(buf).expect("csv is utf-8"))
        }
        Format::Json => Ok(serde_json::to_string_pretty(&orbit).expect("serializable") + "\n"),
        Format::Human => {
            let mut out = format!("{}: {} steps\n", orbit.map, args.steps);
            for name in &orbit.names {
                let _ = writeln!(
                    out,
                    "max drift {name} = {:e}",
                    orbit.max_drift(name).unwrap_or(0.0)
                );
            }
            if let Some(last) = orbit.records.last() {
                let _ = write!(out, "final (double precision) ");
                out.push_str(&render_image(&last.state, Format::Human)?);
            }
            Ok(out)
        }
    }
}

fn orbit(registry: &Registry, args: &OrbitArgs, stdout: &mut dyn Write) -> Result<u8, Failure> {
    let name = args.map.name()?;
    if name.parse::<ImplicitMap>().is_ok() {
        return Err(Failure::Usage(format!(
            "orbits are not available for {name}"
        )));
    }
    let map = registry.get(name)?;
    let text = match args.state.float {
        None => orbit_typed::<Rational>(&map, args)?,
        Some(FloatKind::F64) => orbit_typed::<f64>(&map, args)?,
        Some(FloatKind::Wide) => orbit_typed::<WideFloat>(&map, args)?,
    };
    emit(&text, args.out.as_ref(), stdout)?;
    Ok(EXIT_OK)
}

//! Command-line front end for the combalg decision procedures.
//!
//! [`run`] parses an argument vector, runs one command and returns the
//! exit code together with what should go to standard output and error.
//! Exit codes: 0 positive verdict, 1 negative verdict, 2 inconclusive or
//! out of budget, 64 usage error, 70 internal certificate failure.

mod algebra;
mod coord;
mod fg;
mod input;
mod selftest;

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub use selftest::{run_selftest, selftest_examples, SelftestResult};

pub const TOOL: &str = "combalg";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_POSITIVE: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_INTERNAL: i32 = 70;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Class {
    Positive,
    Negative,
    Inconclusive,
}

impl Class {
    pub fn exit_code(self) -> i32 {
        match self {
            Class::Positive => EXIT_POSITIVE,
            Class::Negative => EXIT_NEGATIVE,
            Class::Inconclusive => EXIT_INCONCLUSIVE,
        }
    }
}

/// What a command computed, before it is wrapped in a [`Report`].
#[derive(Debug, Clone)]
pub(crate) struct Response {
    pub verdict: String,
    pub class: Class,
    pub certificate: Value,
    /// Lines of the human-readable rendering.
    pub summary: Vec<String>,
}

impl Response {
    pub fn new(verdict: &str, class: Class, certificate: Value) -> Self {
        Response {
            verdict: verdict.to_string(),
            class,
            certificate,
            summary: Vec::new(),
        }
    }

    pub fn line(mut self, s: impl Into<String>) -> Self {
        self.summary.push(s.into());
        self
    }
}

#[derive(Debug)]
pub(crate) enum CliError {
    Usage(String),
    Parse {
        arg: usize,
        text: String,
        pos: usize,
        message: String,
    },
    /// Well-formed input that the operation does not accept.
    Input(String),
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Internal(_) => EXIT_INTERNAL,
            _ => EXIT_USAGE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Input(m) => write!(f, "error: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
            CliError::Parse {
                arg,
                text,
                pos,
                message,
            } => {
                writeln!(f, "error: input {}: syntax error at position {pos}: {message}", arg + 1)?;
                writeln!(f, "  {text}")?;
                let col = text.get(..*pos).map_or(*pos, |s| s.chars().count());
                write!(f, "  {}^", " ".repeat(col))
            }
        }
    }
}

/// Flag values as given on the command line; unset flags take the
/// per-command defaults listed in `--help`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Options {
    pub deg: Option<u32>,
    pub budget: Option<usize>,
    pub seed: Option<u64>,
    pub rank: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputEcho {
    pub args: Vec<String>,
    pub options: Options,
}

/// The JSON document printed under `--json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub input: InputEcho,
    pub verdict: String,
    pub certificate: Value,
    pub elapsed_ms: u64,
}

#[derive(Parser, Debug)]
#[command(name = "combalg", version, about = "Decision procedures for free groups and polynomial algebras")]
struct Cli {
    /// Print the report as JSON
    #[arg(long, global = true)]
    json: bool,

    /// Degree bound [retract witness: 2*deg p; retract fixed, jc: 2*deg of the map; tame random: degree cap 64]
    #[arg(long, global = true, value_name = "D")]
    deg: Option<u32>,

    /// Search budget [coord check: 20000 states; coord conjg: 64 singular steps; fg nielsen, auto: 4096 escape states; fg conjugacy: 100000 words; retract witness: 2000 S-pair reductions per basis; gb: unbounded]
    #[arg(long, global = true, value_name = "N")]
    budget: Option<usize>,

    /// Random seed for `tame random` [default: 0]
    #[arg(long, global = true, value_name = "S")]
    seed: Option<u64>,

    /// Free group rank [default: largest generator index, at least 2; fg auto: number of images]
    #[arg(long, global = true, value_name = "N")]
    rank: Option<usize>,

    /// Check a JSON report written earlier by the same command
    #[arg(long, global = true, value_name = "FILE")]
    verify: Option<PathBuf>,

    #[command(subcommand)]
    group: Group,
}

/// Positional inputs. Put `--` before an input that starts with `-`.
#[derive(Args, Debug)]
struct Inputs {
    #[arg(value_name = "INPUT")]
    inputs: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum Group {
    /// Free groups: words x1 x2^-1 (or a B for x1 x2^-1), tuples "w1, w2"
    Fg {
        #[command(subcommand)]
        op: FgOp,
    },
    /// Polynomials over the rationals
    Poly {
        #[command(subcommand)]
        op: PolyOp,
    },
    /// Gröbner bases and S-polynomials
    Gb {
        #[command(subcommand)]
        op: GbOp,
    },
    /// Tame automorphisms of K[x, y]
    Tame {
        #[command(subcommand)]
        op: TameOp,
    },
    /// Coordinate polynomials of K[x, y]
    Coord {
        #[command(subcommand)]
        op: CoordOp,
    },
    /// Retractions and fixed polynomials of K[x, y]
    Retract {
        #[command(subcommand)]
        op: RetractOp,
    },
    /// Replay the built-in worked examples
    Selftest {
        /// List the example ids without running them
        #[arg(long)]
        list: bool,
    },
}

#[derive(Subcommand, Debug)]
enum FgOp {
    /// Free and cyclic reduction of WORD
    Reduce(Inputs),
    /// Nielsen-reduce a tuple, given as "w1, w2, ..." or one word per input
    Nielsen(Inputs),
    /// Is WORD in the subgroup generated by TUPLE?  Inputs: TUPLE WORD
    Member(Inputs),
    /// Do two tuples generate the same subgroup?  Inputs: TUPLE TUPLE
    SameSubgroup(Inputs),
    /// Is x_i -> w_i an automorphism?  Inputs: TUPLE of images
    Auto(Inputs),
    /// Is WORD primitive?
    Primitive(Inputs),
    /// Whitehead-minimize the cyclic reduction of WORD
    Whitehead(Inputs),
    /// Does an automorphism take U to a conjugate of V?  Inputs: U V
    Conjugacy(Inputs),
}

#[derive(Subcommand, Debug)]
enum PolyOp {
    /// Parse and print in canonical form
    Parse(Inputs),
    /// Jacobian matrix and determinant of a map "(f, g)" or of F G
    Jacobian(Inputs),
}

#[derive(Subcommand, Debug)]
enum GbOp {
    /// Reduced Gröbner basis of the listed polynomials
    Basis(Inputs),
    /// Does the ideal contain 1?
    ContainsOne(Inputs),
    /// S-polynomial of P Q and its regular/singular kind
    Spoly(Inputs),
}

#[derive(Subcommand, Debug)]
enum TameOp {
    /// Decompose the map (G1, G2) into elementary factors.  Inputs: G1 G2
    Decompose(Inputs),
    /// Inverse of the automorphism (G1, G2)
    Invert(Inputs),
    /// Do U(t), V(t) generate K[t]?  Inputs: U V
    UnivarPair(Inputs),
    /// Random tame automorphism; optional input: number of factors [default: 6]
    Random(Inputs),
}

#[derive(Subcommand, Debug)]
enum CoordOp {
    /// Is P a coordinate polynomial?
    Check(Inputs),
    /// Find Q with (P, Q) an automorphism
    Complete(Inputs),
    /// Elementary factors taking P to x
    Reduce(Inputs),
    /// Gradient reduction with at most one singular step
    Conjg(Inputs),
    /// Do the partial derivatives of P generate the unit ideal?
    Unimodular(Inputs),
}

#[derive(Subcommand, Debug)]
enum RetractOp {
    /// Is the map (F, G) idempotent?
    Verify(Inputs),
    /// The retraction x -> x + y*Q, y -> 0
    NormalForm(Inputs),
    /// Search (A, B) with P(A, B) = x
    Witness(Inputs),
    /// Polynomials of degree <= --deg fixed by the map
    Fixed(Inputs),
    /// Fixed-polynomial consistency check for a unit-Jacobian map
    Jc(Inputs),
}

impl Group {
    /// `(group, operation, inputs)`; `None` for `selftest`.
    fn parts(&self) -> Option<(&'static str, &'static str, &[String])> {
        macro_rules! pick {
            ($g:expr, $op:expr, { $($v:path => $name:expr),* $(,)? }) => {
                match $op { $( $v(i) => Some(($g, $name, i.inputs.as_slice())), )* }
            };
        }
        use CoordOp as C;
        use FgOp as F;
        use GbOp as B;
        use PolyOp as P;
        use RetractOp as R;
        use TameOp as T;
        match self {
            Group::Fg { op } => pick!("fg", op, {
                F::Reduce => "reduce", F::Nielsen => "nielsen", F::Member => "member",
                F::SameSubgroup => "same-subgroup", F::Auto => "auto", F::Primitive => "primitive",
                F::Whitehead => "whitehead", F::Conjugacy => "conjugacy",
            }),
            Group::Poly { op } => pick!("poly", op, { P::Parse => "parse", P::Jacobian => "jacobian" }),
            Group::Gb { op } => pick!("gb", op, {
                B::Basis => "basis", B::ContainsOne => "contains-one", B::Spoly => "spoly",
            }),
            Group::Tame { op } => pick!("tame", op, {
                T::Decompose => "decompose", T::Invert => "invert",
                T::UnivarPair => "univar-pair", T::Random => "random",
            }),
            Group::Coord { op } => pick!("coord", op, {
                C::Check => "check", C::Complete => "complete", C::Reduce => "reduce",
                C::Conjg => "conjg", C::Unimodular => "unimodular",
            }),
            Group::Retract { op } => pick!("retract", op, {
                R::Verify => "verify", R::NormalForm => "normal-form", R::Witness => "witness",
                R::Fixed => "fixed", R::Jc => "jc",
            }),
            Group::Selftest { .. } => None,
        }
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn error(e: &CliError) -> Self {
        Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("{e}\n"),
        }
    }
}

pub(crate) fn execute(group: &str, op: &str, args: &[String], opts: &Options) -> Result<Response, CliError> {
    match group {
        "fg" => fg::execute(op, args, opts),
        "poly" | "gb" | "tame" => algebra::execute(group, op, args, opts),
        "coord" | "retract" => coord::execute(group, op, args, opts),
        _ => Err(CliError::Usage(format!("unknown command group {group}"))),
    }
}

/// Independent checks of a certificate; returns the checks performed or
/// the first failure.
fn check(group: &str, op: &str, args: &[String], opts: &Options, verdict: &str, cert: &Value) -> Result<Vec<String>, String> {
    match group {
        "fg" => fg::check(op, args, opts, verdict, cert),
        "poly" | "gb" | "tame" => algebra::check(group, op, args, opts, verdict, cert),
        _ => coord::check(group, op, args, opts, verdict, cert),
    }
}

fn verify_report(path: &Path, command: &str, group: &str, op: &str, args: &[String]) -> Result<(Response, InputEcho), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let report: Report = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{} is not a combalg report: {e}", path.display())))?;
    if report.command != command {
        return Err(CliError::Usage(format!(
            "{} was written by `{}`, not `{command}`",
            path.display(),
            report.command
        )));
    }
    if !args.is_empty() && args != report.input.args.as_slice() {
        return Err(CliError::Usage("inputs differ from the ones recorded in the report".into()));
    }
    let echo = report.input.clone();
    let mut checks = Vec::new();
    let mut failures = Vec::new();
    let rerun = execute(group, op, &echo.args, &echo.options)?;
    if rerun.verdict == report.verdict && rerun.certificate == report.certificate {
        checks.push("rerun reproduces the verdict and certificate".to_string());
    } else {
        failures.push(format!("rerun gives verdict {} and a different certificate", rerun.verdict));
    }
    match check(group, op, &echo.args, &echo.options, &report.verdict, &report.certificate) {
        Ok(c) => checks.extend(c),
        Err(e) => failures.push(e),
    }
    let ok = failures.is_empty();
    let mut resp = Response::new(
        if ok { "verified" } else { "rejected" },
        if ok { Class::Positive } else { Class::Negative },
        json!({ "report_verdict": report.verdict, "checks": checks, "failures": failures }),
    );
    for c in &checks {
        resp = resp.line(format!("ok: {c}"));
    }
    for f in &failures {
        resp = resp.line(format!("FAILED: {f}"));
    }
    Ok((resp, echo))
}

fn render(report: &Report, summary: &[String], as_json: bool) -> String {
    if as_json {
        let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
        s.push('\n');
        return s;
    }
    let mut s = format!("verdict: {}\n", report.verdict);
    for line in summary {
        s.push_str("  ");
        s.push_str(line);
        s.push('\n');
    }
    s
}

/// Runs one command line; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let opts = Options {
        deg: cli.deg,
        budget: cli.budget,
        seed: cli.seed,
        rank: cli.rank,
    };
    let start = Instant::now();
    let Some((group, op, args)) = cli.group.parts() else {
        let Group::Selftest { list } = cli.group else { unreachable!() };
        return selftest::command(list, cli.json, &opts, start);
    };
    let command = format!("{group} {op}");
    let result = match &cli.verify {
        Some(path) => verify_report(path, &command, group, op, args),
        None => execute(group, op, args, &opts).map(|r| {
            (
                r,
                InputEcho {
                    args: args.to_vec(),
                    options: opts.clone(),
                },
            )
        }),
    };
    let (resp, input) = match result {
        Ok(r) => r,
        Err(e) => return Outcome::error(&e),
    };
    let report = Report {
        tool: TOOL.into(),
        version: VERSION.into(),
        command: if cli.verify.is_some() { format!("{command} --verify") } else { command },
        input,
        verdict: resp.verdict.clone(),
        certificate: resp.certificate.clone(),
        elapsed_ms: start.elapsed().as_millis() as u64,
    };
    Outcome {
        code: resp.class.exit_code(),
        stdout: render(&report, &resp.summary, cli.json),
        stderr: String::new(),
    }
}

//! Command layer of the `treearith` binary.
//!
//! [`run`] takes the argument list and explicit streams and returns the exit
//! code, so the whole CLI can be driven in-process by tests.

pub mod expr;

use std::io::{BufRead, Write};
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use treearith::arith::exp2;
use treearith::bridge::{
    bit_length, parse_nat, term_u64, to_nat, to_nat_with_budget, DEFAULT_BIT_BUDGET,
};
use treearith::rational::{from_fraq, nat2rat, rat2nat, to_fraq, Fraction};
use treearith::{Term, Q};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ARITH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "treearith",
    version,
    about = "Exact arithmetic on tree-encoded numbers"
)]
#[command(arg_required_else_help = false)]
pub struct Cli {
    #[arg(long, value_enum, global = true, default_value = "human")]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate an expression over the rationals
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Print the term for a natural number
    N2t { n: String },
    /// Print the natural number a term denotes
    T2n { term: String },
    /// The n-th signed rational in Calkin-Wilf order
    Cw { n: String },
    /// Index of a signed rational in Calkin-Wilf order
    CwInv {
        #[arg(allow_hyphen_values = true)]
        fraction: String,
    },
    /// Build a tower of exponents 2^2^...^2 and time operations on it
    BenchTower {
        /// Number of exponentiations applied to 2
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=6))]
        height: u8,
    },
    /// Evaluate expressions read line by line from standard input
    Repl,
}

#[derive(Debug, Serialize)]
struct ErrorReport {
    kind: &'static str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    offset: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected: Option<Vec<&'static str>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    op: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    span: Option<[usize; 2]>,
}

impl ErrorReport {
    fn plain(kind: &'static str, message: String) -> ErrorReport {
        ErrorReport {
            kind,
            message,
            offset: None,
            expected: None,
            op: None,
            span: None,
        }
    }

    fn exit_code(&self) -> i32 {
        if self.kind == "parse" {
            EXIT_USAGE
        } else {
            EXIT_ARITH
        }
    }
}

impl From<expr::Error> for ErrorReport {
    fn from(e: expr::Error) -> Self {
        match e {
            expr::Error::Parse(p) => ErrorReport {
                offset: Some(p.offset),
                expected: Some(p.expected.clone()),
                ..ErrorReport::plain("parse", p.to_string())
            },
            expr::Error::Eval(v) => ErrorReport {
                op: Some(v.op),
                span: Some([v.span.start, v.span.end]),
                ..ErrorReport::plain("arithmetic", v.to_string())
            },
        }
    }
}

#[derive(Serialize)]
struct Report<'a> {
    ok: bool,
    value: Option<&'a Value>,
    error: Option<&'a ErrorReport>,
}

/// Machine output always carries the denominator; human output drops `/1`.
fn show_q(q: &Q, format: Format) -> String {
    let f = to_fraq(q).expect("values from evaluation are canonical");
    match format {
        Format::Human => f.to_string(),
        Format::Json => f.to_machine_string(),
    }
}

fn eval_line(src: &str, format: Format) -> Result<Value, ErrorReport> {
    let q = expr::eval_str(src)?;
    Ok(Value::String(show_q(&q, format)))
}

fn nat_arg(s: &str) -> Result<num_bigint::BigUint, ErrorReport> {
    parse_nat(s).map_err(|e| ErrorReport {
        offset: Some(0),
        ..ErrorReport::plain("parse", e.to_string())
    })
}

/// `2` with `height` applications of `exp2`: height 4 is `2^65536`.
pub fn tower(height: u8) -> Term {
    (0..height).fold(term_u64(2), |t, _| exp2(&t))
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

const SPINE_LIMIT: u64 = 1 << 22;

fn spine_fits(y: Option<&Term>) -> bool {
    y.map_or(true, |y| {
        to_nat_with_budget(y, 64).is_ok_and(|n| n <= SPINE_LIMIT.into())
    })
}

fn bench_tower(height: u8) -> Value {
    let (t, build) = timed(|| tower(height));
    let bits = bit_length(&t, DEFAULT_BIT_BUDGET).ok();
    // pred(2^y) is a spine of y nodes, and succ(2^2^y) needs pred(2^y), so
    // both are only attempted when that spine stays small.
    let exponent = t.left().expect("tower is positive");
    let succ = spine_fits(exponent.left()).then(|| timed(|| t.succ()).1);
    let pred = spine_fits(Some(exponent)).then(|| timed(|| t.pred()).1);
    let ns = |d: Option<Duration>| d.map(|d| d.as_nanos() as u64);
    json!({
        "height": height,
        "nodes": t.node_count(),
        "bits": bits,
        "build_ns": build.as_nanos() as u64,
        "succ_ns": ns(succ),
        "pred_ns": ns(pred),
    })
}

fn human_bench(v: &Value) -> String {
    let ns = |k: &str| match v[k].as_u64() {
        Some(n) => format!("{:?}", Duration::from_nanos(n)),
        None => "skipped, result too large".to_string(),
    };
    let bits = match v["bits"].as_u64() {
        Some(b) => b.to_string(),
        None => format!("skipped, more than {DEFAULT_BIT_BUDGET} bits"),
    };
    let height = v["height"].as_u64().unwrap_or(0) as usize;
    format!(
        "tower: {}\nnodes: {}\nbits: {}\nbuild: {}\nsucc: {}\npred: {}",
        vec!["2"; height + 1].join("^"),
        v["nodes"],
        bits,
        ns("build_ns"),
        ns("succ_ns"),
        ns("pred_ns"),
    )
}

fn execute(cmd: &Command, format: Format) -> Result<Value, ErrorReport> {
    let text = |s: String| Ok(Value::String(s));
    match cmd {
        Command::Eval { expr } => eval_line(expr, format),
        Command::N2t { n } => text(treearith::bridge::term(&nat_arg(n)?).to_string()),
        Command::T2n { term } => {
            let t: Term = term
                .parse()
                .map_err(|e: treearith::ParseTermError| ErrorReport {
                    offset: Some(e.offset),
                    expected: Some(vec![e.expected]),
                    ..ErrorReport::plain("parse", e.to_string())
                })?;
            let n = to_nat(&t).map_err(|e| ErrorReport::plain("domain", e.to_string()))?;
            text(n.to_string())
        }
        Command::Cw { n } => {
            let q = nat2rat(&nat_arg(n)?);
            text(to_fraq(&q).expect("canonical").to_machine_string())
        }
        Command::CwInv { fraction } => {
            let f: Fraction =
                fraction
                    .parse()
                    .map_err(|e: treearith::rational::ParseFractionError| {
                        ErrorReport::plain("parse", e.to_string())
                    })?;
            let q = from_fraq(&f).map_err(|e| ErrorReport::plain("domain", e.to_string()))?;
            let n = rat2nat(&q).map_err(|e| ErrorReport::plain("domain", e.to_string()))?;
            text(n.to_string())
        }
        Command::BenchTower { height } => Ok(bench_tower(*height)),
        Command::Repl => unreachable!("handled by run"),
    }
}

fn emit(
    format: Format,
    bench: bool,
    result: &Result<Value, ErrorReport>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::io::Result<i32> {
    if format == Format::Json {
        let report = match result {
            Ok(v) => Report {
                ok: true,
                value: Some(v),
                error: None,
            },
            Err(e) => Report {
                ok: false,
                value: None,
                error: Some(e),
            },
        };
        writeln!(
            out,
            "{}",
            serde_json::to_string(&report).expect("serializable")
        )?;
    }
    match result {
        Ok(v) => {
            if format == Format::Human {
                match v {
                    Value::String(s) => writeln!(out, "{s}")?,
                    _ if bench => writeln!(out, "{}", human_bench(v))?,
                    _ => writeln!(out, "{v}")?,
                }
            }
            Ok(EXIT_OK)
        }
        Err(e) => {
            writeln!(err, "error: {}: {}", e.kind, e.message)?;
            Ok(e.exit_code())
        }
    }
}

fn repl(
    format: Format,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::io::Result<i32> {
    let mut code = EXIT_OK;
    for line in input.lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let status = emit(format, false, &eval_line(line, format), out, err)?;
        code = code.max(status);
    }
    Ok(code)
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return e.exit_code();
        }
    };
    let status = match &cli.command {
        Command::Repl => repl(cli.format, input, out, err),
        cmd => {
            let bench = matches!(cmd, Command::BenchTower { .. });
            emit(cli.format, bench, &execute(cmd, cli.format), out, err)
        }
    };
    status.unwrap_or(EXIT_ARITH)
}

/// Runs without standard input and captures both output streams.
pub fn run_captured<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(args, &mut std::io::empty(), &mut out, &mut err);
    (
        code,
        String::from_utf8(out).expect("utf-8"),
        String::from_utf8(err).expect("utf-8"),
    )
}

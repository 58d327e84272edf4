//! Command line front end. Everything here renders to strings so the
//! binary stays a thin wrapper and the output formats can be tested directly.
//!
//! Exit codes: 0 success, 1 usage error, 2 invariant violation or failed self-test.

use std::fmt;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::approximants::step_function;
use crate::coefficients::{compute_c, compute_d, extract_f, extract_g};
use crate::dyadic_eval::{level_table, phi_derivative, phi_exact, taylor_at};
use crate::error::Error;
use crate::numeric::{format_rational, Dyadic};
use crate::selftest;
use crate::spectral::{fourier_coefficients, phi_fourier, plot_rows, DEFAULT_K, DEFAULT_M_MAX};
use crate::stochastic::{mc_phi_even, McConfig, DEFAULT_DEPTH, DEFAULT_STREAMS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVARIANT: i32 = 2;

/// Default cap on `table` levels.
pub const DEFAULT_MAX_TABLE_LEVEL: u64 = 12;

#[derive(Debug, Parser)]
#[command(name = "fabius", version, about = "Exact and approximate values of phi")]
pub struct Cli {
    /// Emit a JSON record instead of plain text. Exact numbers are strings.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sequence {
    #[value(name = "c")]
    C,
    #[value(name = "F")]
    F,
    #[value(name = "d")]
    D,
    #[value(name = "G")]
    G,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact phi(q / 2^n).
    #[command(allow_negative_numbers = true)]
    Eval { q: BigInt, n: u64 },

    /// Cosine series value at a real t, or a CSV comparison over the grid q/2^n.
    #[command(allow_negative_numbers = true)]
    EvalFloat {
        #[arg(required_unless_present = "grid")]
        t: Option<f64>,
        /// Emit `t,phi_fourier,phi_exact_if_dyadic,abs_err` over q/2^GRID.
        #[arg(long)]
        grid: Option<u64>,
        #[arg(long, env = "FABIUS_FOURIER_TERMS", default_value_t = DEFAULT_K)]
        terms: usize,
        #[arg(long, env = "FABIUS_M_MAX", default_value_t = DEFAULT_M_MAX)]
        m_max: usize,
    },

    /// Rows `q, D phi(q/2^n), phi(q/2^n)` for q = 0..=2^n.
    Table {
        n: u64,
        #[arg(long, env = "FABIUS_MAX_TABLE_LEVEL", default_value_t = DEFAULT_MAX_TABLE_LEVEL)]
        max_level: u64,
    },

    /// Dump one of the exact sequences up to index N.
    Coeffs {
        which: Sequence,
        n: usize,
        /// Space separated on one line instead of `k<TAB>value` rows.
        #[arg(long)]
        inline: bool,
    },

    /// Exact k-th derivative of phi at q / 2^n.
    #[command(allow_negative_numbers = true)]
    Deriv { k: u64, q: BigInt, n: u64 },

    /// Taylor coefficients phi^(k)(q/2^n) / k! for k = 0..=max_order.
    #[command(allow_negative_numbers = true)]
    Taylor { q: BigInt, n: u64, max_order: usize },

    /// CSV of the level m step function approximant.
    Approx { m: usize },

    /// The cosine series coefficients phi_hat((2k+1)/2).
    FourierCoeffs {
        #[arg(long, env = "FABIUS_FOURIER_TERMS", default_value_t = DEFAULT_K)]
        terms: usize,
        #[arg(long, env = "FABIUS_M_MAX", default_value_t = DEFAULT_M_MAX)]
        m_max: usize,
    },

    /// Monte Carlo estimate of phi(x), x in [-1, 1].
    #[command(allow_negative_numbers = true)]
    Mc {
        x: f64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, env = "FABIUS_MC_DEPTH", default_value_t = DEFAULT_DEPTH)]
        depth: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_STREAMS)]
        streams: u64,
    },

    /// Replay the acceptance checks.
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
    Table,
    Coeffs,
    Approx,
    Fourier,
    Mc,
    Selftest,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
            Mode::Table => "table",
            Mode::Coeffs => "coeffs",
            Mode::Approx => "approx",
            Mode::Fourier => "fourier",
            Mode::Mc => "mc",
            Mode::Selftest => "selftest",
        };
        f.write_str(s)
    }
}

/// One command's result: text lines plus the JSON payload.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputRecord {
    pub mode: Mode,
    pub lines: Vec<String>,
    pub payload: Value,
    pub exit_code: i32,
}

impl OutputRecord {
    fn new(mode: Mode, lines: Vec<String>, payload: Value) -> Self {
        OutputRecord {
            mode,
            lines,
            payload,
            exit_code: EXIT_OK,
        }
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            let record = json!({ "mode": self.mode.to_string(), "payload": self.payload });
            format!("{record}\n")
        } else {
            let mut s = self.lines.join("\n");
            s.push('\n');
            s
        }
    }
}

/// 17 significant digits, enough to round-trip an `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn dyadic(q: &BigInt, n: u64) -> Dyadic {
    Dyadic::new(q.clone(), n)
}

/// Table rows `q<TAB>D*phi<TAB>phi` for level `n`.
pub fn table_lines(n: u64) -> (BigInt, Vec<String>) {
    let table = level_table(n);
    let lines = (0..table.values.len())
        .map(|q| format!("{q}\t{}\t{}", table.scaled(q), format_rational(&table.values[q])))
        .collect();
    (table.denominator, lines)
}

fn cmd_eval(q: &BigInt, n: u64) -> OutputRecord {
    let t = dyadic(q, n);
    let value = phi_exact(&t);
    let mut lines = vec![format_rational(&value)];
    let mut payload = json!({ "t": t.to_string(), "value": format_rational(&value) });
    if n <= DEFAULT_MAX_TABLE_LEVEL {
        let den = level_table(n).denominator;
        let scaled = (&value * crate::numeric::BigRational::from_integer(den.clone())).to_integer();
        lines.push(format!("{scaled}/{den}"));
        payload["common_denominator"] = json!(den.to_string());
        payload["scaled"] = json!(scaled.to_string());
    }
    OutputRecord::new(Mode::Exact, lines, payload)
}

fn cmd_eval_float(t: Option<f64>, grid: Option<u64>, terms: usize, m_max: usize) -> Result<OutputRecord, Error> {
    let fc = fourier_coefficients(terms, m_max);
    if let Some(level) = grid {
        let rows = plot_rows(level, &fc);
        let mut lines = vec!["t,phi_fourier,phi_exact_if_dyadic,abs_err".to_string()];
        lines.extend(rows.iter().cloned());
        return Ok(OutputRecord::new(Mode::Float, lines, json!({ "csv": rows })));
    }
    let t = t.ok_or_else(|| Error::InvalidArgument("eval-float needs t or --grid".into()))?;
    if !(-1.0..=1.0).contains(&t) {
        return Ok(OutputRecord::new(Mode::Float, vec![format_float(0.0)], json!({ "t": t, "value": 0.0 })));
    }
    let v = phi_fourier(t, &fc);
    Ok(OutputRecord::new(Mode::Float, vec![format_float(v)], json!({ "t": t, "value": v })))
}

fn cmd_table(n: u64, max_level: u64) -> Result<OutputRecord, Error> {
    if n > max_level {
        return Err(Error::InvalidArgument(format!("table level {n} exceeds the maximum {max_level}")));
    }
    let (den, lines) = table_lines(n);
    let payload = json!({ "level": n, "denominator": den.to_string(), "rows": lines });
    Ok(OutputRecord::new(Mode::Table, lines, payload))
}

fn cmd_coeffs(which: Sequence, n: usize, inline: bool) -> Result<OutputRecord, Error> {
    let values: Vec<String> = match which {
        Sequence::C => compute_c(n).iter().map(format_rational).collect(),
        Sequence::F => extract_f(&compute_c(n))?.iter().map(|x| x.to_string()).collect(),
        Sequence::D => compute_d(n).iter().map(format_rational).collect(),
        Sequence::G => extract_g(&compute_d(n))?.iter().map(|x| x.to_string()).collect(),
    };
    let lines = if inline {
        vec![values.join(" ")]
    } else {
        values.iter().enumerate().map(|(k, v)| format!("{k}\t{v}")).collect()
    };
    Ok(OutputRecord::new(Mode::Coeffs, lines, json!({ "values": values })))
}

fn cmd_deriv(k: u64, q: &BigInt, n: u64) -> OutputRecord {
    let t = dyadic(q, n);
    let v = format_rational(&phi_derivative(k, &t));
    OutputRecord::new(Mode::Exact, vec![v.clone()], json!({ "k": k, "t": t.to_string(), "value": v }))
}

fn cmd_taylor(q: &BigInt, n: u64, max_order: usize) -> OutputRecord {
    let poly = taylor_at(&dyadic(q, n), max_order);
    let coeffs: Vec<String> = poly.coeffs.iter().map(format_rational).collect();
    let lines = coeffs.iter().enumerate().map(|(k, c)| format!("{k}\t{c}")).collect();
    let payload = json!({
        "center": poly.center.to_string(),
        "coeffs": coeffs,
        "degree": poly.degree(),
    });
    OutputRecord::new(Mode::Exact, lines, payload)
}

fn cmd_approx(m: usize) -> OutputRecord {
    let rows = step_function(m).csv_rows();
    let mut lines = vec!["left_edge,right_edge,value".to_string()];
    lines.extend(rows.iter().cloned());
    OutputRecord::new(Mode::Approx, lines, json!({ "level": m, "csv": rows }))
}

fn cmd_fourier(terms: usize, m_max: usize) -> OutputRecord {
    let fc = fourier_coefficients(terms, m_max);
    let lines = fc.a.iter().enumerate().map(|(k, a)| format!("{k}\t{}", format_float(*a))).collect();
    OutputRecord::new(Mode::Fourier, lines, json!({ "m_max": m_max, "a": fc.a }))
}

fn cmd_mc(x: f64, cfg: McConfig) -> Result<OutputRecord, Error> {
    let est = mc_phi_even(x, &cfg)?;
    let line = format!(
        "x={} estimate={} stderr={} bias_bound={} seed={}",
        x,
        format_float(est.estimate),
        format_float(est.stderr),
        format_float(est.bias_bound),
        est.seed
    );
    let payload = json!({
        "x": est.x,
        "estimate": est.estimate,
        "stderr": est.stderr,
        "bias_bound": est.bias_bound,
        "seed": est.seed,
    });
    Ok(OutputRecord::new(Mode::Mc, vec![line], payload))
}

fn cmd_selftest() -> OutputRecord {
    let reports = selftest::run_all();
    let lines = reports.iter().map(|r| r.to_string()).collect();
    let payload: Vec<Value> = reports
        .iter()
        .map(|r| json!({ "id": r.id, "name": r.name, "passed": r.passed, "detail": r.detail }))
        .collect();
    let mut out = OutputRecord::new(Mode::Selftest, lines, Value::Array(payload));
    if reports.iter().any(|r| !r.passed) {
        out.exit_code = EXIT_INVARIANT;
    }
    out
}

pub fn execute(cli: &Cli) -> Result<OutputRecord, Error> {
    match &cli.command {
        Command::Eval { q, n } => Ok(cmd_eval(q, *n)),
        Command::EvalFloat { t, grid, terms, m_max } => cmd_eval_float(*t, *grid, *terms, *m_max),
        Command::Table { n, max_level } => cmd_table(*n, *max_level),
        Command::Coeffs { which, n, inline } => cmd_coeffs(*which, *n, *inline),
        Command::Deriv { k, q, n } => Ok(cmd_deriv(*k, q, *n)),
        Command::Taylor { q, n, max_order } => Ok(cmd_taylor(q, *n, *max_order)),
        Command::Approx { m } => Ok(cmd_approx(*m)),
        Command::FourierCoeffs { terms, m_max } => Ok(cmd_fourier(*terms, *m_max)),
        Command::Mc {
            x,
            samples,
            depth,
            seed,
            streams,
        } => cmd_mc(
            *x,
            McConfig {
                samples: *samples,
                depth: *depth,
                seed: *seed,
                streams: *streams,
            },
        ),
        Command::Selftest => Ok(cmd_selftest()),
    }
}

/// Result of a full invocation: what goes to stdout, stderr, and the exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invocation {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() {
                (String::new(), text)
            } else {
                (text, String::new())
            };
            return Invocation { stdout, stderr, code };
        }
    };
    match execute(&cli) {
        Ok(out) => Invocation {
            stdout: out.render(cli.json),
            stderr: String::new(),
            code: out.exit_code,
        },
        Err(e) => {
            let code = if e.is_invariant_violation() { EXIT_INVARIANT } else { EXIT_USAGE };
            Invocation {
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
                code,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ok(args: &[&str]) -> String {
        let mut full = vec!["fabius"];
        full.extend_from_slice(args);
        let inv = run(full);
        assert_eq!(inv.code, 0, "stderr: {}", inv.stderr);
        inv.stdout
    }

    #[test]
    fn eval_lines() {
        assert_eq!(ok(&["eval", "31", "5"]), "19/33177600\n19/33177600\n");
        assert_eq!(ok(&["eval", "0", "0"]).lines().next(), Some("1"));
        assert_eq!(ok(&["eval", "-1", "1"]), "1/2\n1/2\n");
        assert_eq!(ok(&["eval", "3", "2"]), "5/72\n5/72\n");
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["fabius", "eval", "x", "5"]).code, EXIT_USAGE);
        assert_eq!(run(["fabius", "eval", "1"]).code, EXIT_USAGE);
        assert_eq!(run(["fabius", "bogus"]).code, EXIT_USAGE);
        assert_eq!(run(["fabius", "table", "13"]).code, EXIT_USAGE);
        assert_eq!(run(["fabius", "mc", "2.0", "--samples", "10"]).code, EXIT_USAGE);
        assert_eq!(run(["fabius", "--help"]).code, EXIT_OK);
    }

    #[test]
    fn coeffs_formats() {
        assert_eq!(ok(&["coeffs", "F", "4", "--inline"]), "1 1 19 2915 2788989\n");
        assert_eq!(ok(&["coeffs", "c", "2"]), "0\t1\n1\t1/9\n2\t19/675\n");
        assert_eq!(ok(&["coeffs", "G", "3", "--inline"]), "1 1 5 84\n");
        assert_eq!(ok(&["coeffs", "d", "3", "--inline"]), "1 1/2 5/18 1/6\n");
    }

    #[test]
    fn deriv_and_taylor() {
        assert_eq!(ok(&["deriv", "1", "-1", "1"]), "2\n");
        assert_eq!(ok(&["deriv", "2", "-3", "2"]), "8\n");
        assert_eq!(ok(&["taylor", "-1", "1", "2"]), "0\t1/2\n1\t2\n2\t0\n");
    }

    #[test]
    fn table_rows() {
        let out = ok(&["table", "1"]);
        assert_eq!(out, "0\t2\t1\n1\t1\t1/2\n2\t0\t0\n");
        let out = ok(&["table", "5"]);
        let rows: Vec<&str> = out.lines().collect();
        assert_eq!(rows.len(), 33);
        assert_eq!(rows[16], "16\t16588800\t1/2");
        assert_eq!(rows[32], "32\t0\t0");
    }

    #[test]
    fn approx_and_fourier() {
        let out = ok(&["approx", "2"]);
        assert_eq!(out.lines().next(), Some("left_edge,right_edge,value"));
        assert_eq!(out.lines().nth(1), Some("-5/2^3,-3/2^3,1/2"));
        let out = ok(&["fourier-coeffs", "--terms", "3"]);
        assert_eq!(out.lines().count(), 3);
        let a0: f64 = out.lines().next().unwrap().split('\t').nth(1).unwrap().parse().unwrap();
        assert!((a0 - 0.5537712758888108).abs() < 1e-15);
    }

    #[test]
    fn eval_float_forms() {
        let v: f64 = ok(&["eval-float", "0.75"]).trim().parse().unwrap();
        assert!((v - 5.0 / 72.0).abs() < 1e-10);
        let csv = ok(&["eval-float", "--grid", "2"]);
        assert_eq!(csv.lines().count(), 10);
        assert!(csv.starts_with("t,phi_fourier,phi_exact_if_dyadic,abs_err\n"));
    }

    #[test]
    fn json_keeps_exact_numbers_as_strings() {
        let out = ok(&["eval", "31", "5", "--json"]);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["mode"], "exact");
        assert_eq!(v["payload"]["value"], "19/33177600");
        assert_eq!(v["payload"]["common_denominator"], "33177600");
        let out = ok(&["--json", "mc", "-0.5", "--samples", "1000", "--seed", "3"]);
        let v: Value = serde_json::from_str(&out).unwrap();
        for key in ["x", "estimate", "stderr", "bias_bound", "seed"] {
            assert!(v["payload"].get(key).is_some());
        }
    }

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, 1.0 / 3.0, 5.0 / 72.0, 1e-300, -2.5e17] {
            assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        }
    }
}

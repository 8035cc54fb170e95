//! Command dispatch for the `formalgram` binary.
//!
//! [`run`] never prints or exits; it returns an [`Outcome`] with the exit
//! code and the text destined for stdout and stderr, so the commands can be
//! driven directly from tests.

use std::collections::BTreeMap;
use std::fs;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use formalgram::verify::{self, Report};
use formalgram::{
    derive_n, derive_word_pow, multifactorial, parse_expr, parse_grammar, Error, MatrixGrammar,
    OperatorWord, Polynomial,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_OVERFLOW: i32 = 3;
pub const EXIT_NOT_MONOMIAL: i32 = 4;

pub const SUITES: [&str; 7] = [
    "leibniz",
    "binomial-sums",
    "multifactorial-identity",
    "closed-forms",
    "matrix-closed-forms",
    "nonexistence",
    "calculus-rules",
];

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "formalgram", version, about = "Formal derivatives of context-free and matrix grammars")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    pub format: OutputFormat,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Apply D^n (or an operator word D_w^n) to an expression.
    Derive {
        /// Grammar text, or @path to read it from a file.
        #[arg(long)]
        grammar: String,
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Sub-grammar indices, applied right to left: "12" or "1,2".
        #[arg(long)]
        word: Option<String>,
    },
    /// Print the coefficient sequence of D^n(expr) for n = 0..=n_max.
    Seq {
        #[arg(long)]
        grammar: String,
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        #[arg(long = "n-max", alias = "n_max")]
        n_max: usize,
    },
    /// Run a verification suite; parameters are key=value pairs.
    Verify {
        suite: String,
        params: Vec<String>,
    },
    /// Print the multifactorial n!_r.
    Multifactorial {
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[arg(long, allow_negative_numbers = true)]
        r: i64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, msg: impl std::fmt::Display) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

fn from_error(e: Error) -> Outcome {
    let code = match e {
        Error::ExponentOverflow => EXIT_OVERFLOW,
        _ => EXIT_USAGE,
    };
    Outcome::fail(code, e)
}

/// Parses `args` (including the program name) and runs the command.
/// `styled` enables ANSI colours in text output.
pub fn run<I, T>(args: I, styled: bool) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome::ok(text)
            };
        }
    };
    let format = cli.format;
    match cli.command {
        Command::Derive { grammar, expr, n, word } => {
            cmd_derive(&grammar, &expr, n, word.as_deref(), format)
        }
        Command::Seq { grammar, expr, n_max } => cmd_seq(&grammar, &expr, n_max, format),
        Command::Verify { suite, params } => cmd_verify(&suite, &params, format, styled),
        Command::Multifactorial { n, r } => cmd_multifactorial(n, r, format),
    }
}

fn load_grammar(arg: &str) -> Result<MatrixGrammar, Outcome> {
    let text = match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| Outcome::fail(EXIT_USAGE, format!("cannot read {path}: {e}")))?,
        None => arg.to_owned(),
    };
    parse_grammar(&text).map_err(|e| Outcome::fail(EXIT_USAGE, format!("grammar: {e}")))
}

fn load_expr(arg: &str) -> Result<Polynomial, Outcome> {
    parse_expr(arg).map_err(|e| match e {
        Error::ExponentOverflow => from_error(e),
        other => Outcome::fail(EXIT_USAGE, format!("expression: {other}")),
    })
}

fn render_poly(p: &Polynomial, format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => format!("{p}\n"),
        OutputFormat::Json => format!("{}\n", serde_json::to_string(p).expect("serializable")),
    }
}

pub fn cmd_derive(
    grammar: &str,
    expr: &str,
    n: usize,
    word: Option<&str>,
    format: OutputFormat,
) -> Outcome {
    let (mg, u) = match (load_grammar(grammar), load_expr(expr)) {
        (Ok(mg), Ok(u)) => (mg, u),
        (Err(o), _) | (_, Err(o)) => return o,
    };
    let result = match word {
        Some(w) => match w.parse::<OperatorWord>() {
            Ok(w) => derive_word_pow(&mg, &w, n, &u),
            Err(e) => return from_error(e),
        },
        None => match mg.as_single() {
            Some(g) => derive_n(g, &u, n),
            None => {
                return Outcome::fail(
                    EXIT_USAGE,
                    format!("grammar has {} sub-grammars; pass --word", mg.len()),
                )
            }
        },
    };
    match result {
        Ok(p) => Outcome::ok(render_poly(&p, format)),
        Err(e) => from_error(e),
    }
}

pub fn cmd_seq(grammar: &str, expr: &str, n_max: usize, format: OutputFormat) -> Outcome {
    let (mg, mut cur) = match (load_grammar(grammar), load_expr(expr)) {
        (Ok(mg), Ok(u)) => (mg, u),
        (Err(o), _) | (_, Err(o)) => return o,
    };
    let Some(g) = mg.as_single() else {
        return Outcome::fail(EXIT_USAGE, "seq needs a single grammar, not a matrix grammar");
    };
    let mut rows = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if n > 0 {
            cur = match formalgram::derive(g, &cur) {
                Ok(p) => p,
                Err(e) => return from_error(e),
            };
        }
        let Some((m, c)) = cur.single_term() else {
            return Outcome::fail(EXIT_NOT_MONOMIAL, format!("not a monomial sequence at n={n}"));
        };
        rows.push((n, c.clone(), m.clone()));
    }
    let stdout = match format {
        OutputFormat::Text => rows
            .iter()
            .map(|(n, c, m)| format!("{n} {c} {m}\n"))
            .collect(),
        OutputFormat::Json => {
            let arr: Vec<Value> = rows
                .iter()
                .map(|(n, c, m)| json!({ "n": n, "coeff": c.to_fraction_string(), "monomial": m }))
                .collect();
            format!("{}\n", Value::Array(arr))
        }
    };
    Outcome::ok(stdout)
}

struct Params {
    values: BTreeMap<String, String>,
}

impl Params {
    fn parse(raw: &[String], allowed: &[&str]) -> Result<Self, Outcome> {
        let mut values = BTreeMap::new();
        for item in raw {
            let Some((k, v)) = item.split_once('=') else {
                return Err(Outcome::fail(EXIT_USAGE, format!("expected key=value, got {item:?}")));
            };
            let k = k.trim();
            if !allowed.contains(&k) {
                return Err(Outcome::fail(
                    EXIT_USAGE,
                    format!("unknown parameter {k:?}; expected one of {}", allowed.join(", ")),
                ));
            }
            values.insert(k.to_owned(), v.trim().to_owned());
        }
        Ok(Params { values })
    }

    fn get<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T, Outcome> {
        match self.values.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| Outcome::fail(EXIT_USAGE, format!("invalid value for {key}: {v:?}"))),
        }
    }

    fn text<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.values.get(key).map(String::as_str).unwrap_or(default)
    }
}

fn run_suite(suite: &str, raw: &[String]) -> Result<Report, Outcome> {
    use verify::{DEFAULT_M_MAX as M, DEFAULT_N_MAX as N, DEFAULT_R_MAX as R};
    let report = match suite {
        "leibniz" => {
            let p = Params::parse(raw, &["grammar", "u", "v", "n_max"])?;
            let mg = load_grammar(p.text("grammar", "a -> a"))?;
            let Some(g) = mg.as_single() else {
                return Err(Outcome::fail(EXIT_USAGE, "leibniz needs a single grammar"));
            };
            let u = load_expr(p.text("u", "a"))?;
            let v = load_expr(p.text("v", "a"))?;
            verify::verify_leibniz(g, &u, &v, p.get("n_max", 6)?).map_err(from_error)?
        }
        "binomial-sums" => {
            let p = Params::parse(raw, &["n_max"])?;
            verify::verify_binomial_sums(p.get("n_max", 40)?)
        }
        "multifactorial-identity" => {
            let p = Params::parse(raw, &["m_max", "n_max", "r_max"])?;
            verify::verify_multifactorial_identity(p.get("m_max", M)?, p.get("n_max", N)?, p.get("r_max", R)?)
        }
        "closed-forms" => {
            let p = Params::parse(raw, &["m_max", "n_max", "r_max"])?;
            verify::verify_closed_forms(p.get("m_max", M)?, p.get("n_max", N)?, p.get("r_max", R)?)
        }
        "matrix-closed-forms" => {
            let p = Params::parse(raw, &["n_max", "r_max"])?;
            verify::verify_matrix_closed_forms(p.get("n_max", N)?, p.get("r_max", R)?)
        }
        "nonexistence" => {
            let p = Params::parse(raw, &["trials", "seed"])?;
            verify::verify_nonexistence(p.get("trials", 500)?, p.get("seed", 0)?)
        }
        "calculus-rules" => {
            let p = Params::parse(raw, &["trials", "seed"])?;
            verify::verify_calculus_rules(p.get("trials", 200)?, p.get("seed", 0)?)
        }
        other => {
            return Err(Outcome::fail(
                EXIT_USAGE,
                format!("unknown suite {other:?}; expected one of {}", SUITES.join(", ")),
            ))
        }
    };
    Ok(report)
}

fn styled_report(report: &Report) -> String {
    report
        .to_string()
        .lines()
        .map(|line| {
            if let Some(rest) = line.strip_prefix("PASS") {
                format!("\x1b[32mPASS\x1b[0m{rest}")
            } else if let Some(rest) = line.strip_prefix("FAIL") {
                format!("\x1b[31mFAIL\x1b[0m{rest}")
            } else {
                line.to_owned()
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn cmd_verify(suite: &str, params: &[String], format: OutputFormat, styled: bool) -> Outcome {
    let report = match run_suite(suite, params) {
        Ok(r) => r,
        Err(o) => return o,
    };
    let stdout = match format {
        OutputFormat::Text if styled => format!("{}\n", styled_report(&report)),
        OutputFormat::Text => format!("{report}\n"),
        OutputFormat::Json => format!("{}\n", serde_json::to_string(&report).expect("serializable")),
    };
    Outcome {
        code: if report.all_passed() { EXIT_OK } else { EXIT_VERIFY_FAILED },
        stdout,
        stderr: String::new(),
    }
}

pub fn cmd_multifactorial(n: i64, r: i64, format: OutputFormat) -> Outcome {
    match multifactorial(n, r) {
        Ok(v) => Outcome::ok(match format {
            OutputFormat::Text => format!("{v}\n"),
            OutputFormat::Json => format!("{}\n", json!({ "n": n, "r": r, "value": v.to_string() })),
        }),
        Err(e) => from_error(e),
    }
}

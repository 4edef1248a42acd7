//! Command-line front end for the `homvar` engine.
//!
//! [`run`] performs one invocation and returns the exit code together with
//! everything destined for stdout and stderr, so that the binary is a thin
//! wrapper and the whole surface is testable in-process.

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{ColorChoice, Parser, ValueEnum};
use homvar::{
    check_homogeneous, euler_lagrange, helmholtz_sonin, hilbert_form, homogenize, parse_expression,
    parse_form, recover_first_order, recover_lagrangian, variational_delta, DifferentialForm,
    Error, Expression, RecoveryReport, SourceForm,
};
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NOT_VARIATIONAL: i32 = 2;
pub const EXIT_NOT_SUPPORTED: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Euler-Lagrange components of a Lagrangian
    El,
    /// Hilbert (Poincare-Cartan) form of a Lagrangian
    Hilbert,
    /// Variational derivative of a function or form
    Delta,
    /// Helmholtz-Sonin form of a source form
    Helmholtz,
    /// Recover a Lagrangian from a variational source form
    Recover,
    /// Recover a first-order Lagrangian from a second-order source form
    RecoverFirstOrder,
    /// Parametric homogenization with q1 as time
    Homogenize,
    /// Residuals of the homogeneity conditions up to --order
    CheckHomogeneous,
}

impl Mode {
    fn name(self) -> String {
        self.to_possible_value().unwrap().get_name().to_owned()
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "homvar",
    version,
    about = "Exact variational calculus on the derivative tower",
    color = ColorChoice::Never
)]
struct Args {
    mode: Mode,
    /// Number of base coordinates q1..qN
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    dim: u32,
    /// Lagrangian expression, e.g. "q1'^2/2"
    #[arg(long, conflicts_with = "form", allow_hyphen_values = true)]
    lagrangian: Option<String>,
    /// Source components "e1; e2; ..." or a differential form such as "-q1''*dq1"
    #[arg(long, allow_hyphen_values = true)]
    form: Option<String>,
    /// Homogeneity order k (check-homogeneous)
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    order: Option<u32>,
    /// Emit a JSON document instead of key = value lines
    #[arg(long)]
    json: bool,
    /// Suppress standard output
    #[arg(long)]
    quiet: bool,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Serialize)]
struct Entry {
    key: String,
    expr: String,
}

#[derive(Serialize)]
struct Document {
    mode: String,
    dim: u32,
    result: Vec<Entry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    order: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

struct Report {
    entries: Vec<(String, String)>,
    order: Option<Option<u32>>,
    verified: Option<bool>,
}

impl Report {
    fn entries(entries: Vec<(String, String)>) -> Self {
        Report {
            entries,
            order: None,
            verified: None,
        }
    }
}

struct Failure {
    code: i32,
    message: String,
    report: Option<Report>,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
            report: None,
        }
    }
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        let code = match &error {
            Error::NotVariational { .. } => EXIT_NOT_VARIATIONAL,
            Error::NonPolynomialCoefficient
            | Error::NotAffine { .. }
            | Error::OrderTooHigh { .. } => EXIT_NOT_SUPPORTED,
            Error::Internal(_) | Error::SymmetryViolation { .. } => EXIT_INTERNAL,
            _ => EXIT_INPUT,
        };
        let report = match &error {
            Error::NotVariational { helmholtz } => {
                Some(Report::entries(helmholtz_entries(helmholtz)))
            }
            _ => None,
        };
        Failure {
            code,
            message: error.to_string(),
            report,
        }
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(args) => args,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_INPUT,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let (code, report, stderr) = match execute(&args) {
        Ok(report) => (EXIT_OK, Some(report), String::new()),
        Err(failure) => (
            failure.code,
            failure.report,
            format!("error: {}\n", failure.message),
        ),
    };
    let stdout = match (&report, args.quiet) {
        (Some(report), false) => render(&args, report, code),
        _ => String::new(),
    };
    Outcome {
        code,
        stdout,
        stderr,
    }
}

fn render(args: &Args, report: &Report, code: i32) -> String {
    if args.json {
        let document = Document {
            mode: args.mode.name(),
            dim: args.dim,
            result: report
                .entries
                .iter()
                .map(|(key, expr)| Entry {
                    key: key.clone(),
                    expr: expr.clone(),
                })
                .collect(),
            order: report
                .order
                .map(|o| o.map_or(serde_json::Value::Null, Into::into)),
            verified: report.verified,
            error: (code == EXIT_NOT_VARIATIONAL).then(|| "not variational".to_owned()),
        };
        let mut out = serde_json::to_string(&document).expect("document serializes");
        out.push('\n');
        out
    } else {
        let mut out = String::new();
        for (key, value) in &report.entries {
            writeln!(out, "{key} = {value}").unwrap();
        }
        if let Some(order) = report.order {
            match order {
                Some(o) => writeln!(out, "order = {o}").unwrap(),
                None => writeln!(out, "order = none").unwrap(),
            }
        }
        if let Some(verified) = report.verified {
            writeln!(out, "verified = {verified}").unwrap();
        }
        out
    }
}

fn execute(args: &Args) -> Result<Report, Failure> {
    let dim = args.dim as usize;
    if args.order.is_some() && args.mode != Mode::CheckHomogeneous {
        return Err(Failure::input("--order only applies to check-homogeneous"));
    }
    match args.mode {
        Mode::El => {
            let eps = euler_lagrange(&lagrangian(args)?, dim)?;
            Ok(Report::entries(
                eps.components()
                    .iter()
                    .enumerate()
                    .map(|(i, e)| (format!("epsilon_{}", i + 1), show(e)))
                    .collect(),
            ))
        }
        Mode::Hilbert => Ok(Report::entries(vec![(
            "theta".into(),
            hilbert_form(&lagrangian(args)?).to_string(),
        )])),
        Mode::Delta => {
            let theta = match (&args.lagrangian, &args.form) {
                (Some(_), _) => DifferentialForm::function(lagrangian(args)?),
                (None, Some(text)) => any_form(text, dim)?,
                (None, None) => return Err(Failure::input("delta needs --lagrangian or --form")),
            };
            Ok(Report::entries(vec![(
                "delta".into(),
                variational_delta(&theta).to_string(),
            )]))
        }
        Mode::Helmholtz => {
            let helmholtz = helmholtz_sonin(&source(args)?);
            let mut entries = helmholtz_entries(&helmholtz);
            entries.push(("variational".into(), helmholtz.is_zero().to_string()));
            Ok(Report::entries(entries))
        }
        Mode::Recover | Mode::RecoverFirstOrder => {
            let eps = source(args)?;
            let report = if args.mode == Mode::Recover {
                recover_lagrangian(&eps)?
            } else {
                recover_first_order(&eps)?
            };
            recovery(report)
        }
        Mode::Homogenize => Ok(Report::entries(vec![(
            "lagrangian".into(),
            homogenize(&lagrangian(args)?, dim)?.to_string(),
        )])),
        Mode::CheckHomogeneous => {
            let k = args
                .order
                .ok_or_else(|| Failure::input("check-homogeneous needs --order <k>"))?;
            let l = lagrangian(args)?;
            if let Some(order) = l.max_order() {
                if order > k {
                    return Err(Failure::input(format!(
                        "Lagrangian has order {order}, above the requested homogeneity order {k}"
                    )));
                }
            }
            let report = check_homogeneous(&l, k as usize)?;
            let mut entries: Vec<(String, String)> = report
                .residuals
                .iter()
                .enumerate()
                .map(|(p, r)| (format!("residual_{}", p + 1), show(r)))
                .collect();
            entries.push(("homogeneous".into(), report.homogeneous.to_string()));
            Ok(Report::entries(entries))
        }
    }
}

fn recovery(report: RecoveryReport) -> Result<Report, Failure> {
    if !report.verification {
        return Err(Failure {
            code: EXIT_INTERNAL,
            message: "recovered Lagrangian failed re-verification".into(),
            report: None,
        });
    }
    Ok(Report {
        entries: vec![
            ("lagrangian".into(), report.lagrangian.to_string()),
            ("kappa".into(), report.kappa.to_string()),
        ],
        order: Some(report.order_of_lagrangian),
        verified: Some(true),
    })
}

/// Prints an expression, collapsing anything that vanishes identically to `0`.
fn show(e: &Expression) -> String {
    if e.is_zero() {
        "0".into()
    } else {
        e.to_string()
    }
}

fn helmholtz_entries(helmholtz: &DifferentialForm) -> Vec<(String, String)> {
    let mut entries = vec![("helmholtz".to_owned(), helmholtz.to_string())];
    for (diffs, coefficient) in helmholtz.terms() {
        if !coefficient.is_zero() {
            let wedge = DifferentialForm::monomial(Expression::one(), diffs);
            entries.push((wedge.to_string(), coefficient.to_string()));
        }
    }
    entries
}

fn lagrangian(args: &Args) -> Result<Expression, Failure> {
    let text = args
        .lagrangian
        .as_deref()
        .ok_or_else(|| Failure::input(format!("{} needs --lagrangian <expr>", args.mode.name())))?;
    parse_expression(text, args.dim as usize).map_err(|e| Failure::from(Error::from(e)))
}

fn any_form(text: &str, dim: usize) -> Result<DifferentialForm, Failure> {
    if text.contains("dq") {
        parse_form(text, dim).map_err(|e| Error::from(e).into())
    } else {
        Ok(components(text, dim)?.to_form())
    }
}

fn components(text: &str, dim: usize) -> Result<SourceForm, Failure> {
    let mut offset = 0;
    let mut out = Vec::new();
    for piece in text.split(';') {
        let expr = parse_expression(piece, dim).map_err(|e| {
            let shifted = shift_position(e, offset);
            Failure::from(Error::from(shifted))
        })?;
        out.push(expr);
        offset += piece.len() + 1;
    }
    if out.len() != dim {
        return Err(Failure::input(format!(
            "expected {dim} semicolon-separated components, found {}",
            out.len()
        )));
    }
    Ok(SourceForm::new(out)?)
}

fn shift_position(error: homvar::ParseError, offset: usize) -> homvar::ParseError {
    use homvar::ParseError::*;
    match error {
        Syntax { position, message } => Syntax {
            position: position + offset,
            message,
        },
        IndexOutOfRange {
            position,
            index,
            dim,
        } => IndexOutOfRange {
            position: position + offset,
            index,
            dim,
        },
        UnknownFunction { position, name } => UnknownFunction {
            position: position + offset,
            name,
        },
    }
}

fn source(args: &Args) -> Result<SourceForm, Failure> {
    let dim = args.dim as usize;
    let text = args.form.as_deref().ok_or_else(|| {
        Failure::input(format!(
            "{} needs --form <components or form>",
            args.mode.name()
        ))
    })?;
    if text.contains("dq") {
        let form = parse_form(text, dim).map_err(Error::from)?;
        Ok(SourceForm::from_form(&form, dim)?)
    } else {
        components(text, dim)
    }
}

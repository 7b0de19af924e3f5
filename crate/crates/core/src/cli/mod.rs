//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a requested check fails or a triple
//! cannot be solved, 2 for invalid arguments or parameters outside a model's
//! domain.

mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::chebyshev::{
    model_coefficients, model_coefficients_by_quadrature, QuinticCoefficients, DEFAULT_NODES,
};
use crate::error::Error;
use crate::models::{ModelKind, OscillatorModel};
use crate::quintic::{classify, discriminant, solve, ClosedFormSolution};
use crate::validation::{
    reproduce_table, residual_at, residual_sup_norm, DEFAULT_GRID, TABLE_TOLERANCE,
};

pub use output::{number, CsvTable, Field};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "quinticate",
    version,
    about = "Quintic Chebyshev approximation of nonlinear oscillators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Quintic coefficients from the closed forms and from quadrature.
    Coeffs {
        #[command(flatten)]
        model: ModelArgs,
        /// Gauss–Chebyshev nodes for the quadrature route.
        #[arg(long, default_value_t = DEFAULT_NODES)]
        nodes: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// One period of the closed-form trajectory.
    Solve {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact and quinticated periods.
    Period {
        #[command(flatten)]
        model: ModelArgs,
        /// Relative tolerance of the quadrature cross-check.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Recompute one of the residual tables.
    Table {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        which: u8,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Coefficients, periods and residuals over an (a, b) grid.
    Sweep {
        #[arg(long, value_enum, default_value_t = ModelName::Relativistic)]
        model: ModelName,
        #[arg(long, default_value_t = 0.0)]
        a_min: f64,
        #[arg(long, default_value_t = 30.0)]
        a_max: f64,
        #[arg(long, default_value_t = 300)]
        a_steps: usize,
        #[arg(long, default_value_t = 0.0)]
        b_min: f64,
        #[arg(long, default_value_t = 1.0)]
        b_max: f64,
        #[arg(long, default_value_t = 10)]
        b_steps: usize,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ModelName {
    Relativistic,
    CableMass,
    DuffingRelativistic,
    Generic,
}

impl From<ModelName> for ModelKind {
    fn from(m: ModelName) -> Self {
        match m {
            ModelName::Relativistic => ModelKind::Relativistic,
            ModelName::CableMass => ModelKind::CableMass,
            ModelName::DuffingRelativistic => ModelKind::DuffingRelativistic,
            ModelName::Generic => ModelKind::Generic,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
struct ModelArgs {
    #[arg(long, value_enum, default_value_t = ModelName::Relativistic)]
    model: ModelName,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    /// Odd polynomial force `q1,q3,q5,...` for `--model generic`.
    #[arg(long, allow_hyphen_values = true)]
    force_spec: Option<String>,
    /// Solve the quintic `c1,c3,c5` directly instead of a model.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["a", "b", "force_spec"])]
    coefficients: Option<String>,
    /// Points on [0, T/4] for the residual sup-norm.
    #[arg(long, default_value_t = DEFAULT_GRID)]
    grid: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args, Serialize)]
struct OutputArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

/// What a command is asked to work on.
enum Subject {
    Model(OscillatorModel),
    Quintic(QuinticCoefficients),
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Domain { .. } | Error::InvalidModel { .. } | Error::Precondition(_) => {
                EXIT_INVALID
            }
            _ => EXIT_CHECK_FAILED,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn parse_list(flag: &str, text: &str) -> Result<Vec<f64>, Failure> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Failure::invalid(format!("--{flag}: cannot parse `{s}` as a number")))
        })
        .collect()
}

impl ModelArgs {
    fn subject(&self) -> Result<Subject, Failure> {
        if let Some(text) = &self.coefficients {
            let c = parse_list("coefficients", text)?;
            let [c1, c3, c5] = c[..] else {
                return Err(Failure::invalid("--coefficients expects exactly c1,c3,c5"));
            };
            return Ok(Subject::Quintic(QuinticCoefficients::new(c1, c3, c5)));
        }
        let kind = ModelKind::from(self.model);
        let a = match (self.a, kind) {
            (Some(a), _) => a,
            (None, ModelKind::Generic) => 1.0,
            (None, _) => return Err(Failure::invalid("--a is required")),
        };
        let b = match (self.b, kind.uses_b()) {
            (Some(b), true) => b,
            (None, true) => return Err(Failure::invalid(format!("--b is required for {kind}"))),
            (Some(_), false) => {
                return Err(Failure::invalid(format!("--b does not apply to {kind}")))
            }
            (None, false) => 0.0,
        };
        let model = match kind {
            ModelKind::Relativistic => OscillatorModel::relativistic(a),
            ModelKind::CableMass => OscillatorModel::cable_mass(a, b),
            ModelKind::DuffingRelativistic => OscillatorModel::duffing_relativistic(a, b),
            ModelKind::Generic => {
                let spec = self
                    .force_spec
                    .as_deref()
                    .ok_or_else(|| Failure::invalid("--force-spec is required for generic"))?;
                OscillatorModel::generic(a, parse_list("force-spec", spec)?)
            }
        };
        if self.force_spec.is_some() && kind != ModelKind::Generic {
            return Err(Failure::invalid("--force-spec applies only to generic"));
        }
        model.validate()?;
        Ok(Subject::Model(model))
    }
}

struct Report {
    csv: CsvTable,
    results: Value,
    passed: bool,
}

/// Runs the command line given by `args` (program name first) and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let (output, config) = match &cli.command {
        Command::Coeffs { output, .. }
        | Command::Solve { output, .. }
        | Command::Period { output, .. }
        | Command::Table { output, .. }
        | Command::Sweep { output, .. } => (output.clone(), config_of(&cli.command)),
    };
    let report = match dispatch(&cli.command) {
        Ok(report) => report,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            return failure.code;
        }
    };
    let text = match output.format {
        Format::Csv => report.csv.render(),
        Format::Json => output::render_json(&config, &report.results),
    };
    if let Err(e) = output::emit(&text, output.out.as_deref()) {
        eprintln!("error: cannot write output: {e}");
        return EXIT_INVALID;
    }
    if report.passed {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

fn config_of(command: &Command) -> Value {
    match command {
        Command::Coeffs { model, nodes, .. } => {
            json!({"command": "coeffs", "model": model, "nodes": nodes})
        }
        Command::Solve { model, samples, .. } => {
            json!({"command": "solve", "model": model, "samples": samples})
        }
        Command::Period { model, tol, .. } => {
            json!({"command": "period", "model": model, "tol": tol})
        }
        Command::Table { which, grid, .. } => {
            json!({"command": "table", "which": which, "grid": grid})
        }
        Command::Sweep {
            model,
            a_min,
            a_max,
            a_steps,
            b_min,
            b_max,
            b_steps,
            grid,
            ..
        } => json!({
            "command": "sweep",
            "model": model,
            "a": {"min": a_min, "max": a_max, "steps": a_steps},
            "b": {"min": b_min, "max": b_max, "steps": b_steps},
            "grid": grid,
        }),
    }
}

fn dispatch(command: &Command) -> Result<Report, Failure> {
    match command {
        Command::Coeffs { model, nodes, .. } => cmd_coeffs(model, *nodes),
        Command::Solve { model, samples, .. } => cmd_solve(model, *samples),
        Command::Period { model, tol, .. } => cmd_period(model, *tol),
        Command::Table { which, grid, .. } => cmd_table(*which, *grid),
        Command::Sweep {
            model,
            a_min,
            a_max,
            a_steps,
            b_min,
            b_max,
            b_steps,
            grid,
            ..
        } => {
            let kind = ModelKind::from(*model);
            if kind == ModelKind::Generic {
                return Err(Failure::invalid(
                    "sweep supports the three square-root models",
                ));
            }
            let a = open_closed_grid("a", *a_min, *a_max, *a_steps)?;
            let b = if kind.uses_b() {
                open_closed_grid("b", *b_min, *b_max, *b_steps)?
            } else {
                vec![0.0]
            };
            cmd_sweep(kind, &a, &b, *grid)
        }
    }
}

fn coefficient_row(path: &str, c: &QuinticCoefficients) -> Vec<Field> {
    vec![
        path.into(),
        c.c1.into(),
        c.c3.into(),
        c.c5.into(),
        discriminant(c).delta.into(),
        classify(c).label().into(),
    ]
}

fn cmd_coeffs(args: &ModelArgs, nodes: usize) -> Result<Report, Failure> {
    let mut csv = CsvTable::new(&["path", "c1", "c3", "c5", "discriminant", "case"]);
    let results = match args.subject()? {
        Subject::Quintic(c) => {
            csv.push(coefficient_row("explicit", &c));
            json!({"explicit": coefficients_json(&c)})
        }
        Subject::Model(model) => {
            let closed = model_coefficients(&model)?;
            let quad = model_coefficients_by_quadrature(&model, nodes)?;
            csv.push(coefficient_row("closed_form", &closed));
            csv.push(coefficient_row("quadrature", &quad));
            let diff = [
                closed.c1 - quad.c1,
                closed.c3 - quad.c3,
                closed.c5 - quad.c5,
            ];
            let delta_diff = discriminant(&closed).delta - discriminant(&quad).delta;
            csv.push(vec![
                "difference".into(),
                diff[0].into(),
                diff[1].into(),
                diff[2].into(),
                delta_diff.into(),
                Field::Empty,
            ]);
            json!({
                "model": model,
                "closed_form": coefficients_json(&closed),
                "quadrature": coefficients_json(&quad),
                "difference": {"c1": diff[0], "c3": diff[1], "c5": diff[2], "discriminant": delta_diff},
            })
        }
    };
    Ok(Report {
        csv,
        results,
        passed: true,
    })
}

fn coefficients_json(c: &QuinticCoefficients) -> Value {
    json!({
        "c1": c.c1,
        "c3": c.c3,
        "c5": c.c5,
        "discriminant": discriminant(c).delta,
        "case": classify(c).label(),
    })
}

fn solution_of(
    subject: &Subject,
) -> Result<(ClosedFormSolution, Option<&OscillatorModel>), Failure> {
    Ok(match subject {
        Subject::Quintic(c) => (solve(c)?, None),
        Subject::Model(model) => (solve(&model_coefficients(model)?)?, Some(model)),
    })
}

fn cmd_solve(args: &ModelArgs, samples: usize) -> Result<Report, Failure> {
    if samples < 2 {
        return Err(Failure::invalid("--samples must be at least 2"));
    }
    let subject = args.subject()?;
    let (solution, model) = solution_of(&subject)?;
    let period = solution.period();
    let step = period / (samples - 1) as f64;
    let mut csv = CsvTable::new(&["t", "u", "u_dot", "residual"]);
    let mut rows = Vec::with_capacity(samples);
    for i in 0..samples {
        let t = i as f64 * step;
        let residual = model.map_or(0.0, |m| residual_at(m, &solution, t));
        let (u, v) = (solution.evaluate(t), solution.velocity(t));
        csv.push(vec![t.into(), u.into(), v.into(), residual.into()]);
        rows.push([t, u, v, residual]);
    }
    let sup = match model {
        Some(m) => Some(residual_sup_norm(m, &solution, args.grid)?.sup_norm),
        None => None,
    };
    Ok(Report {
        csv,
        results: json!({
            "solution": solution,
            "period": period,
            "residual_sup": sup,
            "samples": rows,
        }),
        passed: true,
    })
}

fn cmd_period(args: &ModelArgs, tol: f64) -> Result<Report, Failure> {
    if !(tol > 0.0 && tol < 1e-3) {
        return Err(Failure::invalid("--tol must lie in (0, 1e-3)"));
    }
    let Subject::Model(model) = args.subject()? else {
        return Err(Failure::invalid(
            "period needs a model, not explicit coefficients",
        ));
    };
    let exact = model.exact_period()?;
    let quadrature = model.period_by_quadrature(tol)?;
    let (solution, _) = solution_of(&Subject::Model(model.clone()))?;
    let quintic = solution.period();
    let ratio = exact.value / quintic;
    let method = serde_json::to_value(exact.method)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default();
    let mut csv = CsvTable::new(&[
        "exact",
        "quintic",
        "ratio",
        "exact_method",
        "exact_quadrature",
    ]);
    csv.push(vec![
        exact.value.into(),
        quintic.into(),
        ratio.into(),
        method.clone().into(),
        quadrature.into(),
    ]);
    Ok(Report {
        csv,
        results: json!({
            "model": model,
            "exact": exact.value,
            "exact_method": method,
            "exact_quadrature": quadrature,
            "quintic": quintic,
            "ratio": ratio,
        }),
        passed: true,
    })
}

fn cmd_table(which: u8, grid: usize) -> Result<Report, Failure> {
    if grid < 2 {
        return Err(Failure::invalid("--grid must be at least 2"));
    }
    let outcomes = reproduce_table(which, grid)?;
    let mut csv = CsvTable::new(&[
        "a",
        "b",
        "expected",
        "computed",
        "refined",
        "abs_error",
        "pass",
    ]);
    for o in &outcomes {
        csv.push(vec![
            o.cell.a.into(),
            o.cell.b.into(),
            o.cell.expected.into(),
            o.computed.into(),
            o.refined.into(),
            o.abs_error.into(),
            (if o.pass { "true" } else { "false" }).into(),
        ]);
    }
    Ok(Report {
        csv,
        passed: outcomes.iter().all(|o| o.pass),
        results: json!({
            "table": which,
            "tolerance": TABLE_TOLERANCE,
            "cells": outcomes,
        }),
    })
}

/// `steps` points `min + i (max - min) / steps`, `i = 1..=steps`.
fn open_closed_grid(name: &str, min: f64, max: f64, steps: usize) -> Result<Vec<f64>, Failure> {
    if !(min.is_finite() && max.is_finite() && max > min && steps > 0) {
        return Err(Failure::invalid(format!(
            "--{name}-min < --{name}-max and --{name}-steps > 0 are required"
        )));
    }
    Ok((1..=steps)
        .map(|i| {
            if i == steps {
                max
            } else {
                min + (max - min) * i as f64 / steps as f64
            }
        })
        .collect())
}

#[derive(Debug, Clone, Serialize)]
struct SweepRow {
    a: f64,
    b: Option<f64>,
    c1: Option<f64>,
    c3: Option<f64>,
    c5: Option<f64>,
    delta: Option<f64>,
    case: Option<&'static str>,
    t_exact: Option<f64>,
    t_quintic: Option<f64>,
    ratio: Option<f64>,
    residual_sup: Option<f64>,
    status: String,
}

fn sweep_row(kind: ModelKind, a: f64, b: f64, grid: usize) -> SweepRow {
    let model = match kind {
        ModelKind::CableMass => OscillatorModel::cable_mass(a, b),
        ModelKind::DuffingRelativistic => OscillatorModel::duffing_relativistic(a, b),
        _ => OscillatorModel::relativistic(a),
    };
    let mut row = SweepRow {
        a,
        b: kind.uses_b().then_some(b),
        c1: None,
        c3: None,
        c5: None,
        delta: None,
        case: None,
        t_exact: None,
        t_quintic: None,
        ratio: None,
        residual_sup: None,
        status: "ok".into(),
    };
    let outcome = (|| -> crate::Result<()> {
        let c = model_coefficients(&model)?;
        row.c1 = Some(c.c1);
        row.c3 = Some(c.c3);
        row.c5 = Some(c.c5);
        row.delta = Some(discriminant(&c).delta);
        row.case = Some(classify(&c).label());
        let exact = model.exact_period()?.value;
        row.t_exact = Some(exact);
        let solution = solve(&c)?;
        row.t_quintic = Some(solution.period());
        row.ratio = Some(exact / solution.period());
        row.residual_sup = Some(residual_sup_norm(&model, &solution, grid)?.sup_norm);
        Ok(())
    })();
    if let Err(e) = outcome {
        row.status = e.to_string().replace([',', '\n'], ";");
    }
    row
}

fn cmd_sweep(kind: ModelKind, a: &[f64], b: &[f64], grid: usize) -> Result<Report, Failure> {
    if grid < 2 {
        return Err(Failure::invalid("--grid must be at least 2"));
    }
    let points: Vec<(f64, f64)> = a
        .iter()
        .flat_map(|&x| b.iter().map(move |&y| (x, y)))
        .collect();
    // Indexed parallel collect keeps grid order.
    let rows: Vec<SweepRow> = points
        .par_iter()
        .map(|&(x, y)| sweep_row(kind, x, y, grid))
        .collect();
    let mut csv = CsvTable::new(&[
        "a",
        "b",
        "c1",
        "c3",
        "c5",
        "delta",
        "case",
        "t_exact",
        "t_quintic",
        "ratio",
        "residual_sup",
        "status",
    ]);
    for r in &rows {
        csv.push(vec![
            r.a.into(),
            r.b.into(),
            r.c1.into(),
            r.c3.into(),
            r.c5.into(),
            r.delta.into(),
            r.case.map_or(Field::Empty, Field::from),
            r.t_exact.into(),
            r.t_quintic.into(),
            r.ratio.into(),
            r.residual_sup.into(),
            r.status.clone().into(),
        ]);
    }
    Ok(Report {
        csv,
        results: json!({"model": kind, "rows": rows}),
        passed: true,
    })
}

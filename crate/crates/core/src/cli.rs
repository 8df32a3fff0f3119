//! Command-line front end.
//!
//! Exit codes: 0 when every requested check passes, 1 when a check fails,
//! 2 for usage, parse and input errors. With `--json` every command prints a
//! single JSON object carrying `"schema": 1`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::analyzer::{
    bott_matrix, boundary_zero_free, check_nondegenerate, log_eigenvalues, ChartFieldDoc, Verdict,
};
use crate::catalog::{
    build_example, check_entry, export_catalog, verify_all, CatalogDoc, EntryOutcome, ExampleId,
    ExampleParams, SCHEMA_VERSION,
};
use crate::ch_numeric::{
    expected_residue, polytube_limit, polytube_residue, QuadratureConfig, ResidueDoc,
};
use crate::error::{Error, Result};
use crate::rational::{format_q, parse_q, to_f64};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "logbott",
    version,
    about = "Exact checks of logarithmic Bott residue localization"
)]
pub struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for sampled nondegeneracy checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare global integrals with summed local contributions.
    Verify(VerifyArgs),
    /// Bott matrix, log eigenvalues and nondegeneracy verdict of a chart field.
    AnalyzeField { path: PathBuf },
    /// Numeric Coleff-Herrera residue over shrinking polytubes.
    ChResidue(ResidueArgs),
    /// Write the built-in catalog as JSON, or TOML for a `.toml` path.
    ExportCatalog {
        path: PathBuf,
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Built-in example id.
    #[arg(conflicts_with_all = ["all", "file"], required_unless_present_any = ["all", "file"])]
    pub id: Option<String>,
    /// Every built-in example.
    #[arg(long)]
    pub all: bool,
    /// Catalog file (JSON, or TOML for a `.toml` path).
    #[arg(long, conflicts_with = "all")]
    pub file: Option<PathBuf>,
    /// Example parameter, e.g. `k=3` or `c=7/2`. Keys: k, m, a, b, c.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
}

#[derive(Debug, Args)]
pub struct ResidueArgs {
    pub path: PathBuf,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, default_value_t = 64)]
    pub points: usize,
    /// Radii for extrapolation, coarse to fine; defaults to `eps, eps/2`.
    #[arg(long, value_delimiter = ',')]
    pub richardson: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1e-6)]
    pub tolerance: f64,
}

/// Parse `argv` (including the program name), run, and return the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(out, "{}", e.render());
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    EXIT_OK
                }
                _ => EXIT_USAGE,
            };
        }
    };
    let json = cli.json;
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = if json {
                writeln!(
                    out,
                    "{}",
                    json!({"schema": SCHEMA_VERSION, "error": {"kind": e.kind(), "message": e.to_string()}})
                )
            } else {
                writeln!(out, "error: {e}")
            };
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Verify(args) => verify_cmd(args, cli.json, out),
        Command::AnalyzeField { path } => analyze_cmd(path, cli.json, cli.seed, out),
        Command::ChResidue(args) => residue_cmd(args, cli.json, out),
        Command::ExportCatalog { path, params } => {
            let params = parse_params(params)?;
            let doc = export_catalog(&params)?;
            std::fs::write(path, doc.render(is_toml(path))?)?;
            if cli.json {
                writeln!(
                    out,
                    "{}",
                    json!({"schema": SCHEMA_VERSION, "path": path.display().to_string(), "entries": doc.entries.len()})
                )?;
            } else {
                writeln!(
                    out,
                    "wrote {} entries to {}",
                    doc.entries.len(),
                    path.display()
                )?;
            }
            Ok(EXIT_OK)
        }
    }
}

fn is_toml(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "toml")
}

pub fn parse_params(items: &[String]) -> Result<ExampleParams> {
    let mut p = ExampleParams::default();
    for item in items {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| Error::Input(format!("parameter `{item}` is not KEY=VALUE")))?;
        let int = || {
            value.trim().parse::<i64>().map_err(|_| {
                Error::Input(format!("parameter {key} needs an integer, got `{value}`"))
            })
        };
        match key.trim() {
            "k" => p.k = int()?,
            "m" => {
                p.m = u32::try_from(int()?)
                    .map_err(|_| Error::Input(format!("parameter m out of range: `{value}`")))?
            }
            "a" => p.a = parse_q(value).map_err(Error::Input)?,
            "b" => p.b = parse_q(value).map_err(Error::Input)?,
            "c" => p.c = parse_q(value).map_err(Error::Input)?,
            other => {
                return Err(Error::Input(format!(
                    "unknown parameter `{other}`; known: k, m, a, b, c"
                )))
            }
        }
    }
    Ok(p)
}

fn verify_cmd(args: &VerifyArgs, json: bool, out: &mut dyn Write) -> Result<i32> {
    let params = parse_params(&args.params)?;
    let outcomes: Vec<EntryOutcome> = if let Some(path) = &args.file {
        let text = std::fs::read_to_string(path)?;
        let entries = CatalogDoc::parse(&text, is_toml(path))?.load()?;
        entries.iter().map(|e| e.check()).collect()
    } else if args.all {
        verify_all(&params).into_iter().collect::<Result<_>>()?
    } else {
        let id = ExampleId::parse(args.id.as_deref().unwrap_or_default())?;
        vec![check_entry(&build_example(id, &params)?)]
    };
    let passed = outcomes.iter().all(|o| o.passed);
    if json {
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&json!({
                "schema": SCHEMA_VERSION,
                "reports": outcomes,
                "passed": passed,
            }))?
        )?;
    } else {
        write_table(&outcomes, out)?;
    }
    Ok(if passed { EXIT_OK } else { EXIT_FAILED })
}

fn write_table(outcomes: &[EntryOutcome], out: &mut dyn Write) -> Result<()> {
    let rows: Vec<[String; 4]> = outcomes
        .iter()
        .map(|o| {
            let global = o
                .global
                .as_ref()
                .map(|g| format_q(&g.0))
                .unwrap_or_else(|| "error".into());
            let local = if o.local_side {
                let parts: Vec<String> = o
                    .contributions
                    .iter()
                    .map(|c| {
                        c.value
                            .as_ref()
                            .map(|v| format_q(&v.0))
                            .unwrap_or_else(|| "error".into())
                    })
                    .collect();
                format!("{} = {}", parts.join(" + "), format_q(&o.sum.0))
            } else {
                "not encoded".into()
            };
            [
                o.example.clone(),
                format!("{global}={}", format_q(&o.expected_global.0)),
                local,
                if o.passed { "✓".into() } else { "✗".into() },
            ]
        })
        .collect();
    let header = ["example", "global=expected", "local", ""];
    let width = |i: usize| {
        rows.iter()
            .map(|r| r[i].chars().count())
            .chain([header[i].len()])
            .max()
            .unwrap_or(0)
    };
    let widths = [width(0), width(1), width(2)];
    let line = |cells: [&str; 4]| {
        format!(
            "{:<w0$}  {:<w1$}  {:<w2$}  {}",
            cells[0],
            cells[1],
            cells[2],
            cells[3],
            w0 = widths[0],
            w1 = widths[1],
            w2 = widths[2]
        )
    };
    writeln!(out, "{}", line(header).trim_end())?;
    for r in &rows {
        writeln!(out, "{}", line([&r[0], &r[1], &r[2], &r[3]]))?;
    }
    for o in outcomes {
        for e in &o.errors {
            writeln!(out, "{}: {e}", o.example)?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct FieldReport {
    schema: u32,
    chart: Option<String>,
    coordinates: Vec<String>,
    bott_matrix: Vec<Vec<String>>,
    determinant: String,
    log_eigenvalues: Vec<LogEigenvalue>,
    boundary_zero_free: bool,
    verdict: Verdict,
    expected: String,
    passed: bool,
}

#[derive(Serialize)]
struct LogEigenvalue {
    index: usize,
    value: String,
}

fn analyze_cmd(path: &Path, json: bool, seed: u64, out: &mut dyn Write) -> Result<i32> {
    let doc: ChartFieldDoc = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let names = doc.names();
    if names.len() != doc.dim {
        return Err(Error::Input(format!(
            "{} coordinate names for dimension {}",
            names.len(),
            doc.dim
        )));
    }
    let expected = doc.expect.clone().unwrap_or_else(|| "nondegenerate".into());
    if !["nondegenerate", "degenerate", "indeterminate"].contains(&expected.as_str()) {
        return Err(Error::Input(format!(
            "unknown expected verdict `{expected}`"
        )));
    }
    let (field, chart) = doc.build()?;
    let m = bott_matrix(&field, &chart)?;
    let verdict = check_nondegenerate(&m, seed);
    let passed = verdict.label() == expected;
    let show = |p: &crate::poly::Poly| p.display_with(&names).to_string();
    let report = FieldReport {
        schema: SCHEMA_VERSION,
        chart: doc.name.clone(),
        coordinates: names.clone(),
        bott_matrix: m
            .entries
            .iter()
            .map(|row| row.iter().map(show).collect())
            .collect(),
        determinant: show(&m.determinant()),
        log_eigenvalues: log_eigenvalues(&field, &chart)?
            .into_iter()
            .map(|(index, p)| LogEigenvalue {
                index,
                value: show(&p),
            })
            .collect(),
        boundary_zero_free: boundary_zero_free(&field),
        verdict,
        expected,
        passed,
    };
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    } else {
        if let Some(name) = &report.chart {
            writeln!(out, "chart {name}")?;
        }
        writeln!(
            out,
            "Bott matrix (normal coordinates {:?}):",
            chart.normal_coords
        )?;
        writeln!(out, "  {}", m.display_with(&names))?;
        writeln!(out, "det = {}", report.determinant)?;
        for e in &report.log_eigenvalues {
            writeln!(out, "log eigenvalue along {} = {}", names[e.index], e.value)?;
        }
        writeln!(
            out,
            "boundary zero-free in chart: {}",
            if report.boundary_zero_free {
                "yes"
            } else {
                "no"
            }
        )?;
        writeln!(
            out,
            "verdict: {} (expected {}) {}",
            report.verdict,
            report.expected,
            if passed { "✓" } else { "✗" }
        )?;
    }
    Ok(if passed { EXIT_OK } else { EXIT_FAILED })
}

#[derive(Serialize)]
struct ResidueReport {
    schema: u32,
    map: Option<String>,
    pairing: crate::ch_numeric::Pairing,
    points: usize,
    eps: f64,
    value: Complex64,
    samples: Vec<(f64, Complex64)>,
    extrapolated: Complex64,
    expected: String,
    error: f64,
    tolerance: f64,
    passed: bool,
}

fn residue_cmd(args: &ResidueArgs, json: bool, out: &mut dyn Write) -> Result<i32> {
    let doc: ResidueDoc = serde_json::from_str(&std::fs::read_to_string(&args.path)?)?;
    let ladder = args
        .richardson
        .clone()
        .unwrap_or_else(|| vec![args.eps, args.eps / 2.0]);
    if ladder.len() < 2 {
        return Err(Error::Input("--richardson needs at least two radii".into()));
    }
    if args.tolerance.is_nan() || args.tolerance <= 0.0 {
        return Err(Error::Input("--tolerance must be positive".into()));
    }
    let cfg = QuadratureConfig {
        eps: args.eps,
        points: args.points,
        ladder,
        tolerance: args.tolerance,
        ..QuadratureConfig::default()
    };
    let (map, g) = doc.build()?;
    cfg.validate(map.codim())?;
    let value = polytube_residue(&map, &g, &cfg, doc.pairing)?;
    let limit = polytube_limit(&map, &g, &cfg, doc.pairing)?;
    let expected = expected_residue(&map, &g, doc.pairing);
    let error = (limit.extrapolated - Complex64::new(to_f64(&expected), 0.0)).norm();
    let passed = error <= cfg.tolerance;
    let report = ResidueReport {
        schema: SCHEMA_VERSION,
        map: doc.name.clone(),
        pairing: doc.pairing,
        points: cfg.points,
        eps: cfg.eps,
        value,
        samples: limit.samples,
        extrapolated: limit.extrapolated,
        expected: format_q(&expected),
        error,
        tolerance: cfg.tolerance,
        passed,
    };
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    } else {
        writeln!(
            out,
            "residue at eps = {}: {}",
            report.eps,
            fmt_complex(value)
        )?;
        for (eps, v) in &report.samples {
            writeln!(out, "  eps = {eps}: {}", fmt_complex(*v))?;
        }
        writeln!(out, "extrapolated: {}", fmt_complex(report.extrapolated))?;
        writeln!(
            out,
            "expected {} (|error| = {:.3e}, tolerance {:.0e}) {}",
            report.expected,
            error,
            cfg.tolerance,
            if passed { "✓" } else { "✗" }
        )?;
    }
    Ok(if passed { EXIT_OK } else { EXIT_FAILED })
}

fn fmt_complex(z: Complex64) -> String {
    format!(
        "{:.12} {} {:.3e}i",
        z.re,
        if z.im < 0.0 { "-" } else { "+" },
        z.im.abs()
    )
}

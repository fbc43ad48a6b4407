use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use contact_groups::algebra::{is_contact, validate_jacobi, ContactData, StructureConstants, DEFAULT_TOL};
use contact_groups::classify::classify;
use contact_groups::embedding::{psi_embedding, write_csv, GridSpec};
use contact_groups::frame::canonical_frame;
use contact_groups::geodesic::{default_normal_generators, normal_exponential};
use contact_groups::io::{mat3_rows, AlgebraDocument};
use contact_groups::models::{heis_factorize, sl2_factorize, MatrixModel};
use contact_groups::presets;
use contact_groups::verify;
use contact_groups::{Mat3, Error};
use nalgebra::Matrix2;
use serde::Serialize;
use serde_json::json;

#[derive(Parser)]
#[command(name = "contact-groups", version, about = "Contact structures on three-dimensional Lie groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Source {
    /// Built-in algebra (heisenberg, su2, sl2, sl2_hyperbolic, case1, case2, euclidean)
    #[arg(long, conflicts_with = "input")]
    preset: Option<String>,
    /// JSON algebra document
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct Sampling {
    /// Points per axis
    #[arg(long, default_value_t = 10)]
    grid: usize,
    /// Box bounds `lo,hi`, used for all three axes
    #[arg(long = "box", default_value = "-2,2", allow_hyphen_values = true)]
    bounds: String,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Jacobi identity, contact condition and Killing form
    Validate {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Canonical frame and case analysis
    Classify {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the contactomorphism to R^3 as CSV; the report goes to stderr
    Embed {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full verification suite for one algebra
    Verify {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Factor a group element into its one-parameter subgroups
    Factor {
        /// heisenberg or sl2
        #[arg(long)]
        model: String,
        /// Row-major JSON matrix, e.g. '[[2,3],[0,0.5]]'
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Geodesic test of the canonical frame fields
    Geodesic {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sampled immersion and injectivity witness for the normal exponential map
    Normexp {
        /// heisenberg or sl2
        #[arg(long)]
        model: String,
        #[arg(long, default_value_t = 6)]
        grid: usize,
        #[arg(long = "box", default_value = "-1,1", allow_hyphen_values = true)]
        bounds: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Summary over every preset and matrix model
    Report {
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(source: &Source) -> Result<(String, StructureConstants, ContactData)> {
    match (&source.preset, &source.input) {
        (Some(name), None) => {
            let p = presets::get(name)?;
            Ok((p.name.to_string(), p.constants, p.contact))
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let (c, data) = AlgebraDocument::parse(&text)?.into_parts()?;
            Ok((path.display().to_string(), c, data))
        }
        _ => bail!("pass exactly one of --preset or --input"),
    }
}

fn parse_box(s: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [lo, hi] = parts[..] else {
        bail!("--box expects `lo,hi`, got `{s}`");
    };
    Ok((lo.parse().context("box lower bound")?, hi.parse().context("box upper bound")?))
}

fn grid_of(grid: usize, bounds: &str) -> Result<GridSpec> {
    let (lo, hi) = parse_box(bounds)?;
    Ok(GridSpec::new(grid, lo, hi)?)
}

fn emit<T: Serialize>(value: &T, out: &Option<PathBuf>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Validate { source, out } => {
            let (name, c, data) = load(&source)?;
            let jacobi = validate_jacobi(&c, DEFAULT_TOL)?;
            let contact = is_contact(&c, &data)?;
            let killing = c.killing_form();
            let pass = jacobi.pass && contact.contact;
            emit(
                &json!({
                    "algebra": name,
                    "jacobi": jacobi,
                    "contact": contact,
                    "killing_form": mat3_rows(&killing.matrix),
                    "killing_signature": killing.signature(1e-9),
                    "pass": pass,
                }),
                &out,
            )?;
            Ok(pass)
        }
        Command::Classify { source, out } => {
            let (_, c, data) = load(&source)?;
            let result = classify(&canonical_frame(&c, &data)?)?;
            emit(&result, &out)?;
            Ok(true)
        }
        Command::Embed { source, sampling, out } => {
            let (_, c, data) = load(&source)?;
            let grid = grid_of(sampling.grid, &sampling.bounds)?;
            let e = psi_embedding(&c, &data, &grid, sampling.tol)?;
            match &out {
                Some(path) => write_csv(&e.samples, fs::File::create(path)?)?,
                None => write_csv(&e.samples, io::stdout().lock())?,
            }
            eprintln!("{}", serde_json::to_string_pretty(&e.report)?);
            Ok(e.report.pass)
        }
        Command::Verify { source, sampling, seed, out } => {
            let (name, c, data) = load(&source)?;
            let grid = grid_of(sampling.grid, &sampling.bounds)?;
            let report = verify::algebra_report(&name, &c, &data, &grid, sampling.tol)?;
            let stability = verify::stability_of(&name, &c, &data, 100, seed)?;
            let pass = report.pass && stability.pass;
            emit(&json!({ "report": report, "basis_changes": stability, "pass": pass }), &out)?;
            Ok(pass)
        }
        Command::Factor { model, matrix, out } => {
            let rows: Vec<Vec<f64>> = serde_json::from_str(&matrix).context("--matrix must be a JSON array of rows")?;
            let model = MatrixModel::parse(&model)?;
            let n = model.dim();
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(Error::MalformedMatrix(format!("expected a {n}x{n} matrix")).into());
            }
            let f = match model {
                MatrixModel::Heisenberg => heis_factorize(&Mat3::from_fn(|i, j| rows[i][j]))?,
                MatrixModel::Sl2 => sl2_factorize(&Matrix2::from_fn(|i, j| rows[i][j]))?,
            };
            emit(&json!({ "model": model, "factorization": f }), &out)?;
            Ok(f.residual <= 1e-12 * rows.iter().flatten().fold(1.0f64, |m, x| m.max(x.abs())))
        }
        Command::Geodesic { source, out } => {
            let (_, c, data) = load(&source)?;
            let result = classify(&canonical_frame(&c, &data)?)?;
            let suite = verify::geodesic_suite(&result.constants())?;
            emit(&json!({ "case_tag": result.case_tag, "geodesics": suite }), &out)?;
            Ok(suite.pass)
        }
        Command::Normexp { model, grid, bounds, out } => {
            let model = MatrixModel::parse(&model)?;
            let r = normal_exponential(model, &default_normal_generators(model), &grid_of(grid, &bounds)?);
            emit(&r, &out)?;
            Ok(r.pass)
        }
        Command::Report { sampling, seed, out } => {
            let grid = grid_of(sampling.grid, &sampling.bounds)?;
            let mut pass = true;
            let mut algebras = Vec::new();
            for (k, p) in presets::all().iter().enumerate() {
                let r = verify::preset_report(p.name, &grid, sampling.tol)?;
                let s = verify::basis_change_stability(p, 100, seed + k as u64)?;
                pass &= r.pass && s.pass;
                algebras.push(json!({
                    "preset": p.name,
                    "case_tag": r.case_tag,
                    "pass": r.pass && s.pass,
                    "max_alignment_residual": r.grid.as_ref().map(|g| g.pushforward.max_residual),
                    "min_abs_volume": r.grid.as_ref().map(|g| g.min_abs_volume),
                    "max_off_pattern": s.max_off_pattern,
                }));
            }
            let mut models = Vec::new();
            let exp_grid = GridSpec::new(6, -1.0, 1.0)?;
            for model in [MatrixModel::Heisenberg, MatrixModel::Sl2] {
                let f = verify::factorization_check(model, 1000, seed)?;
                let cross = verify::cross_oracle(model, &grid)?;
                let ne = normal_exponential(model, &default_normal_generators(model), &exp_grid);
                let ok = f.pass && cross <= verify::CROSS_ORACLE_TOL && ne.pass;
                pass &= ok;
                models.push(json!({
                    "model": model,
                    "factorization": f,
                    "cross_oracle": cross,
                    "normal_exponential": ne,
                    "pass": ok,
                }));
            }
            let su2 = verify::su2_normalization_check(100, seed)?;
            pass &= su2.pass;
            emit(
                &json!({ "algebras": algebras, "models": models, "su2_normalization": su2, "pass": pass }),
                &out,
            )?;
            Ok(pass)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("checks failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

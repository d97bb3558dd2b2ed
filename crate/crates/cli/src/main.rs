//! `liesym`: symmetry analysis of geodesic equations on codimension-one
//! solvable groups.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 singular `A` refused by
//! the solver, 3 catalog verification mismatch.

mod input;
mod render;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use liesym::catalog::{display_params, get_family, structure_report, verify_family, Catalog, FamilyReport, StructureReport, VerifyOptions};
use liesym::determining::{is_symmetry, numeric_residual, GeodesicSystem, Sampling};
use liesym::geodesics::{closed_form_geodesic, first_integral_drift, rk4_geodesic, GeodesicState};
use liesym::solver::{analyze_symmetry_algebra, solve, sweep, SolutionRecord, SolveError, SweepReport};

const EXIT_REFUSED: u8 = 2;
const EXIT_MISMATCH: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "liesym", version, about = "Lie point symmetries of geodesics on codimension-one solvable groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Acceptance threshold for sampled residuals.
    #[arg(long, global = true, default_value_t = 1e-9, value_parser = positive_f64)]
    tol: f64,
    /// Number of sample points for numeric residuals.
    #[arg(long, global = true, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    /// Seed for the sample points.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Either a matrix file or a catalog family with parameters.
#[derive(Debug, Args)]
struct SystemArgs {
    /// JSON matrix: nested rows, {"rows","cols","entries"}, or either under "A".
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Catalog family such as A4.5.
    #[arg(long)]
    family: Option<String>,
    /// Parameter values, e.g. "a=1,b=-1/2".
    #[arg(long)]
    params: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve for the full symmetry algebra of a nonsingular A.
    Analyze(SystemArgs),
    /// Symmetry dimension across a parameter grid of a family.
    Sweep {
        #[arg(long)]
        family: String,
        /// JSON grid: {"a": [..], ..} for a product, or a list of points.
        #[arg(long)]
        grid: PathBuf,
        /// Values for parameters the grid leaves out.
        #[arg(long)]
        params: Option<String>,
    },
    /// Check candidate fields, one per line, against the determining equations.
    Verify {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        fields: PathBuf,
    },
    /// Integrate a geodesic and compare with the closed form.
    Geodesic {
        #[command(flatten)]
        system: SystemArgs,
        /// Initial state as inline JSON or a file path.
        #[arg(long)]
        init: String,
        #[arg(long, default_value_t = 2.0)]
        t_end: f64,
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        steps: u64,
        /// Write the trajectory here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Re-verify the built-in catalog, or one family or case of it.
    Catalog {
        #[arg(long)]
        family: Option<String>,
        #[arg(long, requires = "family")]
        params: Option<String>,
    },
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(_) => Err("must be a positive number".into()),
        Err(e) => Err(e.to_string()),
    }
}

impl Cli {
    fn sampling(&self) -> Sampling {
        Sampling {
            samples: self.samples as usize,
            seed: self.seed,
            ..Sampling::default()
        }
    }

    fn emit<T: Serialize>(&self, value: &T, text: impl FnOnce(&T) -> String) -> Result<()> {
        let out = match self.format {
            Format::Json => serde_json::to_string_pretty(value)? + "\n",
            Format::Text => text(value),
        };
        std::io::stdout().write_all(out.as_bytes())?;
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Analyze(sys) => analyze(cli, sys),
        Command::Sweep { family, grid, params } => sweep_cmd(cli, family, grid, params.as_deref()),
        Command::Verify { system, fields } => verify(cli, system, fields),
        Command::Geodesic {
            system,
            init,
            t_end,
            steps,
            csv,
        } => geodesic(cli, system, init, *t_end, *steps as usize, csv.as_ref()),
        Command::Catalog { family, params } => catalog(cli, family.as_deref(), params.as_deref()),
    }
}

/// How one solver generator was confirmed.
#[derive(Debug, Serialize)]
pub struct GeneratorCheck {
    pub index: usize,
    /// `exact` for expression fields, `sampled` otherwise.
    pub route: &'static str,
    pub accepted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct AnalyzeReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "std::collections::BTreeMap::is_empty")]
    pub params: std::collections::BTreeMap<String, String>,
    #[serde(flatten)]
    pub solution: SolutionRecord,
    pub checks: Vec<GeneratorCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closure_error: Option<String>,
}

fn analyze(cli: &Cli, args: &SystemArgs) -> Result<u8> {
    let (a, params) = input::system(args.matrix.as_deref(), args.family.as_deref(), args.params.as_deref())?;
    let sol = match solve(&a) {
        Ok(sol) => sol,
        Err(SolveError::Singular) => {
            eprintln!("refused: {}", SolveError::Singular);
            return Ok(EXIT_REFUSED);
        }
        Err(e) => return Err(e.into()),
    };
    let sys = GeodesicSystem::new(a.clone())?;
    let sampling = cli.sampling();
    let checks: Vec<GeneratorCheck> = sol
        .generators
        .iter()
        .enumerate()
        .map(|(i, g)| match &g.field {
            Some(f) => GeneratorCheck {
                index: i + 1,
                route: "exact",
                accepted: is_symmetry(f, &sys).is_symmetry,
                residual: None,
            },
            None => {
                let r = numeric_residual(&g.structured.with_matrix(&a), &sys, &sampling);
                GeneratorCheck {
                    index: i + 1,
                    route: "sampled",
                    accepted: r < cli.tol,
                    residual: Some(r),
                }
            }
        })
        .collect();
    let exact: Vec<bool> = checks.iter().map(|c| c.route == "exact" && c.accepted).collect();
    let (algebra, closure_error) = match sol.structure_constants() {
        Ok(l) => (Some(analyze_symmetry_algebra(&l)), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let report = AnalyzeReport {
        family: args.family.clone(),
        params: display_params(&params),
        solution: sol.record(&exact, algebra.as_ref()),
        checks,
        closure_error,
    };
    cli.emit(&report, render::analyze)?;
    Ok(0)
}

#[derive(Debug, Serialize)]
pub struct SweepOutput {
    pub family: String,
    #[serde(flatten)]
    pub report: SweepReport,
}

fn sweep_cmd(cli: &Cli, family: &str, grid: &std::path::Path, fixed: Option<&str>) -> Result<u8> {
    let name = Catalog::builtin().family(family)?.name.clone();
    let fixed = fixed.map(liesym::catalog::parse_param_list).transpose()?.unwrap_or_default();
    let points = input::grid(&input::read(grid)?, &fixed)?;
    let report = sweep(&points, |p| {
        get_family(&name, p)
            .map(|inst| inst.algebra.matrix().clone())
            .map_err(|e| e.to_string())
    })?;
    cli.emit(&SweepOutput { family: name, report }, render::sweep)?;
    Ok(0)
}

#[derive(Debug, Serialize)]
pub struct FieldVerdict {
    pub index: usize,
    pub field: String,
    pub accepted: bool,
    /// Every determining condition vanishes identically.
    pub exact: bool,
    pub numeric_residual: f64,
    /// `lambda = -D xi`, reported for accepted fields.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failing: Vec<String>,
    /// The exact verdict and the sampled one (residual below tolerance) agree.
    pub routes_agree: bool,
}

#[derive(Debug, Serialize)]
pub struct VerifyOutput {
    pub n: usize,
    #[serde(rename = "A")]
    pub a: liesym::linalg::RatMatrix,
    pub accepted: usize,
    pub rejected: usize,
    pub fields: Vec<FieldVerdict>,
}

fn verify(cli: &Cli, args: &SystemArgs, fields: &std::path::Path) -> Result<u8> {
    let (a, params) = input::system(args.matrix.as_deref(), args.family.as_deref(), args.params.as_deref())?;
    let sys = GeodesicSystem::new(a.clone())?;
    let fields = input::fields(fields, sys.n(), &params)?;
    let sampling = cli.sampling();
    let verdicts: Vec<FieldVerdict> = fields
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let check = is_symmetry(f, &sys);
            let residual = numeric_residual(f, &sys, &sampling);
            FieldVerdict {
                index: i + 1,
                field: f.to_string(),
                accepted: check.is_symmetry,
                exact: check.is_symmetry,
                numeric_residual: residual,
                lambda: check.is_symmetry.then(|| check.lambda.to_text()),
                failing: check.failing.iter().map(ToString::to_string).collect(),
                routes_agree: check.is_symmetry == (residual < cli.tol),
            }
        })
        .collect();
    let accepted = verdicts.iter().filter(|v| v.accepted).count();
    let out = VerifyOutput {
        n: sys.n(),
        a,
        accepted,
        rejected: verdicts.len() - accepted,
        fields: verdicts,
    };
    cli.emit(&out, render::verify)?;
    Ok(0)
}

#[derive(Debug, Serialize)]
pub struct GeodesicSummary {
    pub n: usize,
    pub t_start: f64,
    pub t_end: f64,
    pub steps: usize,
    /// Largest componentwise gap between RK4 and the closed form.
    pub closed_form_max_error: f64,
    /// Largest change of any first integral along the RK4 trajectory.
    pub first_integral_drift: f64,
    pub final_state: GeodesicState,
}

fn geodesic(
    cli: &Cli,
    args: &SystemArgs,
    init: &str,
    t_end: f64,
    steps: usize,
    csv: Option<&PathBuf>,
) -> Result<u8> {
    let (a, _) = input::system(args.matrix.as_deref(), args.family.as_deref(), args.params.as_deref())?;
    let init = input::initial_state(init)?;
    let traj = rk4_geodesic(&a, &init, t_end, steps)?;
    let mut err = 0.0f64;
    for s in traj.states() {
        err = err.max(closed_form_geodesic(&a, &init, s.t - init.t)?.max_difference(s));
    }
    let summary = GeodesicSummary {
        n: init.n(),
        t_start: init.t,
        t_end,
        steps,
        closed_form_max_error: err,
        first_integral_drift: first_integral_drift(&a, &traj)?,
        final_state: traj.states().last().expect("at least one sample").clone(),
    };
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&summary)? + "\n",
        Format::Text => render::geodesic(&summary),
    };
    match csv {
        Some(path) => {
            fs::write(path, traj.to_csv()).with_context(|| format!("cannot write {}", path.display()))?;
            std::io::stdout().write_all(text.as_bytes())?;
        }
        None => {
            std::io::stdout().write_all(traj.to_csv().as_bytes())?;
            eprint!("{text}");
        }
    }
    Ok(0)
}

#[derive(Debug, Serialize)]
pub struct CatalogEntry {
    pub verification: FamilyReport,
    pub structure: StructureReport,
}

#[derive(Debug, Serialize)]
pub struct CatalogOutput {
    pub cases: usize,
    pub passed: usize,
    pub entries: Vec<CatalogEntry>,
}

fn catalog(cli: &Cli, family: Option<&str>, params: Option<&str>) -> Result<u8> {
    let cat = Catalog::builtin();
    let targets: Vec<(String, liesym::symbolic::Params)> = match (family, params) {
        (Some(name), Some(p)) => vec![(cat.family(name)?.name.clone(), liesym::catalog::parse_param_list(p)?)],
        (Some(name), None) => {
            let f = cat.family(name)?;
            f.cases.iter().map(|c| (f.name.clone(), c.sample.clone())).collect()
        }
        (None, _) => cat
            .families()
            .iter()
            .flat_map(|f| f.cases.iter().map(move |c| (f.name.clone(), c.sample.clone())))
            .collect(),
    };
    let opts = VerifyOptions {
        sampling: cli.sampling(),
        tol: cli.tol,
    };
    let entries = targets
        .iter()
        .map(|(name, p)| {
            Ok(CatalogEntry {
                verification: verify_family(name, p, &opts)?,
                structure: structure_report(name, p)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let passed = entries.iter().filter(|e| e.verification.passed).count();
    let out = CatalogOutput {
        cases: entries.len(),
        passed,
        entries,
    };
    cli.emit(&out, render::catalog)?;
    Ok(if out.passed == out.cases { 0 } else { EXIT_MISMATCH })
}

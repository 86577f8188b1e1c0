use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use coopetitive::scenario::{
    analyze, entry_demo, parse_point, render, solve, DemoGrids, GameFile, ScenarioError, Settings, SolutionKind,
    SolveRequest, GRID_ENV,
};

/// Analyze and solve two-player coopetitive games.
#[derive(Debug, Parser)]
#[command(name = "coopetitive", version)]
struct Cli {
    /// Default sampling grid when neither --grid nor the game file sets one.
    #[arg(long, env = GRID_ENV, global = true, hide_env_values = true)]
    default_grid: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct Sampling {
    /// Points per strategy axis of the sampling lattice.
    #[arg(long)]
    grid: Option<usize>,
    /// Tolerance for solution residuals and TU witnesses.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a text report of equilibria, geometry and solutions.
    Analyze {
        path: PathBuf,
        /// Only pure-strategy analysis; accepts any finite game size.
        #[arg(long)]
        pure_only: bool,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Compute one solution.
    Solve {
        path: PathBuf,
        /// ks, nash-bargaining, tu, proper-coopetitive, win-win or compromise:<pareto|nash-pareto|conservative-pareto>
        #[arg(long)]
        solution: String,
        /// Threat point a, as "p1,p2".
        #[arg(long, allow_hyphen_values = true)]
        threat: Option<String>,
        /// Utopia point b, as "p1,p2".
        #[arg(long, allow_hyphen_values = true)]
        utopia: Option<String>,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Write the sampled payoff space as CSV and/or SVG.
    Render {
        path: PathBuf,
        #[arg(long)]
        out_csv: Option<PathBuf>,
        #[arg(long)]
        out_svg: Option<PathBuf>,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Run the market-entry example with all checks and write its figures.
    #[command(name = "paper-demo")]
    Demo {
        #[arg(long)]
        out_dir: PathBuf,
        /// Double the grids and tighten tolerances to 1e-3.
        #[arg(long)]
        refined: bool,
    },
}

fn settings(default_grid: Option<usize>, s: &Sampling) -> Result<Settings, ScenarioError> {
    for (name, g) in [("--grid", s.grid), (GRID_ENV, default_grid)] {
        if let Some(g) = g {
            if g < 2 {
                return Err(ScenarioError::Parse(format!("{name} must be at least 2, got {g}")));
            }
        }
    }
    Ok(Settings {
        grid: s.grid,
        default_grid,
        tol: s.tol,
    })
}

fn run(cli: Cli) -> Result<String, ScenarioError> {
    match cli.command {
        Command::Analyze {
            path,
            pure_only,
            sampling,
        } => {
            let settings = settings(cli.default_grid, &sampling)?;
            let file = GameFile::load(&path)?;
            Ok(analyze(&file, &settings, pure_only)?.to_string())
        }
        Command::Solve {
            path,
            solution,
            threat,
            utopia,
            sampling,
        } => {
            let settings = settings(cli.default_grid, &sampling)?;
            let kind: SolutionKind = solution.parse()?;
            let req = SolveRequest {
                kind,
                threat: threat.as_deref().map(parse_point).transpose()?,
                utopia: utopia.as_deref().map(parse_point).transpose()?,
            };
            let file = GameFile::load(&path)?;
            Ok(solve(&file, &req, &settings)?.to_string())
        }
        Command::Render {
            path,
            out_csv,
            out_svg,
            sampling,
        } => {
            let settings = settings(cli.default_grid, &sampling)?;
            if out_csv.is_none() && out_svg.is_none() {
                return Err(ScenarioError::Parse("render needs --out-csv or --out-svg".into()));
            }
            let file = GameFile::load(&path)?;
            let done = render(&file, &settings, out_csv.as_deref(), out_svg.as_deref())?;
            let mut out = String::new();
            for p in done.csv.iter().chain(done.svg.iter()) {
                out += &format!("wrote {}\n", p.display());
            }
            out += &format!("csv rows: {}\n", done.rows);
            Ok(out)
        }
        Command::Demo { out_dir, refined } => {
            let grids = if refined { DemoGrids::REFINED } else { DemoGrids::DEFAULT };
            let outcome = entry_demo(&out_dir, grids)?;
            if !outcome.all_passed() {
                let names: Vec<_> = outcome.failures().iter().map(|c| c.name.clone()).collect();
                eprint!("{}", outcome.report);
                return Err(ScenarioError::Assertion(names.join("; ")));
            }
            Ok(outcome.report)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            // a closed stdout is not worth a panic
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

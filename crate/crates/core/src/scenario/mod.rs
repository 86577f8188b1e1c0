//! Command-line scenarios: game files, analysis reports, solvers, rendering
//! and the built-in market-entry demo.
//!
//! Everything in here is deterministic: identical inputs produce
//! byte-identical reports, CSV and SVG files.

mod analyze;
mod demo;
mod error;
mod gamefile;
mod num;
mod render;
mod solve;

pub use analyze::{analyze, AnalysisReport, CoopetitiveSummary, MixedSummary, PureSummary, SolutionEntry, SpaceSummary};
pub use demo::{entry_coopetitive_file, entry_finite_file, entry_loss_file, entry_demo, Check, DemoGrids, DemoOutcome};
pub use error::ScenarioError;
pub use gamefile::{AnalysisDefaults, GameFile, GameSpecFile, LoadedGame};
pub use num::Num;
pub use render::{render, render_csv, render_svg, RenderData, RenderedFiles};
pub use solve::{parse_point, solve, SolutionKind, SolveOutcome, SolveRequest};

/// Built-in grid sizes when neither flags, files nor the environment set one.
pub const DEFAULT_GRID_2D: usize = 513;
pub const DEFAULT_GRID_3D: usize = 65;
pub const DEFAULT_TOL: f64 = 1e-2;
/// Environment variable that replaces the built-in default grid.
pub const GRID_ENV: &str = "COOPETITIVE_GRID";

/// Grid and tolerance overrides shared by all commands.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Settings {
    /// From `--grid`.
    pub grid: Option<usize>,
    /// From the environment; replaces the built-in default only.
    pub default_grid: Option<usize>,
    /// From `--tol`.
    pub tol: Option<f64>,
}

impl Settings {
    /// Precedence: flag, then file, then environment, then built-in default.
    pub fn grid_for(&self, file: &GameFile) -> usize {
        self.grid
            .or(file.defaults.grid_n)
            .or(self.default_grid)
            .unwrap_or(match file.game {
                LoadedGame::Coopetitive(_) => DEFAULT_GRID_3D,
                LoadedGame::Finite(_) => DEFAULT_GRID_2D,
            })
    }

    pub fn tol_for(&self, file: &GameFile) -> f64 {
        self.tol.or(file.defaults.tol).unwrap_or(DEFAULT_TOL)
    }
}

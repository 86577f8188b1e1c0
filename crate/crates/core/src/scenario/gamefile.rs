//! JSON game files.
//!
//! ```json
//! { "kind": "finite", "orientation": "gain",
//!   "payoff1": [[4, 0], [0, 0]], "payoff2": [[2, 3], [3, 4]],
//!   "labels": { "rows": ["E", "N"], "cols": ["H", "L"] } }
//!
//! { "kind": "coopetitive", "orientation": "loss",
//!   "p1": { "xy": -4, "z": -1 }, "p2": { "x": 1, "y": 1, "z": -1 },
//!   "c_grid": 65, "initial_z": 0 }
//! ```
//!
//! Both kinds accept an optional `"analysis": { "grid_n": .., "tol": .. }`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::ScenarioError;
use crate::coopetition::{uniform_grid, CoopetitiveGame};
use crate::game::{FiniteBimatrixGame, StrategyLabels};
use crate::geometry::{Arity, PayoffMap, Polynomial};
use crate::point::Orientation;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisDefaults {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GameSpecFile {
    Finite {
        orientation: Orientation,
        payoff1: Vec<Vec<f64>>,
        payoff2: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<StrategyLabels>,
        #[serde(default, skip_serializing_if = "is_default")]
        analysis: AnalysisDefaults,
    },
    Coopetitive {
        orientation: Orientation,
        p1: Polynomial,
        p2: Polynomial,
        /// Number of uniform samples of the cooperative strategy set.
        c_grid: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        initial_z: Option<f64>,
        #[serde(default, skip_serializing_if = "is_default")]
        analysis: AnalysisDefaults,
    },
}

fn is_default(a: &AnalysisDefaults) -> bool {
    *a == AnalysisDefaults::default()
}

#[derive(Debug, Clone, PartialEq)]
pub enum LoadedGame {
    Finite(FiniteBimatrixGame),
    Coopetitive(CoopetitiveGame),
}

/// A validated game file.
#[derive(Debug, Clone, PartialEq)]
pub struct GameFile {
    pub game: LoadedGame,
    pub defaults: AnalysisDefaults,
}

/// 1-based line of the first occurrence of `"key"`, for error messages.
fn line_of(text: &str, key: &str) -> usize {
    let needle = format!("\"{key}\"");
    text.lines().position(|l| l.contains(&needle)).map_or(1, |i| i + 1)
}

fn schema_error(text: &str, key: &str, msg: impl std::fmt::Display) -> ScenarioError {
    ScenarioError::Parse(format!("line {}: {key}: {msg}", line_of(text, key)))
}

impl GameSpecFile {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("game files serialize") + "\n"
    }
}

impl GameFile {
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let spec: GameSpecFile = serde_json::from_str(text).map_err(|e| {
            let full = e.to_string();
            let suffix = format!(" at line {} column {}", e.line(), e.column());
            let msg = full.strip_suffix(&suffix).unwrap_or(&full);
            ScenarioError::Parse(format!("line {} column {}: {msg}", e.line(), e.column()))
        })?;
        Self::from_spec(&spec, text)
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path).map_err(|e| ScenarioError::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            ScenarioError::Parse(m) => ScenarioError::Parse(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Validates a deserialized spec; `text` is only used to anchor messages.
    pub fn from_spec(spec: &GameSpecFile, text: &str) -> Result<Self, ScenarioError> {
        let defaults = match spec {
            GameSpecFile::Finite { analysis, .. } | GameSpecFile::Coopetitive { analysis, .. } => *analysis,
        };
        if let Some(n) = defaults.grid_n {
            if n < 2 {
                return Err(schema_error(text, "grid_n", format!("must be at least 2, got {n}")));
            }
        }
        if let Some(t) = defaults.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(schema_error(text, "tol", format!("must be positive, got {t}")));
            }
        }
        let game = match spec {
            GameSpecFile::Finite {
                orientation,
                payoff1,
                payoff2,
                labels,
                ..
            } => {
                let mut g = FiniteBimatrixGame::new(payoff1, payoff2, *orientation)
                    .map_err(|e| schema_error(text, "payoff1", e))?;
                if let Some(l) = labels {
                    g = g
                        .with_labels(l.rows.clone(), l.cols.clone())
                        .map_err(|e| schema_error(text, "labels", e))?;
                }
                LoadedGame::Finite(g)
            }
            GameSpecFile::Coopetitive {
                orientation,
                p1,
                p2,
                c_grid,
                initial_z,
                ..
            } => {
                if *c_grid < 2 {
                    return Err(schema_error(text, "c_grid", format!("must be at least 2, got {c_grid}")));
                }
                let map = PayoffMap::new(Arity::Three, *p1, *p2).map_err(|e| schema_error(text, "p1", e))?;
                let grid = uniform_grid(*c_grid);
                // snap the initial point onto the grid so `0.5` works with odd sizes
                let z0 = match initial_z {
                    Some(z) => Some(
                        grid.iter()
                            .copied()
                            .find(|g| (g - z).abs() < 1e-12)
                            .ok_or_else(|| schema_error(text, "initial_z", format!("{z} is not a point of the cooperative grid")))?,
                    ),
                    None => None,
                };
                let g = CoopetitiveGame::new(map, *orientation, grid, z0).map_err(|e| schema_error(text, "c_grid", e))?;
                LoadedGame::Coopetitive(g)
            }
        };
        Ok(Self { game, defaults })
    }

    /// The game as a coopetitive one; `2 x 2` finite games become a single
    /// section through their mixed extension.
    pub fn coopetitive(&self) -> Result<CoopetitiveGame, ScenarioError> {
        match &self.game {
            LoadedGame::Coopetitive(g) => Ok(g.clone()),
            LoadedGame::Finite(g) => Ok(CoopetitiveGame::from_bimatrix(g)?),
        }
    }

    /// Whether payoff-space rows carry a `z` coordinate.
    pub fn has_cooperative_axis(&self) -> bool {
        matches!(self.game, LoadedGame::Coopetitive(_))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_kinds() {
        let finite = r#"{"kind":"finite","orientation":"gain","payoff1":[[4,0],[0,0]],"payoff2":[[2,3],[3,4]],
            "labels":{"rows":["E","N"],"cols":["H","L"]}}"#;
        let f = GameFile::parse(finite).unwrap();
        assert!(matches!(f.game, LoadedGame::Finite(ref g) if g.is_two_by_two()));
        let coop = r#"{"kind":"coopetitive","orientation":"loss","p1":{"xy":-4,"z":-1},
            "p2":{"x":1,"y":1,"z":-1},"c_grid":65,"initial_z":0,"analysis":{"grid_n":33}}"#;
        let c = GameFile::parse(coop).unwrap();
        assert_eq!(c.defaults.grid_n, Some(33));
        match c.game {
            LoadedGame::Coopetitive(g) => {
                assert_eq!(g.c_grid().len(), 65);
                assert_eq!(g.initial_z(), Some(0.0));
            }
            _ => panic!("expected coopetitive"),
        }
    }

    #[test]
    fn errors_are_line_anchored() {
        let ragged = "{\n \"kind\": \"finite\",\n \"orientation\": \"gain\",\n \"payoff1\": [[1, 2], [3]],\n \"payoff2\": [[1, 2], [3, 4]]\n}";
        let err = GameFile::parse(ragged).unwrap_err().to_string();
        assert!(err.starts_with("line 4:"), "{err}");
        let syntax = "{\n \"kind\": \"finite\",\n \"orientation\": \"gain\" \n \"payoff1\": []\n}";
        let err = GameFile::parse(syntax).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().starts_with("line 4"), "{err}");
        let unknown = r#"{"kind":"finite","orientation":"gain","payoff1":[[1]],"payoff2":[[1]],"extra":1}"#;
        assert!(GameFile::parse(unknown).is_err());
        let grid = "{\"kind\":\"coopetitive\",\"orientation\":\"loss\",\"p1\":{},\"p2\":{},\n\"c_grid\":1}";
        let err = GameFile::parse(grid).unwrap_err().to_string();
        assert!(err.contains("line 2: c_grid"), "{err}");
    }

    #[test]
    fn spec_roundtrip() {
        let spec = GameSpecFile::Coopetitive {
            orientation: Orientation::Loss,
            p1: Polynomial { xy: -4.0, z: -1.0, ..Default::default() },
            p2: Polynomial { x: 1.0, y: 1.0, z: -1.0, ..Default::default() },
            c_grid: 9,
            initial_z: Some(0.0),
            analysis: AnalysisDefaults::default(),
        };
        let back: GameSpecFile = serde_json::from_str(&spec.to_json()).unwrap();
        assert_eq!(back, spec);
    }
}

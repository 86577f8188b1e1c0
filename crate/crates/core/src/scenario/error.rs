use std::path::PathBuf;

use thiserror::Error;

use crate::bargaining::BargainingError;
use crate::coopetition::CoopetitionError;
use crate::game::GameError;
use crate::geometry::GeometryError;
use crate::mixed::MixedError;

#[derive(Debug, Error)]
pub enum ScenarioError {
    /// Malformed or schema-invalid game file, or bad flag values.
    #[error("{0}")]
    Parse(String),
    #[error("unsupported analysis: {0}")]
    Unsupported(String),
    /// A solver precondition failed: no intersection, empty feasible set, ...
    #[error("no solution: {0}")]
    Solver(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("check failed: {0}")]
    Assertion(String),
}

impl ScenarioError {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            ScenarioError::Parse(_) => 2,
            ScenarioError::Unsupported(_) => 3,
            ScenarioError::Solver(_) => 4,
            ScenarioError::Io { .. } => 5,
            ScenarioError::Assertion(_) => 1,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        ScenarioError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<BargainingError> for ScenarioError {
    fn from(e: BargainingError) -> Self {
        ScenarioError::Solver(e.to_string())
    }
}

impl From<MixedError> for ScenarioError {
    fn from(e: MixedError) -> Self {
        match e {
            MixedError::Game(GameError::NotTwoByTwo(..)) => ScenarioError::Unsupported(e.to_string()),
            other => ScenarioError::Parse(other.to_string()),
        }
    }
}

impl From<GeometryError> for ScenarioError {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::Game(GameError::NotTwoByTwo(..)) => ScenarioError::Unsupported(e.to_string()),
            other => ScenarioError::Parse(other.to_string()),
        }
    }
}

impl From<CoopetitionError> for ScenarioError {
    fn from(e: CoopetitionError) -> Self {
        match e {
            CoopetitionError::Bargaining(b) => b.into(),
            CoopetitionError::Mixed(m) => m.into(),
            CoopetitionError::Geometry(g) => g.into(),
            CoopetitionError::MissingInitial => ScenarioError::Unsupported(e.to_string()),
            CoopetitionError::SameHalfPlane { .. } | CoopetitionError::EmptyPortion(_) | CoopetitionError::EmptyCore => {
                ScenarioError::Solver(e.to_string())
            }
            other => ScenarioError::Parse(other.to_string()),
        }
    }
}

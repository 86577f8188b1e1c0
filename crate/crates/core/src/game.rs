//! Finite two-player bimatrix games.
//!
//! A game is a pair of equally shaped payoff matrices plus an [`Orientation`]
//! saying whether the entries are gains or losses. Everything here works for
//! arbitrary `m x n` games; the mixed extension in [`crate::mixed`] is limited
//! to the `2 x 2` case.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::point::{Orientation, PayoffPoint};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GameError {
    #[error("a game needs at least one row and one column")]
    Empty,
    #[error("payoff matrix for player {player} is not rectangular (row {row} has {found} entries, expected {expected})")]
    Ragged {
        player: u8,
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("payoff matrices differ in shape: {0}x{1} vs {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("payoff for player {player} at ({row}, {col}) is not finite")]
    NonFinite { player: u8, row: usize, col: usize },
    #[error("expected {expected} {axis} labels, found {found}")]
    LabelCount {
        axis: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("operation requires a 2x2 game, got {0}x{1}")]
    NotTwoByTwo(usize, usize),
    #[error("translation vector must be finite")]
    NonFiniteVector,
}

/// The two players of a bimatrix game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    /// Chooses the row.
    One,
    /// Chooses the column.
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strictness {
    Weak,
    Strict,
}

/// A pure strategy profile: a row for player one, a column for player two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StrategyCell {
    pub row: usize,
    pub col: usize,
}

impl StrategyCell {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }
}

/// Optional strategy names for both axes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyLabels {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteBimatrixGame {
    rows: usize,
    cols: usize,
    // row-major
    payoff1: Vec<f64>,
    payoff2: Vec<f64>,
    orientation: Orientation,
    labels: Option<StrategyLabels>,
}

fn flatten(player: u8, m: &[Vec<f64>]) -> Result<(usize, usize, Vec<f64>), GameError> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return Err(GameError::Empty);
    }
    let mut flat = Vec::with_capacity(rows * cols);
    for (row, r) in m.iter().enumerate() {
        if r.len() != cols {
            return Err(GameError::Ragged {
                player,
                row,
                found: r.len(),
                expected: cols,
            });
        }
        for (col, &v) in r.iter().enumerate() {
            if !v.is_finite() {
                return Err(GameError::NonFinite { player, row, col });
            }
            flat.push(v);
        }
    }
    Ok((rows, cols, flat))
}

impl FiniteBimatrixGame {
    pub fn new(
        payoff1: &[Vec<f64>],
        payoff2: &[Vec<f64>],
        orientation: Orientation,
    ) -> Result<Self, GameError> {
        let (r1, c1, payoff1) = flatten(1, payoff1)?;
        let (r2, c2, payoff2) = flatten(2, payoff2)?;
        if (r1, c1) != (r2, c2) {
            return Err(GameError::ShapeMismatch(r1, c1, r2, c2));
        }
        Ok(Self {
            rows: r1,
            cols: c1,
            payoff1,
            payoff2,
            orientation,
            labels: None,
        })
    }

    /// Builds a game from a matrix of payoff pairs, `cells[row][col] = (p1, p2)`.
    pub fn from_pairs(cells: &[Vec<(f64, f64)>], orientation: Orientation) -> Result<Self, GameError> {
        let p1: Vec<Vec<f64>> = cells.iter().map(|r| r.iter().map(|c| c.0).collect()).collect();
        let p2: Vec<Vec<f64>> = cells.iter().map(|r| r.iter().map(|c| c.1).collect()).collect();
        Self::new(&p1, &p2, orientation)
    }

    pub fn with_labels(mut self, rows: Vec<String>, cols: Vec<String>) -> Result<Self, GameError> {
        if rows.len() != self.rows {
            return Err(GameError::LabelCount {
                axis: "row",
                expected: self.rows,
                found: rows.len(),
            });
        }
        if cols.len() != self.cols {
            return Err(GameError::LabelCount {
                axis: "column",
                expected: self.cols,
                found: cols.len(),
            });
        }
        self.labels = Some(StrategyLabels { rows, cols });
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn labels(&self) -> Option<&StrategyLabels> {
        self.labels.as_ref()
    }

    pub fn is_two_by_two(&self) -> bool {
        self.rows == 2 && self.cols == 2
    }

    pub fn payoff(&self, cell: StrategyCell) -> PayoffPoint {
        let k = cell.row * self.cols + cell.col;
        PayoffPoint::new(self.payoff1[k], self.payoff2[k])
    }

    /// All cells in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = StrategyCell> + '_ {
        (0..self.rows).flat_map(move |row| (0..self.cols).map(move |col| StrategyCell::new(row, col)))
    }

    /// Player one's payoff matrix as nested rows.
    pub fn matrix1(&self) -> Vec<Vec<f64>> {
        self.payoff1.chunks(self.cols).map(<[f64]>::to_vec).collect()
    }

    /// Player two's payoff matrix as nested rows.
    pub fn matrix2(&self) -> Vec<Vec<f64>> {
        self.payoff2.chunks(self.cols).map(<[f64]>::to_vec).collect()
    }

    /// Human-readable name of a cell, e.g. `(E,L)`; falls back to indices.
    pub fn cell_name(&self, cell: StrategyCell) -> String {
        match &self.labels {
            Some(l) => format!("({},{})", l.rows[cell.row], l.cols[cell.col]),
            None => format!("({},{})", cell.row, cell.col),
        }
    }

    pub fn strategy_name(&self, player: Player, index: usize) -> String {
        match (&self.labels, player) {
            (Some(l), Player::One) => l.rows[index].clone(),
            (Some(l), Player::Two) => l.cols[index].clone(),
            (None, _) => index.to_string(),
        }
    }

    fn own(&self, player: Player, cell: StrategyCell) -> f64 {
        let p = self.payoff(cell);
        match player {
            Player::One => p.p1,
            Player::Two => p.p2,
        }
    }

    fn strategy_count(&self, player: Player) -> usize {
        match player {
            Player::One => self.rows,
            Player::Two => self.cols,
        }
    }

    fn opponent_count(&self, player: Player) -> usize {
        match player {
            Player::One => self.cols,
            Player::Two => self.rows,
        }
    }

    fn cell_for(player: Player, own: usize, other: usize) -> StrategyCell {
        match player {
            Player::One => StrategyCell::new(own, other),
            Player::Two => StrategyCell::new(other, own),
        }
    }

    /// Whether `own` is a (weak) best response of `player` to `other`.
    pub fn is_best_response(&self, player: Player, own: usize, other: usize) -> bool {
        let here = self.own(player, Self::cell_for(player, own, other));
        (0..self.strategy_count(player))
            .all(|alt| self.orientation.weakly_better(here, self.own(player, Self::cell_for(player, alt, other))))
    }

    /// Cells at which both strategies are weak best responses to each other,
    /// in row-major order.
    pub fn pure_nash_equilibria(&self) -> Vec<StrategyCell> {
        self.cells()
            .filter(|c| self.is_best_response(Player::One, c.row, c.col) && self.is_best_response(Player::Two, c.col, c.row))
            .collect()
    }

    /// Whether the cell is an equilibrium at which every deviation is strictly worse.
    pub fn is_strict_equilibrium(&self, cell: StrategyCell) -> bool {
        let o = self.orientation;
        let p = self.payoff(cell);
        let rows_ok = (0..self.rows)
            .filter(|&r| r != cell.row)
            .all(|r| o.better(p.p1, self.payoff(StrategyCell::new(r, cell.col)).p1));
        let cols_ok = (0..self.cols)
            .filter(|&c| c != cell.col)
            .all(|c| o.better(p.p2, self.payoff(StrategyCell::new(cell.row, c)).p2));
        rows_ok && cols_ok
    }

    /// Strategies of `player` that dominate every alternative.
    ///
    /// Weak dominance means "at least as good against every opponent
    /// strategy"; strict means "strictly better against every opponent
    /// strategy".
    pub fn dominant_strategies(&self, player: Player, strictness: Strictness) -> Vec<usize> {
        let o = self.orientation;
        let n = self.strategy_count(player);
        let m = self.opponent_count(player);
        (0..n)
            .filter(|&s| {
                (0..n).filter(|&t| t != s).all(|t| {
                    (0..m).all(|j| {
                        let a = self.own(player, Self::cell_for(player, s, j));
                        let b = self.own(player, Self::cell_for(player, t, j));
                        match strictness {
                            Strictness::Weak => o.weakly_better(a, b),
                            Strictness::Strict => o.better(a, b),
                        }
                    })
                })
            })
            .collect()
    }

    /// Each player's guaranteed payoff: max-min for gains, min-max for losses.
    pub fn conservative_bivalue(&self) -> PayoffPoint {
        let o = self.orientation;
        let guarantee = |player: Player| {
            (0..self.strategy_count(player))
                .map(|s| {
                    (0..self.opponent_count(player))
                        .map(|j| self.own(player, Self::cell_for(player, s, j)))
                        .reduce(|a, b| o.worst(a, b))
                        .expect("non-empty game")
                })
                .reduce(|a, b| o.best(a, b))
                .expect("non-empty game")
        };
        PayoffPoint::new(guarantee(Player::One), guarantee(Player::Two))
    }

    /// Shifts every payoff pair by `v`.
    pub fn translate(&self, v: PayoffPoint) -> Result<Self, GameError> {
        if !v.is_finite() {
            return Err(GameError::NonFiniteVector);
        }
        Ok(Self {
            payoff1: self.payoff1.iter().map(|a| a + v.p1).collect(),
            payoff2: self.payoff2.iter().map(|a| a + v.p2).collect(),
            ..self.clone()
        })
    }

    /// Negates every payoff and flips gain/loss; equilibria are unchanged.
    pub fn negate_orientation(&self) -> Self {
        Self {
            payoff1: self.payoff1.iter().map(|a| -a).collect(),
            payoff2: self.payoff2.iter().map(|a| -a).collect(),
            orientation: self.orientation.flipped(),
            ..self.clone()
        }
    }
}

impl fmt::Display for FiniteBimatrixGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in 0..self.rows {
            let name = self.strategy_name(Player::One, row);
            write!(f, "{name:>6} |")?;
            for col in 0..self.cols {
                let p = self.payoff(StrategyCell::new(row, col));
                write!(f, " ({}, {})", p.p1, p.p2)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

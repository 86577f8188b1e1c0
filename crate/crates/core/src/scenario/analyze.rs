use std::fmt::{self, Write as _};

use super::num::{pt, Num};
use super::solve::{Prepared, SolutionKind, SolveOutcome, SolveRequest};
use super::{GameFile, LoadedGame, ScenarioError, Settings};
use crate::coopetition::{
    family_roundtrip_check, induced_path, pareto_selected, section_game, PathQuantity, SetValuedPath,
};
use crate::game::{FiniteBimatrixGame, Player, StrategyCell, Strictness};
use crate::geometry::{extrema, Flavor, Polynomial, TUBoundary};
use crate::mixed::{conservative_bivalue_mixed, mixed_equilibrium_components, ComponentShape, EquilibriumComponent};
use crate::point::{Orientation, PayoffPoint};

/// Pure-strategy facts about a finite game.
#[derive(Debug, Clone, PartialEq)]
pub struct PureSummary {
    pub game: FiniteBimatrixGame,
    pub pure_nash: Vec<StrategyCell>,
    pub strict_nash: Vec<StrategyCell>,
    /// `[player one, player two]`, each as `(weakly, strictly)` dominant strategies.
    pub dominant: [(Vec<usize>, Vec<usize>); 2],
    pub pure_conservative: PayoffPoint,
}

impl PureSummary {
    pub fn new(game: &FiniteBimatrixGame) -> Self {
        let pure_nash = game.pure_nash_equilibria();
        let strict_nash = pure_nash.iter().copied().filter(|c| game.is_strict_equilibrium(*c)).collect();
        let dom = |p| {
            (
                game.dominant_strategies(p, Strictness::Weak),
                game.dominant_strategies(p, Strictness::Strict),
            )
        };
        Self {
            game: game.clone(),
            pure_nash,
            strict_nash,
            dominant: [dom(Player::One), dom(Player::Two)],
            pure_conservative: game.conservative_bivalue(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixedSummary {
    pub components: Vec<EquilibriumComponent>,
    pub conservative: PayoffPoint,
}

/// Sampled payoff-space geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceSummary {
    pub grid_n: usize,
    pub sample_count: usize,
    pub inf: PayoffPoint,
    pub sup: PayoffPoint,
    pub pareto_size: usize,
    pub pareto_ends: Option<(PayoffPoint, PayoffPoint)>,
    pub tu: TUBoundary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoopetitiveSummary {
    pub p1: Polynomial,
    pub p2: Polynomial,
    pub c_points: usize,
    pub initial_z: Option<f64>,
    pub roundtrip: bool,
    pub nash_zone_size: usize,
    pub nash_zone_extrema: (PayoffPoint, PayoffPoint),
    pub conservative_path: SetValuedPath,
    pub pareto_selected: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionEntry {
    pub kind: SolutionKind,
    /// The failure message when the solution does not exist with defaults.
    pub outcome: Result<SolveOutcome, String>,
}

/// Everything `analyze` prints, kept as data so tests can check each number
/// against a direct library call.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport {
    pub kind: &'static str,
    pub orientation: Orientation,
    /// Pure analysis of the finite game, or of the initial section.
    pub pure: Option<PureSummary>,
    pub mixed: Option<MixedSummary>,
    pub space: Option<SpaceSummary>,
    pub coopetitive: Option<CoopetitiveSummary>,
    pub solutions: Vec<SolutionEntry>,
}

/// Runs the analysis. Finite games that are not `2 x 2` need `pure_only`.
pub fn analyze(file: &GameFile, settings: &Settings, pure_only: bool) -> Result<AnalysisReport, ScenarioError> {
    match &file.game {
        LoadedGame::Finite(g) => {
            let pure = Some(PureSummary::new(g));
            let mut report = AnalysisReport {
                kind: "finite",
                orientation: g.orientation(),
                pure,
                mixed: None,
                space: None,
                coopetitive: None,
                solutions: Vec::new(),
            };
            if pure_only {
                return Ok(report);
            }
            if !g.is_two_by_two() {
                return Err(ScenarioError::Unsupported(format!(
                    "mixed analysis needs a 2x2 game, got {}x{}; rerun with --pure-only",
                    g.rows(),
                    g.cols()
                )));
            }
            let prepared = Prepared::from_file(file, settings)?;
            report.mixed = Some(MixedSummary {
                components: mixed_equilibrium_components(g)?,
                conservative: conservative_bivalue_mixed(g, prepared.grid_n)?,
            });
            report.space = Some(space_summary(&prepared)?);
            report.solutions = solutions(&prepared);
            Ok(report)
        }
        LoadedGame::Coopetitive(game) => {
            let prepared = Prepared::from_file(file, settings)?;
            let o = game.orientation();
            let pure = match game.initial_z() {
                Some(z0) => Some(PureSummary::new(&section_game(game, z0)?.bimatrix(o)?)),
                None => None,
            };
            let zone = prepared.nash_zone()?;
            let conservative_path = induced_path(game, PathQuantity::Conservative, prepared.grid_n)?;
            let (p1, p2) = game.payoff().components();
            let coop = CoopetitiveSummary {
                p1,
                p2,
                c_points: game.c_grid().len(),
                initial_z: game.initial_z(),
                roundtrip: family_roundtrip_check(game),
                nash_zone_size: zone.len(),
                nash_zone_extrema: extrema(&zone),
                pareto_selected: pareto_selected(&conservative_path, Flavor::for_orientation(o)),
                conservative_path,
            };
            Ok(AnalysisReport {
                kind: "coopetitive",
                orientation: o,
                pure,
                mixed: None,
                space: Some(space_summary(&prepared)?),
                coopetitive: Some(coop),
                solutions: solutions(&prepared),
            })
        }
    }
}

fn space_summary(p: &Prepared) -> Result<SpaceSummary, ScenarioError> {
    let pts = p.boundary.points();
    Ok(SpaceSummary {
        grid_n: p.grid_n,
        sample_count: p.cloud.len(),
        inf: p.inf,
        sup: p.sup,
        pareto_size: p.boundary.len(),
        pareto_ends: pts.first().zip(pts.last()).map(|(a, b)| (a.payoff, b.payoff)),
        tu: p.tu()?,
    })
}

fn solutions(p: &Prepared) -> Vec<SolutionEntry> {
    SolutionKind::ALL
        .into_iter()
        .map(|kind| SolutionEntry {
            kind,
            outcome: p.solve(&SolveRequest::new(kind)).map_err(|e| e.to_string()),
        })
        .collect()
}

fn poly(p: &Polynomial) -> String {
    let terms = [(p.constant, ""), (p.x, "x"), (p.y, "y"), (p.z, "z"), (p.xy, "xy")];
    let mut out = String::new();
    for (c, name) in terms.into_iter().filter(|(c, _)| *c != 0.0) {
        let sign = if c < 0.0 { "-" } else { "+" };
        let mag = c.abs();
        let body = match (mag == 1.0, name.is_empty()) {
            (true, false) => name.to_string(),
            _ => format!("{mag}{name}"),
        };
        if out.is_empty() {
            out = if c < 0.0 { format!("-{body}") } else { body };
        } else {
            let _ = write!(out, " {sign} {body}");
        }
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}

fn cells(game: &FiniteBimatrixGame, cells: &[StrategyCell]) -> String {
    if cells.is_empty() {
        return "none".to_string();
    }
    cells.iter().map(|c| game.cell_name(*c)).collect::<Vec<_>>().join(", ")
}

fn strategies(game: &FiniteBimatrixGame, player: Player, idx: &[usize]) -> String {
    if idx.is_empty() {
        return "none".to_string();
    }
    idx.iter().map(|i| game.strategy_name(player, *i)).collect::<Vec<_>>().join(", ")
}

fn shape(s: ComponentShape) -> &'static str {
    match s {
        ComponentShape::IsolatedPoint => "point",
        ComponentShape::Segment => "segment",
        ComponentShape::Rectangle => "rectangle",
    }
}

fn write_pure(f: &mut fmt::Formatter<'_>, s: &PureSummary) -> fmt::Result {
    let g = &s.game;
    let header: Vec<_> = (0..g.cols()).map(|c| g.strategy_name(Player::Two, c)).collect();
    writeln!(f, "  table ({}x{}): columns {}", g.rows(), g.cols(), header.join(", "))?;
    for line in g.to_string().lines() {
        writeln!(f, "  {line}")?;
    }
    writeln!(f, "  pure nash equilibria: {}", cells(g, &s.pure_nash))?;
    writeln!(f, "  strict nash equilibria: {}", cells(g, &s.strict_nash))?;
    for (i, player) in [Player::One, Player::Two].into_iter().enumerate() {
        let (weak, strict) = &s.dominant[i];
        writeln!(
            f,
            "  player {} dominant strategies: weak {}; strict {}",
            i + 1,
            strategies(g, player, weak),
            strategies(g, player, strict)
        )?;
    }
    writeln!(f, "  pure conservative bi-value: {}", pt(s.pure_conservative))
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "game: {}, orientation {}", self.kind, self.orientation)?;
        if let Some(c) = &self.coopetitive {
            writeln!(f, "coopetitive game:")?;
            writeln!(f, "  p1 = {}", poly(&c.p1))?;
            writeln!(f, "  p2 = {}", poly(&c.p2))?;
            let z0 = c.initial_z.map_or_else(|| "none".to_string(), |z| Num(z).to_string());
            writeln!(f, "  c_grid: {} points, initial z: {}", c.c_points, z0)?;
            writeln!(f, "  family roundtrip: {}", c.roundtrip)?;
        }
        if let Some(p) = &self.pure {
            let title = if self.coopetitive.is_some() { "initial section" } else { "pure strategies" };
            writeln!(f, "{title}:")?;
            write_pure(f, p)?;
        }
        if let Some(m) = &self.mixed {
            writeln!(f, "mixed extension:")?;
            for (i, c) in m.components.iter().enumerate() {
                let (x0, x1, y0, y1) = c.bounds();
                let payoffs: Vec<_> = c.payoff_extremes.iter().map(|p| pt(*p)).collect();
                writeln!(
                    f,
                    "  equilibrium component {}: {} x in [{}, {}], y in [{}, {}]; payoffs {}",
                    i + 1,
                    shape(c.shape),
                    Num(x0),
                    Num(x1),
                    Num(y0),
                    Num(y1),
                    payoffs.join(" ")
                )?;
            }
            writeln!(f, "  mixed conservative bi-value: {}", pt(m.conservative))?;
        }
        if let Some(s) = &self.space {
            writeln!(f, "payoff space (grid {}, {} samples):", s.grid_n, s.sample_count)?;
            writeln!(f, "  extrema: inf {} sup {}", pt(s.inf), pt(s.sup))?;
            match s.pareto_ends {
                Some((a, b)) => writeln!(f, "  pareto boundary: {} points from {} to {}", s.pareto_size, pt(a), pt(b))?,
                None => writeln!(f, "  pareto boundary: empty")?,
            }
            let (a, b) = s.tu.segment_ends;
            writeln!(
                f,
                "  tu boundary: p1 + p2 = {}, segment {} to {}, {} witnesses",
                Num(s.tu.optimal_sum),
                pt(a),
                pt(b),
                s.tu.witnesses.len()
            )?;
        }
        if let Some(c) = &self.coopetitive {
            let (lo, hi) = c.nash_zone_extrema;
            writeln!(f, "nash zone: {} samples, inf {} sup {}", c.nash_zone_size, pt(lo), pt(hi))?;
            let path = &c.conservative_path.samples;
            if let (Some(first), Some(last)) = (path.first(), path.last()) {
                writeln!(
                    f,
                    "conservative path: z={} {} .. z={} {}",
                    Num(first.z),
                    pt(first.points[0]),
                    Num(last.z),
                    pt(last.points[0])
                )?;
            }
            let zs: Vec<_> = c.pareto_selected.iter().map(|z| Num(*z).to_string()).collect();
            writeln!(f, "pareto-selected z (conservative path): {}", zs.join(", "))?;
        }
        if !self.solutions.is_empty() {
            writeln!(f, "solutions:")?;
            for s in &self.solutions {
                match &s.outcome {
                    Ok(o) => writeln!(
                        f,
                        "  {}: payoff {} a {} b {} residual {}",
                        s.kind,
                        pt(o.solution.payoff),
                        o.solution.threat.map_or_else(|| "n/a".into(), pt),
                        o.solution.utopia.map_or_else(|| "n/a".into(), pt),
                        Num(o.solution.residual)
                    )?,
                    Err(e) => writeln!(f, "  {}: n/a ({e})", s.kind)?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_text() {
        let p = Polynomial { xy: -4.0, z: -1.0, ..Default::default() };
        assert_eq!(poly(&p), "-z - 4xy");
        let q = Polynomial { constant: 2.5, x: 1.0, ..Default::default() };
        assert_eq!(poly(&q), "2.5 + x");
        assert_eq!(poly(&Polynomial::default()), "0");
    }
}

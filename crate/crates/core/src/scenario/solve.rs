use std::fmt;
use std::str::FromStr;

use super::num::{pt, Num};
use super::{GameFile, ScenarioError, Settings};
use crate::bargaining::{
    compromise_solution, ks_solution, nash_bargaining, BargainingProblem, CompromiseKind, SolutionPoint,
};
use crate::coopetition::{
    induced_path, nash_zone, payoff_space, proper_coopetitive_solution, section_game, standard_win_win_solution,
    tu_crossing, win_win_report, CoopetitionError, CoopetitiveGame, PathQuantity, WinWinReport,
};
use crate::geometry::{extrema, pareto_filter, tu_boundary, DomainPoint, Flavor, ParetoBoundary, PointCloud, TUBoundary};
use crate::mixed::conservative_bivalue_mixed;
use crate::point::PayoffPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionKind {
    Ks,
    NashBargaining,
    Tu,
    ProperCoopetitive,
    WinWin,
    Compromise(CompromiseKind),
}

impl SolutionKind {
    pub const ALL: [SolutionKind; 8] = [
        SolutionKind::Ks,
        SolutionKind::NashBargaining,
        SolutionKind::Tu,
        SolutionKind::Compromise(CompromiseKind::Pareto),
        SolutionKind::Compromise(CompromiseKind::NashPareto),
        SolutionKind::Compromise(CompromiseKind::ConservativePareto),
        SolutionKind::ProperCoopetitive,
        SolutionKind::WinWin,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            SolutionKind::Ks => "ks",
            SolutionKind::NashBargaining => "nash-bargaining",
            SolutionKind::Tu => "tu",
            SolutionKind::ProperCoopetitive => "proper-coopetitive",
            SolutionKind::WinWin => "win-win",
            SolutionKind::Compromise(k) => k.method().tag(),
        }
    }
}

impl fmt::Display for SolutionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for SolutionKind {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SolutionKind::ALL
            .into_iter()
            .find(|k| k.tag() == s)
            .ok_or_else(|| {
                let names: Vec<_> = SolutionKind::ALL.iter().map(|k| k.tag()).collect();
                ScenarioError::Parse(format!("unknown solution {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

/// Parses `"p1,p2"`.
pub fn parse_point(s: &str) -> Result<PayoffPoint, ScenarioError> {
    let bad = || ScenarioError::Parse(format!("expected a point \"p1,p2\", got {s:?}"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    let p = PayoffPoint::new(a, b);
    if !p.is_finite() {
        return Err(bad());
    }
    Ok(p)
}

/// Which solution to compute, with optional overrides of its reference points.
///
/// Defaults when a point is not given:
/// - threat `a`: mixed conservative bi-value of the initial section
///   (`ks`, `nash-bargaining`, `tu`);
/// - utopia `b`: best corner of the payoff-space extrema (`ks`, `tu`);
/// - `compromise:nash-pareto` threat: componentwise sup of the Nash zone;
/// - `compromise:conservative-pareto` threat: componentwise sup of the
///   conservative path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveRequest {
    pub kind: SolutionKind,
    pub threat: Option<PayoffPoint>,
    pub utopia: Option<PayoffPoint>,
}

impl SolveRequest {
    pub fn new(kind: SolutionKind) -> Self {
        Self {
            kind,
            threat: None,
            utopia: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    pub kind: SolutionKind,
    pub solution: SolutionPoint,
    pub win_win: Option<WinWinReport>,
    pub grid_n: usize,
    pub tol: f64,
}

pub(crate) fn fmt_preimage(p: Option<DomainPoint>) -> String {
    match p {
        None => "n/a".to_string(),
        Some(d) => match d.z {
            Some(z) => format!("x={}, y={}, z={}", Num(d.x), Num(d.y), Num(z)),
            None => format!("x={}, y={}", Num(d.x), Num(d.y)),
        },
    }
}

fn fmt_opt(p: Option<PayoffPoint>) -> String {
    p.map_or_else(|| "n/a".to_string(), pt)
}

impl fmt::Display for SolveOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.solution;
        writeln!(f, "solution: {}", self.kind)?;
        writeln!(f, "method: {}", s.method)?;
        writeln!(f, "payoff: {}", pt(s.payoff))?;
        writeln!(f, "preimage: {}", fmt_preimage(s.preimage))?;
        writeln!(f, "residual: {}", Num(s.residual))?;
        writeln!(f, "threat a: {}", fmt_opt(s.threat))?;
        writeln!(f, "utopia b: {}", fmt_opt(s.utopia))?;
        if let Some(w) = &self.win_win {
            writeln!(f, "core sup L: {}", pt(w.core_sup))?;
            writeln!(f, "margin: {}", pt(w.margin))?;
            writeln!(f, "is_win_win: {}", w.is_win_win)?;
        }
        writeln!(f, "grid: {}, tol: {}", self.grid_n, self.tol)
    }
}

/// Shared sampled objects for one game, computed once per command.
pub(crate) struct Prepared {
    pub game: CoopetitiveGame,
    pub grid_n: usize,
    pub tol: f64,
    pub cloud: PointCloud,
    pub boundary: ParetoBoundary,
    pub inf: PayoffPoint,
    pub sup: PayoffPoint,
}

impl Prepared {
    pub fn new(game: CoopetitiveGame, grid_n: usize, tol: f64) -> Result<Self, ScenarioError> {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(ScenarioError::Parse(format!("tolerance must be positive, got {tol}")));
        }
        let cloud = payoff_space(&game, grid_n)?;
        let o = game.orientation();
        let boundary = pareto_filter(&cloud, o, Flavor::for_orientation(o));
        let (inf, sup) = extrema(&cloud);
        Ok(Self {
            game,
            grid_n,
            tol,
            cloud,
            boundary,
            inf,
            sup,
        })
    }

    pub fn from_file(file: &GameFile, settings: &Settings) -> Result<Self, ScenarioError> {
        Self::new(file.coopetitive()?, settings.grid_for(file), settings.tol_for(file))
    }

    pub fn utopia(&self) -> PayoffPoint {
        self.game.orientation().best_corner(self.inf, self.sup)
    }

    /// Mixed conservative bi-value of the initial section.
    pub fn initial_conservative(&self) -> Result<PayoffPoint, ScenarioError> {
        let z0 = self.game.initial_z().ok_or(CoopetitionError::MissingInitial)?;
        let section = section_game(&self.game, z0)?;
        Ok(conservative_bivalue_mixed(
            &section.bimatrix(self.game.orientation()).map_err(ScenarioError::from)?,
            self.grid_n,
        )?)
    }

    pub fn tu(&self) -> Result<TUBoundary, ScenarioError> {
        Ok(tu_boundary(&self.cloud, self.game.orientation(), self.tol)?)
    }

    pub fn nash_zone(&self) -> Result<PointCloud, ScenarioError> {
        Ok(nash_zone(&self.game, self.grid_n)?)
    }

    pub fn nash_zone_sup(&self) -> Result<PayoffPoint, ScenarioError> {
        Ok(extrema(&self.nash_zone()?).1)
    }

    pub fn conservative_sup(&self) -> Result<PayoffPoint, ScenarioError> {
        let path = induced_path(&self.game, PathQuantity::Conservative, self.grid_n)?;
        Ok(path.extrema().expect("c_grid is non-empty").1)
    }

    pub fn solve(&self, req: &SolveRequest) -> Result<SolveOutcome, ScenarioError> {
        let o = self.game.orientation();
        let threat = || req.threat.map_or_else(|| self.initial_conservative(), Ok);
        let utopia = req.utopia.unwrap_or_else(|| self.utopia());
        let mut win_win = None;
        let solution = match req.kind {
            SolutionKind::Ks => {
                let problem = BargainingProblem::new(self.boundary.clone(), threat()?, utopia)?;
                ks_solution(&problem, self.tol)?
            }
            SolutionKind::NashBargaining => nash_bargaining(&self.boundary, threat()?, o)?,
            SolutionKind::Tu => tu_crossing(&self.tu()?, threat()?, utopia, self.tol)?,
            SolutionKind::Compromise(kind) => {
                let nash_extreme = match (kind, req.threat) {
                    (CompromiseKind::NashPareto, None) => Some(self.nash_zone_sup()?),
                    _ => req.threat,
                };
                let conservative = match (kind, req.threat) {
                    (CompromiseKind::ConservativePareto, None) => Some(self.conservative_sup()?),
                    _ => req.threat,
                };
                compromise_solution(kind, &self.boundary, nash_extreme, conservative, self.tol)?
            }
            SolutionKind::ProperCoopetitive => proper_coopetitive_solution(&self.game, self.grid_n, self.tol)?,
            SolutionKind::WinWin => {
                let s = standard_win_win_solution(&self.game, self.grid_n, self.tol)?;
                win_win = Some(win_win_report(&self.game, s.clone(), self.grid_n)?);
                s
            }
        };
        Ok(SolveOutcome {
            kind: req.kind,
            solution,
            win_win,
            grid_n: self.grid_n,
            tol: self.tol,
        })
    }
}

/// Solves `req` for a parsed game file.
pub fn solve(file: &GameFile, req: &SolveRequest, settings: &Settings) -> Result<SolveOutcome, ScenarioError> {
    Prepared::from_file(file, settings)?.solve(req)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_roundtrip() {
        for k in SolutionKind::ALL {
            assert_eq!(k.tag().parse::<SolutionKind>().unwrap(), k);
        }
        assert!("kalai".parse::<SolutionKind>().is_err());
    }

    #[test]
    fn points() {
        assert_eq!(parse_point("-5, -1").unwrap(), PayoffPoint::new(-5.0, -1.0));
        assert!(parse_point("1").is_err());
        assert!(parse_point("a,1").is_err());
        assert!(parse_point("inf,1").is_err());
    }
}

//! Two-player coopetitive games.
//!
//! A coopetitive game has a payoff map `f(x, y, z)` where `x` and `y` are the
//! players' own (competitive) strategies and `z` is a strategy they choose
//! together. Freezing `z` gives an ordinary section game; the game is the
//! `z`-indexed family of those sections, and the solution concepts here work
//! on quantities induced along that family: Nash payoffs, conservative
//! values, extrema, and the collective optimum.
//!
//! The cooperative axis is sampled by `c_grid`; every path and zone below is
//! a sampled family.

use thiserror::Error;

use crate::bargaining::{
    ks_solution, payoff_core, BargainingError, BargainingProblem, SolutionMethod, SolutionPoint,
};
use crate::game::FiniteBimatrixGame;
use crate::geometry::{
    extrema, pareto_filter, sample_image, tu_boundary, Arity, DomainPoint, Flavor, GeometryError, ParetoBoundary,
    PayoffMap, PointCloud, TUBoundary, TaggedPoint,
};
use crate::mixed::{conservative_bivalue_mixed, mixed_equilibrium_components, MixedError};
use crate::point::{Orientation, PayoffPoint};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoopetitionError {
    #[error("coopetitive payoff map must take (x, y, z)")]
    NotThreeArguments,
    #[error("cooperative grid is empty")]
    EmptyCGrid,
    #[error("cooperative grid must be sorted, distinct and inside [0, 1]")]
    BadCGrid,
    #[error("initial z = {0} is not a point of the cooperative grid")]
    InitialNotInGrid(f64),
    #[error("z = {0} is outside [0, 1]")]
    ZOutOfRange(f64),
    #[error("game has no initial cooperative strategy")]
    MissingInitial,
    #[error("threat {a} and utopia {b} lie on the same side of the line p1 + p2 = {sum}")]
    SameHalfPlane { a: PayoffPoint, b: PayoffPoint, sum: f64 },
    #[error("no transferable-utility point improves on {0}")]
    EmptyPortion(PayoffPoint),
    #[error("payoff core of the initial game is empty")]
    EmptyCore,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Mixed(#[from] MixedError),
    #[error(transparent)]
    Bargaining(#[from] BargainingError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoopetitiveGame {
    payoff: PayoffMap,
    orientation: Orientation,
    c_grid: Vec<f64>,
    initial_z: Option<f64>,
}

/// Uniform samples of `[0, 1]`; a single sample sits at `0`.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|i| i as f64 / (n - 1) as f64).collect(),
    }
}

impl CoopetitiveGame {
    pub fn new(
        payoff: PayoffMap,
        orientation: Orientation,
        c_grid: Vec<f64>,
        initial_z: Option<f64>,
    ) -> Result<Self, CoopetitionError> {
        if payoff.arity() != Arity::Three {
            return Err(CoopetitionError::NotThreeArguments);
        }
        if c_grid.is_empty() {
            return Err(CoopetitionError::EmptyCGrid);
        }
        let in_range = c_grid.iter().all(|z| (0.0..=1.0).contains(z));
        let increasing = c_grid.windows(2).all(|w| w[0] < w[1]);
        if !in_range || !increasing {
            return Err(CoopetitionError::BadCGrid);
        }
        if let Some(z0) = initial_z {
            if !c_grid.contains(&z0) {
                return Err(CoopetitionError::InitialNotInGrid(z0));
            }
        }
        Ok(Self {
            payoff,
            orientation,
            c_grid,
            initial_z,
        })
    }

    /// Game with `c_points` uniform cooperative samples.
    pub fn uniform(
        payoff: PayoffMap,
        orientation: Orientation,
        c_points: usize,
        initial_z: Option<f64>,
    ) -> Result<Self, CoopetitionError> {
        Self::new(payoff, orientation, uniform_grid(c_points), initial_z)
    }

    /// A `2 x 2` game seen as a coopetitive game with the single section `z = 0`.
    pub fn from_bimatrix(game: &FiniteBimatrixGame) -> Result<Self, CoopetitionError> {
        let (p1, p2) = PayoffMap::from_bimatrix(game)?.components();
        let map = PayoffMap::new(Arity::Three, p1, p2)?;
        Self::new(map, game.orientation(), vec![0.0], Some(0.0))
    }

    pub fn payoff(&self) -> &PayoffMap {
        &self.payoff
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn c_grid(&self) -> &[f64] {
        &self.c_grid
    }

    pub fn initial_z(&self) -> Option<f64> {
        self.initial_z
    }

    pub fn sections(&self) -> Vec<SectionGame> {
        self.c_grid
            .iter()
            .map(|&z| SectionGame {
                z,
                map: self.payoff.fix_z(z),
            })
            .collect()
    }

    /// Grid step of clouds sampled over both the lattice and `c_grid`.
    fn zone_step(&self, grid_n: usize) -> f64 {
        let lattice = 1.0 / (grid_n.max(2) - 1) as f64;
        self.c_grid.windows(2).map(|w| w[1] - w[0]).fold(lattice, f64::max)
    }
}

/// The normal-form game obtained by freezing the cooperative strategy.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionGame {
    pub z: f64,
    pub map: PayoffMap,
}

impl SectionGame {
    /// The `2 x 2` game whose mixed extension is this section.
    pub fn bimatrix(&self, orientation: Orientation) -> Result<FiniteBimatrixGame, CoopetitionError> {
        Ok(self.map.to_bimatrix(orientation)?)
    }
}

/// Image of the game: `grid_n x grid_n` bistrategy lattice times `c_grid`,
/// ordered lexicographically by `(x, y, z)`.
pub fn payoff_space(game: &CoopetitiveGame, grid_n: usize) -> Result<PointCloud, CoopetitionError> {
    if grid_n < 2 {
        return Err(GeometryError::GridTooSmall(grid_n).into());
    }
    let axis = uniform_grid(grid_n);
    let mut points = Vec::with_capacity(grid_n * grid_n * game.c_grid.len());
    for &x in &axis {
        for &y in &axis {
            for &z in &game.c_grid {
                points.push(TaggedPoint::new(game.payoff.eval_xyz(x, y, z), DomainPoint::xyz(x, y, z)));
            }
        }
    }
    Ok(PointCloud::new(points, game.zone_step(grid_n))?)
}

pub fn section_game(game: &CoopetitiveGame, z: f64) -> Result<SectionGame, CoopetitionError> {
    if !(0.0..=1.0).contains(&z) {
        return Err(CoopetitionError::ZOutOfRange(z));
    }
    Ok(SectionGame {
        z,
        map: game.payoff.fix_z(z),
    })
}

const ROUNDTRIP_LATTICE: usize = 17;
const ROUNDTRIP_TOL: f64 = 1e-12;

/// Checks that `sections` reassemble the game: one section per `c_grid`
/// point, and `section(z)(x, y) = f(x, y, z)` on an `n x n` lattice.
pub fn roundtrip_check(game: &CoopetitiveGame, sections: &[SectionGame], lattice_n: usize) -> bool {
    if sections.len() != game.c_grid.len() || sections.iter().zip(&game.c_grid).any(|(s, z)| s.z != *z) {
        return false;
    }
    let axis = uniform_grid(lattice_n.max(2));
    sections.iter().all(|s| {
        axis.iter().all(|&x| {
            axis.iter().all(|&y| {
                let rebuilt = s.map.eval_xyz(x, y, 0.0);
                rebuilt.max_abs_diff(game.payoff.eval_xyz(x, y, s.z)) <= ROUNDTRIP_TOL
            })
        })
    })
}

/// Discrete witness that the family of sections determines the game.
pub fn family_roundtrip_check(game: &CoopetitiveGame) -> bool {
    roundtrip_check(game, &game.sections(), ROUNDTRIP_LATTICE)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PathQuantity {
    NashPayoffs,
    Supremum,
    Infimum,
    Conservative,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathSample {
    pub z: f64,
    pub points: Vec<PayoffPoint>,
}

/// A set-valued function of the cooperative strategy, sampled on `c_grid`.
#[derive(Debug, Clone, PartialEq)]
pub struct SetValuedPath {
    pub quantity: PathQuantity,
    pub samples: Vec<PathSample>,
}

impl SetValuedPath {
    /// All points of all samples.
    pub fn trajectory(&self) -> Vec<PayoffPoint> {
        self.samples.iter().flat_map(|s| s.points.iter().copied()).collect()
    }

    /// Componentwise `(inf, sup)` of the trajectory.
    pub fn extrema(&self) -> Option<(PayoffPoint, PayoffPoint)> {
        let all = self.trajectory();
        let first = *all.first()?;
        Some(all.iter().fold((first, first), |(lo, hi), p| (lo.component_min(*p), hi.component_max(*p))))
    }
}

/// Nash equilibria of a section, sampled, with preimages `(x, y, z)`.
fn section_nash_points(game: &CoopetitiveGame, section: &SectionGame, grid_n: usize) -> Result<Vec<TaggedPoint>, CoopetitionError> {
    let bimatrix = section.bimatrix(game.orientation)?;
    let mut out = Vec::new();
    for component in mixed_equilibrium_components(&bimatrix)? {
        for s in component.sample(grid_n) {
            let payoff = game.payoff.eval_xyz(s.x, s.y, section.z);
            out.push(TaggedPoint::new(payoff, DomainPoint::xyz(s.x, s.y, section.z)));
        }
    }
    Ok(out)
}

/// Evaluates a section quantity at every `c_grid` point.
pub fn induced_path(game: &CoopetitiveGame, quantity: PathQuantity, grid_n: usize) -> Result<SetValuedPath, CoopetitionError> {
    if grid_n < 2 {
        return Err(GeometryError::GridTooSmall(grid_n).into());
    }
    let samples = game
        .sections()
        .iter()
        .map(|section| {
            let points = match quantity {
                PathQuantity::NashPayoffs => section_nash_points(game, section, grid_n)?
                    .into_iter()
                    .map(|p| p.payoff)
                    .collect(),
                PathQuantity::Supremum => vec![extrema(&sample_image(&section.map, grid_n)?).1],
                PathQuantity::Infimum => vec![extrema(&sample_image(&section.map, grid_n)?).0],
                PathQuantity::Conservative => {
                    vec![conservative_bivalue_mixed(&section.bimatrix(game.orientation)?, grid_n)?]
                }
            };
            Ok(PathSample { z: section.z, points })
        })
        .collect::<Result<Vec<_>, CoopetitionError>>()?;
    Ok(SetValuedPath { quantity, samples })
}

/// `z` values of the path at which some sample point is not dominated by any
/// point of the whole trajectory.
pub fn pareto_selected(path: &SetValuedPath, flavor: Flavor) -> Vec<f64> {
    let all = path.trajectory();
    path.samples
        .iter()
        .filter(|s| s.points.iter().any(|p| !all.iter().any(|q| flavor.dominates(*q, *p))))
        .map(|s| s.z)
        .collect()
}

/// Union over `c_grid` of the sections' Nash payoff sets.
pub fn nash_zone(game: &CoopetitiveGame, grid_n: usize) -> Result<PointCloud, CoopetitionError> {
    if grid_n < 2 {
        return Err(GeometryError::GridTooSmall(grid_n).into());
    }
    let mut points = Vec::new();
    for section in game.sections() {
        points.extend(section_nash_points(game, &section, grid_n)?);
    }
    Ok(PointCloud::new(points, game.zone_step(grid_n))?)
}

fn single(point: TaggedPoint, method: SolutionMethod) -> SolutionPoint {
    SolutionPoint {
        payoff: point.payoff,
        preimage: Some(point.preimage),
        method,
        residual: 0.0,
        threat: Some(point.payoff),
        utopia: Some(point.payoff),
    }
}

/// Kalai-Smorodinsky solution on the Pareto boundary of the Nash zone,
/// between the boundary's worst and best corners.
pub fn proper_coopetitive_solution(game: &CoopetitiveGame, grid_n: usize, tol: f64) -> Result<SolutionPoint, CoopetitionError> {
    let zone = nash_zone(game, grid_n)?;
    let o = game.orientation;
    let best = pareto_filter(&zone, o, Flavor::for_orientation(o));
    if best.len() == 1 {
        return Ok(single(best.points()[0], SolutionMethod::ProperCoopetitive));
    }
    let (inf, sup) = best.extrema().expect("non-empty zone");
    let problem = BargainingProblem::new(best, o.worst_corner(inf, sup), o.best_corner(inf, sup))?;
    Ok(ks_solution(&problem, tol)?.with_method(SolutionMethod::ProperCoopetitive))
}

/// Crossing of the segment `[a, b]` with the transferable-utility segment.
pub fn tu_crossing(tu: &TUBoundary, a: PayoffPoint, b: PayoffPoint, tol: f64) -> Result<SolutionPoint, CoopetitionError> {
    if !(tol > 0.0) {
        return Err(BargainingError::NonPositiveTolerance(tol).into());
    }
    if !tu.orientation.strictly_better_point(b, a) {
        return Err(BargainingError::NotOrdered { threat: a, utopia: b }.into());
    }
    let (ga, gb) = (tu.offset(a), tu.offset(b));
    // closed half-planes: one end may sit on the line, not both
    if ga * gb > 0.0 || (ga == 0.0 && gb == 0.0) {
        return Err(CoopetitionError::SameHalfPlane { a, b, sum: tu.optimal_sum });
    }
    let crossing = PayoffPoint::lerp(a, b, ga / (ga - gb));
    let payoff = tu.nearest_point(crossing);
    let residual = payoff.distance(crossing);
    if residual > tol {
        return Err(BargainingError::NoIntersection { distance: residual, tol }.into());
    }
    Ok(SolutionPoint {
        payoff,
        preimage: tu.witnesses.first().map(|w| w.preimage),
        method: SolutionMethod::TransferableUtility,
        residual,
        threat: Some(a),
        utopia: Some(b),
    })
}

/// Transferable-utility compromise between `a` and `b`. The preimage is a
/// profile reaching the collective optimum; the split itself needs side
/// payments.
pub fn tu_compromise_solution(
    game: &CoopetitiveGame,
    a: PayoffPoint,
    b: PayoffPoint,
    grid_n: usize,
    tol: f64,
) -> Result<SolutionPoint, CoopetitionError> {
    let tu = tu_boundary(&payoff_space(game, grid_n)?, game.orientation, tol)?;
    tu_crossing(&tu, a, b, tol)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WinWinReport {
    /// Componentwise supremum of the initial game's payoff core.
    pub core_sup: PayoffPoint,
    pub candidate: SolutionPoint,
    pub is_win_win: bool,
    /// Improvement of the candidate over `core_sup`, positive when better.
    pub margin: PayoffPoint,
}

/// Payoff core of the initial section: its best Pareto boundary cut by the
/// section's conservative bi-value.
pub fn initial_core(game: &CoopetitiveGame, grid_n: usize) -> Result<ParetoBoundary, CoopetitionError> {
    let z0 = game.initial_z.ok_or(CoopetitionError::MissingInitial)?;
    let section = section_game(game, z0)?;
    let o = game.orientation;
    let cloud = sample_image(&section.map, grid_n)?;
    let boundary = pareto_filter(&cloud, o, Flavor::for_orientation(o));
    let conservative = conservative_bivalue_mixed(&section.bimatrix(o)?, grid_n)?;
    let core = payoff_core(&boundary, conservative)?;
    if core.is_empty() {
        return Err(CoopetitionError::EmptyCore);
    }
    Ok(core)
}

/// The point `L`: componentwise supremum of the initial game's payoff core.
pub fn core_supremum(game: &CoopetitiveGame, grid_n: usize) -> Result<PayoffPoint, CoopetitionError> {
    let core = initial_core(game, grid_n)?;
    Ok(core.extrema().expect("non-empty core").1)
}

pub fn win_win_report(game: &CoopetitiveGame, candidate: SolutionPoint, grid_n: usize) -> Result<WinWinReport, CoopetitionError> {
    let core_sup = core_supremum(game, grid_n)?;
    let margin = (core_sup - candidate.payoff).scale(-game.orientation.sign()) + PayoffPoint::ZERO;
    Ok(WinWinReport {
        core_sup,
        is_win_win: margin.p1 > 0.0 && margin.p2 > 0.0,
        candidate,
        margin,
    })
}

/// Transferable-utility compromise from `L` toward the best corner of the
/// part of the TU boundary that improves on `L`.
pub fn standard_win_win_solution(game: &CoopetitiveGame, grid_n: usize, tol: f64) -> Result<SolutionPoint, CoopetitionError> {
    let a = core_supremum(game, grid_n)?;
    let o = game.orientation;
    let tu = tu_boundary(&payoff_space(game, grid_n)?, o, tol)?;
    if !o.better(tu.optimal_sum, a.sum()) {
        return Err(CoopetitionError::EmptyPortion(a));
    }
    let (e0, e1) = tu.portion_better_than(a).ok_or(CoopetitionError::EmptyPortion(a))?;
    let b = o.best_corner(e0.component_min(e1), e0.component_max(e1));
    Ok(tu_crossing(&tu, a, b, tol)?.with_method(SolutionMethod::StandardWinWin))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Polynomial;

    fn entry_f() -> PayoffMap {
        PayoffMap::new(
            Arity::Three,
            Polynomial { xy: -4.0, z: -1.0, ..Default::default() },
            Polynomial { x: 1.0, y: 1.0, z: -1.0, ..Default::default() },
        )
        .unwrap()
    }

    fn game(c_points: usize) -> CoopetitiveGame {
        CoopetitiveGame::uniform(entry_f(), Orientation::Loss, c_points, Some(0.0)).unwrap()
    }

    #[test]
    fn construction_errors() {
        let two = entry_f().fix_z(0.0);
        assert_eq!(
            CoopetitiveGame::new(two, Orientation::Loss, vec![0.0], None).unwrap_err(),
            CoopetitionError::NotThreeArguments
        );
        assert_eq!(
            CoopetitiveGame::new(entry_f(), Orientation::Loss, vec![], None).unwrap_err(),
            CoopetitionError::EmptyCGrid
        );
        assert_eq!(
            CoopetitiveGame::new(entry_f(), Orientation::Loss, vec![0.5, 0.2], None).unwrap_err(),
            CoopetitionError::BadCGrid
        );
        assert_eq!(
            CoopetitiveGame::new(entry_f(), Orientation::Loss, vec![0.0, 1.0], Some(0.5)).unwrap_err(),
            CoopetitionError::InitialNotInGrid(0.5)
        );
        assert_eq!(section_game(&game(3), 1.5).unwrap_err(), CoopetitionError::ZOutOfRange(1.5));
        let no_initial = CoopetitiveGame::uniform(entry_f(), Orientation::Loss, 3, None).unwrap();
        assert_eq!(core_supremum(&no_initial, 9).unwrap_err(), CoopetitionError::MissingInitial);
    }

    #[test]
    fn sections_of_entry_game() {
        let g = game(65);
        let s1 = section_game(&g, 1.0).unwrap();
        assert_eq!(s1.map.eval_xyz(1.0, 1.0, 0.0), PayoffPoint::new(-5.0, 1.0));
        assert_eq!(s1.map.eval_xyz(0.0, 0.0, 0.0), PayoffPoint::new(-1.0, -1.0));
        assert!(family_roundtrip_check(&g));
    }

    #[test]
    fn corrupted_section_fails_roundtrip() {
        let g = game(9);
        let mut sections = g.sections();
        sections[4].map = sections[4].map.translate(PayoffPoint::new(0.0, 1e-6));
        assert!(!roundtrip_check(&g, &sections, 5));
        let mut short = g.sections();
        short.pop();
        assert!(!roundtrip_check(&g, &short, 5));
    }

    #[test]
    fn conservative_path_is_translated() {
        let g = game(5);
        let path = induced_path(&g, PathQuantity::Conservative, 33).unwrap();
        for s in &path.samples {
            assert_eq!(s.points.len(), 1);
            assert!(s.points[0].max_abs_diff(PayoffPoint::new(-s.z, 1.0 - s.z)) < 1e-12);
        }
    }

    #[test]
    fn tu_crossing_symmetric() {
        let cloud = PointCloud::new(
            vec![
                TaggedPoint::new(PayoffPoint::new(-2.0, -2.0), DomainPoint::xyz(1.0, 1.0, 1.0)),
                TaggedPoint::new(PayoffPoint::new(0.0, 0.0), DomainPoint::xyz(0.0, 0.0, 0.0)),
                TaggedPoint::new(PayoffPoint::new(-4.0, 0.0), DomainPoint::xyz(1.0, 0.0, 0.0)),
                TaggedPoint::new(PayoffPoint::new(0.0, -4.0), DomainPoint::xyz(0.0, 1.0, 0.0)),
            ],
            1.0,
        )
        .unwrap();
        let tu = tu_boundary(&cloud, Orientation::Loss, 1e-9).unwrap();
        assert_eq!(tu.optimal_sum, -4.0);
        let s = tu_crossing(&tu, PayoffPoint::ZERO, PayoffPoint::new(-4.0, -4.0), 1e-9).unwrap();
        assert_eq!(s.payoff, PayoffPoint::new(-2.0, -2.0));
        let on_line = tu_crossing(&tu, PayoffPoint::new(-1.0, -3.0), PayoffPoint::new(-3.0, -1.0), 1e-9);
        assert!(on_line.is_err());
        let both = tu_crossing(&tu, PayoffPoint::new(-2.0, -2.5), PayoffPoint::new(-2.5, -3.0), 1e-9);
        assert!(matches!(both, Err(CoopetitionError::SameHalfPlane { .. })));
    }

    fn pie_game(constant_only: bool) -> CoopetitiveGame {
        let zc = if constant_only { 0.0 } else { 1.0 };
        let map = PayoffMap::new(
            Arity::Three,
            Polynomial { z: zc, ..Default::default() },
            Polynomial { z: zc, ..Default::default() },
        )
        .unwrap();
        CoopetitiveGame::uniform(map, Orientation::Gain, 5, Some(0.0)).unwrap()
    }

    #[test]
    fn symmetric_win_win() {
        let g = pie_game(false);
        assert_eq!(core_supremum(&g, 5).unwrap(), PayoffPoint::ZERO);
        let s = standard_win_win_solution(&g, 5, 1e-9).unwrap();
        assert_eq!(s.payoff, PayoffPoint::new(1.0, 1.0));
        assert!(win_win_report(&g, s, 5).unwrap().is_win_win);
    }

    #[test]
    fn no_pie_to_enlarge() {
        let g = pie_game(true);
        assert!(matches!(
            standard_win_win_solution(&g, 5, 1e-9),
            Err(CoopetitionError::EmptyPortion(_))
        ));
    }

    #[test]
    fn win_win_strictness() {
        let g = game(3);
        let candidate = |p| SolutionPoint {
            payoff: p,
            preimage: None,
            method: SolutionMethod::StandardWinWin,
            residual: 0.0,
            threat: None,
            utopia: None,
        };
        let at_l = win_win_report(&g, candidate(PayoffPoint::new(0.0, 1.0)), 33).unwrap();
        assert_eq!(at_l.core_sup, PayoffPoint::new(0.0, 1.0));
        assert!(!at_l.is_win_win);
        let one_side = win_win_report(&g, candidate(PayoffPoint::new(-1.0, 1.5)), 33).unwrap();
        assert!(!one_side.is_win_win);
        let good = win_win_report(&g, candidate(PayoffPoint::new(-2.0, 0.0)), 33).unwrap();
        assert!(good.is_win_win);
        assert_eq!(good.margin, PayoffPoint::new(2.0, 1.0));
    }
}

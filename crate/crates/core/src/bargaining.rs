//! Bargaining problems on sampled Pareto boundaries.
//!
//! A problem pairs a boundary with a threat point and a utopia point. The
//! Kalai-Smorodinsky solution is the boundary point closest to the segment
//! joining them; on a lattice sample the exact crossing is rarely a sample
//! point, so "closest within tolerance" stands in for "on the segment".
//!
//! All comparisons are orientation-aware: for loss games the threat point is
//! the componentwise larger one.

use std::fmt;

use thiserror::Error;

use crate::geometry::{cmp_f64, DomainPoint, Flavor, ParetoBoundary, TaggedPoint};
use crate::point::{Orientation, PayoffPoint};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BargainingError {
    #[error("boundary is empty")]
    EmptyBoundary,
    #[error("degenerate problem: threat and utopia coincide at {0}")]
    Degenerate(PayoffPoint),
    #[error("utopia {utopia} is not strictly better than threat {threat} in both components")]
    NotOrdered { threat: PayoffPoint, utopia: PayoffPoint },
    #[error("no boundary point within {tol} of the threat-utopia segment (closest is {distance})")]
    NoIntersection { distance: f64, tol: f64 },
    #[error("no boundary point improves on the disagreement point {0}")]
    EmptyFeasibleSet(PayoffPoint),
    #[error("a {flavor:?} boundary does not hold the best points of a {orientation} game")]
    FlavorMismatch { flavor: Flavor, orientation: Orientation },
    #[error("tolerance must be positive, got {0}")]
    NonPositiveTolerance(f64),
    #[error("missing input: {0}")]
    MissingInput(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolutionMethod {
    KalaiSmorodinsky,
    NashBargaining,
    ParetoCompromise,
    NashParetoCompromise,
    ConservativeParetoCompromise,
    ProperCoopetitive,
    TransferableUtility,
    StandardWinWin,
}

impl SolutionMethod {
    pub fn tag(self) -> &'static str {
        match self {
            SolutionMethod::KalaiSmorodinsky => "ks",
            SolutionMethod::NashBargaining => "nash-bargaining",
            SolutionMethod::ParetoCompromise => "compromise:pareto",
            SolutionMethod::NashParetoCompromise => "compromise:nash-pareto",
            SolutionMethod::ConservativeParetoCompromise => "compromise:conservative-pareto",
            SolutionMethod::ProperCoopetitive => "proper-coopetitive",
            SolutionMethod::TransferableUtility => "tu",
            SolutionMethod::StandardWinWin => "win-win",
        }
    }
}

impl fmt::Display for SolutionMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Result of any of the solution concepts.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionPoint {
    pub payoff: PayoffPoint,
    pub preimage: Option<DomainPoint>,
    pub method: SolutionMethod,
    /// Distance between the returned point and the ideal segment or line.
    pub residual: f64,
    /// Threat (or disagreement) point used to produce the solution.
    pub threat: Option<PayoffPoint>,
    pub utopia: Option<PayoffPoint>,
}

impl SolutionPoint {
    pub fn with_method(mut self, method: SolutionMethod) -> Self {
        self.method = method;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BargainingProblem {
    boundary: ParetoBoundary,
    initial: PayoffPoint,
    utopia: PayoffPoint,
}

fn nearest_to_segment(points: &[TaggedPoint], a: PayoffPoint, b: PayoffPoint) -> Option<(TaggedPoint, f64)> {
    points
        .iter()
        .map(|p| (*p, p.payoff.distance_to_segment(a, b).0))
        .min_by(|(p, d), (q, e)| {
            cmp_f64(*d, *e)
                .then_with(|| cmp_f64(p.payoff.distance(b), q.payoff.distance(b)))
                .then_with(|| p.preimage.lex_cmp(&q.preimage))
        })
}

impl BargainingProblem {
    /// Validates the problem: the utopia must be strictly better than the
    /// threat in both components, and the segment between them must come
    /// within three grid steps of the boundary.
    ///
    /// A single-point boundary whose threat and utopia both equal that point
    /// is accepted; its only solution is the point itself.
    pub fn new(boundary: ParetoBoundary, initial: PayoffPoint, utopia: PayoffPoint) -> Result<Self, BargainingError> {
        if boundary.is_empty() {
            return Err(BargainingError::EmptyBoundary);
        }
        if initial == utopia {
            let singleton = boundary.len() == 1 && boundary.points()[0].payoff == initial;
            if !singleton {
                return Err(BargainingError::Degenerate(initial));
            }
        } else if !boundary.orientation().strictly_better_point(utopia, initial) {
            return Err(BargainingError::NotOrdered { threat: initial, utopia });
        }
        let (_, distance) = nearest_to_segment(boundary.points(), initial, utopia).expect("non-empty");
        let reach = 3.0 * boundary.grid_step();
        if distance > reach {
            return Err(BargainingError::NoIntersection { distance, tol: reach });
        }
        Ok(Self {
            boundary,
            initial,
            utopia,
        })
    }

    pub fn boundary(&self) -> &ParetoBoundary {
        &self.boundary
    }

    pub fn initial(&self) -> PayoffPoint {
        self.initial
    }

    pub fn utopia(&self) -> PayoffPoint {
        self.utopia
    }
}

/// Kalai-Smorodinsky solution: the boundary point nearest the segment from
/// threat to utopia, ties broken toward the utopia.
pub fn ks_solution(problem: &BargainingProblem, tol: f64) -> Result<SolutionPoint, BargainingError> {
    if !(tol > 0.0) {
        return Err(BargainingError::NonPositiveTolerance(tol));
    }
    let (best, distance) =
        nearest_to_segment(problem.boundary.points(), problem.initial, problem.utopia).expect("validated non-empty");
    if distance > tol {
        return Err(BargainingError::NoIntersection { distance, tol });
    }
    Ok(SolutionPoint {
        payoff: best.payoff,
        preimage: Some(best.preimage),
        method: SolutionMethod::KalaiSmorodinsky,
        residual: distance,
        threat: Some(problem.initial),
        utopia: Some(problem.utopia),
    })
}

/// Nash bargaining: maximizes the product of both players' improvements
/// over the disagreement point, among boundary points weakly better than it.
pub fn nash_bargaining(
    boundary: &ParetoBoundary,
    disagreement: PayoffPoint,
    orientation: Orientation,
) -> Result<SolutionPoint, BargainingError> {
    let s = orientation.sign();
    let product = |p: PayoffPoint| (s * (p.p1 - disagreement.p1)) * (s * (p.p2 - disagreement.p2));
    let best = boundary
        .points()
        .iter()
        .filter(|p| orientation.weakly_better_point(p.payoff, disagreement))
        .fold(None::<(TaggedPoint, f64)>, |acc, p| {
            let v = product(p.payoff);
            match acc {
                Some((_, w)) if w >= v => acc,
                _ => Some((*p, v)),
            }
        });
    let (best, _) = best.ok_or(BargainingError::EmptyFeasibleSet(disagreement))?;
    Ok(SolutionPoint {
        payoff: best.payoff,
        preimage: Some(best.preimage),
        method: SolutionMethod::NashBargaining,
        residual: 0.0,
        threat: Some(disagreement),
        utopia: None,
    })
}

/// The part of the boundary weakly better than the conservative bi-value.
pub fn payoff_core(boundary: &ParetoBoundary, conservative: PayoffPoint) -> Result<ParetoBoundary, BargainingError> {
    let o = boundary.orientation();
    if boundary.flavor() != Flavor::for_orientation(o) {
        return Err(BargainingError::FlavorMismatch {
            flavor: boundary.flavor(),
            orientation: o,
        });
    }
    Ok(boundary.retain(|p| o.weakly_better_point(p.payoff, conservative)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CompromiseKind {
    /// Threat and utopia are the worst and best corners of the boundary.
    Pareto,
    /// Threat is an extreme point of the Nash zone.
    NashPareto,
    /// Threat is a conservative bi-value.
    ConservativePareto,
}

impl CompromiseKind {
    pub fn method(self) -> SolutionMethod {
        match self {
            CompromiseKind::Pareto => SolutionMethod::ParetoCompromise,
            CompromiseKind::NashPareto => SolutionMethod::NashParetoCompromise,
            CompromiseKind::ConservativePareto => SolutionMethod::ConservativeParetoCompromise,
        }
    }
}

/// Kalai-Smorodinsky solution of the boundary against its own best corner,
/// with the threat chosen by `kind`.
pub fn compromise_solution(
    kind: CompromiseKind,
    boundary: &ParetoBoundary,
    nash_extreme: Option<PayoffPoint>,
    conservative: Option<PayoffPoint>,
    tol: f64,
) -> Result<SolutionPoint, BargainingError> {
    let (inf, sup) = boundary.extrema().ok_or(BargainingError::EmptyBoundary)?;
    let o = boundary.orientation();
    let utopia = o.best_corner(inf, sup);
    let threat = match kind {
        CompromiseKind::Pareto => o.worst_corner(inf, sup),
        CompromiseKind::NashPareto => nash_extreme.ok_or(BargainingError::MissingInput("Nash zone extreme"))?,
        CompromiseKind::ConservativePareto => conservative.ok_or(BargainingError::MissingInput("conservative bi-value"))?,
    };
    if boundary.len() == 1 {
        let only = boundary.points()[0];
        return Ok(SolutionPoint {
            payoff: only.payoff,
            preimage: Some(only.preimage),
            method: kind.method(),
            residual: 0.0,
            threat: Some(threat),
            utopia: Some(utopia),
        });
    }
    let problem = BargainingProblem::new(boundary.clone(), threat, utopia)?;
    Ok(ks_solution(&problem, tol)?.with_method(kind.method()))
}

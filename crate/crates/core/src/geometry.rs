//! Sampled payoff spaces and their Pareto and transferable-utility boundaries.
//!
//! Payoff maps are polynomials over the monomials `{1, x, y, z, xy}` on the
//! unit square or cube. Their images are represented by lattice samples
//! ([`PointCloud`]) that remember the strategy profile behind every point,
//! so each boundary point and each solution can report how it is reached.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{FiniteBimatrixGame, GameError, StrategyCell};
use crate::point::{Orientation, PayoffPoint};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("payoff map takes {expected} arguments, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("a two-argument payoff map cannot depend on z")]
    DependsOnZ,
    #[error("coefficient {0} is not finite")]
    NonFinite(&'static str),
    #[error("grid must have at least 2 points per axis, got {0}")]
    GridTooSmall(usize),
    #[error("point cloud is empty")]
    EmptyCloud,
    #[error("grid step must be positive, got {0}")]
    NonPositiveStep(f64),
    #[error("tolerance must be positive, got {0}")]
    NonPositiveTolerance(f64),
    #[error(transparent)]
    Game(#[from] GameError),
}

pub(crate) fn cmp_f64(a: f64, b: f64) -> Ordering {
    a.partial_cmp(&b).expect("payoffs and strategies are finite")
}

/// A polynomial `c + cx x + cy y + cz z + cxy xy`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Polynomial {
    #[serde(default, rename = "const")]
    pub constant: f64,
    #[serde(default)]
    pub x: f64,
    #[serde(default)]
    pub y: f64,
    #[serde(default)]
    pub z: f64,
    #[serde(default)]
    pub xy: f64,
}

impl Polynomial {
    pub fn eval(&self, x: f64, y: f64, z: f64) -> f64 {
        self.constant + self.x * x + self.y * y + self.z * z + self.xy * x * y
    }

    fn check_finite(&self) -> Result<(), GeometryError> {
        for (name, v) in [
            ("const", self.constant),
            ("x", self.x),
            ("y", self.y),
            ("z", self.z),
            ("xy", self.xy),
        ] {
            if !v.is_finite() {
                return Err(GeometryError::NonFinite(name));
            }
        }
        Ok(())
    }

    fn negate(&self) -> Self {
        Self {
            constant: -self.constant,
            x: -self.x,
            y: -self.y,
            z: -self.z,
            xy: -self.xy,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Arity {
    /// `(x, y)` on the unit square.
    Two,
    /// `(x, y, z)` on the unit cube.
    Three,
}

impl Arity {
    pub fn count(self) -> usize {
        match self {
            Arity::Two => 2,
            Arity::Three => 3,
        }
    }
}

/// A strategy profile in the unit square or cube.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainPoint {
    pub x: f64,
    pub y: f64,
    pub z: Option<f64>,
}

impl DomainPoint {
    pub fn xy(x: f64, y: f64) -> Self {
        Self { x, y, z: None }
    }

    pub fn xyz(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z: Some(z) }
    }

    /// Lexicographic order on `(x, y, z)`, with a missing `z` first.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        cmp_f64(self.x, other.x)
            .then_with(|| cmp_f64(self.y, other.y))
            .then_with(|| match (self.z, other.z) {
                (None, None) => Ordering::Equal,
                (None, Some(_)) => Ordering::Less,
                (Some(_), None) => Ordering::Greater,
                (Some(a), Some(b)) => cmp_f64(a, b),
            })
    }

    pub fn arity(&self) -> usize {
        if self.z.is_some() {
            3
        } else {
            2
        }
    }
}

/// Payoff map `[0,1]^arity -> R^2` with polynomial components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PayoffMap {
    arity: Arity,
    p1: Polynomial,
    p2: Polynomial,
}

impl PayoffMap {
    pub fn new(arity: Arity, p1: Polynomial, p2: Polynomial) -> Result<Self, GeometryError> {
        p1.check_finite()?;
        p2.check_finite()?;
        if arity == Arity::Two && (p1.z != 0.0 || p2.z != 0.0) {
            return Err(GeometryError::DependsOnZ);
        }
        Ok(Self { arity, p1, p2 })
    }

    /// Payoffs of the mixed extension of a `2 x 2` game, written in the
    /// monomial basis. Row 0 and column 0 are played with probabilities `x`
    /// and `y`.
    pub fn from_bimatrix(game: &FiniteBimatrixGame) -> Result<Self, GeometryError> {
        if !game.is_two_by_two() {
            return Err(GameError::NotTwoByTwo(game.rows(), game.cols()).into());
        }
        let c = |r, k| game.payoff(StrategyCell::new(r, k));
        let (a, b, cc, d) = (c(0, 0), c(0, 1), c(1, 0), c(1, 1));
        let poly = |a: f64, b: f64, c: f64, d: f64| Polynomial {
            constant: d,
            x: b - d,
            y: c - d,
            z: 0.0,
            xy: a - b - c + d,
        };
        Self::new(Arity::Two, poly(a.p1, b.p1, cc.p1, d.p1), poly(a.p2, b.p2, cc.p2, d.p2))
    }

    /// The `2 x 2` game whose mixed extension is this (bilinear) map.
    pub fn to_bimatrix(&self, orientation: Orientation) -> Result<FiniteBimatrixGame, GeometryError> {
        if self.arity != Arity::Two {
            return Err(GeometryError::ArityMismatch { expected: 2, found: self.arity.count() });
        }
        let at = |x, y| self.eval_xyz(x, y, 0.0);
        let cells = [
            vec![at(1.0, 1.0), at(1.0, 0.0)],
            vec![at(0.0, 1.0), at(0.0, 0.0)],
        ];
        let pairs: Vec<Vec<(f64, f64)>> = cells.iter().map(|r| r.iter().map(|p| (p.p1, p.p2)).collect()).collect();
        Ok(FiniteBimatrixGame::from_pairs(&pairs, orientation)?)
    }

    pub fn arity(&self) -> Arity {
        self.arity
    }

    pub fn components(&self) -> (Polynomial, Polynomial) {
        (self.p1, self.p2)
    }

    /// Evaluates without checking arity; for arity two `z` is ignored.
    pub fn eval_xyz(&self, x: f64, y: f64, z: f64) -> PayoffPoint {
        PayoffPoint::new(self.p1.eval(x, y, z), self.p2.eval(x, y, z))
    }

    pub fn eval(&self, at: DomainPoint) -> Result<PayoffPoint, GeometryError> {
        if at.arity() != self.arity.count() {
            return Err(GeometryError::ArityMismatch {
                expected: self.arity.count(),
                found: at.arity(),
            });
        }
        Ok(self.eval_xyz(at.x, at.y, at.z.unwrap_or(0.0)))
    }

    /// The two-argument section obtained by freezing `z`.
    pub fn fix_z(&self, z: f64) -> Self {
        let freeze = |p: Polynomial| Polynomial {
            constant: p.constant + p.z * z,
            z: 0.0,
            ..p
        };
        Self {
            arity: Arity::Two,
            p1: freeze(self.p1),
            p2: freeze(self.p2),
        }
    }

    pub fn translate(&self, v: PayoffPoint) -> Self {
        let mut out = *self;
        out.p1.constant += v.p1;
        out.p2.constant += v.p2;
        out
    }

    pub fn negate(&self) -> Self {
        Self {
            arity: self.arity,
            p1: self.p1.negate(),
            p2: self.p2.negate(),
        }
    }

    /// Evaluates the map on the uniform lattice with `grid_n` points per axis.
    pub fn sample_image(&self, grid_n: usize) -> Result<PointCloud, GeometryError> {
        sample_image(self, grid_n)
    }
}

/// A payoff together with the strategy profile producing it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaggedPoint {
    pub payoff: PayoffPoint,
    pub preimage: DomainPoint,
}

impl TaggedPoint {
    pub fn new(payoff: PayoffPoint, preimage: DomainPoint) -> Self {
        Self { payoff, preimage }
    }

    /// Total order: `p1`, then `p2`, then preimage.
    fn cmp_key(&self, other: &Self) -> Ordering {
        cmp_f64(self.payoff.p1, other.payoff.p1)
            .then_with(|| cmp_f64(self.payoff.p2, other.payoff.p2))
            .then_with(|| self.preimage.lex_cmp(&other.preimage))
    }
}

/// Finite sample of a payoff space.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    points: Vec<TaggedPoint>,
    grid_step: f64,
}

impl PointCloud {
    pub fn new(points: Vec<TaggedPoint>, grid_step: f64) -> Result<Self, GeometryError> {
        if points.is_empty() {
            return Err(GeometryError::EmptyCloud);
        }
        if !(grid_step > 0.0) {
            return Err(GeometryError::NonPositiveStep(grid_step));
        }
        Ok(Self { points, grid_step })
    }

    pub fn points(&self) -> &[TaggedPoint] {
        &self.points
    }

    pub fn grid_step(&self) -> f64 {
        self.grid_step
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn payoffs(&self) -> Vec<PayoffPoint> {
        self.points.iter().map(|p| p.payoff).collect()
    }

    /// Same preimages, payoffs shifted by `v`.
    pub fn translate(&self, v: PayoffPoint) -> Self {
        Self {
            points: self
                .points
                .iter()
                .map(|p| TaggedPoint::new(p.payoff + v, p.preimage))
                .collect(),
            grid_step: self.grid_step,
        }
    }

    pub fn negate(&self) -> Self {
        Self {
            points: self
                .points
                .iter()
                .map(|p| TaggedPoint::new(-p.payoff, p.preimage))
                .collect(),
            grid_step: self.grid_step,
        }
    }
}

fn lattice(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
}

/// Lattice image of a payoff map, ordered lexicographically by preimage.
pub fn sample_image(map: &PayoffMap, grid_n: usize) -> Result<PointCloud, GeometryError> {
    if grid_n < 2 {
        return Err(GeometryError::GridTooSmall(grid_n));
    }
    let axis = lattice(grid_n);
    let mut points = Vec::with_capacity(grid_n.pow(map.arity.count() as u32));
    for &x in &axis {
        for &y in &axis {
            match map.arity {
                Arity::Two => points.push(TaggedPoint::new(map.eval_xyz(x, y, 0.0), DomainPoint::xy(x, y))),
                Arity::Three => {
                    for &z in &axis {
                        points.push(TaggedPoint::new(map.eval_xyz(x, y, z), DomainPoint::xyz(x, y, z)));
                    }
                }
            }
        }
    }
    PointCloud::new(points, 1.0 / (grid_n - 1) as f64)
}

/// Direction of a Pareto boundary: maximize or minimize both payoffs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    Maximal,
    Minimal,
}

impl Flavor {
    /// The flavor whose boundary holds the best points under `orientation`.
    pub fn for_orientation(orientation: Orientation) -> Self {
        match orientation {
            Orientation::Gain => Flavor::Maximal,
            Orientation::Loss => Flavor::Minimal,
        }
    }

    fn as_orientation(self) -> Orientation {
        match self {
            Flavor::Maximal => Orientation::Gain,
            Flavor::Minimal => Orientation::Loss,
        }
    }

    pub fn dominates(self, p: PayoffPoint, q: PayoffPoint) -> bool {
        self.as_orientation().dominates(p, q)
    }
}

/// Pairwise non-dominated points of a cloud, sorted by ascending `p1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParetoBoundary {
    points: Vec<TaggedPoint>,
    orientation: Orientation,
    flavor: Flavor,
    grid_step: f64,
}

impl ParetoBoundary {
    pub fn points(&self) -> &[TaggedPoint] {
        &self.points
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn grid_step(&self) -> f64 {
        self.grid_step
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn payoffs(&self) -> Vec<PayoffPoint> {
        self.points.iter().map(|p| p.payoff).collect()
    }

    /// The boundary viewed as a cloud (fails only when empty).
    pub fn to_cloud(&self) -> Result<PointCloud, GeometryError> {
        PointCloud::new(self.points.clone(), self.grid_step)
    }

    /// Componentwise infimum and supremum of the boundary points.
    pub fn extrema(&self) -> Option<(PayoffPoint, PayoffPoint)> {
        bounds(self.points.iter().map(|p| p.payoff))
    }

    /// Keeps the points accepted by `keep`. A subset of a non-dominated set is
    /// non-dominated, so the result is still a boundary.
    pub fn retain(&self, keep: impl Fn(&TaggedPoint) -> bool) -> Self {
        Self {
            points: self.points.iter().copied().filter(|p| keep(p)).collect(),
            ..self.clone()
        }
    }
}

/// Non-dominated subset of a cloud by sort-and-sweep. Exact duplicates keep
/// the lexicographically smallest preimage.
pub fn pareto_filter(cloud: &PointCloud, orientation: Orientation, flavor: Flavor) -> ParetoBoundary {
    let mut sorted = cloud.points.clone();
    let mut kept = Vec::new();
    match flavor {
        Flavor::Minimal => {
            sorted.sort_by(|a, b| a.cmp_key(b));
            let mut best = f64::INFINITY;
            for p in sorted {
                if p.payoff.p2 < best {
                    best = p.payoff.p2;
                    kept.push(p);
                }
            }
        }
        Flavor::Maximal => {
            sorted.sort_by(|a, b| {
                cmp_f64(b.payoff.p1, a.payoff.p1)
                    .then_with(|| cmp_f64(b.payoff.p2, a.payoff.p2))
                    .then_with(|| a.preimage.lex_cmp(&b.preimage))
            });
            let mut best = f64::NEG_INFINITY;
            for p in sorted {
                if p.payoff.p2 > best {
                    best = p.payoff.p2;
                    kept.push(p);
                }
            }
            kept.reverse();
        }
    }
    ParetoBoundary {
        points: kept,
        orientation,
        flavor,
        grid_step: cloud.grid_step,
    }
}

fn bounds(mut it: impl Iterator<Item = PayoffPoint>) -> Option<(PayoffPoint, PayoffPoint)> {
    let first = it.next()?;
    Some(it.fold((first, first), |(lo, hi), p| (lo.component_min(p), hi.component_max(p))))
}

/// Componentwise infimum and supremum `(inf, sup)` of the sampled payoffs.
pub fn extrema(cloud: &PointCloud) -> (PayoffPoint, PayoffPoint) {
    bounds(cloud.points.iter().map(|p| p.payoff)).expect("clouds are non-empty")
}

/// The transferable-utility boundary: the line `p1 + p2 = optimal_sum`
/// restricted to the extrema box of the payoff space.
#[derive(Debug, Clone, PartialEq)]
pub struct TUBoundary {
    pub optimal_sum: f64,
    /// Sampled profiles reaching the optimal sum within tolerance, best first.
    pub witnesses: Vec<TaggedPoint>,
    /// End points of the line segment, in ascending `p1`.
    pub segment_ends: (PayoffPoint, PayoffPoint),
    pub orientation: Orientation,
}

impl TUBoundary {
    /// Value of `p1 + p2 - optimal_sum`; its sign tells the side of the line.
    pub fn offset(&self, p: PayoffPoint) -> f64 {
        p.sum() - self.optimal_sum
    }

    /// The point of the segment closest to `p`.
    pub fn nearest_point(&self, p: PayoffPoint) -> PayoffPoint {
        let (a, b) = self.segment_ends;
        let (_, s) = p.distance_to_segment(a, b);
        PayoffPoint::lerp(a, b, s)
    }

    /// Sub-segment of points weakly better than `a` in both components.
    pub fn portion_better_than(&self, a: PayoffPoint) -> Option<(PayoffPoint, PayoffPoint)> {
        let (lo, hi) = (self.segment_ends.0.p1, self.segment_ends.1.p1);
        let opt = self.optimal_sum;
        let (lo, hi) = match self.orientation {
            Orientation::Gain => (lo.max(a.p1), hi.min(opt - a.p2)),
            Orientation::Loss => (lo.max(opt - a.p2), hi.min(a.p1)),
        };
        (lo <= hi).then(|| (PayoffPoint::new(lo, opt - lo), PayoffPoint::new(hi, opt - hi)))
    }
}

/// Best collective payoff of the cloud, its sampled witnesses and the
/// corresponding segment of the transferable-utility line.
pub fn tu_boundary(cloud: &PointCloud, orientation: Orientation, tol: f64) -> Result<TUBoundary, GeometryError> {
    if !(tol > 0.0) {
        return Err(GeometryError::NonPositiveTolerance(tol));
    }
    let optimal_sum = cloud
        .points
        .iter()
        .map(|p| p.payoff.sum())
        .reduce(|a, b| orientation.best(a, b))
        .expect("clouds are non-empty");
    let mut witnesses: Vec<TaggedPoint> = cloud
        .points
        .iter()
        .copied()
        .filter(|p| (p.payoff.sum() - optimal_sum).abs() <= tol)
        .collect();
    let s = orientation.sign();
    witnesses.sort_by(|a, b| {
        cmp_f64(s * b.payoff.sum(), s * a.payoff.sum()).then_with(|| a.preimage.lex_cmp(&b.preimage))
    });
    let (inf, sup) = extrema(cloud);
    let lo = inf.p1.max(optimal_sum - sup.p2);
    let hi = sup.p1.min(optimal_sum - inf.p2).max(lo);
    Ok(TUBoundary {
        optimal_sum,
        witnesses,
        segment_ends: (PayoffPoint::new(lo, optimal_sum - lo), PayoffPoint::new(hi, optimal_sum - hi)),
        orientation,
    })
}

/// Symmetric Hausdorff distance between two finite point sets.
pub fn hausdorff_distance(a: &[PayoffPoint], b: &[PayoffPoint]) -> Result<f64, GeometryError> {
    if a.is_empty() || b.is_empty() {
        return Err(GeometryError::EmptyCloud);
    }
    let directed = |from: &[PayoffPoint], to: &[PayoffPoint]| {
        from.iter()
            .map(|p| to.iter().map(|q| p.distance(*q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    Ok(directed(a, b).max(directed(b, a)))
}

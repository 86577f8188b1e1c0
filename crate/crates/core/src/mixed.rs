//! Mixed extension of `2 x 2` bimatrix games.
//!
//! A mixed bistrategy is encoded by two probabilities: `x` is the weight the
//! row player puts on their first row, `y` the weight the column player puts
//! on their first column. Expected payoffs are bilinear in `(x, y)`, which
//! makes equilibrium computation a finite case analysis: each player's best
//! response depends only on the sign of a linear function of the opponent's
//! probability.

use thiserror::Error;

use crate::game::{FiniteBimatrixGame, GameError, StrategyCell};
use crate::point::PayoffPoint;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MixedError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("probability {name} = {value} is outside [0, 1]")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("grid must have at least 2 points per axis, got {0}")]
    GridTooSmall(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct MixedBistrategy {
    pub x: f64,
    pub y: f64,
}

impl MixedBistrategy {
    pub fn new(x: f64, y: f64) -> Result<Self, MixedError> {
        if !(0.0..=1.0).contains(&x) {
            return Err(MixedError::OutOfRange { name: "x", value: x });
        }
        if !(0.0..=1.0).contains(&y) {
            return Err(MixedError::OutOfRange { name: "y", value: y });
        }
        Ok(Self { x, y })
    }

    /// The mixed encoding of a pure cell: row 0 is `x = 1`, column 0 is `y = 1`.
    pub fn pure(cell: StrategyCell) -> Self {
        Self {
            x: if cell.row == 0 { 1.0 } else { 0.0 },
            y: if cell.col == 0 { 1.0 } else { 0.0 },
        }
    }
}

fn require_2x2(game: &FiniteBimatrixGame) -> Result<(), GameError> {
    if game.is_two_by_two() {
        Ok(())
    } else {
        Err(GameError::NotTwoByTwo(game.rows(), game.cols()))
    }
}

fn bilinear(game: &FiniteBimatrixGame, x: f64, y: f64) -> PayoffPoint {
    let c = |r, c| game.payoff(StrategyCell::new(r, c));
    c(0, 0).scale(x * y) + c(0, 1).scale(x * (1.0 - y)) + c(1, 0).scale((1.0 - x) * y) + c(1, 1).scale((1.0 - x) * (1.0 - y))
}

/// Expected payoff pair of a mixed bistrategy.
pub fn expected_payoff(game: &FiniteBimatrixGame, s: MixedBistrategy) -> Result<PayoffPoint, MixedError> {
    require_2x2(game)?;
    Ok(bilinear(game, s.x, s.y))
}

/// Largest improvement each player could obtain by a unilateral deviation
/// from `s`. Pure deviations suffice because payoffs are linear in each
/// player's own probability.
pub fn deviation_gain(game: &FiniteBimatrixGame, s: MixedBistrategy) -> Result<PayoffPoint, MixedError> {
    require_2x2(game)?;
    let sign = game.orientation().sign();
    let here = bilinear(game, s.x, s.y);
    let g1 = [0.0, 1.0]
        .iter()
        .map(|&x| sign * (bilinear(game, x, s.y).p1 - here.p1))
        .fold(0.0, f64::max);
    let g2 = [0.0, 1.0]
        .iter()
        .map(|&y| sign * (bilinear(game, s.x, y).p2 - here.p2))
        .fold(0.0, f64::max);
    Ok(PayoffPoint::new(g1, g2))
}

pub fn is_mixed_equilibrium(game: &FiniteBimatrixGame, s: MixedBistrategy, tol: f64) -> Result<bool, MixedError> {
    let g = deviation_gain(game, s)?;
    Ok(g.p1 <= tol && g.p2 <= tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentShape {
    IsolatedPoint,
    Segment,
    Rectangle,
}

/// A maximal axis-aligned box of mixed equilibria.
///
/// In degenerate games the equilibrium set can be a union of boxes that
/// touch at a corner (an L shape); each box is then reported separately.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumComponent {
    pub extreme_points: Vec<MixedBistrategy>,
    pub shape: ComponentShape,
    pub payoff_extremes: Vec<PayoffPoint>,
}

impl EquilibriumComponent {
    /// `(x_lo, x_hi, y_lo, y_hi)`.
    pub fn bounds(&self) -> (f64, f64, f64, f64) {
        let xs = self.extreme_points.iter().map(|p| p.x);
        let ys = self.extreme_points.iter().map(|p| p.y);
        (
            xs.clone().fold(f64::INFINITY, f64::min),
            xs.fold(f64::NEG_INFINITY, f64::max),
            ys.clone().fold(f64::INFINITY, f64::min),
            ys.fold(f64::NEG_INFINITY, f64::max),
        )
    }

    /// Uniform samples of the component: one point, `n` points along a
    /// segment, or an `n x n` lattice over a rectangle.
    pub fn sample(&self, n: usize) -> Vec<MixedBistrategy> {
        let (x0, x1, y0, y1) = self.bounds();
        let n = n.max(2);
        let steps = |lo: f64, hi: f64| -> Vec<f64> {
            if lo == hi {
                vec![lo]
            } else {
                (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
            }
        };
        let (xs, ys) = (steps(x0, x1), steps(y0, y1));
        xs.iter()
            .flat_map(|&x| ys.iter().map(move |&y| MixedBistrategy { x, y }))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Span {
    lo: f64,
    hi: f64,
}

impl Span {
    const UNIT: Span = Span { lo: 0.0, hi: 1.0 };

    fn at(t: f64) -> Span {
        Span { lo: t, hi: t }
    }

    fn intersect(self, o: Span) -> Option<Span> {
        let lo = self.lo.max(o.lo);
        let hi = self.hi.min(o.hi);
        (lo <= hi).then_some(Span { lo, hi })
    }

    fn contains(self, o: Span) -> bool {
        self.lo <= o.lo && o.hi <= self.hi
    }

    fn touches(self, o: Span) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    fn hull(self, o: Span) -> Span {
        Span {
            lo: self.lo.min(o.lo),
            hi: self.hi.max(o.hi),
        }
    }
}

/// `{t in [0,1] : v(t) >= 0}` for the affine `v` with `v(0) = at0`, `v(1) = at1`.
fn nonneg_set(at0: f64, at1: f64) -> Option<Span> {
    match (at0 >= 0.0, at1 >= 0.0) {
        (true, true) => Some(Span::UNIT),
        (false, false) => None,
        (true, false) => Some(Span { lo: 0.0, hi: at0 / (at0 - at1) }),
        (false, true) => Some(Span { lo: at0 / (at0 - at1), hi: 1.0 }),
    }
}

/// `{t in [0,1] : v(t) = 0}` for the same affine `v`.
fn zero_set(at0: f64, at1: f64) -> Option<Span> {
    if at0 == 0.0 && at1 == 0.0 {
        Some(Span::UNIT)
    } else if (at0 >= 0.0 && at1 <= 0.0) || (at0 <= 0.0 && at1 >= 0.0) {
        Some(Span::at(at0 / (at0 - at1)))
    } else {
        None
    }
}

/// Best-response graph as boxes `(x-span, y-span)`.
type Boxes = Vec<(Span, Span)>;

fn best_response_boxes(game: &FiniteBimatrixGame) -> (Boxes, Boxes) {
    let s = game.orientation().sign();
    let c = |r, k| game.payoff(StrategyCell::new(r, k));
    // advantage of row 0 over row 1 for player one, at y = 0 and y = 1
    let d1 = (s * (c(0, 1).p1 - c(1, 1).p1), s * (c(0, 0).p1 - c(1, 0).p1));
    // advantage of column 0 over column 1 for player two, at x = 0 and x = 1
    let d2 = (s * (c(1, 0).p2 - c(1, 1).p2), s * (c(0, 0).p2 - c(0, 1).p2));

    let mut br1 = Vec::new();
    if let Some(ys) = nonneg_set(d1.0, d1.1) {
        br1.push((Span::at(1.0), ys));
    }
    if let Some(ys) = nonneg_set(-d1.0, -d1.1) {
        br1.push((Span::at(0.0), ys));
    }
    if let Some(ys) = zero_set(d1.0, d1.1) {
        br1.push((Span::UNIT, ys));
    }

    let mut br2 = Vec::new();
    if let Some(xs) = nonneg_set(d2.0, d2.1) {
        br2.push((xs, Span::at(1.0)));
    }
    if let Some(xs) = nonneg_set(-d2.0, -d2.1) {
        br2.push((xs, Span::at(0.0)));
    }
    if let Some(xs) = zero_set(d2.0, d2.1) {
        br2.push((xs, Span::UNIT));
    }
    (br1, br2)
}

fn simplify(mut boxes: Boxes) -> Boxes {
    loop {
        let mut changed = false;
        'scan: for i in 0..boxes.len() {
            for j in 0..boxes.len() {
                if i == j {
                    continue;
                }
                let (a, b) = (boxes[i], boxes[j]);
                let merged = if a.0.contains(b.0) && a.1.contains(b.1) {
                    Some(a)
                } else if a.0 == b.0 && a.1.touches(b.1) {
                    Some((a.0, a.1.hull(b.1)))
                } else if a.1 == b.1 && a.0.touches(b.0) {
                    Some((a.0.hull(b.0), a.1))
                } else {
                    None
                };
                if let Some(m) = merged {
                    boxes[i] = m;
                    boxes.swap_remove(j);
                    changed = true;
                    break 'scan;
                }
            }
        }
        if !changed {
            break;
        }
    }
    boxes.sort_by(|a, b| {
        (a.0.lo, a.1.lo, a.0.hi, a.1.hi)
            .partial_cmp(&(b.0.lo, b.1.lo, b.0.hi, b.1.hi))
            .expect("finite spans")
    });
    boxes
}

/// Mixed Nash equilibria of a `2 x 2` game, as maximal boxes.
///
/// The intersection of the two best-response graphs is computed exactly
/// from the signs of the players' payoff advantages; ties produce segments
/// or rectangles.
pub fn mixed_equilibrium_components(game: &FiniteBimatrixGame) -> Result<Vec<EquilibriumComponent>, MixedError> {
    require_2x2(game)?;
    let (br1, br2) = best_response_boxes(game);
    let mut boxes = Vec::new();
    for a in &br1 {
        for b in &br2 {
            if let (Some(xs), Some(ys)) = (a.0.intersect(b.0), a.1.intersect(b.1)) {
                boxes.push((xs, ys));
            }
        }
    }
    let components = simplify(boxes)
        .into_iter()
        .map(|(xs, ys)| {
            let (shape, extreme_points) = match (xs.lo == xs.hi, ys.lo == ys.hi) {
                (true, true) => (ComponentShape::IsolatedPoint, vec![MixedBistrategy { x: xs.lo, y: ys.lo }]),
                (false, false) => (
                    ComponentShape::Rectangle,
                    vec![
                        MixedBistrategy { x: xs.lo, y: ys.lo },
                        MixedBistrategy { x: xs.lo, y: ys.hi },
                        MixedBistrategy { x: xs.hi, y: ys.lo },
                        MixedBistrategy { x: xs.hi, y: ys.hi },
                    ],
                ),
                _ => (
                    ComponentShape::Segment,
                    vec![MixedBistrategy { x: xs.lo, y: ys.lo }, MixedBistrategy { x: xs.hi, y: ys.hi }],
                ),
            };
            let payoff_extremes = extreme_points.iter().map(|p| bilinear(game, p.x, p.y)).collect();
            EquilibriumComponent {
                extreme_points,
                shape,
                payoff_extremes,
            }
        })
        .collect();
    Ok(components)
}

fn lattice(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
}

/// Maximizes a concave function over `[0, 1]`: lattice scan, then a
/// bisection on the slope inside the bracketing cell pair.
fn maximize_concave(n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let grid = lattice(n);
    let (k, mut best) = grid
        .iter()
        .map(|&t| f(t))
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    let mut lo = grid[k.saturating_sub(1)];
    let mut hi = grid[(k + 1).min(n - 1)];
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let eps = (hi - lo) * 1e-3;
        if f(mid + eps) > f(mid - eps) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    best = best.max(f(0.5 * (lo + hi)));
    best
}

/// Conservative bi-value of the mixed extension: sup-inf for gains, inf-sup
/// for losses, over a `grid_n x grid_n` lattice with one bisection refinement
/// of the outer optimization.
pub fn conservative_bivalue_mixed(game: &FiniteBimatrixGame, grid_n: usize) -> Result<PayoffPoint, MixedError> {
    require_2x2(game)?;
    if grid_n < 2 {
        return Err(MixedError::GridTooSmall(grid_n));
    }
    let s = game.orientation().sign();
    let inner = lattice(grid_n);
    // the inner optimum of a linear function lies on the lattice endpoints,
    // which the lattice contains, so scanning it is exact.
    let guarantee1 = |x: f64| {
        inner
            .iter()
            .map(|&y| s * bilinear(game, x, y).p1)
            .fold(f64::INFINITY, f64::min)
    };
    let guarantee2 = |y: f64| {
        inner
            .iter()
            .map(|&x| s * bilinear(game, x, y).p2)
            .fold(f64::INFINITY, f64::min)
    };
    let v1 = s * maximize_concave(grid_n, guarantee1);
    let v2 = s * maximize_concave(grid_n, guarantee2);
    // `+ 0.0` turns a negative zero into a positive one
    Ok(PayoffPoint::new(v1 + 0.0, v2 + 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::Orientation;

    fn loss_prime() -> FiniteBimatrixGame {
        FiniteBimatrixGame::from_pairs(
            &[vec![(-4.0, 2.0), (0.0, 1.0)], vec![(0.0, 1.0), (0.0, 0.0)]],
            Orientation::Loss,
        )
        .unwrap()
    }

    fn pennies() -> FiniteBimatrixGame {
        FiniteBimatrixGame::from_pairs(
            &[vec![(1.0, -1.0), (-1.0, 1.0)], vec![(-1.0, 1.0), (1.0, -1.0)]],
            Orientation::Gain,
        )
        .unwrap()
    }

    #[test]
    fn expected_payoff_values() {
        let g = loss_prime();
        let at = |x, y| expected_payoff(&g, MixedBistrategy::new(x, y).unwrap()).unwrap();
        assert_eq!(at(1.0, 1.0), PayoffPoint::new(-4.0, 2.0));
        assert_eq!(at(0.0, 0.0), PayoffPoint::new(0.0, 0.0));
        assert_eq!(at(0.5, 0.5), PayoffPoint::new(-1.0, 1.0));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(MixedBistrategy::new(1.5, 0.0).is_err());
        let g3 = FiniteBimatrixGame::new(&vec![vec![0.0; 3]; 3], &vec![vec![0.0; 3]; 3], Orientation::Gain).unwrap();
        assert!(matches!(
            mixed_equilibrium_components(&g3),
            Err(MixedError::Game(GameError::NotTwoByTwo(3, 3)))
        ));
        assert!(matches!(
            conservative_bivalue_mixed(&loss_prime(), 1),
            Err(MixedError::GridTooSmall(1))
        ));
    }

    #[test]
    fn loss_prime_has_one_segment() {
        let comps = mixed_equilibrium_components(&loss_prime()).unwrap();
        assert_eq!(comps.len(), 1);
        let c = &comps[0];
        assert_eq!(c.shape, ComponentShape::Segment);
        assert_eq!(c.extreme_points, vec![MixedBistrategy { x: 0.0, y: 0.0 }, MixedBistrategy { x: 1.0, y: 0.0 }]);
        assert_eq!(c.payoff_extremes, vec![PayoffPoint::new(0.0, 0.0), PayoffPoint::new(0.0, 1.0)]);
    }

    #[test]
    fn matching_pennies_center() {
        let comps = mixed_equilibrium_components(&pennies()).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].shape, ComponentShape::IsolatedPoint);
        assert_eq!(comps[0].extreme_points, vec![MixedBistrategy { x: 0.5, y: 0.5 }]);
    }

    #[test]
    fn strictly_dominant_cell_is_unique() {
        // prisoner's dilemma in gains: defect (row/col 1) strictly dominates
        let g = FiniteBimatrixGame::from_pairs(
            &[vec![(3.0, 3.0), (0.0, 5.0)], vec![(5.0, 0.0), (1.0, 1.0)]],
            Orientation::Gain,
        )
        .unwrap();
        let comps = mixed_equilibrium_components(&g).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].extreme_points, vec![MixedBistrategy { x: 0.0, y: 0.0 }]);
    }

    #[test]
    fn zero_game_is_one_rectangle() {
        let g = FiniteBimatrixGame::new(&vec![vec![0.0; 2]; 2], &vec![vec![0.0; 2]; 2], Orientation::Gain).unwrap();
        let comps = mixed_equilibrium_components(&g).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].shape, ComponentShape::Rectangle);
        assert_eq!(conservative_bivalue_mixed(&g, 5).unwrap(), PayoffPoint::ZERO);
    }

    #[test]
    fn conservative_mixed_values() {
        let g = loss_prime();
        assert_eq!(conservative_bivalue_mixed(&g, 33).unwrap(), PayoffPoint::new(0.0, 1.0));
        let m = g.translate(PayoffPoint::new(0.0, -4.0)).unwrap();
        assert_eq!(conservative_bivalue_mixed(&m, 33).unwrap(), PayoffPoint::new(0.0, -3.0));
        // pennies guarantees 0 to each player at the mixed center
        let v = conservative_bivalue_mixed(&pennies(), 4).unwrap();
        assert!(v.max_abs_diff(PayoffPoint::ZERO) < 1e-9, "{v}");
    }
}

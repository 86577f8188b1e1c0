//! Independent reference implementations used by the integration tests.
//! Nothing here calls the solver being checked.
#![allow(dead_code)]

use coopetitive::game::{FiniteBimatrixGame, StrategyCell};
use coopetitive::geometry::{DomainPoint, TaggedPoint};
use coopetitive::{Orientation, PayoffPoint};
use proptest::prelude::*;

pub fn entry_table() -> FiniteBimatrixGame {
    FiniteBimatrixGame::from_pairs(
        &[vec![(4.0, 2.0), (0.0, 3.0)], vec![(0.0, 3.0), (0.0, 4.0)]],
        Orientation::Gain,
    )
    .unwrap()
    .with_labels(vec!["E".into(), "N".into()], vec!["H".into(), "L".into()])
    .unwrap()
}

pub fn loss_prime() -> FiniteBimatrixGame {
    FiniteBimatrixGame::from_pairs(
        &[vec![(-4.0, 2.0), (0.0, 1.0)], vec![(0.0, 1.0), (0.0, 0.0)]],
        Orientation::Loss,
    )
    .unwrap()
}

/// `a` at least as good as `b` for a player of the given orientation.
fn at_least(o: Orientation, a: f64, b: f64) -> bool {
    match o {
        Orientation::Gain => a >= b,
        Orientation::Loss => a <= b,
    }
}

/// Cells where no unilateral deviation is strictly better, by exhaustion.
pub fn brute_force_nash(p1: &[Vec<f64>], p2: &[Vec<f64>], o: Orientation) -> Vec<(usize, usize)> {
    let (rows, cols) = (p1.len(), p1[0].len());
    let mut out = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let row_ok = (0..rows).all(|r2| at_least(o, p1[r][c], p1[r2][c]));
            let col_ok = (0..cols).all(|c2| at_least(o, p2[r][c], p2[r][c2]));
            if row_ok && col_ok {
                out.push((r, c));
            }
        }
    }
    out
}

pub fn cells(v: &[StrategyCell]) -> Vec<(usize, usize)> {
    v.iter().map(|c| (c.row, c.col)).collect()
}

fn dominates(o: Orientation, p: PayoffPoint, q: PayoffPoint) -> bool {
    at_least(o, p.p1, q.p1) && at_least(o, p.p2, q.p2) && (p != q)
}

fn lex(a: &DomainPoint, b: &DomainPoint) -> std::cmp::Ordering {
    let za = a.z.unwrap_or(0.0);
    let zb = b.z.unwrap_or(0.0);
    a.x.partial_cmp(&b.x)
        .unwrap()
        .then(a.y.partial_cmp(&b.y).unwrap())
        .then(za.partial_cmp(&zb).unwrap())
}

/// Quadratic Pareto filter: drop dominated points, keep one preimage per
/// payoff (the lexicographically smallest), sort by `p1`.
pub fn quadratic_pareto(points: &[TaggedPoint], direction: Orientation) -> Vec<TaggedPoint> {
    let mut kept: Vec<TaggedPoint> = points
        .iter()
        .filter(|p| !points.iter().any(|q| dominates(direction, q.payoff, p.payoff)))
        .copied()
        .collect();
    kept.sort_by(|a, b| {
        a.payoff
            .p1
            .partial_cmp(&b.payoff.p1)
            .unwrap()
            .then(a.payoff.p2.partial_cmp(&b.payoff.p2).unwrap())
            .then(lex(&a.preimage, &b.preimage))
    });
    kept.dedup_by(|later, earlier| later.payoff == earlier.payoff);
    kept
}

/// Closed-form value of `max_x min(a0 + a1 x, b0 + b1 x)` over `[0, 1]`.
pub fn max_min_lines(a: (f64, f64), b: (f64, f64)) -> f64 {
    let f = |x: f64| (a.0 + a.1 * x).min(b.0 + b.1 * x);
    let mut best = f(0.0).max(f(1.0));
    if a.1 != b.1 {
        let x = (b.0 - a.0) / (a.1 - b.1);
        if (0.0..=1.0).contains(&x) {
            best = best.max(f(x));
        }
    }
    best
}

/// Conservative bi-value of the mixed extension of a `2 x 2` game, exactly:
/// the inner extremum of a bilinear function sits at a pure strategy and the
/// outer one at an end point or where the two lines cross.
pub fn exact_mixed_conservative(g: &FiniteBimatrixGame) -> PayoffPoint {
    let s = g.orientation().sign();
    let m1 = g.matrix1();
    let m2 = g.matrix2();
    // player one mixes rows with weight x on row 0; the guard picks the column
    let line1 = |c: usize| (s * m1[1][c], s * (m1[0][c] - m1[1][c]));
    let line2 = |r: usize| (s * m2[r][1], s * (m2[r][0] - m2[r][1]));
    PayoffPoint::new(
        s * max_min_lines(line1(0), line1(1)),
        s * max_min_lines(line2(0), line2(1)),
    )
}

/// Expected payoffs of the mixed bistrategy `(x, y)` computed cell by cell.
pub fn expected(g: &FiniteBimatrixGame, x: f64, y: f64) -> PayoffPoint {
    let w = [[x * y, x * (1.0 - y)], [(1.0 - x) * y, (1.0 - x) * (1.0 - y)]];
    let m1 = g.matrix1();
    let m2 = g.matrix2();
    let mut p = PayoffPoint::ZERO;
    for r in 0..2 {
        for c in 0..2 {
            p = p + PayoffPoint::new(w[r][c] * m1[r][c], w[r][c] * m2[r][c]);
        }
    }
    p
}

/// `(x, y)` is an equilibrium when no pure deviation is strictly better.
pub fn is_equilibrium_oracle(g: &FiniteBimatrixGame, x: f64, y: f64, tol: f64) -> bool {
    let o = g.orientation();
    let here = expected(g, x, y);
    let s = o.sign();
    let d1 = [expected(g, 1.0, y).p1, expected(g, 0.0, y).p1]
        .into_iter()
        .all(|v| s * (v - here.p1) <= tol);
    let d2 = [expected(g, x, 1.0).p2, expected(g, x, 0.0).p2]
        .into_iter()
        .all(|v| s * (v - here.p2) <= tol);
    d1 && d2
}

pub fn orientation() -> impl Strategy<Value = Orientation> {
    prop_oneof![Just(Orientation::Gain), Just(Orientation::Loss)]
}

/// Small half-integer payoffs, which make ties frequent.
pub fn payoff_value() -> impl Strategy<Value = f64> {
    (-6i32..=6).prop_map(|v| v as f64 / 2.0)
}

pub fn matrices(rows: usize, cols: usize) -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let m = || proptest::collection::vec(proptest::collection::vec(payoff_value(), cols), rows);
    (m(), m())
}

pub fn finite_game() -> impl Strategy<Value = FiniteBimatrixGame> {
    (1usize..=4, 1usize..=4, orientation())
        .prop_flat_map(|(r, c, o)| (matrices(r, c), Just(o)))
        .prop_map(|((a, b), o)| FiniteBimatrixGame::new(&a, &b, o).unwrap())
}

pub fn game_2x2() -> impl Strategy<Value = FiniteBimatrixGame> {
    (matrices(2, 2), orientation()).prop_map(|((a, b), o)| FiniteBimatrixGame::new(&a, &b, o).unwrap())
}

/// Random clouds with many exact ties in both coordinates.
pub fn cloud_points() -> impl Strategy<Value = Vec<TaggedPoint>> {
    proptest::collection::vec((-8i32..=8, -8i32..=8), 1..60).prop_map(|v| {
        v.into_iter()
            .enumerate()
            .map(|(i, (a, b))| {
                TaggedPoint::new(
                    PayoffPoint::new(a as f64 / 4.0, b as f64 / 4.0),
                    DomainPoint::xy((i % 7) as f64 / 8.0, (i / 7) as f64 / 8.0),
                )
            })
            .collect()
    })
}

pub fn curve_samples(n: usize, f: impl Fn(f64) -> PayoffPoint) -> Vec<PayoffPoint> {
    (0..=n).map(|i| f(i as f64 / n as f64)).collect()
}

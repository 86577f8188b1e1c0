mod common;

use common::*;
use coopetitive::bargaining::{
    compromise_solution, ks_solution, nash_bargaining, payoff_core, BargainingError, BargainingProblem,
    CompromiseKind, SolutionMethod,
};
use coopetitive::geometry::{pareto_filter, sample_image, DomainPoint, Flavor, ParetoBoundary, PayoffMap, PointCloud, TaggedPoint};
use coopetitive::{Orientation, PayoffPoint};
use proptest::prelude::*;

fn f0_boundary(n: usize) -> ParetoBoundary {
    let map = PayoffMap::from_bimatrix(&loss_prime()).unwrap();
    pareto_filter(&sample_image(&map, n).unwrap(), Orientation::Loss, Flavor::Minimal)
}

/// Root of a continuous function on `[lo, hi]` with a sign change.
fn bisect(mut lo: f64, mut hi: f64, g: impl Fn(f64) -> f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (g(lo) <= 0.0) == (g(mid) <= 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn curve(t: f64) -> PayoffPoint {
    PayoffPoint::new(-4.0 * t * t, 2.0 * t)
}

/// Parameter where the curve crosses the segment `[a, b]`: the signed
/// side of the curve point relative to the line through `a` and `b`.
fn crossing(a: PayoffPoint, b: PayoffPoint) -> f64 {
    let side = |t: f64| {
        let p = curve(t);
        (b.p1 - a.p1) * (p.p2 - a.p2) - (b.p2 - a.p2) * (p.p1 - a.p1)
    };
    bisect(0.0, 1.0, side)
}

#[test]
fn ks_on_the_entry_boundary() {
    let (a, b) = (PayoffPoint::new(0.0, 1.0), PayoffPoint::new(-4.0, 0.0));
    let want = curve(crossing(a, b));
    let closed = PayoffPoint::new(-4.0 * (3.0 - 2.0 * 2f64.sqrt()), 2.0 * 2f64.sqrt() - 2.0);
    assert!(want.max_abs_diff(closed) < 1e-12);
    for (n, tol) in [(513, 1e-2), (1025, 1e-3)] {
        let p = BargainingProblem::new(f0_boundary(n), a, b).unwrap();
        let s = ks_solution(&p, 1e-2).unwrap();
        assert!(s.payoff.max_abs_diff(want) < tol, "n={n}: {} vs {want}", s.payoff);
        assert_eq!(s.method, SolutionMethod::KalaiSmorodinsky);
        assert_eq!((s.threat, s.utopia), (Some(a), Some(b)));
        let pre = s.preimage.unwrap();
        assert!(PayoffMap::from_bimatrix(&loss_prime()).unwrap().eval(pre).unwrap() == s.payoff);
    }
}

#[test]
fn nash_bargaining_on_the_entry_boundary() {
    let d = PayoffPoint::new(0.0, 1.0);
    // brute-force maximum of the product along a fine analytic sampling
    let fine = curve_samples(1 << 16, curve);
    let product = |p: PayoffPoint| (d.p1 - p.p1) * (d.p2 - p.p2);
    let best = fine
        .iter()
        .copied()
        .filter(|p| p.p1 <= d.p1 && p.p2 <= d.p2)
        .max_by(|p, q| product(*p).total_cmp(&product(*q)))
        .unwrap();
    assert!(best.max_abs_diff(PayoffPoint::new(-4.0 / 9.0, 2.0 / 3.0)) < 1e-4);
    let s = nash_bargaining(&f0_boundary(513), d, Orientation::Loss).unwrap();
    assert!(s.payoff.max_abs_diff(PayoffPoint::new(-4.0 / 9.0, 2.0 / 3.0)) < 1e-2, "{}", s.payoff);
    assert!(matches!(
        nash_bargaining(&f0_boundary(33), PayoffPoint::new(-5.0, -5.0), Orientation::Loss),
        Err(BargainingError::EmptyFeasibleSet(_))
    ));
}

#[test]
fn core_is_the_lower_half_of_the_curve() {
    let b = f0_boundary(513);
    let core = payoff_core(&b, PayoffPoint::new(0.0, 1.0)).unwrap();
    assert!(!core.is_empty() && core.len() < b.len());
    for p in core.points() {
        let t = p.payoff.p2 / 2.0;
        assert!((0.0..=0.5).contains(&t));
    }
    let (inf, sup) = core.extrema().unwrap();
    assert_eq!((inf, sup), (PayoffPoint::new(-1.0, 0.0), PayoffPoint::new(0.0, 1.0)));
    let maximal = pareto_filter(&b.to_cloud().unwrap(), Orientation::Loss, Flavor::Maximal);
    assert!(matches!(payoff_core(&maximal, PayoffPoint::new(0.0, 1.0)), Err(BargainingError::FlavorMismatch { .. })));
}

#[test]
fn pareto_compromise_hits_the_golden_section() {
    let b = f0_boundary(513);
    let (a, u) = (PayoffPoint::new(0.0, 2.0), PayoffPoint::new(-4.0, 0.0));
    let want = curve(crossing(a, u));
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    assert!(want.max_abs_diff(curve(golden)) < 1e-12);
    let s = compromise_solution(CompromiseKind::Pareto, &b, None, None, 1e-2).unwrap();
    assert!(s.payoff.max_abs_diff(want) < 1e-2, "{}", s.payoff);
    assert_eq!(s.method, SolutionMethod::ParetoCompromise);
    assert_eq!((s.threat, s.utopia), (Some(a), Some(u)));
    let c = compromise_solution(CompromiseKind::ConservativePareto, &b, None, Some(PayoffPoint::new(0.0, 1.0)), 1e-2).unwrap();
    assert!(c.payoff.max_abs_diff(curve(2f64.sqrt() - 1.0)) < 1e-2);
    assert!(matches!(
        compromise_solution(CompromiseKind::NashPareto, &b, None, None, 1e-2),
        Err(BargainingError::MissingInput(_))
    ));
}

#[test]
fn problem_validation() {
    let b = f0_boundary(65);
    let a = PayoffPoint::new(0.0, 1.0);
    assert!(matches!(BargainingProblem::new(b.clone(), a, a), Err(BargainingError::Degenerate(_))));
    assert!(matches!(
        BargainingProblem::new(b.clone(), PayoffPoint::new(-4.0, 0.0), a),
        Err(BargainingError::NotOrdered { .. })
    ));
    assert!(matches!(
        BargainingProblem::new(b.clone(), PayoffPoint::new(10.0, 10.0), PayoffPoint::new(9.0, 9.0)),
        Err(BargainingError::NoIntersection { .. })
    ));
    let p = BargainingProblem::new(b, a, PayoffPoint::new(-4.0, 0.0)).unwrap();
    assert!(matches!(ks_solution(&p, 0.0), Err(BargainingError::NonPositiveTolerance(_))));
    assert!(matches!(ks_solution(&p, 1e-9), Err(BargainingError::NoIntersection { .. })));

    let one = TaggedPoint::new(PayoffPoint::new(1.0, 1.0), DomainPoint::xy(0.0, 0.0));
    let single = pareto_filter(&PointCloud::new(vec![one], 1.0).unwrap(), Orientation::Gain, Flavor::Maximal);
    let p = BargainingProblem::new(single, one.payoff, one.payoff).unwrap();
    assert_eq!(ks_solution(&p, 1e-9).unwrap().payoff, one.payoff);
}

/// Boundary `p1 + p2 = c` sampled on a fine lattice against its exact KS point.
fn line_boundary(c: f64, o: Orientation) -> ParetoBoundary {
    let n = 801;
    let pts = (0..n)
        .map(|i| {
            let u = i as f64 / (n - 1) as f64;
            TaggedPoint::new(PayoffPoint::new(u * c, (1.0 - u) * c), DomainPoint::xy(u, 0.0))
        })
        .collect();
    pareto_filter(&PointCloud::new(pts, 1.0 / (n - 1) as f64).unwrap(), o, Flavor::for_orientation(o))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ks_on_a_line_matches_the_closed_form(c in 1.0f64..4.0, ta in 0.0f64..0.4, tb in 0.0f64..0.4, o in orientation()) {
        let s = o.sign();
        let c = s * c;
        let b = line_boundary(c, o);
        // threat strictly worse, utopia the best corner
        let a = PayoffPoint::new(ta * c - s * 0.5, tb * c - s * 0.5);
        let u = PayoffPoint::new(c, c);
        // exact crossing of [a, u] with p1 + p2 = c
        let k = (c - a.sum()) / (u.sum() - a.sum());
        let want = PayoffPoint::lerp(a, u, k);
        let p = BargainingProblem::new(b, a, u).unwrap();
        let got = ks_solution(&p, 2e-2).unwrap();
        prop_assert!(got.payoff.max_abs_diff(want) < 1e-2, "{} vs {}", got.payoff, want);
    }
}

mod common;

use common::*;
use coopetitive::game::{FiniteBimatrixGame, GameError, Player, StrategyCell, Strictness};
use coopetitive::{Orientation, PayoffPoint};
use proptest::prelude::*;

#[test]
fn entry_table_against_the_oracle() {
    let g = entry_table();
    let ne = cells(&g.pure_nash_equilibria());
    assert_eq!(ne, brute_force_nash(&g.matrix1(), &g.matrix2(), g.orientation()));
    assert_eq!(ne, vec![(0, 1), (1, 1)]);
    assert!(!g.pure_nash_equilibria().contains(&StrategyCell::new(0, 0)));
    assert_eq!(g.dominant_strategies(Player::Two, Strictness::Weak), vec![1]);
    assert_eq!(g.dominant_strategies(Player::One, Strictness::Weak), vec![0]);
    assert_eq!(g.dominant_strategies(Player::One, Strictness::Strict), Vec::<usize>::new());
    assert_eq!(g.cell_name(StrategyCell::new(0, 1)), "(E,L)");
}

#[test]
fn zero_game_everything_is_an_equilibrium() {
    let z = vec![vec![0.0; 3]; 2];
    let g = FiniteBimatrixGame::new(&z, &z, Orientation::Gain).unwrap();
    assert_eq!(g.pure_nash_equilibria().len(), 6);
    assert!(g.pure_nash_equilibria().iter().all(|c| !g.is_strict_equilibrium(*c)));
}

#[test]
fn prisoners_dilemma_in_both_frames() {
    let gain = FiniteBimatrixGame::from_pairs(
        &[vec![(3.0, 3.0), (0.0, 5.0)], vec![(5.0, 0.0), (1.0, 1.0)]],
        Orientation::Gain,
    )
    .unwrap();
    assert_eq!(cells(&gain.pure_nash_equilibria()), vec![(1, 1)]);
    assert!(gain.is_strict_equilibrium(StrategyCell::new(1, 1)));
    assert_eq!(gain.dominant_strategies(Player::One, Strictness::Strict), vec![1]);
    assert_eq!(gain.conservative_bivalue(), PayoffPoint::new(1.0, 1.0));
    let loss = gain.negate_orientation();
    assert_eq!(loss.pure_nash_equilibria(), gain.pure_nash_equilibria());
    assert_eq!(loss.conservative_bivalue(), PayoffPoint::new(-1.0, -1.0));
}

#[test]
fn construction_is_validated() {
    let ok = vec![vec![1.0, 2.0]];
    assert_eq!(FiniteBimatrixGame::new(&[], &[], Orientation::Gain).unwrap_err(), GameError::Empty);
    assert!(matches!(
        FiniteBimatrixGame::new(&[vec![1.0], vec![1.0, 2.0]], &[vec![1.0], vec![1.0, 2.0]], Orientation::Gain),
        Err(GameError::Ragged { .. })
    ));
    assert!(FiniteBimatrixGame::new(&ok, &[vec![1.0]], Orientation::Gain).is_err());
    assert!(FiniteBimatrixGame::new(&[vec![f64::NAN, 1.0]], &ok, Orientation::Gain).is_err());
    let g = FiniteBimatrixGame::new(&ok, &ok, Orientation::Gain).unwrap();
    assert!(g.clone().with_labels(vec!["a".into(), "b".into()], vec!["c".into()]).is_err());
    assert!(g.translate(PayoffPoint::new(f64::INFINITY, 0.0)).is_err());
}

/// The pure conservative value by definition, player by player.
fn conservative_oracle(g: &FiniteBimatrixGame) -> PayoffPoint {
    let (m1, m2) = (g.matrix1(), g.matrix2());
    let s = g.orientation().sign();
    let v1 = m1
        .iter()
        .map(|row| row.iter().map(|v| s * v).fold(f64::INFINITY, f64::min))
        .fold(f64::NEG_INFINITY, f64::max);
    let v2 = (0..m2[0].len())
        .map(|c| m2.iter().map(|row| s * row[c]).fold(f64::INFINITY, f64::min))
        .fold(f64::NEG_INFINITY, f64::max);
    PayoffPoint::new(s * v1, s * v2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn nash_matches_brute_force(g in finite_game()) {
        prop_assert_eq!(cells(&g.pure_nash_equilibria()), brute_force_nash(&g.matrix1(), &g.matrix2(), g.orientation()));
    }

    #[test]
    fn conservative_matches_definition(g in finite_game()) {
        prop_assert_eq!(g.conservative_bivalue(), conservative_oracle(&g));
    }

    #[test]
    fn strict_equilibria_are_equilibria(g in finite_game()) {
        for cell in g.cells() {
            if g.is_strict_equilibrium(cell) {
                prop_assert!(g.pure_nash_equilibria().contains(&cell));
            }
        }
    }

    #[test]
    fn strictly_dominant_strategies_are_weakly_dominant(g in finite_game()) {
        for p in [Player::One, Player::Two] {
            let weak = g.dominant_strategies(p, Strictness::Weak);
            for s in g.dominant_strategies(p, Strictness::Strict) {
                prop_assert!(weak.contains(&s));
            }
        }
    }

    #[test]
    fn negation_keeps_equilibria(g in finite_game()) {
        let n = g.negate_orientation();
        prop_assert_eq!(n.pure_nash_equilibria(), g.pure_nash_equilibria());
        prop_assert_eq!(n.conservative_bivalue(), -g.conservative_bivalue());
        prop_assert_eq!(n.negate_orientation(), g);
    }
}

//! Analysis toolkit for two-player coopetitive games.
//!
//! A coopetitive game is a payoff map `f(x, y, z)`: two firms pick their own
//! competitive strategies `x` and `y` and jointly pick a cooperative strategy
//! `z`. The crate is layered bottom-up:
//!
//! - [`game`]: finite bimatrix games, pure equilibria, dominance, conservative values;
//! - [`mixed`]: the mixed extension of `2 x 2` games;
//! - [`geometry`]: sampled payoff spaces, Pareto and transferable-utility boundaries;
//! - [`bargaining`]: Kalai-Smorodinsky, Nash bargaining, payoff cores, compromises;
//! - [`coopetition`]: families of section games and the coopetitive solutions;
//! - [`scenario`]: game files, reports, CSV/SVG rendering and the entry-game demo.
//!
//! The guide under `book/` walks through the concepts; its code samples are
//! compiled and run as doctests of this crate.

pub mod bargaining;
pub mod coopetition;
pub mod game;
pub mod geometry;
pub mod mixed;
pub mod point;
pub mod scenario;

pub use point::{Orientation, PayoffPoint};

#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/finite-games.md")]
    struct FiniteGames;
    #[doc = include_str!("../../../book/src/mixed-extension.md")]
    struct MixedExtension;
    #[doc = include_str!("../../../book/src/payoff-geometry.md")]
    struct PayoffGeometry;
    #[doc = include_str!("../../../book/src/bargaining.md")]
    struct Bargaining;
    #[doc = include_str!("../../../book/src/coopetition.md")]
    struct Coopetition;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}

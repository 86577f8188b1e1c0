//! Payoff-plane points and the gain/loss orientation that orders them.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Whether players want larger (`Gain`) or smaller (`Loss`) payoffs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Gain,
    Loss,
}

impl Orientation {
    /// `+1` for gains, `-1` for losses. Multiplying a payoff by the sign turns
    /// every comparison into a "larger is better" one.
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Gain => 1.0,
            Orientation::Loss => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Orientation::Gain => Orientation::Loss,
            Orientation::Loss => Orientation::Gain,
        }
    }

    /// `a` is strictly better than `b`.
    pub fn better(self, a: f64, b: f64) -> bool {
        match self {
            Orientation::Gain => a > b,
            Orientation::Loss => a < b,
        }
    }

    /// `a` is better than or equal to `b`.
    pub fn weakly_better(self, a: f64, b: f64) -> bool {
        match self {
            Orientation::Gain => a >= b,
            Orientation::Loss => a <= b,
        }
    }

    /// The better of two scalars.
    pub fn best(self, a: f64, b: f64) -> f64 {
        if self.better(b, a) {
            b
        } else {
            a
        }
    }

    /// The worse of two scalars.
    pub fn worst(self, a: f64, b: f64) -> f64 {
        if self.better(b, a) {
            a
        } else {
            b
        }
    }

    /// `p` is strictly better than `q` in both components.
    pub fn strictly_better_point(self, p: PayoffPoint, q: PayoffPoint) -> bool {
        self.better(p.p1, q.p1) && self.better(p.p2, q.p2)
    }

    /// `p` is weakly better than `q` in both components.
    pub fn weakly_better_point(self, p: PayoffPoint, q: PayoffPoint) -> bool {
        self.weakly_better(p.p1, q.p1) && self.weakly_better(p.p2, q.p2)
    }

    /// Pareto dominance: weakly better everywhere and strictly better somewhere.
    pub fn dominates(self, p: PayoffPoint, q: PayoffPoint) -> bool {
        self.weakly_better_point(p, q) && (self.better(p.p1, q.p1) || self.better(p.p2, q.p2))
    }

    /// The componentwise best corner of the box `[inf, sup]`.
    pub fn best_corner(self, inf: PayoffPoint, sup: PayoffPoint) -> PayoffPoint {
        match self {
            Orientation::Gain => sup,
            Orientation::Loss => inf,
        }
    }

    /// The componentwise worst corner of the box `[inf, sup]`.
    pub fn worst_corner(self, inf: PayoffPoint, sup: PayoffPoint) -> PayoffPoint {
        match self {
            Orientation::Gain => inf,
            Orientation::Loss => sup,
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Orientation::Gain => f.write_str("gain"),
            Orientation::Loss => f.write_str("loss"),
        }
    }
}

/// A pair of payoffs, one per player.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PayoffPoint {
    pub p1: f64,
    pub p2: f64,
}

impl PayoffPoint {
    pub const ZERO: PayoffPoint = PayoffPoint { p1: 0.0, p2: 0.0 };

    pub const fn new(p1: f64, p2: f64) -> Self {
        Self { p1, p2 }
    }

    pub fn is_finite(self) -> bool {
        self.p1.is_finite() && self.p2.is_finite()
    }

    /// Collective payoff `p1 + p2`.
    pub fn sum(self) -> f64 {
        self.p1 + self.p2
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(self.p1 * k, self.p2 * k)
    }

    pub fn distance(self, other: PayoffPoint) -> f64 {
        (self.p1 - other.p1).hypot(self.p2 - other.p2)
    }

    /// Largest componentwise difference.
    pub fn max_abs_diff(self, other: PayoffPoint) -> f64 {
        (self.p1 - other.p1).abs().max((self.p2 - other.p2).abs())
    }

    pub fn component_min(self, other: PayoffPoint) -> Self {
        Self::new(self.p1.min(other.p1), self.p2.min(other.p2))
    }

    pub fn component_max(self, other: PayoffPoint) -> Self {
        Self::new(self.p1.max(other.p1), self.p2.max(other.p2))
    }

    /// Euclidean distance from `self` to the closed segment `[a, b]`, together
    /// with the segment parameter of the nearest point.
    pub fn distance_to_segment(self, a: PayoffPoint, b: PayoffPoint) -> (f64, f64) {
        let d = b - a;
        let len2 = d.p1 * d.p1 + d.p2 * d.p2;
        if len2 == 0.0 {
            return (self.distance(a), 0.0);
        }
        let w = self - a;
        let s = ((w.p1 * d.p1 + w.p2 * d.p2) / len2).clamp(0.0, 1.0);
        (self.distance(a + d.scale(s)), s)
    }

    /// Point `a + s (b - a)`.
    pub fn lerp(a: PayoffPoint, b: PayoffPoint, s: f64) -> PayoffPoint {
        a + (b - a).scale(s)
    }
}

impl Add for PayoffPoint {
    type Output = PayoffPoint;
    fn add(self, rhs: PayoffPoint) -> PayoffPoint {
        PayoffPoint::new(self.p1 + rhs.p1, self.p2 + rhs.p2)
    }
}

impl Sub for PayoffPoint {
    type Output = PayoffPoint;
    fn sub(self, rhs: PayoffPoint) -> PayoffPoint {
        PayoffPoint::new(self.p1 - rhs.p1, self.p2 - rhs.p2)
    }
}

impl Neg for PayoffPoint {
    type Output = PayoffPoint;
    fn neg(self) -> PayoffPoint {
        PayoffPoint::new(-self.p1, -self.p2)
    }
}

impl From<(f64, f64)> for PayoffPoint {
    fn from((p1, p2): (f64, f64)) -> Self {
        Self::new(p1, p2)
    }
}

impl fmt::Display for PayoffPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(prec) => write!(f, "({:.*}, {:.*})", prec, self.p1, prec, self.p2),
            None => write!(f, "({}, {})", self.p1, self.p2),
        }
    }
}

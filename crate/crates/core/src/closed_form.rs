//! Constant-memory outcome decisions for one- and two-move rulesets.
//!
//! Every solver works on exact integers; intermediate sums are widened to `u128` so that
//! 64-bit coordinates never overflow.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Outcome, Position, Ruleset};

/// `x` is P for the single move `a` iff `x mod 2a < a`.
pub fn solve_one_move_1d(a: u64, x: u64) -> Result<Outcome> {
    if a == 0 {
        return Err(Error::InvalidArgument("move must be positive".into()));
    }
    Ok(Outcome::from_is_p((x as u128) % (2 * a as u128) < a as u128))
}

/// Membership in the union of L-shapes of the single move `(a, b)`. A zero component makes the
/// corresponding quotient unbounded, which collapses the L-shapes to strips.
#[inline]
fn l_shape(a: u128, b: u128, x: u128, y: u128) -> bool {
    let qx = x.checked_div(a).unwrap_or(u128::MAX);
    let qy = y.checked_div(b).unwrap_or(u128::MAX);
    qx.min(qy).is_multiple_of(2)
}

pub fn solve_one_move_2d(a: u64, b: u64, x: u64, y: u64) -> Result<Outcome> {
    if a == 0 && b == 0 {
        return Err(Error::ZeroMove);
    }
    Ok(Outcome::from_is_p(l_shape(a as u128, b as u128, x as u128, y as u128)))
}

/// Two moves `a < b` in one dimension: period `a + b`, first `b` cells follow the single move `a`.
pub fn solve_two_move_1d(a: u64, b: u64, x: u64) -> Result<Outcome> {
    if a == 0 || a >= b {
        return Err(Error::InvalidArgument(format!("need 0 < a < b, got a={a}, b={b}")));
    }
    Ok(Outcome::from_is_p(two_move_1d(a as u128, b as u128, x as u128)))
}

#[inline]
fn two_move_1d(a: u128, b: u128, x: u128) -> bool {
    let r = x % (a + b);
    r < b && r % (2 * a) < a
}

/// Additive three moves `{a, b, a+b}` with `b/2 <= a < b`: P iff `x mod (2a+b) < a`.
pub fn solve_additive_three_1d(a: u64, b: u64, x: u64) -> Result<Outcome> {
    if a == 0 || a >= b || b > 2 * a {
        return Err(Error::UnsupportedRegime(format!("additive three-move needs b/2 <= a < b, got a={a}, b={b}")));
    }
    let period = 2 * a as u128 + b as u128;
    Ok(Outcome::from_is_p((x as u128) % period < a as u128))
}

/// Outcome of a twin ruleset derived from a one-dimensional solver through `min(x, y)`.
pub fn twin_lift(solve1d: impl Fn(u64) -> Outcome, x: u64, y: u64) -> Outcome {
    solve1d(x.min(y))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionVerdict {
    pub holds: bool,
    /// A position where the expanded rulesets disagree, when they do.
    pub witness: Option<(u64, u64)>,
}

/// Whether adding `(a,b)` and `(b,a)` to `{(a,a), (b,b)}` leaves the P-positions unchanged.
pub fn symmetric_expansion_holds(a: u64, b: u64) -> Result<ExpansionVerdict> {
    if a == 0 || a >= b {
        return Err(Error::InvalidArgument(format!("need 0 < a < b, got a={a}, b={b}")));
    }
    let holds = b <= 2 * a;
    Ok(ExpansionVerdict { holds, witness: (!holds).then_some((2 * a, b)) })
}

/// Region labels above the translation line, per the vertical cuts at `a`, `c` and `c + a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    A,
    B,
    C,
    /// `x >= a + c` above the line: reached by translating a base cell.
    Translated,
    /// Strictly below the line.
    Below,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    /// Both moves vertical: the game on `y` with moves `{lo, hi}`.
    Vertical {
        lo: u128,
        hi: u128,
    },
    /// Both moves horizontal.
    Horizontal {
        lo: u128,
        hi: u128,
    },
    /// `{(0,p), (q,0)}`: independent strips in each axis.
    Checkerboard {
        p: u128,
        q: u128,
    },
    General,
}

/// Geometry of a two-move planar ruleset `{(a,b), (c,d)}` with `a <= c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoMoveGeometry {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
    shape: Shape,
}

impl TwoMoveGeometry {
    pub fn new(ruleset: &Ruleset) -> Result<Self> {
        ruleset.require_dimension(2)?;
        ruleset.require_len(2)?;
        // Canonical order is lexicographic, so the first move has the smaller x-component.
        let p = ruleset.pairs();
        let ((a, b), (c, d)) = (p[0], p[1]);
        let (a128, b128, c128, d128) = (a as u128, b as u128, c as u128, d as u128);
        let shape = if a == 0 && c == 0 {
            Shape::Vertical { lo: b128.min(d128), hi: b128.max(d128) }
        } else if b == 0 && d == 0 {
            Shape::Horizontal { lo: a128.min(c128), hi: a128.max(c128) }
        } else if a == 0 && d == 0 {
            Shape::Checkerboard { p: b128, q: c128 }
        } else {
            Shape::General
        };
        Ok(Self { a, b, c, d, shape })
    }

    /// The slope `(b+d)/(a+c)`, or `None` when both moves are vertical.
    pub fn delta(&self) -> Option<Ratio<u128>> {
        let den = self.a as u128 + self.c as u128;
        (den != 0).then(|| Ratio::new(self.b as u128 + self.d as u128, den))
    }

    /// `y >= delta * x`, by cross-multiplication.
    #[inline]
    pub fn on_or_above(&self, x: u64, y: u64) -> bool {
        cross_ge(y as u128, self.a as u128 + self.c as u128, x as u128, self.b as u128 + self.d as u128)
    }

    pub fn region(&self, x: u64, y: u64) -> Region {
        if !self.on_or_above(x, y) {
            return Region::Below;
        }
        let (a, c, x) = (self.a as u128, self.c as u128, x as u128);
        if x < a {
            Region::A
        } else if x < c {
            Region::B
        } else if x < c + a {
            Region::C
        } else {
            Region::Translated
        }
    }

    pub fn solve(&self, x: u64, y: u64) -> Outcome {
        Outcome::from_is_p(self.is_p(x, y))
    }

    #[inline]
    pub fn is_p(&self, x: u64, y: u64) -> bool {
        let (x, y) = (x as u128, y as u128);
        match self.shape {
            Shape::Vertical { lo, hi } => two_move_1d(lo, hi, y),
            Shape::Horizontal { lo, hi } => two_move_1d(lo, hi, x),
            Shape::Checkerboard { p, q } => ((x / q) % 2 == 0) == ((y / p) % 2 == 0),
            Shape::General => self.general(x, y),
        }
    }

    fn general(&self, x: u128, y: u128) -> bool {
        let (a, b, c, d) = (self.a as u128, self.b as u128, self.c as u128, self.d as u128);
        let (sx, sy) = (a + c, b + d);
        // The translation preserves the side of the line, so reduce along it to the base strip
        // of that side and read the one-move structure of the governing move there.
        if cross_ge(y, sx, x, sy) {
            let k = x / sx;
            let (x, y) = (x - k * sx, y - k * sy);
            l_shape(a, b, x, y) && !(x >= c && y >= d)
        } else {
            let k = y / sy;
            let (x, y) = (x - k * sx, y - k * sy);
            if b <= d {
                l_shape(a, b, x, y) && !(x >= c && y >= d)
            } else {
                l_shape(c, d, x, y) && !(x >= a && y >= b)
            }
        }
    }
}

/// `v * s` for `v < 2^64`, `s < 2^65`, as `(high, low 64 bits)`.
#[inline]
fn wide_mul(v: u128, s: u128) -> (u128, u128) {
    const MASK: u128 = u64::MAX as u128;
    let lo = v * (s & MASK);
    let hi = v * (s >> 64) + (lo >> 64);
    (hi, lo & MASK)
}

/// Exact `y * sx >= x * sy` for coordinates below `2^64` and move sums below `2^65`.
#[inline]
fn cross_ge(y: u128, sx: u128, x: u128, sy: u128) -> bool {
    wide_mul(y, sx) >= wide_mul(x, sy)
}

pub fn solve_two_move_2d(ruleset: &Ruleset, x: u64, y: u64) -> Result<Outcome> {
    Ok(TwoMoveGeometry::new(ruleset)?.solve(x, y))
}

/// Reusable solver for two-move rulesets of any dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoMoveSolver {
    s1: Vec<u128>,
    s2: Vec<u128>,
    sum: Vec<u128>,
}

impl TwoMoveSolver {
    pub fn new(ruleset: &Ruleset) -> Result<Self> {
        ruleset.require_len(2)?;
        let widen = |i: usize| -> Vec<u128> { ruleset.moves()[i].components().iter().map(|&c| c as u128).collect() };
        let (s1, s2) = (widen(0), widen(1));
        let sum = s1.iter().zip(&s2).map(|(p, q)| p + q).collect();
        Ok(Self { s1, s2, sum })
    }

    pub fn dimension(&self) -> usize {
        self.sum.len()
    }

    /// Largest `k` with `k * s <= v` componentwise (over components where `s > 0`).
    #[inline]
    fn fit(v: impl Iterator<Item = u128>, s: &[u128]) -> u128 {
        v.zip(s).filter(|(_, &si)| si > 0).map(|(vi, &si)| vi / si).min().expect("nonzero move")
    }

    /// P iff, after removing as many copies of `s1 + s2` as fit, both moves fit an even number
    /// of times into what remains.
    pub fn is_p(&self, pos: &[u64]) -> Result<bool> {
        if pos.len() != self.sum.len() {
            return Err(Error::DimensionMismatch { expected: self.sum.len(), found: pos.len() });
        }
        let k = Self::fit(pos.iter().map(|&v| v as u128), &self.sum);
        let reduced = || pos.iter().zip(&self.sum).map(move |(&v, &s)| v as u128 - k * s);
        let k1 = Self::fit(reduced(), &self.s1);
        let k2 = Self::fit(reduced(), &self.s2);
        Ok(k1 % 2 == 0 && k2 % 2 == 0)
    }

    pub fn solve(&self, pos: &[u64]) -> Result<Outcome> {
        self.is_p(pos).map(Outcome::from_is_p)
    }
}

pub fn solve_two_move_dd(ruleset: &Ruleset, position: &Position) -> Result<Outcome> {
    TwoMoveSolver::new(ruleset)?.solve(position.components())
}

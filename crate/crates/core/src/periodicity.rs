//! Eventual period detection for sequences, rows, columns and rational lines.
//!
//! A pair `(x', T)` is accepted when `o(i) = o(i + T)` for every `i >= x'` in the window and
//! the window is at least `x' + 2T + margin` long, where the margin is the largest move
//! component. Candidates are tried by increasing `T`; for each `T` the smallest `x'` is the
//! position after the last mismatch.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{OutcomeGrid, OutcomeSequence};
use crate::par;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodReport {
    pub index: String,
    pub preperiod: u64,
    pub period: u64,
    pub found: bool,
    /// Length of the examined window.
    pub search_bound: u64,
    /// For row 0: the bound `max(1, A * 2^A)` with `A` the largest x-component.
    pub row0_bound: Option<u128>,
    pub within_bound: Option<bool>,
}

/// Smallest `(x', T)` by `(T, x')` certified on `bits` with the given margin.
pub fn find_period(bits: &[bool], margin: usize) -> Option<(usize, usize)> {
    let n = bits.len();
    let mut t = 1;
    while 2 * t + margin <= n {
        let mut last_mismatch = None;
        for i in (0..n - t).rev() {
            if bits[i] != bits[i + t] {
                last_mismatch = Some(i);
                break;
            }
        }
        let start = last_mismatch.map_or(0, |i| i + 1);
        if n >= start + 2 * t + margin {
            return Some((start, t));
        }
        t += 1;
    }
    None
}

fn report(index: String, bits: &[bool], margin: usize) -> PeriodReport {
    let found = find_period(bits, margin);
    PeriodReport {
        index,
        preperiod: found.map_or(0, |(s, _)| s as u64),
        period: found.map_or(0, |(_, t)| t as u64),
        found: found.is_some(),
        search_bound: bits.len() as u64,
        row0_bound: None,
        within_bound: None,
    }
}

pub fn find_eventual_period(seq: &OutcomeSequence) -> PeriodReport {
    report("sequence".into(), seq.bits(), seq.max_move() as usize)
}

fn margin_of(grid: &OutcomeGrid) -> usize {
    grid.ruleset().map_or(0, |r| r.max_component() as usize)
}

/// The bound `max(1, A * 2^A)`, saturating for large `A`.
pub fn row0_bound(a: u64) -> u128 {
    if a >= 120 {
        return u128::MAX;
    }
    ((a as u128) << a).max(1)
}

pub fn row_periods(grid: &OutcomeGrid, rows: Range<usize>) -> Vec<PeriodReport> {
    let margin = margin_of(grid);
    let bound = grid.ruleset().map(|r| row0_bound(r.pairs().iter().map(|&(a, _)| a).max().unwrap_or(0)));
    let rows: Vec<usize> = rows.filter(|&y| y < grid.height()).collect();
    par::map(rows, |y| {
        let mut r = report(format!("row {y}"), &grid.row(y), margin);
        if y == 0 {
            if let Some(b) = bound {
                r.row0_bound = Some(b);
                r.within_bound = Some(r.found && (r.period as u128) <= b);
            }
        }
        r
    })
}

pub fn column_periods(grid: &OutcomeGrid, cols: Range<usize>) -> Vec<PeriodReport> {
    let margin = margin_of(grid);
    let bound = grid.ruleset().map(|r| row0_bound(r.pairs().iter().map(|&(_, b)| b).max().unwrap_or(0)));
    let cols: Vec<usize> = cols.filter(|&x| x < grid.width()).collect();
    par::map(cols, |x| {
        let mut r = report(format!("col {x}"), &grid.column(x), margin);
        if x == 0 {
            if let Some(b) = bound {
                r.row0_bound = Some(b);
                r.within_bound = Some(r.found && (r.period as u128) <= b);
            }
        }
        r
    })
}

/// Product of the `b` row periods preceding a row.
pub fn superperiod(periods: &[u64], b: usize) -> Result<u64> {
    if periods.len() != b {
        return Err(Error::InvalidArgument(format!("expected {b} periods, got {}", periods.len())));
    }
    if periods.contains(&0) {
        return Err(Error::InvalidArgument("periods must be positive".into()));
    }
    periods.iter().try_fold(1u64, |acc, &p| acc.checked_mul(p)).ok_or(Error::Overflow)
}

/// The line `y = p x / q + m` with `p, q > 0` coprime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LineSpec {
    pub p: u64,
    pub q: u64,
    pub m: Ratio<i64>,
}

impl LineSpec {
    pub fn new(p: u64, q: u64, m: Ratio<i64>) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidArgument("horizontal lines are rows; use row periods".into()));
        }
        if q == 0 {
            return Err(Error::InvalidArgument("slope denominator must be positive".into()));
        }
        let g = p.gcd(&q);
        Ok(Self { p: p / g, q: q / g, m })
    }

    pub fn slope(&self) -> Ratio<i64> {
        Ratio::new(self.p as i64, self.q as i64)
    }

    /// Exact `y` at `x` if it is an integer.
    pub fn lattice_y(&self, x: u64) -> Option<i64> {
        let num = self.p as i128 * x as i128 * *self.m.denom() as i128 + self.q as i128 * *self.m.numer() as i128;
        let den = self.q as i128 * *self.m.denom() as i128;
        (num % den == 0).then(|| (num / den) as i64)
    }

    /// Lattice points `(x, y)` on the board, in increasing `x`, that satisfy `keep`.
    pub(crate) fn points(&self, width: usize, height: usize, keep: impl Fn(usize, usize) -> bool) -> Vec<(usize, usize)> {
        (0..width as u64)
            .filter_map(|x| {
                let y = self.lattice_y(x)?;
                (y >= 0 && (y as u64) < height as u64 && keep(x as usize, y as usize)).then_some((x as usize, y as usize))
            })
            .collect()
    }
}

impl fmt::Display for LineSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)?;
        if *self.m.numer() >= 0 {
            write!(f, "+{}", self.m)
        } else {
            write!(f, "{}", self.m)
        }
    }
}

impl FromStr for LineSpec {
    type Err = Error;

    /// Parses `p/q+m` or `p/q-m`, where `m` is an integer or a fraction, e.g. `4/5-4/5`.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("line `{s}`: expected p/q+m"));
        let slash = s.find('/').ok_or_else(bad)?;
        let rest = &s[slash + 1..];
        let sign_at = rest.find(['+', '-']);
        let (q_text, m_text) = match sign_at {
            Some(i) => (&rest[..i], &rest[i..]),
            None => (rest, "+0"),
        };
        let p: u64 = s[..slash].parse().map_err(|_| bad())?;
        let q: u64 = q_text.parse().map_err(|_| bad())?;
        let m = parse_ratio(m_text.trim_start_matches('+')).ok_or_else(bad)?;
        LineSpec::new(p, q, m)
    }
}

/// Parses `a` or `a/b` with an optional sign.
pub fn parse_ratio(text: &str) -> Option<Ratio<i64>> {
    match text.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.parse().ok()?;
            let d: i64 = d.parse().ok()?;
            (d != 0).then(|| Ratio::new(n, d))
        }
        None => Some(Ratio::from_integer(text.parse().ok()?)),
    }
}

/// Period of the outcome sequence along the lattice points of a line, in x units.
pub fn line_period(grid: &OutcomeGrid, line: &LineSpec) -> Result<PeriodReport> {
    line_period_where(grid, line, |_, _| true)
}

/// Like [`line_period`] but only over lattice points accepted by `keep`, which must select a
/// contiguous run of the line (e.g. its intersection with a convex region).
pub fn line_period_where(grid: &OutcomeGrid, line: &LineSpec, keep: impl Fn(usize, usize) -> bool) -> Result<PeriodReport> {
    let pts = line.points(grid.width(), grid.height(), keep);
    if pts.len() < 2 {
        return Err(Error::NoLatticePoints);
    }
    let step = pts[1].0 - pts[0].0;
    let bits: Vec<bool> = pts.iter().map(|&(x, y)| grid.get(x, y)).collect();
    let margin = margin_of(grid).div_ceil(step);
    let mut r = report(format!("line {line}"), &bits, margin);
    if r.found {
        r.preperiod = if r.preperiod == 0 { 0 } else { pts[r.preperiod as usize].0 as u64 };
        r.period *= step as u64;
    }
    r.search_bound = pts.last().map_or(0, |p| p.0 as u64 + 1);
    Ok(r)
}

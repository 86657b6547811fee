//! Ground-truth outcomes by dynamic programming.
//!
//! Two-dimensional boards are bit-packed, 64 cells per word, bit set for P. A row is built from
//! the rows below it: every move `(a, b)` with `b > 0` contributes the P-bits of row `y - b`
//! shifted right by `a` to the row's N-mask. Moves with `b = 0` depend on the row itself and
//! are resolved bit by bit.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Outcome, Ruleset};

/// Memory ceiling for board allocations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    bytes: u64,
}

impl Budget {
    pub const DEFAULT_BYTES: u64 = 2 << 30;

    pub fn from_bytes(bytes: u64) -> Self {
        Self { bytes }
    }

    pub fn from_mib(mib: u64) -> Self {
        Self { bytes: mib.saturating_mul(1 << 20) }
    }

    pub fn bytes(&self) -> u64 {
        self.bytes
    }

    pub fn check(&self, needed: u128) -> Result<()> {
        if needed > self.bytes as u128 {
            return Err(Error::BudgetExceeded { needed, budget: self.bytes });
        }
        Ok(())
    }

    /// Bytes used by a bit-packed `w x h` board.
    pub fn grid_bytes(w: u128, h: u128) -> u128 {
        w.div_ceil(64) * h * 8
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self { bytes: Self::DEFAULT_BYTES }
    }
}

/// Evaluation order for [`compute_grid_with`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    /// Parallel for large boards when the `parallel` feature is enabled.
    #[default]
    Auto,
    Sequential,
    /// Tiled anti-diagonal wavefront. Falls back to sequential without the `parallel` feature.
    Parallel,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct GridOptions {
    pub budget: Budget,
    pub strategy: Strategy,
}

/// A bit-packed P/N board over `[0, W) x [0, H)`.
#[derive(Clone, Serialize, Deserialize)]
pub struct OutcomeGrid {
    width: usize,
    height: usize,
    words_per_row: usize,
    bits: Vec<u64>,
    ruleset: Option<Ruleset>,
}

impl PartialEq for OutcomeGrid {
    fn eq(&self, other: &Self) -> bool {
        self.width == other.width && self.height == other.height && self.bits == other.bits
    }
}

impl Eq for OutcomeGrid {}

impl fmt::Debug for OutcomeGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "OutcomeGrid {}x{}", self.width, self.height)?;
        if self.width <= 64 && self.height <= 64 {
            for y in (0..self.height).rev() {
                let row: String = (0..self.width).map(|x| if self.get(x, y) { '#' } else { '.' }).collect();
                writeln!(f, "{row}")?;
            }
        }
        Ok(())
    }
}

impl OutcomeGrid {
    /// An all-N board.
    pub fn new(width: usize, height: usize) -> Self {
        let words_per_row = width.div_ceil(64);
        Self { width, height, words_per_row, bits: vec![0; words_per_row * height], ruleset: None }
    }

    pub fn from_fn(width: usize, height: usize, mut is_p: impl FnMut(usize, usize) -> bool) -> Self {
        let mut g = Self::new(width, height);
        for y in 0..height {
            for x in 0..width {
                if is_p(x, y) {
                    g.set(x, y, true);
                }
            }
        }
        g
    }

    pub(crate) fn from_words(width: usize, height: usize, bits: Vec<u64>) -> Self {
        let words_per_row = width.div_ceil(64);
        debug_assert_eq!(bits.len(), words_per_row * height);
        Self { width, height, words_per_row, bits, ruleset: None }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn words_per_row(&self) -> usize {
        self.words_per_row
    }

    /// Raw words, row-major, bit `i` of word `w` in row `y` is cell `(64w + i, y)`.
    pub fn words(&self) -> &[u64] {
        &self.bits
    }

    pub fn row_words(&self, y: usize) -> &[u64] {
        &self.bits[y * self.words_per_row..(y + 1) * self.words_per_row]
    }

    /// The ruleset this board was computed for, if known.
    pub fn ruleset(&self) -> Option<&Ruleset> {
        self.ruleset.as_ref()
    }

    pub fn with_ruleset(mut self, ruleset: Ruleset) -> Self {
        self.ruleset = Some(ruleset);
        self
    }

    /// True when `(x, y)` is a P-position.
    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        debug_assert!(x < self.width && y < self.height);
        (self.bits[y * self.words_per_row + x / 64] >> (x % 64)) & 1 == 1
    }

    /// Like [`get`](Self::get) but `None` outside the board.
    pub fn try_get(&self, x: i64, y: i64) -> Option<bool> {
        if x < 0 || y < 0 || x as u64 >= self.width as u64 || y as u64 >= self.height as u64 {
            return None;
        }
        Some(self.get(x as usize, y as usize))
    }

    pub fn outcome(&self, x: usize, y: usize) -> Outcome {
        Outcome::from_is_p(self.get(x, y))
    }

    pub fn set(&mut self, x: usize, y: usize, is_p: bool) {
        let idx = y * self.words_per_row + x / 64;
        let mask = 1u64 << (x % 64);
        if is_p {
            self.bits[idx] |= mask;
        } else {
            self.bits[idx] &= !mask;
        }
    }

    pub fn flip(&mut self, x: usize, y: usize) {
        let v = self.get(x, y);
        self.set(x, y, !v);
    }

    pub fn count_p(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn p_cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.height).flat_map(move |y| (0..self.width).filter(move |&x| self.get(x, y)).map(move |x| (x, y)))
    }

    pub fn row(&self, y: usize) -> Vec<bool> {
        (0..self.width).map(|x| self.get(x, y)).collect()
    }

    pub fn column(&self, x: usize) -> Vec<bool> {
        (0..self.height).map(|y| self.get(x, y)).collect()
    }

    /// The sub-board `[0, w) x [0, h)`.
    pub fn restrict(&self, w: usize, h: usize) -> Self {
        let mut g = Self::from_fn(w.min(self.width), h.min(self.height), |x, y| self.get(x, y));
        g.ruleset = self.ruleset.clone();
        g
    }

    /// Swaps the axes; the result is the board of the mirrored ruleset.
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.height, self.width, |x, y| self.get(y, x))
    }
}

struct Plan {
    width: usize,
    words_per_row: usize,
    /// Moves with a positive y-component.
    lifted: Vec<(usize, usize)>,
    /// x-components of moves with zero y-component, ascending.
    flat: Vec<usize>,
}

impl Plan {
    fn new(ruleset: &Ruleset, width: usize) -> Self {
        let mut lifted = Vec::new();
        let mut flat = Vec::new();
        for (a, b) in ruleset.pairs() {
            let a = usize::try_from(a).unwrap_or(usize::MAX);
            let b = usize::try_from(b).unwrap_or(usize::MAX);
            if b == 0 {
                if a < width {
                    flat.push(a);
                }
            } else if a < width {
                lifted.push((a, b));
            }
        }
        flat.sort_unstable();
        Self { width, words_per_row: width.div_ceil(64), lifted, flat }
    }

    fn valid_mask(&self, w: usize) -> u64 {
        let rem = self.width - 64 * w;
        if rem >= 64 {
            u64::MAX
        } else {
            (1u64 << rem) - 1
        }
    }

    /// Cells `start..start + 64` of the row starting at word `base`; cells left of 0 read as N.
    #[inline]
    fn fetch(&self, load: &impl Fn(usize) -> u64, base: usize, start: i64) -> u64 {
        if start <= -64 {
            return 0;
        }
        if start < 0 {
            return load(base) << (-start) as u32;
        }
        let q = (start / 64) as usize;
        let r = (start % 64) as u32;
        let mut v = load(base + q) >> r;
        if r > 0 && q + 1 < self.words_per_row {
            v |= load(base + q + 1) << (64 - r);
        }
        v
    }

    /// Computes word `w` of row `y`. Words left of `w` in row `y` and all words of lower rows
    /// must already be available through `load`.
    #[inline]
    fn word(&self, load: &impl Fn(usize) -> u64, y: usize, w: usize) -> u64 {
        let mut n_mask = 0u64;
        let x0 = 64 * w as i64;
        for &(a, b) in &self.lifted {
            if b <= y {
                n_mask |= self.fetch(load, (y - b) * self.words_per_row, x0 - a as i64);
            }
        }
        let valid = self.valid_mask(w);
        if self.flat.is_empty() {
            return !n_mask & valid;
        }
        let base = y * self.words_per_row;
        let mut out = 0u64;
        for i in 0..64 {
            if (valid >> i) & 1 == 0 {
                break;
            }
            if (n_mask >> i) & 1 == 1 {
                continue;
            }
            let x = 64 * w + i;
            let mut is_p = true;
            for &a in &self.flat {
                if a > x {
                    break;
                }
                let t = x - a;
                let bit = if t / 64 == w { (out >> (t % 64)) & 1 } else { (load(base + t / 64) >> (t % 64)) & 1 };
                if bit == 1 {
                    is_p = false;
                    break;
                }
            }
            if is_p {
                out |= 1 << i;
            }
        }
        out
    }
}

/// Computes the outcome board of a two-dimensional ruleset with default options.
pub fn compute_grid(ruleset: &Ruleset, width: usize, height: usize) -> Result<OutcomeGrid> {
    compute_grid_with(ruleset, width, height, &GridOptions::default())
}

pub fn compute_grid_with(ruleset: &Ruleset, width: usize, height: usize, opts: &GridOptions) -> Result<OutcomeGrid> {
    ruleset.require_dimension(2)?;
    if width == 0 || height == 0 {
        return Err(Error::InvalidArgument("board dimensions must be positive".into()));
    }
    opts.budget.check(Budget::grid_bytes(width as u128, height as u128))?;
    let plan = Plan::new(ruleset, width);
    let parallel = match opts.strategy {
        Strategy::Sequential => false,
        Strategy::Parallel => true,
        Strategy::Auto => width.saturating_mul(height) >= 1 << 20,
    };
    let bits = if parallel { run_parallel(&plan, height) } else { run_sequential(&plan, height) };
    Ok(OutcomeGrid::from_words(width, height, bits).with_ruleset(ruleset.clone()))
}

fn run_sequential(plan: &Plan, height: usize) -> Vec<u64> {
    let wpr = plan.words_per_row;
    let mut bits = vec![0u64; wpr * height];
    for y in 0..height {
        for w in 0..wpr {
            let v = plan.word(&|i| bits[i], y, w);
            bits[y * wpr + w] = v;
        }
    }
    bits
}

#[cfg(not(feature = "parallel"))]
fn run_parallel(plan: &Plan, height: usize) -> Vec<u64> {
    run_sequential(plan, height)
}

#[cfg(feature = "parallel")]
fn run_parallel(plan: &Plan, height: usize) -> Vec<u64> {
    use rayon::prelude::*;
    use std::sync::atomic::{AtomicU64, Ordering};

    const TILE_WORDS: usize = 16;
    const TILE_ROWS: usize = 256;

    let wpr = plan.words_per_row;
    let cells: Vec<AtomicU64> = (0..wpr * height).map(|_| AtomicU64::new(0)).collect();
    let tiles_x = wpr.div_ceil(TILE_WORDS);
    let tiles_y = height.div_ceil(TILE_ROWS);
    let load = |i: usize| cells[i].load(Ordering::Relaxed);
    // Every dependency of a tile lies in the same tile (earlier in row-major order) or in a
    // tile on an earlier anti-diagonal; the join at the end of each diagonal orders them.
    for diag in 0..tiles_x + tiles_y - 1 {
        let lo = diag.saturating_sub(tiles_y - 1);
        let hi = diag.min(tiles_x - 1);
        (lo..=hi).into_par_iter().for_each(|tx| {
            let ty = diag - tx;
            let w_end = ((tx + 1) * TILE_WORDS).min(wpr);
            for y in ty * TILE_ROWS..((ty + 1) * TILE_ROWS).min(height) {
                for w in tx * TILE_WORDS..w_end {
                    let v = plan.word(&load, y, w);
                    cells[y * wpr + w].store(v, Ordering::Relaxed);
                }
            }
        });
    }
    cells.into_iter().map(AtomicU64::into_inner).collect()
}

/// Outcomes `o(0), ..., o(n-1)` of a one-dimensional ruleset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeSequence {
    bits: Vec<bool>,
    max_move: u64,
}

impl OutcomeSequence {
    pub fn from_bits(bits: Vec<bool>, max_move: u64) -> Self {
        Self { bits, max_move }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> Outcome {
        Outcome::from_is_p(self.bits[i])
    }

    /// Largest move of the generating ruleset, used as the certification margin.
    pub fn max_move(&self) -> u64 {
        self.max_move
    }

    pub fn p_positions(&self) -> Vec<usize> {
        (0..self.bits.len()).filter(|&i| self.bits[i]).collect()
    }
}

impl fmt::Display for OutcomeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "P" } else { "N" })?;
        }
        Ok(())
    }
}

pub fn compute_sequence(ruleset: &Ruleset, n: usize) -> Result<OutcomeSequence> {
    ruleset.require_dimension(1)?;
    if n == 0 {
        return Err(Error::InvalidArgument("sequence length must be positive".into()));
    }
    let moves: Vec<usize> = ruleset.moves().iter().filter_map(|m| usize::try_from(m.x()).ok()).filter(|&s| s < n).collect();
    let mut bits = vec![false; n];
    for x in 0..n {
        bits[x] = moves.iter().all(|&s| s > x || !bits[x - s]);
    }
    Ok(OutcomeSequence::from_bits(bits, ruleset.max_component()))
}

/// Outcomes over a box `[0, b_1) x ... x [0, b_d)` for a ruleset of any dimension up to 6.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DdGrid {
    bounds: Vec<usize>,
    strides: Vec<usize>,
    cells: Vec<bool>,
}

impl DdGrid {
    pub fn bounds(&self) -> &[usize] {
        &self.bounds
    }

    fn index(&self, pos: &[u64]) -> Option<usize> {
        if pos.len() != self.bounds.len() {
            return None;
        }
        let mut idx = 0;
        for ((&p, &b), &s) in pos.iter().zip(&self.bounds).zip(&self.strides) {
            if p >= b as u64 {
                return None;
            }
            idx += p as usize * s;
        }
        Some(idx)
    }

    /// True when `pos` is a P-position; `None` outside the box.
    pub fn get(&self, pos: &[u64]) -> Option<bool> {
        self.index(pos).map(|i| self.cells[i])
    }

    pub fn outcome(&self, pos: &[u64]) -> Option<Outcome> {
        self.get(pos).map(Outcome::from_is_p)
    }

    /// Every position of the box in index order together with its P flag.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<u64>, bool)> + '_ {
        (0..self.cells.len()).map(move |idx| {
            let mut rem = idx;
            let mut pos = vec![0u64; self.bounds.len()];
            for k in (0..self.bounds.len()).rev() {
                pos[k] = (rem / self.strides[k]) as u64;
                rem %= self.strides[k];
            }
            (pos, self.cells[idx])
        })
    }
}

fn i_at(pos: &[u64], strides: &[usize]) -> usize {
    pos.iter().zip(strides).map(|(&p, &s)| p as usize * s).sum()
}

pub fn compute_dd(ruleset: &Ruleset, bounds: &[usize]) -> Result<DdGrid> {
    compute_dd_with(ruleset, bounds, Budget::default())
}

pub fn compute_dd_with(ruleset: &Ruleset, bounds: &[usize], budget: Budget) -> Result<DdGrid> {
    let d = ruleset.dimension();
    if bounds.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: bounds.len() });
    }
    if d > 6 {
        return Err(Error::InvalidArgument("dimension above 6".into()));
    }
    if bounds.contains(&0) {
        return Err(Error::InvalidArgument("box bounds must be positive".into()));
    }
    let total = bounds.iter().try_fold(1u128, |acc, &b| acc.checked_mul(b as u128)).ok_or(Error::Overflow)?;
    budget.check(total)?;
    let total = total as usize;
    let mut strides = vec![1usize; d];
    for k in 1..d {
        strides[k] = strides[k - 1] * bounds[k - 1];
    }
    let moves: Vec<(Vec<u64>, usize)> = ruleset
        .moves()
        .iter()
        .filter(|m| m.components().iter().zip(bounds).all(|(&c, &b)| c < b as u64))
        .map(|m| (m.components().to_vec(), i_at(m.components(), &strides)))
        .collect();
    let mut cells = vec![false; total];
    let mut pos = vec![0u64; d];
    for idx in 0..total {
        cells[idx] = moves.iter().all(|(m, off)| !m.iter().zip(&pos).all(|(c, p)| c <= p) || !cells[idx - off]);
        for k in 0..d {
            pos[k] += 1;
            if pos[k] < bounds[k] as u64 {
                break;
            }
            pos[k] = 0;
        }
    }
    Ok(DdGrid { bounds: bounds.to_vec(), strides, cells })
}

//! Boundary estimation, wedge-by-wedge segmentation checks and N-percolation.

use std::collections::VecDeque;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::automaton::{Bound, SegmentSpec};
use crate::error::{Error, Result};
use crate::oracle::OutcomeGrid;
use crate::par;
use crate::periodicity::{find_period, line_period_where, LineSpec};

/// A scored boundary line `y = slope * x + offset`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub slope: Ratio<i64>,
    pub offset: Ratio<i64>,
    pub score: f64,
}

impl Candidate {
    pub fn bound(&self) -> Bound {
        Bound::new(self.slope, self.offset)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EstimateOptions {
    /// Largest numerator and denominator of a candidate slope.
    pub max_pq: u64,
    /// Minimum texture contrast (total variation distance, in `[0, 1]`).
    pub threshold: f64,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        Self { max_pq: 20, threshold: 0.05 }
    }
}

pub fn estimate_boundaries(grid: &OutcomeGrid, max_pq: u64) -> Result<Vec<Candidate>> {
    estimate_boundaries_with(grid, &EstimateOptions { max_pq, ..Default::default() })
}

const CODES: usize = 16;

/// Local texture at `(x, y)`: the 2x2 block with lower-left corner there, as a 4-bit code.
fn texture(grid: &OutcomeGrid, x: usize, y: usize) -> usize {
    grid.get(x, y) as usize
        | (grid.get(x, y + 1) as usize) << 1
        | (grid.get(x + 1, y) as usize) << 2
        | (grid.get(x + 1, y + 1) as usize) << 3
}

/// Band thickness, measured vertically, used both for scoring and for suppressing near-duplicates.
fn band(grid: &OutcomeGrid) -> usize {
    (grid.width().max(grid.height()) / 16).max(8)
}

/// Scores every reduced slope `p/q` with `p, q <= max_pq` by the texture contrast between two
/// bands on either side of the best offset, then drops candidates within one band thickness of a
/// stronger one or crossing a stronger one over the board. Sorted by decreasing score.
pub fn estimate_boundaries_with(grid: &OutcomeGrid, opts: &EstimateOptions) -> Result<Vec<Candidate>> {
    let (w, h) = (grid.width(), grid.height());
    if w < 64 || h < 64 {
        return Err(Error::GridTooSmall(format!("boundary estimation needs at least 64x64, got {w}x{h}")));
    }
    let cut = w.max(h) / 16;
    let t = band(grid);
    let mut cells = Vec::with_capacity(w * h);
    for y in cut..h - 1 {
        for x in cut..w - 1 {
            cells.push((x as i64, y as i64, texture(grid, x, y) as u8));
        }
    }
    let slopes: Vec<(i64, i64)> =
        (1..=opts.max_pq as i64).flat_map(|p| (1..=opts.max_pq as i64).map(move |q| (p, q))).filter(|&(p, q)| p.gcd(&q) == 1).collect();
    let min_band = (w / 2) as u32;
    let found = par::map((0..slopes.len()).collect(), |i| {
        let (p, q) = slopes[i];
        let cmin = q * cut as i64 - p * (w as i64 - 2);
        let cmax = q * (h as i64 - 2) - p * cut as i64;
        let n = (cmax - cmin + 1) as usize;
        let mut cum = vec![[0u32; CODES]; n + 1];
        for &(x, y, code) in &cells {
            cum[(q * y - p * x - cmin) as usize + 1][code as usize] += 1;
        }
        for i in 1..=n {
            let prev = cum[i - 1];
            for (v, p) in cum[i].iter_mut().zip(prev) {
                *v += p;
            }
        }
        let width = t * q as usize;
        let step = (q as usize / 2).max(1);
        let mut best: Option<(f64, usize)> = None;
        let mut k = width;
        while k + width <= n {
            let below: Vec<u32> = (0..CODES).map(|c| cum[k][c] - cum[k - width][c]).collect();
            let above: Vec<u32> = (0..CODES).map(|c| cum[k + width][c] - cum[k][c]).collect();
            let (nb, na) = (below.iter().sum::<u32>(), above.iter().sum::<u32>());
            if nb >= min_band && na >= min_band {
                let score = 0.5 * (0..CODES).map(|c| (below[c] as f64 / nb as f64 - above[c] as f64 / na as f64).abs()).sum::<f64>();
                if best.is_none_or(|(s, _)| score > s) {
                    best = Some((score, k));
                }
            }
            k += step;
        }
        best.filter(|&(s, _)| s > opts.threshold).map(|(score, k)| Candidate {
            slope: Ratio::new(p, q),
            offset: Ratio::new(k as i64 + cmin, q),
            score,
        })
    });
    let mut all: Vec<Candidate> = found.into_iter().flatten().collect();
    all.sort_by(|a, b| b.score.total_cmp(&a.score).then(a.slope.cmp(&b.slope)));
    let mut kept: Vec<Candidate> = Vec::new();
    for c in all {
        let close = kept.iter().any(|k| {
            let gap = [0.0, w as f64].iter().map(|&x| (c.bound().at(x) - k.bound().at(x)).abs()).fold(0.0, f64::max);
            gap < t as f64
        });
        let crosses = kept.iter().any(|k| {
            let (lo, hi) = if c.slope < k.slope { (c.bound(), k.bound()) } else { (k.bound(), c.bound()) };
            check_order(&lo, &hi, w).is_err()
        });
        if !close && !crosses {
            kept.push(c);
        }
    }
    Ok(kept)
}

#[derive(Clone, Copy, Debug)]
pub struct SegmentationOptions {
    /// Largest numerator and denominator tried for interior line bundles.
    pub max_pq: u64,
    /// Minimum fraction of the board inside certified wedges.
    pub coverage_threshold: f64,
    /// Run percolation on every wedge.
    pub percolation: bool,
}

impl Default for SegmentationOptions {
    fn default() -> Self {
        Self { max_pq: 20, coverage_threshold: 0.98, percolation: true }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WedgeReport {
    pub index: usize,
    pub segment: SegmentSpec,
    /// `rows`, `columns` or `lines p/q`.
    pub method: String,
    pub tested: usize,
    pub certified: usize,
    pub pass: bool,
    pub cells: u64,
    /// Largest certified period among the tested sequences.
    pub max_period: u64,
    /// `(4-connected, 8-connected)` percolation, when the wedge is wide enough to test.
    pub percolates: Option<(bool, bool)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentationReport {
    pub boundaries: Vec<Bound>,
    pub k: usize,
    pub coverage: f64,
    pub wedges: Vec<WedgeReport>,
    pub pass: bool,
}

pub fn verify_segmentation(grid: &OutcomeGrid, lines: &[Bound]) -> Result<SegmentationReport> {
    verify_segmentation_with(grid, lines, &SegmentationOptions::default())
}

/// Sorts lines by slope, rejects pairs that cross over `[0, W)`, and certifies each wedge between
/// consecutive lines: the bottom wedge by its rows, the top wedge by its columns and the interior
/// wedges by a bundle of parallel lattice lines for some slope strictly inside the wedge.
pub fn verify_segmentation_with(grid: &OutcomeGrid, lines: &[Bound], opts: &SegmentationOptions) -> Result<SegmentationReport> {
    let mut lines = lines.to_vec();
    lines.sort_by(|a, b| a.slope.cmp(&b.slope).then(a.offset.cmp(&b.offset)));
    for pair in lines.windows(2) {
        check_order(&pair[0], &pair[1], grid.width())?;
    }
    let margin = grid.ruleset().map_or(0, |r| r.max_component() as usize);
    let mut wedges = Vec::with_capacity(lines.len() + 1);
    for i in 0..=lines.len() {
        let lower = i.checked_sub(1).map(|j| lines[j]);
        let upper = lines.get(i).copied();
        let segment = SegmentSpec { lower, upper };
        let mut report = match (lower, upper) {
            (None, _) => certify_rows(grid, &segment, margin),
            (Some(_), None) => certify_columns(grid, &segment, margin),
            (Some(lo), Some(hi)) => certify_bundle(grid, &segment, lo.slope, hi.slope, opts.max_pq),
        };
        report.index = i;
        report.cells = count_cells(grid, &segment);
        if opts.percolation {
            let p4 = n_percolates(grid, &segment, 4);
            let p8 = n_percolates(grid, &segment, 8);
            report.percolates = match (p4, p8) {
                (Ok(a), Ok(b)) => Some((a.percolates, b.percolates)),
                _ => None,
            };
        }
        wedges.push(report);
    }
    let total = (grid.width() * grid.height()) as f64;
    let covered: u64 = wedges.iter().filter(|w| w.pass).map(|w| w.cells).sum();
    let coverage = if total > 0.0 { covered as f64 / total } else { 0.0 };
    let pass = wedges.iter().all(|w| w.pass) && coverage >= opts.coverage_threshold;
    Ok(SegmentationReport { boundaries: lines, k: wedges.len(), coverage, wedges, pass })
}

fn check_order(lo: &Bound, hi: &Bound, width: usize) -> Result<()> {
    if lo.slope == hi.slope {
        if lo.offset == hi.offset {
            return Err(Error::DegenerateSegment(format!("duplicate boundary {lo}")));
        }
        return Ok(());
    }
    // lo has the smaller slope, so it is below hi to the right of their intersection.
    let x = (hi.offset - lo.offset) / (lo.slope - hi.slope);
    if x > Ratio::from_integer(0) && x < Ratio::from_integer(width as i64) {
        return Err(Error::CrossingLines { x: x.floor().to_integer() as u64 });
    }
    if x >= Ratio::from_integer(width as i64) {
        return Err(Error::DegenerateSegment(format!("boundaries {lo} and {hi} are out of order on the board")));
    }
    Ok(())
}

fn count_cells(grid: &OutcomeGrid, segment: &SegmentSpec) -> u64 {
    let mut n = 0;
    for y in 0..grid.height() {
        for x in 0..grid.width() {
            n += segment.contains(x as u64, y as u64) as u64;
        }
    }
    n
}

fn empty_report(segment: &SegmentSpec, method: String) -> WedgeReport {
    WedgeReport { index: 0, segment: *segment, method, tested: 0, certified: 0, pass: false, cells: 0, max_period: 0, percolates: None }
}

/// Certifies each run of at least a quarter of the board, taken from a row or column inside the wedge.
fn certify_runs(
    segment: &SegmentSpec,
    method: &str,
    count: usize,
    len: usize,
    margin: usize,
    run: impl Fn(usize) -> Vec<bool> + Sync + Send,
) -> WedgeReport {
    let results = par::map((0..count).collect(), |i| {
        let bits = run(i);
        (bits.len() >= len / 4 && bits.len() >= 2).then(|| find_period(&bits, margin))
    });
    let mut r = empty_report(segment, method.to_string());
    for found in results.into_iter().flatten() {
        r.tested += 1;
        if let Some((_, period)) = found {
            r.certified += 1;
            r.max_period = r.max_period.max(period as u64);
        }
    }
    r.pass = r.tested > 0 && r.tested == r.certified;
    r
}

fn certify_rows(grid: &OutcomeGrid, segment: &SegmentSpec, margin: usize) -> WedgeReport {
    certify_runs(segment, "rows", grid.height(), grid.width(), margin, |y| {
        (0..grid.width()).filter(|&x| segment.contains(x as u64, y as u64)).map(|x| grid.get(x, y)).collect()
    })
}

fn certify_columns(grid: &OutcomeGrid, segment: &SegmentSpec, margin: usize) -> WedgeReport {
    certify_runs(segment, "columns", grid.width(), grid.height(), margin, |x| {
        (0..grid.height()).filter(|&y| segment.contains(x as u64, y as u64)).map(|y| grid.get(x, y)).collect()
    })
}

/// Tries every slope `p/q` strictly between the wedge's bounding slopes. A slope certifies the
/// wedge when every long enough line `y = p x / q + m` (integer `m`) inside it has a certified
/// period. The best slope is the one with the fewest failures, then the most lines tested.
fn certify_bundle(grid: &OutcomeGrid, segment: &SegmentSpec, lo: Ratio<i64>, hi: Ratio<i64>, max_pq: u64) -> WedgeReport {
    let (w, h) = (grid.width(), grid.height());
    let slopes: Vec<(u64, u64)> = (1..=max_pq)
        .flat_map(|p| (1..=max_pq).map(move |q| (p, q)))
        .filter(|&(p, q)| {
            let s = Ratio::new(p as i64, q as i64);
            p.gcd(&q) == 1 && s > lo && s < hi
        })
        .collect();
    let results = par::map((0..slopes.len()).collect(), |i| {
        let (p, q) = slopes[i];
        let min_points = (w / (4 * q as usize)).max(8);
        let keep = |x: usize, y: usize| segment.contains(x as u64, y as u64);
        let (mut tested, mut certified, mut max_period) = (0usize, 0usize, 0u64);
        let m_lo = -((p as i64 * w as i64) / q as i64) - 1;
        for m in m_lo..h as i64 {
            let Ok(line) = LineSpec::new(p, q, Ratio::from_integer(m)) else { continue };
            if line.points(w, h, keep).len() < min_points {
                continue;
            }
            let Ok(r) = line_period_where(grid, &line, keep) else { continue };
            tested += 1;
            if r.found {
                certified += 1;
                max_period = max_period.max(r.period);
            }
        }
        (p, q, tested, certified, max_period)
    });
    let best = results
        .into_iter()
        .filter(|r| r.2 > 0)
        .min_by_key(|&(p, q, tested, certified, _)| (tested - certified, std::cmp::Reverse(tested), p + q));
    match best {
        Some((p, q, tested, certified, max_period)) => {
            WedgeReport { tested, certified, max_period, pass: tested == certified, ..empty_report(segment, format!("lines {p}/{q}")) }
        }
        None => empty_report(segment, "lines".into()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PercolationReport {
    pub percolates: bool,
    pub connectivity: u8,
    /// N-cells in the near-origin tenth of the wedge where the search starts.
    pub sources: usize,
    /// Largest `x + y` reached, and the `x + y` that counts as the far edge.
    pub reached: u64,
    pub target: u64,
    pub witness: Option<Witness>,
}

/// A shortest N-path from a source near the lower edge to a far cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub origin: (u64, u64),
    pub end: (u64, u64),
    /// Number of steps.
    pub length: u64,
}

/// Breadth-first search over N-cells of the wedge, from those within the first tenth of its
/// `x + y` extent to any within the last tenth.
pub fn n_percolates(grid: &OutcomeGrid, segment: &SegmentSpec, connectivity: u8) -> Result<PercolationReport> {
    let (w, h) = (grid.width(), grid.height());
    let neighbours: &[(i64, i64)] = match connectivity {
        4 => &[(1, 0), (-1, 0), (0, 1), (0, -1)],
        8 => &[(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)],
        c => return Err(Error::InvalidArgument(format!("connectivity must be 4 or 8, got {c}"))),
    };
    let inside: Vec<bool> = (0..w * h).map(|i| segment.contains((i % w) as u64, (i / w) as u64)).collect();
    let widest = (0..w).map(|x| (0..h).filter(|&y| inside[y * w + x]).count()).max().unwrap_or(0);
    if widest < 16 {
        return Err(Error::DegenerateSegment(format!("widest column of the wedge has {widest} cells, need 16")));
    }
    let sums = (0..w * h).filter(|&i| inside[i]).map(|i| (i % w + i / w) as u64);
    let (smin, smax) = sums.fold((u64::MAX, 0), |(a, b), s| (a.min(s), b.max(s)));
    let span = smax - smin;
    let near = |s: u64| 10 * (s - smin) <= span;
    let far = |s: u64| 10 * (s - smin) >= 9 * span;
    let target = smin + (9 * span).div_ceil(10);

    let mut dist = vec![u32::MAX; w * h];
    let mut origin = vec![0u32; w * h];
    let mut queue = VecDeque::new();
    for i in 0..w * h {
        if inside[i] && !grid.get(i % w, i / w) && near((i % w + i / w) as u64) {
            dist[i] = 0;
            origin[i] = i as u32;
            queue.push_back(i);
        }
    }
    let sources = queue.len();
    let mut reached = 0;
    while let Some(i) = queue.pop_front() {
        let (x, y) = (i % w, i / w);
        let s = (x + y) as u64;
        reached = reached.max(s);
        if far(s) {
            let o = origin[i] as usize;
            return Ok(PercolationReport {
                percolates: true,
                connectivity,
                sources,
                reached,
                target,
                witness: Some(Witness { origin: ((o % w) as u64, (o / w) as u64), end: (x as u64, y as u64), length: dist[i] as u64 }),
            });
        }
        for &(dx, dy) in neighbours {
            let (nx, ny) = (x as i64 + dx, y as i64 + dy);
            if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                continue;
            }
            let j = ny as usize * w + nx as usize;
            if inside[j] && dist[j] == u32::MAX && !grid.get(nx as usize, ny as usize) {
                dist[j] = dist[i] + 1;
                origin[j] = origin[i];
                queue.push_back(j);
            }
        }
    }
    Ok(PercolationReport { percolates: false, connectivity, sources, reached, target, witness: None })
}

//! Board-level checks of translation lemmas for two- and three-move rulesets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{classify, Ruleset};
use crate::oracle::OutcomeGrid;

/// Maximum number of counterexamples kept per report.
pub const MAX_COUNTEREXAMPLES: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub claim: String,
    pub pass: bool,
    pub counterexamples: Vec<(u64, u64)>,
    pub cells_checked: u64,
}

impl VerificationReport {
    pub(crate) fn new(claim: impl Into<String>) -> Self {
        Self { claim: claim.into(), pass: true, counterexamples: Vec::new(), cells_checked: 0 }
    }

    pub(crate) fn record(&mut self, ok: bool, x: usize, y: usize) {
        self.cells_checked += 1;
        if !ok {
            self.pass = false;
            if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
                self.counterexamples.push((x as u64, y as u64));
            }
        }
    }
}

/// Checks `o(x) = o(x + s1 + s2)` wherever both cells lie on the board.
pub fn verify_ptop(grid: &OutcomeGrid, ruleset: &Ruleset) -> Result<VerificationReport> {
    ruleset.require_dimension(2)?;
    ruleset.require_len(2)?;
    let p = ruleset.pairs();
    let (dx, dy) = ((p[0].0 + p[1].0) as usize, (p[0].1 + p[1].1) as usize);
    let mut report = VerificationReport::new("two-move-p-to-p");
    for y in 0..grid.height().saturating_sub(dy) {
        for x in 0..grid.width().saturating_sub(dx) {
            report.record(grid.get(x, y) == grid.get(x + dx, y + dy), x, y);
        }
    }
    Ok(report)
}

/// Three-valued cell lookup: `Missing` for negative coordinates (the position does not exist),
/// `Unknown` beyond the board.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Cell {
    P,
    N,
    Missing,
    Unknown,
}

fn cell(grid: &OutcomeGrid, x: i64, y: i64) -> Cell {
    if x < 0 || y < 0 {
        return Cell::Missing;
    }
    match grid.try_get(x, y) {
        Some(true) => Cell::P,
        Some(false) => Cell::N,
        None => Cell::Unknown,
    }
}

/// An implication `hyps are N => one of concls is P` evaluated at a P-position base.
/// Skipped when any involved cell is beyond the board. Missing hypothesis cells make the
/// implication vacuous; missing conclusion cells count as not P.
fn implication(grid: &OutcomeGrid, hyps: &[(i64, i64)], concls: &[(i64, i64)]) -> Option<bool> {
    let hs: Vec<Cell> = hyps.iter().map(|&(x, y)| cell(grid, x, y)).collect();
    let cs: Vec<Cell> = concls.iter().map(|&(x, y)| cell(grid, x, y)).collect();
    if hs.iter().chain(&cs).any(|&c| c == Cell::Unknown) {
        return None;
    }
    if hs.iter().any(|&c| c != Cell::N) {
        return Some(true);
    }
    Some(cs.contains(&Cell::P))
}

type Item = (&'static str, Box<dyn Fn(i64, i64) -> (Vec<(i64, i64)>, Vec<(i64, i64)>)>);

fn run_items(grid: &OutcomeGrid, items: Vec<Item>, only_p_bases: bool) -> Vec<VerificationReport> {
    items
        .into_iter()
        .map(|(name, f)| {
            let mut report = VerificationReport::new(name);
            for y in 0..grid.height() {
                for x in 0..grid.width() {
                    if only_p_bases && !grid.get(x, y) {
                        continue;
                    }
                    let (hyps, concls) = f(x as i64, y as i64);
                    if let Some(ok) = implication(grid, &hyps, &concls) {
                        report.record(ok, x, y);
                    }
                }
            }
            report
        })
        .collect()
}

/// Checks every applicable three-move lemma; each item is reported separately.
pub fn verify_three_move_lemmas(grid: &OutcomeGrid, ruleset: &Ruleset) -> Result<Vec<VerificationReport>> {
    ruleset.require_dimension(2)?;
    ruleset.require_len(3)?;
    let class = classify(ruleset);
    let mut reports = Vec::new();

    if class.additive {
        let sum = class.sum_move.expect("additive witness");
        let parts: Vec<(u64, u64)> = ruleset.pairs().into_iter().filter(|&m| m != sum).collect();
        let (a, b) = (parts[0].0 as i64, parts[0].1 as i64);
        let (c, d) = (parts[1].0 as i64, parts[1].1 as i64);
        // The base cell is P by itself in the pure additive lemma, so it runs over every cell
        // with the two translates as hypotheses stated as "not N".
        let mut base = VerificationReport::new("additive");
        for y in 0..grid.height() {
            for x in 0..grid.width() {
                let (xi, yi) = (x as i64, y as i64);
                let t1 = cell(grid, xi + 2 * a + c, yi + 2 * b + d);
                let t2 = cell(grid, xi + 2 * c + a, yi + 2 * d + b);
                if t1 == Cell::Unknown || t2 == Cell::Unknown {
                    continue;
                }
                base.record(!(t1 == Cell::P && t2 == Cell::P) || grid.get(x, y), x, y);
            }
        }
        reports.push(base);
        let items: Vec<Item> = vec![
            (
                "additive-p-to-p-i",
                Box::new(move |x, y| {
                    (vec![(x + 2 * a + 2 * c, y + 2 * b + 2 * d)], vec![(x + 2 * c + a, y + 2 * d + b), (x + 2 * a + c, y + 2 * b + d)])
                }),
            ),
            ("additive-p-to-p-ii", Box::new(move |x, y| (vec![(x + 2 * a + c, y + 2 * b + d)], vec![(x + 2 * a, y + 2 * b)]))),
            ("additive-p-to-p-iii", Box::new(move |x, y| (vec![(x + 2 * c + a, y + 2 * d + b)], vec![(x + 2 * c, y + 2 * d)]))),
            (
                "additive-p-to-p-iv",
                Box::new(move |x, y| {
                    (vec![(x + 2 * c + a, y + 2 * d + b), (x + 2 * a + c, y + 2 * b + d)], vec![(x + 2 * a + 2 * c, y + 2 * b + 2 * d)])
                }),
            ),
        ];
        reports.extend(run_items(grid, items, true));
    }

    if let Some((a, b, c)) = class.twin_progression {
        let (a, b, c) = (a as i64, b as i64, c as i64);
        let items: Vec<Item> = vec![("twin-progression", Box::new(move |x, y| (vec![], vec![(x + 2 * a + 2 * c, y + 2 * b + 2 * c)])))];
        reports.extend(run_items(grid, items, true));
    }

    if let Some((a, b, c, d)) = class.asymmetric_params {
        let (a, b, c, d) = (a as i64, b as i64, c as i64, d as i64);
        let items: Vec<Item> = vec![
            (
                "asymmetric-additive-i",
                Box::new(move |x, y| {
                    (vec![(x + 2 * a + 2 * c, y + 2 * d)], vec![(x + a + 2 * c, y + 2 * d - b), (x + 2 * a + c, y + d - b)])
                }),
            ),
            ("asymmetric-additive-ii", Box::new(move |x, y| (vec![(x + a + c, y + 2 * b + d)], vec![(x, y + 2 * b)]))),
            ("asymmetric-additive-iii", Box::new(move |x, y| (vec![(x + 2 * a + c, y + b + d)], vec![(x + 2 * a, y)]))),
            (
                "asymmetric-additive-iv",
                Box::new(move |x, y| {
                    (vec![(x + a + 2 * c, y + 2 * d - b), (x + 2 * a + c, y + d - b)], vec![(x + 2 * a + 2 * c, y + 2 * d)])
                }),
            ),
        ];
        reports.extend(run_items(grid, items, true));
    }

    if reports.is_empty() {
        return Err(Error::ShapeMismatch("ruleset is neither additive, asymmetric additive nor a twin progression".into()));
    }
    Ok(reports)
}

/// Checks the converse of the additive lemma: `(x, y)` in P forces both translates into P.
/// This does not hold in general; the report locates where it breaks.
pub fn verify_additive_converse(grid: &OutcomeGrid, ruleset: &Ruleset) -> Result<VerificationReport> {
    ruleset.require_dimension(2)?;
    ruleset.require_len(3)?;
    let sum = classify(ruleset).sum_move.ok_or_else(|| Error::ShapeMismatch("ruleset is not additive".into()))?;
    let parts: Vec<(u64, u64)> = ruleset.pairs().into_iter().filter(|&m| m != sum).collect();
    let (a, b) = (parts[0].0 as i64, parts[0].1 as i64);
    let (c, d) = (parts[1].0 as i64, parts[1].1 as i64);
    let mut report = VerificationReport::new("additive-converse");
    for (x, y) in grid.p_cells().collect::<Vec<_>>() {
        let (xi, yi) = (x as i64, y as i64);
        let t1 = cell(grid, xi + 2 * a + c, yi + 2 * b + d);
        let t2 = cell(grid, xi + 2 * c + a, yi + 2 * d + b);
        if t1 == Cell::Unknown || t2 == Cell::Unknown {
            continue;
        }
        report.record(t1 == Cell::P && t2 == Cell::P, x, y);
    }
    Ok(report)
}

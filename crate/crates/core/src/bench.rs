//! Latency harness: closed-form two-move solver against the dynamic-programming oracle.

use std::fmt::Write as _;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::closed_form::solve_two_move_dd;
use crate::error::Result;
use crate::model::{Position, Ruleset};
use crate::oracle::{compute_dd_with, compute_grid_with, Budget, GridOptions};

#[derive(Clone, Debug)]
pub struct BenchConfig {
    /// Coordinates are drawn uniformly from `[0, 2^m)` for each `m`.
    pub magnitudes: Vec<u32>,
    pub queries: usize,
    pub warmup: usize,
    /// Oracle queries per magnitude; each one builds the board up to the query point.
    pub oracle_queries: usize,
    pub seed: u64,
    pub budget: Budget,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self { magnitudes: vec![8, 16, 32, 60], queries: 10_000, warmup: 100, oracle_queries: 20, seed: 0, budget: Budget::from_mib(256) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub method: String,
    pub magnitude_bits: u32,
    pub queries: usize,
    pub median_ns: u64,
    pub p99_ns: u64,
    /// `ok`, or `infeasible` when the largest board of the workload exceeds the budget.
    pub status: String,
    /// Oracle answers that disagree with the closed form.
    pub mismatches: u64,
}

/// Uniform positions in `[0, 2^bits)^d`, reproducible from the seed.
pub fn workload(dimension: usize, bits: u32, count: usize, seed: u64) -> Vec<Position> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ u64::from(bits));
    let max = if bits >= 64 { u64::MAX } else { (1u64 << bits) - 1 };
    (0..count).map(|_| Position((0..dimension).map(|_| rng.random_range(0..=max)).collect())).collect()
}

/// Nearest-rank quantile of sorted samples.
pub fn quantile(sorted: &[u64], q: f64) -> u64 {
    if sorted.is_empty() {
        return 0;
    }
    let rank = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    sorted[rank - 1]
}

fn summarize(method: &str, bits: u32, mut samples: Vec<u64>, mismatches: u64) -> BenchRow {
    samples.sort_unstable();
    BenchRow {
        method: method.into(),
        magnitude_bits: bits,
        queries: samples.len(),
        median_ns: quantile(&samples, 0.5),
        p99_ns: quantile(&samples, 0.99),
        status: "ok".into(),
        mismatches,
    }
}

/// Bytes the oracle needs for a board `[0, 2^bits)^d`.
fn oracle_bytes(dimension: usize, bits: u32) -> u128 {
    let side = 1u128 << bits.min(100);
    if dimension == 2 {
        Budget::grid_bytes(side, side)
    } else {
        side.saturating_pow(dimension as u32)
    }
}

fn oracle_is_p(ruleset: &Ruleset, pos: &Position, budget: Budget) -> Result<bool> {
    let c = pos.components();
    if c.len() == 2 {
        let opts = GridOptions { budget, ..Default::default() };
        let g = compute_grid_with(ruleset, c[0] as usize + 1, c[1] as usize + 1, &opts)?;
        Ok(g.get(c[0] as usize, c[1] as usize))
    } else {
        let bounds: Vec<usize> = c.iter().map(|&v| v as usize + 1).collect();
        let g = compute_dd_with(ruleset, &bounds, budget)?;
        Ok(g.get(c).unwrap_or(false))
    }
}

/// Times every query individually. Closed-form rows come first, then oracle rows.
pub fn run_bench(ruleset: &Ruleset, config: &BenchConfig) -> Result<Vec<BenchRow>> {
    ruleset.require_len(2)?;
    let d = ruleset.dimension();
    let mut rows = Vec::new();
    for &bits in &config.magnitudes {
        let positions = workload(d, bits, config.queries + config.warmup, config.seed);
        for p in &positions[..config.warmup] {
            std::hint::black_box(solve_two_move_dd(ruleset, p)?);
        }
        let mut samples = Vec::with_capacity(config.queries);
        for p in &positions[config.warmup..] {
            let t = Instant::now();
            std::hint::black_box(solve_two_move_dd(ruleset, p)?);
            samples.push(t.elapsed().as_nanos() as u64);
        }
        rows.push(summarize("closed-form", bits, samples, 0));
    }
    for &bits in &config.magnitudes {
        if config.budget.check(oracle_bytes(d, bits)).is_err() {
            rows.push(BenchRow {
                method: "oracle".into(),
                magnitude_bits: bits,
                queries: 0,
                median_ns: 0,
                p99_ns: 0,
                status: "infeasible".into(),
                mismatches: 0,
            });
            continue;
        }
        let positions = workload(d, bits, config.oracle_queries, config.seed.wrapping_add(1));
        let mut samples = Vec::with_capacity(positions.len());
        let mut mismatches = 0;
        for p in &positions {
            let t = Instant::now();
            let is_p = oracle_is_p(ruleset, p, config.budget)?;
            samples.push(t.elapsed().as_nanos() as u64);
            mismatches += u64::from(is_p != solve_two_move_dd(ruleset, p)?.is_p());
        }
        rows.push(summarize("oracle", bits, samples, mismatches));
    }
    Ok(rows)
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("method,magnitude_bits,queries,median_ns,p99_ns,status,mismatches\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{},{},{},{}", r.method, r.magnitude_bits, r.queries, r.median_ns, r.p99_ns, r.status, r.mismatches);
    }
    out
}

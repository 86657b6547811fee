use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use vsg_core::automaton::{builtin, run_scheme_with, verify_coloring, Bound, ColoringScheme};
use vsg_core::bench::{bench_csv, run_bench, BenchConfig};
use vsg_core::closed_form::solve_two_move_dd;
use vsg_core::io::{periods_csv, render_colored_ppm, render_overlay_ppm, save_grid, to_json, PALETTE};
use vsg_core::model::parse_ruleset;
use vsg_core::oracle::{compute_dd_with, compute_grid_with, GridOptions};
use vsg_core::periodicity::{find_eventual_period, line_period, row_periods, LineSpec, PeriodReport};
use vsg_core::segmentation::{estimate_boundaries, n_percolates, verify_segmentation};
use vsg_core::verify::{verify_ptop, verify_three_move_lemmas};
use vsg_core::{compute_sequence, Budget, Outcome, OutcomeGrid, Position, Ruleset, VerificationReport};

/// Outcomes, closed forms and pattern analysis for vector subtraction games.
#[derive(Parser)]
#[command(name = "vsg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the P/N board and write it as PBM, PPM, raw, CSV or JSON.
    Grid(GridArgs),
    /// Decide a single position.
    Solve(SolveArgs),
    /// Eventual periods of rows, of a 1-d sequence, or along lattice lines.
    Periods(PeriodsArgs),
    /// Run a coloring scheme and check it against the oracle.
    Scheme(SchemeArgs),
    /// Estimate or check a segmentation into wedges.
    Segments(SegmentsArgs),
    /// Check the translation lemmas for two- and three-move rulesets.
    Verify(VerifyArgs),
    /// Time the closed-form solver against the oracle.
    Bench(BenchArgs),
}

#[derive(Args)]
struct Common {
    /// Ruleset, e.g. "2,1;1,3".
    #[arg(short = 's', long = "ruleset")]
    ruleset: String,
    /// Memory budget for the oracle in MiB.
    #[arg(long)]
    budget: Option<u64>,
    /// Write a JSON report to this file.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct GridArgs {
    #[command(flatten)]
    common: Common,
    /// Board size `WxH`.
    #[arg(short = 'b', long = "board", value_parser = parse_board)]
    board: (usize, usize),
    /// Output file; the format follows the extension. PBM on stdout when absent.
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    common: Common,
    /// Position, e.g. "1000000000000,999999999999".
    #[arg(short = 'p', long)]
    position: String,
}

#[derive(Args)]
struct PeriodsArgs {
    #[command(flatten)]
    common: Common,
    /// Board size `WxH`; for 1-d rulesets only `W` is used.
    #[arg(short = 'b', long = "board", value_parser = parse_board)]
    board: (usize, usize),
    /// Report periods along `p/q+m` instead of rows. Repeatable.
    #[arg(long = "line")]
    lines: Vec<String>,
    /// Write the CSV table here instead of stdout.
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SchemeArgs {
    /// Builtin scheme, e.g. "asym-os", "symadd:2,3" or "arith-add:1".
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    builtin: Option<String>,
    /// Scheme in the text format.
    #[arg(short = 'f', long)]
    file: Option<PathBuf>,
    /// Board size `WxH`.
    #[arg(short = 'b', long = "board", value_parser = parse_board)]
    board: (usize, usize),
    /// Ruleset to check against; defaults to the scheme's target.
    #[arg(short = 's', long = "ruleset")]
    ruleset: Option<String>,
    /// Render the coloring as PPM.
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct SegmentsArgs {
    #[command(flatten)]
    common: Common,
    #[arg(short = 'b', long = "board", value_parser = parse_board)]
    board: (usize, usize),
    /// Boundary line `p/q+m`. Repeatable; estimated from the board when absent.
    #[arg(long = "line")]
    lines: Vec<String>,
    /// Percolation connectivity for each wedge.
    #[arg(long, default_value_t = 4, value_parser = parse_connectivity)]
    connectivity: u8,
    /// Render the board with the boundary lines as PPM.
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    #[arg(short = 'b', long = "board", value_parser = parse_board)]
    board: (usize, usize),
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    common: Common,
    /// Workload seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Timed closed-form queries per magnitude.
    #[arg(long, default_value_t = 10_000)]
    queries: usize,
    /// Coordinate magnitudes in bits.
    #[arg(long, value_delimiter = ',', default_values_t = [8u32, 16, 32, 60])]
    magnitudes: Vec<u32>,
    /// Write the CSV table here instead of stdout.
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

fn parse_board(s: &str) -> std::result::Result<(usize, usize), String> {
    let (w, h) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected WxH, got `{s}`"))?;
    let w: usize = w.trim().parse().map_err(|_| format!("bad width `{w}`"))?;
    let h: usize = h.trim().parse().map_err(|_| format!("bad height `{h}`"))?;
    Ok((w, h))
}

fn parse_connectivity(s: &str) -> std::result::Result<u8, String> {
    match s {
        "4" => Ok(4),
        "8" => Ok(8),
        _ => Err(format!("connectivity must be 4 or 8, got `{s}`")),
    }
}

/// A run either succeeds, or completes with a failed check.
enum Status {
    Ok,
    CheckFailed,
}

impl Common {
    fn ruleset(&self) -> Result<Ruleset> {
        parse_ruleset(&self.ruleset).with_context(|| format!("ruleset `{}`", self.ruleset))
    }

    fn budget(&self) -> Budget {
        self.budget.map(Budget::from_mib).unwrap_or_default()
    }

    fn grid(&self, (w, h): (usize, usize)) -> Result<OutcomeGrid> {
        let opts = GridOptions { budget: self.budget(), ..Default::default() };
        Ok(compute_grid_with(&self.ruleset()?, w, h, &opts)?)
    }
}

fn write_json(path: Option<&Path>, kind: &str, data: serde_json::Value) -> Result<()> {
    if let Some(path) = path {
        std::fs::write(path, to_json(kind, &data)?).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn write_or_print(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    use std::io::Write;
    match path {
        Some(p) => std::fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => std::io::stdout().write_all(bytes).context("writing to stdout"),
    }
}

fn grid(args: GridArgs) -> Result<Status> {
    let g = args.common.grid(args.board)?;
    match &args.output {
        Some(path) => save_grid(&g, path, None)?,
        None => write_or_print(None, &vsg_core::io::render_pbm(&g))?,
    }
    let summary = json!({
        "ruleset": args.common.ruleset()?.to_string(),
        "width": g.width(),
        "height": g.height(),
        "p_positions": g.count_p(),
    });
    write_json(args.common.json.as_deref(), "grid", summary)?;
    Ok(Status::Ok)
}

fn solve(args: SolveArgs) -> Result<Status> {
    let s = args.common.ruleset()?;
    let comps = args
        .position
        .split(',')
        .map(|c| c.trim().parse::<u64>().with_context(|| format!("bad coordinate `{c}`")))
        .collect::<Result<Vec<_>>>()?;
    if comps.len() != s.dimension() {
        bail!("position has {} coordinates but the ruleset has dimension {}", comps.len(), s.dimension());
    }
    let pos = Position(comps);
    let (outcome, method) = if s.len() == 2 {
        (solve_two_move_dd(&s, &pos)?, "closed-form")
    } else {
        let c = pos.components();
        let bounds: Vec<usize> =
            c.iter().map(|&v| usize::try_from(v).map(|v| v.saturating_add(1))).collect::<std::result::Result<_, _>>()?;
        let is_p = if c.len() == 2 {
            let opts = GridOptions { budget: args.common.budget(), ..Default::default() };
            compute_grid_with(&s, bounds[0], bounds[1], &opts)?.get(c[0] as usize, c[1] as usize)
        } else {
            compute_dd_with(&s, &bounds, args.common.budget())?.get(c).unwrap_or(false)
        };
        (Outcome::from_is_p(is_p), "oracle")
    };
    println!("{outcome}");
    write_json(args.common.json.as_deref(), "solve", json!({ "position": pos.components(), "outcome": outcome, "method": method }))?;
    Ok(Status::Ok)
}

fn periods(args: PeriodsArgs) -> Result<Status> {
    let s = args.common.ruleset()?;
    let reports: Vec<PeriodReport> = if s.dimension() == 1 {
        if !args.lines.is_empty() {
            bail!("--line needs a 2-d ruleset");
        }
        vec![find_eventual_period(&compute_sequence(&s, args.board.0)?)]
    } else {
        let g = args.common.grid(args.board)?;
        if args.lines.is_empty() {
            row_periods(&g, 0..g.height())
        } else {
            args.lines.iter().map(|l| Ok(line_period(&g, &l.parse::<LineSpec>()?)?)).collect::<Result<_>>()?
        }
    };
    write_or_print(args.output.as_deref(), periods_csv(&reports).as_bytes())?;
    write_json(args.common.json.as_deref(), "periods", json!(reports))?;
    Ok(if reports.iter().all(|r| r.found) { Status::Ok } else { Status::CheckFailed })
}

fn scheme(args: SchemeArgs) -> Result<Status> {
    let scheme: ColoringScheme = match (&args.builtin, &args.file) {
        (Some(name), _) => builtin(name)?,
        (None, Some(path)) => std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?.parse()?,
        (None, None) => bail!("give --builtin or --file"),
    };
    let target = match &args.ruleset {
        Some(text) => parse_ruleset(text)?,
        None => scheme.target.clone().context("the scheme names no target ruleset; pass -s")?,
    };
    let budget = args.budget.map(Budget::from_mib).unwrap_or_default();
    let (w, h) = args.board;
    let colored = run_scheme_with(&scheme, w, h, budget)?;
    let g = compute_grid_with(&target, w, h, &GridOptions { budget, ..Default::default() })?;
    let report = verify_coloring(&colored, &g, &scheme.segment, &format!("segment {}", scheme.name));
    if let Some(path) = &args.output {
        write_or_print(Some(path), &render_colored_ppm(&colored, &PALETTE))?;
    }
    print_report(&report);
    write_json(args.json.as_deref(), "scheme", json!({ "scheme": scheme.name, "histogram": colored.histogram(), "report": report }))?;
    Ok(if report.pass { Status::Ok } else { Status::CheckFailed })
}

fn segments(args: SegmentsArgs) -> Result<Status> {
    let g = args.common.grid(args.board)?;
    let lines: Vec<Bound> = if args.lines.is_empty() {
        let found = estimate_boundaries(&g, 20)?;
        for c in &found {
            eprintln!("estimated line {}/{}{:+} (score {:.3})", c.slope.numer(), c.slope.denom(), c.offset, c.score);
        }
        found.iter().map(|c| c.bound()).collect()
    } else {
        args.lines.iter().map(|l| l.parse()).collect::<vsg_core::Result<_>>()?
    };
    let report = verify_segmentation(&g, &lines)?;
    let mut percolation = Vec::new();
    for w in &report.wedges {
        let p = n_percolates(&g, &w.segment, args.connectivity).ok();
        println!(
            "wedge {} [{}]: {} {}/{} certified, {} cells{}",
            w.index,
            w.method,
            if w.pass { "pass" } else { "FAIL" },
            w.certified,
            w.tested,
            w.cells,
            p.as_ref().map_or(String::new(), |p| format!(", percolates: {}", p.percolates)),
        );
        percolation.push(p);
    }
    println!("k = {}, coverage {:.4}: {}", report.k, report.coverage, if report.pass { "pass" } else { "FAIL" });
    if let Some(path) = &args.output {
        write_or_print(Some(path), &render_overlay_ppm(&g, &lines))?;
    }
    write_json(args.common.json.as_deref(), "segments", json!({ "report": report, "percolation": percolation }))?;
    Ok(if report.pass { Status::Ok } else { Status::CheckFailed })
}

fn verify(args: VerifyArgs) -> Result<Status> {
    let s = args.common.ruleset()?;
    let g = args.common.grid(args.board)?;
    let reports = match s.len() {
        2 => vec![verify_ptop(&g, &s)?],
        3 => verify_three_move_lemmas(&g, &s)?,
        n => bail!("verify covers two- and three-move rulesets, got {n} moves"),
    };
    reports.iter().for_each(print_report);
    write_json(args.common.json.as_deref(), "verify", json!(reports))?;
    Ok(if reports.iter().all(|r| r.pass) { Status::Ok } else { Status::CheckFailed })
}

fn bench(args: BenchArgs) -> Result<Status> {
    let s = args.common.ruleset()?;
    let config = BenchConfig {
        magnitudes: args.magnitudes,
        queries: args.queries,
        seed: args.seed,
        budget: args.common.budget.map_or(BenchConfig::default().budget, Budget::from_mib),
        ..Default::default()
    };
    let rows = run_bench(&s, &config)?;
    write_or_print(args.output.as_deref(), bench_csv(&rows).as_bytes())?;
    write_json(args.common.json.as_deref(), "bench", json!(rows))?;
    Ok(if rows.iter().all(|r| r.mismatches == 0) { Status::Ok } else { Status::CheckFailed })
}

fn print_report(r: &VerificationReport) {
    let verdict = if r.pass { "pass" } else { "FAIL" };
    println!("{}: {verdict} ({} cells checked)", r.claim, r.cells_checked);
    if !r.pass {
        eprintln!("{}: counterexamples {:?}", r.claim, r.counterexamples);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Grid(a) => grid(a),
        Command::Solve(a) => solve(a),
        Command::Periods(a) => periods(a),
        Command::Scheme(a) => scheme(a),
        Command::Segments(a) => segments(a),
        Command::Verify(a) => verify(a),
        Command::Bench(a) => bench(a),
    };
    match result {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::CheckFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

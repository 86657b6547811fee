//! Coloring schemes: seed cells plus offset rules whose fixpoint paints P-positions.
//!
//! Every rule offset is nonnegative and nonzero, so a cell only receives colors from cells with
//! a smaller `x + y`. Sweeping anti-diagonals in increasing order therefore reaches the least
//! fixpoint in one pass, independent of any application order.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Ruleset;
use crate::oracle::{Budget, OutcomeGrid};
use crate::periodicity::parse_ratio;
use crate::verify::VerificationReport;

/// At most this many colors fit in the per-cell candidate mask.
pub const MAX_COLORS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Color {
    pub id: u16,
    pub name: String,
}

/// One side of a wedge: the line `y = slope * x + offset`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bound {
    pub slope: Ratio<i64>,
    pub offset: Ratio<i64>,
}

impl Bound {
    pub fn new(slope: Ratio<i64>, offset: Ratio<i64>) -> Self {
        Self { slope, offset }
    }

    /// Sign of `y - (slope * x + offset)`, computed exactly.
    pub fn side(&self, x: u64, y: u64) -> std::cmp::Ordering {
        let (sn, sd) = (*self.slope.numer() as i128, *self.slope.denom() as i128);
        let (on, od) = (*self.offset.numer() as i128, *self.offset.denom() as i128);
        let lhs = y as i128 * sd * od;
        let rhs = sn * x as i128 * od + on * sd;
        lhs.cmp(&rhs)
    }

    /// Value at `x` as a float, for rendering and gap estimates.
    pub fn at(&self, x: f64) -> f64 {
        let r = |v: Ratio<i64>| *v.numer() as f64 / *v.denom() as f64;
        r(self.slope) * x + r(self.offset)
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.slope, self.offset)
    }
}

impl FromStr for Bound {
    type Err = Error;

    /// `p/q`, `p/q+m` or `p/q-m`, where `m` may itself be a fraction.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("line `{s}`: expected `p/q+m`"));
        let (slope, offset) = match s.char_indices().skip(1).find(|&(_, c)| c == '+' || c == '-') {
            Some((i, '+')) => (&s[..i], &s[i + 1..]),
            Some((i, _)) => (&s[..i], &s[i..]),
            None => (s, "0"),
        };
        Ok(Bound::new(parse_ratio(slope).ok_or_else(bad)?, parse_ratio(offset).ok_or_else(bad)?))
    }
}

/// The open wedge `lower(x) < y < upper(x)`; a missing side is unbounded.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SegmentSpec {
    pub lower: Option<Bound>,
    pub upper: Option<Bound>,
}

impl SegmentSpec {
    pub fn quadrant() -> Self {
        Self::default()
    }

    pub fn new(lower: Option<Bound>, upper: Option<Bound>) -> Result<Self> {
        if let (Some(l), Some(u)) = (lower, upper) {
            if l.slope > u.slope {
                return Err(Error::DegenerateSegment(format!("lower slope {} exceeds upper slope {}", l.slope, u.slope)));
            }
        }
        Ok(Self { lower, upper })
    }

    /// `alpha x + k < y < beta x + m`.
    pub fn between(alpha: Ratio<i64>, k: Ratio<i64>, beta: Ratio<i64>, m: Ratio<i64>) -> Result<Self> {
        Self::new(Some(Bound::new(alpha, k)), Some(Bound::new(beta, m)))
    }

    pub fn above(alpha: Ratio<i64>, k: Ratio<i64>) -> Self {
        Self { lower: Some(Bound::new(alpha, k)), upper: None }
    }

    pub fn below(beta: Ratio<i64>, m: Ratio<i64>) -> Self {
        Self { lower: None, upper: Some(Bound::new(beta, m)) }
    }

    pub fn contains(&self, x: u64, y: u64) -> bool {
        use std::cmp::Ordering::*;
        self.lower.is_none_or(|b| b.side(x, y) == Greater) && self.upper.is_none_or(|b| b.side(x, y) == Less)
    }

    pub fn is_quadrant(&self) -> bool {
        self.lower.is_none() && self.upper.is_none()
    }
}

impl fmt::Display for SegmentSpec {
    /// `alpha k beta m`, with `- -` for a missing side.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.lower {
            Some(b) => write!(f, "{b}")?,
            None => f.write_str("- -")?,
        }
        f.write_char(' ')?;
        match self.upper {
            Some(b) => write!(f, "{b}"),
            None => f.write_str("- -"),
        }
    }
}

impl FromStr for SegmentSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!("segment `{s}`: expected `alpha k beta m`")));
        }
        let side = |a: &str, b: &str| -> Result<Option<Bound>> {
            match (a, b) {
                ("-", "-") => Ok(None),
                _ => {
                    let bad = || Error::Parse(format!("segment `{s}`: bad rational"));
                    Ok(Some(Bound::new(parse_ratio(a).ok_or_else(bad)?, parse_ratio(b).ok_or_else(bad)?)))
                }
            }
        };
        SegmentSpec::new(side(parts[0], parts[1])?, side(parts[2], parts[3])?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InitShape {
    Point {
        x: u64,
        y: u64,
    },
    /// `(x + t dx, y + t dy)` for `t >= 0`, with `(dx, dy)` either `(1, 0)` or `(0, 1)`.
    Ray {
        x: u64,
        y: u64,
        dx: u64,
        dy: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InitEntry {
    pub color: u16,
    pub shape: InitShape,
}

impl InitEntry {
    fn covers(&self, x: u64, y: u64) -> bool {
        match self.shape {
            InitShape::Point { x: px, y: py } => (px, py) == (x, y),
            InitShape::Ray { x: rx, y: ry, dx: 1, .. } => y == ry && x >= rx,
            InitShape::Ray { x: rx, y: ry, .. } => x == rx && y >= ry,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpdateRule {
    pub from: Vec<u16>,
    pub offset: (u64, u64),
    pub to: u16,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConflictPolicy {
    /// Two distinct colors reaching one cell is an error.
    Strict,
    /// The earliest listed color wins; unlisted colors rank after, by id.
    Priority(Vec<u16>),
}

/// A named sub-wedge of the board, kept as metadata for rendering and reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedRegion {
    pub name: String,
    pub segment: SegmentSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringScheme {
    pub name: String,
    pub colors: Vec<Color>,
    pub init: Vec<InitEntry>,
    pub rules: Vec<UpdateRule>,
    pub segment: SegmentSpec,
    pub policy: ConflictPolicy,
    /// The ruleset whose P-positions the scheme is meant to paint.
    pub target: Option<Ruleset>,
    pub regions: Vec<NamedRegion>,
}

impl ColoringScheme {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            colors: Vec::new(),
            init: Vec::new(),
            rules: Vec::new(),
            segment: SegmentSpec::quadrant(),
            policy: ConflictPolicy::Strict,
            target: None,
            regions: Vec::new(),
        }
    }

    pub fn add_color(&mut self, name: &str) -> Result<u16> {
        if self.color_id(name).is_some() {
            return Err(Error::InvalidArgument(format!("duplicate color `{name}`")));
        }
        if self.colors.len() >= MAX_COLORS {
            return Err(Error::InvalidArgument(format!("at most {MAX_COLORS} colors")));
        }
        let id = self.colors.len() as u16;
        self.colors.push(Color { id, name: name.to_string() });
        Ok(id)
    }

    pub fn color_id(&self, name: &str) -> Option<u16> {
        self.colors.iter().find(|c| c.name == name).map(|c| c.id)
    }

    pub fn color_name(&self, id: u16) -> &str {
        &self.colors[id as usize].name
    }

    pub fn point(&mut self, color: u16, x: u64, y: u64) {
        self.init.push(InitEntry { color, shape: InitShape::Point { x, y } });
    }

    pub fn ray(&mut self, color: u16, x: u64, y: u64, dx: u64, dy: u64) {
        self.init.push(InitEntry { color, shape: InitShape::Ray { x, y, dx, dy } });
    }

    pub fn rule(&mut self, from: &[u16], offset: (u64, u64), to: u16) {
        self.rules.push(UpdateRule { from: from.to_vec(), offset, to });
    }

    /// Checks ids, offsets, ray directions and the priority list.
    pub fn validate(&self) -> Result<()> {
        let n = self.colors.len() as u16;
        let bad = |msg: String| Err(Error::InvalidArgument(format!("scheme `{}`: {msg}", self.name)));
        let names: BTreeSet<&str> = self.colors.iter().map(|c| c.name.as_str()).collect();
        if names.len() != self.colors.len() || self.colors.iter().enumerate().any(|(i, c)| c.id as usize != i) {
            return bad("color ids must be 0..n with unique names".into());
        }
        for e in &self.init {
            if e.color >= n {
                return bad(format!("unknown color id {}", e.color));
            }
            if let InitShape::Ray { dx, dy, .. } = e.shape {
                if !matches!((dx, dy), (1, 0) | (0, 1)) {
                    return bad(format!("ray direction ({dx},{dy}) is not axis-parallel"));
                }
            }
        }
        for r in &self.rules {
            if r.offset == (0, 0) {
                return bad("rule offset (0,0)".into());
            }
            if r.to >= n || r.from.is_empty() || r.from.iter().any(|&c| c >= n) {
                return bad("rule refers to an unknown color".into());
            }
        }
        if let ConflictPolicy::Priority(order) = &self.policy {
            let set: BTreeSet<u16> = order.iter().copied().collect();
            if set.len() != order.len() || order.iter().any(|&c| c >= n) {
                return bad("priority list has duplicates or unknown colors".into());
            }
        }
        Ok(())
    }

    /// Rank per color id; lower wins.
    fn ranks(&self) -> Vec<usize> {
        let n = self.colors.len();
        let mut rank: Vec<usize> = (0..n).map(|i| n + i).collect();
        if let ConflictPolicy::Priority(order) = &self.policy {
            for (r, &c) in order.iter().enumerate() {
                rank[c as usize] = r;
            }
        }
        rank
    }

    /// The line-oriented text form accepted by [`ColoringScheme::from_str`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "name {}", self.name);
        if let Some(t) = &self.target {
            let _ = writeln!(out, "target {t}");
        }
        for c in &self.colors {
            let _ = writeln!(out, "color {}", c.name);
        }
        for e in &self.init {
            let name = self.color_name(e.color);
            let _ = match e.shape {
                InitShape::Point { x, y } => writeln!(out, "init {name} pt {x},{y}"),
                InitShape::Ray { x, y, dx, dy } => writeln!(out, "init {name} ray {x},{y} {dx},{dy}"),
            };
        }
        for r in &self.rules {
            let from: Vec<&str> = r.from.iter().map(|&c| self.color_name(c)).collect();
            let _ = writeln!(out, "rule {} +{},{} -> {}", from.join(","), r.offset.0, r.offset.1, self.color_name(r.to));
        }
        let _ = writeln!(out, "segment {}", self.segment);
        let _ = match &self.policy {
            ConflictPolicy::Strict => writeln!(out, "policy strict"),
            ConflictPolicy::Priority(order) => {
                let names: Vec<&str> = order.iter().map(|&c| self.color_name(c)).collect();
                writeln!(out, "policy priority {}", names.join(" "))
            }
        };
        for r in &self.regions {
            let _ = writeln!(out, "region {} {}", r.name, r.segment);
        }
        out
    }
}

fn parse_pair(text: &str) -> Result<(u64, u64)> {
    let bad = || Error::Parse(format!("expected `x,y`, found `{text}`"));
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

impl FromStr for ColoringScheme {
    type Err = Error;

    /// Directives, one per line; `#` starts a comment:
    /// `name`, `target <ruleset>`, `color <name>`, `init <color> pt x,y`,
    /// `init <color> ray x,y dx,dy`, `rule <c1,c2,...> +dx,dy -> <color>`,
    /// `segment <alpha> <k> <beta> <m>` (`- -` for an open side),
    /// `policy strict | priority <colors...>` and `region <name> <alpha> <k> <beta> <m>`.
    fn from_str(text: &str) -> Result<Self> {
        let mut s = ColoringScheme::new("custom");
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| Error::Parse(format!("line {}: {msg}", lineno + 1));
            let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            let color = |s: &ColoringScheme, name: &str| s.color_id(name).ok_or_else(|| err(&format!("unknown color `{name}`")));
            match head {
                "name" => s.name = rest.to_string(),
                "target" => s.target = Some(rest.parse()?),
                "color" => {
                    s.add_color(rest)?;
                }
                "init" => {
                    let parts: Vec<&str> = rest.split_whitespace().collect();
                    match parts.as_slice() {
                        [c, "pt", p] => {
                            let c = color(&s, c)?;
                            let (x, y) = parse_pair(p)?;
                            s.point(c, x, y);
                        }
                        [c, "ray", p, d] => {
                            let c = color(&s, c)?;
                            let (x, y) = parse_pair(p)?;
                            let (dx, dy) = parse_pair(d)?;
                            s.ray(c, x, y, dx, dy);
                        }
                        _ => return Err(err("expected `init <color> pt x,y` or `init <color> ray x,y dx,dy`")),
                    }
                }
                "rule" => {
                    let parts: Vec<&str> = rest.split_whitespace().collect();
                    let [from, off, "->", to] = parts.as_slice() else {
                        return Err(err("expected `rule <colors> +dx,dy -> <color>`"));
                    };
                    let from = from.split(',').map(|c| color(&s, c)).collect::<Result<Vec<_>>>()?;
                    let offset = parse_pair(off.trim_start_matches('+'))?;
                    let to = color(&s, to)?;
                    s.rule(&from, offset, to);
                }
                "segment" => s.segment = rest.parse()?,
                "policy" => {
                    let parts: Vec<&str> = rest.split_whitespace().collect();
                    s.policy = match parts.split_first() {
                        Some((&"strict", [])) => ConflictPolicy::Strict,
                        Some((&"priority", names)) => ConflictPolicy::Priority(names.iter().map(|n| color(&s, n)).collect::<Result<_>>()?),
                        _ => return Err(err("expected `policy strict` or `policy priority <colors>`")),
                    };
                }
                "region" => {
                    let (name, seg) = rest.split_once(char::is_whitespace).ok_or_else(|| err("expected `region <name> <segment>`"))?;
                    s.regions.push(NamedRegion { name: name.to_string(), segment: seg.parse()? });
                }
                other => return Err(err(&format!("unknown directive `{other}`"))),
            }
        }
        s.validate()?;
        Ok(s)
    }
}

/// Per-cell coloring produced by [`run_scheme`].
#[derive(Clone, PartialEq, Eq)]
pub struct ColoredGrid {
    width: usize,
    height: usize,
    cells: Vec<u16>,
    names: Vec<String>,
}

const UNCOLORED: u16 = u16::MAX;

impl ColoredGrid {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, x: usize, y: usize) -> Option<u16> {
        let c = self.cells[y * self.width + x];
        (c != UNCOLORED).then_some(c)
    }

    pub fn is_colored(&self, x: usize, y: usize) -> bool {
        self.get(x, y).is_some()
    }

    pub fn color_names(&self) -> &[String] {
        &self.names
    }

    pub fn colored_count(&self) -> usize {
        self.cells.iter().filter(|&&c| c != UNCOLORED).count()
    }

    /// Number of cells per color id.
    pub fn histogram(&self) -> Vec<usize> {
        let mut h = vec![0; self.names.len()];
        for &c in &self.cells {
            if c != UNCOLORED {
                h[c as usize] += 1;
            }
        }
        h
    }

    /// Colored cells as P, the rest as N.
    pub fn to_outcome_grid(&self) -> OutcomeGrid {
        OutcomeGrid::from_fn(self.width, self.height, |x, y| self.is_colored(x, y))
    }

    pub fn restrict(&self, w: usize, h: usize) -> Self {
        let (w, h) = (w.min(self.width), h.min(self.height));
        let mut cells = Vec::with_capacity(w * h);
        for y in 0..h {
            cells.extend_from_slice(&self.cells[y * self.width..y * self.width + w]);
        }
        Self { width: w, height: h, cells, names: self.names.clone() }
    }
}

impl fmt::Debug for ColoredGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for y in (0..self.height).rev() {
            for x in 0..self.width {
                let ch = match self.get(x, y) {
                    None => '.',
                    Some(c) => self.names[c as usize].chars().next().unwrap_or('?'),
                };
                f.write_char(ch)?;
            }
            f.write_char('\n')?;
        }
        Ok(())
    }
}

pub fn run_scheme(scheme: &ColoringScheme, width: usize, height: usize) -> Result<ColoredGrid> {
    run_scheme_with(scheme, width, height, Budget::default())
}

/// Runs the scheme to its fixpoint on `[0, width) x [0, height)`.
pub fn run_scheme_with(scheme: &ColoringScheme, width: usize, height: usize, budget: Budget) -> Result<ColoredGrid> {
    scheme.validate()?;
    budget.check(width as u128 * height as u128 * 10)?;
    let mut mask = vec![0u64; width * height];
    let mut cells = vec![UNCOLORED; width * height];
    let names = scheme.colors.iter().map(|c| c.name.clone()).collect();
    if width == 0 || height == 0 {
        return Ok(ColoredGrid { width, height, cells, names });
    }
    let in_board = |x: u64, y: u64| x < width as u64 && y < height as u64;

    for e in &scheme.init {
        let bit = 1u64 << e.color;
        match e.shape {
            InitShape::Point { x, y } => {
                if in_board(x, y) {
                    mask[y as usize * width + x as usize] |= bit;
                }
            }
            InitShape::Ray { x, y, dx, dy } => {
                let (mut x, mut y) = (x, y);
                while in_board(x, y) {
                    mask[y as usize * width + x as usize] |= bit;
                    x += dx;
                    y += dy;
                }
            }
        }
    }

    let rank = scheme.ranks();
    let mut by_rank: Vec<u16> = (0..scheme.colors.len() as u16).collect();
    by_rank.sort_by_key(|&c| rank[c as usize]);
    let rules_from: Vec<Vec<&UpdateRule>> =
        (0..scheme.colors.len() as u16).map(|c| scheme.rules.iter().filter(|r| r.from.contains(&c)).collect()).collect();
    let strict = scheme.policy == ConflictPolicy::Strict;

    for s in 0..(width + height).saturating_sub(1) {
        let x_lo = s.saturating_sub(height - 1);
        let x_hi = s.min(width - 1);
        for x in x_lo..=x_hi {
            let y = s - x;
            let m = mask[y * width + x];
            if m == 0 || !scheme.segment.contains(x as u64, y as u64) {
                continue;
            }
            if strict && m.count_ones() > 1 {
                let mut ids = (0..64u16).filter(|&c| m >> c & 1 == 1);
                let (a, b) = (ids.next().unwrap(), ids.next().unwrap());
                return Err(Error::ColorConflict {
                    x: x as u64,
                    y: y as u64,
                    first: derivation(scheme, &cells, width, x, y, a),
                    second: derivation(scheme, &cells, width, x, y, b),
                });
            }
            let c = *by_rank.iter().find(|&&c| m >> c & 1 == 1).expect("nonempty mask");
            cells[y * width + x] = c;
            for r in &rules_from[c as usize] {
                let (tx, ty) = (x as u64 + r.offset.0, y as u64 + r.offset.1);
                if in_board(tx, ty) {
                    mask[ty as usize * width + tx as usize] |= 1 << r.to;
                }
            }
        }
    }
    Ok(ColoredGrid { width, height, cells, names })
}

/// Explains how `color` reached `(x, y)`: an initial entry or a rule fired from an already colored cell.
fn derivation(scheme: &ColoringScheme, cells: &[u16], width: usize, x: usize, y: usize, color: u16) -> String {
    let name = scheme.color_name(color);
    if let Some(e) = scheme.init.iter().find(|e| e.color == color && e.covers(x as u64, y as u64)) {
        return match e.shape {
            InitShape::Point { .. } => format!("{name} from initial point"),
            InitShape::Ray { x: rx, y: ry, dx, dy } => format!("{name} from initial ray at ({rx},{ry}) direction ({dx},{dy})"),
        };
    }
    for r in scheme.rules.iter().filter(|r| r.to == color) {
        let (dx, dy) = (r.offset.0 as usize, r.offset.1 as usize);
        if x >= dx && y >= dy {
            let src = cells[(y - dy) * width + (x - dx)];
            if src != UNCOLORED && r.from.contains(&src) {
                return format!("{name} via +{dx},{dy} from {} at ({},{})", scheme.color_name(src), x - dx, y - dy);
            }
        }
    }
    format!("{name} (unknown derivation)")
}

/// Compares colored cells with P-cells inside `segment`.
pub fn verify_coloring(colored: &ColoredGrid, grid: &OutcomeGrid, segment: &SegmentSpec, claim: &str) -> VerificationReport {
    let (w, h) = (colored.width.min(grid.width()), colored.height.min(grid.height()));
    let mut report = VerificationReport::new(claim);
    for y in 0..h {
        for x in 0..w {
            if segment.contains(x as u64, y as u64) {
                report.record(colored.is_colored(x, y) == grid.get(x, y), x, y);
            }
        }
    }
    report
}

/// Runs the scheme on the grid's board and checks colored exactly where P, inside the scheme's segment.
pub fn verify_segment(scheme: &ColoringScheme, grid: &OutcomeGrid) -> Result<VerificationReport> {
    let colored = run_scheme(scheme, grid.width(), grid.height())?;
    Ok(verify_coloring(&colored, grid, &scheme.segment, &format!("segment {}", scheme.name)))
}

/// One entry of the builtin catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuiltinEntry {
    pub name: &'static str,
    pub params: &'static str,
    pub ruleset: &'static str,
    pub example: &'static str,
}

pub fn builtin_schemes() -> Vec<BuiltinEntry> {
    vec![
        BuiltinEntry { name: "asym-os", params: "", ruleset: "(1,2) (2,3) (3,1)", example: "asym-os" },
        BuiltinEntry { name: "symadd", params: "a,b with a < b <= 2a", ruleset: "(a,b) (b,a) (a+b,a+b)", example: "symadd:1,2" },
        BuiltinEntry { name: "arith-add", params: "a >= 1", ruleset: "(a,2a) (3a,4a) (4a,6a)", example: "arith-add:1" },
    ]
}

/// Looks up `name` or `name:params`, e.g. `symadd:2,3` or `arith-add:2`.
pub fn builtin(spec: &str) -> Result<ColoringScheme> {
    let (name, params) = spec.split_once(':').unwrap_or((spec, ""));
    let nums: Vec<u64> = if params.trim().is_empty() {
        Vec::new()
    } else {
        params
            .split(',')
            .map(|p| p.trim().parse().map_err(|_| Error::Parse(format!("builtin `{spec}`: bad parameter `{p}`"))))
            .collect::<Result<_>>()?
    };
    match (name.trim(), nums.as_slice()) {
        ("asym-os", []) => Ok(asym_os()),
        ("symadd", [a, b]) => symadd(*a, *b),
        ("arith-add", [a]) => arith_add(*a),
        ("arith-add", []) => arith_add(1),
        _ => Err(Error::InvalidArgument(format!("unknown builtin `{spec}`"))),
    }
}

fn ratio(n: i64, d: i64) -> Ratio<i64> {
    Ratio::new(n, d)
}

fn int(n: i64) -> Ratio<i64> {
    Ratio::from_integer(n)
}

/// Three-part scheme for `{(1,2),(2,3),(3,1)}`: a lower family on the bottom ray, a three-color
/// middle family and an upper family alternating two offsets.
pub fn asym_os() -> ColoringScheme {
    let mut s = ColoringScheme::new("asym-os");
    let [lo, red, green, blue, u1, u2] = ["lower", "red", "green", "blue", "upper-a", "upper-b"].map(|n| s.add_color(n).unwrap());
    s.ray(lo, 2, 0, 1, 0);
    for y in 0..3 {
        s.point(red, 0, y);
    }
    s.point(green, 1, 0);
    s.point(green, 1, 1);
    s.point(blue, 2, 1);
    s.ray(u1, 0, 3, 0, 1);
    s.rule(&[lo], (5, 4), lo);
    s.rule(&[red], (5, 4), green);
    s.rule(&[green], (3, 5), red);
    s.rule(&[green, blue], (5, 4), blue);
    s.rule(&[u1], (4, 4), u2);
    s.rule(&[u2], (4, 5), u1);
    s.policy = ConflictPolicy::Priority(vec![red, green, blue, lo, u1, u2]);
    s.target = Some(Ruleset::from_pairs(&[(1, 2), (2, 3), (3, 1)]).unwrap());
    let f = Bound::new(ratio(9, 8), int(2));
    let g = Bound::new(ratio(4, 5), ratio(-4, 5));
    s.regions = vec![
        NamedRegion { name: "lower".into(), segment: SegmentSpec { lower: None, upper: Some(g) } },
        NamedRegion { name: "middle".into(), segment: SegmentSpec { lower: Some(g), upper: Some(f) } },
        NamedRegion { name: "upper".into(), segment: SegmentSpec { lower: Some(f), upper: None } },
    ];
    s
}

/// Scheme for `{(a,b),(b,a),(a+b,a+b)}`, valid when `a < b <= 2a`.
pub fn symadd(a: u64, b: u64) -> Result<ColoringScheme> {
    if a == 0 || a >= b {
        return Err(Error::InvalidArgument(format!("symadd needs 0 < a < b, got a={a}, b={b}")));
    }
    if b > 2 * a {
        return Err(Error::UnsupportedRegime(format!("symadd needs a >= b/2, got a={a}, b={b}")));
    }
    let mut s = ColoringScheme::new(format!("symadd:{a},{b}"));
    let [mid, bottom, left] = ["middle", "bottom", "left"].map(|n| s.add_color(n).unwrap());
    for x in 0..b {
        for y in 0..b {
            s.point(mid, x, y);
        }
    }
    for i in 0..a {
        s.ray(bottom, b, i, 1, 0);
        s.ray(left, i, b, 0, 1);
    }
    let r1 = (2 * a + b, 2 * b + a);
    let r2 = (2 * b + a, 2 * a + b);
    s.rule(&[mid], r1, mid);
    s.rule(&[mid], r2, mid);
    s.rule(&[bottom], r2, bottom);
    s.rule(&[left], r1, left);
    s.policy = ConflictPolicy::Priority(vec![mid, bottom, left]);
    s.target = Some(Ruleset::from_pairs(&[(a, b), (b, a), (a + b, a + b)])?);
    let (ai, bi) = (a as i64, b as i64);
    let lo = Bound::new(ratio(2 * ai + bi, 2 * bi + ai), int(0));
    let hi = Bound::new(ratio(2 * bi + ai, 2 * ai + bi), int(0));
    s.regions = vec![
        NamedRegion { name: "bottom".into(), segment: SegmentSpec { lower: None, upper: Some(lo) } },
        NamedRegion { name: "middle".into(), segment: SegmentSpec { lower: Some(lo), upper: Some(hi) } },
        NamedRegion { name: "left".into(), segment: SegmentSpec { lower: Some(hi), upper: None } },
    ];
    Ok(s)
}

/// Five-color scheme for `{(a,2a),(3a,4a),(4a,6a)}`: the `a = 1` scheme with every cell blown up
/// to an `a x a` block and every offset multiplied by `a`.
pub fn arith_add(a: u64) -> Result<ColoringScheme> {
    if a == 0 {
        return Err(Error::InvalidArgument("arith-add needs a >= 1".into()));
    }
    let mut s = ColoringScheme::new(format!("arith-add:{a}"));
    let [purple, green, blue, red, yellow] = ["purple", "green", "blue", "red", "yellow"].map(|n| s.add_color(n).unwrap());
    let block_point = |s: &mut ColoringScheme, c: u16, x: u64, y: u64| {
        for i in 0..a {
            for j in 0..a {
                s.point(c, a * x + i, a * y + j);
            }
        }
    };
    block_point(&mut s, purple, 0, 0);
    block_point(&mut s, purple, 0, 1);
    for (x, y) in [(1, 0), (1, 1)] {
        for j in 0..a {
            s.ray(blue, a * x, a * y + j, 1, 0);
        }
    }
    for i in 0..a {
        s.ray(red, i, 2 * a, 0, 1);
    }
    let sc = |(x, y): (u64, u64)| (a * x, a * y);
    s.rule(&[purple], sc((2, 4)), green);
    s.rule(&[purple], sc((6, 8)), blue);
    s.rule(&[green], sc((5, 8)), purple);
    s.rule(&[green], sc((6, 8)), blue);
    s.rule(&[blue], sc((6, 8)), blue);
    s.rule(&[red], sc((2, 4)), yellow);
    s.rule(&[yellow], sc((5, 8)), red);
    s.policy = ConflictPolicy::Priority(vec![purple, green, blue, red, yellow]);
    s.target = Some(Ruleset::from_pairs(&[(a, 2 * a), (3 * a, 4 * a), (4 * a, 6 * a)])?);
    let lo = Bound::new(ratio(4, 3), int(0));
    let hi = Bound::new(ratio(12, 7), int(0));
    s.regions = vec![
        NamedRegion { name: "lower".into(), segment: SegmentSpec { lower: None, upper: Some(lo) } },
        NamedRegion { name: "middle".into(), segment: SegmentSpec { lower: Some(lo), upper: Some(hi) } },
        NamedRegion { name: "upper".into(), segment: SegmentSpec { lower: Some(hi), upper: None } },
    ];
    Ok(s)
}

//! Netpbm images, raw grid dumps, CSV and JSON reports.
//!
//! Images put the origin at the bottom-left: the first image row is `y = H - 1`.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::automaton::{Bound, ColoredGrid};
use crate::error::{Error, Result};
use crate::oracle::OutcomeGrid;
use crate::periodicity::PeriodReport;

/// Version written into every JSON document.
pub const JSON_SCHEMA: u32 = 1;

/// Magic prefix of raw dumps, followed by a format version byte.
pub const RAW_MAGIC: &[u8; 7] = b"VSGRID\0";
pub const RAW_VERSION: u8 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Pbm,
    Ppm,
    Raw,
    Csv,
    Json,
}

impl Format {
    /// Guesses from the file extension.
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "pbm" => Some(Self::Pbm),
            "ppm" => Some(Self::Ppm),
            "raw" | "bin" | "vsg" => Some(Self::Raw),
            "csv" => Some(Self::Csv),
            "json" => Some(Self::Json),
            _ => None,
        }
    }
}

/// Plain PBM: `1` (black) marks a P-position.
pub fn render_pbm(grid: &OutcomeGrid) -> Vec<u8> {
    let (w, h) = (grid.width(), grid.height());
    let mut out = format!("P1\n{w} {h}\n").into_bytes();
    out.reserve((w + 1) * h);
    for y in (0..h).rev() {
        out.extend((0..w).map(|x| if grid.get(x, y) { b'1' } else { b'0' }));
        out.push(b'\n');
    }
    out
}

/// Splits a netpbm header into tokens, skipping `#` comments. Returns the tokens and the
/// offset just past the single whitespace byte after the last one.
fn header_tokens(bytes: &[u8], count: usize) -> Result<(Vec<String>, usize)> {
    let mut tokens = Vec::new();
    let mut i = 0;
    while tokens.len() < count {
        while i < bytes.len() && (bytes[i].is_ascii_whitespace() || bytes[i] == b'#') {
            if bytes[i] == b'#' {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            } else {
                i += 1;
            }
        }
        let start = i;
        while i < bytes.len() && !bytes[i].is_ascii_whitespace() && bytes[i] != b'#' {
            i += 1;
        }
        if start == i {
            return Err(Error::Parse("truncated netpbm header".into()));
        }
        tokens.push(String::from_utf8_lossy(&bytes[start..i]).into_owned());
    }
    Ok((tokens, (i + 1).min(bytes.len())))
}

fn dims(tokens: &[String]) -> Result<(usize, usize)> {
    let parse = |t: &String| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad dimension `{t}`")));
    Ok((parse(&tokens[1])?, parse(&tokens[2])?))
}

/// Reads plain (`P1`) or raw (`P4`) PBM.
pub fn parse_pbm(bytes: &[u8]) -> Result<OutcomeGrid> {
    let (tokens, body) = header_tokens(bytes, 3)?;
    let (w, h) = dims(&tokens)?;
    match tokens[0].as_str() {
        "P1" => {
            let mut digits = Vec::with_capacity(w * h);
            let mut i = body;
            while i < bytes.len() && digits.len() < w * h {
                match bytes[i] {
                    b'0' => digits.push(false),
                    b'1' => digits.push(true),
                    b'#' => {
                        while i < bytes.len() && bytes[i] != b'\n' {
                            i += 1;
                        }
                    }
                    c if c.is_ascii_whitespace() => {}
                    c => return Err(Error::Parse(format!("unexpected byte {c:#04x} in PBM body"))),
                }
                i += 1;
            }
            if digits.len() != w * h {
                return Err(Error::Parse(format!("PBM body has {} cells, expected {}", digits.len(), w * h)));
            }
            Ok(OutcomeGrid::from_fn(w, h, |x, y| digits[(h - 1 - y) * w + x]))
        }
        "P4" => {
            let stride = w.div_ceil(8);
            let data = &bytes[body..];
            if data.len() < stride * h {
                return Err(Error::Parse("truncated P4 body".into()));
            }
            Ok(OutcomeGrid::from_fn(w, h, |x, y| data[(h - 1 - y) * stride + x / 8] >> (7 - x % 8) & 1 == 1))
        }
        m => Err(Error::Parse(format!("unsupported netpbm magic `{m}`"))),
    }
}

pub type Rgb = [u8; 3];

pub const BLACK: Rgb = [0, 0, 0];
pub const WHITE: Rgb = [255, 255, 255];
pub const RED: Rgb = [220, 30, 30];

/// Colors cycled by color id when rendering colored grids.
pub const PALETTE: [Rgb; 8] =
    [[128, 0, 128], [0, 160, 0], [30, 60, 220], [220, 30, 30], [230, 200, 0], [0, 170, 170], [240, 120, 0], [110, 110, 110]];

fn ppm(width: usize, height: usize, pixel: impl Fn(usize, usize) -> Rgb) -> Vec<u8> {
    let mut out = format!("P6\n{width} {height}\n255\n").into_bytes();
    out.reserve(width * height * 3);
    for y in (0..height).rev() {
        for x in 0..width {
            out.extend_from_slice(&pixel(x, y));
        }
    }
    out
}

/// Binary PPM with P-positions black and N-positions white.
pub fn render_ppm(grid: &OutcomeGrid) -> Vec<u8> {
    ppm(grid.width(), grid.height(), |x, y| if grid.get(x, y) { BLACK } else { WHITE })
}

/// Binary PPM of a coloring, one palette entry per color id; uncolored cells are white.
pub fn render_colored_ppm(colored: &ColoredGrid, palette: &[Rgb]) -> Vec<u8> {
    let palette = if palette.is_empty() { &PALETTE[..] } else { palette };
    ppm(colored.width(), colored.height(), |x, y| match colored.get(x, y) {
        Some(c) => palette[c as usize % palette.len()],
        None => WHITE,
    })
}

/// Outcome mosaic with every cell whose center lies within half a cell of a boundary drawn in red.
pub fn render_overlay_ppm(grid: &OutcomeGrid, lines: &[Bound]) -> Vec<u8> {
    ppm(grid.width(), grid.height(), |x, y| {
        let hit = lines.iter().any(|b| (b.at(x as f64) - y as f64).abs() <= 0.5);
        if hit {
            RED
        } else if grid.get(x, y) {
            BLACK
        } else {
            WHITE
        }
    })
}

/// `VSGRID\0`, version byte, `u32` width and height (little endian), then the packed rows as
/// little-endian `u64` words, bit `x % 64` of word `x / 64` set for a P-position.
pub fn write_raw(grid: &OutcomeGrid) -> Result<Vec<u8>> {
    let w = u32::try_from(grid.width()).map_err(|_| Error::Overflow)?;
    let h = u32::try_from(grid.height()).map_err(|_| Error::Overflow)?;
    let mut out = Vec::with_capacity(16 + grid.words().len() * 8);
    out.extend_from_slice(RAW_MAGIC);
    out.push(RAW_VERSION);
    out.extend_from_slice(&w.to_le_bytes());
    out.extend_from_slice(&h.to_le_bytes());
    for word in grid.words() {
        out.extend_from_slice(&word.to_le_bytes());
    }
    Ok(out)
}

pub fn read_raw(bytes: &[u8]) -> Result<OutcomeGrid> {
    if bytes.len() < 16 || &bytes[..7] != RAW_MAGIC {
        return Err(Error::Parse("not a raw grid dump".into()));
    }
    if bytes[7] != RAW_VERSION {
        return Err(Error::Parse(format!("raw dump version {} is not supported", bytes[7])));
    }
    let w = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let h = u32::from_le_bytes(bytes[12..16].try_into().unwrap()) as usize;
    let words_per_row = w.div_ceil(64);
    let body = &bytes[16..];
    if body.len() != words_per_row * h * 8 {
        return Err(Error::Parse(format!("raw body has {} bytes, expected {}", body.len(), words_per_row * h * 8)));
    }
    let words: Vec<u64> = body.chunks_exact(8).map(|c| u64::from_le_bytes(c.try_into().unwrap())).collect();
    Ok(OutcomeGrid::from_fn(w, h, |x, y| words[y * words_per_row + x / 64] >> (x % 64) & 1 == 1))
}

/// `x,y,outcome` with one line per cell, in row-major order from `y = 0`.
pub fn grid_csv(grid: &OutcomeGrid) -> String {
    let mut out = String::from("x,y,outcome\n");
    for y in 0..grid.height() {
        for x in 0..grid.width() {
            let _ = writeln!(out, "{x},{y},{}", if grid.get(x, y) { 'P' } else { 'N' });
        }
    }
    out
}

pub fn periods_csv(reports: &[PeriodReport]) -> String {
    let mut out = String::from("index,found,preperiod,period,search_bound,row0_bound,within_bound\n");
    for r in reports {
        let opt = |v: Option<String>| v.unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.index,
            r.found,
            r.preperiod,
            r.period,
            r.search_bound,
            opt(r.row0_bound.map(|b| b.to_string())),
            opt(r.within_bound.map(|b| b.to_string()))
        );
    }
    out
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: u32,
    kind: &'a str,
    data: &'a T,
}

/// Pretty JSON `{"schema": 1, "kind": ..., "data": ...}`.
pub fn to_json<T: Serialize>(kind: &str, data: &T) -> Result<String> {
    serde_json::to_string_pretty(&Envelope { schema: JSON_SCHEMA, kind, data }).map_err(|e| Error::Parse(e.to_string()))
}

/// Writes a grid in the format given by `format`, or guessed from the extension.
pub fn save_grid(grid: &OutcomeGrid, path: &Path, format: Option<Format>) -> Result<()> {
    let format = format.or_else(|| Format::from_path(path)).unwrap_or(Format::Pbm);
    let bytes = match format {
        Format::Pbm => render_pbm(grid),
        Format::Ppm => render_ppm(grid),
        Format::Raw => write_raw(grid)?,
        Format::Csv => grid_csv(grid).into_bytes(),
        Format::Json => {
            let rows: Vec<String> =
                (0..grid.height()).rev().map(|y| (0..grid.width()).map(|x| if grid.get(x, y) { 'P' } else { 'N' }).collect()).collect();
            to_json("grid", &serde_json::json!({ "width": grid.width(), "height": grid.height(), "rows": rows }))?.into_bytes()
        }
    };
    std::fs::write(path, bytes).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

/// Reads a PBM or raw dump, detected from the leading bytes.
pub fn load_grid(path: &Path) -> Result<OutcomeGrid> {
    let bytes = std::fs::read(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
    if bytes.starts_with(RAW_MAGIC) {
        read_raw(&bytes)
    } else {
        parse_pbm(&bytes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_ruleset;
    use crate::oracle::compute_grid;

    #[test]
    fn pbm_small_cases() {
        let one = OutcomeGrid::from_fn(1, 1, |_, _| true);
        assert_eq!(render_pbm(&one), b"P1\n1 1\n1\n");
        let two = OutcomeGrid::from_fn(2, 1, |x, _| x == 0);
        assert_eq!(render_pbm(&two), b"P1\n2 1\n10\n");
    }

    #[test]
    fn pbm_orientation_and_round_trip() {
        let g = OutcomeGrid::from_fn(3, 2, |x, y| (x, y) == (0, 1) || (x, y) == (2, 0));
        assert_eq!(render_pbm(&g), b"P1\n3 2\n100\n001\n");
        assert_eq!(parse_pbm(&render_pbm(&g)).unwrap(), g);
        let with_comment = b"P1\n# comment\n3 2\n1 0 0\n0 0 1\n";
        assert_eq!(parse_pbm(with_comment).unwrap(), g);
        let p4 = [b"P4\n3 2\n".as_slice(), &[0b1000_0000, 0b0010_0000]].concat();
        assert_eq!(parse_pbm(&p4).unwrap(), g);
        assert!(parse_pbm(b"P1\n3 2\n100\n").is_err());
        assert!(parse_pbm(b"P2\n1 1\n1\n").is_err());
    }

    #[test]
    fn fixture_matches_oracle() {
        let fixture = include_bytes!("../tests/fixtures/crow_squirrel_2-1_1-3.pbm");
        let g = compute_grid(&parse_ruleset("2,1;1,3").unwrap(), 10, 10).unwrap();
        assert_eq!(parse_pbm(fixture).unwrap(), g);
    }

    #[test]
    fn raw_round_trip() {
        let g = compute_grid(&parse_ruleset("2,1;1,3").unwrap(), 130, 7).unwrap();
        let bytes = write_raw(&g).unwrap();
        assert_eq!(&bytes[..8], b"VSGRID\0\x01");
        assert_eq!(u32::from_le_bytes(bytes[8..12].try_into().unwrap()), 130);
        assert_eq!(bytes.len(), 16 + 3 * 7 * 8);
        assert_eq!(read_raw(&bytes).unwrap(), g);
        assert!(read_raw(&bytes[..20]).is_err());
        let mut bad = bytes.clone();
        bad[7] = 9;
        assert!(read_raw(&bad).is_err());
    }

    #[test]
    fn ppm_layout() {
        let g = OutcomeGrid::from_fn(2, 1, |x, _| x == 0);
        assert_eq!(render_ppm(&g), [b"P6\n2 1\n255\n".as_slice(), &[0, 0, 0, 255, 255, 255]].concat());
        let overlay = render_overlay_ppm(&OutcomeGrid::new(3, 3), &[Bound::new(1.into(), 0.into())]);
        let px = &overlay[b"P6\n3 3\n255\n".len()..];
        // Top row is y = 2; the diagonal cell there is x = 2.
        assert_eq!(&px[6..9], &RED);
        assert_eq!(&px[0..3], &WHITE);
    }

    #[test]
    fn csv_and_json() {
        let g = OutcomeGrid::from_fn(2, 2, |x, y| x == y);
        assert_eq!(grid_csv(&g), "x,y,outcome\n0,0,P\n1,0,N\n0,1,N\n1,1,P\n");
        let json = to_json("grid", &serde_json::json!({"w": 2})).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["kind"], "grid");
        assert_eq!(v["data"]["w"], 2);
    }

    #[test]
    fn format_from_extension() {
        assert_eq!(Format::from_path(Path::new("a.PBM")), Some(Format::Pbm));
        assert_eq!(Format::from_path(Path::new("a.raw")), Some(Format::Raw));
        assert_eq!(Format::from_path(Path::new("a")), None);
    }
}

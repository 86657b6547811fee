//! Rulesets, positions, outcomes and ruleset classification.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A nonzero vector of nonnegative components.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MoveVector(Vec<u64>);

impl MoveVector {
    pub fn new(components: Vec<u64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Parse("move has no components".into()));
        }
        if components.iter().all(|&c| c == 0) {
            return Err(Error::ZeroMove);
        }
        Ok(Self(components))
    }

    pub fn components(&self) -> &[u64] {
        &self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn x(&self) -> u64 {
        self.0[0]
    }

    pub fn y(&self) -> u64 {
        self.0.get(1).copied().unwrap_or(0)
    }

    pub fn max_component(&self) -> u64 {
        self.0.iter().copied().max().unwrap_or(0)
    }
}

impl fmt::Display for MoveVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A game position: a tuple of nonnegative integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Position(pub Vec<u64>);

impl Position {
    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[u64] {
        &self.0
    }
}

impl From<(u64, u64)> for Position {
    fn from((x, y): (u64, u64)) -> Self {
        Position(vec![x, y])
    }
}

impl FromStr for Position {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let comps = inner.split(',').map(|c| parse_component(c.trim())).collect::<Result<Vec<_>>>()?;
        if comps.is_empty() {
            return Err(Error::Parse("empty position".into()));
        }
        Ok(Position(comps))
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// Outcome class under normal play.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    /// The previous player wins.
    P,
    /// The next player wins.
    N,
}

impl Outcome {
    pub fn from_is_p(is_p: bool) -> Self {
        if is_p {
            Outcome::P
        } else {
            Outcome::N
        }
    }

    pub fn is_p(self) -> bool {
        self == Outcome::P
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::P => "P",
            Outcome::N => "N",
        })
    }
}

/// A finite set of moves of a common dimension, sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ruleset {
    dimension: usize,
    moves: Vec<MoveVector>,
}

impl Ruleset {
    pub fn new(moves: Vec<MoveVector>) -> Result<Self> {
        let first = moves.first().ok_or(Error::EmptyRuleset)?;
        let dimension = first.dimension();
        for m in &moves {
            if m.dimension() != dimension {
                return Err(Error::DimensionMismatch { expected: dimension, found: m.dimension() });
            }
        }
        let moves: Vec<MoveVector> = moves.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        Ok(Self { dimension, moves })
    }

    /// Builds a ruleset from raw component vectors.
    pub fn from_vecs<I, V>(moves: I) -> Result<Self>
    where
        I: IntoIterator<Item = V>,
        V: Into<Vec<u64>>,
    {
        let moves = moves.into_iter().map(|v| MoveVector::new(v.into())).collect::<Result<Vec<_>>>()?;
        Self::new(moves)
    }

    /// Convenience constructor for two-dimensional rulesets.
    pub fn from_pairs(pairs: &[(u64, u64)]) -> Result<Self> {
        Self::from_vecs(pairs.iter().map(|&(a, b)| vec![a, b]))
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn moves(&self) -> &[MoveVector] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Moves as `(x, y)` pairs. Only meaningful for `d = 2`.
    pub fn pairs(&self) -> Vec<(u64, u64)> {
        self.moves.iter().map(|m| (m.x(), m.y())).collect()
    }

    pub fn max_component(&self) -> u64 {
        self.moves.iter().map(MoveVector::max_component).max().unwrap_or(0)
    }

    pub fn require_dimension(&self, d: usize) -> Result<()> {
        if self.dimension != d {
            return Err(Error::DimensionMismatch { expected: d, found: self.dimension });
        }
        Ok(())
    }

    pub fn require_len(&self, k: usize) -> Result<()> {
        if self.moves.len() != k {
            return Err(Error::ShapeMismatch(format!("expected {k} moves, found {}", self.moves.len())));
        }
        Ok(())
    }
}

impl fmt::Display for Ruleset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.moves.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl FromStr for Ruleset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_ruleset(s)
    }
}

fn parse_component(text: &str) -> Result<u64> {
    if text.is_empty() {
        return Err(Error::Parse("empty component".into()));
    }
    if text.starts_with('-') {
        return Err(Error::Parse(format!("negative component `{text}`")));
    }
    if !text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("not an integer: `{text}`")));
    }
    text.parse::<u64>().map_err(|_| Error::Overflow)
}

/// Parses moves separated by `;` with components separated by `,`, e.g. `"2,1; 1,3"`.
/// Parentheses, braces and whitespace are ignored.
pub fn parse_ruleset(text: &str) -> Result<Ruleset> {
    let cleaned: String = text.chars().filter(|c| !matches!(c, '(' | ')' | '{' | '}') && !c.is_whitespace()).collect();
    let mut moves = Vec::new();
    for part in cleaned.split(';') {
        if part.is_empty() {
            continue;
        }
        let comps = part.split(',').map(parse_component).collect::<Result<Vec<_>>>()?;
        moves.push(MoveVector::new(comps)?);
    }
    Ruleset::new(moves)
}

/// Structural flags of a ruleset.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RulesetClass {
    pub symmetric: bool,
    pub twin: bool,
    pub additive: bool,
    pub asymmetric_additive: bool,
    pub arithmetic_additive: bool,
    pub max_symmetric: bool,
    /// For additive rulesets, the move that is the sum of the other two.
    pub sum_move: Option<(u64, u64)>,
    /// For asymmetric additive rulesets, `(a, b, c, d)` with moves `{(a,b), (c,b+d), (a+c,d)}`.
    pub asymmetric_params: Option<(u64, u64, u64, u64)>,
    /// For twin-progression rulesets `{(a,b), (a+c,b+c), (a+2c,b+2c)}`, the triple `(a, b, c)`.
    pub twin_progression: Option<(u64, u64, u64)>,
    /// For max-symmetric rulesets, the dominating move.
    pub max_move: Option<Vec<u64>>,
}

/// Computes classification flags. Flags specific to the plane are false when `d != 2`.
pub fn classify(ruleset: &Ruleset) -> RulesetClass {
    let mut class = RulesetClass { max_move: max_symmetric_witness(ruleset), ..Default::default() };
    class.max_symmetric = class.max_move.is_some();
    if ruleset.dimension() != 2 {
        return class;
    }
    let pairs = ruleset.pairs();
    let set: BTreeSet<(u64, u64)> = pairs.iter().copied().collect();
    class.symmetric = pairs.iter().all(|&(a, b)| set.contains(&(b, a)));
    class.twin = pairs.iter().all(|&(a, b)| a == b);
    if pairs.len() == 3 {
        class.sum_move = additive_sum(&pairs);
        class.additive = class.sum_move.is_some();
        class.asymmetric_params = asymmetric_additive_params(&pairs);
        class.asymmetric_additive = class.asymmetric_params.is_some();
        class.twin_progression = twin_progression_params(&pairs);
        let a = pairs[0].0;
        class.arithmetic_additive = a > 0 && set == BTreeSet::from([(a, 2 * a), (3 * a, 4 * a), (4 * a, 6 * a)]);
    }
    class
}

fn additive_sum(pairs: &[(u64, u64)]) -> Option<(u64, u64)> {
    for k in 0..3 {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        let sum = (pairs[i].0.checked_add(pairs[j].0)?, pairs[i].1.checked_add(pairs[j].1)?);
        if sum == pairs[k] {
            return Some(sum);
        }
    }
    None
}

fn asymmetric_additive_params(pairs: &[(u64, u64)]) -> Option<(u64, u64, u64, u64)> {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    for p in PERMS {
        let (a, b) = pairs[p[0]];
        let (c, bd) = pairs[p[1]];
        let (e, d) = pairs[p[2]];
        if bd >= b && bd - b == d && a.checked_add(c) == Some(e) {
            return Some((a, b, c, d));
        }
    }
    None
}

fn twin_progression_params(pairs: &[(u64, u64)]) -> Option<(u64, u64, u64)> {
    let (a, b) = pairs[0];
    let (c1, c2) = (pairs[1].0.checked_sub(a)?, pairs[1].1.checked_sub(b)?);
    if c1 == 0 || c1 != c2 {
        return None;
    }
    let c = c1;
    (pairs[2] == (a + 2 * c, b + 2 * c)).then_some((a, b, c))
}

fn max_symmetric_witness(ruleset: &Ruleset) -> Option<Vec<u64>> {
    if ruleset.len() < 2 {
        return None;
    }
    let set: BTreeSet<&[u64]> = ruleset.moves().iter().map(|m| m.components()).collect();
    let dominating: Vec<&MoveVector> = ruleset
        .moves()
        .iter()
        .filter(|cand| ruleset.moves().iter().all(|m| m.components().iter().zip(cand.components()).all(|(s, t)| s <= t)))
        .collect();
    let top = match dominating.as_slice() {
        [only] => *only,
        _ => return None,
    };
    let ok = ruleset.moves().iter().filter(|m| *m != top).all(|m| {
        let diff: Vec<u64> = top.components().iter().zip(m.components()).map(|(t, s)| t - s).collect();
        set.contains(diff.as_slice())
    });
    ok.then(|| top.components().to_vec())
}

/// Swaps the two coordinates of every move.
pub fn mirror(ruleset: &Ruleset) -> Result<Ruleset> {
    ruleset.require_dimension(2)?;
    Ruleset::from_pairs(&ruleset.pairs().iter().map(|&(a, b)| (b, a)).collect::<Vec<_>>())
}

/// Returns `position + k * (s1 + s2)` for a two-move ruleset; `k` may be negative.
pub fn translate(position: &Position, ruleset: &Ruleset, k: i64) -> Result<Position> {
    ruleset.require_len(2)?;
    if position.dimension() != ruleset.dimension() {
        return Err(Error::DimensionMismatch { expected: ruleset.dimension(), found: position.dimension() });
    }
    let (s1, s2) = (ruleset.moves()[0].components(), ruleset.moves()[1].components());
    let mut out = Vec::with_capacity(position.dimension());
    for (i, &x) in position.components().iter().enumerate() {
        let step = s1[i] as i128 + s2[i] as i128;
        let v = x as i128 + (k as i128) * step;
        if v < 0 {
            return Err(Error::NegativeResult);
        }
        out.push(u64::try_from(v).map_err(|_| Error::Overflow)?);
    }
    Ok(Position(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_sorts() {
        let r = parse_ruleset("2,1;1,3").unwrap();
        assert_eq!(r.dimension(), 2);
        assert_eq!(r.pairs(), vec![(1, 3), (2, 1)]);
        assert_eq!(r.to_string(), "1,3;2,1");
        let r = parse_ruleset("3").unwrap();
        assert_eq!(r.dimension(), 1);
        assert_eq!(r.moves()[0].components(), &[3]);
    }

    #[test]
    fn parse_accepts_parentheses_and_dedups() {
        let r = parse_ruleset("{(2, 1); (1, 3); (2,1)}").unwrap();
        assert_eq!(r.len(), 2);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_ruleset("0,0;1,2"), Err(Error::ZeroMove));
        assert_eq!(parse_ruleset(""), Err(Error::EmptyRuleset));
        assert!(matches!(parse_ruleset("1,2;3"), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(parse_ruleset("1,-2"), Err(Error::Parse(_))));
        assert!(matches!(parse_ruleset("1.5,2"), Err(Error::Parse(_))));
        assert_eq!(parse_ruleset("99999999999999999999999,1"), Err(Error::Overflow));
    }

    #[test]
    fn classification_examples() {
        let c = classify(&parse_ruleset("1,2;2,1").unwrap());
        assert!(c.symmetric && !c.twin);
        let c = classify(&parse_ruleset("1,2;2,1;3,3").unwrap());
        assert!(c.additive && c.symmetric);
        assert_eq!(c.sum_move, Some((3, 3)));
        let c = classify(&parse_ruleset("1,7;7,1;3,9;9,3;10,10").unwrap());
        assert!(c.max_symmetric);
        assert_eq!(c.max_move, Some(vec![10, 10]));
        let c = classify(&parse_ruleset("1,2;2,3;3,1").unwrap());
        assert!(c.asymmetric_additive && !c.additive);
        assert_eq!(c.asymmetric_params, Some((1, 2, 2, 1)));
        let c = classify(&parse_ruleset("1,2;3,4;4,6").unwrap());
        assert!(c.arithmetic_additive && c.additive);
        let c = classify(&parse_ruleset("1,1;2,2;3,3").unwrap());
        assert!(c.twin && c.symmetric && c.additive);
        assert_eq!(c.twin_progression, Some((1, 1, 1)));
    }

    #[test]
    fn mirror_examples() {
        let m = mirror(&parse_ruleset("0,1;2,4").unwrap()).unwrap();
        assert_eq!(m, parse_ruleset("1,0;4,2").unwrap());
        let m = mirror(&parse_ruleset("1,1").unwrap()).unwrap();
        assert_eq!(m, parse_ruleset("1,1").unwrap());
        assert!(mirror(&parse_ruleset("3").unwrap()).is_err());
    }

    #[test]
    fn translate_examples() {
        let s = parse_ruleset("2,1;1,3").unwrap();
        assert_eq!(translate(&(0, 0).into(), &s, 1).unwrap(), Position(vec![3, 4]));
        assert_eq!(translate(&(5, 6).into(), &s, -1).unwrap(), Position(vec![2, 2]));
        assert_eq!(translate(&(2, 2).into(), &s, -1), Err(Error::NegativeResult));
        assert!(translate(&(0, 0).into(), &parse_ruleset("1,1").unwrap(), 1).is_err());
    }
}

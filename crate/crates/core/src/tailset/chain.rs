//! Finite descending chains of points and open intervals in `(0, U]`, with a
//! knowledge horizon below which the set is unspecified.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{self, format_rational, parse_rational, Rational};

/// Open interval `(lo, hi)` with `0 < lo < hi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if !lo.is_positive() || lo >= hi {
            return Err(Error::InvalidChain(format!(
                "interval ({lo}, {hi}) needs 0 < lo < hi"
            )));
        }
        Ok(Interval { lo, hi })
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    /// `hi / lo`.
    pub fn ratio(&self) -> Rational {
        &self.hi / &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo < x && x < &self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.lo, self.hi)
    }
}

/// Building block of a chain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Block {
    Point(Rational),
    Interval(Interval),
}

impl Block {
    pub fn point(x: Rational) -> Result<Self> {
        if !x.is_positive() {
            return Err(Error::InvalidChain(format!("point {x} must be positive")));
        }
        Ok(Block::Point(x))
    }

    pub fn interval(lo: Rational, hi: Rational) -> Result<Self> {
        Interval::new(lo, hi).map(Block::Interval)
    }

    pub fn lo(&self) -> &Rational {
        match self {
            Block::Point(x) => x,
            Block::Interval(i) => &i.lo,
        }
    }

    pub fn hi(&self) -> &Rational {
        match self {
            Block::Point(x) => x,
            Block::Interval(i) => &i.hi,
        }
    }

    pub fn is_point(&self) -> bool {
        matches!(self, Block::Point(_))
    }

    pub fn contains(&self, x: &Rational) -> bool {
        match self {
            Block::Point(p) => p == x,
            Block::Interval(i) => i.contains(x),
        }
    }

    /// Whether every element of `below` is strictly smaller than every
    /// element of `self`.
    pub fn strictly_above(&self, below: &Block) -> bool {
        if self.is_point() && below.is_point() {
            below.hi() < self.lo()
        } else {
            below.hi() <= self.lo()
        }
    }

    /// Intersection with the open window `(lo, hi)`.
    fn clip(&self, lo: &Rational, hi: &Rational) -> Option<Block> {
        match self {
            Block::Point(p) => (lo < p && p < hi).then(|| self.clone()),
            Block::Interval(i) => {
                let a = (&i.lo).max(lo).clone();
                let b = (&i.hi).min(hi).clone();
                (a < b).then(|| Block::Interval(Interval { lo: a, hi: b }))
            }
        }
    }

    /// Whether this block is a subset of `other`.
    fn within(&self, other: &Block) -> bool {
        match (self, other) {
            (Block::Point(p), _) => other.contains(p),
            (Block::Interval(_), Block::Point(_)) => false,
            (Block::Interval(a), Block::Interval(b)) => b.lo <= a.lo && a.hi <= b.hi,
        }
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Block::Point(x) => write!(f, "{x}"),
            Block::Interval(i) => write!(f, "{i}"),
        }
    }
}

impl FromStr for Block {
    type Err = Error;

    /// `"p/q"` for a point, `"(a,b)"` for an open interval.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            let (a, b) = inner
                .split_once(',')
                .ok_or_else(|| Error::InvalidChain(format!("bad interval `{s}`")))?;
            Block::interval(parse_rational(a)?, parse_rational(b)?)
        } else {
            Block::point(parse_rational(s)?)
        }
    }
}

impl Serialize for Block {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Block {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `E ∩ [ε, U]` for a set `E ⊆ (0, U]` that is fully known on `(ε, U]`.
///
/// Blocks are listed in strictly descending order; open intervals that only
/// share an endpoint stay separate blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ChainRepr", into = "ChainRepr")]
pub struct Chain {
    blocks: Vec<Block>,
    upper: Rational,
    horizon: Rational,
}

#[derive(Serialize, Deserialize)]
struct ChainRepr {
    blocks: Vec<Block>,
    #[serde(with = "rational::as_str")]
    upper: Rational,
    #[serde(with = "rational::as_str")]
    horizon: Rational,
}

impl TryFrom<ChainRepr> for Chain {
    type Error = Error;

    fn try_from(r: ChainRepr) -> Result<Self> {
        Chain::new(r.blocks, r.upper, r.horizon)
    }
}

impl From<Chain> for ChainRepr {
    fn from(c: Chain) -> Self {
        ChainRepr { blocks: c.blocks, upper: c.upper, horizon: c.horizon }
    }
}

/// Gap length returned by [`Chain::lambda_gap`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gap {
    pub length: Rational,
    /// `false` when the answer could change on the unknown region `(0, ε]`.
    pub valid: bool,
}

impl Chain {
    pub fn new(blocks: Vec<Block>, upper: Rational, horizon: Rational) -> Result<Self> {
        if horizon.is_negative() || horizon > upper || !upper.is_positive() {
            return Err(Error::InvalidChain(format!(
                "need 0 <= horizon {horizon} <= upper {upper}, upper > 0"
            )));
        }
        for b in &blocks {
            if b.lo() < &horizon || b.hi() > &upper || !b.lo().is_positive() {
                return Err(Error::InvalidChain(format!(
                    "block {b} outside [{horizon}, {upper}]"
                )));
            }
        }
        if let Some(w) = blocks.windows(2).find(|w| !w[0].strictly_above(&w[1])) {
            return Err(Error::InvalidChain(format!(
                "blocks {} and {} are not strictly descending",
                w[0], w[1]
            )));
        }
        Ok(Chain { blocks, upper, horizon })
    }

    /// Builds a chain from unordered, possibly overlapping blocks: blocks
    /// are merged into their canonical connected pieces and cut to
    /// `[horizon, upper]`. An interval reaching below the horizon keeps only
    /// its part above it.
    pub fn from_unordered(blocks: Vec<Block>, upper: Rational, horizon: Rational) -> Result<Self> {
        let kept = canonical_pieces(blocks)
            .into_iter()
            .filter_map(|b| match b {
                Block::Point(p) => (horizon <= p && p <= upper).then_some(Block::Point(p)),
                Block::Interval(i) => {
                    let lo = i.lo.max(horizon.clone());
                    let hi = i.hi.min(upper.clone());
                    (lo < hi && lo.is_positive()).then_some(Block::Interval(Interval { lo, hi }))
                }
            })
            .collect();
        Chain::new(kept, upper, horizon)
    }

    /// Blocks whose lower end is determined: a last interval starting exactly
    /// at a positive horizon may continue below it and is left out.
    pub fn settled_blocks(&self) -> &[Block] {
        match self.blocks.last() {
            Some(Block::Interval(i)) if i.lo == self.horizon && self.horizon.is_positive() => {
                &self.blocks[..self.blocks.len() - 1]
            }
            _ => &self.blocks,
        }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn upper(&self) -> &Rational {
        &self.upper
    }

    pub fn horizon(&self) -> &Rational {
        &self.horizon
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.blocks.iter().any(|b| b.contains(x))
    }

    /// The first `n` blocks; the horizon moves up to the lowest kept
    /// coordinate.
    pub fn truncate(&self, n: usize) -> Chain {
        if n >= self.blocks.len() {
            return self.clone();
        }
        let blocks = self.blocks[..n].to_vec();
        let horizon = blocks.last().map_or(self.upper.clone(), |b| b.lo().clone());
        Chain { blocks, upper: self.upper.clone(), horizon }
    }

    /// Length of the largest open subinterval of `(0, h)` missing the set.
    ///
    /// When the best candidate reaches into `(0, ε]` the result is flagged
    /// invalid and the reported length is the larger of the known part of
    /// that gap and `ε`.
    pub fn lambda_gap(&self, h: &Rational) -> Result<Gap> {
        if !h.is_positive() || h > &self.upper {
            return Err(Error::OutOfRange(format!("h = {h} not in (0, {}]", self.upper)));
        }
        let mut cur = h.clone();
        let mut best = Rational::zero();
        for b in self.blocks.iter().filter(|b| b.lo() < h) {
            if b.hi() < &cur {
                let len = &cur - b.hi();
                if len > best {
                    best = len;
                }
            }
            cur = b.lo().clone();
        }
        let known_bottom = if cur > self.horizon { &cur - &self.horizon } else { Rational::zero() };
        let unknown = (&self.horizon).min(&cur).clone();
        let valid = best >= cur;
        let length = best.max(known_bottom).max(unknown);
        Ok(Gap { length, valid })
    }

    /// `A ∩ (lo, hi) ⊆ B ∩ (lo, hi)` with `A = self`.
    pub fn subset_within(&self, other: &Chain, lo: &Rational, hi: &Rational) -> bool {
        let mine = clipped_pieces(&self.blocks, lo, hi);
        let theirs = clipped_pieces(&other.blocks, lo, hi);
        mine.iter().all(|p| theirs.iter().any(|q| p.within(q)))
    }

    pub fn equal_within(&self, other: &Chain, lo: &Rational, hi: &Rational) -> bool {
        self.subset_within(other, lo, hi) && other.subset_within(self, lo, hi)
    }

    /// Lowest coordinate below which the set is not determined by this chain.
    pub fn known_from(&self) -> &Rational {
        &self.horizon
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(Block::to_string).collect();
        write!(
            f,
            "[{}] on ({}, {}]",
            parts.join(" > "),
            format_rational(&self.horizon),
            format_rational(&self.upper)
        )
    }
}

fn desc_by_hi(a: &Block, b: &Block) -> Ordering {
    b.hi().cmp(a.hi()).then_with(|| b.lo().cmp(a.lo()))
}

/// Maximal connected pieces of a union of blocks, in descending order.
///
/// Overlapping intervals merge; `(a,b) ∪ {b} ∪ (b,c)` merges to `(a,c)`;
/// points inside intervals are absorbed; duplicate points collapse.
pub fn canonical_pieces(blocks: Vec<Block>) -> Vec<Block> {
    let mut points: Vec<Rational> = Vec::new();
    let mut intervals: Vec<Interval> = Vec::new();
    for b in blocks {
        match b {
            Block::Point(p) => points.push(p),
            Block::Interval(i) => intervals.push(i),
        }
    }
    points.sort();
    points.dedup();
    let has_point = |x: &Rational| points.binary_search(x).is_ok();
    intervals.sort_by(|a, b| b.hi.cmp(&a.hi).then_with(|| b.lo.cmp(&a.lo)));
    let mut merged: Vec<Interval> = Vec::with_capacity(intervals.len());
    for j in intervals {
        match merged.last_mut() {
            Some(i) if j.hi > i.lo || (j.hi == i.lo && has_point(&i.lo)) => {
                if j.lo < i.lo {
                    i.lo = j.lo;
                }
            }
            _ => merged.push(j),
        }
    }
    let mut out: Vec<Block> = points
        .into_iter()
        .filter(|p| !merged.iter().any(|i| i.contains(p)))
        .map(Block::Point)
        .collect();
    out.extend(merged.into_iter().map(Block::Interval));
    out.sort_by(desc_by_hi);
    out
}

fn clipped_pieces(blocks: &[Block], lo: &Rational, hi: &Rational) -> Vec<Block> {
    canonical_pieces(blocks.iter().filter_map(|b| b.clip(lo, hi)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, pow, rat};

    fn pts(xs: &[Rational]) -> Vec<Block> {
        xs.iter().map(|x| Block::Point(x.clone())).collect()
    }

    fn iv(a: Rational, b: Rational) -> Block {
        Block::interval(a, b).unwrap()
    }

    fn dyadic(depth: u64) -> Chain {
        let xs: Vec<Rational> = (0..depth).map(|n| pow(&rat(1, 2), n)).collect();
        let horizon = xs.last().unwrap().clone();
        Chain::new(pts(&xs), int(1), horizon).unwrap()
    }

    #[test]
    fn rejects_bad_chains() {
        assert!(Block::point(int(0)).is_err());
        assert!(Block::interval(rat(1, 2), rat(1, 2)).is_err());
        assert!(Chain::new(pts(&[rat(1, 2), int(1)]), int(1), int(0)).is_err());
        assert!(Chain::new(pts(&[int(2)]), int(1), int(0)).is_err());
        assert!(Chain::new(pts(&[rat(1, 8)]), int(1), rat(1, 4)).is_err());
        // touching open intervals are disjoint
        let ok = vec![iv(rat(1, 2), int(1)), iv(rat(1, 4), rat(1, 2)), Block::Point(rat(1, 4))];
        assert!(Chain::new(ok, int(1), rat(1, 8)).is_ok());
    }

    #[test]
    fn block_round_trips_through_strings() {
        let b: Block = "(1/8,1/2)".parse().unwrap();
        assert_eq!(b, iv(rat(1, 8), rat(1, 2)));
        assert_eq!(b.to_string(), "(1/8,1/2)");
        let chain = dyadic(3);
        let json = serde_json::to_string(&chain).unwrap();
        assert_eq!(json, r#"{"blocks":["1","1/2","1/4"],"upper":"1","horizon":"1/4"}"#);
        assert_eq!(serde_json::from_str::<Chain>(&json).unwrap(), chain);
        assert!(serde_json::from_str::<Chain>(
            r#"{"blocks":["1/4","1"],"upper":"1","horizon":"0"}"#
        )
        .is_err());
    }

    #[test]
    fn gap_of_dyadic_points() {
        let c = dyadic(20);
        let g = c.lambda_gap(&int(1)).unwrap();
        assert_eq!(g, Gap { length: rat(1, 2), valid: true });
        // oracle: scan consecutive pairs below h
        for n in 1..18u64 {
            let h = pow(&rat(1, 2), n);
            let g = c.lambda_gap(&h).unwrap();
            assert!(g.valid);
            assert_eq!(g.length, &h / int(2));
        }
    }

    #[test]
    fn gap_horizon_limited() {
        let eps = rat(1, 100);
        let dense = Chain::new(vec![iv(eps.clone(), int(1))], int(1), eps.clone()).unwrap();
        let g = dense.lambda_gap(&int(1)).unwrap();
        assert_eq!(g, Gap { length: eps.clone(), valid: false });
        let empty = Chain::new(vec![], int(1), eps.clone()).unwrap();
        let g = empty.lambda_gap(&int(1)).unwrap();
        assert_eq!(g, Gap { length: int(1) - &eps, valid: false });
        assert!(empty.lambda_gap(&int(2)).is_err());
        assert!(empty.lambda_gap(&int(0)).is_err());
    }

    #[test]
    fn canonical_merging() {
        let merged = canonical_pieces(vec![
            iv(rat(1, 2), int(2)),
            iv(rat(1, 4), int(1)),
            Block::Point(rat(1, 3)),
            Block::Point(rat(1, 8)),
            Block::Point(rat(1, 8)),
        ]);
        assert_eq!(merged, vec![iv(rat(1, 4), int(2)), Block::Point(rat(1, 8))]);
        // touching intervals stay apart unless the shared endpoint is present
        let apart = canonical_pieces(vec![iv(rat(1, 2), int(1)), iv(rat(1, 4), rat(1, 2))]);
        assert_eq!(apart.len(), 2);
        let glued = canonical_pieces(vec![
            iv(rat(1, 2), int(1)),
            iv(rat(1, 4), rat(1, 2)),
            Block::Point(rat(1, 2)),
        ]);
        assert_eq!(glued, vec![iv(rat(1, 4), int(1))]);
    }

    #[test]
    fn subset_checks() {
        let a = Chain::new(vec![iv(rat(1, 4), int(1))], int(1), rat(1, 8)).unwrap();
        let b = Chain::new(pts(&[rat(1, 2), rat(1, 3)]), int(1), rat(1, 8)).unwrap();
        assert!(b.subset_within(&a, &int(0), &int(1)));
        assert!(!a.subset_within(&b, &int(0), &int(1)));
        // outside the window nothing is compared
        assert!(a.subset_within(&b, &rat(1, 2), &rat(1, 2)));
        assert!(a.equal_within(&a, &int(0), &int(1)));
    }

    #[test]
    fn truncate_moves_horizon() {
        let c = dyadic(5).truncate(2);
        assert_eq!(c.len(), 2);
        assert_eq!(c.horizon(), &rat(1, 2));
    }
}

//! Parametric descriptions of sets accumulating at 0 and their finite
//! expansions into chains.

use num::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::blowup::blow_up_chain;
use crate::error::{Error, Result};
use crate::rational::{self, int, is_unit_open, pow, Rational};
use crate::tailset::chain::{Block, Chain};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum TailFamily {
    /// Points `x0·ρ^n`.
    GeometricLadder {
        #[serde(with = "rational::as_str")]
        x0: Rational,
        #[serde(with = "rational::as_str")]
        rho: Rational,
    },
    /// Points `x0·ρ^(n(n+1)/2)`; successive ratios `ρ^(n+1)` tend to 0.
    SuperGeometricLadder {
        #[serde(with = "rational::as_str")]
        x0: Rational,
        #[serde(with = "rational::as_str")]
        rho: Rational,
    },
    /// Blocks `j = 1, 2, ..` of points `y_{0,j} > .. > y_{j,j}` with
    /// `y_{k,j} = α^k·y_{k-1,j}`, `y_{0,1} = 1` and `y_{0,j+1} = α^(j+1)·y_{j,j}`.
    ExampleFamily {
        #[serde(with = "rational::as_str")]
        alpha: Rational,
    },
    /// Clusters of `window` points. Inside cluster `k` consecutive points have
    /// ratio `ratio^(-t_k)` where `t_k` runs through the sawtooth
    /// 1; 1,2; 1,2,3; ..; cluster `k+1` starts `sigma^(k+1)` below the last
    /// point of cluster `k`. Every run of `window` consecutive gaps contains
    /// one diverging gap, and no shorter window does.
    WindowedLadder {
        #[serde(with = "rational::as_str")]
        x0: Rational,
        window: usize,
        #[serde(with = "rational::as_str")]
        sigma: Rational,
        #[serde(with = "rational::as_str")]
        ratio: Rational,
    },
    ExplicitChain { chain: Chain },
    UnionOf { members: Vec<TailFamily> },
    BlowupOf {
        family: Box<TailFamily>,
        #[serde(with = "rational::as_str")]
        q: Rational,
    },
}

/// Sawtooth exponent for cluster `k` (0-based): 1; 1,2; 1,2,3; ...
pub fn sawtooth(k: u64) -> u64 {
    let mut ramp = 1;
    let mut start = 0;
    while start + ramp <= k {
        start += ramp;
        ramp += 1;
    }
    k - start + 1
}

impl TailFamily {
    pub fn geometric(x0: Rational, rho: Rational) -> Result<Self> {
        let f = TailFamily::GeometricLadder { x0, rho };
        f.validate().map(|_| f)
    }

    pub fn super_geometric(x0: Rational, rho: Rational) -> Result<Self> {
        let f = TailFamily::SuperGeometricLadder { x0, rho };
        f.validate().map(|_| f)
    }

    pub fn example(alpha: Rational) -> Result<Self> {
        let f = TailFamily::ExampleFamily { alpha };
        f.validate().map(|_| f)
    }

    pub fn windowed(x0: Rational, window: usize, sigma: Rational, ratio: Rational) -> Result<Self> {
        let f = TailFamily::WindowedLadder { x0, window, sigma, ratio };
        f.validate().map(|_| f)
    }

    pub fn blowup(self, q: Rational) -> Result<Self> {
        let f = TailFamily::BlowupOf { family: Box::new(self), q };
        f.validate().map(|_| f)
    }

    pub fn union(members: Vec<TailFamily>) -> Result<Self> {
        let f = TailFamily::UnionOf { members };
        f.validate().map(|_| f)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidFamily(m.to_string()));
        match self {
            TailFamily::GeometricLadder { x0, rho } | TailFamily::SuperGeometricLadder { x0, rho } => {
                if !x0.is_positive() {
                    return bad("x0 must be positive");
                }
                if !is_unit_open(rho) {
                    return bad("rho must lie in (0, 1)");
                }
            }
            TailFamily::ExampleFamily { alpha } => {
                if !is_unit_open(alpha) {
                    return bad("alpha must lie in (0, 1)");
                }
            }
            TailFamily::WindowedLadder { x0, window, sigma, ratio } => {
                if !x0.is_positive() {
                    return bad("x0 must be positive");
                }
                if *window == 0 {
                    return bad("window must be at least 1");
                }
                if !is_unit_open(sigma) {
                    return bad("sigma must lie in (0, 1)");
                }
                if ratio <= &Rational::one() {
                    return bad("ratio must exceed 1");
                }
            }
            TailFamily::ExplicitChain { .. } => {}
            TailFamily::UnionOf { members } => {
                if members.is_empty() {
                    return bad("union needs at least one member");
                }
                for m in members {
                    m.validate()?;
                }
            }
            TailFamily::BlowupOf { family, q } => {
                if q <= &Rational::one() {
                    return bad("blow-up factor q must exceed 1");
                }
                family.validate()?;
            }
        }
        Ok(())
    }

    /// Whether 0 is an accumulation point of the described set.
    pub fn has_zero_accumulation(&self) -> bool {
        match self {
            TailFamily::ExplicitChain { .. } => false,
            TailFamily::UnionOf { members } => members.iter().any(Self::has_zero_accumulation),
            TailFamily::BlowupOf { family, .. } => family.has_zero_accumulation(),
            _ => true,
        }
    }

    /// The first `depth` blocks (for `ExampleFamily` and `WindowedLadder`,
    /// `depth` full clusters) as a chain whose horizon is the smallest emitted
    /// coordinate.
    pub fn expand(&self, depth: usize) -> Result<Chain> {
        if depth == 0 {
            return Err(Error::OutOfRange("depth must be at least 1".into()));
        }
        self.validate()?;
        match self {
            TailFamily::GeometricLadder { x0, rho } => {
                points_chain((0..depth as u64).map(|n| x0 * pow(rho, n)).collect())
            }
            TailFamily::SuperGeometricLadder { x0, rho } => points_chain(
                (0..depth as u64).map(|n| x0 * pow(rho, n * (n + 1) / 2)).collect(),
            ),
            TailFamily::ExampleFamily { alpha } => {
                let mut pts = Vec::new();
                let mut y = int(1);
                for j in 1..=depth as u64 {
                    if j > 1 {
                        y = &y * pow(alpha, j);
                    }
                    pts.push(y.clone());
                    for k in 1..=j {
                        y = &y * pow(alpha, k);
                        pts.push(y.clone());
                    }
                }
                points_chain(pts)
            }
            TailFamily::WindowedLadder { x0, window, sigma, ratio } => {
                let mut pts = Vec::new();
                let mut y = x0.clone();
                for k in 0..depth as u64 {
                    if k > 0 {
                        y = &y * pow(sigma, k);
                    }
                    pts.push(y.clone());
                    let step = pow(ratio, sawtooth(k));
                    for _ in 1..*window {
                        y = &y / &step;
                        pts.push(y.clone());
                    }
                }
                points_chain(pts)
            }
            TailFamily::ExplicitChain { chain } => Ok(chain.truncate(depth)),
            TailFamily::UnionOf { members } => {
                let chains = members
                    .iter()
                    .map(|m| m.expand(depth))
                    .collect::<Result<Vec<_>>>()?;
                union_chain(&chains)
            }
            TailFamily::BlowupOf { family, q } => blow_up_chain(&family.expand(depth)?, q),
        }
    }
}

fn points_chain(pts: Vec<Rational>) -> Result<Chain> {
    let upper = pts[0].clone();
    let horizon = pts.last().expect("nonempty").clone();
    Chain::new(pts.into_iter().map(Block::Point).collect(), upper, horizon)
}

/// Union of chains, known above the highest member horizon.
pub(crate) fn union_chain(chains: &[Chain]) -> Result<Chain> {
    let upper = chains.iter().map(|c| c.upper()).max().expect("nonempty").clone();
    let horizon = chains.iter().map(|c| c.horizon()).max().expect("nonempty").clone();
    let blocks: Vec<Block> = chains.iter().flat_map(|c| c.blocks().iter().cloned()).collect();
    Chain::from_unordered(blocks, upper, horizon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn geometric_depth_three() {
        let c = TailFamily::geometric(int(1), rat(1, 2)).unwrap().expand(3).unwrap();
        let pts: Vec<String> = c.blocks().iter().map(|b| b.to_string()).collect();
        assert_eq!(pts, ["1", "1/2", "1/4"]);
        assert_eq!(c.horizon(), &rat(1, 4));
    }

    #[test]
    fn example_family_depth_two() {
        // y01 = 1, y11 = 1/2; y02 = (1/2)^2 * y11 = 1/8, y12 = 1/16, y22 = 1/64
        let c = TailFamily::example(rat(1, 2)).unwrap().expand(2).unwrap();
        let pts: Vec<String> = c.blocks().iter().map(|b| b.to_string()).collect();
        assert_eq!(pts, ["1", "1/2", "1/8", "1/16", "1/64"]);
    }

    #[test]
    fn sawtooth_sequence() {
        let s: Vec<u64> = (0..10).map(sawtooth).collect();
        assert_eq!(s, [1, 1, 2, 1, 2, 3, 1, 2, 3, 4]);
    }

    #[test]
    fn windowed_ladder_layout() {
        // window 2, ratio 2: clusters {1, 1/2}, then sigma^1 below: {1/6, 1/12} ...
        let f = TailFamily::windowed(int(1), 2, rat(1, 3), int(2)).unwrap();
        let c = f.expand(3).unwrap();
        let pts: Vec<String> = c.blocks().iter().map(|b| b.to_string()).collect();
        // cluster 2 uses t = 2: step 4
        assert_eq!(pts, ["1", "1/2", "1/6", "1/12", "1/108", "1/432"]);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(TailFamily::geometric(int(1), int(1)).is_err());
        assert!(TailFamily::example(int(0)).is_err());
        assert!(TailFamily::geometric(int(1), rat(1, 2)).unwrap().blowup(int(1)).is_err());
        assert!(TailFamily::union(vec![]).is_err());
        let f = TailFamily::geometric(int(1), rat(1, 2)).unwrap();
        assert!(f.expand(0).is_err());
    }

    #[test]
    fn json_descriptor() {
        let f: TailFamily = serde_json::from_str(r#"{"variant":"ExampleFamily","alpha":"1/2"}"#).unwrap();
        assert_eq!(f, TailFamily::example(rat(1, 2)).unwrap());
        let g: TailFamily = serde_json::from_str(
            r#"{"variant":"BlowupOf","q":"2","family":{"variant":"GeometricLadder","x0":"1","rho":"1/2"}}"#,
        )
        .unwrap();
        assert_eq!(serde_json::to_string(&g).unwrap(),
            r#"{"variant":"BlowupOf","family":{"variant":"GeometricLadder","x0":"1","rho":"1/2"},"q":"2"}"#);
    }

    #[test]
    fn union_expansion_respects_horizons() {
        let a = TailFamily::geometric(int(1), rat(1, 2)).unwrap();
        let b = TailFamily::geometric(rat(3, 4), rat(1, 4)).unwrap();
        let c = TailFamily::union(vec![a, b]).unwrap().expand(4).unwrap();
        // horizons 1/8 and 3/256: known above 1/8
        assert_eq!(c.horizon(), &rat(1, 8));
        let pts: Vec<String> = c.blocks().iter().map(|b| b.to_string()).collect();
        assert_eq!(pts, ["1", "3/4", "1/2", "1/4", "3/16", "1/8"]);
    }
}

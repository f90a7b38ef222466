//! Porosity and ratio profiles read off a chain, and the `≍` check for
//! sequence pairs.

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::analysis;
use crate::error::{Error, Result};
use crate::rational::{self, Ext, Rational};
use crate::tailset::chain::Chain;
use crate::tailset::family::TailFamily;

/// Certificate for the asymptotic behaviour of a ratio profile.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum TailCertificate {
    ExplicitLimit { limsup_beta: Ext, gamma_tends_to_infinity: bool },
    EventuallyPeriodic {
        #[serde(with = "rational::vec_as_str")]
        beta_pattern: Vec<Rational>,
        gamma_pattern: Vec<Ext>,
    },
    Unknown,
}

/// `β_i = b_i/a_i` and `γ_i = a_i/b_{i+1}` for a descending chain of intervals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioProfile {
    #[serde(with = "rational::vec_as_str")]
    pub betas: Vec<Rational>,
    #[serde(with = "rational::vec_as_str")]
    pub gammas: Vec<Rational>,
    pub certificate: TailCertificate,
}

pub fn ratio_profile(chain: &Chain) -> Result<RatioProfile> {
    if chain.blocks().iter().any(|b| b.is_point()) {
        return Err(Error::Precondition(
            "ratio profile needs a chain of intervals; blow the set up first".into(),
        ));
    }
    let blocks = chain.blocks();
    let betas = blocks.iter().map(|b| b.hi() / b.lo()).collect();
    let gammas = blocks.windows(2).map(|w| w[0].lo() / w[1].hi()).collect();
    Ok(RatioProfile { betas, gammas, certificate: TailCertificate::Unknown })
}

/// Ratio profile of the expanded family with the closed-form certificate
/// attached when one is known.
pub fn ratio_profile_of(family: &TailFamily, depth: usize) -> Result<RatioProfile> {
    let mut profile = ratio_profile(&family.expand(depth)?)?;
    profile.certificate = analysis::certificate(family);
    Ok(profile)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PorositySample {
    #[serde(with = "rational::as_str")]
    pub h: Rational,
    #[serde(with = "rational::as_str")]
    pub ratio: Rational,
    pub valid: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PorosityProfile {
    pub samples: Vec<PorositySample>,
    /// Certified `p⁺(E, 0)` when a closed form is known.
    #[serde(with = "rational::opt_as_str")]
    pub certified: Option<Rational>,
}

/// `λ(E,0,h)/h` at every probe `h` where a gap ends from above (the lower
/// endpoint of each block), in descending order of `h`.
pub fn porosity_profile(family: &TailFamily, depth: usize) -> Result<PorosityProfile> {
    if !family.has_zero_accumulation() {
        return Err(Error::Precondition("0 is not an accumulation point of the set".into()));
    }
    let chain = family.expand(depth)?;
    Ok(PorosityProfile { samples: gap_ratios(&chain), certified: analysis::porosity(family) })
}

/// Same values as calling [`Chain::lambda_gap`] at every block's lower end,
/// computed in one upward sweep.
pub fn gap_ratios(chain: &Chain) -> Vec<PorositySample> {
    let blocks = chain.blocks();
    let Some(bottom) = blocks.last() else {
        return Vec::new();
    };
    let cur = bottom.lo().clone();
    let horizon = chain.horizon();
    let known_bottom = if &cur > horizon { &cur - horizon } else { Rational::zero() };
    let unknown = horizon.min(&cur).clone();
    let mut best = Rational::zero();
    let mut out = Vec::with_capacity(blocks.len());
    for i in (0..blocks.len()).rev() {
        if i + 1 < blocks.len() {
            let len = blocks[i].lo() - blocks[i + 1].hi();
            if len > best {
                best = len;
            }
        }
        let h = blocks[i].lo().clone();
        if h.is_zero() {
            continue;
        }
        let length = best.clone().max(known_bottom.clone()).max(unknown.clone());
        let valid = best >= cur;
        out.push(PorositySample { ratio: length / &h, h, valid });
    }
    out.reverse();
    out
}

/// Sequences `τ`, `h` with constants `c1`, `c2` for the relation `τ ≍ h`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequencePair {
    #[serde(with = "rational::vec_as_str")]
    pub tau: Vec<Rational>,
    #[serde(with = "rational::vec_as_str")]
    pub h: Vec<Rational>,
    #[serde(with = "rational::as_str")]
    pub c1: Rational,
    #[serde(with = "rational::as_str")]
    pub c2: Rational,
}

impl SequencePair {
    /// First index where `c1·τ_n ≤ h_n ≤ c2·τ_n` fails.
    pub fn first_violation(&self) -> Option<usize> {
        self.tau
            .iter()
            .zip(&self.h)
            .position(|(t, h)| &(&self.c1 * t) > h || h > &(&self.c2 * t))
    }
}

/// `true` iff the two-sided bound holds at every index (sequences of unequal
/// length never match).
pub fn check_equivalence(sp: &SequencePair) -> bool {
    sp.tau.len() == sp.h.len() && sp.first_violation().is_none()
}

//! Splitting a set whose component gaps diverge in windows of `N+1` into
//! `2N+2` completely strongly porous parts.
//!
//! With `γ_i = a_i/b_{i+1}` for the components of `Cc¹E(q)` (0-based,
//! descending), the indices are cut into blocks `F_k` of `N+1` consecutive
//! gaps and `m_k` is the smallest index of a largest gap in `F_k`. The
//! components `m_k+1 ..= m_{k+1}` (between two chosen gaps) form the
//! segment `𝔉_k`, which has between 1 and `2N+1` members. Part `j` takes the
//! `j`-th member of every segment; consecutive members of a part are
//! separated by some chosen gap, so their gap ratios diverge. The last part
//! is the tail `{0} ∪ (a_{m_0}, ∞)`.

use num::One;
use serde::{Deserialize, Serialize};

use crate::analysis::{normal_form, scale_profile, window_liminf, ScaleProfile};
use crate::blowup::cc1_components;
use crate::error::{Error, Result};
use crate::membership::verdict::{csp_on_components, suffix_minima, window_maxima, Verdict};
use crate::rational::{self, format_rational, Ext, Rational};
use crate::tailset::{check_equivalence, Block, Chain, Interval, SequencePair, TailFamily};
use crate::trend::{classify, Trend};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Part {
    /// Components of `E(q)` taken one per segment.
    Components {
        family: TailFamily,
        verdict: Verdict,
        /// `c` in `a ≤ x ≤ c·a` for every point `x` of a component `(a, b)`.
        #[serde(with = "rational::as_str")]
        equivalence_constant: Rational,
        /// First component from which the `≍` bound holds for all later ones.
        equivalence_from: Option<usize>,
    },
    /// `{0} ∪ (from, ∞)`.
    CofiniteTail {
        #[serde(with = "rational::as_str")]
        from: Rational,
    },
}

impl Part {
    pub fn components(&self) -> &[Block] {
        match self {
            Part::Components { family: TailFamily::ExplicitChain { chain }, .. } => chain.blocks(),
            _ => &[],
        }
    }

    /// Gap ratios between consecutive components of this part.
    pub fn gammas(&self) -> Vec<Rational> {
        self.components().windows(2).map(|w| w[0].lo() / w[1].hi()).collect()
    }

    /// First index from which every gap ratio of the part exceeds `bound`.
    pub fn gamma_exceeds_from(&self, bound: &Rational) -> Option<usize> {
        let g = self.gammas();
        match g.iter().rposition(|x| x <= bound) {
            None => Some(0),
            Some(i) if i + 1 < g.len() => Some(i + 1),
            Some(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionResult {
    pub n: usize,
    #[serde(with = "rational::as_str")]
    pub q: Rational,
    /// `m_k` for every complete block `F_k`.
    pub block_indices: Vec<usize>,
    pub parts: Vec<Part>,
    /// The parts cover `E` and `E(q)` exactly on `(cover_verified_to, ∞)`.
    #[serde(with = "rational::as_str")]
    pub cover_verified_to: Rational,
    pub cover_exact: bool,
    /// Whether the hypotheses came from a closed form or from the prefix.
    pub certified: bool,
}

struct Hypotheses {
    certified: bool,
    beta_bound: Option<Rational>,
}

fn single_base(f: &TailFamily) -> Option<(TailFamily, Rational)> {
    let mut terms = normal_form(f);
    (terms.len() == 1).then(|| {
        let t = terms.remove(0);
        (t.base, t.scale)
    })
}

fn check_hypotheses(blown: &TailFamily, comps: &[Interval], n: usize) -> Result<Hypotheses> {
    let gammas: Vec<Rational> = comps.windows(2).map(|w| w[0].lo() / w[1].hi()).collect();
    let maxima = window_maxima(&gammas, n);
    let weakest = |bound: &Rational| {
        maxima
            .iter()
            .rposition(|m| m == bound)
            .map_or(String::new(), |i| format!("; deepest such window starts at component {i}"))
    };
    if let Some((base, s)) = single_base(blown) {
        if let ScaleProfile::Discrete { beta_limsup, .. } = scale_profile(&base, &s) {
            return match window_liminf(&base, &s, n as u64) {
                Some(Ext::Infinite) => Ok(Hypotheses { certified: true, beta_bound: Some(beta_limsup) }),
                Some(Ext::Finite(v)) => Err(Error::Hypothesis(format!(
                    "window of {} consecutive gap ratios stays bounded: liminf of the window maximum is {}{}",
                    n + 1,
                    format_rational(&v),
                    weakest(&v)
                ))),
                None => Err(Error::Hypothesis("no closed form for the window condition".into())),
            };
        }
        if scale_profile(&base, &s) == ScaleProfile::Solid {
            return Err(Error::Hypothesis(format!(
                "Cc¹E(q) is finite: E(q) contains a neighbourhood of 0 at scale {}",
                format_rational(&s)
            )));
        }
    }
    let betas: Vec<Rational> = comps.iter().map(|c| c.ratio()).collect();
    if classify(&betas) == Trend::MonotoneIncreasing {
        return Err(Error::Hypothesis("component ratios b/a grow along the prefix".into()));
    }
    let minima = suffix_minima(&maxima);
    if classify(&minima) != Trend::MonotoneIncreasing {
        let low = minima.first().cloned().unwrap_or_else(Rational::one);
        return Err(Error::Hypothesis(format!(
            "window of {} consecutive gap ratios does not grow along the prefix: minimum window maximum {}{}",
            n + 1,
            format_rational(&low),
            weakest(&low)
        )));
    }
    Ok(Hypotheses { certified: false, beta_bound: None })
}

/// Splits `E` into `2N+2` parts, each completely strongly porous, using
/// the components of `Cc¹E(q)` at the given depth.
pub fn decompose_csp(f: &TailFamily, n: usize, q: &Rational, depth: usize) -> Result<DecompositionResult> {
    if n == 0 {
        return Err(Error::OutOfRange("N must be at least 1".into()));
    }
    let blown = f.clone().blowup(q.clone())?;
    let raw = f.expand(depth)?;
    let comps = cc1_components(&blown.expand(depth)?);
    let block = n + 1;
    // gap i needs component i+1; two full blocks give one segment
    let blocks = comps.len().saturating_sub(1) / block;
    if blocks < 2 {
        return Err(Error::Hypothesis(format!(
            "Cc¹E(q) has only {} components at depth {depth}; need at least {}",
            comps.len(),
            2 * block + 1
        )));
    }
    let hyp = check_hypotheses(&blown, &comps, n)?;
    let gamma = |i: usize| comps[i].lo() / comps[i + 1].hi();
    let ms: Vec<usize> = (0..blocks)
        .map(|k| {
            let range = k * block..(k + 1) * block;
            let best = range.clone().map(gamma).max().expect("nonempty block");
            range.into_iter().find(|&i| gamma(i) == best).expect("argmax")
        })
        .collect();

    let slots = 2 * n + 1;
    let mut members: Vec<Vec<Block>> = vec![Vec::new(); slots];
    let mut last_segment = vec![None; slots];
    for (k, w) in ms.windows(2).enumerate() {
        for (j, idx) in (w[0] + 1..=w[1]).enumerate() {
            members[j].push(Block::Interval(comps[idx].clone()));
            last_segment[j] = Some(k);
        }
    }
    // a slot that stops receiving members in the deeper half is finite
    let segments = ms.len() - 1;
    let finite: Vec<bool> = last_segment.iter().map(|l| l.map_or(true, |k| 2 * (k + 1) <= segments)).collect();
    let first = ms[0];
    let last = *ms.last().expect("two blocks");
    let cover_verified_to = comps[last].lo().clone();
    let tail_from = comps[first].lo().clone();

    let mut parts = Vec::with_capacity(slots + 1);
    for (blocks, finite) in members.into_iter().zip(finite) {
        parts.push(components_part(blocks, finite, hyp.beta_bound.as_ref(), depth)?);
    }
    parts.push(Part::CofiniteTail { from: tail_from.clone() });

    let union: Vec<Block> = parts.iter().flat_map(|p| p.components().iter().cloned()).collect();
    let expected: Vec<Block> = comps[first + 1..=last].iter().cloned().map(Block::Interval).collect();
    let mut sorted = crate::tailset::canonical_pieces(union.clone());
    sorted.dedup();
    let blown_exact = union.len() == expected.len() && sorted == expected;

    let upper = raw.upper() * q;
    let mut cover = union;
    cover.push(Block::interval(tail_from, upper.clone())?);
    let cover = Chain::from_unordered(cover, upper, cover_verified_to.clone())?;
    let raw_exact = raw.subset_within(&cover, &cover_verified_to, raw.upper());

    Ok(DecompositionResult {
        n,
        q: q.clone(),
        block_indices: ms,
        parts,
        cover_verified_to,
        cover_exact: blown_exact && raw_exact,
        certified: hyp.certified,
    })
}

fn components_part(blocks: Vec<Block>, finite: bool, beta_bound: Option<&Rational>, depth: usize) -> Result<Part> {
    let observed = blocks.iter().map(|b| b.hi() / b.lo()).max().unwrap_or_else(Rational::one);
    let c = beta_bound.cloned().unwrap_or(observed);
    let tau: Vec<Rational> = blocks.iter().map(|b| b.lo().clone()).collect();
    let h: Vec<Rational> = blocks.iter().map(|b| b.hi().clone()).collect();
    let equivalence_from = (0..=tau.len()).find(|&k| {
        check_equivalence(&SequencePair {
            tau: tau[k..].to_vec(),
            h: h[k..].to_vec(),
            c1: Rational::one(),
            c2: c.clone(),
        })
    });
    let verdict = if finite {
        // finitely many components: 0 is isolated from them
        Verdict::Empirical { value_at_depth: true, depth, trend: Trend::Bounded }
    } else {
        csp_on_components(&blocks, depth)
    };
    let (upper, horizon) = match (blocks.first(), blocks.last()) {
        (Some(top), Some(bottom)) => (top.hi().clone(), bottom.lo().clone()),
        _ => (Rational::one(), Rational::one()),
    };
    let chain = Chain::new(blocks, upper, horizon)?;
    Ok(Part::Components {
        family: TailFamily::ExplicitChain { chain },
        verdict,
        equivalence_constant: c,
        equivalence_from,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn disjoint(parts: &[Part]) -> bool {
        let all: Vec<&Block> = parts.iter().flat_map(|p| p.components()).collect();
        (0..all.len()).all(|i| (i + 1..all.len()).all(|j| all[i] != all[j]))
    }

    #[test]
    fn super_geometric_two_windows() {
        let f = TailFamily::super_geometric(int(1), rat(1, 2)).unwrap();
        let d = decompose_csp(&f, 1, &int(2), 24).unwrap();
        assert_eq!(d.parts.len(), 4);
        assert!(d.certified && d.cover_exact && disjoint(&d.parts));
        assert!(matches!(d.parts[3], Part::CofiniteTail { .. }));
        for p in &d.parts[..3] {
            if p.components().len() > 4 {
                assert!(p.gamma_exceeds_from(&int(1000)).is_some());
            }
        }
    }

    #[test]
    fn windowed_six_parts() {
        let f = TailFamily::windowed(int(1), 3, rat(1, 2), int(2)).unwrap();
        let d = decompose_csp(&f, 2, &int(3), 40).unwrap();
        assert_eq!(d.parts.len(), 6);
        assert!(d.certified && d.cover_exact && disjoint(&d.parts));
        for w in d.block_indices.windows(2) {
            assert!((1..=5).contains(&(w[1] - w[0])));
        }
        for p in &d.parts[..5] {
            if let Part::Components { verdict, equivalence_from, .. } = p {
                if p.components().len() >= 8 {
                    assert!(verdict.value());
                }
                assert!(equivalence_from.is_some());
            }
        }
    }

    #[test]
    fn example_family_violates_window() {
        let f = TailFamily::example(rat(1, 2)).unwrap();
        let err = decompose_csp(&f, 2, &int(3), 10).unwrap_err();
        let Error::Hypothesis(msg) = err else { panic!("{err:?}") };
        assert!(msg.contains("3 consecutive gap ratios") && msg.contains("64/9"), "{msg}");
    }

    #[test]
    fn too_shallow_or_too_narrow() {
        let f = TailFamily::super_geometric(int(1), rat(1, 2)).unwrap();
        assert!(matches!(decompose_csp(&f, 1, &int(2), 3), Err(Error::Hypothesis(_))));
        let w = TailFamily::windowed(int(1), 3, rat(1, 2), int(2)).unwrap();
        assert!(matches!(decompose_csp(&w, 1, &int(3), 30), Err(Error::Hypothesis(_))));
    }
}

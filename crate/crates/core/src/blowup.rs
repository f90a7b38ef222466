//! The q-blow-up `E(q) = ⋃_{x∈E} (x/q, qx)` on chains, component chains
//! `Cc¹E(q)`, and executable forms of the blow-up lemmas.

use num::One;
use serde::{Deserialize, Serialize};

use crate::analysis;
use crate::error::{Error, Result};
use crate::rational::{self, rat, Rational};
use crate::tailset::{gap_ratios, Block, Chain, Interval, TailFamily};
use crate::trend::{classify, Trend};

fn check_q(q: &Rational) -> Result<()> {
    if q <= &Rational::one() {
        return Err(Error::OutOfRange(format!("blow-up factor {q} must exceed 1")));
    }
    Ok(())
}

/// Point `x ↦ (x/q, qx)`, interval `(a, b) ↦ (a/q, qb)`.
pub fn blow_up_block(b: &Block, q: &Rational) -> Result<Interval> {
    check_q(q)?;
    Interval::new(b.lo() / q, b.hi() * q)
}

/// Blows up every block and merges overlapping results. Intervals that only
/// touch stay separate. The result is known above `q·ε`; a component that
/// reaches below that keeps only its known part.
pub fn blow_up_chain(c: &Chain, q: &Rational) -> Result<Chain> {
    check_q(q)?;
    let blocks = c
        .blocks()
        .iter()
        .map(|b| blow_up_block(b, q).map(Block::Interval))
        .collect::<Result<Vec<_>>>()?;
    Chain::from_unordered(blocks, c.upper() * q, c.horizon() * q)
}

/// Settled components `(a, b)` with `b ≤ 1`, in descending order.
pub fn cc1_components(c: &Chain) -> Vec<Interval> {
    c.settled_blocks()
        .iter()
        .filter_map(|b| match b {
            Block::Interval(i) if i.hi() <= &Rational::one() => Some(i.clone()),
            _ => None,
        })
        .collect()
}

/// Index of the first component violating `q^(2k)·a_k ≤ 1` (1-based `k`),
/// which must hold because every component of a blow-up has `b/a ≥ q²` and
/// the components are disjoint below 1.
pub fn component_count_violation(components: &[Interval], q: &Rational) -> Option<usize> {
    let q2 = q * q;
    let mut scale = Rational::one();
    for (i, c) in components.iter().enumerate() {
        scale = &scale * &q2;
        if &scale * c.lo() > Rational::one() {
            return Some(i);
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InclusionReport {
    /// `(0,t) ∩ B ⊆ (0,t) ∩ A` on the known region.
    pub precondition_holds: bool,
    /// `(0, c·t) ∩ B(q) ⊆ (0, c·t) ∩ A(q)` on the known region.
    pub holds: bool,
    #[serde(with = "rational::as_str")]
    pub checked_from: Rational,
    #[serde(with = "rational::as_str")]
    pub checked_to: Rational,
}

/// Checks the blown-up inclusion on `(0, c·t)` (the lemma uses `c = 1/q`)
/// given the original inclusion on `(0, t)`, both on the region where the
/// expanded chains are known.
pub fn check_inclusion_lemma(
    a: &TailFamily,
    b: &TailFamily,
    t: &Rational,
    q: &Rational,
    depth: usize,
    c: Option<&Rational>,
) -> Result<InclusionReport> {
    check_q(q)?;
    let ca = a.expand(depth)?;
    let cb = b.expand(depth)?;
    let lo = ca.horizon().max(cb.horizon()).clone();
    let precondition_holds = cb.subset_within(&ca, &lo, t);
    let qa = blow_up_chain(&ca, q)?;
    let qb = blow_up_chain(&cb, q)?;
    let blown_lo = qa.horizon().max(qb.horizon()).clone();
    let hi = match c {
        Some(c) => c * t,
        None => t / q,
    };
    Ok(InclusionReport {
        precondition_holds,
        holds: qb.subset_within(&qa, &blown_lo, &hi),
        checked_from: blown_lo,
        checked_to: hi,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Covering {
    /// Porosity margin: `λ/h ≤ s` was observed (or certified) below 1.
    #[serde(with = "rational::as_str")]
    pub s: Rational,
    #[serde(with = "rational::as_str")]
    pub q: Rational,
    #[serde(with = "rational::as_str")]
    pub t: Rational,
    /// Lower end of the verified window `(known_from, t)`.
    #[serde(with = "rational::as_str")]
    pub known_from: Rational,
    /// `E(q)` has no gap in `(known_from, t)`.
    pub verified: bool,
}

/// Number of deepest probe ratios used when no certificate is available.
const PROBE_WINDOW: usize = 10;

/// For a set that is not strongly porous at 0, a `q` with `E(q) ⊇ (0, t)`.
///
/// `s` is taken halfway between the porosity bound `r` and 1, where `r` is
/// the certified `p⁺` or else the largest of the deepest valid probe ratios,
/// and `q = 1/(1 − s)`. Returns `None` when the evidence points to strong
/// porosity instead.
pub fn find_covering_blowup(family: &TailFamily, depth: usize) -> Result<Option<Covering>> {
    let chain = family.expand(depth)?;
    let r = match analysis::porosity(family) {
        Some(p) if p == Rational::one() => return Ok(None),
        Some(p) => Some(p),
        None => {
            let valid: Vec<Rational> =
                gap_ratios(&chain).into_iter().filter(|s| s.valid).map(|s| s.ratio).collect();
            if classify(&valid) == Trend::MonotoneIncreasing {
                return Ok(None);
            }
            let deepest = &valid[valid.len().saturating_sub(PROBE_WINDOW)..];
            match deepest.iter().max() {
                Some(r) if r == &Rational::one() => return Ok(None),
                r => r.cloned(),
            }
        }
    };
    let s = match r {
        Some(r) => (r + Rational::one()) / rat(2, 1),
        None => rat(1, 2),
    };
    let q = (Rational::one() - &s).recip();
    let t = chain.upper().clone();
    let blown = blow_up_chain(&chain, &q)?;
    let known_from = blown.horizon().clone();
    let verified = known_from < t
        && blown.blocks().iter().any(|b| b.lo() <= &known_from && b.hi() >= &t);
    Ok(Some(Covering { s, q, t, known_from, verified }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{scale_profile, window_liminf, ScaleProfile};
    use crate::rational::{int, Ext};
    use crate::tailset::ratio_profile;

    fn exact_points(xs: &[Rational]) -> Chain {
        Chain::new(xs.iter().cloned().map(Block::Point).collect(), xs[0].clone(), int(0)).unwrap()
    }

    fn shown(c: &Chain) -> Vec<String> {
        c.blocks().iter().map(|b| b.to_string()).collect()
    }

    #[test]
    fn single_blocks() {
        assert_eq!(blow_up_block(&Block::Point(int(1)), &int(2)).unwrap().to_string(), "(1/2,2)");
        let b = Block::interval(rat(1, 4), rat(1, 3)).unwrap();
        assert_eq!(blow_up_block(&b, &int(2)).unwrap().to_string(), "(1/8,2/3)");
        assert!(blow_up_block(&b, &int(1)).is_err());
    }

    #[test]
    fn merging_and_separation() {
        let c = blow_up_chain(&exact_points(&[int(1), rat(1, 2)]), &int(2)).unwrap();
        assert_eq!(shown(&c), ["(1/4,2)"]);
        let c = blow_up_chain(&exact_points(&[int(1), rat(1, 100)]), &int(2)).unwrap();
        assert_eq!(shown(&c), ["(1/2,2)", "(1/200,1/50)"]);
        // q² = x/y exactly: touching intervals stay apart
        let c = blow_up_chain(&exact_points(&[int(4), int(1)]), &int(2)).unwrap();
        assert_eq!(shown(&c), ["(2,8)", "(1/2,2)"]);
    }

    #[test]
    fn horizon_scales_and_clips() {
        let g = TailFamily::geometric(int(1), rat(1, 2)).unwrap().expand(6).unwrap();
        let c = blow_up_chain(&g, &int(4)).unwrap();
        assert_eq!(c.horizon(), &rat(4, 32));
        assert_eq!(shown(&c), ["(1/8,4)"]);
        assert!(cc1_components(&c).is_empty());
    }

    #[test]
    fn set_inside_its_blowup() {
        let f = TailFamily::example(rat(1, 3)).unwrap();
        let c = f.expand(5).unwrap();
        for q in [rat(3, 2), int(2), int(5)] {
            let b = blow_up_chain(&c, &q).unwrap();
            assert!(c.subset_within(&b, b.horizon(), c.upper()));
        }
    }

    #[test]
    fn cc1_filters_above_one() {
        let c = Chain::new(
            vec![Block::interval(rat(1, 2), int(2)).unwrap(), Block::interval(rat(1, 8), rat(1, 4)).unwrap()],
            int(2),
            int(0),
        )
        .unwrap();
        let cc = cc1_components(&c);
        assert_eq!(cc.len(), 1);
        assert_eq!(cc[0].to_string(), "(1/8,1/4)");
        let g = TailFamily::geometric(rat(1, 4), rat(1, 16)).unwrap().expand(8).unwrap();
        let b = blow_up_chain(&g, &int(2)).unwrap();
        assert_eq!(cc1_components(&b).len(), b.settled_blocks().len());
        assert_eq!(component_count_violation(&cc1_components(&b), &int(2)), None);
    }

    #[test]
    fn inclusion_lemma_and_its_constant() {
        let a = TailFamily::example(rat(1, 2)).unwrap();
        let r = check_inclusion_lemma(&a, &a, &int(1), &int(2), 4, None).unwrap();
        assert!(r.precondition_holds && r.holds);

        let t = rat(1, 2);
        let b_chain = Chain::new(
            vec![Block::interval(t.clone(), int(1)).unwrap(), Block::Point(t.clone())],
            int(1),
            rat(1, 1000),
        )
        .unwrap();
        let empty = Chain::new(vec![], int(1), rat(1, 1000)).unwrap();
        let b = TailFamily::ExplicitChain { chain: b_chain };
        let a = TailFamily::ExplicitChain { chain: empty };
        let q = int(2);
        let exact = check_inclusion_lemma(&a, &b, &t, &q, 4, None).unwrap();
        assert!(exact.precondition_holds && exact.holds);
        let wider = check_inclusion_lemma(&a, &b, &t, &q, 4, Some(&rat(3, 5))).unwrap();
        assert!(wider.precondition_holds && !wider.holds);
    }

    #[test]
    fn covering_of_non_porous_sets() {
        let g = TailFamily::geometric(int(1), rat(1, 2)).unwrap();
        let cov = find_covering_blowup(&g, 20).unwrap().unwrap();
        assert_eq!((cov.s.clone(), cov.q.clone(), cov.t.clone()), (rat(3, 4), int(4), int(1)));
        assert!(cov.verified);

        let sg = TailFamily::super_geometric(int(1), rat(1, 2)).unwrap();
        assert_eq!(find_covering_blowup(&sg, 12).unwrap(), None);

        let solid = Chain::new(vec![Block::interval(rat(1, 1000), int(1)).unwrap()], int(1), rat(1, 1000)).unwrap();
        let cov = find_covering_blowup(&TailFamily::ExplicitChain { chain: solid }, 4).unwrap().unwrap();
        assert_eq!((cov.q, cov.t), (int(2), int(1)));
        assert!(cov.verified);
    }

    /// Max of `β` and min over windows of the max of `M+1` consecutive `γ`,
    /// read off the deeper half of the actual merged components.
    fn brute_force(f: &TailFamily, q: &Rational, depth: usize, m: usize) -> (Rational, Rational) {
        let blown = f.clone().blowup(q.clone()).unwrap().expand(depth).unwrap();
        let comps: Vec<Block> = cc1_components(&blown).into_iter().map(Block::Interval).collect();
        let chain = Chain::new(comps.clone(), int(1), comps.last().unwrap().lo().clone()).unwrap();
        let p = ratio_profile(&chain).unwrap();
        let half = p.betas.len() / 2;
        let beta = p.betas[half..].iter().max().unwrap().clone();
        let window = p.gammas[half..]
            .windows(m + 1)
            .map(|w| w.iter().max().unwrap().clone())
            .min()
            .unwrap();
        (beta, window)
    }

    #[test]
    fn example_closed_forms_match_merged_components() {
        for (alpha, q) in [(rat(1, 2), int(3)), (rat(1, 2), rat(3, 2)), (rat(1, 3), int(2)), (rat(2, 3), int(2))] {
            let f = TailFamily::example(alpha.clone()).unwrap();
            for m in 0..3u64 {
                let (beta, window) = brute_force(&f, &q, 16, m as usize);
                let ScaleProfile::Discrete { beta_limsup, .. } = scale_profile(&f, &q) else {
                    panic!("not discrete");
                };
                assert_eq!(beta, beta_limsup, "alpha {alpha} q {q}");
                assert_eq!(Ext::Finite(window), window_liminf(&f, &q, m).unwrap(), "alpha {alpha} q {q} M {m}");
            }
        }
        // the concrete value behind the Example at alpha = 1/2, q = 3
        let f = TailFamily::example(rat(1, 2)).unwrap();
        assert_eq!(brute_force(&f, &int(3), 12, 0).0, int(576));
    }

    #[test]
    fn windowed_closed_forms_match_merged_components() {
        let f = TailFamily::windowed(int(1), 3, rat(1, 2), int(2)).unwrap();
        for q in [rat(3, 2), int(3)] {
            for m in 0..2u64 {
                let (beta, window) = brute_force(&f, &q, 30, m as usize);
                let ScaleProfile::Discrete { beta_limsup, .. } = scale_profile(&f, &q) else {
                    panic!("not discrete");
                };
                assert_eq!(beta, beta_limsup, "q {q}");
                assert_eq!(Ext::Finite(window), window_liminf(&f, &q, m).unwrap(), "q {q} M {m}");
            }
        }
    }
}

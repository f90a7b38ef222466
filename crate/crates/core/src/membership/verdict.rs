//! Verdict engines for SP, CSP, Î(SP) and I(CSP).
//!
//! All four classes are invariant under blow-ups, so a family is reduced to
//! its normal form (base families with scales) and each base is decided from
//! its closed-form ratio profile. Unions are decided when the class rules
//! allow it (every class here is closed under subsets; the two ideals are
//! closed under finite unions). Anything else gets an empirical verdict from
//! the expanded chain.

use num::One;
use serde::{Deserialize, Serialize};

use crate::analysis::{ihat_sp_witness, normal_form, scale_profile, term_certificate, ScaleProfile, Term};
use crate::blowup::{blow_up_chain, cc1_components};
use crate::error::{Error, Result};
use crate::rational::{format_rational, rat, Ext, Rational};
use crate::tailset::{gap_ratios, Block, Chain, TailCertificate, TailFamily};
use crate::trend::{classify, Trend};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Verdict {
    Definite { value: bool, certificate: TailCertificate, note: String },
    Empirical { value_at_depth: bool, depth: usize, trend: Trend },
}

impl Verdict {
    pub fn value(&self) -> bool {
        match self {
            Verdict::Definite { value, .. } => *value,
            Verdict::Empirical { value_at_depth, .. } => *value_at_depth,
        }
    }

    pub fn is_definite(&self) -> bool {
        matches!(self, Verdict::Definite { .. })
    }

    pub fn definite(&self) -> Option<bool> {
        match self {
            Verdict::Definite { value, .. } => Some(*value),
            Verdict::Empirical { .. } => None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Class {
    Sp,
    Csp,
    IhatSp,
    ICsp,
}

impl Class {
    fn is_ideal(self) -> bool {
        matches!(self, Class::IhatSp | Class::ICsp)
    }
}

struct Fact {
    value: bool,
    certificate: TailCertificate,
    note: String,
}

fn require_accumulation(f: &TailFamily) -> Result<()> {
    if f.has_zero_accumulation() {
        Ok(())
    } else {
        Err(Error::Precondition("0 is not an accumulation point of the set".into()))
    }
}

fn beta_formula(base: &TailFamily) -> String {
    match base {
        TailFamily::SuperGeometricLadder { .. } => "q²".into(),
        TailFamily::ExampleFamily { alpha } => format!(
            "q²·(1/α)^(m(m−1)/2) with α = {}, m the least k ≥ 1 with (1/α)^k ≥ q²",
            format_rational(alpha)
        ),
        TailFamily::WindowedLadder { window, ratio, .. } => format!(
            "q²·r^(t·{}) with r = {}, t the largest t ≥ 0 with r^t < q²",
            window - 1,
            format_rational(ratio)
        ),
        _ => "q²".into(),
    }
}

fn raw_gamma(base: &TailFamily) -> Option<Ext> {
    match scale_profile(base, &Rational::one()) {
        ScaleProfile::Discrete { gamma_limsup, .. } => Some(gamma_limsup),
        _ => None,
    }
}

fn min_window(base: &TailFamily) -> Option<Option<u64>> {
    match scale_profile(base, &Rational::one()) {
        ScaleProfile::Discrete { min_window, .. } => Some(min_window),
        _ => None,
    }
}

/// Closed-form decision for one base family. `scale` is where the
/// certificate is evaluated.
fn decide_term(term: &Term, class: Class, scale: &Rational) -> Option<Fact> {
    let base = &term.base;
    let gamma = raw_gamma(base)?;
    let raw_cert = term_certificate(base, &Rational::one());
    let cert_at = |s: &Rational| match term_certificate(base, s) {
        TailCertificate::Unknown => raw_cert.clone(),
        c => c,
    };
    if let Ext::Finite(g) = &gamma {
        let p = Rational::one() - g.recip();
        let note = format!(
            "gap ratios of the points are eventually {}, so p⁺ = {} < 1",
            format_rational(g),
            format_rational(&p)
        );
        let note = match (class, ihat_sp_witness(term)) {
            (Class::IhatSp, Some(w)) => format!(
                "{note}; at q = {} the blown-up points overlap, E(q) contains a neighbourhood (0, t) and Cc¹E(q) is finite",
                format_rational(&w)
            ),
            _ => note,
        };
        return Some(Fact { value: false, certificate: raw_cert, note });
    }
    let window = min_window(base)?;
    let fact = match class {
        Class::Sp => Fact {
            value: true,
            certificate: raw_cert,
            note: "gap ratios of the points are unbounded, so p⁺ = 1".into(),
        },
        Class::IhatSp => Fact {
            value: true,
            certificate: cert_at(scale),
            note: format!(
                "for every q > 1, Cc¹E(q) is infinite and limsup b_i/a_i = {}",
                beta_formula(base)
            ),
        },
        Class::ICsp => match window {
            Some(m) => Fact {
                value: true,
                certificate: cert_at(scale),
                note: format!(
                    "for every q > 1, β is bounded and every {} consecutive gap ratios contain one tending to ∞ (M = {m})",
                    m + 1
                ),
            },
            None => Fact {
                value: false,
                certificate: cert_at(scale),
                note: "for every q > 1 and every M the windowed liminf of the gap ratios is finite".into(),
            },
        },
        Class::Csp => match window {
            Some(0) => Fact {
                value: true,
                certificate: cert_at(scale),
                note: "β is bounded and the gap ratios of Cc¹E(q) tend to ∞: the components form a ladder with ratios → 0".into(),
            },
            _ => Fact {
                value: false,
                certificate: cert_at(scale),
                note: "bounded runs of gap ratios recur at every scale, so no ladder with ratios → 0 covers the set".into(),
            },
        },
    };
    Some(fact)
}

fn decide(f: &TailFamily, class: Class, scale: &Rational) -> Option<Verdict> {
    let terms = normal_form(f);
    let facts: Vec<Option<Fact>> = terms.iter().map(|t| decide_term(t, class, &(&t.scale * scale))).collect();
    let many = facts.len() > 1;
    if let Some(fact) = facts.iter().flatten().find(|x| !x.value) {
        let note = if many {
            format!("a member of the union fails: {}; the class is closed under subsets", fact.note)
        } else {
            fact.note.clone()
        };
        return Some(Verdict::Definite { value: false, certificate: fact.certificate.clone(), note });
    }
    if facts.iter().any(Option::is_none) || (many && !class.is_ideal()) {
        return None;
    }
    let first = facts.into_iter().next().flatten()?;
    let note = if many {
        format!("every member satisfies the criterion ({}); the ideal is closed under finite unions", first.note)
    } else {
        first.note
    };
    Some(Verdict::Definite { value: true, certificate: first.certificate, note })
}

fn default_q(q_list: &[Rational]) -> Rational {
    q_list.first().cloned().unwrap_or_else(|| rat(2, 1))
}

pub fn is_sp(f: &TailFamily, depth: usize) -> Result<Verdict> {
    require_accumulation(f)?;
    if let Some(v) = decide(f, Class::Sp, &Rational::one()) {
        return Ok(v);
    }
    let chain = f.expand(depth)?;
    let values: Vec<Rational> = gap_ratios(&chain)
        .into_iter()
        .filter(|s| s.valid && s.ratio < Rational::one())
        .map(|s| (Rational::one() - s.ratio).recip())
        .collect();
    let trend = classify(&values);
    Ok(Verdict::Empirical { value_at_depth: trend == Trend::MonotoneIncreasing, depth, trend })
}

pub fn test_ihat_sp(f: &TailFamily, q_list: &[Rational], depth: usize) -> Result<Verdict> {
    require_accumulation(f)?;
    if let Some(v) = decide(f, Class::IhatSp, &default_q(q_list)) {
        return Ok(v);
    }
    let chain = f.expand(depth)?;
    let mut value = true;
    let mut worst = Trend::Bounded;
    for q in sampled(q_list) {
        let comps = cc1_components(&blow_up_chain(&chain, &q)?);
        let betas: Vec<Rational> = comps.iter().map(|c| c.ratio()).collect();
        let trend = classify(&betas);
        value &= comps.len() >= 2 && trend != Trend::MonotoneIncreasing;
        worst = worse(worst, trend);
    }
    Ok(Verdict::Empirical { value_at_depth: value, depth, trend: worst })
}

pub fn test_csp(f: &TailFamily, depth: usize) -> Result<Verdict> {
    if f.has_zero_accumulation() {
        if let Some(v) = decide(f, Class::Csp, &rat(2, 1)) {
            return Ok(v);
        }
    }
    let chain = f.expand(depth)?;
    let mut best: Option<(bool, Trend)> = None;
    for q in [rat(3, 2), rat(2, 1), rat(4, 1)] {
        let comps = component_chain(&blow_up_chain(&chain, &q)?);
        let v = csp_on_components(&comps, depth);
        let pair = (v.value(), trend_of(&v));
        if pair.0 {
            best = Some(pair);
            break;
        }
        best.get_or_insert(pair);
    }
    let (value_at_depth, trend) = best.expect("three samples");
    Ok(Verdict::Empirical { value_at_depth, depth, trend })
}

pub fn test_i_csp(f: &TailFamily, q_list: &[Rational], m_max: u64, depth: usize) -> Result<Verdict> {
    require_accumulation(f)?;
    if let Some(v) = decide(f, Class::ICsp, &default_q(q_list)) {
        return Ok(v);
    }
    let chain = f.expand(depth)?;
    let mut qs = sampled(q_list);
    qs.sort();
    let mut per_q = Vec::new();
    for q in &qs {
        let comps = cc1_components(&blow_up_chain(&chain, q)?);
        let betas: Vec<Rational> = comps.iter().map(|c| c.ratio()).collect();
        let gammas: Vec<Rational> = comps.windows(2).map(|w| w[0].lo() / w[1].hi()).collect();
        per_q.push((classify(&betas), gammas));
    }
    let mut last_trend = Trend::Bounded;
    for m in 0..=m_max {
        let passes: Vec<bool> = per_q
            .iter()
            .map(|(bt, g)| {
                let t = classify(&suffix_minima(&window_maxima(g, m as usize)));
                last_trend = t;
                *bt != Trend::MonotoneIncreasing && t == Trend::MonotoneIncreasing
            })
            .collect();
        if passes.last() == Some(&true) {
            return Ok(Verdict::Empirical { value_at_depth: true, depth, trend: Trend::MonotoneIncreasing });
        }
    }
    Ok(Verdict::Empirical { value_at_depth: false, depth, trend: last_trend })
}

/// The L2CSP test on a chain that already consists of components: bounded
/// `β` and gap ratios whose suffix minima keep growing.
pub fn csp_on_components(comps: &[Block], depth: usize) -> Verdict {
    let betas: Vec<Rational> = comps.iter().map(|b| b.hi() / b.lo()).collect();
    let gammas: Vec<Rational> = comps.windows(2).map(|w| w[0].lo() / w[1].hi()).collect();
    let beta_trend = classify(&betas);
    let minima = suffix_minima(&gammas);
    // too short for quarters: compare the first and last minimum
    let gamma_trend = if minima.len() < 4 && minima.len() > 1 && minima.first() < minima.last() {
        Trend::MonotoneIncreasing
    } else {
        classify(&minima)
    };
    Verdict::Empirical {
        value_at_depth: beta_trend != Trend::MonotoneIncreasing && gamma_trend == Trend::MonotoneIncreasing,
        depth,
        trend: gamma_trend,
    }
}

fn component_chain(c: &Chain) -> Vec<Block> {
    cc1_components(c).into_iter().map(Block::Interval).collect()
}

fn trend_of(v: &Verdict) -> Trend {
    match v {
        Verdict::Empirical { trend, .. } => *trend,
        Verdict::Definite { .. } => Trend::Bounded,
    }
}

fn worse(a: Trend, b: Trend) -> Trend {
    match (a, b) {
        (Trend::MonotoneIncreasing, _) | (_, Trend::MonotoneIncreasing) => Trend::MonotoneIncreasing,
        (Trend::Oscillating, _) | (_, Trend::Oscillating) => Trend::Oscillating,
        _ => Trend::Bounded,
    }
}

fn sampled(q_list: &[Rational]) -> Vec<Rational> {
    if q_list.is_empty() {
        vec![rat(2, 1)]
    } else {
        q_list.to_vec()
    }
}

/// `max{g_n, .., g_{n+m}}` for every full window.
pub fn window_maxima(g: &[Rational], m: usize) -> Vec<Rational> {
    g.windows(m + 1).map(|w| w.iter().max().expect("nonempty window").clone()).collect()
}

/// `min{v_k : k ≥ n}` for every `n`.
pub fn suffix_minima(v: &[Rational]) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::with_capacity(v.len());
    for x in v.iter().rev() {
        let next = match out.last() {
            Some(m) if m < x => m.clone(),
            _ => x.clone(),
        };
        out.push(next);
    }
    out.reverse();
    out
}

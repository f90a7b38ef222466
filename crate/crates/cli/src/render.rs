//! Report types owned by the binary and plain-text rendering of all reports.

use std::fmt::Write;

use porosity_core::blowup::Covering;
use porosity_core::ideal::{EquivalenceReport, PrimeReport, TheoremReport};
use porosity_core::membership::{AnalysisReport, DecompositionResult, ExampleReport, Part};
use porosity_core::rational::{self, Ext, Rational};
use porosity_core::{Chain, TailCertificate, TailFamily, Verdict};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct BlownChain {
    #[serde(with = "rational::as_str")]
    pub q: Rational,
    pub chain: Chain,
    pub cc1: usize,
    pub certificate: TailCertificate,
}

#[derive(Debug, Serialize)]
pub struct BlowupReport {
    pub family: TailFamily,
    pub depth: usize,
    pub per_q: Vec<BlownChain>,
    pub covering: Option<Covering>,
}

#[derive(Debug, Serialize)]
pub struct Foundations {
    pub theorem: TheoremReport,
    pub maximal_cover: EquivalenceReport,
    pub prime: PrimeReport,
}

fn verdict(v: &Verdict) -> String {
    match v {
        Verdict::Definite { value, note, .. } => format!("{value} (definite: {note})"),
        Verdict::Empirical { value_at_depth, depth, trend } => {
            let trend = serde_json::to_value(trend).expect("serializable trend");
            format!("{value_at_depth} (empirical at depth {depth}, trend {})", trend.as_str().unwrap_or("?"))
        }
    }
}

fn ext(e: &Option<Ext>) -> String {
    e.as_ref().map_or("unknown".into(), |x| x.to_string())
}

pub fn analysis(r: &AnalysisReport) -> String {
    let mut s = String::new();
    let family = serde_json::to_string(&r.family).expect("serializable family");
    writeln!(s, "family: {family}").unwrap();
    writeln!(s, "depth: {}", r.depth).unwrap();
    writeln!(s, "SP: {}", verdict(&r.verdicts.sp)).unwrap();
    writeln!(s, "CSP: {}", verdict(&r.verdicts.csp)).unwrap();
    writeln!(s, "I(CSP): {}", verdict(&r.verdicts.i_csp)).unwrap();
    writeln!(s, "Î(SP): {}", verdict(&r.verdicts.ihat_sp)).unwrap();
    match &r.porosity.certified {
        Some(p) => writeln!(s, "p⁺ = {p}").unwrap(),
        None => writeln!(s, "p⁺ not certified").unwrap(),
    }
    for p in &r.per_q {
        if p.solid {
            writeln!(s, "q = {}: E(q) fills a neighbourhood of 0, Cc¹ is finite", p.q).unwrap();
            continue;
        }
        writeln!(s, "q = {}: {} components, limsup β = {}", p.q, p.components, ext(&p.beta_limsup)).unwrap();
        for w in &p.windows {
            writeln!(s, "  M = {}: windowed liminf = {}", w.m, w.window_liminf).unwrap();
        }
    }
    s
}

pub fn suite(r: &crate::suite::SuiteReport) -> String {
    let mut s = format!("seed {}, {} random chains\n", r.seed, r.trials);
    for l in &r.laws {
        writeln!(s, "{}: {} violations", l.law, l.violations).unwrap();
    }
    s
}

pub fn blowup(r: &BlowupReport) -> String {
    let mut s = String::new();
    for p in &r.per_q {
        writeln!(s, "q = {}: {} Cc¹ components", p.q, p.cc1).unwrap();
        writeln!(s, "  {}", p.chain).unwrap();
    }
    match &r.covering {
        Some(c) => writeln!(
            s,
            "covering blow-up: s = {}, q = {}, t = {}, no gaps on ({}, {}): {}",
            c.s, c.q, c.t, c.known_from, c.t, c.verified
        )
        .unwrap(),
        None => writeln!(s, "no covering blow-up: the set looks strongly porous").unwrap(),
    }
    s
}

pub fn decomposition(r: &DecompositionResult) -> String {
    let mut s = format!("N = {}, q = {}, {} parts\n", r.n, r.q, r.parts.len());
    writeln!(s, "m_k = {:?}", r.block_indices).unwrap();
    for (j, p) in r.parts.iter().enumerate() {
        match p {
            Part::Components { verdict: v, .. } => {
                writeln!(s, "B_{}: {} components, CSP {}", j + 1, p.components().len(), verdict(v)).unwrap()
            }
            Part::CofiniteTail { from } => writeln!(s, "B_{}: {{0}} ∪ ({from}, ∞)", j + 1).unwrap(),
        }
    }
    writeln!(s, "cover exact on (≈{:.3e}, ∞): {}", rational::approx(&r.cover_verified_to), r.cover_exact).unwrap();
    s
}

pub fn foundations(r: &Foundations) -> String {
    let t = &r.theorem;
    let mut s = format!(
        "{} down-set bases scanned, {} counterexamples to I* = Î\n",
        t.scanned,
        t.counterexamples.len()
    );
    writeln!(
        s,
        "{} families checked for the ideal criterion, {} counterexamples",
        t.ideal_criterion_checked,
        t.ideal_criterion_counterexamples.len()
    )
    .unwrap();
    writeln!(
        s,
        "{} families checked for the maximal-ideal cover, {} counterexamples",
        r.maximal_cover.scanned,
        r.maximal_cover.counterexamples.len()
    )
    .unwrap();
    writeln!(
        s,
        "{} ideals of 2^V: {} maximal, {} prime, {} mismatches",
        r.prime.ideals,
        r.prime.maximal,
        r.prime.prime,
        r.prime.counterexamples.len()
    )
    .unwrap();
    s
}

pub fn example(r: &ExampleReport) -> String {
    let mut s = format!("alpha = {}\n", r.alpha);
    writeln!(s, "Î(SP): {}", verdict(&r.ihat_sp)).unwrap();
    writeln!(s, "I(CSP): {}", verdict(&r.i_csp)).unwrap();
    for p in &r.per_q {
        writeln!(
            s,
            "q = {}: m = {}, sum bound {}, exact limsup β {} (sum bound holds: {})",
            p.q, p.m, p.beta_sum, p.beta_limsup, p.sum_bound_holds
        )
        .unwrap();
        for w in &p.windows {
            writeln!(s, "  M = {}: windowed liminf {} <= {}: {}", w.m, w.window_liminf, w.bound, w.bound_holds).unwrap();
        }
    }
    s
}

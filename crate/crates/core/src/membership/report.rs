//! The combined analysis report for one family.

use serde::{Deserialize, Serialize};

use crate::analysis::{certificate, normal_form, scale_profile, window_liminf, ScaleProfile};
use crate::blowup::{blow_up_chain, cc1_components};
use crate::error::{Error, Result};
use crate::membership::verdict::{is_sp, test_csp, test_i_csp, test_ihat_sp, Verdict};
use crate::rational::{self, Ext, Rational};
use crate::tailset::{gap_ratios, porosity_profile, PorositySample, TailCertificate, TailFamily};

/// Version tag for serialized reports.
pub const SCHEMA: &str = "porosity-lab/1";

/// Number of ratio-table rows kept per blow-up factor.
pub const TABLE_ROWS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    #[serde(rename = "SP")]
    pub sp: Verdict,
    #[serde(rename = "CSP")]
    pub csp: Verdict,
    #[serde(rename = "I_CSP")]
    pub i_csp: Verdict,
    #[serde(rename = "Ihat_SP")]
    pub ihat_sp: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateAtQ {
    #[serde(with = "rational::as_str")]
    pub q: Rational,
    pub certificate: TailCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    /// Exact `limsup b_i/a_i` at the first blow-up factor, when known.
    pub beta_limsup: Option<Ext>,
    /// Exact windowed liminf at the first factor with window `M_max`.
    pub window_liminf: Option<Ext>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowAtM {
    #[serde(rename = "M")]
    pub m: u64,
    pub window_liminf: Ext,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisAtQ {
    #[serde(with = "rational::as_str")]
    pub q: Rational,
    /// Settled components of `Cc¹E(q)` at this depth.
    pub components: usize,
    /// `Cc¹E(q)` is finite because `E(q)` fills a neighbourhood of 0.
    pub solid: bool,
    pub beta_limsup: Option<Ext>,
    pub windows: Vec<WindowAtM>,
    #[serde(with = "rational::vec_as_str")]
    pub betas: Vec<Rational>,
    #[serde(with = "rational::vec_as_str")]
    pub gammas: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Porosity {
    /// Certified `p⁺(E, 0)`.
    #[serde(with = "rational::opt_as_str")]
    pub certified: Option<Rational>,
    /// Deepest probe samples (at most the table size).
    pub samples: Vec<PorositySample>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub family: TailFamily,
    pub depth: usize,
    #[serde(rename = "M_max")]
    pub m_max: u64,
    pub verdicts: Verdicts,
    pub certificates: Vec<CertificateAtQ>,
    pub bounds: Bounds,
    pub porosity: Porosity,
    pub per_q: Vec<AnalysisAtQ>,
}

fn single(f: &TailFamily, q: &Rational) -> Option<(TailFamily, Rational)> {
    let mut terms = normal_form(f);
    (terms.len() == 1).then(|| {
        let t = terms.remove(0);
        (t.base, t.scale * q)
    })
}

pub fn analyze(f: &TailFamily, q_list: &[Rational], depth: usize, m_max: u64) -> Result<AnalysisReport> {
    if !f.has_zero_accumulation() {
        return Err(Error::Precondition("0 is not an accumulation point of the set".into()));
    }
    let verdicts = Verdicts {
        sp: is_sp(f, depth)?,
        csp: test_csp(f, depth)?,
        i_csp: test_i_csp(f, q_list, m_max, depth)?,
        ihat_sp: test_ihat_sp(f, q_list, depth)?,
    };
    let chain = f.expand(depth)?;
    let mut certificates = Vec::new();
    let mut per_q = Vec::new();
    for q in q_list {
        let blown = f.clone().blowup(q.clone())?;
        certificates.push(CertificateAtQ { q: q.clone(), certificate: certificate(&blown) });
        let comps = cc1_components(&blow_up_chain(&chain, q)?);
        let closed = single(f, q);
        let solid = closed.as_ref().is_some_and(|(b, s)| scale_profile(b, s) == ScaleProfile::Solid);
        let beta_limsup = closed.as_ref().and_then(|(b, s)| match scale_profile(b, s) {
            ScaleProfile::Discrete { beta_limsup, .. } => Some(Ext::Finite(beta_limsup)),
            _ => None,
        });
        let windows = match &closed {
            Some((b, s)) => (0..=m_max)
                .filter_map(|m| window_liminf(b, s, m).map(|w| WindowAtM { m, window_liminf: w }))
                .collect(),
            None => Vec::new(),
        };
        per_q.push(AnalysisAtQ {
            q: q.clone(),
            components: comps.len(),
            solid,
            beta_limsup,
            windows,
            betas: comps.iter().take(TABLE_ROWS).map(|c| c.ratio()).collect(),
            gammas: comps.windows(2).take(TABLE_ROWS).map(|w| w[0].lo() / w[1].hi()).collect(),
        });
    }
    let bounds = Bounds {
        beta_limsup: per_q.first().and_then(|p| p.beta_limsup.clone()),
        window_liminf: per_q
            .first()
            .and_then(|p| p.windows.iter().find(|w| w.m == m_max))
            .map(|w| w.window_liminf.clone()),
    };
    let profile = porosity_profile(f, depth)?;
    let samples = gap_ratios(&chain);
    let skip = samples.len().saturating_sub(TABLE_ROWS);
    Ok(AnalysisReport {
        family: f.clone(),
        depth,
        m_max,
        verdicts,
        certificates,
        bounds,
        porosity: Porosity { certified: profile.certified, samples: samples.into_iter().skip(skip).collect() },
        per_q,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn geometric_report() {
        let f = TailFamily::geometric(int(1), rat(1, 2)).unwrap();
        let r = analyze(&f, &[int(2)], 20, 8).unwrap();
        assert_eq!(r.verdicts.sp.definite(), Some(false));
        assert_eq!(r.porosity.certified, Some(rat(1, 2)));
        assert!(r.per_q[0].solid);
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["verdicts"]["SP"]["value"], false);
    }

    #[test]
    fn example_bounds() {
        let f = TailFamily::example(rat(1, 2)).unwrap();
        let r = analyze(&f, &[int(3)], 8, 2).unwrap();
        assert_eq!(r.bounds.beta_limsup, Some(Ext::Finite(int(576))));
        assert_eq!(r.bounds.window_liminf, Some(Ext::Finite(rat(64, 9))));
    }

    #[test]
    fn explicit_chain_rejected() {
        let chain = TailFamily::geometric(int(1), rat(1, 2)).unwrap().expand(4).unwrap();
        assert!(analyze(&TailFamily::ExplicitChain { chain }, &[int(2)], 4, 1).is_err());
    }
}

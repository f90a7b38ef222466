//! The blocks-of-points set that lies in Î(SP) but not in I(CSP).

use num::One;
use serde::{Deserialize, Serialize};

use crate::analysis::{scale_profile, window_liminf, ScaleProfile};
use crate::error::{Error, Result};
use crate::membership::verdict::{test_i_csp, test_ihat_sp, Verdict};
use crate::rational::{self, is_unit_open, pow, Ext, Rational};
use crate::tailset::TailFamily;

/// Smallest `m ≥ 1` with `q < (1/α)^m`.
pub fn smallest_m(alpha: &Rational, q: &Rational) -> u64 {
    let inv = alpha.recip();
    let mut m = 1;
    let mut p = inv.clone();
    while &p <= q {
        p = &p * &inv;
        m += 1;
    }
    m
}

/// `Σ_{k=0}^{m} (1/α)^k`.
pub fn beta_sum(alpha: &Rational, m: u64) -> Rational {
    let inv = alpha.recip();
    (0..=m).map(|k| pow(&inv, k)).fold(Rational::from_integer(0.into()), |a, b| a + b)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowBound {
    #[serde(rename = "M")]
    pub m: u64,
    /// Exact `liminf_n max{γ_n, .., γ_{n+M}}`.
    #[serde(with = "rational::as_str")]
    pub window_liminf: Rational,
    /// `(1/α)^{m+M+1}`.
    #[serde(with = "rational::as_str")]
    pub bound: Rational,
    pub bound_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleAtQ {
    #[serde(with = "rational::as_str")]
    pub q: Rational,
    /// Smallest `m` with `q < (1/α)^m`.
    pub m: u64,
    /// `Σ_{k=0}^{m} (1/α)^k`.
    #[serde(with = "rational::as_str")]
    pub beta_sum: Rational,
    /// Exact `limsup b_i/a_i` of `Cc¹E(q)`.
    #[serde(with = "rational::as_str")]
    pub beta_limsup: Rational,
    /// Whether `beta_sum` bounds the exact limsup.
    pub sum_bound_holds: bool,
    pub windows: Vec<WindowBound>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleReport {
    #[serde(with = "rational::as_str")]
    pub alpha: Rational,
    pub depth: usize,
    pub ihat_sp: Verdict,
    pub i_csp: Verdict,
    /// `Î(SP)` holds and `I(CSP)` fails, both definitely.
    pub separates: bool,
    pub per_q: Vec<ExampleAtQ>,
}

pub fn reproduce_example(alpha: &Rational, depth: usize, q_list: &[Rational], m_max: u64) -> Result<ExampleReport> {
    if !is_unit_open(alpha) {
        return Err(Error::InvalidFamily("alpha must lie in (0, 1)".into()));
    }
    if let Some(q) = q_list.iter().find(|q| *q <= &Rational::one()) {
        return Err(Error::OutOfRange(format!("blow-up factor {q} must exceed 1")));
    }
    let f = TailFamily::example(alpha.clone())?;
    let ihat_sp = test_ihat_sp(&f, q_list, depth)?;
    let i_csp = test_i_csp(&f, q_list, m_max, depth)?;
    let separates = ihat_sp.definite() == Some(true) && i_csp.definite() == Some(false);
    let inv = alpha.recip();
    let per_q = q_list
        .iter()
        .map(|q| {
            let m = smallest_m(alpha, q);
            let sum = beta_sum(alpha, m);
            let ScaleProfile::Discrete { beta_limsup, .. } = scale_profile(&f, q) else {
                unreachable!("the example family is never solid");
            };
            let windows = (0..=m_max)
                .map(|mm| {
                    let Some(Ext::Finite(v)) = window_liminf(&f, q, mm) else {
                        unreachable!("windowed liminf of the example family is finite");
                    };
                    let bound = pow(&inv, m + mm + 1);
                    WindowBound { m: mm, bound_holds: v <= bound, window_liminf: v, bound }
                })
                .collect();
            ExampleAtQ {
                q: q.clone(),
                m,
                sum_bound_holds: beta_limsup <= sum,
                beta_sum: sum,
                beta_limsup,
                windows,
            }
        })
        .collect();
    Ok(ExampleReport { alpha: alpha.clone(), depth, ihat_sp, i_csp, separates, per_q })
}

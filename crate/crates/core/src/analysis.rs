//! Closed forms for the ratio sequences of blown-up base families.
//!
//! Every family is a finite union of base families blown up by some factor
//! `s ≥ 1` (`s = 1` means the raw point set). For each base family the
//! limsup of `β` and the windowed liminf of `γ` of `Cc¹E(s)` have exact
//! closed forms in `s`; finitely many merged components near the top of the
//! chain do not affect them.

use num::One;

use crate::rational::{pow, Ext, Rational};
use crate::tailset::{TailCertificate, TailFamily};

/// A base family (not a union, not a blow-up) together with its blow-up scale.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub base: TailFamily,
    pub scale: Rational,
}

/// Flatten unions and compose blow-ups (`E(q1)(q2) = E(q1·q2)`).
pub fn normal_form(family: &TailFamily) -> Vec<Term> {
    fn walk(f: &TailFamily, scale: &Rational, out: &mut Vec<Term>) {
        match f {
            TailFamily::UnionOf { members } => members.iter().for_each(|m| walk(m, scale, out)),
            TailFamily::BlowupOf { family, q } => walk(family, &(scale * q), out),
            base => out.push(Term { base: base.clone(), scale: scale.clone() }),
        }
    }
    let mut out = Vec::new();
    walk(family, &Rational::one(), &mut out);
    out
}

/// Asymptotic shape of the component chain of `E(s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScaleProfile {
    /// `E(s)` contains some `(0, t)`, so `Cc¹E(s)` is finite.
    Solid,
    Discrete {
        beta_limsup: Rational,
        gamma_limsup: Ext,
        gamma_tends_to_infinity: bool,
        /// Smallest `M` for which the max over every `M+1` consecutive `γ`
        /// tends to infinity.
        min_window: Option<u64>,
        periodic: Option<(Vec<Rational>, Vec<Ext>)>,
    },
    /// No closed form (explicit chains).
    Unknown,
}

fn min_power_at_least(base: &Rational, target: &Rational) -> u64 {
    let mut k = 1;
    let mut p = base.clone();
    while &p < target {
        p = &p * base;
        k += 1;
    }
    k
}

/// Largest `t ≥ 0` with `base^t < target` (`t = 0` when `base ≥ target`).
fn max_power_below(base: &Rational, target: &Rational) -> u64 {
    let mut t = 0;
    let mut p = base.clone();
    while &p < target {
        p = &p * base;
        t += 1;
    }
    t
}

/// Closed-form profile of base family `base` blown up by `s ≥ 1`.
pub fn scale_profile(base: &TailFamily, s: &Rational) -> ScaleProfile {
    let s2 = s * s;
    match base {
        TailFamily::GeometricLadder { rho, .. } => {
            let touch = &s2 * rho;
            if touch > Rational::one() {
                return ScaleProfile::Solid;
            }
            let gamma = touch.recip();
            ScaleProfile::Discrete {
                beta_limsup: s2.clone(),
                gamma_limsup: Ext::Finite(gamma.clone()),
                gamma_tends_to_infinity: false,
                min_window: None,
                periodic: Some((vec![s2], vec![Ext::Finite(gamma)])),
            }
        }
        TailFamily::SuperGeometricLadder { .. } => ScaleProfile::Discrete {
            beta_limsup: s2,
            gamma_limsup: Ext::Infinite,
            gamma_tends_to_infinity: true,
            min_window: Some(0),
            periodic: None,
        },
        TailFamily::ExampleFamily { alpha } => {
            let inv = alpha.recip();
            let m2 = min_power_at_least(&inv, &s2);
            ScaleProfile::Discrete {
                beta_limsup: s2 * pow(&inv, m2 * (m2 - 1) / 2),
                gamma_limsup: Ext::Infinite,
                gamma_tends_to_infinity: false,
                min_window: None,
                periodic: None,
            }
        }
        TailFamily::WindowedLadder { window, ratio, .. } => {
            let t = max_power_below(ratio, &s2);
            let w = *window as u64;
            ScaleProfile::Discrete {
                beta_limsup: s2 * pow(ratio, t * (w - 1)),
                gamma_limsup: Ext::Infinite,
                gamma_tends_to_infinity: w == 1,
                min_window: Some(w - 1),
                periodic: None,
            }
        }
        _ => ScaleProfile::Unknown,
    }
}

/// `liminf_n max{γ_n, .., γ_{n+M}}` for `Cc¹` of `base` blown up by `s`.
/// `None` when there is no closed form or the set is solid at this scale.
pub fn window_liminf(base: &TailFamily, s: &Rational, m: u64) -> Option<Ext> {
    let s2 = s * s;
    match (base, scale_profile(base, s)) {
        (_, ScaleProfile::Solid | ScaleProfile::Unknown) => None,
        (TailFamily::GeometricLadder { rho, .. }, _) => Some(Ext::Finite((s2 * rho).recip())),
        (TailFamily::SuperGeometricLadder { .. }, _) => Some(Ext::Infinite),
        (TailFamily::ExampleFamily { alpha }, _) => {
            let inv = alpha.recip();
            let m2 = min_power_at_least(&inv, &s2);
            Some(Ext::Finite(pow(&inv, m2 + m) / s2))
        }
        (TailFamily::WindowedLadder { window, ratio, .. }, _) => {
            if m + 1 >= *window as u64 {
                Some(Ext::Infinite)
            } else {
                let t = max_power_below(ratio, &s2);
                Some(Ext::Finite(pow(ratio, t + 1) / s2))
            }
        }
        _ => None,
    }
}

/// A blow-up factor at which `Cc¹` of `term` becomes finite or its `β`
/// unbounded, if one exists. Only ladders with bounded gap ratios fill up.
pub fn ihat_sp_witness(term: &Term) -> Option<Rational> {
    match &term.base {
        TailFamily::GeometricLadder { rho, .. } => {
            // (s/ρ)²ρ = s²/ρ > 1 for every s ≥ 1
            Some(rho.recip())
        }
        _ => None,
    }
}

fn single_term(family: &TailFamily) -> Option<Term> {
    let mut terms = normal_form(family);
    (terms.len() == 1).then(|| terms.remove(0))
}

/// Certificate for the ratio profile of `family` (a single blown-up base).
pub fn certificate(family: &TailFamily) -> TailCertificate {
    match single_term(family) {
        Some(term) if term.scale > Rational::one() => term_certificate(&term.base, &term.scale),
        _ => TailCertificate::Unknown,
    }
}

/// Certificate of `base` blown up by `s` (`s = 1`: the points themselves).
pub fn term_certificate(base: &TailFamily, s: &Rational) -> TailCertificate {
    match scale_profile(base, s) {
        ScaleProfile::Discrete { periodic: Some((beta_pattern, gamma_pattern)), .. } => {
            TailCertificate::EventuallyPeriodic { beta_pattern, gamma_pattern }
        }
        ScaleProfile::Discrete { beta_limsup, gamma_tends_to_infinity, .. } => {
            TailCertificate::ExplicitLimit {
                limsup_beta: Ext::Finite(beta_limsup),
                gamma_tends_to_infinity,
            }
        }
        _ => TailCertificate::Unknown,
    }
}

/// Certified `p⁺(E, 0)`: `0` when some term fills a neighbourhood of 0,
/// `1 − 1/limsup γ` for a single discrete term.
pub fn porosity(family: &TailFamily) -> Option<Rational> {
    let terms = normal_form(family);
    let profiles: Vec<ScaleProfile> =
        terms.iter().map(|t| scale_profile(&t.base, &t.scale)).collect();
    if profiles.iter().any(|p| *p == ScaleProfile::Solid) {
        return Some(Rational::from_integer(0.into()));
    }
    match profiles.as_slice() {
        [ScaleProfile::Discrete { gamma_limsup, .. }] => Some(match gamma_limsup {
            Ext::Infinite => Rational::one(),
            Ext::Finite(g) => Rational::one() - g.recip(),
        }),
        _ => None,
    }
}

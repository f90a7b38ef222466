//! Down sets, ideals and Γ-maximal ideals over a finite universe.
//!
//! Subsets of the universe `{0, .., n-1}` are bitmasks; a family of subsets is
//! itself a bitmask over subset codes, so a family over `n <= 6` fits a `u64`.
//! Exhaustive checks enumerate all down-closed families and are capped at
//! `n <= 4` (168 down-closed families at `n = 4`).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_UNIVERSE: u8 = 6;
pub const MAX_EXHAUSTIVE: u8 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Universe {
    size: u8,
}

impl Universe {
    pub fn new(size: u8) -> Result<Self> {
        if size == 0 || size > MAX_UNIVERSE {
            return Err(Error::OutOfRange(format!(
                "universe size {size} not in 1..={MAX_UNIVERSE}"
            )));
        }
        Ok(Universe { size })
    }

    pub fn size(&self) -> u8 {
        self.size
    }

    pub fn full(&self) -> u32 {
        (1u32 << self.size) - 1
    }

    fn subset_count(&self) -> u32 {
        1u32 << self.size
    }
}

/// A set of subsets of a finite universe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FamilyOfSets {
    universe: Universe,
    bits: u64,
}

impl FamilyOfSets {
    pub fn empty(universe: Universe) -> Self {
        FamilyOfSets { universe, bits: 0 }
    }

    pub fn from_members<I: IntoIterator<Item = u32>>(universe: Universe, members: I) -> Result<Self> {
        let mut f = Self::empty(universe);
        for m in members {
            if m & !universe.full() != 0 {
                return Err(Error::OutOfRange(format!(
                    "member {m:#b} is not a subset of a {}-element universe",
                    universe.size
                )));
            }
            f.bits |= 1u64 << m;
        }
        Ok(f)
    }

    /// All subsets of the universe.
    pub fn power_set(universe: Universe) -> Self {
        let n = universe.subset_count();
        let bits = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        FamilyOfSets { universe, bits }
    }

    /// All subsets of `a`.
    pub fn principal(universe: Universe, a: u32) -> Self {
        Self::from_members(universe, submasks(a)).expect("submasks stay in the universe")
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn contains(&self, s: u32) -> bool {
        s <= self.universe.full() && self.bits >> s & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Members in increasing code order.
    pub fn members(&self) -> Vec<u32> {
        self.iter().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        let bits = self.bits;
        (0..self.universe.subset_count()).filter(move |s| bits >> s & 1 == 1)
    }

    /// `V(Γ)`: the union of all members.
    pub fn union_of_members(&self) -> u32 {
        self.iter().fold(0, |acc, s| acc | s)
    }

    pub fn is_subfamily_of(&self, other: &FamilyOfSets) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn intersection(&self, other: &FamilyOfSets) -> FamilyOfSets {
        FamilyOfSets { universe: self.universe, bits: self.bits & other.bits }
    }

    fn with_bits(&self, bits: u64) -> FamilyOfSets {
        FamilyOfSets { universe: self.universe, bits }
    }
}

/// Every submask of `mask`, including 0 and `mask` itself.
pub fn submasks(mask: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & mask) };
        Some(cur)
    })
}

fn submasks64(mask: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & mask) };
        Some(cur)
    })
}

pub fn is_down_set(f: &FamilyOfSets) -> bool {
    f.iter().all(|b| submasks(b).all(|c| f.contains(c)))
}

/// Ideal on the set `on`: a nonempty down set, closed under pairwise union,
/// not containing `on` itself.
pub fn is_ideal(f: &FamilyOfSets, on: u32) -> bool {
    if f.is_empty() || f.contains(on) || !is_down_set(f) {
        return false;
    }
    let members = f.members();
    members
        .iter()
        .all(|&b| members.iter().all(|&c| f.contains(b | c)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedIdeal {
    pub family: FamilyOfSets,
    /// `false` when `V(Γ)` is among the finite unions.
    pub is_ideal: bool,
}

/// All finite unions of members of a nonempty down set.
pub fn generated_ideal(gamma: &FamilyOfSets) -> Result<GeneratedIdeal> {
    if gamma.is_empty() || !is_down_set(gamma) {
        return Err(Error::Precondition("generated ideal needs a nonempty down set".into()));
    }
    let mut fam = *gamma;
    loop {
        let members = fam.members();
        let mut next = fam;
        for &b in &members {
            for &c in &members {
                next.bits |= 1u64 << (b | c);
            }
        }
        if next == fam {
            break;
        }
        fam = next;
    }
    let v = gamma.union_of_members();
    Ok(GeneratedIdeal { family: fam, is_ideal: !fam.contains(v) })
}

/// All ideals on `on` contained in `within`, by exhaustive search over
/// sub-families.
pub fn ideals_within(within: &FamilyOfSets, on: u32) -> Vec<FamilyOfSets> {
    if !within.contains(0) {
        return Vec::new();
    }
    let rest = within.bits & !1u64;
    let mut out: Vec<FamilyOfSets> = submasks64(rest)
        .map(|m| within.with_bits(m | 1))
        .filter(|f| is_ideal(f, on))
        .collect();
    out.sort_by_key(|f| f.bits);
    out
}

fn maximal_among(ideals: &[FamilyOfSets]) -> Vec<FamilyOfSets> {
    ideals
        .iter()
        .filter(|i| {
            !ideals
                .iter()
                .any(|j| j.bits != i.bits && i.is_subfamily_of(j))
        })
        .copied()
        .collect()
}

/// Γ-maximal ideals for an arbitrary family: ideals on `V(Γ)` inside Γ with
/// no strictly larger ideal inside Γ.
pub fn maximal_ideals_of(gamma: &FamilyOfSets) -> Vec<FamilyOfSets> {
    let v = gamma.union_of_members();
    maximal_among(&ideals_within(gamma, v))
}

pub fn gamma_maximal_ideals(gamma: &FamilyOfSets) -> Result<Vec<FamilyOfSets>> {
    if gamma.is_empty() || !is_down_set(gamma) {
        return Err(Error::Precondition("Γ must be a nonempty down set".into()));
    }
    if gamma.contains(gamma.union_of_members()) {
        return Err(Error::Precondition("V(Γ) belongs to Γ".into()));
    }
    Ok(maximal_ideals_of(gamma))
}

/// Intersection of the Γ-maximal ideals; `{∅}` when `V(Γ) ∈ Γ`.
pub fn i_hat(gamma: &FamilyOfSets) -> Result<FamilyOfSets> {
    if gamma.is_empty() || !is_down_set(gamma) {
        return Err(Error::Precondition("Γ must be a nonempty down set".into()));
    }
    if gamma.contains(gamma.union_of_members()) {
        return Ok(gamma.with_bits(1));
    }
    let maximal = gamma_maximal_ideals(gamma)?;
    let first = maximal
        .first()
        .ok_or_else(|| Error::Precondition("no Γ-maximal ideal".into()))?;
    Ok(maximal.iter().fold(*first, |acc, i| acc.intersection(i)))
}

/// `{ S ⊆ V(Γ) : S ∪ B ∈ Γ for every B ∈ Γ }`.
pub fn i_star(gamma: &FamilyOfSets) -> FamilyOfSets {
    let v = gamma.union_of_members();
    let members = gamma.members();
    let bits = submasks(v)
        .filter(|&s| members.iter().all(|&b| gamma.contains(s | b)))
        .fold(0u64, |acc, s| acc | 1u64 << s);
    gamma.with_bits(bits)
}

/// Every down-closed family of subsets of an `n`-set, the empty family
/// included. Ordered by family code.
pub fn enumerate_down_sets(universe: Universe) -> Result<Vec<FamilyOfSets>> {
    if universe.size > MAX_EXHAUSTIVE {
        return Err(Error::OutOfRange(format!(
            "exhaustive enumeration limited to n <= {MAX_EXHAUSTIVE}"
        )));
    }
    let all = FamilyOfSets::power_set(universe);
    let mut out: Vec<FamilyOfSets> = submasks64(all.bits)
        .map(|b| all.with_bits(b))
        .filter(is_down_set)
        .collect();
    out.sort_by_key(|f| f.bits);
    Ok(out)
}

fn all_families(universe: Universe) -> impl Iterator<Item = FamilyOfSets> {
    let all = FamilyOfSets::power_set(universe);
    submasks64(all.bits).map(move |b| all.with_bits(b))
}

fn check_size(n: u8) -> Result<Universe> {
    if n == 0 || n > MAX_EXHAUSTIVE {
        return Err(Error::OutOfRange(format!("n = {n} not in 1..={MAX_EXHAUSTIVE}")));
    }
    Universe::new(n)
}

/// Machine-readable summary of Γ, its maximal ideals, Î(Γ) and I*(Γ).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealReport {
    pub universe: u8,
    pub gamma: Vec<u32>,
    pub maximal_ideals: Vec<Vec<u32>>,
    pub i_hat: Vec<u32>,
    pub i_star: Vec<u32>,
    pub equal: bool,
}

pub fn ideal_report(gamma: &FamilyOfSets) -> Result<IdealReport> {
    let maximal = if gamma.contains(gamma.union_of_members()) {
        Vec::new()
    } else {
        gamma_maximal_ideals(gamma)?
    };
    let hat = i_hat(gamma)?;
    let star = i_star(gamma);
    Ok(IdealReport {
        universe: gamma.universe().size(),
        gamma: gamma.members(),
        maximal_ideals: maximal.iter().map(FamilyOfSets::members).collect(),
        i_hat: hat.members(),
        i_star: star.members(),
        equal: hat == star,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub n: u8,
    /// Down-closed families on the `n`-set (empty family included).
    pub scanned: usize,
    /// Nonempty down sets with `V(Γ) ∉ Γ`.
    pub qualifying: usize,
    pub counterexamples: Vec<IdealReport>,
    /// Nonempty down sets tested for "I*(Γ) is an ideal ⇔ V(Γ) ∉ Γ".
    pub ideal_criterion_checked: usize,
    pub ideal_criterion_counterexamples: Vec<Vec<u32>>,
}

/// `I*(Γ) = Î(Γ)` on every qualifying down set of an `n`-set, together with
/// the criterion for `I*(Γ)` being an ideal. Families over smaller universes
/// appear here as down sets whose union `V(Γ)` is a proper subset.
pub fn check_theorem_istar_eq_ihat(n: u8) -> Result<TheoremReport> {
    let universe = check_size(n)?;
    let down_sets = enumerate_down_sets(universe)?;
    let mut report = TheoremReport {
        n,
        scanned: down_sets.len(),
        qualifying: 0,
        counterexamples: Vec::new(),
        ideal_criterion_checked: 0,
        ideal_criterion_counterexamples: Vec::new(),
    };
    for gamma in down_sets.iter().filter(|g| !g.is_empty()) {
        let v = gamma.union_of_members();
        let star = i_star(gamma);
        report.ideal_criterion_checked += 1;
        if is_ideal(&star, v) != !gamma.contains(v) {
            report.ideal_criterion_counterexamples.push(gamma.members());
        }
        if gamma.contains(v) {
            continue;
        }
        report.qualifying += 1;
        let hat = i_hat(gamma)?;
        if hat != star || !is_ideal(&hat, v) {
            report.counterexamples.push(ideal_report(gamma)?);
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub n: u8,
    pub scanned: usize,
    pub counterexamples: Vec<Vec<u32>>,
}

/// For nonempty Γ: (Γ is a down set and `V(Γ) ∉ Γ`) ⇔ every member of Γ lies
/// in some Γ-maximal ideal. All nonempty families are scanned for `n <= 3`;
/// at `n = 4` only down sets (the full family space is 2^16).
pub fn check_maximal_ideal_cover(n: u8) -> Result<EquivalenceReport> {
    let universe = check_size(n)?;
    let corpus: Vec<FamilyOfSets> = if n <= 3 {
        all_families(universe).filter(|f| !f.is_empty()).collect()
    } else {
        enumerate_down_sets(universe)?
            .into_iter()
            .filter(|f| !f.is_empty())
            .collect()
    };
    let mut report = EquivalenceReport { n, scanned: corpus.len(), counterexamples: Vec::new() };
    for gamma in &corpus {
        let lhs = is_down_set(gamma) && !gamma.contains(gamma.union_of_members());
        let maximal = maximal_ideals_of(gamma);
        let rhs = gamma.iter().all(|a| maximal.iter().any(|i| i.contains(a)));
        if lhs != rhs {
            report.counterexamples.push(gamma.members());
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeReport {
    pub n: u8,
    pub ideals: usize,
    pub maximal: usize,
    pub prime: usize,
    pub counterexamples: Vec<Vec<u32>>,
}

fn is_prime(i: &FamilyOfSets, v: u32) -> bool {
    submasks(v).all(|a| i.contains(a) || i.contains(v & !a))
}

/// With Γ = 2^V: an ideal is 2^V-maximal iff it is prime.
pub fn check_prime_iff_maximal(n: u8) -> Result<PrimeReport> {
    let universe = check_size(n)?;
    let gamma = FamilyOfSets::power_set(universe);
    let v = universe.full();
    let ideals = ideals_within(&gamma, v);
    let maximal = maximal_among(&ideals);
    let mut report = PrimeReport {
        n,
        ideals: ideals.len(),
        maximal: maximal.len(),
        prime: 0,
        counterexamples: Vec::new(),
    };
    for i in &ideals {
        let prime = is_prime(i, v);
        if prime {
            report.prime += 1;
        }
        if prime != maximal.contains(i) {
            report.counterexamples.push(i.members());
        }
    }
    Ok(report)
}

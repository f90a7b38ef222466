//! Exact-rational descriptions of subsets of ℝ⁺ accumulating at 0.

pub mod chain;
pub mod family;
pub mod profile;

pub use chain::{canonical_pieces, Block, Chain, Gap, Interval};
pub use family::TailFamily;
pub use profile::{
    check_equivalence, gap_ratios, porosity_profile, ratio_profile, ratio_profile_of, PorositySample,
    PorosityProfile,
    RatioProfile, SequencePair, TailCertificate,
};

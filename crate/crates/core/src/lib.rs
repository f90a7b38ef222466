//! Exact-rational tools for porosity ideals of subsets of the positive reals:
//! finite ideal theory, blow-ups of sets accumulating at 0, and membership
//! verdicts for strongly porous classes.

pub mod analysis;
pub mod blowup;
pub mod error;
pub mod ideal;
pub mod membership;
pub mod rational;
pub mod tailset;
pub mod trend;

pub use error::{Error, Result};
pub use rational::{Ext, Rational};
pub use membership::Verdict;
pub use tailset::{Block, Chain, Interval, TailCertificate, TailFamily};

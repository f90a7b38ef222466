//! Shared fixtures for the criterion benches.

use porosity_core::rational::{int, rat};
use porosity_core::TailFamily;

pub fn example_family() -> TailFamily {
    TailFamily::example(rat(1, 2)).expect("valid alpha")
}

/// A family that satisfies the decomposition hypotheses for `N = 2`.
pub fn windowed_family() -> TailFamily {
    TailFamily::windowed(int(1), 3, rat(1, 2), int(2)).expect("valid parameters")
}

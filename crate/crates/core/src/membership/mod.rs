//! Membership of tail families in SP, CSP, Î(SP) and I(CSP).

pub mod decompose;
pub mod example;
pub mod report;
pub mod verdict;

pub use report::{analyze, AnalysisReport, SCHEMA};
pub use example::{reproduce_example, ExampleReport};
pub use decompose::{decompose_csp, DecompositionResult, Part};
pub use verdict::{csp_on_components, is_sp, test_csp, test_i_csp, test_ihat_sp, Verdict};

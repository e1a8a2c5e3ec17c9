//! Seeded corpora, functional comparisons, K-functional checks and the
//! named verification suites.

mod compare;
mod corpus;
mod kfunctional;
mod suites;

pub use compare::{compare_functionals, EquivalenceReport, STABILITY_TOL};
pub use corpus::{gen_corpus, Corpus, Kind, ALL_KINDS};
pub use kfunctional::{k_brute, k_formula, k_upper, kfunctional_check, KReport};
pub use suites::{
    run_suite, ti_integral, Assertion, SuiteConfig, SuiteResult, BRACKET_BOUND, CONDITION_GRID, EXACT_TOL, QUAD_TOL,
    REARRANGEMENT_TOL, SUITES,
};

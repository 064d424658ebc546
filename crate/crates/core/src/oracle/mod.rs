//! Ground truth: offline optimum and exact Half-Half expectations.

mod distribution;
mod matching;
mod reduced;

pub use distribution::{
    exact_expected_half_half, half_half_distribution, unmatched_probabilities,
    unmatched_probability, MatchedSetDistribution, OracleLimits, DEFAULT_MAX_OFFLINE,
    DEFAULT_MAX_SUPPORT,
};
pub use matching::max_matching;
pub use reduced::{exact_reduced_half_half, ReducedExpectation};

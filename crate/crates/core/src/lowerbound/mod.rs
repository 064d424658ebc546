//! The phased adversarial family and Monte Carlo ratio estimation.

mod estimate;
mod phase;

pub use estimate::{
    estimate_ratio, estimate_ratio_with_threads, InstanceDistribution, RatioEstimate, MIN_TRIALS,
    Z_99,
};
pub use phase::{
    build_phase_graph, phase_closed_form, predicted_ratio_tail, predicted_unmatched_probability,
    sample_permuted, PhaseClosedForm, PhaseGraph, MAX_PHASES,
};

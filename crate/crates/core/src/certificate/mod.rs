//! Exact constants, dual-fitting tables and per-run primal-dual certificates.

mod alpha;
mod claims;
mod eta;
mod fractional;
mod integral;
mod levels;
mod report;
mod tables;

pub use alpha::{
    alpha_at, alpha_candidate, alpha_closed_form, alpha_table, case3_recurrence,
    degree_one_bound_holds, MAX_TABLE_LEVEL,
};
pub use claims::{
    case1_tail_dominance, check_claim_case1, check_claim_case2, ClaimCheck, MAX_CASE1_M,
    MAX_CASE2_M,
};
pub use eta::{
    eta, partial_series, series_exponent, series_term, EtaConstant, EtaLinear, OrderedEta,
    DEFAULT_TERMS, MAX_TERMS,
};
pub use fractional::{certify_fractional_run, dual_of_load};
pub use integral::{certify_integral_run, certify_integral_run_with};
pub use levels::{advance_pair, advance_single, primal_update, Advance, Level, LEVEL_CAP};
pub use report::{CertificateReport, Num, Summary, TraceEntry};
pub use tables::{verify_hand_tables, HandTableReport, RowCheck};

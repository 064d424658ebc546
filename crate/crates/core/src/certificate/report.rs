//! Serializable certificate reports shared by the integral and fractional certifiers.

use serde::Serialize;

use crate::error::Error;
use crate::numeric::{to_f64, to_fraction_string, Rational};

use super::eta::EtaLinear;

/// An exact value with a float rendering.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Num {
    pub exact: String,
    pub approx: f64,
}

impl From<&EtaLinear> for Num {
    fn from(x: &EtaLinear) -> Self {
        Num {
            exact: x.to_string(),
            approx: x.approx(),
        }
    }
}

impl From<&Rational> for Num {
    fn from(x: &Rational) -> Self {
        Num {
            exact: to_fraction_string(x),
            approx: to_f64(x),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceEntry {
    pub arrival: usize,
    pub neighbors: Vec<u32>,
    /// Which update rule applied.
    pub case: String,
    /// Per-neighbor state before and after: levels for the integral certificate,
    /// loads for the fractional one.
    pub before: Vec<String>,
    pub after: Vec<String>,
    pub delta_p: Num,
    pub delta_alpha: Num,
    pub beta: Num,
    /// `min (alpha_i + beta_j) - gamma` over all edges revealed so far.
    pub slack_min: Num,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub primal: Num,
    pub dual: Num,
    pub opt: usize,
    pub gamma: Num,
    pub slack_min: Option<Num>,
    /// `primal / opt`, absent when `opt = 0`.
    pub primal_over_opt: Option<f64>,
    /// Exact expected matching size when the exact engine ran.
    pub expected_size: Option<Num>,
    /// `passed`, or why the exact cross-check was skipped.
    pub expectation_check: String,
    /// Primal credited beyond the product bound by level saturation.
    pub saturation_excess: Num,
    /// Degree-2 steps at two uncapped vertices whose levels are not both `2^m - 1`.
    pub unexpected_case2: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateReport {
    pub kind: &'static str,
    pub offline: usize,
    pub arrivals: usize,
    pub trace: Vec<TraceEntry>,
    pub summary: Summary,
}

/// Certification error carrying the trace accumulated so far.
pub(crate) fn failure(message: impl Into<String>, trace: &[TraceEntry]) -> Error {
    let trace = serde_json::to_string(trace).unwrap_or_else(|e| format!("<unserializable: {e}>"));
    Error::Certificate(format!("{}; trace: {trace}", message.into()))
}

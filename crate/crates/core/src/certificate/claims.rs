//! Positivity of the two margins used to rule out non-capped levels other than `2^m - 1`.
//!
//! Each margin is computed twice, once from the alpha closed forms and once from the
//! simplified tail expression, and the two must agree exactly. The sign is decided by a
//! certified truncation of the eta series.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::Dyadic;

use super::alpha::{alpha_at, alpha_closed_form, delta_p_dyadic};
use super::eta::{partial_series_dyadic, series_exponent, series_term_dyadic, EtaLinear};

pub const MAX_CASE1_M: u32 = 20;
pub const MAX_CASE2_M: u32 = 12;

#[derive(Debug, Clone, Serialize)]
pub struct ClaimCheck {
    pub claim: &'static str,
    pub params: Vec<u32>,
    /// Margin from the alpha closed forms.
    pub margin: EtaLinear,
    /// Margin from the simplified tail expression.
    pub tail_form: EtaLinear,
    pub forms_agree: bool,
    pub positive: bool,
    /// Series terms needed to separate the margin from zero.
    pub terms_used: u32,
    /// Certified enclosure, as `log2` of its endpoints (the values underflow f64).
    pub lower_log2: f64,
    pub upper_log2: f64,
}

impl ClaimCheck {
    pub fn passed(&self) -> bool {
        self.forms_agree && self.positive
    }
}

/// `sum_{i >= m} t_i = (1 - eta) - S_{m-1}` as an element of `Q + Q*eta`.
fn tail_from(m: u32) -> EtaLinear {
    &(&EtaLinear::one() - &EtaLinear::eta()) - &EtaLinear::constant(partial_series_dyadic(m - 1))
}

fn log2(x: &Dyadic) -> f64 {
    if x.is_positive() {
        x.log2_abs()
    } else {
        f64::NEG_INFINITY
    }
}

fn finish(
    claim: &'static str,
    params: Vec<u32>,
    margin: EtaLinear,
    tail_form: EtaLinear,
) -> Result<ClaimCheck> {
    let (sign, terms) = margin.sign_with_terms()?;
    let (lo, hi) = margin.enclose_dyadic(terms.max(super::eta::DEFAULT_TERMS));
    Ok(ClaimCheck {
        claim,
        params,
        forms_agree: margin == tail_form,
        positive: sign == Ordering::Greater,
        terms_used: terms,
        lower_log2: log2(&lo),
        upper_log2: log2(&hi),
        margin,
        tail_form,
    })
}

/// Case 1: two vertices at level `2^(m-1) - 1` meet. The margin is
/// `dP - 2 (alpha_(2^m - 1) - alpha_(2^(m-1) - 1))`, which must be positive so that the
/// resulting level keeps a positive online dual.
pub fn check_claim_case1(m: u32) -> Result<ClaimCheck> {
    if !(1..=MAX_CASE1_M).contains(&m) {
        return Err(Error::InvalidParameter(format!(
            "case 1 supports 1 <= m <= {MAX_CASE1_M}, got {m}"
        )));
    }
    let half_level = (1u64 << (m - 1)) - 1;
    let two = Dyadic::from_int(2);
    // dP = 2 * 2^-(2^(m-1) - 1) - 2^-(2^m - 2)
    let dp = delta_p_dyadic(half_level, half_level);
    let diff = &alpha_closed_form(m) - &alpha_at(half_level);
    let margin = &EtaLinear::constant(dp) - &diff.scale_dyadic(&two);

    let four_t = &series_term_dyadic(m) * &Dyadic::from_int(4);
    let tail = tail_from(m).scale_dyadic(&two);
    let tail_form =
        (&EtaLinear::constant(four_t) - &tail).scale_dyadic(&Dyadic::pow2(m as i64 - 1));
    finish("case1", vec![m], margin, tail_form)
}

/// Exponent-only version of case 1 for any `m <= 40`: the margin equals
/// `2^m (t_m - R_{m+1})` with `0 < R_{m+1} < 2 t_{m+1}`, so it is positive whenever
/// `2 t_{m+1} <= t_m`, which is a comparison of exponents.
pub fn case1_tail_dominance(m: u32) -> Result<bool> {
    if !(1..=40).contains(&m) {
        return Err(Error::InvalidParameter(format!(
            "tail dominance supports 1 <= m <= 40, got {m}"
        )));
    }
    // 2 t_{m+1} = 2^-(e_{m+1} - 1) <= 2^-e_m
    Ok(series_exponent(m + 1) > series_exponent(m))
}

/// Case 2: levels `2^m1 - 1` and `2^m2 - 1` with `m1 != m2` meet. The margin
/// `dP - 2 eta + alpha_(2^m1 - 1) + alpha_(2^m2 - 1)` must be positive so the new
/// vertex saturates at `eta`.
pub fn check_claim_case2(m1: u32, m2: u32) -> Result<ClaimCheck> {
    if !(1..=MAX_CASE2_M).contains(&m1) || !(1..=MAX_CASE2_M).contains(&m2) || m1 == m2 {
        return Err(Error::InvalidParameter(format!(
            "case 2 needs distinct 1 <= m1, m2 <= {MAX_CASE2_M}, got ({m1}, {m2})"
        )));
    }
    let p1 = (1u64 << m1) - 1;
    let p2 = (1u64 << m2) - 1;
    let dp = delta_p_dyadic(p1, p2);
    let two_eta = EtaLinear::eta().scale_dyadic(&Dyadic::from_int(2));
    let margin =
        &(&(&EtaLinear::constant(dp) - &two_eta) + &alpha_closed_form(m1)) + &alpha_closed_form(m2);

    let (p1, p2) = (p1 as i64, p2 as i64);
    let lead = -(&(&Dyadic::pow2(-p1) + &Dyadic::pow2(-p2)) + &Dyadic::pow2(-(p1 + p2)));
    let tail_form = &(&EtaLinear::constant(lead)
        + &tail_from(m1).scale_dyadic(&Dyadic::pow2(m1 as i64)))
        + &tail_from(m2).scale_dyadic(&Dyadic::pow2(m2 as i64));
    finish("case2", vec![m1, m2], margin, tail_form)
}

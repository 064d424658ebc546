//! The constant `eta = 1 - sum_{i >= 1} 2^-(2^i + i - 1)` and exact arithmetic in
//! `Q + Q*eta`.
//!
//! Consecutive series terms shrink by a factor of at least 8, so after `N` terms the
//! tail lies strictly between the first omitted term and twice that term. Every
//! comparison involving eta goes through such an enclosure.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{Dyadic, Rational};

/// Series term `t_i = 2^-(2^i + i - 1)`, `i >= 1`.
pub fn series_term(i: u32) -> Rational {
    series_term_dyadic(i).to_rational()
}

pub fn series_term_dyadic(i: u32) -> Dyadic {
    assert!(
        (1..=40).contains(&i),
        "series index {i} out of supported range"
    );
    Dyadic::pow2(-(series_exponent(i) as i64))
}

/// Exponent `2^i + i - 1` of the i-th series term.
pub fn series_exponent(i: u32) -> u64 {
    (1u64 << i) + i as u64 - 1
}

/// `sum_{i=1}^{n} t_i`.
pub fn partial_series(n: u32) -> Rational {
    partial_series_dyadic(n).to_rational()
}

pub fn partial_series_dyadic(n: u32) -> Dyadic {
    (1..=n).map(series_term_dyadic).sum()
}

/// Partial sum of the eta series with a certified truncation bound.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaConstant {
    /// `1 - sum_{i=1}^{terms} t_i`, an upper bound on eta.
    pub value: Rational,
    pub terms_used: u32,
    /// Strict upper bound on the omitted tail: twice the first omitted term.
    pub truncation_bound: Rational,
}

impl EtaConstant {
    pub fn approx(&self) -> f64 {
        crate::numeric::to_f64(&self.value)
    }

    /// Closed enclosure `[value - bound, value]` of eta.
    pub fn lower(&self) -> Rational {
        &self.value - &self.truncation_bound
    }
}

fn truncation_exponent(terms: u32) -> i64 {
    series_exponent(terms + 1) as i64 - 1
}

/// Eta truncated after `min_terms` terms (at least one).
pub fn eta(min_terms: u32) -> EtaConstant {
    let terms = min_terms.max(1);
    let value = &Dyadic::from_int(1) - &partial_series_dyadic(terms);
    EtaConstant {
        value: value.to_rational(),
        terms_used: terms,
        truncation_bound: Dyadic::pow2(-truncation_exponent(terms)).to_rational(),
    }
}

/// Terms used by default; the enclosure is narrower than 2^-60.
pub const DEFAULT_TERMS: u32 = 5;
/// Escalation stops here; the enclosure width is then about 2^-(2^25).
pub const MAX_TERMS: u32 = 24;

/// `(lower, upper)` bounds on eta.
static ENCLOSURES: [OnceLock<(Dyadic, Dyadic)>; MAX_TERMS as usize + 1] =
    [const { OnceLock::new() }; MAX_TERMS as usize + 1];

fn enclosure(terms: u32) -> &'static (Dyadic, Dyadic) {
    ENCLOSURES[terms as usize].get_or_init(|| {
        let hi = &Dyadic::from_int(1) - &partial_series_dyadic(terms);
        let lo = &hi - &Dyadic::pow2(-truncation_exponent(terms));
        (lo, hi)
    })
}

fn dyadic(x: &Rational) -> Dyadic {
    Dyadic::from_rational(x).expect("coefficient in Q + Q*eta must have a power-of-two denominator")
}

/// Exact value `a + b * eta` with dyadic coefficients.
///
/// Every quantity in the level and dual bookkeeping has a power-of-two denominator, so
/// the constructors taking [`Rational`] panic on any other denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EtaLinear {
    pub a: Dyadic,
    pub b: Dyadic,
}

impl EtaLinear {
    pub fn new(a: Rational, b: Rational) -> Self {
        EtaLinear {
            a: dyadic(&a),
            b: dyadic(&b),
        }
    }

    pub fn from_dyadic(a: Dyadic, b: Dyadic) -> Self {
        EtaLinear { a, b }
    }

    /// `a + b * eta` from integer-ratio coefficients.
    pub fn from_parts(a: Rational, b: i64) -> Self {
        EtaLinear {
            a: dyadic(&a),
            b: Dyadic::from_int(b),
        }
    }

    pub fn rational(a: Rational) -> Self {
        Self::constant(dyadic(&a))
    }

    pub fn constant(a: Dyadic) -> Self {
        EtaLinear {
            a,
            b: Dyadic::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::constant(Dyadic::zero())
    }

    pub fn one() -> Self {
        Self::constant(Dyadic::from_int(1))
    }

    pub fn eta() -> Self {
        EtaLinear {
            a: Dyadic::zero(),
            b: Dyadic::from_int(1),
        }
    }

    pub fn a_rational(&self) -> Rational {
        self.a.to_rational()
    }

    pub fn b_rational(&self) -> Rational {
        self.b.to_rational()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        self.scale_dyadic(&dyadic(k))
    }

    pub fn scale_dyadic(&self, k: &Dyadic) -> Self {
        EtaLinear {
            a: &self.a * k,
            b: &self.b * k,
        }
    }

    /// Interval containing the value, using `terms` series terms for eta.
    pub fn enclose(&self, terms: u32) -> (Rational, Rational) {
        let (lo, hi) = self.enclose_dyadic(terms);
        (lo.to_rational(), hi.to_rational())
    }

    pub fn enclose_dyadic(&self, terms: u32) -> (Dyadic, Dyadic) {
        let (e_lo, e_hi) = enclosure(terms);
        let at_hi = &self.a + &(&self.b * e_hi);
        let at_lo = &self.a + &(&self.b * e_lo);
        if at_lo <= at_hi {
            (at_lo, at_hi)
        } else {
            (at_hi, at_lo)
        }
    }

    /// Sign of the value, with the number of series terms that decided it.
    ///
    /// Eta is irrational, so a non-zero value is eventually separated from zero; the
    /// enclosure is refined until it is, up to [`MAX_TERMS`].
    pub fn sign_with_terms(&self) -> Result<(Ordering, u32)> {
        if self.b.is_zero() {
            return Ok((self.a.signum(), 0));
        }
        for terms in DEFAULT_TERMS..=MAX_TERMS {
            let (lo, hi) = self.enclose_dyadic(terms);
            if lo.is_positive() {
                return Ok((Ordering::Greater, terms));
            }
            if hi.is_negative() {
                return Ok((Ordering::Less, terms));
            }
        }
        Err(Error::Undecidable { terms: MAX_TERMS })
    }

    pub fn sign(&self) -> Result<Ordering> {
        self.sign_with_terms().map(|(s, _)| s)
    }

    pub fn compare(&self, other: &EtaLinear) -> Result<Ordering> {
        (self - other).sign()
    }

    pub fn ge(&self, other: &EtaLinear) -> Result<bool> {
        Ok(self.compare(other)? != Ordering::Less)
    }

    pub fn le(&self, other: &EtaLinear) -> Result<bool> {
        Ok(self.compare(other)? != Ordering::Greater)
    }

    pub fn min(self, other: EtaLinear) -> Result<EtaLinear> {
        Ok(if self.le(&other)? { self } else { other })
    }

    pub fn approx(&self) -> f64 {
        let (lo, hi) = self.enclose_dyadic(DEFAULT_TERMS);
        (&(&lo + &hi) * &Dyadic::pow2(-1)).to_f64()
    }
}

impl fmt::Display for EtaLinear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}*eta", self.b),
            (false, false) => {
                let sign = if self.b.is_negative() { '-' } else { '+' };
                write!(f, "{} {sign} {}*eta", self.a, self.b.abs())
            }
        }
    }
}

impl Serialize for EtaLinear {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("EtaLinear", 4)?;
        st.serialize_field("a", &self.a.to_string())?;
        st.serialize_field("b", &self.b.to_string())?;
        st.serialize_field("exact", &self.to_string())?;
        st.serialize_field("approx", &self.approx())?;
        st.end()
    }
}

impl Add for &EtaLinear {
    type Output = EtaLinear;
    fn add(self, rhs: &EtaLinear) -> EtaLinear {
        EtaLinear {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl Add for EtaLinear {
    type Output = EtaLinear;
    fn add(self, rhs: EtaLinear) -> EtaLinear {
        &self + &rhs
    }
}

impl AddAssign<&EtaLinear> for EtaLinear {
    fn add_assign(&mut self, rhs: &EtaLinear) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl Sub for &EtaLinear {
    type Output = EtaLinear;
    fn sub(self, rhs: &EtaLinear) -> EtaLinear {
        EtaLinear {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}

impl Sub for EtaLinear {
    type Output = EtaLinear;
    fn sub(self, rhs: EtaLinear) -> EtaLinear {
        &self - &rhs
    }
}

impl Neg for EtaLinear {
    type Output = EtaLinear;
    fn neg(self) -> EtaLinear {
        EtaLinear {
            a: -self.a,
            b: -self.b,
        }
    }
}

impl Mul<&Rational> for &EtaLinear {
    type Output = EtaLinear;
    fn mul(self, k: &Rational) -> EtaLinear {
        self.scale(k)
    }
}

impl From<Rational> for EtaLinear {
    fn from(a: Rational) -> Self {
        EtaLinear::rational(a)
    }
}

/// Total order on `EtaLinear` for ordered containers. Panics only when two distinct
/// values cannot be separated within [`MAX_TERMS`] series terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedEta(pub EtaLinear);

impl PartialOrd for OrderedEta {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrderedEta {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.0 == other.0 {
            return Ordering::Equal;
        }
        self.0
            .compare(&other.0)
            .expect("distinct values in Q + Q*eta separate within the enclosure limit")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, pow2_neg, ratio};
    use num_traits::Zero;

    #[test]
    fn two_terms() {
        let e = eta(2);
        assert_eq!(e.value, ratio(23, 32));
        assert_eq!(e.approx(), 0.71875);
    }

    #[test]
    fn one_term_is_three_quarters() {
        assert_eq!(eta(1).value, ratio(3, 4));
    }

    #[test]
    fn five_terms_match_quoted_decimal() {
        let v = eta(5).approx();
        assert!((v - 0.717772).abs() < 5e-7, "{v}");
        assert!(v > 0.7177 && v < 0.7178);
    }

    #[test]
    fn truncation_bound_dominates_next_term() {
        for n in 1..=8 {
            let a = eta(n);
            let b = eta(n + 1);
            let diff = &a.value - &b.value;
            assert!(diff > Rational::zero());
            assert!(diff < a.truncation_bound);
            // the first omitted term alone is below the full tail
            assert!(diff >= series_term(n + 1));
        }
        let d = &eta(6).value - &eta(7).value;
        assert!(d < pow2_neg(60));
    }

    #[test]
    fn arithmetic_and_display() {
        let x = EtaLinear::from_parts(ratio(11, 4), -3);
        assert_eq!(x.to_string(), "11/4 - 3*eta");
        let y = &x + &EtaLinear::eta();
        assert_eq!(y, EtaLinear::from_parts(ratio(11, 4), -2));
        assert_eq!(EtaLinear::eta().to_string(), "1*eta");
        assert_eq!(EtaLinear::one().to_string(), "1");
    }

    #[test]
    fn signs() {
        let eta_v = EtaLinear::eta();
        assert_eq!(eta_v.sign().unwrap(), Ordering::Greater);
        // 23/32 - eta > 0 but tiny
        let x = EtaLinear::from_parts(ratio(23, 32), -1);
        assert_eq!(x.sign().unwrap(), Ordering::Greater);
        let x = EtaLinear::from_parts(ratio(3, 4), -1);
        assert_eq!(x.sign().unwrap(), Ordering::Greater);
        let x = EtaLinear::from_parts(ratio(45, 64), -1);
        assert_eq!(x.sign().unwrap(), Ordering::Less);
        assert_eq!(EtaLinear::zero().sign().unwrap(), Ordering::Equal);
    }

    #[test]
    fn escalation_separates_deep_partial_sums() {
        // (1 - S_7) - eta equals the tail beyond seven terms, about 2^-263
        let x = EtaLinear::new(eta(7).value, int(-1));
        let (s, terms) = x.sign_with_terms().unwrap();
        assert_eq!(s, Ordering::Greater);
        assert!(terms >= 7);
    }
}

//! Exact distribution of Half-Half's matched set, propagated arrival by arrival.
//!
//! States are bitsets of matched offline vertices. Every state carries an integer
//! weight over one shared denominator; a coin flip doubles the denominator and keeps
//! identical sets merged, so the support never exceeds the number of distinct sets.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::instance::{Arrival, Instance};
use crate::numeric::{from_biguint_ratio, Rational};

pub const DEFAULT_MAX_OFFLINE: usize = 24;
pub const DEFAULT_MAX_SUPPORT: usize = 1 << 22;

/// State-space guard for the exact engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_offline: usize,
    pub max_support: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_offline: DEFAULT_MAX_OFFLINE,
            max_support: DEFAULT_MAX_SUPPORT,
        }
    }
}

impl OracleLimits {
    pub fn admits(&self, inst: &Instance) -> bool {
        inst.offline_count() <= self.max_offline.min(32)
    }
}

/// Probability distribution over matched offline sets.
#[derive(Debug, Clone)]
pub struct MatchedSetDistribution {
    weights: HashMap<u32, BigUint>,
    denominator: BigUint,
}

impl MatchedSetDistribution {
    fn point_mass() -> Self {
        let mut weights = HashMap::new();
        weights.insert(0u32, BigUint::one());
        MatchedSetDistribution {
            weights,
            denominator: BigUint::one(),
        }
    }

    pub fn support_len(&self) -> usize {
        self.weights.len()
    }

    pub fn probability(&self, set: u32) -> Rational {
        self.weights
            .get(&set)
            .map(|w| from_biguint_ratio(w.clone(), self.denominator.clone()))
            .unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, Rational)> + '_ {
        self.weights
            .iter()
            .map(|(&s, w)| (s, from_biguint_ratio(w.clone(), self.denominator.clone())))
    }

    /// Total probability of sets satisfying `pred`.
    pub fn mass_where(&self, pred: impl Fn(u32) -> bool) -> Rational {
        let num: BigUint = self
            .weights
            .iter()
            .filter(|(&s, _)| pred(s))
            .map(|(_, w)| w)
            .sum();
        from_biguint_ratio(num, self.denominator.clone())
    }

    pub fn total_mass(&self) -> Rational {
        self.mass_where(|_| true)
    }

    pub fn unmatched(&self, i: u32) -> Rational {
        self.mass_where(|s| s & (1 << i) == 0)
    }

    pub fn both_unmatched(&self, i: u32, k: u32) -> Rational {
        let mask = (1u32 << i) | (1u32 << k);
        self.mass_where(|s| s & mask == 0)
    }

    /// `E[|S|]`.
    pub fn expected_size(&self) -> Rational {
        let num: BigUint = self
            .weights
            .iter()
            .map(|(&s, w)| w * BigUint::from(s.count_ones()))
            .sum();
        from_biguint_ratio(num, self.denominator.clone())
    }

    fn step(&self, a: &Arrival) -> Self {
        let splits = |s: u32| match *a {
            Arrival::Two(x, y) => s & (1 << x) == 0 && s & (1 << y) == 0,
            Arrival::One(_) => false,
        };
        let any_split = self.weights.keys().any(|&s| splits(s));
        let scale: u32 = if any_split { 2 } else { 1 };
        let mut next: HashMap<u32, BigUint> = HashMap::with_capacity(self.weights.len() * 2);
        let mut add = |s: u32, w: BigUint| {
            *next.entry(s).or_insert_with(BigUint::zero) += w;
        };
        for (&s, w) in &self.weights {
            match *a {
                Arrival::One(i) => add(s | (1 << i), w * scale),
                Arrival::Two(x, y) => {
                    let fx = s & (1 << x) == 0;
                    let fy = s & (1 << y) == 0;
                    match (fx, fy) {
                        (true, true) => {
                            add(s | (1 << x), w.clone());
                            add(s | (1 << y), w.clone());
                        }
                        (true, false) => add(s | (1 << x), w * scale),
                        (false, true) => add(s | (1 << y), w * scale),
                        (false, false) => add(s, w * scale),
                    }
                }
            }
        }
        MatchedSetDistribution {
            weights: next,
            denominator: &self.denominator * scale,
        }
    }
}

/// Runs the exact engine. `observe(t, dist)` sees the distribution just before
/// arrival `t`; the final distribution is returned.
pub fn half_half_distribution(
    inst: &Instance,
    limits: OracleLimits,
    mut observe: impl FnMut(usize, &MatchedSetDistribution),
) -> Result<MatchedSetDistribution> {
    if !limits.admits(inst) {
        return Err(Error::GuardExceeded(format!(
            "{} offline vertices exceed the limit of {}",
            inst.offline_count(),
            limits.max_offline.min(32)
        )));
    }
    let mut dist = MatchedSetDistribution::point_mass();
    for (t, a) in inst.arrivals().iter().enumerate() {
        observe(t, &dist);
        dist = dist.step(a);
        if dist.support_len() > limits.max_support {
            return Err(Error::GuardExceeded(format!(
                "support size {} after arrival {t} exceeds the cap {}",
                dist.support_len(),
                limits.max_support
            )));
        }
    }
    Ok(dist)
}

/// Exact `E[|half_half(inst)|]` over all coin outcomes.
pub fn exact_expected_half_half(inst: &Instance) -> Result<Rational> {
    Ok(half_half_distribution(inst, OracleLimits::default(), |_, _| {})?.expected_size())
}

/// Exact probability that `offline` ends unmatched under Half-Half.
pub fn unmatched_probability(inst: &Instance, offline: u32) -> Result<Rational> {
    if offline as usize >= inst.offline_count() {
        return Err(Error::InvalidParameter(format!(
            "offline vertex {offline} out of range"
        )));
    }
    Ok(half_half_distribution(inst, OracleLimits::default(), |_, _| {})?.unmatched(offline))
}

pub fn unmatched_probabilities(inst: &Instance) -> Result<Vec<Rational>> {
    let dist = half_half_distribution(inst, OracleLimits::default(), |_, _| {})?;
    Ok((0..inst.offline_count() as u32)
        .map(|i| dist.unmatched(i))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::parse_instance;
    use crate::numeric::ratio;

    #[test]
    fn two_vertex_expectation() {
        let inst = parse_instance(br#"{"offline":2,"arrivals":[[0,1],[0]]}"#).unwrap();
        assert_eq!(exact_expected_half_half(&inst).unwrap(), ratio(3, 2));
    }

    #[test]
    fn phase_k2_expectation() {
        let inst = parse_instance(br#"{"offline":4,"arrivals":[[0,2],[1,3],[2,3]]}"#).unwrap();
        assert_eq!(exact_expected_half_half(&inst).unwrap(), ratio(11, 4));
        let probs = unmatched_probabilities(&inst).unwrap();
        assert_eq!(
            probs,
            vec![ratio(1, 2), ratio(1, 2), ratio(1, 8), ratio(1, 8)]
        );
    }

    #[test]
    fn deterministic_instance_is_integral() {
        let inst = parse_instance(br#"{"offline":3,"arrivals":[[0],[0,1],[1,2],[2]]}"#).unwrap();
        assert_eq!(exact_expected_half_half(&inst).unwrap(), ratio(3, 1));
    }

    #[test]
    fn isolated_vertex_is_unmatched() {
        let inst = parse_instance(br#"{"offline":3,"arrivals":[[0,1]]}"#).unwrap();
        assert_eq!(unmatched_probability(&inst, 2).unwrap(), ratio(1, 1));
        assert!(unmatched_probability(&inst, 3).is_err());
    }

    #[test]
    fn guards_trip() {
        let inst = parse_instance(br#"{"offline":25,"arrivals":[[0,1]]}"#).unwrap();
        assert!(matches!(
            exact_expected_half_half(&inst),
            Err(Error::GuardExceeded(_))
        ));
        let inst = parse_instance(br#"{"offline":4,"arrivals":[[0,1],[2,3]]}"#).unwrap();
        let tight = OracleLimits {
            max_offline: 24,
            max_support: 3,
        };
        assert!(half_half_distribution(&inst, tight, |_, _| {}).is_err());
    }

    #[test]
    fn observer_sees_pre_arrival_state() {
        let inst = parse_instance(br#"{"offline":2,"arrivals":[[0,1],[0,1]]}"#).unwrap();
        let mut seen = Vec::new();
        let d = half_half_distribution(&inst, OracleLimits::default(), |t, d| {
            seen.push((t, d.both_unmatched(0, 1)));
        })
        .unwrap();
        assert_eq!(seen, vec![(0, ratio(1, 1)), (1, ratio(0, 1))]);
        assert_eq!(d.total_mass(), ratio(1, 1));
        assert_eq!(d.expected_size(), ratio(2, 1));
    }
}

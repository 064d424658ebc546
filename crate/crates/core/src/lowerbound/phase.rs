//! The phased family: `n = 2^k` offline vertices and `n - 1` arrivals in `k` phases.
//!
//! Phase `j` has `n / 2^j` arrivals. Arrival `t` at within-phase index `i` is adjacent
//! to offline `t` and to offline `n - n/2^j + i`. Every edge of phase `j` joins two
//! vertices of degree `j - 1`, and of each pair only the second endpoint appears again.

use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::instance::{apply_permutation, Arrival, Instance, OfflinePermutation};
use crate::numeric::{int, pow2_neg, Rational};

pub const MAX_PHASES: u32 = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseGraph {
    k: u32,
    instance: Instance,
    phase_of_arrival: Vec<u8>,
    last_phase_of_offline: Vec<u8>,
}

impl PhaseGraph {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn into_instance(self) -> Instance {
        self.instance
    }

    /// Phase `j` in `1..=k` of arrival `t`.
    pub fn phase_of_arrival(&self, t: usize) -> u32 {
        self.phase_of_arrival[t] as u32
    }

    /// Last phase in which offline vertex `i` gains an edge.
    pub fn last_phase_of_offline(&self, i: u32) -> u32 {
        self.last_phase_of_offline[i as usize] as u32
    }
}

pub fn build_phase_graph(k: u32) -> Result<PhaseGraph> {
    if !(1..=MAX_PHASES).contains(&k) {
        return Err(Error::InvalidParameter(format!(
            "phase count must lie in 1..={MAX_PHASES}, got {k}"
        )));
    }
    let n = 1usize << k;
    let mut arrivals = Vec::with_capacity(n - 1);
    let mut phase_of_arrival = Vec::with_capacity(n - 1);
    let mut last_phase = vec![0u8; n];
    let mut t = 0usize;
    for j in 1..=k {
        let size = n >> j;
        let base = n - size;
        for i in 0..size {
            let (a, b) = (t as u32, (base + i) as u32);
            arrivals.push(Arrival::pair(a, b));
            phase_of_arrival.push(j as u8);
            last_phase[a as usize] = j as u8;
            last_phase[b as usize] = j as u8;
            t += 1;
        }
    }
    Ok(PhaseGraph {
        k,
        instance: Instance::new(n, arrivals)?,
        phase_of_arrival,
        last_phase_of_offline: last_phase,
    })
}

/// `2^-(2^i - 1)`: probability that a vertex whose last phase is `i` stays unmatched
/// under Half-Half, for `i` below the final phase.
pub fn predicted_unmatched_probability(i: u32) -> Result<Rational> {
    if !(1..=32).contains(&i) {
        return Err(Error::InvalidParameter(format!(
            "phase index must lie in 1..=32, got {i}"
        )));
    }
    Ok(pow2_neg((1u64 << i) - 1))
}

/// `1 - sum_{i=1}^{k} 2^-(2^i + i - 1)`, the asymptotic per-vertex ratio truncated at `k`.
pub fn predicted_ratio_tail(k: u32) -> Result<Rational> {
    if !(1..=32).contains(&k) {
        return Err(Error::InvalidParameter(format!(
            "k must lie in 1..=32, got {k}"
        )));
    }
    Ok(Rational::one() - crate::certificate::partial_series(k))
}

/// Exact Half-Half expectation on the phase graph with `k` phases.
///
/// Both endpoints of a phase-`j` edge are free before it with probability
/// `q_{j-1}` each, independently, so each ends the phase unmatched with probability
/// `q_{j-1}^2 / 2 = q_j`. Vertices leaving in phase `i < k` number `n / 2^i`; the last
/// edge leaves two vertices at `q_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseClosedForm {
    pub k: u32,
    pub n: u64,
    pub opt: u64,
    pub expected_matched: Rational,
    pub expected_unmatched: Rational,
    /// Normalized by the offline optimum `2^k - 1`.
    pub ratio_vs_opt: Rational,
    /// Normalized by `n = 2^k`, the normalization of the asymptotic formula.
    pub ratio_vs_n: Rational,
}

pub fn phase_closed_form(k: u32) -> Result<PhaseClosedForm> {
    if !(1..=MAX_PHASES).contains(&k) {
        return Err(Error::InvalidParameter(format!(
            "phase count must lie in 1..={MAX_PHASES}, got {k}"
        )));
    }
    let n = 1u64 << k;
    let mut unmatched = Rational::zero();
    for i in 1..k {
        unmatched += int((n >> i) as i64) * predicted_unmatched_probability(i)?;
    }
    unmatched += int(2) * predicted_unmatched_probability(k)?;
    let matched = int(n as i64) - &unmatched;
    let opt = n - 1;
    Ok(PhaseClosedForm {
        k,
        n,
        opt,
        ratio_vs_opt: &matched / int(opt as i64),
        ratio_vs_n: &matched / int(n as i64),
        expected_matched: matched,
        expected_unmatched: unmatched,
    })
}

/// The phase graph under a uniformly random relabeling of the offline side.
pub fn sample_permuted<R: Rng + ?Sized>(pg: &PhaseGraph, rng: &mut R) -> Instance {
    let perm = OfflinePermutation::random(pg.instance.offline_count(), rng);
    apply_permutation(&pg.instance, &perm).expect("permutation sized to the instance")
}

//! Exact Half-Half expectations on the exact-degree-2 reduction, without expanding
//! the product state space of the copies.
//!
//! Until some copy grabs the dummy vertex, copies evolve independently. A copy in
//! that phase is tracked by a sub-probability distribution over its matched sets
//! whose mass is the probability that it has not grabbed the dummy yet. Once the
//! dummy is taken every copy behaves like Half-Half on the source, so its expected
//! final size from any state is a value function over (arrival, matched set).

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::instance::{Arrival, Instance};
use crate::numeric::{int, ratio, Rational};

/// Exact expectations for `m` copies.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedExpectation {
    pub copies: usize,
    /// `E[size]` of Half-Half on the reduced instance, dummy edge included.
    pub reduced: Rational,
    /// `E[size]` of the lifted matching: uniform copy, zero when that copy used the dummy.
    pub lifted: Rational,
    /// Probability that some copy matched the dummy.
    pub dummy_taken: Rational,
}

struct ValueFunction<'a> {
    arrivals: &'a [Arrival],
    memo: HashMap<(usize, u32), Rational>,
}

impl ValueFunction<'_> {
    /// Expected final matched count of source Half-Half started in `set` before arrival `t`.
    fn value(&mut self, t: usize, set: u32) -> Rational {
        if t == self.arrivals.len() {
            return int(set.count_ones() as i64);
        }
        if let Some(v) = self.memo.get(&(t, set)) {
            return v.clone();
        }
        let free = |i: u32| set & (1 << i) == 0;
        let v = match self.arrivals[t] {
            Arrival::One(i) if free(i) => self.value(t + 1, set | (1 << i)),
            Arrival::One(_) => self.value(t + 1, set),
            Arrival::Two(x, y) => match (free(x), free(y)) {
                (true, true) => {
                    (self.value(t + 1, set | (1 << x)) + self.value(t + 1, set | (1 << y))) / int(2)
                }
                (true, false) => self.value(t + 1, set | (1 << x)),
                (false, true) => self.value(t + 1, set | (1 << y)),
                (false, false) => self.value(t + 1, set),
            },
        };
        self.memo.insert((t, set), v.clone());
        v
    }
}

fn add(map: &mut HashMap<u32, Rational>, s: u32, w: Rational) {
    *map.entry(s).or_insert_with(Rational::zero) += w;
}

/// Per-arrival quantities of one copy while the dummy is still free.
struct SurvivalTrace {
    /// Surviving sub-distribution after each arrival; index 0 is the start state.
    surviving: Vec<HashMap<u32, Rational>>,
    /// Mass that grabs the dummy at each arrival, by matched set.
    grabbing: Vec<HashMap<u32, Rational>>,
}

fn survival_trace(inst: &Instance) -> SurvivalTrace {
    let half = ratio(1, 2);
    let mut cur: HashMap<u32, Rational> = HashMap::from([(0u32, Rational::one())]);
    let mut surviving = vec![cur.clone()];
    let mut grabbing = Vec::new();
    for a in inst.arrivals() {
        let mut next = HashMap::new();
        let mut grab = HashMap::new();
        for (&s, w) in &cur {
            let free = |i: u32| s & (1 << i) == 0;
            match *a {
                Arrival::One(i) if free(i) => {
                    add(&mut next, s | (1 << i), w * &half);
                    add(&mut grab, s, w * &half);
                }
                Arrival::One(_) => add(&mut grab, s, w.clone()),
                Arrival::Two(x, y) => match (free(x), free(y)) {
                    (true, true) => {
                        add(&mut next, s | (1 << x), w * &half);
                        add(&mut next, s | (1 << y), w * &half);
                    }
                    (true, false) => add(&mut next, s | (1 << x), w.clone()),
                    (false, true) => add(&mut next, s | (1 << y), w.clone()),
                    (false, false) => add(&mut next, s, w.clone()),
                },
            }
        }
        surviving.push(next.clone());
        grabbing.push(grab);
        cur = next;
    }
    SurvivalTrace {
        surviving,
        grabbing,
    }
}

fn pow(x: &Rational, e: usize) -> Rational {
    num_traits::pow(x.clone(), e)
}

/// Exact reduced and lifted Half-Half expectations for `m` copies of `inst`.
///
/// The source must fit 32-bit matched-set masks.
pub fn exact_reduced_half_half(inst: &Instance, m: usize) -> Result<ReducedExpectation> {
    if m == 0 {
        return Err(Error::InvalidParameter(
            "copy count must be at least 1".into(),
        ));
    }
    if inst.offline_count() > 24 {
        return Err(Error::GuardExceeded(format!(
            "{} offline vertices in the source exceed the limit of 24",
            inst.offline_count()
        )));
    }
    let trace = survival_trace(inst);
    let mut vf = ValueFunction {
        arrivals: inst.arrivals(),
        memo: HashMap::new(),
    };
    let steps = inst.arrival_count();
    let mass = |d: &HashMap<u32, Rational>| d.values().sum::<Rational>();
    let s: Vec<Rational> = trace.surviving.iter().map(mass).collect();
    // h[k]: surviving mass after k arrivals weighted by its value from arrival k on
    let h: Vec<Rational> = (0..=steps)
        .map(|k| {
            trace.surviving[k]
                .iter()
                .map(|(&set, w)| w * vf.value(k, set))
                .sum()
        })
        .collect();

    let mf = m as i64;
    let mut non_grabber_total = int(mf) * &h[steps] * pow(&s[steps], m - 1);
    let mut grabber_total = Rational::zero();
    let mut taken = Rational::zero();
    for t in 0..steps {
        let grab = &trace.grabbing[t];
        if grab.is_empty() {
            continue;
        }
        let g: Rational = mass(grab);
        // grabber's own matched mass continues from arrival t + 1
        let k: Rational = grab.iter().map(|(&set, w)| w * vf.value(t + 1, set)).sum();
        let (after, before) = (&s[t + 1], &s[t]);
        for d in 0..m {
            let ahead = d; // copies that already processed arrival t
            let behind = m - 1 - d;
            let p = pow(after, ahead) * &g * pow(before, behind);
            taken += &p;
            grabber_total += pow(after, ahead) * &k * pow(before, behind);
            if ahead > 0 {
                non_grabber_total += int(ahead as i64)
                    * &h[t + 1]
                    * pow(after, ahead - 1)
                    * &g
                    * pow(before, behind);
            }
            if behind > 0 {
                non_grabber_total +=
                    int(behind as i64) * pow(after, ahead) * &g * &h[t] * pow(before, behind - 1);
            }
        }
    }
    Ok(ReducedExpectation {
        copies: m,
        reduced: &non_grabber_total + &grabber_total + &taken,
        lifted: non_grabber_total / int(mf),
        dummy_taken: taken,
    })
}

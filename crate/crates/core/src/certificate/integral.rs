//! Online primal-dual certificate for Half-Half, replayed on levels instead of coins.
//!
//! Offline vertex `i` at level `p` has primal `x_i = 1 - 2^-p`, a lower bound on the
//! probability that it is matched. The dual gives every offline vertex `alpha_i` and every
//! arrival `beta_j`, and the run is certified when `(alpha, beta)` covers every revealed
//! edge to `eta` while the dual never outgrows the primal.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::error::Result;
use crate::instance::{Arrival, Instance};
use crate::numeric::{int, Rational};
use crate::oracle::{half_half_distribution, max_matching, OracleLimits};

use super::alpha::{alpha_candidate, check_dual_step, is_eta};
use super::eta::{EtaLinear, OrderedEta};
use super::levels::{advance_pair, advance_single, Level};
use super::report::{failure, CertificateReport, Num, Summary, TraceEntry};

/// Multiset of `alpha_i + min_j beta_j` over vertices with a revealed edge.
#[derive(Default)]
struct CoverSlack {
    keys: BTreeMap<OrderedEta, usize>,
    per_vertex: Vec<Option<EtaLinear>>,
}

impl CoverSlack {
    fn new(n: usize) -> Self {
        CoverSlack {
            keys: BTreeMap::new(),
            per_vertex: vec![None; n],
        }
    }

    fn set(&mut self, i: u32, key: EtaLinear) {
        if let Some(old) = self.per_vertex[i as usize].take() {
            let k = OrderedEta(old);
            let c = self.keys.get_mut(&k).expect("tracked key present");
            *c -= 1;
            if *c == 0 {
                self.keys.remove(&k);
            }
        }
        *self.keys.entry(OrderedEta(key.clone())).or_insert(0) += 1;
        self.per_vertex[i as usize] = Some(key);
    }

    fn min(&self) -> Option<&EtaLinear> {
        self.keys.keys().next().map(|k| &k.0)
    }
}

fn is_mersenne(p: u32) -> bool {
    (p as u64 + 1).is_power_of_two()
}

/// Certifies one Half-Half run on `inst` with the default exact-engine limits.
pub fn certify_integral_run(inst: &Instance) -> Result<CertificateReport> {
    certify_integral_run_with(inst, OracleLimits::default())
}

/// Certifies one Half-Half run; the exact cross-check runs only when `limits` admit it.
pub fn certify_integral_run_with(
    inst: &Instance,
    limits: OracleLimits,
) -> Result<CertificateReport> {
    let n = inst.offline_count();
    let eta = EtaLinear::eta();
    let mut levels = vec![Level::ZERO; n];
    let mut alpha = vec![EtaLinear::zero(); n];
    // a saturated level hides a tiny unmatched probability; it spreads along later pairs
    let mut inexact = vec![false; n];
    let mut min_beta: Vec<Option<EtaLinear>> = vec![None; n];
    let mut cover = CoverSlack::new(n);
    let mut primal = Rational::zero();
    let mut dual = EtaLinear::zero();
    let mut excess = Rational::zero();
    let mut unexpected_case2 = 0usize;
    let mut trace: Vec<TraceEntry> = Vec::with_capacity(inst.arrival_count());
    // (arrival, first, second, bound on both-unmatched probability) for the exact check
    let mut pair_bounds: Vec<(usize, u32, u32, Rational)> = Vec::new();

    for (t, a) in inst.arrivals().iter().enumerate() {
        let nb: Vec<u32> = a.neighbors().collect();
        let before: Vec<String> = nb.iter().map(|&i| levels[i as usize].to_string()).collect();
        let olds: Vec<EtaLinear> = nb.iter().map(|&i| alpha[i as usize].clone()).collect();
        let (adv, alpha_new, beta, case) = match *a {
            Arrival::One(i) => {
                let adv = advance_single(levels[i as usize]);
                let dp = EtaLinear::rational(adv.delta_p.clone());
                let beta = &dp - &(&eta - &olds[0]);
                check_dual_step(&dp, &[&olds[0]], &eta, &beta)
                    .map_err(|e| failure(format!("arrival {t}: {e}"), &trace))?;
                inexact[i as usize] = false;
                (adv, eta.clone(), beta, "degree1")
            }
            Arrival::Two(i1, i2) => {
                let (l1, l2) = (levels[i1 as usize], levels[i2 as usize]);
                let adv = advance_pair(l1, l2);
                let dp = EtaLinear::rational(adv.delta_p.clone());
                let flagged = inexact[i1 as usize] || inexact[i2 as usize];
                if !flagged {
                    let bound = l1.residual() * l2.residual();
                    pair_bounds.push((t, i1, i2, bound));
                }
                let saturated = adv.excess.is_positive();
                let flag = flagged || saturated;
                inexact[i1 as usize] = flag;
                inexact[i2 as usize] = flag;
                if saturated {
                    let spent = &(&eta - &olds[0]) + &(&eta - &olds[1]);
                    let beta = &dp - &spent;
                    check_dual_step(&dp, &[&olds[0], &olds[1]], &eta, &beta)
                        .map_err(|e| failure(format!("arrival {t}: {e}"), &trace))?;
                    (adv, eta.clone(), beta, "saturated")
                } else {
                    let (an, beta) = alpha_candidate(&dp, &olds[0], &olds[1])
                        .map_err(|e| failure(format!("arrival {t}: {e}"), &trace))?;
                    if let (Level::Finite(p1), Level::Finite(p2)) = (l1, l2) {
                        if !is_eta(&olds[0])
                            && !is_eta(&olds[1])
                            && !(is_mersenne(p1) && is_mersenne(p2))
                        {
                            unexpected_case2 += 1;
                        }
                    }
                    let case = if is_eta(&an) { "capped" } else { "uncapped" };
                    (adv, an, beta, case)
                }
            }
        };

        let mut delta_alpha = EtaLinear::zero();
        for (&i, old) in nb.iter().zip(&olds) {
            delta_alpha += &(&alpha_new - old);
            levels[i as usize] = adv.level;
            alpha[i as usize] = alpha_new.clone();
            let mb = match min_beta[i as usize].take() {
                Some(m) => m.min(beta.clone())?,
                None => beta.clone(),
            };
            cover.set(i, &alpha_new + &mb);
            min_beta[i as usize] = Some(mb);
        }
        primal += &adv.delta_p;
        excess += &adv.excess;
        dual += &(&delta_alpha + &beta);

        let slack = cover.min().expect("an edge was revealed") - &eta;
        trace.push(TraceEntry {
            arrival: t,
            neighbors: nb.clone(),
            case: case.to_string(),
            before,
            after: nb.iter().map(|&i| levels[i as usize].to_string()).collect(),
            delta_p: Num::from(&adv.delta_p),
            delta_alpha: Num::from(&delta_alpha),
            beta: Num::from(&beta),
            slack_min: Num::from(&slack),
        });
        if slack.sign()? == Ordering::Less {
            return Err(failure(
                format!("arrival {t}: an edge is covered below eta"),
                &trace,
            ));
        }
    }

    let primal_eta = EtaLinear::rational(primal.clone());
    if dual.compare(&primal_eta)? == Ordering::Greater {
        return Err(failure(format!("dual {dual} exceeds primal"), &trace));
    }
    let (opt, _) = max_matching(inst);
    let opt_r = int(opt as i64);
    if primal > &opt_r + &excess {
        return Err(failure("primal exceeds the offline optimum", &trace));
    }
    let guarantee = eta.scale(&opt_r);
    if dual.compare(&guarantee)? == Ordering::Less {
        return Err(failure(
            format!("dual {dual} below eta * OPT = {guarantee}"),
            &trace,
        ));
    }

    let (expected_size, expectation_check) = if !limits.admits(inst) {
        (
            None,
            format!("skipped: {n} offline vertices exceed the exact-engine limit"),
        )
    } else {
        let mut violations: Vec<String> = Vec::new();
        let mut next = 0usize;
        let run = half_half_distribution(inst, limits, |t, dist| {
            while next < pair_bounds.len() && pair_bounds[next].0 == t {
                let (_, i1, i2, ref bound) = pair_bounds[next];
                let p = dist.both_unmatched(i1, i2);
                if &p > bound {
                    violations.push(format!(
                        "arrival {t}: P[{i1}, {i2} both free] = {p} above {bound}"
                    ));
                }
                next += 1;
            }
        });
        match run {
            Err(e) => (None, format!("skipped: {e}")),
            Ok(dist) => {
                let e = dist.expected_size();
                if e < &primal - &excess {
                    violations.push(format!("E[size] = {e} below the primal"));
                }
                for i in 0..n {
                    if !inexact[i] && dist.unmatched(i as u32) > levels[i].residual() {
                        violations.push(format!(
                            "vertex {i} unmatched more often than its level allows"
                        ));
                    }
                }
                if !violations.is_empty() {
                    return Err(failure(violations.join("; "), &trace));
                }
                (Some(Num::from(&e)), "passed".to_string())
            }
        }
    };

    let slack_min = trace
        .last()
        .map(|_| Num::from(&(cover.min().unwrap() - &eta)));
    Ok(CertificateReport {
        kind: "integral",
        offline: n,
        arrivals: inst.arrival_count(),
        trace,
        summary: Summary {
            primal: Num::from(&primal),
            dual: Num::from(&dual),
            opt,
            gamma: Num::from(&eta),
            slack_min,
            primal_over_opt: (opt > 0).then(|| crate::numeric::to_f64(&(&primal / &opt_r))),
            expected_size,
            expectation_check,
            saturation_excess: Num::from(&excess),
            unexpected_case2,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::parse_instance;

    #[test]
    fn two_vertex_example() {
        let inst = parse_instance(br#"{"offline":2,"arrivals":[[0,1],[0]]}"#).unwrap();
        let r = certify_integral_run(&inst).unwrap();
        assert_eq!(r.summary.opt, 2);
        // x = 1/2 each after the pair, then vertex 0 jumps to 1
        assert_eq!(r.summary.primal.exact, "3/2");
        assert_eq!(r.summary.expected_size.as_ref().unwrap().exact, "3/2");
        assert_eq!(r.trace[0].case, "uncapped");
        assert_eq!(r.trace[1].case, "degree1");
        assert_eq!(r.summary.expectation_check, "passed");
    }

    #[test]
    fn phase_graph_k2() {
        let inst = parse_instance(br#"{"offline":4,"arrivals":[[0,2],[1,3],[2,3]]}"#).unwrap();
        let r = certify_integral_run(&inst).unwrap();
        assert_eq!(r.summary.primal.exact, "11/4");
        assert_eq!(r.trace[2].after, vec!["3", "3"]);
        assert_eq!(r.summary.unexpected_case2, 0);
    }

    #[test]
    fn repeated_pair_saturates() {
        let lists: Vec<Vec<u64>> = (0..20).map(|_| vec![0, 1]).collect();
        let inst = Instance::from_lists(2, &lists).unwrap();
        let r = certify_integral_run(&inst).unwrap();
        assert!(r.trace.iter().any(|e| e.case == "saturated"));
        assert_eq!(r.summary.expected_size.as_ref().unwrap().exact, "2");
        assert!(r.summary.saturation_excess.approx >= 0.0);
    }

    #[test]
    fn empty_instance() {
        let inst = parse_instance(br#"{"offline":3,"arrivals":[]}"#).unwrap();
        let r = certify_integral_run(&inst).unwrap();
        assert_eq!(r.summary.primal.exact, "0");
        assert!(r.summary.slack_min.is_none());
        assert_eq!(r.summary.primal_over_opt, None);
    }
}

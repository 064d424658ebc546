//! Exact 3/4 certificate for Water-Level.
//!
//! Load poured into a vertex below one half is split evenly between the vertex and the
//! arrival; load above one half goes entirely to the vertex. Hence `alpha_i = f(x_i)`
//! with `f(x) = x/2` on `[0, 1/2]` and `x - 1/4` above, and the dual equals the primal.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::algorithms::WaterLevel;
use crate::error::Result;
use crate::instance::Instance;
use crate::numeric::{int, ratio, to_f64, to_fraction_string, Rational};
use crate::oracle::max_matching;

use super::report::{failure, CertificateReport, Num, Summary, TraceEntry};

/// `f(x)`, the offline dual as a function of the load.
pub fn dual_of_load(x: &Rational) -> Rational {
    let half = ratio(1, 2);
    if x <= &half {
        x / int(2)
    } else {
        x - ratio(1, 4)
    }
}

/// Certifies the Water-Level run on `inst` against `gamma = 3/4`.
pub fn certify_fractional_run(inst: &Instance) -> Result<CertificateReport> {
    let n = inst.offline_count();
    let half = ratio(1, 2);
    let gamma = ratio(3, 4);
    let mut wl = WaterLevel::new(n);
    let mut alpha = vec![Rational::zero(); n];
    let mut min_beta: Vec<Option<Rational>> = vec![None; n];
    let mut keys: BTreeMap<Rational, usize> = BTreeMap::new();
    let mut key_of: Vec<Option<Rational>> = vec![None; n];
    let mut dual = Rational::zero();
    let mut trace: Vec<TraceEntry> = Vec::with_capacity(inst.arrival_count());

    for (t, a) in inst.arrivals().iter().enumerate() {
        let nb: Vec<u32> = a.neighbors().collect();
        let before_loads: Vec<Rational> =
            nb.iter().map(|&i| wl.loads()[i as usize].clone()).collect();
        let case = match before_loads.as_slice() {
            [_] => "degree1",
            [x, y] => match (x.is_zero(), y.is_zero()) {
                (true, true) => "case1",
                (true, false) | (false, true) => "case2",
                (false, false) => "case3",
            },
            _ => unreachable!("arrivals have one or two neighbors"),
        };
        let step = wl.arrive(a);
        let mut beta = Rational::zero();
        let mut delta_alpha = Rational::zero();
        let mut delta_p = Rational::zero();
        for (i, before, delta) in &step.changes {
            let after = before + delta;
            let below = if before < &half {
                after.clone().min(half.clone()) - before
            } else {
                Rational::zero()
            };
            let above = delta - &below;
            let gain = &below / int(2) + &above;
            beta += &below / int(2);
            delta_alpha += &gain;
            delta_p += delta;
            alpha[*i as usize] += &gain;
        }
        for &i in &nb {
            let x = &wl.loads()[i as usize];
            if alpha[i as usize] != dual_of_load(x) {
                return Err(failure(
                    format!("arrival {t}: alpha of {i} departs from f(x)"),
                    &trace,
                ));
            }
            if !x.is_zero() && x < &half {
                return Err(failure(
                    format!("arrival {t}: load of {i} is {x}, inside (0, 1/2)"),
                    &trace,
                ));
            }
            let edge = &alpha[i as usize] + &beta;
            if edge < gamma || edge > Rational::one() {
                return Err(failure(
                    format!("arrival {t}: new edge at {i} covered to {edge}"),
                    &trace,
                ));
            }
            let mb = match min_beta[i as usize].take() {
                Some(m) => m.min(beta.clone()),
                None => beta.clone(),
            };
            let key = &alpha[i as usize] + &mb;
            if let Some(old) = key_of[i as usize].take() {
                let c = keys.get_mut(&old).expect("tracked key present");
                *c -= 1;
                if *c == 0 {
                    keys.remove(&old);
                }
            }
            *keys.entry(key.clone()).or_insert(0) += 1;
            key_of[i as usize] = Some(key);
            min_beta[i as usize] = Some(mb);
        }
        dual += &delta_alpha + &beta;
        let slack = keys.keys().next().expect("an edge was revealed") - &gamma;
        trace.push(TraceEntry {
            arrival: t,
            neighbors: nb.clone(),
            case: case.to_string(),
            before: before_loads.iter().map(to_fraction_string).collect(),
            after: nb
                .iter()
                .map(|&i| to_fraction_string(&wl.loads()[i as usize]))
                .collect(),
            delta_p: Num::from(&delta_p),
            delta_alpha: Num::from(&delta_alpha),
            beta: Num::from(&beta),
            slack_min: Num::from(&slack),
        });
        if slack < Rational::zero() {
            return Err(failure(
                format!("arrival {t}: an edge is covered below 3/4"),
                &trace,
            ));
        }
    }

    let assignment = wl.into_assignment();
    let primal = assignment.value();
    if dual != primal {
        return Err(failure(
            format!("dual {dual} differs from primal {primal}"),
            &trace,
        ));
    }
    let (opt, _) = max_matching(inst);
    let opt_r = int(opt as i64);
    if primal > opt_r || primal < &gamma * &opt_r {
        return Err(failure(
            format!("primal {primal} outside [3/4 OPT, OPT], OPT = {opt}"),
            &trace,
        ));
    }
    let slack_min = keys.keys().next().map(|k| Num::from(&(k - &gamma)));
    Ok(CertificateReport {
        kind: "fractional",
        offline: n,
        arrivals: inst.arrival_count(),
        trace,
        summary: Summary {
            primal: Num::from(&primal),
            dual: Num::from(&dual),
            opt,
            gamma: Num::from(&gamma),
            slack_min,
            primal_over_opt: (opt > 0).then(|| to_f64(&(&primal / &opt_r))),
            expected_size: Some(Num::from(&primal)),
            expectation_check: "deterministic".to_string(),
            saturation_excess: Num::from(&Rational::zero()),
            unexpected_case2: 0,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::parse_instance;

    #[test]
    fn dual_function() {
        assert_eq!(dual_of_load(&ratio(1, 2)), ratio(1, 4));
        assert_eq!(dual_of_load(&ratio(1, 1)), ratio(3, 4));
        assert_eq!(dual_of_load(&ratio(3, 4)), ratio(1, 2));
    }

    #[test]
    fn two_vertex_example() {
        let inst = parse_instance(br#"{"offline":2,"arrivals":[[0,1],[0]]}"#).unwrap();
        let r = certify_fractional_run(&inst).unwrap();
        assert_eq!(r.summary.primal.exact, "3/2");
        assert_eq!(r.trace[0].case, "case1");
        assert_eq!(r.trace[0].beta.exact, "1/2");
        assert_eq!(r.trace[1].case, "degree1");
    }

    #[test]
    fn tight_three_quarters() {
        // fresh pairs are covered exactly to 3/4
        let inst = parse_instance(br#"{"offline":4,"arrivals":[[0,2],[1,3],[2,3]]}"#).unwrap();
        let r = certify_fractional_run(&inst).unwrap();
        assert_eq!(r.trace[2].case, "case3");
        assert_eq!(r.summary.slack_min.unwrap().exact, "0");
    }
}

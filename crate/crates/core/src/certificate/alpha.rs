//! Dual values: the per-level table `alpha_(k)` and the dual update rule.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::numeric::{int, ratio, Dyadic};

use super::eta::EtaLinear;

/// Largest level supported by [`alpha_at`]; beyond it closed forms become unwieldy.
pub const MAX_TABLE_LEVEL: u64 = (1 << 20) - 1;

/// `alpha_(2^m - 1)` for `m >= 1`, in closed form:
/// `sum_{i=1}^{m-1} 2^(m-1-i) (2^-(2^i-2) - 2^-(2(2^i-2)+2)) + 2^(m-1) - (2^m - 1) eta`.
pub fn alpha_closed_form(m: u32) -> EtaLinear {
    assert!(
        (1..=20).contains(&m),
        "closed form supported for 1 <= m <= 20"
    );
    let mut a = Dyadic::pow2(m as i64 - 1);
    for i in 1..m {
        let e = (1i64 << i) - 2;
        let shift = (m - 1 - i) as i64;
        a += &(&Dyadic::pow2(shift - e) - &Dyadic::pow2(shift - 2 * e - 2));
    }
    EtaLinear::from_dyadic(a, Dyadic::from_int(1 - (1i64 << m)))
}

/// `alpha_(k)` for a single level, `alpha_(0) = 0`.
pub fn alpha_at(k: u64) -> EtaLinear {
    match k {
        0 => EtaLinear::zero(),
        1 => EtaLinear::from_parts(int(1), -1),
        2 => EtaLinear::from_parts(int(2), -2),
        3 => EtaLinear::from_parts(ratio(11, 4), -3),
        _ => {
            assert!(k <= MAX_TABLE_LEVEL, "level {k} above the supported table");
            if (k + 1).is_power_of_two() {
                alpha_closed_form((k + 1).trailing_zeros())
            } else {
                EtaLinear::eta()
            }
        }
    }
}

/// `[alpha_(1), ..., alpha_(max_k)]`.
pub fn alpha_table(max_k: u64) -> Vec<EtaLinear> {
    (1..=max_k).map(alpha_at).collect()
}

/// Dual update for a degree-2 arrival whose neighbors carried `alpha1`, `alpha2`.
///
/// The new common value is `min(eta, delta_p + alpha1 + alpha2 - eta)` and the online
/// dual is `eta - alpha_new`, which keeps the new edges exactly tight and the dual
/// increase at most `delta_p`.
pub fn alpha_candidate(
    delta_p: &EtaLinear,
    alpha1: &EtaLinear,
    alpha2: &EtaLinear,
) -> Result<(EtaLinear, EtaLinear)> {
    let eta = EtaLinear::eta();
    let cand = &(&(delta_p + alpha1) + alpha2) - &eta;
    let alpha_new = cand.min(eta.clone())?;
    let beta = &eta - &alpha_new;
    check_dual_step(delta_p, &[alpha1, alpha2], &alpha_new, &beta)?;
    Ok((alpha_new, beta))
}

/// Feasibility of one dual step: `0 <= beta <= 1`, no alpha decreases, the new edges
/// satisfy `alpha + beta >= eta`, and the dual increase does not exceed `delta_p`.
pub(crate) fn check_dual_step(
    delta_p: &EtaLinear,
    old: &[&EtaLinear],
    alpha_new: &EtaLinear,
    beta: &EtaLinear,
) -> Result<()> {
    let fail = |what: &str| {
        Err(Error::Certificate(format!(
            "{what}: delta_p = {delta_p}, old = [{}], alpha_new = {alpha_new}, beta = {beta}",
            old.iter()
                .map(|a| a.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        )))
    };
    if beta.sign()? == Ordering::Less || beta.compare(&EtaLinear::one())? == Ordering::Greater {
        return fail("beta outside [0, 1]");
    }
    let eta = EtaLinear::eta();
    let mut delta_d = beta.clone();
    for a in old {
        if alpha_new.compare(a)? == Ordering::Less {
            return fail("alpha decreased");
        }
        delta_d += &(alpha_new - a);
    }
    if (alpha_new + beta).compare(&eta)? == Ordering::Less {
        return fail("new edge below eta");
    }
    if delta_d.compare(delta_p)? == Ordering::Greater {
        return fail("dual increase exceeds primal increase");
    }
    Ok(())
}

/// The min-over-splits recurrence for `alpha_(T)`, `T = 0..=t_max`:
/// `alpha_(T) = min(eta, min_{k <= (T-1)/2} dP(k, T-1-k) + alpha_(k) + alpha_(T-1-k) - eta)`.
///
/// Returns the values and, per level, the smallest minimizing `k` (or `None` when the
/// cap `eta` binds strictly).
pub fn case3_recurrence(t_max: u64) -> Result<Vec<(EtaLinear, Option<u64>)>> {
    let eta = EtaLinear::eta();
    let mut out: Vec<(EtaLinear, Option<u64>)> = vec![(EtaLinear::zero(), None)];
    for t in 1..=t_max {
        let mut best: Option<(EtaLinear, u64)> = None;
        for k in 0..=(t - 1) / 2 {
            let j = t - 1 - k;
            let dp = delta_p_dyadic(k, j);
            let v = &(&EtaLinear::constant(dp) + &(&out[k as usize].0 + &out[j as usize].0)) - &eta;
            best = match best {
                Some((b, bk)) if b.le(&v)? => Some((b, bk)),
                _ => Some((v, k)),
            };
        }
        let (v, k) = best.expect("at least one split");
        match v.compare(&eta)? {
            Ordering::Less => out.push((v, Some(k))),
            Ordering::Equal => out.push((v, Some(k))),
            Ordering::Greater => out.push((eta.clone(), None)),
        }
    }
    Ok(out)
}

/// `2^-k + 2^-j - 2^-(k+j)`.
pub(crate) fn delta_p_dyadic(k: u64, j: u64) -> Dyadic {
    let (k, j) = (k as i64, j as i64);
    &(&Dyadic::pow2(-k) + &Dyadic::pow2(-j)) - &Dyadic::pow2(-(k + j))
}

/// `alpha_(k) >= eta - 2^-k`, the bound that keeps degree-1 arrivals feasible.
pub fn degree_one_bound_holds(k: u64) -> Result<bool> {
    let lhs = alpha_at(k);
    let rhs = &EtaLinear::eta() - &EtaLinear::constant(Dyadic::pow2(-(k as i64)));
    lhs.ge(&rhs)
}

pub(crate) fn is_eta(x: &EtaLinear) -> bool {
    x.a.is_zero() && x.b.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_entries() {
        let t = alpha_table(4);
        assert_eq!(t[0], EtaLinear::from_parts(int(1), -1));
        assert_eq!(t[1], EtaLinear::from_parts(int(2), -2));
        assert_eq!(t[2], EtaLinear::from_parts(ratio(11, 4), -3));
        assert_eq!(t[3], EtaLinear::eta());
    }

    #[test]
    fn closed_form_small_m() {
        assert_eq!(alpha_closed_form(1), alpha_at(1));
        assert_eq!(alpha_closed_form(2), alpha_at(3));
        assert_eq!(
            alpha_closed_form(3),
            EtaLinear::from_parts(ratio(367, 64), -7)
        );
    }

    #[test]
    fn candidate_second_arrival() {
        let (a, b) = alpha_candidate(
            &EtaLinear::one(),
            &EtaLinear::from_parts(int(1), -1),
            &EtaLinear::zero(),
        )
        .unwrap();
        assert_eq!(a, EtaLinear::from_parts(int(2), -2));
        assert_eq!(b, EtaLinear::from_parts(int(-2), 3));
    }

    #[test]
    fn candidate_caps_at_eta() {
        let (a, b) = alpha_candidate(
            &EtaLinear::one(),
            &EtaLinear::zero(),
            &EtaLinear::from_parts(ratio(11, 4), -3),
        )
        .unwrap();
        assert_eq!(a, EtaLinear::eta());
        assert!(b.is_zero());
    }

    #[test]
    fn recurrence_matches_table() {
        let rec = case3_recurrence(40).unwrap();
        for (t, (v, _)) in rec.iter().enumerate() {
            assert_eq!(v, &alpha_at(t as u64), "T = {t}");
        }
        assert_eq!(rec[7].1, Some(3));
        assert_eq!(rec[15].1, Some(7));
    }

    #[test]
    fn degree_one_bound() {
        for k in 0..=20 {
            assert!(degree_one_bound_holds(k).unwrap(), "k = {k}");
        }
    }
}

//! Hand-computed dual updates for the first seven levels, re-derived mechanically.

use serde::Serialize;

use crate::error::Result;
use crate::numeric::{int, pow2_neg, ratio, Rational};

use super::alpha::{alpha_at, alpha_candidate};
use super::eta::EtaLinear;
use super::levels::primal_update;

/// One table row: the pair of levels a degree-2 arrival meets and the values written
/// down for it.
#[derive(Debug, Clone)]
struct Row {
    k: u32,
    levels: (u32, u32),
    delta_p: Rational,
    old: (EtaLinear, EtaLinear),
    alpha_new: EtaLinear,
    beta: EtaLinear,
}

fn el(a: Rational, b: i64) -> EtaLinear {
    EtaLinear::from_parts(a, b)
}

fn capped(k: u32, levels: (u32, u32), delta_p: Rational, old: (EtaLinear, EtaLinear)) -> Row {
    Row {
        k,
        levels,
        delta_p,
        old,
        alpha_new: EtaLinear::eta(),
        beta: EtaLinear::zero(),
    }
}

fn d(p: &[u32]) -> Rational {
    // 2^-a + 2^-b - 2^-c written as the table states it
    pow2_neg(p[0] as u64) + pow2_neg(p[1] as u64) - pow2_neg(p[2] as u64)
}

fn rows() -> Vec<Row> {
    let a0 = EtaLinear::zero();
    let a1 = el(int(1), -1);
    let a2 = el(int(2), -2);
    let a3 = el(ratio(11, 4), -3);
    let eta = EtaLinear::eta();
    vec![
        Row {
            k: 1,
            levels: (0, 0),
            delta_p: int(1),
            old: (a0.clone(), a0.clone()),
            alpha_new: a1.clone(),
            beta: el(int(-1), 2),
        },
        Row {
            k: 2,
            levels: (1, 0),
            delta_p: int(1),
            old: (a1.clone(), a0.clone()),
            alpha_new: a2.clone(),
            beta: el(int(-2), 3),
        },
        Row {
            k: 3,
            levels: (1, 1),
            delta_p: ratio(3, 4),
            old: (a1.clone(), a1.clone()),
            alpha_new: a3.clone(),
            beta: el(ratio(-11, 4), 4),
        },
        capped(3, (2, 0), int(1), (a2.clone(), a0.clone())),
        capped(4, (0, 3), int(1), (a0.clone(), a3.clone())),
        capped(4, (1, 2), d(&[1, 2, 3]), (a1.clone(), a2.clone())),
        capped(5, (0, 4), int(1), (a0.clone(), eta.clone())),
        capped(5, (1, 3), d(&[1, 3, 4]), (a1.clone(), a3.clone())),
        capped(5, (2, 2), d(&[2, 2, 4]), (a2.clone(), a2.clone())),
        capped(6, (0, 5), int(1), (a0.clone(), eta.clone())),
        capped(6, (1, 4), d(&[1, 4, 5]), (a1.clone(), eta.clone())),
        capped(6, (2, 3), d(&[2, 3, 5]), (a2.clone(), a3.clone())),
        capped(7, (0, 6), int(1), (a0.clone(), eta.clone())),
        capped(7, (1, 5), d(&[1, 5, 6]), (a1.clone(), eta.clone())),
        capped(7, (2, 4), d(&[2, 4, 6]), (a2.clone(), eta.clone())),
        Row {
            k: 7,
            levels: (3, 3),
            delta_p: d(&[3, 3, 6]),
            old: (a3.clone(), a3),
            alpha_new: el(ratio(367, 64), -7),
            beta: el(ratio(-367, 64), 8),
        },
    ]
}

/// Outcome of re-deriving one table row.
#[derive(Debug, Clone, Serialize)]
pub struct RowCheck {
    pub k: u32,
    pub levels: (u32, u32),
    pub delta_p: EtaLinear,
    pub alpha_new: EtaLinear,
    pub beta: EtaLinear,
    pub delta_p_ok: bool,
    pub old_alpha_ok: bool,
    pub alpha_ok: bool,
    pub beta_ok: bool,
}

impl RowCheck {
    pub fn passed(&self) -> bool {
        self.delta_p_ok && self.old_alpha_ok && self.alpha_ok && self.beta_ok
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HandTableReport {
    pub rows: Vec<RowCheck>,
    pub all_passed: bool,
}

/// Recomputes every hand-table row from [`primal_update`], [`alpha_at`] and
/// [`alpha_candidate`] and compares against the written values.
pub fn verify_hand_tables() -> Result<HandTableReport> {
    let mut checks = Vec::new();
    for row in rows() {
        let (p1, p2) = row.levels;
        let (level, dp) = primal_update(p1, p2)?;
        debug_assert_eq!(level, row.k);
        let o1 = alpha_at(p1 as u64);
        let o2 = alpha_at(p2 as u64);
        let (alpha_new, beta) = alpha_candidate(&dp, &o1, &o2)?;
        checks.push(RowCheck {
            k: row.k,
            levels: row.levels,
            delta_p_ok: dp == EtaLinear::rational(row.delta_p.clone()),
            old_alpha_ok: o1 == row.old.0 && o2 == row.old.1,
            alpha_ok: alpha_new == row.alpha_new,
            beta_ok: beta == row.beta,
            delta_p: dp,
            alpha_new,
            beta,
        });
    }
    let all_passed = checks.iter().all(RowCheck::passed);
    Ok(HandTableReport {
        rows: checks,
        all_passed,
    })
}

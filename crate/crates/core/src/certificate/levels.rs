//! Primal levels: an offline vertex at level `p` carries `x = 1 - 2^-p`.

use std::fmt;

use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::{pow2_neg, Rational};

use super::eta::EtaLinear;

/// Largest finite level the primal update will produce.
pub const LEVEL_CAP: u32 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    Finite(u32),
    /// `x = 1`: the vertex is matched with certainty.
    Infinite,
}

impl Level {
    pub const ZERO: Level = Level::Finite(0);

    /// `2^-p`, zero at infinity.
    pub fn residual(&self) -> Rational {
        match *self {
            Level::Finite(p) => pow2_neg(p as u64),
            Level::Infinite => Rational::zero(),
        }
    }

    /// `x = 1 - 2^-p`.
    pub fn x(&self) -> Rational {
        Rational::from_integer(1.into()) - self.residual()
    }

    pub fn finite(&self) -> Option<u32> {
        match *self {
            Level::Finite(p) => Some(p),
            Level::Infinite => None,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Finite(p) => write!(f, "{p}"),
            Level::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Level {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Level::Finite(p) => s.serialize_u32(*p),
            Level::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Joint level after a degree-2 arrival at two free-capable vertices, and the primal gain
/// `2^-p1 + 2^-p2 - 2^-(p1+p2)`.
pub fn primal_update(p1: u32, p2: u32) -> Result<(u32, EtaLinear)> {
    let new = p1 as u64 + p2 as u64 + 1;
    if new > LEVEL_CAP as u64 {
        return Err(Error::LevelOverflow {
            p1,
            p2,
            cap: LEVEL_CAP,
        });
    }
    let dp = pow2_neg(p1 as u64) + pow2_neg(p2 as u64) - pow2_neg(p1 as u64 + p2 as u64);
    Ok((new as u32, EtaLinear::rational(dp)))
}

/// Result of advancing two levels on a degree-2 arrival, saturating at infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct Advance {
    pub level: Level,
    pub delta_p: Rational,
    /// Primal credited beyond the exact product bound because of saturation.
    pub excess: Rational,
}

/// General degree-2 step: like [`primal_update`] but an infinite level contributes
/// nothing, and a level past [`LEVEL_CAP`] is rounded up to infinity.
pub fn advance_pair(l1: Level, l2: Level) -> Advance {
    match (l1, l2) {
        (Level::Finite(p1), Level::Finite(p2)) => match primal_update(p1, p2) {
            Ok((p, dp)) => Advance {
                level: Level::Finite(p),
                delta_p: dp.a_rational(),
                excess: Rational::zero(),
            },
            Err(_) => Advance {
                level: Level::Infinite,
                delta_p: pow2_neg(p1 as u64) + pow2_neg(p2 as u64),
                excess: pow2_neg(p1 as u64 + p2 as u64),
            },
        },
        (a, b) => Advance {
            level: Level::Infinite,
            delta_p: a.residual() + b.residual(),
            excess: Rational::zero(),
        },
    }
}

/// Degree-1 step: the vertex becomes surely matched.
pub fn advance_single(l: Level) -> Advance {
    Advance {
        level: Level::Infinite,
        delta_p: l.residual(),
        excess: Rational::zero(),
    }
}

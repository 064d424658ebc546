//! Online algorithms. Each consumes arrivals in order and never revisits a decision.

mod greedy;
mod half_half;
mod water_level;

use std::fmt;
use std::str::FromStr;

pub use greedy::greedy;
pub use half_half::{half_half, HalfHalf};
pub use water_level::{water_level, FractionalAssignment, WaterLevel, WaterStep};

use crate::error::Error;

/// Algorithms selectable by name in the Monte Carlo harness and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlgorithmId {
    HalfHalf,
    WaterLevel,
    Greedy,
}

impl AlgorithmId {
    pub const ALL: [AlgorithmId; 3] = [
        AlgorithmId::HalfHalf,
        AlgorithmId::WaterLevel,
        AlgorithmId::Greedy,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            AlgorithmId::HalfHalf => "half-half",
            AlgorithmId::WaterLevel => "water-level",
            AlgorithmId::Greedy => "greedy",
        }
    }

    pub fn is_randomized(&self) -> bool {
        matches!(self, AlgorithmId::HalfHalf)
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AlgorithmId::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::UnknownAlgorithm(s.to_string()))
    }
}

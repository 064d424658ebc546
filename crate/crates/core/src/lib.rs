//! Online bipartite matching when every online vertex has at most two neighbors.
//!
//! * [`instance`]: instances, permutations, the exact-degree-2 reduction.
//! * [`algorithms`]: Half-Half (randomized integral), Water-Level (fractional), greedy.
//! * [`oracle`]: maximum matching and exact Half-Half expectations.
//! * [`certificate`]: the constant eta, dual-fitting tables and online certificates.
//! * [`lowerbound`]: the phased adversarial family and Monte Carlo ratio estimates.

pub mod algorithms;
pub mod certificate;
pub mod error;
pub mod instance;
pub mod lowerbound;
pub mod numeric;
pub mod oracle;
pub mod rng;

pub use error::{Error, Result};
pub use instance::{Arrival, Instance, IntegralMatching, OfflinePermutation};
pub use numeric::Rational;
pub use rng::RandomSource;

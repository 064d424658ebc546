use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Arrival, Instance};
use crate::error::{Error, Result};

/// Random instance: each arrival independently has two neighbors with probability
/// `degree2_probability`, drawn uniformly without replacement; otherwise one uniform
/// neighbor. A pure function of its arguments.
pub fn gen_random(
    offline_count: usize,
    arrival_count: usize,
    degree2_probability: f64,
    seed: u64,
) -> Result<Instance> {
    if !(0.0..=1.0).contains(&degree2_probability) {
        return Err(Error::InvalidParameter(format!(
            "degree-2 probability {degree2_probability} outside [0, 1]"
        )));
    }
    if offline_count == 0 {
        return Err(Error::NoOfflineVertices);
    }
    if offline_count < 2 && degree2_probability > 0.0 {
        return Err(Error::InvalidParameter(
            "degree-2 arrivals need at least two offline vertices".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let arrivals = (0..arrival_count)
        .map(|_| {
            if rng.gen_bool(degree2_probability) {
                let picked = sample(&mut rng, offline_count, 2);
                Arrival::pair(picked.index(0) as u32, picked.index(1) as u32)
            } else {
                Arrival::One(rng.gen_range(0..offline_count) as u32)
            }
        })
        .collect();
    Instance::new(offline_count, arrivals)
}

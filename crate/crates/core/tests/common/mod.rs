#![allow(dead_code)]

use deg2_core::instance::gen_random;
use deg2_core::Instance;
use proptest::prelude::*;

/// Random instances with `2..=max_offline` offline vertices and up to `max_arrivals`
/// arrivals.
pub fn instances(max_offline: usize, max_arrivals: usize) -> impl Strategy<Value = Instance> {
    (
        2..=max_offline,
        0..=max_arrivals,
        0.0..=1.0f64,
        any::<u64>(),
    )
        .prop_map(|(n, t, p, seed)| gen_random(n, t, p, seed).expect("valid parameters"))
}

/// Fixed coin sequence for Half-Half; `true` picks the lower index.
pub struct Coins(pub std::vec::IntoIter<bool>);

impl rand::RngCore for Coins {
    fn next_u32(&mut self) -> u32 {
        // gen::<bool>() reads the top bit of a u32 draw
        if self.0.next().expect("ran out of coins") {
            u32::MAX
        } else {
            0
        }
    }
    fn next_u64(&mut self) -> u64 {
        self.next_u32() as u64
    }
    fn fill_bytes(&mut self, _: &mut [u8]) {
        unimplemented!()
    }
    fn try_fill_bytes(&mut self, _: &mut [u8]) -> Result<(), rand::Error> {
        unimplemented!()
    }
}

/// All `2^n` coin sequences of length `n`.
pub fn coin_sequences(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0..1u64 << n).map(move |bits| (0..n).map(|k| bits >> k & 1 == 1).collect())
}

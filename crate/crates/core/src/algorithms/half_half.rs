use rand::Rng;

use crate::instance::{Arrival, Instance, IntegralMatching};

/// Streaming Half-Half. On a two-neighbor arrival with both neighbors free it draws
/// one fair coin (`true` picks the lower index); otherwise it matches the unique free
/// neighbor, if any. No other randomness is consumed.
#[derive(Debug, Clone)]
pub struct HalfHalf {
    matching: IntegralMatching,
    next: usize,
    coins: usize,
}

impl HalfHalf {
    pub fn new(offline: usize) -> Self {
        HalfHalf {
            matching: IntegralMatching::empty(offline),
            next: 0,
            coins: 0,
        }
    }

    /// Processes the next arrival; returns the offline vertex it was matched to.
    pub fn arrive<R: Rng + ?Sized>(&mut self, arrival: &Arrival, rng: &mut R) -> Option<u32> {
        let j = self.next;
        self.next += 1;
        let pick = match *arrival {
            Arrival::One(i) => (!self.matching.is_matched(i)).then_some(i),
            Arrival::Two(a, b) => {
                match (self.matching.is_matched(a), self.matching.is_matched(b)) {
                    (true, true) => None,
                    (false, true) => Some(a),
                    (true, false) => Some(b),
                    (false, false) => {
                        self.coins += 1;
                        Some(if rng.gen::<bool>() { a } else { b })
                    }
                }
            }
        };
        if let Some(i) = pick {
            self.matching.assign(i, j);
        }
        pick
    }

    pub fn coins_used(&self) -> usize {
        self.coins
    }

    pub fn into_matching(self) -> IntegralMatching {
        self.matching
    }
}

pub fn half_half<R: Rng + ?Sized>(inst: &Instance, rng: &mut R) -> IntegralMatching {
    let mut alg = HalfHalf::new(inst.offline_count());
    for a in inst.arrivals() {
        alg.arrive(a, rng);
    }
    alg.into_matching()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::parse_instance;
    use rand::rngs::mock::StepRng;

    /// Coin sequence fixed up front; `true` picks the lower index.
    struct Coins(std::vec::IntoIter<bool>);

    impl rand::RngCore for Coins {
        fn next_u32(&mut self) -> u32 {
            // gen::<bool>() tests the top bit of a u32 draw
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

    fn run_with(inst: &Instance, coins: &[bool]) -> IntegralMatching {
        let mut rng = Coins(coins.to_vec().into_iter());
        half_half(inst, &mut rng)
    }

    #[test]
    fn two_vertex_instance_outcomes() {
        let inst = parse_instance(br#"{"offline":2,"arrivals":[[0,1],[0]]}"#).unwrap();
        assert_eq!(run_with(&inst, &[true]).size(), 1);
        assert_eq!(run_with(&inst, &[false]).size(), 2);
    }

    #[test]
    fn phase_graph_k2_coin_paths() {
        let inst = parse_instance(br#"{"offline":4,"arrivals":[[0,2],[1,3],[2,3]]}"#).unwrap();
        // unused coins do not matter, so averaging over all 8 sequences is exact
        let mut total = 0;
        for bits in 0..8u8 {
            let coins: Vec<bool> = (0..3).map(|k| bits >> k & 1 == 1).collect();
            total += run_with(&inst, &coins).size();
        }
        // E[size] = 22 / 8 = 11/4
        assert_eq!(total, 22);
    }

    #[test]
    fn distinct_fresh_neighbors_use_no_coins() {
        let inst = parse_instance(br#"{"offline":3,"arrivals":[[0],[1],[2]]}"#).unwrap();
        let mut alg = HalfHalf::new(3);
        let mut rng = StepRng::new(0, 1);
        for a in inst.arrivals() {
            assert!(alg.arrive(a, &mut rng).is_some());
        }
        assert_eq!(alg.coins_used(), 0);
        assert_eq!(alg.into_matching().size(), 3);
    }
}

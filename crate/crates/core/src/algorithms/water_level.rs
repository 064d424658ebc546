use num_traits::{One, Zero};

use crate::instance::{Arrival, Instance};
use crate::numeric::Rational;

/// Fractional matching produced by Water-Level, in exact rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalAssignment {
    /// Non-zero edge weights per arrival, as `(offline, weight)`.
    edge_weight: Vec<Vec<(u32, Rational)>>,
    vertex_load: Vec<Rational>,
}

impl FractionalAssignment {
    pub fn edge_weight(&self, offline: u32, arrival: usize) -> Rational {
        self.edge_weight[arrival]
            .iter()
            .find(|(i, _)| *i == offline)
            .map(|(_, w)| w.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn arrival_edges(&self, arrival: usize) -> &[(u32, Rational)] {
        &self.edge_weight[arrival]
    }

    pub fn vertex_load(&self, offline: u32) -> &Rational {
        &self.vertex_load[offline as usize]
    }

    pub fn vertex_loads(&self) -> &[Rational] {
        &self.vertex_load
    }

    pub fn online_load(&self, arrival: usize) -> Rational {
        self.edge_weight[arrival].iter().map(|(_, w)| w).sum()
    }

    /// Total matched mass, the primal objective.
    pub fn value(&self) -> Rational {
        self.vertex_load.iter().sum()
    }
}

/// What one arrival did to its neighbors.
#[derive(Debug, Clone, PartialEq)]
pub struct WaterStep {
    /// Common level solving `sum max(0, level - x_i) = 1`.
    pub level: Rational,
    /// `(offline, load before, increment)` for each neighbor.
    pub changes: Vec<(u32, Rational, Rational)>,
}

impl WaterStep {
    pub fn fully_matched(&self) -> bool {
        self.level <= Rational::one()
    }

    pub fn mass(&self) -> Rational {
        self.changes.iter().map(|(_, _, d)| d).sum()
    }
}

/// Streaming Water-Level over exact rationals.
#[derive(Debug, Clone)]
pub struct WaterLevel {
    loads: Vec<Rational>,
    edges: Vec<Vec<(u32, Rational)>>,
}

impl WaterLevel {
    pub fn new(offline: usize) -> Self {
        WaterLevel {
            loads: vec![Rational::zero(); offline],
            edges: Vec::new(),
        }
    }

    pub fn loads(&self) -> &[Rational] {
        &self.loads
    }

    pub fn arrive(&mut self, arrival: &Arrival) -> WaterStep {
        let mut nbrs: Vec<u32> = arrival.neighbors().collect();
        nbrs.sort_by(|a, b| self.loads[*a as usize].cmp(&self.loads[*b as usize]));
        let level = solve_level(
            &nbrs
                .iter()
                .map(|&i| &self.loads[i as usize])
                .collect::<Vec<_>>(),
        );
        let one = Rational::one();
        let target = if level <= one { level.clone() } else { one };
        let mut changes = Vec::with_capacity(nbrs.len());
        let mut weights = Vec::with_capacity(nbrs.len());
        for i in arrival.neighbors() {
            let before = self.loads[i as usize].clone();
            let delta = if before < target {
                &target - &before
            } else {
                Rational::zero()
            };
            if !delta.is_zero() {
                self.loads[i as usize] = target.clone();
                weights.push((i, delta.clone()));
            }
            changes.push((i, before, delta));
        }
        self.edges.push(weights);
        WaterStep { level, changes }
    }

    pub fn into_assignment(self) -> FractionalAssignment {
        FractionalAssignment {
            edge_weight: self.edges,
            vertex_load: self.loads,
        }
    }
}

/// Level `l` with `sum max(0, l - x) = 1` for loads sorted ascending.
///
/// With k loads active the equation is `k * l - sum(active) = 1`; the active set is the
/// longest prefix whose last load lies below the candidate level.
fn solve_level(sorted: &[&Rational]) -> Rational {
    debug_assert!(!sorted.is_empty());
    let mut sum = Rational::zero();
    for (k, x) in sorted.iter().enumerate() {
        sum += *x;
        let count = Rational::from_integer(((k + 1) as u64).into());
        let candidate = (&sum + Rational::one()) / count;
        let next_ok = sorted.get(k + 1).is_none_or(|next| candidate <= **next);
        if next_ok {
            return candidate;
        }
    }
    unreachable!("the last prefix always accepts its candidate")
}

pub fn water_level(inst: &Instance) -> FractionalAssignment {
    let mut alg = WaterLevel::new(inst.offline_count());
    for a in inst.arrivals() {
        alg.arrive(a);
    }
    alg.into_assignment()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::parse_instance;
    use crate::numeric::ratio;

    #[test]
    fn two_vertex_instance_is_three_quarters() {
        let inst = parse_instance(br#"{"offline":2,"arrivals":[[0,1],[0]]}"#).unwrap();
        let mut alg = WaterLevel::new(2);
        let s0 = alg.arrive(&inst.arrivals()[0]);
        assert_eq!(s0.level, ratio(1, 2));
        assert_eq!(alg.loads(), &[ratio(1, 2), ratio(1, 2)]);
        let s1 = alg.arrive(&inst.arrivals()[1]);
        assert_eq!(s1.level, ratio(3, 2));
        assert!(!s1.fully_matched());
        let fa = alg.into_assignment();
        assert_eq!(fa.vertex_loads(), &[ratio(1, 1), ratio(1, 2)]);
        assert_eq!(fa.value(), ratio(3, 2));
        assert_eq!(fa.online_load(0), ratio(1, 1));
        assert_eq!(fa.online_load(1), ratio(1, 2));
        assert_eq!(fa.edge_weight(0, 1), ratio(1, 2));
    }

    #[test]
    fn half_loaded_neighbor_rises_with_fresh_one() {
        let mut alg = WaterLevel::new(3);
        alg.arrive(&Arrival::Two(0, 2));
        assert_eq!(alg.loads()[0], ratio(1, 2));
        let s = alg.arrive(&Arrival::Two(0, 1));
        assert_eq!(s.level, ratio(3, 4));
        assert_eq!(alg.loads()[0], ratio(3, 4));
        assert_eq!(alg.loads()[1], ratio(3, 4));
        assert_eq!(s.mass(), ratio(1, 1));
    }

    #[test]
    fn breakpoint_solver() {
        let (a, b) = (ratio(0, 1), ratio(1, 1));
        assert_eq!(solve_level(&[&a, &b]), ratio(1, 1));
        let (a, b) = (ratio(1, 2), ratio(1, 2));
        assert_eq!(solve_level(&[&a, &b]), ratio(1, 1));
        let c = ratio(1, 4);
        assert_eq!(solve_level(&[&c]), ratio(5, 4));
        // a gap wider than one unit leaves the higher load inactive
        let (lo, hi) = (ratio(0, 1), ratio(3, 1));
        assert_eq!(solve_level(&[&lo, &hi]), ratio(1, 1));
    }

    #[test]
    fn degree_one_fresh_vertex_fills() {
        let fa = water_level(&parse_instance(br#"{"offline":1,"arrivals":[[0],[0]]}"#).unwrap());
        assert_eq!(fa.value(), ratio(1, 1));
        assert_eq!(fa.online_load(1), ratio(0, 1));
        assert!(fa.arrival_edges(1).is_empty());
    }
}

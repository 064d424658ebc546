//! Online bipartite instances whose online vertices have one or two neighbors.
//!
//! Offline vertices are `0..offline_count`. Arrivals are revealed in list order and
//! each one carries its (at most two) offline neighbors.

mod generate;
mod reduce;

pub use generate::gen_random;
pub use reduce::{lift_matching, reduce_to_exact_degree2, CopyMap, Lifted};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Neighborhood of one online vertex. A two-neighbor arrival is stored sorted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Arrival {
    One(u32),
    Two(u32, u32),
}

impl Arrival {
    /// Builds a two-neighbor arrival, sorting the pair. Panics on equal indices.
    pub fn pair(a: u32, b: u32) -> Self {
        assert_ne!(a, b, "arrival neighbors must be distinct");
        if a < b {
            Arrival::Two(a, b)
        } else {
            Arrival::Two(b, a)
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Arrival::One(_) => 1,
            Arrival::Two(..) => 2,
        }
    }

    pub fn neighbors(&self) -> impl Iterator<Item = u32> {
        let (a, b) = match *self {
            Arrival::One(i) => (i, None),
            Arrival::Two(i, k) => (i, Some(k)),
        };
        std::iter::once(a).chain(b)
    }

    pub fn contains(&self, i: u32) -> bool {
        match *self {
            Arrival::One(a) => a == i,
            Arrival::Two(a, b) => a == i || b == i,
        }
    }

    fn map(&self, f: impl Fn(u32) -> u32) -> Self {
        match *self {
            Arrival::One(i) => Arrival::One(f(i)),
            Arrival::Two(i, k) => Arrival::pair(f(i), f(k)),
        }
    }
}

/// A validated online instance. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    offline: usize,
    arrivals: Vec<Arrival>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    offline: u64,
    arrivals: Vec<Vec<u64>>,
}

impl Instance {
    pub fn new(offline: usize, arrivals: Vec<Arrival>) -> Result<Self> {
        if offline == 0 {
            return Err(Error::NoOfflineVertices);
        }
        if offline > u32::MAX as usize {
            return Err(Error::InvalidParameter(format!(
                "offline count {offline} does not fit 32-bit indices"
            )));
        }
        for (t, a) in arrivals.iter().enumerate() {
            for i in a.neighbors() {
                if i as usize >= offline {
                    return Err(Error::IndexOutOfRange {
                        arrival: t,
                        index: i as u64,
                        offline,
                    });
                }
            }
            if let Arrival::Two(x, y) = *a {
                if x == y {
                    return Err(Error::DuplicateIndex {
                        arrival: t,
                        index: x,
                    });
                }
            }
        }
        let arrivals = arrivals
            .into_iter()
            .map(|a| match a {
                Arrival::Two(x, y) if x > y => Arrival::Two(y, x),
                other => other,
            })
            .collect();
        Ok(Instance { offline, arrivals })
    }

    /// Builds from raw neighbor lists, applying every validation rule of the file format.
    pub fn from_lists(offline: usize, lists: &[Vec<u64>]) -> Result<Self> {
        if offline == 0 {
            return Err(Error::NoOfflineVertices);
        }
        let mut arrivals = Vec::with_capacity(lists.len());
        for (t, list) in lists.iter().enumerate() {
            for &i in list {
                if i >= offline as u64 {
                    return Err(Error::IndexOutOfRange {
                        arrival: t,
                        index: i,
                        offline,
                    });
                }
            }
            let a = match list.as_slice() {
                [] => return Err(Error::EmptyArrival { arrival: t }),
                [i] => Arrival::One(*i as u32),
                [i, k] if i == k => {
                    return Err(Error::DuplicateIndex {
                        arrival: t,
                        index: *i as u32,
                    })
                }
                [i, k] => Arrival::pair(*i as u32, *k as u32),
                more => {
                    return Err(Error::DegreeTooLarge {
                        arrival: t,
                        degree: more.len(),
                    })
                }
            };
            arrivals.push(a);
        }
        Instance::new(offline, arrivals)
    }

    pub fn offline_count(&self) -> usize {
        self.offline
    }

    pub fn arrivals(&self) -> &[Arrival] {
        &self.arrivals
    }

    pub fn arrival_count(&self) -> usize {
        self.arrivals.len()
    }

    pub fn edge_count(&self) -> usize {
        self.arrivals.iter().map(Arrival::degree).sum()
    }

    pub fn has_edge(&self, offline: u32, arrival: usize) -> bool {
        self.arrivals
            .get(arrival)
            .is_some_and(|a| a.contains(offline))
    }

    /// Same arrivals presented in a different order (`order[t]` is the source index of
    /// the t-th arrival of the result).
    pub fn reorder_arrivals(&self, order: &[usize]) -> Result<Instance> {
        if order.len() != self.arrivals.len() {
            return Err(Error::InvalidParameter(
                "arrival order has wrong length".into(),
            ));
        }
        let mut seen = vec![false; order.len()];
        for &t in order {
            if t >= order.len() || std::mem::replace(&mut seen[t], true) {
                return Err(Error::InvalidParameter(
                    "arrival order is not a permutation".into(),
                ));
            }
        }
        Ok(Instance {
            offline: self.offline,
            arrivals: order.iter().map(|&t| self.arrivals[t]).collect(),
        })
    }
}

/// Parses the JSON instance format `{"offline": n, "arrivals": [[i] | [i, k], ...]}`.
pub fn parse_instance(bytes: &[u8]) -> Result<Instance> {
    let file: InstanceFile =
        serde_json::from_slice(bytes).map_err(|e| Error::Malformed(e.to_string()))?;
    let offline = usize::try_from(file.offline)
        .map_err(|_| Error::Malformed("offline count too large".into()))?;
    Instance::from_lists(offline, &file.arrivals)
}

/// Canonical compact JSON; pairs are written in increasing order.
pub fn serialize_instance(inst: &Instance) -> Vec<u8> {
    let file = InstanceFile {
        offline: inst.offline as u64,
        arrivals: inst
            .arrivals
            .iter()
            .map(|a| a.neighbors().map(u64::from).collect())
            .collect(),
    };
    serde_json::to_vec(&file).expect("instance serialization cannot fail")
}

/// A bijection on the offline vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OfflinePermutation {
    mapping: Vec<u32>,
}

impl OfflinePermutation {
    pub fn new(mapping: Vec<u32>) -> Result<Self> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &v in &mapping {
            let v = v as usize;
            if v >= n {
                return Err(Error::NotAPermutation(format!(
                    "image {v} out of range {n}"
                )));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::NotAPermutation(format!("image {v} repeated")));
            }
        }
        Ok(OfflinePermutation { mapping })
    }

    pub fn identity(n: usize) -> Self {
        OfflinePermutation {
            mapping: (0..n as u32).collect(),
        }
    }

    /// Fisher-Yates shuffle driven by `rng`.
    pub fn random<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        use rand::seq::SliceRandom;
        let mut mapping: Vec<u32> = (0..n as u32).collect();
        mapping.shuffle(rng);
        OfflinePermutation { mapping }
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn apply(&self, i: u32) -> u32 {
        self.mapping[i as usize]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.mapping.len()];
        for (i, &v) in self.mapping.iter().enumerate() {
            inv[v as usize] = i as u32;
        }
        OfflinePermutation { mapping: inv }
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.mapping
    }
}

/// Relabels every offline index through `perm`; arrival order is unchanged.
pub fn apply_permutation(inst: &Instance, perm: &OfflinePermutation) -> Result<Instance> {
    if perm.len() != inst.offline {
        return Err(Error::PermutationSize {
            expected: inst.offline,
            got: perm.len(),
        });
    }
    Ok(Instance {
        offline: inst.offline,
        arrivals: inst
            .arrivals
            .iter()
            .map(|a| a.map(|i| perm.apply(i)))
            .collect(),
    })
}

/// An integral matching: for each offline vertex, the arrival it is matched to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntegralMatching {
    partner: Vec<Option<u32>>,
    size: usize,
}

impl IntegralMatching {
    pub fn empty(offline: usize) -> Self {
        IntegralMatching {
            partner: vec![None; offline],
            size: 0,
        }
    }

    /// Builds from a partner list and checks it against `inst`.
    pub fn from_partners(inst: &Instance, partner: Vec<Option<u32>>) -> Result<Self> {
        let size = partner.iter().flatten().count();
        let m = IntegralMatching { partner, size };
        m.validate(inst)?;
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn partner(&self, offline: u32) -> Option<u32> {
        self.partner[offline as usize]
    }

    pub fn partners(&self) -> &[Option<u32>] {
        &self.partner
    }

    pub fn is_matched(&self, offline: u32) -> bool {
        self.partner[offline as usize].is_some()
    }

    /// Records `offline -- arrival`. The caller guarantees the vertex is free.
    pub(crate) fn assign(&mut self, offline: u32, arrival: usize) {
        debug_assert!(self.partner[offline as usize].is_none());
        self.partner[offline as usize] = Some(arrival as u32);
        self.size += 1;
    }

    /// Matched pairs as (offline, arrival).
    pub fn pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.partner
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.map(|j| (i as u32, j)))
    }

    pub fn validate(&self, inst: &Instance) -> Result<()> {
        if self.partner.len() != inst.offline_count() {
            return Err(Error::InvalidMatching(format!(
                "partner table has {} entries for {} offline vertices",
                self.partner.len(),
                inst.offline_count()
            )));
        }
        let mut used = vec![false; inst.arrival_count()];
        let mut count = 0;
        for (i, j) in self.pairs() {
            let j = j as usize;
            if !inst.has_edge(i, j) {
                return Err(Error::InvalidMatching(format!("({i}, {j}) is not an edge")));
            }
            if std::mem::replace(&mut used[j], true) {
                return Err(Error::InvalidMatching(format!("arrival {j} matched twice")));
            }
            count += 1;
        }
        if count != self.size {
            return Err(Error::InvalidMatching(format!(
                "size {} disagrees with {count} matched vertices",
                self.size
            )));
        }
        Ok(())
    }

    /// True when no arrival was left unmatched while one of its neighbors was free at
    /// the time it arrived.
    pub fn is_online_maximal(&self, inst: &Instance) -> bool {
        let mut matched_at: Vec<Option<usize>> = vec![None; inst.offline_count()];
        let mut arrival_matched = vec![false; inst.arrival_count()];
        for (i, j) in self.pairs() {
            matched_at[i as usize] = Some(j as usize);
            arrival_matched[j as usize] = true;
        }
        inst.arrivals().iter().enumerate().all(|(t, a)| {
            arrival_matched[t]
                || a.neighbors()
                    .all(|i| matched_at[i as usize].is_some_and(|when| when < t))
        })
    }
}

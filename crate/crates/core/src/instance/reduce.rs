//! Reduction from online degree at most two to online degree exactly two.
//!
//! The output holds `m` disjoint copies of the source plus one shared dummy offline
//! vertex. Copy `c` maps source offline vertex `v` to `c * n + v`; the dummy is
//! `m * n`. Every degree-1 arrival of every copy gains the dummy as second neighbor.
//! Arrivals are interleaved: all `m` copies of source arrival 0, then all copies of
//! source arrival 1, and so on, so output arrival `t * m + c` is copy `c` of `t`.

use super::{Arrival, Instance, IntegralMatching};
use crate::error::{Error, Result};

/// Provenance of each output arrival of [`reduce_to_exact_degree2`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CopyMap {
    copies: usize,
    source_offline: usize,
    /// `(copy, source arrival)` for each output arrival.
    entries: Vec<(u32, u32)>,
}

impl CopyMap {
    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn source_offline(&self) -> usize {
        self.source_offline
    }

    pub fn dummy(&self) -> u32 {
        (self.copies * self.source_offline) as u32
    }

    pub fn entry(&self, output_arrival: usize) -> (u32, u32) {
        self.entries[output_arrival]
    }

    pub fn entries(&self) -> &[(u32, u32)] {
        &self.entries
    }

    /// Copy that owns an output offline vertex, `None` for the dummy.
    pub fn copy_of_offline(&self, v: u32) -> Option<(u32, u32)> {
        let v = v as usize;
        if v >= self.copies * self.source_offline {
            None
        } else {
            Some((
                (v / self.source_offline) as u32,
                (v % self.source_offline) as u32,
            ))
        }
    }

    fn check(&self) -> Result<()> {
        if self.copies == 0 || self.source_offline == 0 {
            return Err(Error::InconsistentCopyMap("empty copy map".into()));
        }
        if !self.entries.len().is_multiple_of(self.copies) {
            return Err(Error::InconsistentCopyMap(
                "arrival count is not a multiple of the copy count".into(),
            ));
        }
        for (pos, &(c, t)) in self.entries.iter().enumerate() {
            if c as usize != pos % self.copies || t as usize != pos / self.copies {
                return Err(Error::InconsistentCopyMap(format!(
                    "output arrival {pos} labelled ({c}, {t})"
                )));
            }
        }
        Ok(())
    }
}

/// Builds `m` copies of `inst` plus the shared dummy vertex.
pub fn reduce_to_exact_degree2(inst: &Instance, m: usize) -> Result<(Instance, CopyMap)> {
    if m == 0 {
        return Err(Error::InvalidParameter(
            "copy count must be at least 1".into(),
        ));
    }
    let n = inst.offline_count();
    let dummy = (m * n) as u32;
    let mut arrivals = Vec::with_capacity(m * inst.arrival_count());
    let mut entries = Vec::with_capacity(arrivals.capacity());
    for (t, a) in inst.arrivals().iter().enumerate() {
        for c in 0..m {
            let shift = (c * n) as u32;
            arrivals.push(match *a {
                Arrival::One(v) => Arrival::pair(v + shift, dummy),
                Arrival::Two(v, w) => Arrival::pair(v + shift, w + shift),
            });
            entries.push((c as u32, t as u32));
        }
    }
    let out = Instance::new(m * n + 1, arrivals)?;
    Ok((
        out,
        CopyMap {
            copies: m,
            source_offline: n,
            entries,
        },
    ))
}

/// Result of projecting a matching on the reduced instance back onto the source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lifted {
    Matching(IntegralMatching),
    /// The chosen copy matched an arrival to the dummy vertex.
    GaveUp,
}

/// Restricts `out` to copy `chosen_copy` and relabels it onto the source instance.
pub fn lift_matching(out: &IntegralMatching, map: &CopyMap, chosen_copy: usize) -> Result<Lifted> {
    map.check()?;
    if chosen_copy >= map.copies {
        return Err(Error::InvalidParameter(format!(
            "chosen copy {chosen_copy} out of range {}",
            map.copies
        )));
    }
    let n = map.source_offline;
    if out.partners().len() != map.copies * n + 1 {
        return Err(Error::InconsistentCopyMap(format!(
            "matching covers {} offline vertices, copy map expects {}",
            out.partners().len(),
            map.copies * n + 1
        )));
    }
    let lookup = |j: u32| -> Result<(u32, u32)> {
        map.entries
            .get(j as usize)
            .copied()
            .ok_or_else(|| Error::InconsistentCopyMap(format!("arrival {j} not in copy map")))
    };
    if let Some(j) = out.partner(map.dummy()) {
        let (c, _) = lookup(j)?;
        if c as usize == chosen_copy {
            return Ok(Lifted::GaveUp);
        }
    }
    let mut lifted = IntegralMatching::empty(n);
    for v in 0..n {
        if let Some(j) = out.partner((chosen_copy * n + v) as u32) {
            let (c, t) = lookup(j)?;
            if c as usize != chosen_copy {
                return Err(Error::InconsistentCopyMap(format!(
                    "vertex of copy {chosen_copy} matched to arrival of copy {c}"
                )));
            }
            lifted.assign(v as u32, t as usize);
        }
    }
    Ok(Lifted::Matching(lifted))
}

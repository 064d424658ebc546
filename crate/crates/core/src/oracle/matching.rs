use std::collections::VecDeque;

use crate::instance::{Instance, IntegralMatching};

/// Maximum-cardinality matching by repeated BFS augmenting-path search, seeded with a
/// greedy matching. Returns the size and a witness.
pub fn max_matching(inst: &Instance) -> (usize, IntegralMatching) {
    let n = inst.offline_count();
    let arrivals = inst.arrivals();
    // owner[i] = arrival currently matched to offline i
    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut matched = vec![false; arrivals.len()];
    for (j, a) in arrivals.iter().enumerate() {
        if let Some(i) = a.neighbors().find(|&i| owner[i as usize].is_none()) {
            owner[i as usize] = Some(j);
            matched[j] = true;
        }
    }

    let mut seen_stamp = vec![usize::MAX; n];
    // parent[i] = arrival from which offline i was reached in the current search
    let mut parent: Vec<usize> = vec![0; n];
    let mut queue = VecDeque::new();
    for root in 0..arrivals.len() {
        if matched[root] {
            continue;
        }
        queue.clear();
        queue.push_back(root);
        let mut end = None;
        'search: while let Some(j) = queue.pop_front() {
            for i in arrivals[j].neighbors() {
                let iu = i as usize;
                if seen_stamp[iu] == root {
                    continue;
                }
                seen_stamp[iu] = root;
                parent[iu] = j;
                match owner[iu] {
                    None => {
                        end = Some(iu);
                        break 'search;
                    }
                    Some(next) => queue.push_back(next),
                }
            }
        }
        if let Some(mut i) = end {
            matched[root] = true;
            loop {
                let j = parent[i];
                owner[i] = Some(j);
                if j == root {
                    break;
                }
                // j gives up its old partner, which is the offline vertex that led to j
                let freed = arrivals[j]
                    .neighbors()
                    .find(|&k| owner[k as usize] == Some(j) && k as usize != i)
                    .expect("augmenting path is alternating");
                i = freed as usize;
            }
        }
    }

    let mut witness = IntegralMatching::empty(n);
    for (i, o) in owner.iter().enumerate() {
        if let Some(j) = o {
            witness.assign(i as u32, *j);
        }
    }
    (witness.size(), witness)
}

use crate::instance::{Instance, IntegralMatching};

/// Baseline: match the lowest-indexed free neighbor, if any.
pub fn greedy(inst: &Instance) -> IntegralMatching {
    let mut m = IntegralMatching::empty(inst.offline_count());
    for (j, a) in inst.arrivals().iter().enumerate() {
        if let Some(i) = a.neighbors().find(|&i| !m.is_matched(i)) {
            m.assign(i, j);
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::parse_instance;

    #[test]
    fn greedy_gives_up_on_two_vertex_instance() {
        let inst = parse_instance(br#"{"offline":2,"arrivals":[[0,1],[0]]}"#).unwrap();
        let m = greedy(&inst);
        assert_eq!(m.size(), 1);
        assert_eq!(m.partner(0), Some(0));
        assert!(m.is_online_maximal(&inst));
    }
}

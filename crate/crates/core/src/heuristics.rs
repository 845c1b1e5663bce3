//! 3-scattered sets and the pruning bound they give.
//!
//! No vertex dominates two members of a 3-scattered set, so a partial
//! solution of `l` vertices that leaves more than `k - l` members undominated
//! cannot grow into a dominating set of size `k`.

use crate::graph::{Graph, VertexSet};

/// Vertex set with pairwise hop distance at least 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScatteredSet {
    pub members: VertexSet,
    pub size: usize,
}

/// Greedy 3-scattered set: scan vertices by ascending degree and accept any
/// vertex not within distance 2 of an accepted one.
pub fn greedy_3_scattered(g: &Graph) -> ScatteredSet {
    let mut excluded = VertexSet::new(g.n());
    let mut members = VertexSet::new(g.n());
    for &v in g.degree_order() {
        if excluded.contains(v) {
            continue;
        }
        members.insert(v);
        excluded.insert(v);
        for &u in g.neighbors(v) {
            excluded.insert(u);
            for &w in g.neighbors(u) {
                excluded.insert(w);
            }
        }
    }
    let size = members.len();
    ScatteredSet { members, size }
}

/// Incremental `|S \ N[P]|` for the partial solution `P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScatterPruneState {
    /// Dominator count per host vertex; only meaningful for scattered vertices.
    counter: Vec<u32>,
    is_member: VertexSet,
    size: usize,
    uncovered: usize,
}

impl ScatterPruneState {
    pub fn new(g: &Graph, set: &ScatteredSet) -> Self {
        Self {
            counter: vec![0; g.n()],
            is_member: set.members.clone(),
            size: set.size,
            uncovered: set.size,
        }
    }

    pub fn for_graph(g: &Graph) -> Self {
        Self::new(g, &greedy_3_scattered(g))
    }

    /// `|S_P|`: scattered vertices not yet dominated.
    pub fn uncovered_count(&self) -> usize {
        self.uncovered
    }

    pub fn scattered_size(&self) -> usize {
        self.size
    }

    pub fn counter(&self, v: usize) -> u32 {
        self.counter[v]
    }

    pub fn on_assign(&mut self, g: &Graph, v: usize) {
        // at most one scattered vertex lies in N[v]
        for u in std::iter::once(v).chain(g.neighbors(v).iter().copied()) {
            if self.is_member.contains(u) {
                self.counter[u] += 1;
                if self.counter[u] == 1 {
                    self.uncovered -= 1;
                }
            }
        }
    }

    pub fn on_unassign(&mut self, g: &Graph, v: usize) {
        for u in std::iter::once(v).chain(g.neighbors(v).iter().copied()) {
            if self.is_member.contains(u) {
                assert!(self.counter[u] > 0, "unassign of {v} without matching assign");
                self.counter[u] -= 1;
                if self.counter[u] == 0 {
                    self.uncovered += 1;
                }
            }
        }
    }
}

/// True when the branch can be cut: more undominated scattered vertices than
/// unassigned pattern vertices.
#[inline]
pub fn scatter_prune(uncovered: usize, assigned: usize, k: usize) -> bool {
    uncovered + assigned > k
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (0..n - 1).map(|i| (i, i + 1))).unwrap()
    }

    /// Minimum dominating set size by subset enumeration.
    fn domination_number(g: &Graph) -> usize {
        let n = g.n();
        (0u32..1 << n)
            .filter(|&mask| g.dominates((0..n).filter(|&v| mask >> v & 1 == 1)))
            .map(|mask| mask.count_ones() as usize)
            .min()
            .unwrap()
    }

    #[test]
    fn greedy_on_p7() {
        let g = path(7);
        let s = greedy_3_scattered(&g);
        assert_eq!(s.members.iter().collect::<Vec<_>>(), vec![0, 3, 6]);
        assert_eq!(s.size, 3);
        assert!(g.pairwise_hop_distance_ge(&s.members, 3));
    }

    #[test]
    fn greedy_on_complete_and_empty() {
        let k5 = Graph::from_edges(5, (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b)))).unwrap();
        assert_eq!(greedy_3_scattered(&k5).size, 1);
        let empty = Graph::from_edges(4, []).unwrap();
        assert_eq!(greedy_3_scattered(&empty).size, 4);
    }

    #[test]
    fn prune_rule() {
        assert!(scatter_prune(2, 1, 2));
        assert!(!scatter_prune(0, 0, 3));
        assert!(!scatter_prune(0, 3, 3));
        assert!(!scatter_prune(3, 2, 6));
    }

    #[test]
    fn assign_updates_counters() {
        let g = path(7);
        let mut st = ScatterPruneState::for_graph(&g);
        assert_eq!(st.uncovered_count(), 3);
        st.on_assign(&g, 2);
        assert_eq!(st.counter(3), 1);
        assert_eq!(st.uncovered_count(), 2);

        let mut st = ScatterPruneState::for_graph(&g);
        let before = st.clone();
        st.on_assign(&g, 1);
        assert_eq!(st.counter(0), 1);
        assert_eq!(st.uncovered_count(), 2);
        st.on_unassign(&g, 1);
        assert_eq!(st, before);
    }

    #[test]
    #[should_panic(expected = "without matching assign")]
    fn unassign_without_assign_panics() {
        let g = path(7);
        let mut st = ScatterPruneState::for_graph(&g);
        st.on_unassign(&g, 0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
            (1..=max_n).prop_flat_map(|n| {
                proptest::collection::vec((0..n, 0..n), 0..3 * n).prop_map(move |edges| {
                    Graph::from_edges(n, edges.into_iter().filter(|(a, b)| a != b)).unwrap()
                })
            })
        }

        proptest! {
            #[test]
            fn scattered_lower_bounds_domination(g in arb_graph(12)) {
                let s = greedy_3_scattered(&g);
                prop_assert!(g.pairwise_hop_distance_ge(&s.members, 3));
                prop_assert!(s.size <= domination_number(&g));
            }

            #[test]
            fn nested_assign_unassign_restores(g in arb_graph(16), seq in proptest::collection::vec(0usize..16, 0..10)) {
                let mut st = ScatterPruneState::for_graph(&g);
                let start = st.clone();
                let seq: Vec<usize> = seq.into_iter().filter(|&v| v < g.n()).collect();
                for &v in &seq {
                    st.on_assign(&g, v);
                }
                for &v in seq.iter().rev() {
                    st.on_unassign(&g, v);
                }
                prop_assert_eq!(st.uncovered_count(), start.scattered_size());
                prop_assert_eq!(st, start);
            }
        }
    }
}

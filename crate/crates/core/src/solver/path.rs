//! Tailored solver for dominating induced `k`-vertex paths.
//!
//! Same segment machinery as the cycle solver, but a segment may never be
//! closed and the two ends of the final path stay open. Since only one end of
//! a segment is guaranteed to grow, branching covers both ends at once.

use crate::bnb::{
    run_bnb, union_sorted, CandidateStrategy, SearchState, SolveError, SolveOutcome, SolverConfig,
};
use crate::graph::Graph;
use crate::pattern::PatternSpec;

use super::segments::{SegmentAction, SegmentMove, SegmentStore};

/// Path counterpart of [`super::cycle::cycle_classify`]: `s` segments need
/// `s - 1` more vertices to become one path.
pub fn path_classify(
    store: &SegmentStore,
    g: &Graph,
    dominators: u32,
    v: usize,
    remaining: usize,
) -> SegmentAction {
    if dominators > 2 || remaining == 0 {
        return SegmentAction::Invalid;
    }
    let r = remaining - 1;
    let s = store.segment_count();
    if dominators == 0 {
        return if r >= s {
            SegmentAction::NewSegment
        } else {
            SegmentAction::Invalid
        };
    }
    let adj = store.adjacent_ends(g, v);
    if adj.count != dominators as usize {
        return SegmentAction::Invalid;
    }
    match adj.count {
        1 if r + 1 >= s => SegmentAction::Append(adj.first),
        2 if store.other_end(adj.first) == adj.second => SegmentAction::Invalid,
        2 if r + 2 >= s => SegmentAction::Join(adj.first, adj.second),
        _ => SegmentAction::Invalid,
    }
}

pub struct PathBnb {
    k: usize,
    store: SegmentStore,
    extension_rule: bool,
    dom_buf: Vec<SegmentMove>,
    ext_buf: Vec<SegmentMove>,
    union_buf: Vec<usize>,
    best_buf: Vec<usize>,
}

impl PathBnb {
    pub fn new(g: &Graph, k: usize, extension_rule: bool) -> Self {
        Self {
            k,
            store: SegmentStore::new(g.n()),
            extension_rule,
            dom_buf: Vec::new(),
            ext_buf: Vec::new(),
            union_buf: Vec::new(),
            best_buf: Vec::new(),
        }
    }

    pub fn store(&self) -> &SegmentStore {
        &self.store
    }

    fn classify_into(
        &self,
        st: &SearchState<'_>,
        vertices: impl IntoIterator<Item = usize>,
        out: &mut Vec<SegmentMove>,
    ) {
        let g = st.graph;
        let remaining = self.k - st.depth();
        for v in vertices {
            if st.is_assigned(v) {
                continue;
            }
            let action = path_classify(&self.store, g, st.counters.count(v), v, remaining);
            if action != SegmentAction::Invalid {
                out.push(SegmentMove { vertex: v, action });
            }
        }
    }

    /// Unassigned part of `N(a) ∪ N(b)` for the segment where it is smallest,
    /// left in `best_buf`. Returns false when there is no segment.
    fn combined_neighborhood(&mut self, st: &SearchState<'_>) -> bool {
        let g = st.graph;
        let mut best: Option<usize> = None;
        let mut union = std::mem::take(&mut self.union_buf);
        for (a, b) in self.store.segment_ends() {
            if a == b {
                union.clear();
                union.extend_from_slice(g.neighbors(a));
            } else {
                union_sorted(g.neighbors(a), g.neighbors(b), &mut union);
            }
            union.retain(|&v| !st.is_assigned(v));
            if best.is_none_or(|size| union.len() < size) {
                best = Some(union.len());
                std::mem::swap(&mut union, &mut self.best_buf);
            }
        }
        self.union_buf = union;
        best.is_some()
    }
}

impl CandidateStrategy for PathBnb {
    type Move = SegmentMove;

    fn pattern_size(&self) -> usize {
        self.k
    }

    fn vertex(&self, mv: &SegmentMove) -> usize {
        mv.vertex
    }

    fn initial_candidates(&mut self, st: &mut SearchState<'_>, out: &mut Vec<SegmentMove>) {
        let g = st.graph;
        out.extend(
            g.closed_neighborhood(g.min_degree_vertex())
                .into_iter()
                .map(|vertex| SegmentMove { vertex, action: SegmentAction::NewSegment }),
        );
    }

    fn extension_candidates(&mut self, st: &mut SearchState<'_>, out: &mut Vec<SegmentMove>) {
        let g = st.graph;
        let mut dom_buf = std::mem::take(&mut self.dom_buf);
        let mut ext_buf = std::mem::take(&mut self.ext_buf);
        dom_buf.clear();
        ext_buf.clear();

        let undominated = st.min_degree_undominated();
        if let Some(u) = undominated {
            self.classify_into(st, g.closed_neighborhood(u), &mut dom_buf);
        }
        let has_ext = self.extension_rule && self.combined_neighborhood(st);
        if has_ext {
            let best = std::mem::take(&mut self.best_buf);
            self.classify_into(st, best.iter().copied(), &mut ext_buf);
            self.best_buf = best;
        }

        match (undominated.is_some(), has_ext) {
            (true, true) if dom_buf.len() < ext_buf.len() => out.append(&mut dom_buf),
            (_, true) => out.append(&mut ext_buf),
            (true, false) => out.append(&mut dom_buf),
            (false, false) => self.classify_into(st, g.degree_order().iter().copied(), out),
        }
        self.dom_buf = dom_buf;
        self.ext_buf = ext_buf;
    }

    fn apply(&mut self, _st: &SearchState<'_>, mv: SegmentMove) {
        self.store.apply(mv.vertex, mv.action);
    }

    fn undo(&mut self, _st: &SearchState<'_>, mv: SegmentMove) {
        self.store.undo(mv.vertex, mv.action);
    }

    fn witness(&self, _st: &SearchState<'_>) -> Vec<usize> {
        self.store.walk(self.store.ends()[0])
    }

    fn check_invariants(&self, st: &SearchState<'_>) -> Result<(), String> {
        self.store.check(st.graph, st.assigned())?;
        if self.store.is_closed() {
            return Err("path segments never close".into());
        }
        if self.k - st.depth() + 1 < self.store.segment_count() {
            return Err("segment budget exceeded".into());
        }
        Ok(())
    }
}

pub fn solve_path(g: &Graph, k: usize, cfg: &SolverConfig) -> Result<SolveOutcome, SolveError> {
    let h = PatternSpec::path(k)?;
    let mut strategy = PathBnb::new(g, k, cfg.extension_rule);
    run_bnb(g, &h, &mut strategy, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bnb::Status;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn mv(vertex: usize, action: SegmentAction) -> SegmentMove {
        SegmentMove { vertex, action }
    }

    fn setup<'g>(g: &'g Graph, k: usize, moves: &[SegmentMove]) -> (PathBnb, SearchState<'g>) {
        let mut s = PathBnb::new(g, k, true);
        let mut st = SearchState::new(g, false);
        for &m in moves {
            st.assign(m.vertex);
            s.apply(&st, m);
        }
        (s, st)
    }

    fn two_segments() -> [SegmentMove; 4] {
        [
            mv(0, SegmentAction::NewSegment),
            mv(1, SegmentAction::Append(0)),
            mv(3, SegmentAction::NewSegment),
            mv(4, SegmentAction::Append(3)),
        ]
    }

    #[test]
    fn classify_examples() {
        let g = cycle(6);
        let (s, st) = setup(&g, 5, &two_segments());
        assert_eq!(
            path_classify(&s.store, &g, st.counters.count(2), 2, 1),
            SegmentAction::Join(1, 3)
        );

        let g = cycle(4);
        let line = [
            mv(0, SegmentAction::NewSegment),
            mv(1, SegmentAction::Append(0)),
            mv(2, SegmentAction::Append(1)),
        ];
        let (s, st) = setup(&g, 4, &line);
        assert_eq!(path_classify(&s.store, &g, st.counters.count(3), 3, 1), SegmentAction::Invalid);
    }

    #[test]
    fn combined_rule() {
        let g = cycle(6);
        let (mut s, st) = setup(&g, 6, &two_segments());
        assert!(s.combined_neighborhood(&st));
        // both segments give {2,5}; the first one is kept
        assert_eq!(s.best_buf, vec![2, 5]);
    }

    #[test]
    fn solve_examples() {
        let cfg = SolverConfig::default();
        let g = cycle(6);
        let out = solve_path(&g, 3, &cfg).unwrap();
        assert_eq!(out.status, Status::NotFound);
        let out = solve_path(&g, 4, &cfg).unwrap();
        assert_eq!(out.status, Status::Found);
        let p4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let mut w = solve_path(&p4, 2, &cfg).unwrap().witness.unwrap();
        w.sort();
        assert_eq!(w, vec![1, 2]);
        assert_eq!(solve_path(&p4, 1, &cfg).unwrap().status, Status::NotFound);
        let k3 = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(solve_path(&k3, 1, &cfg).unwrap().status, Status::Found);
        assert_eq!(solve_path(&k3, 3, &cfg).unwrap().status, Status::NotFound);
    }
}

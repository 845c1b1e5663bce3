//! Tailored solver for dominating induced `k`-cycles.

use crate::bnb::{run_bnb, CandidateStrategy, SearchState, SolveError, SolveOutcome, SolverConfig};
use crate::graph::Graph;
use crate::pattern::PatternSpec;

use super::segments::{SegmentAction, SegmentMove, SegmentStore};

/// How `v` extends the segments, given `dominators` assigned neighbors and
/// `remaining` unassigned roles before placing it.
///
/// Turning `s` open segments into one cycle takes at least `s` more vertices,
/// which gives every budget check below.
pub fn cycle_classify(
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
        return if r > s {
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
        1 if r >= s => SegmentAction::Append(adj.first),
        2 if store.other_end(adj.first) == adj.second => {
            if s == 1 && r == 0 {
                SegmentAction::Close(adj.first, adj.second)
            } else {
                SegmentAction::Invalid
            }
        }
        2 if r + 1 >= s => SegmentAction::Join(adj.first, adj.second),
        _ => SegmentAction::Invalid,
    }
}

pub struct CycleBnb {
    k: usize,
    store: SegmentStore,
    extension_rule: bool,
    dom_buf: Vec<SegmentMove>,
    ext_buf: Vec<SegmentMove>,
}

impl CycleBnb {
    pub fn new(g: &Graph, k: usize, extension_rule: bool) -> Self {
        Self {
            k,
            store: SegmentStore::new(g.n()),
            extension_rule,
            dom_buf: Vec::new(),
            ext_buf: Vec::new(),
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
            let action = cycle_classify(&self.store, g, st.counters.count(v), v, remaining);
            if action != SegmentAction::Invalid {
                out.push(SegmentMove { vertex: v, action });
            }
        }
    }

    fn min_degree_end(&self, g: &Graph) -> Option<usize> {
        self.store.ends().iter().copied().min_by_key(|&e| (g.degree(e), e))
    }
}

impl CandidateStrategy for CycleBnb {
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
        let end = if self.extension_rule {
            self.min_degree_end(g)
        } else {
            None
        };
        if let Some(e) = end {
            self.classify_into(st, g.neighbors(e).iter().copied(), &mut ext_buf);
        }

        match (undominated, end) {
            (Some(_), Some(_)) if dom_buf.len() < ext_buf.len() => out.append(&mut dom_buf),
            (_, Some(_)) => out.append(&mut ext_buf),
            (Some(_), None) => out.append(&mut dom_buf),
            (None, None) => self.classify_into(st, g.degree_order().iter().copied(), out),
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

    fn witness(&self, st: &SearchState<'_>) -> Vec<usize> {
        self.store.walk(st.assigned()[0])
    }

    fn check_invariants(&self, st: &SearchState<'_>) -> Result<(), String> {
        self.store.check(st.graph, st.assigned())?;
        let depth = st.depth();
        if self.store.is_closed() && depth != self.k {
            return Err("cycle closed before all roles were assigned".into());
        }
        if !self.store.is_closed() && self.k - depth < self.store.segment_count() {
            return Err("segment budget exceeded".into());
        }
        Ok(())
    }
}

pub fn solve_cycle(g: &Graph, k: usize, cfg: &SolverConfig) -> Result<SolveOutcome, SolveError> {
    let h = PatternSpec::cycle(k)?;
    let mut strategy = CycleBnb::new(g, k, cfg.extension_rule);
    run_bnb(g, &h, &mut strategy, cfg)
}

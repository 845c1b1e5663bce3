//! Tailored solver for dominating induced `k`-matchings.
//!
//! Assignments are role-free: a chosen host vertex either starts a new
//! pattern edge (no assigned neighbor) or finishes the unique started edge
//! whose endpoint dominates it. Anything with two or more assigned neighbors
//! would break the induced matching.

use crate::bnb::{run_bnb, CandidateStrategy, SearchState, SolveError, SolveOutcome, SolverConfig};
use crate::graph::Graph;
use crate::pattern::PatternSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchingClass {
    StartEdge,
    /// Completes the edge started at the given host vertex.
    FinishEdge(usize),
    Invalid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchingMove {
    pub vertex: usize,
    pub class: MatchingClass,
}

/// Started/finished pattern edges of the current partial matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingState {
    k: usize,
    started: Vec<usize>,
    finished: Vec<(usize, usize)>,
    unstarted: usize,
    /// Index in `started` each `FinishEdge` removed, for undo.
    removed_at: Vec<usize>,
}

impl MatchingState {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            started: Vec::new(),
            finished: Vec::new(),
            unstarted: k,
            removed_at: Vec::new(),
        }
    }

    pub fn started(&self) -> &[usize] {
        &self.started
    }

    pub fn finished(&self) -> &[(usize, usize)] {
        &self.finished
    }

    pub fn unstarted_count(&self) -> usize {
        self.unstarted
    }

    pub fn start(&mut self, v: usize) {
        assert!(self.unstarted > 0, "no pattern edge left to start");
        self.unstarted -= 1;
        self.started.push(v);
    }

    pub fn finish(&mut self, partner: usize, v: usize) {
        let idx = self
            .started
            .iter()
            .position(|&s| s == partner)
            .expect("partner is a started endpoint");
        self.started.remove(idx);
        self.removed_at.push(idx);
        self.finished.push((partner, v));
    }

    pub fn undo_start(&mut self, v: usize) {
        assert_eq!(self.started.pop(), Some(v));
        self.unstarted += 1;
    }

    pub fn undo_finish(&mut self, partner: usize, v: usize) {
        assert_eq!(self.finished.pop(), Some((partner, v)));
        let idx = self.removed_at.pop().expect("finish record");
        self.started.insert(idx, partner);
    }

    /// How `v` would extend the partial matching, given its dominator count.
    pub fn classify(&self, g: &Graph, dominators: u32, v: usize) -> MatchingClass {
        match dominators {
            0 if self.unstarted > 0 => MatchingClass::StartEdge,
            1 => self
                .started
                .iter()
                .copied()
                .find(|&s| g.has_edge(s, v))
                .map_or(MatchingClass::Invalid, MatchingClass::FinishEdge),
            _ => MatchingClass::Invalid,
        }
    }

    /// Started endpoint of minimum degree, ties by id.
    fn min_degree_started(&self, g: &Graph) -> Option<usize> {
        self.started.iter().copied().min_by_key(|&s| (g.degree(s), s))
    }
}

pub struct MatchingBnb {
    state: MatchingState,
    extension_rule: bool,
    dom_buf: Vec<MatchingMove>,
    ext_buf: Vec<MatchingMove>,
}

impl MatchingBnb {
    pub fn new(k: usize, extension_rule: bool) -> Self {
        Self {
            state: MatchingState::new(k),
            extension_rule,
            dom_buf: Vec::new(),
            ext_buf: Vec::new(),
        }
    }

    pub fn state(&self) -> &MatchingState {
        &self.state
    }

    fn classify_into(
        &self,
        st: &SearchState<'_>,
        vertices: impl IntoIterator<Item = usize>,
        out: &mut Vec<MatchingMove>,
    ) {
        let g = st.graph;
        for v in vertices {
            if st.is_assigned(v) {
                continue;
            }
            let class = self.state.classify(g, st.counters.count(v), v);
            if class != MatchingClass::Invalid {
                out.push(MatchingMove { vertex: v, class });
            }
        }
    }
}

impl CandidateStrategy for MatchingBnb {
    type Move = MatchingMove;

    fn pattern_size(&self) -> usize {
        2 * self.state.k
    }

    fn vertex(&self, mv: &MatchingMove) -> usize {
        mv.vertex
    }

    fn extension_candidates(&mut self, st: &mut SearchState<'_>, out: &mut Vec<MatchingMove>) {
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
            self.state.min_degree_started(g)
        } else {
            None
        };
        if let Some(w) = end {
            self.classify_into(st, g.neighbors(w).iter().copied(), &mut ext_buf);
        }

        match (undominated, end) {
            // the domination rule only wins with strictly fewer branches
            (Some(_), Some(_)) if dom_buf.len() < ext_buf.len() => out.append(&mut dom_buf),
            (_, Some(_)) => out.append(&mut ext_buf),
            (Some(_), None) => out.append(&mut dom_buf),
            (None, None) => {
                let order = g.degree_order();
                self.classify_into(st, order.iter().copied(), out);
            }
        }
        self.dom_buf = dom_buf;
        self.ext_buf = ext_buf;
    }

    fn apply(&mut self, _st: &SearchState<'_>, mv: MatchingMove) {
        match mv.class {
            MatchingClass::StartEdge => self.state.start(mv.vertex),
            MatchingClass::FinishEdge(u) => self.state.finish(u, mv.vertex),
            MatchingClass::Invalid => unreachable!("invalid moves are never generated"),
        }
    }

    fn undo(&mut self, _st: &SearchState<'_>, mv: MatchingMove) {
        match mv.class {
            MatchingClass::StartEdge => self.state.undo_start(mv.vertex),
            MatchingClass::FinishEdge(u) => self.state.undo_finish(u, mv.vertex),
            MatchingClass::Invalid => unreachable!(),
        }
    }

    fn witness(&self, _st: &SearchState<'_>) -> Vec<usize> {
        self.state.finished.iter().flat_map(|&(a, b)| [a, b]).collect()
    }

    fn check_invariants(&self, st: &SearchState<'_>) -> Result<(), String> {
        let s = &self.state;
        let g = st.graph;
        if 2 * s.finished.len() + s.started.len() != st.depth() {
            return Err("assigned count does not match started/finished".into());
        }
        if s.finished.len() + s.started.len() + s.unstarted != s.k {
            return Err("edge accounting broken".into());
        }
        let mut owner: Vec<(usize, usize)> = s.started.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        for (i, &(a, b)) in s.finished.iter().enumerate() {
            if !g.has_edge(a, b) {
                return Err(format!("finished pair {a},{b} not adjacent"));
            }
            let id = s.started.len() + i;
            owner.push((a, id));
            owner.push((b, id));
        }
        for (i, &(x, ex)) in owner.iter().enumerate() {
            for &(y, ey) in &owner[i + 1..] {
                if ex != ey && g.has_edge(x, y) {
                    return Err(format!("cross adjacency {x}-{y}"));
                }
            }
        }
        Ok(())
    }
}

pub fn solve_matching(g: &Graph, k: usize, cfg: &SolverConfig) -> Result<SolveOutcome, SolveError> {
    let h = PatternSpec::matching(k)?;
    let mut strategy = MatchingBnb::new(k, cfg.extension_rule);
    run_bnb(g, &h, &mut strategy, cfg)
}

//! Generic branch-and-bound driver shared by every pattern solver.
//!
//! The search is run with an explicit stack: frame `l` holds the candidate
//! list for the `l`-th assignment and the move currently applied from it.
//! A strategy supplies the candidate lists and its own pattern bookkeeping;
//! the driver owns the assignment stack, the domination counters and the
//! scattered-set bound.

use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::graph::{Graph, VertexSet};
use crate::heuristics::{scatter_prune, ScatterPruneState};
use crate::pattern::{PatternError, PatternSpec};
use crate::verify::{check_solution, Violation};

pub const DEFAULT_TIMEOUT_MS: u64 = 300_000;
pub const DEFAULT_CHECK_INTERVAL: u64 = 1024;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverConfig {
    pub timeout: Duration,
    pub scatter_prune: bool,
    /// Wall clock is polled every this many node expansions.
    pub check_interval: u64,
    /// Tailored solvers: allow the extension rule (ablation switch).
    pub extension_rule: bool,
    /// Generic solver: reuse folded candidate prefixes across siblings.
    pub proto_cache: bool,
    /// Run strategy invariant checks after every move.
    pub debug_checks: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            timeout: Duration::from_millis(DEFAULT_TIMEOUT_MS),
            scatter_prune: true,
            check_interval: DEFAULT_CHECK_INTERVAL,
            extension_rule: true,
            proto_cache: true,
            debug_checks: cfg!(debug_assertions),
        }
    }
}

impl SolverConfig {
    pub fn with_timeout_ms(ms: u64) -> Self {
        assert!(ms > 0, "timeout must be positive");
        Self {
            timeout: Duration::from_millis(ms),
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Found,
    NotFound,
    Timeout,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub max_depth: usize,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub status: Status,
    /// Host vertex per pattern role, present iff `status == Found`.
    pub witness: Option<Vec<usize>>,
    pub stats: SearchStats,
}

impl SolveOutcome {
    pub fn is_found(&self) -> bool {
        self.status == Status::Found
    }

    /// `Some(true/false)` for a decided instance, `None` on timeout.
    pub fn answer(&self) -> Option<bool> {
        match self.status {
            Status::Found => Some(true),
            Status::NotFound => Some(false),
            Status::Timeout => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("solver produced an invalid witness {witness:?}: {violation}")]
    InvalidWitness { witness: Vec<usize>, violation: Violation },
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error("{0}")]
    Unsupported(String),
}

/// Per-host-vertex count of assigned vertices whose closed neighborhood
/// contains it, plus one degree-order scan cursor per depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominationCounters {
    count: Vec<u32>,
    cursors: Vec<usize>,
}

impl DominationCounters {
    pub fn new(n: usize) -> Self {
        Self {
            count: vec![0; n],
            cursors: vec![0],
        }
    }

    #[inline]
    pub fn count(&self, v: usize) -> u32 {
        self.count[v]
    }

    #[inline]
    pub fn is_dominated(&self, v: usize) -> bool {
        self.count[v] > 0
    }

    pub fn on_assign(&mut self, g: &Graph, v: usize) {
        self.count[v] += 1;
        for &u in g.neighbors(v) {
            self.count[u] += 1;
        }
        let cursor = *self.cursors.last().expect("cursor stack never empty");
        self.cursors.push(cursor);
    }

    pub fn on_unassign(&mut self, g: &Graph, v: usize) {
        assert!(self.cursors.len() > 1, "unassign on empty assignment");
        assert!(self.count[v] > 0, "domination counter underflow at {v}");
        self.count[v] -= 1;
        for &u in g.neighbors(v) {
            assert!(self.count[u] > 0, "domination counter underflow at {u}");
            self.count[u] -= 1;
        }
        self.cursors.pop();
    }

    /// First vertex in degree order with count zero. The scan resumes from the
    /// cursor inherited from the parent depth, since the dominated set only
    /// grows going down the tree.
    pub fn min_degree_undominated(&mut self, g: &Graph) -> Option<usize> {
        let order = g.degree_order();
        let cursor = self.cursors.last_mut().expect("cursor stack never empty");
        while *cursor < order.len() && self.count[order[*cursor]] > 0 {
            *cursor += 1;
        }
        order.get(*cursor).copied()
    }

    /// Cursor of the current depth.
    pub fn cursor(&self) -> usize {
        *self.cursors.last().unwrap()
    }
}

/// Partial map from pattern roles to host vertices with LIFO undo.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    role_to_vertex: Vec<Option<usize>>,
    host: VertexSet,
    stack: Vec<(usize, usize)>,
}

impl Assignment {
    pub fn new(roles: usize, n: usize) -> Self {
        Self {
            role_to_vertex: vec![None; roles],
            host: VertexSet::new(n),
            stack: Vec::with_capacity(roles),
        }
    }

    pub fn assign(&mut self, role: usize, v: usize) {
        assert!(self.role_to_vertex[role].is_none(), "role {role} already assigned");
        assert!(self.host.insert(v), "vertex {v} already used");
        self.role_to_vertex[role] = Some(v);
        self.stack.push((role, v));
    }

    pub fn undo(&mut self) -> (usize, usize) {
        let (role, v) = self.stack.pop().expect("undo on empty assignment");
        self.role_to_vertex[role] = None;
        self.host.remove(v);
        (role, v)
    }

    #[inline]
    pub fn get(&self, role: usize) -> Option<usize> {
        self.role_to_vertex[role]
    }

    pub fn len(&self) -> usize {
        self.stack.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stack.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.stack.len() == self.role_to_vertex.len()
    }

    pub fn uses(&self, v: usize) -> bool {
        self.host.contains(v)
    }

    /// Host vertex per role; panics unless complete.
    pub fn to_witness(&self) -> Vec<usize> {
        self.role_to_vertex
            .iter()
            .map(|v| v.expect("assignment incomplete"))
            .collect()
    }
}

/// Mutable search state owned by one run.
#[derive(Clone)]
pub struct SearchState<'g> {
    pub graph: &'g Graph,
    pub counters: DominationCounters,
    pub scatter: Option<ScatterPruneState>,
    stack: Vec<usize>,
    in_solution: VertexSet,
}

impl fmt::Debug for SearchState<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SearchState")
            .field("stack", &self.stack)
            .field("counters", &self.counters)
            .field("scatter", &self.scatter)
            .finish()
    }
}

impl PartialEq for SearchState<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.graph, other.graph)
            && self.counters == other.counters
            && self.scatter == other.scatter
            && self.stack == other.stack
            && self.in_solution == other.in_solution
    }
}

impl<'g> SearchState<'g> {
    pub fn new(graph: &'g Graph, scatter_prune: bool) -> Self {
        Self {
            graph,
            counters: DominationCounters::new(graph.n()),
            scatter: scatter_prune.then(|| ScatterPruneState::for_graph(graph)),
            stack: Vec::new(),
            in_solution: VertexSet::new(graph.n()),
        }
    }

    pub fn assign(&mut self, v: usize) {
        assert!(self.in_solution.insert(v), "vertex {v} assigned twice");
        self.stack.push(v);
        self.counters.on_assign(self.graph, v);
        if let Some(sc) = self.scatter.as_mut() {
            sc.on_assign(self.graph, v);
        }
    }

    pub fn unassign(&mut self) -> usize {
        let v = self.stack.pop().expect("unassign on empty stack");
        self.in_solution.remove(v);
        self.counters.on_unassign(self.graph, v);
        if let Some(sc) = self.scatter.as_mut() {
            sc.on_unassign(self.graph, v);
        }
        v
    }

    /// Number of assigned host vertices.
    #[inline]
    pub fn depth(&self) -> usize {
        self.stack.len()
    }

    #[inline]
    pub fn is_assigned(&self, v: usize) -> bool {
        self.in_solution.contains(v)
    }

    pub fn assigned(&self) -> &[usize] {
        &self.stack
    }

    pub fn min_degree_undominated(&mut self) -> Option<usize> {
        self.counters.min_degree_undominated(self.graph)
    }
}

/// Pattern-specific branching: candidate generation and pattern bookkeeping.
pub trait CandidateStrategy {
    type Move: Copy + fmt::Debug;

    /// `|V(H)|`.
    fn pattern_size(&self) -> usize;

    fn vertex(&self, mv: &Self::Move) -> usize;

    /// Candidates for the empty assignment.
    fn initial_candidates(&mut self, st: &mut SearchState<'_>, out: &mut Vec<Self::Move>) {
        self.extension_candidates(st, out)
    }

    /// Candidates extending the current (incomplete) assignment.
    fn extension_candidates(&mut self, st: &mut SearchState<'_>, out: &mut Vec<Self::Move>);

    /// Called after the driver assigned `vertex(mv)`.
    fn apply(&mut self, st: &SearchState<'_>, mv: Self::Move);

    /// Called before the driver unassigns `vertex(mv)`.
    fn undo(&mut self, st: &SearchState<'_>, mv: Self::Move);

    /// Strategy-specific pruning on top of the scattered-set bound.
    fn bound(&self, _st: &SearchState<'_>) -> bool {
        false
    }

    /// Host vertex per pattern role for a complete assignment.
    fn witness(&self, st: &SearchState<'_>) -> Vec<usize>;

    /// Structural invariants, checked after every move in debug builds.
    fn check_invariants(&self, _st: &SearchState<'_>) -> Result<(), String> {
        Ok(())
    }
}

struct Frame<M> {
    cands: Vec<M>,
    next: usize,
    applied: Option<M>,
}

/// Run a strategy on a fresh search state.
pub fn run_bnb<S: CandidateStrategy>(
    g: &Graph,
    h: &PatternSpec,
    strategy: &mut S,
    cfg: &SolverConfig,
) -> Result<SolveOutcome, SolveError> {
    let mut state = SearchState::new(g, cfg.scatter_prune);
    drive(&mut state, h, strategy, cfg)
}

/// Run a strategy on an existing state. On return every move has been undone,
/// so `state` is back to what it was on entry.
pub fn drive<S: CandidateStrategy>(
    state: &mut SearchState<'_>,
    h: &PatternSpec,
    strategy: &mut S,
    cfg: &SolverConfig,
) -> Result<SolveOutcome, SolveError> {
    let start = Instant::now();
    let g = state.graph;
    let k = strategy.pattern_size();
    let base_depth = state.depth();
    let interval = cfg.check_interval.max(1);
    let mut stats = SearchStats::default();
    let mut pool: Vec<Vec<S::Move>> = Vec::new();
    let mut frames: Vec<Frame<S::Move>> = Vec::with_capacity(k + 1);
    let mut witness = None;

    let mut first = Vec::new();
    strategy.initial_candidates(state, &mut first);
    frames.push(Frame {
        cands: first,
        next: 0,
        applied: None,
    });

    let status = loop {
        let Some(top) = frames.last_mut() else {
            break Status::NotFound;
        };
        if let Some(mv) = top.applied.take() {
            strategy.undo(state, mv);
            state.unassign();
        }
        if top.next >= top.cands.len() {
            let done = frames.pop().expect("frame present");
            pool.push(done.cands);
            continue;
        }
        let mv = top.cands[top.next];
        top.next += 1;
        state.assign(strategy.vertex(&mv));
        strategy.apply(state, mv);
        top.applied = Some(mv);

        stats.nodes += 1;
        let depth = state.depth() - base_depth;
        stats.max_depth = stats.max_depth.max(depth);
        if cfg.debug_checks {
            if let Err(msg) = strategy.check_invariants(state) {
                panic!("strategy invariant violated after {mv:?}: {msg}");
            }
        }
        if stats.nodes % interval == 0 && start.elapsed() >= cfg.timeout {
            break Status::Timeout;
        }

        if depth == k {
            if g.dominates(state.assigned().iter().copied()) {
                witness = Some(strategy.witness(state));
                break Status::Found;
            }
            continue;
        }
        let pruned = state
            .scatter
            .as_ref()
            .is_some_and(|sc| scatter_prune(sc.uncovered_count(), depth, k));
        if pruned || strategy.bound(state) {
            continue;
        }
        let mut cands = pool.pop().unwrap_or_default();
        cands.clear();
        strategy.extension_candidates(state, &mut cands);
        frames.push(Frame {
            cands,
            next: 0,
            applied: None,
        });
    };

    while let Some(mut frame) = frames.pop() {
        if let Some(mv) = frame.applied.take() {
            strategy.undo(state, mv);
            state.unassign();
        }
    }
    stats.elapsed = start.elapsed();

    if let Some(w) = &witness {
        if let Err(violation) = check_solution(g, h, w) {
            return Err(SolveError::InvalidWitness {
                witness: w.clone(),
                violation,
            });
        }
    }
    Ok(SolveOutcome {
        status,
        witness,
        stats,
    })
}

/// Sorted-array intersection.
pub(crate) fn intersect_sorted(a: &[usize], b: &[usize], out: &mut Vec<usize>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
}

/// Sorted-array difference `a \ b`.
pub(crate) fn difference_sorted(a: &[usize], b: &[usize], out: &mut Vec<usize>) {
    out.clear();
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j >= b.len() || b[j] != x {
            out.push(x);
        }
    }
}

/// Sorted-array union.
pub(crate) fn union_sorted(a: &[usize], b: &[usize], out: &mut Vec<usize>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else if i >= a.len() || b[j] < a[i] {
            out.push(b[j]);
            j += 1;
        } else {
            out.push(a[i]);
            i += 1;
            j += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn counters_follow_closed_neighborhoods() {
        let g = cycle(6);
        let mut c = DominationCounters::new(6);
        c.on_assign(&g, 0);
        assert_eq!((0..6).map(|v| c.count(v)).collect::<Vec<_>>(), vec![1, 1, 0, 0, 0, 1]);
        c.on_assign(&g, 1);
        assert_eq!((0..6).map(|v| c.count(v)).collect::<Vec<_>>(), vec![2, 2, 1, 0, 0, 1]);
        c.on_unassign(&g, 1);
        c.on_unassign(&g, 0);
        assert_eq!(c, DominationCounters::new(6));
    }

    #[test]
    fn min_degree_undominated_examples() {
        let star = Graph::from_edges(5, (1..5).map(|i| (0, i))).unwrap();
        let mut c = DominationCounters::new(5);
        assert_eq!(c.min_degree_undominated(&star), Some(1));

        let g = cycle(6);
        let mut c = DominationCounters::new(6);
        for v in [0, 1, 3, 4] {
            c.on_assign(&g, v);
        }
        assert_eq!(c.min_degree_undominated(&g), None);

        let p7 = Graph::from_edges(7, (0..6).map(|i| (i, i + 1))).unwrap();
        let mut c = DominationCounters::new(7);
        c.on_assign(&p7, 3);
        assert_eq!(c.min_degree_undominated(&p7), Some(0));
    }

    #[test]
    fn cursors_are_monotone_in_depth() {
        let p7 = Graph::from_edges(7, (0..6).map(|i| (i, i + 1))).unwrap();
        let mut c = DominationCounters::new(7);
        assert_eq!(c.min_degree_undominated(&p7), Some(0));
        let d0 = c.cursor();
        c.on_assign(&p7, 1);
        assert_eq!(c.min_degree_undominated(&p7), Some(6));
        let d1 = c.cursor();
        assert!(d1 >= d0);
        c.on_assign(&p7, 5);
        assert_eq!(c.min_degree_undominated(&p7), Some(3));
        assert!(c.cursor() >= d1);
        c.on_unassign(&p7, 5);
        assert_eq!(c.cursor(), d1);
    }

    #[test]
    fn assignment_undo() {
        let mut a = Assignment::new(3, 5);
        a.assign(1, 4);
        a.assign(0, 2);
        assert_eq!(a.get(1), Some(4));
        assert!(a.uses(2));
        assert_eq!(a.undo(), (0, 2));
        assert!(!a.uses(2));
        assert_eq!(a.len(), 1);
    }

    #[test]
    fn sorted_set_ops() {
        let mut out = Vec::new();
        intersect_sorted(&[1, 3, 5, 7], &[0, 3, 4, 7, 9], &mut out);
        assert_eq!(out, vec![3, 7]);
        difference_sorted(&[1, 3, 5, 7], &[0, 3, 4, 7, 9], &mut out);
        assert_eq!(out, vec![1, 5]);
        union_sorted(&[1, 3, 5], &[0, 3, 9], &mut out);
        assert_eq!(out, vec![0, 1, 3, 5, 9]);
    }
}

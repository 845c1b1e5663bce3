//! Generic solver for arbitrary patterns.
//!
//! The first assignment pins an orbit representative to a vertex of
//! `N[v_min]`. After that, pattern vertices are assigned along a fixed order
//! and the candidates for the next one are the common neighbors of its
//! assigned pattern neighbors minus the neighbors of its assigned pattern
//! non-neighbors, computed by merging sorted adjacency arrays.

use std::collections::VecDeque;

use crate::bnb::{
    difference_sorted, intersect_sorted, run_bnb, Assignment, CandidateStrategy, SearchState,
    SolveError, SolveOutcome, SolverConfig,
};
use crate::graph::Graph;
use crate::pattern::{PatternError, PatternGraph, PatternSpec, MAX_PATTERN_VERTICES};

/// Assignment order of pattern vertices starting from one orbit representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtoOrdering {
    /// Role at each position; `order[0]` is the representative.
    pub order: Vec<usize>,
    pub position: Vec<usize>,
    /// Positions `< l` holding pattern neighbors of `order[l]`.
    pub earlier_neighbors: Vec<Vec<usize>>,
    /// Positions `< l` holding pattern non-neighbors of `order[l]`.
    pub earlier_non_neighbors: Vec<Vec<usize>>,
}

impl ProtoOrdering {
    /// BFS from `root`; remaining components follow by smallest vertex id.
    pub fn bfs(h: &PatternGraph, root: usize) -> Self {
        let n = h.n();
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        let starts = std::iter::once(root).chain(0..n);
        for s in starts {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(p) = queue.pop_front() {
                order.push(p);
                for q in h.neighbors(p) {
                    if !seen[q] {
                        seen[q] = true;
                        queue.push_back(q);
                    }
                }
            }
        }
        let mut position = vec![0; n];
        for (i, &p) in order.iter().enumerate() {
            position[p] = i;
        }
        let (earlier_neighbors, earlier_non_neighbors) = (0..n)
            .map(|l| (0..l).partition(|&i| h.has_edge(order[l], order[i])))
            .unzip();
        Self {
            order,
            position,
            earlier_neighbors,
            earlier_non_neighbors,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProtoMove {
    pub role: usize,
    pub vertex: usize,
}

pub struct ProtoBnb {
    h: PatternGraph,
    representatives: Vec<usize>,
    /// Ordering per role; only representatives are populated.
    orderings: Vec<Option<ProtoOrdering>>,
    active: Option<usize>,
    assignment: Assignment,
    use_cache: bool,
    /// `cache[l]`: fold over positions `0..l-1` for the candidates of position `l`.
    cache: Vec<Vec<usize>>,
    cache_valid: Vec<bool>,
    scratch: Vec<usize>,
}

impl ProtoBnb {
    pub fn new(g: &Graph, h: &PatternSpec, use_cache: bool) -> Result<Self, PatternError> {
        let k = h.vertex_count();
        if k > MAX_PATTERN_VERTICES {
            return Err(PatternError::TooLarge { n: k });
        }
        let h = h.to_graph()?;
        let orbits = h.orbits();
        let mut orderings = vec![None; k];
        for &r in &orbits.representatives {
            orderings[r] = Some(ProtoOrdering::bfs(&h, r));
        }
        Ok(Self {
            representatives: orbits.representatives,
            orderings,
            active: None,
            assignment: Assignment::new(k, g.n()),
            use_cache,
            cache: vec![Vec::new(); k + 1],
            cache_valid: vec![false; k + 1],
            scratch: Vec::new(),
            h,
        })
    }

    pub fn ordering(&self, representative: usize) -> Option<&ProtoOrdering> {
        self.orderings[representative].as_ref()
    }

    fn active_ordering(&self) -> &ProtoOrdering {
        self.orderings[self.active.expect("ordering fixed after first move")]
            .as_ref()
            .expect("active role is a representative")
    }

    /// Apply the constraint of the role at `pos` on top of `acc`.
    fn fold_position(
        g: &Graph,
        ord: &ProtoOrdering,
        assignment: &Assignment,
        target: usize,
        pos: usize,
        acc: &mut Vec<usize>,
        scratch: &mut Vec<usize>,
    ) {
        let host = assignment.get(ord.order[pos]).expect("earlier position assigned");
        if ord.earlier_neighbors[target].contains(&pos) {
            intersect_sorted(acc, g.neighbors(host), scratch);
        } else {
            difference_sorted(acc, g.neighbors(host), scratch);
        }
        std::mem::swap(acc, scratch);
    }

    /// Fold over positions `0..upto` for the role at position `target`.
    fn fold_prefix(&mut self, g: &Graph, target: usize, upto: usize) -> Vec<usize> {
        let ord = self.orderings[self.active.expect("ordering fixed after first move")]
            .as_ref()
            .expect("active role is a representative");
        let first_nbr = ord.earlier_neighbors[target].iter().copied().find(|&p| p < upto);
        let mut acc: Vec<usize> = match first_nbr {
            Some(pos) => g.neighbors(self.assignment.get(ord.order[pos]).unwrap()).to_vec(),
            None => (0..g.n()).collect(),
        };
        for pos in (0..upto).filter(|&p| Some(p) != first_nbr) {
            Self::fold_position(g, ord, &self.assignment, target, pos, &mut acc, &mut self.scratch);
        }
        acc
    }
}

impl CandidateStrategy for ProtoBnb {
    type Move = ProtoMove;

    fn pattern_size(&self) -> usize {
        self.h.n()
    }

    fn vertex(&self, mv: &ProtoMove) -> usize {
        mv.vertex
    }

    fn initial_candidates(&mut self, st: &mut SearchState<'_>, out: &mut Vec<ProtoMove>) {
        let g = st.graph;
        let start = g.closed_neighborhood(g.min_degree_vertex());
        for &role in &self.representatives {
            out.extend(start.iter().map(|&vertex| ProtoMove { role, vertex }));
        }
    }

    fn extension_candidates(&mut self, st: &mut SearchState<'_>, out: &mut Vec<ProtoMove>) {
        let g = st.graph;
        let target = self.assignment.len();
        let prefix = target - 1;
        let mut acc = if self.use_cache {
            if !self.cache_valid[target] {
                self.cache[target] = self.fold_prefix(g, target, prefix);
                self.cache_valid[target] = true;
            }
            self.cache[target].clone()
        } else {
            self.fold_prefix(g, target, prefix)
        };
        let mut scratch = std::mem::take(&mut self.scratch);
        Self::fold_position(
            g,
            self.active_ordering(),
            &self.assignment,
            target,
            prefix,
            &mut acc,
            &mut scratch,
        );
        self.scratch = scratch;
        let role = self.active_ordering().order[target];
        out.extend(
            acc.into_iter()
                .filter(|&v| !st.is_assigned(v))
                .map(|vertex| ProtoMove { role, vertex }),
        );
    }

    fn apply(&mut self, _st: &SearchState<'_>, mv: ProtoMove) {
        if self.assignment.is_empty() {
            self.active = Some(mv.role);
        }
        debug_assert_eq!(self.active_ordering().order[self.assignment.len()], mv.role);
        self.assignment.assign(mv.role, mv.vertex);
        let pos = self.assignment.len() - 1;
        for valid in self.cache_valid.iter_mut().skip(pos + 2) {
            *valid = false;
        }
    }

    fn undo(&mut self, _st: &SearchState<'_>, mv: ProtoMove) {
        let (role, vertex) = self.assignment.undo();
        debug_assert_eq!((role, vertex), (mv.role, mv.vertex));
        if self.assignment.is_empty() {
            self.active = None;
        }
    }

    fn witness(&self, _st: &SearchState<'_>) -> Vec<usize> {
        self.assignment.to_witness()
    }

    fn check_invariants(&self, st: &SearchState<'_>) -> Result<(), String> {
        let g = st.graph;
        let k = self.h.n();
        for p in 0..k {
            for q in p + 1..k {
                if let (Some(a), Some(b)) = (self.assignment.get(p), self.assignment.get(q)) {
                    if self.h.has_edge(p, q) != g.has_edge(a, b) {
                        return Err(format!("roles {p},{q} -> {a},{b} break inducedness"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Solve any pattern with at most [`MAX_PATTERN_VERTICES`] vertices.
pub fn solve_proto(g: &Graph, h: &PatternSpec, cfg: &SolverConfig) -> Result<SolveOutcome, SolveError> {
    let mut strategy = ProtoBnb::new(g, h, cfg.proto_cache)?;
    run_bnb(g, h, &mut strategy, cfg)
}

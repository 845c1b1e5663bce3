//! Reference enumerator: list every induced occurrence of the pattern and test
//! each one for domination.
//!
//! This is plain backtracking over roles `0..k` in order, trying host vertices
//! in ascending order. It shares no pruning logic with the branch-and-bound
//! solvers so it can serve as ground truth for them.

use std::ops::ControlFlow;
use std::time::Instant;

use crate::bnb::{SearchStats, SolveError, SolveOutcome, SolverConfig, Status};
use crate::graph::{Graph, VertexSet};
use crate::pattern::{PatternError, PatternGraph, PatternSpec};
use crate::verify::check_solution;

enum Halt {
    Visitor,
    Timeout,
}

struct Enumerator<'a> {
    g: &'a Graph,
    h: PatternGraph,
    map: Vec<usize>,
    used: VertexSet,
    nodes: u64,
    deadline: Option<(Instant, std::time::Duration, u64)>,
}

impl<'a> Enumerator<'a> {
    fn new(g: &'a Graph, h: &PatternSpec) -> Result<Self, PatternError> {
        let h = h.to_graph()?;
        Ok(Self {
            map: Vec::with_capacity(h.n()),
            used: VertexSet::new(g.n()),
            g,
            h,
            nodes: 0,
            deadline: None,
        })
    }

    fn fits(&self, p: usize, v: usize) -> bool {
        self.map
            .iter()
            .enumerate()
            .all(|(q, &u)| self.h.has_edge(p, q) == self.g.has_edge(u, v))
    }

    fn search<F>(&mut self, visit: &mut F) -> Result<(), Halt>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let p = self.map.len();
        if p == self.h.n() {
            return match visit(&self.map) {
                ControlFlow::Continue(()) => Ok(()),
                ControlFlow::Break(()) => Err(Halt::Visitor),
            };
        }
        for v in 0..self.g.n() {
            if self.used.contains(v) || !self.fits(p, v) {
                continue;
            }
            self.nodes += 1;
            if let Some((start, limit, every)) = self.deadline {
                if self.nodes.is_multiple_of(every) && start.elapsed() >= limit {
                    return Err(Halt::Timeout);
                }
            }
            self.map.push(v);
            self.used.insert(v);
            let r = self.search(visit);
            self.used.remove(v);
            self.map.pop();
            r?;
        }
        Ok(())
    }
}

/// Visit every injective induced embedding (host vertex per role).
pub fn for_each_embedding<F>(g: &Graph, h: &PatternSpec, mut visit: F) -> Result<(), PatternError>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let mut e = Enumerator::new(g, h)?;
    let _ = e.search(&mut visit);
    Ok(())
}

/// Visit one embedding per occurrence: the one whose role tuple is
/// lexicographically smallest among its images under pattern automorphisms.
pub fn for_each_occurrence<F>(g: &Graph, h: &PatternSpec, mut visit: F) -> Result<(), PatternError>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let auts: Vec<Vec<usize>> = h.to_graph()?.automorphisms().into_iter().skip(1).collect();
    for_each_embedding(g, h, |map| {
        if is_canonical(map, &auts) {
            visit(map)
        } else {
            ControlFlow::Continue(())
        }
    })
}

fn is_canonical(map: &[usize], auts: &[Vec<usize>]) -> bool {
    auts.iter().all(|a| {
        let other = a.iter().map(|&p| map[p]);
        map.iter().copied().cmp(other) != std::cmp::Ordering::Greater
    })
}

/// All occurrences up to pattern automorphism, in enumeration order.
pub fn enumerate_occurrences(g: &Graph, h: &PatternSpec) -> Result<Vec<Vec<usize>>, PatternError> {
    let mut out = Vec::new();
    for_each_occurrence(g, h, |m| {
        out.push(m.to_vec());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

pub fn count_embeddings(g: &Graph, h: &PatternSpec) -> Result<u64, PatternError> {
    let mut n = 0;
    for_each_embedding(g, h, |_| {
        n += 1;
        ControlFlow::Continue(())
    })?;
    Ok(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OccurrenceCount {
    pub occurrences: u64,
    pub dominating: u64,
}

pub fn count_occurrences(g: &Graph, h: &PatternSpec) -> Result<OccurrenceCount, PatternError> {
    let mut c = OccurrenceCount {
        occurrences: 0,
        dominating: 0,
    };
    for_each_occurrence(g, h, |m| {
        c.occurrences += 1;
        if g.dominates(m.iter().copied()) {
            c.dominating += 1;
        }
        ControlFlow::Continue(())
    })?;
    Ok(c)
}

/// First dominating occurrence in enumeration order.
///
/// The canonical filter is skipped: the first dominating raw embedding is
/// already the smallest of its class, since the whole class shares one image.
pub fn solve_oracle(g: &Graph, h: &PatternSpec, cfg: &SolverConfig) -> Result<SolveOutcome, SolveError> {
    let start = Instant::now();
    let mut e = Enumerator::new(g, h)?;
    e.deadline = Some((start, cfg.timeout, cfg.check_interval.max(1)));
    let mut witness = None;
    let status = match e.search(&mut |m: &[usize]| {
        if g.dominates(m.iter().copied()) {
            witness = Some(m.to_vec());
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    }) {
        Ok(()) => Status::NotFound,
        Err(Halt::Visitor) => Status::Found,
        Err(Halt::Timeout) => Status::Timeout,
    };
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
        stats: SearchStats {
            nodes: e.nodes,
            max_depth: h.vertex_count(),
            elapsed: start.elapsed(),
        },
    })
}

//! Independent witness checker. Every witness any solver reports must pass it.

use thiserror::Error;

use crate::graph::Graph;
use crate::pattern::PatternSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("witness has {got} entries, pattern has {expected} vertices")]
    WrongSize { expected: usize, got: usize },
    #[error("role {role} mapped to vertex {vertex}, host has {n} vertices")]
    OutOfRange { role: usize, vertex: usize, n: usize },
    #[error("roles {0} and {1} share a host vertex")]
    NotInjective(usize, usize),
    #[error("pattern edge {{{0},{1}}} maps to a host non-edge")]
    MissingEdge(usize, usize),
    #[error("pattern non-edge {{{0},{1}}} maps to a host edge")]
    ExtraEdge(usize, usize),
    #[error("host vertex {0} is not dominated")]
    NotDominating(usize),
}

/// Check that `map` (host vertex per pattern role) is an induced copy of `h`
/// whose image dominates `g`.
pub fn check_solution(g: &Graph, h: &PatternSpec, map: &[usize]) -> Result<(), Violation> {
    check_embedding(g, h, map)?;
    match g.first_undominated(map.iter().copied()) {
        Some(v) => Err(Violation::NotDominating(v)),
        None => Ok(()),
    }
}

/// The induced-embedding part of [`check_solution`] without domination.
pub fn check_embedding(g: &Graph, h: &PatternSpec, map: &[usize]) -> Result<(), Violation> {
    let k = h.vertex_count();
    if map.len() != k {
        return Err(Violation::WrongSize {
            expected: k,
            got: map.len(),
        });
    }
    for (role, &vertex) in map.iter().enumerate() {
        if vertex >= g.n() {
            return Err(Violation::OutOfRange {
                role,
                vertex,
                n: g.n(),
            });
        }
    }
    for p in 0..k {
        for q in p + 1..k {
            if map[p] == map[q] {
                return Err(Violation::NotInjective(p, q));
            }
        }
    }
    for p in 0..k {
        for q in p + 1..k {
            match (h.has_edge(p, q), g.has_edge(map[p], map[q])) {
                (true, false) => return Err(Violation::MissingEdge(p, q)),
                (false, true) => return Err(Violation::ExtraEdge(p, q)),
                _ => {}
            }
        }
    }
    Ok(())
}

pub fn verify_solution(g: &Graph, h: &PatternSpec, map: &[usize]) -> bool {
    check_solution(g, h, map).is_ok()
}

//! Encodings of a Dominating H-Pattern instance as CNF and as a 0/1 integer
//! program, plus small checkers that need no external solver.

pub mod dpll;
pub mod lp;
pub mod sat;

pub use dpll::{mini_dpll, DpllResult};
pub use lp::{encode_ilp, lp_feasible_by_role_enumeration, LpModel, LpRow, Sense};
pub use sat::{decode_model, encode_sat, eval_cnf, AmoMode, CnfFormula};

/// Primary variable `x_{v,p}` ("role `p` sits on host vertex `v`") has the
/// 1-based index `p * n + v + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarMap {
    pub n: usize,
    pub k: usize,
}

impl VarMap {
    pub fn new(n: usize, k: usize) -> Self {
        Self { n, k }
    }

    #[inline]
    pub fn index(&self, v: usize, p: usize) -> usize {
        debug_assert!(v < self.n && p < self.k);
        p * self.n + v + 1
    }

    /// `(v, p)` for a primary index, `None` for auxiliaries.
    pub fn decode(&self, idx: usize) -> Option<(usize, usize)> {
        if idx == 0 || idx > self.primary_count() {
            return None;
        }
        let i = idx - 1;
        Some((i % self.n, i / self.n))
    }

    pub fn primary_count(&self) -> usize {
        self.n * self.k
    }

    /// Primary assignment (index 0 is variable 1) for a role map.
    pub fn assignment_for(&self, witness: &[usize]) -> Vec<bool> {
        let mut x = vec![false; self.primary_count()];
        for (p, &v) in witness.iter().enumerate() {
            x[self.index(v, p) - 1] = true;
        }
        x
    }
}

/// Ordered pairs `((u, p), (v, q))` that may not both be chosen because the
/// host pair disagrees with the pattern pair. For each role pair `p < q` and
/// each offending host pair `u < v`, both orientations are listed.
pub(crate) fn forbidden_pairs(
    g: &crate::graph::Graph,
    h: &crate::pattern::PatternSpec,
) -> Vec<((usize, usize), (usize, usize))> {
    let k = h.vertex_count();
    let n = g.n();
    let mut out = Vec::new();
    for p in 0..k {
        for q in p + 1..k {
            let want = h.has_edge(p, q);
            for u in 0..n {
                for v in u + 1..n {
                    if g.has_edge(u, v) != want {
                        out.push(((u, p), (v, q)));
                        out.push(((v, p), (u, q)));
                    }
                }
            }
        }
    }
    out
}

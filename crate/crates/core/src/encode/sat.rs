//! CNF encoding with pairwise or ladder (sequential) at-most-one constraints.

use std::fmt::Write as _;

use crate::graph::Graph;
use crate::pattern::PatternSpec;

use super::{forbidden_pairs, VarMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmoMode {
    Pairwise,
    Ladder,
}

/// Auxiliaries `first_aux .. first_aux + vars.len() - 1` of one ladder; aux
/// `i` is true iff one of `vars[..=i]` is.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderGroup {
    pub vars: Vec<usize>,
    pub first_aux: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i64>>,
    pub ladders: Vec<LadderGroup>,
}

impl CnfFormula {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            clauses: Vec::new(),
            ladders: Vec::new(),
        }
    }

    fn at_most_one(&mut self, vars: &[usize], mode: AmoMode) {
        let t = vars.len();
        if t < 2 {
            return;
        }
        match mode {
            AmoMode::Pairwise => {
                for i in 0..t {
                    for j in i + 1..t {
                        self.clauses.push(vec![-(vars[i] as i64), -(vars[j] as i64)]);
                    }
                }
            }
            AmoMode::Ladder => {
                let first_aux = self.num_vars + 1;
                self.num_vars += t - 1;
                let x = |i: usize| vars[i] as i64;
                let s = |i: usize| (first_aux + i) as i64;
                for i in 0..t {
                    if i + 1 < t {
                        self.clauses.push(vec![-x(i), s(i)]);
                    }
                    if i > 0 && i + 1 < t {
                        self.clauses.push(vec![-s(i - 1), s(i)]);
                    }
                    if i > 0 {
                        self.clauses.push(vec![-x(i), -s(i - 1)]);
                    }
                }
                self.ladders.push(LadderGroup {
                    vars: vars.to_vec(),
                    first_aux,
                });
            }
        }
    }

    /// Extend a primary assignment with the auxiliary values it forces.
    pub fn complete_assignment(&self, primary: &[bool]) -> Vec<bool> {
        let mut x = primary.to_vec();
        x.resize(self.num_vars, false);
        for lg in &self.ladders {
            let mut seen = false;
            for (i, &v) in lg.vars[..lg.vars.len() - 1].iter().enumerate() {
                seen |= x[v - 1];
                x[lg.first_aux + i - 1] = seen;
            }
        }
        x
    }

    /// DIMACS text. Comment lines `c x <idx> <v> <p>` record the primaries.
    pub fn to_dimacs(&self, map: &VarMap) -> String {
        let mut s = String::new();
        for p in 0..map.k {
            for v in 0..map.n {
                let _ = writeln!(s, "c x {} {} {}", map.index(v, p), v, p);
            }
        }
        let _ = writeln!(s, "p cnf {} {}", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for lit in c {
                let _ = write!(s, "{lit} ");
            }
            s.push_str("0\n");
        }
        s
    }
}

pub fn encode_sat(g: &Graph, h: &PatternSpec, mode: AmoMode) -> (CnfFormula, VarMap) {
    let n = g.n();
    let k = h.vertex_count();
    let map = VarMap::new(n, k);
    let mut f = CnfFormula::new(map.primary_count());

    for p in 0..k {
        let role: Vec<usize> = (0..n).map(|v| map.index(v, p)).collect();
        f.at_most_one(&role, mode);
        f.clauses.push(role.iter().map(|&x| x as i64).collect());
    }
    for v in 0..n {
        let clause = (0..k)
            .flat_map(|p| g.closed_neighborhood(v).into_iter().map(move |u| (u, p)))
            .map(|(u, p)| map.index(u, p) as i64)
            .collect();
        f.clauses.push(clause);
    }
    for ((u, p), (v, q)) in forbidden_pairs(g, h) {
        f.clauses
            .push(vec![-(map.index(u, p) as i64), -(map.index(v, q) as i64)]);
    }
    for v in 0..n {
        let host: Vec<usize> = (0..k).map(|p| map.index(v, p)).collect();
        f.at_most_one(&host, mode);
    }
    (f, map)
}

/// `assignment[i]` is the value of variable `i + 1`.
pub fn eval_cnf(f: &CnfFormula, assignment: &[bool]) -> bool {
    assert!(assignment.len() >= f.num_vars, "assignment must be total");
    f.clauses.iter().all(|c| {
        c.iter().any(|&lit| {
            let val = assignment[lit.unsigned_abs() as usize - 1];
            if lit > 0 {
                val
            } else {
                !val
            }
        })
    })
}

/// Role map from a model, if every role has exactly one true primary.
pub fn decode_model(map: &VarMap, model: &[bool]) -> Option<Vec<usize>> {
    (0..map.k)
        .map(|p| {
            let mut chosen = (0..map.n).filter(|&v| model[map.index(v, p) - 1]);
            let v = chosen.next()?;
            chosen.next().is_none().then_some(v)
        })
        .collect()
}

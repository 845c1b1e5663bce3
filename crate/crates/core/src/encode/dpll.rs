//! Small DPLL solver: two watched literals, first-unassigned branching trying
//! `true` first, chronological backtracking. Good enough to cross-check the
//! encodings on small instances.

use super::sat::CnfFormula;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DpllResult {
    /// `model[i]` is the value of variable `i + 1`.
    Sat(Vec<bool>),
    Unsat,
    Unknown,
}

const UNSET: i8 = 0;

#[inline]
fn code(lit: i64) -> usize {
    let v = lit.unsigned_abs() as usize;
    2 * v + usize::from(lit < 0)
}

struct Solver {
    clauses: Vec<Vec<i64>>,
    watches: Vec<Vec<usize>>,
    value: Vec<i8>,
    trail: Vec<i64>,
    qhead: usize,
}

impl Solver {
    fn lit_value(&self, lit: i64) -> i8 {
        let v = self.value[lit.unsigned_abs() as usize];
        if lit < 0 {
            -v
        } else {
            v
        }
    }

    fn assign(&mut self, lit: i64) {
        self.value[lit.unsigned_abs() as usize] = if lit > 0 { 1 } else { -1 };
        self.trail.push(lit);
    }

    /// Returns false on conflict.
    fn propagate(&mut self) -> bool {
        while self.qhead < self.trail.len() {
            let falsified = -self.trail[self.qhead];
            self.qhead += 1;
            let fc = code(falsified);
            let mut ws = std::mem::take(&mut self.watches[fc]);
            let mut i = 0;
            let mut conflict = false;
            while i < ws.len() {
                let ci = ws[i];
                let clause = &mut self.clauses[ci];
                if clause[0] == falsified {
                    clause.swap(0, 1);
                }
                let other = clause[0];
                let other_val = {
                    let v = self.value[other.unsigned_abs() as usize];
                    if other < 0 {
                        -v
                    } else {
                        v
                    }
                };
                if other_val == 1 {
                    i += 1;
                    continue;
                }
                let mut moved = false;
                for j in 2..clause.len() {
                    let l = clause[j];
                    let lv = self.value[l.unsigned_abs() as usize];
                    let lv = if l < 0 { -lv } else { lv };
                    if lv != -1 {
                        clause.swap(1, j);
                        self.watches[code(clause[1])].push(ci);
                        ws.swap_remove(i);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                if other_val == -1 {
                    conflict = true;
                    break;
                }
                self.assign(other);
                i += 1;
            }
            self.watches[fc].append(&mut ws);
            if conflict {
                return false;
            }
        }
        true
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let lit = self.trail.pop().unwrap();
            self.value[lit.unsigned_abs() as usize] = UNSET;
        }
        self.qhead = len;
    }
}

pub fn mini_dpll(f: &CnfFormula, budget: u64) -> DpllResult {
    assert!(budget > 0, "budget must be positive");
    let nv = f.num_vars;
    let mut s = Solver {
        clauses: Vec::new(),
        watches: vec![Vec::new(); 2 * nv + 2],
        value: vec![UNSET; nv + 1],
        trail: Vec::new(),
        qhead: 0,
    };
    let mut units = Vec::new();
    for c in &f.clauses {
        let mut c = c.clone();
        c.sort_unstable();
        c.dedup();
        if c.iter().any(|&l| c.contains(&-l)) {
            // tautology
            continue;
        }
        match c.len() {
            0 => return DpllResult::Unsat,
            1 => units.push(c[0]),
            _ => {
                let ci = s.clauses.len();
                s.watches[code(c[0])].push(ci);
                s.watches[code(c[1])].push(ci);
                s.clauses.push(c);
            }
        }
    }
    for u in units {
        match s.lit_value(u) {
            1 => {}
            -1 => return DpllResult::Unsat,
            _ => s.assign(u),
        }
    }

    // (trail length before the decision, decision literal, already flipped)
    let mut decisions: Vec<(usize, i64, bool)> = Vec::new();
    let mut nodes = 0u64;
    let mut next_var = 1;
    loop {
        if !s.propagate() {
            loop {
                let Some((len, lit, flipped)) = decisions.pop() else {
                    return DpllResult::Unsat;
                };
                s.undo_to(len);
                next_var = next_var.min(lit.unsigned_abs() as usize);
                if !flipped {
                    decisions.push((len, -lit, true));
                    s.assign(-lit);
                    break;
                }
            }
            continue;
        }
        while next_var <= nv && s.value[next_var] != UNSET {
            next_var += 1;
        }
        if next_var > nv {
            return DpllResult::Sat(s.value[1..].iter().map(|&v| v == 1).collect());
        }
        nodes += 1;
        if nodes > budget {
            return DpllResult::Unknown;
        }
        decisions.push((s.trail.len(), next_var as i64, false));
        s.assign(next_var as i64);
    }
}

//! 0/1 integer program in CPLEX LP text format.

use std::fmt::Write as _;

use crate::graph::Graph;
use crate::pattern::PatternSpec;

use super::{forbidden_pairs, VarMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }

    fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Sense::Le => lhs <= rhs,
            Sense::Ge => lhs >= rhs,
            Sense::Eq => lhs == rhs,
        }
    }
}

/// Terms are `(coefficient, 1-based variable index)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpRow {
    pub name: String,
    pub terms: Vec<(i64, usize)>,
    pub sense: Sense,
    pub rhs: i64,
}

impl LpRow {
    fn unit(name: String, vars: impl IntoIterator<Item = usize>, sense: Sense, rhs: i64) -> Self {
        Self {
            name,
            terms: vars.into_iter().map(|x| (1, x)).collect(),
            sense,
            rhs,
        }
    }

    pub fn activity(&self, x: &[bool]) -> i64 {
        self.terms.iter().filter(|&&(_, v)| x[v - 1]).map(|&(c, _)| c).sum()
    }

    pub fn satisfied(&self, x: &[bool]) -> bool {
        self.sense.holds(self.activity(x), self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpModel {
    pub map: VarMap,
    pub rows: Vec<LpRow>,
}

fn var_name(map: &VarMap, idx: usize) -> String {
    let (v, p) = map.decode(idx).expect("primary variable");
    format!("x{v}_{p}")
}

const TERMS_PER_LINE: usize = 8;

impl LpModel {
    pub fn rows_with_prefix(&self, prefix: char) -> usize {
        self.rows.iter().filter(|r| r.name.starts_with(prefix)).count()
    }

    /// Names of the rows `x` violates.
    pub fn violated(&self, x: &[bool]) -> Vec<&str> {
        self.rows
            .iter()
            .filter(|r| !r.satisfied(x))
            .map(|r| r.name.as_str())
            .collect()
    }

    pub fn to_lp_string(&self) -> String {
        let map = &self.map;
        let mut s = String::new();
        s.push_str("Minimize\n");
        let first = if map.primary_count() > 0 {
            var_name(map, 1)
        } else {
            String::from("x")
        };
        let _ = writeln!(s, " obj: 0 {first}");
        s.push_str("Subject To\n");
        for row in &self.rows {
            let _ = write!(s, " {}:", row.name);
            for (i, &(c, v)) in row.terms.iter().enumerate() {
                if i > 0 && i % TERMS_PER_LINE == 0 {
                    s.push_str("\n  ");
                }
                match (i, c < 0) {
                    (0, false) => s.push(' '),
                    (0, true) => s.push_str(" -"),
                    (_, false) => s.push_str(" + "),
                    (_, true) => s.push_str(" - "),
                }
                if c.abs() != 1 {
                    let _ = write!(s, "{} ", c.abs());
                }
                s.push_str(&var_name(map, v));
            }
            let _ = writeln!(s, " {} {}", row.sense.symbol(), row.rhs);
        }
        s.push_str("Binary\n");
        for idx in 1..=map.primary_count() {
            let _ = write!(s, " {}", var_name(map, idx));
            if idx % TERMS_PER_LINE == 0 || idx == map.primary_count() {
                s.push('\n');
            }
        }
        s.push_str("End\n");
        s
    }
}

pub fn encode_ilp(g: &Graph, h: &PatternSpec) -> LpModel {
    let n = g.n();
    let k = h.vertex_count();
    let map = VarMap::new(n, k);
    let mut rows = Vec::new();
    for p in 0..k {
        rows.push(LpRow::unit(format!("a{p}"), (0..n).map(|v| map.index(v, p)), Sense::Eq, 1));
    }
    for v in 0..n {
        let nb = g.closed_neighborhood(v);
        let vars = (0..k).flat_map(|p| nb.iter().map(move |&u| map.index(u, p)));
        rows.push(LpRow::unit(format!("d{v}"), vars, Sense::Ge, 1));
    }
    for v in 0..n {
        rows.push(LpRow::unit(format!("i{v}"), (0..k).map(|p| map.index(v, p)), Sense::Le, 1));
    }
    for (c, ((u, p), (v, q))) in forbidden_pairs(g, h).into_iter().enumerate() {
        rows.push(LpRow::unit(
            format!("c{c}"),
            [map.index(u, p), map.index(v, q)],
            Sense::Le,
            1,
        ));
    }
    LpModel { map, rows }
}

/// Decide feasibility by choosing one variable per role (the `a` rows force
/// exactly that), pruning as soon as a `<=` row overflows and checking all
/// rows at the leaves. Only looks at the rows, not at the graph.
pub fn lp_feasible_by_role_enumeration(model: &LpModel) -> Option<Vec<usize>> {
    let map = model.map;
    let nvars = map.primary_count();
    let mut incidence: Vec<Vec<(usize, i64)>> = vec![Vec::new(); nvars + 1];
    for (r, row) in model.rows.iter().enumerate() {
        if row.sense == Sense::Le {
            for &(c, v) in &row.terms {
                incidence[v].push((r, c));
            }
        }
    }
    let mut activity = vec![0i64; model.rows.len()];
    let mut x = vec![false; nvars];
    let mut chosen = Vec::with_capacity(map.k);

    fn rec(
        model: &LpModel,
        incidence: &[Vec<(usize, i64)>],
        activity: &mut [i64],
        x: &mut [bool],
        chosen: &mut Vec<usize>,
    ) -> bool {
        let map = model.map;
        let p = chosen.len();
        if p == map.k {
            return model.rows.iter().all(|r| r.satisfied(x));
        }
        for v in 0..map.n {
            let idx = map.index(v, p);
            let mut ok = true;
            for &(r, c) in &incidence[idx] {
                activity[r] += c;
                ok &= activity[r] <= model.rows[r].rhs;
            }
            if ok {
                x[idx - 1] = true;
                chosen.push(v);
                if rec(model, incidence, activity, x, chosen) {
                    return true;
                }
                chosen.pop();
                x[idx - 1] = false;
            }
            for &(r, c) in &incidence[idx] {
                activity[r] -= c;
            }
        }
        false
    }

    rec(model, &incidence, &mut activity, &mut x, &mut chosen).then_some(chosen)
}

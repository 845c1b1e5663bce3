//! Pattern graphs `H` and their automorphism orbits.
//!
//! Built-in kinds keep their structure symbolic. Role numbering is fixed:
//!
//! * `Matching(k)`: roles `2i` and `2i+1` form edge `i`.
//! * `Cycle(k)`: role `i` is adjacent to `i±1 mod k`.
//! * `Path(k)`: role `i` is adjacent to `i±1`.
//!
//! Witnesses returned by every solver list host vertices in role order.

use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::graph::{load_graph_file, Graph, GraphError};

/// Cap on pattern size for explicit patterns, orbit computation, the generic
/// solver and the enumeration oracle.
pub const MAX_PATTERN_VERTICES: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PatternError {
    #[error("pattern {kind}{k}: {kind} needs k >= {min}")]
    BelowMinimum { kind: char, k: usize, min: usize },
    #[error("pattern has {n} vertices, the cap is {MAX_PATTERN_VERTICES}")]
    TooLarge { n: usize },
    #[error("cannot parse pattern '{0}': expected M<k>, C<k>, P<k> or @<file>")]
    Syntax(String),
    #[error("explicit pattern: {0}")]
    Graph(#[from] GraphError),
}

/// A small simple graph stored as per-vertex neighbor bitmasks.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PatternGraph {
    masks: Vec<u32>,
}

impl fmt::Debug for PatternGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PatternGraph")
            .field("n", &self.n())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl PatternGraph {
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, PatternError> {
        if n > MAX_PATTERN_VERTICES {
            return Err(PatternError::TooLarge { n });
        }
        let g = Graph::from_edges(n, edges)?;
        Self::from_graph(&g)
    }

    pub fn from_graph(g: &Graph) -> Result<Self, PatternError> {
        if g.n() > MAX_PATTERN_VERTICES {
            return Err(PatternError::TooLarge { n: g.n() });
        }
        let masks = (0..g.n())
            .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << u))
            .collect();
        Ok(Self { masks })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.masks.len()
    }

    #[inline]
    pub fn has_edge(&self, p: usize, q: usize) -> bool {
        self.masks[p] >> q & 1 == 1
    }

    #[inline]
    pub fn neighbor_mask(&self, p: usize) -> u32 {
        self.masks[p]
    }

    pub fn degree(&self, p: usize) -> usize {
        self.masks[p].count_ones() as usize
    }

    pub fn neighbors(&self, p: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n()).filter(move |&q| self.has_edge(p, q))
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |p| (p + 1..self.n()).filter(move |&q| self.has_edge(p, q)).map(move |q| (p, q)))
    }

    pub fn edge_count(&self) -> usize {
        self.masks.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    /// Relabel vertices: vertex `p` becomes `perm[p]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut masks = vec![0u32; self.n()];
        for (p, q) in self.edges() {
            masks[perm[p]] |= 1 << perm[q];
            masks[perm[q]] |= 1 << perm[p];
        }
        Self { masks }
    }

    /// Depth-first search for automorphisms, mapping vertices in `order`.
    /// `visit` receives each complete automorphism and returns `false` to stop.
    fn search_automorphisms(
        &self,
        order: &[usize],
        forced: Option<(usize, usize)>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) {
        let n = self.n();
        let mut image = vec![usize::MAX; n];
        let mut used = 0u32;

        fn rec(
            h: &PatternGraph,
            order: &[usize],
            depth: usize,
            forced: Option<(usize, usize)>,
            image: &mut [usize],
            used: &mut u32,
            visit: &mut dyn FnMut(&[usize]) -> bool,
        ) -> bool {
            if depth == order.len() {
                return visit(image);
            }
            let p = order[depth];
            for t in 0..h.n() {
                if *used >> t & 1 == 1 || h.degree(t) != h.degree(p) {
                    continue;
                }
                if let Some((from, to)) = forced {
                    if p == from && t != to {
                        continue;
                    }
                }
                let consistent = order[..depth]
                    .iter()
                    .all(|&q| h.has_edge(p, q) == h.has_edge(t, image[q]));
                if !consistent {
                    continue;
                }
                image[p] = t;
                *used |= 1 << t;
                let go_on = rec(h, order, depth + 1, forced, image, used, visit);
                *used &= !(1 << t);
                image[p] = usize::MAX;
                if !go_on {
                    return false;
                }
            }
            true
        }

        rec(self, order, 0, forced, &mut image, &mut used, visit);
    }

    /// The full automorphism group as image vectors (`perm[p]` = image of `p`),
    /// identity first, in lexicographic order.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let order: Vec<usize> = (0..self.n()).collect();
        let mut out = Vec::new();
        self.search_automorphisms(&order, None, &mut |img| {
            out.push(img.to_vec());
            true
        });
        out
    }

    /// Whether some automorphism maps `from` onto `to`.
    pub fn has_automorphism_mapping(&self, from: usize, to: usize) -> bool {
        let mut order = vec![from];
        order.extend((0..self.n()).filter(|&p| p != from));
        let mut found = false;
        self.search_automorphisms(&order, Some((from, to)), &mut |_| {
            found = true;
            false
        });
        found
    }

    /// Exact orbit partition under the automorphism group.
    pub fn orbits(&self) -> OrbitPartition {
        let n = self.n();
        let mut orbit_id = vec![usize::MAX; n];
        let mut representatives = Vec::new();
        for v in 0..n {
            if orbit_id[v] != usize::MAX {
                continue;
            }
            let id = representatives.len();
            representatives.push(v);
            orbit_id[v] = id;
            for (u, slot) in orbit_id.iter_mut().enumerate().skip(v + 1) {
                if *slot == usize::MAX && self.has_automorphism_mapping(v, u) {
                    *slot = id;
                }
            }
        }
        OrbitPartition {
            orbit_id,
            representatives,
        }
    }
}

/// Orbits of the pattern vertices; `representatives[i]` is the smallest
/// vertex of orbit `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPartition {
    pub orbit_id: Vec<usize>,
    pub representatives: Vec<usize>,
}

impl OrbitPartition {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn same_orbit(&self, p: usize, q: usize) -> bool {
        self.orbit_id[p] == self.orbit_id[q]
    }

    pub fn members(&self, orbit: usize) -> Vec<usize> {
        (0..self.orbit_id.len()).filter(|&p| self.orbit_id[p] == orbit).collect()
    }
}

/// The pattern `H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternSpec {
    /// `k` disjoint edges.
    Matching(usize),
    /// Induced cycle on `k >= 3` vertices.
    Cycle(usize),
    /// Induced path on `k >= 1` vertices.
    Path(usize),
    Explicit(PatternGraph),
}

impl PatternSpec {
    pub fn matching(k: usize) -> Result<Self, PatternError> {
        if k < 1 {
            return Err(PatternError::BelowMinimum { kind: 'M', k, min: 1 });
        }
        Ok(PatternSpec::Matching(k))
    }

    pub fn cycle(k: usize) -> Result<Self, PatternError> {
        if k < 3 {
            return Err(PatternError::BelowMinimum { kind: 'C', k, min: 3 });
        }
        Ok(PatternSpec::Cycle(k))
    }

    pub fn path(k: usize) -> Result<Self, PatternError> {
        if k < 1 {
            return Err(PatternError::BelowMinimum { kind: 'P', k, min: 1 });
        }
        Ok(PatternSpec::Path(k))
    }

    /// `|V(H)|`.
    pub fn vertex_count(&self) -> usize {
        match self {
            PatternSpec::Matching(k) => 2 * k,
            PatternSpec::Cycle(k) | PatternSpec::Path(k) => *k,
            PatternSpec::Explicit(h) => h.n(),
        }
    }

    pub fn has_edge(&self, p: usize, q: usize) -> bool {
        if p == q {
            return false;
        }
        match self {
            PatternSpec::Matching(_) => p / 2 == q / 2,
            PatternSpec::Cycle(k) => (p + 1) % k == q || (q + 1) % k == p,
            PatternSpec::Path(_) => p.abs_diff(q) == 1,
            PatternSpec::Explicit(h) => h.has_edge(p, q),
        }
    }

    /// Materialize the adjacency; fails above [`MAX_PATTERN_VERTICES`].
    pub fn to_graph(&self) -> Result<PatternGraph, PatternError> {
        if let PatternSpec::Explicit(h) = self {
            return Ok(h.clone());
        }
        let n = self.vertex_count();
        if n > MAX_PATTERN_VERTICES {
            return Err(PatternError::TooLarge { n });
        }
        let edges: Vec<_> = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .filter(|&(p, q)| self.has_edge(p, q))
            .collect();
        PatternGraph::from_edges(n, edges)
    }

    pub fn orbits(&self) -> Result<OrbitPartition, PatternError> {
        Ok(self.to_graph()?.orbits())
    }
}

impl fmt::Display for PatternSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternSpec::Matching(k) => write!(f, "M{k}"),
            PatternSpec::Cycle(k) => write!(f, "C{k}"),
            PatternSpec::Path(k) => write!(f, "P{k}"),
            PatternSpec::Explicit(h) => write!(f, "H{}", h.n()),
        }
    }
}

/// Parse `M<k>`, `C<k>`, `P<k>` or `@<edge-list file>`.
pub fn parse_pattern(spec: &str) -> Result<PatternSpec, PatternError> {
    let spec = spec.trim();
    if let Some(path) = spec.strip_prefix('@') {
        let g = load_graph_file(Path::new(path), None)?;
        return Ok(PatternSpec::Explicit(PatternGraph::from_graph(&g)?));
    }
    let mut chars = spec.chars();
    let kind = chars.next().ok_or_else(|| PatternError::Syntax(spec.into()))?;
    let k: usize = chars
        .as_str()
        .parse()
        .map_err(|_| PatternError::Syntax(spec.into()))?;
    match kind.to_ascii_uppercase() {
        'M' => PatternSpec::matching(k),
        'C' => PatternSpec::cycle(k),
        'P' => PatternSpec::path(k),
        _ => Err(PatternError::Syntax(spec.into())),
    }
}

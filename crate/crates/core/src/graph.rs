//! Host graph representation and the primitive checks the solvers rely on.
//!
//! A [`Graph`] is immutable after construction. Besides the sorted adjacency
//! arrays it materializes the closed-neighborhood bit matrix (row `v` holds
//! `N[v]`), which makes domination checks a word-wise OR over a few rows and
//! adjacency tests a single bit probe.

use std::collections::VecDeque;
use std::fmt;
use std::path::Path;

use thiserror::Error;

const WORD_BITS: usize = 64;

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(WORD_BITS)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("empty input: no vertices")]
    Empty,
    #[error("graph6: {0}")]
    Graph6(String),
    #[error("{0}")]
    Io(String),
}

/// A set of host vertices stored as an `n`-bit vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    n: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            words: vec![0; words_for(n)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::new(n);
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    pub fn from_vertices(n: usize, vertices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::new(n);
        for v in vertices {
            s.insert(v);
        }
        s
    }

    /// Universe size (not the number of members).
    pub fn universe(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn insert(&mut self, v: usize) -> bool {
        assert!(v < self.n, "vertex {v} outside universe of size {}", self.n);
        let (w, b) = (v / WORD_BITS, v % WORD_BITS);
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    #[inline]
    pub fn remove(&mut self, v: usize) -> bool {
        if v >= self.n {
            return false;
        }
        let (w, b) = (v / WORD_BITS, v % WORD_BITS);
        let present = self.words[w] & (1 << b) != 0;
        self.words[w] &= !(1 << b);
        present
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.n && self.words[v / WORD_BITS] & (1 << (v % WORD_BITS)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.n
    }

    pub fn union_with_words(&mut self, row: &[u64]) {
        for (a, b) in self.words.iter_mut().zip(row) {
            *a |= b;
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * WORD_BITS + b)
            })
        })
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Supported text formats for host graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    /// Whitespace separated 0-based `u v` pairs, optional `p edge n m` header.
    EdgeList,
    /// Standard DIMACS graph format: `p edge n m` header, 1-based `e u v` lines.
    Dimacs,
    /// The standard (dense) graph6 encoding.
    Graph6,
}

impl GraphFormat {
    /// Guess the format from a file extension; anything unknown is an edge list.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("g6") | Some("graph6") => GraphFormat::Graph6,
            Some("dimacs") | Some("col") | Some("clq") => GraphFormat::Dimacs,
            _ => GraphFormat::EdgeList,
        }
    }
}

impl std::str::FromStr for GraphFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "edge-list" | "el" => Ok(GraphFormat::EdgeList),
            "dimacs" => Ok(GraphFormat::Dimacs),
            "graph6" | "g6" => Ok(GraphFormat::Graph6),
            other => Err(format!("unknown graph format '{other}'")),
        }
    }
}

/// Immutable simple undirected host graph.
#[derive(Clone)]
pub struct Graph {
    n: usize,
    m: usize,
    adj: Vec<Vec<usize>>,
    row_words: usize,
    dom_matrix: Vec<u64>,
    degree_order: Vec<usize>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("m", &self.m)
            .field("adj", &self.adj)
            .finish()
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.adj == other.adj
    }
}

impl Eq for Graph {}

impl Graph {
    /// Build a graph from an edge iterator. Duplicate edges collapse, self-loops
    /// and out-of-range endpoints are rejected.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut adj = vec![Vec::new(); n];
        for (i, (u, v)) in edges.into_iter().enumerate() {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange {
                        line: i + 1,
                        vertex: x,
                        n,
                    });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop {
                    line: i + 1,
                    vertex: u,
                });
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        Ok(Self::from_adjacency(adj))
    }

    fn from_adjacency(mut adj: Vec<Vec<usize>>) -> Self {
        let n = adj.len();
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        let m = adj.iter().map(Vec::len).sum::<usize>() / 2;
        let row_words = words_for(n);
        let mut dom_matrix = vec![0u64; n * row_words];
        for (v, list) in adj.iter().enumerate() {
            let row = &mut dom_matrix[v * row_words..(v + 1) * row_words];
            row[v / WORD_BITS] |= 1 << (v % WORD_BITS);
            for &u in list {
                row[u / WORD_BITS] |= 1 << (u % WORD_BITS);
            }
        }
        let mut degree_order: Vec<usize> = (0..n).collect();
        degree_order.sort_by_key(|&v| (adj[v].len(), v));
        Self {
            n,
            m,
            adj,
            row_words,
            dom_matrix,
            degree_order,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Open neighborhood `N(v)`, ascending.
    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Closed neighborhood `N[v]` as an ascending vector.
    pub fn closed_neighborhood(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.degree(v) + 1);
        let mut inserted = false;
        for &u in &self.adj[v] {
            if !inserted && u > v {
                out.push(v);
                inserted = true;
            }
            out.push(u);
        }
        if !inserted {
            out.push(v);
        }
        out
    }

    /// Row `v` of the closed-neighborhood matrix.
    #[inline]
    pub fn dom_row(&self, v: usize) -> &[u64] {
        &self.dom_matrix[v * self.row_words..(v + 1) * self.row_words]
    }

    /// Constant-time adjacency test (`u != v`).
    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.dom_row(u)[v / WORD_BITS] & (1 << (v % WORD_BITS)) != 0
    }

    /// Vertices sorted ascending by degree, ties by id.
    #[inline]
    pub fn degree_order(&self) -> &[usize] {
        &self.degree_order
    }

    /// A vertex of minimum degree (`degree_order[0]`).
    #[inline]
    pub fn min_degree_vertex(&self) -> usize {
        self.degree_order[0]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// True iff the closed neighborhoods of `set` cover every vertex.
    pub fn is_dominating(&self, set: &VertexSet) -> bool {
        self.dominates(set.iter())
    }

    /// OR the closed-neighborhood rows of `vertices` and test for a full row.
    pub fn dominates(&self, vertices: impl IntoIterator<Item = usize>) -> bool {
        let mut acc = vec![0u64; self.row_words];
        for v in vertices {
            for (a, b) in acc.iter_mut().zip(self.dom_row(v)) {
                *a |= b;
            }
        }
        full_row(&acc, self.n)
    }

    /// First vertex (ascending id) not dominated by `vertices`.
    pub fn first_undominated(&self, vertices: impl IntoIterator<Item = usize>) -> Option<usize> {
        let mut acc = vec![0u64; self.row_words];
        for v in vertices {
            for (a, b) in acc.iter_mut().zip(self.dom_row(v)) {
                *a |= b;
            }
        }
        (0..self.n).find(|&v| acc[v / WORD_BITS] & (1 << (v % WORD_BITS)) == 0)
    }

    /// BFS distances from `src`; `usize::MAX` marks unreachable vertices.
    pub fn bfs_distances(&self, src: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        dist[src] = 0;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// True iff every pair of distinct members of `set` is at hop distance at
    /// least `d`. Different components count as infinitely far apart.
    pub fn pairwise_hop_distance_ge(&self, set: &VertexSet, d: usize) -> bool {
        assert!(d >= 1);
        let members: Vec<usize> = set.iter().collect();
        members.iter().all(|&s| {
            let dist = self.bfs_distances(s);
            members.iter().all(|&t| t == s || dist[t] >= d)
        })
    }

    /// Induced subgraph check used by tests and the verifier: `{u,v}` edges
    /// among `vertices` as a sorted list.
    pub fn induced_edges(&self, vertices: &[usize]) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, &u) in vertices.iter().enumerate() {
            for &v in &vertices[i + 1..] {
                if self.has_edge(u, v) {
                    out.push((u.min(v), u.max(v)));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Encode in graph6 (dense form, `n <= 258047`).
    pub fn to_graph6(&self) -> Result<String, GraphError> {
        let mut out = Vec::new();
        let n = self.n;
        if n < 63 {
            out.push(n as u8 + 63);
        } else if n <= 258_047 {
            out.push(126);
            out.push(((n >> 12) & 63) as u8 + 63);
            out.push(((n >> 6) & 63) as u8 + 63);
            out.push((n & 63) as u8 + 63);
        } else {
            return Err(GraphError::Graph6(format!("n = {n} exceeds 258047")));
        }
        let mut acc = 0u8;
        let mut filled = 0;
        for j in 1..n {
            for i in 0..j {
                acc = (acc << 1) | self.has_edge(i, j) as u8;
                filled += 1;
                if filled == 6 {
                    out.push(acc + 63);
                    acc = 0;
                    filled = 0;
                }
            }
        }
        if filled > 0 {
            out.push((acc << (6 - filled)) + 63);
        }
        Ok(String::from_utf8(out).expect("graph6 bytes are printable ASCII"))
    }
}

fn full_row(acc: &[u64], n: usize) -> bool {
    let full_words = n / WORD_BITS;
    if acc[..full_words].iter().any(|&w| w != u64::MAX) {
        return false;
    }
    let rest = n % WORD_BITS;
    rest == 0 || acc[full_words] == (1u64 << rest) - 1
}

/// Parse a host graph from raw bytes.
pub fn load_graph(text: &[u8], format: GraphFormat) -> Result<Graph, GraphError> {
    match format {
        GraphFormat::EdgeList => parse_edge_list(text, false),
        GraphFormat::Dimacs => parse_edge_list(text, true),
        GraphFormat::Graph6 => parse_graph6(text),
    }
}

/// Read a file and parse it, guessing the format from the extension when
/// `format` is `None`.
pub fn load_graph_file(path: &Path, format: Option<GraphFormat>) -> Result<Graph, GraphError> {
    let bytes = std::fs::read(path).map_err(|e| GraphError::Io(format!("{}: {e}", path.display())))?;
    load_graph(&bytes, format.unwrap_or_else(|| GraphFormat::from_path(path)))
}

fn parse_edge_list(text: &[u8], dimacs: bool) -> Result<Graph, GraphError> {
    let text = std::str::from_utf8(text).map_err(|_| GraphError::Malformed {
        line: 0,
        msg: "input is not valid UTF-8".into(),
    })?;
    let mut declared_n: Option<usize> = None;
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('c') {
            continue;
        }
        let malformed = |msg: &str| GraphError::Malformed {
            line: line_no,
            msg: format!("{msg}: '{line}'"),
        };
        let mut toks = line.split_whitespace();
        if line.starts_with('p') {
            toks.next();
            let _kind = toks.next().ok_or_else(|| malformed("incomplete header"))?;
            let n: usize = toks
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| malformed("bad vertex count in header"))?;
            if declared_n.is_some() {
                return Err(malformed("duplicate header"));
            }
            declared_n = Some(n);
            continue;
        }
        if dimacs {
            if toks.next() != Some("e") {
                return Err(malformed("expected 'e u v'"));
            }
            if declared_n.is_none() {
                return Err(malformed("edge before 'p' header"));
            }
        }
        let mut endpoint = || -> Result<usize, GraphError> {
            let t = toks.next().ok_or_else(|| malformed("expected two vertex ids"))?;
            let x: usize = t.parse().map_err(|_| malformed("vertex id is not an unsigned integer"))?;
            if dimacs {
                x.checked_sub(1).ok_or_else(|| malformed("DIMACS vertex ids are 1-based"))
            } else {
                Ok(x)
            }
        };
        let u = endpoint()?;
        let v = endpoint()?;
        if toks.next().is_some() {
            return Err(malformed("trailing tokens"));
        }
        if u == v {
            return Err(GraphError::SelfLoop {
                line: line_no,
                vertex: u,
            });
        }
        edges.push((line_no, u, v));
    }

    let n = match declared_n {
        Some(n) => n,
        None => edges.iter().map(|&(_, u, v)| u.max(v) + 1).max().unwrap_or(0),
    };
    if n == 0 {
        return Err(GraphError::Empty);
    }
    for &(line, u, v) in &edges {
        for x in [u, v] {
            if x >= n {
                return Err(GraphError::VertexOutOfRange { line, vertex: x, n });
            }
        }
    }
    Graph::from_edges(n, edges.into_iter().map(|(_, u, v)| (u, v)))
}

fn parse_graph6(text: &[u8]) -> Result<Graph, GraphError> {
    let err = |m: &str| GraphError::Graph6(m.to_string());
    let text = text.strip_prefix(b">>graph6<<").unwrap_or(text);
    let line = text
        .split(|&b| b == b'\n')
        .map(|l| l.strip_suffix(b"\r").unwrap_or(l))
        .find(|l| !l.is_empty())
        .ok_or(GraphError::Empty)?;
    if let Some(bad) = line.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(GraphError::Graph6(format!("byte {bad:#04x} outside 63..=126")));
    }
    let (n, body) = if line[0] < 126 {
        ((line[0] - 63) as usize, &line[1..])
    } else {
        if line.len() < 4 {
            return Err(err("truncated size header"));
        }
        if line[1] == 126 {
            return Err(err("8-byte size form (n > 258047) is not supported"));
        }
        let n = line[1..4]
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
        (n, &line[4..])
    };
    if n == 0 {
        return Err(GraphError::Empty);
    }
    let bits = n * (n - 1) / 2;
    if body.len() != bits.div_ceil(6) {
        return Err(GraphError::Graph6(format!(
            "expected {} data bytes for n = {n}, found {}",
            bits.div_ceil(6),
            body.len()
        )));
    }
    let bit = |k: usize| (body[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    if (bits..body.len() * 6).any(bit) {
        return Err(err("non-zero padding bits"));
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Graph::from_edges(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(s: &str) -> Graph {
        load_graph(s.as_bytes(), GraphFormat::EdgeList).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn edge_list_basic() {
        let g = el("0 1\n1 2\n");
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 2);
        assert_eq!(g.neighbors(1), &[0, 2]);
    }

    #[test]
    fn edge_list_header_comments_and_duplicates() {
        let g = el("# comment\nc another\np edge 5 3\n0 1\n1 0\n3 4\n");
        assert_eq!(g.n(), 5);
        assert_eq!(g.m(), 2);
        assert_eq!(g.degree(2), 0);
    }

    #[test]
    fn edge_list_errors() {
        assert!(matches!(
            load_graph(b"0 0\n", GraphFormat::EdgeList),
            Err(GraphError::SelfLoop { line: 1, vertex: 0 })
        ));
        assert_eq!(load_graph(b"", GraphFormat::EdgeList), Err(GraphError::Empty));
        assert_eq!(load_graph(b"# only\n", GraphFormat::EdgeList), Err(GraphError::Empty));
        assert!(matches!(
            load_graph(b"p edge 3 1\n0 5\n", GraphFormat::EdgeList),
            Err(GraphError::VertexOutOfRange { line: 2, vertex: 5, n: 3 })
        ));
        assert!(matches!(
            load_graph(b"0 x\n", GraphFormat::EdgeList),
            Err(GraphError::Malformed { line: 1, .. })
        ));
        assert!(matches!(
            load_graph(b"0 1 2\n", GraphFormat::EdgeList),
            Err(GraphError::Malformed { .. })
        ));
    }

    #[test]
    fn dimacs_is_one_based() {
        let g = load_graph(b"c test\np edge 4 2\ne 1 2\ne 3 4\n", GraphFormat::Dimacs).unwrap();
        assert_eq!(g.n(), 4);
        assert!(g.has_edge(0, 1));
        assert!(g.has_edge(2, 3));
        assert!(load_graph(b"p edge 2 1\ne 0 1\n", GraphFormat::Dimacs).is_err());
        assert!(load_graph(b"e 1 2\n", GraphFormat::Dimacs).is_err());
    }

    #[test]
    fn graph6_star() {
        let g = load_graph(b"D?{", GraphFormat::Graph6).unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.neighbors(4), &[0, 1, 2, 3]);
        assert_eq!(g.to_graph6().unwrap(), "D?{");
        assert!(load_graph(b"D?", GraphFormat::Graph6).is_err());
        assert!(load_graph(b"D?|", GraphFormat::Graph6).is_err(), "padding bit set");
    }

    #[test]
    fn graph6_long_header() {
        let g = Graph::from_edges(70, (0..69).map(|i| (i, i + 1))).unwrap();
        let s = g.to_graph6().unwrap();
        assert_eq!(s.as_bytes()[0], 126);
        assert_eq!(load_graph(s.as_bytes(), GraphFormat::Graph6).unwrap(), g);
    }

    #[test]
    fn dom_rows_and_degree_order() {
        let g = el("0 1\n0 2\n0 3\n0 4\n");
        for v in 0..g.n() {
            let pop: u32 = g.dom_row(v).iter().map(|w| w.count_ones()).sum();
            assert_eq!(pop as usize, g.degree(v) + 1);
        }
        assert_eq!(g.degree_order(), &[1, 2, 3, 4, 0]);
        assert!(g.n() * g.degree(g.min_degree_vertex()) <= 2 * g.m());
    }

    #[test]
    fn domination_examples() {
        let star = el("0 1\n0 2\n0 3\n0 4\n");
        assert!(star.dominates([0]));
        let c6 = cycle(6);
        assert!(!c6.dominates([0]));
        assert_eq!(c6.first_undominated([0]), Some(2));
        assert!(c6.dominates([0, 1, 3, 4]));
        assert!(c6.is_dominating(&VertexSet::full(6)));
    }

    #[test]
    fn hop_distance_examples() {
        let p7 = Graph::from_edges(7, (0..6).map(|i| (i, i + 1))).unwrap();
        assert!(p7.pairwise_hop_distance_ge(&VertexSet::from_vertices(7, [0, 3, 6]), 3));
        assert!(!p7.pairwise_hop_distance_ge(&VertexSet::from_vertices(7, [0, 2]), 3));
        let c6 = cycle(6);
        assert!(c6.pairwise_hop_distance_ge(&VertexSet::from_vertices(6, [0, 3]), 3));
        let split = el("p edge 4 1\n0 1\n");
        assert!(split.pairwise_hop_distance_ge(&VertexSet::from_vertices(4, [0, 2, 3]), 100));
    }

    #[test]
    fn closed_neighborhood_sorted() {
        let g = el("2 0\n2 4\n2 3\n");
        assert_eq!(g.closed_neighborhood(2), vec![0, 2, 3, 4]);
        assert_eq!(g.closed_neighborhood(4), vec![2, 4]);
        assert_eq!(g.closed_neighborhood(0), vec![0, 2]);
    }

    #[test]
    fn vertex_set_ops() {
        let mut s = VertexSet::new(130);
        assert!(s.insert(129));
        assert!(!s.insert(129));
        s.insert(3);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![3, 129]);
        assert_eq!(s.len(), 2);
        assert!(s.remove(3));
        assert!(!s.contains(3));
        assert!(VertexSet::full(130).is_full());
    }
}

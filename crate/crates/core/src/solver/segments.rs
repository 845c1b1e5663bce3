//! Vertex-disjoint induced paths ("segments") shared by the cycle and path
//! solvers.
//!
//! Each assigned vertex keeps up to two links. A segment is described by its
//! two ends, which point at each other through `other_end`; a single vertex is
//! a segment whose ends coincide and appears once in `ends`.

use crate::graph::Graph;

const NONE: usize = usize::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentAction {
    NewSegment,
    Append(usize),
    /// Connect the ends of two different segments.
    Join(usize, usize),
    /// Connect both ends of the only segment, completing a cycle.
    Close(usize, usize),
    Invalid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SegmentMove {
    pub vertex: usize,
    pub action: SegmentAction,
}

/// Segment ends adjacent to some vertex. `count` saturates at 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdjacentEnds {
    pub count: usize,
    pub first: usize,
    pub second: usize,
}

#[derive(Debug, Clone, Copy)]
struct UndoRecord {
    removed: [(usize, usize); 2],
    removed_len: usize,
    saved: [(usize, usize); 2],
    saved_len: usize,
    pushed: bool,
}

impl UndoRecord {
    fn new() -> Self {
        Self {
            removed: [(NONE, NONE); 2],
            removed_len: 0,
            saved: [(NONE, NONE); 2],
            saved_len: 0,
            pushed: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SegmentStore {
    links: Vec<[usize; 2]>,
    other_end: Vec<usize>,
    ends: Vec<usize>,
    segments: usize,
    closed: bool,
    log: Vec<UndoRecord>,
}

impl SegmentStore {
    pub fn new(n: usize) -> Self {
        Self {
            links: vec![[NONE; 2]; n],
            other_end: vec![NONE; n],
            ends: Vec::new(),
            segments: 0,
            closed: false,
            log: Vec::new(),
        }
    }

    pub fn segment_count(&self) -> usize {
        self.segments
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn ends(&self) -> &[usize] {
        &self.ends
    }

    pub fn other_end(&self, e: usize) -> usize {
        self.other_end[e]
    }

    pub fn links(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.links[v].iter().copied().filter(|&u| u != NONE)
    }

    /// Ends adjacent to `v`, scanning at most until a third one turns up.
    pub fn adjacent_ends(&self, g: &Graph, v: usize) -> AdjacentEnds {
        let mut found = AdjacentEnds {
            count: 0,
            first: NONE,
            second: NONE,
        };
        for &e in &self.ends {
            if g.has_edge(e, v) {
                match found.count {
                    0 => found.first = e,
                    1 => found.second = e,
                    _ => {
                        found.count = 3;
                        break;
                    }
                }
                found.count += 1;
            }
        }
        found
    }

    /// Ends `(a, b)` of each segment once; a single vertex gives `(w, w)`.
    pub fn segment_ends(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.ends
            .iter()
            .map(move |&e| (e, self.other_end[e]))
            .filter(|&(a, b)| a <= b)
    }

    fn link(&mut self, a: usize, b: usize) {
        let slot = |l: &mut [usize; 2], x: usize| {
            let i = if l[0] == NONE { 0 } else { 1 };
            assert_eq!(l[i], NONE, "vertex already has two links");
            l[i] = x;
        };
        slot(&mut self.links[a], b);
        slot(&mut self.links[b], a);
    }

    fn unlink(&mut self, a: usize, b: usize) {
        let clear = |l: &mut [usize; 2], x: usize| {
            let i = if l[1] == x { 1 } else { 0 };
            assert_eq!(l[i], x, "link to remove is missing");
            l[i] = NONE;
        };
        clear(&mut self.links[a], b);
        clear(&mut self.links[b], a);
    }

    fn remove_end(&mut self, rec: &mut UndoRecord, e: usize) {
        let idx = self.ends.iter().position(|&x| x == e).expect("vertex is an end");
        self.ends.remove(idx);
        rec.removed[rec.removed_len] = (idx, e);
        rec.removed_len += 1;
    }

    fn set_other_end(&mut self, rec: &mut UndoRecord, e: usize, to: usize) {
        rec.saved[rec.saved_len] = (e, self.other_end[e]);
        rec.saved_len += 1;
        self.other_end[e] = to;
    }

    pub fn apply(&mut self, v: usize, action: SegmentAction) {
        let mut rec = UndoRecord::new();
        match action {
            SegmentAction::NewSegment => {
                self.other_end[v] = v;
                self.ends.push(v);
                rec.pushed = true;
                self.segments += 1;
            }
            SegmentAction::Append(e) => {
                let o = self.other_end[e];
                self.link(e, v);
                if e != o {
                    self.remove_end(&mut rec, e);
                }
                self.ends.push(v);
                rec.pushed = true;
                self.other_end[v] = o;
                self.set_other_end(&mut rec, o, v);
            }
            SegmentAction::Join(a, b) => {
                let (oa, ob) = (self.other_end[a], self.other_end[b]);
                self.link(a, v);
                self.link(v, b);
                if a != oa {
                    self.remove_end(&mut rec, a);
                }
                if b != ob {
                    self.remove_end(&mut rec, b);
                }
                self.set_other_end(&mut rec, oa, ob);
                self.set_other_end(&mut rec, ob, oa);
                self.segments -= 1;
            }
            SegmentAction::Close(a, b) => {
                self.link(a, v);
                self.link(v, b);
                self.remove_end(&mut rec, a);
                self.remove_end(&mut rec, b);
                self.closed = true;
            }
            SegmentAction::Invalid => panic!("cannot apply an invalid segment action"),
        }
        self.log.push(rec);
    }

    pub fn undo(&mut self, v: usize, action: SegmentAction) {
        let rec = self.log.pop().expect("undo without apply");
        if rec.pushed {
            assert_eq!(self.ends.pop(), Some(v));
        }
        for &(idx, e) in rec.removed[..rec.removed_len].iter().rev() {
            self.ends.insert(idx, e);
        }
        for &(e, old) in rec.saved[..rec.saved_len].iter().rev() {
            self.other_end[e] = old;
        }
        match action {
            SegmentAction::NewSegment => self.segments -= 1,
            SegmentAction::Append(e) => self.unlink(e, v),
            SegmentAction::Join(a, b) => {
                self.unlink(v, b);
                self.unlink(a, v);
                self.segments += 1;
            }
            SegmentAction::Close(a, b) => {
                self.unlink(v, b);
                self.unlink(a, v);
                self.closed = false;
            }
            SegmentAction::Invalid => unreachable!(),
        }
        self.other_end[v] = NONE;
    }

    /// Vertices in link order starting at `start`, following the first link.
    pub fn walk(&self, start: usize) -> Vec<usize> {
        let mut out = vec![start];
        let mut prev = NONE;
        let mut cur = start;
        loop {
            let next = self.links(cur).find(|&u| u != prev);
            match next {
                Some(u) if u != start => {
                    out.push(u);
                    prev = cur;
                    cur = u;
                }
                _ => break,
            }
        }
        out
    }

    /// Segments are induced paths linked exactly along host edges, with ends
    /// and segment count consistent with the links.
    pub fn check(&self, g: &Graph, assigned: &[usize]) -> Result<(), String> {
        for (i, &x) in assigned.iter().enumerate() {
            for &y in &assigned[i + 1..] {
                let linked = self.links(x).any(|u| u == y);
                if linked != g.has_edge(x, y) {
                    return Err(format!("pair {x},{y}: linked={linked} but host edge={}", !linked));
                }
            }
        }
        let mut seen = vec![false; self.links.len()];
        let mut components = 0;
        for &v in assigned {
            if seen[v] {
                continue;
            }
            components += 1;
            let walk_start = if self.closed {
                v
            } else {
                // walk to one end first
                let w = self.walk(v);
                *w.last().unwrap()
            };
            let walk = self.walk(walk_start);
            for &u in &walk {
                seen[u] = true;
            }
            if !self.closed {
                let (a, b) = (walk[0], *walk.last().unwrap());
                if self.other_end[a] != b || self.other_end[b] != a {
                    return Err(format!("ends {a},{b} do not point at each other"));
                }
                let listed = self.ends.iter().filter(|&&e| e == a || e == b).count();
                if listed != if a == b { 1 } else { 2 } {
                    return Err(format!("segment {a}..{b} not listed correctly in ends"));
                }
            }
        }
        if self.closed {
            if components != 1 || !self.ends.is_empty() {
                return Err("closed cycle must be the only component".into());
            }
        } else if components != self.segments {
            return Err(format!("{components} components but {} segments", self.segments));
        }
        let expected_ends: usize = self.segment_ends().map(|(a, b)| if a == b { 1 } else { 2 }).sum();
        if expected_ends != self.ends.len() {
            return Err("ends list has stray entries".into());
        }
        Ok(())
    }
}

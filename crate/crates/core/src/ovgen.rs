//! Random k-OV instances with certified YES/NO labels.
//!
//! Bits come from SplitMix64 (Steele, Lea and Flood's 64-bit mixer over a
//! Weyl sequence) seeded with the instance seed: one draw `x` per bit, set iff
//! `(x >> 11) * 2^-53 < p`. Columns are appended one at a time; within a column
//! the draws go set by set, vector by vector.

use std::fmt;
use std::str::FromStr;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use thiserror::Error;

/// Pair checks allowed by [`ov_has_solution`].
pub const DEFAULT_WORK_LIMIT: u64 = 1_000_000_000;
pub const RESTART_LIMIT: usize = 1000;
pub const MAX_DIMENSION: usize = 1 << 14;
const POOL_CAP: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OvLabel {
    Yes,
    No,
}

impl fmt::Display for OvLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OvLabel::Yes => "YES",
            OvLabel::No => "NO",
        })
    }
}

impl FromStr for OvLabel {
    type Err = OvError;

    fn from_str(s: &str) -> Result<Self, OvError> {
        match s.to_ascii_lowercase().as_str() {
            "yes" => Ok(OvLabel::Yes),
            "no" => Ok(OvLabel::No),
            _ => Err(OvError::InvalidParams(format!("unknown label {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OvError {
    #[error("enumeration needs {work} pair checks, limit is {limit}")]
    GuardExceeded { work: u64, limit: u64 },
    #[error("gave up after {0} restarts")]
    RestartLimit(usize),
    #[error("dimension exceeded {0} without losing all solutions")]
    DimensionLimit(usize),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A vector of `d` bits packed into 128-bit words.
pub type BitVector = Vec<u128>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OvInstance {
    pub k: usize,
    pub d: usize,
    pub sets: Vec<Vec<BitVector>>,
    pub label: OvLabel,
    pub seed: u64,
}

fn words_for(d: usize) -> usize {
    d.div_ceil(128).max(1)
}

impl OvInstance {
    pub fn bit(&self, set: usize, vector: usize, coord: usize) -> bool {
        self.sets[set][vector][coord / 128] >> (coord % 128) & 1 == 1
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {} {}\n", self.k, self.d, self.label, self.seed);
        for (i, set) in self.sets.iter().enumerate() {
            s.push_str(&format!("{}\n", set.len()));
            for j in 0..set.len() {
                s.extend((0..self.d).map(|c| if self.bit(i, j, c) { '1' } else { '0' }));
                s.push('\n');
            }
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, OvError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let err = |line, msg: &str| OvError::Parse {
            line,
            msg: msg.to_string(),
        };
        let (ln, header) = lines.next().ok_or_else(|| err(1, "empty input"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let [k, d, label, seed] = fields[..] else {
            return Err(err(ln, "header must be `k d label seed`"));
        };
        let num = |s: &str| s.parse::<u64>().map_err(|_| err(ln, "bad number in header"));
        let (k, d, seed) = (num(k)? as usize, num(d)? as usize, num(seed)?);
        let label = label.parse().map_err(|_| err(ln, "label must be YES or NO"))?;
        let w = words_for(d);
        let mut sets = Vec::with_capacity(k);
        for _ in 0..k {
            let (ln, size) = lines.next().ok_or_else(|| err(ln, "missing set size"))?;
            let size: usize = size.parse().map_err(|_| err(ln, "bad set size"))?;
            let mut set = Vec::with_capacity(size);
            for _ in 0..size {
                let (ln, row) = lines.next().ok_or_else(|| err(ln, "missing vector"))?;
                if row.len() != d {
                    return Err(err(ln, "vector length differs from d"));
                }
                let mut v = vec![0u128; w];
                for (c, ch) in row.chars().enumerate() {
                    match ch {
                        '1' => v[c / 128] |= 1 << (c % 128),
                        '0' => {}
                        _ => return Err(err(ln, "vectors use only 0 and 1")),
                    }
                }
                set.push(v);
            }
            sets.push(set);
        }
        if let Some((ln, extra)) = lines.find(|(_, l)| !l.is_empty()) {
            return Err(err(ln, &format!("trailing content {extra:?}")));
        }
        Ok(Self { k, d, sets, label, seed })
    }
}

/// Coordinate-wise AND of every choice of one vector per set, flattened
/// with `w` words per entry, in mixed-radix order (last set fastest).
fn all_ands(sets: &[Vec<BitVector>], w: usize) -> Vec<u128> {
    let mut acc = vec![u128::MAX; w];
    for set in sets {
        let mut next = Vec::with_capacity(acc.len() / w * set.len() * w);
        for a in acc.chunks_exact(w) {
            for v in set {
                next.extend(a.iter().zip(v).map(|(x, y)| x & y));
            }
        }
        acc = next;
    }
    acc
}

/// Split a mixed-radix index back into one index per set.
fn unrank(mut idx: usize, sets: &[Vec<BitVector>]) -> Vec<usize> {
    let mut out = vec![0; sets.len()];
    for (i, set) in sets.iter().enumerate().rev() {
        out[i] = idx % set.len();
        idx /= set.len();
    }
    out
}

const SCAN_BLOCK: usize = 32;

/// Calls `hit(i, j)` for pairs with `left[i] & right[j] == 0` in order until
/// it returns false. The right side is split into 64-bit halves and scanned
/// in branch-free blocks so the common case vectorizes.
fn scan_narrow(left: &[u128], right: &[u128], mut hit: impl FnMut(usize, usize) -> bool) {
    let lo: Vec<u64> = right.iter().map(|&b| b as u64).collect();
    let hi: Vec<u64> = right.iter().map(|&b| (b >> 64) as u64).collect();
    for (i, &a) in left.iter().enumerate() {
        let (alo, ahi) = (a as u64, (a >> 64) as u64);
        for (bi, (l, h)) in lo.chunks(SCAN_BLOCK).zip(hi.chunks(SCAN_BLOCK)).enumerate() {
            let mut any = false;
            for (x, y) in l.iter().zip(h) {
                any |= (alo & x) | (ahi & y) == 0;
            }
            if !any {
                continue;
            }
            for (j, (x, y)) in l.iter().zip(h).enumerate() {
                if (alo & x) | (ahi & y) == 0 && !hit(i, bi * SCAN_BLOCK + j) {
                    return;
                }
            }
        }
    }
}

fn scan_wide(left: &[u128], right: &[u128], w: usize, mut hit: impl FnMut(usize, usize) -> bool) {
    for (i, a) in left.chunks_exact(w).enumerate() {
        for (j, b) in right.chunks_exact(w).enumerate() {
            if a.iter().zip(b).all(|(x, y)| x & y == 0) && !hit(i, j) {
                return;
            }
        }
    }
}

/// Up to `cap` solution tuples in enumeration order, and whether the list is
/// known to be all of them.
pub fn collect_solutions(
    inst: &OvInstance,
    limit: u64,
    cap: usize,
) -> Result<(Vec<Vec<usize>>, bool), OvError> {
    if inst.sets.iter().any(|s| s.is_empty()) {
        return Ok((Vec::new(), true));
    }
    let work = inst
        .sets
        .iter()
        .fold(1u64, |acc, s| acc.saturating_mul(s.len() as u64));
    if work > limit {
        return Err(OvError::GuardExceeded { work, limit });
    }
    let w = words_for(inst.d);
    let (left_sets, right_sets) = inst.sets.split_at(inst.k / 2);
    let left = all_ands(left_sets, w);
    let right = all_ands(right_sets, w);
    let mut found = Vec::new();
    let mut complete = true;
    // a full list stops the scan, so it might not be all of them
    let hit = |i: usize, j: usize| {
        let mut t = unrank(i, left_sets);
        t.extend(unrank(j, right_sets));
        found.push(t);
        complete = found.len() < cap;
        complete
    };
    if w == 1 {
        scan_narrow(&left, &right, hit);
    } else {
        scan_wide(&left, &right, w, hit);
    }
    Ok((found, complete))
}

/// One vector index per set whose AND is all-zero, if any.
pub fn find_solution(inst: &OvInstance, limit: u64) -> Result<Option<Vec<usize>>, OvError> {
    Ok(collect_solutions(inst, limit, 1)?.0.pop())
}

pub fn ov_has_solution(inst: &OvInstance) -> Result<bool, OvError> {
    Ok(find_solution(inst, DEFAULT_WORK_LIMIT)?.is_some())
}

fn is_solution(inst: &OvInstance, tuple: &[usize]) -> bool {
    let w = words_for(inst.d);
    (0..w).all(|word| {
        tuple
            .iter()
            .enumerate()
            .fold(u128::MAX, |acc, (i, &j)| acc & inst.sets[i][j][word])
            == 0
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OvParams {
    pub k: usize,
    pub set_size: usize,
    pub p: f64,
    pub seed: u64,
    /// Pair-check budget for each certification.
    pub work_limit: u64,
}

impl Default for OvParams {
    fn default() -> Self {
        Self {
            k: 6,
            set_size: 45,
            p: 0.75,
            seed: 0,
            work_limit: 10_000_000_000,
        }
    }
}

struct BitSource {
    rng: SplitMix64,
    p: f64,
}

impl BitSource {
    fn next_bit(&mut self) -> bool {
        let x = self.rng.next_u64();
        ((x >> 11) as f64) * (1.0 / (1u64 << 53) as f64) < self.p
    }
}

fn append_column(inst: &mut OvInstance, bits: &mut BitSource) {
    let c = inst.d;
    inst.d += 1;
    let w = words_for(inst.d);
    for set in &mut inst.sets {
        for v in set.iter_mut() {
            v.resize(w, 0);
            if bits.next_bit() {
                v[c / 128] |= 1 << (c % 128);
            }
        }
    }
}

fn drop_last_column(inst: &mut OvInstance) {
    inst.d -= 1;
    let c = inst.d;
    let w = words_for(inst.d);
    for set in &mut inst.sets {
        for v in set.iter_mut() {
            v[c / 128] &= !(1 << (c % 128));
            v.truncate(w);
        }
    }
}

/// Generate an instance with the requested label.
///
/// NO: append random columns until no solution is left. YES: do the same,
/// then drop the final column. If the very first column already killed every
/// solution there is nothing to drop back to, so generation restarts with the
/// next draws of the same stream.
pub fn gen_ov(params: &OvParams, target: OvLabel) -> Result<OvInstance, OvError> {
    let OvParams { k, set_size, p, seed, work_limit } = *params;
    if k < 2 || set_size < 1 || !(p > 0.0 && p < 1.0) {
        return Err(OvError::InvalidParams(format!(
            "need k >= 2, set_size >= 1 and 0 < p < 1 (got k={k}, set_size={set_size}, p={p})"
        )));
    }
    let mut bits = BitSource {
        rng: SplitMix64::seed_from_u64(seed),
        p,
    };
    for _ in 0..RESTART_LIMIT {
        let mut inst = OvInstance {
            k,
            d: 0,
            sets: vec![vec![vec![0u128; 1]; set_size]; k],
            label: target,
            seed,
        };
        // Known solutions of the current prefix. Appending a column can only
        // remove solutions, so the pool is filtered instead of searching
        // again; a rescan is needed only when an incomplete pool runs dry.
        let mut pool: Vec<Vec<usize>> = Vec::new();
        let mut complete = false;
        let mut previous: Vec<Vec<usize>>;
        loop {
            if inst.d >= MAX_DIMENSION {
                return Err(OvError::DimensionLimit(MAX_DIMENSION));
            }
            append_column(&mut inst, &mut bits);
            previous = pool.clone();
            pool.retain(|t| is_solution(&inst, t));
            if pool.is_empty() && !complete {
                (pool, complete) = collect_solutions(&inst, work_limit, POOL_CAP)?;
            }
            if pool.is_empty() {
                break;
            }
        }
        if target == OvLabel::No {
            return Ok(inst);
        }
        drop_last_column(&mut inst);
        // the pool before the last column certifies the shorter instance
        if previous.first().is_some_and(|t| is_solution(&inst, t)) {
            return Ok(inst);
        }
    }
    Err(OvError::RestartLimit(RESTART_LIMIT))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn instance(rows: &[&[&str]]) -> OvInstance {
        let d = rows[0][0].len();
        let mut text = format!("{} {d} YES 0\n", rows.len());
        for set in rows {
            text.push_str(&format!("{}\n", set.len()));
            for r in *set {
                text.push_str(r);
                text.push('\n');
            }
        }
        OvInstance::parse(&text).unwrap()
    }

    fn triple_loop(inst: &OvInstance) -> bool {
        let [a, b, c] = &inst.sets[..] else { unreachable!() };
        for x in a {
            for y in b {
                for z in c {
                    if (0..inst.d).all(|i| {
                        let bit = |v: &BitVector| v[i / 128] >> (i % 128) & 1;
                        bit(x) & bit(y) & bit(z) == 0
                    }) {
                        return true;
                    }
                }
            }
        }
        false
    }

    #[test]
    fn splitmix_reference_output() {
        let mut r = SplitMix64::seed_from_u64(0);
        assert_eq!(r.next_u64(), 0xe220a8397b1dcdaf);
    }

    #[test]
    fn small_examples() {
        assert!(ov_has_solution(&instance(&[&["10", "11"], &["01", "11"]])).unwrap());
        assert!(!ov_has_solution(&instance(&[&["11"], &["11"]])).unwrap());
        let t = find_solution(&instance(&[&["10", "11"], &["11", "01"]]), 100).unwrap();
        assert_eq!(t, Some(vec![0, 1]));
    }

    #[test]
    fn guard() {
        let inst = instance(&[&["1"; 10], &["1"; 10], &["1"; 10]]);
        assert_eq!(
            find_solution(&inst, 999),
            Err(OvError::GuardExceeded { work: 1000, limit: 999 })
        );
    }

    #[test]
    fn wide_vectors() {
        let mut a = "1".repeat(200);
        a.replace_range(150..151, "0");
        let mut b = "0".repeat(200);
        b.replace_range(150..151, "1");
        assert!(ov_has_solution(&instance(&[&[&a], &[&b]])).unwrap());
        assert!(!ov_has_solution(&instance(&[&[&a], &[&a]])).unwrap());
    }

    #[test]
    fn generated_labels_hold() {
        for seed in 0..10 {
            for target in [OvLabel::Yes, OvLabel::No] {
                let params = OvParams { k: 3, set_size: 6, seed, ..OvParams::default() };
                let inst = gen_ov(&params, target).unwrap();
                assert_eq!(inst.label, target);
                assert_eq!(ov_has_solution(&inst).unwrap(), target == OvLabel::Yes);
                assert_eq!(triple_loop(&inst), target == OvLabel::Yes);
                assert_eq!(OvInstance::parse(&inst.to_text()).unwrap(), inst);
                assert_eq!(gen_ov(&params, target).unwrap().to_text(), inst.to_text());
            }
        }
    }

    #[test]
    fn bad_params() {
        let p = OvParams { k: 1, ..OvParams::default() };
        assert!(matches!(gen_ov(&p, OvLabel::No), Err(OvError::InvalidParams(_))));
        let p = OvParams { p: 1.0, ..OvParams::default() };
        assert!(matches!(gen_ov(&p, OvLabel::No), Err(OvError::InvalidParams(_))));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_instance() -> impl Strategy<Value = OvInstance> {
            (1usize..8, 1usize..5, 1usize..5, 1usize..5).prop_flat_map(|(d, s0, s1, s2)| {
                let set = move |s| proptest::collection::vec(proptest::collection::vec(any::<bool>(), d), s);
                (set(s0), set(s1), set(s2)).prop_map(move |(a, b, c)| {
                    let pack = |rows: Vec<Vec<bool>>| {
                        rows.into_iter()
                            .map(|r| {
                                let mut v = vec![0u128; 1];
                                for (i, bit) in r.into_iter().enumerate() {
                                    v[0] |= u128::from(bit) << i;
                                }
                                v
                            })
                            .collect()
                    };
                    OvInstance { k: 3, d, sets: vec![pack(a), pack(b), pack(c)], label: OvLabel::No, seed: 0 }
                })
            })
        }

        proptest! {
            #[test]
            fn matches_triple_loop(inst in arb_instance()) {
                prop_assert_eq!(ov_has_solution(&inst).unwrap(), triple_loop(&inst));
            }

            #[test]
            fn extra_column_never_creates_solution(inst in arb_instance(), seed in any::<u64>()) {
                let before = ov_has_solution(&inst).unwrap();
                let mut grown = inst.clone();
                let mut bits = BitSource { rng: SplitMix64::seed_from_u64(seed), p: 0.75 };
                append_column(&mut grown, &mut bits);
                let after = ov_has_solution(&grown).unwrap();
                prop_assert!(before || !after);
            }
        }
    }
}

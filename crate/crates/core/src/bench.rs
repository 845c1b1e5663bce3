//! Benchmark harness: run solvers over a manifest of graphs, write one CSV row
//! per (instance, solver) and summarize times as `median [min, max]`.

use std::fmt::{self, Write as _};
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::bnb::{SolverConfig, Status};
use crate::encode::{decode_model, encode_ilp, encode_sat, AmoMode, VarMap};
use crate::graph::{load_graph_file, Graph};
use crate::pattern::PatternSpec;
use crate::solver::{solve_with, SolverKind};
use crate::verify::check_solution;

pub const CSV_HEADER: &str = "instance,solver,pattern,result,time_ms,nodes";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub path: PathBuf,
    /// Expected answer, when the manifest line carries one.
    pub label: Option<bool>,
}

/// One graph path per line, optionally followed by `yes` or `no`. Blank lines
/// and `#` comments are skipped; relative paths are taken from `base`.
pub fn parse_manifest(text: &str, base: &Path) -> Result<Vec<ManifestEntry>, String> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let path = PathBuf::from(parts.next().unwrap());
        let label = match parts.next().map(str::to_ascii_lowercase).as_deref() {
            None => None,
            Some("yes") => Some(true),
            Some("no") => Some(false),
            Some(other) => return Err(format!("manifest line {}: unknown label {other:?}", i + 1)),
        };
        if parts.next().is_some() {
            return Err(format!("manifest line {}: too many fields", i + 1));
        }
        let path = if path.is_relative() { base.join(path) } else { path };
        out.push(ManifestEntry { path, label });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BenchSolver {
    Internal(SolverKind),
    /// External SAT solver binary fed the pairwise CNF.
    ExternalCnf(PathBuf),
    /// External program fed the LP file.
    ExternalLp(PathBuf),
}

impl BenchSolver {
    pub fn parse(s: &str) -> Result<Self, String> {
        if let Some(bin) = s.strip_prefix("cnf:") {
            Ok(BenchSolver::ExternalCnf(bin.into()))
        } else if let Some(bin) = s.strip_prefix("lp:") {
            Ok(BenchSolver::ExternalLp(bin.into()))
        } else {
            s.parse().map(BenchSolver::Internal)
        }
    }

    pub fn name(&self) -> String {
        match self {
            BenchSolver::Internal(k) => k.name().to_string(),
            BenchSolver::ExternalCnf(b) => format!("cnf:{}", b.display()),
            BenchSolver::ExternalLp(b) => format!("lp:{}", b.display()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BenchResult {
    Yes,
    No,
    Timeout,
    Error(String),
}

impl BenchResult {
    pub fn as_str(&self) -> &'static str {
        match self {
            BenchResult::Yes => "yes",
            BenchResult::No => "no",
            BenchResult::Timeout => "timeout",
            BenchResult::Error(_) => "error",
        }
    }

    fn answer(&self) -> Option<bool> {
        match self {
            BenchResult::Yes => Some(true),
            BenchResult::No => Some(false),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub instance: String,
    pub solver: String,
    pub pattern: String,
    pub result: BenchResult,
    pub time_ms: f64,
    pub nodes: u64,
}

impl BenchRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:.3},{}",
            csv_field(&self.instance),
            csv_field(&self.solver),
            self.pattern,
            self.result.as_str(),
            self.time_ms,
            self.nodes
        )
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub solver: SolverConfig,
    pub jobs: usize,
}

fn run_cell(g: &Graph, h: &PatternSpec, solver: &BenchSolver, cfg: &SolverConfig) -> (BenchResult, f64, u64) {
    let start = Instant::now();
    let (result, nodes) = match solver {
        BenchSolver::Internal(kind) => match solve_with(*kind, g, h, cfg) {
            Ok(out) => {
                let r = match out.status {
                    Status::Found => {
                        // the solvers verify already; the record is only written for a checked witness
                        let w = out.witness.as_deref().unwrap_or_default();
                        match check_solution(g, h, w) {
                            Ok(()) => BenchResult::Yes,
                            Err(v) => BenchResult::Error(v.to_string()),
                        }
                    }
                    Status::NotFound => BenchResult::No,
                    Status::Timeout => BenchResult::Timeout,
                };
                (r, out.stats.nodes)
            }
            Err(e) => (BenchResult::Error(e.to_string()), 0),
        },
        BenchSolver::ExternalCnf(bin) => (run_external_cnf(bin, g, h, cfg.timeout), 0),
        BenchSolver::ExternalLp(bin) => (run_external_lp(bin, g, h, cfg.timeout), 0),
    };
    (result, start.elapsed().as_secs_f64() * 1000.0, nodes)
}

/// Run every (instance, solver) cell; records come back in manifest order
/// with solvers in the given order within each instance.
pub fn run_bench(
    entries: &[ManifestEntry],
    pattern: &PatternSpec,
    solvers: &[BenchSolver],
    cfg: &BenchConfig,
) -> Vec<BenchRecord> {
    let graphs: Vec<Result<Graph, String>> = entries
        .iter()
        .map(|e| load_graph_file(&e.path, None).map_err(|err| err.to_string()))
        .collect();
    let cells: Vec<(usize, usize)> = (0..entries.len())
        .flat_map(|i| (0..solvers.len()).map(move |s| (i, s)))
        .collect();
    let work = |&(i, s): &(usize, usize)| {
        let (result, time_ms, nodes) = match &graphs[i] {
            Ok(g) => run_cell(g, pattern, &solvers[s], &cfg.solver),
            Err(e) => (BenchResult::Error(e.clone()), 0.0, 0),
        };
        BenchRecord {
            instance: entries[i].path.display().to_string(),
            solver: solvers[s].name(),
            pattern: pattern.to_string(),
            result,
            time_ms,
            nodes,
        }
    };
    if cfg.jobs <= 1 {
        return cells.iter().map(work).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build() {
        Ok(pool) => pool.install(|| cells.par_iter().map(work).collect()),
        Err(_) => cells.iter().map(work).collect(),
    }
}

pub fn to_csv(records: &[BenchRecord]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in records {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s
}

/// Median of sorted values, averaging the middle pair for even counts.
pub fn median(sorted: &[f64]) -> Option<f64> {
    let n = sorted.len();
    match n {
        0 => None,
        _ if n % 2 == 1 => Some(sorted[n / 2]),
        _ => Some((sorted[n / 2 - 1] + sorted[n / 2]) / 2.0),
    }
}

/// A time or a timeout; timeouts sort after every time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Ms(f64),
    Timeout,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Ms(v) => write!(f, "{v:.3}"),
            Cell::Timeout => f.write_str("TO"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupSummary {
    pub group: &'static str,
    pub count: usize,
    /// `(median, min, max)`; `None` for an empty group.
    pub stats: Option<(Cell, Cell, Cell)>,
}

fn summarize_times(times: &[Cell]) -> Option<(Cell, Cell, Cell)> {
    let mut v: Vec<f64> = times
        .iter()
        .map(|c| match c {
            Cell::Ms(x) => *x,
            Cell::Timeout => f64::INFINITY,
        })
        .collect();
    v.sort_by(f64::total_cmp);
    let cell = |x: f64| if x.is_finite() { Cell::Ms(x) } else { Cell::Timeout };
    let med = median(&v)?;
    Some((cell(med), cell(v[0]), cell(v[v.len() - 1])))
}

/// Group of each instance: its manifest label if present, otherwise the
/// answer the decided runs agree on.
pub fn instance_groups(entries: &[ManifestEntry], records: &[BenchRecord], solvers: usize) -> Vec<&'static str> {
    entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            if let Some(l) = e.label {
                return if l { "yes" } else { "no" };
            }
            let answers: Vec<bool> = records[i * solvers..(i + 1) * solvers]
                .iter()
                .filter_map(|r| r.result.answer())
                .collect();
            match (answers.contains(&true), answers.contains(&false)) {
                (true, false) => "yes",
                (false, true) => "no",
                (true, true) => "conflict",
                (false, false) => "unknown",
            }
        })
        .collect()
}

/// Per solver, per group: count and `median [min, max]` of the times.
/// Error rows are left out of the statistics.
pub fn summarize(
    entries: &[ManifestEntry],
    records: &[BenchRecord],
    solvers: &[BenchSolver],
) -> Vec<(String, Vec<GroupSummary>)> {
    let groups = instance_groups(entries, records, solvers.len());
    solvers
        .iter()
        .enumerate()
        .map(|(s, solver)| {
            let mut out = Vec::new();
            for group in ["yes", "no", "unknown", "conflict"] {
                let times: Vec<Cell> = (0..entries.len())
                    .filter(|&i| groups[i] == group)
                    .map(|i| &records[i * solvers.len() + s])
                    .filter_map(|r| match r.result {
                        BenchResult::Error(_) => None,
                        BenchResult::Timeout => Some(Cell::Timeout),
                        _ => Some(Cell::Ms(r.time_ms)),
                    })
                    .collect();
                if group == "yes" || group == "no" || !times.is_empty() {
                    out.push(GroupSummary {
                        group,
                        count: times.len(),
                        stats: summarize_times(&times),
                    });
                }
            }
            (solver.name(), out)
        })
        .collect()
}

pub fn format_summary(summary: &[(String, Vec<GroupSummary>)]) -> String {
    let mut s = String::new();
    for (solver, groups) in summary {
        let _ = writeln!(s, "[{solver}]");
        for g in groups {
            match g.stats {
                Some((med, min, max)) => {
                    let _ = writeln!(s, "{} n={} {med} [{min}, {max}]", g.group, g.count);
                }
                None => {
                    let _ = writeln!(s, "{} n=0 - [-, -]", g.group);
                }
            }
        }
    }
    s
}

static TEMP_COUNTER: AtomicU64 = AtomicU64::new(0);

fn temp_path(ext: &str) -> PathBuf {
    let id = TEMP_COUNTER.fetch_add(1, Ordering::Relaxed);
    std::env::temp_dir().join(format!("dompat-{}-{id}.{ext}", std::process::id()))
}

/// Run `bin file`, killing it at the deadline. `None` on timeout.
fn run_with_deadline(bin: &Path, file: &Path, timeout: Duration) -> Result<Option<String>, String> {
    let mut child = Command::new(bin)
        .arg(file)
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|e| format!("cannot start {}: {e}", bin.display()))?;
    let start = Instant::now();
    let mut stdout = child.stdout.take().expect("piped stdout");
    let reader = std::thread::spawn(move || {
        let mut buf = String::new();
        let _ = std::io::Read::read_to_string(&mut stdout, &mut buf);
        buf
    });
    loop {
        match child.try_wait() {
            Ok(Some(_)) => break,
            Ok(None) if start.elapsed() >= timeout => {
                let _ = child.kill();
                let _ = child.wait();
                return Ok(None);
            }
            Ok(None) => std::thread::sleep(Duration::from_millis(2)),
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(Some(reader.join().unwrap_or_default()))
}

fn finish_external(g: &Graph, h: &PatternSpec, map: &VarMap, model: Option<Vec<bool>>) -> BenchResult {
    let Some(model) = model else {
        return BenchResult::No;
    };
    match decode_model(map, &model) {
        Some(w) => match check_solution(g, h, &w) {
            Ok(()) => BenchResult::Yes,
            Err(v) => BenchResult::Error(format!("external witness rejected: {v}")),
        },
        None => BenchResult::Error("external model does not decode".into()),
    }
}

fn write_temp(ext: &str, text: &str) -> Result<PathBuf, String> {
    let path = temp_path(ext);
    let mut f = std::fs::File::create(&path).map_err(|e| e.to_string())?;
    f.write_all(text.as_bytes()).map_err(|e| e.to_string())?;
    Ok(path)
}

/// SAT competition output: `s SATISFIABLE` / `s UNSATISFIABLE` and `v` lines.
fn run_external_cnf(bin: &Path, g: &Graph, h: &PatternSpec, timeout: Duration) -> BenchResult {
    let (f, map) = encode_sat(g, h, AmoMode::Pairwise);
    let path = match write_temp("cnf", &f.to_dimacs(&map)) {
        Ok(p) => p,
        Err(e) => return BenchResult::Error(e),
    };
    let out = run_with_deadline(bin, &path, timeout);
    let _ = std::fs::remove_file(&path);
    let text = match out {
        Ok(Some(t)) => t,
        Ok(None) => return BenchResult::Timeout,
        Err(e) => return BenchResult::Error(e),
    };
    if text.lines().any(|l| l.trim() == "s UNSATISFIABLE") {
        return finish_external(g, h, &map, None);
    }
    if !text.lines().any(|l| l.trim() == "s SATISFIABLE") {
        return BenchResult::Error("no solution line in solver output".into());
    }
    let mut model = vec![false; f.num_vars];
    for lit in text
        .lines()
        .filter_map(|l| l.strip_prefix("v "))
        .flat_map(str::split_whitespace)
        .filter_map(|t| t.parse::<i64>().ok())
    {
        let v = lit.unsigned_abs() as usize;
        if lit > 0 && v <= model.len() {
            model[v - 1] = true;
        }
    }
    finish_external(g, h, &map, Some(model))
}

/// Expects `infeasible` or lines `<variable> <value>` on stdout.
fn run_external_lp(bin: &Path, g: &Graph, h: &PatternSpec, timeout: Duration) -> BenchResult {
    let model = encode_ilp(g, h);
    let path = match write_temp("lp", &model.to_lp_string()) {
        Ok(p) => p,
        Err(e) => return BenchResult::Error(e),
    };
    let out = run_with_deadline(bin, &path, timeout);
    let _ = std::fs::remove_file(&path);
    let text = match out {
        Ok(Some(t)) => t,
        Ok(None) => return BenchResult::Timeout,
        Err(e) => return BenchResult::Error(e),
    };
    if text.lines().any(|l| l.trim().eq_ignore_ascii_case("infeasible")) {
        return finish_external(g, h, &model.map, None);
    }
    let map = model.map;
    let mut x = vec![false; map.primary_count()];
    for line in text.lines() {
        let mut it = line.split_whitespace();
        let (Some(name), Some(val)) = (it.next(), it.next()) else { continue };
        let Some((v, p)) = name
            .strip_prefix('x')
            .and_then(|r| r.split_once('_'))
            .and_then(|(v, p)| Some((v.parse::<usize>().ok()?, p.parse::<usize>().ok()?)))
        else {
            continue;
        };
        if v < map.n && p < map.k && val.parse::<f64>().is_ok_and(|x| x > 0.5) {
            x[map.index(v, p) - 1] = true;
        }
    }
    finish_external(g, h, &map, Some(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_convention() {
        assert_eq!(median(&[1.0, 2.0, 3.0]), Some(2.0));
        assert_eq!(median(&[1.0, 2.0, 3.0, 10.0]), Some(2.5));
        assert_eq!(median(&[]), None);
    }

    #[test]
    fn timeouts_render_as_to() {
        let all_to = summarize_times(&[Cell::Timeout, Cell::Timeout]).unwrap();
        assert_eq!(all_to, (Cell::Timeout, Cell::Timeout, Cell::Timeout));
        let mixed = summarize_times(&[Cell::Ms(1.0), Cell::Timeout, Cell::Ms(3.0)]).unwrap();
        assert_eq!(mixed, (Cell::Ms(3.0), Cell::Ms(1.0), Cell::Timeout));
        let even = summarize_times(&[Cell::Ms(1.0), Cell::Timeout]).unwrap();
        assert_eq!(even.0, Cell::Timeout);
        assert_eq!(Cell::Timeout.to_string(), "TO");
    }

    #[test]
    fn manifest_parsing() {
        let m = parse_manifest("# c\na.el yes\n\n/abs/b.g6\nc.dimacs NO\n", Path::new("/base")).unwrap();
        assert_eq!(m.len(), 3);
        assert_eq!(m[0], ManifestEntry { path: "/base/a.el".into(), label: Some(true) });
        assert_eq!(m[1].path, PathBuf::from("/abs/b.g6"));
        assert_eq!(m[2].label, Some(false));
        assert!(parse_manifest("a.el maybe\n", Path::new(".")).is_err());
    }

    #[test]
    fn csv_quoting() {
        let r = BenchRecord {
            instance: "a,b.el".into(),
            solver: "proto".into(),
            pattern: "M2".into(),
            result: BenchResult::Yes,
            time_ms: 1.5,
            nodes: 7,
        };
        assert_eq!(r.csv_row(), "\"a,b.el\",proto,M2,yes,1.500,7");
    }
}

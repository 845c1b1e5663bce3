//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::{gnp, rng, sparse_connected, sweep_graph, sweep_patterns};
use dompat_core::bench::{
    format_summary, parse_manifest, run_bench, summarize, to_csv, BenchConfig, BenchResult, BenchSolver,
    CSV_HEADER,
};
use dompat_core::bnb::{SolverConfig, Status};
use dompat_core::encode::{
    encode_ilp, encode_sat, eval_cnf, lp_feasible_by_role_enumeration, mini_dpll, AmoMode, DpllResult,
};
use dompat_core::graph::Graph;
use dompat_core::ovgen::{gen_ov, ov_has_solution, OvInstance, OvLabel, OvParams};
use dompat_core::pattern::PatternSpec;
use dompat_core::solver::{solve_with, SolverKind};
use dompat_core::verify::verify_solution;
use rand::Rng;

type Outcome = Result<String, String>;

/// YES/NO per (seed, pattern) for one solver; `None` marks a timeout or error.
type Column = Vec<Option<bool>>;

struct Sweep {
    graphs: Vec<Graph>,
    oracle: Column,
    proto: Column,
    tailored: Column,
}

fn decide(kind: SolverKind, g: &Graph, h: &PatternSpec, cfg: &SolverConfig, bad: &mut Vec<String>) -> Option<bool> {
    match solve_with(kind, g, h, cfg) {
        Ok(out) => {
            if let Some(w) = &out.witness {
                if !verify_solution(g, h, w) {
                    bad.push(format!("{kind} witness {w:?} fails for {h}"));
                }
            }
            out.answer()
        }
        Err(e) => {
            bad.push(format!("{kind} on {h}: {e}"));
            None
        }
    }
}

fn run_sweep(cfg: &SolverConfig, with_oracle: bool) -> (Sweep, Vec<String>) {
    let graphs: Vec<Graph> = (1..=500).map(sweep_graph).collect();
    let mut bad = Vec::new();
    let mut sweep = Sweep {
        graphs: Vec::new(),
        oracle: Vec::new(),
        proto: Vec::new(),
        tailored: Vec::new(),
    };
    for g in &graphs {
        for h in sweep_patterns() {
            if with_oracle {
                sweep.oracle.push(decide(SolverKind::Oracle, g, &h, cfg, &mut bad));
            }
            sweep.proto.push(decide(SolverKind::Proto, g, &h, cfg, &mut bad));
            sweep.tailored.push(decide(SolverKind::Auto, g, &h, cfg, &mut bad));
        }
    }
    sweep.graphs = graphs;
    (sweep, bad)
}

fn criterion_1(sweep: &Sweep, bad: &[String]) -> Outcome {
    if let Some(b) = bad.first() {
        return Err(b.clone());
    }
    let cells = sweep.oracle.len();
    if sweep.oracle.iter().any(Option::is_none) {
        return Err("oracle did not decide every instance".into());
    }
    let mism_proto = (0..cells).filter(|&i| sweep.proto[i] != sweep.oracle[i]).count();
    let mism_tail = (0..cells).filter(|&i| sweep.tailored[i] != sweep.oracle[i]).count();
    let yes = sweep.oracle.iter().filter(|a| **a == Some(true)).count();
    if mism_proto + mism_tail > 0 {
        return Err(format!("{mism_proto} proto and {mism_tail} tailored mismatches over {cells} cells"));
    }
    Ok(format!("{} graphs x 6 patterns, {yes} YES / {} NO, all agree", sweep.graphs.len(), cells - yes))
}

fn criterion_2(base: &Sweep) -> Outcome {
    let cfg = SolverConfig {
        scatter_prune: false,
        ..SolverConfig::default()
    };
    let (sweep, bad) = run_sweep(&cfg, false);
    if let Some(b) = bad.first() {
        return Err(b.clone());
    }
    if sweep.proto != base.proto || sweep.tailored != base.tailored {
        return Err("answers changed without the scattered-set bound".into());
    }
    Ok(format!("{} cells identical without the bound", sweep.proto.len()))
}

fn criterion_3(sweep: &Sweep) -> Outcome {
    let patterns = sweep_patterns();
    let mut checked = 0;
    for (gi, g) in sweep.graphs.iter().enumerate() {
        if g.n() > 12 {
            continue;
        }
        for (pi, h) in patterns.iter().enumerate() {
            let expected = sweep.oracle[gi * patterns.len() + pi].expect("decided");
            let witness = dompat_core::oracle::solve_oracle(g, h, &SolverConfig::default())
                .map_err(|e| e.to_string())?
                .witness;
            for mode in [AmoMode::Pairwise, AmoMode::Ladder] {
                let (f, map) = encode_sat(g, h, mode);
                let verdict = match mini_dpll(&f, 50_000_000) {
                    DpllResult::Sat(_) => true,
                    DpllResult::Unsat => false,
                    DpllResult::Unknown => return Err(format!("dpll budget exhausted on graph {gi} {h}")),
                };
                if verdict != expected {
                    return Err(format!("{mode:?} CNF verdict differs on graph {gi} {h}"));
                }
                if let Some(w) = &witness {
                    if !eval_cnf(&f, &f.complete_assignment(&map.assignment_for(w))) {
                        return Err(format!("oracle witness violates {mode:?} CNF on graph {gi} {h}"));
                    }
                }
            }
            let lp = encode_ilp(g, h);
            if lp_feasible_by_role_enumeration(&lp).is_some() != expected {
                return Err(format!("LP verdict differs on graph {gi} {h}"));
            }
            if let Some(w) = &witness {
                let violated = lp.violated(&lp.map.assignment_for(w));
                if !violated.is_empty() {
                    return Err(format!("oracle witness violates LP rows {violated:?}"));
                }
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} instances with n <= 12, three encodings agree"))
}

fn criterion_4() -> Outcome {
    let c6 = Graph::from_edges(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
    let h = PatternSpec::Path(2);
    let (f, map) = encode_sat(&c6, &h, AmoMode::Pairwise);
    let (fl, mapl) = encode_sat(&c6, &h, AmoMode::Ladder);
    let lp = encode_ilp(&c6, &h);
    let got = (
        map.primary_count(),
        f.num_vars,
        f.clauses.len(),
        fl.num_vars,
        fl.clauses.len(),
        [
            lp.rows_with_prefix('a'),
            lp.rows_with_prefix('d'),
            lp.rows_with_prefix('i'),
            lp.rows_with_prefix('c'),
        ],
    );
    // ladder: two 6-sets (5 aux, 14 clauses each) and six 2-sets (1 aux, 2 clauses each)
    let want = (12, 12, 62, 12 + 10 + 6, 28 + 2 + 6 + 18 + 12, [2, 6, 6, 18]);
    if got != want {
        return Err(format!("counts {got:?}, expected {want:?}"));
    }
    let again = (
        encode_sat(&c6, &h, AmoMode::Pairwise).0.to_dimacs(&map),
        encode_sat(&c6, &h, AmoMode::Ladder).0.to_dimacs(&mapl),
        encode_ilp(&c6, &h).to_lp_string(),
    );
    if again != (f.to_dimacs(&map), fl.to_dimacs(&mapl), lp.to_lp_string()) {
        return Err("encodings are not byte-stable".into());
    }
    Ok("12 primaries, 62 pairwise clauses, 66 ladder clauses, rows 2/6/6/18, byte-stable".into())
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

fn criterion_5() -> Outcome {
    let cfg = SolverConfig {
        debug_checks: false,
        ..SolverConfig::default()
    };
    let patterns = [PatternSpec::Matching(3), PatternSpec::Cycle(5), PatternSpec::Path(5)];
    let mut times: Vec<Vec<f64>> = vec![Vec::new(); patterns.len()];
    let mut edges = 0usize;
    let mut timeouts = 0;
    for seed in 0..1000u64 {
        let mut r = rng(10_000 + seed);
        let n = r.gen_range(10..=110);
        let g = sparse_connected(n, 1.15, &mut r);
        edges += g.m();
        for (i, h) in patterns.iter().enumerate() {
            let start = Instant::now();
            let out = solve_with(SolverKind::Auto, &g, h, &cfg).map_err(|e| e.to_string())?;
            times[i].push(start.elapsed().as_secs_f64() * 1000.0);
            if out.status == Status::Timeout {
                timeouts += 1;
            }
        }
    }
    let medians: Vec<f64> = times.into_iter().map(median).collect();
    let detail = format!(
        "mean m = {:.1}, median ms M3 {:.4} / C5 {:.4} / P5 {:.4}, {timeouts} timeouts",
        edges as f64 / 1000.0,
        medians[0],
        medians[1],
        medians[2]
    );
    if timeouts == 0 && medians.iter().all(|&m| m < 50.0) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_6() -> Outcome {
    let cfg = SolverConfig {
        debug_checks: false,
        ..SolverConfig::default()
    };
    let h = PatternSpec::Matching(3);
    let mut proto = Vec::new();
    let mut matching = Vec::new();
    for seed in 0..50u64 {
        let mut r = rng(20_000 + seed);
        let g = gnp(200, 0.5, &mut r);
        let a = solve_with(SolverKind::Proto, &g, &h, &cfg).map_err(|e| e.to_string())?;
        let b = solve_with(SolverKind::Matching, &g, &h, &cfg).map_err(|e| e.to_string())?;
        if a.answer() != b.answer() || a.status == Status::Timeout {
            return Err(format!("seed {seed}: answers {:?} vs {:?}", a.answer(), b.answer()));
        }
        proto.push(a.stats.nodes as f64);
        matching.push(b.stats.nodes as f64);
    }
    let (mp, mm) = (median(proto), median(matching));
    let detail = format!("median nodes matching {mm} vs proto {mp}");
    if mm < mp {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_7() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut params = OvParams {
        k: 6,
        set_size: 20,
        p: 0.75,
        ..OvParams::default()
    };
    let mut dims = Vec::new();
    for target in [OvLabel::Yes, OvLabel::No] {
        for seed in 1..=100u64 {
            params.seed = seed;
            let inst = gen_ov(&params, target).map_err(|e| e.to_string())?;
            let path = dir.path().join(format!("{target}-{seed}.ov"));
            std::fs::write(&path, inst.to_text()).map_err(|e| e.to_string())?;
            let parsed = OvInstance::parse(&std::fs::read_to_string(&path).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            let has = ov_has_solution(&parsed).map_err(|e| e.to_string())?;
            if parsed.label != target || has != (target == OvLabel::Yes) {
                return Err(format!("{target} seed {seed}: label {} but solution {has}", parsed.label));
            }
            dims.push(inst.d);
        }
    }
    for target in [OvLabel::Yes, OvLabel::No] {
        for seed in 1..=100u64 {
            params.seed = seed;
            let again = gen_ov(&params, target).map_err(|e| e.to_string())?.to_text();
            let path = dir.path().join(format!("{target}-{seed}.ov"));
            if std::fs::read(&path).map_err(|e| e.to_string())? != again.as_bytes() {
                return Err(format!("{target} seed {seed} is not reproducible"));
            }
        }
    }
    Ok(format!(
        "200 labels certified, byte-identical on regeneration, d in [{}, {}]",
        dims.iter().min().unwrap(),
        dims.iter().max().unwrap()
    ))
}

fn write_graph(dir: &std::path::Path, name: &str, g: &Graph) -> Result<(), String> {
    let text: String = g.edges().map(|(u, v)| format!("{u} {v}\n")).collect();
    std::fs::write(dir.join(name), text).map_err(|e| e.to_string())
}

fn criterion_8() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let solvers = [
        BenchSolver::Internal(SolverKind::Proto),
        BenchSolver::Internal(SolverKind::Matching),
    ];
    let h = PatternSpec::Matching(2);

    // normal run: two YES instances and one NO instance
    let c6 = Graph::from_edges(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
    let c7 = Graph::from_edges(7, (0..7).map(|i| (i, (i + 1) % 7))).unwrap();
    let star = Graph::from_edges(5, (1..5).map(|i| (0, i))).unwrap();
    write_graph(dir.path(), "c6.el", &c6)?;
    write_graph(dir.path(), "c7.el", &c7)?;
    write_graph(dir.path(), "star.el", &star)?;
    let entries = parse_manifest("c6.el\nc7.el\nstar.el\n", dir.path())?;
    let cfg = BenchConfig {
        solver: SolverConfig::default(),
        jobs: 2,
    };
    let records = run_bench(&entries, &h, &solvers, &cfg);
    let csv = to_csv(&records);
    let lines: Vec<&str> = csv.lines().collect();
    if lines.len() != 7 || lines[0] != CSV_HEADER {
        return Err(format!("expected header + 6 rows, got {} lines", lines.len()));
    }
    let results: Vec<&str> = lines[1..].iter().map(|l| l.split(',').nth(3).unwrap_or("")).collect();
    if results != ["yes", "yes", "yes", "yes", "no", "no"] {
        return Err(format!("unexpected results {results:?}"));
    }
    let summary = format_summary(&summarize(&entries, &records, &solvers));
    let blocks = summary.lines().filter(|l| l.starts_with('[')).count();
    let yes_rows = summary.lines().filter(|l| l.starts_with("yes n=2 ")).count();
    let no_rows = summary.lines().filter(|l| l.starts_with("no n=1 ")).count();
    if (blocks, yes_rows, no_rows) != (2, 2, 2) {
        return Err(format!("summary shape wrong:\n{summary}"));
    }

    // 1 ms run on instances that take seconds
    let mut names = String::new();
    for seed in 0..3u64 {
        let mut r = rng(400 + seed);
        write_graph(dir.path(), &format!("dense{seed}.el"), &gnp(400, 0.5, &mut r))?;
        names.push_str(&format!("dense{seed}.el\n"));
    }
    let entries = parse_manifest(&names, dir.path())?;
    let cfg = BenchConfig {
        solver: SolverConfig {
            timeout: Duration::from_millis(1),
            ..SolverConfig::default()
        },
        jobs: 1,
    };
    let h = PatternSpec::Path(5);
    let solvers = [
        BenchSolver::Internal(SolverKind::Proto),
        BenchSolver::Internal(SolverKind::Path),
    ];
    let records = run_bench(&entries, &h, &solvers, &cfg);
    if records.len() != 6 || records.iter().any(|r| r.result != BenchResult::Timeout) {
        return Err("1 ms run did not time out everywhere".into());
    }
    let summary = format_summary(&summarize(&entries, &records, &solvers));
    let to_rows = summary.lines().filter(|l| *l == "unknown n=3 TO [TO, TO]").count();
    if to_rows != 2 {
        return Err(format!("timeouts not rendered as TO:\n{summary}"));
    }
    Ok("6 rows + 2 summary blocks; 1 ms run renders TO [TO, TO]".into())
}

fn report(id: usize, name: &str, start: Instant, outcome: Outcome) -> bool {
    let secs = start.elapsed().as_secs_f64();
    match outcome {
        Ok(detail) => {
            println!("acceptance {id} {name}: PASS ({detail}; {secs:.1}s)");
            true
        }
        Err(detail) => {
            println!("acceptance {id} {name}: FAIL ({detail}; {secs:.1}s)");
            false
        }
    }
}

fn main() {
    let mut ok = true;
    let t = Instant::now();
    let (sweep, bad) = run_sweep(&SolverConfig::default(), true);
    ok &= report(1, "oracle equivalence", t, criterion_1(&sweep, &bad));
    let t = Instant::now();
    ok &= report(2, "bound soundness", t, criterion_2(&sweep));
    let t = Instant::now();
    ok &= report(3, "encoding correctness", t, criterion_3(&sweep));
    let t = Instant::now();
    ok &= report(4, "formula counts", t, criterion_4());
    let t = Instant::now();
    ok &= report(5, "sparse performance", t, criterion_5());
    let t = Instant::now();
    ok &= report(6, "node count ordering", t, criterion_6());
    let t = Instant::now();
    ok &= report(7, "OV certification", t, criterion_7());
    let t = Instant::now();
    ok &= report(8, "bench harness", t, criterion_8());
    if !ok {
        std::process::exit(1);
    }
}

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use dompat_core::bench::{
    format_summary, parse_manifest, run_bench, summarize, to_csv, BenchConfig, BenchSolver,
};
use dompat_core::bnb::{SolverConfig, Status};
use dompat_core::encode::{encode_ilp, encode_sat, AmoMode};
use dompat_core::graph::{load_graph_file, Graph, GraphFormat};
use dompat_core::oracle::count_occurrences;
use dompat_core::ovgen::{gen_ov, OvLabel, OvParams};
use dompat_core::pattern::{parse_pattern, PatternSpec};
use dompat_core::solver::{solve_with, SolverKind};

#[derive(Parser)]
#[command(name = "dompat", version, about = "Find dominating induced copies of a small pattern graph")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide one instance and print a witness if there is one.
    Solve(SolveArgs),
    /// Write the instance as a CNF or LP file.
    Encode(EncodeArgs),
    /// Generate an orthogonal vectors instance with a certified label.
    GenOv(GenOvArgs),
    /// Run solvers over a manifest of graphs and write a CSV.
    Bench(BenchArgs),
    /// Count occurrences of the pattern and how many of them dominate.
    Count(CountArgs),
}

#[derive(Args)]
struct SearchOpts {
    /// Per-instance time limit in milliseconds.
    #[arg(long, default_value_t = 300_000)]
    timeout: u64,
    /// Turn off the scattered-set lower bound.
    #[arg(long)]
    no_scatter_prune: bool,
    /// Tailored solvers branch with the domination rule only.
    #[arg(long)]
    no_extension_rule: bool,
}

impl SearchOpts {
    fn config(&self) -> Result<SolverConfig> {
        if self.timeout == 0 {
            bail!("--timeout must be positive");
        }
        Ok(SolverConfig {
            timeout: Duration::from_millis(self.timeout),
            scatter_prune: !self.no_scatter_prune,
            extension_rule: !self.no_extension_rule,
            debug_checks: false,
            ..SolverConfig::default()
        })
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    graph: PathBuf,
    /// M<k>, C<k>, P<k>, or @FILE with the pattern as an edge list.
    #[arg(long)]
    pattern: String,
    #[arg(long, default_value = "auto")]
    solver: SolverKind,
    /// Graph file format; guessed from the extension when omitted.
    #[arg(long, alias = "graph-format")]
    format: Option<GraphFormat>,
    #[command(flatten)]
    search: SearchOpts,
}

#[derive(Clone, Copy, ValueEnum)]
enum EncodeFormat {
    Cnf,
    CnfLadder,
    Lp,
}

#[derive(Args)]
struct EncodeArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    pattern: String,
    #[arg(long, value_enum)]
    format: EncodeFormat,
    #[arg(long)]
    graph_format: Option<GraphFormat>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenOvArgs {
    #[arg(long, default_value_t = 6)]
    k: usize,
    #[arg(long, default_value_t = 45)]
    set_size: usize,
    #[arg(long, default_value_t = 0.75)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    target: OvLabel,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// One graph path per line, optionally followed by `yes` or `no`.
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long)]
    pattern: String,
    /// Comma separated solver names.
    #[arg(long, default_value = "auto", value_delimiter = ',')]
    solvers: Vec<String>,
    /// External solver hooks, `cnf:<binary>` or `lp:<binary>`.
    #[arg(long)]
    external: Vec<String>,
    /// CSV output; the summary goes next to it with a `.summary` suffix.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[command(flatten)]
    search: SearchOpts,
}

#[derive(Args)]
struct CountArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    pattern: String,
    #[arg(long)]
    graph_format: Option<GraphFormat>,
}

fn load(path: &Path, format: Option<GraphFormat>) -> Result<Graph> {
    load_graph_file(path, format).with_context(|| format!("cannot load {}", path.display()))
}

fn pattern(spec: &str) -> Result<PatternSpec> {
    parse_pattern(spec).map_err(|e| anyhow!("bad pattern {spec:?}: {e}"))
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_solve(a: SolveArgs) -> Result<ExitCode> {
    let h = pattern(&a.pattern)?;
    if !a.solver.supports(&h) {
        bail!("solver {} does not handle pattern {h}", a.solver);
    }
    let cfg = a.search.config()?;
    let g = load(&a.graph, a.format)?;
    let out = solve_with(a.solver, &g, &h, &cfg)?;
    match out.status {
        Status::Found => {
            let w = out.witness.context("solver reported a solution without a witness")?;
            let line: Vec<String> = w.iter().map(ToString::to_string).collect();
            println!("YES\n{}", line.join(" "));
            Ok(ExitCode::SUCCESS)
        }
        Status::NotFound => {
            println!("NO");
            Ok(ExitCode::SUCCESS)
        }
        Status::Timeout => {
            println!("TIMEOUT");
            Ok(ExitCode::from(2))
        }
    }
}

fn cmd_encode(a: EncodeArgs) -> Result<ExitCode> {
    let h = pattern(&a.pattern)?;
    let g = load(&a.graph, a.graph_format)?;
    let text = match a.format {
        EncodeFormat::Cnf => {
            let (f, map) = encode_sat(&g, &h, AmoMode::Pairwise);
            f.to_dimacs(&map)
        }
        EncodeFormat::CnfLadder => {
            let (f, map) = encode_sat(&g, &h, AmoMode::Ladder);
            f.to_dimacs(&map)
        }
        EncodeFormat::Lp => encode_ilp(&g, &h).to_lp_string(),
    };
    write_output(a.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_gen_ov(a: GenOvArgs) -> Result<ExitCode> {
    let params = OvParams {
        k: a.k,
        set_size: a.set_size,
        p: a.p,
        seed: a.seed,
        ..OvParams::default()
    };
    let inst = gen_ov(&params, a.target)?;
    write_output(a.out.as_deref(), &inst.to_text())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(a: BenchArgs) -> Result<ExitCode> {
    let h = pattern(&a.pattern)?;
    let mut solvers = Vec::new();
    for s in &a.solvers {
        let s = BenchSolver::parse(s).map_err(|e| anyhow!(e))?;
        if let BenchSolver::Internal(kind) = s {
            if !kind.supports(&h) {
                bail!("solver {kind} does not handle pattern {h}");
            }
        }
        solvers.push(s);
    }
    for e in &a.external {
        match BenchSolver::parse(e).map_err(|e| anyhow!(e))? {
            BenchSolver::Internal(_) => bail!("--external expects cnf:<binary> or lp:<binary>, got {e:?}"),
            s => solvers.push(s),
        }
    }
    let text = std::fs::read_to_string(&a.manifest)
        .with_context(|| format!("cannot read {}", a.manifest.display()))?;
    let base = a.manifest.parent().unwrap_or(Path::new("."));
    let entries = parse_manifest(&text, base).map_err(|e| anyhow!(e))?;
    let cfg = BenchConfig {
        solver: a.search.config()?,
        jobs: a.jobs.max(1),
    };
    let records = run_bench(&entries, &h, &solvers, &cfg);
    let summary = format_summary(&summarize(&entries, &records, &solvers));
    match &a.out {
        Some(out) => {
            write_output(Some(out), &to_csv(&records))?;
            let mut sp = out.clone().into_os_string();
            sp.push(".summary");
            write_output(Some(Path::new(&sp)), &summary)?;
            print!("{summary}");
        }
        None => {
            print!("{}", to_csv(&records));
            print!("\n{summary}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_count(a: CountArgs) -> Result<ExitCode> {
    let h = pattern(&a.pattern)?;
    let g = load(&a.graph, a.graph_format)?;
    let c = count_occurrences(&g, &h)?;
    println!("occurrences {}\ndominating {}", c.occurrences, c.dominating);
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Cmd::Solve(a) => cmd_solve(a),
        Cmd::Encode(a) => cmd_encode(a),
        Cmd::GenOv(a) => cmd_gen_ov(a),
        Cmd::Bench(a) => cmd_bench(a),
        Cmd::Count(a) => cmd_count(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

mod manifest;

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use ustcon_core::io::{read_edge_list, write_edge_list};
use ustcon_core::solver::{
    solve_logspace, test_connectivity, LandmarkConfig, DEFAULT_BETA, DEFAULT_GAMMA,
};
use ustcon_core::stats::{default_step_cap, estimate_cover_time, fit_scaling_exponent};
use ustcon_core::validate::{run_suite, Budget, Suite};
use ustcon_core::walk::{run_hybrid_walk, run_walk};
use ustcon_core::{rng, ConnectivityQuery, Graph, GraphSpec, Kernel, TraceOptions};

use crate::manifest::RunManifest;

#[derive(Parser)]
#[command(
    name = "ustcon",
    version,
    about = "Random-walk s-t connectivity solvers and walk statistics"
)]
struct Cli {
    /// Worker threads for trial-level parallelism (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether s and t are connected.
    Solve(SolveArgs),
    /// Write a generated graph in edge-list format.
    Generate(GenerateArgs),
    /// Cover-time sweep over kernels and sizes, as CSV.
    Bench(BenchArgs),
    /// Run the invariant suites.
    Validate(ValidateArgs),
    /// Run a single walk and optionally dump its counters.
    Walk(WalkArgs),
}

#[derive(Args, Serialize, Clone)]
#[group(required = true, multiple = false)]
struct GraphSource {
    /// Edge-list file.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Generator spec, e.g. glitter:50 or random:100:300:seed7.
    #[arg(long = "gen")]
    generator: Option<String>,
}

impl GraphSource {
    fn describe(&self) -> String {
        match (&self.graph, &self.generator) {
            (Some(p), _) => p.display().to_string(),
            (_, Some(s)) => s.clone(),
            _ => unreachable!("clap requires one source"),
        }
    }

    fn load(&self) -> Result<(Graph, Option<ConnectivityQuery>), String> {
        if let Some(path) = &self.graph {
            let file = File::open(path).map_err(|e| format!("{}: {e}", path.display()))?;
            let g = read_edge_list(BufReader::new(file))
                .map_err(|e| format!("{}: {e}", path.display()))?;
            return Ok((g, None));
        }
        let spec: GraphSpec = self
            .generator
            .as_deref()
            .unwrap_or_default()
            .parse()
            .map_err(err)?;
        spec.build().map_err(err)
    }
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum SolverChoice {
    Landmark,
    Logspace,
}

#[derive(Args, Serialize)]
struct SolveArgs {
    #[command(flatten)]
    source: GraphSource,
    /// Source node (default: the generator's query, else 0).
    #[arg(long)]
    s: Option<usize>,
    /// Target node (default: the generator's query, else n-1).
    #[arg(long)]
    t: Option<usize>,
    #[arg(long, value_enum, default_value = "landmark")]
    solver: SolverChoice,
    /// Number of sampled landmarks.
    #[arg(long, default_value_t = 4)]
    p: usize,
    /// Uniform multiplier on walk lengths and round counts.
    #[arg(long, default_value_t = 1.0)]
    c_scale: f64,
    #[arg(long, default_value_t = DEFAULT_GAMMA)]
    gamma: f64,
    #[arg(long, default_value_t = DEFAULT_BETA)]
    beta: f64,
    /// Fixed split parameter D instead of ⌈√(m/p)⌉.
    #[arg(long)]
    split: Option<usize>,
    /// Keep walking after s and t are merged, to measure the full budget.
    #[arg(long)]
    full_budget: bool,
    #[arg(long, env = "USTCON_SEED")]
    seed: Option<u64>,
    /// Also write the manifest, with a timestamp, to this file.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct GenerateArgs {
    #[arg(long = "gen")]
    generator: String,
    /// Output file (default: stdout).
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct BenchArgs {
    /// Family name, or a spec with `{}` where the size goes (lollipop:{}:{}).
    #[arg(long, default_value = "glitter")]
    family: String,
    #[arg(long, value_delimiter = ',', default_value = "25,50,100,200")]
    sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "unit,unbiased,finetuned")]
    kernels: Vec<String>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Start node (default: the last node, a leaf for glitter stars).
    #[arg(long)]
    start: Option<usize>,
    /// Per-trial step cap (default: 100·n²).
    #[arg(long)]
    step_cap: Option<u64>,
    #[arg(long, env = "USTCON_SEED")]
    seed: Option<u64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct ValidateArgs {
    /// graph, kernel, split, return-rate or all.
    #[arg(long, default_value = "all")]
    suite: String,
    /// small, medium or large.
    #[arg(long, default_value = "small")]
    budget: String,
    #[arg(long, env = "USTCON_SEED")]
    seed: Option<u64>,
}

#[derive(Args, Serialize)]
struct WalkArgs {
    #[command(flatten)]
    source: GraphSource,
    #[arg(long, default_value_t = 0)]
    start: usize,
    #[arg(long)]
    steps: u64,
    /// unit, unbiased, finetuned or hybrid.
    #[arg(long, default_value = "unit")]
    kernel: String,
    /// Nodes whose first hitting times are recorded.
    #[arg(long, value_delimiter = ',')]
    track: Vec<usize>,
    /// CSV `node,visits` with visits during [0, steps).
    #[arg(long)]
    dump_visits: Option<PathBuf>,
    /// CSV `node,first_hit` for the tracked nodes.
    #[arg(long)]
    dump_hits: Option<PathBuf>,
    #[arg(long, env = "USTCON_SEED")]
    seed: Option<u64>,
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// The given seed, or a fresh one that is reported on stderr.
fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rng::fresh_seed();
        eprintln!("seed: {s}");
        s
    })
}

fn output_writer(path: Option<&Path>) -> Result<Box<dyn Write>, String> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| format!("{}: {e}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn print_json(value: &impl Serialize) -> Result<(), String> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(err)?;
    writeln!(out).map_err(err)
}

fn stamp<A: Serialize>(manifest: &mut RunManifest<A>, path: Option<&Path>) -> Result<(), String> {
    match path {
        Some(p) => manifest
            .write_stamped(p)
            .map_err(|e| format!("{}: {e}", p.display())),
        None => Ok(()),
    }
}

fn solve(args: SolveArgs) -> Result<ExitCode, String> {
    let seed = resolve_seed(args.seed);
    let (g, query) = args.source.load()?;
    let n = g.node_count();
    let q = ConnectivityQuery::new(
        args.s.or(query.map(|q| q.source)).unwrap_or(0),
        args.t.or(query.map(|q| q.target)).unwrap_or(n - 1),
    );
    let result = match args.solver {
        SolverChoice::Logspace => solve_logspace(&g, &q, args.c_scale, seed),
        SolverChoice::Landmark => {
            let mut cfg = LandmarkConfig::new(args.p, seed).with_c_scale(args.c_scale);
            cfg.gamma = args.gamma;
            cfg.beta = args.beta;
            cfg.split_override = args.split;
            cfg.stop_when_merged = !args.full_budget;
            test_connectivity(&g, &q, &cfg)
        }
    }
    .map_err(err)?;

    let manifest_path = args.manifest.clone();
    let graph = args.source.describe();
    let mut manifest = RunManifest::new("solve", args, Some(seed), Some(graph));
    stamp(&mut manifest, manifest_path.as_deref())?;
    print_json(&serde_json::json!({ "result": result, "manifest": manifest }))?;
    Ok(if result.answer.is_connected() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn generate(args: GenerateArgs) -> Result<ExitCode, String> {
    let spec: GraphSpec = args.generator.parse().map_err(err)?;
    let (g, _) = spec.build().map_err(err)?;
    let mut out = output_writer(args.output.as_deref())?;
    write_edge_list(&g, &mut out).map_err(err)?;
    out.flush().map_err(err)?;
    let manifest_path = args.manifest.clone();
    let graph = spec.to_string();
    let mut manifest = RunManifest::new("generate", args, None, Some(graph));
    stamp(&mut manifest, manifest_path.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn bench_spec(family: &str, size: usize) -> String {
    if family.contains("{}") {
        family.replace("{}", &size.to_string())
    } else {
        format!("{family}:{size}")
    }
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn bench(args: BenchArgs) -> Result<ExitCode, String> {
    let seed = resolve_seed(args.seed);
    if args.trials == 0 {
        return Err("--trials must be at least 1".into());
    }
    let kernels: Vec<Kernel> = args
        .kernels
        .iter()
        .map(|k| k.parse().map_err(err))
        .collect::<Result<_, _>>()?;
    let mut graphs = Vec::with_capacity(args.sizes.len());
    for &size in &args.sizes {
        let spec: GraphSpec = bench_spec(&args.family, size).parse().map_err(err)?;
        let (g, _) = spec.build().map_err(err)?;
        let start = args.start.unwrap_or(g.node_count() - 1);
        g.check_node(start).map_err(err)?;
        graphs.push((spec.to_string(), g, start));
    }

    let mut out = csv::Writer::from_writer(output_writer(args.output.as_deref())?);
    out.write_record([
        "row",
        "graph",
        "kernel",
        "n",
        "trials",
        "estimate",
        "std_error",
        "censored",
        "exponent",
        "r_squared",
        "seed",
    ])
    .map_err(err)?;
    let mut cell = 0u64;
    for kernel in &kernels {
        let mut ns = Vec::new();
        let mut estimates = Vec::new();
        for (name, g, start) in &graphs {
            let cap = args.step_cap.unwrap_or_else(|| default_step_cap(g));
            let cell_seed = seed.wrapping_add(cell);
            cell += 1;
            let r =
                estimate_cover_time(g, kernel, *start, args.trials, cap, cell_seed).map_err(err)?;
            if r.is_censored() {
                eprintln!(
                    "warning: {name} {}: {} trials censored at {cap} steps",
                    kernel.name(),
                    r.censored
                );
            }
            ns.push(g.node_count());
            estimates.push(r.estimate);
            out.write_record([
                "cell".to_string(),
                name.clone(),
                kernel.name(),
                g.node_count().to_string(),
                r.trials.to_string(),
                r.estimate.to_string(),
                opt(r.std_error),
                r.censored.to_string(),
                String::new(),
                String::new(),
                cell_seed.to_string(),
            ])
            .map_err(err)?;
        }
        match fit_scaling_exponent(&ns, &estimates) {
            Ok(fit) => out
                .write_record([
                    "exponent".to_string(),
                    args.family.clone(),
                    kernel.name(),
                    String::new(),
                    args.trials.to_string(),
                    String::new(),
                    String::new(),
                    String::new(),
                    fit.exponent.to_string(),
                    fit.r_squared.to_string(),
                    seed.to_string(),
                ])
                .map_err(err)?,
            Err(e) => eprintln!("no exponent for {}: {e}", kernel.name()),
        }
    }
    out.flush().map_err(err)?;

    let manifest_path = args.manifest.clone();
    let graph = bench_spec(&args.family, 0).replace(":0", ":<size>");
    let mut manifest = RunManifest::new("bench", args, Some(seed), Some(graph));
    stamp(&mut manifest, manifest_path.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn validate(args: ValidateArgs) -> Result<ExitCode, String> {
    let suite: Suite = args.suite.parse().map_err(err)?;
    let budget: Budget = args.budget.parse().map_err(err)?;
    let seed = resolve_seed(args.seed);
    let checks = run_suite(suite, budget, seed);
    for c in &checks {
        eprintln!("{c}");
    }
    let passed = checks.iter().all(|c| c.passed);
    let manifest = RunManifest::new("validate", args, Some(seed), None);
    print_json(&serde_json::json!({ "passed": passed, "checks": checks, "manifest": manifest }))?;
    Ok(if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn walk(args: WalkArgs) -> Result<ExitCode, String> {
    let seed = resolve_seed(args.seed);
    let (g, _) = args.source.load()?;
    let kernel: Kernel = args.kernel.parse().map_err(err)?;
    let opts = TraceOptions {
        count_visits: args.dump_visits.is_some(),
        count_arcs: false,
        tracked: args.track.clone(),
    };
    let mut r = rng::seeded(seed);
    let trace = match &kernel {
        Kernel::Hybrid => run_hybrid_walk(&g, args.start, args.steps, &opts, &mut r),
        Kernel::Metropolis(f) => run_walk(&g, f, args.start, args.steps, &opts, &mut r),
    }
    .map_err(err)?;
    if let Some(p) = &args.dump_visits {
        let file = File::create(p).map_err(|e| format!("{}: {e}", p.display()))?;
        trace.write_visits_csv(BufWriter::new(file)).map_err(err)?;
    }
    if let Some(p) = &args.dump_hits {
        let file = File::create(p).map_err(|e| format!("{}: {e}", p.display()))?;
        trace.write_hits_csv(BufWriter::new(file)).map_err(err)?;
    }
    let summary = serde_json::json!({
        "start": trace.start,
        "steps": trace.steps_taken,
        "final_node": trace.final_node,
        "first_hits": trace.first_hits,
    });
    let graph = args.source.describe();
    let manifest = RunManifest::new("walk", args, Some(seed), Some(graph));
    print_json(&serde_json::json!({ "trace": summary, "manifest": manifest }))?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Generate(a) => generate(a),
        Command::Bench(a) => bench(a),
        Command::Validate(a) => validate(a),
        Command::Walk(a) => walk(a),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(2)
    })
}

//! Command-line front end: solve queries from arena files, generate
//! reduction and random instances, cross-verify the main solvers
//! against the oracles, and emit operation-counter scaling data.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use reachplan::arena::{parse, serialize, ArenaKind, Objective, Query};
use reachplan::reductions::{
    bench_instance, bidirected_k3, gen_random, gen_triangle_source, reduce_ov_game,
    reduce_ov_game_seq, reduce_ov_mdp, reduce_triangle_game, reduce_triangle_game_seq,
    reduce_triangle_mdp, BenchFamily, OvInstance, ReductionInstance,
};
use reachplan::solve::{agrees, oracle_solve, solve, Solution};

const EXIT_WIN: u8 = 0;
const EXIT_LOSE: u8 = 1;
const EXIT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "reachplan", version)]
#[command(about = "Reachability, coverage, and sequential-target planning on graphs, MDPs, and game graphs")]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    Main,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Graph,
    Mdp,
    Game,
}

impl From<KindArg> for ArenaKind {
    fn from(k: KindArg) -> ArenaKind {
        match k {
            KindArg::Graph => ArenaKind::Graph,
            KindArg::Mdp => ArenaKind::Mdp,
            KindArg::Game => ArenaKind::Game,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ObjectiveArg {
    Reach,
    Coverage,
    Sequential,
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Objective {
        match o {
            ObjectiveArg::Reach => Objective::Reach,
            ObjectiveArg::Coverage => Objective::Coverage,
            ObjectiveArg::Sequential => Objective::Sequential,
        }
    }
}

#[derive(Subcommand)]
enum Commands {
    /// Solve a query file; exit 0 when winning, 1 when losing, 2 on error
    Solve {
        /// Input file in the arena text format
        file: PathBuf,

        /// Solver family to run
        #[arg(long, value_enum, default_value = "main")]
        algorithm: Algorithm,

        /// Give sink vertices self-loops instead of rejecting them
        #[arg(long)]
        normalize_sinks: bool,

        /// Print the per-stage game strategy after the result
        #[arg(long)]
        emit_strategy: bool,
    },

    /// Generate an instance on stdout
    Generate {
        #[command(subcommand)]
        family: GenerateFamily,
    },

    /// Cross-check the main solvers against the oracles on random instances
    Verify {
        /// Number of random instances
        #[arg(long, default_value = "1000")]
        count: usize,

        /// Largest vertex count (edge count is capped at 3 times this)
        #[arg(long, default_value = "8")]
        max_n: usize,

        /// Largest target-tuple size
        #[arg(long, default_value = "3")]
        max_k: usize,

        /// Base seed
        #[arg(long, default_value = "0")]
        seed: u64,
    },

    /// Emit operation-counter scaling data for a solver family
    Bench {
        /// Instance family
        #[arg(long, value_parser = parse_family)]
        family: BenchFamily,

        /// Number of doubling steps beyond the base size
        #[arg(long, default_value = "5")]
        steps: u32,

        /// Seeds per step
        #[arg(long, default_value = "10")]
        count: usize,

        /// Base seed
        #[arg(long, default_value = "0")]
        seed: u64,

        /// Output format
        #[arg(long, value_enum, default_value = "csv")]
        format: OutputFormat,
    },
}

fn parse_family(s: &str) -> Result<BenchFamily, String> {
    BenchFamily::parse(s).ok_or_else(|| {
        let names: Vec<&str> = BenchFamily::ALL.iter().map(|f| f.as_str()).collect();
        format!("unknown family `{s}` (expected one of {})", names.join(", "))
    })
}

#[derive(Args)]
struct OvArgs {
    /// Vectors per side
    #[arg(long, default_value = "8")]
    n: usize,

    /// Vector dimension
    #[arg(long, default_value = "6")]
    d: usize,

    #[arg(long, default_value = "0")]
    seed: u64,
}

#[derive(Args)]
struct TriArgs {
    /// Source graph vertices; omitted means the embedded bidirected K3
    #[arg(long)]
    n: Option<usize>,

    /// Source graph edges (only with --n)
    #[arg(long)]
    m: Option<usize>,

    #[arg(long, default_value = "0")]
    seed: u64,
}

#[derive(Subcommand)]
enum GenerateFamily {
    /// OV coverage instance on an MDP
    OvMdp(OvArgs),
    /// Triangle coverage instance on an MDP
    TriMdp(TriArgs),
    /// OV coverage instance on a game graph
    OvGame(OvArgs),
    /// Triangle coverage instance on a game graph
    TriGame(TriArgs),
    /// OV sequential instance on a game graph
    OvGameSeq(OvArgs),
    /// Triangle sequential instance on a game graph
    TriGameSeq(TriArgs),
    /// Seeded random query
    Random {
        #[arg(long, value_enum)]
        kind: KindArg,

        #[arg(long, default_value = "8")]
        n: usize,

        #[arg(long, default_value = "20")]
        m: usize,

        #[arg(long, default_value = "3")]
        k: usize,

        /// Probability of each vertex joining each target set
        #[arg(long, default_value = "0.3")]
        density: f64,

        #[arg(long, value_enum, default_value = "coverage")]
        objective: ObjectiveArg,

        #[arg(long, default_value = "0")]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Commands::Solve {
            file,
            algorithm,
            normalize_sinks,
            emit_strategy,
        } => cmd_solve(&file, algorithm, normalize_sinks, emit_strategy),
        Commands::Generate { family } => cmd_generate(family),
        Commands::Verify {
            count,
            max_n,
            max_k,
            seed,
        } => cmd_verify(count, max_n, max_k, seed),
        Commands::Bench {
            family,
            steps,
            count,
            seed,
            format,
        } => cmd_bench(family, steps, count, seed, format),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn cmd_solve(
    file: &PathBuf,
    algorithm: Algorithm,
    normalize_sinks: bool,
    emit_strategy: bool,
) -> Result<u8, String> {
    let text = fs::read_to_string(file)
        .map_err(|e| format!("cannot read {}: {e}", file.display()))?;
    let query = parse(&text, normalize_sinks).map_err(|e| e.to_string())?;
    let solution = match algorithm {
        Algorithm::Main => solve(&query).map_err(|e| e.to_string())?,
        Algorithm::Oracle => oracle_solve(&query),
    };
    print!("{}", render_solution(&solution, emit_strategy));
    Ok(if solution.winning { EXIT_WIN } else { EXIT_LOSE })
}

fn render_solution(solution: &Solution, emit_strategy: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "winning {}", solution.winning);
    match &solution.winning_set {
        Some(set) => {
            let mut line = format!("winning_set {}", set.len());
            for v in set {
                let _ = write!(line, " {v}");
            }
            let _ = writeln!(out, "{line}");
        }
        None => {
            let _ = writeln!(out, "winning_set -");
        }
    }
    if emit_strategy {
        for mv in &solution.strategy {
            let _ = writeln!(out, "stage {} vertex {} choose {}", mv.stage, mv.vertex, mv.choose);
        }
    }
    out
}

fn cmd_generate(family: GenerateFamily) -> Result<u8, String> {
    let render_reduction = |r: Result<ReductionInstance, _>| -> Result<String, String> {
        let r = r.map_err(|e: reachplan::ReductionError| e.to_string())?;
        Ok(format!("# truth {}\n{}", r.truth, serialize(&r.query)))
    };
    let triangle_source = |args: &TriArgs| -> Result<_, String> {
        match args.n {
            None => Ok(bidirected_k3()),
            Some(n) => {
                let m = args.m.unwrap_or(3 * n);
                gen_triangle_source(n, m, args.seed).map_err(|e| e.to_string())
            }
        }
    };
    let text = match family {
        GenerateFamily::OvMdp(a) => {
            render_reduction(reduce_ov_mdp(&OvInstance::random(a.n, a.d, a.seed)))?
        }
        GenerateFamily::OvGame(a) => {
            render_reduction(reduce_ov_game(&OvInstance::random(a.n, a.d, a.seed)))?
        }
        GenerateFamily::OvGameSeq(a) => {
            render_reduction(reduce_ov_game_seq(&OvInstance::random(a.n, a.d, a.seed)))?
        }
        GenerateFamily::TriMdp(a) => render_reduction(reduce_triangle_mdp(&triangle_source(&a)?))?,
        GenerateFamily::TriGame(a) => {
            render_reduction(reduce_triangle_game(&triangle_source(&a)?))?
        }
        GenerateFamily::TriGameSeq(a) => {
            render_reduction(reduce_triangle_game_seq(&triangle_source(&a)?))?
        }
        GenerateFamily::Random {
            kind,
            n,
            m,
            k,
            density,
            objective,
            seed,
        } => {
            let q = gen_random(kind.into(), n, m, k, density, objective.into(), seed)
                .map_err(|e| e.to_string())?;
            serialize(&q)
        }
    };
    print!("{text}");
    Ok(EXIT_WIN)
}

/// Worker-thread cap for verify and bench: REACHPLAN_THREADS, where 0
/// means strictly serial; defaults to the machine's parallelism.
fn thread_budget() -> usize {
    let available = std::thread::available_parallelism().map_or(1, |p| p.get());
    match std::env::var("REACHPLAN_THREADS") {
        Ok(raw) => match raw.trim().parse::<usize>() {
            Ok(0) => 1,
            Ok(t) => t.min(available),
            Err(_) => available,
        },
        Err(_) => available,
    }
}

/// Runs `worker` over `0..count`, fanning out across threads while
/// keeping the collected results in index order.
fn run_indexed<T: Send>(
    count: usize,
    threads: usize,
    worker: &(impl Fn(usize) -> T + Sync),
) -> Vec<T> {
    if threads <= 1 || count <= 1 {
        return (0..count).map(worker).collect();
    }
    let threads = threads.min(count);
    let mut tagged: Vec<(usize, T)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                scope.spawn(move || {
                    (t..count)
                        .step_by(threads)
                        .map(|i| (i, worker(i)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("verify worker panicked"))
            .collect()
    });
    tagged.sort_by_key(|&(i, _)| i);
    tagged.into_iter().map(|(_, v)| v).collect()
}

const KINDS: [ArenaKind; 3] = [ArenaKind::Graph, ArenaKind::Mdp, ArenaKind::Game];
const OBJECTIVES: [Objective; 3] = [Objective::Reach, Objective::Coverage, Objective::Sequential];

fn verify_instance(index: usize, max_n: usize, max_k: usize, seed: u64) -> Query {
    use rand::Rng;
    use rand::SeedableRng;
    let kind = KINDS[index % 3];
    let objective = OBJECTIVES[(index / 3) % 3];
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed.wrapping_add(index as u64));
    let n = rng.gen_range(2..=max_n.max(2));
    let m = rng.gen_range(n..=(3 * max_n).max(n));
    let k = if objective == Objective::Reach {
        1
    } else {
        rng.gen_range(0..=max_k)
    };
    let density = rng.gen_range(0.05..0.9);
    gen_random(kind, n, m, k, density, objective, rng.gen()).expect("feasible parameters")
}

fn cmd_verify(count: usize, max_n: usize, max_k: usize, seed: u64) -> Result<u8, String> {
    let worker = |index: usize| -> Option<String> {
        let q = verify_instance(index, max_n, max_k, seed);
        let main = match solve(&q) {
            Ok(s) => s,
            Err(e) => return Some(format!("instance {index}: solver error: {e}")),
        };
        let reference = oracle_solve(&q);
        if agrees(&main, &reference) {
            None
        } else {
            Some(format!(
                "instance {index} ({:?}/{:?}, n={}): main {:?} vs oracle {:?}",
                q.arena.kind(),
                q.objective,
                q.arena.len(),
                main.winning,
                reference.winning
            ))
        }
    };
    let results = run_indexed(count, thread_budget(), &worker);
    let mismatches: Vec<&String> = results.iter().flatten().collect();
    for line in &mismatches {
        eprintln!("MISMATCH {line}");
    }
    println!(
        "verified {count} instances (max-n {max_n}, max-k {max_k}, seed {seed})"
    );
    println!("discrepancies {}", mismatches.len());
    Ok(if mismatches.is_empty() {
        EXIT_WIN
    } else {
        EXIT_LOSE
    })
}

fn cmd_bench(
    family: BenchFamily,
    steps: u32,
    count: usize,
    seed: u64,
    format: OutputFormat,
) -> Result<u8, String> {
    struct Row {
        step: u32,
        seed: u64,
        n: usize,
        m: usize,
        k: usize,
        answer: bool,
        edge_touches: u64,
        aux_ops: u64,
        wall_ns: u128,
    }
    let jobs: Vec<(u32, u64)> = (0..=steps)
        .flat_map(|s| (0..count as u64).map(move |i| (s, seed.wrapping_add(i))))
        .collect();
    let worker = |index: usize| -> Result<Row, String> {
        let (step, instance_seed) = jobs[index];
        let q = bench_instance(family, step, instance_seed);
        let clock = Instant::now();
        let sol = solve(&q).map_err(|e| e.to_string())?;
        let wall_ns = clock.elapsed().as_nanos();
        Ok(Row {
            step,
            seed: instance_seed,
            n: q.arena.len(),
            m: q.arena.edge_count(),
            k: q.targets.len(),
            answer: sol.winning,
            edge_touches: sol.counters.edge_touches,
            aux_ops: sol.counters.aux_ops(),
            wall_ns,
        })
    };
    let rows = run_indexed(jobs.len(), thread_budget(), &worker);
    if format == OutputFormat::Csv {
        println!("family,kind,objective,n,m,k,seed,answer,edge_touches,aux_ops,wall_ns");
    }
    for row in rows {
        let row = row?;
        match format {
            OutputFormat::Csv => println!(
                "{},{},{},{},{},{},{},{},{},{},{}",
                family.as_str(),
                family.kind().as_str(),
                family.objective().as_str(),
                row.n,
                row.m,
                row.k,
                row.seed,
                row.answer,
                row.edge_touches,
                row.aux_ops,
                row.wall_ns
            ),
            OutputFormat::Text => println!(
                "{} step {} seed {}: n={} m={} k={} answer={} edge_touches={} aux_ops={} wall_ns={}",
                family.as_str(),
                row.step,
                row.seed,
                row.n,
                row.m,
                row.k,
                row.answer,
                row.edge_touches,
                row.aux_ops,
                row.wall_ns
            ),
        }
    }
    Ok(EXIT_WIN)
}

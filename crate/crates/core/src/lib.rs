//! Planning-objective solvers for explicit-state graphs, Markov
//! decision processes, and two-player game graphs.
//!
//! Three objectives are supported over a shared arena representation:
//! basic target reachability, coverage (each of k target sets must be
//! reachable), and sequential reachability (the k target sets must be
//! visited in order). Graphs get linear-time algorithms, MDPs get MEC
//! decomposition plus backward label propagation with a priority
//! structure, and games get attractor-based solvers.
//!
//! The [`oracle`] module carries independent brute-force reference
//! implementations, and [`reductions`] generates hardness instances
//! from orthogonal-vectors and triangle-detection sources with known
//! ground truth; together they cross-verify the main solvers.

pub mod arena;
pub mod counters;
pub mod error;
pub mod game_planner;
pub mod graph_planner;
pub mod mdp_planner;
pub mod oracle;
pub mod reductions;
pub mod solve;

pub use arena::{
    normalize_sinks, parse, serialize, Arena, ArenaError, ArenaKind, Objective, Owner, ParseError,
    Query, TargetTuple,
};
pub use counters::OpCounters;
pub use error::SolveError;
pub use game_planner::{
    advance_stage, attractor_p1, game_coverage, game_sequential, simulate_staged_strategy,
    AttractorResult, SequentialGameSolution,
};
pub use graph_planner::{
    condense_with_targets, dag_sequential, dag_sequential_audited, graph_coverage,
    graph_sequential, graph_sequential_labeling, reachable_from, scc_decompose, Labeling,
    SccPartition,
};
pub use mdp_planner::{
    build_quotient, mdp_as_reach, mdp_coverage, mdp_sequential, mdp_sequential_labeling,
    mec_decompose, mecfree_sequential, mecfree_sequential_audited, random_attractor,
    MecDecomposition, QuotientMdp,
};
pub use reductions::{
    bench_instance, gen_random, gen_triangle_source, reduce_ov_game, reduce_ov_game_seq,
    reduce_ov_mdp, reduce_triangle_game, reduce_triangle_game_seq, reduce_triangle_mdp,
    BenchFamily, OvInstance, ReductionError, ReductionId, ReductionInstance, ReductionSource,
};
pub use solve::{agrees, oracle_solve, solve, solve_with, Solution, SolveOptions, StageMove};

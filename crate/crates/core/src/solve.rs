//! Query dispatch: routes a parsed query to the matching solver and
//! normalizes the result shape for the CLI and the verification
//! harness.

use crate::arena::{ArenaKind, Objective, Query};
use crate::counters::OpCounters;
use crate::error::SolveError;
use crate::game_planner::{attractor_counted, game_coverage_counted, game_sequential_counted};
use crate::graph_planner::{graph_coverage_counted, graph_sequential_labels};
use crate::mdp_planner::{mdp_coverage_counted, mdp_sequential_labels};
use crate::oracle;

/// One entry of a staged game strategy: at `vertex`, while working on
/// stage `stage`, move to `choose`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StageMove {
    pub stage: usize,
    pub vertex: usize,
    pub choose: usize,
}

/// Normalized solver output. `winning_set` is present whenever the
/// algorithm computes a full set (reachability and sequential
/// objectives); coverage instead reports the per-target vector for the
/// start vertex. Game solvers also report their witness strategy.
#[derive(Debug, Clone)]
pub struct Solution {
    pub winning: bool,
    pub winning_set: Option<Vec<usize>>,
    pub per_target: Option<Vec<bool>>,
    pub strategy: Vec<StageMove>,
    pub counters: OpCounters,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolveOptions {
    /// Assert the label-propagation loop invariants at every loop head.
    /// Costly; meant for verification runs.
    pub audit: bool,
}

/// Solves a query with the main (fast) solver for its kind/objective.
pub fn solve(q: &Query) -> Result<Solution, SolveError> {
    solve_with(q, SolveOptions::default())
}

pub fn solve_with(q: &Query, opts: SolveOptions) -> Result<Solution, SolveError> {
    let mut counters = OpCounters::default();
    let start = q.start;
    let solution = match (q.arena.kind(), q.objective) {
        (ArenaKind::Graph, Objective::Reach | Objective::Sequential) => {
            let labels = graph_sequential_labels(q, opts.audit, &mut counters)?;
            let set = labels.winning_set();
            Solution {
                winning: labels.ell[start] == 1,
                winning_set: Some(set),
                per_target: None,
                strategy: Vec::new(),
                counters,
            }
        }
        (ArenaKind::Graph, Objective::Coverage) => {
            let vector = graph_coverage_counted(q, &mut counters);
            Solution {
                winning: vector.iter().all(|&b| b),
                winning_set: None,
                per_target: Some(vector),
                strategy: Vec::new(),
                counters,
            }
        }
        (ArenaKind::Mdp, Objective::Reach | Objective::Sequential) => {
            let labels = mdp_sequential_labels(q, opts.audit, &mut counters)?;
            let set = labels.winning_set();
            Solution {
                winning: labels.ell[start] == 1,
                winning_set: Some(set),
                per_target: None,
                strategy: Vec::new(),
                counters,
            }
        }
        (ArenaKind::Mdp, Objective::Coverage) => {
            let vector = mdp_coverage_counted(q, opts.audit, &mut counters)?;
            Solution {
                winning: vector.iter().all(|&b| b),
                winning_set: None,
                per_target: Some(vector),
                strategy: Vec::new(),
                counters,
            }
        }
        (ArenaKind::Game, Objective::Reach) => {
            let attr = attractor_counted(&q.arena, q.targets.set(0), &mut counters);
            let strategy = stage_moves(1, &attr.strategy);
            Solution {
                winning: attr.contains(start),
                winning_set: Some(attr.set),
                per_target: None,
                strategy,
                counters,
            }
        }
        (ArenaKind::Game, Objective::Coverage) => {
            let vector = game_coverage_counted(q, &mut counters);
            Solution {
                winning: vector.iter().all(|&b| b),
                winning_set: None,
                per_target: Some(vector),
                strategy: Vec::new(),
                counters,
            }
        }
        (ArenaKind::Game, Objective::Sequential) => {
            let sol = game_sequential_counted(q, &mut counters);
            let mut strategy = Vec::new();
            for (i, attr) in sol.stages.iter().enumerate() {
                strategy.extend(stage_moves(i + 1, &attr.strategy));
            }
            Solution {
                winning: sol.winning_set.binary_search(&start).is_ok(),
                winning_set: Some(sol.winning_set),
                per_target: None,
                strategy,
                counters,
            }
        }
    };
    Ok(solution)
}

fn stage_moves(stage: usize, strategy: &[Option<usize>]) -> Vec<StageMove> {
    strategy
        .iter()
        .enumerate()
        .filter_map(|(vertex, &choice)| {
            choice.map(|choose| StageMove {
                stage,
                vertex,
                choose,
            })
        })
        .collect()
}

/// Solves a query with the brute-force reference implementations.
pub fn oracle_solve(q: &Query) -> Solution {
    let set = |q: &Query| match q.arena.kind() {
        ArenaKind::Graph => oracle::oracle_graph_sequential(q),
        ArenaKind::Mdp => oracle::oracle_mdp_sequential(q),
        ArenaKind::Game => oracle::oracle_game_sequential(q),
    };
    match q.objective {
        Objective::Reach | Objective::Sequential => {
            let winning_set = set(q);
            Solution {
                winning: winning_set.binary_search(&q.start).is_ok(),
                winning_set: Some(winning_set),
                per_target: None,
                strategy: Vec::new(),
                counters: OpCounters::default(),
            }
        }
        Objective::Coverage => {
            let vector = oracle::oracle_coverage(q);
            Solution {
                winning: vector.iter().all(|&b| b),
                winning_set: None,
                per_target: Some(vector),
                strategy: Vec::new(),
                counters: OpCounters::default(),
            }
        }
    }
}

/// Do two solutions agree on everything the objective defines?
pub fn agrees(a: &Solution, b: &Solution) -> bool {
    a.winning == b.winning && a.winning_set == b.winning_set && a.per_target == b.per_target
}

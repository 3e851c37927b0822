//! Game-graph solvers: linear-time player-1 attractor with strategy
//! extraction, coverage via k attractors, and sequential targets via a
//! nested attractor chain with a staged strategy.

use std::collections::VecDeque;

use crate::arena::{Arena, ArenaKind, Objective, Owner, Query};
use crate::counters::OpCounters;

/// A player-1 attractor with its witness strategy. `rank[v]` is the BFS
/// layer at which `v` entered the attractor (0 for target vertices) and
/// `None` outside it. Every player-1 vertex of the set outside the
/// target has a chosen successor of strictly smaller rank; every
/// player-2 vertex of the set outside the target has all successors in
/// the set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttractorResult {
    pub set: Vec<usize>,
    pub strategy: Vec<Option<usize>>,
    pub rank: Vec<Option<usize>>,
}

impl AttractorResult {
    pub fn contains(&self, v: usize) -> bool {
        self.rank[v].is_some()
    }
}

/// Result of the sequential-target game solver: the winning set `S_1`
/// together with the per-stage attractors whose strategies compose into
/// the staged winning strategy.
#[derive(Debug, Clone)]
pub struct SequentialGameSolution {
    pub winning_set: Vec<usize>,
    pub stages: Vec<AttractorResult>,
}

/// Least set from which player 1 can force a visit to `target`:
/// a player-1 vertex joins when some successor is inside, a player-2
/// vertex joins when all its successors are inside. Counter-based
/// backward computation touching each edge at most once.
pub fn attractor_p1(a: &Arena, target: &[usize]) -> AttractorResult {
    attractor_counted(a, target, &mut OpCounters::default())
}

pub(crate) fn attractor_counted(
    a: &Arena,
    target: &[usize],
    counters: &mut OpCounters,
) -> AttractorResult {
    assert_eq!(a.kind(), ArenaKind::Game);
    let n = a.len();
    let mut rank: Vec<Option<usize>> = vec![None; n];
    let mut strategy: Vec<Option<usize>> = vec![None; n];
    let mut pending: Vec<usize> = vec![0; n];
    for (v, slot) in pending.iter_mut().enumerate() {
        if a.owner(v) == Owner::P2 {
            *slot = a.out_degree(v);
        }
    }
    let mut queue: VecDeque<usize> = VecDeque::new();
    for &v in target {
        counters.label_touches += 1;
        if rank[v].is_none() {
            rank[v] = Some(0);
            queue.push_back(v);
        }
    }
    while let Some(u) = queue.pop_front() {
        let next_rank = rank[u].expect("queued vertices are ranked") + 1;
        for &w in a.incoming(u) {
            counters.edge_touches += 1;
            if rank[w].is_some() {
                continue;
            }
            match a.owner(w) {
                Owner::P2 => {
                    pending[w] -= 1;
                    if pending[w] == 0 {
                        rank[w] = Some(next_rank);
                        queue.push_back(w);
                    }
                }
                _ => {
                    rank[w] = Some(next_rank);
                    strategy[w] = Some(u);
                    queue.push_back(w);
                }
            }
        }
    }
    let set = (0..n).filter(|&v| rank[v].is_some()).collect();
    AttractorResult {
        set,
        strategy,
        rank,
    }
}

/// Coverage on games: one attractor per target set; entry `i` is true
/// iff the start vertex lies in the attractor of `T_i`. O(k*m) total.
pub fn game_coverage(q: &Query) -> Vec<bool> {
    game_coverage_counted(q, &mut OpCounters::default())
}

pub(crate) fn game_coverage_counted(q: &Query, counters: &mut OpCounters) -> Vec<bool> {
    assert_eq!(q.objective, Objective::Coverage);
    q.targets
        .sets()
        .iter()
        .map(|set| attractor_counted(&q.arena, set, counters).contains(q.start))
        .collect()
}

/// Sequential targets on games by the nested attractor chain:
/// `S_k = Attr_1(T_k)`, then `S_l = Attr_1(T_l ∩ S_{l+1})` down to
/// `S_1`, which is the winning set. The k per-stage attractors carry
/// the staged strategy: play the stage-l attractor strategy until a
/// vertex of `T_l ∩ S_{l+1}` is visited, then switch to stage l+1,
/// advancing through several stages at once where their targets
/// coincide.
pub fn game_sequential(q: &Query) -> SequentialGameSolution {
    game_sequential_counted(q, &mut OpCounters::default())
}

pub(crate) fn game_sequential_counted(
    q: &Query,
    counters: &mut OpCounters,
) -> SequentialGameSolution {
    assert_eq!(q.arena.kind(), ArenaKind::Game);
    let n = q.arena.len();
    let k = q.targets.len();
    let mut stages: Vec<AttractorResult> = Vec::with_capacity(k);
    // stages are computed from stage k down to stage 1
    let mut next_set: Option<&AttractorResult> = None;
    let mut rev_stages: Vec<AttractorResult> = Vec::with_capacity(k);
    for i in (0..k).rev() {
        let seed: Vec<usize> = match next_set {
            None => q.targets.set(i).to_vec(),
            Some(succ) => q
                .targets
                .set(i)
                .iter()
                .copied()
                .filter(|&v| succ.contains(v))
                .collect(),
        };
        let attr = attractor_counted(&q.arena, &seed, counters);
        rev_stages.push(attr);
        next_set = rev_stages.last();
    }
    rev_stages.reverse();
    stages.append(&mut rev_stages);

    let winning_set = match stages.first() {
        Some(first) => first.set.clone(),
        None => (0..n).collect(), // empty tuple: every vertex wins
    };
    SequentialGameSolution {
        winning_set,
        stages,
    }
}

/// Advances the stage pointer past every consecutive stage whose seed
/// the current vertex satisfies. Stage `l` (1-based) is cleared at `v`
/// when `v ∈ T_l` and, for `l < k`, `v ∈ S_{l+1}`.
pub fn advance_stage(
    q: &Query,
    stages: &[AttractorResult],
    v: usize,
    mut stage: usize,
) -> usize {
    let k = q.targets.len();
    while stage <= k {
        let in_target = q.targets.set(stage - 1).binary_search(&v).is_ok();
        let in_next = stage == k || stages[stage].contains(v);
        if in_target && in_next {
            stage += 1;
        } else {
            break;
        }
    }
    stage
}

/// Plays the staged strategy from `start` against an adversary choice
/// function, returning the number of steps after which all k stages
/// were cleared, or `None` if `max_steps` ran out first. Used to
/// confirm that the computed strategies actually win.
pub fn simulate_staged_strategy(
    q: &Query,
    sol: &SequentialGameSolution,
    start: usize,
    mut adversary: impl FnMut(usize, &[usize]) -> usize,
    max_steps: usize,
) -> Option<usize> {
    let k = q.targets.len();
    let mut stage = advance_stage(q, &sol.stages, start, 1);
    let mut v = start;
    let mut steps = 0;
    while stage <= k {
        if steps >= max_steps {
            return None;
        }
        let next = match q.arena.owner(v) {
            Owner::P2 => {
                let choice = adversary(v, q.arena.out(v));
                debug_assert!(q.arena.out(v).contains(&choice));
                choice
            }
            _ => sol.stages[stage - 1].strategy[v]
                .expect("player-1 vertex inside a stage attractor has a strategy choice"),
        };
        v = next;
        steps += 1;
        stage = advance_stage(q, &sol.stages, v, stage);
    }
    Some(steps)
}

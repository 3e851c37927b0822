//! MDP solvers: maximal end-component decomposition, MEC-quotient
//! construction, sequential-target labeling for MEC-free MDPs, and the
//! almost-sure reachability and coverage solvers built on top.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use crate::arena::{Arena, ArenaKind, Objective, Owner, Query, TargetTuple};
use crate::counters::OpCounters;
use crate::error::SolveError;
use crate::graph_planner::{scc_masked, Labeling};

/// Partition of a subset of the vertices into maximal end-components.
/// `mec_of` is `None` for vertices that belong to no MEC.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MecDecomposition {
    pub mecs: Vec<Vec<usize>>,
    pub mec_of: Vec<Option<usize>>,
}

/// MEC-free quotient of an MDP: every MEC collapsed into a single
/// player-1 vertex, duplicate edges merged, self-loops dropped.
/// Collapsed bottom MECs become sinks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientMdp {
    pub arena: Arena,
    pub rep_of: Vec<usize>,
    pub targets: TargetTuple,
}

/// Maximal end-component decomposition by the straightforward iterative
/// SCC-based algorithm, O(n*m) worst case: repeatedly decompose the
/// remaining subgraph into SCCs, peel random vertices with edges
/// leaving their SCC together with their random attractor, and stop
/// when every surviving SCC is closed. Surviving SCCs with at least one
/// internal edge are the MECs.
pub fn mec_decompose(a: &Arena) -> MecDecomposition {
    mec_decompose_counted(a, &mut OpCounters::default())
}

pub(crate) fn mec_decompose_counted(a: &Arena, counters: &mut OpCounters) -> MecDecomposition {
    assert_eq!(a.kind(), ArenaKind::Mdp);
    let n = a.len();
    let mut active = vec![true; n];

    loop {
        let scc = scc_masked(a, Some(&active), counters);
        // Random vertices whose edges leave their SCC cannot sit in any
        // end-component inside it.
        let mut bad: Vec<usize> = Vec::new();
        for v in 0..n {
            if !active[v] || a.owner(v) != Owner::Rand {
                continue;
            }
            let cid = scc.comp_of[v];
            let escapes = a.out(v).iter().any(|&u| {
                counters.edge_touches += 1;
                !active[u] || scc.comp_of[u] != cid
            });
            if escapes {
                bad.push(v);
            }
        }

        if bad.is_empty() {
            // Stable: collect the closed SCCs that carry an internal edge.
            let mut mecs: Vec<Vec<usize>> = Vec::new();
            let mut mec_of = vec![None; n];
            for comp in &scc.comps {
                let cid = scc.comp_of[comp[0]];
                let has_internal_edge = comp.iter().any(|&v| {
                    a.out(v).iter().any(|&u| {
                        counters.edge_touches += 1;
                        active[u] && scc.comp_of[u] == cid
                    })
                });
                if has_internal_edge {
                    let id = mecs.len();
                    for &v in comp {
                        mec_of[v] = Some(id);
                    }
                    mecs.push(comp.clone());
                }
            }
            return MecDecomposition { mecs, mec_of };
        }

        // One combined attractor pass: the random attractor of each bad
        // set never leaves its own SCC, so all SCCs are peeled together.
        let mut joined = vec![false; n];
        let mut p1_internal = vec![0usize; n];
        for v in 0..n {
            if active[v] && a.owner(v) != Owner::Rand {
                p1_internal[v] = a
                    .out(v)
                    .iter()
                    .filter(|&&u| {
                        counters.edge_touches += 1;
                        active[u] && scc.comp_of[u] == scc.comp_of[v]
                    })
                    .count();
            }
        }
        let mut queue: VecDeque<usize> = VecDeque::new();
        for &v in &bad {
            joined[v] = true;
            queue.push_back(v);
        }
        while let Some(u) = queue.pop_front() {
            for &w in a.incoming(u) {
                counters.edge_touches += 1;
                if !active[w] || joined[w] || scc.comp_of[w] != scc.comp_of[u] {
                    continue;
                }
                match a.owner(w) {
                    Owner::Rand => {
                        joined[w] = true;
                        queue.push_back(w);
                    }
                    _ => {
                        p1_internal[w] -= 1;
                        if p1_internal[w] == 0 {
                            joined[w] = true;
                            queue.push_back(w);
                        }
                    }
                }
            }
        }
        for v in 0..n {
            if joined[v] {
                active[v] = false;
            }
        }
    }
}

/// Least superset of `base` inside `within` closed under: a random
/// vertex joins when some successor is in the set, a player-1 vertex
/// joins when it has `within`-successors and all of them are in the
/// set. Counter-based, touching each edge at most once.
pub fn random_attractor(a: &Arena, base: &[usize], within: &[usize]) -> Vec<usize> {
    let n = a.len();
    let mut in_within = vec![false; n];
    for &v in within {
        in_within[v] = true;
    }
    for &v in base {
        assert!(in_within[v], "base vertex {v} not inside `within`");
    }

    let mut joined = vec![false; n];
    let mut pending: Vec<usize> = vec![0; n];
    for &v in within {
        if a.owner(v) != Owner::Rand {
            pending[v] = a.out(v).iter().filter(|&&u| in_within[u]).count();
        }
    }
    let mut queue: VecDeque<usize> = VecDeque::new();
    for &v in base {
        if !joined[v] {
            joined[v] = true;
            queue.push_back(v);
        }
    }
    while let Some(u) = queue.pop_front() {
        for &w in a.incoming(u) {
            if !in_within[w] || joined[w] {
                continue;
            }
            match a.owner(w) {
                Owner::Rand => {
                    joined[w] = true;
                    queue.push_back(w);
                }
                _ => {
                    pending[w] -= 1;
                    if pending[w] == 0 {
                        joined[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
    }
    (0..n).filter(|&v| joined[v]).collect()
}

/// Collapses every MEC of `a` into one player-1 vertex and rewrites the
/// targets through the quotient map. The result contains no
/// end-component: inside a MEC every vertex reaches every other almost
/// surely, so the collapse preserves sequential reachability.
pub fn build_quotient(a: &Arena, t: &TargetTuple, d: &MecDecomposition) -> QuotientMdp {
    build_quotient_counted(a, t, d, &mut OpCounters::default())
}

pub(crate) fn build_quotient_counted(
    a: &Arena,
    t: &TargetTuple,
    d: &MecDecomposition,
    counters: &mut OpCounters,
) -> QuotientMdp {
    let n = a.len();
    let mut rep_of = vec![usize::MAX; n];
    let mut mec_rep = vec![usize::MAX; d.mecs.len()];
    let mut owners: Vec<Owner> = Vec::new();
    for (v, slot) in rep_of.iter_mut().enumerate() {
        match d.mec_of[v] {
            Some(id) => {
                if mec_rep[id] == usize::MAX {
                    mec_rep[id] = owners.len();
                    owners.push(Owner::P1);
                }
                *slot = mec_rep[id];
            }
            None => {
                *slot = owners.len();
                owners.push(a.owner(v));
            }
        }
    }
    let nq = owners.len();
    let mut edges = Vec::new();
    for (u, v) in a.edges() {
        counters.edge_touches += 1;
        let (qu, qv) = (rep_of[u], rep_of[v]);
        if qu != qv {
            edges.push((qu, qv));
        }
    }
    let arena = Arena::new(ArenaKind::Mdp, owners, edges).expect("quotient indices in range");
    let sets = t
        .sets()
        .iter()
        .map(|set| {
            set.iter()
                .map(|&v| {
                    counters.label_touches += 1;
                    rep_of[v]
                })
                .collect()
        })
        .collect();
    let targets = TargetTuple::new(sets, nq).expect("quotient indices in range");
    QuotientMdp {
        arena,
        rep_of,
        targets,
    }
}

/// How a processed label folds into a predecessor's `best`. The flipped
/// rule exists only so the mutation tests can prove the verification
/// harness notices an injected bug.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum UpdateRule {
    ByOwner,
    #[allow(dead_code)]
    FlippedForMutationTests,
}

/// Sequential-target labeling for a MEC-free MDP.
///
/// Processes vertices backward from the sinks. When the queue of
/// fully-resolved vertices runs dry, the random vertex with the maximal
/// partially-known `best` is processed next; a max-priority structure
/// with lazy stale-entry deletion serves those selections, which is
/// sound because random `best` values only ever increase.
pub fn mecfree_sequential(qm: &QuotientMdp) -> Result<Labeling, SolveError> {
    mecfree_labels(
        &qm.arena,
        &qm.targets,
        false,
        UpdateRule::ByOwner,
        &mut OpCounters::default(),
    )
}

/// As [`mecfree_sequential`], asserting the loop invariants at every
/// loop head. O(n + m) extra work per processed vertex.
pub fn mecfree_sequential_audited(qm: &QuotientMdp) -> Result<Labeling, SolveError> {
    mecfree_labels(
        &qm.arena,
        &qm.targets,
        true,
        UpdateRule::ByOwner,
        &mut OpCounters::default(),
    )
}

pub(crate) fn mecfree_labels(
    arena: &Arena,
    targets: &TargetTuple,
    audit: bool,
    rule: UpdateRule,
    counters: &mut OpCounters,
) -> Result<Labeling, SolveError> {
    let n = arena.len();
    let k = targets.len();

    let mut stage_lists: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, set) in targets.sets().iter().enumerate() {
        for &v in set {
            counters.label_touches += 1;
            stage_lists[v].push(i + 1);
        }
    }

    let mut scratch = vec![false; k + 2];
    let mut mcount: Vec<usize> = (0..n).map(|v| arena.out_degree(v)).collect();
    let mut best: Vec<Option<usize>> = (0..n)
        .map(|v| if arena.out_degree(v) == 0 { Some(k + 1) } else { None })
        .collect();
    let mut ell: Vec<Option<usize>> = vec![None; n];
    let mut in_s = vec![true; n];
    let mut s_count = n;
    let mut queue: VecDeque<usize> = arena.sinks().into();
    // Max-heap keyed by best, ties broken toward the smallest vertex.
    let mut ready_random: BinaryHeap<(usize, Reverse<usize>)> = BinaryHeap::new();

    while s_count > 0 {
        if audit {
            audit_mdp_invariants(arena, k, &mcount, &best, &ell, &in_s, &queue, &scratch);
        }
        let v = match queue.pop_front() {
            Some(v) => v,
            None => pop_max_random(&mut ready_random, &in_s, &best, counters).ok_or_else(|| {
                SolveError::Malformed(format!(
                    "no random candidate with {s_count} vertices unprocessed; input is not MEC-free"
                ))
            })?,
        };

        // ProcessVertex(v)
        for &i in &stage_lists[v] {
            counters.label_touches += 1;
            scratch[i] = true;
        }
        let mut label = best[v].expect("selected vertex has its best label set");
        while label > 1 && scratch[label - 1] {
            counters.label_touches += 1;
            label -= 1;
        }
        for &i in &stage_lists[v] {
            counters.label_touches += 1;
            scratch[i] = false;
        }
        ell[v] = Some(label);
        in_s[v] = false;
        s_count -= 1;

        for &w in arena.incoming(v) {
            counters.edge_touches += 1;
            let owner_is_p1 = arena.owner(w) != Owner::Rand;
            let fold_min = match rule {
                UpdateRule::ByOwner => owner_is_p1,
                UpdateRule::FlippedForMutationTests => !owner_is_p1,
            };
            let updated = match best[w] {
                None => Some(label),
                Some(b) if fold_min => Some(b.min(label)),
                Some(b) => Some(b.max(label)),
            };
            if updated != best[w] {
                if !owner_is_p1 && rule == UpdateRule::ByOwner {
                    // Random keys are monotone: max-folding never lowers them.
                    debug_assert!(best[w].is_none_or(|b| updated.unwrap() >= b));
                }
                best[w] = updated;
                if !owner_is_p1 {
                    ready_random.push((updated.unwrap(), Reverse(w)));
                    counters.pq_pushes += 1;
                }
            }
            mcount[w] -= 1;
            if mcount[w] == 0 && in_s[w] {
                queue.push_back(w);
            }
        }
    }

    Ok(Labeling {
        ell: ell.into_iter().map(|l| l.expect("all vertices processed")).collect(),
    })
}

/// Pops the unprocessed random vertex with maximal `best`, discarding
/// stale entries (already processed, or superseded by a later push).
fn pop_max_random(
    heap: &mut BinaryHeap<(usize, Reverse<usize>)>,
    in_s: &[bool],
    best: &[Option<usize>],
    counters: &mut OpCounters,
) -> Option<usize> {
    while let Some((key, Reverse(v))) = heap.pop() {
        counters.pq_pops += 1;
        if in_s[v] && best[v] == Some(key) {
            return Some(v);
        }
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn audit_mdp_invariants(
    arena: &Arena,
    k: usize,
    mcount: &[usize],
    best: &[Option<usize>],
    ell: &[Option<usize>],
    in_s: &[bool],
    queue: &VecDeque<usize>,
    scratch: &[bool],
) {
    let n = arena.len();
    let in_q: Vec<bool> = {
        let mut m = vec![false; n];
        for &v in queue {
            m[v] = true;
        }
        m
    };
    assert!(
        scratch.iter().all(|&b| !b),
        "scratch bitmap not clear between ProcessVertex calls"
    );
    let s_nonempty = in_s.iter().any(|&b| b);
    if s_nonempty && queue.is_empty() {
        let has_candidate = (0..n)
            .any(|v| in_s[v] && arena.owner(v) == Owner::Rand && best[v].is_some());
        assert!(
            has_candidate,
            "invariant 5 violated: queue empty, S nonempty, no random candidate"
        );
    }
    for v in 0..n {
        let succ_in_s = arena.out(v).iter().filter(|&&w| in_s[w]).count();
        assert_eq!(
            mcount[v], succ_in_s,
            "invariant 1 violated at vertex {v}: mcount {} vs |Out∩S| {succ_in_s}",
            mcount[v]
        );
        let should_queue = in_s[v] && succ_in_s == 0;
        assert_eq!(in_q[v], should_queue, "invariant 2 violated at vertex {v}");
        if arena.out_degree(v) == 0 {
            assert_eq!(
                best[v],
                Some(k + 1),
                "invariant 3 violated at sink {v}: best {:?}",
                best[v]
            );
        } else {
            let processed = arena
                .out(v)
                .iter()
                .filter(|&&w| !in_s[w])
                .map(|&w| ell[w].expect("processed vertex has a label"));
            let expected = if arena.owner(v) == Owner::Rand {
                processed.max()
            } else {
                processed.min()
            };
            assert_eq!(best[v], expected, "invariant 4 violated at vertex {v}");
        }
        if !in_s[v] {
            assert!(ell[v].is_some(), "processed vertex {v} has no label");
        }
    }
}

/// Full sequential-target solver for MDPs: MEC decomposition, quotient,
/// then the MEC-free labeling; an original vertex wins iff its quotient
/// representative is labeled 1.
pub fn mdp_sequential(q: &Query) -> Result<(bool, Vec<usize>), SolveError> {
    let labels = mdp_sequential_labeling(q)?;
    let set = labels.winning_set();
    Ok((labels.ell[q.start] == 1, set))
}

/// The per-vertex stage labeling behind [`mdp_sequential`].
pub fn mdp_sequential_labeling(q: &Query) -> Result<Labeling, SolveError> {
    mdp_sequential_labels(q, false, &mut OpCounters::default())
}

/// Per-original-vertex labeling for a sequential MDP query.
pub(crate) fn mdp_sequential_labels(
    q: &Query,
    audit: bool,
    counters: &mut OpCounters,
) -> Result<Labeling, SolveError> {
    assert_eq!(q.arena.kind(), ArenaKind::Mdp);
    let d = mec_decompose_counted(&q.arena, counters);
    let qm = build_quotient_counted(&q.arena, &q.targets, &d, counters);
    let labels = mecfree_labels(&qm.arena, &qm.targets, audit, UpdateRule::ByOwner, counters)?;
    Ok(Labeling {
        ell: qm.rep_of.iter().map(|&r| labels.ell[r]).collect(),
    })
}

/// Almost-sure winning set for `Reach(target)`: the sequential solver
/// applied to the single-element tuple.
pub fn mdp_as_reach(a: &Arena, target: &[usize]) -> Result<Vec<usize>, SolveError> {
    let q = Query {
        arena: a.clone(),
        targets: TargetTuple::new(vec![target.to_vec()], a.len()).expect("target in range"),
        objective: Objective::Sequential,
        start: 0,
    };
    let labels = mdp_sequential_labels(&q, false, &mut OpCounters::default())?;
    Ok(labels.winning_set())
}

/// Coverage on MDPs: the MEC decomposition (and its quotient) is
/// computed once and reused across the k almost-sure reachability
/// computations.
pub fn mdp_coverage(q: &Query) -> Result<Vec<bool>, SolveError> {
    mdp_coverage_counted(q, false, &mut OpCounters::default())
}

pub(crate) fn mdp_coverage_counted(
    q: &Query,
    audit: bool,
    counters: &mut OpCounters,
) -> Result<Vec<bool>, SolveError> {
    assert_eq!(q.arena.kind(), ArenaKind::Mdp);
    assert_eq!(q.objective, Objective::Coverage);
    let d = mec_decompose_counted(&q.arena, counters);
    let qm = build_quotient_counted(&q.arena, &q.targets, &d, counters);
    let start_rep = qm.rep_of[q.start];
    let mut answers = Vec::with_capacity(qm.targets.len());
    for set in qm.targets.sets() {
        let single = TargetTuple::new(vec![set.to_vec()], qm.arena.len())
            .expect("rewritten target in range");
        let labels = mecfree_labels(&qm.arena, &single, audit, UpdateRule::ByOwner, counters)?;
        answers.push(labels.ell[start_rep] == 1);
    }
    Ok(answers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::three_vertex_example;

    fn mdp(owners: &[Owner], edges: &[(usize, usize)]) -> Arena {
        Arena::new(ArenaKind::Mdp, owners.to_vec(), edges.iter().copied()).unwrap()
    }

    fn tuple(sets: &[&[usize]], n: usize) -> TargetTuple {
        TargetTuple::new(sets.iter().map(|s| s.to_vec()).collect(), n).unwrap()
    }

    #[test]
    fn mec_of_figure_mdp() {
        // v2 is random with an edge leaving {v1,v2}, so only the
        // self-looped sink {v3} survives as a MEC.
        let a = three_vertex_example(ArenaKind::Mdp);
        let d = mec_decompose(&a);
        assert_eq!(d.mecs, vec![vec![2]]);
        assert_eq!(d.mec_of, vec![None, None, Some(0)]);
    }

    #[test]
    fn fully_random_strongly_connected_is_one_mec() {
        let a = mdp(&[Owner::Rand; 3], &[(0, 1), (1, 2), (2, 0)]);
        let d = mec_decompose(&a);
        assert_eq!(d.mecs, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn singleton_without_self_loop_is_no_mec() {
        let a = mdp(&[Owner::P1, Owner::P1], &[(0, 1), (1, 1)]);
        let d = mec_decompose(&a);
        assert_eq!(d.mecs, vec![vec![1]]);
        assert_eq!(d.mec_of[0], None);
    }

    #[test]
    fn random_attractor_empty_base() {
        let a = three_vertex_example(ArenaKind::Mdp);
        assert!(random_attractor(&a, &[], &[0, 1, 2]).is_empty());
    }

    #[test]
    fn random_attractor_forced_p1() {
        // P1 vertex 0 has its only successor in the base.
        let a = mdp(&[Owner::P1, Owner::Rand], &[(0, 1), (1, 1)]);
        assert_eq!(random_attractor(&a, &[1], &[0, 1]), vec![0, 1]);
    }

    #[test]
    fn quotient_of_figure_mdp() {
        let a = three_vertex_example(ArenaKind::Mdp);
        let d = mec_decompose(&a);
        let qm = build_quotient(&a, &tuple(&[&[2]], 3), &d);
        assert_eq!(qm.arena.len(), 3);
        // the collapsed {v3} MEC is a player-1 sink: self-loop dropped
        let rep = qm.rep_of[2];
        assert_eq!(qm.arena.out_degree(rep), 0);
        assert_eq!(qm.arena.owner(rep), Owner::P1);
        assert_eq!(qm.targets.set(0), &[rep]);
        assert!(mec_decompose(&qm.arena).mecs.is_empty());
    }

    #[test]
    fn quotient_of_mecfree_input_is_isomorphic() {
        let a = mdp(&[Owner::P1, Owner::Rand], &[(0, 1)]);
        let d = mec_decompose(&a);
        assert!(d.mecs.is_empty());
        let qm = build_quotient(&a, &tuple(&[&[1]], 2), &d);
        assert_eq!(qm.arena, a);
        assert_eq!(qm.rep_of, vec![0, 1]);
    }

    #[test]
    fn quotient_of_single_big_mec_is_one_sink() {
        let a = mdp(&[Owner::Rand; 3], &[(0, 1), (1, 2), (2, 0)]);
        let d = mec_decompose(&a);
        let qm = build_quotient(&a, &tuple(&[&[0], &[2]], 3), &d);
        assert_eq!(qm.arena.len(), 1);
        assert_eq!(qm.arena.out_degree(0), 0);
        assert_eq!(qm.targets.set(0), &[0]);
        assert_eq!(qm.targets.set(1), &[0]);
    }

    #[test]
    fn mecfree_labels_figure_quotient_reach() {
        let a = three_vertex_example(ArenaKind::Mdp);
        let d = mec_decompose(&a);
        let qm = build_quotient(&a, &tuple(&[&[2]], 3), &d);
        let labels = mecfree_sequential_audited(&qm).unwrap();
        assert_eq!(labels.ell, vec![1, 1, 1]);
    }

    #[test]
    fn p1_vertex_folds_min_over_successors() {
        // sinks: 1 in T_2 (label 2), 2 untargeted (label 3); P1 vertex 0
        let a = mdp(&[Owner::P1, Owner::P1, Owner::P1], &[(0, 1), (0, 2)]);
        let qm = QuotientMdp {
            targets: tuple(&[&[], &[1]], 3),
            rep_of: vec![0, 1, 2],
            arena: a,
        };
        let labels = mecfree_sequential_audited(&qm).unwrap();
        assert_eq!(labels.ell[1], 2);
        assert_eq!(labels.ell[2], 3);
        assert_eq!(labels.ell[0], 2);
    }

    #[test]
    fn random_vertex_folds_max_over_successors() {
        let a = mdp(&[Owner::Rand, Owner::P1, Owner::P1], &[(0, 1), (0, 2)]);
        let qm = QuotientMdp {
            targets: tuple(&[&[], &[1]], 3),
            rep_of: vec![0, 1, 2],
            arena: a,
        };
        let labels = mecfree_sequential_audited(&qm).unwrap();
        assert_eq!(labels.ell[0], 3);
    }

    #[test]
    fn mecfree_rejects_input_with_end_components() {
        // 0 <-> 1 is a MEC, so no sink exists and the select step starves.
        let a = mdp(&[Owner::P1, Owner::P1], &[(0, 1), (1, 0)]);
        let qm = QuotientMdp {
            targets: tuple(&[&[1]], 2),
            rep_of: vec![0, 1],
            arena: a,
        };
        assert!(matches!(
            mecfree_sequential(&qm),
            Err(SolveError::Malformed(_))
        ));
    }

    #[test]
    fn mdp_sequential_figure_in_order() {
        let a = three_vertex_example(ArenaKind::Mdp);
        let q = Query {
            targets: tuple(&[&[1], &[2]], 3),
            arena: a,
            objective: Objective::Sequential,
            start: 0,
        };
        let (winning, _) = mdp_sequential(&q).unwrap();
        assert!(winning);
    }

    #[test]
    fn mdp_sequential_figure_reverse_order_fails() {
        // after v3 (a sink MEC) the play can never come back to v1
        let a = three_vertex_example(ArenaKind::Mdp);
        let q = Query {
            targets: tuple(&[&[2], &[0]], 3),
            arena: a,
            objective: Objective::Sequential,
            start: 0,
        };
        let (winning, set) = mdp_sequential(&q).unwrap();
        assert!(!winning);
        assert_eq!(set, Vec::<usize>::new());
    }

    #[test]
    fn mdp_sequential_empty_tuple_wins_everywhere() {
        let a = three_vertex_example(ArenaKind::Mdp);
        let q = Query {
            targets: tuple(&[], 3),
            arena: a,
            objective: Objective::Sequential,
            start: 0,
        };
        let (winning, set) = mdp_sequential(&q).unwrap();
        assert!(winning);
        assert_eq!(set, vec![0, 1, 2]);
    }

    #[test]
    fn as_reach_figure_target() {
        let a = three_vertex_example(ArenaKind::Mdp);
        assert_eq!(mdp_as_reach(&a, &[2]).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn as_reach_full_vertex_target() {
        let a = three_vertex_example(ArenaKind::Mdp);
        assert_eq!(mdp_as_reach(&a, &[0, 1, 2]).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn mdp_coverage_figure() {
        let a = three_vertex_example(ArenaKind::Mdp);
        let q = Query {
            targets: tuple(&[&[1], &[2]], 3),
            arena: a,
            objective: Objective::Coverage,
            start: 0,
        };
        assert_eq!(mdp_coverage(&q).unwrap(), vec![true, true]);
    }

    #[test]
    fn flipped_update_rule_is_caught_against_the_oracle() {
        // sanity check on the verification harness itself: an injected
        // min/max flip must produce visible discrepancies
        let mut discrepancies = 0;
        for seed in 0..60 {
            let q = crate::reductions::gen_random(
                ArenaKind::Mdp,
                7,
                18,
                2,
                0.35,
                Objective::Sequential,
                seed,
            )
            .unwrap();
            let d = mec_decompose(&q.arena);
            let qm = build_quotient(&q.arena, &q.targets, &d);
            let labels = mecfree_labels(
                &qm.arena,
                &qm.targets,
                false,
                UpdateRule::FlippedForMutationTests,
                &mut OpCounters::default(),
            )
            .unwrap();
            let buggy: Vec<usize> = (0..q.arena.len())
                .filter(|&v| labels.ell[qm.rep_of[v]] == 1)
                .collect();
            if buggy != crate::oracle::oracle_mdp_sequential(&q) {
                discrepancies += 1;
            }
        }
        assert!(discrepancies > 0, "mutated solver was not detected");
    }
}

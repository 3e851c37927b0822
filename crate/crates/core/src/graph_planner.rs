//! Linear-time solvers for plain graphs: reachability by BFS, coverage
//! via a single BFS, and sequential targets via SCC condensation
//! followed by backward label propagation over the resulting DAG.

use std::collections::VecDeque;

use crate::arena::{Arena, ArenaKind, Objective, Query, TargetTuple};
use crate::counters::OpCounters;
use crate::error::SolveError;

/// Partition of the vertices into maximal strongly connected components.
///
/// Components are numbered in the order Tarjan's algorithm completes
/// them, so every condensation edge points from a higher id to a lower
/// one; `topo_order` lists the ids in that successors-first order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccPartition {
    pub comp_of: Vec<usize>,
    pub comps: Vec<Vec<usize>>,
    pub topo_order: Vec<usize>,
}

/// Per-vertex stage label in `1..=k+1`. Label `i <= k` means the vertex
/// has a play achieving the suffix objective starting at stage `i`;
/// `k+1` means no stage suffix is achievable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    pub ell: Vec<usize>,
}

impl Labeling {
    /// Vertices with label 1, i.e. winning for the full objective.
    pub fn winning_set(&self) -> Vec<usize> {
        (0..self.ell.len()).filter(|&v| self.ell[v] == 1).collect()
    }
}

/// Forward-reachable set of `s`, sorted.
pub fn reachable_from(a: &Arena, s: usize) -> Vec<usize> {
    let mut counters = OpCounters::default();
    let mask = reach_mask(a, s, &mut counters);
    (0..a.len()).filter(|&v| mask[v]).collect()
}

pub(crate) fn reach_mask(a: &Arena, s: usize, counters: &mut OpCounters) -> Vec<bool> {
    debug_assert_eq!(a.kind(), ArenaKind::Graph);
    let mut seen = vec![false; a.len()];
    let mut queue = VecDeque::new();
    seen[s] = true;
    queue.push_back(s);
    while let Some(u) = queue.pop_front() {
        for &w in a.out(u) {
            counters.edge_touches += 1;
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Coverage on graphs: one BFS from the start, then one membership scan
/// per target set. Entry `i` is true iff some vertex of `T_i` is
/// reachable; an empty `T_i` is unachievable and yields false.
pub fn graph_coverage(q: &Query) -> Vec<bool> {
    graph_coverage_counted(q, &mut OpCounters::default())
}

pub(crate) fn graph_coverage_counted(q: &Query, counters: &mut OpCounters) -> Vec<bool> {
    assert_eq!(q.objective, Objective::Coverage);
    let reached = reach_mask(&q.arena, q.start, counters);
    q.targets
        .sets()
        .iter()
        .map(|set| {
            set.iter().any(|&v| {
                counters.label_touches += 1;
                reached[v]
            })
        })
        .collect()
}

/// Maximal SCC decomposition via iterative Tarjan, so deep graphs do not
/// overflow the call stack.
pub fn scc_decompose(a: &Arena) -> SccPartition {
    scc_masked(a, None, &mut OpCounters::default())
}

/// Tarjan restricted to the vertices where `active` is true (all of
/// them when `active` is `None`). Inactive vertices get `comp_of`
/// `usize::MAX` and appear in no component.
pub(crate) fn scc_masked(
    a: &Arena,
    active: Option<&[bool]>,
    counters: &mut OpCounters,
) -> SccPartition {
    let n = a.len();
    let is_active = |v: usize| active.is_none_or(|m| m[v]);

    const UNVISITED: usize = usize::MAX;
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut comp_of = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    // (vertex, position in its successor list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if !is_active(root) || index[root] != UNVISITED {
            continue;
        }
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        call.push((root, 0));

        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            if *i < a.out_degree(v) {
                let w = a.out(v)[*i];
                *i += 1;
                counters.edge_touches += 1;
                if !is_active(w) {
                    continue;
                }
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if low[v] == index[v] {
                    let cid = comps.len();
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp_of[w] = cid;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
            }
        }
    }

    let topo_order = (0..comps.len()).collect();
    SccPartition {
        comp_of,
        comps,
        topo_order,
    }
}

/// Collapses each SCC to a single vertex and rewrites the targets
/// through the quotient map. Inside an SCC the internal targets can be
/// visited in any order, so the collapse preserves the sequential
/// objective. The result is acyclic with no self-loops and typically
/// has sinks.
pub fn condense_with_targets(a: &Arena, t: &TargetTuple) -> (Arena, TargetTuple, Vec<usize>) {
    condense_counted(a, t, &mut OpCounters::default())
}

pub(crate) fn condense_counted(
    a: &Arena,
    t: &TargetTuple,
    counters: &mut OpCounters,
) -> (Arena, TargetTuple, Vec<usize>) {
    assert_eq!(a.kind(), ArenaKind::Graph);
    let scc = scc_masked(a, None, counters);
    let nc = scc.comps.len();
    let mut edges = Vec::new();
    for (u, v) in a.edges() {
        counters.edge_touches += 1;
        let (cu, cv) = (scc.comp_of[u], scc.comp_of[v]);
        if cu != cv {
            edges.push((cu, cv));
        }
    }
    let dag = Arena::new(ArenaKind::Graph, vec![crate::arena::Owner::P1; nc], edges)
        .expect("condensation indices are in range");
    let sets = t
        .sets()
        .iter()
        .map(|set| {
            set.iter()
                .map(|&v| {
                    counters.label_touches += 1;
                    scc.comp_of[v]
                })
                .collect()
        })
        .collect();
    let targets = TargetTuple::new(sets, nc).expect("condensation indices are in range");
    (dag, targets, scc.comp_of)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum QueueOrder {
    Fifo,
    #[allow(dead_code)] // exercised by the order-independence tests
    Lifo,
}

/// Backward label propagation over a DAG: processes each vertex exactly
/// once in reverse topological order driven by out-degree counters, in
/// O(m + sum of target sizes) total work.
///
/// Errors with [`SolveError::NotADag`] if a cycle is detected (the
/// queue runs dry while unprocessed vertices remain).
pub fn dag_sequential(d: &Arena, t: &TargetTuple) -> Result<Labeling, SolveError> {
    dag_sequential_impl(d, t, false, QueueOrder::Fifo, &mut OpCounters::default())
}

/// As [`dag_sequential`], additionally asserting the loop invariants of
/// the propagation at every loop head. Intended for verification runs;
/// the checks cost O(n + m) per processed vertex.
pub fn dag_sequential_audited(d: &Arena, t: &TargetTuple) -> Result<Labeling, SolveError> {
    dag_sequential_impl(d, t, true, QueueOrder::Fifo, &mut OpCounters::default())
}

pub(crate) fn dag_sequential_impl(
    d: &Arena,
    t: &TargetTuple,
    audit: bool,
    order: QueueOrder,
    counters: &mut OpCounters,
) -> Result<Labeling, SolveError> {
    let n = d.len();
    let k = t.len();

    let mut stage_lists: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, set) in t.sets().iter().enumerate() {
        for &v in set {
            counters.label_touches += 1;
            stage_lists[v].push(i + 1);
        }
    }

    let mut scratch = vec![false; k + 2];
    let mut mcount: Vec<usize> = (0..n).map(|v| d.out_degree(v)).collect();
    let mut best: Vec<Option<usize>> = (0..n)
        .map(|v| if d.out_degree(v) == 0 { Some(k + 1) } else { None })
        .collect();
    let mut ell: Vec<Option<usize>> = vec![None; n];
    let mut in_s = vec![true; n];
    let mut s_count = n;
    let mut queue: VecDeque<usize> = d.sinks().into();

    while s_count > 0 {
        if audit {
            audit_graph_invariants(d, k, &mcount, &best, &ell, &in_s, &queue, &scratch);
        }
        let Some(v) = (match order {
            QueueOrder::Fifo => queue.pop_front(),
            QueueOrder::Lifo => queue.pop_back(),
        }) else {
            return Err(SolveError::NotADag {
                unprocessed: s_count,
            });
        };

        // ProcessVertex(v)
        for &i in &stage_lists[v] {
            counters.label_touches += 1;
            scratch[i] = true;
        }
        let mut label = best[v].expect("queued vertex has its best label set");
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

        for &w in d.incoming(v) {
            counters.edge_touches += 1;
            best[w] = Some(best[w].map_or(label, |b| b.min(label)));
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

/// Loop-head invariants of the backward propagation: counter meaning,
/// queue characterization, queue non-emptiness, sink initialization,
/// and the min-over-processed-successors meaning of `best`.
#[allow(clippy::too_many_arguments)]
fn audit_graph_invariants(
    d: &Arena,
    k: usize,
    mcount: &[usize],
    best: &[Option<usize>],
    ell: &[Option<usize>],
    in_s: &[bool],
    queue: &VecDeque<usize>,
    scratch: &[bool],
) {
    let n = d.len();
    let in_q: Vec<bool> = {
        let mut m = vec![false; n];
        for &v in queue {
            m[v] = true;
        }
        m
    };
    let s_nonempty = in_s.iter().any(|&b| b);
    assert!(
        !s_nonempty || !queue.is_empty(),
        "invariant 3 violated: S nonempty but queue empty"
    );
    assert!(
        scratch.iter().all(|&b| !b),
        "scratch bitmap not clear between ProcessVertex calls"
    );
    for v in 0..n {
        let succ_in_s = d.out(v).iter().filter(|&&w| in_s[w]).count();
        assert_eq!(
            mcount[v], succ_in_s,
            "invariant 1 violated at vertex {v}: mcount {} vs |Out∩S| {succ_in_s}",
            mcount[v]
        );
        let should_queue = in_s[v] && succ_in_s == 0;
        assert_eq!(
            in_q[v], should_queue,
            "invariant 2 violated at vertex {v}"
        );
        if d.out_degree(v) == 0 {
            assert_eq!(
                best[v],
                Some(k + 1),
                "invariant 4 violated at sink {v}: best {:?}",
                best[v]
            );
        } else {
            let expected = d
                .out(v)
                .iter()
                .filter(|&&w| !in_s[w])
                .map(|&w| ell[w].expect("processed vertex has a label"))
                .min();
            assert_eq!(
                best[v], expected,
                "invariant 5 violated at vertex {v}"
            );
        }
        if !in_s[v] {
            assert!(ell[v].is_some(), "processed vertex {v} has no label");
        }
    }
}

/// Full sequential-target solver for graphs: condense SCCs, label the
/// DAG, and pull the labels back; a vertex wins iff its component is
/// labeled 1.
pub fn graph_sequential(q: &Query) -> Result<(bool, Vec<usize>), SolveError> {
    let labels = graph_sequential_labeling(q)?;
    let set = labels.winning_set();
    Ok((labels.ell[q.start] == 1, set))
}

/// The per-vertex stage labeling behind [`graph_sequential`].
pub fn graph_sequential_labeling(q: &Query) -> Result<Labeling, SolveError> {
    graph_sequential_labels(q, false, &mut OpCounters::default())
}

/// Per-original-vertex labeling for a sequential graph query.
pub(crate) fn graph_sequential_labels(
    q: &Query,
    audit: bool,
    counters: &mut OpCounters,
) -> Result<Labeling, SolveError> {
    assert_eq!(q.arena.kind(), ArenaKind::Graph);
    let (dag, targets, comp_of) = condense_counted(&q.arena, &q.targets, counters);
    let comp_labels = dag_sequential_impl(&dag, &targets, audit, QueueOrder::Fifo, counters)?;
    Ok(Labeling {
        ell: comp_of.iter().map(|&c| comp_labels.ell[c]).collect(),
    })
}

//! Independent brute-force reference implementations used to
//! cross-validate every main solver on small instances, plus the
//! orthogonal-vectors and triangle deciders that anchor the reduction
//! generators. Nothing here shares code with the main solvers beyond
//! the [`Arena`] type itself; traversals, fixpoints, and component
//! analyses are all reimplemented naively.

use std::collections::VecDeque;

use crate::arena::{Arena, ArenaKind, Owner, Query, TargetTuple};

/// One state of the stage-tracking product: a base vertex paired with
/// the next pending stage in `1..=k+1`. Stage `k+1` is
/// absorbing-accepting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductIndex {
    pub vertex: usize,
    pub stage: usize,
}

/// Product of an arena with the stage counter of a sequential
/// objective. A state advances its stage past every consecutive target
/// it sits in before taking an edge, so a start vertex inside the first
/// target counts immediately.
#[derive(Debug, Clone)]
pub struct Product {
    pub arena: Arena,
    /// State indices with stage k+1, sorted.
    pub accepting: Vec<usize>,
    /// Number of stages k.
    pub stages: usize,
    /// Entry state per base vertex (its stage already advanced).
    pub entry: Vec<usize>,
}

impl Product {
    pub fn index(&self, p: ProductIndex) -> usize {
        p.vertex * (self.stages + 1) + (p.stage - 1)
    }

    pub fn unflatten(&self, state: usize) -> ProductIndex {
        ProductIndex {
            vertex: state / (self.stages + 1),
            stage: state % (self.stages + 1) + 1,
        }
    }
}

fn advance(t: &TargetTuple, v: usize, mut stage: usize) -> usize {
    while stage <= t.len() && t.set(stage - 1).binary_search(&v).is_ok() {
        stage += 1;
    }
    stage
}

/// Expands `a` with the stage counter of `t`. The product has exactly
/// `n * (k+1)` states; owners are inherited from the base vertex.
pub fn product_expand(a: &Arena, t: &TargetTuple) -> Product {
    let n = a.len();
    let k = t.len();
    let width = k + 1;
    let idx = |v: usize, stage: usize| v * width + (stage - 1);

    let mut owners = Vec::with_capacity(n * width);
    for v in 0..n {
        for _ in 0..width {
            owners.push(a.owner(v));
        }
    }
    let mut edges = Vec::new();
    for (v, w) in a.edges() {
        for stage in 1..=width {
            edges.push((idx(v, stage), idx(w, advance(t, w, stage))));
        }
    }
    let arena = Arena::new(a.kind(), owners, edges).expect("product indices in range");
    let accepting = (0..n).map(|v| idx(v, width)).collect();
    let entry = (0..n).map(|v| idx(v, advance(t, v, 1))).collect();
    Product {
        arena,
        accepting,
        stages: k,
        entry,
    }
}

/// Vertices with a path into `seeds`, via plain backward BFS.
fn backward_closure(a: &Arena, seeds: &[usize]) -> Vec<bool> {
    let mut seen = vec![false; a.len()];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for &v in seeds {
        if !seen[v] {
            seen[v] = true;
            queue.push_back(v);
        }
    }
    while let Some(u) = queue.pop_front() {
        for &w in a.incoming(u) {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Reference sequential solver for graphs: the winning set is every
/// vertex whose product entry state can reach an accepting state.
pub fn oracle_graph_sequential(q: &Query) -> Vec<usize> {
    assert_eq!(q.arena.kind(), ArenaKind::Graph);
    let p = product_expand(&q.arena, &q.targets);
    let can = backward_closure(&p.arena, &p.accepting);
    (0..q.arena.len()).filter(|&v| can[p.entry[v]]).collect()
}

/// Player-1 attractor by naive iteration to a fixpoint: rescan all
/// vertices until nothing changes. Deliberately not the counter-based
/// implementation.
pub fn naive_attractor_fixpoint(a: &Arena, target: &[usize]) -> Vec<usize> {
    let n = a.len();
    let mut inside = vec![false; n];
    for &v in target {
        inside[v] = true;
    }
    loop {
        let mut changed = false;
        for v in 0..n {
            if inside[v] {
                continue;
            }
            let join = match a.owner(v) {
                Owner::P2 => !a.out(v).is_empty() && a.out(v).iter().all(|&w| inside[w]),
                _ => a.out(v).iter().any(|&w| inside[w]),
            };
            if join {
                inside[v] = true;
                changed = true;
            }
        }
        if !changed {
            return (0..n).filter(|&v| inside[v]).collect();
        }
    }
}

/// Reference sequential solver for games: naive attractor on the
/// product.
pub fn oracle_game_sequential(q: &Query) -> Vec<usize> {
    assert_eq!(q.arena.kind(), ArenaKind::Game);
    let p = product_expand(&q.arena, &q.targets);
    let attr = naive_attractor_fixpoint(&p.arena, &p.accepting);
    let mut inside = vec![false; p.arena.len()];
    for v in attr {
        inside[v] = true;
    }
    (0..q.arena.len()).filter(|&v| inside[p.entry[v]]).collect()
}

/// Reference sequential solver for MDPs: the removal-loop almost-sure
/// reachability computation on the product.
pub fn oracle_mdp_sequential(q: &Query) -> Vec<usize> {
    assert_eq!(q.arena.kind(), ArenaKind::Mdp);
    let p = product_expand(&q.arena, &q.targets);
    let win = as_reach_fixpoint(&p.arena, &p.accepting);
    let mut inside = vec![false; p.arena.len()];
    for v in win {
        inside[v] = true;
    }
    (0..q.arena.len()).filter(|&v| inside[p.entry[v]]).collect()
}

/// Reference coverage: one reference reachability run per target set.
pub fn oracle_coverage(q: &Query) -> Vec<bool> {
    (0..q.targets.len())
        .map(|i| {
            let single = Query {
                arena: q.arena.clone(),
                targets: TargetTuple::new(vec![q.targets.set(i).to_vec()], q.arena.len())
                    .expect("target in range"),
                objective: crate::arena::Objective::Sequential,
                start: q.start,
            };
            let set = match q.arena.kind() {
                ArenaKind::Graph => oracle_graph_sequential(&single),
                ArenaKind::Mdp => oracle_mdp_sequential(&single),
                ArenaKind::Game => oracle_game_sequential(&single),
            };
            set.binary_search(&q.start).is_ok()
        })
        .collect()
}

/// Random attractor of `base` within `within` by naive iteration to a
/// fixpoint: a random vertex joins on some member successor, a player-1
/// vertex joins when it has `within`-successors and all are members.
pub fn naive_random_attractor(a: &Arena, base: &[usize], within: &[usize]) -> Vec<usize> {
    let n = a.len();
    let mut in_within = vec![false; n];
    for &v in within {
        in_within[v] = true;
    }
    let mut inside = vec![false; n];
    for &v in base {
        assert!(in_within[v], "base vertex {v} not inside `within`");
        inside[v] = true;
    }
    loop {
        let mut changed = false;
        for v in 0..n {
            if !in_within[v] || inside[v] {
                continue;
            }
            let within_succs: Vec<usize> =
                a.out(v).iter().copied().filter(|&w| in_within[w]).collect();
            let join = match a.owner(v) {
                Owner::Rand => within_succs.iter().any(|&w| inside[w]),
                _ => !within_succs.is_empty() && within_succs.iter().all(|&w| inside[w]),
            };
            if join {
                inside[v] = true;
                changed = true;
            }
        }
        if !changed {
            return (0..n).filter(|&v| inside[v]).collect();
        }
    }
}

/// Rebuilds `a` with every vertex of `absorbing` given a single
/// self-loop. Reachability is satisfied at first visit, so this
/// preserves the almost-sure reachability winning set.
fn make_absorbing(a: &Arena, absorbing: &[usize]) -> Arena {
    let n = a.len();
    let mut is_abs = vec![false; n];
    for &v in absorbing {
        is_abs[v] = true;
    }
    let mut edges = Vec::new();
    for (v, &absorbed) in is_abs.iter().enumerate() {
        if absorbed {
            edges.push((v, v));
        } else {
            for &w in a.out(v) {
                edges.push((v, w));
            }
        }
    }
    Arena::new(a.kind(), a.owners().to_vec(), edges).expect("same index range")
}

/// Almost-sure reachability winning set by the classical removal loop:
/// make the target absorbing, then repeatedly find vertices with no
/// path to the target inside the current candidate set and peel their
/// random attractor until none remain.
pub fn as_reach_fixpoint(a: &Arena, target: &[usize]) -> Vec<usize> {
    assert_eq!(a.kind(), ArenaKind::Mdp);
    let n = a.len();
    let b = make_absorbing(a, target);
    let mut in_t = vec![false; n];
    for &v in target {
        in_t[v] = true;
    }
    let mut in_w = vec![true; n];
    loop {
        let w_members: Vec<usize> = (0..n).filter(|&v| in_w[v]).collect();
        let seeds: Vec<usize> = w_members.iter().copied().filter(|&v| in_t[v]).collect();
        // backward closure within W only
        let mut can = vec![false; n];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for &v in &seeds {
            can[v] = true;
            queue.push_back(v);
        }
        while let Some(u) = queue.pop_front() {
            for &p in b.incoming(u) {
                if in_w[p] && !can[p] {
                    can[p] = true;
                    queue.push_back(p);
                }
            }
        }
        let doomed: Vec<usize> = w_members.iter().copied().filter(|&v| !can[v]).collect();
        if doomed.is_empty() {
            return w_members;
        }
        let peel = naive_random_attractor(&b, &doomed, &w_members);
        for v in peel {
            in_w[v] = false;
        }
    }
}

/// Almost-sure reachability by enumerating every memoryless player-1
/// policy and analyzing the induced chain: the policy wins from `v`
/// when every bottom component reachable from `v` (with the target made
/// absorbing) intersects the target. Exponential; intended for tiny
/// instances only.
pub fn enumerate_as_reach(a: &Arena, target: &[usize]) -> Vec<usize> {
    assert_eq!(a.kind(), ArenaKind::Mdp);
    let n = a.len();
    let b = make_absorbing(a, target);
    let p1: Vec<usize> = (0..n)
        .filter(|&v| b.owner(v) == Owner::P1 && b.out_degree(v) > 0)
        .collect();
    let combos: usize = p1.iter().map(|&v| b.out_degree(v)).product();
    assert!(
        combos <= 1 << 22,
        "policy enumeration out of budget: {combos} combinations"
    );
    let mut in_t = vec![false; n];
    for &v in target {
        in_t[v] = true;
    }

    let mut winning = vec![false; n];
    let mut choice: Vec<usize> = vec![0; p1.len()];
    loop {
        // successor sets of the induced chain under this policy
        let chain_out = |v: usize| -> &[usize] {
            match p1.binary_search(&v) {
                Ok(i) => {
                    let c = choice[i];
                    &b.out(v)[c..=c]
                }
                Err(_) => b.out(v),
            }
        };
        // forward-reachable sets per vertex
        let mut reach: Vec<Vec<bool>> = Vec::with_capacity(n);
        for s in 0..n {
            let mut seen = vec![false; n];
            let mut queue = VecDeque::new();
            seen[s] = true;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &w in chain_out(u) {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            reach.push(seen);
        }
        // bottom components: mutually reachable classes with no escape
        let mut is_bottom_member = vec![false; n];
        for (v, row) in reach.iter().enumerate() {
            let class: Vec<usize> = (0..n).filter(|&u| row[u] && reach[u][v]).collect();
            let escapes = class
                .iter()
                .any(|&u| chain_out(u).iter().any(|&w| !(row[w] && reach[w][v])));
            if !escapes {
                for &u in &class {
                    is_bottom_member[u] = true;
                }
            }
        }
        for v in 0..n {
            if winning[v] {
                continue;
            }
            let ok = (0..n).all(|u| {
                // every reachable bottom class must intersect the target
                if !(reach[v][u] && is_bottom_member[u]) {
                    return true;
                }
                (0..n).any(|w| reach[u][w] && reach[w][u] && in_t[w])
            });
            if ok {
                winning[v] = true;
            }
        }
        // odometer over policy choices
        let mut i = 0;
        loop {
            if i == p1.len() {
                return (0..n).filter(|&v| winning[v]).collect();
            }
            choice[i] += 1;
            if choice[i] < b.out_degree(p1[i]) {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Maximal end-components by explicit subset enumeration: keep every
/// vertex set that induces a strongly connected subgraph with at least
/// one internal edge and is closed for its random vertices, then drop
/// the non-maximal ones. Exponential; capped at 20 vertices.
pub fn enumerate_mecs(a: &Arena) -> Vec<Vec<usize>> {
    assert_eq!(a.kind(), ArenaKind::Mdp);
    let n = a.len();
    assert!(n <= 20, "subset enumeration out of budget for n = {n}");
    let member = |mask: u32, v: usize| mask & (1 << v) != 0;

    let is_end_component = |mask: u32| -> bool {
        let verts: Vec<usize> = (0..n).filter(|&v| member(mask, v)).collect();
        let closed = verts.iter().all(|&v| {
            a.owner(v) != Owner::Rand || a.out(v).iter().all(|&u| member(mask, u))
        });
        if !closed {
            return false;
        }
        let internal_edge = verts
            .iter()
            .any(|&v| a.out(v).iter().any(|&u| member(mask, u)));
        if !internal_edge {
            return false;
        }
        // strong connectivity of the induced subgraph
        verts.iter().all(|&s| {
            let mut seen = vec![false; n];
            let mut queue = VecDeque::from([s]);
            seen[s] = true;
            while let Some(u) = queue.pop_front() {
                for &w in a.out(u) {
                    if member(mask, w) && !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            verts.iter().all(|&u| seen[u])
        })
    };

    let ecs: Vec<u32> = (1..(1u32 << n)).filter(|&m| is_end_component(m)).collect();
    let mut mecs: Vec<Vec<usize>> = ecs
        .iter()
        .filter(|&&m| !ecs.iter().any(|&other| other != m && other & m == m))
        .map(|&m| (0..n).filter(|&v| member(m, v)).collect())
        .collect();
    mecs.sort();
    mecs
}

/// Is some pair of vectors orthogonal? Quadratic pair scan.
pub fn ov_bruteforce(s1: &[Vec<bool>], s2: &[Vec<bool>]) -> bool {
    s1.iter().any(|u| {
        s2.iter()
            .any(|v| u.iter().zip(v.iter()).all(|(&a, &b)| !(a && b)))
    })
}

/// Does the graph contain a directed triangle x -> y -> z -> x?
/// Edge-pair scan against an adjacency matrix; self-loop edges are
/// ignored.
pub fn triangle_bruteforce(g: &Arena) -> bool {
    assert_eq!(g.kind(), ArenaKind::Graph);
    let n = g.len();
    let mut matrix = vec![false; n * n];
    for (u, v) in g.edges() {
        if u != v {
            matrix[u * n + v] = true;
        }
    }
    for (x, y) in g.edges() {
        if x == y {
            continue;
        }
        for &z in g.out(y) {
            if z != y && matrix[z * n + x] {
                return true;
            }
        }
    }
    false
}

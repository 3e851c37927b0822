//! Cross-module property suites: structural invariants of the arena
//! layer, solver outputs against the brute-force oracles, witness
//! strategy soundness, and operation-counter bounds, all quantified
//! over seeded random instances.

use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use reachplan::arena::{parse, serialize, Arena, ArenaKind, Objective, Query, TargetTuple};
use reachplan::graph_planner::graph_sequential_labeling;
use reachplan::mdp_planner::{
    build_quotient, mdp_as_reach, mdp_sequential_labeling, mec_decompose, random_attractor,
};
use reachplan::oracle::{
    as_reach_fixpoint, naive_attractor_fixpoint, naive_random_attractor, oracle_game_sequential,
    oracle_graph_sequential, oracle_mdp_sequential, triangle_bruteforce,
};
use reachplan::reductions::{
    gen_random, gen_triangle_source, reduce_ov_game, reduce_ov_mdp, reduce_triangle_game,
    reduce_triangle_mdp, OvInstance,
};
use reachplan::solve::{agrees, oracle_solve, solve};
use reachplan::{attractor_p1, game_sequential, simulate_staged_strategy, Owner};

fn small_query(kind: ArenaKind, objective: Objective) -> impl Strategy<Value = Query> {
    (2usize..=8, 0usize..=12, 0usize..=3, 0.05f64..0.9, any::<u64>()).prop_map(
        move |(n, extra, k, density, seed)| {
            let k = if objective == Objective::Reach { 1 } else { k };
            gen_random(kind, n, n + extra, k, density, objective, seed).expect("feasible")
        },
    )
}

/// Forward reachability by repeated edge relaxation, independent of the
/// BFS implementation.
fn closure_reach(a: &Arena, s: usize) -> Vec<usize> {
    let n = a.len();
    let mut reach = vec![false; n];
    reach[s] = true;
    loop {
        let mut changed = false;
        for (u, v) in a.edges() {
            if reach[u] && !reach[v] {
                reach[v] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    (0..n).filter(|&v| reach[v]).collect()
}

/// All-pairs reachability by relaxation; used for the mutual-reachability
/// SCC oracle.
fn closure_matrix(a: &Arena) -> Vec<Vec<bool>> {
    (0..a.len())
        .map(|s| {
            let r = closure_reach(a, s);
            let mut mask = vec![false; a.len()];
            for v in r {
                mask[v] = true;
            }
            mask
        })
        .collect()
}

fn is_acyclic(a: &Arena) -> bool {
    // Kahn's algorithm; self-loops also disqualify
    let n = a.len();
    if (0..n).any(|v| a.has_edge(v, v)) {
        return false;
    }
    let mut indeg: Vec<usize> = (0..n).map(|v| a.incoming(v).len()).collect();
    let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(u) = stack.pop() {
        seen += 1;
        for &w in a.out(u) {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                stack.push(w);
            }
        }
    }
    seen == n
}

/// Least stage index i such that the reference solver reports `v`
/// winning for the suffix objective starting at stage i; k+1 when none.
fn oracle_least_stage(q: &Query, v: usize) -> usize {
    let k = q.targets.len();
    for i in 1..=k {
        let suffix = TargetTuple::new(q.targets.sets()[i - 1..].to_vec(), q.arena.len()).unwrap();
        let sq = Query {
            arena: q.arena.clone(),
            targets: suffix,
            objective: Objective::Sequential,
            start: v,
        };
        let set = match q.arena.kind() {
            ArenaKind::Graph => oracle_graph_sequential(&sq),
            ArenaKind::Mdp => oracle_mdp_sequential(&sq),
            ArenaKind::Game => oracle_game_sequential(&sq),
        };
        if set.binary_search(&v).is_ok() {
            return i;
        }
    }
    k + 1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn transpose_is_consistent(q in small_query(ArenaKind::Mdp, Objective::Sequential)) {
        let a = &q.arena;
        for u in a.vertices() {
            for &v in a.out(u) {
                prop_assert!(a.incoming(v).contains(&u));
            }
            for &p in a.incoming(u) {
                prop_assert!(a.out(p).contains(&u));
            }
        }
    }

    #[test]
    fn parse_serialize_roundtrip(q in small_query(ArenaKind::Game, Objective::Coverage)) {
        let text = serialize(&q);
        let q2 = parse(&text, false).unwrap();
        prop_assert_eq!(&q, &q2);
        prop_assert_eq!(serialize(&q2), text);
    }

    #[test]
    fn bfs_matches_relaxation_closure(q in small_query(ArenaKind::Graph, Objective::Reach)) {
        prop_assert_eq!(
            reachplan::reachable_from(&q.arena, q.start),
            closure_reach(&q.arena, q.start)
        );
    }

    #[test]
    fn scc_matches_mutual_reachability(q in small_query(ArenaKind::Graph, Objective::Coverage)) {
        let a = &q.arena;
        let scc = reachplan::scc_decompose(a);
        let m = closure_matrix(a);
        for u in a.vertices() {
            for v in a.vertices() {
                let together = scc.comp_of[u] == scc.comp_of[v];
                prop_assert_eq!(together, m[u][v] && m[v][u], "vertices {} and {}", u, v);
            }
        }
    }

    #[test]
    fn condensation_is_acyclic(q in small_query(ArenaKind::Graph, Objective::Sequential)) {
        let (dag, _, _) = reachplan::condense_with_targets(&q.arena, &q.targets);
        prop_assert!(is_acyclic(&dag));
    }

    #[test]
    fn graph_labels_match_product_oracle(q in small_query(ArenaKind::Graph, Objective::Sequential)) {
        let labels = graph_sequential_labeling(&q).unwrap();
        for v in q.arena.vertices() {
            prop_assert_eq!(labels.ell[v], oracle_least_stage(&q, v), "vertex {}", v);
        }
    }

    #[test]
    fn mdp_labels_match_product_oracle(q in small_query(ArenaKind::Mdp, Objective::Sequential)) {
        let labels = mdp_sequential_labeling(&q).unwrap();
        for v in q.arena.vertices() {
            prop_assert_eq!(labels.ell[v], oracle_least_stage(&q, v), "vertex {}", v);
        }
    }

    #[test]
    fn mdp_labels_are_suffix_monotone(q in small_query(ArenaKind::Mdp, Objective::Sequential)) {
        let labels = mdp_sequential_labeling(&q).unwrap();
        let k = q.targets.len();
        for j in 1..=k {
            let suffix = TargetTuple::new(q.targets.sets()[j - 1..].to_vec(), q.arena.len()).unwrap();
            let sq = Query {
                arena: q.arena.clone(),
                targets: suffix,
                objective: Objective::Sequential,
                start: q.start,
            };
            let suffix_labels = mdp_sequential_labeling(&sq).unwrap();
            for v in q.arena.vertices() {
                // suffix stage s corresponds to original stage s + j - 1
                prop_assert_eq!(
                    suffix_labels.ell[v] + j - 1,
                    labels.ell[v].max(j),
                    "vertex {} suffix {}", v, j
                );
            }
        }
    }

    #[test]
    fn quotient_is_mec_free(q in small_query(ArenaKind::Mdp, Objective::Sequential)) {
        let d = mec_decompose(&q.arena);
        let qm = build_quotient(&q.arena, &q.targets, &d);
        prop_assert!(mec_decompose(&qm.arena).mecs.is_empty());
    }

    #[test]
    fn random_attractor_matches_naive_fixpoint(
        q in small_query(ArenaKind::Mdp, Objective::Coverage),
        base_bits in any::<u64>(),
        within_bits in any::<u64>(),
    ) {
        let n = q.arena.len();
        let within: Vec<usize> = (0..n).filter(|v| within_bits & (1 << v) != 0).collect();
        let base: Vec<usize> = within
            .iter()
            .copied()
            .filter(|v| base_bits & (1 << v) != 0)
            .collect();
        prop_assert_eq!(
            random_attractor(&q.arena, &base, &within),
            naive_random_attractor(&q.arena, &base, &within)
        );
    }

    #[test]
    fn attractor_matches_naive_fixpoint(q in small_query(ArenaKind::Game, Objective::Reach)) {
        let attr = attractor_p1(&q.arena, q.targets.set(0));
        prop_assert_eq!(&attr.set, &naive_attractor_fixpoint(&q.arena, q.targets.set(0)));
    }

    #[test]
    fn attractor_strategy_is_well_formed(q in small_query(ArenaKind::Game, Objective::Reach)) {
        let a = &q.arena;
        let target = q.targets.set(0);
        let attr = attractor_p1(a, target);
        for &v in &attr.set {
            if target.binary_search(&v).is_ok() {
                prop_assert_eq!(attr.rank[v], Some(0));
                continue;
            }
            match a.owner(v) {
                Owner::P2 => {
                    for &w in a.out(v) {
                        prop_assert!(attr.contains(w), "P2 vertex {} escapes via {}", v, w);
                    }
                }
                _ => {
                    let w = attr.strategy[v].expect("member P1 vertex has a choice");
                    prop_assert!(a.out(v).contains(&w));
                    prop_assert!(attr.contains(w));
                    prop_assert!(attr.rank[w] < attr.rank[v], "rank must strictly drop");
                }
            }
        }
    }

    #[test]
    fn attractor_is_minimal(q in small_query(ArenaKind::Game, Objective::Reach)) {
        // dropping any non-target member breaks the fixpoint equation
        let a = &q.arena;
        let target = q.targets.set(0);
        let attr = attractor_p1(a, target);
        let step = |inside: &[bool], v: usize| -> bool {
            target.binary_search(&v).is_ok()
                || match a.owner(v) {
                    Owner::P2 => !a.out(v).is_empty() && a.out(v).iter().all(|&w| inside[w]),
                    _ => a.out(v).iter().any(|&w| inside[w]),
                }
        };
        let mut inside = vec![false; a.len()];
        for &v in &attr.set {
            inside[v] = true;
        }
        // the result itself satisfies the equation
        for v in a.vertices() {
            prop_assert_eq!(inside[v], step(&inside, v));
        }
        for &dropped in &attr.set {
            if target.binary_search(&dropped).is_ok() {
                continue;
            }
            inside[dropped] = false;
            let still_fixed = a.vertices().all(|v| inside[v] == step(&inside, v));
            prop_assert!(!still_fixed, "removing {} left a fixpoint", dropped);
            inside[dropped] = true;
        }
    }

    #[test]
    fn solvers_agree_with_oracles(
        seed in any::<u64>(),
        kind_pick in 0usize..3,
        obj_pick in 0usize..3,
    ) {
        let kind = [ArenaKind::Graph, ArenaKind::Mdp, ArenaKind::Game][kind_pick];
        let objective = [Objective::Reach, Objective::Coverage, Objective::Sequential][obj_pick];
        let k = if objective == Objective::Reach { 1 } else { (seed % 4) as usize };
        let n = 2 + (seed % 7) as usize;
        let q = gen_random(kind, n, n + (seed % 13) as usize, k, 0.3, objective, seed).unwrap();
        let main = solve(&q).unwrap();
        let reference = oracle_solve(&q);
        prop_assert!(agrees(&main, &reference));
    }

    #[test]
    fn graph_sequential_work_is_linear(q in small_query(ArenaKind::Graph, Objective::Sequential)) {
        let sol = solve(&q).unwrap();
        let budget = q.arena.edge_count() + q.targets.total_size() + q.targets.len() + 1;
        let work = sol.counters.edge_touches + sol.counters.label_touches;
        prop_assert!(
            work <= 8 * budget as u64,
            "work {} exceeds 8 * {}", work, budget
        );
    }

    #[test]
    fn game_sequential_work_is_k_m(q in small_query(ArenaKind::Game, Objective::Sequential)) {
        let sol = solve(&q).unwrap();
        let k = q.targets.len().max(1) as u64;
        let m = q.arena.edge_count() as u64;
        prop_assert!(sol.counters.edge_touches <= 2 * k * m + m);
    }
}

#[test]
fn staged_strategies_win_against_random_adversaries() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xfeed);
    let mut simulated = 0usize;
    for seed in 0..40u64 {
        let k = (seed % 3 + 1) as usize;
        let q = gen_random(ArenaKind::Game, 7, 16, k, 0.3, Objective::Sequential, seed).unwrap();
        let sol = game_sequential(&q);
        let budget = q.arena.len() * (k + 1) + 1;
        for &start in &sol.winning_set {
            for _ in 0..5 {
                let steps = simulate_staged_strategy(
                    &q,
                    &sol,
                    start,
                    |_, succs| succs[rng.gen_range(0..succs.len())],
                    budget,
                );
                assert!(
                    steps.is_some(),
                    "strategy failed from {start} on seed {seed}"
                );
                simulated += 1;
            }
        }
    }
    assert!(simulated >= 200, "only {simulated} adversary plays simulated");
}

#[test]
fn as_reach_routes_agree_on_small_instances() {
    for seed in 0..120u64 {
        let q = gen_random(ArenaKind::Mdp, 6, 12, 1, 0.3, Objective::Reach, seed).unwrap();
        let target = q.targets.set(0);
        let algorithmic = mdp_as_reach(&q.arena, target).unwrap();
        let removal = as_reach_fixpoint(&q.arena, target);
        assert_eq!(algorithmic, removal, "seed {seed}");
    }
}

#[test]
fn oracles_are_total_within_their_envelope() {
    // largest instances the reference solvers are specified for:
    // n <= 12, k <= 4, answered within a second each
    for (kind, seed) in [
        (ArenaKind::Graph, 1u64),
        (ArenaKind::Mdp, 2),
        (ArenaKind::Game, 3),
    ] {
        let q = gen_random(kind, 12, 36, 4, 0.4, Objective::Sequential, seed).unwrap();
        let clock = std::time::Instant::now();
        let _ = oracle_solve(&q);
        assert!(
            clock.elapsed().as_millis() < 1000,
            "{kind:?} oracle took {:?}",
            clock.elapsed()
        );
    }
}

#[test]
fn reduction_variants_decide_the_same_source() {
    for seed in 0..30u64 {
        let o = OvInstance::random(4 + (seed % 5) as usize, 5, seed);
        let mdp = reduce_ov_mdp(&o).unwrap();
        let game = reduce_ov_game(&o).unwrap();
        assert_eq!(mdp.truth, game.truth, "ov seed {seed}");

        let g = gen_triangle_source(4 + (seed % 6) as usize, 14, seed).unwrap();
        let tm = reduce_triangle_mdp(&g).unwrap();
        let tg = reduce_triangle_game(&g).unwrap();
        assert_eq!(tm.truth, tg.truth, "triangle seed {seed}");
        assert_eq!(tm.truth, !triangle_bruteforce(&g));
    }
}

//! Instance generators: six reductions from orthogonal-vectors and
//! triangle detection onto coverage/sequential queries, each carrying
//! the ground truth computed by brute force on the source instance, and
//! a seeded random query generator.
//!
//! Vertex layouts are fixed so target sets can be reconstructed by
//! index arithmetic: the OV reductions place the start vertex at 0,
//! then the S1 block, the coordinate block, and the S2 block; the
//! triangle reductions place the start vertex at 0 followed by the four
//! graph copies.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arena::{Arena, ArenaKind, Objective, Owner, Query, TargetTuple};
use crate::oracle::{ov_bruteforce, triangle_bruteforce};

/// An orthogonal-vectors instance: two equal-sized sets of d-bit
/// vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OvInstance {
    pub dim: usize,
    pub s1: Vec<Vec<bool>>,
    pub s2: Vec<Vec<bool>>,
}

impl OvInstance {
    /// Seeded random instance with each bit set independently with
    /// probability 1/2.
    pub fn random(n: usize, dim: usize, seed: u64) -> OvInstance {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let side = |rng: &mut ChaCha8Rng| {
            (0..n)
                .map(|_| (0..dim).map(|_| rng.gen_bool(0.5)).collect())
                .collect()
        };
        let s1 = side(&mut rng);
        let s2 = side(&mut rng);
        OvInstance { dim, s1, s2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReductionId {
    OvMdp,
    TriMdp,
    OvGame,
    TriGame,
    OvGameSeq,
    TriGameSeq,
}

impl ReductionId {
    pub fn as_str(self) -> &'static str {
        match self {
            ReductionId::OvMdp => "ov-mdp",
            ReductionId::TriMdp => "tri-mdp",
            ReductionId::OvGame => "ov-game",
            ReductionId::TriGame => "tri-game",
            ReductionId::OvGameSeq => "ov-game-seq",
            ReductionId::TriGameSeq => "tri-game-seq",
        }
    }
}

/// The source instance a reduction was generated from.
#[derive(Debug, Clone)]
pub enum ReductionSource {
    Ov(OvInstance),
    Triangle(Arena),
}

/// A generated query with the ground-truth answer at its start vertex.
#[derive(Debug, Clone)]
pub struct ReductionInstance {
    pub query: Query,
    pub truth: bool,
    pub source: ReductionSource,
    pub reduction_id: ReductionId,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("vector {index} has dimension {found}, expected {expected}")]
    Dimension {
        index: usize,
        found: usize,
        expected: usize,
    },
    #[error("source sets have sizes {left} and {right}, expected equal and nonempty")]
    SizeMismatch { left: usize, right: usize },
    #[error("source graph has a self-loop at vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("source graph vertex {vertex} has no outgoing edge")]
    SourceSink { vertex: usize },
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
}

fn check_ov(o: &OvInstance) -> Result<(), ReductionError> {
    if o.s1.len() != o.s2.len() || o.s1.is_empty() || o.dim == 0 {
        return Err(ReductionError::SizeMismatch {
            left: o.s1.len(),
            right: o.s2.len(),
        });
    }
    for (i, v) in o.s1.iter().chain(o.s2.iter()).enumerate() {
        if v.len() != o.dim {
            return Err(ReductionError::Dimension {
                index: i,
                found: v.len(),
                expected: o.dim,
            });
        }
    }
    Ok(())
}

/// Shared body of the three OV reductions. Layout: s = 0, x_i = 1 + i,
/// c_j = 1 + N + j, y_i = 1 + N + d + i. The start vertex fans out to
/// the S1 block, vectors connect through the coordinates they share,
/// and the targets are the singleton S2 vertices. Leftover sinks
/// (always the S2 block in the coverage variants, plus zero vectors and
/// untouched coordinates) get self-loops.
fn ov_reduction(
    o: &OvInstance,
    id: ReductionId,
    start_owner: Owner,
    kind: ArenaKind,
    sequential: bool,
) -> Result<ReductionInstance, ReductionError> {
    check_ov(o)?;
    let n = o.s1.len();
    let d = o.dim;
    let x = |i: usize| 1 + i;
    let c = |j: usize| 1 + n + j;
    let y = |i: usize| 1 + n + d + i;
    let total = 1 + 2 * n + d;

    let mut owners = vec![Owner::P1; total];
    owners[0] = start_owner;

    let mut edges: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        edges.push((0, x(i)));
    }
    for (i, vec1) in o.s1.iter().enumerate() {
        for (j, &bit) in vec1.iter().enumerate() {
            if bit {
                edges.push((x(i), c(j)));
            }
        }
    }
    for (i, vec2) in o.s2.iter().enumerate() {
        for (j, &bit) in vec2.iter().enumerate() {
            if bit {
                edges.push((c(j), y(i)));
            }
        }
    }
    if sequential {
        for i in 0..n {
            edges.push((y(i), 0));
        }
    }
    let raw = Arena::new(kind, owners, edges).expect("layout indices in range");
    let arena = crate::arena::normalize_sinks(&raw);

    let sets = (0..n).map(|i| vec![y(i)]).collect();
    let targets = TargetTuple::new(sets, total).expect("layout indices in range");
    let truth = !ov_bruteforce(&o.s1, &o.s2);
    Ok(ReductionInstance {
        query: Query {
            arena,
            targets,
            objective: if sequential {
                Objective::Sequential
            } else {
                Objective::Coverage
            },
            start: 0,
        },
        truth,
        source: ReductionSource::Ov(o.clone()),
        reduction_id: id,
    })
}

fn check_triangle_source(g: &Arena) -> Result<(), ReductionError> {
    if g.kind() != ArenaKind::Graph {
        return Err(ReductionError::Infeasible(
            "triangle source must be a graph".into(),
        ));
    }
    for v in g.vertices() {
        if g.has_edge(v, v) {
            return Err(ReductionError::SelfLoop { vertex: v });
        }
        if g.out_degree(v) == 0 {
            return Err(ReductionError::SourceSink { vertex: v });
        }
    }
    Ok(())
}

/// Shared body of the three triangle reductions. Layout: s = 0, then
/// four copies of the source vertex set; v_{ji} = 1 + (j-1)*n + i. A
/// triangle exists in the source exactly when some v_{1i} reaches
/// v_{4i}, and such a run dodges the target T_i, so the generated
/// ground truth is `true` precisely for triangle-free sources.
fn triangle_reduction(
    g: &Arena,
    id: ReductionId,
    owner: Owner,
    kind: ArenaKind,
    sequential: bool,
) -> Result<ReductionInstance, ReductionError> {
    check_triangle_source(g)?;
    let n = g.len();
    let copy = |j: usize, i: usize| 1 + (j - 1) * n + i;
    let total = 1 + 4 * n;

    let owners = vec![owner; total];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        edges.push((0, copy(1, i)));
    }
    for j in 1..=3 {
        for (i, l) in g.edges() {
            edges.push((copy(j, i), copy(j + 1, l)));
        }
    }
    if sequential {
        for i in 0..n {
            edges.push((copy(4, i), 0));
        }
    }
    let raw = Arena::new(kind, owners, edges).expect("layout indices in range");
    let arena = crate::arena::normalize_sinks(&raw);

    let sets = (0..n)
        .map(|i| {
            let mut set: Vec<usize> = (0..n).filter(|&l| l != i).map(|l| copy(1, l)).collect();
            set.extend((0..n).filter(|&l| l != i).map(|l| copy(4, l)));
            set
        })
        .collect();
    let targets = TargetTuple::new(sets, total).expect("layout indices in range");
    let truth = !triangle_bruteforce(g);
    Ok(ReductionInstance {
        query: Query {
            arena,
            targets,
            objective: if sequential {
                Objective::Sequential
            } else {
                Objective::Coverage
            },
            start: 0,
        },
        truth,
        source: ReductionSource::Triangle(g.clone()),
        reduction_id: id,
    })
}

/// OV to MDP coverage: a random start fanning out over S1; coverage of
/// all singleton S2 targets holds iff no orthogonal pair exists.
pub fn reduce_ov_mdp(o: &OvInstance) -> Result<ReductionInstance, ReductionError> {
    ov_reduction(o, ReductionId::OvMdp, Owner::Rand, ArenaKind::Mdp, false)
}

/// Triangle to MDP coverage over four all-random graph copies.
pub fn reduce_triangle_mdp(g: &Arena) -> Result<ReductionInstance, ReductionError> {
    triangle_reduction(g, ReductionId::TriMdp, Owner::Rand, ArenaKind::Mdp, false)
}

/// OV to game coverage: the start vertex becomes adversarial.
pub fn reduce_ov_game(o: &OvInstance) -> Result<ReductionInstance, ReductionError> {
    ov_reduction(o, ReductionId::OvGame, Owner::P2, ArenaKind::Game, false)
}

/// Triangle to game coverage: every vertex adversarial.
pub fn reduce_triangle_game(g: &Arena) -> Result<ReductionInstance, ReductionError> {
    triangle_reduction(g, ReductionId::TriGame, Owner::P2, ArenaKind::Game, false)
}

/// OV to sequential game: S2 vertices loop back to the start, making
/// every play revisit the start every four steps.
pub fn reduce_ov_game_seq(o: &OvInstance) -> Result<ReductionInstance, ReductionError> {
    ov_reduction(o, ReductionId::OvGameSeq, Owner::P2, ArenaKind::Game, true)
}

/// Triangle to sequential game: the fourth copy loops back to the
/// start.
pub fn reduce_triangle_game_seq(g: &Arena) -> Result<ReductionInstance, ReductionError> {
    triangle_reduction(g, ReductionId::TriGameSeq, Owner::P2, ArenaKind::Game, true)
}

/// Seeded random query: every vertex keeps at least one outgoing edge
/// (hence `m >= n` is required), owners drawn uniformly from the kind's
/// legal tags, and each vertex enters each target set with probability
/// `target_density`.
pub fn gen_random(
    kind: ArenaKind,
    n: usize,
    m: usize,
    k: usize,
    target_density: f64,
    objective: Objective,
    seed: u64,
) -> Result<Query, ReductionError> {
    if n == 0 {
        return Err(ReductionError::Infeasible("n must be positive".into()));
    }
    if m < n {
        return Err(ReductionError::Infeasible(format!(
            "m = {m} < n = {n}: cannot make every vertex sink-free"
        )));
    }
    if objective == Objective::Reach && k != 1 {
        return Err(ReductionError::Infeasible(format!(
            "objective reach requires k = 1, got k = {k}"
        )));
    }
    if !(0.0..=1.0).contains(&target_density) {
        return Err(ReductionError::Infeasible(format!(
            "target density {target_density} outside [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let owners = (0..n)
        .map(|_| match kind {
            ArenaKind::Graph => Owner::P1,
            ArenaKind::Mdp => {
                if rng.gen_bool(0.5) {
                    Owner::Rand
                } else {
                    Owner::P1
                }
            }
            ArenaKind::Game => {
                if rng.gen_bool(0.5) {
                    Owner::P2
                } else {
                    Owner::P1
                }
            }
        })
        .collect();
    let mut edges = Vec::with_capacity(m);
    for v in 0..n {
        edges.push((v, rng.gen_range(0..n)));
    }
    for _ in n..m {
        edges.push((rng.gen_range(0..n), rng.gen_range(0..n)));
    }
    let arena = Arena::new(kind, owners, edges).expect("generated indices in range");
    let sets = (0..k)
        .map(|_| (0..n).filter(|_| rng.gen_bool(target_density)).collect())
        .collect();
    let targets = TargetTuple::new(sets, n).expect("generated indices in range");
    let start = rng.gen_range(0..n);
    Ok(Query {
        arena,
        targets,
        objective,
        start,
    })
}

/// Seeded random self-loop-free, sink-free graph, suitable as a
/// triangle-reduction source. Requires `n >= 2`.
pub fn gen_triangle_source(n: usize, m: usize, seed: u64) -> Result<Arena, ReductionError> {
    if n < 2 {
        return Err(ReductionError::Infeasible(
            "triangle sources need at least 2 vertices".into(),
        ));
    }
    if m < n {
        return Err(ReductionError::Infeasible(format!(
            "m = {m} < n = {n}: cannot make every vertex sink-free"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pick_other = |rng: &mut ChaCha8Rng, v: usize| {
        let w = rng.gen_range(0..n - 1);
        if w >= v {
            w + 1
        } else {
            w
        }
    };
    let mut edges = Vec::with_capacity(m);
    for v in 0..n {
        let w = pick_other(&mut rng, v);
        edges.push((v, w));
    }
    for _ in n..m {
        let u = rng.gen_range(0..n);
        let w = pick_other(&mut rng, u);
        edges.push((u, w));
    }
    Ok(Arena::new(ArenaKind::Graph, vec![Owner::P1; n], edges).expect("indices in range"))
}

/// Scaling families measured by the bench harness. Sequential and
/// coverage queries over each kind, with the target-set count growing
/// only where the solver's bound carries a k*m term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchFamily {
    GraphSeq,
    MdpSeq,
    GameSeq,
    GraphCov,
    MdpCov,
    GameCov,
}

impl BenchFamily {
    pub const ALL: [BenchFamily; 6] = [
        BenchFamily::GraphSeq,
        BenchFamily::MdpSeq,
        BenchFamily::GameSeq,
        BenchFamily::GraphCov,
        BenchFamily::MdpCov,
        BenchFamily::GameCov,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BenchFamily::GraphSeq => "graph-seq",
            BenchFamily::MdpSeq => "mdp-seq",
            BenchFamily::GameSeq => "game-seq",
            BenchFamily::GraphCov => "graph-cov",
            BenchFamily::MdpCov => "mdp-cov",
            BenchFamily::GameCov => "game-cov",
        }
    }

    pub fn parse(s: &str) -> Option<BenchFamily> {
        BenchFamily::ALL.iter().copied().find(|f| f.as_str() == s)
    }

    pub fn kind(self) -> ArenaKind {
        match self {
            BenchFamily::GraphSeq | BenchFamily::GraphCov => ArenaKind::Graph,
            BenchFamily::MdpSeq | BenchFamily::MdpCov => ArenaKind::Mdp,
            BenchFamily::GameSeq | BenchFamily::GameCov => ArenaKind::Game,
        }
    }

    pub fn objective(self) -> Objective {
        match self {
            BenchFamily::GraphSeq | BenchFamily::MdpSeq | BenchFamily::GameSeq => {
                Objective::Sequential
            }
            _ => Objective::Coverage,
        }
    }

    /// Does k double along with n and m in this family's scaling runs?
    pub fn k_scales(self) -> bool {
        matches!(
            self,
            BenchFamily::GameSeq | BenchFamily::GameCov | BenchFamily::MdpCov
        )
    }
}

/// Base point of the doubling ladder: n = 2^8, m = 2^10, k = 2^4.
pub const BENCH_BASE_N: usize = 1 << 8;
pub const BENCH_BASE_M: usize = 1 << 10;
pub const BENCH_BASE_K: usize = 1 << 4;

/// Instance at doubling step `step` of a family's scaling ladder.
pub fn bench_instance(family: BenchFamily, step: u32, seed: u64) -> Query {
    let factor = 1usize << step;
    let n = BENCH_BASE_N * factor;
    let m = BENCH_BASE_M * factor;
    let k = if family.k_scales() {
        BENCH_BASE_K * factor
    } else {
        BENCH_BASE_K
    };
    gen_random(family.kind(), n, m, k, 0.05, family.objective(), seed)
        .expect("ladder parameters are feasible")
}

/// The complete bidirected triangle on three vertices.
pub fn bidirected_k3() -> Arena {
    Arena::new(
        ArenaKind::Graph,
        vec![Owner::P1; 3],
        [(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)],
    )
    .expect("static graph")
}

/// The directed four-cycle, the canonical triangle-free source.
pub fn directed_c4() -> Arena {
    Arena::new(
        ArenaKind::Graph,
        vec![Owner::P1; 4],
        [(0, 1), (1, 2), (2, 3), (3, 0)],
    )
    .expect("static graph")
}

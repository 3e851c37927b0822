//! Core data model shared by graphs, MDPs, and game graphs: an explicit
//! transition structure with per-vertex ownership, plus parsing,
//! serialization, and sink normalization for the text file format.

use std::fmt::Write as _;

use thiserror::Error;

/// Which of the three models an arena encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArenaKind {
    Graph,
    Mdp,
    Game,
}

impl ArenaKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ArenaKind::Graph => "graph",
            ArenaKind::Mdp => "mdp",
            ArenaKind::Game => "game",
        }
    }
}

/// Per-vertex ownership tag. Graphs use only `P1`, MDPs use `P1`/`Rand`,
/// games use `P1`/`P2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Owner {
    P1,
    P2,
    Rand,
}

impl Owner {
    pub fn as_str(self) -> &'static str {
        match self {
            Owner::P1 => "1",
            Owner::P2 => "2",
            Owner::Rand => "R",
        }
    }

    fn legal_for(self, kind: ArenaKind) -> bool {
        match kind {
            ArenaKind::Graph => self == Owner::P1,
            ArenaKind::Mdp => self != Owner::P2,
            ArenaKind::Game => self != Owner::Rand,
        }
    }
}

/// The objective a query asks about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    Reach,
    Coverage,
    Sequential,
}

impl Objective {
    pub fn as_str(self) -> &'static str {
        match self {
            Objective::Reach => "reach",
            Objective::Coverage => "coverage",
            Objective::Sequential => "sequential",
        }
    }
}

/// Error raised while constructing an [`Arena`] from raw parts.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArenaError {
    #[error("vertex index {index} out of range (n = {n})")]
    Range { index: usize, n: usize },
    #[error("owner tag {owner:?} is illegal in a {kind:?} arena")]
    KindMismatch { owner: Owner, kind: ArenaKind },
}

/// Explicit-state transition structure. Vertices are dense indices
/// `0..n`. Duplicate edges are merged at construction; `in_adj` is kept
/// as the exact transpose of `out_adj`, both sorted ascending.
///
/// Immutable after construction, so it can be shared freely across
/// concurrent solver invocations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arena {
    kind: ArenaKind,
    owner: Vec<Owner>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
}

impl Arena {
    /// Builds an arena from ownership tags and an edge list. Edge
    /// multiplicity is irrelevant for support-based semantics, so
    /// duplicates are merged silently.
    pub fn new(
        kind: ArenaKind,
        owner: Vec<Owner>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Arena, ArenaError> {
        let n = owner.len();
        for &o in &owner {
            if !o.legal_for(kind) {
                return Err(ArenaError::KindMismatch { owner: o, kind });
            }
        }
        let mut out_adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n {
                return Err(ArenaError::Range { index: u, n });
            }
            if v >= n {
                return Err(ArenaError::Range { index: v, n });
            }
            out_adj[u].push(v);
        }
        for succs in &mut out_adj {
            succs.sort_unstable();
            succs.dedup();
        }
        let in_adj = transpose(&out_adj);
        Ok(Arena {
            kind,
            owner,
            out_adj,
            in_adj,
        })
    }

    pub fn kind(&self) -> ArenaKind {
        self.kind
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    /// Number of (deduplicated) edges.
    pub fn edge_count(&self) -> usize {
        self.out_adj.iter().map(Vec::len).sum()
    }

    pub fn owner(&self, v: usize) -> Owner {
        self.owner[v]
    }

    pub fn owners(&self) -> &[Owner] {
        &self.owner
    }

    /// Successors of `v`, sorted ascending.
    pub fn out(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    /// Predecessors of `v`, sorted ascending.
    pub fn incoming(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out_adj[u].binary_search(&v).is_ok()
    }

    /// Vertices with no outgoing edge.
    pub fn sinks(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.out_adj[v].is_empty()).collect()
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    /// All edges `(u, v)` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(u, succs)| succs.iter().map(move |&v| (u, v)))
    }
}

fn transpose(out_adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut in_adj = vec![Vec::new(); out_adj.len()];
    for (u, succs) in out_adj.iter().enumerate() {
        for &v in succs {
            in_adj[v].push(u);
        }
    }
    in_adj
}

/// Gives every sink vertex a self-loop. Reachability objectives are
/// unaffected: they are satisfied at the first visit, and the loop only
/// extends plays past that point.
pub fn normalize_sinks(a: &Arena) -> Arena {
    let mut with_loops = a.clone();
    for v in 0..with_loops.len() {
        if with_loops.out_adj[v].is_empty() {
            with_loops.out_adj[v].push(v);
            with_loops.in_adj[v].push(v);
            with_loops.in_adj[v].sort_unstable();
        }
    }
    with_loops
}

/// Ordered tuple of target sets. Order is meaningful for the sequential
/// objective and ignored for coverage. Each set is sorted and free of
/// duplicates; empty sets are allowed (and unachievable as stages).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TargetTuple {
    sets: Vec<Vec<usize>>,
}

impl TargetTuple {
    /// Builds the tuple, sorting and deduplicating each member set.
    pub fn new(sets: Vec<Vec<usize>>, n: usize) -> Result<TargetTuple, ArenaError> {
        let mut sets = sets;
        for set in &mut sets {
            for &v in set.iter() {
                if v >= n {
                    return Err(ArenaError::Range { index: v, n });
                }
            }
            set.sort_unstable();
            set.dedup();
        }
        Ok(TargetTuple { sets })
    }

    /// Number of target sets (the parameter `k`).
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn set(&self, i: usize) -> &[usize] {
        &self.sets[i]
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    /// Total number of member entries across all sets.
    pub fn total_size(&self) -> usize {
        self.sets.iter().map(Vec::len).sum()
    }
}

/// A solvable instance: arena, targets, objective, start vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub arena: Arena,
    pub targets: TargetTuple,
    pub objective: Objective,
    pub start: usize,
}

/// Error raised by [`parse`], with the source position where known.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("index {index} out of range (n = {n}) at line {line}, column {col}")]
    Range {
        line: usize,
        col: usize,
        index: usize,
        n: usize,
    },
    #[error("owner tag {owner:?} illegal for kind {kind:?} at line {line}, column {col}")]
    KindMismatch {
        line: usize,
        col: usize,
        owner: Owner,
        kind: ArenaKind,
    },
    #[error("vertex {vertex} has no outgoing edge and sink normalization is disabled")]
    Sink { vertex: usize },
}

struct Token<'a> {
    text: &'a str,
    line: usize,
    col: usize,
}

/// Whitespace-separated tokens with positions; `#` starts a comment to
/// end of line.
struct Tokens<'a> {
    toks: Vec<Token<'a>>,
    pos: usize,
    last_line: usize,
}

impl<'a> Tokens<'a> {
    fn lex(input: &'a str) -> Tokens<'a> {
        let mut toks = Vec::new();
        let mut last_line = 1;
        for (li, raw_line) in input.lines().enumerate() {
            let line = li + 1;
            last_line = line;
            let content = match raw_line.find('#') {
                Some(idx) => &raw_line[..idx],
                None => raw_line,
            };
            let mut col = 1;
            for piece in content.split_inclusive(char::is_whitespace) {
                let trimmed = piece.trim_end_matches(char::is_whitespace);
                if !trimmed.is_empty() {
                    toks.push(Token {
                        text: trimmed,
                        line,
                        col,
                    });
                }
                col += piece.chars().count();
            }
        }
        Tokens {
            toks,
            pos: 0,
            last_line,
        }
    }

    fn next(&mut self, what: &str) -> Result<&Token<'a>, ParseError> {
        match self.toks.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t)
            }
            None => Err(ParseError::Syntax {
                line: self.last_line,
                col: 1,
                msg: format!("unexpected end of input, expected {what}"),
            }),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        let t = self.next(&format!("keyword `{kw}`"))?;
        if t.text == kw {
            Ok(())
        } else {
            Err(ParseError::Syntax {
                line: t.line,
                col: t.col,
                msg: format!("expected keyword `{kw}`, found `{}`", t.text),
            })
        }
    }

    fn number(&mut self, what: &str) -> Result<(usize, usize, usize), ParseError> {
        let t = self.next(what)?;
        match t.text.parse::<usize>() {
            Ok(v) => Ok((v, t.line, t.col)),
            Err(_) => Err(ParseError::Syntax {
                line: t.line,
                col: t.col,
                msg: format!("expected {what}, found `{}`", t.text),
            }),
        }
    }

    fn vertex(&mut self, what: &str, n: usize) -> Result<usize, ParseError> {
        let (v, line, col) = self.number(what)?;
        if v >= n {
            return Err(ParseError::Range {
                line,
                col,
                index: v,
                n,
            });
        }
        Ok(v)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }
}

/// Parses the arena text format into a validated [`Query`].
///
/// With `normalize` set, sink vertices receive self-loops; otherwise a
/// sink is a hard error, so silently mutated inputs cannot hide
/// modeling bugs.
pub fn parse(input: &str, normalize: bool) -> Result<Query, ParseError> {
    let mut toks = Tokens::lex(input);

    toks.keyword("arena")?;
    let kind_tok = toks.next("arena kind")?;
    let kind = match kind_tok.text {
        "graph" => ArenaKind::Graph,
        "mdp" => ArenaKind::Mdp,
        "game" => ArenaKind::Game,
        other => {
            return Err(ParseError::Syntax {
                line: kind_tok.line,
                col: kind_tok.col,
                msg: format!("expected `graph`, `mdp`, or `game`, found `{other}`"),
            })
        }
    };
    let (n, ..) = toks.number("vertex count")?;

    toks.keyword("owner")?;
    let mut owner = Vec::with_capacity(n);
    for _ in 0..n {
        let t = toks.next("owner tag")?;
        let o = match t.text {
            "1" => Owner::P1,
            "2" => Owner::P2,
            "R" => Owner::Rand,
            other => {
                return Err(ParseError::Syntax {
                    line: t.line,
                    col: t.col,
                    msg: format!("expected owner tag `1`, `2`, or `R`, found `{other}`"),
                })
            }
        };
        if !o.legal_for(kind) {
            return Err(ParseError::KindMismatch {
                line: t.line,
                col: t.col,
                owner: o,
                kind,
            });
        }
        owner.push(o);
    }

    toks.keyword("edges")?;
    let (m, ..) = toks.number("edge count")?;
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let u = toks.vertex("edge source", n)?;
        let v = toks.vertex("edge target", n)?;
        edges.push((u, v));
    }

    toks.keyword("targets")?;
    let (k, ..) = toks.number("target set count")?;
    let mut sets = Vec::with_capacity(k);
    for _ in 0..k {
        let (size, ..) = toks.number("target set size")?;
        let mut set = Vec::with_capacity(size);
        for _ in 0..size {
            set.push(toks.vertex("target vertex", n)?);
        }
        sets.push(set);
    }

    toks.keyword("objective")?;
    let obj_tok = toks.next("objective")?;
    let objective = match obj_tok.text {
        "reach" => Objective::Reach,
        "coverage" => Objective::Coverage,
        "sequential" => Objective::Sequential,
        other => {
            return Err(ParseError::Syntax {
                line: obj_tok.line,
                col: obj_tok.col,
                msg: format!("expected `reach`, `coverage`, or `sequential`, found `{other}`"),
            })
        }
    };
    if objective == Objective::Reach && k != 1 {
        return Err(ParseError::Syntax {
            line: obj_tok.line,
            col: obj_tok.col,
            msg: format!("objective `reach` requires exactly 1 target set, found {k}"),
        });
    }

    toks.keyword("start")?;
    let start = toks.vertex("start vertex", n)?;

    if !toks.at_end() {
        let t = toks.next("end of input")?;
        return Err(ParseError::Syntax {
            line: t.line,
            col: t.col,
            msg: format!("trailing token `{}` after query", t.text),
        });
    }

    // Arena::new cannot fail here: ranges and owners were checked above.
    let mut arena = Arena::new(kind, owner, edges).expect("validated during parse");
    if normalize {
        arena = normalize_sinks(&arena);
    } else if let Some(&v) = arena.sinks().first() {
        return Err(ParseError::Sink { vertex: v });
    }
    let targets = TargetTuple::new(sets, n).expect("validated during parse");
    Ok(Query {
        arena,
        targets,
        objective,
        start,
    })
}

/// Serializes a query back to the text format. Output is deterministic:
/// edge lists are stored sorted, so `parse(serialize(q))` reproduces `q`
/// byte-for-byte stable across runs.
pub fn serialize(q: &Query) -> String {
    let a = &q.arena;
    let mut out = String::new();
    let _ = writeln!(out, "arena {} {}", a.kind().as_str(), a.len());
    let tags: Vec<&str> = a.owners().iter().map(|o| o.as_str()).collect();
    let _ = writeln!(out, "owner {}", tags.join(" "));
    let _ = writeln!(out, "edges {}", a.edge_count());
    for (u, v) in a.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    let _ = writeln!(out, "targets {}", q.targets.len());
    for set in q.targets.sets() {
        let mut line = format!("{}", set.len());
        for v in set {
            let _ = write!(line, " {v}");
        }
        let _ = writeln!(out, "{line}");
    }
    let _ = writeln!(out, "objective {}", q.objective.as_str());
    let _ = writeln!(out, "start {}", q.start);
    out
}

/// The Figure-style three-vertex arena used throughout the tests:
/// edges v1->v2, v2->v1, v2->v3, with the middle vertex owned by the
/// environment (random in the MDP reading, adversarial in the game
/// reading) and the final vertex a normalized sink.
pub fn three_vertex_example(kind: ArenaKind) -> Arena {
    let middle = match kind {
        ArenaKind::Mdp => Owner::Rand,
        ArenaKind::Game => Owner::P2,
        ArenaKind::Graph => Owner::P1,
    };
    let a = Arena::new(kind, vec![Owner::P1, middle, Owner::P1], [(0, 1), (1, 0), (1, 2)])
        .expect("static example");
    normalize_sinks(&a)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIGURE_MDP: &str = "\
arena mdp 3
owner 1 R 1
edges 3
0 1
1 0
1 2
targets 1
1 2
objective reach
start 0
";

    #[test]
    fn parse_figure_mdp_with_normalization() {
        let q = parse(FIGURE_MDP, true).unwrap();
        assert_eq!(q.arena.len(), 3);
        assert_eq!(q.arena.kind(), ArenaKind::Mdp);
        // v3 gains a self-loop
        assert_eq!(q.arena.out(2), &[2]);
        assert_eq!(q.arena.out(1), &[0, 2]);
        assert_eq!(q.start, 0);
        assert_eq!(q.targets.set(0), &[2]);
    }

    #[test]
    fn parse_figure_mdp_without_normalization_is_sink_error() {
        let err = parse(FIGURE_MDP, false).unwrap_err();
        assert_eq!(err, ParseError::Sink { vertex: 2 });
    }

    #[test]
    fn parse_single_vertex_empty_edges() {
        let text = "arena graph 1\nowner 1\nedges 0\ntargets 1\n1 0\nobjective reach\nstart 0\n";
        let q = parse(text, true).unwrap();
        assert_eq!(q.arena.out(0), &[0]);
    }

    #[test]
    fn parse_rejects_p2_in_mdp() {
        let text = "arena mdp 2\nowner 1 2\nedges 2\n0 1\n1 0\ntargets 1\n1 1\nobjective reach\nstart 0\n";
        match parse(text, false).unwrap_err() {
            ParseError::KindMismatch { owner, kind, line, .. } => {
                assert_eq!(owner, Owner::P2);
                assert_eq!(kind, ArenaKind::Mdp);
                assert_eq!(line, 2);
            }
            other => panic!("expected kind mismatch, got {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_out_of_range_edge() {
        let text = "arena graph 2\nowner 1 1\nedges 1\n0 5\ntargets 0\nobjective coverage\nstart 0\n";
        match parse(text, true).unwrap_err() {
            ParseError::Range { index, n, .. } => {
                assert_eq!(index, 5);
                assert_eq!(n, 2);
            }
            other => panic!("expected range error, got {other:?}"),
        }
    }

    #[test]
    fn parse_reports_syntax_position() {
        let text = "arena graph 2\nowner 1 bogus\n";
        match parse(text, true).unwrap_err() {
            ParseError::Syntax { line, col, .. } => {
                assert_eq!(line, 2);
                assert_eq!(col, 9);
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn parse_reach_requires_single_target() {
        let text = "arena graph 1\nowner 1\nedges 1\n0 0\ntargets 2\n1 0\n1 0\nobjective reach\nstart 0\n";
        assert!(matches!(parse(text, true), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn comments_are_ignored() {
        let text = "# header\narena graph 1 # trailing\nowner 1\nedges 1\n0 0\ntargets 0\nobjective coverage\nstart 0\n";
        assert!(parse(text, false).is_ok());
    }

    #[test]
    fn duplicate_edges_merge() {
        let a = Arena::new(ArenaKind::Graph, vec![Owner::P1; 2], [(0, 1), (0, 1), (1, 0)]).unwrap();
        assert_eq!(a.edge_count(), 2);
        assert_eq!(a.out(0), &[1]);
    }

    #[test]
    fn normalize_is_identity_without_sinks() {
        let a = Arena::new(ArenaKind::Graph, vec![Owner::P1; 2], [(0, 1), (1, 0)]).unwrap();
        assert_eq!(normalize_sinks(&a), a);
    }

    #[test]
    fn normalize_adds_loop_to_sink() {
        let a = Arena::new(ArenaKind::Graph, vec![Owner::P1; 2], [(0, 1)]).unwrap();
        let b = normalize_sinks(&a);
        assert_eq!(b.out(1), &[1]);
        assert_eq!(b.edge_count(), 2);
    }

    #[test]
    fn normalize_is_idempotent() {
        let a = Arena::new(ArenaKind::Graph, vec![Owner::P1; 3], [(0, 1), (2, 1)]).unwrap();
        let once = normalize_sinks(&a);
        assert_eq!(normalize_sinks(&once), once);
    }

    #[test]
    fn roundtrip_figure_query() {
        let q = parse(FIGURE_MDP, true).unwrap();
        let text = serialize(&q);
        let q2 = parse(&text, false).unwrap();
        assert_eq!(q, q2);
    }

    #[test]
    fn transpose_consistency_small() {
        let a = Arena::new(
            ArenaKind::Graph,
            vec![Owner::P1; 4],
            [(0, 1), (0, 2), (1, 2), (2, 3), (3, 0)],
        )
        .unwrap();
        for u in a.vertices() {
            for &v in a.out(u) {
                assert!(a.incoming(v).contains(&u));
            }
            for &p in a.incoming(u) {
                assert!(a.out(p).contains(&u));
            }
        }
    }
}

//! Operation counters used by the bench harness. Counters, not wall
//! time, are the primary scaling signal: desk-scale timing is noisy.

/// Tallies of the unit operations a solver performed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounters {
    /// Edge traversals (adjacency entries examined).
    pub edge_touches: u64,
    /// Target-list entries touched (stage-list scans, target marking).
    pub label_touches: u64,
    /// Priority-structure insertions.
    pub pq_pushes: u64,
    /// Priority-structure removals, including discarded stale entries.
    pub pq_pops: u64,
}

impl OpCounters {
    pub fn aux_ops(&self) -> u64 {
        self.label_touches + self.pq_pushes + self.pq_pops
    }
}

impl std::ops::AddAssign for OpCounters {
    fn add_assign(&mut self, rhs: OpCounters) {
        self.edge_touches += rhs.edge_touches;
        self.label_touches += rhs.label_touches;
        self.pq_pushes += rhs.pq_pushes;
        self.pq_pops += rhs.pq_pops;
    }
}

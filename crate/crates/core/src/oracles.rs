//! Brute-force ground truth used to verify the dynamic structures.
//!
//! Everything in here recomputes answers from scratch on small snapshots and
//! shares no state with the incremental code paths, so a disagreement always
//! implicates the dynamic side.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::arb_decomp::ForestAssignment;
use crate::level_structure::Hierarchy;

/// Largest vertex count for which `exact_arboricity` enumerates all subsets.
pub const EXACT_ARBORICITY_LIMIT: usize = 15;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph with n={0} too large for exhaustive arboricity (limit {EXACT_ARBORICITY_LIMIT})")]
    TooLarge(usize),
    #[error("vertex {0} out of range (n = {1})")]
    VertexOutOfRange(usize, usize),
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("no color assigned to vertex {0}")]
    MissingColor(usize),
}

/// An immutable graph snapshot: vertex count plus a sorted, deduplicated
/// list of undirected edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnapshotGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl SnapshotGraph {
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, OracleError> {
        let mut list = Vec::new();
        let mut seen = HashSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(OracleError::SelfLoop(u));
            }
            if u >= n {
                return Err(OracleError::VertexOutOfRange(u, n));
            }
            if v >= n {
                return Err(OracleError::VertexOutOfRange(v, n));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(OracleError::DuplicateEdge(e.0, e.1));
            }
            list.push(e);
        }
        list.sort_unstable();
        Ok(Self { n, edges: list })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }
}

/// Exact arboricity of a small graph: the Nash-Williams maximum of
/// ceil(|E(S)| / (|S| - 1)) over all vertex subsets S with |S| >= 2.
/// Edgeless graphs yield 0; callers clamp if they need a positive value.
pub fn exact_arboricity(g: &SnapshotGraph) -> Result<usize, OracleError> {
    if g.n > EXACT_ARBORICITY_LIMIT {
        return Err(OracleError::TooLarge(g.n));
    }
    if g.edges.is_empty() {
        return Ok(0);
    }
    let mut adj_mask = vec![0u32; g.n];
    for &(u, v) in &g.edges {
        adj_mask[u] |= 1 << v;
        adj_mask[v] |= 1 << u;
    }
    let mut best = 0usize;
    for mask in 1u32..(1 << g.n) {
        let size = mask.count_ones() as usize;
        if size < 2 {
            continue;
        }
        let mut twice_edges = 0usize;
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            twice_edges += (adj_mask[v] & mask).count_ones() as usize;
        }
        let inside = twice_edges / 2;
        if inside > 0 {
            best = best.max(inside.div_ceil(size - 1));
        }
    }
    Ok(best)
}

/// Density of the densest subgraph, reported as the pair
/// (max |E(S)|, the |S| attaining it) so callers can compare exactly.
pub fn densest_subgraph(g: &SnapshotGraph) -> Result<(usize, usize), OracleError> {
    if g.n > EXACT_ARBORICITY_LIMIT {
        return Err(OracleError::TooLarge(g.n));
    }
    let mut adj_mask = vec![0u32; g.n];
    for &(u, v) in &g.edges {
        adj_mask[u] |= 1 << v;
        adj_mask[v] |= 1 << u;
    }
    // Maximize |E(S)| / |S| over nonempty S, tracked as a fraction.
    let (mut be, mut bs) = (0usize, 1usize);
    for mask in 1u32..(1 << g.n) {
        let size = mask.count_ones() as usize;
        let mut twice_edges = 0usize;
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            twice_edges += (adj_mask[v] & mask).count_ones() as usize;
        }
        let inside = twice_edges / 2;
        if inside * bs > be * size {
            be = inside;
            bs = size;
        }
    }
    Ok((be, bs))
}

/// True iff no edge of `g` is monochromatic under `color_of`.
pub fn is_proper<C: PartialEq>(
    g: &SnapshotGraph,
    color_of: impl Fn(usize) -> Option<C>,
) -> Result<bool, OracleError> {
    let mut colors = Vec::with_capacity(g.n);
    for v in 0..g.n {
        colors.push(color_of(v).ok_or(OracleError::MissingColor(v))?);
    }
    Ok(g.edges.iter().all(|&(u, v)| colors[u] != colors[v]))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Cycle detection over an explicit edge list.
pub fn is_forest(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> bool {
    let mut uf = UnionFind::new(n);
    for (u, v) in edges {
        if u == v || !uf.union(u, v) {
            return false;
        }
    }
    true
}

/// A violation of the level-structure contract, with coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LevelViolation {
    /// Invariant 1: too many neighbors at the vertex's own level or above.
    TooManyAtOrAbove {
        vertex: usize,
        level: usize,
        count: usize,
        cap: usize,
    },
    /// Invariant 2: too few neighbors at the level just below or above.
    TooFewNearAbove {
        vertex: usize,
        level: usize,
        count: usize,
        need: usize,
    },
    /// An edge oriented away from its lower-level endpoint.
    MisdirectedEdge {
        tail: usize,
        head: usize,
        tail_level: usize,
        head_level: usize,
    },
    /// A neighbor stored in the wrong list bucket, or missing/duplicated.
    ListMismatch { vertex: usize, detail: String },
}

impl fmt::Display for LevelViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevelViolation::TooManyAtOrAbove {
                vertex,
                level,
                count,
                cap,
            } => write!(
                f,
                "invariant 1: vertex {vertex} at level {level} has {count} neighbors at or above (cap {cap})"
            ),
            LevelViolation::TooFewNearAbove {
                vertex,
                level,
                count,
                need,
            } => write!(
                f,
                "invariant 2: vertex {vertex} at level {level} has {count} neighbors at or above level {} (needs {need})",
                level - 1
            ),
            LevelViolation::MisdirectedEdge {
                tail,
                head,
                tail_level,
                head_level,
            } => write!(
                f,
                "orientation: edge ({tail}, {head}) points from level {tail_level} down to level {head_level}"
            ),
            LevelViolation::ListMismatch { vertex, detail } => {
                write!(f, "list partition: vertex {vertex}: {detail}")
            }
        }
    }
}

/// Full scan of a hierarchy against its stated invariants. Neighbor counts
/// are recomputed from the edge set rather than trusted from the lists.
pub fn audit_levels(h: &Hierarchy) -> Vec<LevelViolation> {
    let n = h.n();
    let k = h.level_count();
    let mut adj = vec![Vec::new(); n];
    for (u, v) in h.edges() {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut out = Vec::new();
    for v in 0..n {
        let lv = h.level_of(v).expect("vertex in range");
        let group = h.group_of_level(lv).expect("level in range");
        let at_or_above = adj[v].iter().filter(|&&u| h.level_of(u).unwrap() >= lv).count();
        if lv < k {
            let cap = 5 << group;
            if at_or_above > cap {
                out.push(LevelViolation::TooManyAtOrAbove {
                    vertex: v,
                    level: lv,
                    count: at_or_above,
                    cap,
                });
            }
        }
        if lv > 1 {
            let near = adj[v]
                .iter()
                .filter(|&&u| h.level_of(u).unwrap() >= lv - 1)
                .count();
            let need = 1 << h.group_of_level(lv - 1).unwrap();
            if near < need {
                out.push(LevelViolation::TooFewNearAbove {
                    vertex: v,
                    level: lv,
                    count: near,
                    need,
                });
            }
        }
    }
    let mut oriented = h.oriented_edges();
    oriented.sort_unstable();
    for (tail, head) in oriented {
        let (lt, lh) = (h.level_of(tail).unwrap(), h.level_of(head).unwrap());
        if lt > lh {
            out.push(LevelViolation::MisdirectedEdge {
                tail,
                head,
                tail_level: lt,
                head_level: lh,
            });
        }
    }
    // List partition: the stored lists must agree bucket-by-bucket with the
    // adjacency derived from the edge set.
    for v in 0..n {
        let lv = h.level_of(v).unwrap();
        let mut expected_up: Vec<usize> = adj[v]
            .iter()
            .copied()
            .filter(|&u| h.level_of(u).unwrap() >= lv)
            .collect();
        expected_up.sort_unstable();
        let mut stored_up: Vec<usize> = h.same_or_above_neighbors(v).unwrap().collect();
        stored_up.sort_unstable();
        if expected_up != stored_up {
            out.push(LevelViolation::ListMismatch {
                vertex: v,
                detail: format!(
                    "same-or-above list {stored_up:?} != expected {expected_up:?}"
                ),
            });
        }
        for i in 1..lv {
            let mut expected: Vec<usize> = adj[v]
                .iter()
                .copied()
                .filter(|&u| h.level_of(u).unwrap() == i)
                .collect();
            expected.sort_unstable();
            let mut stored: Vec<usize> = h.neighbors_below(v, i).unwrap().collect();
            stored.sort_unstable();
            if expected != stored {
                out.push(LevelViolation::ListMismatch {
                    vertex: v,
                    detail: format!("level-{i} list {stored:?} != expected {expected:?}"),
                });
            }
        }
    }
    out
}

/// A violation of the forest-decomposition contract.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecompViolation {
    /// An oriented edge with no forest slot, or a slot for a missing edge.
    PartitionMismatch { detail: String },
    /// Invariant 1: a pair below d(v) with zero or two out-edges of v.
    PairExclusivity {
        vertex: usize,
        pair: usize,
        count: usize,
    },
    /// Invariant 2: an out-edge assigned at or beyond slot 2 d(v).
    Compactness {
        vertex: usize,
        slot: usize,
        outdegree: usize,
    },
    /// Invariant 3: stored occupancy bit disagrees with actual contents.
    BitFidelity {
        vertex: usize,
        pair: usize,
        stored: bool,
        actual: bool,
    },
    /// A forest containing a cycle.
    CyclicForest { forest: usize },
    /// A nonempty forest at or beyond index 2 D.
    NonEmptyHighForest { forest: usize, bound: usize },
}

impl fmt::Display for DecompViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecompViolation::PartitionMismatch { detail } => {
                write!(f, "partition: {detail}")
            }
            DecompViolation::PairExclusivity {
                vertex,
                pair,
                count,
            } => write!(
                f,
                "invariant 1: vertex {vertex} has {count} out-edges in pair {pair}"
            ),
            DecompViolation::Compactness {
                vertex,
                slot,
                outdegree,
            } => write!(
                f,
                "invariant 2: vertex {vertex} with outdegree {outdegree} owns an edge in forest {slot}"
            ),
            DecompViolation::BitFidelity {
                vertex,
                pair,
                stored,
                actual,
            } => write!(
                f,
                "invariant 3: vertex {vertex} pair {pair} stores bit {stored} but contents say {actual}"
            ),
            DecompViolation::CyclicForest { forest } => {
                write!(f, "forest {forest} contains a cycle")
            }
            DecompViolation::NonEmptyHighForest { forest, bound } => {
                write!(f, "forest {forest} nonempty although 2D = {bound}")
            }
        }
    }
}

/// Cross-checks a forest decomposition against the orientation it mirrors.
/// `oriented` is the full list of directed edges (tail, head).
pub fn audit_decomp(
    decomp: &ForestAssignment,
    n: usize,
    oriented: &[(usize, usize)],
) -> Vec<DecompViolation> {
    let mut out = Vec::new();
    let mut sorted = oriented.to_vec();
    sorted.sort_unstable();

    let mut outdeg = vec![0usize; n];
    // out_pairs[v]: pair index -> slots used by v's out-edges in that pair
    let mut out_slots: Vec<HashMap<usize, Vec<usize>>> = vec![HashMap::new(); n];
    for &(tail, head) in &sorted {
        outdeg[tail] += 1;
        match decomp.slot_of(tail, head) {
            None => out.push(DecompViolation::PartitionMismatch {
                detail: format!("oriented edge ({tail}, {head}) has no forest slot"),
            }),
            Some((stored_tail, slot)) => {
                if stored_tail != tail {
                    out.push(DecompViolation::PartitionMismatch {
                        detail: format!(
                            "edge ({tail}, {head}) stored with tail {stored_tail}"
                        ),
                    });
                }
                out_slots[tail].entry(slot / 2).or_default().push(slot);
            }
        }
    }
    if decomp.assigned_edge_count() != sorted.len() {
        out.push(DecompViolation::PartitionMismatch {
            detail: format!(
                "{} slots assigned but {} edges oriented",
                decomp.assigned_edge_count(),
                sorted.len()
            ),
        });
    }
    let max_outdeg = outdeg.iter().copied().max().unwrap_or(0);

    for v in 0..n {
        let d = outdeg[v];
        for pair in 0..d {
            let count = out_slots[v].get(&pair).map_or(0, |s| s.len());
            if count != 1 {
                out.push(DecompViolation::PairExclusivity {
                    vertex: v,
                    pair,
                    count,
                });
            }
        }
        let mut pairs: Vec<usize> = out_slots[v].keys().copied().collect();
        pairs.sort_unstable();
        for pair in &pairs {
            for &slot in &out_slots[v][pair] {
                if slot >= 2 * d {
                    out.push(DecompViolation::Compactness {
                        vertex: v,
                        slot,
                        outdegree: d,
                    });
                }
            }
        }
        let top = pairs.last().copied().unwrap_or(0).max(d);
        for pair in 0..=top {
            let stored = decomp.pair_bit(v, pair);
            let actual = out_slots[v].contains_key(&pair);
            if stored != actual {
                out.push(DecompViolation::BitFidelity {
                    vertex: v,
                    pair,
                    stored,
                    actual,
                });
            }
        }
    }

    let mut forest_total = 0usize;
    for j in 0..decomp.populated_forest_count() {
        let contents = decomp.forest_contents(j).expect("index in range");
        forest_total += contents.len();
        if !contents.is_empty() && j >= 2 * max_outdeg {
            out.push(DecompViolation::NonEmptyHighForest {
                forest: j,
                bound: 2 * max_outdeg,
            });
        }
        if !is_forest(n, contents.iter().copied()) {
            out.push(DecompViolation::CyclicForest { forest: j });
        }
    }
    if forest_total != sorted.len() {
        out.push(DecompViolation::PartitionMismatch {
            detail: format!(
                "forests hold {forest_total} edges but the graph has {}",
                sorted.len()
            ),
        });
    }
    out
}

//! Reduction from a low-outdegree orientation to a forest partition: with D
//! the current maximum outdegree, edges are spread over forests
//! F_0, ..., F_{2D-1} so that each vertex owns at most one out-edge per
//! forest and exactly one per index pair {F_{2p}, F_{2p+1}} below its
//! outdegree. Everything above 2D stays empty, shrinking with D.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::level_structure::{OrientationEvent, Vertex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecompError {
    #[error("added edge {{{0}, {1}}} is already assigned")]
    AlreadyAssigned(usize, usize),
    #[error("edge {{{0}, {1}}} has no assignment")]
    UnknownEdge(usize, usize),
    #[error("edge {{{0}, {1}}} is oriented {2} -> {3}, event disagrees")]
    DirectionMismatch(usize, usize, usize, usize),
    #[error("forest index {0} out of range (2n = {1})")]
    ForestOutOfRange(usize, usize),
    #[error("vertex {0} out of range (n = {1})")]
    VertexOutOfRange(usize, usize),
    #[error("both forests of pair {0} already hold an out-edge of vertex {1}")]
    PairSaturated(usize, usize),
}

/// A single forest mutation, in the order it was performed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ForestEdgeEvent {
    pub kind: ForestEventKind,
    pub forest: usize,
    pub edge: (Vertex, Vertex),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForestEventKind {
    Insert,
    Delete,
}

/// Occupancy bits per vertex, one bit per forest pair, with the top set
/// bit tracked incrementally.
#[derive(Debug, Default, Clone)]
struct PairBits {
    words: Vec<u64>,
    top: isize,
}

impl PairBits {
    fn get(&self, i: usize) -> bool {
        self.words
            .get(i / 64)
            .is_some_and(|w| w & (1 << (i % 64)) != 0)
    }

    fn set(&mut self, i: usize) {
        let w = i / 64;
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1 << (i % 64);
        self.top = self.top.max(i as isize);
    }

    fn clear(&mut self, i: usize) {
        if let Some(w) = self.words.get_mut(i / 64) {
            *w &= !(1 << (i % 64));
        }
        if self.top == i as isize {
            let mut t = self.top - 1;
            while t >= 0 && !self.get(t as usize) {
                t -= 1;
            }
            self.top = t;
        }
    }
}

/// The maintained assignment of directed edges to forest slots.
pub struct ForestAssignment {
    n: usize,
    /// Undirected key -> (tail, forest index).
    slots: HashMap<(usize, usize), (Vertex, usize)>,
    /// Per forest, its current undirected edge set.
    forests: Vec<HashSet<(usize, usize)>>,
    /// occupant[v][j] = head of v's out-edge in forest j, if any.
    occupant: Vec<HashMap<usize, Vertex>>,
    bits: Vec<PairBits>,
    outdeg: Vec<usize>,
    outdeg_count: Vec<usize>,
    max_outdeg: usize,
}

impl ForestAssignment {
    pub fn new(n: usize) -> Self {
        let mut outdeg_count = vec![0usize; n + 1];
        outdeg_count[0] = n;
        Self {
            n,
            slots: HashMap::new(),
            forests: Vec::new(),
            occupant: vec![HashMap::new(); n],
            bits: vec![PairBits { words: Vec::new(), top: -1 }; n],
            outdeg: vec![0; n],
            outdeg_count,
            max_outdeg: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// 2 D for the current maximum outdegree D; all forests at or beyond
    /// this index are empty.
    pub fn active_forest_count(&self) -> usize {
        2 * self.max_outdeg
    }

    pub fn max_outdegree(&self) -> usize {
        self.max_outdeg
    }

    pub fn outdegree(&self, v: Vertex) -> usize {
        self.outdeg[v]
    }

    pub fn assigned_edge_count(&self) -> usize {
        self.slots.len()
    }

    /// Number of forests that have ever been touched; contents of anything
    /// beyond are trivially empty.
    pub fn populated_forest_count(&self) -> usize {
        self.forests.len()
    }

    /// (tail, forest) for an assigned edge.
    pub fn slot_of(&self, u: Vertex, v: Vertex) -> Option<(Vertex, usize)> {
        self.slots.get(&key(u, v)).copied()
    }

    /// Snapshot of forest j's undirected edges, sorted.
    pub fn forest_contents(&self, j: usize) -> Result<Vec<(usize, usize)>, DecompError> {
        if j >= 2 * self.n {
            return Err(DecompError::ForestOutOfRange(j, 2 * self.n));
        }
        let mut edges: Vec<_> = self
            .forests
            .get(j)
            .map(|s| s.iter().copied().collect())
            .unwrap_or_default();
        edges.sort_unstable();
        Ok(edges)
    }

    /// Occupancy bit for pair p of vertex v: whether v has an out-edge in
    /// forest 2p or 2p+1.
    pub fn pair_bit(&self, v: Vertex, p: usize) -> bool {
        self.bits[v].get(p)
    }

    /// Largest occupied pair index of v, or -1.
    pub fn top_pair(&self, v: Vertex) -> isize {
        self.bits[v].top
    }

    /// Consume one orientation event, restore all three invariants, and
    /// report the forest mutations performed (at most three).
    pub fn apply(&mut self, event: &OrientationEvent) -> Result<Vec<ForestEdgeEvent>, DecompError> {
        let mut out = Vec::with_capacity(3);
        match *event {
            OrientationEvent::Added { tail, head } => {
                self.check_vertex(tail)?;
                self.check_vertex(head)?;
                if self.slots.contains_key(&key(tail, head)) {
                    let k = key(tail, head);
                    return Err(DecompError::AlreadyAssigned(k.0, k.1));
                }
                self.add_out_edge(tail, head, &mut out)?;
            }
            OrientationEvent::Removed { tail, head } => {
                let (_, pair) = self.remove_out_edge(tail, head, &mut out)?;
                self.rebalance_top_pair(tail, pair, &mut out)?;
            }
            OrientationEvent::Flipped { tail, head } => {
                // The edge currently points head -> tail. Insert the new
                // out-edge first; the choice of its forest must still see
                // the old edge as an out-edge of `head`. The old slot is
                // captured up front because step 1 reassigns the key.
                let k = key(tail, head);
                let old_slot = match self.slots.get(&k) {
                    None => return Err(DecompError::UnknownEdge(k.0, k.1)),
                    Some(&(t, _)) if t != head => {
                        let other = if t == k.0 { k.1 } else { k.0 };
                        return Err(DecompError::DirectionMismatch(k.0, k.1, t, other));
                    }
                    Some(&(_, j)) => j,
                };
                self.add_out_edge(tail, head, &mut out)?;
                self.forests[old_slot].remove(&k);
                self.occupant[head].remove(&old_slot);
                self.bits[head].clear(old_slot / 2);
                self.bump_outdeg(head, -1);
                out.push(ForestEdgeEvent {
                    kind: ForestEventKind::Delete,
                    forest: old_slot,
                    edge: k,
                });
                self.rebalance_top_pair(head, old_slot / 2, &mut out)?;
            }
        }
        Ok(out)
    }

    // ----- internals -------------------------------------------------

    fn check_vertex(&self, v: Vertex) -> Result<(), DecompError> {
        if v >= self.n {
            Err(DecompError::VertexOutOfRange(v, self.n))
        } else {
            Ok(())
        }
    }

    /// Step 1: assign (tail, head) to the free forest of tail's next pair.
    fn add_out_edge(
        &mut self,
        tail: Vertex,
        head: Vertex,
        out: &mut Vec<ForestEdgeEvent>,
    ) -> Result<(), DecompError> {
        self.bump_outdeg(tail, 1);
        let pair = self.outdeg[tail] - 1;
        let forest = self.free_forest_of_pair(pair, head)?;
        self.place(tail, head, forest, out);
        self.bits[tail].set(pair);
        Ok(())
    }

    /// Step 2: drop the out-edge (tail, head), returning its old slot pair.
    fn remove_out_edge(
        &mut self,
        tail: Vertex,
        head: Vertex,
        out: &mut Vec<ForestEdgeEvent>,
    ) -> Result<(usize, usize), DecompError> {
        let k = key(tail, head);
        let slot = match self.slots.get(&k) {
            None => return Err(DecompError::UnknownEdge(k.0, k.1)),
            Some(&(t, _)) if t != tail => {
                let other = if t == k.0 { k.1 } else { k.0 };
                return Err(DecompError::DirectionMismatch(k.0, k.1, t, other));
            }
            Some(&(_, j)) => j,
        };
        self.slots.remove(&k);
        self.forests[slot].remove(&k);
        self.occupant[tail].remove(&slot);
        self.bits[tail].clear(slot / 2);
        self.bump_outdeg(tail, -1);
        out.push(ForestEdgeEvent {
            kind: ForestEventKind::Delete,
            forest: slot,
            edge: k,
        });
        Ok((slot, slot / 2))
    }

    /// Step 3: if the vertex still owns an out-edge in a pair above the one
    /// just vacated, pull it down into the vacated pair.
    fn rebalance_top_pair(
        &mut self,
        v: Vertex,
        vacated: usize,
        out: &mut Vec<ForestEdgeEvent>,
    ) -> Result<(), DecompError> {
        let top = self.bits[v].top;
        if top <= vacated as isize {
            return Ok(());
        }
        let top = top as usize;
        let from = if self.occupant[v].contains_key(&(2 * top)) {
            2 * top
        } else {
            2 * top + 1
        };
        let head = *self.occupant[v].get(&from).expect("occupancy bit set");
        let k = key(v, head);
        self.forests[from].remove(&k);
        self.occupant[v].remove(&from);
        self.slots.remove(&k);
        out.push(ForestEdgeEvent {
            kind: ForestEventKind::Delete,
            forest: from,
            edge: k,
        });
        let forest = self.free_forest_of_pair(vacated, head)?;
        self.place(v, head, forest, out);
        self.bits[v].set(vacated);
        self.bits[v].clear(top);
        Ok(())
    }

    /// The forest of the pair in which `head` has no out-edge; prefers the
    /// even index when both qualify.
    fn free_forest_of_pair(&self, pair: usize, head: Vertex) -> Result<usize, DecompError> {
        let even = 2 * pair;
        if !self.occupant[head].contains_key(&even) {
            Ok(even)
        } else if !self.occupant[head].contains_key(&(even + 1)) {
            Ok(even + 1)
        } else {
            Err(DecompError::PairSaturated(pair, head))
        }
    }

    fn place(&mut self, tail: Vertex, head: Vertex, forest: usize, out: &mut Vec<ForestEdgeEvent>) {
        if forest >= self.forests.len() {
            self.forests.resize_with(forest + 1, HashSet::new);
        }
        let k = key(tail, head);
        self.forests[forest].insert(k);
        self.occupant[tail].insert(forest, head);
        self.slots.insert(k, (tail, forest));
        out.push(ForestEdgeEvent {
            kind: ForestEventKind::Insert,
            forest,
            edge: k,
        });
    }

    fn bump_outdeg(&mut self, v: Vertex, delta: isize) {
        let old = self.outdeg[v];
        let new = old.checked_add_signed(delta).expect("outdegree underflow");
        self.outdeg[v] = new;
        self.outdeg_count[old] -= 1;
        self.outdeg_count[new] += 1;
        if new > self.max_outdeg {
            self.max_outdeg = new;
        } else if old == self.max_outdeg && self.outdeg_count[old] == 0 {
            while self.max_outdeg > 0 && self.outdeg_count[self.max_outdeg] == 0 {
                self.max_outdeg -= 1;
            }
        }
    }
}

fn key(u: Vertex, v: Vertex) -> (usize, usize) {
    (u.min(v), u.max(v))
}

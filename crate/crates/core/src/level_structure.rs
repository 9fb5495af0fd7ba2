//! The level hierarchy: vertices partitioned into k = L * ceil(lg n) levels,
//! blocked into groups of L consecutive levels. Degree thresholds per group
//! keep every vertex's same-or-above neighborhood small, which induces a
//! low-outdegree orientation (edges point from lower to higher levels).
//!
//! Two invariants drive all level moves:
//!  1. a vertex at level i < k in group l has at most 5 * 2^l neighbors at
//!     levels >= i;
//!  2. a vertex at level i > 1 has at least 2^(l') neighbors at levels
//!     >= i - 1, where l' is the group of level i - 1.
//!
//! Per-level neighbor lists are intrusive doubly-linked lists over a shared
//! node arena, two nodes per edge, so a level move relocates each touched
//! neighbor entry in O(1) via the edge's cursor.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

pub type Vertex = usize;
pub type Level = usize;

const NIL: usize = usize::MAX;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HierarchyError {
    #[error("vertex count must be positive")]
    EmptyVertexSet,
    #[error("vertex {0} out of range (n = {1})")]
    VertexOutOfRange(usize, usize),
    #[error("level {0} out of range (k = {1})")]
    LevelOutOfRange(usize, usize),
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("edge {{{0}, {1}}} already present")]
    DuplicateEdge(usize, usize),
    #[error("edge {{{0}, {1}}} not present")]
    MissingEdge(usize, usize),
}

/// A directed-edge change emitted by an update. Replaying one update's
/// events in order onto a mirror of the previous orientation reproduces
/// the new orientation exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrientationEvent {
    Added { tail: Vertex, head: Vertex },
    Removed { tail: Vertex, head: Vertex },
    /// The edge now points tail -> head; its prior direction was the
    /// reverse, head -> tail.
    Flipped { tail: Vertex, head: Vertex },
}

/// Hook invoked immediately after a vertex settles on a new level, while
/// the update is still in progress. The hierarchy is passed back in a
/// consistent read-only state.
pub trait MoveObserver {
    fn on_vertex_moved(&mut self, h: &Hierarchy, v: Vertex, old_level: Level, new_level: Level);
}

/// No-op observer.
impl MoveObserver for () {
    fn on_vertex_moved(&mut self, _: &Hierarchy, _: Vertex, _: Level, _: Level) {}
}

#[derive(Debug, Clone, Copy)]
struct ListNode {
    neighbor: usize,
    prev: usize,
    next: usize,
}

#[derive(Debug, Clone, Copy)]
struct DList {
    head: usize,
    len: usize,
}

impl DList {
    const fn new() -> Self {
        Self { head: NIL, len: 0 }
    }
}

fn list_push(nodes: &mut [ListNode], list: &mut DList, x: usize) {
    nodes[x].prev = NIL;
    nodes[x].next = list.head;
    if list.head != NIL {
        nodes[list.head].prev = x;
    }
    list.head = x;
    list.len += 1;
}

fn list_remove(nodes: &mut [ListNode], list: &mut DList, x: usize) {
    let (p, nx) = (nodes[x].prev, nodes[x].next);
    if p != NIL {
        nodes[p].next = nx;
    } else {
        list.head = nx;
    }
    if nx != NIL {
        nodes[nx].prev = p;
    }
    list.len -= 1;
}

#[derive(Debug, Clone, Copy)]
struct EdgeRec {
    a: usize,
    b: usize,
    tail: usize,
}

/// ceil(log2 n) for n >= 1.
fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (n - 1).ilog2() as usize + 1
    }
}

#[derive(Debug)]
pub struct Hierarchy {
    n: usize,
    levels_per_group: usize,
    level_count: usize,
    level: Vec<Level>,
    /// Neighbors at the vertex's own level or above.
    up: Vec<DList>,
    /// Per-level buckets for neighbors strictly below; allocated on first
    /// promotion since level-1 vertices never need them.
    below: Vec<Option<Box<[DList]>>>,
    nodes: Vec<ListNode>,
    edges: Vec<EdgeRec>,
    free_edges: Vec<usize>,
    edge_ids: HashMap<(usize, usize), usize>,
    outdeg: Vec<usize>,
    outdeg_count: Vec<usize>,
    max_outdeg: usize,
    level_moves: u64,
    promo: VecDeque<usize>,
    demo: VecDeque<usize>,
    in_promo: Vec<bool>,
    in_demo: Vec<bool>,
}

impl Hierarchy {
    /// A hierarchy over n isolated vertices, all at level 1.
    pub fn new(n: usize) -> Result<Self, HierarchyError> {
        if n == 0 {
            return Err(HierarchyError::EmptyVertexSet);
        }
        let lg = ceil_log2(n);
        let levels_per_group = 2 + lg;
        let level_count = (levels_per_group * lg).max(1);
        let mut outdeg_count = vec![0usize; n + 1];
        outdeg_count[0] = n;
        Ok(Self {
            n,
            levels_per_group,
            level_count,
            level: vec![1; n],
            up: vec![DList::new(); n],
            below: (0..n).map(|_| None).collect(),
            nodes: Vec::new(),
            edges: Vec::new(),
            free_edges: Vec::new(),
            edge_ids: HashMap::new(),
            outdeg: vec![0; n],
            outdeg_count,
            max_outdeg: 0,
            level_moves: 0,
            promo: VecDeque::new(),
            demo: VecDeque::new(),
            in_promo: vec![false; n],
            in_demo: vec![false; n],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// L: number of levels per group.
    pub fn levels_per_group(&self) -> usize {
        self.levels_per_group
    }

    /// k: total number of levels.
    pub fn level_count(&self) -> usize {
        self.level_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_ids.len()
    }

    pub fn is_edge(&self, u: Vertex, v: Vertex) -> bool {
        u != v && self.edge_ids.contains_key(&Self::key(u, v))
    }

    pub fn level_of(&self, v: Vertex) -> Result<Level, HierarchyError> {
        self.check_vertex(v)?;
        Ok(self.level[v])
    }

    /// Group index of a level: levels l*L+1 ..= (l+1)*L form group l.
    pub fn group_of_level(&self, i: Level) -> Result<usize, HierarchyError> {
        if i == 0 || i > self.level_count {
            return Err(HierarchyError::LevelOutOfRange(i, self.level_count));
        }
        Ok((i - 1) / self.levels_per_group)
    }

    /// Exact maximum outdegree under the maintained orientation, O(1).
    pub fn max_outdegree(&self) -> usize {
        self.max_outdeg
    }

    /// Arboricity estimate alpha* = max(1, 2 * max outdegree); always within
    /// [alpha, 80 alpha] of the true arboricity alpha.
    pub fn arboricity_estimate(&self) -> usize {
        (2 * self.max_outdeg).max(1)
    }

    pub fn outdegree(&self, v: Vertex) -> Result<usize, HierarchyError> {
        self.check_vertex(v)?;
        Ok(self.outdeg[v])
    }

    /// Cumulative number of level moves performed since construction.
    pub fn level_moves(&self) -> u64 {
        self.level_moves
    }

    /// Neighbors of v at levels >= level(v), in list order.
    pub fn same_or_above_neighbors(
        &self,
        v: Vertex,
    ) -> Result<impl Iterator<Item = Vertex> + '_, HierarchyError> {
        self.check_vertex(v)?;
        Ok(self.iter_list(self.up[v].head))
    }

    /// Neighbors of v at exactly level i, for i < level(v).
    pub fn neighbors_below(
        &self,
        v: Vertex,
        i: Level,
    ) -> Result<impl Iterator<Item = Vertex> + '_, HierarchyError> {
        self.check_vertex(v)?;
        if i == 0 || i > self.level_count {
            return Err(HierarchyError::LevelOutOfRange(i, self.level_count));
        }
        let head = match &self.below[v] {
            Some(buckets) if i < self.level[v] => buckets[i].head,
            _ => NIL,
        };
        Ok(self.iter_list(head))
    }

    /// Out-neighbors of v: heads of edges oriented away from v. All of them
    /// live in v's same-or-above list.
    pub fn out_neighbors(
        &self,
        v: Vertex,
    ) -> Result<impl Iterator<Item = Vertex> + '_, HierarchyError> {
        self.check_vertex(v)?;
        let iter = ListIter {
            h: self,
            cur: self.up[v].head,
        };
        Ok(iter.filter_map(move |(nb, e)| (self.edges[e].tail == v).then_some(nb)))
    }

    /// All undirected edges, in arbitrary order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.edge_ids.values().map(|&e| (self.edges[e].a, self.edges[e].b))
    }

    /// Current orientation of every edge as (tail, head), arbitrary order.
    pub fn oriented_edges(&self) -> Vec<(Vertex, Vertex)> {
        self.edge_ids
            .values()
            .map(|&e| {
                let rec = self.edges[e];
                (rec.tail, if rec.tail == rec.a { rec.b } else { rec.a })
            })
            .collect()
    }

    /// Direction of an existing edge as (tail, head).
    pub fn direction_of(&self, u: Vertex, v: Vertex) -> Result<(Vertex, Vertex), HierarchyError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let &e = self
            .edge_ids
            .get(&Self::key(u, v))
            .ok_or(HierarchyError::MissingEdge(u.min(v), u.max(v)))?;
        let rec = self.edges[e];
        Ok((rec.tail, if rec.tail == rec.a { rec.b } else { rec.a }))
    }

    pub fn insert_edge(&mut self, u: Vertex, v: Vertex) -> Result<Vec<OrientationEvent>, HierarchyError> {
        self.insert_edge_observed(u, v, &mut ())
    }

    pub fn delete_edge(&mut self, u: Vertex, v: Vertex) -> Result<Vec<OrientationEvent>, HierarchyError> {
        self.delete_edge_observed(u, v, &mut ())
    }

    /// Insert an edge, restore both invariants, and report every
    /// orientation change. `obs` fires after each individual level move.
    pub fn insert_edge_observed(
        &mut self,
        u: Vertex,
        v: Vertex,
        obs: &mut dyn MoveObserver,
    ) -> Result<Vec<OrientationEvent>, HierarchyError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(HierarchyError::SelfLoop(u));
        }
        let key = Self::key(u, v);
        if self.edge_ids.contains_key(&key) {
            return Err(HierarchyError::DuplicateEdge(key.0, key.1));
        }

        let tail = self.natural_tail(u, v);
        let e = match self.free_edges.pop() {
            Some(e) => {
                self.edges[e] = EdgeRec { a: key.0, b: key.1, tail };
                e
            }
            None => {
                self.edges.push(EdgeRec { a: key.0, b: key.1, tail });
                self.nodes.push(ListNode { neighbor: 0, prev: NIL, next: NIL });
                self.nodes.push(ListNode { neighbor: 0, prev: NIL, next: NIL });
                self.edges.len() - 1
            }
        };
        self.nodes[2 * e].neighbor = key.1;
        self.nodes[2 * e + 1].neighbor = key.0;
        self.edge_ids.insert(key, e);

        self.attach(key.0, 2 * e);
        self.attach(key.1, 2 * e + 1);
        self.bump_outdeg(tail, 1);

        let head = if tail == key.0 { key.1 } else { key.0 };
        let mut events = vec![OrientationEvent::Added { tail, head }];
        self.enqueue_check(u);
        self.enqueue_check(v);
        self.settle(&mut events, obs);
        Ok(events)
    }

    /// Delete an edge, restore both invariants, and report every
    /// orientation change.
    pub fn delete_edge_observed(
        &mut self,
        u: Vertex,
        v: Vertex,
        obs: &mut dyn MoveObserver,
    ) -> Result<Vec<OrientationEvent>, HierarchyError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(HierarchyError::SelfLoop(u));
        }
        let key = Self::key(u, v);
        let e = *self
            .edge_ids
            .get(&key)
            .ok_or(HierarchyError::MissingEdge(key.0, key.1))?;
        let rec = self.edges[e];

        self.detach(key.0, 2 * e);
        self.detach(key.1, 2 * e + 1);
        self.bump_outdeg(rec.tail, -1);
        self.edge_ids.remove(&key);
        self.free_edges.push(e);

        let head = if rec.tail == rec.a { rec.b } else { rec.a };
        let mut events = vec![OrientationEvent::Removed { tail: rec.tail, head }];
        self.enqueue_check(u);
        self.enqueue_check(v);
        self.settle(&mut events, obs);
        Ok(events)
    }

    // ----- internals -------------------------------------------------

    fn key(u: Vertex, v: Vertex) -> (usize, usize) {
        (u.min(v), u.max(v))
    }

    fn check_vertex(&self, v: Vertex) -> Result<(), HierarchyError> {
        if v >= self.n {
            Err(HierarchyError::VertexOutOfRange(v, self.n))
        } else {
            Ok(())
        }
    }

    /// Orientation rule: lower level is the tail; equal levels break the
    /// tie toward the smaller vertex id.
    fn natural_tail(&self, u: Vertex, v: Vertex) -> Vertex {
        match self.level[u].cmp(&self.level[v]) {
            std::cmp::Ordering::Less => u,
            std::cmp::Ordering::Greater => v,
            std::cmp::Ordering::Equal => u.min(v),
        }
    }

    fn iter_list(&self, head: usize) -> impl Iterator<Item = Vertex> + '_ {
        ListIter { h: self, cur: head }.map(|(nb, _)| nb)
    }

    fn below_list(&self, v: Vertex, i: Level) -> DList {
        match &self.below[v] {
            Some(b) => b[i],
            None => DList::new(),
        }
    }

    fn set_below_list(&mut self, v: Vertex, i: Level, list: DList) {
        let buckets = self.below[v].get_or_insert_with(|| {
            vec![DList::new(); self.level_count + 1].into_boxed_slice()
        });
        buckets[i] = list;
    }

    /// Place a node into the owner's correct bucket for the neighbor's
    /// current level.
    fn attach(&mut self, owner: Vertex, node: usize) {
        let nb = self.nodes[node].neighbor;
        if self.level[nb] >= self.level[owner] {
            let mut l = self.up[owner];
            list_push(&mut self.nodes, &mut l, node);
            self.up[owner] = l;
        } else {
            let i = self.level[nb];
            let mut l = self.below_list(owner, i);
            list_push(&mut self.nodes, &mut l, node);
            self.set_below_list(owner, i, l);
        }
    }

    fn detach(&mut self, owner: Vertex, node: usize) {
        let nb = self.nodes[node].neighbor;
        if self.level[nb] >= self.level[owner] {
            let mut l = self.up[owner];
            list_remove(&mut self.nodes, &mut l, node);
            self.up[owner] = l;
        } else {
            let i = self.level[nb];
            let mut l = self.below_list(owner, i);
            list_remove(&mut self.nodes, &mut l, node);
            self.set_below_list(owner, i, l);
        }
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

    /// Re-point an edge, maintaining outdegree counters and emitting a flip
    /// when the direction actually changes.
    fn set_direction(&mut self, e: usize, new_tail: Vertex, events: &mut Vec<OrientationEvent>) {
        let rec = self.edges[e];
        if rec.tail != new_tail {
            let head = if new_tail == rec.a { rec.b } else { rec.a };
            self.edges[e].tail = new_tail;
            self.bump_outdeg(rec.tail, -1);
            self.bump_outdeg(new_tail, 1);
            events.push(OrientationEvent::Flipped { tail: new_tail, head });
        }
    }

    fn violates_inv1(&self, v: Vertex) -> bool {
        let i = self.level[v];
        i < self.level_count && self.up[v].len > (5usize << ((i - 1) / self.levels_per_group))
    }

    fn violates_inv2(&self, v: Vertex) -> bool {
        let i = self.level[v];
        if i <= 1 {
            return false;
        }
        let need = 1usize << ((i - 2) / self.levels_per_group);
        self.up[v].len + self.below_list(v, i - 1).len < need
    }

    fn enqueue_check(&mut self, v: Vertex) {
        if self.violates_inv1(v) {
            if !self.in_promo[v] {
                self.in_promo[v] = true;
                self.promo.push_back(v);
            }
        } else if self.violates_inv2(v) && !self.in_demo[v] {
            self.in_demo[v] = true;
            self.demo.push_back(v);
        }
    }

    /// Drain the dirty-vertex queues, promotions first, FIFO within each
    /// class. A popped vertex is re-classified before it moves.
    fn settle(&mut self, events: &mut Vec<OrientationEvent>, obs: &mut dyn MoveObserver) {
        loop {
            if let Some(v) = self.promo.pop_front() {
                self.in_promo[v] = false;
                if self.violates_inv1(v) {
                    self.promote(v, events, obs);
                } else {
                    self.enqueue_check(v);
                }
            } else if let Some(v) = self.demo.pop_front() {
                self.in_demo[v] = false;
                if self.violates_inv2(v) {
                    self.demote(v, events, obs);
                } else {
                    self.enqueue_check(v);
                }
            } else {
                break;
            }
        }
    }

    /// Move v from level i to i+1: split its same-or-above list into the
    /// new level-i bucket and the rest, relocating v's entry in each
    /// affected neighbor's lists and re-orienting touched edges.
    fn promote(&mut self, v: Vertex, events: &mut Vec<OrientationEvent>, obs: &mut dyn MoveObserver) {
        let i = self.level[v];
        debug_assert!(i < self.level_count);
        let old_up = self.up[v];
        self.up[v] = DList::new();
        let mut new_up = DList::new();
        let mut level_i = DList::new();

        let mut x = old_up.head;
        while x != NIL {
            let next = self.nodes[x].next;
            let u = self.nodes[x].neighbor;
            let e = x >> 1;
            let twin = x ^ 1;
            if self.level[u] == i {
                list_push(&mut self.nodes, &mut level_i, x);
                // u is now strictly below v.
                self.set_direction(e, u, events);
            } else {
                list_push(&mut self.nodes, &mut new_up, x);
                if self.level[u] == i + 1 {
                    // v climbs into u's level: u's bucket i entry joins u's
                    // same-or-above list.
                    let mut from = self.below_list(u, i);
                    list_remove(&mut self.nodes, &mut from, twin);
                    self.set_below_list(u, i, from);
                    let mut to = self.up[u];
                    list_push(&mut self.nodes, &mut to, twin);
                    self.up[u] = to;
                    self.set_direction(e, u.min(v), events);
                    self.enqueue_check(u);
                } else {
                    // level[u] > i + 1: shift v one bucket up in u's lists.
                    let mut from = self.below_list(u, i);
                    list_remove(&mut self.nodes, &mut from, twin);
                    self.set_below_list(u, i, from);
                    let mut to = self.below_list(u, i + 1);
                    list_push(&mut self.nodes, &mut to, twin);
                    self.set_below_list(u, i + 1, to);
                }
            }
            x = next;
        }

        self.up[v] = new_up;
        self.set_below_list(v, i, level_i);
        self.level[v] = i + 1;
        self.level_moves += 1;
        obs.on_vertex_moved(self, v, i, i + 1);
        self.enqueue_check(v);
    }

    /// Move v from level i to i-1: merge its level-(i-1) bucket into its
    /// same-or-above list, mirroring the bucket moves on each neighbor.
    fn demote(&mut self, v: Vertex, events: &mut Vec<OrientationEvent>, obs: &mut dyn MoveObserver) {
        let i = self.level[v];
        debug_assert!(i > 1);
        let old_up = self.up[v];
        self.up[v] = DList::new();
        let old_bucket = self.below_list(v, i - 1);
        self.set_below_list(v, i - 1, DList::new());
        let mut new_up = DList::new();

        let mut x = old_up.head;
        while x != NIL {
            let next = self.nodes[x].next;
            let u = self.nodes[x].neighbor;
            let e = x >> 1;
            let twin = x ^ 1;
            if self.level[u] == i {
                // v sinks below u.
                let mut from = self.up[u];
                list_remove(&mut self.nodes, &mut from, twin);
                self.up[u] = from;
                let mut to = self.below_list(u, i - 1);
                list_push(&mut self.nodes, &mut to, twin);
                self.set_below_list(u, i - 1, to);
                self.set_direction(e, v, events);
                self.enqueue_check(u);
            } else {
                // level[u] > i: shift v one bucket down in u's lists.
                let mut from = self.below_list(u, i);
                list_remove(&mut self.nodes, &mut from, twin);
                self.set_below_list(u, i, from);
                let mut to = self.below_list(u, i - 1);
                list_push(&mut self.nodes, &mut to, twin);
                self.set_below_list(u, i - 1, to);
                if self.level[u] == i + 1 {
                    self.enqueue_check(u);
                }
            }
            list_push(&mut self.nodes, &mut new_up, x);
            x = next;
        }

        let mut x = old_bucket.head;
        while x != NIL {
            let next = self.nodes[x].next;
            let u = self.nodes[x].neighbor;
            debug_assert_eq!(self.level[u], i - 1);
            self.set_direction(x >> 1, u.min(v), events);
            list_push(&mut self.nodes, &mut new_up, x);
            x = next;
        }

        self.up[v] = new_up;
        self.level[v] = i - 1;
        self.level_moves += 1;
        obs.on_vertex_moved(self, v, i, i - 1);
        self.enqueue_check(v);
    }
}

struct ListIter<'a> {
    h: &'a Hierarchy,
    cur: usize,
}

impl Iterator for ListIter<'_> {
    type Item = (Vertex, usize);

    fn next(&mut self) -> Option<Self::Item> {
        if self.cur == NIL {
            return None;
        }
        let node = self.h.nodes[self.cur];
        let item = (node.neighbor, self.cur >> 1);
        self.cur = node.next;
        Some(item)
    }
}

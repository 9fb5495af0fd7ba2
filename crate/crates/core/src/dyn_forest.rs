//! A dynamic rooted forest with unique marked roots. Link, cut, root
//! lookup, and distance-to-root all run in amortized logarithmic time on a
//! splay-based link-cut tree that keeps each represented tree rooted at
//! its marked vertex.
//!
//! The root protocol: linking u's tree under v's unmarks u's old root, so
//! the merged tree keeps exactly one mark (v's old root). Cutting an edge
//! leaves one component rootless; the cut endpoint on that side gets
//! marked.

use std::collections::HashSet;

use thiserror::Error;

use crate::level_structure::Vertex;

const NIL: usize = usize::MAX;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ForestError {
    #[error("vertex {0} out of range (n = {1})")]
    VertexOutOfRange(usize, usize),
    #[error("link({0}, {1}) would close a cycle: same tree")]
    SameTree(usize, usize),
    #[error("edge {{{0}, {1}}} not in the forest")]
    MissingEdge(usize, usize),
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
}

#[derive(Debug, Clone, Copy)]
struct Node {
    parent: usize,
    child: [usize; 2],
    size: u32,
    rev: bool,
}

pub struct DynForest {
    n: usize,
    nodes: Vec<Node>,
    marked: Vec<bool>,
    edges: HashSet<(usize, usize)>,
    rotations: u64,
}

impl DynForest {
    /// A forest of n isolated vertices, every one of them a marked root.
    pub fn new(n: usize) -> Self {
        Self {
            n,
            nodes: vec![
                Node {
                    parent: NIL,
                    child: [NIL, NIL],
                    size: 1,
                    rev: false,
                };
                n
            ],
            marked: vec![true; n],
            edges: HashSet::new(),
            rotations: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.edges.contains(&key(u, v))
    }

    pub fn is_marked(&self, v: Vertex) -> bool {
        self.marked[v]
    }

    /// Total splay rotations performed; a machine-independent proxy for
    /// time spent.
    pub fn rotation_count(&self) -> u64 {
        self.rotations
    }

    /// Join two trees. The old root on u's side loses its mark; the merged
    /// tree is rooted at v's old root.
    pub fn link(&mut self, u: Vertex, v: Vertex) -> Result<(), ForestError> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(ForestError::SelfLoop(u));
        }
        let root_u = self.lct_root(u);
        if root_u == self.lct_root(v) {
            return Err(ForestError::SameTree(u, v));
        }
        debug_assert!(self.marked[root_u]);
        self.marked[root_u] = false;
        self.make_root(u);
        self.nodes[u].parent = v;
        self.edges.insert(key(u, v));
        Ok(())
    }

    /// Remove a forest edge. The component that lost the root receives a
    /// new one: the cut endpoint on that side.
    pub fn cut(&mut self, u: Vertex, v: Vertex) -> Result<(), ForestError> {
        self.check(u)?;
        self.check(v)?;
        if !self.edges.remove(&key(u, v)) {
            let k = key(u.min(v), u.max(v));
            return Err(ForestError::MissingEdge(k.0, k.1));
        }
        let old_root = self.lct_root(u);
        self.make_root(u);
        self.access(v);
        // With u rerooted and u, v adjacent, v's splay predecessor is u.
        debug_assert_eq!(self.nodes[v].child[0], u);
        self.nodes[v].child[0] = NIL;
        self.nodes[u].parent = NIL;
        self.pull(v);

        if self.lct_root(u) == self.lct_root(old_root) {
            // v's side lost the root.
            self.marked[v] = true;
            self.make_root(old_root);
            self.make_root(v);
        } else {
            self.marked[u] = true;
            self.make_root(u);
            self.make_root(old_root);
        }
        Ok(())
    }

    /// The unique marked vertex of u's tree.
    pub fn root_of(&mut self, u: Vertex) -> Result<Vertex, ForestError> {
        self.check(u)?;
        let r = self.lct_root(u);
        debug_assert!(self.marked[r], "root {r} lost its mark");
        Ok(r)
    }

    /// Edge count of the tree path from u to its root.
    pub fn dist_to_root(&mut self, u: Vertex) -> Result<usize, ForestError> {
        self.check(u)?;
        self.access(u);
        let left = self.nodes[u].child[0];
        Ok(if left == NIL {
            0
        } else {
            self.nodes[left].size as usize
        })
    }

    pub fn same_tree(&mut self, u: Vertex, v: Vertex) -> Result<bool, ForestError> {
        self.check(u)?;
        self.check(v)?;
        Ok(u == v || self.lct_root(u) == self.lct_root(v))
    }

    // ----- link-cut internals ------------------------------------------

    fn check(&self, v: Vertex) -> Result<(), ForestError> {
        if v >= self.n {
            Err(ForestError::VertexOutOfRange(v, self.n))
        } else {
            Ok(())
        }
    }

    fn is_splay_root(&self, x: usize) -> bool {
        let p = self.nodes[x].parent;
        p == NIL || (self.nodes[p].child[0] != x && self.nodes[p].child[1] != x)
    }

    fn push_down(&mut self, x: usize) {
        if self.nodes[x].rev {
            self.nodes[x].child.swap(0, 1);
            for side in 0..2 {
                let c = self.nodes[x].child[side];
                if c != NIL {
                    self.nodes[c].rev ^= true;
                }
            }
            self.nodes[x].rev = false;
        }
    }

    fn pull(&mut self, x: usize) {
        let mut size = 1;
        for side in 0..2 {
            let c = self.nodes[x].child[side];
            if c != NIL {
                size += self.nodes[c].size;
            }
        }
        self.nodes[x].size = size;
    }

    fn rotate(&mut self, x: usize) {
        self.rotations += 1;
        let p = self.nodes[x].parent;
        let g = self.nodes[p].parent;
        let side = (self.nodes[p].child[1] == x) as usize;
        let carry = self.nodes[x].child[1 - side];
        if !self.is_splay_root(p) {
            let pside = (self.nodes[g].child[1] == p) as usize;
            self.nodes[g].child[pside] = x;
        }
        self.nodes[x].parent = g;
        self.nodes[x].child[1 - side] = p;
        self.nodes[p].parent = x;
        self.nodes[p].child[side] = carry;
        if carry != NIL {
            self.nodes[carry].parent = p;
        }
        self.pull(p);
        self.pull(x);
    }

    fn splay(&mut self, x: usize) {
        // Clear pending reversals along the path above x before rotating.
        let mut path = vec![x];
        let mut y = x;
        while !self.is_splay_root(y) {
            y = self.nodes[y].parent;
            path.push(y);
        }
        for &node in path.iter().rev() {
            self.push_down(node);
        }
        while !self.is_splay_root(x) {
            let p = self.nodes[x].parent;
            if !self.is_splay_root(p) {
                let g = self.nodes[p].parent;
                let zig_zig = (self.nodes[g].child[1] == p) == (self.nodes[p].child[1] == x);
                if zig_zig {
                    self.rotate(p);
                } else {
                    self.rotate(x);
                }
            }
            self.rotate(x);
        }
    }

    /// Make the path from the represented root to x preferred, with x as
    /// the splay root of it.
    fn access(&mut self, x: usize) {
        self.splay(x);
        self.nodes[x].child[1] = NIL;
        self.pull(x);
        loop {
            let w = self.nodes[x].parent;
            if w == NIL {
                break;
            }
            self.splay(w);
            self.nodes[w].child[1] = x;
            self.pull(w);
            self.splay(x);
        }
    }

    fn make_root(&mut self, x: usize) {
        self.access(x);
        self.nodes[x].rev ^= true;
        self.push_down(x);
    }

    fn lct_root(&mut self, x: usize) -> usize {
        self.access(x);
        let mut r = x;
        loop {
            self.push_down(r);
            let left = self.nodes[r].child[0];
            if left == NIL {
                break;
            }
            r = left;
        }
        self.splay(r);
        r
    }
}

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

//! Implicit coloring from root-distance parities: one dynamic forest per
//! active slot of the decomposition, and a query returns the vector of
//! distance parities. Adjacent vertices share an edge in some forest, and
//! endpoints of a tree edge sit at distances of different parity from the
//! unique root, so their vectors differ.

use std::fmt;

use thiserror::Error;

use crate::arb_decomp::{ForestEdgeEvent, ForestEventKind};
use crate::dyn_forest::{DynForest, ForestError};
use crate::level_structure::Vertex;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParityError {
    #[error("forest index {0} out of range (2n = {1})")]
    ForestOutOfRange(usize, usize),
    /// A forest event the dynamic forests cannot apply, e.g. a same-tree
    /// link. Always indicates a bug upstream in the decomposition.
    #[error("forest {forest}: {source}")]
    InconsistentEvent {
        forest: usize,
        #[source]
        source: ForestError,
    },
}

/// The per-forest distance parities of one vertex; bit j is the parity in
/// forest j. Only comparable against vectors from the same inter-update
/// window.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParityVector {
    bits: Vec<bool>,
}

impl ParityVector {
    pub fn width(&self) -> usize {
        self.bits.len()
    }

    pub fn bit(&self, j: usize) -> bool {
        self.bits[j]
    }

    /// Bits packed LSB-first into a hex literal.
    pub fn to_hex(&self) -> String {
        if self.bits.is_empty() {
            return "0x0".to_string();
        }
        let mut nibbles = vec![0u8; self.bits.len().div_ceil(4)];
        for (j, &b) in self.bits.iter().enumerate() {
            if b {
                nibbles[j / 4] |= 1 << (j % 4);
            }
        }
        let mut s = String::from("0x");
        let mut seen_nonzero = false;
        for &nib in nibbles.iter().rev() {
            if nib != 0 {
                seen_nonzero = true;
            }
            if seen_nonzero {
                s.push(char::from_digit(nib as u32, 16).unwrap());
            }
        }
        if !seen_nonzero {
            s.push('0');
        }
        s
    }
}

impl fmt::Display for ParityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.bits.len(), self.to_hex())
    }
}

/// Mirrors the decomposition's forests as dynamic forests and answers
/// parity queries.
pub struct ParityColoring {
    n: usize,
    forests: Vec<Option<DynForest>>,
}

impl ParityColoring {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            forests: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Apply one decomposition event to the matching dynamic forest.
    pub fn on_forest_event(&mut self, ev: &ForestEdgeEvent) -> Result<(), ParityError> {
        if ev.forest >= 2 * self.n {
            return Err(ParityError::ForestOutOfRange(ev.forest, 2 * self.n));
        }
        if ev.forest >= self.forests.len() {
            self.forests.resize_with(ev.forest + 1, || None);
        }
        let n = self.n;
        let forest = self.forests[ev.forest].get_or_insert_with(|| DynForest::new(n));
        let (u, v) = ev.edge;
        let result = match ev.kind {
            ForestEventKind::Insert => forest.link(u, v),
            ForestEventKind::Delete => forest.cut(u, v),
        };
        result.map_err(|source| ParityError::InconsistentEvent {
            forest: ev.forest,
            source,
        })
    }

    /// Parity vector of u over the first `active` forests. Vertices
    /// isolated in a forest are their own roots and contribute parity 0.
    pub fn query(&mut self, u: Vertex, active: usize) -> ParityVector {
        let mut bits = Vec::with_capacity(active);
        for j in 0..active {
            let bit = match self.forests.get_mut(j).and_then(Option::as_mut) {
                Some(f) => f.dist_to_root(u).expect("vertex in range") % 2 == 1,
                None => false,
            };
            bits.push(bit);
        }
        ParityVector { bits }
    }

    /// Read access to one mirrored forest, if it has ever been touched.
    pub fn forest(&self, j: usize) -> Option<&DynForest> {
        self.forests.get(j).and_then(Option::as_ref)
    }
}

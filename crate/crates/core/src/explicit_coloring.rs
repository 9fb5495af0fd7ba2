//! Explicit adaptive coloring: every level owns a disjoint palette sized
//! against its group's degree cap, so a recolored vertex always finds a
//! free color among its same-level neighbors. Vertices are recolored when
//! they change level and when an insertion creates a same-level,
//! same-color conflict (the endpoint with the older color yields).

use std::collections::{HashMap, HashSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::level_structure::{Hierarchy, Level, MoveObserver, Vertex};

/// A color: the level it belongs to plus an index into that level's
/// palette. Palettes of distinct levels are disjoint by construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorId {
    pub level: Level,
    pub index: usize,
}

impl std::fmt::Display for ColorId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.level, self.index)
    }
}

/// Palette size for group l: the invariant-1 cap of 5 * 2^l plus a slack
/// of max(1, ceil(2^l / 10)) so at least one color is always free.
pub fn palette_size(group: usize) -> usize {
    let cap = 5usize << group;
    let slack = ((1usize << group) + 9) / 10;
    cap + slack.max(1)
}

pub struct ExplicitColoring {
    colors: Vec<ColorId>,
    stamps: Vec<u64>,
    recolor_counter: u64,
    rng: ChaCha8Rng,
    in_use: HashMap<ColorId, usize>,
    ever_used: HashSet<ColorId>,
    fallback_recolors: u64,
    scratch: Vec<bool>,
}

impl ExplicitColoring {
    /// Colors n vertices of an edgeless graph uniformly at random from the
    /// level-1 palette. Initial assignments consume recolor timestamps, so
    /// age comparisons never tie.
    pub fn new(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p0 = palette_size(0);
        let mut colors = Vec::with_capacity(n);
        let mut stamps = Vec::with_capacity(n);
        let mut in_use: HashMap<ColorId, usize> = HashMap::new();
        let mut ever_used = HashSet::new();
        for v in 0..n {
            let c = ColorId {
                level: 1,
                index: rng.random_range(0..p0),
            };
            colors.push(c);
            stamps.push(v as u64 + 1);
            *in_use.entry(c).or_insert(0) += 1;
            ever_used.insert(c);
        }
        Self {
            colors,
            stamps,
            recolor_counter: n as u64,
            rng,
            in_use,
            ever_used,
            fallback_recolors: 0,
            scratch: Vec::new(),
        }
    }

    pub fn color_of(&self, v: Vertex) -> ColorId {
        self.colors[v]
    }

    /// Number of distinct colors currently assigned, O(1).
    pub fn colors_in_use(&self) -> usize {
        self.in_use.len()
    }

    /// Number of distinct colors assigned at any point since construction.
    pub fn distinct_colors_ever(&self) -> usize {
        self.ever_used.len()
    }

    /// Recolors that found no free color because the vertex was still over
    /// its degree cap mid-update; each such vertex is recolored again
    /// before the update completes.
    pub fn fallback_recolor_count(&self) -> u64 {
        self.fallback_recolors
    }

    /// Total color assignments so far, counting initialization.
    pub fn recolor_count(&self) -> u64 {
        self.recolor_counter
    }

    /// Conflict handler for a freshly inserted edge, called after the
    /// hierarchy has settled. Only a same-level, same-color pair triggers
    /// a recolor, and only of the endpoint colored longer ago.
    pub fn on_edge_inserted(&mut self, h: &Hierarchy, u: Vertex, v: Vertex) {
        let (lu, lv) = (h.level_of(u).unwrap(), h.level_of(v).unwrap());
        if lu != lv || self.colors[u] != self.colors[v] {
            return;
        }
        let older = if self.stamps[u] < self.stamps[v] { u } else { v };
        self.recolor_at(h, older, lu);
    }

    /// Pick a uniformly random color from level `lvl`'s palette that no
    /// same-level neighbor of v currently uses.
    fn recolor_at(&mut self, h: &Hierarchy, v: Vertex, lvl: Level) {
        let group = h.group_of_level(lvl).unwrap();
        let p = palette_size(group);
        self.scratch.clear();
        self.scratch.resize(p, false);
        for u in h.same_or_above_neighbors(v).unwrap() {
            if h.level_of(u).unwrap() == lvl {
                let c = self.colors[u];
                debug_assert_eq!(c.level, lvl);
                self.scratch[c.index] = true;
            }
        }
        let available = self.scratch.iter().filter(|&&used| !used).count();
        let index = if available == 0 {
            // Over-cap vertex mid-update: any palette color keeps the
            // bookkeeping consistent; the forced follow-up move recolors
            // it properly.
            self.fallback_recolors += 1;
            self.rng.random_range(0..p)
        } else {
            let pick = self.rng.random_range(0..available);
            self.scratch
                .iter()
                .enumerate()
                .filter(|(_, &used)| !used)
                .nth(pick)
                .map(|(i, _)| i)
                .unwrap()
        };
        self.assign(v, ColorId { level: lvl, index });
    }

    fn assign(&mut self, v: Vertex, c: ColorId) {
        let old = self.colors[v];
        if let Some(count) = self.in_use.get_mut(&old) {
            *count -= 1;
            if *count == 0 {
                self.in_use.remove(&old);
            }
        }
        *self.in_use.entry(c).or_insert(0) += 1;
        self.ever_used.insert(c);
        self.colors[v] = c;
        self.recolor_counter += 1;
        self.stamps[v] = self.recolor_counter;
    }
}

impl MoveObserver for ExplicitColoring {
    fn on_vertex_moved(&mut self, h: &Hierarchy, v: Vertex, _old: Level, new_level: Level) {
        self.recolor_at(h, v, new_level);
    }
}

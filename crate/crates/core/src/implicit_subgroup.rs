//! Lazy implicit coloring over subgroups of consecutive levels. Updates
//! only bump a counter, implicitly outdating every stored color; a query
//! recolors the queried vertex after recursively refreshing its outdated
//! same-subgroup neighbors on higher levels. Fresh colors are proper
//! within one inter-update window.
//!
//! A combined query falls back to the explicit table whenever the
//! arboricity estimate is too large for the subgroup machinery to pay off.

use crate::explicit_coloring::{palette_size, ColorId, ExplicitColoring};
use crate::level_structure::{Hierarchy, Level, Vertex};

/// A subgroup color: group, subgroup index within the group, palette index.
/// Palettes of distinct (group, subgroup) pairs are disjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubgroupColor {
    pub group: usize,
    pub subgroup: usize,
    pub index: usize,
}

impl std::fmt::Display for SubgroupColor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.group, self.subgroup, self.index)
    }
}

/// A stored color plus the update-counter value at which it was assigned.
/// The record is fresh while its stamp equals the current counter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColorRecord {
    pub color: SubgroupColor,
    pub stamp: u64,
}

/// How each group splits into subgroups of `width` consecutive levels,
/// derived from the arboricity estimate at query-batch start.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubgroupLayout {
    pub alpha_star: usize,
    pub width: usize,
}

impl SubgroupLayout {
    /// width = clamp(floor(lg lg n / lg max(2, alpha*)), 1, L).
    pub fn new(n: usize, levels_per_group: usize, alpha_star: usize) -> Self {
        let width = if n >= 3 {
            let lg_lg_n = (n as f64).log2().log2();
            let denom = (alpha_star.max(2) as f64).log2();
            (lg_lg_n / denom).floor() as usize
        } else {
            0
        };
        Self {
            alpha_star,
            width: width.clamp(1, levels_per_group),
        }
    }

    /// Subgroup index of a level inside its group, from the level's
    /// 1-based position within the group.
    pub fn subgroup_of(&self, level: Level, levels_per_group: usize) -> usize {
        let pos = (level - 1) % levels_per_group; // 0-based within group
        pos / self.width
    }

    /// Highest level of the subgroup containing `level`, capped at the
    /// group's top.
    pub fn subgroup_top(&self, level: Level, levels_per_group: usize) -> Level {
        let group_base = ((level - 1) / levels_per_group) * levels_per_group; // level group_base+1 starts the group
        let j = self.subgroup_of(level, levels_per_group);
        (group_base + (j + 1) * self.width).min(group_base + levels_per_group)
    }
}

/// Color returned by the combined query; the variant records which
/// structure produced it, so colors from the two modes never collide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CombinedColor {
    Explicit(ColorId),
    Subgroup(SubgroupColor),
}

impl std::fmt::Display for CombinedColor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CombinedColor::Explicit(c) => write!(f, "explicit:{c}"),
            CombinedColor::Subgroup(c) => write!(f, "subgroup:{c}"),
        }
    }
}

/// Decision rule for the combined query: the subgroup structure serves
/// queries while alpha* <= lg(n) / 10, the explicit table otherwise.
pub fn subgroup_mode(n: usize, alpha_star: usize) -> bool {
    alpha_star as f64 <= (n as f64).log2() / 10.0
}

pub struct SubgroupColoring {
    n: usize,
    records: Vec<ColorRecord>,
    update_counter: u64,
    layout: SubgroupLayout,
    layout_stamp: Option<u64>,
    refreshed: Vec<Vertex>,
    scratch: Vec<bool>,
}

impl SubgroupColoring {
    /// All vertices start with color 0 of subgroup (0, 0), stamped with
    /// update count 0: a proper assignment for the edgeless start.
    pub fn new(n: usize) -> Self {
        Self {
            n,
            records: vec![
                ColorRecord {
                    color: SubgroupColor {
                        group: 0,
                        subgroup: 0,
                        index: 0,
                    },
                    stamp: 0,
                };
                n
            ],
            update_counter: 0,
            layout: SubgroupLayout {
                alpha_star: 1,
                width: 1,
            },
            layout_stamp: None,
            refreshed: Vec::new(),
            scratch: Vec::new(),
        }
    }

    /// Called once per graph update, after the hierarchy settles. Stored
    /// colors are untouched; they all become outdated.
    pub fn on_update(&mut self) {
        self.update_counter += 1;
    }

    pub fn update_count(&self) -> u64 {
        self.update_counter
    }

    pub fn stored_record(&self, v: Vertex) -> ColorRecord {
        self.records[v]
    }

    pub fn is_fresh(&self, v: Vertex) -> bool {
        self.records[v].stamp == self.update_counter
    }

    /// Layout in effect for the current query batch.
    pub fn current_layout(&self) -> SubgroupLayout {
        self.layout
    }

    /// Vertices recolored by the most recent query, in recoloring order.
    pub fn last_refreshed(&self) -> &[Vertex] {
        &self.refreshed
    }

    pub fn last_query_refresh_count(&self) -> usize {
        self.refreshed.len()
    }

    /// Color of v at the current update count, refreshing v and any
    /// outdated same-subgroup neighbors above it as needed.
    pub fn query(&mut self, h: &Hierarchy, v: Vertex) -> ColorRecord {
        // The layout is pinned per inter-update window; fresh colors are
        // only ever compared within one window.
        if self.layout_stamp != Some(self.update_counter) {
            self.layout =
                SubgroupLayout::new(self.n, h.levels_per_group(), h.arboricity_estimate());
            self.layout_stamp = Some(self.update_counter);
        }
        self.refreshed.clear();
        self.refresh(h, v);
        self.records[v]
    }

    /// Combined query: subgroup path in the low-arboricity regime, the
    /// explicit table otherwise.
    pub fn combined_query(
        &mut self,
        h: &Hierarchy,
        explicit: &ExplicitColoring,
        v: Vertex,
    ) -> CombinedColor {
        if subgroup_mode(self.n, h.arboricity_estimate()) {
            CombinedColor::Subgroup(self.query(h, v).color)
        } else {
            CombinedColor::Explicit(explicit.color_of(v))
        }
    }

    fn refresh(&mut self, h: &Hierarchy, v: Vertex) {
        if self.records[v].stamp == self.update_counter {
            return;
        }
        let lpg = h.levels_per_group();
        let level = h.level_of(v).unwrap();
        let group = h.group_of_level(level).unwrap();
        let subgroup = self.layout.subgroup_of(level, lpg);
        let top = self.layout.subgroup_top(level, lpg);

        // First refresh the outdated neighbors above v in its subgroup.
        for u in h.same_or_above_neighbors(v).unwrap() {
            let lu = h.level_of(u).unwrap();
            if lu > level && lu <= top && self.records[u].stamp != self.update_counter {
                self.refresh(h, u);
            }
        }

        // Then avoid the colors of same-subgroup neighbors above (now all
        // fresh) and of fresh same-level neighbors.
        let p = palette_size(group);
        self.scratch.clear();
        self.scratch.resize(p, false);
        for u in h.same_or_above_neighbors(v).unwrap() {
            let lu = h.level_of(u).unwrap();
            let rec = self.records[u];
            let relevant = if lu == level {
                rec.stamp == self.update_counter
            } else {
                lu > level && lu <= top
            };
            if relevant {
                debug_assert_eq!(rec.color.group, group);
                debug_assert_eq!(rec.color.subgroup, subgroup);
                self.scratch[rec.color.index] = true;
            }
        }
        let index = self
            .scratch
            .iter()
            .position(|&used| !used)
            .expect("palette larger than the degree cap");
        self.records[v] = ColorRecord {
            color: SubgroupColor {
                group,
                subgroup,
                index,
            },
            stamp: self.update_counter,
        };
        self.refreshed.push(v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_widths() {
        // n = 2^16: lg lg n = 4; alpha* = 2 gives width 4, alpha* = 4 width 2.
        assert_eq!(SubgroupLayout::new(1 << 16, 18, 2).width, 4);
        assert_eq!(SubgroupLayout::new(1 << 16, 18, 4).width, 2);
        assert_eq!(SubgroupLayout::new(1 << 16, 18, 16).width, 1);
        // alpha* = 1 is treated as 2 to keep the divisor positive.
        assert_eq!(SubgroupLayout::new(1 << 16, 18, 1).width, 4);
        // Tiny n clamps to width 1.
        assert_eq!(SubgroupLayout::new(2, 3, 1).width, 1);
        assert_eq!(SubgroupLayout::new(1, 2, 1).width, 1);
        // Width never exceeds the group length.
        assert_eq!(SubgroupLayout::new(1 << 16, 3, 1).width, 3);
    }

    #[test]
    fn subgroups_partition_each_group() {
        let lpg = 6;
        let layout = SubgroupLayout {
            alpha_star: 2,
            width: 4,
        };
        // Positions 1..=4 form subgroup 0, positions 5..=6 subgroup 1.
        assert_eq!(layout.subgroup_of(1, lpg), 0);
        assert_eq!(layout.subgroup_of(4, lpg), 0);
        assert_eq!(layout.subgroup_of(5, lpg), 1);
        assert_eq!(layout.subgroup_of(6, lpg), 1);
        assert_eq!(layout.subgroup_top(2, lpg), 4);
        assert_eq!(layout.subgroup_top(5, lpg), 6, "last block is truncated");
        // Same positions one group up.
        assert_eq!(layout.subgroup_of(7, lpg), 0);
        assert_eq!(layout.subgroup_top(7, lpg), 10);
    }

    #[test]
    fn update_counter_and_freshness() {
        let mut s = SubgroupColoring::new(4);
        assert_eq!(s.update_count(), 0);
        assert!(s.is_fresh(0), "initial records are stamped 0");
        s.on_update();
        assert_eq!(s.update_count(), 1);
        assert!(!s.is_fresh(0));
        let stored = s.stored_record(0);
        assert_eq!(stored.stamp, 0, "stored color survives, merely outdated");
        for _ in 0..99 {
            s.on_update();
        }
        assert_eq!(s.update_count(), 100);
    }

    #[test]
    fn first_query_recolors_then_caches() {
        let h = Hierarchy::new(8).unwrap();
        let mut s = SubgroupColoring::new(8);
        for _ in 0..5 {
            s.on_update();
        }
        let rec = s.query(&h, 3);
        assert_eq!(rec.stamp, 5);
        assert_eq!(rec.color.index, 0);
        assert_eq!(s.last_query_refresh_count(), 1);
        let again = s.query(&h, 3);
        assert_eq!(again, rec);
        assert_eq!(s.last_query_refresh_count(), 0, "fresh hit does no work");
    }

    #[test]
    fn same_level_neighbors_get_distinct_colors() {
        let mut h = Hierarchy::new(8).unwrap();
        let mut s = SubgroupColoring::new(8);
        h.insert_edge(0, 1).unwrap();
        s.on_update();
        let c0 = s.query(&h, 0).color;
        let c1 = s.query(&h, 1).color;
        assert_ne!(c0, c1);
        assert_eq!(c0.index, 0, "first pick is the smallest index");
        assert_eq!(c1.index, 1, "second pick avoids the fresh neighbor");
    }

    #[test]
    fn query_refreshes_higher_subgroup_neighbors_first() {
        // A six-leaf star promotes its center to level 2. With width >= 2
        // both levels share subgroup 0, so querying a leaf refreshes the
        // center first and then avoids its color.
        let mut h = Hierarchy::new(16).unwrap();
        let mut s = SubgroupColoring::new(16);
        for u in 1..=6 {
            h.insert_edge(0, u).unwrap();
            s.on_update();
        }
        assert_eq!(h.level_of(0).unwrap(), 2);
        let layout = SubgroupLayout::new(16, h.levels_per_group(), h.arboricity_estimate());
        assert!(layout.width >= 2, "levels 1 and 2 must share a subgroup");
        let rec = s.query(&h, 1);
        assert_eq!(s.last_refreshed(), &[0, 1], "center refreshed before leaf");
        let center = s.stored_record(0);
        assert!(s.is_fresh(0));
        assert_ne!(rec.color, center.color);
        assert_eq!(center.color.index, 0);
        assert_eq!(rec.color.index, 1);

        // All refreshes stayed inside vertex 1's subgroup, at levels >= 1.
        for &w in s.last_refreshed() {
            let lw = h.level_of(w).unwrap();
            assert!(lw >= 1 && lw <= layout.subgroup_top(1, h.levels_per_group()));
        }
    }

    #[test]
    fn mode_thresholds() {
        // lg(2^16) / 10 = 1.6.
        assert!(subgroup_mode(1 << 16, 1));
        assert!(!subgroup_mode(1 << 16, 2));
        // lg(2^20) / 10 = 2.0 admits alpha* = 2.
        assert!(subgroup_mode(1 << 20, 2));
        assert!(!subgroup_mode(1 << 20, 3));
        // Dense desk-scale graphs always take the explicit path.
        assert!(!subgroup_mode(64, 8));
        assert!(!subgroup_mode(1, 1));
    }

    #[test]
    fn combined_query_switches_paths() {
        let mut h = Hierarchy::new(8).unwrap();
        let explicit = ExplicitColoring::new(8, 3);
        let mut s = SubgroupColoring::new(8);
        // Edgeless: alpha* = 1 > lg(8)/10, so even the empty graph at this
        // size uses the explicit path.
        assert!(!subgroup_mode(8, h.arboricity_estimate()));
        let c = s.combined_query(&h, &explicit, 2);
        assert_eq!(c, CombinedColor::Explicit(explicit.color_of(2)));
        // A dense clique keeps it explicit.
        for u in 0..6 {
            for v in (u + 1)..6 {
                h.insert_edge(u, v).unwrap();
                s.on_update();
            }
        }
        assert!(matches!(
            s.combined_query(&h, &explicit, 0),
            CombinedColor::Explicit(_)
        ));
    }
}

//! Run statistics and their structured-text rendering.

use std::fmt;

/// Counters collected over one stream run. Rendered as a fixed key/value
/// document so two identical runs produce byte-identical output.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RunStats {
    pub updates: u64,
    pub queries: u64,
    pub max_outdegree: usize,
    pub active_forests: usize,
    pub level_moves: u64,
    pub orientation_flips: u64,
    pub distinct_colors_explicit: u64,
    pub distinct_colors_implicit_parity: u64,
    pub distinct_colors_implicit_subgroup: u64,
    pub refresh_total: u64,
    pub refresh_max_per_query: u64,
    pub verification: Verification,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Verification {
    /// Verification was not requested.
    #[default]
    Off,
    /// Every requested audit came back clean.
    Pass,
}

impl fmt::Display for Verification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verification::Off => write!(f, "off"),
            Verification::Pass => write!(f, "pass"),
        }
    }
}

impl RunStats {
    pub fn render(&self) -> String {
        format!(
            "updates: {}\n\
             queries: {}\n\
             max_outdegree: {}\n\
             active_forests: {}\n\
             level_moves: {}\n\
             orientation_flips: {}\n\
             distinct_colors:\n\
             \x20 explicit: {}\n\
             \x20 implicit_parity: {}\n\
             \x20 implicit_subgroup: {}\n\
             refresh_counts:\n\
             \x20 total: {}\n\
             \x20 max_per_query: {}\n\
             verification: {}\n",
            self.updates,
            self.queries,
            self.max_outdegree,
            self.active_forests,
            self.level_moves,
            self.orientation_flips,
            self.distinct_colors_explicit,
            self.distinct_colors_implicit_parity,
            self.distinct_colors_implicit_subgroup,
            self.refresh_total,
            self.refresh_max_per_query,
            self.verification,
        )
    }
}

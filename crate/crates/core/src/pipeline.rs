//! End-to-end wiring of one update: the hierarchy settles (recoloring
//! moved vertices through the explicit coloring), its orientation events
//! drive the forest decomposition, the resulting forest events drive the
//! parity forests, and the lazy coloring's update counter advances. Only
//! then are queries admitted.

use thiserror::Error;

use crate::arb_decomp::{DecompError, ForestAssignment};
use crate::explicit_coloring::{ColorId, ExplicitColoring};
use crate::implicit_parity::{ParityColoring, ParityError, ParityVector};
use crate::implicit_subgroup::{ColorRecord, CombinedColor, SubgroupColoring};
use crate::level_structure::{Hierarchy, HierarchyError, OrientationEvent, Vertex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PipelineError {
    #[error(transparent)]
    Hierarchy(#[from] HierarchyError),
    /// The decomposition refused an event stream the hierarchy emitted;
    /// this is an internal bug, surfaced rather than swallowed.
    #[error("decomposition rejected an event: {0}")]
    Decomp(#[from] DecompError),
    #[error("parity forests rejected an event: {0}")]
    Parity(#[from] ParityError),
}

pub struct Pipeline {
    pub hierarchy: Hierarchy,
    pub decomp: ForestAssignment,
    pub parity: ParityColoring,
    pub explicit: ExplicitColoring,
    pub subgroup: SubgroupColoring,
    orientation_flips: u64,
    forest_events: u64,
    max_outdegree_observed: usize,
}

impl Pipeline {
    pub fn new(n: usize, seed: u64) -> Result<Self, PipelineError> {
        let hierarchy = Hierarchy::new(n)?;
        Ok(Self {
            hierarchy,
            decomp: ForestAssignment::new(n),
            parity: ParityColoring::new(n),
            explicit: ExplicitColoring::new(n, seed),
            subgroup: SubgroupColoring::new(n),
            orientation_flips: 0,
            forest_events: 0,
            max_outdegree_observed: 0,
        })
    }

    pub fn n(&self) -> usize {
        self.hierarchy.n()
    }

    pub fn insert_edge(&mut self, u: Vertex, v: Vertex) -> Result<(), PipelineError> {
        let events = self
            .hierarchy
            .insert_edge_observed(u, v, &mut self.explicit)?;
        self.apply_orientation_events(&events)?;
        self.explicit.on_edge_inserted(&self.hierarchy, u, v);
        self.finish_update();
        Ok(())
    }

    pub fn delete_edge(&mut self, u: Vertex, v: Vertex) -> Result<(), PipelineError> {
        let events = self
            .hierarchy
            .delete_edge_observed(u, v, &mut self.explicit)?;
        self.apply_orientation_events(&events)?;
        self.finish_update();
        Ok(())
    }

    fn apply_orientation_events(&mut self, events: &[OrientationEvent]) -> Result<(), PipelineError> {
        for ev in events {
            if matches!(ev, OrientationEvent::Flipped { .. }) {
                self.orientation_flips += 1;
            }
            for fe in self.decomp.apply(ev)? {
                self.forest_events += 1;
                self.parity.on_forest_event(&fe)?;
            }
        }
        Ok(())
    }

    fn finish_update(&mut self) {
        self.subgroup.on_update();
        self.max_outdegree_observed = self
            .max_outdegree_observed
            .max(self.hierarchy.max_outdegree());
    }

    pub fn query_explicit(&self, u: Vertex) -> ColorId {
        self.explicit.color_of(u)
    }

    pub fn query_parity(&mut self, u: Vertex) -> ParityVector {
        let active = self.decomp.active_forest_count();
        self.parity.query(u, active)
    }

    pub fn query_subgroup(&mut self, u: Vertex) -> ColorRecord {
        self.subgroup.query(&self.hierarchy, u)
    }

    pub fn query_auto(&mut self, u: Vertex) -> CombinedColor {
        self.subgroup
            .combined_query(&self.hierarchy, &self.explicit, u)
    }

    /// Flips performed across all updates so far.
    pub fn orientation_flips(&self) -> u64 {
        self.orientation_flips
    }

    /// Forest insertions plus deletions across all updates so far.
    pub fn forest_events(&self) -> u64 {
        self.forest_events
    }

    pub fn max_outdegree_observed(&self) -> usize {
        self.max_outdegree_observed
    }
}

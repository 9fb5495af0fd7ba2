//! Stream driver: applies commands to the pipeline in order, answers
//! queries with the configured algorithm, runs oracle audits when asked,
//! and reports run statistics.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::oracles::{
    audit_decomp, audit_levels, exact_arboricity, is_proper, SnapshotGraph,
    EXACT_ARBORICITY_LIMIT,
};
use crate::pipeline::{Pipeline, PipelineError};
use crate::stats::{RunStats, Verification};
use crate::stream::{Stream, StreamCommand};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Explicit,
    ImplicitParity,
    ImplicitSubgroup,
    Auto,
}

impl Algorithm {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "explicit" => Some(Algorithm::Explicit),
            "implicit-parity" => Some(Algorithm::ImplicitParity),
            "implicit-subgroup" => Some(Algorithm::ImplicitSubgroup),
            "auto" => Some(Algorithm::Auto),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub n_override: Option<usize>,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub verify: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n_override: None,
            seed: 0,
            algorithm: Algorithm::Auto,
            verify: false,
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("line {line}: {source}")]
    Update {
        line: usize,
        #[source]
        source: PipelineError,
    },
    #[error("line {line}: vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("audit after line {line} found {} violation(s):\n{}", violations.len(), violations.join("\n"))]
    AuditFailed { line: usize, violations: Vec<String> },
    #[error(transparent)]
    Setup(#[from] PipelineError),
}

/// Outcome of a run: statistics plus the query output document (one line
/// per query: `<vertex> <color>`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutcome {
    pub stats: RunStats,
    pub query_output: String,
}

pub fn run(stream: &Stream, config: &RunConfig) -> Result<RunOutcome, RunError> {
    let n = config.n_override.unwrap_or(stream.n);
    let mut pipeline = Pipeline::new(n, config.seed)?;
    let mut stats = RunStats::default();
    let mut output = String::new();
    let mut parity_colors: HashSet<String> = HashSet::new();
    let mut subgroup_colors: HashSet<String> = HashSet::new();
    let small = n <= EXACT_ARBORICITY_LIMIT;

    for &(line, command) in &stream.commands {
        if let Some(v) = command_vertices(&command).iter().find(|&&v| v >= n) {
            return Err(RunError::VertexOutOfRange { line, vertex: *v, n });
        }
        match command {
            StreamCommand::Insert(u, v) => {
                pipeline
                    .insert_edge(u, v)
                    .map_err(|source| RunError::Update { line, source })?;
                stats.updates += 1;
                if config.verify && small {
                    audit(&mut pipeline, line)?;
                }
            }
            StreamCommand::Delete(u, v) => {
                pipeline
                    .delete_edge(u, v)
                    .map_err(|source| RunError::Update { line, source })?;
                stats.updates += 1;
                if config.verify && small {
                    audit(&mut pipeline, line)?;
                }
            }
            StreamCommand::Query(u) => {
                stats.queries += 1;
                let rendered = match config.algorithm {
                    Algorithm::Explicit => pipeline.query_explicit(u).to_string(),
                    Algorithm::ImplicitParity => {
                        let c = pipeline.query_parity(u).to_string();
                        parity_colors.insert(c.clone());
                        c
                    }
                    Algorithm::ImplicitSubgroup => {
                        let c = pipeline.query_subgroup(u).color.to_string();
                        let refreshed = pipeline.subgroup.last_query_refresh_count() as u64;
                        stats.refresh_total += refreshed;
                        stats.refresh_max_per_query = stats.refresh_max_per_query.max(refreshed);
                        subgroup_colors.insert(c.clone());
                        c
                    }
                    Algorithm::Auto => {
                        let c = pipeline.query_auto(u).to_string();
                        let refreshed = pipeline.subgroup.last_query_refresh_count() as u64;
                        stats.refresh_total += refreshed;
                        stats.refresh_max_per_query = stats.refresh_max_per_query.max(refreshed);
                        subgroup_colors.insert(c.clone());
                        c
                    }
                };
                writeln!(output, "{u} {rendered}").expect("string write");
            }
            StreamCommand::Checkpoint => {
                if config.verify {
                    audit(&mut pipeline, line)?;
                }
            }
        }
    }

    stats.max_outdegree = pipeline.max_outdegree_observed();
    stats.active_forests = pipeline.decomp.active_forest_count();
    stats.level_moves = pipeline.hierarchy.level_moves();
    stats.orientation_flips = pipeline.orientation_flips();
    stats.distinct_colors_explicit = pipeline.explicit.distinct_colors_ever() as u64;
    stats.distinct_colors_implicit_parity = parity_colors.len() as u64;
    stats.distinct_colors_implicit_subgroup = subgroup_colors.len() as u64;
    stats.verification = if config.verify {
        Verification::Pass
    } else {
        Verification::Off
    };
    Ok(RunOutcome {
        stats,
        query_output: output,
    })
}

fn command_vertices(command: &StreamCommand) -> Vec<usize> {
    match *command {
        StreamCommand::Insert(u, v) | StreamCommand::Delete(u, v) => vec![u, v],
        StreamCommand::Query(u) => vec![u],
        StreamCommand::Checkpoint => vec![],
    }
}

/// Oracle audits against the live pipeline. Structural audits always run;
/// exact-arboricity checks and full implicit-coloring sweeps only run at
/// oracle scale.
fn audit(pipeline: &mut Pipeline, line: usize) -> Result<(), RunError> {
    let n = pipeline.n();
    let mut violations: Vec<String> = Vec::new();

    for v in audit_levels(&pipeline.hierarchy) {
        violations.push(v.to_string());
    }
    let oriented = pipeline.hierarchy.oriented_edges();
    for v in audit_decomp(&pipeline.decomp, n, &oriented) {
        violations.push(v.to_string());
    }
    let g = SnapshotGraph::new(n, pipeline.hierarchy.edges()).expect("live graph is simple");
    if !is_proper(&g, |v| Some(pipeline.explicit.color_of(v))).expect("total coloring") {
        violations.push("explicit coloring not proper".into());
    }

    if n <= EXACT_ARBORICITY_LIMIT {
        let alpha = exact_arboricity(&g).expect("small graph");
        let outdeg = pipeline.hierarchy.max_outdegree();
        if alpha > 0 && outdeg > 40 * alpha {
            violations.push(format!("max outdegree {outdeg} exceeds 40 * alpha = {}", 40 * alpha));
        }
        let est = pipeline.hierarchy.arboricity_estimate();
        if alpha > 0 && (est < alpha || est > 80 * alpha) {
            violations.push(format!("arboricity estimate {est} outside [{alpha}, {}]", 80 * alpha));
        }
        if alpha > 0 {
            let cutoff = (4 * alpha).next_power_of_two().trailing_zeros() as usize;
            for v in 0..n {
                let level = pipeline.hierarchy.level_of(v).unwrap();
                let group = pipeline.hierarchy.group_of_level(level).unwrap();
                if group > cutoff {
                    violations.push(format!(
                        "vertex {v} sits in group {group} above the alpha cutoff {cutoff}"
                    ));
                }
            }
        }
        // Full implicit sweeps are affordable at oracle scale.
        let parity: Vec<_> = (0..n).map(|v| pipeline.query_parity(v)).collect();
        if !is_proper(&g, |v| Some(parity[v].clone())).expect("total coloring") {
            violations.push("implicit parity coloring not proper".into());
        }
        let subgroup: Vec<_> = (0..n).map(|v| pipeline.query_subgroup(v).color).collect();
        if !is_proper(&g, |v| Some(subgroup[v])).expect("total coloring") {
            violations.push("implicit subgroup coloring not proper".into());
        }
    }

    if violations.is_empty() {
        Ok(())
    } else {
        violations.sort();
        Err(RunError::AuditFailed { line, violations })
    }
}

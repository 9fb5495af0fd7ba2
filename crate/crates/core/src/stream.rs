//! Update/query stream format and reproducible stream generators.
//!
//! Grammar, one command per line:
//!   n <count>      header, first non-comment line
//!   + u v          insert edge
//!   - u v          delete edge
//!   ? u            query the color of u
//!   !              checkpoint (verification hook)
//!   # ...          comment
//! The command character may be glued to its first argument ("+0 1").

use std::collections::HashMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StreamParseError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("missing `n <count>` header")]
    MissingHeader,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamCommand {
    Insert(usize, usize),
    Delete(usize, usize),
    Query(usize),
    Checkpoint,
}

/// A parsed stream: vertex count plus commands with their 1-based source
/// line numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stream {
    pub n: usize,
    pub commands: Vec<(usize, StreamCommand)>,
}

impl Stream {
    pub fn update_count(&self) -> usize {
        self.commands
            .iter()
            .filter(|(_, c)| matches!(c, StreamCommand::Insert(..) | StreamCommand::Delete(..)))
            .count()
    }
}

pub fn parse_stream(text: &str) -> Result<Stream, StreamParseError> {
    let mut n: Option<usize> = None;
    let mut commands = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let err = |msg: String| StreamParseError::Parse { line, msg };
        if n.is_none() {
            let rest = trimmed
                .strip_prefix('n')
                .ok_or_else(|| err(format!("expected `n <count>` header, found {trimmed:?}")))?;
            let count: usize = rest
                .trim()
                .parse()
                .map_err(|e| err(format!("bad vertex count: {e}")))?;
            if count == 0 {
                return Err(err("vertex count must be positive".into()));
            }
            n = Some(count);
            continue;
        }
        let n = n.unwrap();
        let (cmd, rest) = trimmed.split_at(1);
        let args: Vec<usize> = rest
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|e| err(format!("bad vertex id {tok:?}: {e}")))
            })
            .collect::<Result<_, _>>()?;
        for &v in &args {
            if v >= n {
                return Err(err(format!("vertex {v} out of range (n = {n})")));
            }
        }
        let command = match (cmd, args.len()) {
            ("+", 2) => StreamCommand::Insert(args[0], args[1]),
            ("-", 2) => StreamCommand::Delete(args[0], args[1]),
            ("?", 1) => StreamCommand::Query(args[0]),
            ("!", 0) => StreamCommand::Checkpoint,
            ("+", k) | ("-", k) => {
                return Err(err(format!("expected 2 vertex ids, found {k}")));
            }
            ("?", k) => return Err(err(format!("expected 1 vertex id, found {k}"))),
            ("!", _) => return Err(err("checkpoint takes no arguments".into())),
            (other, _) => return Err(err(format!("unknown command {other:?}"))),
        };
        commands.push((line, command));
    }
    match n {
        Some(n) => Ok(Stream { n, commands }),
        None => Err(StreamParseError::MissingHeader),
    }
}

pub fn render_stream(stream: &Stream) -> String {
    let mut out = format!("n {}\n", stream.n);
    for (_, command) in &stream.commands {
        match command {
            StreamCommand::Insert(u, v) => out.push_str(&format!("+ {u} {v}\n")),
            StreamCommand::Delete(u, v) => out.push_str(&format!("- {u} {v}\n")),
            StreamCommand::Query(u) => out.push_str(&format!("? {u}\n")),
            StreamCommand::Checkpoint => out.push_str("!\n"),
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    /// Unbiased insert/delete random walk over all vertex pairs.
    Random,
    /// Insert m random distinct edges, then delete back down to a spanning
    /// forest of whatever was built.
    DensifyThenThin,
    /// Toggle edges of a fixed random tree template, so the graph is a
    /// forest after every update.
    ForestOnly,
}

impl GenKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "random" => Some(GenKind::Random),
            "densify-then-thin" => Some(GenKind::DensifyThenThin),
            "forest-only" => Some(GenKind::ForestOnly),
            _ => None,
        }
    }
}

/// Tracks present edges with O(1) sampling and membership.
struct EdgePool {
    list: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
}

impl EdgePool {
    fn new() -> Self {
        Self {
            list: Vec::new(),
            index: HashMap::new(),
        }
    }

    fn len(&self) -> usize {
        self.list.len()
    }

    fn contains(&self, e: (usize, usize)) -> bool {
        self.index.contains_key(&e)
    }

    fn insert(&mut self, e: (usize, usize)) {
        self.index.insert(e, self.list.len());
        self.list.push(e);
    }

    fn remove_at(&mut self, i: usize) -> (usize, usize) {
        let e = self.list.swap_remove(i);
        self.index.remove(&e);
        if i < self.list.len() {
            self.index.insert(self.list[i], i);
        }
        e
    }
}

/// Deterministic stream generation: same (kind, n, m, seed) always yields
/// the same stream. `m` counts update commands for `Random` and
/// `ForestOnly`; for `DensifyThenThin` it caps the insert phase.
pub fn generate(kind: GenKind, n: usize, m: usize, seed: u64) -> Stream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut commands = Vec::new();
    match kind {
        GenKind::Random => {
            let mut present = EdgePool::new();
            let total_pairs = n * (n - 1) / 2;
            for _ in 0..m {
                let can_insert = present.len() < total_pairs;
                let can_delete = present.len() > 0;
                let insert = if !can_delete {
                    true
                } else if !can_insert {
                    false
                } else {
                    rng.random_bool(0.5)
                };
                if insert {
                    let mut placed = false;
                    for _ in 0..64 {
                        let u = rng.random_range(0..n);
                        let v = rng.random_range(0..n);
                        if u == v {
                            continue;
                        }
                        let e = (u.min(v), u.max(v));
                        if !present.contains(e) {
                            present.insert(e);
                            commands.push(StreamCommand::Insert(e.0, e.1));
                            placed = true;
                            break;
                        }
                    }
                    if !placed {
                        // Dense region: fall back to a delete.
                        let i = rng.random_range(0..present.len());
                        let e = present.remove_at(i);
                        commands.push(StreamCommand::Delete(e.0, e.1));
                    }
                } else {
                    let i = rng.random_range(0..present.len());
                    let e = present.remove_at(i);
                    commands.push(StreamCommand::Delete(e.0, e.1));
                }
            }
        }
        GenKind::DensifyThenThin => {
            let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
            for u in 0..n {
                for v in (u + 1)..n {
                    pairs.push((u, v));
                }
            }
            // Fisher-Yates, then take the insert phase prefix.
            for i in (1..pairs.len()).rev() {
                let j = rng.random_range(0..=i);
                pairs.swap(i, j);
            }
            let inserted: Vec<_> = pairs.into_iter().take(m).collect();
            for &(u, v) in &inserted {
                commands.push(StreamCommand::Insert(u, v));
            }
            // Keep a spanning forest of the built graph, delete the rest.
            let mut parent: Vec<usize> = (0..n).collect();
            fn find(parent: &mut [usize], mut x: usize) -> usize {
                while parent[x] != x {
                    parent[x] = parent[parent[x]];
                    x = parent[x];
                }
                x
            }
            let mut extra = Vec::new();
            for &(u, v) in &inserted {
                let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                if ru == rv {
                    extra.push((u, v));
                } else {
                    parent[ru] = rv;
                }
            }
            for i in (1..extra.len()).rev() {
                let j = rng.random_range(0..=i);
                extra.swap(i, j);
            }
            for (u, v) in extra {
                commands.push(StreamCommand::Delete(u, v));
            }
        }
        GenKind::ForestOnly => {
            // Template tree: vertex v > 0 attaches to a vertex in the
            // preceding window of eight. Any subset of its edges is a forest.
            let template: Vec<(usize, usize)> = (1..n)
                .map(|v| {
                    let span = v.min(8);
                    let p = v - rng.random_range(1..=span);
                    (p.min(v), p.max(v))
                })
                .collect();
            let mut absent: Vec<usize> = (0..template.len()).collect();
            let mut present: Vec<usize> = Vec::new();
            for _ in 0..m {
                let can_insert = !absent.is_empty();
                let can_delete = !present.is_empty();
                if !can_insert && !can_delete {
                    break;
                }
                let insert = if !can_delete {
                    true
                } else if !can_insert {
                    false
                } else {
                    rng.random_bool(0.5)
                };
                if insert {
                    let i = rng.random_range(0..absent.len());
                    let t = absent.swap_remove(i);
                    present.push(t);
                    let (u, v) = template[t];
                    commands.push(StreamCommand::Insert(u, v));
                } else {
                    let i = rng.random_range(0..present.len());
                    let t = present.swap_remove(i);
                    absent.push(t);
                    let (u, v) = template[t];
                    commands.push(StreamCommand::Delete(u, v));
                }
            }
        }
    }
    let commands = commands
        .into_iter()
        .enumerate()
        .map(|(i, c)| (i + 2, c)) // line 1 is the header
        .collect();
    Stream { n, commands }
}

//! Command-line driver: runs update/query streams through the coloring
//! pipeline, or generates reproducible streams.
//!
//! Exit codes: 0 on success, 1 on runtime or audit failure, 2 on bad
//! arguments or parse errors.

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::Parser;

use dyncolor::runner::{run, Algorithm, RunConfig};
use dyncolor::stream::{generate, parse_stream, render_stream, GenKind};

#[derive(Parser, Debug)]
#[command(name = "dyncolor", about = "Fully dynamic graph coloring over update streams")]
struct Args {
    /// Stream file to run, or `-` for standard input.
    #[arg(long, conflicts_with = "generate")]
    input: Option<String>,

    /// Generate a stream instead of running one:
    /// random | densify-then-thin | forest-only.
    #[arg(long, value_name = "KIND")]
    generate: Option<String>,

    /// Vertex count: overrides the stream header, required with --generate.
    #[arg(long)]
    n: Option<usize>,

    /// Update count for --generate.
    #[arg(long, default_value_t = 1000)]
    m: usize,

    /// Seed for the coloring's random choices, or for generation.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Query algorithm: explicit | implicit-parity | implicit-subgroup | auto.
    #[arg(long, default_value = "auto")]
    algorithm: String,

    /// Run oracle audits at checkpoints (and after every update when the
    /// graph is small enough for exact arboricity).
    #[arg(long)]
    verify: bool,

    /// Write run statistics to this path instead of standard output.
    #[arg(long, value_name = "PATH")]
    stats_out: Option<String>,
}

fn main() -> ExitCode {
    let args = Args::parse();

    if let Some(kind_name) = &args.generate {
        let Some(kind) = GenKind::parse(kind_name) else {
            eprintln!("unknown generator kind {kind_name:?}");
            return ExitCode::from(2);
        };
        let Some(n) = args.n else {
            eprintln!("--generate requires --n");
            return ExitCode::from(2);
        };
        if n == 0 {
            eprintln!("--n must be positive");
            return ExitCode::from(2);
        }
        let stream = generate(kind, n, args.m, args.seed);
        print!("{}", render_stream(&stream));
        return ExitCode::SUCCESS;
    }

    let Some(input) = &args.input else {
        eprintln!("either --input or --generate is required");
        return ExitCode::from(2);
    };
    let text = if input == "-" {
        let mut buf = String::new();
        if let Err(e) = std::io::stdin().read_to_string(&mut buf) {
            eprintln!("reading standard input: {e}");
            return ExitCode::FAILURE;
        }
        buf
    } else {
        match fs::read_to_string(input) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("reading {input}: {e}");
                return ExitCode::FAILURE;
            }
        }
    };

    let stream = match parse_stream(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("parse error: {e}");
            return ExitCode::from(2);
        }
    };
    let Some(algorithm) = Algorithm::parse(&args.algorithm) else {
        eprintln!("unknown algorithm {:?}", args.algorithm);
        return ExitCode::from(2);
    };
    let config = RunConfig {
        n_override: args.n,
        seed: args.seed,
        algorithm,
        verify: args.verify,
    };

    match run(&stream, &config) {
        Ok(outcome) => {
            print!("{}", outcome.query_output);
            let stats = outcome.stats.render();
            match &args.stats_out {
                Some(path) => {
                    if let Err(e) = fs::write(path, stats) {
                        eprintln!("writing {path}: {e}");
                        return ExitCode::FAILURE;
                    }
                }
                None => print!("{stats}"),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::FAILURE
        }
    }
}

//! `windkg` — build, validate, query and explore the turbine knowledge
//! graph, train the desk-scale anomaly classifier and assemble explainable
//! maintenance reports.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage error. Diagnostics go to
//! stderr; data goes to stdout or the requested output files.

mod commands;
mod config;
mod render;
mod repl;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "windkg", version, about)]
struct Cli {
    /// Print extra progress information to stderr.
    #[arg(long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a knowledge graph from a manifest and save it as a graph document.
    Build {
        /// Manifest file; defaults to the bundled turbine catalogue.
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// Output graph document path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the structural validation rules over a graph document.
    Validate {
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Exit 1 on rule errors; warnings alone keep exit 0.
        #[arg(long)]
        quiet: bool,
    },
    /// Parse and execute a query, printing the result table.
    Query {
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Query text, e.g. "MATCH (n:Feature) RETURN n.name".
        query: String,
        /// Query parameters as name=value (strings may be quoted).
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
    },
    /// Interactive shell: raw queries plus phrase search with suggestions.
    Repl {
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Phrase registry; defaults to the bundled registry.
        #[arg(long)]
        phrases: Option<PathBuf>,
    },
    /// PageRank influence scores, optionally filtered by labels.
    Pagerank {
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, default_value_t = 0.85)]
        damping: f64,
        #[arg(long, default_value_t = 20)]
        iterations: usize,
        /// Early-stop tolerance; 0 runs exactly the configured iterations.
        #[arg(long, default_value_t = 0.0)]
        tolerance: f64,
        /// Comma-separated label filter, e.g. "Gearbox,Generator".
        #[arg(long)]
        labels: Option<String>,
        /// Plot-ready CSV output (label,score).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List registered search phrases or run one against the graph.
    #[command(subcommand)]
    Phrases(PhrasesCommand),
    /// Train the anomaly classifier on a dataset file.
    Train {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Training seed; defaults to the config seed, then 0.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Generate the planted-signature synthetic SCADA dataset.
    SynthesizeData {
        #[arg(long)]
        out: PathBuf,
        /// Generator seed; defaults to the config seed, then 2023.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
    },
    /// Predict the class of one dataset row.
    Predict {
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        row: usize,
    },
    /// Full pipeline: predict, attribute, and assemble a maintenance report.
    Report {
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long)]
        row: Option<usize>,
        /// Pre-computed prediction-input file instead of model+data+row.
        #[arg(long, conflicts_with_all = ["model", "data", "row"])]
        prediction: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        top_k: usize,
        /// Number of dataset rows used as the Shapley background.
        #[arg(long, default_value_t = 100)]
        background: usize,
        /// Report output path; sibling .txt, .force.json and .pie.json files
        /// are written next to it.
        #[arg(long)]
        out: PathBuf,
    },
    /// Export a graph in an interoperable format.
    Export {
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, value_parser = ["create-script"])]
        format: String,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum PhrasesCommand {
    /// List phrase templates and descriptions.
    List {
        #[arg(long)]
        phrases: Option<PathBuf>,
    },
    /// Resolve a phrase and print the query result.
    Run {
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        phrases: Option<PathBuf>,
        /// The phrase text, e.g. "Preventive actions for blades".
        text: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = config::Config::from_env();
    let outcome = match cli.command {
        Command::Build { manifest, out } => {
            commands::build(&config, manifest, &config.out_path(out))
        }
        Command::Validate { graph, quiet } => commands::validate(&config, graph, quiet),
        Command::Query { graph, query, params } => {
            commands::query(&config, graph, &query, &params)
        }
        Command::Repl { graph, phrases } => repl::run(&config, graph, phrases),
        Command::Pagerank { graph, damping, iterations, tolerance, labels, out } => {
            let out = out.map(|p| config.out_path(p));
            commands::pagerank(&config, graph, damping, iterations, tolerance, labels, out)
        }
        Command::Phrases(PhrasesCommand::List { phrases }) => {
            commands::phrases_list(&config, phrases)
        }
        Command::Phrases(PhrasesCommand::Run { graph, phrases, text }) => {
            commands::phrases_run(&config, graph, phrases, &text)
        }
        Command::Train { data, out, seed } => {
            commands::train(&data, &config.out_path(out), config.seed_or(seed, 0))
        }
        Command::SynthesizeData { out, seed, samples } => {
            commands::synthesize_data(&config.out_path(out), config.seed_or(seed, 2023), samples)
        }
        Command::Predict { model, data, row } => commands::predict(&config, model, &data, row),
        Command::Report { graph, model, data, row, prediction, top_k, background, out } => {
            commands::report(
                &config,
                graph,
                model,
                data,
                row,
                prediction,
                top_k,
                background,
                &config.out_path(out),
            )
        }
        Command::Export { graph, format, out } => {
            commands::export(&config, graph, &format, &config.out_path(out))
        }
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

//! Subcommand implementations. Each returns the process exit code; domain
//! failures bubble up as errors and exit 1 from main.

use crate::config::{read_file, write_file, Config};
use crate::render::render_table;
use anyhow::{anyhow, bail, Context, Result};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use windkg_core::analytics::{pagerank as run_pagerank, rank_by_label, PageRankConfig};
use windkg_core::graph::{PropertyGraph, PropertyValue};
use windkg_core::ontology::{build_ontology, bundled::bundled_manifest, validate_ontology, OntologyManifest};
use windkg_core::phrases::{bundled_registry, resolve_and_run, PhraseRegistry};
use windkg_core::query::{self, ParamMap};
use windkg_core::io as graph_io;
use windkg_core::report::{generate_report, render_text, PredictionInput};
use windkg_core::xai::{self, Dataset, TrainConfig};

pub fn load_graph(config: &Config, flag: Option<PathBuf>) -> Result<PropertyGraph> {
    let path = Config::resolve(flag, &config.graph, "graph")?;
    let text = read_file(&path, "graph document")?;
    graph_io::load_graph(&text).with_context(|| format!("loading graph {}", path.display()))
}

pub fn load_registry(config: &Config, flag: Option<PathBuf>) -> Result<PhraseRegistry> {
    match flag.or_else(|| config.phrases.clone()) {
        Some(path) => {
            let text = read_file(&path, "phrase registry")?;
            PhraseRegistry::from_json(&text)
                .with_context(|| format!("loading phrase registry {}", path.display()))
        }
        None => Ok(bundled_registry()),
    }
}

fn load_model(config: &Config, flag: Option<PathBuf>) -> Result<xai::TreeEnsemble> {
    let path = Config::resolve(flag, &config.model, "model")?;
    let text = read_file(&path, "model")?;
    xai::TreeEnsemble::from_json(&text)
        .with_context(|| format!("loading model {}", path.display()))
}

fn load_dataset(path: &Path) -> Result<Dataset> {
    let text = read_file(path, "dataset")?;
    Dataset::from_csv(&text).with_context(|| format!("loading dataset {}", path.display()))
}

pub fn build(_config: &Config, manifest: Option<PathBuf>, out: &Path) -> Result<ExitCode> {
    let manifest = match manifest {
        Some(path) => {
            let text = read_file(&path, "manifest")?;
            OntologyManifest::from_json(&text)
                .with_context(|| format!("parsing manifest {}", path.display()))?
        }
        None => bundled_manifest(),
    };
    let graph = build_ontology(&manifest).context("building the knowledge graph")?;
    write_file(out, &graph_io::save_graph_named(&graph, &manifest.name), "graph document")?;
    eprintln!(
        "wrote {} nodes / {} relationships to {}",
        graph.node_count(),
        graph.relationship_count(),
        out.display()
    );
    Ok(ExitCode::SUCCESS)
}

pub fn validate(config: &Config, graph: Option<PathBuf>, quiet: bool) -> Result<ExitCode> {
    let graph = load_graph(config, graph)?;
    let report = validate_ontology(&graph);
    if !quiet {
        for violation in &report.violations {
            let severity = match violation.severity {
                windkg_core::ontology::Severity::Error => "error",
                windkg_core::ontology::Severity::Warning => "warning",
            };
            println!("{severity} {}: {} (nodes {:?})", violation.rule, violation.message, violation.nodes);
        }
    }
    let errors = report.errors().count();
    let warnings = report.warnings().count();
    println!("{errors} error(s), {warnings} warning(s)");
    if report.has_errors() {
        Ok(ExitCode::from(1))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

/// `name=value` pairs; values parse like query literals, anything else is
/// taken as raw text.
fn parse_params(pairs: &[String]) -> Result<ParamMap> {
    let mut params = ParamMap::new();
    for pair in pairs {
        let (name, raw) = pair
            .split_once('=')
            .ok_or_else(|| anyhow!("--param expects name=value, got `{pair}`"))?;
        let value = if (raw.starts_with('"') && raw.ends_with('"') && raw.len() >= 2)
            || (raw.starts_with('\'') && raw.ends_with('\'') && raw.len() >= 2)
        {
            PropertyValue::Text(raw[1..raw.len() - 1].to_string())
        } else if raw.eq_ignore_ascii_case("true") {
            PropertyValue::Boolean(true)
        } else if raw.eq_ignore_ascii_case("false") {
            PropertyValue::Boolean(false)
        } else if let Ok(i) = raw.parse::<i64>() {
            PropertyValue::Integer(i)
        } else if let Ok(f) = raw.parse::<f64>() {
            PropertyValue::Real(f)
        } else {
            PropertyValue::Text(raw.to_string())
        };
        params.insert(name.to_string(), value);
    }
    Ok(params)
}

pub fn query(
    config: &Config,
    graph: Option<PathBuf>,
    text: &str,
    raw_params: &[String],
) -> Result<ExitCode> {
    let graph = load_graph(config, graph)?;
    let params = parse_params(raw_params)?;
    let ast = query::parse(text)?;
    let table = query::execute(&graph, &ast, &params)?;
    print!("{}", render_table(&table));
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
pub fn pagerank(
    config: &Config,
    graph: Option<PathBuf>,
    damping: f64,
    iterations: usize,
    tolerance: f64,
    labels: Option<String>,
    out: Option<PathBuf>,
) -> Result<ExitCode> {
    let graph = load_graph(config, graph)?;
    let scores = run_pagerank(
        &graph,
        &PageRankConfig {
            damping,
            max_iterations: iterations,
            tolerance,
            ..PageRankConfig::default()
        },
    )?;
    eprintln!(
        "{} iteration(s), converged: {}",
        scores.iterations_run, scores.converged
    );
    let ranked = match labels {
        Some(list) => {
            let wanted: Vec<String> = list.split(',').map(|s| s.trim().to_string()).collect();
            rank_by_label(&scores, &graph, &wanted)
        }
        None => {
            let all: Vec<String> = graph
                .nodes()
                .map(|n| n.labels[0].clone())
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect();
            rank_by_label(&scores, &graph, &all)
        }
    };
    let mut plot = String::from("label,score\n");
    for row in &ranked {
        println!("{}\t{:.6}", row.label, row.score);
        plot.push_str(&format!("{},{}\n", row.label, row.score));
    }
    if let Some(path) = out {
        write_file(&path, &plot, "pagerank plot data")?;
        eprintln!("wrote plot data to {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

pub fn phrases_list(config: &Config, phrases: Option<PathBuf>) -> Result<ExitCode> {
    let registry = load_registry(config, phrases)?;
    for phrase in registry.phrases() {
        println!("{} — {}", phrase.template, phrase.description);
    }
    Ok(ExitCode::SUCCESS)
}

pub fn phrases_run(
    config: &Config,
    graph: Option<PathBuf>,
    phrases: Option<PathBuf>,
    text: &str,
) -> Result<ExitCode> {
    let graph = load_graph(config, graph)?;
    let registry = load_registry(config, phrases)?;
    let table = resolve_and_run(&registry, &graph, text)?;
    print!("{}", render_table(&table));
    Ok(ExitCode::SUCCESS)
}

pub fn train(data: &Path, out: &Path, seed: u64) -> Result<ExitCode> {
    let dataset = load_dataset(data)?;
    let output = xai::train(&dataset, &TrainConfig { rng_seed: seed, ..TrainConfig::default() })?;
    if output.degenerate {
        eprintln!("warning: single-class dataset, trained a constant model");
    }
    write_file(out, &output.ensemble.to_json(), "model")?;
    println!("rounds {}", output.rounds_used);
    println!("accuracy {:.4}", output.metrics.accuracy);
    println!("macro_f1 {:.4}", output.metrics.macro_f1);
    println!("holdout {}", output.metrics.holdout_size);
    eprintln!("wrote model to {}", out.display());
    Ok(ExitCode::SUCCESS)
}

pub fn synthesize_data(out: &Path, seed: u64, samples: usize) -> Result<ExitCode> {
    let dataset = xai::synth::synthesize(samples, seed);
    write_file(out, &dataset.to_csv(), "dataset")?;
    eprintln!(
        "wrote {} samples x {} features to {}",
        dataset.samples.len(),
        dataset.n_features(),
        out.display()
    );
    Ok(ExitCode::SUCCESS)
}

pub fn predict(
    config: &Config,
    model: Option<PathBuf>,
    data: &Path,
    row: usize,
) -> Result<ExitCode> {
    let model = load_model(config, model)?;
    let dataset = load_dataset(data)?;
    let sample = dataset
        .samples
        .get(row)
        .ok_or_else(|| anyhow!("row {row} out of range (dataset has {})", dataset.samples.len()))?;
    let (class, probs) = model.predict(&sample.values)?;
    println!("fno {}", model.label_of(class));
    for (i, p) in probs.iter().enumerate() {
        println!("p(fno {}) {:.6}", model.label_of(i), p);
    }
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
pub fn report(
    config: &Config,
    graph: Option<PathBuf>,
    model: Option<PathBuf>,
    data: Option<PathBuf>,
    row: Option<usize>,
    prediction: Option<PathBuf>,
    top_k: usize,
    background: usize,
    out: &Path,
) -> Result<ExitCode> {
    let graph = load_graph(config, graph)?;

    let input = match prediction {
        Some(path) => {
            let text = read_file(&path, "prediction input")?;
            PredictionInput::from_json(&text)
                .with_context(|| format!("parsing prediction input {}", path.display()))?
        }
        None => {
            let data = data.ok_or_else(|| anyhow!("pass --data (or --prediction)"))?;
            let row = row.ok_or_else(|| anyhow!("pass --row (or --prediction)"))?;
            let model = load_model(config, model)?;
            let dataset = load_dataset(&data)?;
            let sample = dataset.samples.get(row).ok_or_else(|| {
                anyhow!("row {row} out of range (dataset has {})", dataset.samples.len())
            })?;
            let (class, probs) = model.predict(&sample.values)?;
            let background_rows: Vec<_> = dataset
                .samples
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != row)
                .take(background.max(1))
                .map(|(_, s)| s.clone())
                .collect();
            let attribution = xai::shapley(&model, &sample.values, &background_rows, class)?;
            PredictionInput {
                predicted_fno: model.label_of(class),
                class_probability: probs[class],
                attribution,
                timestamp: Some(format!("row {row}")),
            }
        }
    };

    let report = generate_report(&graph, &input, top_k)?;
    write_file(out, &report.to_json(), "report")?;
    write_file(&out.with_extension("txt"), &render_text(&report), "report text")?;
    let force = xai::export_force_plot_data(&input.attribution);
    write_file(&out.with_extension("force.json"), &force.to_json(), "force-plot data")?;
    write_file(&out.with_extension("pie.json"), &report.pie.to_json(), "pie data")?;
    eprintln!(
        "wrote report to {} (+ .txt, .force.json, .pie.json siblings)",
        out.display()
    );
    Ok(ExitCode::SUCCESS)
}

pub fn export(
    config: &Config,
    graph: Option<PathBuf>,
    format: &str,
    out: &Path,
) -> Result<ExitCode> {
    let graph = load_graph(config, graph)?;
    match format {
        "create-script" => {
            write_file(out, &graph_io::export_create_script(&graph), "create script")?;
            eprintln!("wrote create script to {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        other => bail!("unsupported export format `{other}`"),
    }
}

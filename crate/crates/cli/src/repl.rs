//! Interactive shell: raw MATCH queries and natural-language phrase search
//! with alphabetical type-ahead suggestions (TAB completes).

use crate::config::Config;
use crate::render::render_table;
use anyhow::Result;
use rustyline::completion::{Completer, Pair};
use rustyline::error::ReadlineError;
use rustyline::highlight::Highlighter;
use rustyline::hint::Hinter;
use rustyline::history::DefaultHistory;
use rustyline::validate::Validator;
use rustyline::{Editor, Helper};
use std::io::{BufRead, IsTerminal};
use std::path::PathBuf;
use std::process::ExitCode;
use std::rc::Rc;
use windkg_core::graph::PropertyGraph;
use windkg_core::phrases::{resolve_and_run, suggest, PhraseRegistry};
use windkg_core::query::{self, ParamMap};

struct ReplHelper {
    graph: Rc<PropertyGraph>,
    registry: Rc<PhraseRegistry>,
}

impl Completer for ReplHelper {
    type Candidate = Pair;

    fn complete(
        &self,
        line: &str,
        pos: usize,
        _ctx: &rustyline::Context<'_>,
    ) -> rustyline::Result<(usize, Vec<Pair>)> {
        let prefix = &line[..pos];
        let candidates = suggest(&self.registry, &self.graph, prefix)
            .unwrap_or_default()
            .into_iter()
            .map(|s| Pair { display: s.display, replacement: s.completion })
            .collect();
        Ok((0, candidates))
    }
}

impl Hinter for ReplHelper {
    type Hint = String;
}

impl Highlighter for ReplHelper {}
impl Validator for ReplHelper {}
impl Helper for ReplHelper {}

fn help() -> &'static str {
    "Commands:\n\
     \x20 MATCH ... RETURN ...   run a query\n\
     \x20 <phrase text>          resolve a search phrase (TAB completes)\n\
     \x20 :phrases               list registered phrases\n\
     \x20 :suggest <text>        show suggestions for a partial input\n\
     \x20 :help                  this message\n\
     \x20 :quit                  leave the shell"
}

enum Step {
    Continue,
    Quit,
}

fn process(line: &str, graph: &PropertyGraph, registry: &PhraseRegistry) -> Step {
    let trimmed = line.trim();
    if trimmed.is_empty() {
        return Step::Continue;
    }
    match trimmed {
        ":quit" | ":exit" => return Step::Quit,
        ":help" => {
            println!("{}", help());
            return Step::Continue;
        }
        ":phrases" => {
            for phrase in registry.phrases() {
                println!("{} — {}", phrase.template, phrase.description);
            }
            return Step::Continue;
        }
        _ => {}
    }
    if let Some(partial) = trimmed.strip_prefix(":suggest") {
        match suggest(registry, graph, partial.trim_start()) {
            Ok(suggestions) => {
                for s in suggestions {
                    println!("{}", s.display);
                }
            }
            Err(err) => eprintln!("error: {err}"),
        }
        return Step::Continue;
    }
    if trimmed.len() >= 5 && trimmed[..5].eq_ignore_ascii_case("match") {
        match query::parse(trimmed) {
            Ok(ast) => match query::execute(graph, &ast, &ParamMap::new()) {
                Ok(table) => print!("{}", render_table(&table)),
                Err(err) => eprintln!("error: {err}"),
            },
            Err(err) => eprintln!("error: {err}"),
        }
        return Step::Continue;
    }
    match resolve_and_run(registry, graph, trimmed) {
        Ok(table) => print!("{}", render_table(&table)),
        Err(err) => eprintln!("error: {err}"),
    }
    Step::Continue
}

pub fn run(
    config: &Config,
    graph_flag: Option<PathBuf>,
    phrases_flag: Option<PathBuf>,
) -> Result<ExitCode> {
    let graph = Rc::new(crate::commands::load_graph(config, graph_flag)?);
    let registry = Rc::new(crate::commands::load_registry(config, phrases_flag)?);
    eprintln!(
        "loaded {} nodes / {} relationships, {} phrases — :help for commands",
        graph.node_count(),
        graph.relationship_count(),
        registry.len()
    );

    if !std::io::stdin().is_terminal() {
        // piped input: plain line loop, no editor
        for line in std::io::stdin().lock().lines() {
            let line = line?;
            if matches!(process(&line, &graph, &registry), Step::Quit) {
                break;
            }
        }
        return Ok(ExitCode::SUCCESS);
    }

    let mut editor: Editor<ReplHelper, DefaultHistory> = Editor::new()?;
    editor.set_helper(Some(ReplHelper { graph: Rc::clone(&graph), registry: Rc::clone(&registry) }));
    loop {
        match editor.readline("windkg> ") {
            Ok(line) => {
                let _ = editor.add_history_entry(line.as_str());
                if matches!(process(&line, &graph, &registry), Step::Quit) {
                    break;
                }
            }
            Err(ReadlineError::Interrupted) => continue,
            Err(ReadlineError::Eof) => break,
            Err(err) => {
                eprintln!("error: {err}");
                break;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

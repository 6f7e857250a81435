use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use pgraph_core::formula::{parse, Formula, Signature};
use pgraph_core::harness::{demo_fact_cb, demo_fact_min, sweep_harmony, DemoReport};
use pgraph_core::par::Execution;
use pgraph_core::pgraph::{canonical_model, graph_from_preorder, graphs_equivalent, PGraph};
use pgraph_core::postulates::{check_all, Postulate, PostulateReport, Witness};
use pgraph_core::semantics::{Operator, PreferenceModel};
use pgraph_core::textfmt::{document_dot, dump_document, parse_document, Document, DocumentView};
use pgraph_core::transforms::{null_transform, prefix};

/// Iterated belief revision over priority graphs and preference models.
///
/// Exit status: 0 on success, 1 when a postulate fails, graphs differ or a
/// demo verdict is false, 2 on input errors.
#[derive(Parser)]
#[command(name = "pgraph", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the model a graph induces on one world per valuation, or a
    /// graph inducing a given model.
    Induce {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Revise a model or graph by a formula.
    Revise {
        file: PathBuf,
        #[arg(long, value_enum)]
        op: Op,
        /// Revision formula.
        #[arg(long)]
        by: String,
        #[command(flatten)]
        out: Output,
    },
    /// Check postulates on a before/after pair.
    Check {
        #[arg(long)]
        before: PathBuf,
        #[arg(long)]
        after: PathBuf,
        #[arg(long)]
        by: String,
        /// Comma-separated postulates, e.g. `DP-1,rec,cb`; all by default.
        #[arg(long, value_delimiter = ',')]
        postulates: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Decide whether two graphs induce the same models.
    Equiv {
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run a reproduction demo.
    Demo {
        #[command(subcommand)]
        demo: Demo,
    },
}

#[derive(Subcommand)]
enum Demo {
    /// No relevant graph transformation satisfies both Faith and CB.
    FactCb {
        #[arg(long)]
        json: bool,
    },
    /// No formula picks out the minimal worlds of every induced model.
    FactMin {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        by: String,
        #[arg(long)]
        json: bool,
    },
    /// Prefixing against lexicographic revision over every small graph.
    Harmony {
        /// Largest graph size (at most 3).
        #[arg(long, default_value_t = 2)]
        bound: usize,
        /// Signature atoms.
        #[arg(long, default_value = "p q")]
        atoms: String,
        /// Pool formula; repeat for more. Defaults to p, q, ~p, p & q, p | q.
        #[arg(long = "pool")]
        pool: Vec<String>,
        /// Run without the thread pool.
        #[arg(long)]
        sequential: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct Output {
    /// Machine-readable output.
    #[arg(long, conflicts_with = "dot")]
    json: bool,
    /// Graphviz output.
    #[arg(long)]
    dot: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Lex,
    Natural,
    Null,
    Prefix,
}

/// Input errors map to exit status 2; everything else is reported through
/// the returned flag.
fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::Induce { file, out } => {
            let doc = match read_document(&file)? {
                Document::Graph(g) => Document::Model(canonical_model(&g)?),
                Document::Model(m) => Document::Graph(graph_from_preorder(&m)?),
            };
            emit(&doc, &out)?;
            Ok(true)
        }
        Command::Revise { file, op, by, out } => {
            let doc = read_document(&file)?;
            let f = parse_formula(&by, signature(&doc))?;
            emit(&revise(doc, op, &f)?, &out)?;
            Ok(true)
        }
        Command::Check {
            before,
            after,
            by,
            postulates,
            json,
        } => {
            let m = as_model(read_document(&before)?)?;
            let m2 = as_model(read_document(&after)?)?;
            if m.signature() != m2.signature() {
                bail!("before and after use different atoms");
            }
            let f = parse_formula(&by, m.signature())?;
            let selected = if postulates.is_empty() {
                Postulate::ALL.to_vec()
            } else {
                postulates
                    .iter()
                    .map(|p| p.parse::<Postulate>().map_err(anyhow::Error::msg))
                    .collect::<Result<_>>()?
            };
            let reports = check_all(&selected, &m, &f, &m2)
                .context("before and after must list the same worlds with the same valuations")?;
            if json {
                say(&format!("{}\n", serde_json::to_string_pretty(&reports)?))?;
            } else {
                for r in &reports {
                    say(&format!("{}\n", render_report(r)))?;
                }
            }
            Ok(reports.iter().all(|r| r.holds))
        }
        Command::Equiv {
            first,
            second,
            json,
        } => {
            let a = as_graph(read_document(&first)?, &first)?;
            let b = as_graph(read_document(&second)?, &second)?;
            let same = graphs_equivalent(&a, &b)?;
            if json {
                say(&format!("{}\n", serde_json::json!({ "equivalent": same })))?;
            } else {
                say(if same {
                    "equivalent\n"
                } else {
                    "not equivalent\n"
                })?;
            }
            Ok(same)
        }
        Command::Demo { demo } => run_demo(demo),
    }
}

fn run_demo(demo: Demo) -> Result<bool> {
    match demo {
        Demo::FactCb { json } => {
            let r = demo_fact_cb()?;
            print_demo(&r, json, None)?;
            Ok(r.verdict)
        }
        Demo::FactMin { graph, by, json } => {
            let g = as_graph(read_document(&graph)?, &graph)?;
            let f = parse_formula(&by, g.signature())?;
            let (r, witness) = demo_fact_min(&g, &f)?;
            print_demo(&r, json, Some(serde_json::to_value(&witness)?))?;
            Ok(r.verdict)
        }
        Demo::Harmony {
            bound,
            atoms,
            pool,
            sequential,
            json,
        } => {
            let sig = Signature::new(atoms.split_whitespace())?;
            let texts: Vec<String> = if pool.is_empty() {
                ["p", "q", "~p", "p & q", "p | q"]
                    .map(String::from)
                    .to_vec()
            } else {
                pool
            };
            let formulas = texts
                .iter()
                .map(|t| parse_formula(t, &sig))
                .collect::<Result<Vec<_>>>()?;
            let execution = if sequential {
                Execution::Sequential
            } else {
                Execution::default()
            };
            let report = sweep_harmony(bound, &sig, &formulas, execution)?;
            let r = report.to_demo();
            print_demo(&r, json, Some(serde_json::to_value(&report)?))?;
            Ok(r.verdict)
        }
    }
}

fn print_demo(r: &DemoReport, json: bool, extra: Option<serde_json::Value>) -> Result<()> {
    if json {
        let mut v = serde_json::to_value(r)?;
        if let Some(extra) = extra {
            v["result"] = extra;
        }
        say(&format!("{}\n", serde_json::to_string_pretty(&v)?))?;
    } else {
        say(&r.render())?;
    }
    Ok(())
}

fn revise(doc: Document, op: Op, f: &Formula) -> Result<Document> {
    Ok(match (doc, op) {
        (Document::Model(m), Op::Lex) => Document::Model(Operator::Lexicographic.apply(&m, f).model),
        (Document::Model(m), Op::Natural) => Document::Model(Operator::Natural.apply(&m, f).model),
        (Document::Model(m), Op::Null) => Document::Model(Operator::Null.apply(&m, f).model),
        (Document::Model(_), Op::Prefix) => bail!("prefix transforms a graph; give a graph file"),
        (Document::Graph(g), Op::Lex | Op::Prefix) => Document::Graph(prefix(&g, f)),
        (Document::Graph(g), Op::Null) => Document::Graph(null_transform(&g, f)),
        (Document::Graph(_), Op::Natural) => bail!(
            "natural revision has no graph transformation: no P-graph transformation induces natural revision; revise a model file instead"
        ),
    })
}

fn read_document(path: &Path) -> Result<Document> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_document(&text).with_context(|| path.display().to_string())
}

fn signature(doc: &Document) -> &Signature {
    match doc {
        Document::Graph(g) => g.signature(),
        Document::Model(m) => m.signature(),
    }
}

fn parse_formula(text: &str, sig: &Signature) -> Result<Formula> {
    parse(text, sig).with_context(|| format!("formula `{text}`"))
}

fn as_model(doc: Document) -> Result<PreferenceModel> {
    Ok(match doc {
        Document::Model(m) => m,
        Document::Graph(g) => canonical_model(&g)?,
    })
}

fn as_graph(doc: Document, path: &Path) -> Result<PGraph> {
    match doc {
        Document::Graph(g) => Ok(g),
        Document::Model(_) => bail!("{}: expected a graph file", path.display()),
    }
}

fn emit(doc: &Document, out: &Output) -> Result<()> {
    if out.json {
        say(&format!(
            "{}\n",
            serde_json::to_string_pretty(&DocumentView::new(doc))?
        ))?;
    } else if out.dot {
        say(&document_dot(doc))?;
    } else {
        say(&dump_document(doc))?;
    }
    Ok(())
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn say(text: &str) -> Result<()> {
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}

fn render_report(r: &PostulateReport) -> String {
    if r.holds {
        return format!("{}: holds", r.postulate);
    }
    let ws: Vec<String> = r
        .witnesses
        .iter()
        .map(|w| match w {
            Witness::Pair { left, right } => format!("({left}, {right})"),
            Witness::World { world } => world.clone(),
        })
        .collect();
    format!("{}: fails; witnesses {}", r.postulate, ws.join(" "))
}

//! Line-oriented text formats for graphs and models, plus DOT and JSON views.
//!
//! Graph file:
//!
//! ```text
//! atoms: p q
//! node a: p
//! node b: q
//! a < b
//! ```
//!
//! Model file:
//!
//! ```text
//! atoms: p q
//! world w1: ~p & q
//! world w2: p & ~q
//! w1 <= w2
//! ```
//!
//! Edge lines may chain (`a < b < c`). Model order lines accept `<=`, `<`
//! (checked to be strict once the order is closed) and `=` (a tie). `#`
//! starts a comment.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::formula::{parse, Formula, Signature, Valuation};
use crate::pgraph::{Node, PGraph};
use crate::relation::Relation;
use crate::semantics::{PreferenceModel, World};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError {
        line,
        message: message.into(),
    }
}

/// A parsed file of either kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    Graph(PGraph),
    Model(PreferenceModel),
}

struct Lines<'a> {
    sig: Signature,
    sig_line: usize,
    body: Vec<(usize, &'a str)>,
}

fn split_lines(text: &str) -> Result<Lines<'_>, FormatError> {
    let mut sig = None;
    let mut body = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("atoms:") {
            if sig.is_some() {
                return Err(err(line, "duplicate atoms header"));
            }
            let atoms: Vec<&str> = rest.split_whitespace().collect();
            let s = Signature::new(atoms).map_err(|e| err(line, e.to_string()))?;
            sig = Some((s, line));
            continue;
        }
        if sig.is_none() {
            return Err(err(line, "expected `atoms:` header before other lines"));
        }
        body.push((line, content));
    }
    let (sig, sig_line) = sig.ok_or_else(|| err(1, "missing `atoms:` header"))?;
    Ok(Lines {
        sig,
        sig_line,
        body,
    })
}

/// `keyword id: formula`, or `None` if the line does not start with the
/// keyword.
fn declaration<'a>(
    line: usize,
    content: &'a str,
    keyword: &str,
) -> Result<Option<(&'a str, &'a str)>, FormatError> {
    let Some(rest) = content.strip_prefix(keyword) else {
        return Ok(None);
    };
    if !rest.starts_with(char::is_whitespace) {
        return Ok(None);
    }
    let (id, formula) = rest
        .split_once(':')
        .ok_or_else(|| err(line, format!("expected `{keyword} <id>: <formula>`")))?;
    let id = id.trim();
    if !is_ident(id) {
        return Err(err(line, format!("invalid {keyword} id `{id}`")));
    }
    Ok(Some((id, formula.trim())))
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

fn formula_at(line: usize, text: &str, sig: &Signature) -> Result<Formula, FormatError> {
    parse(text, sig).map_err(|e| err(line, e.to_string()))
}

/// Splits `a < b <= c` into ids and the operators between them.
fn order_chain<'a>(
    line: usize,
    content: &'a str,
    ops: &[&'static str],
) -> Result<(Vec<&'a str>, Vec<&'static str>), FormatError> {
    let mut ids = Vec::new();
    let mut found = Vec::new();
    let mut rest = content;
    loop {
        let next = ops
            .iter()
            .filter_map(|op| rest.find(op).map(|at| (at, *op)))
            // longest operator wins at equal position (`<=` before `<`)
            .min_by_key(|(at, op)| (*at, std::cmp::Reverse(op.len())));
        match next {
            Some((at, op)) => {
                ids.push(rest[..at].trim());
                found.push(op);
                rest = &rest[at + op.len()..];
            }
            None => {
                ids.push(rest.trim());
                break;
            }
        }
    }
    if found.is_empty() {
        let expected: Vec<String> = ops.iter().map(|o| format!("`{o}`")).collect();
        return Err(err(
            line,
            format!(
                "unrecognized line `{content}`: expected a declaration or an order line using {}",
                expected.join(" or ")
            ),
        ));
    }
    if let Some(bad) = ids.iter().find(|id| !is_ident(id)) {
        let message = if bad.is_empty() {
            "malformed order line: missing id".to_string()
        } else {
            format!("malformed order line: invalid id `{bad}`")
        };
        return Err(err(line, message));
    }
    Ok((ids, found))
}

pub fn parse_graph(text: &str) -> Result<PGraph, FormatError> {
    let lines = split_lines(text)?;
    graph_from_lines(&lines)
}

fn graph_from_lines(lines: &Lines<'_>) -> Result<PGraph, FormatError> {
    let sig = &lines.sig;
    let mut nodes: Vec<Node> = Vec::new();
    let mut ids: BTreeMap<String, usize> = BTreeMap::new();
    let mut edges = Vec::new();
    for &(line, content) in &lines.body {
        if let Some((id, text)) = declaration(line, content, "node")? {
            if ids.contains_key(id) {
                return Err(err(line, format!("duplicate node `{id}`")));
            }
            ids.insert(id.to_string(), nodes.len());
            nodes.push(Node::new(id, formula_at(line, text, sig)?));
        } else if declaration(line, content, "world")?.is_some() {
            return Err(err(line, "world declaration in a graph file"));
        } else {
            edges.push((line, order_chain(line, content, &["<"])?.0));
        }
    }
    let mut pairs = Vec::new();
    // graph-level errors such as cycles are reported at the last edge line
    let blame = edges.last().map_or(lines.sig_line, |(l, _)| *l);
    for (line, chain) in edges {
        let idx = chain
            .iter()
            .map(|id| {
                ids.get(*id)
                    .copied()
                    .ok_or_else(|| err(line, format!("unknown node `{id}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        for w in idx.windows(2) {
            if w[0] == w[1] {
                return Err(err(line, format!("self-loop on `{}`", nodes[w[0]].id)));
            }
            pairs.push((w[0], w[1]));
        }
    }
    PGraph::new(sig.clone(), nodes, pairs).map_err(|e| err(blame, e.to_string()))
}

pub fn parse_model(text: &str) -> Result<PreferenceModel, FormatError> {
    let lines = split_lines(text)?;
    model_from_lines(&lines)
}

fn model_from_lines(lines: &Lines<'_>) -> Result<PreferenceModel, FormatError> {
    let sig = &lines.sig;
    let mut worlds: Vec<World> = Vec::new();
    let mut orders = Vec::new();
    for &(line, content) in &lines.body {
        if let Some((id, text)) = declaration(line, content, "world")? {
            if worlds.iter().any(|w| w.id == id) {
                return Err(err(line, format!("duplicate world `{id}`")));
            }
            let f = formula_at(line, text, sig)?;
            let table = f.truth_table(sig).map_err(|e| err(line, e.to_string()))?;
            let vals: Vec<Valuation> = table.valuations().collect();
            if vals.len() != 1 {
                return Err(err(
                    line,
                    format!(
                        "world `{id}` must be described by a formula with exactly one model; `{f}` has {}",
                        vals.len()
                    ),
                ));
            }
            worlds.push(World::new(id, vals[0]));
        } else if declaration(line, content, "node")?.is_some() {
            return Err(err(line, "node declaration in a model file"));
        } else {
            orders.push((line, order_chain(line, content, &["<=", "<", "="])?));
        }
    }
    let index = |line: usize, id: &str| {
        worlds
            .iter()
            .position(|w| w.id == id)
            .ok_or_else(|| err(line, format!("unknown world `{id}`")))
    };
    let n = worlds.len();
    let mut rel = Relation::identity(n);
    let mut strict = Vec::new();
    for (line, (chain, ops)) in &orders {
        for (k, op) in ops.iter().enumerate() {
            let a = index(*line, chain[k])?;
            let b = index(*line, chain[k + 1])?;
            rel.insert(a, b);
            match *op {
                "=" => rel.insert(b, a),
                "<" => strict.push((*line, a, b)),
                _ => {}
            }
        }
    }
    let rel = rel.reflexive_transitive_closure();
    for (line, a, b) in strict {
        if rel.contains(b, a) {
            return Err(err(
                line,
                format!(
                    "`{} < {}` is not strict once the order is closed",
                    worlds[a].id, worlds[b].id
                ),
            ));
        }
    }
    PreferenceModel::new(sig.clone(), worlds, rel).map_err(|e| err(lines.sig_line, e.to_string()))
}

/// Parses either file kind: any `world` line makes it a model, otherwise it
/// is a graph (a header alone is the empty graph).
pub fn parse_document(text: &str) -> Result<Document, FormatError> {
    let lines = split_lines(text)?;
    let is_model = lines.body.iter().any(|(_, c)| {
        c.strip_prefix("world")
            .is_some_and(|r| r.starts_with(char::is_whitespace))
    });
    if is_model {
        model_from_lines(&lines).map(Document::Model)
    } else {
        graph_from_lines(&lines).map(Document::Graph)
    }
}

fn atoms_header(sig: &Signature) -> String {
    format!("atoms: {}\n", sig.atoms().join(" "))
}

pub fn dump_graph(g: &PGraph) -> String {
    let mut out = atoms_header(g.signature());
    for n in g.nodes() {
        let _ = writeln!(out, "node {}: {}", n.id, n.label);
    }
    for (a, b) in g.hasse_edges() {
        let _ = writeln!(out, "{} < {}", g.nodes()[a].id, g.nodes()[b].id);
    }
    out
}

/// Tie classes (each listed in world order) and the covering edges between
/// class representatives.
fn model_structure(m: &PreferenceModel) -> (Vec<Vec<usize>>, Vec<(usize, usize)>) {
    let classes = m.relation().tie_classes();
    let reps: Vec<usize> = classes.iter().map(|c| c[0]).collect();
    let mut level = vec![0; m.len()];
    for (k, layer) in m.relation().layers().into_iter().enumerate() {
        for w in layer {
            level[w] = k;
        }
    }
    let mut covering: Vec<(usize, usize)> = m
        .relation()
        .restrict(&reps)
        .covering_pairs()
        .into_iter()
        .map(|(a, b)| (reps[a], reps[b]))
        .collect();
    covering.sort_by_key(|&(a, b)| (level[a], level[b], a, b));
    (classes, covering)
}

/// Model dump: world lines, `# level k:` comments from most to least
/// preferred, tie lines and strict covering edges.
pub fn dump_model(m: &PreferenceModel) -> String {
    let sig = m.signature();
    let mut out = atoms_header(sig);
    for w in m.worlds() {
        let _ = writeln!(out, "world {}: {}", w.id, sig.minterm(w.valuation));
    }
    for (k, layer) in m.layers().iter().enumerate() {
        let ids: Vec<&str> = layer.iter().map(|w| w.id.as_str()).collect();
        let _ = writeln!(out, "# level {k}: {}", ids.join(" "));
    }
    let (classes, covering) = model_structure(m);
    for class in classes.iter().filter(|c| c.len() > 1) {
        let ids: Vec<&str> = class.iter().map(|i| m.world(*i).id.as_str()).collect();
        let _ = writeln!(out, "{}", ids.join(" = "));
    }
    for (a, b) in covering {
        let _ = writeln!(out, "{} < {}", m.world(a).id, m.world(b).id);
    }
    out
}

pub fn dump_document(d: &Document) -> String {
    match d {
        Document::Graph(g) => dump_graph(g),
        Document::Model(m) => dump_model(m),
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// DOT digraph with an edge from each node to the nodes it directly
/// precedes.
pub fn graph_dot(g: &PGraph) -> String {
    let mut out = String::from("digraph pgraph {\n  rankdir=TB;\n");
    for n in g.nodes() {
        let _ = writeln!(
            out,
            "  \"{}\" [label=\"{}: {}\"];",
            dot_escape(&n.id),
            dot_escape(&n.id),
            dot_escape(&n.label.to_string())
        );
    }
    for (a, b) in g.hasse_edges() {
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\";",
            dot_escape(&g.nodes()[a].id),
            dot_escape(&g.nodes()[b].id)
        );
    }
    out.push_str("}\n");
    out
}

/// DOT digraph of the strict covering edges; tied worlds share a rank.
pub fn model_dot(m: &PreferenceModel) -> String {
    let sig = m.signature();
    let mut out = String::from("digraph model {\n  rankdir=TB;\n");
    for w in m.worlds() {
        let _ = writeln!(
            out,
            "  \"{}\" [label=\"{}: {}\"];",
            dot_escape(&w.id),
            dot_escape(&w.id),
            dot_escape(&sig.minterm(w.valuation).to_string())
        );
    }
    let (classes, covering) = model_structure(m);
    for class in classes.iter().filter(|c| c.len() > 1) {
        let ids: Vec<String> = class
            .iter()
            .map(|i| format!("\"{}\"", dot_escape(&m.world(*i).id)))
            .collect();
        let _ = writeln!(out, "  {{ rank=same; {} }}", ids.join("; "));
        for pair in class.windows(2) {
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [dir=none, style=dashed];",
                dot_escape(&m.world(pair[0]).id),
                dot_escape(&m.world(pair[1]).id)
            );
        }
    }
    for (a, b) in covering {
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\";",
            dot_escape(&m.world(a).id),
            dot_escape(&m.world(b).id)
        );
    }
    out.push_str("}\n");
    out
}

pub fn document_dot(d: &Document) -> String {
    match d {
        Document::Graph(g) => graph_dot(g),
        Document::Model(m) => model_dot(m),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeView {
    pub id: String,
    pub label: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphView {
    pub atoms: Vec<String>,
    pub nodes: Vec<NodeView>,
    /// Covering edges `[before, after]`.
    pub edges: Vec<[String; 2]>,
}

impl GraphView {
    pub fn new(g: &PGraph) -> Self {
        GraphView {
            atoms: g.signature().atoms().to_vec(),
            nodes: g
                .nodes()
                .iter()
                .map(|n| NodeView {
                    id: n.id.clone(),
                    label: n.label.clone(),
                })
                .collect(),
            edges: g
                .hasse_edges()
                .into_iter()
                .map(|(a, b)| [g.nodes()[a].id.clone(), g.nodes()[b].id.clone()])
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WorldView {
    pub id: String,
    pub valuation: Formula,
    pub true_atoms: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelView {
    pub atoms: Vec<String>,
    pub worlds: Vec<WorldView>,
    /// World ids per level, most preferred first.
    pub levels: Vec<Vec<String>>,
    /// Tie classes with more than one world.
    pub ties: Vec<Vec<String>>,
    /// Strict covering edges between tie-class representatives.
    pub strict: Vec<[String; 2]>,
}

impl ModelView {
    pub fn new(m: &PreferenceModel) -> Self {
        let sig = m.signature();
        let id = |i: usize| m.world(i).id.clone();
        let (classes, covering) = model_structure(m);
        ModelView {
            atoms: sig.atoms().to_vec(),
            worlds: m
                .worlds()
                .iter()
                .map(|w| WorldView {
                    id: w.id.clone(),
                    valuation: sig.minterm(w.valuation),
                    true_atoms: sig
                        .atoms()
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| w.valuation.get(*i))
                        .map(|(_, a)| a.clone())
                        .collect(),
                })
                .collect(),
            levels: m
                .layers()
                .iter()
                .map(|l| l.iter().map(|w| w.id.clone()).collect())
                .collect(),
            ties: classes
                .into_iter()
                .filter(|c| c.len() > 1)
                .map(|c| c.into_iter().map(id).collect())
                .collect(),
            strict: covering.into_iter().map(|(a, b)| [id(a), id(b)]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DocumentView {
    Graph(GraphView),
    Model(ModelView),
}

impl DocumentView {
    pub fn new(d: &Document) -> Self {
        match d {
            Document::Graph(g) => DocumentView::Graph(GraphView::new(g)),
            Document::Model(m) => DocumentView::Model(ModelView::new(m)),
        }
    }
}

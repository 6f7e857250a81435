//! Graph transformations, the operators they induce on models, and a
//! bounded search for transformations that cannot induce any operator.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::formula::{Formula, Signature};
use crate::par::Execution;
use crate::pgraph::enumerate::enumerate_graphs;
use crate::pgraph::{
    canonical_model, graph_from_preorder, graphs_equivalent, induce_model, GraphError, PGraph,
};
use crate::relation::Relation;
use crate::semantics::{OperatorTag, PreferenceModel, RevisionOutcome};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("supplied graph does not induce the model being revised")]
    NotInducing,
    #[error("sample pair #{index} is not equivalent: {left} vs {right}")]
    InequivalentPair {
        index: usize,
        left: String,
        right: String,
    },
    #[error("unknown transformation `{0}`")]
    Unknown(String),
}

/// A function from (graph, formula) to graph.
pub trait GraphTransformation: Send + Sync {
    fn name(&self) -> &str;
    fn apply(&self, g: &PGraph, f: &Formula) -> PGraph;
}

/// Adds the revision formula as a new node with priority over every
/// existing node.
#[derive(Debug, Clone, Copy, Default)]
pub struct Prefix;

impl GraphTransformation for Prefix {
    fn name(&self) -> &str {
        "prefix"
    }

    fn apply(&self, g: &PGraph, f: &Formula) -> PGraph {
        prefix(g, f)
    }
}

pub fn prefix(g: &PGraph, f: &Formula) -> PGraph {
    g.with_new_root(g.fresh_id("rev"), f.clone())
}

/// Returns the input graph unchanged.
#[derive(Debug, Clone, Copy, Default)]
pub struct NullTransform;

impl GraphTransformation for NullTransform {
    fn name(&self) -> &str {
        "null"
    }

    fn apply(&self, g: &PGraph, _f: &Formula) -> PGraph {
        g.clone()
    }
}

pub fn null_transform(g: &PGraph, _f: &Formula) -> PGraph {
    g.clone()
}

/// Lookup table from graphs (compared structurally) to outputs; graphs not
/// in the table pass through unchanged. Used to build transformations that
/// treat equivalent inputs inconsistently.
#[derive(Debug, Clone)]
pub struct TableTransform {
    name: String,
    entries: Vec<(PGraph, PGraph)>,
}

impl TableTransform {
    pub fn new(name: impl Into<String>, entries: Vec<(PGraph, PGraph)>) -> Self {
        TableTransform {
            name: name.into(),
            entries,
        }
    }
}

impl GraphTransformation for TableTransform {
    fn name(&self) -> &str {
        &self.name
    }

    fn apply(&self, g: &PGraph, _f: &Formula) -> PGraph {
        self.entries
            .iter()
            .find(|(from, _)| from == g)
            .map_or_else(|| g.clone(), |(_, to)| to.clone())
    }
}

/// Transformations by name.
#[derive(Clone)]
pub struct Registry {
    entries: BTreeMap<String, Arc<dyn GraphTransformation>>,
}

impl Default for Registry {
    fn default() -> Self {
        let mut r = Registry {
            entries: BTreeMap::new(),
        };
        r.register(Arc::new(Prefix));
        r.register(Arc::new(NullTransform));
        r
    }
}

impl Registry {
    pub fn register(&mut self, t: Arc<dyn GraphTransformation>) {
        self.entries.insert(t.name().to_string(), t);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn GraphTransformation>, TransformError> {
        self.entries
            .get(name)
            .cloned()
            .ok_or_else(|| TransformError::Unknown(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

impl fmt::Debug for Registry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.keys()).finish()
    }
}

/// Revises `m` by `f` through `t`: pick a graph inducing `m`, transform it,
/// and read the order back off the result.
///
/// Without `inducing`, the graph is [`graph_from_preorder`]`(m)`. A supplied
/// graph must induce `m` on its worlds.
pub fn apply_induced(
    t: &dyn GraphTransformation,
    m: &PreferenceModel,
    f: &Formula,
    inducing: Option<&PGraph>,
) -> Result<RevisionOutcome, TransformError> {
    let g = match inducing {
        Some(g) => {
            if g.signature() != m.signature() {
                return Err(GraphError::SignatureMismatch.into());
            }
            if induce_model(g, m.worlds().to_vec())?.relation() != m.relation() {
                return Err(TransformError::NotInducing);
            }
            g.clone()
        }
        None => graph_from_preorder(m)?,
    };
    let model = induce_model(&t.apply(&g, f), m.worlds().to_vec())?;
    Ok(RevisionOutcome {
        model,
        operator: OperatorTag::Induced(t.name().to_string()),
        formula: f.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelevanceStatus {
    /// No counterexample in the searched space; says nothing beyond it.
    ConsistentOnSample,
    Counterexample,
}

/// Two equivalent graphs the transformation sends to inequivalent graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelevanceWitness {
    pub left: PGraph,
    pub right: PGraph,
    pub formula: Formula,
}

impl RelevanceWitness {
    /// Re-checks the witness from scratch.
    pub fn verify(&self, t: &dyn GraphTransformation) -> Result<bool, GraphError> {
        Ok(graphs_equivalent(&self.left, &self.right)?
            && !graphs_equivalent(
                &t.apply(&self.left, &self.formula),
                &t.apply(&self.right, &self.formula),
            )?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelevanceVerdict {
    pub status: RelevanceStatus,
    pub witness: Option<RelevanceWitness>,
    /// (graph pair, formula) combinations examined.
    pub instances_checked: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct RelevanceConfig {
    /// Largest graph size in the exhaustive sweep; 0 disables it beyond the
    /// empty graph.
    pub node_bound: usize,
    pub execution: Execution,
}

impl Default for RelevanceConfig {
    fn default() -> Self {
        RelevanceConfig {
            node_bound: 2,
            execution: Execution::default(),
        }
    }
}

/// Bounded refutation search for relevance.
///
/// Checks the supplied pairs against every formula, then sweeps all graphs
/// with at most `node_bound` nodes labelled from `formulas`, grouped by
/// canonical model. A returned counterexample is verified before it is
/// reported; `ConsistentOnSample` only covers what was searched.
pub fn relevance_check(
    t: &dyn GraphTransformation,
    pairs: &[(PGraph, PGraph)],
    formulas: &[Formula],
    sig: &Signature,
    config: RelevanceConfig,
) -> Result<RelevanceVerdict, TransformError> {
    for (index, (a, b)) in pairs.iter().enumerate() {
        if !graphs_equivalent(a, b)? {
            return Err(TransformError::InequivalentPair {
                index,
                left: describe(a),
                right: describe(b),
            });
        }
    }
    let mut checked = 0;
    for (a, b) in pairs {
        for f in formulas {
            checked += 1;
            let w = RelevanceWitness {
                left: a.clone(),
                right: b.clone(),
                formula: f.clone(),
            };
            if w.verify(t)? {
                return Ok(found(w, checked));
            }
        }
    }

    // Exhaustive sweep: bucket graphs by canonical order, then compare the
    // images of each bucket's members against the bucket's first member.
    let graphs = enumerate_graphs(sig, formulas, config.node_bound);
    let fingerprints = config.execution.map(&graphs, |g| {
        canonical_model(g).map(|m| m.relation().clone())
    });
    let mut classes: BTreeMap<Vec<(usize, usize)>, Vec<usize>> = BTreeMap::new();
    for (i, fp) in fingerprints.into_iter().enumerate() {
        let key: Vec<(usize, usize)> = fp?.pairs().collect();
        classes.entry(key).or_default().push(i);
    }
    let classes: Vec<Vec<usize>> = classes.into_values().filter(|c| c.len() > 1).collect();
    let per_class = config.execution.map(&classes, |members| {
        let mut local = 0;
        for f in formulas {
            let image = |i: usize| -> Result<Relation, GraphError> {
                Ok(canonical_model(&t.apply(&graphs[i], f))?.relation().clone())
            };
            let first = image(members[0])?;
            for &other in &members[1..] {
                local += 1;
                if image(other)? != first {
                    let w = RelevanceWitness {
                        left: graphs[members[0]].clone(),
                        right: graphs[other].clone(),
                        formula: f.clone(),
                    };
                    return Ok((local, Some(w)));
                }
            }
        }
        Ok::<_, GraphError>((local, None))
    });
    for result in per_class {
        let (local, witness) = result?;
        checked += local;
        if let Some(w) = witness {
            debug_assert!(w.verify(t)?);
            if w.verify(t)? {
                return Ok(found(w, checked));
            }
        }
    }
    Ok(RelevanceVerdict {
        status: RelevanceStatus::ConsistentOnSample,
        witness: None,
        instances_checked: checked,
    })
}

fn found(w: RelevanceWitness, checked: usize) -> RelevanceVerdict {
    RelevanceVerdict {
        status: RelevanceStatus::Counterexample,
        witness: Some(w),
        instances_checked: checked,
    }
}

/// One-line rendering such as `{n0: p, n1: q; n0<n1}`.
pub fn describe(g: &PGraph) -> String {
    let nodes: Vec<String> = g
        .nodes()
        .iter()
        .map(|n| format!("{}: {}", n.id, n.label))
        .collect();
    let edges: Vec<String> = g
        .hasse_edges()
        .into_iter()
        .map(|(a, b)| format!("{}<{}", g.nodes()[a].id, g.nodes()[b].id))
        .collect();
    if edges.is_empty() {
        format!("{{{}}}", nodes.join(", "))
    } else {
        format!("{{{}; {}}}", nodes.join(", "), edges.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pgraph::{canonical_worlds, validate};
    use crate::semantics::fixtures::{chain, f, pq, ranking};
    use crate::semantics::lex_revise;

    fn p_before_q() -> PGraph {
        PGraph::chain(pq(), vec![f("p"), f("q")]).unwrap()
    }

    fn four_chain(order: [&str; 4]) -> PGraph {
        PGraph::chain(pq(), order.iter().map(|s| f(s)).collect()).unwrap()
    }

    #[test]
    fn prefix_adds_root_above_everything() {
        let g = p_before_q();
        let out = prefix(&g, &f("~p"));
        assert_eq!(out.len(), 3);
        let root = out.index_of("rev").unwrap();
        assert_eq!(out.nodes()[root].label, f("~p"));
        assert!(out.precedes(root, 0) && out.precedes(root, 1) && out.precedes(0, 1));
        let names: Vec<&str> = out.nodes().iter().map(|n| n.id.as_str()).collect();
        assert!(validate(&names, out.prec().pairs()).is_ok());

        let single = prefix(&PGraph::empty(pq()), &f("p"));
        assert_eq!(single.len(), 1);
        assert!(single.prec().pairs().next().is_none());
    }

    #[test]
    fn prefix_keeps_duplicate_labels_apart() {
        let g = PGraph::antichain(pq(), vec![f("p")]).unwrap();
        let twice = prefix(&prefix(&g, &f("p")), &f("p"));
        assert_eq!(twice.len(), 3);
        assert_eq!(twice.index_of("rev1"), Some(2));
    }

    #[test]
    fn prefix_matches_lex_on_chain() {
        let out = canonical_model(&prefix(&p_before_q(), &f("~p"))).unwrap();
        assert_eq!(out, lex_revise(&chain(), &f("~p")).model);
        let names: Vec<Vec<String>> = ranking(&out);
        assert_eq!(names, [["w_q"], ["w_0"], ["w_pq"], ["w_p"]]);
    }

    #[test]
    fn null_transform_laws() {
        let g = p_before_q();
        let once = null_transform(&g, &f("p"));
        assert_eq!(once, g);
        assert_eq!(null_transform(&once, &f("p")), g);
        assert_eq!(
            canonical_model(&once).unwrap(),
            canonical_model(&g).unwrap()
        );
    }

    #[test]
    fn induced_prefix_is_lex_on_chain() {
        let out = apply_induced(&Prefix, &chain(), &f("~p"), None).unwrap();
        assert_eq!(out.model, lex_revise(&chain(), &f("~p")).model);
        assert_eq!(out.operator, OperatorTag::Induced("prefix".into()));
        // Same result through an alternative inducing graph.
        let alt = apply_induced(&Prefix, &chain(), &f("~p"), Some(&p_before_q())).unwrap();
        assert_eq!(alt.model, out.model);
    }

    #[test]
    fn induced_null_is_identity() {
        let m = chain();
        assert_eq!(
            apply_induced(&NullTransform, &m, &f("q"), None)
                .unwrap()
                .model,
            m
        );
    }

    #[test]
    fn induced_prefix_on_flat_model() {
        let sig = pq();
        let flat =
            PreferenceModel::all_equal(sig.clone(), canonical_worlds(&sig).unwrap()).unwrap();
        let out = apply_induced(&Prefix, &flat, &f("p"), None).unwrap().model;
        for a in 0..4 {
            for b in 0..4 {
                let (pa, pb) = (out.satisfies(a, &f("p")), out.satisfies(b, &f("p")));
                assert_eq!(out.leq(a, b), pa || !pb, "{a} {b}");
            }
        }
    }

    #[test]
    fn supplied_graph_must_induce_model() {
        let g = PGraph::antichain(pq(), vec![f("q")]).unwrap();
        assert_eq!(
            apply_induced(&Prefix, &chain(), &f("p"), Some(&g)),
            Err(TransformError::NotInducing)
        );
    }

    #[test]
    fn relevance_examples() {
        let sig = pq();
        let chain4 = four_chain(["p & q", "p & ~q", "~p & q", "~p & ~q"]);
        let pairs = vec![(p_before_q(), chain4.clone())];
        let formulas = vec![f("~p")];
        let cfg = RelevanceConfig {
            node_bound: 1,
            ..Default::default()
        };
        let v = relevance_check(&Prefix, &pairs, &formulas, &sig, cfg).unwrap();
        assert_eq!(v.status, RelevanceStatus::ConsistentOnSample);
        let v = relevance_check(&NullTransform, &pairs, &formulas, &sig, cfg).unwrap();
        assert_eq!(v.status, RelevanceStatus::ConsistentOnSample);

        let reordered = four_chain(["p & q", "~p & q", "p & ~q", "~p & ~q"]);
        let bad = TableTransform::new(
            "reorder",
            vec![(p_before_q(), p_before_q()), (chain4.clone(), reordered)],
        );
        let v = relevance_check(&bad, &pairs, &formulas, &sig, cfg).unwrap();
        assert_eq!(v.status, RelevanceStatus::Counterexample);
        let w = v.witness.unwrap();
        assert_eq!((&w.left, &w.right), (&p_before_q(), &chain4));
        assert!(w.verify(&bad).unwrap());
    }

    #[test]
    fn relevance_sweep_finds_unsampled_counterexample() {
        // Rewrites the singleton {p & q} to {p} and leaves everything else.
        let sig = pq();
        let from = PGraph::antichain(sig.clone(), vec![f("p & q")]).unwrap();
        let to = PGraph::antichain(sig.clone(), vec![f("p")]).unwrap();
        let t = TableTransform::new("odd", vec![(from, to)]);
        let formulas = vec![f("p & q"), f("q & p")];
        let v = relevance_check(&t, &[], &formulas, &sig, RelevanceConfig::default()).unwrap();
        assert_eq!(v.status, RelevanceStatus::Counterexample);
        assert!(v.witness.unwrap().verify(&t).unwrap());
    }

    #[test]
    fn relevance_rejects_inequivalent_pairs() {
        let sig = pq();
        let pairs = vec![(p_before_q(), PGraph::empty(sig.clone()))];
        assert!(matches!(
            relevance_check(&Prefix, &pairs, &[f("p")], &sig, RelevanceConfig::default()),
            Err(TransformError::InequivalentPair { index: 0, .. })
        ));
    }

    #[test]
    fn registry_lookup() {
        let r = Registry::default();
        assert_eq!(r.get("prefix").unwrap().name(), "prefix");
        assert_eq!(r.get("null").unwrap().name(), "null");
        assert!(matches!(r.get("natural"), Err(TransformError::Unknown(_))));
        assert_eq!(r.names().collect::<Vec<_>>(), ["null", "prefix"]);
    }

    #[test]
    fn describe_graph() {
        assert_eq!(describe(&p_before_q()), "{n0: p, n1: q; n0<n1}");
        assert_eq!(describe(&PGraph::empty(pq())), "{}");
    }
}

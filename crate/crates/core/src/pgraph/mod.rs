//! Priority graphs and the preference relation they induce on worlds.
//!
//! A graph is a set of formula-labelled nodes under a strict partial order
//! `prec`, where `a ≺ b` reads "a has priority over b". A world `w` is at
//! least as preferred as `w'` when every label `w'` satisfies is either also
//! satisfied by `w`, or is dominated by some higher-priority label that
//! separates `w` from `w'` in `w`'s favour.

pub mod enumerate;

use thiserror::Error;

use crate::formula::{Formula, FormulaError, Signature, TruthTable, Valuation};
use crate::relation::Relation;
use crate::semantics::{ModelError, PreferenceModel, World};

/// Largest signature for which a canonical model (one world per valuation)
/// is built.
pub const MAX_CANONICAL_ATOMS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate node id `{0}`")]
    DuplicateNode(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("self-loop on node `{0}`")]
    SelfLoop(String),
    #[error("priority cycle: {}", .0.join(" < "))]
    Cycle(Vec<String>),
    #[error("edge index {0} out of range")]
    EdgeOutOfRange(usize),
    #[error("label of node `{node}`: {source}")]
    Label { node: String, source: FormulaError },
    #[error("graphs are over different signatures")]
    SignatureMismatch,
    #[error("canonical model needs {atoms} atoms, bound is {bound}")]
    SignatureTooLarge { atoms: usize, bound: usize },
    #[error("model is not representable by a priority graph: worlds `{0}` and `{1}` share a valuation but are not tied")]
    NotRepresentable(String, String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Node {
    pub id: String,
    pub label: Formula,
}

impl Node {
    pub fn new(id: impl Into<String>, label: Formula) -> Self {
        Node {
            id: id.into(),
            label,
        }
    }
}

/// A validated priority graph; `prec` is stored transitively closed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PGraph {
    sig: Signature,
    nodes: Vec<Node>,
    prec: Relation,
}

/// Checks that `edges` generate a strict partial order on `node_count`
/// nodes and returns its transitive closure. `names` is used for
/// diagnostics only.
pub fn validate(
    names: &[&str],
    edges: impl IntoIterator<Item = (usize, usize)>,
) -> Result<Relation, GraphError> {
    let n = names.len();
    let mut raw = Relation::empty(n);
    for (a, b) in edges {
        for x in [a, b] {
            if x >= n {
                return Err(GraphError::EdgeOutOfRange(x));
            }
        }
        if a == b {
            return Err(GraphError::SelfLoop(names[a].to_string()));
        }
        raw.insert(a, b);
    }
    if let Some(cycle) = raw.find_cycle() {
        return Err(GraphError::Cycle(
            cycle.into_iter().map(|i| names[i].to_string()).collect(),
        ));
    }
    Ok(raw.transitive_closure())
}

impl PGraph {
    pub fn new(
        sig: Signature,
        nodes: Vec<Node>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        for (i, node) in nodes.iter().enumerate() {
            if nodes[..i].iter().any(|o| o.id == node.id) {
                return Err(GraphError::DuplicateNode(node.id.clone()));
            }
            sig.check(&node.label).map_err(|source| GraphError::Label {
                node: node.id.clone(),
                source,
            })?;
        }
        let names: Vec<&str> = nodes.iter().map(|n| n.id.as_str()).collect();
        let prec = validate(&names, edges)?;
        Ok(PGraph { sig, nodes, prec })
    }

    /// Builds a graph from edges given by node id.
    pub fn with_named_edges(
        sig: Signature,
        nodes: Vec<Node>,
        edges: &[(&str, &str)],
    ) -> Result<Self, GraphError> {
        let lookup = |id: &str| {
            nodes
                .iter()
                .position(|n| n.id == id)
                .ok_or_else(|| GraphError::UnknownNode(id.to_string()))
        };
        let idx = edges
            .iter()
            .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>, GraphError>>()?;
        Self::new(sig, nodes, idx)
    }

    pub fn empty(sig: Signature) -> Self {
        PGraph {
            sig,
            nodes: Vec::new(),
            prec: Relation::empty(0),
        }
    }

    /// `labels[0] ≺ labels[1] ≺ ...`, node ids `n0, n1, ...`.
    pub fn chain(sig: Signature, labels: Vec<Formula>) -> Result<Self, GraphError> {
        let n = labels.len();
        Self::new(sig, numbered(labels), (1..n).map(|i| (i - 1, i)))
    }

    /// Unordered labels, node ids `n0, n1, ...`.
    pub fn antichain(sig: Signature, labels: Vec<Formula>) -> Result<Self, GraphError> {
        Self::new(sig, numbered(labels), [])
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.id == id)
    }

    /// `a ≺ b` on node positions.
    pub fn precedes(&self, a: usize, b: usize) -> bool {
        self.prec.contains(a, b)
    }

    pub fn prec(&self) -> &Relation {
        &self.prec
    }

    /// Edges of the transitive reduction, enough to regenerate `prec`.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        self.prec.covering_pairs()
    }

    pub fn labels(&self) -> impl Iterator<Item = &Formula> {
        self.nodes.iter().map(|n| &n.label)
    }

    /// Truth tables of all labels, in node order.
    pub fn label_tables(&self) -> Result<Vec<TruthTable>, FormulaError> {
        self.labels().map(|l| l.truth_table(&self.sig)).collect()
    }

    /// A node id not used in this graph, derived from `base`.
    pub fn fresh_id(&self, base: &str) -> String {
        if self.index_of(base).is_none() {
            return base.to_string();
        }
        (1..)
            .map(|k| format!("{base}{k}"))
            .find(|id| self.index_of(id).is_none())
            .expect("unbounded")
    }

    /// Adds a node that takes priority over every existing node.
    pub(crate) fn with_new_root(&self, id: String, label: Formula) -> PGraph {
        let n = self.len();
        let mut nodes = self.nodes.clone();
        nodes.push(Node { id, label });
        let mut prec = Relation::empty(n + 1);
        for (a, b) in self.prec.pairs() {
            prec.insert(a, b);
        }
        for b in 0..n {
            prec.insert(n, b);
        }
        PGraph {
            sig: self.sig.clone(),
            nodes,
            prec,
        }
    }
}

fn numbered(labels: Vec<Formula>) -> Vec<Node> {
    labels
        .into_iter()
        .enumerate()
        .map(|(i, l)| Node::new(format!("n{i}"), l))
        .collect()
}

/// The induced preference relation over `worlds`.
pub fn induced_order(g: &PGraph, worlds: &[World]) -> Relation {
    let vals: Vec<Valuation> = worlds.iter().map(|w| w.valuation).collect();
    induced_order_on(g, &vals)
}

pub(crate) fn induced_order_on(g: &PGraph, vals: &[Valuation]) -> Relation {
    // sat[node][world]
    let sat: Vec<Vec<bool>> = g
        .labels()
        .map(|l| vals.iter().map(|v| l.eval(&g.sig, *v)).collect())
        .collect();
    let k = g.len();
    Relation::from_fn(vals.len(), |w, w2| {
        (0..k).all(|phi| {
            (!sat[phi][w2] || sat[phi][w])
                || (0..k).any(|psi| g.precedes(psi, phi) && sat[psi][w] && !sat[psi][w2])
        })
    })
}

/// The model over `worlds` whose order is induced by `g`.
pub fn induce_model(g: &PGraph, worlds: Vec<World>) -> Result<PreferenceModel, GraphError> {
    let leq = induced_order(g, &worlds);
    Ok(PreferenceModel::new(g.sig.clone(), worlds, leq)?)
}

/// One world per valuation, in canonical valuation order, named `w_pq` etc.
pub fn canonical_worlds(sig: &Signature) -> Result<Vec<World>, GraphError> {
    if sig.len() > MAX_CANONICAL_ATOMS {
        return Err(GraphError::SignatureTooLarge {
            atoms: sig.len(),
            bound: MAX_CANONICAL_ATOMS,
        });
    }
    Ok(sig
        .valuations()
        .map(|v| World::new(sig.world_name(v), v))
        .collect())
}

/// The model induced on the canonical worlds of the graph's signature.
pub fn canonical_model(g: &PGraph) -> Result<PreferenceModel, GraphError> {
    induce_model(g, canonical_worlds(&g.sig)?)
}

/// Graphs are equivalent when they induce the same canonical model.
pub fn graphs_equivalent(g1: &PGraph, g2: &PGraph) -> Result<bool, GraphError> {
    if g1.sig != g2.sig {
        return Err(GraphError::SignatureMismatch);
    }
    Ok(canonical_model(g1)?.relation() == canonical_model(g2)?.relation())
}

/// Checks that worlds sharing a valuation are tied, which every induced
/// order guarantees.
pub fn check_representable(m: &PreferenceModel) -> Result<(), GraphError> {
    for a in 0..m.len() {
        for b in 0..m.len() {
            if m.world(a).valuation == m.world(b).valuation && !m.leq(a, b) {
                return Err(GraphError::NotRepresentable(
                    m.world(a).id.clone(),
                    m.world(b).id.clone(),
                ));
            }
        }
    }
    Ok(())
}

/// A graph inducing exactly `m`'s order.
///
/// The result is an antichain with one node per distinct down-set
/// `{v | v ≤ w}`, labelled by the disjunction of the down-set's valuation
/// minterms. Node ids are `d_<world id>` for the first world having that
/// down-set.
pub fn graph_from_preorder(m: &PreferenceModel) -> Result<PGraph, GraphError> {
    check_representable(m)?;
    let sig = m.signature().clone();
    let mut nodes: Vec<Node> = Vec::new();
    for w in 0..m.len() {
        let down: Vec<Valuation> = (0..m.len())
            .filter(|v| m.leq(*v, w))
            .map(|v| m.world(v).valuation)
            .collect();
        let label = sig.characteristic(&down);
        if nodes.iter().all(|n| n.label != label) {
            nodes.push(Node::new(format!("d_{}", m.world(w).id), label));
        }
    }
    PGraph::new(sig, nodes, [])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::fixtures::{chain, f, pq, ranking, world};

    fn p_before_q() -> PGraph {
        PGraph::chain(pq(), vec![f("p"), f("q")]).unwrap()
    }

    fn four_chain(order: [&str; 4]) -> PGraph {
        PGraph::chain(pq(), order.iter().map(|s| f(s)).collect()).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(validate(&["p", "q"], [(0, 1)]).is_ok());
        assert_eq!(
            validate(&["p", "q"], [(0, 1), (1, 0)]),
            Err(GraphError::Cycle(vec!["p".into(), "q".into()]))
        );
        assert_eq!(
            validate(&["a"], [(0, 0)]),
            Err(GraphError::SelfLoop("a".into()))
        );
        let closed = validate(&["a", "b", "c"], [(0, 1), (1, 2)]).unwrap();
        assert!(closed.contains(0, 2));
        assert!(closed.is_transitive() && closed.is_irreflexive());
    }

    #[test]
    fn graph_construction_errors() {
        let sig = pq();
        let nodes = vec![Node::new("a", f("p")), Node::new("a", f("q"))];
        assert_eq!(
            PGraph::new(sig.clone(), nodes, []),
            Err(GraphError::DuplicateNode("a".into()))
        );
        let bad = vec![Node::new("a", Formula::atom("r"))];
        assert!(matches!(
            PGraph::new(sig.clone(), bad, []),
            Err(GraphError::Label { .. })
        ));
        let nodes = vec![Node::new("a", f("p"))];
        assert_eq!(
            PGraph::with_named_edges(sig, nodes, &[("a", "b")]),
            Err(GraphError::UnknownNode("b".into()))
        );
    }

    #[test]
    fn induced_order_of_p_before_q_is_the_chain() {
        let m = canonical_model(&p_before_q()).unwrap();
        assert_eq!(m, chain());
    }

    #[test]
    fn empty_graph_induces_total_relation() {
        let m = canonical_model(&PGraph::empty(pq())).unwrap();
        assert_eq!(*m.relation(), Relation::total(4));
        let one = Signature::new(["p"]).unwrap();
        let m1 = canonical_model(&PGraph::empty(one)).unwrap();
        assert_eq!(m1.len(), 2);
        assert_eq!(*m1.relation(), Relation::total(2));
    }

    #[test]
    fn single_node_antichain() {
        let g = PGraph::antichain(pq(), vec![f("p")]).unwrap();
        let m = canonical_model(&g).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                let expect = !m.satisfies(b, &f("p")) || m.satisfies(a, &f("p"));
                assert_eq!(m.leq(a, b), expect);
            }
        }
    }

    #[test]
    fn induce_on_two_worlds() {
        let sig = pq();
        let ws = vec![world(&sig, "w_pq", &["p", "q"]), world(&sig, "w_p", &["p"])];
        let m = induce_model(&p_before_q(), ws).unwrap();
        assert_eq!(
            ranking(&m),
            vec![vec!["w_pq".to_string()], vec!["w_p".to_string()]]
        );
    }

    #[test]
    fn background_equivalence_example() {
        let g = p_before_q();
        let c = four_chain(["p & q", "p & ~q", "~p & q", "~p & ~q"]);
        let reordered = four_chain(["p & q", "~p & q", "p & ~q", "~p & ~q"]);
        assert_eq!(canonical_model(&c).unwrap(), chain());
        assert!(graphs_equivalent(&g, &c).unwrap());
        assert!(!graphs_equivalent(&c, &reordered).unwrap());
        assert!(!graphs_equivalent(&g, &reordered).unwrap());
        assert!(graphs_equivalent(&g, &g).unwrap());
    }

    #[test]
    fn from_preorder_two_worlds() {
        let sig = Signature::new(["p"]).unwrap();
        let ws = vec![world(&sig, "w_p", &["p"]), world(&sig, "w_0", &[])];
        let m = PreferenceModel::chain(sig.clone(), ws.clone()).unwrap();
        let g = graph_from_preorder(&m).unwrap();
        assert_eq!(g.len(), 2);
        assert!(g.prec().pairs().next().is_none());
        assert_eq!(g.nodes()[0].label, Formula::atom("p"));
        assert!(crate::formula::equivalent(&g.nodes()[1].label, &Formula::Top, &sig).unwrap());
        assert_eq!(induced_order(&g, &ws), *m.relation());
    }

    #[test]
    fn from_preorder_all_equal() {
        let sig = pq();
        let m = PreferenceModel::all_equal(sig.clone(), canonical_worlds(&sig).unwrap()).unwrap();
        let g = graph_from_preorder(&m).unwrap();
        for l in g.labels() {
            assert!(crate::formula::equivalent(l, &Formula::Top, &sig).unwrap());
        }
        assert_eq!(induced_order(&g, m.worlds()), *m.relation());
    }

    #[test]
    fn from_preorder_rejects_split_duplicates() {
        let sig = pq();
        let ws = vec![world(&sig, "a", &["p"]), world(&sig, "b", &["p"])];
        let m = PreferenceModel::chain(sig, ws).unwrap();
        assert_eq!(
            graph_from_preorder(&m),
            Err(GraphError::NotRepresentable("b".into(), "a".into()))
        );
    }

    #[test]
    fn same_valuation_worlds_always_tie() {
        let sig = pq();
        let ws = vec![
            world(&sig, "a", &["p"]),
            world(&sig, "b", &["q"]),
            world(&sig, "c", &["p"]),
        ];
        let g = four_chain(["q", "p & q", "~p", "p"]);
        let r = induced_order(&g, &ws);
        assert!(r.contains(0, 2) && r.contains(2, 0));
    }

    #[test]
    fn canonical_model_bound() {
        let sig = Signature::new((0..11).map(|i| format!("a{i}"))).unwrap();
        assert!(matches!(
            canonical_model(&PGraph::empty(sig)),
            Err(GraphError::SignatureTooLarge { .. })
        ));
    }

    #[test]
    fn fresh_ids() {
        let g = PGraph::chain(pq(), vec![f("p"), f("q")]).unwrap();
        assert_eq!(g.fresh_id("n0"), "n01");
        assert_eq!(g.fresh_id("top"), "top");
    }
}

//! Finite preference models and the semantic revision operators.
//!
//! A model's order is stored as a dense `leq` matrix over world positions;
//! `leq(a, b)` reads "a is at least as preferred as b". Lower is better.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::formula::{Formula, Signature, Valuation};
use crate::relation::Relation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("duplicate world id `{0}`")]
    DuplicateWorld(String),
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("order has {order} elements but the model has {worlds} worlds")]
    SizeMismatch { worlds: usize, order: usize },
    #[error("valuation of world `{0}` mentions atoms outside the signature")]
    ValuationOutOfRange(String),
    #[error("order is not reflexive at `{0}`")]
    NotReflexive(String),
    #[error("order is not transitive: {0} <= {1} <= {2} but not {0} <= {2}")]
    NotTransitive(String, String, String),
    #[error("strict order has a cycle through {}", .0.join(" < "))]
    StrictCycle(Vec<String>),
    #[error("models do not share worlds and valuations")]
    FrameMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct World {
    pub id: String,
    pub valuation: Valuation,
}

impl World {
    pub fn new(id: impl Into<String>, valuation: Valuation) -> Self {
        World {
            id: id.into(),
            valuation,
        }
    }
}

/// Worlds plus a preorder with acyclic strict part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceModel {
    sig: Signature,
    worlds: Vec<World>,
    leq: Relation,
}

impl PreferenceModel {
    pub fn new(sig: Signature, worlds: Vec<World>, leq: Relation) -> Result<Self, ModelError> {
        if leq.size() != worlds.len() {
            return Err(ModelError::SizeMismatch {
                worlds: worlds.len(),
                order: leq.size(),
            });
        }
        let limit = 1u64 << sig.len();
        for (i, w) in worlds.iter().enumerate() {
            if worlds[..i].iter().any(|o| o.id == w.id) {
                return Err(ModelError::DuplicateWorld(w.id.clone()));
            }
            if u64::from(w.valuation.bits()) >= limit {
                return Err(ModelError::ValuationOutOfRange(w.id.clone()));
            }
        }
        let name = |i: usize| worlds[i].id.clone();
        if let Some(i) = (0..worlds.len()).find(|i| !leq.contains(*i, *i)) {
            return Err(ModelError::NotReflexive(name(i)));
        }
        if let Some((a, b, c)) = leq.transitivity_violation() {
            return Err(ModelError::NotTransitive(name(a), name(b), name(c)));
        }
        if let Some(cycle) = leq.strict_part().find_cycle() {
            return Err(ModelError::StrictCycle(
                cycle.into_iter().map(name).collect(),
            ));
        }
        Ok(PreferenceModel { sig, worlds, leq })
    }

    /// Model whose order is the reflexive-transitive closure of `pairs`.
    pub fn from_pairs(
        sig: Signature,
        worlds: Vec<World>,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, ModelError> {
        let n = worlds.len();
        let leq = Relation::from_pairs(n, pairs).reflexive_transitive_closure();
        Self::new(sig, worlds, leq)
    }

    /// Strict chain in the given world order.
    pub fn chain(sig: Signature, worlds: Vec<World>) -> Result<Self, ModelError> {
        let n = worlds.len();
        Self::new(sig, worlds, Relation::from_fn(n, |i, j| i <= j))
    }

    /// Every world equally preferred.
    pub fn all_equal(sig: Signature, worlds: Vec<World>) -> Result<Self, ModelError> {
        let n = worlds.len();
        Self::new(sig, worlds, Relation::total(n))
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn worlds(&self) -> &[World] {
        &self.worlds
    }

    pub fn world(&self, i: usize) -> &World {
        &self.worlds[i]
    }

    pub fn len(&self) -> usize {
        self.worlds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.worlds.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.worlds.iter().position(|w| w.id == id)
    }

    pub fn relation(&self) -> &Relation {
        &self.leq
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq.contains(a, b)
    }

    /// Strict preference, derived from `leq`.
    pub fn less(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) && !self.leq(b, a)
    }

    pub fn satisfies(&self, world: usize, f: &Formula) -> bool {
        f.eval(&self.sig, self.worlds[world].valuation)
    }

    /// `⟦f⟧` as a membership vector over world positions.
    pub fn extension(&self, f: &Formula) -> Vec<bool> {
        (0..self.len()).map(|i| self.satisfies(i, f)).collect()
    }

    /// Minimal (most preferred) worlds satisfying `f`, in world order.
    pub fn min_worlds(&self, f: &Formula) -> Vec<usize> {
        let ext = self.extension(f);
        self.min_of(&ext)
    }

    pub(crate) fn min_of(&self, members: &[bool]) -> Vec<usize> {
        (0..self.len())
            .filter(|w| members[*w])
            .filter(|w| !(0..self.len()).any(|v| members[v] && self.less(v, *w)))
            .collect()
    }

    /// Same worlds, new order.
    pub fn with_relation(&self, leq: Relation) -> Result<Self, ModelError> {
        Self::new(self.sig.clone(), self.worlds.clone(), leq)
    }

    /// True when both models have the same signature, world ids and
    /// valuations in the same positions.
    pub fn same_frame(&self, other: &PreferenceModel) -> bool {
        self.sig == other.sig && self.worlds == other.worlds
    }

    /// Submodel on the listed world positions, in list order.
    pub fn restrict(&self, keep: &[usize]) -> PreferenceModel {
        PreferenceModel {
            sig: self.sig.clone(),
            worlds: keep.iter().map(|i| self.worlds[*i].clone()).collect(),
            leq: self.leq.restrict(keep),
        }
    }

    /// Worlds grouped into strictly increasing layers.
    pub fn layers(&self) -> Vec<Vec<&World>> {
        self.leq
            .layers()
            .into_iter()
            .map(|l| l.into_iter().map(|i| &self.worlds[i]).collect())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Operator {
    Lexicographic,
    Natural,
    Null,
}

impl Operator {
    pub fn name(self) -> &'static str {
        match self {
            Operator::Lexicographic => "lex",
            Operator::Natural => "natural",
            Operator::Null => "null",
        }
    }

    pub fn apply(self, m: &PreferenceModel, f: &Formula) -> RevisionOutcome {
        match self {
            Operator::Lexicographic => lex_revise(m, f),
            Operator::Natural => natural_revise(m, f),
            Operator::Null => null_change(m, f),
        }
    }
}

impl FromStr for Operator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lex" | "lexicographic" => Ok(Operator::Lexicographic),
            "natural" => Ok(Operator::Natural),
            "null" => Ok(Operator::Null),
            other => Err(format!("unknown operator `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum OperatorTag {
    Semantic(Operator),
    /// Operator induced by the named graph transformation.
    Induced(String),
}

impl fmt::Display for OperatorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorTag::Semantic(op) => write!(f, "{}", op.name()),
            OperatorTag::Induced(name) => write!(f, "induced({name})"),
        }
    }
}

/// Result of a dynamic operator: only the order differs from the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RevisionOutcome {
    pub model: PreferenceModel,
    pub operator: OperatorTag,
    pub formula: Formula,
}

fn revise_with(
    m: &PreferenceModel,
    f: &Formula,
    op: Operator,
    rule: impl Fn(usize, usize) -> bool,
) -> RevisionOutcome {
    let leq = Relation::from_fn(m.len(), rule);
    let model = m
        .with_relation(leq)
        .expect("revision operators preserve preorder invariants");
    RevisionOutcome {
        model,
        operator: OperatorTag::Semantic(op),
        formula: f.clone(),
    }
}

/// Lexicographic revision: every `f`-world moves strictly below every
/// `¬f`-world; order inside each block is kept.
pub fn lex_revise(m: &PreferenceModel, f: &Formula) -> RevisionOutcome {
    let ext = m.extension(f);
    revise_with(m, f, Operator::Lexicographic, |a, b| {
        match (ext[a], ext[b]) {
            (true, true) | (false, false) => m.leq(a, b),
            (true, false) => true,
            (false, true) => false,
        }
    })
}

/// Natural revision: the minimal `f`-worlds become the most preferred
/// worlds; every other comparison is kept.
pub fn natural_revise(m: &PreferenceModel, f: &Formula) -> RevisionOutcome {
    let mut best = vec![false; m.len()];
    for w in m.min_worlds(f) {
        best[w] = true;
    }
    revise_with(m, f, Operator::Natural, |a, b| {
        best[a] || (m.leq(a, b) && !best[a] && !best[b])
    })
}

pub fn null_change(m: &PreferenceModel, f: &Formula) -> RevisionOutcome {
    RevisionOutcome {
        model: m.clone(),
        operator: OperatorTag::Semantic(Operator::Null),
        formula: f.clone(),
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::formula::parse;

    pub fn pq() -> Signature {
        Signature::new(["p", "q"]).unwrap()
    }

    pub fn world(sig: &Signature, id: &str, trues: &[&str]) -> World {
        World::new(id, Valuation::from_true_atoms(sig, trues).unwrap())
    }

    pub fn canonical_worlds(sig: &Signature) -> Vec<World> {
        sig.valuations()
            .map(|v| World::new(sig.world_name(v), v))
            .collect()
    }

    /// w_pq < w_p < w_q < w_0
    pub fn chain() -> PreferenceModel {
        let sig = pq();
        PreferenceModel::chain(sig.clone(), canonical_worlds(&sig)).unwrap()
    }

    pub fn f(s: &str) -> Formula {
        parse(s, &pq()).unwrap()
    }

    /// Ids from best to worst, ties grouped; panics on incomparable worlds.
    pub fn ranking(m: &PreferenceModel) -> Vec<Vec<String>> {
        m.layers()
            .into_iter()
            .map(|l| l.into_iter().map(|w| w.id.clone()).collect())
            .collect()
    }
}

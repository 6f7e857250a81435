//! Prioritized graphs of formulas, the preference orders they induce, and
//! iterated belief revision on both representations.
//!
//! A [`PGraph`] is a set of formula-labelled nodes under a strict partial
//! order. It induces a preorder over any set of worlds ([`induced_order`]).
//! Revision operators act on preference models directly ([`Operator`]) or on
//! graphs through a [`GraphTransformation`], and [`postulates`] checks the
//! usual iterated revision postulates on the resulting models.

pub mod formula;
pub mod harness;
pub mod par;
pub mod pgraph;
pub mod postulates;
pub mod relation;
pub mod semantics;
pub mod textfmt;
pub mod transforms;

pub use formula::{entails, equivalent, parse, Formula, FormulaError, Signature, Valuation};
pub use par::Execution;
pub use pgraph::{
    canonical_model, graph_from_preorder, graphs_equivalent, induce_model, induced_order,
    GraphError, Node, PGraph,
};
pub use postulates::{check, check_all, Postulate, PostulateReport};
pub use relation::Relation;
pub use semantics::{
    lex_revise, natural_revise, null_change, ModelError, Operator, PreferenceModel,
    RevisionOutcome, World,
};
pub use transforms::{apply_induced, prefix, GraphTransformation, Prefix, Registry};

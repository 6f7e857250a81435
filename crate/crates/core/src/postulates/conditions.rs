//! Syntactic conditions on a (graph, formula, transformed graph) triple
//! that are sufficient for the induced operator to satisfy DP-1..4, Rec
//! and Ind.
//!
//! `Φ, ≺` are the original graph's labels and priority, `Φ†, ≺†` the
//! transformed graph's. Quantifiers range over node labels, duplicates
//! included. `≡` and `⊢` are decided over the graphs' shared signature.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::formula::{Formula, FormulaError, TruthTable};
use crate::pgraph::PGraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConditionError {
    #[error("graphs are over different signatures")]
    SignatureMismatch,
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Condition {
    /// Sufficient for DP-1.
    P1,
    /// Sufficient for DP-2.
    P2,
    /// Sufficient for DP-3.
    P3,
    /// Sufficient for DP-4.
    P4,
    /// Sufficient for Rec.
    P5,
    /// Sufficient for Ind.
    P6,
}

impl Condition {
    pub const ALL: [Condition; 6] = [
        Condition::P1,
        Condition::P2,
        Condition::P3,
        Condition::P4,
        Condition::P5,
        Condition::P6,
    ];

    /// The postulate this condition guarantees.
    pub fn postulate(self) -> super::Postulate {
        use super::Postulate;
        match self {
            Condition::P1 => Postulate::Dp1,
            Condition::P2 => Postulate::Dp2,
            Condition::P3 => Postulate::Dp3,
            Condition::P4 => Postulate::Dp4,
            Condition::P5 => Postulate::Rec,
            Condition::P6 => Postulate::Ind,
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}({})", self, self.postulate())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Original,
    Transformed,
}

/// The node for which a clause failed; `node` is `None` for clauses with no
/// universally quantified node (Rec's existence clause).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionWitness {
    pub clause: u8,
    pub side: Side,
    pub node: Option<String>,
    pub label: Option<Formula>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub condition: Condition,
    pub holds: bool,
    pub witnesses: Vec<ConditionWitness>,
}

impl ConditionReport {
    /// Re-runs each failing clause on its witness node.
    pub fn reverify(&self, g: &PGraph, f: &Formula, g2: &PGraph) -> Result<bool, ConditionError> {
        let ctx = Ctx::new(g, f, g2)?;
        Ok(self.holds == self.witnesses.is_empty()
            && self.witnesses.iter().all(|w| {
                let idx = w.node.as_ref().and_then(|id| match w.side {
                    Side::Original => g.index_of(id),
                    Side::Transformed => g2.index_of(id),
                });
                !ctx.clause(self.condition, w.clause, idx)
            }))
    }
}

/// Precomputed truth tables for one triple.
struct Ctx<'a> {
    g: &'a PGraph,
    g2: &'a PGraph,
    phi: TruthTable,
    not_phi: TruthTable,
    /// Labels of Φ.
    t: Vec<TruthTable>,
    /// Labels of Φ†.
    u: Vec<TruthTable>,
}

impl<'a> Ctx<'a> {
    fn new(g: &'a PGraph, f: &Formula, g2: &'a PGraph) -> Result<Self, ConditionError> {
        if g.signature() != g2.signature() {
            return Err(ConditionError::SignatureMismatch);
        }
        let phi = f.truth_table(g.signature())?;
        Ok(Ctx {
            g,
            g2,
            not_phi: phi.not(),
            phi,
            t: g.label_tables()?,
            u: g2.label_tables()?,
        })
    }

    fn orig(&self) -> std::ops::Range<usize> {
        0..self.t.len()
    }

    fn trans(&self) -> std::ops::Range<usize> {
        0..self.u.len()
    }

    fn prec(&self, a: usize, b: usize) -> bool {
        self.g.precedes(a, b)
    }

    fn prec2(&self, a: usize, b: usize) -> bool {
        self.g2.precedes(a, b)
    }

    fn is_phi(&self, x: &TruthTable) -> bool {
        *x == self.phi
    }

    /// `ctx ∧ a ≡ ctx ∧ b`
    fn same_under(ctx: &TruthTable, a: &TruthTable, b: &TruthTable) -> bool {
        ctx.and(a) == ctx.and(b)
    }

    /// `ctx ∧ a ⊢ b`
    fn entails_under(ctx: &TruthTable, a: &TruthTable, b: &TruthTable) -> bool {
        ctx.and(a).entails(b)
    }

    /// Pairing used by P3, P4 and P6: `φ ∧ x ⊢ y` and `¬φ ∧ y ⊢ x`.
    fn bridged(&self, x: &TruthTable, y: &TruthTable) -> bool {
        Self::entails_under(&self.phi, x, y) && Self::entails_under(&self.not_phi, y, x)
    }

    /// Clauses and the side their universal quantifier ranges over.
    fn clauses(cond: Condition) -> &'static [(u8, Option<Side>)] {
        match cond {
            Condition::P1 | Condition::P2 => {
                &[(1, Some(Side::Original)), (2, Some(Side::Transformed))]
            }
            Condition::P3 => &[(1, Some(Side::Original))],
            Condition::P4 | Condition::P6 => &[(1, Some(Side::Transformed))],
            Condition::P5 => &[(1, Some(Side::Transformed)), (2, None)],
        }
    }

    /// Whether `clause` of `cond` holds for the node at `xi` (on the
    /// clause's side).
    fn clause(&self, cond: Condition, clause: u8, xi: Option<usize>) -> bool {
        let phi = &self.phi;
        let nphi = &self.not_phi;
        let (t, u) = (&self.t, &self.u);
        match (cond, clause, xi) {
            // ∀ξ∈Φ ∃ξ'∈Φ†: φ∧ξ ≡ φ∧ξ' and every ψ' ≺† ξ' is ≡ φ or matches
            // some ψ ≺ ξ with φ∧ψ ≡ φ∧ψ'.
            (Condition::P1, 1, Some(x)) => self.trans().any(|x2| {
                Self::same_under(phi, &t[x], &u[x2])
                    && self.trans().filter(|p2| self.prec2(*p2, x2)).all(|p2| {
                        self.is_phi(&u[p2])
                            || self
                                .orig()
                                .any(|p| Self::same_under(phi, &t[p], &u[p2]) && self.prec(p, x))
                    })
            }),
            // ∀ξ∈Φ†: ξ ≡ φ or ∃ξ'∈Φ: φ∧ξ ≡ φ∧ξ' and every ψ' ≺ ξ' matches
            // some ψ ≺† ξ with φ∧ψ ≡ φ∧ψ'.
            (Condition::P1, 2, Some(x)) => {
                self.is_phi(&u[x])
                    || self.orig().any(|x1| {
                        Self::same_under(phi, &u[x], &t[x1])
                            && self.orig().filter(|p1| self.prec(*p1, x1)).all(|p1| {
                                self.trans().any(|p| {
                                    Self::same_under(phi, &u[p], &t[p1]) && self.prec2(p, x)
                                })
                            })
                    })
            }
            // As P1 clause 1 under ¬φ, predecessor direction from Φ to Φ†.
            (Condition::P2, 1, Some(x)) => self.trans().any(|x2| {
                Self::same_under(nphi, &t[x], &u[x2])
                    && self.orig().filter(|p| self.prec(*p, x)).all(|p| {
                        self.trans()
                            .any(|p2| Self::same_under(nphi, &t[p], &u[p2]) && self.prec2(p2, x2))
                    })
            }),
            (Condition::P2, 2, Some(x)) => {
                self.is_phi(&u[x])
                    || self.orig().any(|x1| {
                        Self::same_under(nphi, &u[x], &t[x1])
                            && self.trans().filter(|p| self.prec2(*p, x)).all(|p| {
                                self.is_phi(&u[p])
                                    || self.orig().any(|p1| {
                                        Self::same_under(nphi, &u[p], &t[p1]) && self.prec(p1, x1)
                                    })
                            })
                    })
            }
            // ∀ξ∈Φ ∃ξ'∈Φ†: bridged(ξ, ξ') and every ψ' ≺† ξ' is ≡ φ or
            // bridged from some ψ ≺ ξ.
            (Condition::P3, 1, Some(x)) => self.trans().any(|x2| {
                self.bridged(&t[x], &u[x2])
                    && self.trans().filter(|p2| self.prec2(*p2, x2)).all(|p2| {
                        self.is_phi(&u[p2])
                            || self
                                .orig()
                                .any(|p| self.bridged(&t[p], &u[p2]) && self.prec(p, x))
                    })
            }),
            // ∀ξ∈Φ†: ξ ≡ φ or ∃ξ'∈Φ: bridged(ξ', ξ) and every ψ' ≺ ξ' is
            // bridged to some ψ ≺† ξ.
            (Condition::P4, 1, Some(x)) => {
                self.is_phi(&u[x])
                    || self.orig().any(|x1| {
                        self.bridged(&t[x1], &u[x])
                            && self.orig().filter(|p1| self.prec(*p1, x1)).all(|p1| {
                                self.trans()
                                    .any(|p| self.bridged(&t[p1], &u[p]) && self.prec2(p, x))
                            })
                    })
            }
            // ∀ξ∈Φ†: ξ ≡ ⊤, ξ ≡ ⊥, ξ ⊢ φ, or some consistent ψ ≺† ξ has ψ ⊢ φ.
            (Condition::P5, 1, Some(x)) => {
                u[x].is_full()
                    || u[x].is_empty()
                    || u[x].entails(phi)
                    || self
                        .trans()
                        .any(|p| self.prec2(p, x) && !u[p].is_empty() && u[p].entails(phi))
            }
            // ∃ξ∈Φ: ξ ⊢ φ.
            (Condition::P5, 2, None) => t.iter().any(|l| l.entails(phi)),
            // ∀ξ'∈Φ†: ξ' ≡ φ or ∃ξ∈Φ with (a) φ∧ξ ⊢ ξ', (b) ¬φ∧ξ' ⊢ ξ,
            // (c) every ψ' ≺† ξ' bridged from some ψ ≺ ξ, and (d) if ξ' ⊬ φ
            // some ψ' ≺† ξ' is ≡ φ.
            (Condition::P6, 1, Some(x)) => {
                self.is_phi(&u[x])
                    || self.orig().any(|x1| {
                        self.bridged(&t[x1], &u[x])
                            && self.trans().filter(|p2| self.prec2(*p2, x)).all(|p2| {
                                self.orig()
                                    .any(|p1| self.bridged(&t[p1], &u[p2]) && self.prec(p1, x1))
                            })
                            && (u[x].entails(phi)
                                || self
                                    .trans()
                                    .any(|p2| self.prec2(p2, x) && self.is_phi(&u[p2])))
                    })
            }
            _ => false,
        }
    }

    fn report(&self, cond: Condition) -> ConditionReport {
        let mut witnesses = Vec::new();
        for &(clause, side) in Self::clauses(cond) {
            match side {
                None => {
                    if !self.clause(cond, clause, None) {
                        witnesses.push(ConditionWitness {
                            clause,
                            side: Side::Original,
                            node: None,
                            label: None,
                        });
                    }
                }
                Some(side) => {
                    let graph = match side {
                        Side::Original => self.g,
                        Side::Transformed => self.g2,
                    };
                    for (i, node) in graph.nodes().iter().enumerate() {
                        if !self.clause(cond, clause, Some(i)) {
                            witnesses.push(ConditionWitness {
                                clause,
                                side,
                                node: Some(node.id.clone()),
                                label: Some(node.label.clone()),
                            });
                        }
                    }
                }
            }
        }
        ConditionReport {
            condition: cond,
            holds: witnesses.is_empty(),
            witnesses,
        }
    }
}

/// Checks one condition on `(g, f, g2)`.
pub fn check_condition(
    cond: Condition,
    g: &PGraph,
    f: &Formula,
    g2: &PGraph,
) -> Result<ConditionReport, ConditionError> {
    Ok(Ctx::new(g, f, g2)?.report(cond))
}

/// All six conditions, sharing the truth-table precomputation.
pub fn check_conditions(
    g: &PGraph,
    f: &Formula,
    g2: &PGraph,
) -> Result<Vec<ConditionReport>, ConditionError> {
    let ctx = Ctx::new(g, f, g2)?;
    Ok(Condition::ALL.iter().map(|c| ctx.report(*c)).collect())
}

macro_rules! condition_fn {
    ($($name:ident => $c:expr),* $(,)?) => {
        $(
            pub fn $name(g: &PGraph, f: &Formula, g2: &PGraph) -> Result<ConditionReport, ConditionError> {
                check_condition($c, g, f, g2)
            }
        )*
    };
}

condition_fn! {
    cond_p1 => Condition::P1,
    cond_p2 => Condition::P2,
    cond_p3 => Condition::P3,
    cond_p4 => Condition::P4,
    cond_rec => Condition::P5,
    cond_ind => Condition::P6,
}

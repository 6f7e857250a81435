//! Executable reproductions and exhaustive sweeps.
//!
//! Each demo returns a [`DemoReport`]: narrative steps plus a list of
//! assertions, every one of which is evaluated while the demo runs.

use serde::Serialize;
use thiserror::Error;

use crate::formula::{Formula, FormulaError, Signature, TruthTable, Valuation};
use crate::par::Execution;
use crate::pgraph::enumerate::{enumerate_graphs, preorders};
use crate::pgraph::{
    canonical_model, canonical_worlds, graph_from_preorder, induce_model, induced_order,
    GraphError, PGraph,
};
use crate::postulates::conditions::{check_conditions, ConditionError};
use crate::postulates::{check, Postulate, PostulateReport};
use crate::relation::Relation;
use crate::semantics::{lex_revise, natural_revise, ModelError, Operator, PreferenceModel, World};
use crate::transforms::{describe, GraphTransformation};

/// Largest graph size accepted by [`sweep_harmony`].
pub const MAX_SWEEP_NODES: usize = 3;
/// Largest signature accepted by [`sweep_harmony`] and [`demo_fact_min`].
pub const MAX_SWEEP_ATOMS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("{what} {value} exceeds the bound {bound}")]
    ResourceBound {
        what: &'static str,
        value: usize,
        bound: usize,
    },
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Condition(#[from] ConditionError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Assertion {
    pub description: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DemoReport {
    pub id: String,
    pub steps: Vec<String>,
    pub assertions: Vec<Assertion>,
    pub verdict: bool,
}

impl DemoReport {
    fn new(id: &str) -> Self {
        DemoReport {
            id: id.to_string(),
            steps: Vec::new(),
            assertions: Vec::new(),
            verdict: true,
        }
    }

    fn step(&mut self, s: impl Into<String>) {
        self.steps.push(s.into());
    }

    fn assert(&mut self, description: impl Into<String>, holds: bool) -> bool {
        self.assertions.push(Assertion {
            description: description.into(),
            holds,
        });
        self.verdict &= holds;
        holds
    }

    /// Numbered plain-text rendering.
    pub fn render(&self) -> String {
        let mut out = format!("demo {}\n", self.id);
        for s in &self.steps {
            out.push_str(&format!("  - {s}\n"));
        }
        for (i, a) in self.assertions.iter().enumerate() {
            let mark = if a.holds { "ok" } else { "FAILED" };
            out.push_str(&format!("  {}. [{mark}] {}\n", i + 1, a.description));
        }
        out.push_str(&format!("verdict: {}\n", self.verdict));
        out
    }
}

/// Strict chain rendering like `w2 < w1 < w3`; `None` if not a strict chain.
pub fn chain_string(m: &PreferenceModel) -> Option<String> {
    let layers = m.layers();
    if layers.iter().any(|l| l.len() != 1) {
        return None;
    }
    let ids: Vec<&str> = layers.iter().map(|l| l[0].id.as_str()).collect();
    let s = ids.join(" < ");
    // layers of a partial order can look like a chain; confirm totality
    let total = (0..m.len()).all(|a| (0..m.len()).all(|b| m.leq(a, b) || m.leq(b, a)));
    total.then_some(s)
}

/// Reproduces the argument that no relevant graph transformation satisfies
/// both Faith and CB: one graph induces a 3-world and a 2-world model whose
/// Faith+CB revisions by `p` order the same two valuations oppositely.
pub fn demo_fact_cb() -> Result<DemoReport, HarnessError> {
    let sig = Signature::new(["p", "q"])?;
    let p = Formula::atom("p");
    let val = |trues: &[&str]| Valuation::from_true_atoms(&sig, trues);
    let w1 = World::new("w1", val(&["q"])?);
    let w2 = World::new("w2", val(&["p"])?);
    let w3 = World::new("w3", val(&["p", "q"])?);
    let m = PreferenceModel::chain(sig.clone(), vec![w1.clone(), w2, w3.clone()])?;
    let m_small = PreferenceModel::chain(sig.clone(), vec![w1.clone(), w3.clone()])?;

    let mut r = DemoReport::new("fact-cb");
    r.step("M: w1 (~p & q) < w2 (p & ~q) < w3 (p & q); M': w1 < w3 with the same valuations");
    let g = graph_from_preorder(&m)?;
    r.step(format!("inducing graph G = {}", describe(&g)));
    let induces_m = induce_model(&g, m.worlds().to_vec())? == m;
    let induces_small = induce_model(&g, m_small.worlds().to_vec())? == m_small;
    r.assert("G induces both M and M'", induces_m && induces_small);

    let t1 = natural_revise(&m, &p).model;
    let t2 = natural_revise(&m_small, &p).model;
    let s1 = chain_string(&t1).unwrap_or_else(|| "<not a chain>".into());
    let s2 = chain_string(&t2).unwrap_or_else(|| "<not a chain>".into());
    r.step(format!("Faith+CB target for M by p: {s1}"));
    r.step(format!("Faith+CB target for M' by p: {s2}"));
    r.assert("revising M by p yields w2 < w1 < w3", s1 == "w2 < w1 < w3");
    r.assert("revising M' by p yields w3 < w1", s2 == "w3 < w1");

    let faith_cb = [(&m, &t1), (&m_small, &t2)].iter().all(|(before, after)| {
        [Postulate::Faith, Postulate::Cb]
            .iter()
            .all(|post| check(*post, before, &p, after).is_ok_and(|rep| rep.holds))
    });
    r.assert(
        "natural revision satisfies Faith and CB on both models",
        faith_cb,
    );

    // Both targets restricted to {w1, w3}, which carry the same valuations
    // in both models.
    let (i1, i3) = (
        t1.index_of("w1").expect("w1"),
        t1.index_of("w3").expect("w3"),
    );
    let (j1, j3) = (
        t2.index_of("w1").expect("w1"),
        t2.index_of("w3").expect("w3"),
    );
    let target1_w1_first = t1.less(i1, i3);
    let target2_w3_first = t2.less(j3, j1);
    r.step(format!(
        "restricted to (~p & q, p & q): target 1 has w1 < w3 = {target1_w1_first}, target 2 has w3 < w1 = {target2_w3_first}"
    ));
    // Any induced order compares two worlds by their valuations alone, so
    // the output graph fixes a single comparison of the pair for both
    // models. Re-derive that over every graph with up to 2 nodes built from
    // a formula pool, on the two world sets.
    let pool: Vec<Formula> = ["p", "q", "~p", "~q", "p & q", "p | q", "~p & q", "p & ~q"]
        .iter()
        .map(|s| crate::formula::parse(s, &sig))
        .collect::<Result<_, _>>()?;
    let pair = [w1.clone(), w3.clone()];
    let big = [w1.clone(), World::new("w2", val(&["p"])?), w3.clone()];
    let graphs = enumerate_graphs(&sig, &pool, 2);
    let mut realizes_both = 0;
    let mut valuation_determined = true;
    for h in &graphs {
        let on_pair = induced_order(h, &pair);
        let on_big = induced_order(h, &big).restrict(&[0, 2]);
        valuation_determined &= on_pair == on_big;
        let first = on_big.contains(0, 1) && !on_big.contains(1, 0);
        let second = on_pair.contains(1, 0) && !on_pair.contains(0, 1);
        if first && second {
            realizes_both += 1;
        }
    }
    r.step(format!(
        "checked {} graphs: induced comparison of the pair is identical on both world sets",
        graphs.len()
    ));
    r.assert(
        "targets conflict on (~p & q, p & q) and no graph orders that pair both ways",
        target1_w1_first && target2_w3_first && valuation_determined && realizes_both == 0,
    );
    Ok(r)
}

/// Outcome of [`demo_fact_min`]'s search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinWitness {
    /// World ids of the two induced models.
    pub first: Vec<String>,
    pub second: Vec<String>,
    /// Minimal-world valuations (as minterms) in each model.
    pub first_min: Vec<String>,
    pub second_min: Vec<String>,
    /// A valuation present in both models, minimal in exactly one.
    pub conflict: String,
}

/// Searches for two models induced by `g` (subsets of the canonical worlds)
/// sharing a valuation that is a minimal `f`-world in one and not in the
/// other. Such a pair shows no formula can pick out the minimal `f`-worlds of
/// every model induced by `g`.
pub fn demo_fact_min(
    g: &PGraph,
    f: &Formula,
) -> Result<(DemoReport, Option<MinWitness>), HarnessError> {
    let sig = g.signature().clone();
    if sig.len() > MAX_SWEEP_ATOMS {
        return Err(HarnessError::ResourceBound {
            what: "signature size",
            value: sig.len(),
            bound: MAX_SWEEP_ATOMS,
        });
    }
    sig.check(f)?;
    let worlds = canonical_worlds(&sig)?;
    let n = worlds.len();
    let mut r = DemoReport::new("fact-min");
    r.step(format!("graph {}; formula {f}", describe(g)));

    // Subsets by size, then by bit pattern; the full set comes last.
    let mut subsets: Vec<u32> = (1u32..(1 << n)).collect();
    subsets.sort_by_key(|s| (s.count_ones(), *s));
    let min_vals = |mask: u32| -> Result<(Vec<usize>, Vec<Valuation>), HarnessError> {
        let keep: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let model = induce_model(g, keep.iter().map(|i| worlds[*i].clone()).collect())?;
        let mins = model
            .min_worlds(f)
            .into_iter()
            .map(|i| model.world(i).valuation)
            .collect();
        Ok((keep, mins))
    };
    let full = (1u32 << n) - 1;
    let (full_keep, full_min) = min_vals(full)?;
    let mut found = None;
    'outer: for &mask in &subsets {
        let (keep, mins) = min_vals(mask)?;
        for &i in &keep {
            let v = worlds[i].valuation;
            if mins.contains(&v) != full_min.contains(&v) && full_keep.contains(&i) {
                found = Some((keep, mins, v));
                break 'outer;
            }
        }
    }
    let Some((keep, mins, conflict)) = found else {
        r.step("no pair of induced models disagrees on a shared valuation");
        r.verdict = false;
        return Ok((r, None));
    };
    let names = |idx: &[usize]| {
        idx.iter()
            .map(|i| worlds[*i].id.clone())
            .collect::<Vec<_>>()
    };
    let terms = |vals: &[Valuation]| {
        vals.iter()
            .map(|v| sig.minterm(*v).to_string())
            .collect::<Vec<_>>()
    };
    let witness = MinWitness {
        first: names(&full_keep),
        second: names(&keep),
        first_min: terms(&full_min),
        second_min: terms(&mins),
        conflict: sig.minterm(conflict).to_string(),
    };
    r.step(format!(
        "M1 = {{{}}} has minimal {f}-valuations {{{}}}",
        witness.first.join(", "),
        witness.first_min.join(", ")
    ));
    r.step(format!(
        "M2 = {{{}}} has minimal {f}-valuations {{{}}}",
        witness.second.join(", "),
        witness.second_min.join(", ")
    ));
    r.assert(
        format!(
            "valuation {} is minimal in exactly one model",
            witness.conflict
        ),
        full_min.contains(&conflict) != mins.contains(&conflict),
    );
    // Brute force over every extension a formula over the signature can have.
    let table_count = 1u64 << sig.valuation_count();
    let selects = |ext: u64, present: &[usize], min: &[Valuation]| {
        present.iter().all(|i| {
            let v = worlds[*i].valuation;
            (ext >> v.bits() & 1 == 1) == min.contains(&v)
        })
    };
    let selecting_both = (0..table_count)
        .filter(|ext| selects(*ext, &full_keep, &full_min) && selects(*ext, &keep, &mins))
        .count();
    r.step(format!(
        "checked all {table_count} formula extensions over {sig}"
    ));
    r.assert(
        "no formula selects exactly the minimal worlds in both models",
        selecting_both == 0,
    );
    Ok((r, Some(witness)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HarmonyMismatch {
    pub graph: String,
    pub formula: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HarmonyReport {
    pub graphs: usize,
    pub instances: usize,
    pub mismatches: Vec<HarmonyMismatch>,
}

/// For every graph up to `bound` nodes over `pool` and every pool formula,
/// compares the canonical model of the prefixed graph with the
/// lexicographic revision of the graph's canonical model.
pub fn sweep_harmony(
    bound: usize,
    sig: &Signature,
    pool: &[Formula],
    execution: Execution,
) -> Result<HarmonyReport, HarnessError> {
    if bound > MAX_SWEEP_NODES {
        return Err(HarnessError::ResourceBound {
            what: "node bound",
            value: bound,
            bound: MAX_SWEEP_NODES,
        });
    }
    if sig.len() > MAX_SWEEP_ATOMS {
        return Err(HarnessError::ResourceBound {
            what: "signature size",
            value: sig.len(),
            bound: MAX_SWEEP_ATOMS,
        });
    }
    for f in pool {
        sig.check(f)?;
    }
    let graphs = enumerate_graphs(sig, pool, bound);
    let results = execution.map(&graphs, |g| -> Result<Vec<HarmonyMismatch>, GraphError> {
        let base = canonical_model(g)?;
        let mut bad = Vec::new();
        for f in pool {
            let via_graph = canonical_model(&crate::transforms::prefix(g, f))?;
            if via_graph != lex_revise(&base, f).model {
                bad.push(HarmonyMismatch {
                    graph: describe(g),
                    formula: f.clone(),
                });
            }
        }
        Ok(bad)
    });
    let mut mismatches = Vec::new();
    for r in results {
        mismatches.extend(r?);
    }
    Ok(HarmonyReport {
        graphs: graphs.len(),
        instances: graphs.len() * pool.len(),
        mismatches,
    })
}

impl HarmonyReport {
    pub fn to_demo(&self) -> DemoReport {
        let mut r = DemoReport::new("harmony");
        r.step(format!(
            "{} graphs x formulas = {} instances",
            self.graphs, self.instances
        ));
        for m in &self.mismatches {
            r.step(format!("mismatch: graph {} by {}", m.graph, m.formula));
        }
        r.assert(
            "prefixing the graph induces the lexicographic revision in every instance",
            self.mismatches.is_empty(),
        );
        r
    }
}

/// Every preorder on `k` worlds, for every choice of `k` distinct
/// valuations over `sig`.
pub fn all_preorder_models(
    sig: &Signature,
    k: usize,
) -> Result<Vec<PreferenceModel>, HarnessError> {
    let worlds = canonical_worlds(sig)?;
    let orders = preorders(k);
    let mut out = Vec::new();
    for mask in 0u32..(1 << worlds.len()) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let chosen: Vec<World> = (0..worlds.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| worlds[i].clone())
            .collect();
        for o in &orders {
            out.push(PreferenceModel::new(
                sig.clone(),
                chosen.clone(),
                o.clone(),
            )?);
        }
    }
    Ok(out)
}

/// A postulate failure found by [`postulate_suite`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteViolation {
    pub model: String,
    pub formula: Formula,
    pub report: PostulateReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub operator: Operator,
    pub postulate: Postulate,
    pub checked: usize,
    pub violations: Vec<SuiteViolation>,
}

/// Runs `op` on every (model, formula) pair and checks each postulate.
pub fn postulate_suite(
    op: Operator,
    models: &[PreferenceModel],
    formulas: &[Formula],
    postulates: &[Postulate],
    execution: Execution,
) -> Result<Vec<SuiteResult>, HarnessError> {
    let per_model = execution.map(
        models,
        |m| -> Result<Vec<Vec<SuiteViolation>>, ModelError> {
            let mut by_postulate = vec![Vec::new(); postulates.len()];
            for f in formulas {
                let after = op.apply(m, f).model;
                for (k, p) in postulates.iter().enumerate() {
                    let report = check(*p, m, f, &after)?;
                    if !report.holds {
                        by_postulate[k].push(SuiteViolation {
                            model: model_summary(m),
                            formula: f.clone(),
                            report,
                        });
                    }
                }
            }
            Ok(by_postulate)
        },
    );
    let mut results: Vec<SuiteResult> = postulates
        .iter()
        .map(|p| SuiteResult {
            operator: op,
            postulate: *p,
            checked: models.len() * formulas.len(),
            violations: Vec::new(),
        })
        .collect();
    for m in per_model {
        for (k, v) in m?.into_iter().enumerate() {
            results[k].violations.extend(v);
        }
    }
    Ok(results)
}

/// Compact one-line model rendering: worlds then strict covering edges and
/// ties.
pub fn model_summary(m: &PreferenceModel) -> String {
    let r: &Relation = m.relation();
    let mut parts: Vec<String> = r
        .covering_pairs()
        .into_iter()
        .map(|(a, b)| format!("{}<{}", m.world(a).id, m.world(b).id))
        .collect();
    for class in r.tie_classes() {
        if class.len() > 1 {
            let ids: Vec<&str> = class.iter().map(|i| m.world(*i).id.as_str()).collect();
            parts.push(ids.join("="));
        }
    }
    let ids: Vec<&str> = m.worlds().iter().map(|w| w.id.as_str()).collect();
    format!("[{}] {{{}}}", ids.join(" "), parts.join(", "))
}

/// Result of checking each syntactic condition against the matching
/// semantic postulate over a sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossCheckRow {
    pub postulate: Postulate,
    /// Instances where the condition accepted.
    pub accepted: usize,
    /// Accepted instances where the postulate failed.
    pub implication_violations: Vec<String>,
    /// Instances where the postulate held but the condition did not accept.
    pub converse_failures: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossCheckReport {
    pub transformation: String,
    pub instances: usize,
    pub rows: Vec<CrossCheckRow>,
}

/// For each graph up to `bound` nodes over `pool` and each pool formula,
/// evaluates all six conditions on `(g, f, t(g, f))` and the matching
/// postulates on the canonical models of `g` and `t(g, f)`.
pub fn condition_crosscheck(
    t: &dyn GraphTransformation,
    bound: usize,
    sig: &Signature,
    pool: &[Formula],
    execution: Execution,
) -> Result<CrossCheckReport, HarnessError> {
    use crate::postulates::conditions::Condition;
    let graphs = enumerate_graphs(sig, pool, bound);
    let per_graph = execution.map(&graphs, |g| -> Result<Vec<[bool; 2]>, HarnessError> {
        let before = canonical_model(g)?;
        let mut rows = Vec::new();
        for f in pool {
            let g2 = t.apply(g, f);
            let after = canonical_model(&g2)?;
            let conds = check_conditions(g, f, &g2)?;
            for (c, cond) in Condition::ALL.iter().zip(conds) {
                let sem = check(c.postulate(), &before, f, &after)?;
                rows.push([cond.holds, sem.holds]);
            }
        }
        Ok(rows)
    });
    let mut rows: Vec<CrossCheckRow> = Condition::ALL
        .iter()
        .map(|c| CrossCheckRow {
            postulate: c.postulate(),
            accepted: 0,
            implication_violations: Vec::new(),
            converse_failures: 0,
        })
        .collect();
    let k = Condition::ALL.len();
    for (gi, res) in per_graph.into_iter().enumerate() {
        for (j, [cond, sem]) in res?.into_iter().enumerate() {
            let row = &mut rows[j % k];
            if cond {
                row.accepted += 1;
                if !sem {
                    let f = &pool[j / k];
                    row.implication_violations
                        .push(format!("graph {} by {f}", describe(&graphs[gi])));
                }
            } else if sem {
                row.converse_failures += 1;
            }
        }
    }
    Ok(CrossCheckReport {
        transformation: t.name().to_string(),
        instances: graphs.len() * pool.len(),
        rows,
    })
}

/// Truth table of a formula as a set of minterm strings; handy for reports.
pub fn extension_terms(sig: &Signature, t: &TruthTable) -> Vec<String> {
    sig.valuations()
        .filter(|v| t.contains(*v))
        .map(|v| sig.minterm(v).to_string())
        .collect()
}

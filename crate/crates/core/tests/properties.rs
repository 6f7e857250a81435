mod common;

use common::sig;
use pgraph_core::formula::{entails, parse, Formula, Signature, Valuation};
use pgraph_core::pgraph::{canonical_worlds, graph_from_preorder, induced_order, Node, PGraph};
use pgraph_core::relation::Relation;
use pgraph_core::semantics::{lex_revise, natural_revise, PreferenceModel, World};
use pgraph_core::textfmt::{dump_graph, dump_model, parse_graph, parse_model};
use proptest::prelude::*;

fn pqr() -> Signature {
    sig(&["p", "q", "r"])
}

fn arb_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        1 => Just(Formula::Top),
        1 => Just(Formula::Bottom),
        6 => prop::sample::select(vec!["p", "q", "r"]).prop_map(Formula::atom),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::iff(a, b)),
        ]
    })
}

/// Graph whose edges go from lower to higher index, selected by `mask`.
fn arb_graph() -> impl Strategy<Value = PGraph> {
    (prop::collection::vec(arb_formula(), 0..=4), any::<u8>()).prop_map(|(labels, mask)| {
        let n = labels.len();
        let nodes: Vec<Node> = labels
            .into_iter()
            .enumerate()
            .map(|(i, l)| Node::new(format!("n{i}"), l))
            .collect();
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        let edges = pairs
            .into_iter()
            .enumerate()
            .filter(|(k, _)| mask & (1 << k) != 0)
            .map(|(_, p)| p);
        PGraph::new(pqr(), nodes, edges).unwrap()
    })
}

/// World subset of the 8 valuations plus arbitrary generating pairs; the
/// reflexive-transitive closure of any relation is a preorder.
fn arb_model() -> impl Strategy<Value = PreferenceModel> {
    (
        1u8..=255,
        prop::collection::vec((0usize..8, 0usize..8), 0..12),
    )
        .prop_map(|(mask, pairs)| {
            let s = pqr();
            let worlds: Vec<World> = canonical_worlds(&s)
                .unwrap()
                .into_iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, w)| w)
                .collect();
            let n = worlds.len();
            let pairs = pairs.into_iter().map(|(a, b)| (a % n, b % n));
            PreferenceModel::from_pairs(s, worlds, pairs).unwrap()
        })
}

fn valuation_lookup<'a>(s: &'a Signature, v: Valuation) -> impl Fn(&str) -> bool + 'a {
    move |a: &str| v.get(s.index_of(a).unwrap())
}

/// Literal reading of the induced-order rule, independent of the library's
/// truth-table implementation.
fn induced_oracle(g: &PGraph, worlds: &[World]) -> Relation {
    let s = g.signature();
    let sat = |w: &World, f: &Formula| f.eval_with(&valuation_lookup(s, w.valuation));
    Relation::from_fn(worlds.len(), |a, b| {
        let (w, w2) = (&worlds[a], &worlds[b]);
        g.nodes().iter().enumerate().all(|(k, phi)| {
            !sat(w2, &phi.label)
                || sat(w, &phi.label)
                || g.nodes()
                    .iter()
                    .enumerate()
                    .any(|(j, psi)| g.precedes(j, k) && sat(w, &psi.label) && !sat(w2, &psi.label))
        })
    })
}

fn is_preorder_with_acyclic_strict_part(r: &Relation) -> bool {
    r.is_reflexive() && r.is_transitive() && r.strict_part().find_cycle().is_none()
}

proptest! {
    #[test]
    fn printed_formulas_parse_back(f in arb_formula()) {
        let text = f.to_string();
        prop_assert_eq!(parse(&text, &pqr()).unwrap(), f);
    }

    #[test]
    fn truth_table_matches_evaluation(f in arb_formula()) {
        let s = pqr();
        let t = f.truth_table(&s).unwrap();
        for v in s.valuations() {
            prop_assert_eq!(t.contains(v), f.eval_with(&valuation_lookup(&s, v)));
        }
    }

    #[test]
    fn entailment_is_a_preorder(a in arb_formula(), b in arb_formula(), c in arb_formula()) {
        let s = pqr();
        prop_assert!(entails(&a, &a, &s).unwrap());
        if entails(&a, &b, &s).unwrap() && entails(&b, &c, &s).unwrap() {
            prop_assert!(entails(&a, &c, &s).unwrap());
        }
        prop_assert!(entails(&Formula::and(a.clone(), b.clone()), &a, &s).unwrap());
        prop_assert!(entails(&a, &Formula::or(a.clone(), c), &s).unwrap());
    }

    #[test]
    fn substituting_equal_truth_values(f in arb_formula(), g in arb_formula()) {
        // Replacing atom r by a formula g agrees with evaluating f under the
        // valuation where r takes g's value.
        fn subst(f: &Formula, g: &Formula) -> Formula {
            match f {
                Formula::Atom(a) if a == "r" => g.clone(),
                Formula::Top | Formula::Bottom | Formula::Atom(_) => f.clone(),
                Formula::Not(x) => Formula::not(subst(x, g)),
                Formula::And(x, y) => Formula::and(subst(x, g), subst(y, g)),
                Formula::Or(x, y) => Formula::or(subst(x, g), subst(y, g)),
                Formula::Implies(x, y) => Formula::implies(subst(x, g), subst(y, g)),
                Formula::Iff(x, y) => Formula::iff(subst(x, g), subst(y, g)),
            }
        }
        let s = pqr();
        let r = s.index_of("r").unwrap();
        let h = subst(&f, &g);
        for v in s.valuations() {
            let v2 = v.with(r, g.eval(&s, v));
            prop_assert_eq!(h.eval(&s, v), f.eval(&s, v2));
        }
    }

    #[test]
    fn induced_orders_are_preorders(g in arb_graph()) {
        let worlds = canonical_worlds(g.signature()).unwrap();
        let r = induced_order(&g, &worlds);
        prop_assert!(is_preorder_with_acyclic_strict_part(&r));
        prop_assert_eq!(r, induced_oracle(&g, &worlds));
    }

    #[test]
    fn induced_order_depends_on_valuations_only(g in arb_graph(), mask in 1u8..=255) {
        let worlds = canonical_worlds(g.signature()).unwrap();
        let keep: Vec<usize> = (0..8).filter(|i| mask & (1 << i) != 0).collect();
        let sub: Vec<World> = keep.iter().map(|i| worlds[*i].clone()).collect();
        prop_assert_eq!(induced_order(&g, &sub), induced_order(&g, &worlds).restrict(&keep));
        // renamed worlds with the same valuations compare the same way
        let renamed: Vec<World> = sub.iter().enumerate().map(|(i, w)| World::new(format!("x{i}"), w.valuation)).collect();
        prop_assert_eq!(induced_order(&g, &renamed), induced_order(&g, &sub));
    }

    #[test]
    fn graph_from_preorder_round_trips(m in arb_model()) {
        let g = graph_from_preorder(&m).unwrap();
        prop_assert_eq!(&induced_order(&g, m.worlds()), m.relation());
    }

    #[test]
    fn lex_revision_is_idempotent_and_valid(m in arb_model(), f in arb_formula()) {
        let once = lex_revise(&m, &f).model;
        prop_assert!(is_preorder_with_acyclic_strict_part(once.relation()));
        prop_assert_eq!(lex_revise(&once, &f).model, once);
    }

    #[test]
    fn natural_revision_keeps_minimal_worlds(m in arb_model(), f in arb_formula()) {
        let after = natural_revise(&m, &f).model;
        prop_assert!(is_preorder_with_acyclic_strict_part(after.relation()));
        let mut before_min = m.min_worlds(&f);
        let mut after_min = after.min_worlds(&f);
        before_min.sort();
        after_min.sort();
        prop_assert_eq!(&before_min, &after_min);
        // minimal f-worlds sit at the bottom of the revised order
        for &w in &after_min {
            prop_assert!((0..after.len()).all(|v| after.leq(w, v)));
        }
    }

    #[test]
    fn lex_matches_oracle(m in arb_model(), f in arb_formula()) {
        let ext = m.extension(&f);
        let expected = Relation::from_fn(m.len(), |a, b| match (ext[a], ext[b]) {
            (true, false) => true,
            (false, true) => false,
            _ => m.leq(a, b),
        });
        prop_assert_eq!(lex_revise(&m, &f).model.relation().clone(), expected);
    }

    #[test]
    fn natural_matches_oracle(m in arb_model(), f in arb_formula()) {
        let ext = m.extension(&f);
        let min: Vec<bool> = (0..m.len())
            .map(|w| ext[w] && (0..m.len()).all(|v| !ext[v] || !m.less(v, w)))
            .collect();
        let expected = Relation::from_fn(m.len(), |a, b| min[a] || (m.leq(a, b) && !min[a] && !min[b]));
        prop_assert_eq!(natural_revise(&m, &f).model.relation().clone(), expected);
    }

    #[test]
    fn graph_files_round_trip(g in arb_graph()) {
        let again = parse_graph(&dump_graph(&g)).unwrap();
        prop_assert_eq!(again, g);
    }

    #[test]
    fn model_files_round_trip(m in arb_model()) {
        let again = parse_model(&dump_model(&m)).unwrap();
        prop_assert_eq!(again, m);
    }
}

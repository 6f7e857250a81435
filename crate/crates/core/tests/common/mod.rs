#![allow(dead_code)]

use pgraph_core::formula::{parse, Formula, Signature};
use pgraph_core::pgraph::{Node, PGraph};
use pgraph_core::semantics::{PreferenceModel, World};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn sig(atoms: &[&str]) -> Signature {
    Signature::new(atoms.iter().copied()).unwrap()
}

pub fn pq() -> Signature {
    sig(&["p", "q"])
}

pub fn formulas(sig: &Signature, texts: &[&str]) -> Vec<Formula> {
    texts.iter().map(|t| parse(t, sig).unwrap()).collect()
}

/// The five-formula pool used by the exhaustive sweeps.
pub fn sweep_pool() -> Vec<Formula> {
    formulas(&pq(), &["p", "q", "~p", "p & q", "p | q"])
}

/// w_pq < w_p < w_q < w_0.
pub fn chain_model() -> PreferenceModel {
    let sig = pq();
    let worlds = sig
        .valuations()
        .map(|v| World::new(sig.world_name(v), v))
        .collect();
    PreferenceModel::chain(sig, worlds).unwrap()
}

pub fn random_formula(rng: &mut impl Rng, sig: &Signature, depth: u32) -> Formula {
    let leaf = depth == 0 || rng.random_bool(0.3);
    if leaf {
        return match rng.random_range(0..10) {
            0 => Formula::Top,
            1 => Formula::Bottom,
            _ => Formula::atom(sig.atoms()[rng.random_range(0..sig.len())].clone()),
        };
    }
    let op = rng.random_range(0..5);
    let mut sub = || random_formula(rng, sig, depth - 1);
    match op {
        0 => Formula::not(sub()),
        1 => Formula::and(sub(), sub()),
        2 => Formula::or(sub(), sub()),
        3 => Formula::implies(sub(), sub()),
        _ => Formula::iff(sub(), sub()),
    }
}

/// Random graph: edges only go forward in a shuffled node order, so the
/// result is always acyclic.
pub fn random_graph(rng: &mut impl Rng, sig: &Signature, max_nodes: usize) -> PGraph {
    let n = rng.random_range(0..=max_nodes);
    let nodes: Vec<Node> = (0..n)
        .map(|i| Node::new(format!("n{i}"), random_formula(rng, sig, 3)))
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(0.4) {
                edges.push((order[i], order[j]));
            }
        }
    }
    PGraph::new(sig.clone(), nodes, edges).unwrap()
}

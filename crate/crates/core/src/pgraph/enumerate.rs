//! Exhaustive enumeration of small orders and graphs.

use super::{Node, PGraph};
use crate::formula::{Formula, Signature};
use crate::relation::Relation;

/// Every relation on `n` elements generated by a subset of the off-diagonal
/// pairs, filtered by `keep`. Exponential in `n²`; meant for `n ≤ 4`.
fn off_diagonal_subsets(n: usize, keep: impl Fn(&Relation) -> bool) -> Vec<Relation> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |j| *j != i).map(move |j| (i, j)))
        .collect();
    assert!(pairs.len() < 32, "too many elements to enumerate");
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let r = Relation::from_pairs(
            n,
            pairs
                .iter()
                .enumerate()
                .filter(|(k, _)| mask & (1 << k) != 0)
                .map(|(_, p)| *p),
        );
        if keep(&r) {
            out.push(r);
        }
    }
    out
}

/// All strict partial orders on `n` labelled elements (1, 1, 3, 19, 219, ...).
pub fn strict_partial_orders(n: usize) -> Vec<Relation> {
    off_diagonal_subsets(n, |r| r.is_transitive() && r.find_cycle().is_none())
}

/// All preorders (reflexive, transitive) on `n` labelled elements
/// (1, 1, 4, 29, 355, ...).
pub fn preorders(n: usize) -> Vec<Relation> {
    off_diagonal_subsets(n, |r| with_diagonal(r).is_transitive())
        .into_iter()
        .map(|r| with_diagonal(&r))
        .collect()
}

fn with_diagonal(r: &Relation) -> Relation {
    let mut out = r.clone();
    for i in 0..r.size() {
        out.insert(i, i);
    }
    out
}

/// Non-decreasing index sequences of length `len` over `0..pool`.
pub fn multisets(pool: usize, len: usize) -> Vec<Vec<usize>> {
    fn go(pool: usize, len: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for i in start..pool {
            cur.push(i);
            go(pool, len, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(pool, len, 0, &mut Vec::new(), &mut out);
    out
}

/// Every graph with at most `max_nodes` nodes whose labels form a multiset
/// over `pool`, under every strict partial order. Node ids are `n0, n1, ...`.
pub fn enumerate_graphs(sig: &Signature, pool: &[Formula], max_nodes: usize) -> Vec<PGraph> {
    let mut out = Vec::new();
    for n in 0..=max_nodes {
        let orders = strict_partial_orders(n);
        for labels in multisets(pool.len(), n) {
            for order in &orders {
                let nodes = labels
                    .iter()
                    .enumerate()
                    .map(|(i, l)| Node::new(format!("n{i}"), pool[*l].clone()))
                    .collect();
                let g = PGraph::new(sig.clone(), nodes, order.pairs())
                    .expect("enumerated orders are strict partial orders");
                out.push(g);
            }
        }
    }
    out
}

/// Number of graphs [`enumerate_graphs`] yields.
pub fn graph_count(pool: usize, max_nodes: usize) -> usize {
    (0..=max_nodes)
        .map(|n| multisets(pool, n).len() * strict_partial_orders(n).len())
        .sum()
}

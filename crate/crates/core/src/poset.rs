//! Algorithms for prices that are 1 or infinite. Only the allowed (finite)
//! comparisons can be made, so the best one can certify is maximality with
//! respect to the allowed edges.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::certificate::{Certificate, CertificateKind};
use crate::error::{param, Result};
use crate::instance::{CostModel, Instance};
use crate::probe::ProbeState;

/// Neighbour lists over the finite-price pairs, ascending by id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllowedGraph {
    adj: Vec<Vec<u32>>,
}

impl AllowedGraph {
    pub fn new(instance: &Instance) -> Self {
        let mut adj = vec![Vec::new(); instance.n()];
        for (a, b, c) in instance.pairs() {
            if c.is_finite() {
                adj[a].push(b as u32);
                adj[b].push(a as u32);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        AllowedGraph { adj }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().map(|&u| u as usize)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Elements with no allowed comparison at all.
    pub fn isolated_count(&self) -> usize {
        self.adj.iter().filter(|a| a.is_empty()).count()
    }
}

/// Walks upward from element 0: the current element is compared with its
/// allowed neighbours until it loses, and the winner takes over.
///
/// Every probe eliminates one element, so at most `n - 1` are made.
pub fn poset_find_maximal(state: &mut ProbeState<'_>) -> Result<(usize, Certificate)> {
    let n = state.n();
    if n == 0 {
        return param("empty instance");
    }
    let graph = AllowedGraph::new(state.instance());
    let mut v = 0;
    'walk: loop {
        for u in graph.neighbours(v) {
            let rel = match state.comparable(u, v) {
                Some(Ordering::Less) => continue,
                Some(o) => o,
                None => state.probe(u, v)?,
            };
            if rel == Ordering::Greater {
                v = u;
                continue 'walk;
            }
        }
        break;
    }
    Ok((v, state.snapshot_certificate(CertificateKind::Maximal { element: v })))
}

/// For each element that has not lost yet, probes its still-unprobed allowed
/// comparisons in random order until it loses one. Whoever never lost is
/// maximal. Probes made in earlier loops are reused, not repeated.
pub fn poset_find_all_maximal<R: Rng>(state: &mut ProbeState<'_>, rng: &mut R) -> Result<(Vec<usize>, Certificate)> {
    let n = state.n();
    let graph = AllowedGraph::new(state.instance());
    let mut lost = vec![false; n];
    let mut todo = Vec::new();
    for v in 0..n {
        if lost[v] {
            continue;
        }
        todo.clear();
        todo.extend(
            graph
                .neighbours(v)
                .filter(|&u| !state.is_probed(u, v) && state.comparable(u, v) != Some(Ordering::Less)),
        );
        todo.shuffle(rng);
        for &u in &todo {
            if state.probe(v, u)? == Ordering::Less {
                lost[v] = true;
                break;
            }
            lost[u] = true;
        }
    }
    let set: Vec<usize> = (0..n).filter(|&v| !lost[v]).collect();
    let cert = state.snapshot_certificate(CertificateKind::MaximalSet { set: set.clone() });
    Ok((set, cert))
}

/// Ground truth: elements with no allowed comparison to a larger element.
pub fn exhaustive_maximal_set(instance: &Instance) -> Result<Vec<usize>> {
    if !matches!(instance.model(), CostModel::UnitInfinite { .. }) {
        return param(format!("maximal sets need a unit-inf instance, got {}", instance.model()));
    }
    let mut dominated = vec![false; instance.n()];
    for (a, b, c) in instance.pairs() {
        if c.is_finite() {
            let lo = if instance.less(a, b) { a } else { b };
            dominated[lo] = true;
        }
    }
    Ok((0..instance.n()).filter(|&v| !dominated[v]).collect())
}

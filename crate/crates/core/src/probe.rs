//! The probe oracle: the only way algorithms learn anything about the hidden
//! order. Prices are public; directions cost the pair's price to reveal.

use std::cmp::Ordering;

use crate::bits::{has_bit, ones, set_bit, BitMatrix};
use crate::certificate::{CertEdge, Certificate, CertificateKind};
use crate::error::{param, Error, Result};
use crate::instance::{pair_index, Instance};

/// Batches with more new edges than this fraction of `n` rebuild the closure
/// from scratch instead of inserting edge by edge.
const REBUILD_RATIO: usize = 4;

/// Per-trial record of paid probes and the order they imply.
///
/// `below[v]` holds every `u` with `u < v` implied by the probed edges;
/// `above` is its transpose. Both are kept transitively closed.
#[derive(Debug, Clone)]
pub struct ProbeState<'a> {
    instance: &'a Instance,
    probed: Vec<u64>,
    edges: Vec<(u32, u32)>,
    below: BitMatrix,
    above: BitMatrix,
    total_cost: f64,
}

impl<'a> ProbeState<'a> {
    pub fn new(instance: &'a Instance) -> Self {
        let n = instance.n();
        ProbeState {
            instance,
            probed: vec![0; instance.pair_count().div_ceil(64)],
            edges: Vec::new(),
            below: BitMatrix::new(n, n),
            above: BitMatrix::new(n, n),
            total_cost: 0.0,
        }
    }

    pub fn instance(&self) -> &'a Instance {
        self.instance
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.instance.n()
    }

    pub fn total_cost(&self) -> f64 {
        self.total_cost
    }

    pub fn probe_count(&self) -> usize {
        self.edges.len()
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<()> {
        let n = self.n();
        if u >= n || v >= n {
            return param(format!("element out of range in pair ({u}, {v}), n = {n}"));
        }
        if u == v {
            return param(format!("cannot compare element {u} with itself"));
        }
        Ok(())
    }

    /// The public price of comparing `u` and `v`. Free to ask.
    pub fn cost_of(&self, u: usize, v: usize) -> Result<f64> {
        self.check_pair(u, v)?;
        Ok(self.instance.cost(u, v))
    }

    #[inline]
    pub fn is_probed(&self, u: usize, v: usize) -> bool {
        has_bit(&self.probed, pair_index(u, v))
    }

    /// Orientation of `u` relative to `v` as far as the probed edges imply,
    /// `None` when still unknown. Panics on out-of-range ids.
    #[inline]
    pub fn comparable(&self, u: usize, v: usize) -> Option<Ordering> {
        if self.below.get(v, u) {
            Some(Ordering::Less)
        } else if self.below.get(u, v) {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    /// Number of elements known to be smaller than `v`.
    pub fn known_below(&self, v: usize) -> usize {
        self.below.count(v)
    }

    /// Number of elements known to be larger than `v`.
    pub fn known_above(&self, v: usize) -> usize {
        self.above.count(v)
    }

    /// Elements known to be smaller than `v`, ascending by id.
    pub fn below_set(&self, v: usize) -> Vec<usize> {
        ones(self.below.row(v)).collect()
    }

    /// Compares `u` with `v`, paying the pair's price unless it was paid
    /// before. Returns the order of `u` relative to `v`.
    ///
    /// Pairs already implied by transitivity are still charged.
    pub fn probe(&mut self, u: usize, v: usize) -> Result<Ordering> {
        self.check_pair(u, v)?;
        if !self.is_probed(u, v) {
            let (lo, hi) = self.record(u, v)?;
            self.insert(lo, hi);
        }
        Ok(if self.instance.less(u, v) { Ordering::Less } else { Ordering::Greater })
    }

    /// Probes every pair in `pairs`; returns how many were newly paid for.
    ///
    /// Stops at the first forbidden pair, but the closure stays consistent
    /// with everything probed up to that point.
    pub fn probe_many<I>(&mut self, pairs: I) -> Result<usize>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let start = self.edges.len();
        let mut failure = None;
        for (u, v) in pairs {
            if let Err(e) = self.check_pair(u, v) {
                failure = Some(e);
                break;
            }
            if self.is_probed(u, v) {
                continue;
            }
            if let Err(e) = self.record(u, v) {
                failure = Some(e);
                break;
            }
        }
        let added = self.edges.len() - start;
        if added * REBUILD_RATIO > self.n() {
            self.rebuild();
        } else {
            for i in start..self.edges.len() {
                let (lo, hi) = self.edges[i];
                self.insert(lo as usize, hi as usize);
            }
        }
        match failure {
            Some(e) => Err(e),
            None => Ok(added),
        }
    }

    /// Pays for and stores a new edge without touching the closure.
    fn record(&mut self, u: usize, v: usize) -> Result<(usize, usize)> {
        let c = self.instance.cost(u, v);
        if c.is_infinite() {
            return Err(Error::ForbiddenComparison(u, v));
        }
        set_bit(&mut self.probed, pair_index(u, v));
        self.total_cost += c;
        let (lo, hi) = if self.instance.less(u, v) { (u, v) } else { (v, u) };
        self.edges.push((lo as u32, hi as u32));
        Ok((lo, hi))
    }

    /// Adds `lo < hi`: everything at or below `lo` goes below everything at
    /// or above `hi`.
    fn insert(&mut self, lo: usize, hi: usize) {
        if self.below.get(hi, lo) {
            return;
        }
        let mut down = self.below.row(lo).to_vec();
        set_bit(&mut down, lo);
        let mut up = self.above.row(hi).to_vec();
        set_bit(&mut up, hi);
        for d in ones(&up) {
            self.below.or_into(d, &down);
        }
        for a in ones(&down) {
            self.above.or_into(a, &up);
        }
    }

    /// Recomputes both closures from the probed edges. Rows are filled in
    /// true-rank order, which is a topological order of every probed edge,
    /// and each row takes its neighbours nearest in rank first so later ones
    /// are usually covered already.
    fn rebuild(&mut self) {
        let n = self.n();
        let inst = self.instance;
        let ascending: Vec<usize> = (1..=n).map(|r| inst.element_of_rank(r)).collect();
        let descending: Vec<usize> = ascending.iter().rev().copied().collect();
        // Dense edge sets: scan every pair rather than build adjacency lists.
        if self.edges.len() * 8 > inst.pair_count() {
            close_dense(&mut self.below, &self.probed, &ascending);
            close_dense(&mut self.above, &self.probed, &descending);
            return;
        }
        let preds = adjacency(n, &self.edges, |&(lo, hi)| (hi, lo), &descending);
        let succs = adjacency(n, &self.edges, |&(lo, hi)| (lo, hi), &ascending);
        close_sparse(&mut self.below, &preds, &ascending);
        close_sparse(&mut self.above, &succs, &descending);
    }

    /// Directed probed edges `(lo, hi)` with `lo < hi`, in probe order.
    pub fn probed_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().map(|&(a, b)| (a as usize, b as usize))
    }

    /// Every probed edge with its price, labelled with `kind`.
    pub fn snapshot_certificate(&self, kind: CertificateKind) -> Certificate {
        let edges = self
            .edges
            .iter()
            .map(|&(lo, hi)| CertEdge {
                lo,
                hi,
                cost: self.instance.cost(lo as usize, hi as usize),
            })
            .collect();
        Certificate { kind, edges }
    }
}

/// Fills `rows` in `order`, each row the union of its earlier neighbours'
/// rows. `adj` lists neighbours latest-in-`order` first.
fn close_sparse(rows: &mut BitMatrix, adj: &Adjacency, order: &[usize]) {
    let mut row = vec![0u64; rows.words()];
    for &v in order {
        row.iter_mut().for_each(|w| *w = 0);
        for &u in adj.of(v) {
            let u = u as usize;
            if has_bit(&row, u) {
                continue;
            }
            for (d, s) in row.iter_mut().zip(rows.row(u)) {
                *d |= s;
            }
            set_bit(&mut row, u);
        }
        rows.row_mut(v).copy_from_slice(&row);
    }
}

/// As [`close_sparse`], finding neighbours by testing every earlier element
/// against the probed-pair bitset.
fn close_dense(rows: &mut BitMatrix, probed: &[u64], order: &[usize]) {
    let mut row = vec![0u64; rows.words()];
    for (i, &v) in order.iter().enumerate() {
        row.iter_mut().for_each(|w| *w = 0);
        for &u in order[..i].iter().rev() {
            if has_bit(&row, u) || !has_bit(probed, pair_index(u, v)) {
                continue;
            }
            for (d, s) in row.iter_mut().zip(rows.row(u)) {
                *d |= s;
            }
            set_bit(&mut row, u);
        }
        rows.row_mut(v).copy_from_slice(&row);
    }
}

/// Compressed adjacency lists.
struct Adjacency {
    start: Vec<usize>,
    targets: Vec<u32>,
}

impl Adjacency {
    fn of(&self, v: usize) -> &[u32] {
        &self.targets[self.start[v]..self.start[v + 1]]
    }
}

fn offsets(n: usize, keys: impl Iterator<Item = u32>) -> Vec<usize> {
    let mut start = vec![0usize; n + 1];
    for k in keys {
        start[k as usize + 1] += 1;
    }
    for i in 0..n {
        start[i + 1] += start[i];
    }
    start
}

/// Lists `from -> to` for every oriented edge, each list following the
/// position of `to` in `order`. Two bucket passes, no comparisons.
fn adjacency(n: usize, edges: &[(u32, u32)], orient: impl Fn(&(u32, u32)) -> (u32, u32), order: &[usize]) -> Adjacency {
    let by_to = offsets(n, edges.iter().map(|e| orient(e).1));
    let mut fill = by_to.clone();
    let mut sources = vec![0u32; edges.len()];
    for e in edges {
        let (from, to) = orient(e);
        sources[fill[to as usize]] = from;
        fill[to as usize] += 1;
    }
    let start = offsets(n, edges.iter().map(|e| orient(e).0));
    let mut fill = start.clone();
    let mut targets = vec![0u32; edges.len()];
    for &t in order {
        for &from in &sources[by_to[t]..by_to[t + 1]] {
            targets[fill[from as usize]] = t as u32;
            fill[from as usize] += 1;
        }
    }
    Adjacency { start, targets }
}

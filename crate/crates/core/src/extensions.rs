//! Exact linear-extension counting for small posets, and a sorter that
//! always asks about the pair splitting the remaining extensions most evenly.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::boolean::probe_free;
use crate::certificate::{Certificate, CertificateKind};
use crate::error::{param, Error, Result};
use crate::instance::CostModel;
use crate::probe::ProbeState;

/// Largest poset the downset dynamic program accepts (2^12 states).
pub const EXTENSIONS_MAX_N: usize = 12;

/// A strict partial order on at most [`EXTENSIONS_MAX_N`] elements.
/// `below[v]` is the bitmask of elements known to be smaller than `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    n: usize,
    below: Vec<u32>,
}

impl Poset {
    /// The antichain on `n` elements.
    pub fn new(n: usize) -> Result<Self> {
        if n > EXTENSIONS_MAX_N {
            return Err(Error::Size { n, max: EXTENSIONS_MAX_N });
        }
        Ok(Poset { n, below: vec![0; n] })
    }

    /// The order implied by everything probed so far.
    pub fn from_state(state: &ProbeState<'_>) -> Result<Self> {
        let mut poset = Poset::new(state.n())?;
        for v in 0..poset.n {
            poset.below[v] = state.below_set(v).into_iter().fold(0, |m, u| m | 1 << u);
        }
        Ok(poset)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn relation(&self, u: usize, v: usize) -> Option<Ordering> {
        if self.below[v] >> u & 1 == 1 {
            Some(Ordering::Less)
        } else if self.below[u] >> v & 1 == 1 {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    /// Adds `lo < hi` and closes transitively. Rejects cycles.
    pub fn add(&mut self, lo: usize, hi: usize) -> Result<()> {
        if lo >= self.n || hi >= self.n || lo == hi {
            return param(format!("bad relation {lo} < {hi} on {} elements", self.n));
        }
        if self.relation(lo, hi) == Some(Ordering::Greater) {
            return param(format!("{lo} < {hi} contradicts the order"));
        }
        let down = self.below[lo] | 1 << lo;
        for y in 0..self.n {
            if y == hi || self.below[y] >> hi & 1 == 1 {
                self.below[y] |= down;
            }
        }
        Ok(())
    }

    pub fn is_total(&self) -> bool {
        let pairs = self.n * self.n.saturating_sub(1) / 2;
        self.below.iter().map(|m| m.count_ones() as usize).sum::<usize>() == pairs
    }

    /// Number of ways to extend each downset to a full order, indexed by mask.
    fn completions(&self) -> Vec<u64> {
        let full = (1usize << self.n) - 1;
        let mut g = vec![0u64; full + 1];
        g[full] = 1;
        for mask in (0..full).rev() {
            g[mask] = (0..self.n)
                .filter(|&v| mask >> v & 1 == 0 && self.below[v] as usize & !mask == 0)
                .map(|v| g[mask | 1 << v])
                .sum();
        }
        g
    }

    /// Number of ways to reach each downset from the empty set.
    fn prefixes(&self) -> Vec<u64> {
        let full = (1usize << self.n) - 1;
        let mut f = vec![0u64; full + 1];
        f[0] = 1;
        for mask in 0..full {
            if f[mask] == 0 {
                continue;
            }
            for v in 0..self.n {
                if mask >> v & 1 == 0 && self.below[v] as usize & !mask == 0 {
                    f[mask | 1 << v] += f[mask];
                }
            }
        }
        f
    }

    /// `counts[u][v]`: linear extensions placing `u` before `v`.
    pub fn pair_counts(&self) -> Vec<Vec<u64>> {
        let n = self.n;
        let f = self.prefixes();
        let g = self.completions();
        let mut counts = vec![vec![0u64; n]; n];
        for (mask, &ways) in f.iter().enumerate() {
            if ways == 0 {
                continue;
            }
            for u in 0..n {
                if mask >> u & 1 == 1 || self.below[u] as usize & !mask != 0 {
                    continue;
                }
                let after = mask | 1 << u;
                let add = ways * g[after];
                for (v, c) in counts[u].iter_mut().enumerate() {
                    if after >> v & 1 == 0 {
                        *c += add;
                    }
                }
            }
        }
        counts
    }

    /// Elements in increasing order. Only meaningful once the order is total.
    fn chain(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&v| self.below[v].count_ones());
        order
    }
}

/// Exact number of linear extensions.
pub fn count_linear_extensions(poset: &Poset) -> u64 {
    if poset.n == 0 {
        return 1;
    }
    poset.completions()[0]
}

/// Expected number of linear extensions of the random order in which each
/// pair is comparable with probability `p`: the product over `k = 1..=n` of
/// `(1 - (1-p)^k) / p`.
pub fn expected_extensions(n: usize, p: f64) -> Result<f64> {
    if n == 0 {
        return param("expected_extensions needs n >= 1");
    }
    if !(p > 0.0 && p <= 1.0) {
        return param(format!("p must be in (0, 1], got {p}"));
    }
    // (1 - q^k) / p summed as the geometric series 1 + q + ... + q^(k-1),
    // which is exact at k = 1 and p = 1.
    let q = 1.0 - p;
    let mut term = 0.0;
    let mut power = 1.0;
    let mut product = 1.0;
    for _ in 0..n {
        term += power;
        power *= q;
        product *= term;
    }
    Ok(product)
}

/// One probe of the balanced-pair sorter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    /// The probed pair, smaller id first.
    pub pair: (usize, usize),
    /// Fraction of extensions placing `pair.0` before `pair.1`.
    pub fraction: f64,
    pub extensions_before: u64,
    pub extensions_after: u64,
    pub first_before_second: u64,
    pub second_before_first: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BalancedSort {
    pub order: Vec<usize>,
    pub certificate: Certificate,
    /// Extensions left after the free comparisons.
    pub initial_extensions: u64,
    pub trace: Vec<TraceStep>,
}

/// Buys the free comparisons, then repeatedly probes the unresolved pair
/// whose extension fraction is closest to one half (lowest pair on ties)
/// until a single extension remains.
pub fn balanced_pair_sort(state: &mut ProbeState<'_>) -> Result<BalancedSort> {
    if !matches!(state.instance().model(), CostModel::Boolean { .. }) {
        return param(format!("balanced sort needs a boolean instance, got {}", state.instance().model()));
    }
    let n = state.n();
    Poset::new(n)?;
    probe_free(state)?;
    let mut poset = Poset::from_state(state)?;

    let initial_extensions = count_linear_extensions(&poset);
    let mut trace = Vec::new();
    let mut e = initial_extensions;
    while e > 1 {
        let counts = poset.pair_counts();
        let mut best: Option<(u64, usize, usize)> = None;
        for u in 0..n {
            for v in u + 1..n {
                if poset.relation(u, v).is_some() {
                    continue;
                }
                let gap = (2 * counts[u][v]).abs_diff(e);
                if best.is_none_or(|b| gap < b.0) {
                    best = Some((gap, u, v));
                }
            }
        }
        let (_, u, v) = best.expect("more than one extension leaves an unresolved pair");
        let (first, second) = (counts[u][v], counts[v][u]);
        debug_assert_eq!(first + second, e);
        let rel = state.probe(u, v)?;
        if rel == Ordering::Less {
            poset.add(u, v)?;
        } else {
            poset.add(v, u)?;
        }
        let after = count_linear_extensions(&poset);
        trace.push(TraceStep {
            pair: (u, v),
            fraction: first as f64 / e as f64,
            extensions_before: e,
            extensions_after: after,
            first_before_second: first,
            second_before_first: second,
        });
        e = after;
    }
    Ok(BalancedSort {
        order: poset.chain(),
        certificate: state.snapshot_certificate(CertificateKind::Sort),
        initial_extensions,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::verify_sort;
    use crate::instance::Instance;

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for i in 0..=p.len() {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    fn brute_count(poset: &Poset) -> u64 {
        permutations(poset.n())
            .into_iter()
            .filter(|perm| {
                perm.iter()
                    .enumerate()
                    .all(|(i, &v)| perm[i + 1..].iter().all(|&w| poset.relation(w, v) != Some(Ordering::Less)))
            })
            .count() as u64
    }

    #[test]
    fn small_counts() {
        assert_eq!(count_linear_extensions(&Poset::new(3).unwrap()), 6);
        assert_eq!(count_linear_extensions(&Poset::new(0).unwrap()), 1);
        let mut chain = Poset::new(5).unwrap();
        for v in 1..5 {
            chain.add(v - 1, v).unwrap();
        }
        assert!(chain.is_total());
        assert_eq!(count_linear_extensions(&chain), 1);
        let mut p = Poset::new(4).unwrap();
        p.add(0, 1).unwrap();
        assert_eq!(count_linear_extensions(&p), 12);
        assert!(p.add(1, 0).is_err());
        assert!(Poset::new(13).is_err());
    }

    #[test]
    fn dp_matches_permutation_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..300 {
            let n = rng.gen_range(1..=6);
            let mut p = Poset::new(n).unwrap();
            let perm = {
                let mut v: Vec<usize> = (0..n).collect();
                rand::seq::SliceRandom::shuffle(&mut v[..], &mut rng);
                v
            };
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen_bool(0.3) {
                        p.add(perm[i], perm[j]).unwrap();
                    }
                }
            }
            let e = count_linear_extensions(&p);
            assert_eq!(e, brute_count(&p));
            let counts = p.pair_counts();
            for u in 0..n {
                for v in 0..n {
                    if u != v {
                        assert_eq!(counts[u][v] + counts[v][u], e);
                    }
                }
            }
        }
    }

    #[test]
    fn expectation_formula() {
        // 1·3·7·15·31·63 · 2^6 / 2^21
        let exact = 615195.0 * 64.0 / 2097152.0;
        assert!((expected_extensions(6, 0.5).unwrap() - exact).abs() < 1e-12);
        assert_eq!(expected_extensions(1, 0.3).unwrap(), 1.0);
        assert_eq!(expected_extensions(9, 1.0).unwrap(), 1.0);
        assert!(expected_extensions(3, 0.0).is_err());
        assert!(expected_extensions(0, 0.5).is_err());
    }

    #[test]
    fn balanced_sort_small_cases() {
        let total = Instance::generate(6, CostModel::boolean(1.0).unwrap(), 2).unwrap();
        let mut s = ProbeState::new(&total);
        let out = balanced_pair_sort(&mut s).unwrap();
        assert!(out.trace.is_empty());
        assert_eq!(out.order, total.sorted_elements());

        let costs = vec![1.0];
        let pair = Instance::from_parts(CostModel::boolean(0.5).unwrap(), vec![2, 1], costs, 0).unwrap();
        let mut s = ProbeState::new(&pair);
        let out = balanced_pair_sort(&mut s).unwrap();
        assert_eq!(out.trace.len(), 1);
        assert_eq!(out.trace[0].fraction, 0.5);
        assert_eq!(out.order, vec![1, 0]);

        let big = Instance::generate(13, CostModel::boolean(0.5).unwrap(), 0).unwrap();
        assert!(balanced_pair_sort(&mut ProbeState::new(&big)).is_err());
    }

    #[test]
    fn balanced_sort_is_exact() {
        for seed in 0..40 {
            let inst = Instance::generate(8, CostModel::boolean(0.3).unwrap(), seed).unwrap();
            let mut s = ProbeState::new(&inst);
            let out = balanced_pair_sort(&mut s).unwrap();
            assert_eq!(out.order, inst.sorted_elements());
            assert!(verify_sort(&out.certificate, &out.order).unwrap());
            for step in &out.trace {
                assert_eq!(step.first_before_second + step.second_before_first, step.extensions_before);
                assert!(
                    step.extensions_after == step.first_before_second
                        || step.extensions_after == step.second_before_first
                );
            }
        }
    }
}

//! Certificates: sets of revealed directed edges whose transitive closure
//! proves an output. Verification here looks only at the edges; agreement
//! with the hidden order is checked separately by [`Certificate::consistent_with`].

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::instance::{CostModel, Instance};
use crate::json::JsonCost;

/// A revealed comparison: `lo < hi`, bought at `cost`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertEdge {
    pub lo: u32,
    pub hi: u32,
    pub cost: f64,
}

/// What a certificate claims to prove.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateKind {
    Sort,
    /// `element` has rank `k` (1-based).
    Rank { k: usize, element: usize },
    /// `element` is the maximum; a rank certificate with `k = n`.
    MaxTree { element: usize },
    /// `element` beats every allowed neighbour (unit/infinite model).
    Maximal { element: usize },
    /// `set` is exactly the set of maximal elements.
    MaximalSet { set: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub edges: Vec<CertEdge>,
}

impl Certificate {
    pub fn new(kind: CertificateKind) -> Self {
        Certificate { kind, edges: Vec::new() }
    }

    pub fn cost(&self) -> f64 {
        self.edges.iter().map(|e| e.cost).sum()
    }

    /// Every edge points the way the hidden order does and carries the
    /// instance's price for that pair.
    pub fn consistent_with(&self, instance: &Instance) -> bool {
        let n = instance.n();
        self.edges.iter().all(|e| {
            let (lo, hi) = (e.lo as usize, e.hi as usize);
            lo < n && hi < n && lo != hi && instance.less(lo, hi) && instance.cost(lo, hi) == e.cost
        })
    }
}

/// Edge lists in both directions.
struct Graph {
    up: Vec<Vec<u32>>,
    down: Vec<Vec<u32>>,
}

impl Graph {
    /// `None` if an edge leaves `0..n` or is a self-loop.
    fn build(n: usize, edges: &[CertEdge]) -> Option<Graph> {
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for e in edges {
            let (lo, hi) = (e.lo as usize, e.hi as usize);
            if lo >= n || hi >= n || lo == hi {
                return None;
            }
            up[lo].push(e.hi);
            down[hi].push(e.lo);
        }
        Some(Graph { up, down })
    }

    /// Elements reachable from `start` along `adj`, excluding `start` unless
    /// it lies on a cycle.
    fn reach(adj: &[Vec<u32>], start: usize) -> Vec<bool> {
        let mut seen = vec![false; adj.len()];
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                let y = y as usize;
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }
}

fn check_permutation(order: &[usize]) -> Result<()> {
    let mut seen = vec![false; order.len()];
    for &v in order {
        if v >= order.len() || std::mem::replace(&mut seen[v], true) {
            return param("claimed order is not a permutation of 0..n");
        }
    }
    Ok(())
}

/// True iff every consecutive pair `(a, b)` of `claimed_order` has `a < b`
/// in the closure of the certificate's edges.
pub fn verify_sort(certificate: &Certificate, claimed_order: &[usize]) -> Result<bool> {
    check_permutation(claimed_order)?;
    let n = claimed_order.len();
    let mut pos = vec![0usize; n];
    for (i, &v) in claimed_order.iter().enumerate() {
        pos[v] = i;
    }
    let Some(graph) = Graph::build(n, &certificate.edges) else {
        return Ok(false);
    };

    let forward = certificate.edges.iter().all(|e| pos[e.lo as usize] < pos[e.hi as usize]);
    if forward {
        // With every edge pointing forward, a path between neighbours in the
        // order has no room for an intermediate vertex: it must be an edge.
        let mut adjacent = vec![false; n.saturating_sub(1)];
        for e in &certificate.edges {
            let (a, b) = (pos[e.lo as usize], pos[e.hi as usize]);
            if b == a + 1 {
                adjacent[a] = true;
            }
        }
        return Ok(adjacent.into_iter().all(|x| x));
    }
    Ok(claimed_order
        .windows(2)
        .all(|w| Graph::reach(&graph.up, w[0])[w[1]]))
}

/// True iff, in the closure of the certificate, `element` is above exactly
/// `k - 1` elements and below exactly `n - k`, with no element on both sides.
pub fn verify_rank(certificate: &Certificate, element: usize, k: usize, n: usize) -> Result<bool> {
    if k == 0 || k > n {
        return param(format!("rank {k} out of range 1..={n}"));
    }
    if element >= n {
        return param(format!("element {element} out of range (n = {n})"));
    }
    let Some(graph) = Graph::build(n, &certificate.edges) else {
        return Ok(false);
    };
    let below = Graph::reach(&graph.down, element);
    let above = Graph::reach(&graph.up, element);
    if below[element] || below.iter().zip(&above).any(|(&b, &a)| a && b) {
        return Ok(false);
    }
    let nb = below.iter().filter(|&&x| x).count();
    let na = above.iter().filter(|&&x| x).count();
    Ok(nb == k - 1 && na == n - k)
}

fn check_allowed(certificate: &Certificate, instance: &Instance) -> Result<()> {
    let n = instance.n();
    for e in &certificate.edges {
        let (lo, hi) = (e.lo as usize, e.hi as usize);
        if lo >= n || hi >= n || lo == hi {
            return Err(Error::InvalidCertificate(format!("edge ({lo}, {hi}) is out of range")));
        }
        if e.cost.is_infinite() || instance.cost(lo, hi).is_infinite() {
            return Err(Error::InvalidCertificate(format!(
                "edge ({lo}, {hi}) is a forbidden comparison"
            )));
        }
    }
    Ok(())
}

fn beats_all_neighbours(graph: &Graph, instance: &Instance, m: usize) -> bool {
    if !graph.up[m].is_empty() {
        return false;
    }
    let below = Graph::reach(&graph.down, m);
    (0..instance.n())
        .filter(|&u| u != m && instance.cost(m, u).is_finite())
        .all(|u| below[u])
}

/// True iff `element` wins, directly or transitively, against every element
/// it is allowed to be compared with, and lost nothing.
pub fn verify_maximal_element(certificate: &Certificate, element: usize, instance: &Instance) -> Result<bool> {
    check_allowed(certificate, instance)?;
    if element >= instance.n() {
        return param(format!("element {element} out of range"));
    }
    let graph = Graph::build(instance.n(), &certificate.edges).expect("edges checked");
    Ok(beats_all_neighbours(&graph, instance, element))
}

/// True iff every element outside `claimed_set` lost some comparison and
/// every member beats all of its allowed neighbours.
pub fn verify_maximal_set(certificate: &Certificate, claimed_set: &[usize], instance: &Instance) -> Result<bool> {
    check_allowed(certificate, instance)?;
    let n = instance.n();
    let mut member = vec![false; n];
    for &m in claimed_set {
        if m >= n {
            return param(format!("element {m} out of range"));
        }
        member[m] = true;
    }
    let graph = Graph::build(n, &certificate.edges).expect("edges checked");
    for v in 0..n {
        let ok = if member[v] {
            beats_all_neighbours(&graph, instance, v)
        } else {
            !graph.up[v].is_empty()
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Price of the unique minimal sorting certificate: the path through
/// rank-adjacent pairs. Infinite if any such pair is forbidden.
pub fn min_sort_certificate_cost(instance: &Instance) -> f64 {
    (1..instance.n())
        .map(|r| instance.cost(instance.element_of_rank(r), instance.element_of_rank(r + 1)))
        .sum()
}

/// Price of the cheapest certificate that the rank-`k` element has rank `k`.
///
/// Every `v_i` below the target needs an edge up into `v_{i+1}..=v_k`, and
/// every `v_i` above needs an edge down into `v_k..v_i`; each edge serves
/// exactly one of these demands, and the cheapest choices form a valid
/// certificate.
pub fn min_rank_certificate_cost(instance: &Instance, k: usize) -> Result<f64> {
    let n = instance.n();
    if k == 0 || k > n {
        return param(format!("rank {k} out of range 1..={n}"));
    }
    let at = |r: usize| instance.element_of_rank(r);
    let mut total = 0.0;
    for i in 1..k {
        total += (i + 1..=k).map(|j| instance.cost(at(i), at(j))).fold(f64::INFINITY, f64::min);
    }
    for i in k + 1..=n {
        total += (k..i).map(|j| instance.cost(at(i), at(j))).fold(f64::INFINITY, f64::min);
    }
    Ok(total)
}

/// Target for [`brute_force_min_certificate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertTarget {
    Sort,
    /// Rank of the element of true rank `k`.
    Rank(usize),
}

pub const BRUTE_FORCE_MAX_N: usize = 7;

/// Cheapest certificate by enumerating every subset of the `C(n, 2)` truly
/// oriented edges. Exponential; restricted to `n <= 7`.
pub fn brute_force_min_certificate(instance: &Instance, target: CertTarget) -> Result<f64> {
    let n = instance.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::Size { n, max: BRUTE_FORCE_MAX_N });
    }
    if let CertTarget::Rank(k) = target {
        if k == 0 || k > n {
            return param(format!("rank {k} out of range 1..={n}"));
        }
    }
    // Edges oriented by the hidden order; closure rows as bitmasks of the
    // elements known below each element.
    let edges: Vec<(usize, usize, f64)> = instance
        .pairs()
        .map(|(a, b, c)| if instance.less(a, b) { (a, b, c) } else { (b, a, c) })
        .collect();
    let m = edges.len();
    let total = 1usize << m;
    let mut below = vec![[0u8; BRUTE_FORCE_MAX_N]; total];
    let mut cost = vec![0.0f64; total];
    let mut best = f64::INFINITY;

    let certifies = |rows: &[u8; BRUTE_FORCE_MAX_N]| -> bool {
        match target {
            CertTarget::Sort => (1..n).all(|r| {
                let lo = instance.element_of_rank(r);
                let hi = instance.element_of_rank(r + 1);
                rows[hi] >> lo & 1 == 1
            }),
            CertTarget::Rank(k) => {
                let t = instance.element_of_rank(k);
                let under = rows[t].count_ones() as usize;
                let over = (0..n).filter(|&d| rows[d] >> t & 1 == 1).count();
                under == k - 1 && over == n - k
            }
        }
    };

    for mask in 0..total {
        if mask > 0 {
            let bit = mask.trailing_zeros() as usize;
            let prev = mask & (mask - 1);
            let (lo, hi, c) = edges[bit];
            let mut rows = below[prev];
            if rows[hi] >> lo & 1 == 0 {
                let down = rows[lo] | 1 << lo;
                for d in 0..n {
                    if d == hi || rows[d] >> hi & 1 == 1 {
                        rows[d] |= down;
                    }
                }
            }
            below[mask] = rows;
            cost[mask] = cost[prev] + c;
        }
        if cost[mask] < best && certifies(&below[mask]) {
            best = cost[mask];
        }
    }
    Ok(best)
}

// ---- JSON form: {kind, k?, element?, set?, edges: [[lo, hi, cost]...]} ----

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum KindTag {
    Sort,
    Rank,
    MaxTree,
    Maximal,
    MaximalSet,
}

#[derive(Serialize, Deserialize)]
struct CertificateRepr {
    kind: KindTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    element: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    set: Option<Vec<usize>>,
    edges: Vec<(u32, u32, JsonCost)>,
}

impl Serialize for Certificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (kind, k, element, set) = match &self.kind {
            CertificateKind::Sort => (KindTag::Sort, None, None, None),
            CertificateKind::Rank { k, element } => (KindTag::Rank, Some(*k), Some(*element), None),
            CertificateKind::MaxTree { element } => (KindTag::MaxTree, None, Some(*element), None),
            CertificateKind::Maximal { element } => (KindTag::Maximal, None, Some(*element), None),
            CertificateKind::MaximalSet { set } => (KindTag::MaximalSet, None, None, Some(set.clone())),
        };
        CertificateRepr {
            kind,
            k,
            element,
            set,
            edges: self.edges.iter().map(|e| (e.lo, e.hi, JsonCost::from(e.cost))).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Certificate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = CertificateRepr::deserialize(d)?;
        let k = r.k.ok_or_else(|| D::Error::missing_field("k"));
        let element = r.element.ok_or_else(|| D::Error::missing_field("element"));
        let kind = match r.kind {
            KindTag::Sort => CertificateKind::Sort,
            KindTag::Rank => CertificateKind::Rank { k: k?, element: element? },
            KindTag::MaxTree => CertificateKind::MaxTree { element: element? },
            KindTag::Maximal => CertificateKind::Maximal { element: element? },
            KindTag::MaximalSet => CertificateKind::MaximalSet {
                set: r.set.ok_or_else(|| D::Error::missing_field("set"))?,
            },
        };
        let edges = r
            .edges
            .into_iter()
            .map(|(lo, hi, c)| Ok(CertEdge { lo, hi, cost: c.value().map_err(D::Error::custom)? }))
            .collect::<std::result::Result<_, D::Error>>()?;
        Ok(Certificate { kind, edges })
    }
}

/// Default certificate kind for a model's natural max-finding target.
pub fn max_kind(model: CostModel, element: usize) -> CertificateKind {
    match model {
        CostModel::UnitInfinite { .. } => CertificateKind::Maximal { element },
        _ => CertificateKind::MaxTree { element },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cert(kind: CertificateKind, edges: &[(u32, u32)]) -> Certificate {
        Certificate {
            kind,
            edges: edges.iter().map(|&(lo, hi)| CertEdge { lo, hi, cost: 1.0 }).collect(),
        }
    }

    #[test]
    fn sort_examples() {
        assert!(verify_sort(&cert(CertificateKind::Sort, &[]), &[0]).unwrap());
        let c = cert(CertificateKind::Sort, &[(0, 1), (1, 2)]);
        assert!(verify_sort(&c, &[0, 1, 2]).unwrap());
        assert!(!verify_sort(&c, &[1, 0, 2]).unwrap());
        assert!(verify_sort(&c, &[0, 0, 2]).is_err());
        assert!(verify_sort(&c, &[0, 1, 3]).is_err());
    }

    #[test]
    fn sort_needs_adjacent_edges_not_just_reachability() {
        // 0<2 and 2<1 orders [0,2,1]; [0,1,2] is not certified.
        let c = cert(CertificateKind::Sort, &[(0, 2), (2, 1)]);
        assert!(verify_sort(&c, &[0, 2, 1]).unwrap());
        assert!(!verify_sort(&c, &[0, 1, 2]).unwrap());
        // Redundant long edges are harmless.
        let c = cert(CertificateKind::Sort, &[(0, 1), (1, 2), (0, 2)]);
        assert!(verify_sort(&c, &[0, 1, 2]).unwrap());
    }

    #[test]
    fn rank_examples() {
        assert!(verify_rank(&cert(CertificateKind::Sort, &[]), 0, 1, 1).unwrap());
        let star = cert(CertificateKind::MaxTree { element: 3 }, &[(0, 3), (1, 3), (2, 3)]);
        assert!(verify_rank(&star, 3, 4, 4).unwrap());
        assert!(!verify_rank(&star, 3, 3, 4).unwrap());
        assert!(!verify_rank(&star, 0, 1, 4).unwrap());
        assert!(verify_rank(&star, 0, 0, 4).is_err());
        // A cycle can't certify anything.
        let cyc = cert(CertificateKind::Sort, &[(0, 1), (1, 0)]);
        assert!(!verify_rank(&cyc, 0, 1, 2).unwrap());
    }

    #[test]
    fn min_costs_trivial_sizes() {
        let one = Instance::generate(1, CostModel::Uniform, 0).unwrap();
        assert_eq!(min_sort_certificate_cost(&one), 0.0);
        assert_eq!(min_rank_certificate_cost(&one, 1).unwrap(), 0.0);
        assert_eq!(brute_force_min_certificate(&one, CertTarget::Sort).unwrap(), 0.0);
        let two = Instance::generate(2, CostModel::Uniform, 4).unwrap();
        let c = two.cost(0, 1);
        assert_eq!(brute_force_min_certificate(&two, CertTarget::Sort).unwrap(), c);
        assert_eq!(brute_force_min_certificate(&two, CertTarget::Rank(1)).unwrap(), c);
        assert_eq!(brute_force_min_certificate(&two, CertTarget::Rank(2)).unwrap(), c);
        let free = Instance::generate(9, CostModel::boolean(1.0).unwrap(), 3).unwrap();
        assert_eq!(min_sort_certificate_cost(&free), 0.0);
        assert_eq!(min_rank_certificate_cost(&free, 9).unwrap(), 0.0);
    }

    #[test]
    fn brute_force_refuses_large_instances() {
        let inst = Instance::generate(8, CostModel::Uniform, 0).unwrap();
        assert_eq!(
            brute_force_min_certificate(&inst, CertTarget::Sort),
            Err(Error::Size { n: 8, max: 7 })
        );
    }

    #[test]
    fn maximal_set_with_no_allowed_edges() {
        let n = 4;
        let inst = Instance::from_parts(
            CostModel::unit_infinite(0.5).unwrap(),
            vec![2, 4, 1, 3],
            vec![f64::INFINITY; 6],
            0,
        )
        .unwrap();
        let c = Certificate::new(CertificateKind::MaximalSet { set: (0..n).collect() });
        assert!(verify_maximal_set(&c, &[0, 1, 2, 3], &inst).unwrap());
        assert!(!verify_maximal_set(&c, &[0, 1, 2], &inst).unwrap());
        let bad = cert(CertificateKind::MaximalSet { set: vec![] }, &[(0, 1)]);
        assert!(matches!(verify_maximal_set(&bad, &[], &inst), Err(Error::InvalidCertificate(_))));
    }

    #[test]
    fn maximal_set_single_allowed_edge() {
        // ranks: element 0 -> 1, element 1 -> 2; one allowed pair.
        let inst =
            Instance::from_parts(CostModel::unit_infinite(0.5).unwrap(), vec![1, 2], vec![1.0], 0).unwrap();
        let c = cert(CertificateKind::MaximalSet { set: vec![1] }, &[(0, 1)]);
        assert!(verify_maximal_set(&c, &[1], &inst).unwrap());
        assert!(!verify_maximal_set(&c, &[0], &inst).unwrap());
        assert!(!verify_maximal_set(&c, &[0, 1], &inst).unwrap());
        assert!(verify_maximal_element(&c, 1, &inst).unwrap());
    }

    #[test]
    fn json_shape() {
        let c = Certificate {
            kind: CertificateKind::Rank { k: 2, element: 1 },
            edges: vec![CertEdge { lo: 0, hi: 1, cost: 0.5 }, CertEdge { lo: 1, hi: 2, cost: f64::INFINITY }],
        };
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"kind":"rank","k":2,"element":1,"edges":[[0,1,0.5],[1,2,"inf"]]}"#);
        let back: Certificate = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}

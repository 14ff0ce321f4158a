//! Algorithms for prices drawn uniformly from `[0, 1]`.
//!
//! Max-finding buys the cheapest useful comparison first. Rank certification
//! of a pivot buys every comparison whose price falls in a band, then
//! doubles the band; selection and sorting recurse on the resulting splits.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::certificate::{Certificate, CertificateKind};
use crate::error::{param, Result};
use crate::instance::CostModel;
use crate::probe::ProbeState;

/// The constant in front of `ln^2 m` that sets the first price band `α/m`.
pub const DEFAULT_ALPHA_COEFF: f64 = 1200.0;

/// What to do when the bands run out with the pivot's rank still open.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FailPolicy {
    /// Probe every remaining pair of the subproblem.
    #[default]
    RevealAll,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformParams {
    /// `α = alpha_coeff · ln² m` for a subproblem of `m` elements.
    pub alpha_coeff: f64,
    /// Caps the number of doubling rounds after the first band. `None` runs
    /// until the band reaches price 1, which always resolves the pivot.
    pub max_rounds: Option<usize>,
    pub fail_policy: FailPolicy,
}

impl Default for UniformParams {
    fn default() -> Self {
        UniformParams { alpha_coeff: DEFAULT_ALPHA_COEFF, max_rounds: None, fail_policy: FailPolicy::RevealAll }
    }
}

impl UniformParams {
    pub fn with_alpha_coeff(alpha_coeff: f64) -> Result<Self> {
        let p = UniformParams { alpha_coeff, ..Default::default() };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha_coeff > 0.0 && self.alpha_coeff.is_finite()) {
            return param(format!("alpha_coeff must be positive, got {}", self.alpha_coeff));
        }
        Ok(())
    }

    pub fn alpha(&self, m: usize) -> f64 {
        let l = (m as f64).ln();
        self.alpha_coeff * l * l
    }
}

fn require_uniform(state: &ProbeState<'_>) -> Result<()> {
    match state.instance().model() {
        CostModel::Uniform => Ok(()),
        other => param(format!("uniform-cost algorithm run on a {other} instance")),
    }
}

/// Repeatedly buys the globally cheapest comparison between two elements
/// that have not lost yet, until one remains. Exactly `n - 1` probes.
pub fn uniform_find_max(state: &mut ProbeState<'_>) -> Result<(usize, Certificate)> {
    require_uniform(state)?;
    if state.probe_count() > 0 {
        return param("uniform_find_max needs a fresh probe state");
    }
    let inst = state.instance();
    let n = inst.n();
    let mut edges: Vec<(f64, usize, usize)> = inst.pairs().map(|(u, v, c)| (c, u, v)).collect();
    // Ties are broken by pair position, which is lexicographic in (v, u).
    edges.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut alive = vec![true; n];
    let mut left = n;
    for (_, u, v) in edges {
        if left == 1 {
            break;
        }
        if alive[u] && alive[v] {
            let loser = match state.probe(u, v)? {
                Ordering::Less => u,
                _ => v,
            };
            alive[loser] = false;
            left -= 1;
        }
    }
    let max = alive.iter().position(|&a| a).expect("one survivor");
    Ok((max, state.snapshot_certificate(CertificateKind::MaxTree { element: max })))
}

/// One price band's worth of probing inside [`uniform_rank_certificate`].
#[derive(Debug, Clone, PartialEq)]
pub struct BandRound {
    pub lower: f64,
    pub upper: f64,
    /// Pairs newly paid for in this band.
    pub probed: usize,
    pub cost: f64,
    /// Elements still unresolved against the pivot after this band.
    pub remaining: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankSplit {
    /// `below ∪ above ∪ {pivot}` is the whole set.
    Split { below: Vec<usize>, above: Vec<usize> },
    /// Bands exhausted; `unresolved` elements are still incomparable.
    Failed { below: Vec<usize>, above: Vec<usize>, unresolved: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankCertificateRun {
    pub split: RankSplit,
    pub bands: Vec<BandRound>,
}

/// Certifies the rank of `pivot` within all elements of the instance.
pub fn uniform_rank_certificate(
    state: &mut ProbeState<'_>,
    pivot: usize,
    params: &UniformParams,
) -> Result<RankCertificateRun> {
    let all: Vec<usize> = (0..state.n()).collect();
    uniform_rank_certificate_within(state, &all, pivot, params)
}

/// Certifies the rank of `pivot` within `set`.
///
/// Buys every pair among the unresolved elements whose price lies in
/// `[0, α/m]`, drops elements now comparable to the pivot, and repeats with
/// bands `[α2^{i-1}/m, α2^i/m]`; the last band is clamped to price 1.
pub fn uniform_rank_certificate_within(
    state: &mut ProbeState<'_>,
    set: &[usize],
    pivot: usize,
    params: &UniformParams,
) -> Result<RankCertificateRun> {
    require_uniform(state)?;
    params.validate()?;
    if !set.contains(&pivot) {
        return param(format!("pivot {pivot} is not in the element set"));
    }
    let m = set.len();
    let mut below = Vec::new();
    let mut above = Vec::new();
    let mut bands = Vec::new();
    if m == 1 {
        return Ok(RankCertificateRun { split: RankSplit::Split { below, above }, bands });
    }

    let inst = state.instance();
    let alpha = params.alpha(m);
    let mut remaining: Vec<usize> = set.to_vec();
    let mut lower = 0.0;
    let mut upper = (alpha / m as f64).min(1.0);
    let mut round = 0usize;
    loop {
        let first = round == 0;
        let mut band = Vec::new();
        for (i, &a) in remaining.iter().enumerate() {
            for &b in &remaining[i + 1..] {
                let c = inst.cost(a, b);
                if (first || c > lower) && c <= upper && !state.is_probed(a, b) {
                    band.push((a, b));
                }
            }
        }
        let before = state.total_cost();
        let probed = state.probe_many(band)?;

        remaining.retain(|&u| {
            if u == pivot {
                return true;
            }
            match state.comparable(u, pivot) {
                Some(Ordering::Less) => below.push(u),
                Some(_) => above.push(u),
                None => return true,
            }
            false
        });
        bands.push(BandRound {
            lower,
            upper,
            probed,
            cost: state.total_cost() - before,
            remaining: remaining.len() - 1,
        });

        if remaining.len() == 1 {
            return Ok(RankCertificateRun { split: RankSplit::Split { below, above }, bands });
        }
        round += 1;
        if upper >= 1.0 || params.max_rounds.is_some_and(|r| round > r) {
            remaining.retain(|&u| u != pivot);
            return Ok(RankCertificateRun {
                split: RankSplit::Failed { below, above, unresolved: remaining },
                bands,
            });
        }
        lower = upper;
        upper = (alpha * (1u64 << round.min(62)) as f64 / m as f64).min(1.0);
    }
}

/// Runs the band routine and applies the fail policy, so the pivot always
/// ends up fully split.
fn split_with_fallback(
    state: &mut ProbeState<'_>,
    set: &[usize],
    pivot: usize,
    params: &UniformParams,
) -> Result<(Vec<usize>, Vec<usize>)> {
    match uniform_rank_certificate_within(state, set, pivot, params)?.split {
        RankSplit::Split { below, above } => Ok((below, above)),
        RankSplit::Failed { .. } => match params.fail_policy {
            FailPolicy::RevealAll => {
                reveal_all(state, set)?;
                let (below, above) = set
                    .iter()
                    .filter(|&&u| u != pivot)
                    .partition(|&&u| state.comparable(u, pivot) == Some(Ordering::Less));
                Ok((below, above))
            }
        },
    }
}

fn reveal_all(state: &mut ProbeState<'_>, set: &[usize]) -> Result<()> {
    let pairs: Vec<_> = set
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| set[i + 1..].iter().map(move |&b| (a, b)))
        .collect();
    state.probe_many(pairs)?;
    Ok(())
}

/// Pivot-and-recurse selection of the `k`-th smallest element.
pub fn uniform_selection<R: Rng>(
    state: &mut ProbeState<'_>,
    k: usize,
    params: &UniformParams,
    rng: &mut R,
) -> Result<(usize, Certificate)> {
    require_uniform(state)?;
    let n = state.n();
    if k == 0 || k > n {
        return param(format!("rank {k} out of range 1..={n}"));
    }
    let mut set: Vec<usize> = (0..n).collect();
    let mut want = k;
    let found = loop {
        if set.len() == 1 {
            break set[0];
        }
        let pivot = *set.choose(rng).expect("non-empty");
        let (below, above) = split_with_fallback(state, &set, pivot, params)?;
        match want.cmp(&(below.len() + 1)) {
            Ordering::Less => set = below,
            Ordering::Equal => break pivot,
            Ordering::Greater => {
                want -= below.len() + 1;
                set = above;
            }
        }
    };
    Ok((found, state.snapshot_certificate(CertificateKind::Rank { k, element: found })))
}

/// Quicksort on certified pivot splits.
pub fn uniform_sort<R: Rng>(
    state: &mut ProbeState<'_>,
    params: &UniformParams,
    rng: &mut R,
) -> Result<(Vec<usize>, Certificate)> {
    require_uniform(state)?;
    enum Task {
        Sort(Vec<usize>),
        Emit(usize),
    }
    let mut order = Vec::with_capacity(state.n());
    let mut stack = vec![Task::Sort((0..state.n()).collect())];
    while let Some(task) = stack.pop() {
        match task {
            Task::Emit(v) => order.push(v),
            Task::Sort(set) if set.len() <= 1 => order.extend(set),
            Task::Sort(set) => {
                let pivot = *set.choose(rng).expect("non-empty");
                let (below, above) = split_with_fallback(state, &set, pivot, params)?;
                stack.push(Task::Sort(above));
                stack.push(Task::Emit(pivot));
                stack.push(Task::Sort(below));
            }
        }
    }
    Ok((order, state.snapshot_certificate(CertificateKind::Sort)))
}

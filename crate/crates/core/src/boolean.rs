//! Algorithms for prices that are 0 with probability `p` and 1 otherwise.
//!
//! All of them start by buying every free comparison, which reveals a
//! random partial order, and then pay only for what that order leaves open.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::certificate::{Certificate, CertificateKind};
use crate::error::{param, Result};
use crate::instance::CostModel;
use crate::probe::ProbeState;

/// How the selection window half-width `w` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WMode {
    /// `w = 3 ln n / p²`
    #[default]
    Quadratic,
    /// `w = 150 ln n · ln(n/p) / p`, better when `p` is far below `1/ln n`.
    Lemma,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BooleanParams {
    pub w_mode: WMode,
}

impl BooleanParams {
    /// Window half-width, rounded up.
    pub fn window(&self, n: usize, p: f64) -> usize {
        let ln = (n as f64).ln();
        let w = match self.w_mode {
            WMode::Quadratic => 3.0 * ln / (p * p),
            WMode::Lemma => 150.0 * ln * (n as f64 / p).ln() / p,
        };
        w.ceil().max(0.0) as usize
    }
}

fn boolean_p(state: &ProbeState<'_>) -> Result<f64> {
    match state.instance().model() {
        CostModel::Boolean { p } => Ok(p),
        other => param(format!("boolean-cost algorithm run on a {other} instance")),
    }
}

/// Buys every zero-price comparison. Returns how many were new.
pub fn probe_free(state: &mut ProbeState<'_>) -> Result<usize> {
    let inst = state.instance();
    state.probe_many(inst.pairs().filter(|p| p.2 == 0.0).map(|p| (p.0, p.1)))
}

/// Sequential tournament: at most `|candidates| - 1` probes, and none for
/// pairs whose order is already known.
pub fn standard_find_max(state: &mut ProbeState<'_>, candidates: &[usize]) -> Result<usize> {
    tournament(state, candidates, Ordering::Less)
}

/// Dual of [`standard_find_max`].
pub fn standard_find_min(state: &mut ProbeState<'_>, candidates: &[usize]) -> Result<usize> {
    tournament(state, candidates, Ordering::Greater)
}

fn tournament(state: &mut ProbeState<'_>, candidates: &[usize], loses: Ordering) -> Result<usize> {
    let (&first, rest) = candidates
        .split_first()
        .ok_or_else(|| crate::Error::Parameter("no candidates".into()))?;
    let mut champion = first;
    for &c in rest {
        let rel = match state.comparable(champion, c) {
            Some(o) => o,
            None => state.probe(champion, c)?,
        };
        if rel == loses {
            champion = c;
        }
    }
    Ok(champion)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BooleanMax {
    pub element: usize,
    pub certificate: Certificate,
    /// Elements that lost no free comparison.
    pub survivors: usize,
}

/// Buys all free comparisons, then runs a tournament among the elements
/// that lost none of them.
pub fn boolean_find_max(state: &mut ProbeState<'_>) -> Result<BooleanMax> {
    boolean_p(state)?;
    probe_free(state)?;
    let survivors: Vec<usize> = (0..state.n()).filter(|&v| state.known_above(v) == 0).collect();
    let element = standard_find_max(state, &survivors)?;
    Ok(BooleanMax {
        element,
        certificate: state.snapshot_certificate(CertificateKind::MaxTree { element }),
        survivors: survivors.len(),
    })
}

/// Randomized quickselect over `subset` that consults known relations
/// before paying for a comparison. `k` is 1-based within `subset`.
pub fn standard_selection<R: Rng>(
    state: &mut ProbeState<'_>,
    subset: &[usize],
    k: usize,
    rng: &mut R,
) -> Result<usize> {
    if k == 0 || k > subset.len() {
        return param(format!("rank {k} out of range 1..={}", subset.len()));
    }
    let mut set = subset.to_vec();
    let mut want = k;
    loop {
        if set.len() == 1 {
            return Ok(set[0]);
        }
        let pivot = *set.choose(rng).expect("non-empty");
        let mut below = Vec::new();
        let mut above = Vec::new();
        for &u in &set {
            if u == pivot {
                continue;
            }
            let rel = match state.comparable(u, pivot) {
                Some(o) => o,
                None => state.probe(u, pivot)?,
            };
            if rel == Ordering::Less {
                below.push(u);
            } else {
                above.push(u);
            }
        }
        match want.cmp(&(below.len() + 1)) {
            Ordering::Less => set = below,
            Ordering::Equal => return Ok(pivot),
            Ordering::Greater => {
                want -= below.len() + 1;
                set = above;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BooleanSelection {
    pub element: usize,
    pub certificate: Certificate,
    pub w: usize,
    /// Size of the candidate window `S`.
    pub window: usize,
    /// True when `[r_min, r_max]` missed `k` and selection ran on everything.
    pub fallback: bool,
}

/// Selection that narrows to the elements whose free-comparison record puts
/// them within `w` ranks of `k`, brackets that window with its exact
/// extremes, and selects inside the bracket.
pub fn boolean_selection<R: Rng>(
    state: &mut ProbeState<'_>,
    k: usize,
    params: &BooleanParams,
    rng: &mut R,
) -> Result<BooleanSelection> {
    let p = boolean_p(state)?;
    let n = state.n();
    if k == 0 || k > n {
        return param(format!("rank {k} out of range 1..={n}"));
    }
    probe_free(state)?;
    let w = params.window(n, p);

    // Wins and losses count everything the free comparisons imply.
    let (k_i, n_i, w_i) = (k as i64, n as i64, w as i64);
    let window: Vec<usize> = (0..n)
        .filter(|&v| {
            state.known_below(v) as i64 >= k_i - 1 - w_i && state.known_above(v) as i64 >= n_i - k_i - w_i
        })
        .collect();

    let all: Vec<usize> = (0..n).collect();
    let mut fallback = true;
    let mut element = None;
    if !window.is_empty() {
        let lo = standard_find_min(state, &window)?;
        let hi = standard_find_max(state, &window)?;
        for &pivot in &[lo, hi] {
            for u in 0..n {
                if u != pivot && state.comparable(u, pivot).is_none() {
                    state.probe(u, pivot)?;
                }
            }
        }
        let r_min = state.known_below(lo) + 1;
        let r_max = state.known_below(hi) + 1;
        if r_min <= k && k <= r_max {
            let bracket: Vec<usize> = (0..n)
                .filter(|&v| {
                    (v == lo || state.comparable(lo, v) == Some(Ordering::Less))
                        && (v == hi || state.comparable(v, hi) == Some(Ordering::Less))
                })
                .collect();
            debug_assert_eq!(bracket.len(), r_max - r_min + 1);
            element = Some(standard_selection(state, &bracket, k - r_min + 1, rng)?);
            fallback = false;
        }
    }
    let element = match element {
        Some(e) => e,
        None => standard_selection(state, &all, k, rng)?,
    };
    Ok(BooleanSelection {
        element,
        certificate: state.snapshot_certificate(CertificateKind::Rank { k, element }),
        w,
        window: window.len(),
        fallback,
    })
}

/// Sorts by extracting the maximum `n - 1` times. The free comparisons are
/// bought once; each round's tournament runs only among remaining elements
/// with no known larger remaining element.
pub fn boolean_sort_repeated_max(state: &mut ProbeState<'_>) -> Result<(Vec<usize>, Certificate)> {
    boolean_p(state)?;
    probe_free(state)?;
    let n = state.n();
    let mut remaining = vec![true; n];
    let mut descending = Vec::with_capacity(n);
    for _ in 0..n {
        let candidates: Vec<usize> = (0..n)
            .filter(|&v| remaining[v])
            .filter(|&v| {
                (0..n).all(|u| !remaining[u] || u == v || state.comparable(v, u) != Some(Ordering::Less))
            })
            .collect();
        let top = standard_find_max(state, &candidates)?;
        remaining[top] = false;
        descending.push(top);
    }
    descending.reverse();
    Ok((descending, state.snapshot_certificate(CertificateKind::Sort)))
}

//! Random problem instances: a hidden total order plus a price for every pair.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{param, Result};

/// Price of a forbidden comparison under the unit/infinite model.
pub const FORBIDDEN: f64 = f64::INFINITY;

/// How comparison prices are drawn. Every pair is priced independently.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum CostModel {
    /// Price uniform on `[0, 1)`.
    Uniform,
    /// Price 0 with probability `p`, otherwise 1.
    Boolean { p: f64 },
    /// Price 1 with probability `p`, otherwise forbidden.
    #[serde(rename = "unit-inf")]
    UnitInfinite { p: f64 },
}

impl CostModel {
    pub fn boolean(p: f64) -> Result<Self> {
        let m = CostModel::Boolean { p };
        m.validate()?;
        Ok(m)
    }

    pub fn unit_infinite(p: f64) -> Result<Self> {
        let m = CostModel::UnitInfinite { p };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            CostModel::Uniform => Ok(()),
            CostModel::Boolean { p } | CostModel::UnitInfinite { p } => {
                if p > 0.0 && p <= 1.0 {
                    Ok(())
                } else {
                    param(format!("probability p must lie in (0, 1], got {p}"))
                }
            }
        }
    }

    /// The model's `p`, or `None` for the uniform model.
    pub fn p(&self) -> Option<f64> {
        match *self {
            CostModel::Uniform => None,
            CostModel::Boolean { p } | CostModel::UnitInfinite { p } => Some(p),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CostModel::Uniform => "uniform",
            CostModel::Boolean { .. } => "boolean",
            CostModel::UnitInfinite { .. } => "unit-inf",
        }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        match *self {
            CostModel::Uniform => rng.gen::<f64>(),
            CostModel::Boolean { p } => {
                if rng.gen_bool(p) {
                    0.0
                } else {
                    1.0
                }
            }
            CostModel::UnitInfinite { p } => {
                if rng.gen_bool(p) {
                    1.0
                } else {
                    FORBIDDEN
                }
            }
        }
    }

    fn admits(&self, cost: f64) -> bool {
        match self {
            CostModel::Uniform => (0.0..=1.0).contains(&cost),
            CostModel::Boolean { .. } => cost == 0.0 || cost == 1.0,
            CostModel::UnitInfinite { .. } => cost == 1.0 || cost == FORBIDDEN,
        }
    }
}

impl fmt::Display for CostModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.p() {
            None => f.write_str(self.name()),
            Some(p) => write!(f, "{}(p={p})", self.name()),
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Identifies the randomness of one trial. Streams for different trial
/// indices are independent of each other and of execution order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub root_seed: u64,
    pub trial_index: u64,
}

impl RngStream {
    pub fn new(root_seed: u64, trial_index: u64) -> Self {
        RngStream { root_seed, trial_index }
    }

    /// The per-trial seed: `root_seed` and `trial_index` pushed through an
    /// avalanche mix so neighbouring trials share no structure.
    pub fn seed(&self) -> u64 {
        splitmix64(self.root_seed ^ splitmix64(self.trial_index))
    }

    pub fn instance_rng(&self) -> ChaCha8Rng {
        instance_rng(self.seed())
    }

    /// Randomness for the algorithm under test, disjoint from the instance's.
    pub fn algorithm_rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed());
        rng.set_stream(1);
        rng
    }
}

fn instance_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(0);
    rng
}

/// Index of the unordered pair `{u, v}` in the packed lower triangle.
#[inline]
pub fn pair_index(u: usize, v: usize) -> usize {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    b * (b - 1) / 2 + a
}

/// One trial's ground truth. Elements are `0..n`; ranks are `1..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    n: usize,
    rank: Vec<u32>,
    by_rank: Vec<u32>,
    costs: Vec<f64>,
    model: CostModel,
    seed: u64,
}

pub fn generate_instance(n: usize, model: CostModel, stream: RngStream) -> Result<Instance> {
    Instance::generate(n, model, stream.seed())
}

impl Instance {
    /// Draws a uniformly random hidden order and i.i.d. pair prices.
    pub fn generate(n: usize, model: CostModel, seed: u64) -> Result<Self> {
        if n == 0 {
            return param("instance needs at least one element");
        }
        if n > u32::MAX as usize {
            return param("element count exceeds u32 range");
        }
        model.validate()?;
        let mut rng = instance_rng(seed);
        let mut by_rank: Vec<u32> = (0..n as u32).collect();
        by_rank.shuffle(&mut rng);
        let mut rank = vec![0u32; n];
        for (r, &v) in by_rank.iter().enumerate() {
            rank[v as usize] = r as u32 + 1;
        }
        let costs = (0..n * (n - 1) / 2).map(|_| model.sample(&mut rng)).collect();
        Ok(Instance { n, rank, by_rank, costs, model, seed })
    }

    /// Builds an instance from explicit data. `ranks[v]` is the true rank of
    /// element `v` (1-based); `costs` is indexed by [`pair_index`].
    pub fn from_parts(model: CostModel, ranks: Vec<usize>, costs: Vec<f64>, seed: u64) -> Result<Self> {
        model.validate()?;
        let n = ranks.len();
        if n == 0 {
            return param("instance needs at least one element");
        }
        let mut by_rank = vec![u32::MAX; n];
        for (v, &r) in ranks.iter().enumerate() {
            if r == 0 || r > n || by_rank[r - 1] != u32::MAX {
                return param("ranks must be a permutation of 1..=n");
            }
            by_rank[r - 1] = v as u32;
        }
        if costs.len() != n * (n - 1) / 2 {
            return param(format!(
                "expected {} pair costs, got {}",
                n * (n - 1) / 2,
                costs.len()
            ));
        }
        if let Some(c) = costs.iter().find(|&&c| !model.admits(c)) {
            return param(format!("cost {c} is not admissible under {model}"));
        }
        let rank = ranks.iter().map(|&r| r as u32).collect();
        Ok(Instance { n, rank, by_rank, costs, model, seed })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn model(&self) -> CostModel {
        self.model
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Ground-truth rank (1-based) of `element`. Never used by algorithms.
    pub fn rank_of(&self, element: usize) -> Result<usize> {
        if element >= self.n {
            return param(format!("unknown element {element} (n = {})", self.n));
        }
        Ok(self.rank[element] as usize)
    }

    /// The element of true rank `r` (1-based).
    pub fn element_of_rank(&self, r: usize) -> usize {
        self.by_rank[r - 1] as usize
    }

    /// Elements listed from smallest to largest.
    pub fn sorted_elements(&self) -> Vec<usize> {
        self.by_rank.iter().map(|&v| v as usize).collect()
    }

    /// True ranks indexed by element.
    pub fn ranks(&self) -> Vec<usize> {
        self.rank.iter().map(|&r| r as usize).collect()
    }

    #[inline]
    pub fn less(&self, u: usize, v: usize) -> bool {
        self.rank[u] < self.rank[v]
    }

    /// Price of comparing `u` and `v`. Panics when `u == v` or out of range.
    #[inline]
    pub fn cost(&self, u: usize, v: usize) -> f64 {
        assert!(u != v && u < self.n && v < self.n, "bad pair ({u}, {v})");
        self.costs[pair_index(u, v)]
    }

    pub fn pair_count(&self) -> usize {
        self.costs.len()
    }

    /// All unordered pairs `(u, v, cost)` with `u < v` by id.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (1..self.n).flat_map(move |b| {
            let base = b * (b - 1) / 2;
            (0..b).map(move |a| (a, b, self.costs[base + a]))
        })
    }
}

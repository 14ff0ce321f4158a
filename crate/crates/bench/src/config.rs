//! Experiment configuration and its validation.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use priced_core::boolean::WMode;
use priced_core::extensions::EXTENSIONS_MAX_N;
use priced_core::uniform::DEFAULT_ALPHA_COEFF;
use priced_core::CostModel;
use serde::{Deserialize, Serialize};

use crate::BenchError;

/// Coefficient used by the shipped reports. The default of 1200 makes the first
/// price band cover every pair at any size a desktop can run.
pub const BENCH_ALPHA_COEFF: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Uniform,
    Boolean,
    UnitInf,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [ModelKind::Uniform, ModelKind::Boolean, ModelKind::UnitInf];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Uniform => "uniform",
            ModelKind::Boolean => "boolean",
            ModelKind::UnitInf => "unit-inf",
        }
    }

    pub fn uses_p(self) -> bool {
        self != ModelKind::Uniform
    }

    pub fn with_p(self, p: Option<f64>) -> Result<CostModel, BenchError> {
        let need = || BenchError::Config(format!("model {self} needs p"));
        Ok(match self {
            ModelKind::Uniform => CostModel::Uniform,
            ModelKind::Boolean => CostModel::boolean(p.ok_or_else(need)?)?,
            ModelKind::UnitInf => CostModel::unit_infinite(p.ok_or_else(need)?)?,
        })
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = BenchError;
    fn from_str(s: &str) -> Result<Self, BenchError> {
        ModelKind::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| BenchError::Config(format!("unknown model {s:?} (uniform, boolean, unit-inf)")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    FindMax,
    Selection,
    Sort,
    RankCert,
    FindMaximal,
    FindAllMaximal,
    BalancedSort,
    RepeatedMaxSort,
}

impl Algorithm {
    pub const ALL: [Algorithm; 8] = [
        Algorithm::FindMax,
        Algorithm::Selection,
        Algorithm::Sort,
        Algorithm::RankCert,
        Algorithm::FindMaximal,
        Algorithm::FindAllMaximal,
        Algorithm::BalancedSort,
        Algorithm::RepeatedMaxSort,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::FindMax => "find-max",
            Algorithm::Selection => "selection",
            Algorithm::Sort => "sort",
            Algorithm::RankCert => "rank-cert",
            Algorithm::FindMaximal => "find-maximal",
            Algorithm::FindAllMaximal => "find-all-maximal",
            Algorithm::BalancedSort => "balanced-sort",
            Algorithm::RepeatedMaxSort => "repeated-max-sort",
        }
    }

    pub fn uses_k(self) -> bool {
        matches!(self, Algorithm::Selection | Algorithm::RankCert)
    }

    /// Whether the algorithm exists for the model.
    pub fn supports(self, model: ModelKind) -> bool {
        use Algorithm::*;
        match model {
            ModelKind::Uniform => matches!(self, FindMax | Selection | Sort | RankCert),
            ModelKind::Boolean => matches!(self, FindMax | Selection | RepeatedMaxSort | BalancedSort),
            ModelKind::UnitInf => matches!(self, FindMaximal | FindAllMaximal),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = BenchError;
    fn from_str(s: &str) -> Result<Self, BenchError> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| BenchError::Config(format!("unknown algorithm {s:?}")))
    }
}

/// Target rank: a fixed number, or a fraction of `n` such as `n/2`
/// (floored, at least 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KSpec {
    Absolute(usize),
    Fraction { num: usize, den: usize },
}

impl KSpec {
    pub fn resolve(self, n: usize) -> Result<usize, BenchError> {
        let k = match self {
            KSpec::Absolute(k) => k,
            KSpec::Fraction { num, den } => (num * n / den).max(1),
        };
        if k == 0 || k > n {
            return Err(BenchError::Config(format!("k = {k} is out of range for n = {n}")));
        }
        Ok(k)
    }
}

impl FromStr for KSpec {
    type Err = BenchError;
    /// Accepts `17`, `n`, `n/2` and `3n/4`.
    fn from_str(s: &str) -> Result<Self, BenchError> {
        let bad = || BenchError::Config(format!("cannot read k spec {s:?}"));
        let s = s.trim();
        if let Ok(k) = s.parse() {
            return Ok(KSpec::Absolute(k));
        }
        let (head, den) = match s.split_once('/') {
            Some((h, d)) => (h, d.trim().parse::<usize>().map_err(|_| bad())?),
            None => (s, 1),
        };
        let num = match head.trim().strip_suffix('n').ok_or_else(bad)?.trim() {
            "" => 1,
            c => c.parse().map_err(|_| bad())?,
        };
        if den == 0 || num == 0 || num > den {
            return Err(bad());
        }
        Ok(KSpec::Fraction { num, den })
    }
}

impl fmt::Display for KSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            KSpec::Absolute(k) => write!(f, "{k}"),
            KSpec::Fraction { num: 1, den: 1 } => f.write_str("n"),
            KSpec::Fraction { num: 1, den } => write!(f, "n/{den}"),
            KSpec::Fraction { num, den } => write!(f, "{num}n/{den}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub model: ModelKind,
    pub algorithm: Algorithm,
    pub ns: Vec<usize>,
    /// Ignored for the uniform model.
    pub ps: Vec<f64>,
    /// Defaults to `n/2` for algorithms that need a rank.
    pub k: Option<KSpec>,
    pub trials: usize,
    pub root_seed: u64,
    pub workers: usize,
    pub alpha_coeff: f64,
    pub w_mode: WMode,
    /// When false, `elapsed_us` is written as 0 so reruns are byte-identical.
    pub record_timing: bool,
    /// Directory for per-trial instance and certificate files.
    pub dump_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(model: ModelKind, algorithm: Algorithm, ns: Vec<usize>) -> Self {
        ExperimentConfig {
            model,
            algorithm,
            ns,
            ps: vec![0.5],
            k: None,
            trials: 1000,
            root_seed: 42,
            workers: 1,
            alpha_coeff: DEFAULT_ALPHA_COEFF,
            w_mode: WMode::Quadratic,
            record_timing: true,
            dump_dir: None,
        }
    }

    /// Every `(n, p, k)` cell in run order, or the first reason the
    /// configuration cannot run.
    pub fn combos(&self) -> Result<Vec<Combo>, BenchError> {
        let err = |m: String| Err(BenchError::Config(m));
        if !self.algorithm.supports(self.model) {
            return err(format!("{} is not defined for the {} model", self.algorithm, self.model));
        }
        if self.trials == 0 {
            return err("trials must be at least 1".into());
        }
        if self.workers == 0 {
            return err("workers must be at least 1".into());
        }
        if self.ns.is_empty() {
            return err("no sizes given".into());
        }
        if !(self.alpha_coeff.is_finite() && self.alpha_coeff > 0.0) {
            return err(format!("alpha coefficient must be positive, got {}", self.alpha_coeff));
        }
        let ps: Vec<Option<f64>> = if self.model.uses_p() {
            if self.ps.is_empty() {
                return err(format!("model {} needs at least one p", self.model));
            }
            self.ps.iter().map(|&p| Some(p)).collect()
        } else {
            vec![None]
        };
        let k_spec = self.k.unwrap_or(KSpec::Fraction { num: 1, den: 2 });
        let mut out = Vec::new();
        for &n in &self.ns {
            if n == 0 {
                return err("n must be at least 1".into());
            }
            if self.algorithm == Algorithm::BalancedSort && n > EXTENSIONS_MAX_N {
                return err(format!("balanced-sort counts extensions exactly and needs n <= {EXTENSIONS_MAX_N}"));
            }
            let k = if self.algorithm.uses_k() { Some(k_spec.resolve(n)?) } else { None };
            for &p in &ps {
                self.model.with_p(p)?;
                out.push(Combo { n, p, k });
            }
        }
        Ok(out)
    }
}

/// One grid cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Combo {
    pub n: usize,
    pub p: Option<f64>,
    pub k: Option<usize>,
}

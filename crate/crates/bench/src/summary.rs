//! Grouping trial records and judging them against closed forms.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use priced_core::bounds::{Bound, BoundRule};
use serde::{Deserialize, Serialize};

use crate::config::{Algorithm, ModelKind};
use crate::experiment::TrialRecord;
use crate::stats::Stats;
use crate::BenchError;

/// Standard errors allowed on either side of a statistical target.
pub const SIGMAS: f64 = 3.0;

/// Which record column a bound is compared with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    Cost,
    MinCert,
    Probes,
}

impl Metric {
    fn value(self, r: &TrialRecord) -> Option<f64> {
        match self {
            Metric::Cost => Some(r.cost),
            Metric::MinCert => r.min_cert_cost,
            Metric::Probes => Some(r.probes as f64),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Metric::Cost => "cost",
            Metric::MinCert => "min-cert",
            Metric::Probes => "probes",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundBinding {
    pub bound: Bound,
    pub metric: Metric,
}

impl BoundBinding {
    pub fn new(bound: Bound, metric: Metric) -> Self {
        BoundBinding { bound, metric }
    }
}

impl FromStr for BoundBinding {
    type Err = BenchError;
    /// `name` or `name:metric`, metric one of `cost`, `min-cert`, `probes`.
    fn from_str(s: &str) -> Result<Self, BenchError> {
        let (name, metric) = s.split_once(':').unwrap_or((s, "cost"));
        let bound = name
            .parse::<Bound>()
            .map_err(|_| BenchError::Config(format!("unknown bound name {name:?}")))?;
        let metric = [Metric::Cost, Metric::MinCert, Metric::Probes]
            .into_iter()
            .find(|m| m.name() == metric)
            .ok_or_else(|| BenchError::Config(format!("unknown metric {metric:?}")))?;
        Ok(BoundBinding { bound, metric })
    }
}

/// The closed forms each shipped algorithm is checked against.
pub fn default_bindings(model: ModelKind, algorithm: Algorithm) -> Vec<BoundBinding> {
    use Algorithm::*;
    use Metric::*;
    let b = BoundBinding::new;
    match (model, algorithm) {
        (ModelKind::Uniform, FindMax) => vec![b(Bound::UniformFindMax, Cost), b(Bound::RankCertExpect, MinCert)],
        (ModelKind::Uniform, Selection | RankCert) => vec![b(Bound::RankCertExpect, MinCert)],
        (ModelKind::Uniform, Sort) => vec![b(Bound::UniformSortCertExpect, MinCert)],
        (ModelKind::Boolean, FindMax) => vec![b(Bound::BooleanFindMaxLimit, Cost)],
        (ModelKind::Boolean, RepeatedMaxSort) => {
            vec![b(Bound::BooleanRepeatedMaxBound, Cost), b(Bound::BooleanSortCertExpect, MinCert)]
        }
        (ModelKind::Boolean, BalancedSort) => {
            vec![b(Bound::BalancedSortBound, Cost), b(Bound::BooleanSortCertExpect, MinCert)]
        }
        (ModelKind::UnitInf, FindMaximal) => vec![b(Bound::PosetMaximalUpper, Probes)],
        (ModelKind::UnitInf, FindAllMaximal) => {
            vec![b(Bound::PosetAllMaxUpper, Cost), b(Bound::PosetAllMaxLower, Cost)]
        }
        _ => Vec::new(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub model: ModelKind,
    pub algorithm: Algorithm,
    pub n: usize,
    pub p: Option<f64>,
    pub k: Option<usize>,
    pub trials: usize,
    pub mean_cost: f64,
    pub std: f64,
    pub stderr: f64,
    pub ci95: f64,
    pub mean_min_cert: Option<f64>,
    pub bound_name: Option<String>,
    pub bound_metric: Option<Metric>,
    pub bound_value: Option<f64>,
    /// Mean and standard error of the bound's metric.
    pub metric_mean: Option<f64>,
    pub metric_stderr: Option<f64>,
    /// Result of the bound comparison; true when no bound applies.
    pub pass: bool,
    /// Every trial in the group produced a correct output and valid certificate.
    pub all_valid: bool,
}

impl SummaryRow {
    pub fn ok(&self) -> bool {
        self.pass && self.all_valid
    }
}

/// Whether `stats` is consistent with `value` under `bound`'s rule.
pub fn judge(bound: Bound, stats: &Stats, value: f64, n: usize, p: Option<f64>) -> bool {
    let band = SIGMAS * stats.stderr;
    // Floating-point sums of identical terms can land an ulp off.
    let eps = 1e-9 * value.abs().max(1.0);
    match bound.rule() {
        BoundRule::Upper => stats.mean <= value + band + eps,
        BoundRule::Lower => stats.mean >= value - band - eps,
        BoundRule::Expectation => stats.within(value, SIGMAS, eps),
        BoundRule::Limit => stats.within(value, SIGMAS, bound.finite_n_slack(n, p) + eps),
    }
}

type GroupKey = (ModelKind, Algorithm, usize, Option<u64>, Option<usize>);

/// Groups records by `(model, algorithm, n, p, k)` in first-seen order and
/// emits one row per bound binding (one row with no bound if none apply).
/// `bindings` overrides the defaults for every group.
pub fn summarize(records: &[TrialRecord], bindings: Option<&[BoundBinding]>) -> Result<Vec<SummaryRow>, BenchError> {
    let mut order: Vec<GroupKey> = Vec::new();
    let mut groups: HashMap<GroupKey, Vec<&TrialRecord>> = HashMap::new();
    for r in records {
        let key = (r.model, r.algorithm, r.n, r.p.map(f64::to_bits), r.k);
        groups
            .entry(key)
            .or_insert_with(|| {
                order.push(key);
                Vec::new()
            })
            .push(r);
    }

    let mut rows = Vec::new();
    for key in order {
        let group = &groups[&key];
        let first = group[0];
        let cost = Stats::of(group.iter().map(|r| r.cost)).expect("groups are non-empty");
        let min_cert = Stats::of(group.iter().filter_map(|r| r.min_cert_cost));
        let base = SummaryRow {
            model: first.model,
            algorithm: first.algorithm,
            n: first.n,
            p: first.p,
            k: first.k,
            trials: group.len(),
            mean_cost: cost.mean,
            std: cost.std,
            stderr: cost.stderr,
            ci95: cost.ci95,
            mean_min_cert: min_cert.map(|s| s.mean),
            bound_name: None,
            bound_metric: None,
            bound_value: None,
            metric_mean: None,
            metric_stderr: None,
            pass: true,
            all_valid: group.iter().all(|r| r.ok()),
        };
        let list = match bindings {
            Some(b) => b.to_vec(),
            None => default_bindings(first.model, first.algorithm),
        };
        if list.is_empty() {
            rows.push(base);
            continue;
        }
        for binding in list {
            let stats = Stats::of(group.iter().filter_map(|r| binding.metric.value(r))).ok_or_else(|| {
                BenchError::Config(format!("{} has no {} column", first.algorithm, binding.metric))
            })?;
            // Rank bounds default to the maximum when the group has no k.
            let value = binding.bound.evaluate(first.n, first.p, first.k.or(Some(first.n)))?;
            rows.push(SummaryRow {
                bound_name: Some(binding.bound.name().to_string()),
                bound_metric: Some(binding.metric),
                bound_value: Some(value),
                metric_mean: Some(stats.mean),
                metric_stderr: Some(stats.stderr),
                pass: judge(binding.bound, &stats, value, first.n, first.p),
                ..base.clone()
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(cost: f64, p: Option<f64>) -> TrialRecord {
        TrialRecord {
            model: ModelKind::Boolean,
            algorithm: Algorithm::FindMax,
            n: 200,
            p,
            k: None,
            trial: 0,
            cost,
            probes: 0,
            cert_valid: true,
            output_correct: true,
            min_cert_cost: Some(0.0),
            elapsed_us: 0,
        }
    }

    #[test]
    fn single_record_has_zero_stderr() {
        let rows = summarize(&[record(1.0, Some(0.5))], None).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].stderr, 0.0);
        assert_eq!(rows[0].bound_value, Some(1.0));
        assert!(rows[0].pass);
        let off = summarize(&[record(1.5, Some(0.5))], None).unwrap();
        assert!(!off[0].pass);
    }

    #[test]
    fn all_zero_costs_pass_upper_bounds() {
        let recs: Vec<_> = (0..5).map(|_| record(0.0, Some(1.0))).collect();
        let b: BoundBinding = "boolean_repeated_max_bound".parse().unwrap();
        let rows = summarize(&recs, Some(&[b])).unwrap();
        assert_eq!(rows[0].mean_cost, 0.0);
        assert!(rows[0].pass);
    }

    #[test]
    fn groups_split_on_p() {
        let recs = vec![record(1.0, Some(0.5)), record(2.0, Some(0.25)), record(1.0, Some(0.5))];
        let rows = summarize(&recs, Some(&[])).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].trials, 2);
        assert_eq!(rows[1].p, Some(0.25));
    }

    #[test]
    fn unknown_names_are_config_errors() {
        assert!(matches!("nope".parse::<BoundBinding>(), Err(BenchError::Config(_))));
        assert!(matches!("harmonic:speed".parse::<BoundBinding>(), Err(BenchError::Config(_))));
        let b: BoundBinding = "rank_cert_expect:min-cert".parse().unwrap();
        assert_eq!(b.metric, Metric::MinCert);
    }

    #[test]
    fn invalid_trials_fail_the_group() {
        let mut bad = record(1.0, Some(0.5));
        bad.cert_valid = false;
        let rows = summarize(&[bad], None).unwrap();
        assert!(rows[0].pass && !rows[0].all_valid && !rows[0].ok());
    }
}

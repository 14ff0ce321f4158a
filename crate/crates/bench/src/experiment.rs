//! Running trials.

use std::time::Instant;

use priced_core::boolean::{boolean_find_max, boolean_selection, boolean_sort_repeated_max, BooleanParams};
use priced_core::certificate::{
    min_rank_certificate_cost, min_sort_certificate_cost, verify_maximal_element, verify_maximal_set, verify_rank,
    verify_sort,
};
use priced_core::extensions::{balanced_pair_sort, TraceStep};
use priced_core::poset::{exhaustive_maximal_set, poset_find_all_maximal, poset_find_maximal, AllowedGraph};
use priced_core::uniform::{
    uniform_find_max, uniform_rank_certificate, uniform_selection, uniform_sort, RankSplit, UniformParams,
};
use priced_core::{generate_instance, Certificate, CertificateKind, Instance, ProbeState, RngStream};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Algorithm, Combo, ExperimentConfig, ModelKind};
use crate::BenchError;

/// One row of the CSV output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub model: ModelKind,
    pub algorithm: Algorithm,
    pub n: usize,
    pub p: Option<f64>,
    pub k: Option<usize>,
    /// Global trial ordinal; also the RNG stream index.
    pub trial: u64,
    pub cost: f64,
    pub probes: usize,
    pub cert_valid: bool,
    pub output_correct: bool,
    /// Empty for the unit/infinite model, which has no closed form.
    pub min_cert_cost: Option<f64>,
    pub elapsed_us: u64,
}

impl TrialRecord {
    pub fn ok(&self) -> bool {
        self.cert_valid && self.output_correct
    }
}

/// Algorithm-specific measurements that do not fit the CSV row.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrialDetail {
    /// Boolean find-max: elements that lost no free comparison.
    pub survivors: Option<usize>,
    /// Boolean selection.
    pub fallback: Option<bool>,
    pub w: Option<usize>,
    pub window: Option<usize>,
    /// Balanced sort.
    pub initial_extensions: Option<u64>,
    pub trace: Vec<TraceStep>,
    /// Unit/infinite model: elements with no allowed comparison.
    pub isolated: Option<usize>,
    /// Uniform rank-cert: number of price bands used.
    pub bands: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub record: TrialRecord,
    pub detail: TrialDetail,
}

/// Runs every trial of the configuration and returns records in
/// `(combination, trial)` order regardless of the worker count.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<TrialRecord>, BenchError> {
    Ok(run_detailed(config, |_, _, _| Ok(()))?.into_iter().map(|o| o.record).collect())
}

/// Like [`run_experiment`], keeping per-trial detail. `inspect` sees each
/// instance, outcome and certificate before they are dropped.
pub fn run_detailed<F>(config: &ExperimentConfig, inspect: F) -> Result<Vec<TrialOutcome>, BenchError>
where
    F: Fn(&Instance, &TrialOutcome, &Certificate) -> Result<(), BenchError> + Sync,
{
    let combos = config.combos()?;
    let trials = config.trials as u64;
    let jobs: Vec<(Combo, u64)> = combos
        .iter()
        .enumerate()
        .flat_map(|(c, &combo)| (0..trials).map(move |t| (combo, c as u64 * trials + t)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(config.workers).build()?;
    pool.install(|| {
        jobs.par_iter()
            .map(|&(combo, ordinal)| {
                let stream = RngStream::new(config.root_seed, ordinal);
                let model = config.model.with_p(combo.p)?;
                let instance = generate_instance(combo.n, model, stream)?;
                let (outcome, certificate) = run_trial(config, combo, ordinal, &instance, stream)?;
                inspect(&instance, &outcome, &certificate)?;
                Ok(outcome)
            })
            .collect()
    })
}

/// Runs one algorithm on one instance and checks the result against ground
/// truth.
pub fn run_trial(
    config: &ExperimentConfig,
    combo: Combo,
    ordinal: u64,
    instance: &Instance,
    stream: RngStream,
) -> Result<(TrialOutcome, Certificate), BenchError> {
    let n = instance.n();
    let mut rng = stream.algorithm_rng();
    let mut state = ProbeState::new(instance);
    let mut detail = TrialDetail::default();
    let uniform = UniformParams::with_alpha_coeff(config.alpha_coeff)?;
    let boolean = BooleanParams { w_mode: config.w_mode };
    let k = combo.k;

    let start = Instant::now();
    let (certificate, output) = match (config.model, config.algorithm) {
        (ModelKind::Uniform, Algorithm::FindMax) => {
            let (m, cert) = uniform_find_max(&mut state)?;
            (cert, Output::Element(m))
        }
        (ModelKind::Boolean, Algorithm::FindMax) => {
            let out = boolean_find_max(&mut state)?;
            detail.survivors = Some(out.survivors);
            (out.certificate, Output::Element(out.element))
        }
        (ModelKind::Uniform, Algorithm::Selection) => {
            let (e, cert) = uniform_selection(&mut state, need_k(k)?, &uniform, &mut rng)?;
            (cert, Output::Element(e))
        }
        (ModelKind::Boolean, Algorithm::Selection) => {
            let out = boolean_selection(&mut state, need_k(k)?, &boolean, &mut rng)?;
            detail.fallback = Some(out.fallback);
            detail.w = Some(out.w);
            detail.window = Some(out.window);
            (out.certificate, Output::Element(out.element))
        }
        (ModelKind::Uniform, Algorithm::RankCert) => {
            let k = need_k(k)?;
            let pivot = instance.element_of_rank(k);
            let run = uniform_rank_certificate(&mut state, pivot, &uniform)?;
            detail.bands = Some(run.bands.len());
            let below = match run.split {
                RankSplit::Split { below, .. } => Some(below.len()),
                RankSplit::Failed { .. } => None,
            };
            (state.snapshot_certificate(CertificateKind::Rank { k, element: pivot }), Output::Split(below))
        }
        (ModelKind::Uniform, Algorithm::Sort) => {
            let (order, cert) = uniform_sort(&mut state, &uniform, &mut rng)?;
            (cert, Output::Order(order))
        }
        (ModelKind::Boolean, Algorithm::RepeatedMaxSort) => {
            let (order, cert) = boolean_sort_repeated_max(&mut state)?;
            (cert, Output::Order(order))
        }
        (ModelKind::Boolean, Algorithm::BalancedSort) => {
            let out = balanced_pair_sort(&mut state)?;
            detail.initial_extensions = Some(out.initial_extensions);
            detail.trace = out.trace;
            (out.certificate, Output::Order(out.order))
        }
        (ModelKind::UnitInf, Algorithm::FindMaximal) => {
            let (v, cert) = poset_find_maximal(&mut state)?;
            (cert, Output::Maximal(v))
        }
        (ModelKind::UnitInf, Algorithm::FindAllMaximal) => {
            let (set, cert) = poset_find_all_maximal(&mut state, &mut rng)?;
            (cert, Output::MaximalSet(set))
        }
        (model, alg) => return Err(BenchError::Config(format!("{alg} is not defined for the {model} model"))),
    };
    let elapsed = start.elapsed();

    // The certificate must prove the true answer, whatever the algorithm
    // claimed.
    let target = |r: usize| verify_rank(&certificate, instance.element_of_rank(r), r, n);
    let (output_correct, cert_valid) = match output {
        Output::Element(e) => {
            let r = if config.algorithm == Algorithm::FindMax { n } else { need_k(k)? };
            (instance.rank_of(e)? == r, target(r)?)
        }
        Output::Split(below) => {
            let k = need_k(k)?;
            (below == Some(k - 1), target(k)?)
        }
        Output::Order(order) => {
            let truth = instance.sorted_elements();
            (order == truth, verify_sort(&certificate, &truth)?)
        }
        Output::Maximal(v) => (
            exhaustive_maximal_set(instance)?.contains(&v),
            verify_maximal_element(&certificate, v, instance)?,
        ),
        Output::MaximalSet(set) => {
            let truth = exhaustive_maximal_set(instance)?;
            (set == truth, verify_maximal_set(&certificate, &truth, instance)?)
        }
    };
    let cert_valid = cert_valid && certificate.consistent_with(instance);

    let min_cert_cost = match config.algorithm {
        _ if config.model == ModelKind::UnitInf => None,
        Algorithm::FindMax => Some(min_rank_certificate_cost(instance, n)?),
        Algorithm::Selection | Algorithm::RankCert => Some(min_rank_certificate_cost(instance, need_k(k)?)?),
        _ => Some(min_sort_certificate_cost(instance)),
    };
    if config.model == ModelKind::UnitInf {
        detail.isolated = Some(AllowedGraph::new(instance).isolated_count());
    }

    let record = TrialRecord {
        model: config.model,
        algorithm: config.algorithm,
        n,
        p: combo.p,
        k: combo.k,
        trial: ordinal,
        cost: state.total_cost(),
        probes: state.probe_count(),
        cert_valid,
        output_correct,
        min_cert_cost,
        elapsed_us: if config.record_timing { elapsed.as_micros() as u64 } else { 0 },
    };
    Ok((TrialOutcome { record, detail }, certificate))
}

enum Output {
    Element(usize),
    /// Size of the below side, `None` if the split failed.
    Split(Option<usize>),
    Order(Vec<usize>),
    Maximal(usize),
    MaximalSet(Vec<usize>),
}

fn need_k(k: Option<usize>) -> Result<usize, BenchError> {
    k.ok_or_else(|| BenchError::Config("this algorithm needs k".into()))
}

/// Evaluates `f` for trial indices `0..trials` on `workers` threads, each
/// with its own [`RngStream`], and returns results in index order.
pub fn monte_carlo<T, F>(trials: u64, root_seed: u64, workers: usize, f: F) -> Result<Vec<T>, BenchError>
where
    T: Send,
    F: Fn(RngStream) -> Result<T, BenchError> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build()?;
    pool.install(|| (0..trials).into_par_iter().map(|t| f(RngStream::new(root_seed, t))).collect())
}

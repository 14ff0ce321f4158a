//! The three-model comparison table: measured algorithm costs and minimum
//! certificate costs for max, selection and sorting at p = 1/2.
//!
//! Growth classes are judged by doubling ratios. They are a heuristic: the
//! table's entries are asymptotic and the sizes here are small.

use serde::{Deserialize, Serialize};

use crate::config::{Algorithm, ExperimentConfig, KSpec, ModelKind, BENCH_ALPHA_COEFF};
use crate::experiment::{run_experiment, TrialRecord};
use crate::stats::Stats;
use crate::summary::{summarize, SummaryRow};
use crate::BenchError;

/// Slack factor on doubling ratios before a growth verdict fails.
pub const GROWTH_TOLERANCE: f64 = 1.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Growth {
    #[serde(rename = "1")]
    Constant,
    #[serde(rename = "log n")]
    Log,
    #[serde(rename = "log^6 n")]
    Log6,
    #[serde(rename = "n")]
    Linear,
    #[serde(rename = "n log n")]
    NLogN,
}

impl Growth {
    /// `f(2n) / f(n)` for the class's representative `f`.
    pub fn doubling_ratio(self, n: usize) -> f64 {
        let l = ((2 * n) as f64).ln() / (n as f64).ln();
        match self {
            Growth::Constant => 1.0,
            Growth::Log => l,
            Growth::Log6 => l.powi(6),
            Growth::Linear => 2.0,
            Growth::NLogN => 2.0 * l,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Growth::Constant => "1",
            Growth::Log => "log n",
            Growth::Log6 => "log^6 n",
            Growth::Linear => "n",
            Growth::NLogN => "n log n",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Problem {
    Max,
    Selection,
    Sorting,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Column {
    /// Measured algorithm cost against an upper-bound class.
    Upper,
    /// Measured minimum certificate cost against a lower-bound class.
    MinCert,
}

/// One table cell measured over all sizes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Cell {
    pub problem: Problem,
    pub column: Column,
    pub algorithm: Algorithm,
    pub class: Growth,
    pub means: Vec<f64>,
    pub stderrs: Vec<f64>,
    pub ratios: Vec<f64>,
    pub class_ratios: Vec<f64>,
    /// Heuristic growth verdict; informational only.
    pub growth_ok: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Row {
    pub model: ModelKind,
    pub cells: Vec<Cell>,
    /// Problems the model does not support, shown as "-".
    pub missing: Vec<Problem>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Table1Report {
    pub root_seed: u64,
    pub p: f64,
    pub ns: Vec<usize>,
    pub trials: usize,
    pub alpha_coeff: f64,
    pub rows: Vec<Row>,
    /// Closed-form checks for every run.
    pub checks: Vec<SummaryRow>,
    /// Every trial correct and certified.
    pub all_valid: bool,
}

impl Table1Report {
    /// True when every trial is valid and every closed-form check passes.
    /// Growth verdicts do not count.
    pub fn ok(&self) -> bool {
        self.all_valid && self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Clone)]
pub struct Table1Options {
    pub root_seed: u64,
    pub p: f64,
    pub ns: Vec<usize>,
    pub trials: usize,
    pub alpha_coeff: f64,
    pub workers: usize,
}

impl Default for Table1Options {
    fn default() -> Self {
        Table1Options {
            root_seed: 42,
            p: 0.5,
            ns: vec![64, 128, 256],
            trials: 200,
            alpha_coeff: BENCH_ALPHA_COEFF,
            workers: 1,
        }
    }
}

/// `(problem, algorithm, upper class, min-cert class)` per model.
fn layout(model: ModelKind) -> Vec<(Problem, Algorithm, Growth, Option<Growth>)> {
    use Growth::*;
    match model {
        ModelKind::Uniform => vec![
            (Problem::Max, Algorithm::FindMax, Log, Some(Log)),
            (Problem::Selection, Algorithm::Selection, Log6, Some(Log)),
            (Problem::Sorting, Algorithm::Sort, Linear, Some(Linear)),
        ],
        ModelKind::Boolean => vec![
            (Problem::Max, Algorithm::FindMax, Constant, Some(Constant)),
            (Problem::Selection, Algorithm::Selection, Log, Some(Constant)),
            (Problem::Sorting, Algorithm::RepeatedMaxSort, Linear, Some(Linear)),
        ],
        // All maximal elements; the certificate side has only a lower
        // bound, checked against the algorithm's cost.
        ModelKind::UnitInf => vec![(Problem::Max, Algorithm::FindAllMaximal, NLogN, None)],
    }
}

fn cell(
    problem: Problem,
    column: Column,
    algorithm: Algorithm,
    class: Growth,
    ns: &[usize],
    per_n: &[Stats],
) -> Cell {
    let means: Vec<f64> = per_n.iter().map(|s| s.mean).collect();
    let ratios: Vec<f64> = means.windows(2).map(|w| w[1] / w[0]).collect();
    let class_ratios: Vec<f64> = ns
        .windows(2)
        .map(|w| class.doubling_ratio(w[0]).powf((w[1] as f64 / w[0] as f64).log2()))
        .collect();
    let growth_ok = ratios.iter().zip(&class_ratios).all(|(&r, &c)| match column {
        Column::Upper => r <= c * GROWTH_TOLERANCE,
        Column::MinCert => r >= c / GROWTH_TOLERANCE,
    });
    Cell {
        problem,
        column,
        algorithm,
        class,
        means,
        stderrs: per_n.iter().map(|s| s.stderr).collect(),
        ratios,
        class_ratios,
        growth_ok,
    }
}

pub fn table1_report(opts: &Table1Options) -> Result<Table1Report, BenchError> {
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    let mut all_valid = true;
    for model in ModelKind::ALL {
        let mut cells = Vec::new();
        let plan = layout(model);
        for &(problem, algorithm, upper, lower) in &plan {
            let config = ExperimentConfig {
                ps: vec![opts.p],
                k: Some(KSpec::Fraction { num: 1, den: 2 }),
                trials: opts.trials,
                root_seed: opts.root_seed,
                workers: opts.workers,
                alpha_coeff: opts.alpha_coeff,
                record_timing: false,
                ..ExperimentConfig::new(model, algorithm, opts.ns.clone())
            };
            let records = run_experiment(&config)?;
            all_valid &= records.iter().all(TrialRecord::ok);
            checks.extend(summarize(&records, None)?);

            let by_n = |f: &dyn Fn(&TrialRecord) -> Option<f64>| -> Vec<Stats> {
                opts.ns
                    .iter()
                    .map(|&n| Stats::of(records.iter().filter(|r| r.n == n).filter_map(f)).expect("trials >= 1"))
                    .collect()
            };
            cells.push(cell(problem, Column::Upper, algorithm, upper, &opts.ns, &by_n(&|r| Some(r.cost))));
            if let Some(lower) = lower {
                cells.push(cell(problem, Column::MinCert, algorithm, lower, &opts.ns, &by_n(&|r| r.min_cert_cost)));
            }
        }
        let missing = [Problem::Max, Problem::Selection, Problem::Sorting]
            .into_iter()
            .filter(|p| !plan.iter().any(|x| x.0 == *p))
            .collect();
        rows.push(Row { model, cells, missing });
    }
    Ok(Table1Report {
        root_seed: opts.root_seed,
        p: opts.p,
        ns: opts.ns.clone(),
        trials: opts.trials,
        alpha_coeff: opts.alpha_coeff,
        rows,
        checks,
        all_valid,
    })
}

/// Text rendering: one line per cell, then the closed-form checks.
pub fn render(report: &Table1Report) -> String {
    let mut out = format!(
        "p = {}, {} trials per size, seed {}, alpha coefficient {}\n\n",
        report.p, report.trials, report.root_seed, report.alpha_coeff
    );
    let sizes: Vec<String> = report.ns.iter().map(|n| format!("n={n:<5}")).collect();
    out += &format!(
        "{:<9} {:<10} {:<9} {:<18} {:<8} {}  doubling ratios (class)  growth\n",
        "model",
        "problem",
        "column",
        "algorithm",
        "class",
        sizes.iter().map(|s| format!("{s:>12}")).collect::<String>()
    );
    for row in &report.rows {
        for c in &row.cells {
            let problem = serde_json::to_value(c.problem).unwrap();
            let column = serde_json::to_value(c.column).unwrap();
            let means: String = c.means.iter().map(|m| format!("{m:>12.3}")).collect();
            let ratios: Vec<String> = c
                .ratios
                .iter()
                .zip(&c.class_ratios)
                .map(|(r, e)| format!("{r:.2} ({e:.2})"))
                .collect();
            let bound = match c.column {
                Column::Upper => format!("O({})", c.class.label()),
                Column::MinCert => format!("Ω({})", c.class.label()),
            };
            out += &format!(
                "{:<9} {:<10} {:<9} {:<18} {:<8} {}  {:<23}  {}\n",
                row.model.name(),
                problem.as_str().unwrap_or(""),
                column.as_str().unwrap_or(""),
                c.algorithm.name(),
                bound,
                means,
                ratios.join(", "),
                if c.growth_ok { "ok" } else { "off" }
            );
        }
        for p in &row.missing {
            let problem = serde_json::to_value(p).unwrap();
            out += &format!("{:<9} {:<10} -\n", row.model.name(), problem.as_str().unwrap_or(""));
        }
    }
    out += "\nGrowth verdicts are heuristic doubling-ratio checks and do not affect the exit status.\n\n";
    out += &crate::output::render_summary(&report.checks);
    out
}

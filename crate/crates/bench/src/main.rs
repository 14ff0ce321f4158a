use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use priced_bench::config::{Algorithm, ExperimentConfig, KSpec, ModelKind, BENCH_ALPHA_COEFF};
use priced_bench::output::{dump_trial, render_summary, write_report, Format};
use priced_bench::summary::{summarize, BoundBinding};
use priced_bench::table1::{render, table1_report, Table1Options};
use priced_bench::run_detailed;
use priced_core::boolean::WMode;
use priced_core::certificate::{verify_maximal_element, verify_maximal_set, verify_rank, verify_sort};
use priced_core::json::instance_from_json;
use priced_core::uniform::DEFAULT_ALPHA_COEFF;
use priced_core::{Certificate, CertificateKind};

#[derive(Parser)]
#[command(version, about = "Monte Carlo benchmarks for sorting and selection with priced comparisons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a grid of seeded trials and check them against closed forms.
    Bench(BenchArgs),
    /// Reproduce the three-model comparison table at p = 1/2.
    Table1(Table1Args),
    /// Check a certificate file against an instance file.
    Verify(VerifyArgs),
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    model: ModelKind,
    #[arg(long)]
    alg: Algorithm,
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0.5")]
    p: Vec<f64>,
    /// Target rank, absolute or a fraction of n such as n/2.
    #[arg(long)]
    k: Option<KSpec>,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
    #[arg(long, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_ALPHA_COEFF)]
    alpha_coeff: f64,
    #[arg(long, default_value = "quadratic", value_parser = parse_w_mode)]
    w_mode: WMode,
    /// Write each trial's instance and certificate next to the output.
    #[arg(long)]
    dump_instances: bool,
    /// Override the default bounds, as NAME or NAME:METRIC.
    #[arg(long = "bound")]
    bounds: Vec<BoundBinding>,
    /// Write elapsed_us as 0 so reruns are byte-identical.
    #[arg(long)]
    no_timing: bool,
}

fn parse_w_mode(s: &str) -> Result<WMode, String> {
    match s {
        "quadratic" => Ok(WMode::Quadratic),
        "lemma" => Ok(WMode::Lemma),
        _ => Err(format!("unknown w mode {s:?} (quadratic, lemma)")),
    }
}

#[derive(Args)]
struct Table1Args {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// JSON report path.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, value_delimiter = ',', default_value = "64,128,256")]
    n: Vec<usize>,
    #[arg(long, default_value_t = BENCH_ALPHA_COEFF)]
    alpha_coeff: f64,
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    certificate: PathBuf,
    #[arg(long)]
    instance: PathBuf,
}

fn bench(args: BenchArgs) -> anyhow::Result<bool> {
    let mut config = ExperimentConfig::new(args.model, args.alg, args.n);
    config.ps = args.p;
    config.k = args.k;
    config.trials = args.trials;
    config.root_seed = args.seed;
    config.workers = args.workers;
    config.alpha_coeff = args.alpha_coeff;
    config.w_mode = args.w_mode;
    config.record_timing = !args.no_timing;
    config.combos()?;

    if args.dump_instances {
        let Some(out) = &args.out else { bail!("--dump-instances needs --out") };
        let dir = PathBuf::from(format!("{}.dump", out.display()));
        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        config.dump_dir = Some(dir);
    }
    let dump = config.dump_dir.clone();
    let outcomes = run_detailed(&config, |inst, outcome, cert| match &dump {
        Some(dir) => dump_trial(dir, inst, outcome, cert),
        None => Ok(()),
    })?;
    let records: Vec<_> = outcomes.into_iter().map(|o| o.record).collect();
    let bindings = (!args.bounds.is_empty()).then_some(&args.bounds[..]);
    let summary = summarize(&records, bindings)?;
    print!("{}", render_summary(&summary));
    if let Some(out) = &args.out {
        write_report(out, args.format, &records, &summary)?;
    }
    Ok(summary.iter().all(|r| r.ok()))
}

fn table1(args: Table1Args) -> anyhow::Result<bool> {
    let opts = Table1Options {
        root_seed: args.seed,
        trials: args.trials,
        ns: args.n,
        alpha_coeff: args.alpha_coeff,
        workers: args.workers,
        ..Table1Options::default()
    };
    let report = table1_report(&opts)?;
    print!("{}", render(&report));
    if let Some(out) = &args.out {
        fs::write(out, serde_json::to_string_pretty(&report)?)?;
    }
    Ok(report.ok())
}

fn verify(args: VerifyArgs) -> anyhow::Result<bool> {
    let read = |p: &PathBuf| fs::read_to_string(p).with_context(|| format!("reading {}", p.display()));
    let instance = instance_from_json(&read(&args.instance)?)?;
    let cert: Certificate = serde_json::from_str(&read(&args.certificate)?).context("parsing certificate")?;
    let n = instance.n();
    if !cert.consistent_with(&instance) {
        println!("invalid: an edge contradicts the instance's order");
        return Ok(false);
    }
    let valid = match &cert.kind {
        CertificateKind::Sort => verify_sort(&cert, &instance.sorted_elements())?,
        CertificateKind::Rank { k, element } => {
            instance.rank_of(*element)? == *k && verify_rank(&cert, *element, *k, n)?
        }
        CertificateKind::MaxTree { element } => {
            instance.rank_of(*element)? == n && verify_rank(&cert, *element, n, n)?
        }
        CertificateKind::Maximal { element } => verify_maximal_element(&cert, *element, &instance)?,
        CertificateKind::MaximalSet { set } => verify_maximal_set(&cert, set, &instance)?,
    };
    println!(
        "{}: {} edges, cost {}",
        if valid { "valid" } else { "invalid" },
        cert.edges.len(),
        cert.cost()
    );
    Ok(valid)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bench(a) => bench(a),
        Command::Table1(a) => table1(a),
        Command::Verify(a) => verify(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

use priced_bench::config::{Algorithm, ExperimentConfig, KSpec, ModelKind};
use priced_bench::output::{read_csv, write_csv, CSV_HEADER};
use priced_bench::{run_experiment, summarize, BenchError};

fn config(model: ModelKind, alg: Algorithm, ns: Vec<usize>, trials: usize) -> ExperimentConfig {
    ExperimentConfig {
        trials,
        record_timing: false,
        k: alg.uses_k().then_some(KSpec::Fraction { num: 1, den: 2 }),
        ..ExperimentConfig::new(model, alg, ns)
    }
}

#[test]
fn csv_round_trip() {
    let recs = run_experiment(&config(ModelKind::Boolean, Algorithm::Selection, vec![16, 32], 5)).unwrap();
    let mut buf = Vec::new();
    write_csv(&recs, &mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert_eq!(text.lines().next(), Some(CSV_HEADER));
    assert_eq!(text.lines().count(), recs.len() + 1);
    assert_eq!(read_csv(&buf[..]).unwrap(), recs);
}

#[test]
fn bad_configs_are_rejected() {
    let cases = [
        config(ModelKind::UnitInf, Algorithm::Selection, vec![10], 1),
        config(ModelKind::Boolean, Algorithm::FindMax, vec![10], 0),
        config(ModelKind::Boolean, Algorithm::BalancedSort, vec![13], 1),
        config(ModelKind::Uniform, Algorithm::FindMax, vec![], 1),
        ExperimentConfig { k: Some(KSpec::Absolute(11)), ..config(ModelKind::Uniform, Algorithm::Selection, vec![10], 1) },
        ExperimentConfig { ps: vec![1.5], ..config(ModelKind::Boolean, Algorithm::FindMax, vec![10], 1) },
    ];
    for c in cases {
        assert!(matches!(run_experiment(&c), Err(BenchError::Config(_)) | Err(BenchError::Core(_))), "{c:?}");
    }
}

#[test]
fn single_element_costs_nothing() {
    for (model, alg) in [
        (ModelKind::Uniform, Algorithm::FindMax),
        (ModelKind::Uniform, Algorithm::Sort),
        (ModelKind::Boolean, Algorithm::Selection),
        (ModelKind::UnitInf, Algorithm::FindAllMaximal),
    ] {
        let recs = run_experiment(&config(model, alg, vec![1], 1)).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].cost, 0.0);
        assert!(recs[0].ok());
        let rows = summarize(&recs, None).unwrap();
        assert!(rows.iter().all(|r| r.trials == 1 && r.stderr == 0.0));
    }
}

#[test]
fn every_supported_pair_runs_valid() {
    for model in ModelKind::ALL {
        for alg in [
            Algorithm::FindMax,
            Algorithm::Selection,
            Algorithm::Sort,
            Algorithm::RankCert,
            Algorithm::FindMaximal,
            Algorithm::FindAllMaximal,
            Algorithm::BalancedSort,
            Algorithm::RepeatedMaxSort,
        ] {
            let c = config(model, alg, vec![2, 9], 4);
            if !alg.supports(model) {
                assert!(c.combos().is_err());
                continue;
            }
            let recs = run_experiment(&c).unwrap();
            assert_eq!(recs.len(), 8);
            assert!(recs.iter().all(|r| r.ok()), "{model} {alg}");
        }
    }
}

#[test]
fn results_do_not_depend_on_workers() {
    let mut c = config(ModelKind::Uniform, Algorithm::Sort, vec![20, 40], 12);
    c.alpha_coeff = 0.1;
    let one = run_experiment(&c).unwrap();
    c.workers = 4;
    assert_eq!(run_experiment(&c).unwrap(), one);
    c.root_seed += 1;
    assert_ne!(run_experiment(&c).unwrap(), one);
}

use eagle_core::harness::*;
use eagle_core::{problem, Error, NoiseModel};
use proptest::prelude::*;

fn spec(algorithm: Algorithm, name: &str, dim: usize, runs: usize) -> ExperimentSpec {
    let mut settings = AlgorithmSettings::default();
    settings.set_max_evals(3000);
    ExperimentSpec {
        algorithm,
        problem: problem(name, Some(dim)).unwrap(),
        noise: NoiseModel::additive(0.025).unwrap(),
        runs,
        base_seed: 100,
        criteria: SuccessCriteria::default(),
        stats_over: StatsOver::All,
        settings,
    }
}

#[test]
fn identical_arguments_identical_reports() {
    for alg in Algorithm::ALL {
        let s = spec(alg, "ackley", 2, 12);
        let a = run_experiment(&s).unwrap();
        let b = run_experiment(&s).unwrap();
        assert_eq!(a.report, b.report);
        assert_eq!(
            emit_report(&[a.report], Format::Json),
            emit_report(&[b.report], Format::Json)
        );
    }
}

#[test]
fn aggregation_matches_brute_force() {
    let exp = run_experiment(&spec(Algorithm::Es, "shubert", 2, 25)).unwrap();
    let evals: Vec<f64> = exp.trials.iter().map(|t| t.evaluations as f64).collect();
    let n = evals.len() as f64;
    let mut sum = 0.0;
    for e in &evals {
        sum += e;
    }
    let mean = sum / n;
    let mut ss = 0.0;
    for e in &evals {
        ss += (e - mean) * (e - mean);
    }
    let std = (ss / n).sqrt();
    let successes = exp.trials.iter().filter(|t| t.success).count() as f64;
    assert!((exp.report.mean_evals_k.unwrap() - mean / 1e3).abs() < 1e-12);
    assert!((exp.report.std_evals_k.unwrap() - std / 1e3).abs() < 1e-12);
    assert_eq!(exp.report.success_rate_pct, 100.0 * successes / n);
    let seeds: Vec<u64> = exp.trials.iter().map(|t| t.seed).collect();
    assert_eq!(seeds, (100..125).collect::<Vec<_>>());
}

#[test]
fn trial_counts_sum_to_shared_counter() {
    for alg in Algorithm::ALL {
        let exp = run_experiment(&spec(alg, "griewank", 3, 16)).unwrap();
        let sum: u64 = exp.trials.iter().map(|t| t.evaluations).sum();
        assert_eq!(sum, exp.total_evaluations, "{alg}");
        assert!(exp.trials.iter().all(|t| t.evaluations > 0));
    }
}

#[test]
fn success_is_the_check_on_best_x() {
    let exp = run_experiment(&spec(Algorithm::Pso, "rastrigin", 2, 10)).unwrap();
    let p = problem("rastrigin", Some(2)).unwrap();
    for t in &exp.trials {
        assert_eq!(
            t.success,
            success_check(&t.best_x, &p, &SuccessCriteria::default()).unwrap()
        );
        assert_eq!(t.best_value, p.evaluate(&t.best_x).unwrap());
    }
}

#[test]
fn nelder_mead_solves_noiseless_sphere() {
    let p = problem("dejong", Some(2)).unwrap();
    let t = run_trial(
        Algorithm::Nm,
        &p,
        NoiseModel::NONE,
        7,
        &SuccessCriteria::default(),
        &AlgorithmSettings::default(),
    )
    .unwrap();
    assert!(t.success);
    let again = run_trial(
        Algorithm::Nm,
        &p,
        NoiseModel::NONE,
        7,
        &SuccessCriteria::default(),
        &AlgorithmSettings::default(),
    )
    .unwrap();
    assert_eq!(
        TrialRecord {
            wall_time_secs: 0.0,
            ..t
        },
        TrialRecord {
            wall_time_secs: 0.0,
            ..again
        }
    );
}

#[test]
fn misspelled_problem_suggests_nearest() {
    match problem("ackely", None) {
        Err(Error::UnknownProblem { suggestion, .. }) => {
            assert_eq!(suggestion.as_deref(), Some("ackley"))
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn stats_over_successes_excludes_failures() {
    let mut s = spec(Algorithm::Es, "shubert", 2, 20);
    s.stats_over = StatsOver::Successes;
    let exp = run_experiment(&s).unwrap();
    let ok: Vec<f64> = exp
        .trials
        .iter()
        .filter(|t| t.success)
        .map(|t| t.evaluations as f64 / 1e3)
        .collect();
    if ok.is_empty() {
        assert_eq!(exp.report.mean_evals_k, None);
    } else {
        let mean = ok.iter().sum::<f64>() / ok.len() as f64;
        assert!((exp.report.mean_evals_k.unwrap() - mean).abs() < 1e-12);
    }
}

#[test]
fn trace_csv_columns() {
    let exp = run_experiment(&spec(Algorithm::Es, "ackley", 2, 1)).unwrap();
    let csv = trace_csv(&exp.trials[0].trace);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("stage,evals,best_mean,best_std"));
    assert_eq!(lines.count(), exp.trials[0].trace.len());
}

fn report_strategy() -> impl Strategy<Value = ExperimentReport> {
    (
        prop::sample::select(Algorithm::ALL.to_vec()),
        prop::sample::select(vec!["ackley", "easom", "dejong"]),
        1usize..300,
        0.0f64..1.0,
        1usize..1000,
        prop::option::of(0.0f64..1e4),
        0usize..=100,
        any::<bool>(),
    )
        .prop_map(
            |(algorithm, f, dim, sigma, runs, mean, pct, all)| ExperimentReport {
                algorithm,
                function: f.to_string(),
                dim,
                sigma,
                runs,
                mean_evals_k: mean,
                std_evals_k: mean.map(|m| m / 7.0),
                success_rate_pct: pct as f64,
                stats_over: if all {
                    StatsOver::All
                } else {
                    StatsOver::Successes
                },
            },
        )
}

proptest! {
    #[test]
    fn json_round_trips(reports in prop::collection::vec(report_strategy(), 0..6)) {
        let doc = emit_report(&reports, Format::Json);
        prop_assert_eq!(parse_json_reports(&doc).unwrap(), reports);
    }

    #[test]
    fn csv_has_one_row_per_report(reports in prop::collection::vec(report_strategy(), 0..6)) {
        let doc = emit_report(&reports, Format::Csv);
        let lines: Vec<&str> = doc.lines().collect();
        prop_assert_eq!(lines[0], CSV_HEADER);
        prop_assert_eq!(lines.len(), reports.len() + 1);
        for line in &lines[1..] {
            prop_assert_eq!(line.split(',').count(), 8);
        }
    }
}

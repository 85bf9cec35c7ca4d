use eagle_core::functions::{registry, registry_json};
use eagle_core::{BenchmarkProblem, RngStream, TestFunction};

fn dims(f: TestFunction) -> Vec<usize> {
    match f {
        TestFunction::Shubert => vec![2],
        _ => vec![2, 5, f.default_dim()],
    }
}

#[test]
fn optimum_value_at_every_minimizer() {
    for f in TestFunction::ALL {
        for d in dims(f) {
            let p = BenchmarkProblem::new(f, d).unwrap();
            for m in p.minimizers() {
                let v = p.evaluate(m).unwrap();
                assert!(
                    (v - p.f_star()).abs() <= 1e-9,
                    "{} d={d}: {v} vs {}",
                    f.name(),
                    p.f_star()
                );
                assert!(p.bounds().contains(m));
            }
        }
    }
}

#[test]
fn random_probes_never_beat_the_optimum() {
    for (i, f) in TestFunction::ALL.into_iter().enumerate() {
        for d in dims(f) {
            let p = BenchmarkProblem::new(f, d).unwrap();
            let mut rng = RngStream::new(i as u64, d as u64);
            for _ in 0..10_000 {
                let x: Vec<f64> = (0..d)
                    .map(|k| rng.uniform_range(p.bounds().lower()[k], p.bounds().upper()[k]))
                    .collect();
                let v = p.evaluate(&x).unwrap();
                assert!(v >= p.f_star() - 1e-9, "{} d={d}: {v} at {x:?}", f.name());
            }
        }
    }
}

#[test]
fn ackley_origin_is_exactly_zero() {
    for d in [1, 2, 8, 128] {
        let p = BenchmarkProblem::new(TestFunction::Ackley, d).unwrap();
        assert_eq!(p.evaluate(&vec![0.0; d]).unwrap(), 0.0);
    }
}

#[test]
fn shubert_has_eighteen_distinct_minima() {
    let p = BenchmarkProblem::new(TestFunction::Shubert, 2).unwrap();
    let m = p.minimizers();
    assert_eq!(m.len(), 18);
    for i in 0..m.len() {
        for j in 0..i {
            let d = ((m[i][0] - m[j][0]).powi(2) + (m[i][1] - m[j][1]).powi(2)).sqrt();
            assert!(d > 0.1);
        }
    }
}

#[test]
fn committed_registry_file_is_current() {
    let committed = include_str!("../registry.json");
    assert_eq!(committed.trim_end(), registry_json());
    assert_eq!(registry().len(), 9);
}

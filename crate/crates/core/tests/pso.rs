use eagle_core::{problem, pso_optimize, NoiseModel, NoisyObjective, PsoConfig, RngStream};

#[test]
fn sphere_reaches_1e4_in_95_of_100_runs() {
    let cfg = PsoConfig {
        max_evals: 6000,
        ..PsoConfig::default()
    };
    let mut hits = 0;
    for seed in 0..100 {
        let p = problem("dejong", Some(2)).unwrap();
        let mut obj = NoisyObjective::new(p.clone(), NoiseModel::NONE).unwrap();
        let res = pso_optimize(&mut obj, p.bounds(), &cfg, &mut RngStream::new(seed, 0)).unwrap();
        assert!(res.evaluations <= 6000);
        assert_eq!(res.evaluations, obj.eval_count());
        if p.evaluate(&res.best_x).unwrap() <= 1e-4 {
            hits += 1;
        }
    }
    assert!(hits >= 95, "{hits}/100");
}

#[test]
fn same_seed_same_result() {
    let run = || {
        let p = problem("griewank", Some(5)).unwrap();
        let mut obj = NoisyObjective::new(p.clone(), NoiseModel::additive(0.025).unwrap()).unwrap();
        pso_optimize(
            &mut obj,
            p.bounds(),
            &PsoConfig::default(),
            &mut RngStream::new(8, 1),
        )
        .unwrap()
    };
    assert_eq!(run(), run());
}

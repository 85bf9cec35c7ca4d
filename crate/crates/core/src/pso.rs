//! Global-best particle swarm optimization, the comparison baseline.

use serde::{Deserialize, Serialize};

use crate::domain::{Bounds, DesignVector};
use crate::error::{check_dim, invalid, Result};
use crate::levy::sample_uniform_in_bounds;
use crate::objective::{Estimate, NoisyObjective};
use crate::result::{OptimizationResult, Stall, TracePoint};
use crate::rng::RngStream;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PsoConfig {
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    pub swarm_size: usize,
    /// Velocity cap per dimension, as a fraction of that dimension's width.
    pub v_max_fraction: f64,
    pub max_evals: u64,
    pub tolerance: f64,
    /// Iterations in a row with gbest change below `tolerance` before stopping.
    pub stall_iterations: usize,
    /// Noisy samples averaged per particle evaluation.
    pub samples: usize,
}

impl Default for PsoConfig {
    fn default() -> Self {
        Self {
            inertia: 0.7,
            cognitive: 1.5,
            social: 1.5,
            swarm_size: 20,
            v_max_fraction: 0.2,
            max_evals: 100_000,
            tolerance: 1e-5,
            stall_iterations: 30,
            samples: 3,
        }
    }
}

impl PsoConfig {
    pub fn validate(&self) -> Result<()> {
        if self.swarm_size < 2 {
            return Err(invalid("swarm size must be at least 2"));
        }
        if !(0.0..=1.0).contains(&self.inertia) {
            return Err(invalid(format!(
                "inertia must be in [0, 1], got {}",
                self.inertia
            )));
        }
        if !(self.cognitive >= 0.0 && self.social >= 0.0) {
            return Err(invalid("acceleration weights must be >= 0"));
        }
        if !(self.v_max_fraction > 0.0) {
            return Err(invalid("velocity cap must be positive"));
        }
        if self.samples == 0 {
            return Err(invalid("samples must be at least 1"));
        }
        Ok(())
    }
}

struct Particle {
    x: DesignVector,
    v: DesignVector,
    best_x: DesignVector,
    best: Estimate,
}

pub fn pso_optimize(
    obj: &mut NoisyObjective,
    bounds: &Bounds,
    cfg: &PsoConfig,
    rng: &mut RngStream,
) -> Result<OptimizationResult> {
    cfg.validate()?;
    check_dim(obj.dim(), bounds.dim())?;
    let dim = bounds.dim();
    let samples = obj.effective_samples(cfg.samples);
    let per_iteration = (cfg.swarm_size * samples) as u64;
    if cfg.max_evals < per_iteration {
        return Err(invalid(format!(
            "max_evals {} cannot cover a swarm of {}",
            cfg.max_evals, cfg.swarm_size
        )));
    }
    let v_max: Vec<f64> = bounds
        .widths()
        .iter()
        .map(|w| cfg.v_max_fraction * w)
        .collect();
    let start = obj.eval_count();

    let mut swarm = Vec::with_capacity(cfg.swarm_size);
    for _ in 0..cfg.swarm_size {
        let x = sample_uniform_in_bounds(rng, bounds)?;
        let v = v_max.iter().map(|m| rng.uniform_range(-m, *m)).collect();
        let est = obj.estimate_mean(&x, rng, samples)?;
        swarm.push(Particle {
            best_x: x.clone(),
            x,
            v,
            best: est,
        });
    }
    let lead = swarm
        .iter()
        .min_by(|a, b| a.best.mean.total_cmp(&b.best.mean))
        .expect("swarm is non-empty");
    let mut g_x = lead.best_x.clone();
    let mut g = lead.best;

    let mut trace = vec![TracePoint {
        iteration: 0,
        best_mean: g.mean,
        best_std: g.std,
        evaluations: obj.eval_count() - start,
        accepted: None,
    }];
    let mut stall = Stall::new(cfg.tolerance, cfg.stall_iterations);
    stall.observe(g.mean);
    let mut iterations = 0;

    while obj.eval_count() - start + per_iteration <= cfg.max_evals {
        for p in swarm.iter_mut() {
            for k in 0..dim {
                let r1 = rng.uniform();
                let r2 = rng.uniform();
                let v = cfg.inertia * p.v[k]
                    + cfg.cognitive * r1 * (p.best_x[k] - p.x[k])
                    + cfg.social * r2 * (g_x[k] - p.x[k]);
                p.v[k] = v.clamp(-v_max[k], v_max[k]);
                p.x[k] += p.v[k];
            }
            bounds.reflect(&mut p.x);
            let est = obj.estimate_mean(&p.x, rng, samples)?;
            if est.mean < p.best.mean {
                p.best = est;
                p.best_x.clone_from(&p.x);
                if est.mean < g.mean {
                    g = est;
                    g_x.clone_from(&p.x);
                }
            }
        }
        iterations += 1;
        trace.push(TracePoint {
            iteration: iterations,
            best_mean: g.mean,
            best_std: g.std,
            evaluations: obj.eval_count() - start,
            accepted: None,
        });
        if stall.observe(g.mean) {
            break;
        }
    }

    Ok(OptimizationResult {
        best_x: g_x,
        best_mean: g.mean,
        best_std: g.std,
        evaluations: obj.eval_count() - start,
        iterations,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{BenchmarkProblem, TestFunction};
    use crate::objective::NoiseModel;

    #[test]
    fn frozen_swarm_keeps_best_initial_particle() {
        let p = BenchmarkProblem::new(TestFunction::Rastrigin, 3).unwrap();
        let bounds = p.bounds().clone();
        let mut obj = NoisyObjective::new(p, NoiseModel::NONE).unwrap();
        let cfg = PsoConfig {
            inertia: 0.0,
            cognitive: 0.0,
            social: 0.0,
            max_evals: 2000,
            ..PsoConfig::default()
        };
        let res = pso_optimize(&mut obj, &bounds, &cfg, &mut RngStream::new(5, 0)).unwrap();

        // replay the initialization draws to find the best initial particle
        let mut rng = RngStream::new(5, 0);
        let v_max = 0.2 * 10.24;
        let mut best = (f64::INFINITY, vec![]);
        for _ in 0..cfg.swarm_size {
            let x = sample_uniform_in_bounds(&mut rng, &bounds).unwrap();
            for _ in 0..3 {
                rng.uniform_range(-v_max, v_max);
            }
            let f = obj.problem().evaluate(&x).unwrap();
            if f < best.0 {
                best = (f, x);
            }
        }
        assert_eq!(res.best_x, best.1);
        assert_eq!(res.best_mean, best.0);
        assert!(res.iterations >= 1);
    }

    #[test]
    fn gbest_never_increases() {
        let p = BenchmarkProblem::new(TestFunction::Ackley, 4).unwrap();
        let bounds = p.bounds().clone();
        let mut obj = NoisyObjective::new(p, NoiseModel::additive(0.025).unwrap()).unwrap();
        let cfg = PsoConfig {
            max_evals: 5000,
            ..PsoConfig::default()
        };
        let res = pso_optimize(&mut obj, &bounds, &cfg, &mut RngStream::new(1, 0)).unwrap();
        for w in res.trace.windows(2) {
            assert!(w[1].best_mean <= w[0].best_mean);
        }
        assert_eq!(res.evaluations, obj.eval_count());
        assert!(res.evaluations <= 5000);
    }

    #[test]
    fn rejects_bad_config() {
        for cfg in [
            PsoConfig {
                swarm_size: 1,
                ..Default::default()
            },
            PsoConfig {
                inertia: 1.2,
                ..Default::default()
            },
            PsoConfig {
                social: -0.1,
                ..Default::default()
            },
        ] {
            assert!(cfg.validate().is_err());
        }
    }
}

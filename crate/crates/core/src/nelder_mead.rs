//! Downhill simplex (Nelder-Mead) on the estimated-mean objective.

use serde::{Deserialize, Serialize};

use crate::domain::{DesignVector, Region};
use crate::error::{check_dim, invalid, Result};
use crate::objective::{Estimate, NoisyObjective};
use crate::result::{OptimizationResult, TracePoint};
use crate::rng::RngStream;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NmConfig {
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    /// Stop once `max - min` over the simplex values falls below this.
    pub tolerance: f64,
    pub max_evals: u64,
    /// Noisy samples averaged per vertex value.
    pub samples: usize,
}

impl Default for NmConfig {
    fn default() -> Self {
        Self {
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            tolerance: 1e-8,
            max_evals: 10_000,
            samples: 3,
        }
    }
}

impl NmConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.reflection > 0.0) {
            return Err(invalid("reflection coefficient must be positive"));
        }
        if !(self.expansion > 1.0) {
            return Err(invalid("expansion coefficient must exceed 1"));
        }
        if !(self.contraction > 0.0 && self.contraction < 1.0) {
            return Err(invalid("contraction coefficient must lie in (0, 1)"));
        }
        if !(self.shrink > 0.0 && self.shrink < 1.0) {
            return Err(invalid("shrink coefficient must lie in (0, 1)"));
        }
        if !(self.tolerance >= 0.0) {
            return Err(invalid("tolerance must be >= 0"));
        }
        if self.samples == 0 {
            return Err(invalid("samples must be at least 1"));
        }
        Ok(())
    }
}

/// Unconstrained Nelder-Mead from `start` with an axis simplex of edge `radius / 2`.
pub fn nelder_mead(
    obj: &mut NoisyObjective,
    start: &[f64],
    radius: f64,
    cfg: &NmConfig,
    rng: &mut RngStream,
) -> Result<OptimizationResult> {
    run(obj, start, radius, None, cfg, rng)
}

/// Nelder-Mead with every trial point reflected into `region`.
pub fn nelder_mead_in(
    obj: &mut NoisyObjective,
    region: &Region,
    start: &[f64],
    cfg: &NmConfig,
    rng: &mut RngStream,
) -> Result<OptimizationResult> {
    let radius = region
        .radius()
        .unwrap_or_else(|| 0.5 * region.bounds().max_width());
    run(obj, start, radius, Some(region), cfg, rng)
}

struct Vertex {
    x: DesignVector,
    est: Estimate,
}

struct Evaluator<'a> {
    obj: &'a mut NoisyObjective,
    region: Option<&'a Region>,
    samples: usize,
    start: u64,
    max_evals: u64,
}

impl Evaluator<'_> {
    fn used(&self) -> u64 {
        self.obj.eval_count() - self.start
    }

    fn can_afford(&self, points: usize) -> bool {
        self.used() + (points * self.samples) as u64 <= self.max_evals
    }

    fn eval(&mut self, mut x: DesignVector, rng: &mut RngStream) -> Result<Vertex> {
        if let Some(region) = self.region {
            region.reflect(&mut x);
        }
        let est = self.obj.estimate_mean(&x, rng, self.samples)?;
        Ok(Vertex { x, est })
    }
}

fn run(
    obj: &mut NoisyObjective,
    start: &[f64],
    radius: f64,
    region: Option<&Region>,
    cfg: &NmConfig,
    rng: &mut RngStream,
) -> Result<OptimizationResult> {
    cfg.validate()?;
    check_dim(obj.dim(), start.len())?;
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(invalid(format!(
            "simplex radius must be positive, got {radius}"
        )));
    }
    let dim = start.len();
    let samples = obj.effective_samples(cfg.samples);
    let mut ev = Evaluator {
        start: obj.eval_count(),
        obj,
        region,
        samples,
        max_evals: cfg.max_evals,
    };
    if !ev.can_afford(dim + 1) {
        return Err(invalid(format!(
            "max_evals {} cannot cover the initial simplex of {} vertices",
            cfg.max_evals,
            dim + 1
        )));
    }

    let mut simplex = Vec::with_capacity(dim + 1);
    simplex.push(ev.eval(start.to_vec(), rng)?);
    let bounds = region.map(|r| r.bounds());
    for k in 0..dim {
        let mut x = start.to_vec();
        let step = 0.5 * radius;
        x[k] += step;
        if let Some(b) = bounds {
            if x[k] > b.upper()[k] {
                x[k] = start[k] - step;
            }
        }
        simplex.push(ev.eval(x, rng)?);
    }
    order(&mut simplex);

    let mut iterations = 0;
    let mut trace = vec![snapshot(0, &simplex[0], ev.used())];
    loop {
        let spread = simplex[dim].est.mean - simplex[0].est.mean;
        if spread < cfg.tolerance || !ev.can_afford(1) {
            break;
        }
        let centroid: Vec<f64> = (0..dim)
            .map(|k| simplex[..dim].iter().map(|v| v.x[k]).sum::<f64>() / dim as f64)
            .collect();
        let worst = &simplex[dim];
        let along = |t: f64, from: &[f64]| -> DesignVector {
            centroid
                .iter()
                .zip(from)
                .map(|(c, w)| c + t * (w - c))
                .collect()
        };

        let reflected = ev.eval(along(-cfg.reflection, &worst.x), rng)?;
        let (f_best, f_second, f_worst) = (
            simplex[0].est.mean,
            simplex[dim - 1].est.mean,
            simplex[dim].est.mean,
        );
        let fr = reflected.est.mean;
        let mut replacement = None;
        if fr < f_best {
            if ev.can_afford(1) {
                let expanded = ev.eval(along(cfg.expansion, &reflected.x), rng)?;
                replacement = Some(if expanded.est.mean < fr {
                    expanded
                } else {
                    reflected
                });
            } else {
                replacement = Some(reflected);
            }
        } else if fr < f_second {
            replacement = Some(reflected);
        } else if ev.can_afford(1) {
            if fr < f_worst {
                let contracted = ev.eval(along(cfg.contraction, &reflected.x), rng)?;
                if contracted.est.mean <= fr {
                    replacement = Some(contracted);
                }
            } else {
                let contracted = ev.eval(along(cfg.contraction, &simplex[dim].x), rng)?;
                if contracted.est.mean < f_worst {
                    replacement = Some(contracted);
                }
            }
        }

        match replacement {
            Some(v) => simplex[dim] = v,
            None => {
                if !ev.can_afford(dim) {
                    break;
                }
                let anchor = simplex[0].x.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    let x = anchor
                        .iter()
                        .zip(&vertex.x)
                        .map(|(a, v)| a + cfg.shrink * (v - a))
                        .collect();
                    *vertex = ev.eval(x, rng)?;
                }
            }
        }
        order(&mut simplex);
        iterations += 1;
        trace.push(snapshot(iterations, &simplex[0], ev.used()));
    }

    let best = &simplex[0];
    Ok(OptimizationResult {
        best_x: best.x.clone(),
        best_mean: best.est.mean,
        best_std: best.est.std,
        evaluations: ev.used(),
        iterations,
        trace,
    })
}

fn order(simplex: &mut [Vertex]) {
    simplex.sort_by(|a, b| a.est.mean.total_cmp(&b.est.mean));
}

fn snapshot(iteration: usize, best: &Vertex, evaluations: u64) -> TracePoint {
    TracePoint {
        iteration,
        best_mean: best.est.mean,
        best_std: best.est.std,
        evaluations,
        accepted: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{BenchmarkProblem, TestFunction};
    use crate::objective::NoiseModel;

    fn sphere(d: usize) -> NoisyObjective {
        let p = BenchmarkProblem::new(TestFunction::DeJong, d).unwrap();
        NoisyObjective::new(p, NoiseModel::NONE).unwrap()
    }

    #[test]
    fn sphere_converges_quickly() {
        let mut obj = sphere(2);
        let cfg = NmConfig {
            max_evals: 200,
            tolerance: 1e-12,
            ..NmConfig::default()
        };
        let mut rng = RngStream::new(0, 0);
        let res = nelder_mead(&mut obj, &[1.0, 1.0], 1.0, &cfg, &mut rng).unwrap();
        assert!(res.best_mean <= 1e-8, "{}", res.best_mean);
        assert!(res.evaluations <= 200);
        assert_eq!(res.evaluations, obj.eval_count());
    }

    #[test]
    fn best_is_monotone_without_noise() {
        let p = BenchmarkProblem::new(TestFunction::Rosenbrock, 3).unwrap();
        let mut obj = NoisyObjective::new(p, NoiseModel::NONE).unwrap();
        let mut rng = RngStream::new(0, 0);
        let res = nelder_mead(
            &mut obj,
            &[-1.0, 2.0, 0.5],
            1.0,
            &NmConfig::default(),
            &mut rng,
        )
        .unwrap();
        for w in res.trace.windows(2) {
            assert!(w[1].best_mean <= w[0].best_mean);
        }
    }

    #[test]
    fn budget_of_initial_simplex() {
        let mut obj = sphere(3);
        let cfg = NmConfig {
            max_evals: 4,
            ..NmConfig::default()
        };
        let mut rng = RngStream::new(0, 0);
        let start = [1.0, 0.2, -0.3];
        let res = nelder_mead(&mut obj, &start, 1.0, &cfg, &mut rng).unwrap();
        assert_eq!(res.iterations, 0);
        assert_eq!(res.evaluations, 4);
        let mut vertices = vec![start.to_vec()];
        for k in 0..3 {
            let mut v = start.to_vec();
            v[k] += 0.5;
            vertices.push(v);
        }
        let want = vertices
            .iter()
            .map(|v| obj.problem().evaluate(v).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert_eq!(res.best_mean, want);
        let cfg = NmConfig {
            max_evals: 3,
            ..NmConfig::default()
        };
        assert!(nelder_mead(&mut obj, &start, 1.0, &cfg, &mut rng).is_err());
    }

    #[test]
    fn coefficient_validation() {
        for cfg in [
            NmConfig {
                reflection: 0.0,
                ..Default::default()
            },
            NmConfig {
                expansion: 1.0,
                ..Default::default()
            },
            NmConfig {
                contraction: 1.0,
                ..Default::default()
            },
            NmConfig {
                shrink: 0.0,
                ..Default::default()
            },
        ] {
            assert!(cfg.validate().is_err());
        }
    }
}

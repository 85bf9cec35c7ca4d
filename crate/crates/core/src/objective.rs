//! Noisy objectives and Monte Carlo mean estimation.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::functions::BenchmarkProblem;
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseKind {
    None,
    /// `f(x) + N(0, sigma^2)`.
    AdditiveGaussian,
    /// `f(x) + N(0, (sigma |f(x)|)^2)`.
    RelativeGaussian,
    /// `f(x + N(0, sigma^2 I))`: the design variables are perturbed.
    DesignGaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub kind: NoiseKind,
    pub sigma: f64,
}

impl NoiseModel {
    pub const NONE: NoiseModel = NoiseModel {
        kind: NoiseKind::None,
        sigma: 0.0,
    };

    pub fn new(kind: NoiseKind, sigma: f64) -> Result<Self> {
        let m = Self { kind, sigma };
        m.validate()?;
        Ok(m)
    }

    pub fn additive(sigma: f64) -> Result<Self> {
        if sigma == 0.0 {
            return Ok(Self::NONE);
        }
        Self::new(NoiseKind::AdditiveGaussian, sigma)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma >= 0.0) || !self.sigma.is_finite() {
            return Err(invalid(format!(
                "noise sigma must be >= 0, got {}",
                self.sigma
            )));
        }
        if self.kind == NoiseKind::None && self.sigma != 0.0 {
            return Err(invalid("noise kind `none` requires sigma = 0"));
        }
        Ok(())
    }

    pub fn is_noiseless(&self) -> bool {
        self.kind == NoiseKind::None || self.sigma == 0.0
    }
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self::NONE
    }
}

/// Sample statistics of repeated noisy evaluations at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    /// Sample standard deviation (`n - 1` denominator), 0 for a single sample.
    pub std: f64,
    pub std_error: f64,
    pub samples: usize,
}

impl Estimate {
    /// Pool two independent estimates of the same point.
    pub fn merge(&self, other: &Estimate) -> Estimate {
        let (n1, n2) = (self.samples as f64, other.samples as f64);
        let n = n1 + n2;
        let delta = other.mean - self.mean;
        let mean = if delta == 0.0 {
            self.mean
        } else {
            self.mean + delta * n2 / n
        };
        let m2 = self.std.powi(2) * (n1 - 1.0).max(0.0)
            + other.std.powi(2) * (n2 - 1.0).max(0.0)
            + delta * delta * n1 * n2 / n;
        let std = if n > 1.0 {
            (m2 / (n - 1.0)).max(0.0).sqrt()
        } else {
            0.0
        };
        Estimate {
            mean,
            std,
            std_error: std / n.sqrt(),
            samples: self.samples + other.samples,
        }
    }
}

/// A benchmark problem observed through noise, counting every evaluation.
#[derive(Debug, Clone)]
pub struct NoisyObjective {
    problem: BenchmarkProblem,
    noise: NoiseModel,
    eval_count: u64,
    tally: Option<Arc<AtomicU64>>,
}

impl NoisyObjective {
    pub fn new(problem: BenchmarkProblem, noise: NoiseModel) -> Result<Self> {
        noise.validate()?;
        Ok(Self {
            problem,
            noise,
            eval_count: 0,
            tally: None,
        })
    }

    /// Also count every evaluation into a shared counter.
    pub fn with_tally(mut self, tally: Arc<AtomicU64>) -> Self {
        self.tally = Some(tally);
        self
    }

    pub fn problem(&self) -> &BenchmarkProblem {
        &self.problem
    }

    pub fn noise(&self) -> NoiseModel {
        self.noise
    }

    pub fn eval_count(&self) -> u64 {
        self.eval_count
    }

    pub fn dim(&self) -> usize {
        self.problem.dim()
    }

    /// One noisy observation of the objective at `x`.
    pub fn evaluate_noisy(&mut self, x: &[f64], rng: &mut RngStream) -> Result<f64> {
        let sigma = self.noise.sigma;
        let value = match self.noise.kind {
            _ if self.noise.is_noiseless() => self.problem.evaluate(x)?,
            NoiseKind::AdditiveGaussian => {
                let f = self.problem.evaluate(x)?;
                f + sigma * rng.standard_normal()
            }
            NoiseKind::RelativeGaussian => {
                let f = self.problem.evaluate(x)?;
                f + sigma * f.abs() * rng.standard_normal()
            }
            NoiseKind::DesignGaussian => {
                let perturbed: Vec<f64> = x
                    .iter()
                    .map(|v| v + sigma * rng.standard_normal())
                    .collect();
                self.problem.evaluate(&perturbed)?
            }
            NoiseKind::None => unreachable!("handled by the noiseless arm"),
        };
        self.eval_count += 1;
        if let Some(t) = &self.tally {
            t.fetch_add(1, Ordering::Relaxed);
        }
        Ok(value)
    }

    /// Mean of `n` independent noisy observations, with its standard error.
    pub fn estimate_mean(&mut self, x: &[f64], rng: &mut RngStream, n: usize) -> Result<Estimate> {
        if n == 0 {
            return Err(invalid("estimate_mean needs at least one sample"));
        }
        // Welford: a constant sample keeps the mean bit-exact and the spread zero
        let mut mean = 0.0;
        let mut m2 = 0.0;
        for k in 0..n {
            let v = self.evaluate_noisy(x, rng)?;
            let delta = v - mean;
            mean += delta / (k + 1) as f64;
            m2 += delta * (v - mean);
        }
        let std = if n > 1 {
            (m2 / (n - 1) as f64).max(0.0).sqrt()
        } else {
            0.0
        };
        Ok(Estimate {
            mean,
            std,
            std_error: std / (n as f64).sqrt(),
            samples: n,
        })
    }

    /// Repeated samples of a noiseless objective are identical; spend one.
    pub fn effective_samples(&self, requested: usize) -> usize {
        if self.noise.is_noiseless() {
            1
        } else {
            requested.max(1)
        }
    }
}

/// `mean + lambda * std`; `lambda = 0` is the plain mean objective.
pub fn robust_score(mean: f64, std: f64, lambda: f64) -> f64 {
    if lambda == 0.0 {
        mean
    } else {
        mean + lambda * std
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::TestFunction;

    fn ackley2(sigma: f64) -> NoisyObjective {
        let p = BenchmarkProblem::new(TestFunction::Ackley, 2).unwrap();
        NoisyObjective::new(p, NoiseModel::additive(sigma).unwrap()).unwrap()
    }

    #[test]
    fn noiseless_matches_deterministic() {
        let mut obj = ackley2(0.0);
        let mut rng = RngStream::new(0, 0);
        let x = [0.3, -1.7];
        let want = obj.problem().evaluate(&x).unwrap();
        assert_eq!(obj.evaluate_noisy(&x, &mut rng).unwrap(), want);
        let est = obj.estimate_mean(&x, &mut rng, 17).unwrap();
        assert_eq!(est.mean, want);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn counter_contract() {
        let mut obj = ackley2(0.025);
        let mut rng = RngStream::new(0, 0);
        assert_eq!(obj.eval_count(), 0);
        obj.evaluate_noisy(&[0.0, 0.0], &mut rng).unwrap();
        assert_eq!(obj.eval_count(), 1);
        obj.estimate_mean(&[0.0, 0.0], &mut rng, 40).unwrap();
        assert_eq!(obj.eval_count(), 41);
        assert!(obj.estimate_mean(&[0.0, 0.0], &mut rng, 0).is_err());
        assert_eq!(obj.eval_count(), 41);
        assert!(obj.evaluate_noisy(&[0.0], &mut rng).is_err());
        assert_eq!(obj.eval_count(), 41);
    }

    #[test]
    fn single_sample_has_zero_error() {
        let mut obj = ackley2(0.025);
        let mut rng = RngStream::new(2, 0);
        let est = obj.estimate_mean(&[0.0, 0.0], &mut rng, 1).unwrap();
        assert_eq!(est.std_error, 0.0);
        assert_eq!(est.std, 0.0);
    }

    #[test]
    fn noisy_mean_at_origin() {
        let mut obj = ackley2(0.025);
        let mut rng = RngStream::new(3, 0);
        let n = 10_000;
        let mean = (0..n)
            .map(|_| obj.evaluate_noisy(&[0.0, 0.0], &mut rng).unwrap())
            .sum::<f64>()
            / n as f64;
        assert!(mean.abs() <= 0.001, "{mean}");
    }

    #[test]
    fn noise_model_validation() {
        assert!(NoiseModel::new(NoiseKind::None, 0.1).is_err());
        assert!(NoiseModel::new(NoiseKind::AdditiveGaussian, -0.1).is_err());
        assert!(NoiseModel::new(NoiseKind::DesignGaussian, 0.1).is_ok());
    }

    #[test]
    fn merge_matches_joint_estimate() {
        let mut obj = ackley2(0.1);
        let x = [0.2, 0.1];
        let mut a = RngStream::new(8, 0);
        let joint = obj.estimate_mean(&x, &mut a, 12).unwrap();
        let mut b = RngStream::new(8, 0);
        let first = obj.estimate_mean(&x, &mut b, 5).unwrap();
        let second = obj.estimate_mean(&x, &mut b, 7).unwrap();
        let merged = first.merge(&second);
        assert_eq!(merged.samples, 12);
        assert!((merged.mean - joint.mean).abs() < 1e-12);
        assert!((merged.std - joint.std).abs() < 1e-12);
    }

    #[test]
    fn robust_score_cases() {
        assert_eq!(robust_score(1.5, 0.3, 0.0), 1.5);
        assert_eq!(robust_score(1.0, 0.5, 2.0), 2.0);
    }
}

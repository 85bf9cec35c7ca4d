//! Heavy-tailed Lévy step sampling and the exploration walk.
//!
//! Step lengths follow the truncated Pareto law `p(t) ∝ t^-λ` on
//! `[step_min, step_max]`, drawn by inverting the CDF.

use serde::{Deserialize, Serialize};

use crate::domain::{random_direction, Bounds, DesignVector};
use crate::error::{check_dim, invalid, Result};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevyConfig {
    /// Tail exponent, `1 < lambda <= 3`. `3` is the Brownian end of the range.
    pub lambda: f64,
    pub step_min: f64,
    pub step_max: f64,
}

impl LevyConfig {
    pub fn new(lambda: f64, step_min: f64, step_max: f64) -> Result<Self> {
        let cfg = Self {
            lambda,
            step_min,
            step_max,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Steps from `1e-3` of the widest dimension up to the full width.
    pub fn for_bounds(lambda: f64, bounds: &Bounds) -> Result<Self> {
        let w = bounds.max_width();
        Self::new(lambda, 1e-3 * w, w)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 1.0 && self.lambda <= 3.0) {
            return Err(invalid(format!(
                "levy exponent must satisfy 1 < lambda <= 3, got {}",
                self.lambda
            )));
        }
        if !(self.step_min > 0.0) || !(self.step_max >= self.step_min) || !self.step_max.is_finite()
        {
            return Err(invalid(format!(
                "levy steps need 0 < step_min <= step_max < inf, got [{}, {}]",
                self.step_min, self.step_max
            )));
        }
        Ok(())
    }

    /// Inverse CDF of the untruncated Pareto law, capped at `step_max`.
    pub fn quantile(&self, u: f64) -> f64 {
        let t = self.step_min * (1.0 - u).powf(-1.0 / (self.lambda - 1.0));
        t.min(self.step_max)
    }
}

pub fn sample_levy_step(rng: &mut RngStream, cfg: &LevyConfig) -> Result<f64> {
    cfg.validate()?;
    Ok(cfg.quantile(rng.uniform()))
}

/// One Lévy jump from `current` in a uniformly random direction, reflected into `bounds`.
pub fn levy_walk_point(
    rng: &mut RngStream,
    current: &[f64],
    bounds: &Bounds,
    cfg: &LevyConfig,
) -> Result<DesignVector> {
    check_dim(bounds.dim(), current.len())?;
    let t = sample_levy_step(rng, cfg)?;
    let dir = random_direction(rng, current.len());
    Ok(jump(current, &dir, t, bounds))
}

/// `current + step * direction`, reflected into `bounds`.
pub fn jump(current: &[f64], direction: &[f64], step: f64, bounds: &Bounds) -> DesignVector {
    let mut x: Vec<f64> = current
        .iter()
        .zip(direction)
        .map(|(c, u)| c + step * u)
        .collect();
    bounds.reflect(&mut x);
    x
}

/// A point strictly inside `bounds`, uniform per coordinate.
pub fn sample_uniform_in_bounds(rng: &mut RngStream, bounds: &Bounds) -> Result<DesignVector> {
    if bounds.is_degenerate() {
        return Err(invalid("cannot sample from degenerate bounds"));
    }
    Ok(bounds
        .lower()
        .iter()
        .zip(bounds.upper())
        .map(|(lo, hi)| lo + (hi - lo) * rng.uniform_open())
        .collect())
}

pub fn sample_gaussian(rng: &mut RngStream, mean: f64, sigma: f64) -> Result<f64> {
    rng.gaussian(mean, sigma)
}

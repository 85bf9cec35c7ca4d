//! Firefly algorithm for minimization.
//!
//! Brightness is the negated estimated objective. Each generation scans the
//! population, moves every firefly toward the brighter ones it sees, and
//! re-evaluates it once; a firefly that sees nobody brighter takes a purely
//! random step. The population is re-ranked brightest-first after every
//! generation, so the lower-triangular scan compares each firefly against
//! the ones ranked above it.

use serde::{Deserialize, Serialize};

use crate::domain::{distance_unchecked, DesignVector, Region};
use crate::error::{check_dim, invalid, Result};
use crate::objective::{Estimate, NoisyObjective};
use crate::result::{OptimizationResult, Stall, TracePoint};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairScan {
    /// `j` runs over the fireflies ranked above `i`.
    #[default]
    LowerTriangular,
    /// `j` runs over the whole population.
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FaConfig {
    /// Randomization weight in `[0, 1]`.
    pub alpha: f64,
    /// Attractiveness at zero distance.
    pub beta0: f64,
    /// Light absorption coefficient, in inverse squared domain units.
    pub gamma: f64,
    pub population: usize,
    pub max_generations: usize,
    /// Per-dimension scale `S_k` of the random term; empty means 1 everywhere.
    pub scale: Vec<f64>,
    /// Noisy samples averaged per brightness evaluation.
    pub samples: usize,
    pub tolerance: f64,
    /// Generations in a row with best-value change below `tolerance` before stopping.
    pub stall_generations: usize,
    pub pair_scan: PairScan,
}

impl Default for FaConfig {
    fn default() -> Self {
        Self {
            alpha: 0.2,
            beta0: 1.0,
            gamma: 1.0,
            population: 20,
            max_generations: 1000,
            scale: Vec::new(),
            samples: 3,
            tolerance: 1e-5,
            stall_generations: 30,
            pair_scan: PairScan::LowerTriangular,
        }
    }
}

impl FaConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(invalid(format!(
                "alpha must be in [0, 1], got {}",
                self.alpha
            )));
        }
        if !(self.beta0 > 0.0) {
            return Err(invalid(format!(
                "beta0 must be positive, got {}",
                self.beta0
            )));
        }
        if !(self.gamma >= 0.0) {
            return Err(invalid(format!("gamma must be >= 0, got {}", self.gamma)));
        }
        if self.population < 2 {
            return Err(invalid("firefly population must be at least 2"));
        }
        if self.scale.iter().any(|s| !(*s > 0.0)) {
            return Err(invalid("scale factors must be positive"));
        }
        if self.samples == 0 {
            return Err(invalid("samples must be at least 1"));
        }
        Ok(())
    }

    fn scale_at(&self, k: usize) -> f64 {
        self.scale.get(k).copied().unwrap_or(1.0)
    }
}

/// `beta0 * exp(-gamma r^2)`.
pub fn attractiveness(r: f64, beta0: f64, gamma: f64) -> f64 {
    if gamma == 0.0 {
        return beta0;
    }
    beta0 * (-gamma * r * r).exp()
}

/// Euclidean distance.
pub fn distance(xi: &[f64], xj: &[f64]) -> Result<f64> {
    check_dim(xi.len(), xj.len())?;
    Ok(distance_unchecked(xi, xj))
}

/// Move `xi` toward the brighter `xj`: attraction plus a scaled uniform kick.
pub fn move_firefly(
    xi: &[f64],
    xj: &[f64],
    cfg: &FaConfig,
    rng: &mut RngStream,
) -> Result<DesignVector> {
    Ok(move_with_beta(xi, xj, cfg, rng)?.0)
}

fn move_with_beta(
    xi: &[f64],
    xj: &[f64],
    cfg: &FaConfig,
    rng: &mut RngStream,
) -> Result<(DesignVector, f64)> {
    let r = distance(xi, xj)?;
    let beta = attractiveness(r, cfg.beta0, cfg.gamma);
    let x = xi
        .iter()
        .zip(xj)
        .enumerate()
        .map(|(k, (a, b))| {
            // (1 - beta) a + beta b is a + beta (b - a), exact at beta = 1
            let attracted = (1.0 - beta) * a + beta * b;
            attracted + cfg.alpha * cfg.scale_at(k) * (rng.uniform() - 0.5)
        })
        .collect();
    Ok((x, beta))
}

/// The random move of a firefly with no brighter partner.
fn random_step(xi: &[f64], cfg: &FaConfig, rng: &mut RngStream) -> DesignVector {
    xi.iter()
        .enumerate()
        .map(|(k, a)| a + cfg.alpha * cfg.scale_at(k) * (rng.uniform() - 0.5))
        .collect()
}

/// Move statistics, for inspecting the attraction kernel actually applied.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FaStats {
    pub generations: usize,
    pub attraction_moves: u64,
    pub random_moves: u64,
    pub beta_min: f64,
    pub beta_max: f64,
}

struct Fly {
    x: DesignVector,
    est: Estimate,
}

impl Fly {
    fn intensity(&self) -> f64 {
        -self.est.mean
    }
}

pub fn fa_optimize(
    obj: &mut NoisyObjective,
    region: &Region,
    cfg: &FaConfig,
    rng: &mut RngStream,
    budget: u64,
) -> Result<OptimizationResult> {
    fa_optimize_seeded(obj, region, cfg, rng, budget, &[]).map(|(res, _)| res)
}

/// Like [`fa_optimize`], with `seeds` (those inside the region) replacing the
/// first randomly placed fireflies.
pub fn fa_optimize_seeded(
    obj: &mut NoisyObjective,
    region: &Region,
    cfg: &FaConfig,
    rng: &mut RngStream,
    budget: u64,
    seeds: &[DesignVector],
) -> Result<(OptimizationResult, FaStats)> {
    fa_optimize_observed(obj, region, cfg, rng, budget, seeds, |_, _| {})
}

/// [`fa_optimize_seeded`] calling `observe(generation, positions)` after the
/// initial placement and after every generation, positions brightest first.
pub fn fa_optimize_observed(
    obj: &mut NoisyObjective,
    region: &Region,
    cfg: &FaConfig,
    rng: &mut RngStream,
    budget: u64,
    seeds: &[DesignVector],
    mut observe: impl FnMut(usize, &[DesignVector]),
) -> Result<(OptimizationResult, FaStats)> {
    cfg.validate()?;
    check_dim(obj.dim(), region.dim())?;
    if !cfg.scale.is_empty() {
        check_dim(obj.dim(), cfg.scale.len())?;
    }
    let n = cfg.population;
    let samples = obj.effective_samples(cfg.samples);
    let per_generation = (n * samples) as u64;
    if budget < per_generation {
        return Err(invalid(format!(
            "budget {budget} cannot cover {n} fireflies at {samples} samples each"
        )));
    }
    let start = obj.eval_count();
    let used = |obj: &NoisyObjective| obj.eval_count() - start;

    let mut seeds = seeds.iter().filter(|s| region.contains(s));
    let mut flies = Vec::with_capacity(n);
    for _ in 0..n {
        let x = match seeds.next() {
            Some(s) => s.clone(),
            None => region.sample(rng),
        };
        let est = obj.estimate_mean(&x, rng, samples)?;
        flies.push(Fly { x, est });
    }
    rank(&mut flies);
    observe(0, &positions(&flies));
    let mut best_x = flies[0].x.clone();
    let mut best = flies[0].est;
    let mut trace = vec![TracePoint {
        iteration: 0,
        best_mean: best.mean,
        best_std: best.std,
        evaluations: used(obj),
        accepted: None,
    }];
    let mut stats = FaStats {
        beta_min: f64::INFINITY,
        beta_max: f64::NEG_INFINITY,
        ..Default::default()
    };
    let mut stall = Stall::new(cfg.tolerance, cfg.stall_generations);
    stall.observe(best.mean);

    while stats.generations < cfg.max_generations && used(obj) + per_generation <= budget {
        for i in 0..n {
            let partners = match cfg.pair_scan {
                PairScan::LowerTriangular => 0..i,
                PairScan::Full => 0..n,
            };
            let mut x = flies[i].x.clone();
            let mut moved = false;
            for j in partners {
                if j != i && flies[j].intensity() > flies[i].intensity() {
                    let (next, beta) = move_with_beta(&x, &flies[j].x, cfg, rng)?;
                    x = next;
                    moved = true;
                    stats.attraction_moves += 1;
                    stats.beta_min = stats.beta_min.min(beta);
                    stats.beta_max = stats.beta_max.max(beta);
                }
            }
            if !moved {
                x = random_step(&x, cfg, rng);
                stats.random_moves += 1;
            }
            region.reflect(&mut x);
            let est = obj.estimate_mean(&x, rng, samples)?;
            if est.mean < best.mean {
                best = est;
                best_x = x.clone();
            }
            flies[i] = Fly { x, est };
        }
        rank(&mut flies);
        stats.generations += 1;
        observe(stats.generations, &positions(&flies));
        trace.push(TracePoint {
            iteration: stats.generations,
            best_mean: best.mean,
            best_std: best.std,
            evaluations: used(obj),
            accepted: None,
        });
        if stall.observe(best.mean) {
            break;
        }
    }

    Ok((
        OptimizationResult {
            best_x,
            best_mean: best.mean,
            best_std: best.std,
            evaluations: used(obj),
            iterations: stats.generations,
            trace,
        },
        stats,
    ))
}

fn positions(flies: &[Fly]) -> Vec<DesignVector> {
    flies.iter().map(|f| f.x.clone()).collect()
}

/// Brightest first.
fn rank(flies: &mut [Fly]) {
    flies.sort_by(|a, b| b.intensity().total_cmp(&a.intensity()));
}

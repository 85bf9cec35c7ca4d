//! The two-stage Eagle Strategy driver.
//!
//! Each stage takes one Lévy jump from the current best, then runs an
//! intensive local search (firefly or Nelder-Mead) inside a hypersphere
//! around the landing point. The hypersphere starts large and shrinks
//! geometrically. A candidate replaces the current best only when a fresh
//! confirmation estimate gives a strictly lower robust score.

use serde::{Deserialize, Serialize};

use crate::domain::{distance_unchecked, DesignVector, Region};
use crate::error::{invalid, Result};
use crate::firefly::{fa_optimize_seeded, FaConfig};
use crate::levy::{levy_walk_point, sample_uniform_in_bounds, LevyConfig};
use crate::nelder_mead::{nelder_mead_in, NmConfig};
use crate::objective::{robust_score, Estimate, NoisyObjective};
use crate::result::{OptimizationResult, Source, TracePoint};
use crate::rng::RngStream;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "method")]
pub enum LocalSearch {
    Firefly(FaConfig),
    NelderMead(NmConfig),
}

impl Default for LocalSearch {
    fn default() -> Self {
        LocalSearch::Firefly(FaConfig::default())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// Change of the accepted robust score.
    #[default]
    Value,
    /// Distance between consecutive accepted points.
    Position,
}

/// Lévy step law with lengths given as fractions of the widest domain dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LevyScale {
    pub lambda: f64,
    pub step_min: f64,
    pub step_max: f64,
}

impl Default for LevyScale {
    fn default() -> Self {
        Self {
            lambda: 2.0,
            step_min: 1e-5,
            step_max: 1.0,
        }
    }
}

impl LevyScale {
    pub fn resolve(&self, width: f64) -> Result<LevyConfig> {
        LevyConfig::new(self.lambda, self.step_min * width, self.step_max * width)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EsConfig {
    pub levy: LevyScale,
    pub local: LocalSearch,
    /// Initial hypersphere radius as a fraction of the widest dimension.
    pub radius_init: f64,
    /// Multiplicative radius change per stage.
    pub radius_shrink: f64,
    /// Treat `radius_shrink` and `local_budget_per_stage` as two-dimensional
    /// values: the shrink factor becomes `radius_shrink^(2/d)` and the budget
    /// is multiplied by `d/2`.
    pub dim_scaled: bool,
    /// Smallest radius, as a fraction of the widest dimension.
    pub radius_floor: f64,
    pub outer_tolerance: f64,
    pub termination: Termination,
    pub max_stages: usize,
    /// Evaluations handed to the local searcher each stage.
    pub local_budget_per_stage: u64,
    /// Weight of the standard deviation in the acceptance score.
    pub robust_lambda: f64,
    /// Firefly random-step scale as a fraction of the hypersphere extents,
    /// used when the firefly config leaves `scale` empty.
    pub local_scale: f64,
    /// Samples behind each walk-probe estimate.
    pub probe_samples: usize,
    /// Fresh samples drawn per confirmation round at a candidate best.
    pub confirm_samples: usize,
    /// Cap on confirmation samples for one candidate.
    pub confirm_max: usize,
    /// Confirmation stops early once the candidate's mean is this many
    /// standard errors clear of the incumbent score, either way.
    pub confirm_z: f64,
    /// Hard cap on total evaluations.
    pub max_evals: u64,
    /// Stop after this many stages in a row whose change (zero when nothing
    /// was accepted) falls below `outer_tolerance`.
    pub stall_stages: usize,
}

impl Default for EsConfig {
    fn default() -> Self {
        Self {
            levy: LevyScale::default(),
            local: LocalSearch::Firefly(FaConfig {
                samples: 1,
                ..FaConfig::default()
            }),
            radius_init: 0.5,
            radius_shrink: 0.5,
            dim_scaled: true,
            radius_floor: 1e-5,
            outer_tolerance: 1e-5,
            termination: Termination::Value,
            max_stages: 200,
            local_budget_per_stage: 40,
            robust_lambda: 0.0,
            local_scale: 0.5,
            probe_samples: 3,
            confirm_samples: 10,
            confirm_max: 20,
            confirm_z: 1.0,
            max_evals: 1_000_000,
            stall_stages: 10,
        }
    }
}

impl EsConfig {
    /// Per-stage shrink factor and local budget in dimension `dim`.
    pub fn stage_schedule(&self, dim: usize) -> (f64, u64) {
        if self.dim_scaled {
            let d = dim.max(1) as f64;
            let budget = (self.local_budget_per_stage as f64 * d / 2.0).round() as u64;
            (self.radius_shrink.powf(2.0 / d), budget)
        } else {
            (self.radius_shrink, self.local_budget_per_stage)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius_init > 0.0 && self.radius_init <= 1.0) {
            return Err(invalid("radius_init must lie in (0, 1]"));
        }
        if !(self.radius_shrink > 0.0 && self.radius_shrink <= 1.0) {
            return Err(invalid("radius_shrink must lie in (0, 1]"));
        }
        if !(self.radius_floor > 0.0 && self.radius_floor <= self.radius_init) {
            return Err(invalid("radius_floor must lie in (0, radius_init]"));
        }
        if !(self.outer_tolerance > 0.0) {
            return Err(invalid("outer_tolerance must be positive"));
        }
        if !(self.local_scale > 0.0) {
            return Err(invalid("local_scale must be positive"));
        }
        if !(self.robust_lambda >= 0.0) {
            return Err(invalid("robust_lambda must be >= 0"));
        }
        if self.confirm_samples == 0 || self.probe_samples == 0 {
            return Err(invalid(
                "probe_samples and confirm_samples must be at least 1",
            ));
        }
        if self.max_stages == 0 || self.stall_stages == 0 {
            return Err(invalid("max_stages and stall_stages must be at least 1"));
        }
        match &self.local {
            LocalSearch::Firefly(fa) => fa.validate()?,
            LocalSearch::NelderMead(nm) => nm.validate()?,
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
struct Incumbent {
    x: DesignVector,
    est: Estimate,
    score: f64,
}

pub fn es_optimize(
    obj: &mut NoisyObjective,
    cfg: &EsConfig,
    rng: &mut RngStream,
) -> Result<OptimizationResult> {
    es_optimize_from(obj, cfg, rng, None)
}

/// Eagle Strategy from a given initial guess (uniform in the bounds when `None`).
pub fn es_optimize_from(
    obj: &mut NoisyObjective,
    cfg: &EsConfig,
    rng: &mut RngStream,
    initial: Option<DesignVector>,
) -> Result<OptimizationResult> {
    cfg.validate()?;
    let bounds = obj.problem().bounds().clone();
    if bounds.is_degenerate() {
        return Err(crate::error::Error::EmptyRegion);
    }
    let width = bounds.max_width();
    let levy = cfg.levy.resolve(width)?;
    let confirm_batch = obj.effective_samples(cfg.confirm_samples);
    let start = obj.eval_count();
    let used = |obj: &NoisyObjective| obj.eval_count() - start;
    if cfg.max_evals < confirm_batch as u64 {
        return Err(invalid("max_evals cannot cover the initial estimate"));
    }

    let x0 = match initial {
        Some(x) => {
            crate::error::check_dim(bounds.dim(), x.len())?;
            x
        }
        None => sample_uniform_in_bounds(rng, &bounds)?,
    };
    let est = obj.estimate_mean(&x0, rng, confirm_batch)?;
    let mut best = Incumbent {
        score: robust_score(est.mean, est.std, cfg.robust_lambda),
        x: x0,
        est,
    };
    let mut trace = vec![TracePoint {
        iteration: 0,
        best_mean: best.est.mean,
        best_std: best.est.std,
        evaluations: used(obj),
        accepted: Some(Source::Initial),
    }];

    let (shrink, stage_budget) = cfg.stage_schedule(bounds.dim());
    let mut radius = cfg.radius_init * width;
    let floor = cfg.radius_floor * width;
    let mut stages = 0;
    let mut quiet = 0;
    while stages < cfg.max_stages {
        if !affordable(obj, start, cfg, obj.effective_samples(cfg.probe_samples)) {
            break;
        }
        stages += 1;

        let walk_x = levy_walk_point(rng, &best.x, &bounds, &levy)?;
        let probe = obj.effective_samples(cfg.probe_samples);
        let walk_est = obj.estimate_mean(&walk_x, rng, probe)?;
        let mut candidate = None;
        if score(&walk_est, cfg) < best.score {
            if let Some(est) = confirm(obj, &walk_x, rng, cfg, best.score, start)? {
                candidate = Some((walk_x.clone(), est, Source::Walk));
            }
        }

        let remaining = cfg.max_evals - used(obj);
        let local_budget = stage_budget.min(remaining.saturating_sub(confirm_batch as u64));
        let region = Region::ball(bounds.clone(), walk_x.clone(), radius)?;
        if let Some(local) = run_local(obj, cfg, &region, &best.x, rng, local_budget)? {
            let bar = candidate
                .as_ref()
                .map_or(best.score, |(_, est, _)| score(est, cfg).min(best.score));
            if let Some(est) = confirm(obj, &local, rng, cfg, bar, start)? {
                if score(&est, cfg) < bar {
                    candidate = Some((local, est, Source::LocalSearch));
                }
            }
        }

        let mut accepted = None;
        let mut change = 0.0;
        if let Some((x, est, source)) = candidate.filter(|(_, est, _)| score(est, cfg) < best.score)
        {
            let new_score = score(&est, cfg);
            change = match cfg.termination {
                Termination::Value => best.score - new_score,
                Termination::Position => distance_unchecked(&best.x, &x),
            };
            best = Incumbent {
                x,
                est,
                score: new_score,
            };
            accepted = Some(source);
        }
        if change < cfg.outer_tolerance {
            quiet += 1;
        } else {
            quiet = 0;
        }
        trace.push(TracePoint {
            iteration: stages,
            best_mean: best.est.mean,
            best_std: best.est.std,
            evaluations: used(obj),
            accepted,
        });
        radius = (radius * shrink).max(floor);
        if quiet >= cfg.stall_stages {
            break;
        }
    }

    Ok(OptimizationResult {
        best_x: best.x,
        best_mean: best.est.mean,
        best_std: best.est.std,
        evaluations: used(obj),
        iterations: stages,
        trace,
    })
}

/// Sample a candidate in rounds until its score is `confirm_z` standard errors
/// clear of `bar` or the sample cap is reached. `None` if even one round is
/// unaffordable.
fn confirm(
    obj: &mut NoisyObjective,
    x: &[f64],
    rng: &mut RngStream,
    cfg: &EsConfig,
    bar: f64,
    start: u64,
) -> Result<Option<Estimate>> {
    let batch = obj.effective_samples(cfg.confirm_samples);
    let cap = if obj.noise().is_noiseless() {
        batch
    } else {
        cfg.confirm_max.max(batch)
    };
    if !affordable(obj, start, cfg, batch) {
        return Ok(None);
    }
    let mut est = obj.estimate_mean(x, rng, batch)?;
    loop {
        let s = score(&est, cfg);
        let margin = cfg.confirm_z * est.std_error;
        let decided = s - margin >= bar || s + margin < bar;
        if decided || est.samples + batch > cap || !affordable(obj, start, cfg, batch) {
            return Ok(Some(est));
        }
        est = est.merge(&obj.estimate_mean(x, rng, batch)?);
    }
}

fn affordable(obj: &NoisyObjective, start: u64, cfg: &EsConfig, evals: usize) -> bool {
    obj.eval_count() - start + evals as u64 <= cfg.max_evals
}

fn score(est: &Estimate, cfg: &EsConfig) -> f64 {
    robust_score(est.mean, est.std, cfg.robust_lambda)
}

/// Runs the configured local searcher; `None` when the budget cannot cover it.
fn run_local(
    obj: &mut NoisyObjective,
    cfg: &EsConfig,
    region: &Region,
    incumbent: &[f64],
    rng: &mut RngStream,
    budget: u64,
) -> Result<Option<DesignVector>> {
    match &cfg.local {
        LocalSearch::Firefly(fa) => {
            let mut fa = fa.clone();
            if fa.scale.is_empty() {
                fa.scale = region
                    .extents()
                    .iter()
                    .map(|e| cfg.local_scale * e)
                    .collect();
            }
            let samples = obj.effective_samples(fa.samples) as u64;
            if budget < fa.population as u64 * samples {
                return Ok(None);
            }
            let seeds = [region.center(), incumbent.to_vec()];
            let (res, _) = fa_optimize_seeded(obj, region, &fa, rng, budget, &seeds)?;
            Ok(Some(res.best_x))
        }
        LocalSearch::NelderMead(nm) => {
            let samples = obj.effective_samples(nm.samples) as u64;
            if budget < (obj.dim() as u64 + 1) * samples {
                return Ok(None);
            }
            let nm = NmConfig {
                max_evals: budget,
                ..nm.clone()
            };
            let res = nelder_mead_in(obj, region, &region.center(), &nm, rng)?;
            Ok(Some(res.best_x))
        }
    }
}

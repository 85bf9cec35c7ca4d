//! Browser demo: noisy 2-D landscapes, Lévy walks and firefly swarms.
//!
//! The plain functions do the work and are tested natively; the
//! `wasm_bindgen` exports flatten their results into `Float64Array`s.

use eagle_core::firefly::fa_optimize_observed;
use eagle_core::functions::lookup_function;
use eagle_core::levy::{levy_walk_point, LevyConfig};
use eagle_core::{BenchmarkProblem, FaConfig, NoiseModel, NoisyObjective, Region, RngStream};
use wasm_bindgen::prelude::*;

fn problem2(function: &str) -> eagle_core::Result<BenchmarkProblem> {
    BenchmarkProblem::new(lookup_function(function)?, 2)
}

/// Noisy objective sampled on a `resolution x resolution` grid over the
/// function's domain, row-major with `y` increasing by row.
pub fn landscape_grid(
    function: &str,
    sigma: f64,
    resolution: usize,
    seed: u64,
) -> eagle_core::Result<Vec<f64>> {
    let p = problem2(function)?;
    let (lo, hi) = (p.bounds().lower()[0], p.bounds().upper()[0]);
    let mut obj = NoisyObjective::new(p, NoiseModel::additive(sigma)?)?;
    let mut rng = RngStream::new(seed, 0);
    let n = resolution.max(2);
    let at = |k: usize| lo + (hi - lo) * k as f64 / (n - 1) as f64;
    let mut values = Vec::with_capacity(n * n);
    for row in 0..n {
        for col in 0..n {
            values.push(obj.evaluate_noisy(&[at(col), at(row)], &mut rng)?);
        }
    }
    Ok(values)
}

/// A Lévy walk of `steps` jumps from the domain centre.
pub fn levy_path(
    function: &str,
    lambda: f64,
    steps: usize,
    seed: u64,
) -> eagle_core::Result<Vec<[f64; 2]>> {
    let p = problem2(function)?;
    let cfg = LevyConfig::for_bounds(lambda, p.bounds())?;
    let mut rng = RngStream::new(seed, 1);
    let mut x = p.bounds().center();
    let mut path = vec![[x[0], x[1]]];
    for _ in 0..steps {
        x = levy_walk_point(&mut rng, &x, p.bounds(), &cfg)?;
        path.push([x[0], x[1]]);
    }
    Ok(path)
}

/// Swarm positions after placement and after each generation, brightest first.
pub struct SwarmRun {
    pub population: usize,
    pub snapshots: Vec<Vec<[f64; 2]>>,
    pub best: [f64; 2],
    /// Noise-free value at `best`.
    pub best_value: f64,
    pub evaluations: u64,
}

pub fn swarm_run(
    function: &str,
    sigma: f64,
    generations: usize,
    alpha: f64,
    gamma: f64,
    seed: u64,
) -> eagle_core::Result<SwarmRun> {
    let p = problem2(function)?;
    let region = Region::whole(p.bounds().clone());
    let cfg = FaConfig {
        alpha,
        gamma,
        max_generations: generations,
        stall_generations: usize::MAX,
        scale: p.bounds().widths().iter().map(|w| w / 10.0).collect(),
        ..FaConfig::default()
    };
    let mut obj = NoisyObjective::new(p.clone(), NoiseModel::additive(sigma)?)?;
    let mut snapshots = Vec::new();
    let (res, _) = fa_optimize_observed(
        &mut obj,
        &region,
        &cfg,
        &mut RngStream::new(seed, 2),
        u64::MAX,
        &[],
        |_, xs| snapshots.push(xs.iter().map(|x| [x[0], x[1]]).collect()),
    )?;
    Ok(SwarmRun {
        population: cfg.population,
        snapshots,
        best: [res.best_x[0], res.best_x[1]],
        best_value: p.evaluate(&res.best_x)?,
        evaluations: res.evaluations,
    })
}

fn js_err(e: eagle_core::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// `[lower, upper, f_star]` of the 2-D problem.
#[wasm_bindgen]
pub fn domain(function: &str) -> Result<Vec<f64>, JsError> {
    let p = problem2(function).map_err(js_err)?;
    Ok(vec![
        p.bounds().lower()[0],
        p.bounds().upper()[0],
        p.f_star(),
    ])
}

#[wasm_bindgen]
pub fn landscape(
    function: &str,
    sigma: f64,
    resolution: usize,
    seed: u32,
) -> Result<Vec<f64>, JsError> {
    landscape_grid(function, sigma, resolution, seed.into()).map_err(js_err)
}

/// Flat `x0, y0, x1, y1, ...`.
#[wasm_bindgen]
pub fn levy_walk(
    function: &str,
    lambda: f64,
    steps: usize,
    seed: u32,
) -> Result<Vec<f64>, JsError> {
    let path = levy_path(function, lambda, steps, seed.into()).map_err(js_err)?;
    Ok(path.into_iter().flatten().collect())
}

/// Flat `[population, best_x, best_y, best_value, evaluations, x, y, ...]`
/// with one block of `population` points per snapshot.
#[wasm_bindgen]
pub fn firefly_swarm(
    function: &str,
    sigma: f64,
    generations: usize,
    alpha: f64,
    gamma: f64,
    seed: u32,
) -> Result<Vec<f64>, JsError> {
    let run = swarm_run(function, sigma, generations, alpha, gamma, seed.into()).map_err(js_err)?;
    let mut out = vec![
        run.population as f64,
        run.best[0],
        run.best[1],
        run.best_value,
        run.evaluations as f64,
    ];
    out.extend(run.snapshots.into_iter().flatten().flatten());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_covers_domain_corners() {
        let v = landscape_grid("ackley", 0.0, 5, 0).unwrap();
        assert_eq!(v.len(), 25);
        // centre of an odd grid is the origin
        assert_eq!(v[12], 0.0);
        let corner = BenchmarkProblem::new(eagle_core::TestFunction::Ackley, 2)
            .unwrap()
            .evaluate(&[-32.768, -32.768])
            .unwrap();
        assert_eq!(v[0], corner);
    }

    #[test]
    fn noise_changes_grid_deterministically() {
        let a = landscape_grid("ackley", 0.025, 8, 3).unwrap();
        assert_eq!(a, landscape_grid("ackley", 0.025, 8, 3).unwrap());
        assert_ne!(a, landscape_grid("ackley", 0.0, 8, 3).unwrap());
    }

    #[test]
    fn walk_stays_in_domain() {
        let path = levy_path("easom", 1.5, 500, 9).unwrap();
        assert_eq!(path.len(), 501);
        assert!(path.iter().flatten().all(|v| v.abs() <= 100.0));
    }

    #[test]
    fn swarm_records_every_generation() {
        let run = swarm_run("ackley", 0.025, 15, 0.2, 1.0, 4).unwrap();
        assert_eq!(run.snapshots.len(), 16);
        assert!(run.snapshots.iter().all(|s| s.len() == run.population));
        assert_eq!(run.evaluations, 16 * 20 * 3);
    }

    #[test]
    fn unknown_function_is_an_error() {
        assert!(landscape_grid("ackly", 0.0, 4, 0).is_err());
    }
}

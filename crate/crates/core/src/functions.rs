//! Deterministic benchmark functions and the named-problem registry.
//!
//! All functions are minimized. Michalewicz and Shubert have no closed-form
//! optimum; their minimizers are located numerically once (both are
//! separable, so a 1-D search per coordinate is exact up to rounding).

use std::collections::HashMap;
use std::f64::consts::{E, PI};
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::domain::{Bounds, DesignVector};
use crate::error::{check_dim, invalid, Error, Result};

/// Offset for Schwefel's function: the maximum of `x sin(sqrt|x|)` on `[-500, 500]`.
pub const SCHWEFEL_OFFSET: f64 = 418.982_887_272_433_7;
/// Its maximizer.
pub const SCHWEFEL_ARGMIN: f64 = 420.968_746_359_982;

const MICHALEWICZ_M: i32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TestFunction {
    Ackley,
    DeJong,
    Easom,
    Griewank,
    Michalewicz,
    Rastrigin,
    Rosenbrock,
    Schwefel,
    Shubert,
}

impl TestFunction {
    pub const ALL: [TestFunction; 9] = [
        TestFunction::Easom,
        TestFunction::Michalewicz,
        TestFunction::Rosenbrock,
        TestFunction::DeJong,
        TestFunction::Schwefel,
        TestFunction::Ackley,
        TestFunction::Rastrigin,
        TestFunction::Griewank,
        TestFunction::Shubert,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TestFunction::Ackley => "ackley",
            TestFunction::DeJong => "dejong",
            TestFunction::Easom => "easom",
            TestFunction::Griewank => "griewank",
            TestFunction::Michalewicz => "michalewicz",
            TestFunction::Rastrigin => "rastrigin",
            TestFunction::Rosenbrock => "rosenbrock",
            TestFunction::Schwefel => "schwefel",
            TestFunction::Shubert => "shubert",
        }
    }

    pub fn aliases(self) -> &'static [&'static str] {
        match self {
            TestFunction::DeJong => &["sphere", "de-jong"],
            TestFunction::Michalewicz => &["mwz"],
            TestFunction::Rosenbrock => &["rbk"],
            _ => &[],
        }
    }

    pub fn default_dim(self) -> usize {
        match self {
            TestFunction::Michalewicz | TestFunction::Rosenbrock => 16,
            TestFunction::DeJong => 256,
            TestFunction::Schwefel | TestFunction::Ackley => 128,
            TestFunction::Rastrigin | TestFunction::Griewank => 16,
            TestFunction::Easom | TestFunction::Shubert => 2,
        }
    }

    /// Per-dimension domain `[lo, hi]`.
    pub fn domain(self) -> (f64, f64) {
        match self {
            TestFunction::Ackley => (-32.768, 32.768),
            TestFunction::DeJong | TestFunction::Rastrigin => (-5.12, 5.12),
            TestFunction::Easom => (-100.0, 100.0),
            TestFunction::Griewank => (-600.0, 600.0),
            TestFunction::Michalewicz => (0.0, PI),
            TestFunction::Rosenbrock => (-5.0, 5.0),
            TestFunction::Schwefel => (-500.0, 500.0),
            TestFunction::Shubert => (-10.0, 10.0),
        }
    }

    pub fn formula(self) -> &'static str {
        match self {
            TestFunction::Ackley => {
                "-20 exp(-0.2 sqrt(mean x_i^2)) - exp(mean cos(2 pi x_i)) + 20 + e"
            }
            TestFunction::DeJong => "sum x_i^2",
            TestFunction::Easom => {
                "-(-1)^d prod cos(x_i) exp(-sum (x_i - pi)^2)  (classical Easom at d = 2)"
            }
            TestFunction::Griewank => "1 + sum x_i^2 / 4000 - prod cos(x_i / sqrt(i))",
            TestFunction::Michalewicz => "-sum sin(x_i) sin(i x_i^2 / pi)^(2m), m = 10",
            TestFunction::Rastrigin => "10 d + sum (x_i^2 - 10 cos(2 pi x_i))",
            TestFunction::Rosenbrock => "sum 100 (x_{i+1} - x_i^2)^2 + (1 - x_i)^2",
            TestFunction::Schwefel => "418.98288727 d - sum x_i sin(sqrt|x_i|)",
            TestFunction::Shubert => "prod_{i=1,2} sum_{j=1..5} j cos((j + 1) x_i + j)",
        }
    }

    fn check_dim(self, dim: usize) -> Result<()> {
        match self {
            TestFunction::Shubert if dim != 2 => Err(invalid("shubert is defined for d = 2 only")),
            TestFunction::Rosenbrock if dim < 2 => Err(invalid("rosenbrock needs d >= 2")),
            _ if dim == 0 => Err(invalid("dimension must be positive")),
            _ => Ok(()),
        }
    }

    /// Raw function value. The caller guarantees `x` has the intended length.
    pub fn eval(self, x: &[f64]) -> f64 {
        match self {
            TestFunction::Ackley => ackley(x),
            TestFunction::DeJong => x.iter().map(|v| v * v).sum(),
            TestFunction::Easom => easom(x),
            TestFunction::Griewank => griewank(x),
            TestFunction::Michalewicz => x
                .iter()
                .enumerate()
                .map(|(i, &v)| michalewicz_term(i + 1, v))
                .sum(),
            TestFunction::Rastrigin => {
                10.0 * x.len() as f64
                    + x.iter()
                        .map(|v| v * v - 10.0 * (2.0 * PI * v).cos())
                        .sum::<f64>()
            }
            TestFunction::Rosenbrock => x
                .windows(2)
                .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
                .sum(),
            TestFunction::Schwefel => x
                .iter()
                .map(|v| SCHWEFEL_OFFSET - v * v.abs().sqrt().sin())
                .sum(),
            TestFunction::Shubert => x.iter().map(|&v| shubert_factor(v)).product(),
        }
    }
}

fn ackley(x: &[f64]) -> f64 {
    let d = x.len() as f64;
    let sq = x.iter().map(|v| v * v).sum::<f64>() / d;
    let cs = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / d;
    // grouped so the origin evaluates to exactly 0
    20.0 * (1.0 - (-0.2 * sq.sqrt()).exp()) + (E - cs.exp())
}

fn easom(x: &[f64]) -> f64 {
    let sign = if x.len().is_multiple_of(2) { -1.0 } else { 1.0 };
    let prod: f64 = x.iter().map(|v| v.cos()).product();
    let sq: f64 = x.iter().map(|v| (v - PI).powi(2)).sum();
    sign * prod * (-sq).exp()
}

fn griewank(x: &[f64]) -> f64 {
    let sum: f64 = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
    let prod: f64 = x
        .iter()
        .enumerate()
        .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
        .product();
    1.0 + sum - prod
}

fn michalewicz_term(i: usize, v: f64) -> f64 {
    -v.sin() * (i as f64 * v * v / PI).sin().powi(2 * MICHALEWICZ_M)
}

fn shubert_factor(v: f64) -> f64 {
    (1..=5)
        .map(|j| {
            let j = j as f64;
            j * ((j + 1.0) * v + j).cos()
        })
        .sum()
}

/// All local minimizers of `f` on `[lo, hi]` whose value lies within `slack`
/// of the best, located on a grid of `n` cells and polished by golden section.
fn minimize_1d(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize, slack: f64) -> Vec<(f64, f64)> {
    let h = (hi - lo) / n as f64;
    let ys: Vec<f64> = (0..=n).map(|k| f(lo + h * k as f64)).collect();
    let mut found: Vec<(f64, f64)> = Vec::new();
    for k in 0..=n {
        let left = if k == 0 { f64::INFINITY } else { ys[k - 1] };
        let right = if k == n { f64::INFINITY } else { ys[k + 1] };
        if ys[k] <= left && ys[k] <= right {
            let a = (lo + h * (k as f64 - 1.0)).max(lo);
            let b = (lo + h * (k as f64 + 1.0)).min(hi);
            let x = golden_section(&f, a, b);
            found.push((x, f(x)));
        }
    }
    let best = found.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    found.retain(|p| p.1 <= best + slack);
    found.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-6);
    found
}

fn golden_section(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() < 1e-14 * (1.0 + a.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let m = 0.5 * (a + b);
    [a, b, m, c, d]
        .into_iter()
        .min_by(|p, q| f(*p).total_cmp(&f(*q)))
        .unwrap_or(m)
}

/// Per-coordinate Michalewicz minimizer for coordinate index `i` (1-based).
fn michalewicz_coordinate(i: usize) -> (f64, f64) {
    static CACHE: OnceLock<Mutex<HashMap<usize, (f64, f64)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("cache poisoned").get(&i) {
        return *hit;
    }
    let best = minimize_1d(|v| michalewicz_term(i, v), 0.0, PI, 2000 * i.max(4), 0.0)
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("grid always has a minimum");
    cache.lock().expect("cache poisoned").insert(i, best);
    best
}

/// The 18 global minimizers of the 2-D Shubert function.
fn shubert_minimizers() -> &'static [DesignVector] {
    static MINS: OnceLock<Vec<DesignVector>> = OnceLock::new();
    MINS.get_or_init(|| {
        let lows = minimize_1d(shubert_factor, -10.0, 10.0, 200_000, 1e-9);
        let highs = minimize_1d(|v| -shubert_factor(v), -10.0, 10.0, 200_000, 1e-9);
        let mut out = Vec::new();
        for (a, _) in &lows {
            for (b, _) in &highs {
                out.push(vec![*a, *b]);
                out.push(vec![*b, *a]);
            }
        }
        out.sort_by(|p, q| p[0].total_cmp(&q[0]).then(p[1].total_cmp(&q[1])));
        out
    })
}

/// A named test function at a fixed dimension, with its domain and known optimum.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkProblem {
    function: TestFunction,
    bounds: Bounds,
    f_star: f64,
    minimizers: Vec<DesignVector>,
}

impl BenchmarkProblem {
    pub fn new(function: TestFunction, dim: usize) -> Result<Self> {
        function.check_dim(dim)?;
        let (lo, hi) = function.domain();
        let bounds = Bounds::uniform(dim, lo, hi)?;
        let minimizers = match function {
            TestFunction::Ackley
            | TestFunction::DeJong
            | TestFunction::Rastrigin
            | TestFunction::Griewank => vec![vec![0.0; dim]],
            TestFunction::Rosenbrock => vec![vec![1.0; dim]],
            TestFunction::Easom => vec![vec![PI; dim]],
            TestFunction::Schwefel => vec![vec![SCHWEFEL_ARGMIN; dim]],
            TestFunction::Michalewicz => {
                vec![(1..=dim).map(|i| michalewicz_coordinate(i).0).collect()]
            }
            TestFunction::Shubert => shubert_minimizers().to_vec(),
        };
        let f_star = match function {
            TestFunction::Easom => -1.0,
            TestFunction::Michalewicz => (1..=dim).map(|i| michalewicz_coordinate(i).1).sum(),
            TestFunction::Shubert => function.eval(&minimizers[0]),
            _ => 0.0,
        };
        Ok(Self {
            function,
            bounds,
            f_star,
            minimizers,
        })
    }

    pub fn function(&self) -> TestFunction {
        self.function
    }

    pub fn name(&self) -> &'static str {
        self.function.name()
    }

    pub fn dim(&self) -> usize {
        self.bounds.dim()
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn f_star(&self) -> f64 {
        self.f_star
    }

    /// One representative global minimizer.
    pub fn x_star(&self) -> &[f64] {
        &self.minimizers[0]
    }

    /// Every known global minimizer (18 for Shubert, one otherwise).
    pub fn minimizers(&self) -> &[DesignVector] {
        &self.minimizers
    }

    /// Exact, noise-free value. Points outside the bounds are evaluated as-is.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        Ok(self.function.eval(x))
    }
}

pub fn evaluate_deterministic(problem: &BenchmarkProblem, x: &[f64]) -> Result<f64> {
    problem.evaluate(x)
}

/// Resolve a registry name or alias, case-insensitively.
pub fn lookup_function(name: &str) -> Result<TestFunction> {
    let key = name.trim().to_ascii_lowercase();
    for f in TestFunction::ALL {
        if f.name() == key || f.aliases().contains(&key.as_str()) {
            return Ok(f);
        }
    }
    let suggestion = TestFunction::ALL
        .iter()
        .flat_map(|f| std::iter::once(f.name()).chain(f.aliases().iter().copied()))
        .map(|cand| (strsim::levenshtein(&key, cand), cand))
        .min()
        .map(|(_, cand)| lookup_function(cand).map(|f| f.name().to_string()))
        .and_then(|r| r.ok());
    Err(Error::UnknownProblem {
        name: name.to_string(),
        suggestion,
    })
}

/// Build a registered problem; `dim = None` uses the function's default dimension.
pub fn problem(name: &str, dim: Option<usize>) -> Result<BenchmarkProblem> {
    let f = lookup_function(name)?;
    BenchmarkProblem::new(f, dim.unwrap_or(f.default_dim()))
}

/// Machine-readable registry entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegistryEntry {
    pub name: String,
    pub aliases: Vec<String>,
    pub formula: String,
    pub default_dim: usize,
    pub lower: f64,
    pub upper: f64,
    /// Optimum at the default dimension.
    pub f_star: f64,
    /// One minimizer at the default dimension.
    pub x_star: Vec<f64>,
    pub global_minima: usize,
}

pub fn registry() -> Vec<RegistryEntry> {
    TestFunction::ALL
        .iter()
        .map(|&f| {
            let p = BenchmarkProblem::new(f, f.default_dim()).expect("defaults are valid");
            let (lower, upper) = f.domain();
            RegistryEntry {
                name: f.name().to_string(),
                aliases: f.aliases().iter().map(|s| s.to_string()).collect(),
                formula: f.formula().to_string(),
                default_dim: f.default_dim(),
                lower,
                upper,
                f_star: p.f_star(),
                x_star: p.x_star().to_vec(),
                global_minima: p.minimizers().len(),
            }
        })
        .collect()
}

pub fn registry_json() -> String {
    serde_json::to_string_pretty(&registry()).expect("registry serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ackley_origin_is_zero() {
        for d in [1, 2, 7, 128] {
            let p = BenchmarkProblem::new(TestFunction::Ackley, d).unwrap();
            assert_eq!(p.evaluate(&vec![0.0; d]).unwrap(), 0.0);
        }
    }

    #[test]
    fn ackley_at_ones_matches_high_precision() {
        // 40-digit evaluation of the formula at (1, 1)
        let want = 3.625_384_938_440_363;
        let p = BenchmarkProblem::new(TestFunction::Ackley, 2).unwrap();
        assert!((p.evaluate(&[1.0, 1.0]).unwrap() - want).abs() < 1e-9);
    }

    #[test]
    fn sphere_at_ones() {
        let p = BenchmarkProblem::new(TestFunction::DeJong, 4).unwrap();
        assert_eq!(p.evaluate(&[1.0; 4]).unwrap(), 4.0);
    }

    #[test]
    fn easom_reduces_to_classic_form() {
        let p = BenchmarkProblem::new(TestFunction::Easom, 2).unwrap();
        let x = [2.0, 4.5];
        let classic =
            -(2.0f64).cos() * (4.5f64).cos() * (-((2.0 - PI).powi(2) + (4.5 - PI).powi(2))).exp();
        assert!((p.evaluate(&x).unwrap() - classic).abs() < 1e-15);
    }

    #[test]
    fn shubert_has_eighteen_minima() {
        let p = BenchmarkProblem::new(TestFunction::Shubert, 2).unwrap();
        assert_eq!(p.minimizers().len(), 18);
        // high-precision reference value
        assert!((p.f_star() - (-186.730_908_831_023_8)).abs() < 1e-9);
        for m in p.minimizers() {
            assert!((p.evaluate(m).unwrap() - p.f_star()).abs() < 1e-9);
        }
        assert!(BenchmarkProblem::new(TestFunction::Shubert, 3).is_err());
    }

    #[test]
    fn michalewicz_reference_optima() {
        for (d, want) in [(2, -1.8013), (5, -4.687_658), (10, -9.660_15)] {
            let p = BenchmarkProblem::new(TestFunction::Michalewicz, d).unwrap();
            assert!((p.f_star() - want).abs() < 1e-4, "d={d}: {}", p.f_star());
        }
    }

    #[test]
    fn schwefel_constant_is_consistent() {
        let v = SCHWEFEL_ARGMIN * SCHWEFEL_ARGMIN.sqrt().sin();
        assert!((v - SCHWEFEL_OFFSET).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch() {
        let p = BenchmarkProblem::new(TestFunction::DeJong, 3).unwrap();
        assert_eq!(
            p.evaluate(&[0.0, 0.0]),
            Err(Error::DimensionMismatch {
                expected: 3,
                actual: 2
            })
        );
    }

    #[test]
    fn lookup_suggests_nearest() {
        assert_eq!(lookup_function("MWZ").unwrap(), TestFunction::Michalewicz);
        match lookup_function("ackely") {
            Err(Error::UnknownProblem { suggestion, .. }) => {
                assert_eq!(suggestion.as_deref(), Some("ackley"))
            }
            other => panic!("{other:?}"),
        }
    }
}

//! Search domains: axis-aligned boxes and hypersphere-restricted regions.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, invalid, Error, Result};
use crate::rng::RngStream;

/// A point in the search domain.
pub type DesignVector = Vec<f64>;

/// Closed per-dimension intervals `[lower_k, upper_k]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        check_dim(lower.len(), upper.len())?;
        if lower.is_empty() {
            return Err(invalid("bounds must have at least one dimension"));
        }
        for (k, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !lo.is_finite() || !hi.is_finite() || lo > hi {
                return Err(invalid(format!(
                    "bad interval [{lo}, {hi}] in dimension {k}"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// The same interval repeated in every dimension.
    pub fn uniform(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn width(&self, k: usize) -> f64 {
        self.upper[k] - self.lower[k]
    }

    pub fn widths(&self) -> Vec<f64> {
        (0..self.dim()).map(|k| self.width(k)).collect()
    }

    /// Largest per-dimension width; the reference length for step and radius fractions.
    pub fn max_width(&self) -> f64 {
        (0..self.dim()).map(|k| self.width(k)).fold(0.0, f64::max)
    }

    pub fn center(&self) -> DesignVector {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| 0.5 * (lo + hi))
            .collect()
    }

    pub fn is_degenerate(&self) -> bool {
        self.lower.iter().zip(&self.upper).any(|(lo, hi)| lo >= hi)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| *lo <= *v && *v <= *hi)
    }

    /// Fold every coordinate back into its interval by mirror reflection.
    pub fn reflect(&self, x: &mut [f64]) {
        for (k, v) in x.iter_mut().enumerate() {
            *v = reflect_scalar(*v, self.lower[k], self.upper[k]);
        }
    }
}

/// Mirror-reflect `x` into `[lo, hi]`, folding repeatedly for long overshoots.
pub fn reflect_scalar(x: f64, lo: f64, hi: f64) -> f64 {
    if lo <= x && x <= hi {
        return x;
    }
    let w = hi - lo;
    if w <= 0.0 || !x.is_finite() {
        return lo;
    }
    let period = 2.0 * w;
    let mut y = (x - lo).rem_euclid(period);
    if y > w {
        y = period - y;
    }
    (lo + y).clamp(lo, hi)
}

/// The active search region: the bounds, optionally intersected with a ball.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    bounds: Bounds,
    ball: Option<(DesignVector, f64)>,
}

impl Region {
    pub fn whole(bounds: Bounds) -> Self {
        Self { bounds, ball: None }
    }

    /// Ball of `radius` around `center`, intersected with `bounds`.
    /// The center must lie inside the bounds, so the intersection is never empty.
    pub fn ball(bounds: Bounds, center: DesignVector, radius: f64) -> Result<Self> {
        check_dim(bounds.dim(), center.len())?;
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(invalid(format!(
                "hypersphere radius must be positive, got {radius}"
            )));
        }
        if !bounds.contains(&center) {
            return Err(Error::EmptyRegion);
        }
        Ok(Self {
            bounds,
            ball: Some((center, radius)),
        })
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn dim(&self) -> usize {
        self.bounds.dim()
    }

    pub fn center(&self) -> DesignVector {
        match &self.ball {
            Some((c, _)) => c.clone(),
            None => self.bounds.center(),
        }
    }

    pub fn radius(&self) -> Option<f64> {
        self.ball.as_ref().map(|(_, r)| *r)
    }

    /// Per-dimension extent of the region's bounding box.
    pub fn extents(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|k| {
                let (lo, hi) = self.interval(k);
                hi - lo
            })
            .collect()
    }

    fn interval(&self, k: usize) -> (f64, f64) {
        let (lo, hi) = (self.bounds.lower[k], self.bounds.upper[k]);
        match &self.ball {
            Some((c, r)) => (lo.max(c[k] - r), hi.min(c[k] + r)),
            None => (lo, hi),
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        if !self.bounds.contains(x) {
            return false;
        }
        match &self.ball {
            Some((c, r)) => distance_unchecked(x, c) <= *r * (1.0 + 1e-12),
            None => true,
        }
    }

    /// Reflect into the bounds, then fold radially into the ball. The radial
    /// fold moves toward the (in-bounds) center, so the result stays in bounds.
    pub fn reflect(&self, x: &mut [f64]) {
        self.bounds.reflect(x);
        if let Some((c, r)) = &self.ball {
            let dist = distance_unchecked(x, c);
            if dist > *r {
                let folded = reflect_scalar(dist, -r, *r).abs();
                let scale = folded / dist;
                for (v, ck) in x.iter_mut().zip(c) {
                    *v = ck + (*v - ck) * scale;
                }
            }
        }
    }

    /// A point drawn uniformly from the region. Falls back to reflecting a
    /// ball sample when rejection keeps failing (ball mostly outside the box).
    pub fn sample(&self, rng: &mut RngStream) -> DesignVector {
        match &self.ball {
            None => (0..self.dim())
                .map(|k| {
                    let (lo, hi) = self.interval(k);
                    lo + (hi - lo) * rng.uniform_open()
                })
                .collect(),
            Some((c, r)) => {
                const ATTEMPTS: usize = 64;
                let mut x = Vec::with_capacity(self.dim());
                for _ in 0..ATTEMPTS {
                    sample_in_ball(rng, c, *r, &mut x);
                    if self.bounds.contains(&x) {
                        return x;
                    }
                }
                self.reflect(&mut x);
                x
            }
        }
    }
}

/// Uniformly random unit vector in `dim` dimensions.
pub fn random_direction(rng: &mut RngStream, dim: usize) -> DesignVector {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.standard_normal()).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-300 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

fn sample_in_ball(rng: &mut RngStream, center: &[f64], radius: f64, out: &mut Vec<f64>) {
    let dim = center.len();
    let dir = random_direction(rng, dim);
    let rho = radius * rng.uniform().powf(1.0 / dim as f64);
    out.clear();
    out.extend(center.iter().zip(&dir).map(|(c, u)| c + rho * u));
}

pub(crate) fn distance_unchecked(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

use serde::{Deserialize, Serialize};

use crate::domain::DesignVector;

/// Where an accepted improvement came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    Initial,
    Walk,
    LocalSearch,
}

/// Best-so-far snapshot after one iteration (generation, simplex step or stage).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub iteration: usize,
    pub best_mean: f64,
    pub best_std: f64,
    pub evaluations: u64,
    /// Set on iterations where a new best was accepted.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub accepted: Option<Source>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub best_x: DesignVector,
    pub best_mean: f64,
    pub best_std: f64,
    /// Single noisy evaluations consumed.
    pub evaluations: u64,
    pub iterations: usize,
    pub trace: Vec<TracePoint>,
}

impl OptimizationResult {
    /// Accepted best scores in order; strictly decreasing for the eagle driver.
    pub fn accepted_means(&self) -> Vec<f64> {
        self.trace
            .iter()
            .filter(|p| p.accepted.is_some())
            .map(|p| p.best_mean)
            .collect()
    }
}

/// Counts consecutive iterations whose best value moved by less than `tolerance`.
#[derive(Debug, Clone)]
pub(crate) struct Stall {
    tolerance: f64,
    patience: usize,
    last: Option<f64>,
    quiet: usize,
}

impl Stall {
    pub(crate) fn new(tolerance: f64, patience: usize) -> Self {
        Self {
            tolerance,
            patience: patience.max(1),
            last: None,
            quiet: 0,
        }
    }

    /// Record the latest best value; returns true once the run has stalled.
    pub(crate) fn observe(&mut self, best: f64) -> bool {
        if let Some(prev) = self.last {
            if (prev - best).abs() < self.tolerance {
                self.quiet += 1;
            } else {
                self.quiet = 0;
            }
        }
        self.last = Some(best);
        self.quiet >= self.patience
    }
}

use log::warn;
use rayon::prelude::*;

use super::{CimSolver, TrialResult};
use crate::error::{Error, Result};
use crate::ising::{Couplings, IsingModel};

/// Anything that turns `(model, seed)` into one trial result.
pub trait TrialSolver: Sync {
    fn name(&self) -> &str;

    fn solve(&self, model: &IsingModel, couplings: &dyn Couplings, seed: u64) -> Result<TrialResult>;
}

impl TrialSolver for CimSolver {
    fn name(&self) -> &str {
        self.variant().name()
    }

    fn solve(&self, model: &IsingModel, couplings: &dyn Couplings, seed: u64) -> Result<TrialResult> {
        self.run_trial_with(model, couplings, seed)
    }
}

/// Runs trials for seeds `base_seed..base_seed + n_trials`, in parallel,
/// returning results in seed order.
pub fn run_trials(
    solver: &dyn TrialSolver,
    model: &IsingModel,
    couplings: &dyn Couplings,
    n_trials: usize,
    base_seed: u64,
) -> Vec<Result<TrialResult>> {
    (0..n_trials as u64)
        .into_par_iter()
        .map(|i| solver.solve(model, couplings, base_seed.wrapping_add(i)))
        .collect()
}

#[derive(Clone, Debug)]
pub struct BatchStats {
    pub best: TrialResult,
    /// Energies of the non-diverged trials, in seed order.
    pub energies: Vec<f64>,
    pub diverged: Vec<u64>,
    pub success_rate: Option<f64>,
}

impl BatchStats {
    pub fn completed(&self) -> usize {
        self.energies.len()
    }
}

/// Seeded batch with best-of and success statistics.
///
/// A trial succeeds when its energy is within 1e-9 of `reference` or below.
/// Diverged trials are excluded; the batch fails only when all diverge.
pub fn run_batch(
    solver: &dyn TrialSolver,
    model: &IsingModel,
    couplings: &dyn Couplings,
    n_trials: usize,
    base_seed: u64,
    reference: Option<f64>,
) -> Result<BatchStats> {
    if n_trials == 0 {
        return Err(Error::input("a batch needs at least one trial"));
    }
    let mut best: Option<TrialResult> = None;
    let mut energies = Vec::with_capacity(n_trials);
    let mut diverged = Vec::new();
    for outcome in run_trials(solver, model, couplings, n_trials, base_seed) {
        match outcome {
            Ok(r) => {
                energies.push(r.energy);
                if best.as_ref().is_none_or(|b| r.energy < b.energy) {
                    best = Some(r);
                }
            }
            Err(Error::Divergence { seed, step }) => {
                warn!("{}: seed {seed} diverged at step {step}", solver.name());
                diverged.push(seed);
            }
            Err(e) => return Err(e),
        }
    }
    let best = best.ok_or(Error::AllDiverged { trials: n_trials })?;
    let success_rate = reference.map(|r| {
        let hits = energies.iter().filter(|&&e| e <= r + 1e-9).count();
        hits as f64 / energies.len() as f64
    });
    Ok(BatchStats {
        best,
        energies,
        diverged,
        success_rate,
    })
}

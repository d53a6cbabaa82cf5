use log::info;

use super::encode::{choose_lambda, compile, step1_fits, step2_fits, CompiledTap, Decoded};
use super::DiscretizationPlan;
use crate::cim::{run_trials, TrialSolver};
use crate::error::{Error, Result};
use crate::traffic::{Route, TrafficNetwork};

#[derive(Clone, Debug)]
pub struct TapSolution {
    /// Lowest true objective among feasible trials; lowest seed on ties.
    pub best: Decoded,
    pub best_seed: u64,
    pub best_energy: f64,
    pub trials: usize,
    pub diverged: usize,
    pub feasible: usize,
    /// Largest `|true − approx|` over feasible trials.
    pub max_approx_gap: f64,
}

impl TapSolution {
    /// Feasible share of the trials that finished.
    pub fn feasibility_rate(&self) -> f64 {
        self.feasible as f64 / (self.trials - self.diverged) as f64
    }
}

/// Runs `n_trials` seeded trials on a compiled instance and keeps the best
/// feasible decode by true objective.
pub fn solve_compiled(
    net: &TrafficNetwork,
    compiled: &CompiledTap,
    solver: &dyn TrialSolver,
    n_trials: usize,
    base_seed: u64,
) -> Result<TapSolution> {
    if n_trials == 0 {
        return Err(Error::input("need at least one trial"));
    }
    let outcomes = run_trials(
        solver,
        compiled.model(),
        compiled.couplings(),
        n_trials,
        base_seed,
    );
    let mut diverged = 0;
    let mut feasible = 0;
    let mut max_approx_gap = 0.0f64;
    let mut best: Option<(Decoded, u64, f64)> = None;
    for outcome in outcomes {
        let trial = match outcome {
            Ok(t) => t,
            Err(Error::Divergence { .. }) => {
                diverged += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let dec = compiled.decode(net, &trial.spins)?;
        if !dec.feasible {
            continue;
        }
        feasible += 1;
        max_approx_gap = max_approx_gap.max((dec.true_objective - dec.approx_objective).abs());
        let better = match &best {
            Some((b, _, _)) => dec.true_objective < b.true_objective,
            None => true,
        };
        if better {
            best = Some((dec, trial.seed, trial.energy));
        }
    }
    if diverged == n_trials {
        return Err(Error::AllDiverged { trials: n_trials });
    }
    let Some((best, best_seed, best_energy)) = best else {
        return Err(Error::Solve(format!(
            "{} found no feasible route choice in {} trials (feasibility rate 0); \
             try a larger penalty than λ = {}",
            solver.name(),
            n_trials - diverged,
            compiled.lambda()
        )));
    };
    Ok(TapSolution {
        best,
        best_seed,
        best_energy,
        trials: n_trials,
        diverged,
        feasible,
        max_approx_gap,
    })
}

#[derive(Clone, Debug)]
pub struct TwoStepResult {
    pub step1: TapSolution,
    pub compiled1: CompiledTap,
    pub step2: TapSolution,
    pub compiled2: CompiledTap,
}

impl TwoStepResult {
    /// The step with the lower true objective; step 2 on ties.
    pub fn best(&self) -> (&TapSolution, &CompiledTap) {
        if self.step1.best.true_objective < self.step2.best.true_objective {
            (&self.step1, &self.compiled1)
        } else {
            (&self.step2, &self.compiled2)
        }
    }
}

/// Step 1 solves with one shared quadratic; step 2 refits every link around
/// step 1's flows and solves again with the same seeds.
#[allow(clippy::too_many_arguments)]
pub fn two_step_solve(
    net: &TrafficNetwork,
    plan: &DiscretizationPlan,
    route_sets: &[Vec<Route>],
    solver: &dyn TrialSolver,
    n_trials: usize,
    base_seed: u64,
    lambda: Option<f64>,
) -> Result<TwoStepResult> {
    let fits1 = step1_fits(net, plan, route_sets)?;
    let lambda1 = match lambda {
        Some(l) => l,
        None => choose_lambda(net, plan, route_sets, &fits1)?,
    };
    let compiled1 = compile(net, plan, route_sets, &fits1, lambda1)?;
    let step1 = solve_compiled(net, &compiled1, solver, n_trials, base_seed)?;
    info!(
        "step 1: {} spins, λ = {lambda1}, best true objective {}",
        compiled1.n_spins(),
        step1.best.true_objective
    );

    let fits2 = step2_fits(net, plan, route_sets, &step1.best.link_flows)?;
    let lambda2 = match lambda {
        Some(l) => l,
        None => choose_lambda(net, plan, route_sets, &fits2)?,
    };
    let compiled2 = compile(net, plan, route_sets, &fits2, lambda2)?;
    let step2 = solve_compiled(net, &compiled2, solver, n_trials, base_seed)?;
    info!(
        "step 2: λ = {lambda2}, best true objective {}",
        step2.best.true_objective
    );
    Ok(TwoStepResult {
        step1,
        compiled1,
        step2,
        compiled2,
    })
}

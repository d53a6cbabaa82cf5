use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cim::{TrialResult, TrialSolver};
use crate::config::AnnealSection;
use crate::error::{Error, Result};
use crate::ising::{Couplings, IsingModel, SpinConfig};

/// Geometric cooling from `t_start` to `t_end` over `n_sweeps` sweeps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnnealSchedule {
    pub t_start: f64,
    pub t_end: f64,
    pub n_sweeps: usize,
    pub seed: u64,
}

impl AnnealSchedule {
    pub fn new(t_start: f64, t_end: f64, n_sweeps: usize, seed: u64) -> Result<Self> {
        if !(t_end > 0.0 && t_start > t_end && t_start.is_finite()) {
            return Err(Error::input(format!(
                "annealing needs t_start > t_end > 0, got {t_start} and {t_end}"
            )));
        }
        if n_sweeps < 2 {
            return Err(Error::input("annealing needs at least two sweeps"));
        }
        Ok(AnnealSchedule {
            t_start,
            t_end,
            n_sweeps,
            seed,
        })
    }

    /// Schedule from config; an unset `t_start` becomes the model's largest
    /// local field (1 for an uncoupled model).
    pub fn for_model(model: &IsingModel, cfg: &AnnealSection, seed: u64) -> Result<Self> {
        let t_start = cfg.t_start.unwrap_or_else(|| {
            let span = model.max_abs_field();
            if span > 0.0 {
                span
            } else {
                1.0
            }
        });
        AnnealSchedule::new(t_start, t_start * cfg.t_end_ratio, cfg.n_sweeps, seed)
    }

    /// Per-sweep temperature multiplier.
    pub fn cooling_factor(&self) -> f64 {
        (self.t_end / self.t_start).powf(1.0 / (self.n_sweeps - 1) as f64)
    }
}

/// Metropolis single-spin-flip annealing; returns the best configuration
/// seen. An auxiliary spin stays at +1.
pub fn simulated_annealing(model: &IsingModel, sched: &AnnealSchedule) -> TrialResult {
    run(model, sched, None)
}

/// [`simulated_annealing`] plus the energy after every accepted flip, the
/// initial energy first.
pub fn anneal_trace(model: &IsingModel, sched: &AnnealSchedule) -> (TrialResult, Vec<f64>) {
    let mut trace = Vec::new();
    let res = run(model, sched, Some(&mut trace));
    (res, trace)
}

fn run(model: &IsingModel, sched: &AnnealSchedule, mut trace: Option<&mut Vec<f64>>) -> TrialResult {
    let n = model.n_spins();
    let aux = model.aux_index();
    let mut rng = ChaCha8Rng::seed_from_u64(sched.seed);
    let mut s: Vec<i8> = (0..n)
        .map(|i| {
            if Some(i) == aux || rng.gen_bool(0.5) {
                1
            } else {
                -1
            }
        })
        .collect();
    let mut fields: Vec<f64> = (0..n)
        .map(|i| model.row(i).iter().zip(&s).map(|(j, &v)| j * f64::from(v)).sum())
        .collect();
    let start = SpinConfig::new(s.clone()).expect("±1 spins");
    let mut energy = model.energy(&start).expect("matching size");
    let (mut best, mut best_energy) = (s.clone(), energy);
    if let Some(t) = trace.as_deref_mut() {
        t.push(energy);
    }

    let factor = sched.cooling_factor();
    let mut temp = sched.t_start;
    for _ in 0..sched.n_sweeps {
        for i in 0..n {
            if Some(i) == aux {
                continue;
            }
            let delta = 2.0 * f64::from(s[i]) * fields[i];
            if delta > 0.0 && rng.gen::<f64>() >= (-delta / temp).exp() {
                continue;
            }
            let change = -2.0 * f64::from(s[i]);
            s[i] = -s[i];
            for (h, j) in fields.iter_mut().zip(model.row(i)) {
                *h += j * change;
            }
            energy += delta;
            if let Some(t) = trace.as_deref_mut() {
                t.push(energy);
            }
            if energy < best_energy {
                best_energy = energy;
                best.copy_from_slice(&s);
            }
        }
        temp *= factor;
    }

    let spins = SpinConfig::new(best).expect("±1 spins");
    TrialResult {
        energy: model.energy(&spins).expect("matching size"),
        spins,
        trajectory: None,
        seed: sched.seed,
    }
}

/// Simulated annealing as a batch trial solver.
#[derive(Clone, Debug)]
pub struct Annealer {
    cfg: AnnealSection,
}

impl Annealer {
    pub fn new(cfg: AnnealSection) -> Self {
        Annealer { cfg }
    }
}

impl TrialSolver for Annealer {
    fn name(&self) -> &str {
        "sa"
    }

    fn solve(&self, model: &IsingModel, _couplings: &dyn Couplings, seed: u64) -> Result<TrialResult> {
        let sched = AnnealSchedule::for_model(model, &self.cfg, seed)?;
        Ok(simulated_annealing(model, &sched))
    }
}

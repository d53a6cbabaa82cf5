//! Spiking-network coherent Ising machine dynamics.
//!
//! Each spin i carries an in-phase amplitude `x_i` and a dissipative pulse
//! amplitude `k_i`, evolving as
//!
//! ```text
//! dx_i/dt = a x_i − x_i³ + J_xk b k_i + tanh(c Σ_j J̃_ij x_j) + ζ Σ_j x_j / √N
//! dk_i/dt = −b k_i + J_kx x_i
//! ```
//!
//! with `J̃ = J / coupling_scale`. The feedback-free network ([`Variant::Snn`])
//! drops the last term of the first line; [`Variant::Gfsnn`] keeps it. Both are
//! integrated with explicit Euler at a fixed step.

mod batch;

pub use batch::{run_batch, run_trials, BatchStats, TrialSolver};

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ising::{canonical_gauge, Couplings, IsingModel, SpinConfig};

/// Parameters of the oscillator network and its integration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverParams {
    /// Nonlinear gain.
    pub a: f64,
    /// Inherent dissipation of the dissipative pulse.
    pub b: f64,
    /// Interaction strength inside the tanh drive.
    pub c: f64,
    /// Global mean-amplitude feedback coefficient.
    pub zeta: f64,
    pub j_xk: f64,
    pub j_kx: f64,
    pub dt: f64,
    pub n_steps: usize,
    /// Linear gain schedule `(a_start, a_end)` over the trial horizon. When
    /// set it replaces `a`.
    #[serde(default)]
    pub gain_ramp: Option<(f64, f64)>,
    /// Divisor applied to J inside the drive. `None` uses `max |J_ij|`.
    #[serde(default)]
    pub coupling_scale: Option<f64>,
    /// Half-width of the uniform distribution of initial `x`.
    pub init_amplitude: f64,
}

impl Default for SolverParams {
    fn default() -> Self {
        crate::config::RunConfig::default().cim
    }
}

impl SolverParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.a,
            self.b,
            self.c,
            self.zeta,
            self.j_xk,
            self.j_kx,
            self.dt,
            self.init_amplitude,
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("solver parameters must be finite"));
        }
        if self.b <= 0.0 {
            return Err(Error::input("dissipation b must be positive"));
        }
        if self.c <= 0.0 {
            return Err(Error::input("interaction strength c must be positive"));
        }
        if self.zeta < 0.0 {
            return Err(Error::input("feedback coefficient zeta must be non-negative"));
        }
        if self.dt <= 0.0 || self.n_steps == 0 {
            return Err(Error::input("dt and n_steps must be positive"));
        }
        if self.init_amplitude <= 0.0 {
            return Err(Error::input("init_amplitude must be positive"));
        }
        if let Some(s) = self.coupling_scale {
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::input("coupling_scale must be positive"));
            }
        }
        if let Some((a0, a1)) = self.gain_ramp {
            if !(a0.is_finite() && a1.is_finite()) {
                return Err(Error::input("gain ramp endpoints must be finite"));
            }
        }
        if sign(self.j_xk) != -sign(self.j_kx) {
            return Err(Error::input(
                "cross couplings j_xk and j_kx must have opposite signs",
            ));
        }
        Ok(())
    }

    pub fn horizon(&self) -> f64 {
        self.dt * self.n_steps as f64
    }

    /// Gain at elapsed time `t`.
    pub fn gain_at(&self, t: f64) -> f64 {
        match self.gain_ramp {
            None => self.a,
            Some((a0, a1)) => a0 + (a1 - a0) * (t / self.horizon()),
        }
    }
}

fn sign(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Which oscillator network to integrate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// Spiking network without global feedback; `zeta` is ignored.
    Snn,
    /// Spiking network with global mean-amplitude feedback.
    Gfsnn,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Snn => "snn-cim",
            Variant::Gfsnn => "gfsnn-cim",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OscillatorState {
    pub x: Vec<f64>,
    pub k: Vec<f64>,
    pub t: f64,
}

impl OscillatorState {
    pub fn zeros(n: usize) -> Self {
        OscillatorState {
            x: vec![0.0; n],
            k: vec![0.0; n],
            t: 0.0,
        }
    }

    fn is_finite(&self) -> bool {
        self.x.iter().chain(&self.k).all(|v| v.is_finite())
    }
}

/// Sampled `(t, x, k)` series of one trial.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<OscillatorState>,
}

impl Trajectory {
    /// CSV with header `t,x_0,...,x_{N-1}`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        let n = self.samples.first().map_or(0, |s| s.x.len());
        for i in 0..n {
            let _ = write!(out, ",x_{i}");
        }
        out.push('\n');
        for s in &self.samples {
            let _ = write!(out, "{}", s.t);
            for v in &s.x {
                let _ = write!(out, ",{v}");
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialResult {
    pub spins: SpinConfig,
    pub energy: f64,
    pub trajectory: Option<Trajectory>,
    pub seed: u64,
}

/// Integrator for one oscillator-network variant.
#[derive(Clone, Debug)]
pub struct CimSolver {
    params: SolverParams,
    variant: Variant,
    record_stride: Option<usize>,
}

impl CimSolver {
    pub fn new(params: SolverParams, variant: Variant) -> Result<Self> {
        params.validate()?;
        Ok(CimSolver {
            params,
            variant,
            record_stride: None,
        })
    }

    pub fn snn(params: SolverParams) -> Result<Self> {
        Self::new(params, Variant::Snn)
    }

    pub fn gfsnn(params: SolverParams) -> Result<Self> {
        Self::new(params, Variant::Gfsnn)
    }

    /// Record the state every `stride` steps (and at t = 0).
    pub fn with_trajectory(mut self, stride: usize) -> Self {
        self.record_stride = Some(stride.max(1));
        self
    }

    pub fn params(&self) -> &SolverParams {
        &self.params
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Effective coupling divisor for a model.
    pub fn coupling_scale(&self, model: &IsingModel) -> f64 {
        self.params.coupling_scale.unwrap_or_else(|| {
            let m = model.max_abs_coupling();
            if m > 0.0 {
                m
            } else {
                1.0
            }
        })
    }

    /// One explicit-Euler step on the dense model.
    pub fn step(&self, state: &OscillatorState, model: &IsingModel) -> Result<OscillatorState> {
        if state.x.len() != model.n_spins() || state.k.len() != model.n_spins() {
            return Err(Error::Dimension {
                expected: model.n_spins(),
                got: state.x.len(),
            });
        }
        let mut next = state.clone();
        let mut work = Workspace::new(model.n_spins());
        self.advance(&mut next, model, 1.0 / self.coupling_scale(model), &mut work);
        if !next.is_finite() {
            let step = (state.t / self.params.dt).round() as usize + 1;
            return Err(Error::Divergence { step, seed: 0 });
        }
        Ok(next)
    }

    /// Integrates one seeded trial on the dense model.
    pub fn run_trial(&self, model: &IsingModel, seed: u64) -> Result<TrialResult> {
        self.run_trial_with(model, model, seed)
    }

    /// Integrates one seeded trial, taking the coupling action from
    /// `couplings` (which must represent the same matrix as `model`).
    pub fn run_trial_with(
        &self,
        model: &IsingModel,
        couplings: &dyn Couplings,
        seed: u64,
    ) -> Result<TrialResult> {
        let n = model.n_spins();
        if couplings.n_spins() != n {
            return Err(Error::Dimension {
                expected: n,
                got: couplings.n_spins(),
            });
        }
        let inv_scale = 1.0 / self.coupling_scale(model);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let amp = self.params.init_amplitude;
        let mut state = OscillatorState::zeros(n);
        for x in &mut state.x {
            *x = rng.gen_range(-amp..amp);
        }

        let mut trajectory = self.record_stride.map(|_| Trajectory {
            samples: vec![state.clone()],
        });
        let mut work = Workspace::new(n);
        for step in 1..=self.params.n_steps {
            self.advance(&mut state, couplings, inv_scale, &mut work);
            if !state.is_finite() {
                return Err(Error::Divergence { step, seed });
            }
            if let (Some(tr), Some(stride)) = (trajectory.as_mut(), self.record_stride) {
                if step % stride == 0 {
                    tr.samples.push(state.clone());
                }
            }
        }

        let mut spins = SpinConfig::from_signs(&state.x);
        if let Some(aux) = model.aux_index() {
            spins = canonical_gauge(&spins, aux);
        }
        let energy = model.energy(&spins)?;
        Ok(TrialResult {
            spins,
            energy,
            trajectory,
            seed,
        })
    }

    fn advance(
        &self,
        state: &mut OscillatorState,
        couplings: &dyn Couplings,
        inv_scale: f64,
        work: &mut Workspace,
    ) {
        let p = &self.params;
        couplings.apply(&state.x, &mut work.field);
        for (d, f) in work.drive.iter_mut().zip(&work.field) {
            *d = (p.c * (f * inv_scale)).tanh();
        }
        let a = p.gain_at(state.t);
        match self.variant {
            Variant::Snn => snn_derivatives(state, &work.drive, a, p, &mut work.dx, &mut work.dk),
            Variant::Gfsnn => gfsnn_derivatives(state, &work.drive, a, p, &mut work.dx, &mut work.dk),
        }
        for i in 0..state.x.len() {
            state.x[i] += p.dt * work.dx[i];
            state.k[i] += p.dt * work.dk[i];
        }
        state.t += p.dt;
    }
}

struct Workspace {
    field: Vec<f64>,
    drive: Vec<f64>,
    dx: Vec<f64>,
    dk: Vec<f64>,
}

impl Workspace {
    fn new(n: usize) -> Self {
        Workspace {
            field: vec![0.0; n],
            drive: vec![0.0; n],
            dx: vec![0.0; n],
            dk: vec![0.0; n],
        }
    }
}

fn snn_derivatives(
    s: &OscillatorState,
    drive: &[f64],
    a: f64,
    p: &SolverParams,
    dx: &mut [f64],
    dk: &mut [f64],
) {
    for i in 0..s.x.len() {
        let x = s.x[i];
        dx[i] = a * x - x * x * x + p.j_xk * p.b * s.k[i] + drive[i];
        dk[i] = -p.b * s.k[i] + p.j_kx * x;
    }
}

fn gfsnn_derivatives(
    s: &OscillatorState,
    drive: &[f64],
    a: f64,
    p: &SolverParams,
    dx: &mut [f64],
    dk: &mut [f64],
) {
    let n = s.x.len() as f64;
    let feedback = p.zeta * s.x.iter().sum::<f64>() / n.sqrt();
    for i in 0..s.x.len() {
        let x = s.x[i];
        dx[i] = a * x - x * x * x + p.j_xk * p.b * s.k[i] + drive[i] + feedback;
        dk[i] = -p.b * s.k[i] + p.j_kx * x;
    }
}

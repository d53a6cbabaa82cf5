use std::path::PathBuf;

use clap::Args;

use ising_traffic::baselines::Annealer;
use ising_traffic::cim::{run_batch, CimSolver, SolverParams, TrialSolver};
use ising_traffic::ising::{brute_force_ground_state, IsingModel};

use crate::common::{file_stem, read_input, write_output, CliResult, Context, Failure, Report};

/// Energies are compared to the exhaustive ground state with this slack.
const ENERGY_TOL: f64 = 1e-9;

#[derive(Args, Debug)]
pub struct OracleArgs {
    /// Ising model as an edge list; a random model is used when absent.
    pub model: Option<PathBuf>,
    /// Spins of the random model.
    #[arg(long, default_value_t = 12)]
    pub spins: usize,
    #[arg(long, default_value_t = 0)]
    pub model_seed: u64,
}

/// Brute-forces the ground state and checks that no solver reports an
/// energy below it.
pub fn run(ctx: &Context, args: &OracleArgs) -> CliResult<()> {
    let (name, model) = match &args.model {
        Some(p) => {
            let m = IsingModel::parse_edge_list(&read_input(p)?)
                .map_err(|e| Failure::from(e).context(p.display()))?;
            (file_stem(p), m)
        }
        None => (
            format!("random_{}_{}", args.spins, args.model_seed),
            IsingModel::random(args.spins, args.model_seed)?,
        ),
    };
    let (ground, e0) = brute_force_ground_state(&model)?;
    let mut report = Report::default();
    report.put("model", &name);
    report.put("spins", model.n_spins());
    report.put("ground_energy", e0);
    report.put(
        "ground_state",
        ground
            .values()
            .iter()
            .map(|&s| if s > 0 { '+' } else { '-' })
            .collect::<String>(),
    );

    let solvers: Vec<Box<dyn TrialSolver>> = vec![
        Box::new(CimSolver::gfsnn(ctx.cfg.cim.clone())?),
        Box::new(CimSolver::snn(SolverParams {
            zeta: 0.0,
            ..ctx.cfg.cim.clone()
        })?),
        Box::new(Annealer::new(ctx.cfg.anneal.clone())),
    ];
    let mut violations = Vec::new();
    for s in &solvers {
        let stats = run_batch(
            s.as_ref(),
            &model,
            &model,
            ctx.cfg.run.trials,
            ctx.cfg.run.seed,
            Some(e0),
        )?;
        let lowest = stats.energies.iter().copied().fold(f64::INFINITY, f64::min);
        report.put(&format!("{}.best_energy", s.name()), stats.best.energy);
        report.put(
            &format!("{}.success_rate", s.name()),
            stats.success_rate.unwrap_or(0.0),
        );
        report.put(&format!("{}.diverged", s.name()), stats.diverged.len());
        if lowest < e0 - ENERGY_TOL {
            violations.push(format!(
                "{} reported {lowest} below the ground energy {e0}",
                s.name()
            ));
        }
    }
    report.put("sound", violations.is_empty());

    if ctx.out.is_some() {
        write_output(&ctx.out_dir()?, &format!("oracle_{name}.txt"), &report.text())?;
    }
    print!("{}", report.text());
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Failure::solve(violations.join("; ")))
    }
}

use clap::Subcommand;

use ising_traffic::ising::IsingModel;
use ising_traffic::maxcut::{brute_force_max_cut, generate, WeightLaw};
use ising_traffic::traffic::synthetic::{city, grid, grid_with_background};
use ising_traffic::traffic::write_network;

use crate::common::{write_output, CliResult, Context};

#[derive(Subcommand, Debug)]
pub enum GenKind {
    /// Square grid network; the 5x5 grid carries 15 OD pairs of demand 5.
    Grid {
        #[arg(long, default_value_t = 5)]
        size: usize,
        #[arg(long, default_value_t = 1.0)]
        t0: f64,
        #[arg(long, default_value_t = 25.0)]
        capacity: f64,
        /// Seeded random background flows.
        #[arg(long)]
        background: bool,
    },
    /// City-scale network with 89 nodes, 408 links and 20 OD pairs.
    City,
    /// Random Max-Cut instance in rudy format.
    Maxcut {
        #[arg(long, default_value = "pm1s")]
        law: WeightLaw,
        #[arg(long, default_value_t = 18)]
        nodes: usize,
        #[arg(long, default_value_t = 0.1)]
        density: f64,
        /// Also write a reference file with the brute-force optimum.
        #[arg(long)]
        with_reference: bool,
    },
    /// Random Ising model with couplings in [-1, 1].
    Model {
        #[arg(long, default_value_t = 12)]
        spins: usize,
    },
}

/// Writes the instance to `--out` when given, otherwise to stdout.
pub fn run(ctx: &Context, kind: &GenKind) -> CliResult<()> {
    let seed = ctx.cfg.run.seed;
    let mut files: Vec<(String, String)> = Vec::new();
    match *kind {
        GenKind::Grid {
            size,
            t0,
            capacity,
            background,
        } => {
            let net = if background {
                grid_with_background(size, t0, capacity, seed)
            } else {
                grid(size, t0, capacity)
            };
            files.push((format!("grid{size}x{size}.net"), write_network(&net)));
        }
        GenKind::City => files.push((format!("city_{seed}.net"), write_network(&city(seed)))),
        GenKind::Maxcut {
            law,
            nodes,
            density,
            with_reference,
        } => {
            let g = generate(law, nodes, density, seed)?;
            let name = format!("{}_{nodes}_{seed}", law.name());
            files.push((format!("{name}.rudy"), g.to_rudy()));
            if with_reference {
                let (_, best) = brute_force_max_cut(&g)?;
                files.push((format!("{name}.ref"), format!("{name} {best}\n")));
            }
        }
        GenKind::Model { spins } => {
            let m = IsingModel::random(spins, seed)?;
            files.push((format!("model_{spins}_{seed}.txt"), m.to_edge_list()));
        }
    }
    match &ctx.out {
        Some(_) => {
            let dir = ctx.out_dir()?;
            for (name, text) in files {
                let path = write_output(&dir, &name, &text)?;
                println!("{}", path.display());
            }
        }
        None => {
            for (_, text) in files {
                print!("{text}");
            }
        }
    }
    Ok(())
}

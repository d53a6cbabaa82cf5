use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Args;
use log::info;

use ising_traffic::cim::CimSolver;
use ising_traffic::maxcut::{
    brute_force_max_cut, compare_solvers, generate, parse_reference_file, parse_rudy, Comparison, WeightLaw,
    WeightedGraph,
};

use crate::common::{file_stem, read_input, write_output, CliResult, Context, Failure, Report};

#[derive(Args, Debug)]
pub struct MaxcutArgs {
    /// Instances in rudy format.
    pub instances: Vec<PathBuf>,
    /// Generate instances with this weight law (pm1s, pw01, w01) instead.
    #[arg(long)]
    pub law: Option<WeightLaw>,
    #[arg(long, default_value_t = 18)]
    pub nodes: usize,
    #[arg(long, default_value_t = 0.1)]
    pub density: f64,
    /// Number of generated instances.
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    /// Seed of the first generated instance.
    #[arg(long, default_value_t = 0)]
    pub instance_seed: u64,
    /// Sidecar file of known optima, `name value` per line.
    #[arg(long)]
    pub reference: Option<PathBuf>,
    /// Use the brute-force optimum as the reference.
    #[arg(long)]
    pub oracle: bool,
}

pub fn run(ctx: &Context, args: &MaxcutArgs) -> CliResult<()> {
    let mut instances: Vec<(String, WeightedGraph)> = Vec::new();
    for path in &args.instances {
        let g = parse_rudy(&read_input(path)?).map_err(|e| Failure::from(e).context(path.display()))?;
        instances.push((file_stem(path), g));
    }
    if let Some(law) = args.law {
        for k in 0..args.count as u64 {
            let seed = args.instance_seed + k;
            let g = generate(law, args.nodes, args.density, seed)?;
            instances.push((format!("{}_{}_{seed}", law.name(), args.nodes), g));
        }
    }
    if instances.is_empty() {
        return Err(Failure::usage("maxcut needs instance files or --law"));
    }
    let known: BTreeMap<String, i64> = match &args.reference {
        Some(p) => {
            parse_reference_file(&read_input(p)?).map_err(|e| Failure::from(e).context(p.display()))?
        }
        None => BTreeMap::new(),
    };

    let gfsnn = CimSolver::gfsnn(ctx.cfg.cim.clone())?;
    let snn_params = ising_traffic::cim::SolverParams {
        zeta: 0.0,
        ..ctx.cfg.cim.clone()
    };
    let snn = CimSolver::snn(snn_params)?;
    let (trials, seed) = (ctx.cfg.run.trials, ctx.cfg.run.seed);

    let mut csv = format!("{}\n", Comparison::csv_header());
    let mut report = Report::default();
    report.put("trials", trials);
    report.put("seed", seed);
    let (mut sum_gf, mut sum_snn) = (0.0, 0.0);
    for (name, g) in &instances {
        let (reference, source) = if args.oracle {
            (
                brute_force_max_cut(g)
                    .map_err(|e| Failure::from(e).context(name))?
                    .1,
                "brute-force",
            )
        } else if let Some(&r) = known.get(name) {
            (r, "file")
        } else {
            return Err(Failure::usage(format!(
                "no reference cut for `{name}`; pass --reference FILE or --oracle"
            )));
        };
        let cmp = compare_solvers(g, &gfsnn, &snn, trials, seed, reference)?;
        info!(
            "{name}: gfsnn {} snn {}",
            cmp.gfsnn.success_rate(),
            cmp.snn.success_rate()
        );
        csv.push_str(&cmp.csv_rows(name));
        sum_gf += cmp.gfsnn.success_rate();
        sum_snn += cmp.snn.success_rate();
        report.put(&format!("{name}.nodes"), g.n_nodes());
        report.put(&format!("{name}.edges"), g.edges().len());
        report.put(&format!("{name}.reference_cut"), reference);
        report.put(&format!("{name}.reference_source"), source);
        report.put(&format!("{name}.gfsnn_success_rate"), cmp.gfsnn.success_rate());
        report.put(&format!("{name}.snn_success_rate"), cmp.snn.success_rate());
        report.put(&format!("{name}.gfsnn_best_cut"), cmp.gfsnn.best_cut);
        report.put(&format!("{name}.snn_best_cut"), cmp.snn.best_cut);
    }
    let n = instances.len() as f64;
    report.put("mean_gfsnn_success_rate", sum_gf / n);
    report.put("mean_snn_success_rate", sum_snn / n);

    let dir = ctx.out_dir()?;
    write_output(&dir, "maxcut.csv", &csv)?;
    write_output(&dir, "maxcut_report.txt", &report.text())?;
    print!("{}", report.text());
    Ok(())
}

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::Args;
use log::{info, warn};

use ising_traffic::baselines::{dia_best, frank_wolfe, Annealer};
use ising_traffic::cim::{CimSolver, SolverParams, TrialSolver};
use ising_traffic::compiler::{
    build_route_sets, choose_lambda, compile, solve_compiled, step1_fits, two_step_solve, CompiledTap,
    DiscretizationPlan,
};
use ising_traffic::traffic::{flow_csv, heatmap_csv, parse_network, TrafficNetwork};
use ising_traffic::Error;

use crate::common::{file_stem, read_input, write_output, CliResult, Context, Failure, Report};

const SOLVERS: [&str; 5] = ["fw", "dia", "sa", "snn", "gfsnn"];

#[derive(Args, Debug)]
pub struct TapArgs {
    /// Network file (NODE / LINK / OD records).
    pub network: PathBuf,
    /// Comma-separated subset of fw, dia, sa, snn, gfsnn.
    #[arg(long, value_delimiter = ',', default_value = "fw,dia,sa,snn,gfsnn")]
    pub solvers: Vec<String>,
    /// Refit every link around the step-1 solution and solve again.
    #[arg(long)]
    pub two_step: bool,
    /// Vehicles per group.
    #[arg(long)]
    pub group_size: Option<f64>,
    /// Routes per group.
    #[arg(long)]
    pub routes: Option<usize>,
    /// Penalty weight; computed from the instance when absent.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Also write the step-1 Ising model as an edge list.
    #[arg(long)]
    pub dump_model: bool,
}

pub fn load_network(path: &Path) -> CliResult<TrafficNetwork> {
    parse_network(&read_input(path)?).map_err(|e| Failure::from(e).context(path.display()))
}

struct Row {
    solver: String,
    objective: f64,
    feasibility: Option<f64>,
}

pub fn run(ctx: &Context, args: &TapArgs) -> CliResult<()> {
    for s in &args.solvers {
        if !SOLVERS.contains(&s.as_str()) {
            return Err(Failure::usage(format!(
                "unknown solver `{s}` (fw, dia, sa, snn, gfsnn)"
            )));
        }
    }
    let wants = |s: &str| args.solvers.iter().any(|x| x == s);
    let net = load_network(&args.network)?;
    let tap = &ctx.cfg.tap;
    let g = args.group_size.unwrap_or(tap.group_size);
    let m = args.routes.unwrap_or(tap.routes_per_group);
    let lambda = args.lambda.or(tap.lambda);
    let two_step = args.two_step || tap.two_step;
    let (trials, seed) = (ctx.cfg.run.trials, ctx.cfg.run.seed);
    let dir = ctx.out_dir()?;

    let mut report = Report::default();
    report.put("network", file_stem(&args.network));
    report.put("nodes", net.nodes().len());
    report.put("links", net.links().len());
    report.put("od_pairs", net.od_pairs().len());
    report.put("demand", net.total_demand());
    report.put("seed", seed);
    let mut rows: Vec<Row> = Vec::new();
    let mut fw_objective = None;

    if wants("fw") {
        let fw = frank_wolfe(&net, tap.fw_max_iters)?;
        report.put("fw.objective", fw.objective);
        report.put("fw.iterations", fw.iterations);
        report.put(
            "fw.final_gap",
            fw.relative_gap_history.last().copied().unwrap_or(0.0),
        );
        write_output(&dir, "fw_convergence.csv", &fw.convergence_csv())?;
        emit_flows(&dir, &net, "fw", &fw.link_flows)?;
        fw_objective = Some(fw.objective);
        rows.push(Row {
            solver: "fw".into(),
            objective: fw.objective,
            feasibility: None,
        });
    }

    let ising: Vec<&str> = ["sa", "snn", "gfsnn"].into_iter().filter(|s| wants(s)).collect();
    if wants("dia") || !ising.is_empty() {
        let plan = DiscretizationPlan::new(&net, g, m)?;
        report.put("group_size", g);
        report.put("routes_per_group", m);
        report.put("groups", plan.n_groups());
        let batch = dia_best(&net, g, tap.dia_trials, seed)?;
        let dia = batch.best;
        let sets = build_route_sets(&net, &dia, m, tap.yen_k)?;
        let spins: usize = plan.groups.iter().map(|gr| sets[gr.od].len()).sum::<usize>() + 1;
        report.put("spins", spins);
        if wants("dia") {
            report.put("dia.objective", dia.objective);
            report.put("dia.best_seed", dia.seed);
            emit_flows(&dir, &net, "dia", &dia.link_flows)?;
            rows.push(Row {
                solver: "dia".into(),
                objective: dia.objective,
                feasibility: None,
            });
        }

        let mut step1: Option<CompiledTap> = None;
        for name in ising {
            let solver = make_solver(ctx, name)?;
            let (best, compiled) = if two_step {
                let res = two_step_solve(&net, &plan, &sets, solver.as_ref(), trials, seed, lambda)
                    .map_err(|e| solve_failure(e, name))?;
                report.put(&format!("{name}.step1.lambda"), res.compiled1.lambda());
                report.put(&format!("{name}.step1.objective"), res.step1.best.true_objective);
                report.put(
                    &format!("{name}.step1.feasibility_rate"),
                    res.step1.feasibility_rate(),
                );
                report.put(&format!("{name}.step2.lambda"), res.compiled2.lambda());
                report.put(&format!("{name}.step2.objective"), res.step2.best.true_objective);
                report.put(
                    &format!("{name}.step2.feasibility_rate"),
                    res.step2.feasibility_rate(),
                );
                let (sol, c) = res.best();
                (sol.clone(), c.clone())
            } else {
                if step1.is_none() {
                    let fits = step1_fits(&net, &plan, &sets)?;
                    let l = match lambda {
                        Some(l) => l,
                        None => choose_lambda(&net, &plan, &sets, &fits)?,
                    };
                    step1 = Some(compile(&net, &plan, &sets, &fits, l)?);
                }
                let c = step1.as_ref().expect("compiled above");
                let sol = solve_compiled(&net, c, solver.as_ref(), trials, seed)
                    .map_err(|e| solve_failure(e, name))?;
                report.put(&format!("{name}.lambda"), c.lambda());
                (sol, c.clone())
            };
            info!("{name}: true objective {}", best.best.true_objective);
            report.put(&format!("{name}.objective"), best.best.true_objective);
            report.put(&format!("{name}.approx_objective"), best.best.approx_objective);
            report.put(&format!("{name}.feasibility_rate"), best.feasibility_rate());
            report.put(&format!("{name}.diverged"), best.diverged);
            report.put(&format!("{name}.best_seed"), best.best_seed);
            emit_flows(&dir, &net, name, &best.best.link_flows)?;
            if step1.is_none() {
                step1 = Some(compiled);
            }
            rows.push(Row {
                solver: name.into(),
                objective: best.best.true_objective,
                feasibility: Some(best.feasibility_rate()),
            });
        }
        if args.dump_model {
            match &step1 {
                Some(c) => {
                    write_output(&dir, "model.txt", &c.model().to_edge_list())?;
                }
                None => warn!("--dump-model needs an Ising solver (sa, snn or gfsnn)"),
            }
        }
    }

    let mut table = String::from("solver,objective,deviation_from_fw,feasibility_rate\n");
    for r in &rows {
        let dev = fw_objective.map_or(String::new(), |f| ((r.objective - f) / f).to_string());
        let feas = r.feasibility.map_or(String::new(), |f| f.to_string());
        writeln!(table, "{},{},{dev},{feas}", r.solver, r.objective).expect("write to string");
    }
    write_output(&dir, "comparison.csv", &table)?;
    write_output(&dir, "tap_report.txt", &report.text())?;
    print!("{}", report.text());
    Ok(())
}

fn make_solver(ctx: &Context, name: &str) -> CliResult<Box<dyn TrialSolver>> {
    Ok(match name {
        "sa" => Box::new(Annealer::new(ctx.cfg.anneal.clone())),
        "snn" => Box::new(CimSolver::snn(SolverParams {
            zeta: 0.0,
            ..ctx.cfg.cim.clone()
        })?),
        _ => Box::new(CimSolver::gfsnn(ctx.cfg.cim.clone())?),
    })
}

fn solve_failure(e: Error, name: &str) -> Failure {
    Failure::from(e).context(name)
}

fn emit_flows(dir: &Path, net: &TrafficNetwork, name: &str, flows: &[f64]) -> CliResult<()> {
    write_output(dir, &format!("flows_{name}.csv"), &flow_csv(net, flows)?)?;
    match heatmap_csv(net, flows) {
        Ok(h) => {
            write_output(dir, &format!("heatmap_{name}.csv"), &h)?;
        }
        Err(e) => warn!("no heatmap for {name}: {e}"),
    }
    Ok(())
}

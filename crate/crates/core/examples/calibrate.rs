//! Parameter sweeps for the oscillator solvers.
//!
//! ```text
//! cargo run --release -p ising-traffic --example calibrate -- grid <g> <trials> [key=value ...]
//! cargo run --release -p ising-traffic --example calibrate -- maxcut <instances> <trials> [key=value ...]
//! ```
//!
//! `key=value` pairs override `[cim]` settings, e.g. `zeta=0.1 n_steps=5000`.

use std::time::Instant;

use ising_traffic::baselines::{dia_best, frank_wolfe, Annealer};
use ising_traffic::cim::{CimSolver, SolverParams};
use ising_traffic::compiler::{build_route_sets, two_step_solve, DiscretizationPlan};
use ising_traffic::config::RunConfig;
use ising_traffic::maxcut::{brute_force_max_cut, compare_solvers, generate, WeightLaw};
use ising_traffic::traffic::synthetic::grid;

fn params(overrides: &[String]) -> SolverParams {
    let mut text = String::from("[cim]\n");
    for kv in overrides {
        text.push_str(kv);
        text.push('\n');
    }
    RunConfig::with_overrides(&text).expect("valid overrides").cim
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match args.first().map(String::as_str) {
        Some("grid") => {
            let g: f64 = args[1].parse().unwrap();
            let trials: usize = args[2].parse().unwrap();
            let p = params(&args[3..]);
            let net = grid(5, 1.0, 25.0);
            let cfg = RunConfig::default();
            let fw = frank_wolfe(&net, cfg.tap.fw_max_iters).unwrap();
            let dia = dia_best(&net, g, cfg.tap.dia_trials, 0).unwrap();
            let plan = DiscretizationPlan::new(&net, g, 3).unwrap();
            let sets = build_route_sets(&net, &dia.best, 3, 10).unwrap();
            println!(
                "fw {:.6} (iters {}), dia {:.6}",
                fw.objective, fw.iterations, dia.best.objective
            );
            let sa = Annealer::new(cfg.anneal.clone());
            let t = Instant::now();
            let res = two_step_solve(&net, &plan, &sets, &sa, 20.min(trials), 0, None).unwrap();
            println!(
                "sa   step1 {:.6} step2 {:.6} feas {:.2} ({:.1?})",
                res.step1.best.true_objective,
                res.step2.best.true_objective,
                res.step2.feasibility_rate(),
                t.elapsed()
            );
            let solver = CimSolver::gfsnn(p).unwrap();
            let t = Instant::now();
            let res = two_step_solve(&net, &plan, &sets, &solver, trials, 0, None).unwrap();
            let best = res.best().0.best.true_objective;
            println!(
                "cim  step1 {:.6} step2 {:.6} feas {:.2}/{:.2} dev {:.4}% ({:.1?})",
                res.step1.best.true_objective,
                res.step2.best.true_objective,
                res.step1.feasibility_rate(),
                res.step2.feasibility_rate(),
                100.0 * (best - fw.objective) / fw.objective,
                t.elapsed()
            );
        }
        Some("diag") => {
            let g: f64 = args[1].parse().unwrap();
            let trials: u64 = args[2].parse().unwrap();
            let p = params(&args[3..]);
            let net = grid(5, 1.0, 25.0);
            let dia = dia_best(&net, g, 200, 0).unwrap();
            let plan = DiscretizationPlan::new(&net, g, 3).unwrap();
            let sets = build_route_sets(&net, &dia.best, 3, 10).unwrap();
            let fits = ising_traffic::compiler::step1_fits(&net, &plan, &sets).unwrap();
            let lambda = ising_traffic::compiler::choose_lambda(&net, &plan, &sets, &fits).unwrap();
            let c = ising_traffic::compiler::compile(&net, &plan, &sets, &fits, lambda).unwrap();
            println!(
                "lambda {lambda} maxJ {} maxfield {}",
                c.model().max_abs_coupling(),
                c.model().max_abs_field()
            );
            let solver = CimSolver::gfsnn(p).unwrap();
            for s in 0..trials {
                let r = solver.run_trial_with(c.model(), c.couplings(), s).unwrap();
                let bits = r.spins.to_bits();
                let mut hist = [0usize; 4];
                for i in 0..plan.n_groups() {
                    let k = c.group_vars(i).filter(|&v| bits[v]).count();
                    hist[k.min(3)] += 1;
                }
                let d = c.decode(&net, &r.spins).unwrap();
                println!(
                    "seed {s}: counts {hist:?} energy {:.3} true {:.3}",
                    r.energy, d.true_objective
                );
            }
        }
        Some("sweep") => {
            // sweep <g> <trials> <key=v1,v2,...> ... : cartesian product over the lists
            let g: f64 = args[1].parse().unwrap();
            let trials: usize = args[2].parse().unwrap();
            let axes: Vec<(String, Vec<String>)> = args[3..]
                .iter()
                .map(|kv| {
                    let (k, v) = kv.split_once('=').unwrap();
                    (k.to_string(), v.split(',').map(String::from).collect())
                })
                .collect();
            let net = grid(5, 1.0, 25.0);
            let fw = frank_wolfe(&net, 500).unwrap();
            let dia = dia_best(&net, g, 200, 0).unwrap();
            let plan = DiscretizationPlan::new(&net, g, 3).unwrap();
            let sets = build_route_sets(&net, &dia.best, 3, 10).unwrap();
            let fits = ising_traffic::compiler::step1_fits(&net, &plan, &sets).unwrap();
            let lambda = ising_traffic::compiler::choose_lambda(&net, &plan, &sets, &fits).unwrap();
            let c = ising_traffic::compiler::compile(&net, &plan, &sets, &fits, lambda).unwrap();
            println!("fw {:.4}", fw.objective);
            let total: usize = axes.iter().map(|a| a.1.len()).product();
            for idx in 0..total {
                let mut rest = idx;
                let mut kvs = Vec::new();
                for (k, vals) in &axes {
                    kvs.push(format!("{k}={}", vals[rest % vals.len()]));
                    rest /= vals.len();
                }
                let solver = CimSolver::gfsnn(params(&kvs)).unwrap();
                let t = Instant::now();
                let outs = ising_traffic::cim::run_trials(&solver, c.model(), c.couplings(), trials, 0);
                let (mut feas, mut best, mut sum) = (0, f64::INFINITY, 0.0);
                for o in outs.into_iter().flatten() {
                    let d = c.decode(&net, &o.spins).unwrap();
                    if d.feasible {
                        feas += 1;
                        best = best.min(d.true_objective);
                        sum += d.true_objective;
                    }
                }
                println!(
                    "{:40} feas {:3}/{trials} best {:9.3} mean {:9.3} ({:.1?})",
                    kvs.join(" "),
                    feas,
                    best,
                    sum / feas.max(1) as f64,
                    t.elapsed()
                );
            }
        }
        Some("maxcut") => {
            let instances: u64 = args[1].parse().unwrap();
            let trials: usize = args[2].parse().unwrap();
            let p = params(&args[3..]);
            let gf = CimSolver::gfsnn(p.clone()).unwrap();
            let snn = CimSolver::snn(SolverParams { zeta: 0.0, ..p }).unwrap();
            let t = Instant::now();
            for law in WeightLaw::ALL {
                let (mut a, mut b) = (0.0, 0.0);
                for k in 0..instances {
                    let g = generate(law, 18, 0.1, 1000 + k).unwrap();
                    let (_, best) = brute_force_max_cut(&g).unwrap();
                    let cmp = compare_solvers(&g, &gf, &snn, trials, 0, best).unwrap();
                    a += cmp.gfsnn.success_rate();
                    b += cmp.snn.success_rate();
                }
                let n = instances as f64;
                println!("{:5} gfsnn {:.4} snn {:.4}", law.name(), a / n, b / n);
            }
            println!("({:.1?})", t.elapsed());
        }
        _ => eprintln!("usage: calibrate grid <g> <trials> | maxcut <instances> <trials> [key=value ...]"),
    }
}

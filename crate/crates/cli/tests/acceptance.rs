//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so every line is printed. The
//! process fails when a criterion's outcome differs from `EXPECTED_FAILURES`:
//! a new failure, or a known failure that starts passing.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ising_traffic::baselines::{dia_best, frank_wolfe, simulated_annealing, AnnealSchedule, Annealer};
use ising_traffic::cim::{CimSolver, SolverParams, TrialSolver};
use ising_traffic::compiler::{
    build_route_sets, choose_lambda, compile, fit_quadratic, solve_compiled, step1_fits, two_step_solve,
    DiscretizationPlan, QuadraticFit,
};
use ising_traffic::config::RunConfig;
use ising_traffic::ising::{brute_force_ground_state, IsingModel, SpinConfig};
use ising_traffic::maxcut::{brute_force_max_cut, compare_solvers, generate, WeightLaw};
use ising_traffic::traffic::synthetic::city;
use ising_traffic::traffic::{parse_network, yen_k_shortest, Link, Node, OdDemand, Route, TrafficNetwork};

/// Criterion 3 asks for equal link times, but the equilibrium of that
/// instance is the corner (20, 0) where the times are 1.0614 and 2.
const EXPECTED_FAILURES: &[u32] = &[3];

// criterion 1
const EXACT_INSTANCES: u64 = 60;
const EXACT_MAX_BITS: usize = 13;
const EXACT_ABS_TOL: f64 = 1e-9;
const EXACT_BUDGET: Duration = Duration::from_secs(5);

// criterion 2
const FIT_REL_TOL: f64 = 0.005;
const FIT_AT_9: f64 = 9.004136;
const FIT_AT_9_TOL: f64 = 5e-4;
const FIT_BUDGET: Duration = Duration::from_secs(1);

// criterion 3
const FW_TIME_TOL: f64 = 1e-4;
const FW_FLOW_TOL: f64 = 1e-4;
const FW_BUDGET: Duration = Duration::from_secs(1);

// criterion 4
const GRID_TRIALS: usize = 1000;
const GRID_COARSE_TOL: f64 = 1e-3;
const GRID_FINE_TOL: f64 = 5e-4;

// criterion 5
const MC_INSTANCES: u64 = 30;
const MC_NODES: usize = 18;
const MC_DENSITY: f64 = 0.1;
const MC_TRIALS: usize = 200;
const MC_SEED_BASE: u64 = 1000;
const MC_MIN_LAWS: usize = 2;
const MC_BUDGET: Duration = Duration::from_secs(600);

// criterion 6
const SOUND_MODELS: u64 = 200;
const SOUND_TRIALS: usize = 5;
const SOUND_TOL: f64 = 1e-9;
const SA_SLOW_SWEEPS: usize = 5000;
const SA_HIT_SMALL: f64 = 0.95;
const SA_HIT_LARGE: f64 = 0.80;
const SOUND_BUDGET: Duration = Duration::from_secs(120);

// criterion 7
const REDUCTION_MODELS: u64 = 20;
const REDUCTION_BUDGET: Duration = Duration::from_secs(30);

// criterion 9
const CITY_SEED: u64 = 1;
const CITY_GROUP: f64 = 10.0;
const CITY_SPINS: usize = 481;
const CITY_TRIALS: usize = 100;
const CITY_BUDGET: Duration = Duration::from_secs(600);

type Check = fn() -> Outcome;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

// ---------------------------------------------------------------- 1

fn small_tap(seed: u64) -> (TrafficNetwork, DiscretizationPlan, Vec<Vec<Route>>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n = rng.gen_range(3..=5);
        let nodes: Vec<Node> = (0..n)
            .map(|i| Node {
                id: format!("v{i}"),
                coords: None,
            })
            .collect();
        let mut links = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && rng.gen_bool(0.6) {
                    links.push(Link {
                        id: format!("{i}-{j}"),
                        tail: i,
                        head: j,
                        t0: rng.gen_range(0.5..3.0),
                        capacity: rng.gen_range(2.0..20.0),
                        alpha: 0.15,
                        beta: rng.gen_range(1..=5),
                        initial_flow: if rng.gen_bool(0.5) {
                            rng.gen_range(0.0..10.0)
                        } else {
                            0.0
                        },
                    });
                }
            }
        }
        let ods = vec![
            OdDemand {
                origin: 0,
                destination: n - 1,
                demand: rng.gen_range(1.0..6.0),
            },
            OdDemand {
                origin: 1,
                destination: n - 2,
                demand: rng.gen_range(1.0..6.0),
            },
        ];
        let Ok(net) = TrafficNetwork::new(nodes, links, ods) else {
            continue;
        };
        let free = net.free_flow_times();
        let Ok(sets) = net
            .od_pairs()
            .iter()
            .map(|od| yen_k_shortest(&net, &free, od.origin, od.destination, 3))
            .collect::<Result<Vec<_>, _>>()
        else {
            continue;
        };
        let g = net.total_demand() / rng.gen_range(2.0..4.5);
        let plan = DiscretizationPlan::new(&net, g, 3).unwrap();
        let bits: usize = plan.groups.iter().map(|gr| sets[gr.od].len()).sum();
        if bits <= EXACT_MAX_BITS {
            return (net, plan, sets);
        }
    }
}

/// Fitted quadratic on every link some route uses, exact integrated cost
/// elsewhere, plus `λ Σ_groups (Σ_j q_ij − 1)²`.
fn direct_objective(
    net: &TrafficNetwork,
    plan: &DiscretizationPlan,
    sets: &[Vec<Route>],
    fits: &[Option<QuadraticFit>],
    lambda: f64,
    bits: &[bool],
) -> f64 {
    let mut flow: Vec<f64> = net.links().iter().map(|l| l.initial_flow).collect();
    let mut used = vec![false; flow.len()];
    let mut penalty = 0.0;
    let mut v = 0;
    for gr in &plan.groups {
        let mut chosen = 0.0;
        for r in &sets[gr.od] {
            for &l in r.links() {
                used[l] = true;
                if bits[v] {
                    flow[l] += gr.vehicles;
                }
            }
            if bits[v] {
                chosen += 1.0;
            }
            v += 1;
        }
        penalty += lambda * (chosen - 1.0) * (chosen - 1.0);
    }
    let mut total = penalty;
    for (l, link) in net.links().iter().enumerate() {
        let f = flow[l];
        total += if used[l] {
            let q = fits[l].as_ref().expect("used link has a fit");
            link.t0 * (q.gamma1 * f * f + q.gamma2 * f + q.gamma3)
        } else {
            let c = link.alpha / ((link.beta as f64 + 1.0) * link.capacity.powi(link.beta as i32));
            link.t0 * (f + c * f.powi(link.beta as i32 + 1))
        };
    }
    total
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut configs = 0usize;
    let mut largest = 0;
    for seed in 0..EXACT_INSTANCES {
        let (net, plan, sets) = small_tap(seed);
        let fits = step1_fits(&net, &plan, &sets).unwrap();
        let lambda = choose_lambda(&net, &plan, &sets, &fits).unwrap();
        let c = compile(&net, &plan, &sets, &fits, lambda).unwrap();
        let n = c.n_spins();
        largest = largest.max(n);
        let aux = c
            .model()
            .aux_index()
            .expect("compiled models carry an auxiliary spin");
        for mask in 0u32..1 << n {
            let spins: Vec<i8> = (0..n).map(|i| if mask >> i & 1 == 1 { 1 } else { -1 }).collect();
            // q = (σ_i σ_aux + 1) / 2
            let bits: Vec<bool> = (0..c.n_vars()).map(|i| spins[i] == spins[aux]).collect();
            let e = c.model().energy(&SpinConfig::new(spins).unwrap()).unwrap();
            let direct = direct_objective(&net, &plan, &sets, &fits, lambda, &bits);
            worst = worst.max((e - direct).abs());
            configs += 1;
        }
    }
    let took = start.elapsed();
    outcome(
        worst < EXACT_ABS_TOL && took < EXACT_BUDGET,
        format!(
            "{EXACT_INSTANCES} instances up to {largest} spins, {configs} configurations, max |E - objective| = {worst:.3e} (< {EXACT_ABS_TOL:e}), {}",
            secs(took)
        ),
    )
}

// ---------------------------------------------------------------- 2

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let net = parse_network(&fs::read_to_string(fixture("grid5x5.net")).unwrap()).unwrap();
    let link = &net.links()[net.link("1-2").unwrap()];
    let fit = fit_quadratic(link, 8.0, 10.0).unwrap();
    let target = |f: f64| f + 3.0 / (100.0 * 25f64.powi(4)) * f.powi(5);
    let worst = (0..201)
        .map(|k| 8.0 + 2.0 * k as f64 / 200.0)
        .map(|f| (fit.eval(f) - target(f)).abs() / target(f))
        .fold(0.0f64, f64::max);
    let at9 = (fit.eval(9.0) - FIT_AT_9).abs() / FIT_AT_9;
    let took = start.elapsed();
    outcome(
        worst <= FIT_REL_TOL && at9 < FIT_AT_9_TOL && took < FIT_BUDGET,
        format!(
            "max rel error {worst:.3e} (<= {FIT_REL_TOL}), q(9) = {:.6} off {FIT_AT_9} by {at9:.2e} (< {FIT_AT_9_TOL}), {}",
            fit.eval(9.0),
            secs(took)
        ),
    )
}

// ---------------------------------------------------------------- 3

fn bpr(t0: f64, f: f64) -> f64 {
    t0 * (1.0 + 0.15 * (f / 25.0).powi(4))
}

/// Split of 20 vehicles over two links with equal times, or the corner
/// when one link is faster even carrying everything.
fn two_link_oracle() -> (f64, f64) {
    let gap = |f1: f64| bpr(1.0, f1) - bpr(2.0, 20.0 - f1);
    if gap(20.0) <= 0.0 {
        return (20.0, 0.0);
    }
    if gap(0.0) >= 0.0 {
        return (0.0, 20.0);
    }
    let (mut lo, mut hi) = (0.0, 20.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if gap(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let f1 = 0.5 * (lo + hi);
    (f1, 20.0 - f1)
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let text = "NODE o\nNODE d\nLINK fast o d 1 25\nLINK slow o d 2 25\nOD o d 20\n";
    let net = parse_network(text).unwrap();
    let fw = frank_wolfe(&net, 500).unwrap();
    let (f1, f2) = (fw.link_flows[0], fw.link_flows[1]);
    let (o1, o2) = two_link_oracle();
    let dt = (bpr(1.0, f1) - bpr(2.0, f2)).abs();
    let df = (f1 - o1).abs().max((f2 - o2).abs());
    let took = start.elapsed();
    outcome(
        dt < FW_TIME_TOL && df < FW_FLOW_TOL && took < FW_BUDGET,
        format!(
            "flows ({f1:.6}, {f2:.6}) vs oracle ({o1:.6}, {o2:.6}): diff {df:.1e} (< {FW_FLOW_TOL:e}); times {:.6} vs {:.6}: diff {dt:.4} (< {FW_TIME_TOL:e}), {}",
            bpr(1.0, f1),
            bpr(2.0, f2),
            secs(took)
        ),
    )
}

// ---------------------------------------------------------------- 4

fn grid_objective(net: &TrafficNetwork, cfg: &RunConfig, g: f64) -> (usize, f64, f64) {
    let tap = &cfg.tap;
    let plan = DiscretizationPlan::new(net, g, tap.routes_per_group).unwrap();
    let dia = dia_best(net, g, tap.dia_trials, cfg.run.seed).unwrap().best;
    let sets = build_route_sets(net, &dia, tap.routes_per_group, tap.yen_k).unwrap();
    let fits = step1_fits(net, &plan, &sets).unwrap();
    let lambda = choose_lambda(net, &plan, &sets, &fits).unwrap();
    let c = compile(net, &plan, &sets, &fits, lambda).unwrap();
    let solver = CimSolver::gfsnn(cfg.cim.clone()).unwrap();
    let sol = solve_compiled(net, &c, &solver, GRID_TRIALS, cfg.run.seed).unwrap();
    (c.n_spins(), sol.best.true_objective, sol.feasibility_rate())
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let net = parse_network(&fs::read_to_string(fixture("grid5x5.net")).unwrap()).unwrap();
    let shape_ok = net.nodes().len() == 25
        && net.links().len() == 80
        && net.od_pairs().len() == 15
        && net.od_pairs().iter().all(|od| od.demand == 5.0)
        && net.links().iter().all(|l| l.initial_flow == 0.0);
    let cfg = RunConfig::default();
    let fw = frank_wolfe(&net, cfg.tap.fw_max_iters).unwrap().objective;
    let (n1, obj1, feas1) = grid_objective(&net, &cfg, 1.0);
    let (n2, obj2, feas2) = grid_objective(&net, &cfg, 0.1);
    let (d1, d2) = ((obj1 - fw) / fw, (obj2 - fw) / fw);
    outcome(
        shape_ok && n1 == 226 && n2 == 2251 && d1.abs() < GRID_COARSE_TOL && d2.abs() < GRID_FINE_TOL,
        format!(
            "FW {fw:.4}; g=1: {n1} spins, best {obj1:.4}, deviation {:.4}% (< {}%), feasible {:.3}; g=0.1: {n2} spins, best {obj2:.4}, deviation {:.4}% (< {}%), feasible {:.3}; {}",
            100.0 * d1,
            100.0 * GRID_COARSE_TOL,
            feas1,
            100.0 * d2,
            100.0 * GRID_FINE_TOL,
            feas2,
            secs(start.elapsed())
        ),
    )
}

// ---------------------------------------------------------------- 5

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let cfg = RunConfig::default();
    let gfsnn = CimSolver::gfsnn(cfg.cim.clone()).unwrap();
    let snn = CimSolver::snn(SolverParams {
        zeta: 0.0,
        ..cfg.cim.clone()
    })
    .unwrap();
    let mut better = 0;
    let mut detail = String::new();
    for law in WeightLaw::ALL {
        let (mut gf, mut sn) = (0.0, 0.0);
        for k in 0..MC_INSTANCES {
            let g = generate(law, MC_NODES, MC_DENSITY, MC_SEED_BASE + k).unwrap();
            let (_, best) = brute_force_max_cut(&g).unwrap();
            let c = compare_solvers(&g, &gfsnn, &snn, MC_TRIALS, cfg.run.seed, best).unwrap();
            gf += c.gfsnn.success_rate();
            sn += c.snn.success_rate();
        }
        let (gf, sn) = (gf / MC_INSTANCES as f64, sn / MC_INSTANCES as f64);
        if gf >= sn {
            better += 1;
        }
        let _ = write!(detail, "{} gfsnn {gf:.4} vs snn {sn:.4}; ", law.name());
    }
    let took = start.elapsed();
    outcome(
        better >= MC_MIN_LAWS && took < MC_BUDGET,
        format!(
            "{detail}gfsnn >= snn on {better}/3 laws (need {MC_MIN_LAWS}), {}",
            secs(took)
        ),
    )
}

// ---------------------------------------------------------------- 6

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let cfg = RunConfig::default();
    let solvers: Vec<Box<dyn TrialSolver>> = vec![
        Box::new(CimSolver::gfsnn(cfg.cim.clone()).unwrap()),
        Box::new(
            CimSolver::snn(SolverParams {
                zeta: 0.0,
                ..cfg.cim.clone()
            })
            .unwrap(),
        ),
        Box::new(Annealer::new(cfg.anneal.clone())),
    ];
    let mut violations = 0;
    let (mut hit_small, mut hit_large, mut n_small, mut n_large) = (0, 0, 0, 0);
    for k in 0..SOUND_MODELS {
        let n = if k % 2 == 0 { 2 } else { 12 };
        let model = IsingModel::random(n, 5000 + k).unwrap();
        let (_, ground) = brute_force_ground_state(&model).unwrap();
        for s in &solvers {
            for t in 0..SOUND_TRIALS as u64 {
                let e = s.solve(&model, &model, t).unwrap().energy;
                if e < ground - SOUND_TOL {
                    violations += 1;
                }
            }
        }
        let field = model.max_abs_field().max(1.0);
        let slow = AnnealSchedule::new(field, 1e-3 * field, SA_SLOW_SWEEPS, k).unwrap();
        let res = simulated_annealing(&model, &slow);
        if res.energy < ground - SOUND_TOL {
            violations += 1;
        }
        let reached = res.energy <= ground + SOUND_TOL;
        if n == 2 {
            n_small += 1;
            hit_small += usize::from(reached);
        } else {
            n_large += 1;
            hit_large += usize::from(reached);
        }
    }
    let (r_small, r_large) = (
        hit_small as f64 / n_small as f64,
        hit_large as f64 / n_large as f64,
    );
    let took = start.elapsed();
    outcome(
        violations == 0 && r_small >= SA_HIT_SMALL && r_large >= SA_HIT_LARGE && took < SOUND_BUDGET,
        format!(
            "{SOUND_MODELS} models, {violations} energies below ground; slow SA ground-state rate {r_small:.3} on 2 spins (>= {SA_HIT_SMALL}), {r_large:.3} on 12 spins (>= {SA_HIT_LARGE}), {}",
            secs(took)
        ),
    )
}

// ---------------------------------------------------------------- 7

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let params = SolverParams {
        zeta: 0.0,
        ..RunConfig::default().cim
    };
    let mut mismatched = 0;
    let mut samples = 0;
    for k in 0..REDUCTION_MODELS {
        let model = IsingModel::random(4 + k as usize, 700 + k).unwrap();
        let gf = CimSolver::gfsnn(params.clone()).unwrap().with_trajectory(1);
        let snn = CimSolver::snn(params.clone()).unwrap().with_trajectory(1);
        let a = gf.run_trial(&model, 31 * k).unwrap();
        let b = snn.run_trial(&model, 31 * k).unwrap();
        let (ta, tb) = (a.trajectory.unwrap(), b.trajectory.unwrap());
        samples += ta.samples.len();
        if ta.samples.len() != tb.samples.len()
            || ta
                .samples
                .iter()
                .zip(&tb.samples)
                .any(|(p, q)| p.x != q.x || p.k != q.k)
            || a.spins != b.spins
        {
            mismatched += 1;
        }
    }
    let took = start.elapsed();
    outcome(
        mismatched == 0 && took < REDUCTION_BUDGET,
        format!(
            "{REDUCTION_MODELS} models, {samples} sampled states compared exactly, {mismatched} mismatching runs, {}",
            secs(took)
        ),
    )
}

// ---------------------------------------------------------------- 8

fn cli(args: &[&str], out: &Path) -> (i32, Vec<u8>) {
    let o = Command::new(env!("CARGO_BIN_EXE_ising-traffic"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("run the CLI");
    // gen echoes the paths it wrote
    let stdout = String::from_utf8_lossy(&o.stdout).replace(out.to_str().unwrap(), "<out>");
    (o.status.code().unwrap_or(-1), stdout.into_bytes())
}

fn dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("quick.toml");
    fs::write(&cfg, "[tap]\ndia_trials = 10\n").unwrap();
    let cfg = cfg.to_str().unwrap().to_string();
    let grid = fixture("grid5x5.net");
    let grid = grid.to_str().unwrap();
    let commands: Vec<Vec<&str>> = vec![
        vec!["--seed", "3", "gen", "grid", "--background"],
        vec!["--seed", "3", "gen", "city"],
        vec![
            "--seed",
            "3",
            "gen",
            "maxcut",
            "--nodes",
            "12",
            "--with-reference",
        ],
        vec!["--seed", "3", "gen", "model", "--spins", "8"],
        vec![
            "--trials", "5", "--seed", "7", "maxcut", "--law", "w01", "--nodes", "12", "--count", "2",
            "--oracle",
        ],
        vec![
            "--config",
            &cfg,
            "--trials",
            "4",
            "--seed",
            "7",
            "tap",
            grid,
            "--two-step",
            "--dump-model",
        ],
        vec!["fit", grid, "--link", "1-2", "--lo", "8", "--hi", "10"],
        vec![
            "--trials",
            "5",
            "--seed",
            "7",
            "oracle",
            "--spins",
            "9",
            "--model-seed",
            "4",
        ],
    ];
    let mut differing = Vec::new();
    for (k, args) in commands.iter().enumerate() {
        let runs: Vec<_> = (0..2)
            .map(|r| {
                let out = tmp.path().join(format!("c{k}_{r}"));
                let (code, stdout) = cli(args, &out);
                (code, stdout, dir_bytes(&out))
            })
            .collect();
        if runs[0].0 != 0 || runs[0] != runs[1] {
            differing.push(format!("{} (exit {})", args.join(" "), runs[0].0));
        }
    }
    outcome(
        differing.is_empty(),
        format!(
            "{} commands run twice; differing or failing: {}; {}",
            commands.len(),
            if differing.is_empty() {
                "none".to_string()
            } else {
                differing.join(", ")
            },
            secs(start.elapsed())
        ),
    )
}

// ---------------------------------------------------------------- 9

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let net = city(CITY_SEED);
    let cfg = RunConfig::default();
    let shape_ok = net.nodes().len() == 89
        && net.links().len() == 408
        && net.od_pairs().len() == 20
        && net.total_demand() == 1600.0;
    let plan = DiscretizationPlan::new(&net, CITY_GROUP, cfg.tap.routes_per_group).unwrap();
    let dia = dia_best(&net, CITY_GROUP, cfg.tap.dia_trials, cfg.run.seed)
        .unwrap()
        .best;
    let sets = build_route_sets(&net, &dia, cfg.tap.routes_per_group, cfg.tap.yen_k).unwrap();
    let solver = CimSolver::gfsnn(cfg.cim.clone()).unwrap();
    let res = two_step_solve(
        &net,
        &plan,
        &sets,
        &solver,
        CITY_TRIALS,
        cfg.run.seed,
        cfg.tap.lambda,
    );
    let took = start.elapsed();
    match res {
        Ok(r) => {
            let spins = r.compiled1.n_spins();
            let diverged = r.step1.diverged + r.step2.diverged;
            outcome(
                shape_ok && spins == CITY_SPINS && diverged == 0 && took < CITY_BUDGET,
                format!(
                    "89 nodes / 408 links / 20 OD / 1600 vehicles: {shape_ok}; {spins} spins (== {CITY_SPINS}); step 1 {:.2}, step 2 {:.2}, {diverged} diverged of {}; {} (< {})",
                    r.step1.best.true_objective,
                    r.step2.best.true_objective,
                    2 * CITY_TRIALS,
                    secs(took),
                    secs(CITY_BUDGET)
                ),
            )
        }
        Err(e) => outcome(false, format!("two-step solve failed: {e}")),
    }
}

fn main() {
    let criteria: [(u32, &str, Check); 9] = [
        (1, "encoding exactness", criterion_1),
        (2, "quadratic-fit bound", criterion_2),
        (3, "FW two-link equilibrium", criterion_3),
        (4, "grid-fixture consistency", criterion_4),
        (5, "Max-Cut feedback direction", criterion_5),
        (6, "oracle soundness", criterion_6),
        (7, "zero-feedback reduction", criterion_7),
        (8, "CLI determinism", criterion_8),
        (9, "city-scale capacity", criterion_9),
    ];
    // `cargo test --test acceptance -- 4 8` runs a subset
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut surprises = Vec::new();
    for (id, name, check) in criteria {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let o = check();
        let expected_fail = EXPECTED_FAILURES.contains(&id);
        let tag = match (o.pass, expected_fail) {
            (true, false) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
            (true, true) => "PASS (expected to fail)",
        };
        println!("criterion {id} [{name}]: {tag}: {}", o.detail);
        if o.pass == expected_fail {
            surprises.push(id);
        }
    }
    if !surprises.is_empty() {
        eprintln!("unexpected outcome for criteria {surprises:?}");
        std::process::exit(1);
    }
}

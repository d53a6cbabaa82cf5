use std::fmt::Write as _;

use super::all_or_nothing;
use crate::error::Result;
use crate::traffic::{beckmann_objective, Route, TrafficNetwork};

const GAP_TOL: f64 = 1e-8;
const LINE_SEARCH_BRACKET: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct FwResult {
    /// Total link flows, background included.
    pub link_flows: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
    /// Relative gap measured at the start of each iteration.
    pub relative_gap_history: Vec<f64>,
    /// Objective after the initial load and after each iteration.
    pub objective_history: Vec<f64>,
    /// Route flows per OD pair, in order of first use.
    pub path_flows: Vec<Vec<(Route, f64)>>,
}

impl FwResult {
    /// `iter,objective,relative_gap`; row `k` holds the gap measured before
    /// iteration `k` and the objective after it.
    pub fn convergence_csv(&self) -> String {
        let mut s = String::from("iter,objective,relative_gap\n");
        for (k, gap) in self.relative_gap_history.iter().enumerate() {
            let obj = self.objective_history.get(k + 1).unwrap_or(&self.objective);
            writeln!(s, "{},{obj},{gap}", k + 1).unwrap();
        }
        s
    }
}

fn total(background: &[f64], x: &[f64], d: &[f64], step: f64) -> Vec<f64> {
    background
        .iter()
        .zip(x)
        .zip(d)
        .map(|((b, x), d)| b + x + step * d)
        .collect()
}

fn load(net: &TrafficNetwork, routes: &[Route]) -> Vec<f64> {
    let mut y = vec![0.0; net.links().len()];
    for (od, r) in net.od_pairs().iter().zip(routes) {
        for &l in r.links() {
            y[l] += od.demand;
        }
    }
    y
}

fn add_path_flow(paths: &mut Vec<(Route, f64)>, route: &Route, amount: f64) {
    match paths.iter_mut().find(|(r, _)| r == route) {
        Some((_, f)) => *f += amount,
        None => paths.push((route.clone(), amount)),
    }
}

/// User equilibrium by Frank–Wolfe with exact line search.
///
/// Link `initial_flow` values are a fixed background; only OD demand is
/// assigned. Stops after `max_iters` iterations or once the relative gap
/// drops below 1e-8.
pub fn frank_wolfe(net: &TrafficNetwork, max_iters: usize) -> Result<FwResult> {
    let background = net.initial_flows();
    let zeros = vec![0.0; background.len()];

    let first = all_or_nothing(net, &net.link_times(&background))?;
    let mut x = load(net, &first);
    let mut path_flows: Vec<Vec<(Route, f64)>> = net
        .od_pairs()
        .iter()
        .zip(&first)
        .map(|(od, r)| vec![(r.clone(), od.demand)])
        .collect();
    let mut objective = beckmann_objective(net, &total(&background, &x, &zeros, 0.0))?;
    let mut objective_history = vec![objective];
    let mut gaps = Vec::new();
    let mut best_lower = f64::NEG_INFINITY;
    let mut iterations = 0;

    while iterations < max_iters {
        let flows = total(&background, &x, &zeros, 0.0);
        let times = net.link_times(&flows);
        let aon = all_or_nothing(net, &times)?;
        let y = load(net, &aon);
        let d: Vec<f64> = y.iter().zip(&x).map(|(y, x)| y - x).collect();
        let slope: f64 = times.iter().zip(&d).map(|(t, d)| t * d).sum();
        best_lower = best_lower.max(objective + slope);
        let gap = (objective - best_lower) / objective.abs();
        gaps.push(gap);
        if gap < GAP_TOL || slope >= 0.0 {
            break;
        }
        iterations += 1;

        let derivative = |step: f64| -> f64 {
            let f = total(&background, &x, &d, step);
            net.link_times(&f).iter().zip(&d).map(|(t, d)| t * d).sum()
        };
        let step = if derivative(1.0) <= 0.0 {
            1.0
        } else {
            let (mut lo, mut hi) = (0.0, 1.0);
            while hi - lo > LINE_SEARCH_BRACKET {
                let mid = 0.5 * (lo + hi);
                if derivative(mid) <= 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        };

        let next: Vec<f64> = x.iter().zip(&d).map(|(x, d)| (x + step * d).max(0.0)).collect();
        let next_obj = beckmann_objective(net, &total(&background, &next, &zeros, 0.0))?;
        if next_obj > objective {
            // rounding noise at convergence
            break;
        }
        x = next;
        objective = next_obj;
        objective_history.push(objective);
        for ((paths, od), r) in path_flows.iter_mut().zip(net.od_pairs()).zip(&aon) {
            for (_, f) in paths.iter_mut() {
                *f *= 1.0 - step;
            }
            add_path_flow(paths, r, step * od.demand);
        }
    }

    Ok(FwResult {
        link_flows: total(&background, &x, &zeros, 0.0),
        objective,
        iterations,
        relative_gap_history: gaps,
        objective_history,
        path_flows,
    })
}

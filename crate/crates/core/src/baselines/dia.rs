use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::traffic::{beckmann_objective, shortest_path, split_demand, Route, TrafficNetwork};

#[derive(Clone, Debug)]
pub struct DiaResult {
    /// Total link flows, background included.
    pub link_flows: Vec<f64>,
    /// `(od index, vehicles)` per group, OD pairs in order.
    pub groups: Vec<(usize, f64)>,
    /// Route taken by each group.
    pub routes: Vec<Route>,
    pub objective: f64,
    pub seed: u64,
}

impl DiaResult {
    /// Routes taken by the groups of one OD pair.
    pub fn routes_for(&self, od: usize) -> Vec<Route> {
        self.groups
            .iter()
            .zip(&self.routes)
            .filter(|((o, _), _)| *o == od)
            .map(|(_, r)| r.clone())
            .collect()
    }

    /// Demand placed on the network, background excluded.
    pub fn assigned(&self) -> f64 {
        self.groups.iter().map(|(_, v)| v).sum()
    }
}

/// Incremental assignment: groups of `group_size` vehicles are loaded one at
/// a time, in an order shuffled by `order_seed`, each onto the shortest path
/// under the current congested times.
pub fn dia(net: &TrafficNetwork, group_size: f64, order_seed: u64) -> Result<DiaResult> {
    if !(group_size > 0.0 && group_size.is_finite()) {
        return Err(Error::input("group size must be positive"));
    }
    let groups: Vec<(usize, f64)> = net
        .od_pairs()
        .iter()
        .enumerate()
        .flat_map(|(k, od)| {
            split_demand(od.demand, group_size)
                .into_iter()
                .map(move |v| (k, v))
        })
        .collect();
    let mut order: Vec<usize> = (0..groups.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(order_seed));

    let mut flows = net.initial_flows();
    let mut routes: Vec<Option<Route>> = vec![None; groups.len()];
    for g in order {
        let (k, vehicles) = groups[g];
        let od = &net.od_pairs()[k];
        let route = shortest_path(net, &net.link_times(&flows), od.origin, od.destination)?;
        for &l in route.links() {
            flows[l] += vehicles;
        }
        routes[g] = Some(route);
    }
    Ok(DiaResult {
        objective: beckmann_objective(net, &flows)?,
        link_flows: flows,
        groups,
        routes: routes
            .into_iter()
            .map(|r| r.expect("every group assigned"))
            .collect(),
        seed: order_seed,
    })
}

#[derive(Clone, Debug)]
pub struct DiaBatch {
    /// Lowest objective; the lowest seed wins ties.
    pub best: DiaResult,
    /// Objective per seed, in seed order.
    pub objectives: Vec<f64>,
}

/// Runs [`dia`] for seeds `base_seed..base_seed + n_trials` in parallel.
pub fn dia_best(net: &TrafficNetwork, group_size: f64, n_trials: usize, base_seed: u64) -> Result<DiaBatch> {
    if n_trials == 0 {
        return Err(Error::input("need at least one trial"));
    }
    let runs: Vec<DiaResult> = (0..n_trials as u64)
        .into_par_iter()
        .map(|i| dia(net, group_size, base_seed.wrapping_add(i)))
        .collect::<Result<_>>()?;
    let objectives = runs.iter().map(|r| r.objective).collect();
    let best = runs
        .into_iter()
        .reduce(|a, b| if b.objective < a.objective { b } else { a })
        .expect("non-empty");
    Ok(DiaBatch { best, objectives })
}

//! Traffic assignment as a QUBO / Ising model over route-choice bits.
//!
//! Demand is cut into vehicle groups; each group picks one of `M` routes.
//! Bit `q_ij` selects route `j` for group `i`, link flows are affine in the
//! bits, and the quintic link cost is replaced by a fitted quadratic so the
//! whole objective plus a one-hot penalty is quadratic.

mod encode;
mod fit;
mod solve;

pub use encode::{
    choose_lambda, compile, feasible_ranges, step1_fits, step2_fits, CompiledTap, Decoded, FactoredCouplings,
    LinkFits,
};
pub use fit::{fit_quadratic, fit_shape, fit_shared, QuadraticFit, FIT_SAMPLES};
pub use solve::{solve_compiled, two_step_solve, TapSolution, TwoStepResult};

use crate::baselines::DiaResult;
use crate::error::{Error, Result};
use crate::traffic::{generate_route_set, split_demand, Route, TrafficNetwork};

#[derive(Clone, Debug, PartialEq)]
pub struct Group {
    pub od: usize,
    /// Position within its OD pair.
    pub index: usize,
    pub vehicles: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiscretizationPlan {
    pub group_size: f64,
    pub groups: Vec<Group>,
    pub routes_per_group: usize,
}

impl DiscretizationPlan {
    pub fn new(net: &TrafficNetwork, group_size: f64, routes_per_group: usize) -> Result<Self> {
        if !(group_size > 0.0 && group_size.is_finite()) {
            return Err(Error::input("group size must be positive"));
        }
        if routes_per_group == 0 {
            return Err(Error::input("need at least one route per group"));
        }
        let groups = net
            .od_pairs()
            .iter()
            .enumerate()
            .flat_map(|(od, p)| {
                split_demand(p.demand, group_size)
                    .into_iter()
                    .enumerate()
                    .map(move |(index, vehicles)| Group { od, index, vehicles })
            })
            .collect();
        Ok(DiscretizationPlan {
            group_size,
            groups,
            routes_per_group,
        })
    }

    pub fn n_groups(&self) -> usize {
        self.groups.len()
    }

    /// Groups smaller than the nominal size (a demand remainder).
    pub fn partial_groups(&self) -> Vec<usize> {
        self.groups
            .iter()
            .enumerate()
            .filter(|(_, g)| g.vehicles < self.group_size * (1.0 - 1e-9))
            .map(|(i, _)| i)
            .collect()
    }

    /// `N·M + 1` when every OD has `M` routes.
    pub fn nominal_spins(&self) -> usize {
        self.groups.len() * self.routes_per_group + 1
    }
}

/// Route set per OD pair, shared by all of its groups. R1 comes from the
/// incremental-assignment solution.
pub fn build_route_sets(
    net: &TrafficNetwork,
    dia: &DiaResult,
    routes_per_group: usize,
    yen_k: usize,
) -> Result<Vec<Vec<Route>>> {
    (0..net.od_pairs().len())
        .map(|od| generate_route_set(net, od, &dia.routes_for(od), routes_per_group, yen_k))
        .collect()
}

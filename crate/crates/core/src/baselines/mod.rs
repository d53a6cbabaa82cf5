//! Reference solvers for traffic assignment and Ising minimization.

mod anneal;
mod dia;
mod fw;

pub use anneal::{anneal_trace, simulated_annealing, AnnealSchedule, Annealer};
pub use dia::{dia, dia_best, DiaBatch, DiaResult};
pub use fw::{frank_wolfe, FwResult};

use crate::error::Result;
use crate::traffic::{shortest_path, Route, TrafficNetwork};

/// Shortest route per OD pair under `times`.
fn all_or_nothing(net: &TrafficNetwork, times: &[f64]) -> Result<Vec<Route>> {
    net.od_pairs()
        .iter()
        .map(|od| shortest_path(net, times, od.origin, od.destination))
        .collect()
}

//! Road networks with BPR link costs.

mod io;
mod paths;
mod routes;
pub mod synthetic;

pub use io::{flow_csv, heatmap_csv, parse_network, write_network};
pub use paths::{shortest_path, shortest_path_avoiding, yen_k_shortest};
pub use routes::{generate_route_set, most_used_route};

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};

pub const DEFAULT_ALPHA: f64 = 0.15;
pub const DEFAULT_BETA: u32 = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub id: String,
    pub coords: Option<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Link {
    pub id: String,
    pub tail: usize,
    pub head: usize,
    /// Free-flow travel time.
    pub t0: f64,
    pub capacity: f64,
    pub alpha: f64,
    pub beta: u32,
    /// Background flow that is present before any assignment.
    pub initial_flow: f64,
}

impl Link {
    /// BPR travel time `t0 · (1 + α (f / cap)^β)`, without input checks.
    pub fn time(&self, flow: f64) -> f64 {
        self.t0 * (1.0 + self.alpha * (flow / self.capacity).powi(self.beta as i32))
    }

    /// Coefficient of `f^(β+1)` in the integrated cost per unit `t0`.
    pub fn quintic_coefficient(&self) -> f64 {
        self.alpha / ((self.beta as f64 + 1.0) * self.capacity.powi(self.beta as i32))
    }

    /// `∫₀^f t(x) dx = t0 · (f + α/((β+1) cap^β) · f^(β+1))`.
    pub fn integrated_cost(&self, flow: f64) -> f64 {
        self.t0 * (flow + self.quintic_coefficient() * flow.powi(self.beta as i32 + 1))
    }

    /// The cost shape independent of `t0`.
    pub fn shape(&self) -> CostShape {
        CostShape {
            capacity: self.capacity,
            alpha: self.alpha,
            beta: self.beta,
        }
    }
}

/// Integrated BPR cost per unit free-flow time: `f + α/((β+1) cap^β) f^(β+1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostShape {
    pub capacity: f64,
    pub alpha: f64,
    pub beta: u32,
}

impl CostShape {
    pub fn eval(&self, f: f64) -> f64 {
        let c = self.alpha / ((self.beta as f64 + 1.0) * self.capacity.powi(self.beta as i32));
        f + c * f.powi(self.beta as i32 + 1)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OdDemand {
    pub origin: usize,
    pub destination: usize,
    pub demand: f64,
}

/// A loopless directed path, stored as link indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Route {
    links: Vec<usize>,
}

impl Route {
    /// Checks connectivity and looplessness against `net`.
    pub fn new(net: &TrafficNetwork, links: Vec<usize>) -> Result<Self> {
        if links.is_empty() {
            return Err(Error::input("a route needs at least one link"));
        }
        if let Some(&bad) = links.iter().find(|&&l| l >= net.links.len()) {
            return Err(Error::input(format!("link index {bad} out of range")));
        }
        for w in links.windows(2) {
            if net.links[w[0]].head != net.links[w[1]].tail {
                return Err(Error::input(format!(
                    "links {} and {} are not consecutive",
                    net.links[w[0]].id, net.links[w[1]].id
                )));
            }
        }
        let route = Route { links };
        let nodes = route.nodes(net);
        let unique: HashSet<_> = nodes.iter().collect();
        if unique.len() != nodes.len() {
            return Err(Error::input("route repeats a node"));
        }
        Ok(route)
    }

    pub(crate) fn from_links_unchecked(links: Vec<usize>) -> Self {
        Route { links }
    }

    pub fn links(&self) -> &[usize] {
        &self.links
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn origin(&self, net: &TrafficNetwork) -> usize {
        net.links[self.links[0]].tail
    }

    pub fn destination(&self, net: &TrafficNetwork) -> usize {
        net.links[*self.links.last().expect("non-empty route")].head
    }

    /// Node indices visited, origin first.
    pub fn nodes(&self, net: &TrafficNetwork) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.links.len() + 1);
        out.push(net.links[self.links[0]].tail);
        out.extend(self.links.iter().map(|&l| net.links[l].head));
        out
    }

    pub fn cost(&self, link_costs: &[f64]) -> f64 {
        self.links.iter().map(|&l| link_costs[l]).sum()
    }

    pub fn contains(&self, link: usize) -> bool {
        self.links.contains(&link)
    }

    /// Number of this route's links that also lie on `other`.
    pub fn overlap(&self, other: &Route) -> usize {
        self.links.iter().filter(|l| other.links.contains(l)).count()
    }

    /// Node ids joined by `->`.
    pub fn describe(&self, net: &TrafficNetwork) -> String {
        self.nodes(net)
            .iter()
            .map(|&n| net.nodes[n].id.as_str())
            .collect::<Vec<_>>()
            .join("->")
    }
}

#[derive(Clone, Debug)]
pub struct TrafficNetwork {
    nodes: Vec<Node>,
    links: Vec<Link>,
    od_pairs: Vec<OdDemand>,
    node_index: HashMap<String, usize>,
    link_index: HashMap<String, usize>,
    /// Outgoing link indices per node, ordered by (head, link index).
    out_links: Vec<Vec<usize>>,
    in_links: Vec<Vec<usize>>,
}

impl TrafficNetwork {
    pub fn new(nodes: Vec<Node>, links: Vec<Link>, od_pairs: Vec<OdDemand>) -> Result<Self> {
        let mut node_index = HashMap::new();
        for (i, n) in nodes.iter().enumerate() {
            if node_index.insert(n.id.clone(), i).is_some() {
                return Err(Error::input(format!("duplicate node id `{}`", n.id)));
            }
        }
        let mut link_index = HashMap::new();
        let mut out_links = vec![Vec::new(); nodes.len()];
        let mut in_links = vec![Vec::new(); nodes.len()];
        for (i, l) in links.iter().enumerate() {
            if link_index.insert(l.id.clone(), i).is_some() {
                return Err(Error::input(format!("duplicate link id `{}`", l.id)));
            }
            if l.tail >= nodes.len() || l.head >= nodes.len() {
                return Err(Error::input(format!("link `{}` references a missing node", l.id)));
            }
            if l.tail == l.head {
                return Err(Error::input(format!("link `{}` is a self-loop", l.id)));
            }
            if !(l.t0 > 0.0 && l.t0.is_finite()) {
                return Err(Error::input(format!("link `{}` needs t0 > 0", l.id)));
            }
            if !(l.capacity > 0.0 && l.capacity.is_finite()) {
                return Err(Error::input(format!("link `{}` needs capacity > 0", l.id)));
            }
            if !(l.alpha >= 0.0 && l.alpha.is_finite()) {
                return Err(Error::input(format!("link `{}` needs alpha >= 0", l.id)));
            }
            if l.beta == 0 {
                return Err(Error::input(format!(
                    "link `{}` needs a positive integer beta",
                    l.id
                )));
            }
            if !(l.initial_flow >= 0.0 && l.initial_flow.is_finite()) {
                return Err(Error::input(format!("link `{}` needs initial flow >= 0", l.id)));
            }
            out_links[l.tail].push(i);
            in_links[l.head].push(i);
        }
        for out in &mut out_links {
            out.sort_by_key(|&l| (links[l].head, l));
        }
        let net = TrafficNetwork {
            nodes,
            links,
            od_pairs: Vec::new(),
            node_index,
            link_index,
            out_links,
            in_links,
        };
        for od in &od_pairs {
            net.check_od(od)?;
        }
        Ok(TrafficNetwork { od_pairs, ..net })
    }

    fn check_od(&self, od: &OdDemand) -> Result<()> {
        if od.origin >= self.nodes.len() || od.destination >= self.nodes.len() {
            return Err(Error::input("OD pair references a missing node"));
        }
        let (o, d) = (&self.nodes[od.origin].id, &self.nodes[od.destination].id);
        if od.origin == od.destination {
            return Err(Error::input(format!(
                "OD pair {o}->{d} has origin == destination"
            )));
        }
        if !(od.demand > 0.0 && od.demand.is_finite()) {
            return Err(Error::input(format!("OD pair {o}->{d} needs demand > 0")));
        }
        if !self.reachable(od.origin, od.destination) {
            return Err(Error::NoPath {
                origin: o.clone(),
                destination: d.clone(),
            });
        }
        Ok(())
    }

    fn reachable(&self, from: usize, to: usize) -> bool {
        let mut seen = vec![false; self.nodes.len()];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(u) = queue.pop_front() {
            if u == to {
                return true;
            }
            for &l in &self.out_links[u] {
                let v = self.links[l].head;
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        false
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn od_pairs(&self) -> &[OdDemand] {
        &self.od_pairs
    }

    pub fn node(&self, id: &str) -> Option<usize> {
        self.node_index.get(id).copied()
    }

    pub fn link(&self, id: &str) -> Option<usize> {
        self.link_index.get(id).copied()
    }

    pub fn out_links(&self, node: usize) -> &[usize] {
        &self.out_links[node]
    }

    pub fn in_links(&self, node: usize) -> &[usize] {
        &self.in_links[node]
    }

    pub fn total_demand(&self) -> f64 {
        self.od_pairs.iter().map(|od| od.demand).sum()
    }

    pub fn free_flow_times(&self) -> Vec<f64> {
        self.links.iter().map(|l| l.t0).collect()
    }

    pub fn initial_flows(&self) -> Vec<f64> {
        self.links.iter().map(|l| l.initial_flow).collect()
    }

    /// Link times at the given total flows.
    pub fn link_times(&self, flows: &[f64]) -> Vec<f64> {
        self.links.iter().zip(flows).map(|(l, &f)| l.time(f)).collect()
    }

    pub fn od_label(&self, od: usize) -> String {
        let p = &self.od_pairs[od];
        format!("{}->{}", self.nodes[p.origin].id, self.nodes[p.destination].id)
    }
}

/// BPR link travel time.
pub fn bpr_time(link: &Link, flow: f64) -> Result<f64> {
    if flow.is_nan() || flow < 0.0 {
        return Err(Error::input(format!(
            "negative flow {flow} on link `{}`",
            link.id
        )));
    }
    Ok(link.time(flow))
}

/// Beckmann objective `Σ_a ∫₀^{f_a} t_a(x) dx` at total link flows.
pub fn beckmann_objective(net: &TrafficNetwork, link_flows: &[f64]) -> Result<f64> {
    if link_flows.len() != net.links.len() {
        return Err(Error::Dimension {
            expected: net.links.len(),
            got: link_flows.len(),
        });
    }
    let mut total = 0.0;
    for (l, &f) in net.links.iter().zip(link_flows) {
        if f.is_nan() || f < 0.0 {
            return Err(Error::input(format!("negative flow {f} on link `{}`", l.id)));
        }
        total += l.integrated_cost(f);
    }
    Ok(total)
}

/// Splits a demand into groups of `group_size`; a final smaller group takes
/// any remainder.
pub fn split_demand(demand: f64, group_size: f64) -> Vec<f64> {
    let ratio = demand / group_size;
    let rounded = ratio.round();
    if (ratio - rounded).abs() <= 1e-9 * rounded.max(1.0) {
        return vec![group_size; rounded as usize];
    }
    let full = ratio.floor() as usize;
    let mut out = vec![group_size; full];
    out.push(demand - full as f64 * group_size);
    out
}

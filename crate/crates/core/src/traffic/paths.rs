//! Shortest paths with deterministic tie-breaking, and Yen's k loopless
//! shortest paths.
//!
//! Among equal-cost paths the one with the lexicographically smallest node
//! sequence wins (parallel links: smallest link index). Distances to the
//! destination come from a reverse Dijkstra; the path is then read off by a
//! depth-first walk over tight links in (head, link) order.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use super::{Route, TrafficNetwork};
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq)]
struct Dist(f64);

impl Eq for Dist {}

impl PartialOrd for Dist {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dist {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

fn tight(du: f64, via: f64) -> bool {
    (du - via).abs() <= 1e-9 * du.abs().max(1.0)
}

/// Minimal-cost loopless route from `origin` to `destination`.
pub fn shortest_path(
    net: &TrafficNetwork,
    link_costs: &[f64],
    origin: usize,
    destination: usize,
) -> Result<Route> {
    shortest_path_avoiding(net, link_costs, origin, destination, &[], &[])
}

/// Shortest path that may not use `banned_links` or visit `banned_nodes`.
pub fn shortest_path_avoiding(
    net: &TrafficNetwork,
    link_costs: &[f64],
    origin: usize,
    destination: usize,
    banned_links: &[bool],
    banned_nodes: &[bool],
) -> Result<Route> {
    if link_costs.len() != net.links().len() {
        return Err(Error::Dimension {
            expected: net.links().len(),
            got: link_costs.len(),
        });
    }
    if let Some(c) = link_costs.iter().find(|c| !(**c >= 0.0 && c.is_finite())) {
        return Err(Error::input(format!(
            "link costs must be finite and >= 0, got {c}"
        )));
    }
    let no_path = || Error::NoPath {
        origin: net.nodes()[origin].id.clone(),
        destination: net.nodes()[destination].id.clone(),
    };
    let link_ok = |l: usize| !banned_links.get(l).copied().unwrap_or(false);
    let node_ok = |n: usize| !banned_nodes.get(n).copied().unwrap_or(false);
    if origin == destination || !node_ok(origin) || !node_ok(destination) {
        return Err(no_path());
    }

    let n = net.nodes().len();
    let mut dist = vec![f64::INFINITY; n];
    let mut heap = BinaryHeap::new();
    dist[destination] = 0.0;
    heap.push(Reverse((Dist(0.0), destination)));
    while let Some(Reverse((Dist(d), v))) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        for &l in net.in_links(v) {
            let u = net.links()[l].tail;
            if !link_ok(l) || !node_ok(u) {
                continue;
            }
            let nd = d + link_costs[l];
            if nd < dist[u] {
                dist[u] = nd;
                heap.push(Reverse((Dist(nd), u)));
            }
        }
    }
    if !dist[origin].is_finite() {
        return Err(no_path());
    }

    let mut visited = vec![false; n];
    let mut links = Vec::new();
    visited[origin] = true;
    if walk_tight(
        net,
        link_costs,
        &dist,
        origin,
        destination,
        &link_ok,
        &node_ok,
        &mut visited,
        &mut links,
    ) {
        Ok(Route::from_links_unchecked(links))
    } else {
        Err(no_path())
    }
}

#[allow(clippy::too_many_arguments)]
fn walk_tight(
    net: &TrafficNetwork,
    costs: &[f64],
    dist: &[f64],
    u: usize,
    destination: usize,
    link_ok: &dyn Fn(usize) -> bool,
    node_ok: &dyn Fn(usize) -> bool,
    visited: &mut [bool],
    path: &mut Vec<usize>,
) -> bool {
    if u == destination {
        return true;
    }
    for &l in net.out_links(u) {
        let v = net.links()[l].head;
        if visited[v] || !link_ok(l) || !node_ok(v) || !dist[v].is_finite() {
            continue;
        }
        if !tight(dist[u], costs[l] + dist[v]) {
            continue;
        }
        visited[v] = true;
        path.push(l);
        if walk_tight(net, costs, dist, v, destination, link_ok, node_ok, visited, path) {
            return true;
        }
        path.pop();
        visited[v] = false;
    }
    false
}

fn key_cmp(net: &TrafficNetwork, a: &Route, b: &Route) -> Ordering {
    a.nodes(net)
        .cmp(&b.nodes(net))
        .then_with(|| a.links().cmp(b.links()))
}

/// Up to `k` loopless shortest paths in nondecreasing cost order.
pub fn yen_k_shortest(
    net: &TrafficNetwork,
    link_costs: &[f64],
    origin: usize,
    destination: usize,
    k: usize,
) -> Result<Vec<Route>> {
    let mut found = vec![shortest_path(net, link_costs, origin, destination)?];
    let mut candidates: Vec<(f64, Route)> = Vec::new();
    let n_links = net.links().len();
    let n_nodes = net.nodes().len();

    while found.len() < k {
        let prev = found.last().expect("non-empty").clone();
        let prev_nodes = prev.nodes(net);
        for i in 0..prev.len() {
            let spur = prev_nodes[i];
            let root = &prev.links()[..i];
            let mut banned_links = vec![false; n_links];
            for p in &found {
                if p.len() > i && &p.links()[..i] == root {
                    banned_links[p.links()[i]] = true;
                }
            }
            let mut banned_nodes = vec![false; n_nodes];
            for &v in &prev_nodes[..i] {
                banned_nodes[v] = true;
            }
            let Ok(spur_path) =
                shortest_path_avoiding(net, link_costs, spur, destination, &banned_links, &banned_nodes)
            else {
                continue;
            };
            let mut links = root.to_vec();
            links.extend_from_slice(spur_path.links());
            let route = Route::from_links_unchecked(links);
            if !found.contains(&route) && !candidates.iter().any(|(_, r)| *r == route) {
                candidates.push((route.cost(link_costs), route));
            }
        }
        if candidates.is_empty() {
            break;
        }
        let mut best = 0;
        for (i, (c, r)) in candidates.iter().enumerate().skip(1) {
            let (bc, br) = &candidates[best];
            let tol = 1e-9 * bc.abs().max(1.0);
            if *c < bc - tol || ((c - bc).abs() <= tol && key_cmp(net, r, br) == Ordering::Less) {
                best = i;
            }
        }
        found.push(candidates.swap_remove(best).1);
    }
    Ok(found)
}

use std::collections::BTreeMap;

use log::warn;

use super::{shortest_path, yen_k_shortest, Route, TrafficNetwork};
use crate::error::{Error, Result};

/// The route carrying the most increments; ties go to the lexicographically
/// smallest node sequence.
pub fn most_used_route(net: &TrafficNetwork, routes: &[Route]) -> Option<Route> {
    let mut counts: BTreeMap<(Vec<usize>, Vec<usize>), usize> = BTreeMap::new();
    for r in routes {
        *counts.entry((r.nodes(net), r.links().to_vec())).or_default() += 1;
    }
    let max = counts.values().copied().max()?;
    counts
        .into_iter()
        .find(|(_, c)| *c == max)
        .map(|((_, links), _)| Route::from_links_unchecked(links))
}

/// Alternative routes for one OD pair: `[R1, R2, R3, ...]`.
///
/// * R1: the most used route of this OD in an incremental-assignment run
///   (`dia_routes`); free-flow shortest path when that run gave none.
/// * R2: the free-flow shortest path, or the next distinct Yen path when it
///   equals R1.
/// * R3: the first free-flow Yen path distinct from R1 and R2 that shares at
///   most half of its links with each; failing that, the first distinct one.
/// * Further slots (when `m > 3`) take the next distinct Yen paths.
///
/// When the network has fewer than `m` loopless routes the set is shortened
/// and a warning is logged.
pub fn generate_route_set(
    net: &TrafficNetwork,
    od: usize,
    dia_routes: &[Route],
    m: usize,
    yen_k: usize,
) -> Result<Vec<Route>> {
    let pair = net
        .od_pairs()
        .get(od)
        .ok_or_else(|| Error::input(format!("OD index {od} out of range")))?;
    let (o, d) = (pair.origin, pair.destination);
    let free = net.free_flow_times();
    let yen = yen_k_shortest(net, &free, o, d, yen_k.max(m))?;

    let r1 = match most_used_route(net, dia_routes) {
        Some(r) => {
            if r.origin(net) != o || r.destination(net) != d {
                return Err(Error::input(format!(
                    "incremental route does not serve OD {}",
                    net.od_label(od)
                )));
            }
            r
        }
        None => shortest_path(net, &free, o, d)?,
    };
    let mut set = vec![r1];
    if m == 1 {
        return Ok(set);
    }

    let free_shortest = shortest_path(net, &free, o, d)?;
    let r2 = if free_shortest != set[0] {
        Some(free_shortest)
    } else {
        yen.iter().find(|p| !set.contains(p)).cloned()
    };
    if let Some(r2) = r2 {
        set.push(r2);
    }

    if m >= 3 && set.len() == 2 {
        let distinct = || yen.iter().filter(|p| !set.contains(p));
        let detour = distinct()
            .find(|p| set.iter().all(|r| 2 * p.overlap(r) <= p.len()))
            .or_else(|| distinct().next())
            .cloned();
        if let Some(r3) = detour {
            set.push(r3);
        }
    }
    while set.len() < m {
        match yen.iter().find(|p| !set.contains(p)) {
            Some(p) => set.push(p.clone()),
            None => break,
        }
    }
    if set.len() < m {
        warn!(
            "OD {} has only {} distinct routes; using M = {} for its groups",
            net.od_label(od),
            set.len(),
            set.len()
        );
    }
    Ok(set)
}

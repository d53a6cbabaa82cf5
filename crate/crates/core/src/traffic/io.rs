use std::collections::HashMap;
use std::fmt::Write as _;

use super::{Link, Node, OdDemand, TrafficNetwork, DEFAULT_ALPHA, DEFAULT_BETA};
use crate::error::{Error, Result};

/// Parses the line-oriented network format:
///
/// ```text
/// NODE <id> [<x> <y>]
/// LINK <id> <tail> <head> <t0> <capacity> [<alpha> <beta>] [<init_flow>]
/// OD <origin> <destination> <demand>
/// ```
///
/// `#` starts a comment. Nodes referenced by a `LINK` before any `NODE`
/// line are created without coordinates.
pub fn parse_network(text: &str) -> Result<TrafficNetwork> {
    let mut nodes: Vec<Node> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut links = Vec::new();
    let mut ods = Vec::new();

    fn node_ref(nodes: &mut Vec<Node>, index: &mut HashMap<String, usize>, id: &str) -> usize {
        *index.entry(id.to_string()).or_insert_with(|| {
            nodes.push(Node {
                id: id.to_string(),
                coords: None,
            });
            nodes.len() - 1
        })
    }

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tok: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str, what: &str| -> Result<f64> {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::parse(line_no, format!("bad {what} `{s}`")))
        };
        match tok[0] {
            "NODE" => {
                let coords = match tok.len() {
                    2 => None,
                    4 => Some((num(tok[2], "x")?, num(tok[3], "y")?)),
                    _ => return Err(Error::parse(line_no, "expected `NODE <id> [<x> <y>]`")),
                };
                if let Some(&k) = index.get(tok[1]) {
                    if nodes[k].coords.is_some() || coords.is_none() {
                        return Err(Error::parse(line_no, format!("duplicate node `{}`", tok[1])));
                    }
                    nodes[k].coords = coords;
                } else {
                    index.insert(tok[1].to_string(), nodes.len());
                    nodes.push(Node {
                        id: tok[1].to_string(),
                        coords,
                    });
                }
            }
            "LINK" => {
                if !matches!(tok.len(), 6..=9) {
                    return Err(Error::parse(
                        line_no,
                        "expected `LINK <id> <tail> <head> <t0> <capacity> [<alpha> <beta>] [<init_flow>]`",
                    ));
                }
                let tail = node_ref(&mut nodes, &mut index, tok[2]);
                let head = node_ref(&mut nodes, &mut index, tok[3]);
                let (alpha, beta) = if tok.len() >= 8 {
                    let beta = tok[7].parse::<u32>().map_err(|_| {
                        Error::parse(
                            line_no,
                            format!("beta must be a positive integer, got `{}`", tok[7]),
                        )
                    })?;
                    (num(tok[6], "alpha")?, beta)
                } else {
                    (DEFAULT_ALPHA, DEFAULT_BETA)
                };
                let initial_flow = match tok.len() {
                    7 => num(tok[6], "initial flow")?,
                    9 => num(tok[8], "initial flow")?,
                    _ => 0.0,
                };
                links.push(Link {
                    id: tok[1].to_string(),
                    tail,
                    head,
                    t0: num(tok[4], "t0")?,
                    capacity: num(tok[5], "capacity")?,
                    alpha,
                    beta,
                    initial_flow,
                });
            }
            "OD" => {
                if tok.len() != 4 {
                    return Err(Error::parse(
                        line_no,
                        "expected `OD <origin> <destination> <demand>`",
                    ));
                }
                let find = |id: &str| {
                    index
                        .get(id)
                        .copied()
                        .ok_or_else(|| Error::parse(line_no, format!("unknown node `{id}`")))
                };
                ods.push(OdDemand {
                    origin: find(tok[1])?,
                    destination: find(tok[2])?,
                    demand: num(tok[3], "demand")?,
                });
            }
            other => return Err(Error::parse(line_no, format!("unknown record `{other}`"))),
        }
    }
    TrafficNetwork::new(nodes, links, ods)
}

/// Inverse of [`parse_network`]; always writes alpha, beta and initial flow.
pub fn write_network(net: &TrafficNetwork) -> String {
    let mut s = String::new();
    for n in net.nodes() {
        match n.coords {
            Some((x, y)) => writeln!(s, "NODE {} {x} {y}", n.id),
            None => writeln!(s, "NODE {}", n.id),
        }
        .unwrap();
    }
    for l in net.links() {
        writeln!(
            s,
            "LINK {} {} {} {} {} {} {} {}",
            l.id,
            net.nodes()[l.tail].id,
            net.nodes()[l.head].id,
            l.t0,
            l.capacity,
            l.alpha,
            l.beta,
            l.initial_flow
        )
        .unwrap();
    }
    for od in net.od_pairs() {
        writeln!(
            s,
            "OD {} {} {}",
            net.nodes()[od.origin].id,
            net.nodes()[od.destination].id,
            od.demand
        )
        .unwrap();
    }
    s
}

/// `link_id,tail,head,flow,time` with BPR times at the given total flows.
pub fn flow_csv(net: &TrafficNetwork, link_flows: &[f64]) -> Result<String> {
    if link_flows.len() != net.links().len() {
        return Err(Error::Dimension {
            expected: net.links().len(),
            got: link_flows.len(),
        });
    }
    let mut s = String::from("link_id,tail,head,flow,time\n");
    for (l, &f) in net.links().iter().zip(link_flows) {
        writeln!(
            s,
            "{},{},{},{f},{}",
            l.id,
            net.nodes()[l.tail].id,
            net.nodes()[l.head].id,
            l.time(f)
        )
        .unwrap();
    }
    Ok(s)
}

/// `x,y,flow` with one row per link, placed at the midpoint of its endpoints.
pub fn heatmap_csv(net: &TrafficNetwork, link_flows: &[f64]) -> Result<String> {
    if link_flows.len() != net.links().len() {
        return Err(Error::Dimension {
            expected: net.links().len(),
            got: link_flows.len(),
        });
    }
    let mut s = String::from("x,y,flow\n");
    for (l, &f) in net.links().iter().zip(link_flows) {
        let (a, b) = (&net.nodes()[l.tail], &net.nodes()[l.head]);
        let (Some((ax, ay)), Some((bx, by))) = (a.coords, b.coords) else {
            return Err(Error::input(format!(
                "heatmap needs coordinates for link `{}`",
                l.id
            )));
        };
        writeln!(s, "{},{},{f}", 0.5 * (ax + bx), 0.5 * (ay + by)).unwrap();
    }
    Ok(s)
}

//! Generated benchmark networks.
//!
//! Grid nodes are numbered row-major from 1 in the top-left corner, so node
//! `r·size + c + 1` sits at coordinates `(c, r)`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Link, Node, OdDemand, TrafficNetwork, DEFAULT_ALPHA, DEFAULT_BETA};

/// OD pairs of the 5×5 benchmark, each with demand 5.
pub const GRID5_OD_PAIRS: [(usize, usize); 15] = [
    (1, 25),
    (2, 20),
    (3, 23),
    (4, 24),
    (5, 21),
    (6, 24),
    (10, 16),
    (11, 15),
    (15, 11),
    (16, 10),
    (20, 2),
    (21, 5),
    (23, 3),
    (24, 6),
    (25, 1),
];
pub const GRID5_DEMAND: f64 = 5.0;

/// Origin index, destination index, vehicles.
pub const CITY_DEMANDS: [(usize, usize, f64); 20] = [
    (1, 2, 30.0),
    (1, 3, 30.0),
    (1, 4, 10.0),
    (1, 5, 30.0),
    (2, 1, 140.0),
    (2, 2, 60.0),
    (2, 3, 80.0),
    (2, 4, 30.0),
    (2, 5, 50.0),
    (3, 1, 120.0),
    (3, 2, 40.0),
    (3, 3, 60.0),
    (3, 4, 30.0),
    (3, 5, 10.0),
    (4, 2, 120.0),
    (4, 3, 120.0),
    (4, 4, 80.0),
    (4, 5, 80.0),
    (5, 4, 180.0),
    (5, 5, 300.0),
];

fn bidirectional(
    nodes: &[Node],
    edges: &[(usize, usize)],
    attrs: impl Fn(usize, usize) -> (f64, f64, f64),
) -> Vec<Link> {
    let mut directed: Vec<(usize, usize)> = edges.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
    directed.sort_unstable();
    directed
        .into_iter()
        .map(|(tail, head)| {
            let (t0, capacity, initial_flow) = attrs(tail, head);
            Link {
                id: format!("{}-{}", nodes[tail].id, nodes[head].id),
                tail,
                head,
                t0,
                capacity,
                alpha: DEFAULT_ALPHA,
                beta: DEFAULT_BETA,
                initial_flow,
            }
        })
        .collect()
}

fn grid_parts(size: usize) -> (Vec<Node>, Vec<(usize, usize)>) {
    let nodes = (0..size * size)
        .map(|k| Node {
            id: (k + 1).to_string(),
            coords: Some(((k % size) as f64, (k / size) as f64)),
        })
        .collect();
    let mut edges = Vec::new();
    for r in 0..size {
        for c in 0..size {
            let k = r * size + c;
            if c + 1 < size {
                edges.push((k, k + 1));
            }
            if r + 1 < size {
                edges.push((k, k + size));
            }
        }
    }
    (nodes, edges)
}

fn grid5_ods(size: usize) -> Vec<OdDemand> {
    if size != 5 {
        return Vec::new();
    }
    GRID5_OD_PAIRS
        .iter()
        .map(|&(o, d)| OdDemand {
            origin: o - 1,
            destination: d - 1,
            demand: GRID5_DEMAND,
        })
        .collect()
}

/// `size × size` grid with links in both directions, identical attributes and
/// zero initial flow. For `size == 5` the 15 benchmark OD pairs are attached;
/// other sizes carry no demand.
pub fn grid(size: usize, t0: f64, capacity: f64) -> TrafficNetwork {
    let (nodes, edges) = grid_parts(size);
    let links = bidirectional(&nodes, &edges, |_, _| (t0, capacity, 0.0));
    TrafficNetwork::new(nodes, links, grid5_ods(size)).expect("grid is valid")
}

/// [`grid`] with a light background load: each link's initial flow is drawn
/// uniformly from `[0, 0.2·capacity)`.
pub fn grid_with_background(size: usize, t0: f64, capacity: f64, seed: u64) -> TrafficNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (nodes, edges) = grid_parts(size);
    let mut flows = Vec::new();
    let links = bidirectional(&nodes, &edges, |_, _| (t0, capacity, 0.0));
    for _ in &links {
        flows.push(rng.gen_range(0.0..0.2 * capacity));
    }
    let links = links
        .into_iter()
        .zip(flows)
        .map(|(l, f)| Link { initial_flow: f, ..l })
        .collect();
    TrafficNetwork::new(nodes, links, grid5_ods(size)).expect("grid is valid")
}

const CITY_ROWS: usize = 9;
const CITY_COLS: usize = 10;
const CITY_HOLE: (usize, usize) = (4, 4);
const CITY_DIAGONALS: usize = 47;
const CITY_SPACING_M: f64 = 400.0;
const CITY_SPEED_MPS: f64 = 16.67;
const CITY_CAPACITY: f64 = 1600.0;
const CITY_ORIGINS: [(usize, usize); 5] = [(1, 0), (3, 1), (5, 0), (7, 1), (8, 3)];
const CITY_DESTINATIONS: [(usize, usize); 5] = [(0, 8), (2, 9), (4, 8), (6, 9), (8, 7)];

/// City-scale synthetic network: 89 nodes and 408 links.
///
/// Nodes form a jittered 9×10 lattice (400 m spacing) with one interior
/// intersection removed; 47 cell diagonals are added so that there are 204
/// two-way streets. Capacity is 1600 on every link, free-flow time is length
/// at 60 km/h in seconds, and background flow is uniform in `[0, 400)`.
/// Origins are named `O1`..`O5` and destinations `D1`..`D5`; the 20 OD pairs
/// of [`CITY_DEMANDS`] total 1600 vehicles.
pub fn city(seed: u64) -> TrafficNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut slot = vec![[None::<usize>; CITY_COLS]; CITY_ROWS];
    let mut nodes = Vec::new();
    for (r, row) in slot.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            if (r, c) == CITY_HOLE {
                continue;
            }
            let id = if let Some(k) = CITY_ORIGINS.iter().position(|&p| p == (r, c)) {
                format!("O{}", k + 1)
            } else if let Some(k) = CITY_DESTINATIONS.iter().position(|&p| p == (r, c)) {
                format!("D{}", k + 1)
            } else {
                format!("n{}", nodes.len() + 1)
            };
            let jitter = 0.2 * CITY_SPACING_M;
            let x = c as f64 * CITY_SPACING_M + rng.gen_range(-jitter..jitter);
            let y = r as f64 * CITY_SPACING_M + rng.gen_range(-jitter..jitter);
            *cell = Some(nodes.len());
            nodes.push(Node {
                id,
                coords: Some((x, y)),
            });
        }
    }

    let mut edges = Vec::new();
    for r in 0..CITY_ROWS {
        for c in 0..CITY_COLS {
            let Some(k) = slot[r][c] else { continue };
            if let Some(Some(right)) = slot[r].get(c + 1) {
                edges.push((k, *right));
            }
            if let Some(Some(down)) = slot.get(r + 1).map(|row| row[c]) {
                edges.push((k, down));
            }
        }
    }
    let mut cells: Vec<(usize, usize)> = (0..CITY_ROWS - 1)
        .flat_map(|r| (0..CITY_COLS - 1).map(move |c| (r, c)))
        .filter(|&(r, c)| {
            [(r, c), (r, c + 1), (r + 1, c), (r + 1, c + 1)]
                .iter()
                .all(|p| *p != CITY_HOLE)
        })
        .collect();
    cells.shuffle(&mut rng);
    for &(r, c) in cells.iter().take(CITY_DIAGONALS) {
        let e = if rng.gen_bool(0.5) {
            (slot[r][c].unwrap(), slot[r + 1][c + 1].unwrap())
        } else {
            (slot[r][c + 1].unwrap(), slot[r + 1][c].unwrap())
        };
        edges.push((e.0.min(e.1), e.0.max(e.1)));
    }

    let background: Vec<f64> = (0..2 * edges.len()).map(|_| rng.gen_range(0.0..400.0)).collect();
    let length = |a: usize, b: usize| {
        let (p, q) = (nodes[a].coords.unwrap(), nodes[b].coords.unwrap());
        ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt()
    };
    let links: Vec<Link> = bidirectional(&nodes, &edges, |a, b| {
        (length(a, b) / CITY_SPEED_MPS, CITY_CAPACITY, 0.0)
    })
    .into_iter()
    .zip(background)
    .map(|(l, f)| Link { initial_flow: f, ..l })
    .collect();

    let at = |p: (usize, usize)| slot[p.0][p.1].expect("OD node exists");
    let ods = CITY_DEMANDS
        .iter()
        .map(|&(o, d, demand)| OdDemand {
            origin: at(CITY_ORIGINS[o - 1]),
            destination: at(CITY_DESTINATIONS[d - 1]),
            demand,
        })
        .collect();
    TrafficNetwork::new(nodes, links, ods).expect("city network is valid")
}

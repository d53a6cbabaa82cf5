//! Weighted Max-Cut: rudy-format I/O, the Ising mapping, seeded instance
//! generators, and the feedback vs. no-feedback comparison harness.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cim::{run_trials, CimSolver};
use crate::error::{Error, Result};
use crate::ising::{brute_force_ground_state, IsingModel, SpinConfig};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<(usize, usize, i64)>,
}

impl WeightedGraph {
    /// Edges are normalized to `i < j`; self-loops and duplicates are rejected.
    pub fn new(n_nodes: usize, edges: Vec<(usize, usize, i64)>) -> Result<Self> {
        if n_nodes == 0 {
            return Err(Error::input("graph needs at least one node"));
        }
        let mut seen = HashSet::new();
        let mut norm = Vec::with_capacity(edges.len());
        for (i, j, w) in edges {
            let (i, j) = if i < j { (i, j) } else { (j, i) };
            if i == j {
                return Err(Error::input(format!("self-loop on node {i}")));
            }
            if j >= n_nodes {
                return Err(Error::input(format!("node {j} out of range")));
            }
            if !seen.insert((i, j)) {
                return Err(Error::input(format!("duplicate edge ({i},{j})")));
            }
            norm.push((i, j, w));
        }
        Ok(WeightedGraph {
            n: n_nodes,
            edges: norm,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, i64)] {
        &self.edges
    }

    pub fn total_weight(&self) -> i64 {
        self.edges.iter().map(|e| e.2).sum()
    }

    /// rudy text with 1-based node indices.
    pub fn to_rudy(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for (i, j, w) in &self.edges {
            let _ = writeln!(out, "{} {} {}", i + 1, j + 1, w);
        }
        out
    }
}

/// Parses rudy / Biq Mac text: a header `n m`, then `m` lines `i j w` with
/// 1-based node indices.
pub fn parse_rudy(text: &str) -> Result<WeightedGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 2 {
        return Err(Error::parse(hline, "expected header `n m`"));
    }
    let n: usize = num(h[0], hline)?;
    let m: usize = num(h[1], hline)?;
    if n == 0 {
        return Err(Error::parse(hline, "graph needs at least one node"));
    }

    let mut seen = HashSet::new();
    let mut edges = Vec::with_capacity(m);
    for (line, content) in lines {
        if edges.len() == m {
            return Err(Error::parse(line, format!("more than {m} edge lines")));
        }
        let f: Vec<&str> = content.split_whitespace().collect();
        if f.len() != 3 {
            return Err(Error::parse(line, "expected `i j w`"));
        }
        let i: usize = num(f[0], line)?;
        let j: usize = num(f[1], line)?;
        let w: i64 = num(f[2], line)?;
        if i == 0 || j == 0 || i > n || j > n {
            return Err(Error::parse(line, format!("node index out of range 1..={n}")));
        }
        if i == j {
            return Err(Error::parse(line, "self-loop"));
        }
        let key = (i.min(j) - 1, i.max(j) - 1);
        if !seen.insert(key) {
            return Err(Error::parse(line, format!("duplicate edge {i} {j}")));
        }
        edges.push((key.0, key.1, w));
    }
    if edges.len() != m {
        return Err(Error::parse(
            text.lines().count(),
            format!("expected {m} edges, found {}", edges.len()),
        ));
    }
    Ok(WeightedGraph { n, edges })
}

fn num<T: FromStr>(s: &str, line: usize) -> Result<T> {
    s.parse()
        .map_err(|_| Error::parse(line, format!("cannot parse `{s}`")))
}

/// Total weight of edges whose endpoints have opposite spins.
pub fn cut_value(g: &WeightedGraph, spins: &SpinConfig) -> Result<i64> {
    if spins.len() != g.n {
        return Err(Error::Dimension {
            expected: g.n,
            got: spins.len(),
        });
    }
    Ok(g.edges
        .iter()
        .filter(|(i, j, _)| spins.get(*i) != spins.get(*j))
        .map(|e| e.2)
        .sum())
}

/// `J_ij = −w_ij`, so `energy = Σ w σσ` and `cut = (W_total − energy) / 2`.
pub fn maxcut_to_ising(g: &WeightedGraph) -> Result<IsingModel> {
    let mut m = IsingModel::new(g.n)?;
    for &(i, j, w) in &g.edges {
        m.set_coupling(i, j, -(w as f64))?;
    }
    Ok(m)
}

/// Exact maximum cut by exhaustive ground-state search.
pub fn brute_force_max_cut(g: &WeightedGraph) -> Result<(SpinConfig, i64)> {
    let (spins, _) = brute_force_ground_state(&maxcut_to_ising(g)?)?;
    let cut = cut_value(g, &spins)?;
    Ok((spins, cut))
}

/// Weight laws of the Biq Mac 100-node families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum WeightLaw {
    /// Weights ±1.
    Pm1s,
    /// Integer weights in 0..=10.
    Pw01,
    /// Integer weights in −10..=10.
    W01,
}

impl WeightLaw {
    pub const ALL: [WeightLaw; 3] = [WeightLaw::Pm1s, WeightLaw::Pw01, WeightLaw::W01];

    pub fn name(self) -> &'static str {
        match self {
            WeightLaw::Pm1s => "pm1s",
            WeightLaw::Pw01 => "pw01",
            WeightLaw::W01 => "w01",
        }
    }

    fn draw(self, rng: &mut ChaCha8Rng) -> i64 {
        match self {
            WeightLaw::Pm1s => {
                if rng.gen() {
                    1
                } else {
                    -1
                }
            }
            WeightLaw::Pw01 => rng.gen_range(0..=10),
            WeightLaw::W01 => rng.gen_range(-10..=10),
        }
    }
}

impl FromStr for WeightLaw {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pm1s" => Ok(WeightLaw::Pm1s),
            "pw01" => Ok(WeightLaw::Pw01),
            "w01" => Ok(WeightLaw::W01),
            other => Err(Error::input(format!(
                "unknown weight law `{other}` (pm1s, pw01, w01)"
            ))),
        }
    }
}

/// Seeded random graph: each pair is an edge with probability `density`.
pub fn generate(law: WeightLaw, n_nodes: usize, density: f64, seed: u64) -> Result<WeightedGraph> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::input("density must lie in [0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n_nodes {
        for j in (i + 1)..n_nodes {
            if rng.gen::<f64>() < density {
                edges.push((i, j, law.draw(&mut rng)));
            }
        }
    }
    WeightedGraph::new(n_nodes, edges)
}

/// Known optima, one `name value` pair per line (`#` comments allowed).
pub fn parse_reference_file(text: &str) -> Result<BTreeMap<String, i64>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let f: Vec<&str> = content.split_whitespace().collect();
        if f.len() != 2 {
            return Err(Error::parse(i + 1, "expected `name value`"));
        }
        out.insert(f[0].to_string(), num(f[1], i + 1)?);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverOutcome {
    pub solver: String,
    pub trials: usize,
    pub successes: usize,
    pub diverged: usize,
    pub best_cut: i64,
}

impl SolverOutcome {
    pub fn success_rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub gfsnn: SolverOutcome,
    pub snn: SolverOutcome,
    pub reference_cut: i64,
}

impl Comparison {
    pub fn csv_header() -> &'static str {
        "instance,solver,trials,success_rate,best_cut,reference_cut"
    }

    pub fn csv_rows(&self, instance: &str) -> String {
        let mut out = String::new();
        for o in [&self.gfsnn, &self.snn] {
            let _ = writeln!(
                out,
                "{instance},{},{},{},{},{}",
                o.solver,
                o.trials,
                o.success_rate(),
                o.best_cut,
                self.reference_cut
            );
        }
        out
    }
}

/// Runs one solver over a seed range and counts trials whose cut reaches
/// `reference_cut`. Diverged trials count as failures.
pub fn cut_outcome(
    g: &WeightedGraph,
    model: &IsingModel,
    solver: &CimSolver,
    n_trials: usize,
    base_seed: u64,
    reference_cut: i64,
) -> Result<SolverOutcome> {
    if n_trials == 0 {
        return Err(Error::input("need at least one trial"));
    }
    let mut successes = 0;
    let mut diverged = 0;
    let mut best_cut = i64::MIN;
    for r in run_trials(solver, model, model, n_trials, base_seed) {
        match r {
            Ok(t) => {
                let cut = cut_value(g, &t.spins)?;
                best_cut = best_cut.max(cut);
                if cut >= reference_cut {
                    successes += 1;
                }
            }
            Err(Error::Divergence { .. }) => diverged += 1,
            Err(e) => return Err(e),
        }
    }
    if diverged == n_trials {
        return Err(Error::AllDiverged { trials: n_trials });
    }
    Ok(SolverOutcome {
        solver: solver.variant().name().to_string(),
        trials: n_trials,
        successes,
        diverged,
        best_cut,
    })
}

/// Success rates of the two networks over the same seed range.
pub fn compare_solvers(
    g: &WeightedGraph,
    gfsnn: &CimSolver,
    snn: &CimSolver,
    n_trials: usize,
    base_seed: u64,
    reference_cut: i64,
) -> Result<Comparison> {
    let model = maxcut_to_ising(g)?;
    Ok(Comparison {
        gfsnn: cut_outcome(g, &model, gfsnn, n_trials, base_seed, reference_cut)?,
        snn: cut_outcome(g, &model, snn, n_trials, base_seed, reference_cut)?,
        reference_cut,
    })
}

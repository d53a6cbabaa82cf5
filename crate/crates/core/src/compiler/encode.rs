use std::ops::Range;

use super::fit::{fit_quadratic, fit_shared, QuadraticFit};
use super::DiscretizationPlan;
use crate::error::{Error, Result};
use crate::ising::{canonical_gauge, qubo_to_ising, Couplings, IsingModel, QuboQuadratic, SpinConfig};
use crate::traffic::{beckmann_objective, Route, TrafficNetwork};

/// One fit per link; `None` for links no route uses.
pub type LinkFits = Vec<Option<QuadraticFit>>;

/// Slack on the sampled fit error when bounding the approximation gap.
const SAMPLE_SLACK: f64 = 1.05;

/// Groups' vehicles on each link if every group touching it sent its
/// vehicles there, per link: `Some((f0, f0 + cover))` for links some route
/// uses.
pub fn feasible_ranges(
    net: &TrafficNetwork,
    plan: &DiscretizationPlan,
    route_sets: &[Vec<Route>],
) -> Vec<Option<(f64, f64)>> {
    let mut cover: Vec<Option<f64>> = vec![None; net.links().len()];
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); route_sets.len()];
    for (od, set) in route_sets.iter().enumerate() {
        let mut links: Vec<usize> = set.iter().flat_map(|r| r.links().iter().copied()).collect();
        links.sort_unstable();
        links.dedup();
        touching[od] = links;
    }
    for g in &plan.groups {
        for &l in &touching[g.od] {
            *cover[l].get_or_insert(0.0) += g.vehicles;
        }
    }
    net.links()
        .iter()
        .zip(cover)
        .map(|(l, c)| c.map(|c| (l.initial_flow, l.initial_flow + c)))
        .collect()
}

/// One quadratic shared by every used link, fitted over the union of their
/// feasible ranges.
pub fn step1_fits(
    net: &TrafficNetwork,
    plan: &DiscretizationPlan,
    route_sets: &[Vec<Route>],
) -> Result<LinkFits> {
    let ranges = feasible_ranges(net, plan, route_sets);
    let used: Vec<usize> = (0..ranges.len()).filter(|&l| ranges[l].is_some()).collect();
    let lo = used
        .iter()
        .map(|&l| ranges[l].unwrap().0)
        .fold(f64::INFINITY, f64::min);
    let hi = used
        .iter()
        .map(|&l| ranges[l].unwrap().1)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut fits: LinkFits = vec![None; ranges.len()];
    if used.is_empty() {
        return Ok(fits);
    }
    let links: Vec<_> = used.iter().map(|&l| &net.links()[l]).collect();
    for (l, fit) in used.iter().zip(fit_shared(&links, lo, hi)?) {
        fits[*l] = Some(fit);
    }
    Ok(fits)
}

/// Per-link fits around predicted total flows. The interval is
/// `[pred − cover, pred + cover]` clipped to the link's feasible range and
/// widened to at least twice the group size.
pub fn step2_fits(
    net: &TrafficNetwork,
    plan: &DiscretizationPlan,
    route_sets: &[Vec<Route>],
    predicted: &[f64],
) -> Result<LinkFits> {
    if predicted.len() != net.links().len() {
        return Err(Error::Dimension {
            expected: net.links().len(),
            got: predicted.len(),
        });
    }
    let ranges = feasible_ranges(net, plan, route_sets);
    let mut fits: LinkFits = vec![None; ranges.len()];
    for (l, range) in ranges.iter().enumerate() {
        let Some((f0, top)) = *range else { continue };
        let cover = top - f0;
        let lo = (predicted[l] - cover).max(f0);
        let mut hi = (predicted[l] + cover).min(top);
        if hi - lo < 2.0 * plan.group_size {
            hi = lo + 2.0 * plan.group_size;
        }
        fits[l] = Some(fit_quadratic(&net.links()[l], lo, hi)?);
    }
    Ok(fits)
}

/// `2 ×` the largest change of the approximated objective from flipping one
/// bit, so that any configuration breaking one-hot has an improving flip.
/// Falls back to 1 when that change is zero.
pub fn choose_lambda(
    net: &TrafficNetwork,
    plan: &DiscretizationPlan,
    route_sets: &[Vec<Route>],
    fits: &[Option<QuadraticFit>],
) -> Result<f64> {
    let mut upper = net.initial_flows();
    for g in &plan.groups {
        for r in &route_sets[g.od] {
            for &l in r.links() {
                upper[l] += g.vehicles;
            }
        }
    }
    let mut delta_max = 0.0f64;
    for g in &plan.groups {
        for r in &route_sets[g.od] {
            let mut delta = 0.0;
            for &l in r.links() {
                let fit = fits[l]
                    .as_ref()
                    .ok_or_else(|| Error::Compile(format!("no fit for link `{}`", net.links()[l].id)))?;
                let t0 = net.links()[l].t0;
                delta += t0 * g.vehicles * (fit.gamma1.abs() * 2.0 * upper[l] + fit.gamma2.abs());
            }
            delta_max = delta_max.max(delta);
        }
    }
    Ok(if delta_max > 0.0 { 2.0 * delta_max } else { 1.0 })
}

/// `J·x` of a compiled model from its low-rank pieces: one rank-one term
/// per used link, one per group, plus the auxiliary column.
#[derive(Clone, Debug)]
pub struct FactoredCouplings {
    n_vars: usize,
    /// `(weight, [(var, coefficient)])` with `X = Σ weight · u uᵀ`.
    factors: Vec<(f64, Vec<(usize, f64)>)>,
    diag: Vec<f64>,
    /// `J[v][aux]`.
    aux_column: Vec<f64>,
}

impl Couplings for FactoredCouplings {
    fn n_spins(&self) -> usize {
        self.n_vars + 1
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        let n = self.n_vars;
        out[..n]
            .iter_mut()
            .enumerate()
            .for_each(|(v, o)| *o = self.diag[v] * x[v]);
        for (w, u) in &self.factors {
            let dot: f64 = u.iter().map(|&(v, c)| c * x[v]).sum::<f64>() * w;
            for &(v, c) in u {
                out[v] -= c * dot;
            }
        }
        let xa = x[n];
        let mut aux = 0.0;
        for v in 0..n {
            out[v] = 0.5 * out[v] + self.aux_column[v] * xa;
            aux += self.aux_column[v] * x[v];
        }
        out[n] = aux;
    }
}

/// A solver's spins mapped back to routes and flows.
#[derive(Clone, Debug, PartialEq)]
pub struct Decoded {
    /// Route index per group when exactly one bit is set.
    pub choices: Vec<Option<usize>>,
    pub feasible: bool,
    /// Total flows, background included, from every set bit.
    pub link_flows: Vec<f64>,
    pub true_objective: f64,
    pub approx_objective: f64,
    pub penalty: f64,
}

#[derive(Clone, Debug)]
pub struct CompiledTap {
    plan: DiscretizationPlan,
    route_sets: Vec<Vec<Route>>,
    fits: LinkFits,
    lambda: f64,
    group_vars: Vec<Range<usize>>,
    /// `(group, route index)` per bit.
    vars: Vec<(usize, usize)>,
    background: Vec<f64>,
    /// Exact cost of links no route uses.
    fixed_cost: f64,
    qubo: QuboQuadratic,
    model: IsingModel,
    factored: FactoredCouplings,
}

/// Builds the QUBO `Σ_a t0 (γ1 f_a² + γ2 f_a + γ3) + λ Σ_i (Σ_j q_ij − 1)²`
/// and its Ising form.
pub fn compile(
    net: &TrafficNetwork,
    plan: &DiscretizationPlan,
    route_sets: &[Vec<Route>],
    fits: &[Option<QuadraticFit>],
    lambda: f64,
) -> Result<CompiledTap> {
    if route_sets.len() != net.od_pairs().len() {
        return Err(Error::Dimension {
            expected: net.od_pairs().len(),
            got: route_sets.len(),
        });
    }
    if fits.len() != net.links().len() {
        return Err(Error::Dimension {
            expected: net.links().len(),
            got: fits.len(),
        });
    }
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::input(format!(
            "penalty must be finite and >= 0, got {lambda}"
        )));
    }
    for (od, set) in route_sets.iter().enumerate() {
        let p = &net.od_pairs()[od];
        if set.is_empty() {
            return Err(Error::Compile(format!("OD {} has no routes", net.od_label(od))));
        }
        for (k, r) in set.iter().enumerate() {
            if r.is_empty() || r.origin(net) != p.origin || r.destination(net) != p.destination {
                return Err(Error::Compile(format!(
                    "route {} does not serve OD {}",
                    r.describe(net),
                    net.od_label(od)
                )));
            }
            if set[..k].contains(r) {
                return Err(Error::Compile(format!(
                    "OD {} repeats route {}",
                    net.od_label(od),
                    r.describe(net)
                )));
            }
        }
    }

    let mut vars = Vec::new();
    let mut group_vars = Vec::new();
    for (i, g) in plan.groups.iter().enumerate() {
        let start = vars.len();
        vars.extend((0..route_sets[g.od].len()).map(|j| (i, j)));
        group_vars.push(start..vars.len());
    }
    let n_vars = vars.len();
    let mut on_link: Vec<Vec<(usize, f64)>> = vec![Vec::new(); net.links().len()];
    for (v, &(i, j)) in vars.iter().enumerate() {
        let g = &plan.groups[i];
        for &l in route_sets[g.od][j].links() {
            on_link[l].push((v, g.vehicles));
        }
    }

    let ranges = feasible_ranges(net, plan, route_sets);
    let mut qubo = QuboQuadratic::zeros(n_vars)?;
    let mut fixed_cost = 0.0;
    let mut factors = Vec::new();
    let mut diag = vec![0.0; n_vars];
    for (l, link) in net.links().iter().enumerate() {
        let Some((lo, hi)) = ranges[l] else {
            fixed_cost += link.integrated_cost(link.initial_flow);
            continue;
        };
        let fit = fits[l]
            .as_ref()
            .ok_or_else(|| Error::Compile(format!("link `{}` is used by a route but has no fit", link.id)))?;
        if !fit.covers(lo, hi) {
            return Err(Error::Compile(format!(
                "fit for link `{}` covers [{}, {}] but flows reach [{lo}, {hi}]",
                link.id, fit.interval.0, fit.interval.1
            )));
        }
        let (t0, f0) = (link.t0, link.initial_flow);
        let vs = &on_link[l];
        let w = t0 * fit.gamma1;
        for (k, &(v, gv)) in vs.iter().enumerate() {
            qubo.add_quad(v, v, w * gv * gv);
            diag[v] += w * gv * gv;
            for &(u, gu) in &vs[k + 1..] {
                qubo.add_quad(v, u, w * gv * gu);
            }
            qubo.add_linear(v, t0 * (2.0 * fit.gamma1 * f0 * gv + fit.gamma2 * gv));
        }
        qubo.add_constant(t0 * fit.eval(f0));
        factors.push((w, vs.clone()));
    }
    for range in &group_vars {
        for v in range.clone() {
            qubo.add_quad(v, v, lambda);
            diag[v] += lambda;
            for u in v + 1..range.end {
                qubo.add_quad(v, u, lambda);
            }
            qubo.add_linear(v, -2.0 * lambda);
        }
        qubo.add_constant(lambda);
        factors.push((lambda, range.clone().map(|v| (v, 1.0)).collect()));
    }
    qubo.add_constant(fixed_cost);

    let model = qubo_to_ising(&qubo)?;
    let aux_column = (0..n_vars).map(|v| model.coupling(v, n_vars)).collect();
    Ok(CompiledTap {
        plan: plan.clone(),
        route_sets: route_sets.to_vec(),
        fits: fits.to_vec(),
        lambda,
        group_vars,
        vars,
        background: net.initial_flows(),
        fixed_cost,
        qubo,
        model,
        factored: FactoredCouplings {
            n_vars,
            factors,
            diag,
            aux_column,
        },
    })
}

impl CompiledTap {
    pub fn plan(&self) -> &DiscretizationPlan {
        &self.plan
    }

    pub fn route_sets(&self) -> &[Vec<Route>] {
        &self.route_sets
    }

    pub fn fits(&self) -> &[Option<QuadraticFit>] {
        &self.fits
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn qubo(&self) -> &QuboQuadratic {
        &self.qubo
    }

    pub fn model(&self) -> &IsingModel {
        &self.model
    }

    pub fn couplings(&self) -> &FactoredCouplings {
        &self.factored
    }

    pub fn n_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn n_spins(&self) -> usize {
        self.vars.len() + 1
    }

    /// Bit range of group `i`.
    pub fn group_vars(&self, i: usize) -> Range<usize> {
        self.group_vars[i].clone()
    }

    /// `(group, route index)` of bit `v`.
    pub fn var(&self, v: usize) -> (usize, usize) {
        self.vars[v]
    }

    /// Route of group `i` at index `j` of its OD's set.
    pub fn route(&self, i: usize, j: usize) -> &Route {
        &self.route_sets[self.plan.groups[i].od][j]
    }

    /// Total flows for a bit vector.
    pub fn flows(&self, bits: &[bool]) -> Vec<f64> {
        let mut flows = self.background.clone();
        for (v, _) in bits.iter().enumerate().filter(|(_, &b)| b) {
            let (i, j) = self.vars[v];
            let g = self.plan.groups[i].vehicles;
            for &l in self.route(i, j).links() {
                flows[l] += g;
            }
        }
        flows
    }

    /// `λ Σ_i (Σ_j q_ij − 1)²`.
    pub fn penalty(&self, bits: &[bool]) -> f64 {
        self.group_vars
            .iter()
            .map(|r| {
                let k = bits[r.clone()].iter().filter(|&&b| b).count() as f64;
                self.lambda * (k - 1.0) * (k - 1.0)
            })
            .sum()
    }

    /// The objective the model encodes (quadratic fits on used links, exact
    /// cost elsewhere).
    pub fn approx_objective(&self, net: &TrafficNetwork, flows: &[f64]) -> f64 {
        let fitted: f64 = net
            .links()
            .iter()
            .zip(&self.fits)
            .zip(flows)
            .filter_map(|((l, fit), &f)| fit.as_ref().map(|fit| l.t0 * fit.eval(f)))
            .sum();
        fitted + self.fixed_cost
    }

    /// Bound on `|true − approx|` for any feasible decode.
    pub fn approximation_bound(&self, net: &TrafficNetwork) -> f64 {
        net.links()
            .iter()
            .zip(&self.fits)
            .filter_map(|(l, fit)| fit.as_ref().map(|fit| l.t0 * fit.max_abs_error * SAMPLE_SLACK))
            .sum()
    }

    /// Reads spins (gauge-fixed first) as route choices. Infeasible
    /// configurations are reported, not repaired.
    pub fn decode(&self, net: &TrafficNetwork, spins: &SpinConfig) -> Result<Decoded> {
        if spins.len() != self.n_spins() {
            return Err(Error::Dimension {
                expected: self.n_spins(),
                got: spins.len(),
            });
        }
        let spins = canonical_gauge(spins, self.n_vars());
        let bits: Vec<bool> = spins.to_bits()[..self.n_vars()].to_vec();
        let choices: Vec<Option<usize>> = self
            .group_vars
            .iter()
            .map(|r| {
                let on: Vec<usize> = r.clone().filter(|&v| bits[v]).collect();
                (on.len() == 1).then(|| on[0] - r.start)
            })
            .collect();
        let link_flows = self.flows(&bits);
        Ok(Decoded {
            feasible: choices.iter().all(Option::is_some),
            choices,
            true_objective: beckmann_objective(net, &link_flows)?,
            approx_objective: self.approx_objective(net, &link_flows),
            penalty: self.penalty(&bits),
            link_flows,
        })
    }

    /// Spins for a route choice per group.
    pub fn encode_choices(&self, choices: &[usize]) -> Result<SpinConfig> {
        if choices.len() != self.group_vars.len() {
            return Err(Error::Dimension {
                expected: self.group_vars.len(),
                got: choices.len(),
            });
        }
        let mut bits = vec![false; self.n_spins()];
        for (r, &j) in self.group_vars.iter().zip(choices) {
            if j >= r.len() {
                return Err(Error::input(format!("route index {j} out of range")));
            }
            bits[r.start + j] = true;
        }
        bits[self.n_vars()] = true;
        Ok(SpinConfig::from_bits(&bits))
    }
}

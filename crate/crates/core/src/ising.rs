//! Ising and QUBO representations.
//!
//! Every solver in this crate minimizes
//!
//! ```text
//! E(σ) = offset − Σ_{i<j} J[i][j] σ_i σ_j
//! ```
//!
//! over σ ∈ {+1, −1}ⁿ. Producers (the Max-Cut mapper, the traffic compiler)
//! place signs so that lower energy is a better objective.

use std::cmp::Ordering;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Default size cap for [`brute_force_ground_state`].
pub const BRUTE_FORCE_CAP: usize = 24;

/// A spin configuration with entries in {+1, −1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpinConfig(Vec<i8>);

impl SpinConfig {
    pub fn new(values: Vec<i8>) -> Result<Self> {
        if let Some(pos) = values.iter().position(|&s| s != 1 && s != -1) {
            return Err(Error::input(format!(
                "spin {pos} is {}, expected +1 or -1",
                values[pos]
            )));
        }
        Ok(SpinConfig(values))
    }

    pub fn all_up(n: usize) -> Self {
        SpinConfig(vec![1; n])
    }

    /// Spin image of a bit vector: bit b maps to 2b − 1.
    pub fn from_bits(bits: &[bool]) -> Self {
        SpinConfig(bits.iter().map(|&b| if b { 1 } else { -1 }).collect())
    }

    /// Reads out signs of amplitudes, with sign(0) = +1.
    pub fn from_signs(x: &[f64]) -> Self {
        SpinConfig(x.iter().map(|&v| if v < 0.0 { -1 } else { 1 }).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[i8] {
        &self.0
    }

    pub fn get(&self, i: usize) -> i8 {
        self.0[i]
    }

    pub fn flipped(&self) -> Self {
        SpinConfig(self.0.iter().map(|&s| -s).collect())
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] = -self.0[i];
    }

    /// Bit view: +1 ↦ true.
    pub fn to_bits(&self) -> Vec<bool> {
        self.0.iter().map(|&s| s == 1).collect()
    }

    /// Lexicographic order with +1 ranked before −1, so the all-up
    /// configuration is the smallest.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            if a != b {
                return if *a == 1 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

/// Action of a symmetric coupling matrix on an amplitude vector.
///
/// The dense [`IsingModel`] implements it directly; structured producers can
/// supply a factored operator with the same matrix.
pub trait Couplings: Sync {
    fn n_spins(&self) -> usize;

    /// `out[i] = Σ_j J[i][j] · x[j]`.
    fn apply(&self, x: &[f64], out: &mut [f64]);
}

/// Symmetric, zero-diagonal Ising model with a constant energy offset.
#[derive(Clone, Debug, PartialEq)]
pub struct IsingModel {
    n: usize,
    couplings: Vec<f64>,
    offset: f64,
    aux_index: Option<usize>,
}

impl IsingModel {
    /// Model with all couplings zero.
    pub fn new(n_spins: usize) -> Result<Self> {
        if n_spins == 0 {
            return Err(Error::input("an Ising model needs at least one spin"));
        }
        Ok(IsingModel {
            n: n_spins,
            couplings: vec![0.0; n_spins * n_spins],
            offset: 0.0,
            aux_index: None,
        })
    }

    /// Builds a model from a dense row-major matrix, checking symmetry and the
    /// zero diagonal.
    pub fn from_dense(n_spins: usize, couplings: Vec<f64>, offset: f64) -> Result<Self> {
        if couplings.len() != n_spins * n_spins {
            return Err(Error::Dimension {
                expected: n_spins * n_spins,
                got: couplings.len(),
            });
        }
        let mut model = IsingModel::new(n_spins)?;
        for i in 0..n_spins {
            if couplings[i * n_spins + i] != 0.0 {
                return Err(Error::input(format!("nonzero diagonal coupling at {i}")));
            }
            for j in (i + 1)..n_spins {
                let (a, b) = (couplings[i * n_spins + j], couplings[j * n_spins + i]);
                if a != b {
                    return Err(Error::input(format!("couplings not symmetric at ({i},{j})")));
                }
            }
        }
        if let Some(v) = couplings.iter().find(|v| !v.is_finite()) {
            return Err(Error::input(format!("non-finite coupling {v}")));
        }
        model.couplings = couplings;
        model.set_offset(offset)?;
        Ok(model)
    }

    /// Random model with couplings uniform in [−1, 1] on each pair.
    pub fn random(n_spins: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut model = IsingModel::new(n_spins)?;
        for i in 0..n_spins {
            for j in (i + 1)..n_spins {
                model.set_coupling(i, j, rng.gen_range(-1.0..=1.0))?;
            }
        }
        Ok(model)
    }

    pub fn n_spins(&self) -> usize {
        self.n
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn set_offset(&mut self, offset: f64) -> Result<()> {
        if !offset.is_finite() {
            return Err(Error::input("offset must be finite"));
        }
        self.offset = offset;
        Ok(())
    }

    pub fn aux_index(&self) -> Option<usize> {
        self.aux_index
    }

    pub fn set_aux_index(&mut self, aux: Option<usize>) -> Result<()> {
        if let Some(a) = aux {
            if a >= self.n {
                return Err(Error::input(format!(
                    "auxiliary index {a} out of range for {} spins",
                    self.n
                )));
            }
        }
        self.aux_index = aux;
        Ok(())
    }

    pub fn coupling(&self, i: usize, j: usize) -> f64 {
        self.couplings[i * self.n + j]
    }

    /// Sets J[i][j] and J[j][i].
    pub fn set_coupling(&mut self, i: usize, j: usize, value: f64) -> Result<()> {
        if i >= self.n || j >= self.n {
            return Err(Error::input(format!("coupling index ({i},{j}) out of range")));
        }
        if i == j {
            return Err(Error::input("diagonal couplings must be zero"));
        }
        if !value.is_finite() {
            return Err(Error::input("couplings must be finite"));
        }
        self.couplings[i * self.n + j] = value;
        self.couplings[j * self.n + i] = value;
        Ok(())
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.couplings[i * self.n..(i + 1) * self.n]
    }

    pub fn max_abs_coupling(&self) -> f64 {
        self.couplings.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest row sum of |J|, the biggest local field any spin can see.
    pub fn max_abs_field(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `offset − Σ_{i<j} J[i][j] σ_i σ_j`.
    pub fn energy(&self, spins: &SpinConfig) -> Result<f64> {
        if spins.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: spins.len(),
            });
        }
        Ok(self.energy_unchecked(spins.values()))
    }

    fn energy_unchecked(&self, s: &[i8]) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.n {
            let row = self.row(i);
            let si = f64::from(s[i]);
            for j in (i + 1)..self.n {
                sum += row[j] * si * f64::from(s[j]);
            }
        }
        self.offset - sum
    }

    /// Local field `h_i = Σ_j J[i][j] σ_j`.
    pub fn local_field(&self, spins: &SpinConfig, i: usize) -> f64 {
        self.row(i)
            .iter()
            .zip(spins.values())
            .map(|(j, &s)| j * f64::from(s))
            .sum()
    }

    /// Edge-list text dump: `SPINS`, `OFFSET`, optional `AUX`, then one
    /// `i j J_ij` line per nonzero upper-triangle coupling.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "SPINS {}", self.n);
        let _ = writeln!(out, "OFFSET {}", self.offset);
        if let Some(a) = self.aux_index {
            let _ = writeln!(out, "AUX {a}");
        }
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let v = self.coupling(i, j);
                if v != 0.0 {
                    let _ = writeln!(out, "{i} {j} {v}");
                }
            }
        }
        out
    }

    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut model: Option<IsingModel> = None;
        let mut offset = 0.0;
        let mut aux = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            match fields[0] {
                "SPINS" => {
                    let n = parse_field::<usize>(&fields, 1, line)?;
                    model = Some(IsingModel::new(n).map_err(|e| Error::parse(line, e.to_string()))?);
                }
                "OFFSET" => offset = parse_field::<f64>(&fields, 1, line)?,
                "AUX" => aux = Some(parse_field::<usize>(&fields, 1, line)?),
                _ => {
                    let m = model
                        .as_mut()
                        .ok_or_else(|| Error::parse(line, "coupling before SPINS line"))?;
                    if fields.len() != 3 {
                        return Err(Error::parse(line, "expected `i j J_ij`"));
                    }
                    let i = parse_field::<usize>(&fields, 0, line)?;
                    let j = parse_field::<usize>(&fields, 1, line)?;
                    let v = parse_field::<f64>(&fields, 2, line)?;
                    m.set_coupling(i, j, v)
                        .map_err(|e| Error::parse(line, e.to_string()))?;
                }
            }
        }
        let mut model = model.ok_or_else(|| Error::parse(0, "missing SPINS line"))?;
        model.set_offset(offset)?;
        model.set_aux_index(aux)?;
        Ok(model)
    }
}

impl Couplings for IsingModel {
    fn n_spins(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.row(i).iter().zip(x).map(|(j, xj)| j * xj).sum();
        }
    }
}

fn parse_field<T: std::str::FromStr>(fields: &[&str], idx: usize, line: usize) -> Result<T> {
    fields
        .get(idx)
        .ok_or_else(|| Error::parse(line, format!("missing field {}", idx + 1)))?
        .parse()
        .map_err(|_| Error::parse(line, format!("cannot parse `{}`", fields[idx])))
}

/// Quadratic pseudo-boolean function `qᵀXq + Yᵀq + C` over q ∈ {0,1}ⁿ.
#[derive(Clone, Debug, PartialEq)]
pub struct QuboQuadratic {
    n: usize,
    quad: Vec<f64>,
    linear: Vec<f64>,
    constant: f64,
}

impl QuboQuadratic {
    pub fn zeros(n_vars: usize) -> Result<Self> {
        if n_vars == 0 {
            return Err(Error::input("a QUBO needs at least one variable"));
        }
        Ok(QuboQuadratic {
            n: n_vars,
            quad: vec![0.0; n_vars * n_vars],
            linear: vec![0.0; n_vars],
            constant: 0.0,
        })
    }

    pub fn n_vars(&self) -> usize {
        self.n
    }

    pub fn quad(&self, i: usize, j: usize) -> f64 {
        self.quad[i * self.n + j]
    }

    pub fn linear(&self, i: usize) -> f64 {
        self.linear[i]
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    /// Adds `v` to X[i][j] and X[j][i] (once on the diagonal).
    pub fn add_quad(&mut self, i: usize, j: usize, v: f64) {
        self.quad[i * self.n + j] += v;
        if i != j {
            self.quad[j * self.n + i] += v;
        }
    }

    pub fn add_linear(&mut self, i: usize, v: f64) {
        self.linear[i] += v;
    }

    pub fn add_constant(&mut self, v: f64) {
        self.constant += v;
    }

    pub fn value(&self, bits: &[bool]) -> Result<f64> {
        if bits.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: bits.len(),
            });
        }
        let mut v = self.constant;
        for i in (0..self.n).filter(|&i| bits[i]) {
            v += self.linear[i];
            for j in (0..self.n).filter(|&j| bits[j]) {
                v += self.quad(i, j);
            }
        }
        Ok(v)
    }
}

/// Converts a QUBO into an Ising model with an auxiliary spin appended at
/// index `n_vars`.
///
/// With q = (σ + 1)/2 and the auxiliary spin at +1, the Ising energy equals
/// the QUBO value. The diagonal of X folds into linear and constant terms
/// (q² = q); linear terms become couplings to the auxiliary spin.
pub fn qubo_to_ising(q: &QuboQuadratic) -> Result<IsingModel> {
    let n = q.n_vars();
    let aux = n;
    let mut model = IsingModel::new(n + 1)?;
    let mut offset = q.constant();
    for i in 0..n {
        let mut field = 0.5 * q.linear(i);
        offset += 0.5 * q.linear(i) + 0.5 * q.quad(i, i);
        for j in 0..n {
            field += 0.5 * q.quad(i, j);
            if j > i {
                let x = q.quad(i, j);
                offset += 0.5 * x;
                if x != 0.0 {
                    model.set_coupling(i, j, -0.5 * x)?;
                }
            }
        }
        if field != 0.0 {
            model.set_coupling(i, aux, -field)?;
        }
    }
    model.set_offset(offset)?;
    model.set_aux_index(Some(aux))?;
    Ok(model)
}

/// Flips every spin when the auxiliary spin reads −1. Energy is unchanged.
pub fn canonical_gauge(spins: &SpinConfig, aux_index: usize) -> SpinConfig {
    if spins.get(aux_index) == -1 {
        spins.flipped()
    } else {
        spins.clone()
    }
}

/// Exhaustive ground state with the default size cap.
pub fn brute_force_ground_state(model: &IsingModel) -> Result<(SpinConfig, f64)> {
    brute_force_ground_state_with_cap(model, BRUTE_FORCE_CAP)
}

/// Exhaustive ground-state search by Gray-code enumeration.
///
/// The auxiliary spin, when present, is pinned to +1; otherwise spin 0 is
/// pinned to +1 using the global-flip symmetry. Ties resolve to the
/// lexicographically smallest configuration (+1 before −1).
pub fn brute_force_ground_state_with_cap(model: &IsingModel, cap: usize) -> Result<(SpinConfig, f64)> {
    let n = model.n_spins();
    if n > cap {
        return Err(Error::Size { n, cap });
    }
    let pinned = model.aux_index().unwrap_or(0);
    let free: Vec<usize> = (0..n).filter(|&i| i != pinned).collect();

    let mut spins = SpinConfig::all_up(n);
    let mut fields: Vec<f64> = (0..n).map(|i| model.local_field(&spins, i)).collect();
    let mut e = model.energy_unchecked(spins.values());

    let scale = model.couplings.iter().map(|v| v.abs()).sum::<f64>() + model.offset().abs();
    let tol = 1e-9 * scale.max(1.0);

    let mut best = spins.clone();
    let mut best_e = e;
    let total: u64 = 1u64 << free.len();
    for step in 1..total {
        let i = free[step.trailing_zeros() as usize];
        let s = f64::from(spins.get(i));
        e += 2.0 * s * fields[i];
        spins.flip(i);
        let row = model.row(i);
        for (f, j) in fields.iter_mut().zip(row) {
            *f -= 2.0 * s * j;
        }
        if e < best_e - tol || (e <= best_e + tol && spins.lex_cmp(&best) == Ordering::Less) {
            best_e = best_e.min(e);
            best.clone_from(&spins);
        }
    }
    let exact = model.energy_unchecked(best.values());
    Ok((best, exact))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spins(v: &[i8]) -> SpinConfig {
        SpinConfig::new(v.to_vec()).unwrap()
    }

    fn bits_of(mask: u32, n: usize) -> Vec<bool> {
        (0..n).map(|i| mask >> i & 1 == 1).collect()
    }

    fn random_qubo(n: usize, seed: u64) -> QuboQuadratic {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut q = QuboQuadratic::zeros(n).unwrap();
        for i in 0..n {
            for j in i..n {
                q.add_quad(i, j, rng.gen_range(-5.0..5.0));
            }
            q.add_linear(i, rng.gen_range(-5.0..5.0));
        }
        q.add_constant(rng.gen_range(-5.0..5.0));
        q
    }

    #[test]
    fn energy_of_empty_model_is_zero() {
        let m = IsingModel::new(2).unwrap();
        assert_eq!(m.energy(&spins(&[1, 1])).unwrap(), 0.0);
    }

    #[test]
    fn energy_of_single_ferromagnetic_bond() {
        let mut m = IsingModel::new(2).unwrap();
        m.set_coupling(0, 1, 1.0).unwrap();
        assert_eq!(m.energy(&spins(&[1, 1])).unwrap(), -1.0);
        assert_eq!(m.energy(&spins(&[1, -1])).unwrap(), 1.0);
    }

    #[test]
    fn energy_matches_term_by_term_sum() {
        let m = IsingModel::random(8, 3).unwrap();
        let mut max_diff: f64 = 0.0;
        for mask in 0..256u32 {
            let s = SpinConfig::from_bits(&bits_of(mask, 8));
            // independent oracle: full double sum over ordered pairs, halved
            let mut h = 0.0;
            for i in 0..8 {
                for j in 0..8 {
                    if i < j {
                        h -= m.coupling(i, j) * f64::from(s.get(i)) * f64::from(s.get(j));
                    }
                }
            }
            max_diff = max_diff.max((m.energy(&s).unwrap() - (m.offset() + h)).abs());
        }
        assert_eq!(max_diff, 0.0);
    }

    #[test]
    fn energy_rejects_wrong_length() {
        let m = IsingModel::new(3).unwrap();
        assert!(matches!(
            m.energy(&spins(&[1, 1])),
            Err(Error::Dimension { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn spin_config_rejects_zero() {
        assert!(SpinConfig::new(vec![1, 0]).is_err());
    }

    #[test]
    fn constant_qubo_maps_to_constant_energy() {
        let mut q = QuboQuadratic::zeros(3).unwrap();
        q.add_constant(5.0);
        let m = qubo_to_ising(&q).unwrap();
        for mask in 0..8u32 {
            let mut b = bits_of(mask, 3);
            b.push(true);
            assert_eq!(m.energy(&SpinConfig::from_bits(&b)).unwrap(), 5.0);
        }
    }

    #[test]
    fn single_linear_variable_through_aux_spin() {
        let mut q = QuboQuadratic::zeros(1).unwrap();
        q.add_linear(0, 2.0);
        let m = qubo_to_ising(&q).unwrap();
        assert_eq!(m.n_spins(), 2);
        assert_eq!(m.aux_index(), Some(1));
        assert_eq!(m.energy(&spins(&[1, 1])).unwrap(), 2.0);
        assert_eq!(m.energy(&spins(&[-1, 1])).unwrap(), 0.0);
    }

    #[test]
    fn ten_variable_qubo_matches_exhaustively() {
        let q = random_qubo(10, 11);
        let m = qubo_to_ising(&q).unwrap();
        let mut worst: f64 = 0.0;
        for mask in 0..1024u32 {
            let b = bits_of(mask, 10);
            let mut sb = b.clone();
            sb.push(true);
            let e = m.energy(&SpinConfig::from_bits(&sb)).unwrap();
            worst = worst.max((e - q.value(&b).unwrap()).abs());
        }
        assert!(worst < 1e-9, "max diff {worst}");
    }

    #[test]
    fn ground_state_of_free_spin() {
        let m = IsingModel::new(1).unwrap();
        let (s, e) = brute_force_ground_state(&m).unwrap();
        assert_eq!(e, 0.0);
        assert_eq!(s, spins(&[1]));
    }

    #[test]
    fn ground_state_of_ferromagnetic_pair() {
        let mut m = IsingModel::new(2).unwrap();
        m.set_coupling(0, 1, 1.0).unwrap();
        let (s, e) = brute_force_ground_state(&m).unwrap();
        assert_eq!(e, -1.0);
        assert_eq!(s, spins(&[1, 1]));
    }

    #[test]
    fn ground_state_matches_independent_scan() {
        let m = IsingModel::random(12, 5).unwrap();
        let (s, e) = brute_force_ground_state(&m).unwrap();
        let scan = (0..4096u32)
            .map(|mask| m.energy(&SpinConfig::from_bits(&bits_of(mask, 12))).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert!((e - scan).abs() < 1e-12);
        assert_eq!(m.energy(&s).unwrap(), e);
    }

    #[test]
    fn ground_state_pins_aux_spin() {
        let mut m = IsingModel::random(6, 9).unwrap();
        m.set_aux_index(Some(3)).unwrap();
        let (s, _) = brute_force_ground_state(&m).unwrap();
        assert_eq!(s.get(3), 1);
    }

    #[test]
    fn ground_state_refuses_large_models() {
        let m = IsingModel::new(30).unwrap();
        assert!(matches!(
            brute_force_ground_state(&m),
            Err(Error::Size { n: 30, cap: 24 })
        ));
        assert!(brute_force_ground_state_with_cap(&IsingModel::new(5).unwrap(), 4).is_err());
    }

    #[test]
    fn ground_state_ties_pick_lexicographic_smallest() {
        // No couplings: every configuration ties; all-up is smallest.
        let m = IsingModel::new(5).unwrap();
        let (s, _) = brute_force_ground_state(&m).unwrap();
        assert_eq!(s, SpinConfig::all_up(5));
    }

    #[test]
    fn gauge_leaves_up_aux_alone() {
        assert_eq!(canonical_gauge(&spins(&[1, 1, 1]), 2), spins(&[1, 1, 1]));
    }

    #[test]
    fn gauge_flips_down_aux() {
        assert_eq!(canonical_gauge(&spins(&[-1, 1, -1]), 2), spins(&[1, -1, 1]));
    }

    #[test]
    fn gauge_preserves_energy() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for seed in 0..100 {
            let m = IsingModel::random(7, seed).unwrap();
            let s = SpinConfig::new((0..7).map(|_| if rng.gen() { 1 } else { -1 }).collect()).unwrap();
            let g = canonical_gauge(&s, 6);
            assert_eq!(m.energy(&s).unwrap(), m.energy(&g).unwrap());
        }
    }

    #[test]
    fn edge_list_round_trip() {
        let mut m = IsingModel::random(5, 2).unwrap();
        m.set_offset(1.25).unwrap();
        m.set_aux_index(Some(4)).unwrap();
        let back = IsingModel::parse_edge_list(&m.to_edge_list()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn from_dense_rejects_asymmetry() {
        let j = vec![0.0, 1.0, 2.0, 0.0];
        assert!(IsingModel::from_dense(2, j, 0.0).is_err());
    }

    #[test]
    fn dense_apply_is_matrix_vector_product() {
        let m = IsingModel::random(4, 1).unwrap();
        let x = [0.5, -1.0, 2.0, 0.25];
        let mut out = [0.0; 4];
        m.apply(&x, &mut out);
        for (i, got) in out.iter().enumerate() {
            let expect: f64 = (0..4).map(|j| m.coupling(i, j) * x[j]).sum();
            assert!((got - expect).abs() < 1e-15);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;
        use rand::Rng;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn global_flip_invariance(seed in any::<u64>(), mask in 0u32..512) {
                let m = IsingModel::random(9, seed).unwrap();
                let s = SpinConfig::from_bits(&bits_of(mask, 9));
                prop_assert_eq!(m.energy(&s).unwrap(), m.energy(&s.flipped()).unwrap());
            }

            #[test]
            fn qubo_round_trip(seed in any::<u64>(), n in 1usize..=14) {
                let q = random_qubo(n, seed);
                let m = qubo_to_ising(&q).unwrap();
                for mask in 0..(1u32 << n) {
                    let b = bits_of(mask, n);
                    let mut sb = b.clone();
                    sb.push(true);
                    let e = m.energy(&SpinConfig::from_bits(&sb)).unwrap();
                    prop_assert!((e - q.value(&b).unwrap()).abs() < 1e-9);
                }
            }

            #[test]
            fn ground_state_beats_random_configs(seed in any::<u64>()) {
                let m = IsingModel::random(10, seed).unwrap();
                let (_, ground) = brute_force_ground_state(&m).unwrap();
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
                for _ in 0..1000 {
                    let s = SpinConfig::new((0..10).map(|_| if rng.gen() { 1 } else { -1 }).collect()).unwrap();
                    prop_assert!(ground <= m.energy(&s).unwrap() + 1e-12);
                }
            }
        }
    }
}

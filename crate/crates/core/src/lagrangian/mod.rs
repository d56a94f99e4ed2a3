//! Lagrangians of r-graphs: the edge polynomial `λ(G, x)` on the standard
//! simplex, its partial evaluations, and solvers for `λ(G) = max λ(G, x)`.

mod clique;
mod grid;
mod objective;
mod reduced;
mod solver;

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexSet};

pub use clique::clique_number;
pub use grid::{grid_lower_bound, grid_lower_bound_with_cap, GridBound, DEFAULT_LATTICE_CAP};
pub use reduced::{solve_reduced, weight_classes, within_class_average};
pub use solver::{growth_step, solve};

/// Tolerance on `Σ x_i = 1` for a legal weighting.
pub const SUM_TOL: f64 = 1e-12;

/// A legal weighting: a point of the standard simplex over `[n]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Weighting(Vec<f64>);

impl Weighting {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidWeighting("no coordinates".into()));
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::InvalidWeighting(format!(
                "coordinate {} is {v}",
                i + 1
            )));
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidWeighting(format!("coordinates sum to {sum}")));
        }
        Ok(Self(values))
    }

    /// Scales nonnegative values onto the simplex.
    pub fn normalized(mut values: Vec<f64>) -> Result<Self> {
        let sum: f64 = values.iter().sum();
        if !(sum.is_finite() && sum > 0.0) {
            return Err(Error::InvalidWeighting(format!(
                "cannot normalise sum {sum}"
            )));
        }
        values.iter_mut().for_each(|v| *v /= sum);
        Self::new(values)
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Weight of vertex `v` (1-based).
    pub fn get(&self, v: u32) -> f64 {
        self.0[v as usize - 1]
    }

    /// Vertices (1-based) with positive weight.
    pub fn support(&self) -> Vec<u32> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > 0.0)
            .map(|(i, _)| i as u32 + 1)
            .collect()
    }

    pub fn support_size(&self) -> usize {
        self.0.iter().filter(|&&v| v > 0.0).count()
    }

    pub(crate) fn from_raw(values: Vec<f64>) -> Self {
        Self(values)
    }
}

impl TryFrom<Vec<f64>> for Weighting {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Weighting> for Vec<f64> {
    fn from(w: Weighting) -> Self {
        w.0
    }
}

/// The outcome of a Lagrangian computation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LagrangianEstimate {
    /// `λ(G, witness)`, evaluated exactly and rounded up to an `f64`.
    pub value: f64,
    pub witness: Weighting,
    pub support_size: usize,
    /// Largest `|∂λ/∂x_i - r·λ|` over the witness support.
    pub residual: f64,
    pub method: String,
    pub restarts_used: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub stationarity_tol: f64,
    pub support_prune_tol: f64,
    /// Two values closer than this are treated as equal.
    pub value_tol: f64,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            restarts: 64,
            max_iters: 5000,
            stationarity_tol: 1e-9,
            support_prune_tol: 1e-10,
            value_tol: 1e-9,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let tols = [
            ("stationarity_tol", self.stationarity_tol),
            ("support_prune_tol", self.support_prune_tol),
            ("value_tol", self.value_tol),
        ];
        for (name, v) in tols {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::OutOfRange(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if self.max_iters == 0 {
            return Err(Error::OutOfRange("max_iters must be positive".into()));
        }
        Ok(())
    }
}

fn check_len(g: &Hypergraph, x: &Weighting) -> Result<()> {
    if x.len() < g.n() as usize {
        return Err(Error::LengthMismatch {
            got: x.len(),
            need: g.n() as usize,
        });
    }
    Ok(())
}

fn check_vertex(g: &Hypergraph, v: u32) -> Result<()> {
    if v == 0 || v > g.n() {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            n: g.n(),
        });
    }
    Ok(())
}

fn product_except(x: &[f64], elems: &[u32], skip: &[u32]) -> f64 {
    elems
        .iter()
        .filter(|v| !skip.contains(v))
        .map(|&v| x[v as usize - 1])
        .product()
}

/// `λ(G, x)`: the sum over edges of the product of their weights.
pub fn eval(g: &Hypergraph, x: &Weighting) -> Result<f64> {
    check_len(g, x)?;
    Ok(g.edges()
        .iter()
        .map(|e| product_except(x.values(), e.elems(), &[]))
        .sum())
}

/// `λ(G, x / Σx)` computed exactly from the binary values of `x` and
/// rounded up to the nearest `f64`, so the reported number is never below
/// the value the (normalised) weighting attains.
pub(crate) fn value_rounded_up(g: &Hypergraph, x: &[f64]) -> f64 {
    let q: Vec<BigRational> = x
        .iter()
        .map(|&v| BigRational::from_float(v).expect("weights are finite"))
        .collect();
    let total: BigRational = q.iter().sum();
    let mut lam = BigRational::zero();
    for e in g.edges() {
        lam += e
            .elems()
            .iter()
            .map(|&v| &q[v as usize - 1])
            .fold(BigRational::one(), |acc, w| acc * w);
    }
    let exact = lam / total.pow(g.r() as i32);
    let mut f = exact.to_f64().unwrap_or(f64::NAN);
    while BigRational::from_float(f).is_some_and(|v| v < exact) {
        f = f.next_up();
    }
    while BigRational::from_float(f.next_down()).is_some_and(|v| v >= exact) {
        f = f.next_down();
    }
    f
}

/// `λ(E_i, x)`, the partial derivative of `λ(G, x)` in `x_i`.
pub fn partial(g: &Hypergraph, x: &Weighting, i: u32) -> Result<f64> {
    check_len(g, x)?;
    check_vertex(g, i)?;
    Ok(g.edges()
        .iter()
        .filter(|e| e.contains(i))
        .map(|e| product_except(x.values(), e.elems(), &[i]))
        .sum())
}

/// `λ(E_ij, x)`, the mixed second derivative in `x_i, x_j`.
pub fn pair_partial(g: &Hypergraph, x: &Weighting, i: u32, j: u32) -> Result<f64> {
    check_len(g, x)?;
    check_vertex(g, i)?;
    check_vertex(g, j)?;
    if i == j {
        return Err(Error::RepeatedVertex(i));
    }
    Ok(g.edges()
        .iter()
        .filter(|e| e.contains(i) && e.contains(j))
        .map(|e| product_except(x.values(), e.elems(), &[i, j]))
        .sum())
}

/// `λ(F, x)` for an arbitrary family of vertex sets, e.g. a neighbourhood
/// `E_{i\j}`. The empty set contributes 1.
pub fn family_value(family: &BTreeSet<VertexSet>, x: &Weighting) -> f64 {
    family
        .iter()
        .map(|a| a.iter().map(|&v| x.get(v)).product::<f64>())
        .sum()
}

/// Moves `delta` of weight onto vertex `i` from vertex `j`.
pub fn shift(x: &Weighting, i: u32, j: u32, delta: f64) -> Result<Weighting> {
    let n = x.len() as u32;
    for v in [i, j] {
        if v == 0 || v > n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
    }
    if i == j {
        return Err(Error::RepeatedVertex(i));
    }
    let mut y = x.values().to_vec();
    let (ii, jj) = (i as usize - 1, j as usize - 1);
    y[ii] += delta;
    y[jj] -= delta;
    for (v, idx) in [(i, ii), (j, jj)] {
        if y[idx] < 0.0 {
            return Err(Error::NegativeCoordinate {
                vertex: v,
                value: y[idx],
            });
        }
    }
    Ok(Weighting::from_raw(y))
}

/// `max_{i ∈ supp x} |λ(E_i, x) - r·λ(G, x)|`.
pub fn stationarity_residual(g: &Hypergraph, x: &Weighting) -> Result<f64> {
    check_len(g, x)?;
    let target = g.r() as f64 * eval(g, x)?;
    let mut worst = 0.0f64;
    for v in x.support() {
        if v > g.n() {
            // weight on a vertex outside the graph has zero partial
            worst = worst.max(target);
            continue;
        }
        worst = worst.max((partial(g, x, v)? - target).abs());
    }
    Ok(worst)
}

/// Every pair of support vertices lies in a common edge.
pub fn support_pairs_covered(g: &Hypergraph, x: &Weighting) -> bool {
    let s = x.support();
    s.iter().enumerate().all(|(a, &i)| {
        s[a + 1..]
            .iter()
            .all(|&j| g.edges().iter().any(|e| e.contains(i) && e.contains(j)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::complete_graph;

    fn w(v: &[f64]) -> Weighting {
        Weighting::new(v.to_vec()).unwrap()
    }

    fn single() -> Hypergraph {
        Hypergraph::from_lists(3, 4, &[&[1, 2, 3]]).unwrap()
    }

    #[test]
    fn eval_examples() {
        let g = Hypergraph::from_lists(3, 3, &[&[1, 2, 3]]).unwrap();
        let third = 1.0 / 3.0;
        assert!((eval(&g, &w(&[third, third, third])).unwrap() - 1.0 / 27.0).abs() < 1e-15);
        let k4 = complete_graph(3, 4).unwrap();
        assert!((eval(&k4, &Weighting::uniform(4)).unwrap() - 1.0 / 16.0).abs() < 1e-15);
        let k3 = complete_graph(2, 3).unwrap();
        assert_eq!(eval(&k3, &w(&[0.5, 0.5, 0.0])).unwrap(), 0.25);
        assert!(eval(&k4, &Weighting::uniform(3)).is_err());
    }

    #[test]
    fn partial_examples() {
        let g = single();
        let x = w(&[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0]);
        assert!((partial(&g, &x, 1).unwrap() - 1.0 / 9.0).abs() < 1e-15);
        assert_eq!(partial(&g, &x, 4).unwrap(), 0.0);
        assert!(partial(&g, &x, 5).is_err());
    }

    #[test]
    fn pair_partial_examples() {
        let k4 = complete_graph(3, 4).unwrap();
        assert_eq!(
            pair_partial(&k4, &Weighting::uniform(4), 1, 2).unwrap(),
            0.5
        );
        let g = single();
        let x = w(&[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0]);
        assert_eq!(pair_partial(&g, &x, 1, 4).unwrap(), 0.0);
        assert!(pair_partial(&g, &x, 2, 2).is_err());
    }

    #[test]
    fn shift_examples() {
        let x = w(&[0.5, 0.5]);
        assert_eq!(shift(&x, 1, 2, 0.5).unwrap(), w(&[1.0, 0.0]));
        assert_eq!(shift(&x, 1, 2, 0.0).unwrap(), x);
        assert_eq!(shift(&x, 2, 1, -0.25).unwrap(), w(&[0.75, 0.25]));
        assert!(matches!(
            shift(&x, 1, 2, 0.75),
            Err(Error::NegativeCoordinate { vertex: 2, .. })
        ));
        assert!(shift(&x, 1, 1, 0.1).is_err());
        assert!(shift(&x, 1, 3, 0.1).is_err());
    }

    #[test]
    fn residual_examples() {
        for t in 2..=7 {
            let g = complete_graph(2, t).unwrap();
            let x = Weighting::uniform(t as usize);
            assert!(stationarity_residual(&g, &x).unwrap() <= 1e-12);
        }
        let k4 = complete_graph(3, 4).unwrap();
        assert!(stationarity_residual(&k4, &Weighting::uniform(4)).unwrap() <= 1e-12);
        // partials 1/16 and 1/8 against 3·λ = 3/32
        let res = stationarity_residual(&single(), &w(&[0.5, 0.25, 0.25, 0.0])).unwrap();
        assert!((res - 1.0 / 32.0).abs() < 1e-15);
    }

    #[test]
    fn weighting_validation() {
        assert!(Weighting::new(vec![0.5, 0.4]).is_err());
        assert!(Weighting::new(vec![1.5, -0.5]).is_err());
        assert!(Weighting::new(vec![f64::NAN, 1.0]).is_err());
        assert!(Weighting::new(vec![]).is_err());
        let x = Weighting::normalized(vec![2.0, 0.0, 2.0]).unwrap();
        assert_eq!(x.support(), vec![1, 3]);
        assert_eq!(x.support_size(), 2);
        assert!(Weighting::normalized(vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn pair_coverage() {
        let g = single();
        assert!(support_pairs_covered(&g, &w(&[0.5, 0.5, 0.0, 0.0])));
        assert!(!support_pairs_covered(&g, &w(&[0.5, 0.0, 0.0, 0.5])));
    }
}

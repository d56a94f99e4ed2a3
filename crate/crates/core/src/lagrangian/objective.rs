//! Homogeneous polynomials with nonnegative coefficients on the simplex and
//! the local ascent routines shared by the full and reduced solvers.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use crate::hypergraph::Hypergraph;

pub(crate) trait SimplexPolynomial: Sync {
    fn dim(&self) -> usize;
    fn degree(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
    fn gradient(&self, x: &[f64], out: &mut [f64]);
    /// Second derivatives restricted to the coordinates in `support`.
    fn hessian(&self, x: &[f64], support: &[usize]) -> DMatrix<f64>;
}

/// Edge polynomial of a graph with 0-based vertex indices.
pub(crate) struct EdgePolynomial {
    n: usize,
    r: usize,
    /// Flattened edges, `r` indices each.
    edges: Vec<usize>,
}

impl EdgePolynomial {
    pub fn new(g: &Hypergraph) -> Self {
        Self {
            n: g.n() as usize,
            r: g.r(),
            edges: g.edge_indices().into_iter().flatten().collect(),
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = &[usize]> {
        self.edges.chunks_exact(self.r)
    }

    /// `covered[u * n + v]` is true when some edge contains both.
    pub fn pair_cover(&self) -> Vec<bool> {
        let mut cover = vec![false; self.n * self.n];
        for e in self.edges() {
            for &u in e {
                for &v in e {
                    cover[u * self.n + v] = true;
                }
            }
        }
        cover
    }
}

impl SimplexPolynomial for EdgePolynomial {
    fn dim(&self) -> usize {
        self.n
    }

    fn degree(&self) -> usize {
        self.r
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.edges()
            .map(|e| e.iter().map(|&v| x[v]).product::<f64>())
            .sum()
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for e in self.edges() {
            for (p, &v) in e.iter().enumerate() {
                let prod: f64 = e
                    .iter()
                    .enumerate()
                    .filter(|&(q, _)| q != p)
                    .map(|(_, &u)| x[u])
                    .product();
                out[v] += prod;
            }
        }
    }

    fn hessian(&self, x: &[f64], support: &[usize]) -> DMatrix<f64> {
        let k = support.len();
        let mut pos = vec![usize::MAX; self.n];
        for (a, &v) in support.iter().enumerate() {
            pos[v] = a;
        }
        let mut h = DMatrix::zeros(k, k);
        for e in self.edges() {
            for p in 0..e.len() {
                for q in p + 1..e.len() {
                    let (a, b) = (pos[e[p]], pos[e[q]]);
                    if a == usize::MAX || b == usize::MAX {
                        continue;
                    }
                    let prod: f64 = e
                        .iter()
                        .enumerate()
                        .filter(|&(s, _)| s != p && s != q)
                        .map(|(_, &u)| x[u])
                        .product();
                    h[(a, b)] += prod;
                    h[(b, a)] += prod;
                }
            }
        }
        h
    }
}

/// A homogeneous polynomial stored as `(coefficient, exponents)` terms.
#[derive(Debug, Clone)]
pub(crate) struct MonomialPolynomial {
    dim: usize,
    degree: usize,
    terms: Vec<(f64, Vec<u32>)>,
}

impl MonomialPolynomial {
    pub fn from_terms(dim: usize, degree: usize, terms: BTreeMap<Vec<u32>, f64>) -> Self {
        Self {
            dim,
            degree,
            terms: terms.into_iter().map(|(e, c)| (c, e)).collect(),
        }
    }
}

fn monomial_except(x: &[f64], exps: &[u32], skip: &[(usize, u32)]) -> f64 {
    exps.iter()
        .enumerate()
        .map(|(k, &e)| {
            let drop: u32 = skip.iter().filter(|(s, _)| *s == k).map(|(_, d)| d).sum();
            x[k].powi((e - drop) as i32)
        })
        .product()
}

impl SimplexPolynomial for MonomialPolynomial {
    fn dim(&self) -> usize {
        self.dim
    }

    fn degree(&self) -> usize {
        self.degree
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, e)| c * monomial_except(x, e, &[]))
            .sum()
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for (c, e) in &self.terms {
            for k in 0..self.dim {
                if e[k] == 0 {
                    continue;
                }
                out[k] += c * e[k] as f64 * monomial_except(x, e, &[(k, 1)]);
            }
        }
    }

    fn hessian(&self, x: &[f64], support: &[usize]) -> DMatrix<f64> {
        let k = support.len();
        let mut h = DMatrix::zeros(k, k);
        for (c, e) in &self.terms {
            for (a, &i) in support.iter().enumerate() {
                for (b, &j) in support.iter().enumerate() {
                    let coef = if i == j {
                        if e[i] < 2 {
                            continue;
                        }
                        (e[i] * (e[i] - 1)) as f64
                    } else {
                        if e[i] == 0 || e[j] == 0 {
                            continue;
                        }
                        (e[i] * e[j]) as f64
                    };
                    h[(a, b)] += c * coef * monomial_except(x, e, &[(i, 1), (j, 1)]);
                }
            }
        }
        h
    }
}

pub(crate) fn support_of(x: &[f64]) -> Vec<usize> {
    x.iter()
        .enumerate()
        .filter(|(_, &v)| v > 0.0)
        .map(|(i, _)| i)
        .collect()
}

pub(crate) fn renormalize(x: &mut [f64]) {
    let s: f64 = x.iter().sum();
    if s > 0.0 {
        x.iter_mut().for_each(|v| *v /= s);
    }
}

/// `max_{i ∈ supp x} |∂_i p(x) - deg·p(x)|`.
pub(crate) fn residual<P: SimplexPolynomial + ?Sized>(p: &P, x: &[f64]) -> f64 {
    let mut g = vec![0.0; p.dim()];
    p.gradient(x, &mut g);
    let target = p.degree() as f64 * p.value(x);
    support_of(x)
        .into_iter()
        .map(|i| (g[i] - target).abs())
        .fold(0.0, f64::max)
}

/// One growth-transform step `x_i <- x_i ∂_i p / Σ_j x_j ∂_j p`. For a
/// homogeneous polynomial the denominator is `deg·p(x)`; normalising by the
/// actual sum keeps the iterate on the simplex in floating point.
pub(crate) fn growth_step_raw<P: SimplexPolynomial + ?Sized>(
    p: &P,
    x: &[f64],
    grad: &mut [f64],
) -> Option<Vec<f64>> {
    p.gradient(x, grad);
    let denom: f64 = x.iter().zip(grad.iter()).map(|(a, b)| a * b).sum();
    if !(denom > 0.0 && denom.is_finite()) {
        return None;
    }
    Some(
        x.iter()
            .zip(grad.iter())
            .map(|(a, b)| a * b / denom)
            .collect(),
    )
}

/// Runs growth-transform steps until the value stops improving or
/// `max_iters` is reached.
pub(crate) fn growth_run<P: SimplexPolynomial + ?Sized>(
    p: &P,
    x0: &[f64],
    max_iters: usize,
) -> Vec<f64> {
    let mut x = x0.to_vec();
    let mut grad = vec![0.0; p.dim()];
    let mut value = p.value(&x);
    let mut stalled = 0;
    for _ in 0..max_iters {
        let Some(y) = growth_step_raw(p, &x, &mut grad) else {
            break;
        };
        let next = p.value(&y);
        if !next.is_finite() {
            break;
        }
        let gain = next - value;
        x = y;
        value = next;
        if gain <= 1e-15 * value.abs().max(f64::MIN_POSITIVE) {
            stalled += 1;
            if stalled >= 3 {
                break;
            }
        } else {
            stalled = 0;
        }
    }
    x
}

/// Newton's method on the Lagrange system `∂_i p = μ (i ∈ S), Σ x_S = 1`
/// over the current support `S`. Returns `None` if a coordinate leaves the
/// open face, the system is singular, or the iteration does not settle.
pub(crate) fn newton_polish<P: SimplexPolynomial + ?Sized>(p: &P, x0: &[f64]) -> Option<Vec<f64>> {
    let support = support_of(x0);
    let k = support.len();
    if k <= 1 {
        return Some(x0.to_vec());
    }
    let mut x = x0.to_vec();
    let mut grad = vec![0.0; p.dim()];
    let mut mu = p.degree() as f64 * p.value(&x);
    let mut converged = false;
    for _ in 0..60 {
        p.gradient(&x, &mut grad);
        let h = p.hessian(&x, &support);
        let mut jac = DMatrix::<f64>::zeros(k + 1, k + 1);
        let mut rhs = DVector::<f64>::zeros(k + 1);
        for a in 0..k {
            for b in 0..k {
                jac[(a, b)] = h[(a, b)];
            }
            jac[(a, k)] = -1.0;
            jac[(k, a)] = 1.0;
            rhs[a] = -(grad[support[a]] - mu);
        }
        rhs[k] = -(support.iter().map(|&i| x[i]).sum::<f64>() - 1.0);
        let step = jac.lu().solve(&rhs)?;
        if step.iter().any(|s| !s.is_finite()) {
            return None;
        }
        for (a, &i) in support.iter().enumerate() {
            x[i] += step[a];
            if x[i] <= 0.0 {
                return None;
            }
        }
        mu += step[k];
        if step.amax() <= 1e-15 {
            converged = true;
            break;
        }
    }
    renormalize(&mut x);
    let scale = p.value(&x).abs().max(1e-300);
    if !converged && residual(p, &x) > 1e-12 * scale.max(1e-3) {
        return None;
    }
    Some(x)
}

pub(crate) fn prune(x: &mut [f64], tol: f64) {
    x.iter_mut().filter(|v| **v < tol).for_each(|v| *v = 0.0);
    renormalize(x);
}

/// Growth-transform ascent followed by Newton polishing on the face it
/// settles on. Coordinates that the transform is still shrinking when
/// Newton fails are dropped and the ascent restarted on the smaller face.
pub(crate) fn ascend<P: SimplexPolynomial + ?Sized>(
    p: &P,
    x0: &[f64],
    max_iters: usize,
    prune_tol: f64,
) -> Vec<f64> {
    let mut x = growth_run(p, x0, max_iters);
    let mut grad = vec![0.0; p.dim()];
    for _ in 0..p.dim() {
        prune(&mut x, prune_tol);
        let before = p.value(&x);
        if let Some(y) = newton_polish(p, &x) {
            if p.value(&y) >= before - 1e-14 * before.abs() {
                x = y;
            }
            break;
        }
        p.gradient(&x, &mut grad);
        let target = p.degree() as f64 * before;
        let shrinking: Vec<usize> = support_of(&x)
            .into_iter()
            .filter(|&i| x[i] < 1e-3 && grad[i] < target * (1.0 - 1e-9))
            .collect();
        if shrinking.is_empty() || shrinking.len() == support_of(&x).len() {
            break;
        }
        let mut y = x.clone();
        shrinking.iter().for_each(|&i| y[i] = 0.0);
        renormalize(&mut y);
        let y = growth_run(p, &y, max_iters);
        if p.value(&y) < before - 1e-12 * before.abs() {
            break;
        }
        x = y;
    }
    x
}

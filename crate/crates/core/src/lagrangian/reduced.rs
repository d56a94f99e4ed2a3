//! Optimisation over weightings that are constant on blocks of vertices.
//!
//! In a left-compressed graph, an optimal weighting gives `i` and `i + 1`
//! the same weight whenever `E_{i\(i+1)}` is empty. Grouping such runs into
//! blocks turns `λ(G, ·)` into a polynomial in one variable per block.

use std::collections::BTreeMap;

use super::objective::{ascend, MonomialPolynomial, SimplexPolynomial};
use super::{stationarity_residual, value_rounded_up, LagrangianEstimate, Weighting};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::tuple_order::binomial;

pub(crate) const METHOD: &str = "reduced-grid+ascent";

const POLISH_ITERS: usize = 5000;
const POLISH_SEEDS: usize = 8;
const MAX_LATTICE: u64 = 1_000_000;

/// Coarsest partition of `[n]` into runs of consecutive vertices where
/// `i, i + 1` share a block iff `E_{i\(i+1)} = ∅`.
pub fn weight_classes(g: &Hypergraph) -> Result<Vec<Vec<u32>>> {
    if !g.is_left_compressed() {
        return Err(Error::NotLeftCompressed);
    }
    let mut blocks: Vec<Vec<u32>> = Vec::new();
    for v in 1..=g.n() {
        let joins = v > 1 && g.diff_neighborhood(v - 1, v)?.is_empty();
        match blocks.last_mut() {
            Some(block) if joins => block.push(v),
            _ => blocks.push(vec![v]),
        }
    }
    Ok(blocks)
}

/// Replaces each coordinate by the mean over its block.
pub fn within_class_average(x: &Weighting, classes: &[Vec<u32>]) -> Weighting {
    let mut y = x.values().to_vec();
    for block in classes {
        let mean = block.iter().map(|&v| x.get(v)).sum::<f64>() / block.len() as f64;
        block.iter().for_each(|&v| y[v as usize - 1] = mean);
    }
    Weighting::from_raw(y)
}

/// Grid resolution per reduced dimension.
fn resolution(classes: usize) -> u64 {
    match classes {
        0..=3 => 200,
        4..=5 => 50,
        c => {
            let dims = c as u64 - 1;
            let mut res = 2;
            while binomial(res + 1 + dims, dims) <= MAX_LATTICE {
                res += 1;
            }
            res
        }
    }
}

/// Calls `visit` with every composition of `total` into `parts` parts.
fn for_each_composition(total: u64, parts: usize, visit: &mut impl FnMut(&[u64])) {
    fn rec(rest: u64, idx: usize, buf: &mut Vec<u64>, visit: &mut impl FnMut(&[u64])) {
        if idx + 1 == buf.len() {
            buf[idx] = rest;
            visit(buf);
            return;
        }
        for k in 0..=rest {
            buf[idx] = k;
            rec(rest - k, idx + 1, buf, visit);
        }
    }
    let mut buf = vec![0; parts];
    rec(total, 0, &mut buf, visit);
}

/// Block polynomial in the block masses `s_k = |B_k|·w_k`.
fn reduce(g: &Hypergraph, classes: &[Vec<u32>]) -> MonomialPolynomial {
    let mut block_of = vec![0usize; g.n() as usize + 1];
    for (k, block) in classes.iter().enumerate() {
        block.iter().for_each(|&v| block_of[v as usize] = k);
    }
    let sizes: Vec<f64> = classes.iter().map(|b| b.len() as f64).collect();
    let mut terms: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
    for e in g.edges() {
        let mut exps = vec![0u32; classes.len()];
        e.elems()
            .iter()
            .for_each(|&v| exps[block_of[v as usize]] += 1);
        let scale: f64 = exps
            .iter()
            .zip(&sizes)
            .map(|(&k, &s)| s.powi(k as i32))
            .product();
        *terms.entry(exps).or_insert(0.0) += 1.0 / scale;
    }
    MonomialPolynomial::from_terms(classes.len(), g.r(), terms)
}

/// Maximises `λ(G, x)` over weightings constant on `classes`: exhaustive
/// grid over the block masses, then local ascent from the best grid points.
pub fn solve_reduced(g: &Hypergraph, classes: &[Vec<u32>]) -> Result<LagrangianEstimate> {
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut seen = vec![false; g.n() as usize + 1];
    for &v in classes.iter().flatten() {
        if v == 0 || v > g.n() || std::mem::replace(&mut seen[v as usize], true) {
            return Err(Error::InvalidGraph(format!(
                "classes are not a partition of [{}]",
                g.n()
            )));
        }
    }
    if seen[1..].iter().any(|s| !s) || classes.iter().any(|b| b.is_empty()) {
        return Err(Error::InvalidGraph(format!(
            "classes are not a partition of [{}]",
            g.n()
        )));
    }

    let poly = reduce(g, classes);
    let c = classes.len();
    let res = resolution(c);

    // keep the POLISH_SEEDS best lattice points
    let mut top: Vec<(f64, Vec<f64>)> = Vec::with_capacity(POLISH_SEEDS + 1);
    for_each_composition(res, c, &mut |k| {
        let s: Vec<f64> = k.iter().map(|&ki| ki as f64 / res as f64).collect();
        let v = poly.value(&s);
        if top.len() < POLISH_SEEDS || v > top.last().map(|t| t.0).unwrap_or(f64::NEG_INFINITY) {
            top.push((v, s));
            top.sort_by(|a, b| b.0.total_cmp(&a.0));
            top.truncate(POLISH_SEEDS);
        }
    });

    let (_, best_s) = top
        .into_iter()
        .map(|(_, s)| {
            let z = ascend(&poly, &s, POLISH_ITERS, 1e-12);
            (poly.value(&z), z)
        })
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .expect("grid is non-empty");

    let mut x = vec![0.0; g.n() as usize];
    for (block, s) in classes.iter().zip(&best_s) {
        let w = s / block.len() as f64;
        block.iter().for_each(|&v| x[v as usize - 1] = w);
    }
    let witness = Weighting::normalized(x)?;
    let value = value_rounded_up(g, witness.values());
    let residual = stationarity_residual(g, &witness)?;
    Ok(LagrangianEstimate {
        value,
        support_size: witness.support_size(),
        witness,
        residual,
        method: METHOD.to_string(),
        restarts_used: 0,
    })
}

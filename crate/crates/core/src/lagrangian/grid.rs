//! Exact lower bounds for `λ(G)` from the rational lattice
//! `{k / d : k ∈ ℕ^n, Σ k_i = d}` on the simplex.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::tuple_order::binomial;

pub const DEFAULT_LATTICE_CAP: u128 = 20_000_000;

/// Best lattice point found and its exact value.
#[derive(Clone, Debug, PartialEq)]
pub struct GridBound {
    pub value: BigRational,
    /// Lattice numerators `k_i`; the weighting is `k_i / denominator`.
    pub point: Vec<u64>,
    pub denominator: u64,
}

impl GridBound {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }

    /// `self.value <= x` compared exactly.
    pub fn is_at_most(&self, x: f64) -> bool {
        match BigRational::from_float(x) {
            Some(q) => self.value <= q,
            None => false,
        }
    }
}

pub fn grid_lower_bound(g: &Hypergraph, denominator: u64) -> Result<GridBound> {
    grid_lower_bound_with_cap(g, denominator, DEFAULT_LATTICE_CAP)
}

/// Maximum of `λ(G, x)` over lattice points with the given denominator,
/// computed in exact integer arithmetic: `λ(G, k/d) = Σ_e Π k_v / d^r`.
pub fn grid_lower_bound_with_cap(g: &Hypergraph, denominator: u64, cap: u128) -> Result<GridBound> {
    if denominator == 0 {
        return Err(Error::OutOfRange("denominator must be >= 1".into()));
    }
    let n = g.n() as u64;
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let size = binomial(denominator + n - 1, n - 1) as u128;
    if size > cap {
        return Err(Error::LatticeTooLarge { size, cap });
    }
    let edges = g.edge_indices();

    let mut best: Option<(u128, Vec<u64>)> = None;
    let mut point = vec![0u64; n as usize];
    let mut overflow = false;
    let mut visit = |k: &[u64]| {
        let mut total: u128 = 0;
        for e in &edges {
            let mut prod: u128 = 1;
            for &v in e {
                prod = match prod.checked_mul(k[v] as u128) {
                    Some(p) => p,
                    None => {
                        overflow = true;
                        return;
                    }
                };
            }
            total = match total.checked_add(prod) {
                Some(t) => t,
                None => {
                    overflow = true;
                    return;
                }
            };
        }
        if best.as_ref().is_none_or(|(b, _)| total > *b) {
            best = Some((total, k.to_vec()));
        }
    };
    compositions(denominator, 0, &mut point, &mut visit);
    if overflow {
        return Err(Error::OutOfRange("lattice numerators overflow u128".into()));
    }
    let (num, point) = best.expect("lattice is non-empty");
    let den = BigInt::from(denominator).pow(g.r() as u32);
    Ok(GridBound {
        value: BigRational::new(BigInt::from(num), den),
        point,
        denominator,
    })
}

fn compositions(rest: u64, idx: usize, buf: &mut [u64], visit: &mut impl FnMut(&[u64])) {
    if idx + 1 == buf.len() {
        buf[idx] = rest;
        visit(buf);
        return;
    }
    for k in 0..=rest {
        buf[idx] = k;
        compositions(rest - k, idx + 1, buf, visit);
    }
}

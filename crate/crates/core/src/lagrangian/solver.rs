use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;

use super::objective::{
    ascend, growth_step_raw, renormalize, residual, support_of, EdgePolynomial, SimplexPolynomial,
};
use super::{stationarity_residual, value_rounded_up, LagrangianEstimate, SolverConfig, Weighting};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

pub(crate) const METHOD: &str = "growth-transform+newton";

/// One growth-transform step `x_i <- x_i·λ(E_i, x) / (r·λ(G, x))`.
pub fn growth_step(g: &Hypergraph, x: &Weighting) -> Result<Weighting> {
    if x.len() != g.n() as usize {
        return Err(Error::LengthMismatch {
            got: x.len(),
            need: g.n() as usize,
        });
    }
    let p = EdgePolynomial::new(g);
    let mut grad = vec![0.0; p.dim()];
    let y = growth_step_raw(&p, x.values(), &mut grad)
        .ok_or_else(|| Error::InvalidWeighting("λ(G, x) = 0, growth step undefined".into()))?;
    Ok(Weighting::from_raw(y))
}

/// Uniform point followed by `restarts` Dirichlet(1) samples. Each sample
/// uses its own ChaCha stream so the set of starts does not depend on
/// evaluation order.
fn starting_points(n: usize, cfg: &SolverConfig) -> Vec<Vec<f64>> {
    let mut starts = vec![vec![1.0 / n as f64; n]];
    starts.extend((0..cfg.restarts).map(|idx| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(idx as u64 + 1);
        let mut x: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        renormalize(&mut x);
        x
    }));
    starts
}

#[derive(Clone, Debug)]
struct Candidate {
    x: Vec<f64>,
    value: f64,
}

impl Candidate {
    fn new(p: &EdgePolynomial, x: Vec<f64>) -> Self {
        let value = p.value(&x);
        Self { x, value }
    }

    fn support_size(&self) -> usize {
        self.x.iter().filter(|&&v| v > 0.0).count()
    }
}

/// Lexicographic comparison that treats coordinates within `tol` as equal.
fn lex_cmp_tol(a: &[f64], b: &[f64], tol: f64) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if (x - y).abs() > tol {
            return x.total_cmp(y);
        }
    }
    Ordering::Equal
}

/// Repeatedly drops one support vertex without losing value (up to
/// `cfg.value_tol`), keeping the best drop at each level. For a vertex `v`
/// the mass is moved onto a support vertex `u` sharing no edge with `v`
/// (which leaves the value unchanged at a stationary point), or else spread
/// proportionally over the rest.
fn minimize_support(
    p: &EdgePolynomial,
    cover: &[bool],
    start: Candidate,
    best: f64,
    cfg: &SolverConfig,
) -> Candidate {
    let n = p.dim();
    let mut cur = start;
    loop {
        let mut order = support_of(&cur.x);
        if order.len() <= 1 {
            return cur;
        }
        order.sort_by(|&a, &b| cur.x[a].total_cmp(&cur.x[b]).then(a.cmp(&b)));
        // best successful drop of a single vertex, preferring the
        // lexicographically largest witness
        let mut reduced: Option<Candidate> = None;
        for &v in &order {
            let mut trials: Vec<Vec<f64>> = order
                .iter()
                .filter(|&&u| u != v && !cover[u * n + v])
                .map(|&u| {
                    let mut y = cur.x.clone();
                    y[u] += y[v];
                    y[v] = 0.0;
                    y
                })
                .collect();
            let mut y = cur.x.clone();
            y[v] = 0.0;
            renormalize(&mut y);
            trials.push(y);
            let found = trials.into_iter().find_map(|y| {
                let z = ascend(p, &y, cfg.max_iters, cfg.support_prune_tol);
                let cand = Candidate::new(p, z);
                let ok = cand.value >= best - cfg.value_tol
                    && cand.support_size() < cur.support_size()
                    && residual(p, &cand.x) <= cfg.stationarity_tol;
                ok.then_some(cand)
            });
            if let Some(c) = found {
                let better = match &reduced {
                    None => true,
                    Some(r) => c
                        .support_size()
                        .cmp(&r.support_size())
                        .then_with(|| lex_cmp_tol(&r.x, &c.x, cfg.value_tol))
                        .is_lt(),
                };
                if better {
                    reduced = Some(c);
                }
            }
        }
        match reduced {
            Some(c) => cur = c,
            None => return cur,
        }
    }
}

/// `λ(G)` by multi-start growth-transform ascent with Newton polishing,
/// reporting a weighting of minimal support among the best points found.
pub fn solve(g: &Hypergraph, cfg: &SolverConfig) -> Result<LagrangianEstimate> {
    cfg.validate()?;
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let p = EdgePolynomial::new(g);
    let starts = starting_points(p.dim(), cfg);

    let candidates: Vec<Candidate> = starts
        .par_iter()
        .map(|x0| Candidate::new(&p, ascend(&p, x0, cfg.max_iters, cfg.support_prune_tol)))
        .collect();

    let finite: Vec<&Candidate> = candidates
        .iter()
        .filter(|c| c.value.is_finite() && c.x.iter().all(|v| v.is_finite()))
        .collect();
    let Some(best) = finite.iter().map(|c| c.value).max_by(f64::total_cmp) else {
        return Err(Error::SolverFailure {
            reason: "every restart diverged".into(),
            partial: None,
        });
    };
    if finite.len() < candidates.len() {
        let top = finite
            .iter()
            .find(|c| c.value == best)
            .expect("best exists");
        let partial = build_estimate(g, top.x.clone(), cfg).ok().map(Box::new);
        return Err(Error::SolverFailure {
            reason: format!(
                "{} restarts produced non-finite values",
                candidates.len() - finite.len()
            ),
            partial,
        });
    }

    // distinct supports among near-best candidates, in start order
    let mut pool: Vec<Candidate> = Vec::new();
    for c in finite
        .into_iter()
        .filter(|c| c.value >= best - cfg.value_tol)
    {
        let supp = support_of(&c.x);
        match pool.iter_mut().find(|q| support_of(&q.x) == supp) {
            Some(q) if q.value < c.value => *q = c.clone(),
            Some(_) => {}
            None => pool.push(c.clone()),
        }
    }

    let cover = p.pair_cover();
    let reduced: Vec<Candidate> = pool
        .into_par_iter()
        .map(|c| minimize_support(&p, &cover, c, best, cfg))
        .collect();

    let chosen = reduced
        .into_iter()
        .min_by(|a, b| {
            a.support_size()
                .cmp(&b.support_size())
                .then_with(|| lex_cmp_tol(&b.x, &a.x, cfg.value_tol))
        })
        .expect("pool is non-empty");
    build_estimate(g, chosen.x, cfg)
}

fn build_estimate(g: &Hypergraph, x: Vec<f64>, cfg: &SolverConfig) -> Result<LagrangianEstimate> {
    let witness = Weighting::normalized(x)?;
    let value = value_rounded_up(g, witness.values());
    let residual = stationarity_residual(g, &witness)?;
    Ok(LagrangianEstimate {
        value,
        support_size: witness.support_size(),
        witness,
        residual,
        method: METHOD.to_string(),
        restarts_used: cfg.restarts,
    })
}

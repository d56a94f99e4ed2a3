use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// Order of a largest clique of a 2-graph, by branch and bound over
/// bitmask candidate sets. Supports up to 64 vertices.
pub fn clique_number(g: &Hypergraph) -> Result<u32> {
    if g.r() != 2 {
        return Err(Error::OutOfRange(format!(
            "clique number needs a 2-graph, got r = {}",
            g.r()
        )));
    }
    let n = g.n() as usize;
    if n > 64 {
        return Err(Error::OutOfRange(format!(
            "{n} vertices exceed the 64-vertex limit"
        )));
    }
    if n == 0 {
        return Ok(0);
    }
    let mut adj = vec![0u64; n];
    for (u, v) in g.edge_indices().iter().map(|e| (e[0], e[1])) {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best = 1;
    expand(&adj, 0, all, &mut best);
    Ok(best)
}

fn expand(adj: &[u64], size: u32, mut cand: u64, best: &mut u32) {
    if cand == 0 {
        *best = (*best).max(size);
        return;
    }
    while cand != 0 {
        if size + cand.count_ones() <= *best {
            return;
        }
        let v = cand.trailing_zeros() as usize;
        cand &= !(1 << v);
        expand(adj, size + 1, cand & adj[v], best);
    }
}

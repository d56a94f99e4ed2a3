//! The r-uniform graph model: neighbourhood operators, left-compression and
//! the standard constructors.
//!
//! Edges are canonical sorted tuples kept in a `BTreeSet`, so two graphs are
//! equal exactly when their vertex counts and edge sets coincide. No vertex
//! relabelling is ever applied.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::tuple_order::{binomial, colex_unrank, descendants, direct_descendants, RTuple};

/// A neighbourhood member: a sorted set of vertices (possibly empty when
/// `r = 2` and the pair neighbourhood is taken).
pub type VertexSet = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    r: usize,
    n: u32,
    edges: BTreeSet<RTuple>,
}

impl Hypergraph {
    /// Builds a graph on `[n]`. Rejects edges of the wrong size, edges
    /// leaving `[n]` and repeated edges.
    pub fn new(r: usize, n: u32, edges: impl IntoIterator<Item = RTuple>) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidUniformity(r));
        }
        let mut set = BTreeSet::new();
        for e in edges {
            if e.r() != r {
                return Err(Error::UniformityMismatch {
                    left: r,
                    right: e.r(),
                });
            }
            if !e.within(n) {
                return Err(Error::VertexOutOfRange {
                    vertex: e.max_elem(),
                    n,
                });
            }
            if !set.insert(e.clone()) {
                return Err(Error::InvalidGraph(format!("duplicate edge {e}")));
            }
        }
        Ok(Self { r, n, edges: set })
    }

    /// Convenience constructor from raw label lists.
    pub fn from_lists(r: usize, n: u32, edges: &[&[u32]]) -> Result<Self> {
        let tuples = edges
            .iter()
            .map(|e| RTuple::from_unsorted(e.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(r, n, tuples)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &BTreeSet<RTuple> {
        &self.edges
    }

    pub fn has_edge(&self, e: &RTuple) -> bool {
        self.edges.contains(e)
    }

    pub fn is_subgraph_of(&self, other: &Hypergraph) -> bool {
        self.r == other.r && self.n <= other.n && self.edges.is_subset(&other.edges)
    }

    /// Same edges on a larger vertex set.
    pub fn with_vertex_count(&self, n: u32) -> Result<Self> {
        Self::new(self.r, n, self.edges.iter().cloned())
    }

    /// Edges as 0-based index lists, in colex order.
    pub(crate) fn edge_indices(&self) -> Vec<Vec<usize>> {
        self.edges
            .iter()
            .map(|e| e.elems().iter().map(|&v| v as usize - 1).collect())
            .collect()
    }

    fn check_vertex(&self, v: u32) -> Result<()> {
        if v == 0 || v > self.n {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n,
            });
        }
        Ok(())
    }

    fn check_pair(&self, i: u32, j: u32) -> Result<()> {
        self.check_vertex(i)?;
        self.check_vertex(j)?;
        if i == j {
            return Err(Error::RepeatedVertex(i));
        }
        Ok(())
    }

    /// `E_i`: the (r-1)-sets `A` with `A ∪ {i}` an edge.
    pub fn neighborhood(&self, i: u32) -> Result<BTreeSet<VertexSet>> {
        self.check_vertex(i)?;
        Ok(self
            .edges
            .iter()
            .filter(|e| e.contains(i))
            .map(|e| without(e.elems(), &[i]))
            .collect())
    }

    /// `E_ij`: the (r-2)-sets `B` with `B ∪ {i, j}` an edge.
    pub fn pair_neighborhood(&self, i: u32, j: u32) -> Result<BTreeSet<VertexSet>> {
        self.check_pair(i, j)?;
        Ok(self
            .edges
            .iter()
            .filter(|e| e.contains(i) && e.contains(j))
            .map(|e| without(e.elems(), &[i, j]))
            .collect())
    }

    /// `E_{i\j}`: members of `E_i` that avoid `j` and are not in `E_j`.
    pub fn diff_neighborhood(&self, i: u32, j: u32) -> Result<BTreeSet<VertexSet>> {
        self.check_pair(i, j)?;
        let ej = self.neighborhood(j)?;
        Ok(self
            .neighborhood(i)?
            .into_iter()
            .filter(|a| !a.contains(&j) && !ej.contains(a))
            .collect())
    }

    /// `E_{j\i} = ∅` for every `1 <= i < j <= n`.
    pub fn is_left_compressed(&self) -> bool {
        (1..=self.n).all(|j| {
            (1..j).all(|i| {
                self.diff_neighborhood(j, i)
                    .map(|d| d.is_empty())
                    .unwrap_or(false)
            })
        })
    }

    /// Every descendant of every edge is an edge.
    pub fn is_left_compressed_by_descendants(&self) -> bool {
        self.edges
            .iter()
            .all(|e| descendants(e).iter().all(|d| self.edges.contains(d)))
    }

    /// Repeatedly replaces an edge that has a missing descendant by its
    /// colex-least missing descendant until the graph is left-compressed.
    ///
    /// Every replacement lowers the total coordinate sum, so the loop
    /// terminates. The result keeps `n` and the edge count.
    pub fn compress(&self) -> Hypergraph {
        let mut edges = self.edges.clone();
        loop {
            let violating: Vec<RTuple> = edges
                .iter()
                .filter(|e| {
                    direct_descendants(e, self.n)
                        .iter()
                        .any(|d| !edges.contains(d))
                })
                .cloned()
                .collect();
            if violating.is_empty() {
                break;
            }
            for e in violating {
                if !edges.contains(&e) {
                    continue;
                }
                let missing = descendants(&e).into_iter().find(|d| !edges.contains(d));
                if let Some(d) = missing {
                    edges.remove(&e);
                    edges.insert(d);
                }
            }
        }
        Hypergraph {
            r: self.r,
            n: self.n,
            edges,
        }
    }

    /// Writes the edge-list text format: a `r n m` header, then one edge per
    /// line in colex order.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {} {}\n", self.r, self.n, self.edges.len());
        for e in &self.edges {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses the edge-list text format. `#` starts a comment; blank lines
    /// are skipped.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(idx, raw)| (idx + 1, raw.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            msg: "missing header".into(),
        })?;
        let nums = parse_numbers(hline, header)?;
        let [r, n, m] = nums[..] else {
            return Err(Error::Parse {
                line: hline,
                msg: format!("header needs 3 integers `r n m`, got {}", nums.len()),
            });
        };
        let (r, m) = (r as usize, m as usize);

        let mut edges = Vec::with_capacity(m);
        for (line, body) in lines {
            let elems = parse_numbers(line, body)?;
            if elems.len() != r {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected {r} vertices, got {}", elems.len()),
                });
            }
            let t = RTuple::new(elems).map_err(|e| Error::Parse {
                line,
                msg: e.to_string(),
            })?;
            edges.push(t);
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: hline,
                msg: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        Self::new(r, n, edges)
    }
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_edge_list())
    }
}

impl FromStr for Hypergraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_edge_list(s)
    }
}

fn parse_numbers(line: usize, body: &str) -> Result<Vec<u32>> {
    body.split_whitespace()
        .map(|tok| {
            tok.parse::<u32>().map_err(|e| Error::Parse {
                line,
                msg: format!("{tok:?}: {e}"),
            })
        })
        .collect()
}

fn without(elems: &[u32], drop: &[u32]) -> VertexSet {
    elems
        .iter()
        .copied()
        .filter(|v| !drop.contains(v))
        .collect()
}

/// `C_{r,m}`: the first `m` r-sets in colex order, on the vertex set
/// `[max vertex]`.
pub fn colex_graph(r: usize, m: u64) -> Result<Hypergraph> {
    if m == 0 {
        return Err(Error::OutOfRange("colex graph needs m >= 1".into()));
    }
    let edges = (1..=m)
        .map(|k| colex_unrank(r, k))
        .collect::<Result<Vec<_>>>()?;
    let n = edges.last().map(RTuple::max_elem).unwrap_or(0);
    Hypergraph::new(r, n, edges)
}

/// `[t]^(r)`: every r-subset of `[t]`.
pub fn complete_graph(r: usize, t: u32) -> Result<Hypergraph> {
    if r < 2 {
        return Err(Error::InvalidUniformity(r));
    }
    if r as u32 > t {
        return Err(Error::OutOfRange(format!("r = {r} exceeds t = {t}")));
    }
    let total = binomial(t as u64, r as u64);
    let edges = (1..=total)
        .map(|k| colex_unrank(r, k))
        .collect::<Result<Vec<_>>>()?;
    Hypergraph::new(r, t, edges)
}

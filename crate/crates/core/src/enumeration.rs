//! Left-compressed r-graphs on `[t]` as down-sets of the dominance order,
//! generated through their complements: up-sets of removed tuples.
//!
//! The generator grows an up-set one tuple at a time. A tuple may be added
//! once all of its direct ancestors are present, and only if it comes later
//! than the previously added tuple in a fixed linear extension (coordinate
//! sum descending, then colex descending). Each up-set therefore has exactly
//! one admissible construction sequence: its own members sorted by that
//! linear extension.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::tuple_order::{all_tuples, binomial, direct_ancestors, RTuple};

/// An up-set of the dominance order on `[t]^(r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemovalSet {
    pub r: usize,
    pub t: u32,
    pub removed: BTreeSet<RTuple>,
}

impl RemovalSet {
    /// The left-compressed graph left after deleting `removed` from `[t]^(r)`.
    pub fn complement_graph(&self) -> Result<Hypergraph> {
        let all = all_tuples(self.r, self.t)?;
        Hypergraph::new(
            self.r,
            self.t,
            all.into_iter().filter(|e| !self.removed.contains(e)),
        )
    }

    /// Closed under taking ancestors inside `[t]`.
    pub fn is_up_set(&self) -> bool {
        self.removed.iter().all(|x| {
            direct_ancestors(x, self.t)
                .iter()
                .all(|a| self.removed.contains(a))
        })
    }
}

struct Poset {
    r: usize,
    t: u32,
    /// Tuples in linear-extension order: ancestors before descendants.
    tuples: Vec<RTuple>,
    /// Direct ancestors of each tuple, as indices into `tuples`.
    parents: Vec<Vec<usize>>,
}

impl Poset {
    fn new(r: usize, t: u32) -> Result<Self> {
        let mut tuples = all_tuples(r, t)?;
        tuples.sort_by(|a, b| b.sum().cmp(&a.sum()).then_with(|| b.cmp(a)));
        let parents = tuples
            .iter()
            .map(|x| {
                direct_ancestors(x, t)
                    .iter()
                    .map(|a| {
                        tuples
                            .iter()
                            .position(|y| y == a)
                            .expect("ancestor lies in [t]^(r)")
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            r,
            t,
            tuples,
            parents,
        })
    }
}

fn check_range(r: usize, t: u32, k: u64, what: &str) -> Result<u64> {
    if r < 2 {
        return Err(Error::InvalidUniformity(r));
    }
    if (r as u32) > t {
        return Err(Error::OutOfRange(format!("r = {r} exceeds t = {t}")));
    }
    let total = binomial(t as u64, r as u64);
    if k > total {
        return Err(Error::OutOfRange(format!(
            "{what} = {k} exceeds C({t}, {r}) = {total}"
        )));
    }
    Ok(total)
}

/// Lazy depth-first stream of up-sets of a fixed size.
pub struct RemovalSets {
    poset: Poset,
    target: usize,
    in_set: Vec<bool>,
    /// Chosen tuple indices, in increasing linear-extension position.
    chosen: Vec<usize>,
    /// Next candidate index to try at the current depth.
    cursor: usize,
    done: bool,
}

impl RemovalSets {
    fn addable(&self, idx: usize) -> bool {
        !self.in_set[idx] && self.poset.parents[idx].iter().all(|&p| self.in_set[p])
    }

    fn emit(&self) -> RemovalSet {
        RemovalSet {
            r: self.poset.r,
            t: self.poset.t,
            removed: self
                .chosen
                .iter()
                .map(|&i| self.poset.tuples[i].clone())
                .collect(),
        }
    }

    /// Undo the last choice and resume after it. Returns false when the
    /// search is exhausted.
    fn backtrack(&mut self) -> bool {
        match self.chosen.pop() {
            Some(last) => {
                self.in_set[last] = false;
                self.cursor = last + 1;
                true
            }
            None => false,
        }
    }
}

impl Iterator for RemovalSets {
    type Item = RemovalSet;

    fn next(&mut self) -> Option<RemovalSet> {
        if self.done {
            return None;
        }
        let len = self.poset.tuples.len();
        loop {
            if self.chosen.len() == self.target {
                let out = self.emit();
                if !self.backtrack() {
                    self.done = true;
                }
                return Some(out);
            }
            // remaining slots cannot be filled from what is left
            let need = self.target - self.chosen.len();
            let next = (self.cursor..len)
                .take_while(|&i| len - i >= need)
                .find(|&i| self.addable(i));
            match next {
                Some(i) => {
                    self.in_set[i] = true;
                    self.chosen.push(i);
                    self.cursor = i + 1;
                }
                None => {
                    if !self.backtrack() {
                        self.done = true;
                        return None;
                    }
                }
            }
        }
    }
}

/// Every up-set of size `k` in the dominance order on `[t]^(r)`, each
/// exactly once, in a deterministic order.
pub fn enumerate_removals(r: usize, t: u32, k: u64) -> Result<RemovalSets> {
    check_range(r, t, k, "k")?;
    let poset = Poset::new(r, t)?;
    let n = poset.tuples.len();
    Ok(RemovalSets {
        poset,
        target: k as usize,
        in_set: vec![false; n],
        chosen: Vec::new(),
        cursor: 0,
        done: false,
    })
}

/// Every left-compressed r-graph on `[t]` with exactly `m` edges.
pub fn enumerate_left_compressed(
    r: usize,
    t: u32,
    m: u64,
) -> Result<impl Iterator<Item = Hypergraph>> {
    let total = check_range(r, t, m, "m")?;
    let all = all_tuples(r, t)?;
    Ok(enumerate_removals(r, t, total - m)?.map(move |rs| {
        Hypergraph::new(
            r,
            t,
            all.iter().filter(|e| !rs.removed.contains(e)).cloned(),
        )
        .expect("complement of an up-set is a valid graph on [t]")
    }))
}

/// Number of left-compressed r-graphs on `[t]` with `m` edges.
pub fn count_left_compressed(r: usize, t: u32, m: u64) -> Result<u64> {
    let total = check_range(r, t, m, "m")?;
    Ok(enumerate_removals(r, t, total - m)?.count() as u64)
}

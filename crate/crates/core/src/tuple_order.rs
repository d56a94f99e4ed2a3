//! Sorted r-tuples of positive integers, the colex total order with
//! rank/unrank, and the dominance order used for left-compression.
//!
//! Vertex labels are 1-based throughout. Ranks are 1-based as well, so the
//! first `m` tuples in colex order are exactly the ones with rank `1..=m`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        acc = acc * (n as u128 + 1 - i) / i;
    }
    u64::try_from(acc).expect("binomial coefficient overflows u64")
}

/// A strictly increasing sequence of `r >= 2` positive integers.
///
/// `Ord` is the colex order for tuples of equal length. Tuples of different
/// length are ordered by length first so that the type can live in sorted
/// containers; that fallback has no combinatorial meaning.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct RTuple(Vec<u32>);

impl RTuple {
    pub fn new(elems: Vec<u32>) -> Result<Self> {
        if elems.len() < 2 {
            return Err(Error::InvalidTuple {
                elems,
                reason: "need at least two entries",
            });
        }
        if elems[0] == 0 {
            return Err(Error::InvalidTuple {
                elems,
                reason: "entries must be >= 1",
            });
        }
        if elems.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidTuple {
                elems,
                reason: "entries must be strictly increasing",
            });
        }
        Ok(Self(elems))
    }

    /// Builds a tuple from unsorted distinct labels.
    pub fn from_unsorted(mut elems: Vec<u32>) -> Result<Self> {
        elems.sort_unstable();
        Self::new(elems)
    }

    pub(crate) fn new_unchecked(elems: Vec<u32>) -> Self {
        debug_assert!(elems.len() >= 2 && elems[0] >= 1);
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        Self(elems)
    }

    pub fn r(&self) -> usize {
        self.0.len()
    }

    pub fn elems(&self) -> &[u32] {
        &self.0
    }

    pub fn max_elem(&self) -> u32 {
        *self.0.last().expect("tuples are non-empty")
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().map(|&v| v as u64).sum()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// True if every entry lies in `[1, t]`.
    pub fn within(&self, t: u32) -> bool {
        self.max_elem() <= t
    }

    fn colex_cmp(&self, other: &Self) -> Ordering {
        self.0.iter().rev().cmp(other.0.iter().rev())
    }
}

impl Ord for RTuple {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.colex_cmp(other))
    }
}

impl PartialOrd for RTuple {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for RTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RTuple({self})")
    }
}

/// Space-separated ascending integers, e.g. `1 2 5`.
impl fmt::Display for RTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, v) in self.0.iter().enumerate() {
            if idx > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for RTuple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let elems = s
            .split_whitespace()
            .map(|tok| {
                tok.parse::<u32>().map_err(|e| Error::Parse {
                    line: 1,
                    msg: format!("bad vertex label {tok:?}: {e}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(elems)
    }
}

impl TryFrom<Vec<u32>> for RTuple {
    type Error = Error;

    fn try_from(v: Vec<u32>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<RTuple> for Vec<u32> {
    fn from(t: RTuple) -> Self {
        t.0
    }
}

fn same_r(a: &RTuple, b: &RTuple) -> Result<()> {
    if a.r() != b.r() {
        return Err(Error::UniformityMismatch {
            left: a.r(),
            right: b.r(),
        });
    }
    Ok(())
}

/// `a < b` in colex order, i.e. `max(a △ b) ∈ b`.
pub fn colex_less(a: &RTuple, b: &RTuple) -> Result<bool> {
    same_r(a, b)?;
    Ok(a.colex_cmp(b) == Ordering::Less)
}

/// Colex comparison straight from the symmetric-difference definition.
/// Kept separate from [`colex_less`] so the two can be checked against each
/// other.
pub fn colex_less_by_symmetric_difference(a: &RTuple, b: &RTuple) -> Result<bool> {
    same_r(a, b)?;
    let sa: BTreeSet<u32> = a.elems().iter().copied().collect();
    let sb: BTreeSet<u32> = b.elems().iter().copied().collect();
    Ok(sa
        .symmetric_difference(&sb)
        .max()
        .is_some_and(|m| sb.contains(m)))
}

/// 1-based position of `a` in the colex order of all r-subsets of the
/// positive integers.
pub fn colex_rank(a: &RTuple) -> u64 {
    1 + a
        .elems()
        .iter()
        .enumerate()
        .map(|(s, &v)| binomial(v as u64 - 1, s as u64 + 1))
        .sum::<u64>()
}

/// Inverse of [`colex_rank`].
pub fn colex_unrank(r: usize, k: u64) -> Result<RTuple> {
    if r < 2 {
        return Err(Error::InvalidUniformity(r));
    }
    if k == 0 {
        return Err(Error::InvalidRank(k));
    }
    let mut rest = k - 1;
    let mut elems = vec![0u32; r];
    // largest element first: pick the largest c with C(c, s) <= rest
    for s in (1..=r).rev() {
        let s64 = s as u64;
        let mut c = s64 - 1;
        while binomial(c + 1, s64) <= rest {
            c += 1;
        }
        rest -= binomial(c, s64);
        elems[s - 1] = u32::try_from(c + 1).expect("vertex label overflows u32");
    }
    Ok(RTuple::new_unchecked(elems))
}

/// `a` is a descendant of `b`: `a_s <= b_s` for every position and the
/// coordinate sum of `a` is strictly smaller.
pub fn is_descendant(a: &RTuple, b: &RTuple) -> Result<bool> {
    same_r(a, b)?;
    let dominated = a.elems().iter().zip(b.elems()).all(|(x, y)| x <= y);
    Ok(dominated && a.sum() < b.sum())
}

/// Tuples obtained from `a` by decrementing a single entry, keeping the
/// entries strictly increasing and positive. Returned in colex order.
///
/// `_t` only documents the ambient ground set; decrementing never leaves it.
pub fn direct_descendants(a: &RTuple, _t: u32) -> Vec<RTuple> {
    let e = a.elems();
    let mut out: Vec<RTuple> = (0..e.len())
        .filter(|&s| {
            let lower = if s == 0 { 0 } else { e[s - 1] };
            e[s] - 1 > lower
        })
        .map(|s| {
            let mut v = e.to_vec();
            v[s] -= 1;
            RTuple::new_unchecked(v)
        })
        .collect();
    out.sort();
    out
}

/// Tuples inside `[t]` obtained from `a` by incrementing a single entry.
/// Returned in colex order.
pub fn direct_ancestors(a: &RTuple, t: u32) -> Vec<RTuple> {
    let e = a.elems();
    let mut out: Vec<RTuple> = (0..e.len())
        .filter(|&s| {
            let upper = if s + 1 == e.len() { t + 1 } else { e[s + 1] };
            e[s] + 1 < upper
        })
        .map(|s| {
            let mut v = e.to_vec();
            v[s] += 1;
            RTuple::new_unchecked(v)
        })
        .collect();
    out.sort();
    out
}

/// All ancestors of `a` inside `[t]`, by upward closure over direct
/// ancestors.
pub fn ancestors_within(a: &RTuple, t: u32) -> BTreeSet<RTuple> {
    closure(a, |x| direct_ancestors(x, t))
}

/// All descendants of `a`, by downward closure over direct descendants.
pub fn descendants(a: &RTuple) -> BTreeSet<RTuple> {
    closure(a, |x| direct_descendants(x, x.max_elem()))
}

fn closure(start: &RTuple, step: impl Fn(&RTuple) -> Vec<RTuple>) -> BTreeSet<RTuple> {
    let mut seen = BTreeSet::new();
    let mut stack = step(start);
    while let Some(x) = stack.pop() {
        if seen.insert(x.clone()) {
            stack.extend(step(&x));
        }
    }
    seen
}

/// Every r-subset of `[t]` in colex order.
pub fn all_tuples(r: usize, t: u32) -> Result<Vec<RTuple>> {
    if r < 2 {
        return Err(Error::InvalidUniformity(r));
    }
    let total = binomial(t as u64, r as u64);
    (1..=total).map(|k| colex_unrank(r, k)).collect()
}

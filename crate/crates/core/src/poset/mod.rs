//! Finite strict partial orders, the named posets of the trace problems, and
//! the structural quantities the bounds are phrased in.

mod iso;
mod json;
mod named;

pub use iso::{canonical_id, is_isomorphic};
pub use json::{parse_poset_arg, PosetJson};
pub use named::{
    butterfly, chain, diamond, k_r1s, k_rs, p_m_gadget, tree_from_hasse, vee, wedge, NamedPoset, MAX_GADGET_M,
};

use std::fmt;

use crate::error::{Error, Result};

/// Hard cap on poset size; relations are stored as 64-bit rows.
pub const MAX_POSET: usize = 64;

/// A strict partial order on `0..p`.
///
/// `above[i]` has bit `j` set iff `i < j`; `below` is the transpose.
#[derive(Clone)]
pub struct Poset {
    above: Vec<u64>,
    below: Vec<u64>,
    name: Option<String>,
}

/// Cover relation: `(i, j)` means `j` covers `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HasseDiagram {
    pub edges: Vec<(usize, usize)>,
}

impl Poset {
    /// Builds the transitive closure of `pairs` and checks the axioms.
    pub fn from_relation(p: usize, pairs: &[(usize, usize)]) -> Result<Poset> {
        if p > MAX_POSET {
            return Err(Error::InvalidPoset(format!("{p} elements exceeds the cap of {MAX_POSET}")));
        }
        let mut above = vec![0u64; p];
        for &(i, j) in pairs {
            if i >= p || j >= p {
                return Err(Error::InvalidPoset(format!("pair ({i},{j}) out of range 0..{p}")));
            }
            above[i] |= 1 << j;
        }
        // Warshall closure on bit rows.
        for k in 0..p {
            for i in 0..p {
                if above[i] >> k & 1 == 1 {
                    above[i] |= above[k];
                }
            }
        }
        for (i, row) in above.iter().enumerate() {
            if row >> i & 1 == 1 {
                return Err(Error::InvalidPoset(format!("element {i} lies on a cycle")));
            }
        }
        Ok(Self::from_above(above))
    }

    fn from_above(above: Vec<u64>) -> Poset {
        let p = above.len();
        let mut below = vec![0u64; p];
        for (i, row) in above.iter().enumerate() {
            let mut r = *row;
            while r != 0 {
                let j = r.trailing_zeros() as usize;
                below[j] |= 1 << i;
                r &= r - 1;
            }
        }
        Poset { above, below, name: None }
    }

    /// Checks irreflexivity, antisymmetry and transitivity of a full relation.
    pub fn check_axioms(&self) -> Result<()> {
        let p = self.len();
        for i in 0..p {
            if self.lt(i, i) {
                return Err(Error::InvalidPoset(format!("{i} < {i}")));
            }
            for j in 0..p {
                if self.lt(i, j) && self.lt(j, i) {
                    return Err(Error::InvalidPoset(format!("{i} < {j} < {i}")));
                }
                if self.lt(i, j) && self.above[j] & !self.above[i] != 0 {
                    return Err(Error::InvalidPoset(format!("not transitive through {i} < {j}")));
                }
            }
        }
        Ok(())
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Poset {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn len(&self) -> usize {
        self.above.len()
    }

    pub fn is_empty(&self) -> bool {
        self.above.is_empty()
    }

    #[inline]
    pub fn lt(&self, i: usize, j: usize) -> bool {
        self.above[i] >> j & 1 == 1
    }

    /// Elements strictly above `i`, as a bit row.
    pub fn above(&self, i: usize) -> u64 {
        self.above[i]
    }

    pub fn below(&self, i: usize) -> u64 {
        self.below[i]
    }

    /// All pairs `(i, j)` with `i < j`.
    pub fn relation(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in 0..self.len() {
                if self.lt(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn hasse(&self) -> HasseDiagram {
        let mut edges = Vec::new();
        for i in 0..self.len() {
            for j in 0..self.len() {
                if self.lt(i, j) && self.above[i] & self.below[j] == 0 {
                    edges.push((i, j));
                }
            }
        }
        HasseDiagram { edges }
    }

    /// `E(P)`: number of Hasse edges.
    pub fn edge_count(&self) -> usize {
        self.hasse().edges.len()
    }

    /// Number of elements in a longest chain.
    pub fn height(&self) -> usize {
        let order = self.linear_extension();
        let mut best = vec![1usize; self.len()];
        for &j in &order {
            let mut r = self.below[j];
            while r != 0 {
                let i = r.trailing_zeros() as usize;
                best[j] = best[j].max(best[i] + 1);
                r &= r - 1;
            }
        }
        best.into_iter().max().unwrap_or(0)
    }

    /// Elements ordered so that every element follows everything below it.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by_key(|&i| (self.below[i].count_ones(), i));
        idx
    }

    pub fn is_linear_extension(&self, order: &[usize]) -> bool {
        let mut pos = vec![usize::MAX; self.len()];
        for (k, &e) in order.iter().enumerate() {
            pos[e] = k;
        }
        self.relation().iter().all(|&(i, j)| pos[i] < pos[j])
    }

    /// Order reversal.
    pub fn dual(&self) -> Poset {
        Poset {
            above: self.below.clone(),
            below: self.above.clone(),
            name: self.name.as_ref().map(|n| format!("dual({n})")),
        }
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.above[i] == 0).collect()
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.below[i] == 0).collect()
    }

    pub fn has_unique_max(&self) -> bool {
        self.maximal_elements().len() == 1
    }

    /// The Hasse diagram, read as an undirected graph, is a tree.
    pub fn is_tree_poset(&self) -> bool {
        let p = self.len();
        if p == 0 {
            return false;
        }
        let edges = self.hasse().edges;
        if edges.len() != p - 1 {
            return false;
        }
        let mut parent: Vec<usize> = (0..p).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        for (a, b) in edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    }

    /// Induced subposet on `keep`, relabeled `0..keep.len()` in the given order.
    pub fn restrict(&self, keep: &[usize]) -> Poset {
        let above = keep
            .iter()
            .map(|&i| keep.iter().enumerate().filter(|&(_, &j)| self.lt(i, j)).fold(0u64, |acc, (k, _)| acc | 1 << k))
            .collect();
        Poset::from_above(above)
    }

    /// `T^k`: the unique maximum replaced by an antichain of `k` elements.
    pub fn t_power(&self, k: usize) -> Result<Poset> {
        if k == 0 {
            return Err(Error::Param("t_power needs k >= 1".into()));
        }
        self.require_rooted_tree("t_power")?;
        let top = self.maximal_elements()[0];
        let rest: Vec<usize> = (0..self.len()).filter(|&i| i != top).collect();
        let base = rest.len();
        let mut pairs = self.restrict(&rest).relation();
        for t in 0..base {
            for m in 0..k {
                pairs.push((t, base + m));
            }
        }
        let out = Poset::from_relation(base + k, &pairs)?;
        Ok(match &self.name {
            Some(n) => out.with_name(format!("{n}^{k}")),
            None => out,
        })
    }

    /// `T^{⊗r}`: every child subtree of every node is repeated `r` times.
    pub fn t_otimes(&self, r: usize) -> Result<Poset> {
        if r == 0 {
            return Err(Error::Param("t_otimes needs r >= 1".into()));
        }
        self.require_rooted_tree("t_otimes")?;
        let top = self.maximal_elements()[0];
        let mut pairs = Vec::new();
        let mut next = 0usize;
        self.blow_up(top, r, &mut next, &mut pairs);
        let out = Poset::from_relation(next, &pairs)?;
        Ok(match &self.name {
            Some(n) => out.with_name(format!("{n}^(x{r})")),
            None => out,
        })
    }

    /// Emits the blown-up subtree below `node`; children are numbered before
    /// their parent so the output stays bottom-up.
    fn blow_up(&self, node: usize, r: usize, next: &mut usize, pairs: &mut Vec<(usize, usize)>) -> usize {
        let mut child_tops = Vec::new();
        for child in self.lower_covers(node) {
            for _ in 0..r {
                child_tops.push(self.blow_up(child, r, next, pairs));
            }
        }
        let me = *next;
        *next += 1;
        for c in child_tops {
            pairs.push((c, me));
        }
        me
    }

    pub fn lower_covers(&self, j: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.lt(i, j) && self.above[i] & self.below[j] == 0).collect()
    }

    fn require_rooted_tree(&self, op: &str) -> Result<()> {
        if !self.has_unique_max() {
            return Err(Error::Param(format!("{op} needs a poset with a unique maximum")));
        }
        if !self.is_tree_poset() {
            return Err(Error::Param(format!("{op} needs a tree poset")));
        }
        Ok(())
    }

    /// Short human label: the given name or `P<p>`.
    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| format!("P<{}>", self.len()))
    }
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.above == other.above
    }
}

impl Eq for Poset {}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poset({}; {:?})", self.label(), self.hasse().edges)
    }
}

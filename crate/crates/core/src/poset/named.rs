use serde::{Deserialize, Serialize};

use super::Poset;
use crate::error::{Error, Result};

/// The poset families that have constructors.
///
/// Elements are numbered bottom-up, left to right, in the order the posets
/// are usually written: the butterfly is `a, b < c, d` with `a = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", content = "params", rename_all = "snake_case")]
pub enum NamedPoset {
    /// `P_k`, a chain on `k` elements.
    Chain {
        k: usize,
    },
    /// `∨_s`: one element below `s` others.
    Vee {
        s: usize,
    },
    /// `∧_r`: `r` elements below one.
    Wedge {
        r: usize,
    },
    Butterfly,
    Diamond,
    /// `K_{r,s}`: `r` minimal elements all below `s` maximal ones.
    #[serde(rename = "k_rs")]
    KRs {
        r: usize,
        s: usize,
    },
    /// `K_{r,1,s}`: `a_1..a_r < c < b_1..b_s`.
    #[serde(rename = "k_r1s")]
    KR1s {
        r: usize,
        s: usize,
    },
    /// `P_m`: `a < b_1, ..., b_{2^m+1}`, and one `c` above each pair of `b`s.
    #[serde(rename = "p_m")]
    PmGadget {
        m: usize,
    },
    /// Tree poset from its cover pairs `(lower, upper)`.
    Tree {
        p: usize,
        edges: Vec<(usize, usize)>,
    },
}

impl NamedPoset {
    pub fn build(&self) -> Result<Poset> {
        match *self {
            NamedPoset::Chain { k } => chain(k),
            NamedPoset::Vee { s } => vee(s),
            NamedPoset::Wedge { r } => wedge(r),
            NamedPoset::Butterfly => Ok(butterfly()),
            NamedPoset::Diamond => Ok(diamond()),
            NamedPoset::KRs { r, s } => k_rs(r, s),
            NamedPoset::KR1s { r, s } => k_r1s(r, s),
            NamedPoset::PmGadget { m } => p_m_gadget(m),
            NamedPoset::Tree { p, ref edges } => tree_from_hasse(p, edges),
        }
    }
}

fn positive(what: &str, v: usize) -> Result<()> {
    if v == 0 {
        return Err(Error::Param(format!("{what} must be at least 1")));
    }
    Ok(())
}

pub fn chain(k: usize) -> Result<Poset> {
    positive("chain length", k)?;
    let pairs: Vec<_> = (1..k).map(|i| (i - 1, i)).collect();
    Ok(Poset::from_relation(k, &pairs)?.with_name(format!("P{k}")))
}

pub fn vee(s: usize) -> Result<Poset> {
    positive("s", s)?;
    let pairs: Vec<_> = (1..=s).map(|j| (0, j)).collect();
    Ok(Poset::from_relation(s + 1, &pairs)?.with_name(format!("V{s}")))
}

pub fn wedge(r: usize) -> Result<Poset> {
    positive("r", r)?;
    let pairs: Vec<_> = (0..r).map(|i| (i, r)).collect();
    Ok(Poset::from_relation(r + 1, &pairs)?.with_name(format!("W{r}")))
}

pub fn butterfly() -> Poset {
    k_rs(2, 2).expect("valid").with_name("B")
}

pub fn diamond() -> Poset {
    Poset::from_relation(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).expect("valid").with_name("D")
}

pub fn k_rs(r: usize, s: usize) -> Result<Poset> {
    positive("r", r)?;
    positive("s", s)?;
    let mut pairs = Vec::new();
    for i in 0..r {
        for j in 0..s {
            pairs.push((i, r + j));
        }
    }
    Ok(Poset::from_relation(r + s, &pairs)?.with_name(format!("K{r},{s}")))
}

pub fn k_r1s(r: usize, s: usize) -> Result<Poset> {
    positive("r", r)?;
    positive("s", s)?;
    let c = r;
    let mut pairs: Vec<_> = (0..r).map(|i| (i, c)).collect();
    pairs.extend((0..s).map(|j| (c, r + 1 + j)));
    Ok(Poset::from_relation(r + 1 + s, &pairs)?.with_name(format!("K{r},1,{s}")))
}

/// Largest `m` accepted by [`p_m_gadget`]; `m = 3` would already need 46 elements.
pub const MAX_GADGET_M: usize = 3;

pub fn p_m_gadget(m: usize) -> Result<Poset> {
    positive("m", m)?;
    if m > MAX_GADGET_M {
        return Err(Error::Param(format!("gadget P_{m} exceeds the size cap (m <= {MAX_GADGET_M})")));
    }
    let bs = (1usize << m) + 1;
    let mut pairs: Vec<_> = (1..=bs).map(|b| (0, b)).collect();
    let mut next = bs + 1;
    for k in 1..=bs {
        for l in k + 1..=bs {
            pairs.push((k, next));
            pairs.push((l, next));
            next += 1;
        }
    }
    Ok(Poset::from_relation(next, &pairs)?.with_name(format!("Pm{m}")))
}

/// Tree poset from cover pairs. The pairs must be exactly the covers of the
/// order they generate and form a tree.
pub fn tree_from_hasse(p: usize, edges: &[(usize, usize)]) -> Result<Poset> {
    let poset = Poset::from_relation(p, edges)?;
    let mut given: Vec<_> = edges.to_vec();
    given.sort_unstable();
    given.dedup();
    let mut covers = poset.hasse().edges;
    covers.sort_unstable();
    if given != covers {
        return Err(Error::InvalidPoset("edge list contains non-cover pairs".into()));
    }
    if !poset.is_tree_poset() {
        return Err(Error::InvalidPoset("cover graph is not a tree".into()));
    }
    Ok(poset.with_name(format!("T{p}")))
}

//! Copies of posets in set families, trace-freeness, and shattering.
//!
//! A copy is non-induced: `p <_P q` must map to strict inclusion, while
//! incomparable poset elements may land on comparable sets.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::poset::Poset;
use crate::sets::{k_subsets, Family, SubsetMask};

/// Injective map from poset elements to family members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingWitness {
    pub map: Vec<SubsetMask>,
}

impl EmbeddingWitness {
    /// Replays the witness: injective, members of `family`, order-respecting.
    pub fn validate(&self, family: &Family, poset: &Poset) -> Result<(), String> {
        if self.map.len() != poset.len() {
            return Err(format!("witness maps {} elements, poset has {}", self.map.len(), poset.len()));
        }
        for (i, s) in self.map.iter().enumerate() {
            if !family.contains(*s) {
                return Err(format!("element {i} maps to {s}, not a member"));
            }
            for (j, t) in self.map.iter().enumerate().skip(i + 1) {
                if s == t {
                    return Err(format!("elements {i} and {j} share the set {s}"));
                }
            }
        }
        for (i, j) in poset.relation() {
            let (a, b) = (self.map[i], self.map[j]);
            if !(a.is_subset_of(b) && a != b) {
                return Err(format!("{i} < {j} but {a} is not a proper subset of {b}"));
            }
        }
        Ok(())
    }
}

/// A trace on which the family contains the poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceViolation {
    /// The offending subset `L`.
    pub l_set: SubsetMask,
    /// Copy inside `F|_L`.
    pub witness: EmbeddingWitness,
    /// For each poset element, the smallest member of `F` whose trace is used.
    pub preimages: Vec<SubsetMask>,
}

impl TraceViolation {
    pub fn validate(&self, family: &Family, poset: &Poset) -> Result<(), String> {
        let tr = family.trace(self.l_set).map_err(|e| e.to_string())?;
        self.witness.validate(&tr, poset)?;
        for (pre, img) in self.preimages.iter().zip(&self.witness.map) {
            if !family.contains(*pre) || pre.bits() & self.l_set.bits() != img.bits() {
                return Err(format!("preimage {pre} does not trace to {img}"));
            }
        }
        Ok(())
    }
}

/// JSON form of a witness: `{"map": [{"poset_elem": 0, "set": [1]}], "L": [1, 2]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub map: Vec<WitnessEntry>,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub l_set: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub poset_elem: usize,
    pub set: Vec<usize>,
}

impl WitnessJson {
    pub fn from_witness(w: &EmbeddingWitness, l_set: Option<SubsetMask>) -> Self {
        WitnessJson {
            map: w.map.iter().enumerate().map(|(i, s)| WitnessEntry { poset_elem: i, set: s.elements() }).collect(),
            l_set: l_set.map(|l| l.elements()),
        }
    }

    pub fn to_witness(&self, n: usize) -> crate::Result<(EmbeddingWitness, Option<SubsetMask>)> {
        let mut entries = self.map.clone();
        entries.sort_by_key(|e| e.poset_elem);
        if entries.iter().enumerate().any(|(i, e)| e.poset_elem != i) {
            return Err(crate::Error::Format("witness must map every poset element exactly once".into()));
        }
        let map = entries.iter().map(|e| SubsetMask::from_elements(n, &e.set)).collect::<crate::Result<Vec<_>>>()?;
        let l = match &self.l_set {
            Some(l) => Some(SubsetMask::from_elements(n, l)?),
            None => None,
        };
        Ok((EmbeddingWitness { map }, l))
    }
}

/// Backtracking matcher over a slice of distinct masks.
pub(crate) struct Matcher<'a> {
    masks: &'a [u32],
    poset: &'a Poset,
    sub: Vec<u32>,
    sup: Vec<u32>,
    need_down: Vec<u32>,
    need_up: Vec<u32>,
}

impl<'a> Matcher<'a> {
    pub(crate) fn new(masks: &'a [u32], poset: &'a Poset) -> Self {
        let m = masks.len();
        let mut sub = vec![0u32; m];
        let mut sup = vec![0u32; m];
        for i in 0..m {
            for j in 0..m {
                if i != j && masks[i] & masks[j] == masks[i] {
                    // masks[i] ⊊ masks[j]
                    sub[j] += 1;
                    sup[i] += 1;
                }
            }
        }
        let need_down = (0..poset.len()).map(|e| poset.below(e).count_ones()).collect();
        let need_up = (0..poset.len()).map(|e| poset.above(e).count_ones()).collect();
        Matcher { masks, poset, sub, sup, need_down, need_up }
    }

    fn feasible(&self, e: usize, j: usize) -> bool {
        self.sub[j] >= self.need_down[e] && self.sup[j] >= self.need_up[e]
    }

    fn fits(&self, order: &[usize], assigned: &[usize], e: usize, j: usize) -> bool {
        let s = self.masks[j];
        for (k, &d) in order[..assigned.len()].iter().enumerate() {
            let t = self.masks[assigned[k]];
            if assigned[k] == j {
                return false;
            }
            if self.poset.lt(d, e) && !(t & s == t && t != s) {
                return false;
            }
            if self.poset.lt(e, d) && !(t & s == s && t != s) {
                return false;
            }
        }
        true
    }

    fn go(&self, order: &[usize], assigned: &mut Vec<usize>) -> bool {
        let depth = assigned.len();
        if depth == order.len() {
            return true;
        }
        let e = order[depth];
        for j in 0..self.masks.len() {
            if self.feasible(e, j) && self.fits(order, assigned, e, j) {
                assigned.push(j);
                if self.go(order, assigned) {
                    return true;
                }
                assigned.pop();
            }
        }
        false
    }

    /// Lexicographically smallest copy in element-index order, as member indices.
    pub(crate) fn find(&self) -> Option<Vec<usize>> {
        let p = self.poset.len();
        if p > self.masks.len() {
            return None;
        }
        let order: Vec<usize> = (0..p).collect();
        let mut assigned = Vec::with_capacity(p);
        self.go(&order, &mut assigned).then_some(assigned)
    }

    /// Whether some copy uses member `pinned`.
    pub(crate) fn exists_using(&self, pinned: usize) -> bool {
        let p = self.poset.len();
        if p > self.masks.len() {
            return false;
        }
        for e in 0..p {
            if !self.feasible(e, pinned) {
                continue;
            }
            let mut order = vec![e];
            order.extend((0..p).filter(|&x| x != e));
            let mut assigned = vec![pinned];
            if self.go(&order, &mut assigned) {
                return true;
            }
        }
        false
    }
}

/// Whether `masks` (distinct, any order) contain a copy of `poset`.
pub(crate) fn contains_copy(masks: &[u32], poset: &Poset) -> bool {
    Matcher::new(masks, poset).find().is_some()
}

/// Finds a copy of `poset` in `family`, smallest in lexicographic order of the
/// member masks assigned to elements `0, 1, ...`.
pub fn find_copy(family: &Family, poset: &Poset) -> Option<EmbeddingWitness> {
    let masks = family.masks();
    let idx = Matcher::new(masks, poset).find()?;
    let n = family.n();
    Some(EmbeddingWitness { map: idx.into_iter().map(|j| SubsetMask::new(n, masks[j]).expect("member")).collect() })
}

pub fn is_p_free(family: &Family, poset: &Poset) -> bool {
    find_copy(family, poset).is_none()
}

fn violation_on(family: &Family, poset: &Poset, l: u32) -> Option<TraceViolation> {
    let n = family.n();
    let tr = family.trace_bits(l);
    let w = find_copy(&tr, poset)?;
    let preimages = w
        .map
        .iter()
        .map(|img| {
            let pre =
                family.masks().iter().copied().find(|&m| m & l == img.bits()).expect("trace member has a preimage");
            SubsetMask::new(n, pre).expect("member")
        })
        .collect();
    Some(TraceViolation { l_set: SubsetMask::new(n, l).expect("subset"), witness: w, preimages })
}

/// Checks every `l`-subset `L`; on failure returns the violation at the
/// lexicographically smallest `L`.
pub fn l_trace_violation(family: &Family, poset: &Poset, l: usize) -> Option<TraceViolation> {
    let n = family.n();
    if l > n || !trace_can_hold(poset, l) {
        return None;
    }
    let subsets = k_subsets(n, l);
    subsets.par_iter().find_map_first(|&x| violation_on(family, poset, x))
}

pub fn is_l_trace_p_free(family: &Family, poset: &Poset, l: usize) -> bool {
    l_trace_violation(family, poset, l).is_none()
}

/// Whether `2^[l]` is large enough to hold a copy at all.
pub(crate) fn trace_can_hold(poset: &Poset, l: usize) -> bool {
    let room = if l >= 63 { u64::MAX } else { 1u64 << l };
    (poset.len() as u64) <= room && poset.height() <= l + 1
}

/// The `l` values that need checking for trace-freeness, largest first.
///
/// Being `E(P)`-trace free already implies `l`-trace freeness for every
/// `l >= E(P)`, so only `l <= min(n, E(P))` matters.
pub fn trace_levels(n: usize, poset: &Poset) -> Vec<usize> {
    let top = n.min(poset.edge_count());
    (0..=top).rev().filter(|&l| trace_can_hold(poset, l)).collect()
}

/// Trace-free: `l`-trace free for every `l <= n`, checked on `l <= E(P)`.
pub fn trace_violation(family: &Family, poset: &Poset) -> Option<TraceViolation> {
    let found = trace_levels(family.n(), poset).into_iter().find_map(|l| l_trace_violation(family, poset, l));
    #[cfg(debug_assertions)]
    if family.n() <= 5 {
        debug_assert_eq!(found.is_none(), trace_violation_naive(family, poset).is_none());
    }
    found
}

pub fn is_trace_p_free(family: &Family, poset: &Poset) -> bool {
    trace_violation(family, poset).is_none()
}

/// Reference predicate sweeping every `l` in `0..=n`.
pub fn trace_violation_naive(family: &Family, poset: &Poset) -> Option<TraceViolation> {
    (0..=family.n()).find_map(|l| k_subsets(family.n(), l).into_iter().find_map(|x| violation_on(family, poset, x)))
}

/// A `k`-set `X` with `F|_X = 2^X`, the lexicographically smallest one.
pub fn find_shattered_set(family: &Family, k: usize) -> Option<SubsetMask> {
    let n = family.n();
    if k > n || (k < 32 && family.len() < (1usize << k)) {
        return None;
    }
    k_subsets(n, k).into_iter().find(|&x| shatters(family.masks(), x)).map(|x| SubsetMask::new(n, x).expect("subset"))
}

pub(crate) fn shatters(masks: &[u32], x: u32) -> bool {
    let k = x.count_ones();
    let mut seen = std::collections::HashSet::with_capacity(1 << k);
    for &m in masks {
        seen.insert(m & x);
    }
    seen.len() == 1usize << k
}

/// Largest size of a shattered set; `None` for the empty family.
pub fn vc_dim(family: &Family) -> Option<usize> {
    if family.is_empty() {
        return None;
    }
    // Shattering is inherited by subsets, so the sizes form an initial segment.
    let mut k = 0;
    while k < family.n() && find_shattered_set(family, k + 1).is_some() {
        k += 1;
    }
    Some(k)
}

#[cfg(test)]
mod tests;

//! Subsets of a small ground set and families of them.
//!
//! A subset of `[n] = {1, ..., n}` is a machine word with bit `j` standing for
//! element `j + 1`. Families are sorted, duplicate-free vectors of such words
//! and every operator returns a new family.

mod canon;
mod json;

pub use canon::{
    all_permutations, apply_permutation, canonical_form, canonical_form_report, CanonicalForm, EXACT_CANONICAL_MAX_N,
};
pub use json::FamilyJson;

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported ground set.
pub const MAX_N: usize = 30;

/// The ground set `[n]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundSet(u8);

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::GroundSet(n));
        }
        Ok(GroundSet(n as u8))
    }

    pub fn n(self) -> usize {
        self.0 as usize
    }

    /// Mask of the whole ground set.
    pub fn full(self) -> SubsetMask {
        SubsetMask { bits: full_mask(self.n()), n: self.0 }
    }

    pub fn empty(self) -> SubsetMask {
        SubsetMask { bits: 0, n: self.0 }
    }
}

pub(crate) fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// A subset of `[n]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask {
    bits: u32,
    n: u8,
}

impl SubsetMask {
    pub fn new(n: usize, bits: u32) -> Result<Self> {
        let g = GroundSet::new(n)?;
        if bits & !full_mask(n) != 0 {
            return Err(Error::OutOfRange { bits: bits as u64, n });
        }
        Ok(SubsetMask { bits, n: g.0 })
    }

    /// Builds a subset from 1-based element labels.
    pub fn from_elements(n: usize, elements: &[usize]) -> Result<Self> {
        GroundSet::new(n)?;
        let mut bits = 0u32;
        for &e in elements {
            if e == 0 || e > n {
                return Err(Error::Param(format!("element {e} not in [{n}]")));
            }
            bits |= 1 << (e - 1);
        }
        SubsetMask::new(n, bits)
    }

    pub(crate) fn from_raw(n: usize, bits: u32) -> Self {
        debug_assert!(bits & !full_mask(n) == 0);
        SubsetMask { bits, n: n as u8 }
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn n(self) -> usize {
        self.n as usize
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    /// 1-based membership test.
    pub fn contains(self, element: usize) -> bool {
        element >= 1 && element <= self.n() && self.bits & (1 << (element - 1)) != 0
    }

    /// Sorted 1-based elements.
    pub fn elements(self) -> Vec<usize> {
        elements_of(self.bits)
    }

    pub fn is_subset_of(self, other: SubsetMask) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn complement(self) -> SubsetMask {
        SubsetMask { bits: !self.bits & full_mask(self.n()), n: self.n }
    }

    /// `F|_X = F ∩ X`.
    pub fn trace(self, x: SubsetMask) -> Result<SubsetMask> {
        check_same(self.n(), x.n())?;
        Ok(SubsetMask { bits: self.bits & x.bits, n: self.n })
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub(crate) fn elements_of(bits: u32) -> Vec<usize> {
    let mut out = Vec::with_capacity(bits.count_ones() as usize);
    let mut b = bits;
    while b != 0 {
        let j = b.trailing_zeros() as usize;
        out.push(j + 1);
        b &= b - 1;
    }
    out
}

fn check_same(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::GroundSetMismatch { left, right });
    }
    Ok(())
}

/// Binomial coefficient; exact for every argument used in this crate.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// `Σ_{i=0}^{k} C(n, i)`, zero for negative `k`.
pub fn binomial_prefix_sum(n: usize, k: i64) -> u64 {
    if k < 0 {
        return 0;
    }
    (0..=(k as usize).min(n)).map(|i| binomial(n, i)).sum()
}

/// All `k`-subsets of `[n]` in lexicographic order of their sorted element lists.
pub fn k_subsets(n: usize, k: usize) -> Vec<u32> {
    fn rec(start: usize, n: usize, left: usize, acc: u32, out: &mut Vec<u32>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for e in start..n {
            if n - e < left {
                break;
            }
            rec(e + 1, n, left - 1, acc | (1 << e), out);
        }
    }
    let mut out = Vec::with_capacity(binomial(n, k) as usize);
    if k <= n {
        rec(0, n, k, 0, &mut out);
    }
    out
}

/// Compares two masks by their sorted element lists.
pub fn lex_cmp(a: u32, b: u32) -> std::cmp::Ordering {
    let (ea, eb) = (elements_of(a), elements_of(b));
    ea.cmp(&eb)
}

/// A duplicate-free family of subsets of `[n]`, sorted by numeric mask value.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Family {
    n: u8,
    members: Vec<u32>,
}

impl Family {
    /// Sorts and deduplicates `masks`; fails if any mask leaves `[n]`.
    pub fn new(n: usize, masks: impl IntoIterator<Item = u32>) -> Result<Self> {
        GroundSet::new(n)?;
        let full = full_mask(n);
        let mut members: Vec<u32> = masks.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&m| m & !full != 0) {
            return Err(Error::OutOfRange { bits: bad as u64, n });
        }
        members.sort_unstable();
        members.dedup();
        Ok(Family { n: n as u8, members })
    }

    pub(crate) fn from_sorted_unchecked(n: usize, members: Vec<u32>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Family { n: n as u8, members }
    }

    pub(crate) fn from_masks_unchecked(n: usize, mut members: Vec<u32>) -> Self {
        members.sort_unstable();
        members.dedup();
        Family { n: n as u8, members }
    }

    /// Builds a family from 1-based element lists.
    pub fn from_sets<S: AsRef<[usize]>>(n: usize, sets: &[S]) -> Result<Self> {
        let masks = sets
            .iter()
            .map(|s| SubsetMask::from_elements(n, s.as_ref()).map(|m| m.bits()))
            .collect::<Result<Vec<_>>>()?;
        Family::new(n, masks)
    }

    pub fn from_subsets(n: usize, sets: impl IntoIterator<Item = SubsetMask>) -> Result<Self> {
        let mut masks = Vec::new();
        for s in sets {
            check_same(n, s.n())?;
            masks.push(s.bits());
        }
        Family::new(n, masks)
    }

    pub fn empty(n: usize) -> Result<Self> {
        Family::new(n, std::iter::empty())
    }

    /// The whole cube `2^[n]`.
    pub fn cube(n: usize) -> Result<Self> {
        GroundSet::new(n)?;
        if n > 24 {
            return Err(Error::Capability(format!("2^[{n}] is too large to materialize")));
        }
        Ok(Family::from_sorted_unchecked(n, (0..1u32 << n).collect()))
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn ground(&self) -> GroundSet {
        GroundSet(self.n)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Raw member masks, strictly increasing.
    pub fn masks(&self) -> &[u32] {
        &self.members
    }

    pub fn into_masks(self) -> Vec<u32> {
        self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = SubsetMask> + '_ {
        let n = self.n();
        self.members.iter().map(move |&b| SubsetMask::from_raw(n, b))
    }

    pub fn contains_mask(&self, bits: u32) -> bool {
        self.members.binary_search(&bits).is_ok()
    }

    pub fn contains(&self, s: SubsetMask) -> bool {
        s.n() == self.n() && self.contains_mask(s.bits())
    }

    /// Sorted 1-based element lists of the members.
    pub fn to_sets(&self) -> Vec<Vec<usize>> {
        self.members.iter().map(|&b| elements_of(b)).collect()
    }

    pub fn with(&self, bits: u32) -> Result<Family> {
        let mut m = self.members.clone();
        m.push(bits);
        Family::new(self.n(), m)
    }

    pub fn without(&self, bits: u32) -> Family {
        let members = self.members.iter().copied().filter(|&b| b != bits).collect();
        Family::from_sorted_unchecked(self.n(), members)
    }

    pub fn union(&self, other: &Family) -> Result<Family> {
        check_same(self.n(), other.n())?;
        Ok(Family::from_masks_unchecked(self.n(), self.members.iter().chain(other.members.iter()).copied().collect()))
    }

    pub fn is_subfamily_of(&self, other: &Family) -> bool {
        self.n == other.n && self.members.iter().all(|&m| other.contains_mask(m))
    }

    /// `F|_X = {F ∩ X : F ∈ F}` with duplicates collapsed.
    pub fn trace(&self, x: SubsetMask) -> Result<Family> {
        check_same(self.n(), x.n())?;
        Ok(self.trace_bits(x.bits()))
    }

    pub(crate) fn trace_bits(&self, x: u32) -> Family {
        Family::from_masks_unchecked(self.n(), self.members.iter().map(|&m| m & x).collect())
    }

    /// One down-compression step `D_i` (1-based `i`).
    pub fn down_compress(&self, i: usize) -> Result<Family> {
        if i == 0 || i > self.n() {
            return Err(Error::Param(format!("element {i} not in [{}]", self.n())));
        }
        let bit = 1u32 << (i - 1);
        let out = self
            .members
            .iter()
            .map(|&f| {
                let d = f & !bit;
                if d != f && !self.contains_mask(d) {
                    d
                } else {
                    f
                }
            })
            .collect();
        Ok(Family::from_masks_unchecked(self.n(), out))
    }

    /// Applies `D_1, ..., D_n` cyclically until nothing moves.
    pub fn compress_to_downset(&self) -> Family {
        let mut cur = self.clone();
        loop {
            let mut changed = false;
            for i in 1..=self.n() {
                let next = cur.down_compress(i).expect("element in range");
                if next != cur {
                    changed = true;
                    cur = next;
                }
            }
            if !changed {
                return cur;
            }
        }
    }

    /// `C ⊂ D ∈ F` implies `C ∈ F`. Checking lower covers suffices.
    pub fn is_downward_closed(&self) -> bool {
        self.members.iter().all(|&d| {
            let mut b = d;
            while b != 0 {
                let low = b & b.wrapping_neg();
                if !self.contains_mask(d & !low) {
                    return false;
                }
                b &= b - 1;
            }
            true
        })
    }

    pub fn is_upward_closed(&self) -> bool {
        self.complement().is_downward_closed()
    }

    /// Smallest downward-closed superfamily.
    pub fn closure_down(&self) -> Family {
        let mut out: Vec<u32> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        let mut stack: Vec<u32> = self.members.clone();
        while let Some(s) = stack.pop() {
            if !seen.insert(s) {
                continue;
            }
            out.push(s);
            let mut b = s;
            while b != 0 {
                let low = b & b.wrapping_neg();
                stack.push(s & !low);
                b &= b - 1;
            }
        }
        Family::from_masks_unchecked(self.n(), out)
    }

    /// Smallest upward-closed superfamily.
    pub fn closure_up(&self) -> Family {
        self.complement().closure_down().complement()
    }

    /// All sets obtained from a member by deleting one element.
    pub fn shadow(&self) -> Family {
        let mut out = Vec::new();
        for &s in &self.members {
            let mut b = s;
            while b != 0 {
                let low = b & b.wrapping_neg();
                out.push(s & !low);
                b &= b - 1;
            }
        }
        Family::from_masks_unchecked(self.n(), out)
    }

    /// Replaces every member `F` by `[n] \ F`.
    pub fn complement(&self) -> Family {
        let full = full_mask(self.n());
        Family::from_masks_unchecked(self.n(), self.members.iter().map(|&m| !m & full).collect())
    }

    /// Members of size exactly `k`.
    pub fn level(&self, k: usize) -> Family {
        let m = self.members.iter().copied().filter(|m| m.count_ones() as usize == k).collect();
        Family::from_sorted_unchecked(self.n(), m)
    }

    /// Family image under a permutation of the ground set (0-based images).
    pub fn permute(&self, perm: &[u8]) -> Family {
        Family::from_masks_unchecked(self.n(), self.members.iter().map(|&m| apply_permutation(m, perm)).collect())
    }

    /// True when no member strictly contains another.
    pub fn is_antichain(&self) -> bool {
        for (i, &a) in self.members.iter().enumerate() {
            for &b in &self.members[i + 1..] {
                if a & b == a || a & b == b {
                    return false;
                }
            }
        }
        true
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Family[n={}]", self.n)?;
        f.debug_list().entries(self.iter()).finish()
    }
}

/// `C([n], k)`.
pub fn level_family(n: usize, k: usize) -> Result<Family> {
    GroundSet::new(n)?;
    if k > n {
        return Err(Error::Param(format!("level {k} exceeds n = {n}")));
    }
    Ok(Family::from_masks_unchecked(n, k_subsets(n, k)))
}

/// `C([n], ≤ k)`.
pub fn levels_at_most(n: usize, k: usize) -> Result<Family> {
    levels_between(n, 0, k)
}

/// `C([n], ≥ k)`.
pub fn levels_at_least(n: usize, k: usize) -> Result<Family> {
    levels_between(n, k, n)
}

/// Union of the levels `lo..=hi`.
pub fn levels_between(n: usize, lo: usize, hi: usize) -> Result<Family> {
    GroundSet::new(n)?;
    if lo > n || hi > n {
        return Err(Error::Param(format!("levels {lo}..={hi} exceed n = {n}")));
    }
    let mut out = Vec::new();
    for k in lo..=hi {
        out.extend(k_subsets(n, k));
    }
    Ok(Family::from_masks_unchecked(n, out))
}

#[cfg(test)]
mod tests;

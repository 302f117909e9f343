//! Downward-closed families, generated from antichains of maximal members.

use std::ops::ControlFlow;

use super::bits::{Closures, LatticeBits};
use crate::error::{Error, Result};
use crate::sets::{all_permutations, apply_permutation, Family};

/// Largest `n` the downset machinery handles (families live in 256-bit sets).
pub const MAX_DOWNSET_N: usize = 8;

/// Restricts which downsets are produced.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DownsetFilter {
    pub min_size: Option<usize>,
    pub max_size: Option<usize>,
    /// Largest allowed member size.
    pub max_level: Option<usize>,
}

impl DownsetFilter {
    pub fn size(m: usize) -> Self {
        DownsetFilter { min_size: Some(m), max_size: Some(m), max_level: None }
    }

    fn accepts(&self, size: usize) -> bool {
        self.min_size.is_none_or(|lo| size >= lo) && self.max_size.is_none_or(|hi| size <= hi)
    }

    fn unrestricted(&self) -> bool {
        self.max_size.is_none() && self.max_level.is_none()
    }
}

fn check_envelope(n: usize, filter: &DownsetFilter) -> Result<()> {
    if n == 0 || n > MAX_DOWNSET_N {
        return Err(Error::Capability(format!("downset enumeration needs 1 <= n <= {MAX_DOWNSET_N}")));
    }
    if n >= 7 && filter.unrestricted() {
        return Err(Error::Capability(format!("n = {n} needs a size or level filter")));
    }
    Ok(())
}

struct Gen<'a, F> {
    cl: &'a Closures,
    filter: DownsetFilter,
    /// Candidate maximal members, in increasing mask order.
    members: Vec<u32>,
    visit: F,
}

impl<F: FnMut(LatticeBits) -> ControlFlow<()>> Gen<'_, F> {
    fn go(&mut self, down: LatticeBits, forbidden: LatticeBits, start: usize) -> ControlFlow<()> {
        let size = down.count() as usize;
        if self.filter.accepts(size) {
            (self.visit)(down)?;
        }
        for i in start..self.members.len() {
            let s = self.members[i];
            if forbidden.has(s) {
                continue;
            }
            let next = down | self.cl.down[s as usize];
            if self.filter.max_size.is_some_and(|hi| next.count() as usize > hi) {
                continue;
            }
            let forb = forbidden | self.cl.down[s as usize] | self.cl.up[s as usize];
            self.go(next, forb, i + 1)?;
        }
        ControlFlow::Continue(())
    }
}

/// Calls `visit` once for every downset of `2^[n]` matching `filter`,
/// including the empty family when allowed.
pub(crate) fn visit_downsets(
    n: usize,
    filter: DownsetFilter,
    visit: impl FnMut(LatticeBits) -> ControlFlow<()>,
) -> Result<()> {
    check_envelope(n, &filter)?;
    let cl = Closures::new(n);
    let members = (0..1u32 << n).filter(|m| filter.max_level.is_none_or(|k| m.count_ones() as usize <= k)).collect();
    let mut g = Gen { cl: &cl, filter, members, visit };
    let _ = g.go(LatticeBits::EMPTY, LatticeBits::EMPTY, 0);
    Ok(())
}

/// Streams every matching downset as a [`Family`]. With `up_to_symmetry`,
/// only the canonical member of each orbit is produced.
pub fn for_each_downset(
    n: usize,
    filter: DownsetFilter,
    up_to_symmetry: bool,
    mut visit: impl FnMut(&Family) -> ControlFlow<()>,
) -> Result<()> {
    if up_to_symmetry && n > 6 {
        return Err(Error::Capability("symmetric downset enumeration supports n <= 6".into()));
    }
    visit_downsets(n, filter, |bits| {
        let masks = bits.masks();
        if up_to_symmetry && !is_canonical(n, &masks) {
            return ControlFlow::Continue(());
        }
        visit(&Family::new(n, masks).expect("in range"))
    })
}

pub fn enumerate_downsets(n: usize, filter: DownsetFilter, up_to_symmetry: bool) -> Result<Vec<Family>> {
    let mut out = Vec::new();
    for_each_downset(n, filter, up_to_symmetry, |f| {
        out.push(f.clone());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

pub fn count_downsets(n: usize, filter: DownsetFilter) -> Result<u64> {
    let mut count = 0u64;
    visit_downsets(n, filter, |_| {
        count += 1;
        ControlFlow::Continue(())
    })?;
    Ok(count)
}

/// Sorted member list is the smallest among all its images.
fn is_canonical(n: usize, masks: &[u32]) -> bool {
    let mut img = vec![0u32; masks.len()];
    for p in all_permutations(n).iter().skip(1) {
        for (slot, &m) in img.iter_mut().zip(masks) {
            *slot = apply_permutation(m, p);
        }
        img.sort_unstable();
        if img.as_slice() < masks {
            return false;
        }
    }
    true
}

/// Number of distinct images of `family` under `S_n`.
pub fn orbit_size(family: &Family) -> u64 {
    let n = family.n();
    let perms = all_permutations(n);
    let stabilizer = perms.iter().filter(|p| &family.permute(p) == family).count() as u64;
    perms.len() as u64 / stabilizer
}

/// Second, independent route: a downset of `2^[n]` is a pair `D0 ⊇ D1` of
/// downsets of `2^[n-1]` (members without `n`, and members with `n` removed).
pub fn count_downsets_by_splitting(n: usize) -> Result<u64> {
    if n == 0 || n > 6 {
        return Err(Error::Capability("splitting count supports 1 <= n <= 6".into()));
    }
    // Downsets of 2^[k] as 64-bit masks over the 2^k subsets.
    let mut level: Vec<u64> = vec![0, 1]; // 2^[0]: {} and {∅}
    for k in 1..n {
        let shift = 1u32 << (k - 1);
        let mut next = Vec::new();
        for &d0 in &level {
            for &d1 in &level {
                if d1 & !d0 == 0 {
                    next.push(d0 | d1 << shift);
                }
            }
        }
        level = next;
    }
    let mut count = 0u64;
    for &d0 in &level {
        for &d1 in &level {
            if d1 & !d0 == 0 {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// The splitting route, materialized (for `n <= 5`).
pub fn downsets_by_splitting(n: usize) -> Result<Vec<Family>> {
    if n == 0 || n > 5 {
        return Err(Error::Capability("splitting enumeration supports 1 <= n <= 5".into()));
    }
    let mut level: Vec<u64> = vec![0, 1];
    for k in 1..=n {
        let shift = 1u32 << (k - 1);
        let mut next = Vec::new();
        for &d0 in &level {
            for &d1 in &level {
                if d1 & !d0 == 0 {
                    next.push(d0 | d1 << shift);
                }
            }
        }
        level = next;
    }
    Ok(level
        .into_iter()
        .map(|bits| {
            let masks = (0..1u32 << n).filter(|&m| bits >> m & 1 == 1);
            Family::new(n, masks).expect("in range")
        })
        .collect())
}

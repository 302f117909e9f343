use std::sync::OnceLock;

use super::{full_mask, Family};

/// Largest ground set for which [`canonical_form`] minimizes over all of `S_n`.
pub const EXACT_CANONICAL_MAX_N: usize = 8;

/// Image of a mask under a ground-set permutation; `perm[i]` is the 0-based image of `i`.
#[inline]
pub fn apply_permutation(mask: u32, perm: &[u8]) -> u32 {
    let mut out = 0u32;
    let mut b = mask;
    while b != 0 {
        let j = b.trailing_zeros() as usize;
        out |= 1 << perm[j];
        b &= b - 1;
    }
    out
}

/// Every permutation of `0..n` in lexicographic order. Cached for `n <= 8`.
pub fn all_permutations(n: usize) -> &'static [Vec<u8>] {
    static CACHE: [OnceLock<Vec<Vec<u8>>>; EXACT_CANONICAL_MAX_N + 1] =
        [const { OnceLock::new() }; EXACT_CANONICAL_MAX_N + 1];
    assert!(n <= EXACT_CANONICAL_MAX_N, "permutation cache holds n <= 8");
    CACHE[n].get_or_init(|| {
        let mut cur: Vec<u8> = (0..n as u8).collect();
        let mut out = vec![cur.clone()];
        while next_permutation(&mut cur) {
            out.push(cur.clone());
        }
        out
    })
}

fn next_permutation(v: &mut [u8]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Canonical representative together with how it was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    pub family: Family,
    /// Set when `n` exceeds [`EXACT_CANONICAL_MAX_N`]: equal outputs then still
    /// imply isomorphism, but isomorphic inputs may map to different outputs.
    pub heuristic: bool,
}

/// Orbit representative under ground-set permutations: the image whose sorted
/// member list is lexicographically smallest.
pub fn canonical_form(family: &Family) -> Family {
    canonical_form_report(family).family
}

pub fn canonical_form_report(family: &Family) -> CanonicalForm {
    let n = family.n();
    if n > EXACT_CANONICAL_MAX_N {
        return CanonicalForm { family: heuristic_form(family), heuristic: true };
    }
    let src = family.masks();
    let mut best: Vec<u32> = src.to_vec();
    let mut img = vec![0u32; src.len()];
    for perm in all_permutations(n) {
        for (slot, &m) in img.iter_mut().zip(src) {
            *slot = apply_permutation(m, perm);
        }
        img.sort_unstable();
        if img < best {
            best.copy_from_slice(&img);
        }
    }
    CanonicalForm { family: Family::from_sorted_unchecked(n, best), heuristic: false }
}

/// Relabels elements by decreasing degree, ties broken by the multiset of
/// member sizes through the element, then by original label.
fn heuristic_form(family: &Family) -> Family {
    let n = family.n();
    let mut keys: Vec<(usize, Vec<u32>, usize)> = (0..n)
        .map(|e| {
            let mut sizes: Vec<u32> =
                family.masks().iter().filter(|&&m| m & (1 << e) != 0).map(|m| m.count_ones()).collect();
            sizes.sort_unstable();
            (usize::MAX - sizes.len(), sizes, e)
        })
        .collect();
    keys.sort();
    let mut perm = vec![0u8; n];
    for (new, (_, _, old)) in keys.iter().enumerate() {
        perm[*old] = new as u8;
    }
    let full = full_mask(n);
    let fam = family.permute(&perm);
    debug_assert!(fam.masks().iter().all(|&m| m & !full == 0));
    fam
}

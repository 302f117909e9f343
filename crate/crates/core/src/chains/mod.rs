//! Chain machinery: symmetric chain decompositions, the Lubell function,
//! antichain extraction, and labeled chain graphs.

mod graph;

pub use graph::{
    chain_graph, chain_graphs, check_cycle_label_condition, contains_complete_bipartite, longest_monotone_subsequence,
    replay_violation, ChainEdge, DiamondReplay, FourCycle, LabeledChainGraph, LabeledGraph, Monotone,
};

use num::{BigInt, BigRational, BigUint, One, Zero};

use crate::error::{Error, Result};
use crate::sets::{binomial, Family, SubsetMask};

/// Largest `n` for which a decomposition is materialized.
pub const MAX_SCD_N: usize = 20;

/// A partition of `2^[n]` into chains, each listed bottom-up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainDecomposition {
    pub n: usize,
    pub chains: Vec<Vec<SubsetMask>>,
}

impl ChainDecomposition {
    /// Chain index of every subset, indexed by mask.
    pub fn chain_index(&self) -> Vec<usize> {
        let mut of = vec![usize::MAX; 1 << self.n];
        for (c, chain) in self.chains.iter().enumerate() {
            for s in chain {
                of[s.bits() as usize] = c;
            }
        }
        of
    }

    /// Checks partition, count and symmetry.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let n = self.n;
        let want = binomial(n, n / 2) as usize;
        if self.chains.len() != want {
            return Err(format!("{} chains, expected {want}", self.chains.len()));
        }
        let mut seen = vec![false; 1 << n];
        for (c, chain) in self.chains.iter().enumerate() {
            let (lo, hi) = match (chain.first(), chain.last()) {
                (Some(a), Some(b)) => (a.len(), b.len()),
                _ => return Err(format!("chain {c} is empty")),
            };
            if lo + hi != n || chain.len() != hi - lo + 1 {
                return Err(format!("chain {c} spans sizes {lo}..={hi}, not symmetric"));
            }
            for w in chain.windows(2) {
                if !(w[0].is_subset_of(w[1]) && w[1].len() == w[0].len() + 1) {
                    return Err(format!("chain {c} is not saturated at {}", w[0]));
                }
            }
            for s in chain {
                if std::mem::replace(&mut seen[s.bits() as usize], true) {
                    return Err(format!("{s} lies on two chains"));
                }
            }
        }
        if let Some(miss) = seen.iter().position(|&b| !b) {
            return Err(format!("subset {miss:#x} is on no chain"));
        }
        Ok(())
    }
}

/// Bracket-matching decomposition: reading elements `1..n`, a member is a
/// closing bracket and a non-member an opening one. Sets with the same
/// matched pairs form one chain, filled in left to right.
pub fn symmetric_chain_decomposition(n: usize) -> Result<ChainDecomposition> {
    if n > MAX_SCD_N {
        return Err(Error::Capability(format!("chain decompositions are built for n <= {MAX_SCD_N}, got {n}")));
    }
    let mut chains = Vec::with_capacity(binomial(n, n / 2) as usize);
    for s in 0u32..(1u32 << n) {
        let Some(free) = unmatched_openers(s, n) else { continue };
        let mut chain = vec![SubsetMask::from_raw(n, s)];
        let mut cur = s;
        for u in free {
            cur |= 1 << u;
            chain.push(SubsetMask::from_raw(n, cur));
        }
        chains.push(chain);
    }
    Ok(ChainDecomposition { n, chains })
}

/// Positions of unmatched opening brackets, or `None` if some closing
/// bracket is unmatched (then `s` is not the bottom of its chain).
fn unmatched_openers(s: u32, n: usize) -> Option<Vec<usize>> {
    let mut stack = Vec::new();
    for i in 0..n {
        if s >> i & 1 == 1 {
            stack.pop()?;
        } else {
            stack.push(i);
        }
    }
    Some(stack)
}

/// `λ(F) = Σ 1/C(n,|F|)`, exactly.
pub fn lubell(family: &Family) -> BigRational {
    let n = family.n();
    let mut per_level = vec![0u64; n + 1];
    for s in family.iter() {
        per_level[s.len()] += 1;
    }
    per_level
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(k, &c)| BigRational::new(BigInt::from(c), BigInt::from(binomial(n, k))))
        .fold(BigRational::zero(), |a, b| a + b)
}

/// The LYM implication: an antichain has `λ ≤ 1`. Non-antichains pass.
pub fn lym_check(family: &Family) -> bool {
    !family.is_antichain() || lubell(family) <= BigRational::one()
}

/// `Σ |F|!(n−|F|)!`, the number of pairs (member, maximal chain through it).
pub fn maximal_chain_incidences(family: &Family) -> BigUint {
    let n = family.n();
    let fact = |k: usize| (1..=k).fold(BigUint::one(), |a, i| a * BigUint::from(i));
    family.iter().map(|s| fact(s.len()) * fact(n - s.len())).sum()
}

/// Height of each member: the number of sets on a longest chain ending there.
fn heights(family: &Family) -> (Vec<usize>, Vec<Option<usize>>) {
    let masks = family.masks();
    let mut order: Vec<usize> = (0..masks.len()).collect();
    order.sort_by_key(|&i| masks[i].count_ones());
    let mut height = vec![1usize; masks.len()];
    let mut prev = vec![None; masks.len()];
    for (a, &i) in order.iter().enumerate() {
        for &j in &order[..a] {
            let (s, t) = (masks[j], masks[i]);
            if s & t == s && s != t && height[j] + 1 > height[i] {
                height[i] = height[j] + 1;
                prev[i] = Some(j);
            }
        }
    }
    (height, prev)
}

/// A longest chain in the family, bottom-up.
pub fn longest_chain(family: &Family) -> Vec<SubsetMask> {
    let (height, prev) = heights(family);
    let Some(top) = (0..height.len()).max_by_key(|&i| (height[i], std::cmp::Reverse(i))) else {
        return Vec::new();
    };
    let mut out = vec![top];
    while let Some(p) = prev[*out.last().expect("nonempty")] {
        out.push(p);
    }
    out.reverse();
    let n = family.n();
    out.into_iter().map(|i| SubsetMask::from_raw(n, family.masks()[i])).collect()
}

/// An antichain of size at least `⌈|F|/s⌉`: the largest class of the
/// partition by height (ties to the lowest height).
pub fn mirsky_antichain(family: &Family, s: usize) -> Result<Family> {
    if s == 0 {
        return Err(Error::Param("s must be positive".into()));
    }
    let (height, _) = heights(family);
    if height.iter().any(|&h| h > s) {
        let chain = longest_chain(family);
        let shown: Vec<String> = chain[..s + 1].iter().map(|c| c.to_string()).collect();
        return Err(Error::Precondition(format!("family contains the {}-chain {}", s + 1, shown.join(" < "))));
    }
    let mut count = vec![0usize; s + 1];
    for &h in &height {
        count[h] += 1;
    }
    let best = (1..=s).max_by_key(|&h| (count[h], std::cmp::Reverse(h))).unwrap_or(1);
    let masks = family.masks().iter().zip(&height).filter(|(_, &h)| h == best).map(|(&m, _)| m).collect();
    Ok(Family::from_sorted_unchecked(family.n(), masks))
}

/// An `(s+1)`-chain among the shadow members of `antichain`, if any.
///
/// For an `(n−1)`-trace `∨_s`-free antichain no maximal chain of `2^[n]`
/// meets the shadow in more than `s` sets.
pub fn shadow_chain_violation(antichain: &Family, s: usize) -> Option<Vec<SubsetMask>> {
    let chain = longest_chain(&antichain.shadow());
    (chain.len() > s).then(|| chain[..s + 1].to_vec())
}

/// A shadow member covered by more than `s` members of `antichain`, with
/// those members.
pub fn shadow_cover_violation(antichain: &Family, s: usize) -> Option<(SubsetMask, Vec<SubsetMask>)> {
    antichain.shadow().iter().find_map(|g| {
        let over: Vec<SubsetMask> = antichain.iter().filter(|f| g.is_subset_of(*f)).collect();
        (over.len() > s).then_some((g, over))
    })
}

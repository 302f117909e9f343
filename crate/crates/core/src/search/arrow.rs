//! The arrow relation `(n, m) → (k, l)`, decided over downsets.
//!
//! Down-compression never raises `max_X |F|_X|` over `k`-sets `X`, so the
//! relation holds for all families iff it holds for downward-closed ones, and
//! for a downset `D` the trace on `X` is `D ∩ 2^X`.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::bits::{Closures, LatticeBits};
use super::downsets::MAX_DOWNSET_N;
use super::{SearchBudget, Status};
use crate::error::{Error, Result};
use crate::sets::{binomial, canonical_form, k_subsets, Family};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArrowResult {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub l: usize,
    pub holds: bool,
    /// Canonically smallest downset of size `m` whose traces on `k`-sets all
    /// have fewer than `l` members.
    pub counterexample: Option<Family>,
    pub status: Status,
    pub nodes: u64,
    /// Set when the answer follows from the parameters alone.
    pub degenerate: Option<String>,
}

struct Search<'a> {
    m: usize,
    l: u32,
    cubes: Vec<LatticeBits>,
    cl: &'a Closures,
    nodes: u64,
    deadline: Option<Instant>,
    node_limit: Option<u64>,
    exhausted: bool,
    best: Option<Family>,
    n: usize,
    all_counterexamples: bool,
}

impl Search<'_> {
    /// Every `k`-set trace stays below `l`.
    fn sparse(&self, d: &LatticeBits) -> bool {
        self.cubes.iter().all(|c| d.and_count(c) < self.l)
    }

    fn budget_hit(&mut self) -> bool {
        if self.exhausted {
            return true;
        }
        if self.nodes & 1023 == 0 {
            let t = self.deadline.is_some_and(|d| Instant::now() >= d);
            let nl = self.node_limit.is_some_and(|lim| self.nodes >= lim);
            if t || nl {
                self.exhausted = true;
            }
        }
        self.exhausted
    }

    /// `cands`: maximal-member candidates compatible with `down`, increasing.
    fn go(&mut self, down: LatticeBits, cands: &[u32]) {
        self.nodes += 1;
        if self.budget_hit() {
            return;
        }
        let size = down.count() as usize;
        if size == self.m {
            let fam = Family::new(self.n, down.masks()).expect("in range");
            let canon = canonical_form(&fam);
            if self.best.as_ref().is_none_or(|b| canon.masks() < b.masks()) {
                self.best = Some(canon);
            }
            return;
        }
        // Every extension lies inside the union of the candidates' closures.
        let mut reach = down;
        for &c in cands {
            reach = reach | self.cl.down[c as usize];
        }
        if (reach.count() as usize) < self.m {
            return;
        }
        for (i, &s) in cands.iter().enumerate() {
            let next = down | self.cl.down[s as usize];
            if next.count() as usize > self.m {
                continue;
            }
            let forb = self.cl.down[s as usize] | self.cl.up[s as usize];
            let rest: Vec<u32> = cands[i + 1..]
                .iter()
                .copied()
                .filter(|&t| !forb.has(t) && self.sparse(&(next | self.cl.down[t as usize])))
                .collect();
            self.go(next, &rest);
            if self.exhausted || (self.best.is_some() && !self.all_counterexamples) {
                return;
            }
        }
    }
}

fn degenerate(n: usize, m: usize, k: usize, l: usize) -> Option<(bool, String)> {
    let total = 1usize << n;
    if m > total {
        return Some((true, format!("no family of {m} subsets of [{n}] exists")));
    }
    if l == 0 {
        return Some((true, "l = 0 is met by any k-set".into()));
    }
    if k > n {
        return Some((false, format!("there is no {k}-subset of [{n}]")));
    }
    if l > 1usize << k {
        return Some((false, format!("a trace on {k} elements has at most {} members", 1usize << k)));
    }
    if m < l {
        return Some((false, format!("a trace of {m} sets has at most {m} members")));
    }
    None
}

/// Decides `(n, m) → (k, l)` by searching for a downset counterexample.
///
/// Downsets whose traces all stay below `l` are closed under taking
/// sub-downsets, so the search prunes as soon as a partial downset has a
/// large trace. On failure the counterexample is the canonically smallest one.
pub fn arrow(n: usize, m: usize, k: usize, l: usize, budget: &SearchBudget) -> Result<ArrowResult> {
    if n == 0 || n > MAX_DOWNSET_N {
        return Err(Error::Capability(format!("arrow relations are decided for 1 <= n <= {MAX_DOWNSET_N}")));
    }
    let mut res = ArrowResult {
        n,
        m,
        k,
        l,
        holds: true,
        counterexample: None,
        status: Status::Exact,
        nodes: 0,
        degenerate: None,
    };
    if let Some((holds, why)) = degenerate(n, m, k, l) {
        res.holds = holds;
        res.degenerate = Some(why);
        if !holds && m <= 1 << n {
            // Any downset of size m is a counterexample; report the smallest.
            res.counterexample = smallest_downset_of_size(n, m)?;
        }
        return Ok(res);
    }
    if m == 0 {
        return Ok(res);
    }
    let cl = Closures::new(n);
    let cubes = k_subsets(n, k).into_iter().map(LatticeBits::down_of).collect();
    let mut s = Search {
        m,
        l: l as u32,
        cubes,
        cl: &cl,
        nodes: 0,
        deadline: budget.deadline(),
        node_limit: budget.node_limit,
        exhausted: false,
        best: None,
        n,
        all_counterexamples: true,
    };
    let cands: Vec<u32> = (0..1u32 << n).filter(|&t| s.sparse(&cl.down[t as usize])).collect();
    s.go(LatticeBits::EMPTY, &cands);
    res.nodes = s.nodes;
    if s.exhausted {
        res.status = if s.best.is_some() { Status::Exact } else { Status::Timeout };
    }
    if let Some(c) = s.best {
        res.holds = false;
        res.counterexample = Some(c);
    }
    Ok(res)
}

fn smallest_downset_of_size(n: usize, m: usize) -> Result<Option<Family>> {
    let mut best: Option<Family> = None;
    super::downsets::for_each_downset(n, super::DownsetFilter::size(m), n <= 5, |f| {
        let c = canonical_form(f);
        if best.as_ref().is_none_or(|b| c.masks() < b.masks()) {
            best = Some(c);
        }
        std::ops::ControlFlow::Continue(())
    })?;
    Ok(best)
}

/// Sauer's lemma as an arrow: `(n, 1 + Σ_{i<k} C(n, i)) → (k, 2^k)`.
pub fn sauer_arrow_suite(n: usize, k: usize, budget: &SearchBudget) -> Result<ArrowResult> {
    if k > n {
        return Err(Error::Param(format!("k = {k} exceeds n = {n}")));
    }
    let m = 1 + (0..k).map(|i| binomial(n, i) as usize).sum::<usize>();
    arrow(n, m, k, 1 << k, budget)
}

/// Upper bound `min{m : ∃k (n, m) → (k, t_k + 1)} - 1` from known values
/// `t_k` of the extremal function on smaller ground sets.
///
/// Returns the bound and the `(m, k)` pair that produced it.
pub fn arrow_upper_bound(
    n: usize,
    known: &[(usize, usize)],
    budget: &SearchBudget,
) -> Result<Option<(usize, usize, usize)>> {
    for m in 1..=(1usize << n) {
        for &(k, t) in known {
            if k > n {
                continue;
            }
            let r = arrow(n, m, k, t + 1, budget)?;
            if r.status == Status::Timeout {
                return Ok(None);
            }
            if r.holds {
                return Ok(Some((m - 1, m, k)));
            }
        }
    }
    Ok(None)
}

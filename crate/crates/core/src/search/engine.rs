//! Branch and bound over families of subsets with orderly isomorph rejection.
//!
//! Members are added in increasing rank order. A partial family survives only
//! if its sorted rank list is lexicographically smallest among its images
//! under the active permutations; removing the largest member of such a
//! family keeps that property, so every orbit keeps exactly one
//! representative and pruning a rejected node loses nothing. The argument
//! works permutation by permutation, which is why any subset of `S_n` (see
//! [`SymmetryMode`]) is sound.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{SearchBudget, Status, SymmetryMode};
use crate::chains::symmetric_chain_decomposition;
use crate::embed::{trace_can_hold, trace_levels, Matcher};
use crate::error::{Error, Result};
use crate::params::param_y;
use crate::poset::Poset;
use crate::sets::{all_permutations, apply_permutation, binomial_prefix_sum, k_subsets, Family, EXACT_CANONICAL_MAX_N};

/// Which traces a family must keep free of the poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    /// Every `l` in this list is checked on all `l`-subsets.
    pub levels: Vec<usize>,
    /// The constraint implies plain `P`-freeness, so each chain of a chain
    /// partition holds at most `|P| - 1` members.
    pub implies_p_free: bool,
    /// Trace-freeness: no shattered `(y(P)+1)`-set, so the Sauer cap applies.
    pub sauer_cap: bool,
    pub label: String,
}

impl Constraint {
    pub fn la(n: usize) -> Self {
        Constraint { levels: vec![n], implies_p_free: true, sauer_cap: false, label: format!("{n}-trace (plain)") }
    }

    pub fn tr(n: usize, poset: &Poset) -> Self {
        Constraint { levels: trace_levels(n, poset), implies_p_free: true, sauer_cap: true, label: "trace".into() }
    }

    pub fn tr_l(n: usize, l: usize, poset: &Poset) -> Self {
        let levels = if trace_can_hold(poset, l) { vec![l] } else { vec![] };
        Constraint {
            levels,
            implies_p_free: l == n || l >= poset.edge_count(),
            sauer_cap: false,
            label: format!("{l}-trace"),
        }
    }
}

pub(crate) struct Outcome {
    pub value: usize,
    pub status: Status,
    pub witness: Family,
    pub nodes: u64,
    pub method: Vec<String>,
}

/// One `(l, L)` pair whose trace is tracked.
struct Slot {
    level: usize,
    /// Rank -> position of `member ∩ L` inside `2^L`.
    comp: Vec<u8>,
}

struct Level {
    /// For `l <= 4`: containment of `P` for every subfamily of `2^[l]`.
    table: Option<Vec<bool>>,
    memo: bool,
}

struct Engine<'a> {
    n: usize,
    poset: &'a Poset,
    /// Rank -> mask.
    order: Vec<u32>,
    levels: Vec<Level>,
    slots: Vec<Slot>,
    /// Rank images under the active permutations.
    perms: Vec<Vec<u16>>,
    chain_of: Option<Vec<u16>>,
    chain_cap: usize,
    chains: usize,
    /// Proven upper bound on the optimum.
    cap: usize,
}

/// Per-worker mutable state.
struct Worker {
    best_len: usize,
    best: Vec<u16>,
    nodes: u64,
    used: Vec<u16>,
    memo: Vec<HashMap<u128, bool>>,
}

struct Shared {
    best: AtomicUsize,
    nodes: AtomicU64,
    stop: AtomicBool,
    exhausted: AtomicBool,
    deadline: Option<Instant>,
    node_limit: Option<u64>,
    /// Stop as soon as some family reaches this size.
    target: Option<usize>,
}

/// Containment table for all subfamilies of `2^[l]`, indexed by bitmask.
fn containment_table(l: usize, poset: &Poset) -> Vec<bool> {
    let size = 1usize << (1usize << l);
    let mut table = vec![false; size];
    let mut masks = Vec::with_capacity(16);
    for fam in 1..size {
        let top = usize::BITS - 1 - fam.leading_zeros();
        let rest = fam & !(1 << top);
        if table[rest] {
            table[fam] = true;
            continue;
        }
        masks.clear();
        let mut b = fam;
        while b != 0 {
            masks.push(b.trailing_zeros());
            b &= b - 1;
        }
        let pinned = masks.len() - 1;
        table[fam] = Matcher::new(&masks, poset).exists_using(pinned);
    }
    table
}

fn compress(mask: u32, l_set: u32) -> u8 {
    let mut out = 0u8;
    let mut k = 0;
    let mut b = l_set;
    while b != 0 {
        let j = b.trailing_zeros();
        if mask >> j & 1 == 1 {
            out |= 1 << k;
        }
        k += 1;
        b &= b - 1;
    }
    out
}

fn natural_order(n: usize, middle_first: bool) -> Vec<u32> {
    let mut v: Vec<u32> = (0..1u32 << n).collect();
    if middle_first {
        let mid = n as i64 / 2;
        v.sort_by_key(|&m| ((m.count_ones() as i64 - mid).abs(), m.count_ones(), m));
    }
    v
}

impl<'a> Engine<'a> {
    fn new(
        n: usize,
        poset: &'a Poset,
        constraint: &Constraint,
        budget: &SearchBudget,
        middle_first: bool,
    ) -> Result<Self> {
        let mut order = natural_order(n, middle_first);
        if let Some(seed) = budget.seed {
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        }
        let mut rank = vec![0u16; 1 << n];
        for (r, &m) in order.iter().enumerate() {
            rank[m as usize] = r as u16;
        }
        let mut levels = Vec::new();
        let mut slots = Vec::new();
        for &l in &constraint.levels {
            if l > 7 {
                return Err(Error::Capability(format!("trace level {l} exceeds 7")));
            }
            let idx = levels.len();
            levels.push(Level { table: (l <= 4).then(|| containment_table(l, poset)), memo: l <= 6 && l < n });
            for x in k_subsets(n, l) {
                slots.push(Slot { level: idx, comp: order.iter().map(|&m| compress(m, x)).collect() });
            }
        }
        let symmetry = if n > EXACT_CANONICAL_MAX_N && budget.symmetry == SymmetryMode::Exact {
            SymmetryMode::Heuristic
        } else {
            budget.symmetry
        };
        let ground_perms: Vec<Vec<u8>> = match symmetry {
            SymmetryMode::Off => vec![],
            SymmetryMode::Exact => all_permutations(n).iter().skip(1).cloned().collect(),
            SymmetryMode::Heuristic => {
                let mut v = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        let mut p: Vec<u8> = (0..n as u8).collect();
                        p.swap(i, j);
                        v.push(p);
                    }
                }
                v
            }
        };
        let perms = ground_perms
            .iter()
            .map(|p| order.iter().map(|&m| rank[apply_permutation(m, p) as usize]).collect())
            .collect();
        let (chain_of, chains) = if constraint.implies_p_free && poset.len() >= 2 {
            let scd = symmetric_chain_decomposition(n)?;
            let mut of = vec![0u16; order.len()];
            for (c, chain) in scd.chains.iter().enumerate() {
                for s in chain {
                    of[rank[s.bits() as usize] as usize] = c as u16;
                }
            }
            (Some(of), scd.chains.len())
        } else {
            (None, 0)
        };
        let chain_cap = poset.len().saturating_sub(1);
        let mut cap = order.len();
        if chain_of.is_some() {
            let scd = symmetric_chain_decomposition(n)?;
            cap = cap.min(scd.chains.iter().map(|c| c.len().min(chain_cap)).sum());
        }
        if constraint.sauer_cap {
            if let Ok(y) = param_y(poset, 8) {
                cap = cap.min(binomial_prefix_sum(n, y as i64) as usize);
            }
        }
        if poset.len() <= 1 && !constraint.levels.is_empty() {
            cap = 0;
        }
        Ok(Engine { n, poset, order, levels, slots, perms, chain_of, chain_cap, chains, cap })
    }

    fn worker(&self) -> Worker {
        Worker {
            best_len: 0,
            best: Vec::new(),
            nodes: 0,
            used: vec![0; self.chains],
            memo: self.levels.iter().map(|_| HashMap::new()).collect(),
        }
    }

    fn level_free(&self, w: &mut Worker, level: usize, fam: u128, pinned_pos: u8) -> bool {
        let lv = &self.levels[level];
        if let Some(t) = &lv.table {
            return !t[fam as usize];
        }
        if lv.memo {
            if let Some(&v) = w.memo[level].get(&fam) {
                return v;
            }
        }
        let mut masks = Vec::with_capacity(fam.count_ones() as usize);
        let mut pinned = 0;
        let mut b = fam;
        while b != 0 {
            let j = b.trailing_zeros();
            if j == pinned_pos as u32 {
                pinned = masks.len();
            }
            masks.push(j);
            b &= b - 1;
        }
        let free = !Matcher::new(&masks, self.poset).exists_using(pinned);
        if lv.memo {
            if w.memo[level].len() > 1 << 21 {
                w.memo[level].clear();
            }
            w.memo[level].insert(fam, free);
        }
        free
    }

    fn addable(&self, w: &mut Worker, traces: &[u128], r: u16) -> bool {
        for (s, slot) in self.slots.iter().enumerate() {
            let pos = slot.comp[r as usize];
            let bit = 1u128 << pos;
            if traces[s] & bit != 0 {
                continue;
            }
            if !self.level_free(w, slot.level, traces[s] | bit, pos) {
                return false;
            }
        }
        true
    }

    fn canonical(&self, fam: &[u16], scratch: &mut Vec<u16>) -> bool {
        for p in &self.perms {
            scratch.clear();
            scratch.extend(fam.iter().map(|&r| p[r as usize]));
            scratch.sort_unstable();
            if scratch.as_slice() < fam {
                return false;
            }
        }
        true
    }

    fn bound(&self, w: &Worker, fam_len: usize, cands: &[u16]) -> usize {
        let mut ub = fam_len + cands.len();
        if let Some(of) = &self.chain_of {
            let mut cnt = vec![0u16; self.chains];
            for &c in cands {
                cnt[of[c as usize] as usize] += 1;
            }
            let extra: usize = (0..self.chains)
                .map(|c| (self.chain_cap.saturating_sub(w.used[c] as usize)).min(cnt[c] as usize))
                .sum();
            ub = ub.min(fam_len + extra);
        }
        ub.min(self.cap)
    }

    fn out_of_budget(&self, w: &Worker, sh: &Shared) -> bool {
        if sh.stop.load(Ordering::Relaxed) {
            return true;
        }
        if w.nodes & 1023 == 0 {
            let total = sh.nodes.fetch_add(1024, Ordering::Relaxed) + 1024;
            let over_nodes = sh.node_limit.is_some_and(|lim| total >= lim);
            let over_time = sh.deadline.is_some_and(|d| Instant::now() >= d);
            if over_nodes || over_time {
                sh.exhausted.store(true, Ordering::Relaxed);
                sh.stop.store(true, Ordering::Relaxed);
                return true;
            }
        }
        false
    }

    fn record(&self, w: &mut Worker, sh: &Shared, fam: &[u16]) {
        if fam.len() > w.best_len {
            w.best_len = fam.len();
            w.best = fam.to_vec();
            sh.best.fetch_max(fam.len(), Ordering::Relaxed);
            if sh.target.is_some_and(|t| fam.len() >= t) || fam.len() >= self.cap {
                sh.stop.store(true, Ordering::Relaxed);
            }
        }
    }

    fn push(&self, w: &mut Worker, fam: &mut Vec<u16>, r: u16) {
        fam.push(r);
        if let Some(of) = &self.chain_of {
            w.used[of[r as usize] as usize] += 1;
        }
    }

    fn pop(&self, w: &mut Worker, fam: &mut Vec<u16>) {
        let r = fam.pop().expect("nonempty");
        if let Some(of) = &self.chain_of {
            w.used[of[r as usize] as usize] -= 1;
        }
    }

    /// Applies member `r` to the tracked traces.
    fn extend_traces(&self, traces: &[u128], r: u16) -> Vec<u128> {
        traces.iter().zip(&self.slots).map(|(&t, slot)| t | 1u128 << slot.comp[r as usize]).collect()
    }

    /// Children of a node: each candidate that passes the canonicity test,
    /// with its filtered candidate list.
    fn dfs(
        &self,
        w: &mut Worker,
        sh: &Shared,
        fam: &mut Vec<u16>,
        traces: &[u128],
        cands: &[u16],
        scratch: &mut Vec<u16>,
    ) {
        let best = sh.best.load(Ordering::Relaxed).max(w.best_len);
        if self.bound(w, fam.len(), cands) <= best && !fam.is_empty() {
            return;
        }
        for i in 0..cands.len() {
            let best = sh.best.load(Ordering::Relaxed).max(w.best_len);
            if fam.len() + (cands.len() - i) <= best {
                break;
            }
            let r = cands[i];
            self.push(w, fam, r);
            if !self.canonical(fam, scratch) {
                self.pop(w, fam);
                continue;
            }
            w.nodes += 1;
            if self.out_of_budget(w, sh) {
                self.pop(w, fam);
                return;
            }
            self.record(w, sh, fam);
            let next = self.extend_traces(traces, r);
            let rest: Vec<u16> = cands[i + 1..].iter().copied().filter(|&c| self.addable(w, &next, c)).collect();
            self.dfs(w, sh, fam, &next, &rest, scratch);
            self.pop(w, fam);
            if sh.stop.load(Ordering::Relaxed) {
                return;
            }
        }
    }

    fn root(&self, w: &mut Worker) -> (Vec<u128>, Vec<u16>) {
        let traces = vec![0u128; self.slots.len()];
        let cands = (0..self.order.len() as u16).filter(|&r| self.addable(w, &traces, r)).collect();
        (traces, cands)
    }

    fn family(&self, ranks: &[u16]) -> Family {
        Family::new(self.n, ranks.iter().map(|&r| self.order[r as usize])).expect("in range")
    }

    /// Runs the search; returns the best family and whether the budget ran out.
    fn run(&self, budget: &SearchBudget, target: Option<usize>, floor: usize) -> (Vec<u16>, u64, bool) {
        let sh = Shared {
            best: AtomicUsize::new(floor),
            nodes: AtomicU64::new(0),
            stop: AtomicBool::new(false),
            exhausted: AtomicBool::new(false),
            deadline: budget.deadline(),
            node_limit: budget.node_limit,
            target,
        };
        let mut w0 = self.worker();
        let (traces, cands) = self.root(&mut w0);
        let mut results: Vec<(usize, Vec<u16>, u64)> = Vec::new();
        if budget.workers <= 1 {
            let mut fam = Vec::new();
            let mut scratch = Vec::new();
            self.dfs(&mut w0, &sh, &mut fam, &traces, &cands, &mut scratch);
            results.push((w0.best_len, w0.best, w0.nodes));
        } else {
            // Split on the first member; each subtree is an independent task.
            let tasks: Vec<usize> = (0..cands.len()).collect();
            let pool = rayon::ThreadPoolBuilder::new().num_threads(budget.workers).build().expect("thread pool");
            results = pool.install(|| {
                tasks
                    .par_iter()
                    .map(|&i| {
                        let mut w = self.worker();
                        let mut fam = Vec::new();
                        let mut scratch = Vec::new();
                        let r = cands[i];
                        self.push(&mut w, &mut fam, r);
                        if self.canonical(&fam, &mut scratch) && !sh.stop.load(Ordering::Relaxed) {
                            w.nodes += 1;
                            self.record(&mut w, &sh, &fam);
                            let next = self.extend_traces(&traces, r);
                            let rest: Vec<u16> =
                                cands[i + 1..].iter().copied().filter(|&c| self.addable(&mut w, &next, c)).collect();
                            self.dfs(&mut w, &sh, &mut fam, &next, &rest, &mut scratch);
                        }
                        (w.best_len, w.best, w.nodes)
                    })
                    .collect()
            });
        }
        let nodes = results.iter().map(|r| r.2).sum();
        let best = results.into_iter().max_by_key(|r| r.0).map(|r| r.1).unwrap_or_default();
        (best, nodes, sh.exhausted.load(Ordering::Relaxed))
    }
}

pub(crate) fn solve(n: usize, poset: &Poset, constraint: Constraint, budget: &SearchBudget) -> Result<Outcome> {
    let middle_first = constraint.levels == [n];
    let engine = Engine::new(n, poset, &constraint, budget, middle_first)?;
    let (best, mut nodes, exhausted) = engine.run(budget, None, 0);
    let mut witness = best;
    if budget.workers > 1 && !exhausted && !witness.is_empty() {
        // Deterministic witness: the first family of the optimal size in
        // sequential search order.
        let seq = SearchBudget { workers: 1, ..budget.clone() };
        let (w, extra, _) = engine.run(&seq, Some(witness.len()), witness.len() - 1);
        nodes += extra;
        witness = w;
    }
    let value = witness.len();
    let mut method = vec![
        format!("constraint: {}", constraint.label),
        format!("levels checked: {:?}", constraint.levels),
        format!("symmetry: {:?}, {} permutations", budget.symmetry, engine.perms.len()),
        format!("upper bound used: {}", engine.cap),
    ];
    if engine.chain_of.is_some() {
        method.push(format!("chain-partition bound: at most {} members per chain", engine.chain_cap));
    }
    if let Some(seed) = budget.seed {
        method.push(format!("member order shuffled with seed {seed}"));
    }
    Ok(Outcome {
        value,
        status: if exhausted { Status::LowerBoundOnly } else { Status::Exact },
        witness: engine.family(&witness),
        nodes,
        method,
    })
}

/// Searches for a family of exactly `size` members satisfying the constraint,
/// with the member order shuffled by `seed`. `Ok(None)` means none exists.
pub fn refute(n: usize, poset: &Poset, constraint: &Constraint, size: usize, seed: u64) -> Result<Option<Family>> {
    if size == 0 {
        return Ok(Some(Family::empty(n)?));
    }
    let budget = SearchBudget::default().with_seed(seed);
    let engine = Engine::new(n, poset, constraint, &budget, false)?;
    let (best, _, _) = engine.run(&budget, Some(size), size - 1);
    Ok((best.len() >= size).then(|| engine.family(&best[..size])))
}

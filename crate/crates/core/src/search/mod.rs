//! Exact extremal solvers, downset enumeration and arrow relations.
//!
//! Every solver returns a witness family that the caller can re-check with
//! the predicates in [`crate::embed`]; an `Exact` status additionally means the
//! search space above the reported value was exhausted.

mod arrow;
mod bits;
mod closed;
mod downsets;
mod engine;

pub use arrow::{arrow, arrow_upper_bound, sauer_arrow_suite, ArrowResult};
pub use closed::{solve_la_closed, Direction};
pub use downsets::{
    count_downsets, count_downsets_by_splitting, downsets_by_splitting, enumerate_downsets, for_each_downset,
    orbit_size, DownsetFilter, MAX_DOWNSET_N,
};
pub use engine::{refute, Constraint};

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::embed::{is_l_trace_p_free, is_p_free, is_trace_p_free};
use crate::error::{Error, Result};
use crate::poset::{canonical_id, Poset};
use crate::sets::Family;

/// How much isomorph rejection the searches perform.
///
/// All modes give exact values; they differ in how many ground-set
/// permutations are used to reject non-canonical partial families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryMode {
    /// Every permutation of `S_n` (only for `n <= 8`).
    #[default]
    Exact,
    /// Only the transpositions.
    Heuristic,
    Off,
}

impl std::str::FromStr for SymmetryMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(SymmetryMode::Exact),
            "heuristic" => Ok(SymmetryMode::Heuristic),
            "off" => Ok(SymmetryMode::Off),
            _ => Err(Error::Format(format!("unknown symmetry mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub time_limit: Option<Duration>,
    pub node_limit: Option<u64>,
    pub workers: usize,
    pub symmetry: SymmetryMode,
    /// Shuffles the member order; `None` keeps the natural order.
    pub seed: Option<u64>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { time_limit: None, node_limit: None, workers: 1, symmetry: SymmetryMode::Exact, seed: None }
    }
}

impl SearchBudget {
    pub fn with_time_limit(mut self, d: Duration) -> Self {
        self.time_limit = Some(d);
        self
    }

    pub fn with_node_limit(mut self, n: u64) -> Self {
        self.node_limit = Some(n);
        self
    }

    pub fn with_symmetry(mut self, s: SymmetryMode) -> Self {
        self.symmetry = s;
        self
    }

    pub fn with_workers(mut self, w: usize) -> Self {
        self.workers = w.max(1);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub(crate) fn deadline(&self) -> Option<Instant> {
        self.time_limit.map(|d| Instant::now() + d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    La,
    LaD,
    LaU,
    Tr,
    TrL,
    Arrow,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::La => "la",
            Kind::LaD => "la_d",
            Kind::LaU => "la_u",
            Kind::Tr => "tr",
            Kind::TrL => "tr_l",
            Kind::Arrow => "arrow",
        }
    }
}

impl std::str::FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "la" => Ok(Kind::La),
            "la_d" => Ok(Kind::LaD),
            "la_u" => Ok(Kind::LaU),
            "tr" => Ok(Kind::Tr),
            "tr_l" => Ok(Kind::TrL),
            "arrow" => Ok(Kind::Arrow),
            _ => Err(Error::Format(format!("unknown quantity {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Witness of size `value` and the search above it was exhausted.
    Exact,
    /// Budget ran out; `value` is the best witness found.
    LowerBoundOnly,
    /// Budget ran out before anything useful was found.
    Timeout,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalResult {
    pub kind: Kind,
    pub n: usize,
    pub l: Option<usize>,
    pub poset: String,
    pub poset_id: String,
    pub value: usize,
    pub status: Status,
    pub witness: Option<Family>,
    pub nodes: u64,
    /// Upper bounds and pruning rules that were active, for audit.
    pub method: Vec<String>,
}

impl ExtremalResult {
    /// Re-checks the witness with the independent predicates.
    pub fn check_witness(&self, poset: &Poset) -> std::result::Result<(), String> {
        let w = self.witness.as_ref().ok_or("no witness")?;
        if w.len() != self.value {
            return Err(format!("witness has {} members, value is {}", w.len(), self.value));
        }
        if w.n() != self.n {
            return Err("witness ground set differs".into());
        }
        let ok = match self.kind {
            Kind::La => is_p_free(w, poset),
            Kind::LaD => w.is_downward_closed() && is_p_free(w, poset),
            Kind::LaU => w.is_upward_closed() && is_p_free(w, poset),
            Kind::Tr => is_trace_p_free(w, poset),
            Kind::TrL => is_l_trace_p_free(w, poset, self.l.unwrap_or(self.n)),
            Kind::Arrow => true,
        };
        if ok {
            Ok(())
        } else {
            Err(format!("witness fails the {} predicate", self.kind.as_str()))
        }
    }
}

/// Exact ground-set bound for the branch-and-bound solvers.
pub const MAX_SOLVE_N: usize = 7;

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_SOLVE_N {
        return Err(Error::Capability(format!("exact solvers handle 1 <= n <= {MAX_SOLVE_N}, got {n}")));
    }
    Ok(())
}

/// `La(n, P)`: largest `P`-free family in `2^[n]`.
pub fn solve_la(n: usize, poset: &Poset, budget: &SearchBudget) -> Result<ExtremalResult> {
    check_n(n)?;
    let out = engine::solve(n, poset, Constraint::la(n), budget)?;
    Ok(finish(Kind::La, n, None, poset, out))
}

/// `Tr(n, P)`: largest trace `P`-free family.
pub fn solve_tr(n: usize, poset: &Poset, budget: &SearchBudget) -> Result<ExtremalResult> {
    check_n(n)?;
    let out = engine::solve(n, poset, Constraint::tr(n, poset), budget)?;
    Ok(finish(Kind::Tr, n, None, poset, out))
}

/// `Tr_l(n, P)`: largest `l`-trace `P`-free family.
pub fn solve_tr_l(n: usize, l: usize, poset: &Poset, budget: &SearchBudget) -> Result<ExtremalResult> {
    check_n(n)?;
    if l == 0 || l > n {
        return Err(Error::Param(format!("l = {l} must lie in 1..={n}")));
    }
    let out = engine::solve(n, poset, Constraint::tr_l(n, l, poset), budget)?;
    Ok(finish(Kind::TrL, n, Some(l), poset, out))
}

fn finish(kind: Kind, n: usize, l: Option<usize>, poset: &Poset, out: engine::Outcome) -> ExtremalResult {
    ExtremalResult {
        kind,
        n,
        l,
        poset: poset.label(),
        poset_id: canonical_id(poset),
        value: out.value,
        status: out.status,
        witness: Some(out.witness),
        nodes: out.nodes,
        method: out.method,
    }
}

#[cfg(test)]
mod tests;

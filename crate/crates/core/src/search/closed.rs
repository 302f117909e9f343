//! `La_D` and `La_U`: largest `P`-free downward (upward) closed families.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::bits::{Closures, LatticeBits};
use super::{ExtremalResult, Kind, SearchBudget, Status};
use crate::embed::contains_copy;
use crate::error::{Error, Result};
use crate::poset::{canonical_id, Poset};
use crate::sets::Family;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Down,
    Up,
}

struct Search<'a> {
    poset: &'a Poset,
    cl: &'a Closures,
    best: LatticeBits,
    best_len: usize,
    nodes: u64,
    deadline: Option<Instant>,
    node_limit: Option<u64>,
    exhausted: bool,
}

impl Search<'_> {
    fn free(&self, d: &LatticeBits) -> bool {
        !contains_copy(&d.masks(), self.poset)
    }

    fn go(&mut self, down: LatticeBits, cands: &[u32]) {
        self.nodes += 1;
        if self.nodes & 1023 == 0 {
            let t = self.deadline.is_some_and(|d| Instant::now() >= d);
            let nl = self.node_limit.is_some_and(|lim| self.nodes >= lim);
            if t || nl {
                self.exhausted = true;
            }
        }
        if self.exhausted {
            return;
        }
        let size = down.count() as usize;
        if size > self.best_len {
            self.best_len = size;
            self.best = down;
        }
        let mut reach = down;
        for &c in cands {
            reach = reach | self.cl.down[c as usize];
        }
        if reach.count() as usize <= self.best_len {
            return;
        }
        for (i, &s) in cands.iter().enumerate() {
            let next = down | self.cl.down[s as usize];
            let forb = self.cl.down[s as usize] | self.cl.up[s as usize];
            // Containing P is inherited by larger downsets, so the candidate
            // list only keeps members whose closure stays free.
            let rest: Vec<u32> = cands[i + 1..]
                .iter()
                .copied()
                .filter(|&t| !forb.has(t) && self.free(&(next | self.cl.down[t as usize])))
                .collect();
            self.go(next, &rest);
            if self.exhausted {
                return;
            }
        }
    }
}

/// Largest `P`-free downset (or upset) of `2^[n]`, by exhaustive downset search.
///
/// The upward case is the downward case for the dual poset on complements.
pub fn solve_la_closed(n: usize, poset: &Poset, direction: Direction, budget: &SearchBudget) -> Result<ExtremalResult> {
    if n == 0 || n > 7 {
        return Err(Error::Capability(format!("closed-family search supports 1 <= n <= 7, got {n}")));
    }
    let target = match direction {
        Direction::Down => poset.clone(),
        Direction::Up => poset.dual(),
    };
    let cl = Closures::new(n);
    let mut s = Search {
        poset: &target,
        cl: &cl,
        best: LatticeBits::EMPTY,
        best_len: 0,
        nodes: 0,
        deadline: budget.deadline(),
        node_limit: budget.node_limit,
        exhausted: false,
    };
    let cands: Vec<u32> = (0..1u32 << n).filter(|&t| s.free(&cl.down[t as usize])).collect();
    s.go(LatticeBits::EMPTY, &cands);
    let down = Family::new(n, s.best.masks())?;
    let witness = match direction {
        Direction::Down => down,
        Direction::Up => down.complement(),
    };
    Ok(ExtremalResult {
        kind: match direction {
            Direction::Down => Kind::LaD,
            Direction::Up => Kind::LaU,
        },
        n,
        l: None,
        poset: poset.label(),
        poset_id: canonical_id(poset),
        value: witness.len(),
        status: if s.exhausted { Status::LowerBoundOnly } else { Status::Exact },
        witness: Some(witness),
        nodes: s.nodes,
        method: vec![
            "exhaustive downset search over antichains of maximal members".into(),
            "pruning: containment is inherited by superfamilies; reach bound".into(),
            match direction {
                Direction::Down => "direction: down".into(),
                Direction::Up => "direction: up, via complements and the dual poset".into(),
            },
        ],
    })
}

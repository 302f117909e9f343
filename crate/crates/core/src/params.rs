//! Lattice parameters of a poset, certified on explicit finite ranges.

use serde::{Deserialize, Serialize};

use crate::embed::is_p_free;
use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::sets::{level_family, levels_at_most, Family};

/// Largest cube dimension accepted by [`param_y`].
pub const MAX_Y_CAP: usize = 8;

/// `y(P)`: the largest `m <= cap` with `2^[m]` free of `P`.
///
/// Errors with [`Error::Uncertified`] when `2^[cap]` is still free.
pub fn param_y(poset: &Poset, cap: usize) -> Result<usize> {
    if cap > MAX_Y_CAP {
        return Err(Error::Capability(format!("param_y cap {cap} exceeds {MAX_Y_CAP}")));
    }
    if poset.len() <= 1 {
        // Even 2^[0] = {∅} holds a one-element poset; y is undefined.
        return Err(Error::Param("y(P) is undefined for posets with fewer than two elements".into()));
    }
    for m in 1..=cap {
        let cube = Family::cube(m)?;
        if !is_p_free(&cube, poset) {
            return Ok(m - 1);
        }
    }
    Err(Error::Uncertified { cap, lower_bound: cap })
}

/// `x(n, P)`: the largest `x` with `C([n], <= x)` free of `P`; `None` when even
/// `{∅}` contains `P`.
pub fn param_x(poset: &Poset, n: usize) -> Result<Option<usize>> {
    let mut best = None;
    for x in 0..=n {
        if is_p_free(&levels_at_most(n, x)?, poset) {
            best = Some(x);
        } else {
            break;
        }
    }
    Ok(best)
}

/// Values of `x(n, P)` over a range of `n`, with the last value reported as the limit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XLimitReport {
    pub values: Vec<(usize, Option<usize>)>,
    pub limit: Option<usize>,
    /// Whether the last two tested `n` agree. A finite observation only.
    pub stabilized: bool,
    pub stabilized_from: Option<usize>,
}

pub fn param_x_limit(poset: &Poset, n_range: std::ops::RangeInclusive<usize>) -> Result<XLimitReport> {
    let mut values = Vec::new();
    for n in n_range {
        values.push((n, param_x(poset, n)?));
    }
    let limit = values.last().and_then(|v| v.1);
    let stabilized = values.len() >= 2 && values[values.len() - 2].1 == values[values.len() - 1].1;
    let mut stabilized_from = None;
    if stabilized {
        let last = values.last().map(|v| v.1);
        stabilized_from = values.iter().rev().take_while(|v| Some(v.1) == last).last().map(|v| v.0);
    }
    Ok(XLimitReport { values, limit, stabilized, stabilized_from })
}

/// Result of the band test behind `e(P)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EReport {
    /// Largest `k` such that every tested band of `k` consecutive levels is free.
    pub e: usize,
    /// A band of `e + 1` levels containing `P`, as `(n, j)` meaning levels `j+1..=j+e+1`.
    pub refuting_band: Option<(usize, usize)>,
    pub n_range: (usize, usize),
    pub j_range: (usize, usize),
}

/// Union of the levels `j+1, ..., j+k` of `2^[n]`, clipped at `n`.
fn band(n: usize, j: usize, k: usize) -> Result<Family> {
    let mut out = Vec::new();
    for lvl in (j + 1)..=(j + k) {
        if lvl <= n {
            out.extend(level_family(n, lvl)?.into_masks());
        }
    }
    Family::new(n, out)
}

/// `e(P)` on a finite envelope: the largest `k` for which
/// `∪_{i=1}^k C([n], j+i)` is free for every tested `(j, n)`.
///
/// This is an upper-bound certificate over the envelope, not a limit proof.
pub fn param_e(
    poset: &Poset,
    j_range: std::ops::RangeInclusive<usize>,
    n_range: std::ops::RangeInclusive<usize>,
) -> Result<EReport> {
    let (n_lo, n_hi) = (*n_range.start(), *n_range.end());
    let (j_lo, j_hi) = (*j_range.start(), *j_range.end());
    if n_hi > 10 {
        return Err(Error::Capability(format!("param_e tests n <= 10, got {n_hi}")));
    }
    let mut k = 0;
    loop {
        let next = k + 1;
        let mut refuted = None;
        'outer: for n in n_lo..=n_hi {
            for j in j_lo..=j_hi.min(n) {
                if !is_p_free(&band(n, j, next)?, poset) {
                    refuted = Some((n, j));
                    break 'outer;
                }
            }
        }
        match refuted {
            Some(band) => {
                return Ok(EReport { e: k, refuting_band: Some(band), n_range: (n_lo, n_hi), j_range: (j_lo, j_hi) })
            }
            None if next > n_hi => {
                return Ok(EReport { e: next, refuting_band: None, n_range: (n_lo, n_hi), j_range: (j_lo, j_hi) })
            }
            None => k = next,
        }
    }
}

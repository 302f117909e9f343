use sha2::{Digest, Sha256};

use super::Poset;

/// Exhaustive backtracking isomorphism test.
pub fn is_isomorphic(a: &Poset, b: &Poset) -> bool {
    let p = a.len();
    if p != b.len() || a.relation().len() != b.relation().len() {
        return false;
    }
    let key = |q: &Poset, i: usize| (q.below(i).count_ones(), q.above(i).count_ones());
    let mut ka: Vec<_> = (0..p).map(|i| key(a, i)).collect();
    let mut kb: Vec<_> = (0..p).map(|i| key(b, i)).collect();
    ka.sort_unstable();
    kb.sort_unstable();
    if ka != kb {
        return false;
    }
    let mut map = vec![usize::MAX; p];
    let mut used = 0u64;
    fn go(a: &Poset, b: &Poset, i: usize, map: &mut [usize], used: &mut u64) -> bool {
        let p = a.len();
        if i == p {
            return true;
        }
        let want = (a.below(i).count_ones(), a.above(i).count_ones());
        for j in 0..p {
            if *used >> j & 1 == 1 || (b.below(j).count_ones(), b.above(j).count_ones()) != want {
                continue;
            }
            let ok = (0..i).all(|k| a.lt(k, i) == b.lt(map[k], j) && a.lt(i, k) == b.lt(j, map[k]));
            if ok {
                map[i] = j;
                *used |= 1 << j;
                if go(a, b, i + 1, map, used) {
                    return true;
                }
                *used &= !(1 << j);
            }
        }
        false
    }
    go(a, b, 0, &mut map, &mut used)
}

/// Ordered partition of the elements: `cells[c]` lists the members of cell `c`.
type Partition = Vec<Vec<usize>>;

/// Splits cells by how many strictly-above and strictly-below neighbours each
/// element has in every cell, until stable. Sub-cells are ordered by their
/// signature so the result does not depend on labels.
fn refine(p: &Poset, mut cells: Partition) -> Partition {
    loop {
        let mut color = vec![0usize; p.len()];
        for (c, cell) in cells.iter().enumerate() {
            for &v in cell {
                color[v] = c;
            }
        }
        let k = cells.len();
        let mut next: Partition = Vec::with_capacity(k);
        for cell in &cells {
            let mut sig: Vec<(Vec<u32>, usize)> = cell
                .iter()
                .map(|&v| {
                    let mut s = vec![0u32; 2 * k];
                    for u in 0..p.len() {
                        if p.lt(v, u) {
                            s[color[u]] += 1;
                        }
                        if p.lt(u, v) {
                            s[k + color[u]] += 1;
                        }
                    }
                    (s, v)
                })
                .collect();
            sig.sort();
            let mut start = 0;
            for i in 1..=sig.len() {
                if i == sig.len() || sig[i].0 != sig[start].0 {
                    next.push(sig[start..i].iter().map(|x| x.1).collect());
                    start = i;
                }
            }
        }
        if next.len() == cells.len() {
            return next;
        }
        cells = next;
    }
}

fn certificate(p: &Poset, cells: &Partition) -> Vec<u64> {
    let mut pos = vec![0usize; p.len()];
    for (c, cell) in cells.iter().enumerate() {
        pos[cell[0]] = c;
    }
    let mut rows = vec![0u64; p.len()];
    for v in 0..p.len() {
        let mut r = p.above(v);
        while r != 0 {
            let u = r.trailing_zeros() as usize;
            rows[pos[v]] |= 1 << pos[u];
            r &= r - 1;
        }
    }
    rows
}

fn twins(p: &Poset, cell: &[usize]) -> bool {
    let first = cell[0];
    cell.iter().all(|&v| p.above(v) == p.above(first) && p.below(v) == p.below(first))
}

fn search(p: &Poset, cells: Partition, best: &mut Option<Vec<u64>>) {
    let cells = refine(p, cells);
    let Some(target) = cells.iter().position(|c| c.len() > 1) else {
        let cert = certificate(p, &cells);
        if best.as_ref().is_none_or(|b| cert < *b) {
            *best = Some(cert);
        }
        return;
    };
    // Interchangeable elements give identical subtrees; try one of them.
    let choices: Vec<usize> = if twins(p, &cells[target]) { vec![cells[target][0]] } else { cells[target].clone() };
    for v in choices {
        let mut next = cells.clone();
        let rest: Vec<usize> = next[target].iter().copied().filter(|&u| u != v).collect();
        next[target] = vec![v];
        next.insert(target + 1, rest);
        search(p, next, best);
    }
}

/// Label-independent identifier: a hash of the canonical relation matrix.
/// Isomorphic posets, however they are numbered, share the id.
pub fn canonical_id(p: &Poset) -> String {
    let mut best = None;
    if !p.is_empty() {
        search(p, vec![(0..p.len()).collect()], &mut best);
    }
    let rows = best.unwrap_or_default();
    let mut text = format!("p={};", p.len());
    for r in rows {
        text.push_str(&format!("{r:x},"));
    }
    let digest = Sha256::digest(text.as_bytes());
    hex::encode(&digest[..8])
}

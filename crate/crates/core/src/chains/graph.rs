use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ChainDecomposition;
use crate::embed::EmbeddingWitness;
use crate::error::{Error, Result};
use crate::poset::diamond;
use crate::sets::{full_mask, Family, SubsetMask};

/// Simple graph on `0..vertices` (at most 64) with integer edge labels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabeledGraph {
    pub vertices: usize,
    /// Keyed by `(u, v)` with `u < v`.
    pub labels: BTreeMap<(usize, usize), i64>,
}

impl LabeledGraph {
    pub fn new(vertices: usize) -> Result<Self> {
        if vertices > 64 {
            return Err(Error::Capability(format!("graphs have at most 64 vertices, got {vertices}")));
        }
        Ok(LabeledGraph { vertices, labels: BTreeMap::new() })
    }

    pub fn add_edge(&mut self, u: usize, v: usize, label: i64) -> Result<()> {
        if u == v || u >= self.vertices || v >= self.vertices {
            return Err(Error::Param(format!("bad edge ({u}, {v}) on {} vertices", self.vertices)));
        }
        self.labels.insert((u.min(v), u.max(v)), label);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.labels.remove(&(u.min(v), u.max(v)));
    }

    pub fn label(&self, u: usize, v: usize) -> Option<i64> {
        self.labels.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn edge_count(&self) -> usize {
        self.labels.len()
    }

    fn adjacency(&self) -> Vec<u64> {
        let mut adj = vec![0u64; self.vertices];
        for &(u, v) in self.labels.keys() {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        adj
    }
}

/// A 4-cycle `v0 v1 v2 v3` whose edge `v0v1` carries a smallest label and
/// the opposite edge `v2v3` a largest one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FourCycle {
    pub vertices: [usize; 4],
    /// Labels of `v0v1, v1v2, v2v3, v3v0`.
    pub labels: [i64; 4],
}

/// Checks that in every 4-cycle each smallest-labeled edge is adjacent to
/// each largest-labeled edge; returns a violating cycle otherwise.
pub fn check_cycle_label_condition(g: &LabeledGraph) -> std::result::Result<(), FourCycle> {
    let adj = g.adjacency();
    for a in 0..g.vertices {
        for c in a + 1..g.vertices {
            let common = adj[a] & adj[c];
            let mids: Vec<usize> = bits(common).collect();
            for (i, &b) in mids.iter().enumerate() {
                for &d in &mids[i + 1..] {
                    if let Some(cycle) = violation([a, b, c, d], g) {
                        return Err(cycle);
                    }
                }
            }
        }
    }
    Ok(())
}

fn bits(mut x: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (x != 0).then(|| {
            let i = x.trailing_zeros() as usize;
            x &= x - 1;
            i
        })
    })
}

fn violation(v: [usize; 4], g: &LabeledGraph) -> Option<FourCycle> {
    let lab: [i64; 4] = std::array::from_fn(|i| g.label(v[i], v[(i + 1) % 4]).expect("cycle edge"));
    let lo = *lab.iter().min().expect("four labels");
    let hi = *lab.iter().max().expect("four labels");
    // Edge i is opposite edge i + 2.
    let i = (0..4).find(|&i| lab[i] == lo && lab[(i + 2) % 4] == hi)?;
    Some(FourCycle {
        vertices: std::array::from_fn(|k| v[(i + k) % 4]),
        labels: std::array::from_fn(|k| lab[(i + k) % 4]),
    })
}

/// A copy of `K_{a,b}`: parts `left` (size `a`) and `right` (size `b`).
pub fn contains_complete_bipartite(g: &LabeledGraph, a: usize, b: usize) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    if a > b {
        return Err(Error::Param(format!("need a <= b, got a = {a}, b = {b}")));
    }
    if g.vertices < a + b {
        return Ok(None);
    }
    let adj = g.adjacency();
    let all = if g.vertices == 64 { u64::MAX } else { (1u64 << g.vertices) - 1 };
    let mut left = Vec::with_capacity(a);
    Ok(grow(&adj, a, b, 0, all, &mut left).map(|common| (left, bits(common).take(b).collect())))
}

fn grow(adj: &[u64], a: usize, b: usize, from: usize, common: u64, left: &mut Vec<usize>) -> Option<u64> {
    if left.len() == a {
        return Some(common);
    }
    for v in from..adj.len() {
        let next = common & adj[v];
        if next.count_ones() as usize >= b {
            left.push(v);
            if let Some(c) = grow(adj, a, b, v + 1, next, left) {
                return Some(c);
            }
            left.pop();
        }
    }
    None
}

/// A longest strictly monotone subsequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monotone {
    pub increasing: bool,
    pub indices: Vec<usize>,
    pub values: Vec<i64>,
}

impl Monotone {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Longest strictly increasing or strictly decreasing subsequence; equal
/// values never extend each other. Increasing wins ties.
pub fn longest_monotone_subsequence(seq: &[i64]) -> Monotone {
    let inc = longest_by(seq, |a, b| a < b);
    let dec = longest_by(seq, |a, b| a > b);
    let (increasing, indices) = if dec.len() > inc.len() { (false, dec) } else { (true, inc) };
    let values = indices.iter().map(|&i| seq[i]).collect();
    Monotone { increasing, indices, values }
}

fn longest_by(seq: &[i64], before: impl Fn(i64, i64) -> bool) -> Vec<usize> {
    let mut len = vec![1usize; seq.len()];
    let mut prev = vec![usize::MAX; seq.len()];
    for i in 0..seq.len() {
        for j in 0..i {
            if before(seq[j], seq[i]) && len[j] + 1 > len[i] {
                len[i] = len[j] + 1;
                prev[i] = j;
            }
        }
    }
    let Some(mut at) = (0..seq.len()).max_by_key(|&i| (len[i], std::cmp::Reverse(i))) else {
        return Vec::new();
    };
    let mut out = vec![at];
    while prev[at] != usize::MAX {
        at = prev[at];
        out.push(at);
    }
    out.reverse();
    out
}

/// An edge of a chain graph. Vertex `i` stands for element `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainEdge {
    pub u: usize,
    pub v: usize,
    /// The smallest chain member `C` with `C ∩ e = ∅` and `C ∪ e` in the family.
    pub base: SubsetMask,
    /// How many chain members qualify.
    pub multiplicity: usize,
}

/// The graph of pairs `e` completable by a member of one chain to a member
/// of the family, labeled by the size of that chain member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledChainGraph {
    pub chain: usize,
    pub graph: LabeledGraph,
    pub edges: Vec<ChainEdge>,
}

impl LabeledChainGraph {
    pub fn edge(&self, u: usize, v: usize) -> Option<&ChainEdge> {
        let key = (u.min(v), u.max(v));
        self.edges.iter().find(|e| (e.u, e.v) == key)
    }

    pub fn max_multiplicity(&self) -> usize {
        self.edges.iter().map(|e| e.multiplicity).max().unwrap_or(0)
    }

    pub fn total_multiplicity(&self) -> usize {
        self.edges.iter().map(|e| e.multiplicity).sum()
    }
}

pub fn chain_graph(family: &Family, scd: &ChainDecomposition, chain: usize) -> Result<LabeledChainGraph> {
    if family.n() != scd.n {
        return Err(Error::GroundSetMismatch { left: family.n(), right: scd.n });
    }
    let members =
        scd.chains.get(chain).ok_or_else(|| Error::Param(format!("no chain {chain} among {}", scd.chains.len())))?;
    let n = scd.n;
    let mut graph = LabeledGraph::new(n)?;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let e = (1u32 << u) | (1u32 << v);
            // Chains are listed bottom-up, so the first hit is the smallest.
            let hits: Vec<SubsetMask> =
                members.iter().copied().filter(|c| c.bits() & e == 0 && family.contains_mask(c.bits() | e)).collect();
            if let Some(&base) = hits.first() {
                graph.add_edge(u, v, base.len() as i64)?;
                edges.push(ChainEdge { u, v, base, multiplicity: hits.len() });
            }
        }
    }
    Ok(LabeledChainGraph { chain, graph, edges })
}

/// Chain graphs for every chain of the decomposition, in chain order.
pub fn chain_graphs(family: &Family, scd: &ChainDecomposition) -> Result<Vec<LabeledChainGraph>> {
    (0..scd.chains.len()).into_par_iter().map(|c| chain_graph(family, scd, c)).collect()
}

/// Four family members whose traces on `[n] \ e1` form a diamond.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiamondReplay {
    pub trace_set: SubsetMask,
    /// `F_1..F_4`, one per cycle edge.
    pub sets: [SubsetMask; 4],
    /// Diamond copy in the trace, bottom first.
    pub witness: EmbeddingWitness,
}

/// Turns a violating 4-cycle of a chain graph into a diamond in a trace
/// and confirms it with the embedding checker.
pub fn replay_violation(
    family: &Family,
    g: &LabeledChainGraph,
    cycle: &FourCycle,
) -> std::result::Result<DiamondReplay, String> {
    let n = family.n();
    let v = cycle.vertices;
    let sets: [SubsetMask; 4] = {
        let mut out = [SubsetMask::from_raw(n, 0); 4];
        for (i, slot) in out.iter_mut().enumerate() {
            let (a, b) = (v[i], v[(i + 1) % 4]);
            let edge = g.edge(a, b).ok_or_else(|| format!("({a}, {b}) is not an edge"))?;
            *slot = SubsetMask::from_raw(n, edge.base.bits() | 1 << a | 1 << b);
        }
        out
    };
    let x = full_mask(n) & !(1u32 << v[0] | 1u32 << v[1]);
    let tr = |s: SubsetMask| SubsetMask::from_raw(n, s.bits() & x);
    // F_1 at the bottom, F_2 and F_4 in the middle, F_3 on top.
    let witness = EmbeddingWitness { map: vec![tr(sets[0]), tr(sets[1]), tr(sets[3]), tr(sets[2])] };
    let traced = family.trace_bits(x);
    witness.validate(&traced, &diamond())?;
    Ok(DiamondReplay { trace_set: SubsetMask::from_raw(n, x), sets, witness })
}

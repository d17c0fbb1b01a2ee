//! The characteristic graph of a word sequence.
//!
//! Vertices are quadruples `(i, j, start, end)`: candidate successor slices of
//! `w_{i+1}` for position `j` of `w_i`. Vertices of one position form a
//! clique; cross edges forbid determinism violations (same predecessor symbol,
//! different slice) and misaligned concatenations (consecutive positions whose
//! slices do not abut).
//!
//! Adjacency is answered in O(1) from interned slice identities and is also
//! recomputable from the raw edge predicate [`cross_edge`]; the two routes are
//! cross-checked in tests. Neighbor lists and explicit edge lists are
//! materialized on demand only, because condition-1 edge sets grow
//! quadratically on large instances.

use serde_json::json;
use std::collections::HashMap;
use std::ops::Range;
use thiserror::Error;

use crate::lsystem::{Symbol, WordSequence};
use crate::mis;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("sequence has no derivation step (m = 0)")]
    NoSteps,
    #[error("w_{0} is empty but w_{1} is not; no positions exist for step {0}")]
    DegenerateSequence(usize, usize),
    #[error("position ({i}, {j}) out of range")]
    IndexOutOfRange { i: usize, j: usize },
}

/// Candidate slice `(i, j, start, end)`; indices into `w_{i+1}` are 1-based
/// and end-exclusive.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CGVertex {
    pub i: u32,
    pub j: u32,
    pub start: u32,
    pub end: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CliqueId {
    pub i: u32,
    pub j: u32,
}

#[derive(Clone, Debug)]
pub struct Clique {
    pub id: CliqueId,
    /// Contiguous range of vertex indices.
    pub range: Range<usize>,
    /// Predecessor symbol `w_i[j]`.
    pub symbol: Symbol,
    /// `|w_{i+1}|`.
    pub next_len: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct GraphStats {
    pub n: usize,
    pub m_edges: u64,
    pub k: usize,
    /// `max |w_{i+1}|` over steps.
    pub l: usize,
    /// Max total symbol frequency over `w_0 ... w_{m-1}`.
    pub h: usize,
    /// Distinct symbols over `w_0 ... w_{m-1}`.
    pub v: usize,
}

impl GraphStats {
    pub fn bound_holds(&self) -> bool {
        (self.n as u128) <= self.k as u128 * (self.l as u128).pow(2)
    }
}

#[derive(Clone, Debug)]
pub struct CharacteristicGraph {
    theta: WordSequence,
    vertices: Vec<CGVertex>,
    cliques: Vec<Clique>,
    clique_of: Vec<u32>,
    /// Interned successor-slice identity; equal ids iff equal slice content.
    slice_id: Vec<u32>,
    k: usize,
}

/// The required independent-set size `k = sum of |w_i| for i < m`.
pub fn target_k(theta: &WordSequence) -> usize {
    theta.words()[..theta.steps()].iter().map(|w| w.len()).sum()
}

/// The vertex set of clique `G_{i,j}` in lexicographic (start, end) order.
pub fn clique_vertices(theta: &WordSequence, i: usize, j: usize) -> Result<Vec<CGVertex>, GraphError> {
    if i >= theta.steps() || j < 1 || j > theta.word(i).len() {
        return Err(GraphError::IndexOutOfRange { i, j });
    }
    let last = theta.word(i).len();
    let cap = theta.word(i + 1).len() + 1;
    let (i, j) = (i as u32, j as u32);
    let mut out = Vec::new();
    match (j == 1, j == last as u32) {
        (true, true) => out.push(CGVertex { i, j, start: 1, end: cap as u32 }),
        (true, false) => {
            for end in 1..=cap as u32 {
                out.push(CGVertex { i, j, start: 1, end });
            }
        }
        (false, true) => {
            for start in 1..=cap as u32 {
                out.push(CGVertex { i, j, start, end: cap as u32 });
            }
        }
        (false, false) => {
            for start in 1..=cap as u32 {
                for end in start..=cap as u32 {
                    out.push(CGVertex { i, j, start, end });
                }
            }
        }
    }
    Ok(out)
}

/// The raw edge predicate for vertices of distinct cliques.
///
/// Condition 1: equal predecessor symbols with unequal successor slices.
/// Condition 2: horizontally adjacent positions of one step whose slices do
/// not abut, checked in both orientations of the unordered pair.
pub fn cross_edge(theta: &WordSequence, v: CGVertex, w: CGVertex) -> bool {
    assert!((v.i, v.j) != (w.i, w.j), "vertices must be in distinct cliques");
    let sym_v = theta.word(v.i as usize).at(v.j as usize).expect("valid vertex");
    let sym_w = theta.word(w.i as usize).at(w.j as usize).expect("valid vertex");
    if sym_v == sym_w {
        let slice_v = theta
            .word(v.i as usize + 1)
            .slice(v.start as usize, v.end as usize)
            .expect("valid vertex");
        let slice_w = theta
            .word(w.i as usize + 1)
            .slice(w.start as usize, w.end as usize)
            .expect("valid vertex");
        if slice_v != slice_w {
            return true;
        }
    }
    if v.i == w.i {
        if w.j == v.j + 1 && v.end != w.start {
            return true;
        }
        if v.j == w.j + 1 && w.end != v.start {
            return true;
        }
    }
    false
}

impl CharacteristicGraph {
    pub fn build(theta: &WordSequence) -> Result<Self, GraphError> {
        let m = theta.steps();
        if m == 0 {
            return Err(GraphError::NoSteps);
        }
        for i in 0..m {
            if theta.word(i).is_empty() && !theta.word(i + 1).is_empty() {
                return Err(GraphError::DegenerateSequence(i, i + 1));
            }
        }
        let mut vertices = Vec::new();
        let mut cliques = Vec::new();
        let mut clique_of = Vec::new();
        let mut slice_id = Vec::new();
        let mut interner: HashMap<String, u32> = HashMap::new();
        for i in 0..m {
            let w = theta.word(i);
            let next = theta.word(i + 1);
            for j in 1..=w.len() {
                let begin = vertices.len();
                let vs = clique_vertices(theta, i, j).expect("in range");
                for v in vs {
                    let text: String = next
                        .slice(v.start as usize, v.end as usize)
                        .expect("valid vertex")
                        .to_string();
                    let fresh = interner.len() as u32;
                    let id = *interner.entry(text).or_insert(fresh);
                    vertices.push(v);
                    slice_id.push(id);
                    clique_of.push(cliques.len() as u32);
                }
                cliques.push(Clique {
                    id: CliqueId { i: i as u32, j: j as u32 },
                    range: begin..vertices.len(),
                    symbol: w.at(j).expect("in range"),
                    next_len: next.len(),
                });
            }
        }
        Ok(CharacteristicGraph {
            theta: theta.clone(),
            vertices,
            cliques,
            clique_of,
            slice_id,
            k: target_k(theta),
        })
    }

    pub fn theta(&self) -> &WordSequence {
        &self.theta
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[CGVertex] {
        &self.vertices
    }

    pub fn cliques(&self) -> &[Clique] {
        &self.cliques
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn clique_of(&self, v: usize) -> usize {
        self.clique_of[v] as usize
    }

    pub fn slice_id(&self, v: usize) -> u32 {
        self.slice_id[v]
    }

    /// O(1) adjacency; irreflexive.
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        if u == v {
            return false;
        }
        let (cu, cv) = (self.clique_of[u], self.clique_of[v]);
        if cu == cv {
            return true;
        }
        let a = &self.cliques[cu as usize];
        let b = &self.cliques[cv as usize];
        if a.symbol == b.symbol && self.slice_id[u] != self.slice_id[v] {
            return true;
        }
        if a.id.i == b.id.i {
            let (vu, vv) = (self.vertices[u], self.vertices[v]);
            if b.id.j == a.id.j + 1 && vu.end != vv.start {
                return true;
            }
            if a.id.j == b.id.j + 1 && vv.end != vu.start {
                return true;
            }
        }
        false
    }

    /// All edges as ordered pairs `u < v`; quadratic, for small graphs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.vertices.len();
        let mut out = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if self.adjacent(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Edge count by direct pairwise scan; quadratic.
    pub fn edge_count_naive(&self) -> u64 {
        let n = self.vertices.len();
        let mut count = 0u64;
        for u in 0..n {
            for v in u + 1..n {
                if self.adjacent(u, v) {
                    count += 1;
                }
            }
        }
        count
    }

    /// Edge count by per-clique tallies; near-linear in the vertex count.
    ///
    /// Within-clique pairs, condition-1 pairs (grouped by predecessor symbol,
    /// discounting equal-slice pairs), and condition-2 pairs are counted
    /// separately; pairs satisfying both conditions are subtracted once.
    pub fn edge_count(&self) -> u64 {
        let mut total = 0u64;
        for c in &self.cliques {
            let t = c.range.len() as u64;
            total += t * (t - 1) / 2;
        }

        // Condition 1, grouped by symbol over all cliques.
        let mut groups: HashMap<Symbol, Vec<usize>> = HashMap::new();
        for (ci, c) in self.cliques.iter().enumerate() {
            groups.entry(c.symbol).or_default().push(ci);
        }
        for members in groups.values() {
            let mut sum_t = 0u64;
            let mut sum_t2 = 0u64;
            let mut global: HashMap<u32, u64> = HashMap::new();
            let mut per_clique_sq = 0u64;
            for &ci in members {
                let c = &self.cliques[ci];
                let t = c.range.len() as u64;
                sum_t += t;
                sum_t2 += t * t;
                let mut local: HashMap<u32, u64> = HashMap::new();
                for v in c.range.clone() {
                    *local.entry(self.slice_id[v]).or_insert(0) += 1;
                }
                for (&sid, &cnt) in &local {
                    *global.entry(sid).or_insert(0) += cnt;
                    per_clique_sq += cnt * cnt;
                }
            }
            let cross_pairs = (sum_t * sum_t - sum_t2) / 2;
            let global_sq: u64 = global.values().map(|&c| c * c).sum();
            let same_slice_cross = (global_sq - per_clique_sq) / 2;
            total += cross_pairs - same_slice_cross;
        }

        // Condition 2 between consecutive cliques of one step, minus the
        // pairs already counted under condition 1.
        for pair in self.cliques.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            if a.id.i != b.id.i {
                continue;
            }
            debug_assert_eq!(b.id.j, a.id.j + 1);
            let ta = a.range.len() as u64;
            let tb = b.range.len() as u64;
            let mut end_counts: HashMap<u32, u64> = HashMap::new();
            for v in a.range.clone() {
                *end_counts.entry(self.vertices[v].end).or_insert(0) += 1;
            }
            let mut abut = 0u64;
            for v in b.range.clone() {
                abut += end_counts.get(&self.vertices[v].start).copied().unwrap_or(0);
            }
            let cond2 = ta * tb - abut;
            total += cond2;
            if a.symbol == b.symbol {
                // Overlap with condition 1: slices differ and boundaries do
                // not abut; inclusion-exclusion over the complements.
                let mut sid_counts: HashMap<u32, u64> = HashMap::new();
                let mut joint: HashMap<(u32, u32), u64> = HashMap::new();
                for v in a.range.clone() {
                    *sid_counts.entry(self.slice_id[v]).or_insert(0) += 1;
                    *joint
                        .entry((self.vertices[v].end, self.slice_id[v]))
                        .or_insert(0) += 1;
                }
                let mut same_slice = 0u64;
                let mut abut_same_slice = 0u64;
                for v in b.range.clone() {
                    same_slice += sid_counts.get(&self.slice_id[v]).copied().unwrap_or(0);
                    abut_same_slice += joint
                        .get(&(self.vertices[v].start, self.slice_id[v]))
                        .copied()
                        .unwrap_or(0);
                }
                let overlap = ta * tb + abut_same_slice - abut - same_slice;
                total -= overlap;
            }
        }
        total
    }

    pub fn stats(&self) -> GraphStats {
        let m = self.theta.steps();
        let l = (0..m).map(|i| self.theta.word(i + 1).len()).max().unwrap_or(0);
        let mut freq: HashMap<Symbol, usize> = HashMap::new();
        for w in &self.theta.words()[..m] {
            for &s in w.symbols() {
                *freq.entry(s).or_insert(0) += 1;
            }
        }
        GraphStats {
            n: self.vertices.len(),
            m_edges: self.edge_count(),
            k: self.k,
            l,
            h: freq.values().copied().max().unwrap_or(0),
            v: freq.len(),
        }
    }

    /// Materialize into a plain adjacency-matrix graph; quadratic.
    pub fn to_graph(&self) -> mis::Graph {
        let n = self.vertices.len();
        let mut g = mis::Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if self.adjacent(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// Undirected DOT export with one cluster per clique; byte-deterministic.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph characteristic {\n");
        for (ci, c) in self.cliques.iter().enumerate() {
            out.push_str(&format!("  subgraph cluster_{ci} {{\n"));
            out.push_str(&format!("    label=\"G_{}_{}\";\n", c.id.i, c.id.j));
            for v in c.range.clone() {
                let q = self.vertices[v];
                out.push_str(&format!(
                    "    v{v} [label=\"({},{},{},{})\"];\n",
                    q.i, q.j, q.start, q.end
                ));
            }
            out.push_str("  }\n");
        }
        for (u, v) in self.edges() {
            out.push_str(&format!("  v{u} -- v{v};\n"));
        }
        out.push_str("}\n");
        out
    }

    /// JSON dump: vertex quadruples, edge index pairs, and `k`.
    pub fn to_json(&self) -> String {
        let vertices: Vec<_> = self
            .vertices
            .iter()
            .map(|v| json!({ "i": v.i, "j": v.j, "start": v.start, "end": v.end }))
            .collect();
        let edges: Vec<_> = self.edges().iter().map(|&(u, v)| json!([u, v])).collect();
        serde_json::to_string_pretty(&json!({
            "k": self.k,
            "vertices": vertices,
            "edges": edges,
        }))
        .expect("serializable")
        + "\n"
    }
}

//! Exact maximum-independent-set machinery.

use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

use crate::chargraph::CharacteristicGraph;
use crate::lsystem::Symbol;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MisError {
    #[error("graph has {n} vertices, above the brute-force cap of {cap}")]
    InstanceTooLarge { n: usize, cap: usize },
    #[error("branch-and-bound budget of {0} nodes exceeded")]
    BudgetExceeded(u64),
}

pub const BRUTEFORCE_CAP: usize = 20;

/// Plain undirected graph with dense adjacency.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<bool>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { n, adj: vec![vec![false; n]; n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Erdos-Renyi style random graph, for test corpora.
    pub fn random(n: usize, edge_prob: f64, rng: &mut impl rand::Rng) -> Self {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.random::<f64>() < edge_prob {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v && u < self.n && v < self.n);
        self.adj[u][v] = true;
        self.adj[v][u] = true;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u][v]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.adj[u][v] {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn degree_within(&self, v: usize, alive: &[usize]) -> usize {
        alive.iter().filter(|&&u| self.adj[v][u]).count()
    }
}

pub type VertexSet = BTreeSet<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOutcome {
    pub set: VertexSet,
    pub size: usize,
    /// True for exact solvers; false for sampled (QAOA) results.
    pub exact: bool,
}

pub fn is_independent(g: &Graph, set: &VertexSet) -> bool {
    let members: Vec<usize> = set.iter().copied().collect();
    for (idx, &u) in members.iter().enumerate() {
        for &v in &members[idx + 1..] {
            if g.adjacent(u, v) {
                return false;
            }
        }
    }
    true
}

/// Enumerate all subsets; ties broken toward the lexicographically smallest
/// index set.
pub fn mis_bruteforce(g: &Graph) -> Result<SolveOutcome, MisError> {
    let n = g.n();
    if n > BRUTEFORCE_CAP {
        return Err(MisError::InstanceTooLarge { n, cap: BRUTEFORCE_CAP });
    }
    // Adjacency as bitmasks so each subset check is O(n).
    let masks: Vec<u32> = (0..n)
        .map(|u| (0..n).filter(|&v| g.adjacent(u, v)).fold(0u32, |m, v| m | 1 << v))
        .collect();
    let mut best: Vec<usize> = Vec::new();
    for subset in 0u32..1 << n {
        let mut ok = true;
        let mut rest = subset;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if masks[u] & subset != 0 {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&v| subset >> v & 1 == 1).collect();
        if members.len() > best.len() || (members.len() == best.len() && members < best) {
            best = members;
        }
    }
    Ok(SolveOutcome { size: best.len(), set: best.into_iter().collect(), exact: true })
}

fn greedy_clique_cover_bound(g: &Graph, alive: &[usize]) -> usize {
    // Independent sets pick at most one vertex per clique of any cover.
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    for &v in alive {
        let mut placed = false;
        for clique in cliques.iter_mut() {
            if clique.iter().all(|&u| g.adjacent(u, v)) {
                clique.push(v);
                placed = true;
                break;
            }
        }
        if !placed {
            cliques.push(vec![v]);
        }
    }
    cliques.len()
}

struct BranchBound<'a> {
    g: &'a Graph,
    best: Vec<usize>,
    nodes: u64,
    budget: Option<u64>,
}

impl<'a> BranchBound<'a> {
    fn run(&mut self, alive: Vec<usize>, current: &mut Vec<usize>) -> Result<(), MisError> {
        self.nodes += 1;
        if let Some(b) = self.budget {
            if self.nodes > b {
                return Err(MisError::BudgetExceeded(b));
            }
        }
        if current.len() + greedy_clique_cover_bound(self.g, &alive) <= self.best.len() {
            return Ok(());
        }
        if alive.is_empty() {
            if current.len() > self.best.len() {
                self.best = current.clone();
            }
            return Ok(());
        }
        // Branch on a maximum-degree vertex, ties toward the lowest index.
        let &pivot = alive
            .iter()
            .max_by_key(|&&v| (self.g.degree_within(v, &alive), std::cmp::Reverse(v)))
            .expect("alive nonempty");
        // Include the pivot, dropping its closed neighborhood.
        let included: Vec<usize> = alive
            .iter()
            .copied()
            .filter(|&v| v != pivot && !self.g.adjacent(pivot, v))
            .collect();
        current.push(pivot);
        self.run(included, current)?;
        current.pop();
        // Exclude the pivot.
        let excluded: Vec<usize> = alive.iter().copied().filter(|&v| v != pivot).collect();
        self.run(excluded, current)
    }
}

/// Exact branch-and-bound MIS with greedy clique-cover pruning.
///
/// Deterministic: the result is the first optimum found by the fixed branch
/// order (max degree, lowest index first).
pub fn mis_exact(g: &Graph, budget: Option<u64>) -> Result<SolveOutcome, MisError> {
    let mut bb = BranchBound { g, best: Vec::new(), nodes: 0, budget };
    let alive: Vec<usize> = (0..g.n()).collect();
    bb.run(alive, &mut Vec::new())?;
    Ok(SolveOutcome { size: bb.best.len(), set: bb.best.iter().copied().collect(), exact: true })
}

/// Find a size-`k` independent set of a characteristic graph, or prove none
/// exists, by clique-wise backtracking.
///
/// Cliques are visited in (i, j) order, picking exactly one vertex per clique
/// that is non-adjacent to all prior picks. Non-adjacency is enforced
/// incrementally: within a step the slice of position j + 1 must start where
/// the slice of position j ends, and every position of one symbol must carry
/// the same slice (tracked as a binding per symbol).
pub fn find_k_is_structured(g: &CharacteristicGraph) -> Option<VertexSet> {
    let cliques = g.cliques();
    let mut chosen: Vec<usize> = Vec::with_capacity(cliques.len());
    let mut bindings: HashMap<Symbol, u32> = HashMap::new();
    if backtrack(g, 0, &mut chosen, &mut bindings) {
        Some(chosen.into_iter().collect())
    } else {
        None
    }
}

fn backtrack(
    g: &CharacteristicGraph,
    ci: usize,
    chosen: &mut Vec<usize>,
    bindings: &mut HashMap<Symbol, u32>,
) -> bool {
    let cliques = g.cliques();
    if ci == cliques.len() {
        return true;
    }
    let c = &cliques[ci];
    let required_start = if c.id.j == 1 {
        1
    } else {
        g.vertices()[*chosen.last().expect("previous clique chosen")].end
    };
    for v in c.range.clone() {
        if g.vertices()[v].start != required_start {
            continue;
        }
        let sid = g.slice_id(v);
        let prev = bindings.get(&c.symbol).copied();
        if let Some(bound) = prev {
            if bound != sid {
                continue;
            }
        }
        bindings.insert(c.symbol, sid);
        chosen.push(v);
        if backtrack(g, ci + 1, chosen, bindings) {
            return true;
        }
        chosen.pop();
        match prev {
            Some(bound) => bindings.insert(c.symbol, bound),
            None => bindings.remove(&c.symbol),
        };
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lsystem::WordSequence;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn k3() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)])
    }

    fn path5() -> Graph {
        Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)])
    }

    #[test]
    fn independence_checks() {
        let g = k3();
        assert!(is_independent(&g, &VertexSet::from([0])));
        assert!(is_independent(&g, &VertexSet::new()));
        assert!(!is_independent(&g, &VertexSet::from([0, 1])));

        let cg = CharacteristicGraph::build(&WordSequence::from_strs(&["ab", "ba"])).unwrap();
        let g = cg.to_graph();
        // (0,1,1,2) and (0,2,2,3): abutting boundary, distinct symbols.
        let u = cg.vertices().iter().position(|v| (v.start, v.end) == (1, 2)).unwrap();
        let v = cg
            .vertices()
            .iter()
            .position(|v| v.j == 2 && (v.start, v.end) == (2, 3))
            .unwrap();
        assert!(is_independent(&g, &VertexSet::from([u, v])));
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(mis_bruteforce(&k3()).unwrap().size, 1);
        assert_eq!(mis_bruteforce(&Graph::new(4)).unwrap().size, 4);
        let cg = CharacteristicGraph::build(&WordSequence::from_strs(&["ab", "ba"])).unwrap();
        let out = mis_bruteforce(&cg.to_graph()).unwrap();
        assert_eq!(out.size, 2);
        assert!(is_independent(&cg.to_graph(), &out.set));
        assert!(mis_bruteforce(&Graph::new(21)).is_err());
    }

    #[test]
    fn bruteforce_tiebreak_lowest_lex() {
        // Two disjoint edges: maximum sets of size 2; {0, 2} is lex-lowest.
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]);
        assert_eq!(mis_bruteforce(&g).unwrap().set, VertexSet::from([0, 2]));
    }

    #[test]
    fn exact_examples() {
        assert_eq!(mis_exact(&path5(), None).unwrap().size, 3);
        let cg = CharacteristicGraph::build(&WordSequence::from_strs(&["aa", "ab"])).unwrap();
        assert_eq!(mis_exact(&cg.to_graph(), None).unwrap().size, 1);
    }

    #[test]
    fn exact_matches_bruteforce_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..100 {
            let n = 1 + (trial % 12);
            let g = Graph::random(n, 0.35, &mut rng);
            let exact = mis_exact(&g, None).unwrap();
            let brute = mis_bruteforce(&g).unwrap();
            assert_eq!(exact.size, brute.size, "trial {trial}");
            assert!(is_independent(&g, &exact.set));
        }
    }

    #[test]
    fn exact_budget() {
        let g = Graph::random(14, 0.2, &mut ChaCha8Rng::seed_from_u64(5));
        assert!(matches!(mis_exact(&g, Some(1)), Err(MisError::BudgetExceeded(1))));
    }

    #[test]
    fn structured_examples() {
        let cg = CharacteristicGraph::build(&WordSequence::from_strs(&["ab", "ba"])).unwrap();
        let set = find_k_is_structured(&cg).unwrap();
        assert_eq!(set.len(), 2);
        assert!(is_independent(&cg.to_graph(), &set));
        // Boundaries abut: e of position 1 equals s of position 2.
        let picks: Vec<_> = set.iter().map(|&v| cg.vertices()[v]).collect();
        assert_eq!(picks[0].end, picks[1].start);

        let cg = CharacteristicGraph::build(&WordSequence::from_strs(&["aa", "ab"])).unwrap();
        assert_eq!(find_k_is_structured(&cg), None);

        let cg = CharacteristicGraph::build(&WordSequence::from_strs(&["a", "a"])).unwrap();
        assert_eq!(find_k_is_structured(&cg), Some(VertexSet::from([0])));
    }

    /// Structured feasibility agrees with mis_exact reaching k, and every
    /// returned set is a size-k independent set.
    #[test]
    fn structured_agrees_with_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for trial in 0..120 {
            let w0_len = 1 + (trial % 3);
            let w1_len = rng.random_range(0..=3);
            let mk = |len: usize, rng: &mut ChaCha8Rng| -> String {
                (0..len)
                    .map(|_| if rng.random::<bool>() { 'a' } else { 'b' })
                    .collect()
            };
            let w0 = mk(w0_len, &mut rng);
            let w1 = mk(w1_len, &mut rng);
            if w0.is_empty() && !w1.is_empty() {
                continue;
            }
            let theta = WordSequence::from_strs(&[w0.as_str(), w1.as_str()]);
            let cg = CharacteristicGraph::build(&theta).unwrap();
            let exact_size = mis_exact(&cg.to_graph(), None).unwrap().size;
            match find_k_is_structured(&cg) {
                Some(set) => {
                    assert_eq!(set.len(), cg.k());
                    assert!(is_independent(&cg.to_graph(), &set));
                    assert_eq!(exact_size, cg.k(), "({w0}, {w1})");
                }
                None => assert!(exact_size < cg.k(), "({w0}, {w1})"),
            }
        }
    }
}

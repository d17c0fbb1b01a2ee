//! QUBO formulation of the independent-set problem.
//!
//! The matrix has -1 on the diagonal and 1 on edges, so `x^T Q x` equals
//! `-(vertices selected) + 2 * (induced edges)`. A size target `k` is imposed
//! by adding `lambda * (sum(x) - k)^2` in unexpanded form.

use serde_json::json;
use thiserror::Error;

use crate::mis::Graph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuboError {
    #[error("bit vector of length {got} against matrix of dimension {want}")]
    DimensionMismatch { got: usize, want: usize },
    #[error("matrix has {n} variables, above the brute-force cap of {cap}")]
    InstanceTooLarge { n: usize, cap: usize },
}

pub const BRUTE_MIN_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuboMatrix {
    n: usize,
    entries: Vec<Vec<i64>>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PenaltyConfig {
    pub lambda: f64,
    pub k: usize,
}

impl PenaltyConfig {
    /// Any lambda > 1 separates size-k independent sets on clique-partitioned
    /// graphs; 2 is the default.
    pub fn new(k: usize) -> Self {
        PenaltyConfig { lambda: 2.0, k }
    }
}

/// Selection vector; bit `i` corresponds to vertex index `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitVector(Vec<bool>);

impl BitVector {
    pub fn new(bits: Vec<bool>) -> Self {
        BitVector(bits)
    }

    /// Bits of `index`, little-endian: bit `i` of the basis-state index is
    /// vertex `i`.
    pub fn from_index(index: u64, n: usize) -> Self {
        BitVector((0..n).map(|i| index >> i & 1 == 1).collect())
    }

    pub fn from_bit_str(s: &str) -> Self {
        BitVector(s.chars().map(|c| c == '1').collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn to_index(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| if b { acc | 1 << i } else { acc })
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }
}

impl QuboMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn to_json(&self, cfg: &PenaltyConfig) -> String {
        serde_json::to_string_pretty(&json!({
            "n": self.n,
            "rows": self.entries,
            "lambda": cfg.lambda,
            "k": cfg.k,
        }))
        .expect("serializable")
            + "\n"
    }
}

pub fn build_qubo(g: &Graph) -> QuboMatrix {
    let n = g.n();
    let mut entries = vec![vec![0i64; n]; n];
    for i in 0..n {
        entries[i][i] = -1;
    }
    for (u, v) in g.edges() {
        entries[u][v] = 1;
        entries[v][u] = 1;
    }
    QuboMatrix { n, entries }
}

/// `x^T Q x`.
pub fn qubo_value(q: &QuboMatrix, x: &BitVector) -> Result<i64, QuboError> {
    if x.len() != q.n {
        return Err(QuboError::DimensionMismatch { got: x.len(), want: q.n });
    }
    let mut value = 0i64;
    for i in x.ones() {
        for j in x.ones() {
            value += q.entries[i][j];
        }
    }
    Ok(value)
}

/// `x^T Q x + lambda * (sum(x) - k)^2`.
pub fn penalized_cost(q: &QuboMatrix, cfg: &PenaltyConfig, x: &BitVector) -> Result<f64, QuboError> {
    let base = qubo_value(q, x)? as f64;
    let gap = x.count_ones() as f64 - cfg.k as f64;
    Ok(base + cfg.lambda * gap * gap)
}

/// Exhaustive minimizer of the penalized cost; ties go to the lowest numeric
/// bitstring.
pub fn brute_min(q: &QuboMatrix, cfg: &PenaltyConfig) -> Result<(BitVector, f64), QuboError> {
    if q.n > BRUTE_MIN_CAP {
        return Err(QuboError::InstanceTooLarge { n: q.n, cap: BRUTE_MIN_CAP });
    }
    let mut best: Option<(BitVector, f64)> = None;
    for index in 0u64..1 << q.n {
        let x = BitVector::from_index(index, q.n);
        let cost = penalized_cost(q, cfg, &x)?;
        if best.as_ref().is_none_or(|(_, b)| cost < *b) {
            best = Some((x, cost));
        }
    }
    Ok(best.expect("at least the zero vector"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chargraph::CharacteristicGraph;
    use crate::lsystem::WordSequence;
    use crate::mis;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn k3() -> QuboMatrix {
        build_qubo(&Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]))
    }

    use crate::mis::Graph;

    #[test]
    fn build_examples() {
        assert_eq!(
            k3().entries(),
            &[vec![-1, 1, 1], vec![1, -1, 1], vec![1, 1, -1]]
        );
        assert_eq!(
            build_qubo(&Graph::new(2)).entries(),
            &[vec![-1, 0], vec![0, -1]]
        );
        let cg = CharacteristicGraph::build(&WordSequence::from_strs(&["ab", "ba"])).unwrap();
        let q = build_qubo(&cg.to_graph());
        let off_diag_ones: i64 = q
            .entries()
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter().enumerate().filter(|&(j, &e)| i != j && e == 1).count() as i64
            })
            .sum();
        assert_eq!(off_diag_ones, 24);
    }

    #[test]
    fn value_examples() {
        let q = k3();
        assert_eq!(qubo_value(&q, &BitVector::from_bit_str("100")).unwrap(), -1);
        assert_eq!(qubo_value(&q, &BitVector::from_bit_str("110")).unwrap(), 0);
        assert_eq!(qubo_value(&q, &BitVector::from_bit_str("000")).unwrap(), 0);
        assert!(qubo_value(&q, &BitVector::from_bit_str("10")).is_err());
    }

    #[test]
    fn penalized_examples() {
        let q = k3();
        let cfg = PenaltyConfig::new(1);
        let cost = |s: &str| penalized_cost(&q, &cfg, &BitVector::from_bit_str(s)).unwrap();
        assert_eq!(cost("100"), -1.0);
        assert_eq!(cost("000"), 2.0);
        assert_eq!(cost("111"), 11.0);
    }

    #[test]
    fn brute_min_examples() {
        let q = k3();
        let (x, cost) = brute_min(&q, &PenaltyConfig::new(1)).unwrap();
        assert_eq!(cost, -1.0);
        // Three single-vertex optima; the lowest basis-state index wins.
        assert_eq!(x.to_index(), 1);

        let cg = CharacteristicGraph::build(&WordSequence::from_strs(&["ab", "ba"])).unwrap();
        let g = cg.to_graph();
        let (x, cost) = brute_min(&build_qubo(&g), &PenaltyConfig::new(2)).unwrap();
        assert_eq!(cost, -2.0);
        let set: mis::VertexSet = x.ones().collect();
        assert_eq!(set.len(), 2);
        assert!(mis::is_independent(&g, &set));

        let cg = CharacteristicGraph::build(&WordSequence::from_strs(&["aa", "ab"])).unwrap();
        let (_, cost) = brute_min(&build_qubo(&cg.to_graph()), &PenaltyConfig::new(2)).unwrap();
        assert!(cost > -2.0);
    }

    /// The value identity -|T| + 2|E(T)| and the minimization property on
    /// random graphs.
    #[test]
    fn value_identity_and_minimization() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..40 {
            let n = 1 + (trial % 10);
            let g = Graph::random(n, 0.4, &mut rng);
            let q = build_qubo(&g);
            let mis_size = mis::mis_bruteforce(&g).unwrap().size as i64;
            let mut min_value = i64::MAX;
            let mut argmin = BitVector::from_index(0, n);
            for index in 0u64..1 << n {
                let x = BitVector::from_index(index, n);
                let selected: Vec<usize> = x.ones().collect();
                let induced_edges = g
                    .edges()
                    .iter()
                    .filter(|(u, v)| x.bits()[*u] && x.bits()[*v])
                    .count() as i64;
                let value = qubo_value(&q, &x).unwrap();
                assert_eq!(value, -(selected.len() as i64) + 2 * induced_edges);
                if value < min_value {
                    min_value = value;
                    argmin = x;
                }
            }
            assert_eq!(min_value, -mis_size, "trial {trial}");
            let set: mis::VertexSet = argmin.ones().collect();
            assert!(mis::is_independent(&g, &set));
        }
    }

    proptest! {
        #[test]
        fn penalty_is_nonnegative_gap(bits in proptest::collection::vec(any::<bool>(), 1..10),
                                      k in 0usize..6, lambda in 0.0f64..5.0) {
            let n = bits.len();
            let g = Graph::new(n);
            let q = build_qubo(&g);
            let cfg = PenaltyConfig { lambda, k };
            let x = BitVector::new(bits);
            let diff = penalized_cost(&q, &cfg, &x).unwrap() - qubo_value(&q, &x).unwrap() as f64;
            let gap = x.count_ones() as f64 - k as f64;
            prop_assert!((diff - lambda * gap * gap).abs() < 1e-12);
            prop_assert!(diff >= 0.0);
        }
    }
}

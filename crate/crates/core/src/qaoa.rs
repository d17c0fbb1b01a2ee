//! Classical state-vector simulation of the QAOA circuit over the penalized
//! cost, with finite-difference parameter optimization.
//!
//! The cost Hamiltonian is diagonal, so one layer is a per-amplitude phase
//! `e^{-i gamma cost(x)}` followed by the product of single-qubit X rotations
//! `RX(2 beta)`. The dropped constant of the Hamiltonian expansion only
//! shifts a global phase; outcome probabilities are unaffected.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::mis::{Graph, SolveOutcome, VertexSet};
use crate::qubo::{self, BitVector, PenaltyConfig, QuboMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QaoaError {
    #[error("{n} qubits exceed the simulator cap of {cap}; use the classical solver")]
    QubitCapExceeded { n: usize, cap: usize },
}

pub const DEFAULT_QUBIT_CAP: usize = 24;

/// Penalized cost per basis state; bit `i` of the index is qubit `i`.
#[derive(Clone, Debug)]
pub struct CostTable {
    n: usize,
    values: Vec<f64>,
}

impl CostTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Table shifted by a constant; probabilities must be unaffected.
    pub fn shifted(&self, c: f64) -> CostTable {
        CostTable { n: self.n, values: self.values.iter().map(|v| v + c).collect() }
    }
}

#[derive(Clone, Debug)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn n_qubits(&self) -> usize {
        self.amps.len().trailing_zeros() as usize
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr()
    }
}

/// Run-time configuration mirroring the solver loop: layer count `p`, penalty
/// weight, shots per evaluation `e`, iterations `T`, learning rate `eta`.
#[derive(Clone, Debug)]
pub struct QaoaParams {
    /// Layers; `None` picks `max(1, ceil(log2 n))`.
    pub p: Option<usize>,
    pub lambda: f64,
    pub shots: usize,
    pub iters: usize,
    pub eta: f64,
    pub fd_step: f64,
    pub seed: u64,
    pub qubit_cap: usize,
    /// Optimize on sampled average costs instead of the exact expectation.
    pub shot_based: bool,
}

impl Default for QaoaParams {
    fn default() -> Self {
        QaoaParams {
            p: None,
            lambda: 2.0,
            shots: 512,
            iters: 100,
            eta: 0.05,
            fd_step: 1e-3,
            seed: 0,
            qubit_cap: DEFAULT_QUBIT_CAP,
            shot_based: false,
        }
    }
}

pub fn default_layers(n: usize) -> usize {
    (n.max(1) as f64).log2().ceil().max(1.0) as usize
}

pub fn build_cost_table(
    q: &QuboMatrix,
    cfg: &PenaltyConfig,
    qubit_cap: usize,
) -> Result<CostTable, QaoaError> {
    let n = q.n();
    if n > qubit_cap {
        return Err(QaoaError::QubitCapExceeded { n, cap: qubit_cap });
    }
    let values = (0u64..1 << n)
        .map(|index| {
            qubo::penalized_cost(q, cfg, &BitVector::from_index(index, n)).expect("same dimension")
        })
        .collect();
    Ok(CostTable { n, values })
}

/// The uniform superposition over `n` qubits.
pub fn init_plus(n: usize, qubit_cap: usize) -> Result<StateVector, QaoaError> {
    if n > qubit_cap {
        return Err(QaoaError::QubitCapExceeded { n, cap: qubit_cap });
    }
    let amp = Complex64::new((1.0 / (1u64 << n) as f64).sqrt(), 0.0);
    Ok(StateVector { amps: vec![amp; 1 << n] })
}

/// Multiply each amplitude by `e^{-i gamma cost(x)}`.
pub fn apply_cost_phase(psi: &mut StateVector, table: &CostTable, gamma: f64) {
    assert_eq!(psi.amps.len(), table.values.len());
    for (amp, &cost) in psi.amps.iter_mut().zip(&table.values) {
        *amp *= Complex64::from_polar(1.0, -gamma * cost);
    }
}

/// Apply `RX(2 beta)` on every qubit.
pub fn apply_mixer(psi: &mut StateVector, beta: f64) {
    let n = psi.n_qubits();
    let (cos, sin) = (beta.cos(), beta.sin());
    let off = Complex64::new(0.0, -sin);
    for qubit in 0..n {
        let stride = 1usize << qubit;
        let mut base = 0usize;
        while base < psi.amps.len() {
            for idx in base..base + stride {
                let a = psi.amps[idx];
                let b = psi.amps[idx + stride];
                psi.amps[idx] = cos * a + off * b;
                psi.amps[idx + stride] = off * a + cos * b;
            }
            base += stride << 1;
        }
    }
}

/// The p-layer circuit: uniform start, then alternating phase and mixer.
pub fn run_circuit(
    table: &CostTable,
    gammas: &[f64],
    betas: &[f64],
) -> StateVector {
    assert_eq!(gammas.len(), betas.len());
    let mut psi = init_plus(table.n, usize::MAX).expect("no cap");
    for (&gamma, &beta) in gammas.iter().zip(betas) {
        apply_cost_phase(&mut psi, table, gamma);
        apply_mixer(&mut psi, beta);
    }
    psi
}

/// Exact expectation of the cost over the measurement distribution.
pub fn expectation(psi: &StateVector, table: &CostTable) -> f64 {
    assert_eq!(psi.amps.len(), table.values.len());
    psi.amps
        .iter()
        .zip(&table.values)
        .map(|(a, &c)| a.norm_sqr() * c)
        .sum()
}

/// Draw basis-state indices from `|psi|^2`; deterministic for a given rng.
pub fn sample(psi: &StateVector, shots: usize, rng: &mut impl Rng) -> Vec<u64> {
    let mut cdf = Vec::with_capacity(psi.amps.len());
    let mut acc = 0.0;
    for a in &psi.amps {
        acc += a.norm_sqr();
        cdf.push(acc);
    }
    (0..shots)
        .map(|_| {
            let u: f64 = rng.random::<f64>() * acc;
            cdf.partition_point(|&c| c <= u).min(psi.amps.len() - 1) as u64
        })
        .collect()
}

fn grad_central(objective: &mut dyn FnMut(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut grad = Vec::with_capacity(x.len());
    let mut probe = x.to_vec();
    for i in 0..x.len() {
        probe[i] = x[i] + h;
        let plus = objective(&probe);
        probe[i] = x[i] - h;
        let minus = objective(&probe);
        probe[i] = x[i];
        grad.push((plus - minus) / (2.0 * h));
    }
    grad
}

/// Central-difference gradient of the exact circuit expectation; exposed for
/// step-size consistency checks.
pub fn expectation_gradient(table: &CostTable, gammas: &[f64], betas: &[f64], h: f64) -> Vec<f64> {
    let p = gammas.len();
    let params: Vec<f64> = gammas.iter().chain(betas).copied().collect();
    let mut objective = |x: &[f64]| expectation(&run_circuit(table, &x[..p], &x[p..]), table);
    grad_central(&mut objective, &params, h)
}

pub struct OptimizeResult {
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
    /// Objective value per iteration, initial value first.
    pub history: Vec<f64>,
}

/// Gradient descent on the circuit objective.
///
/// By default the objective is the exact simulated expectation, which keeps
/// the descent deterministic. With `shot_based` the objective is the average
/// sampled cost over `shots` fresh measurements per evaluation; every sample
/// drawn along the way is offered to `observe` for best-cost bookkeeping.
pub fn optimize(
    table: &CostTable,
    init_gammas: &[f64],
    init_betas: &[f64],
    params: &QaoaParams,
    rng: &mut ChaCha8Rng,
    mut observe: Option<&mut dyn FnMut(u64)>,
) -> OptimizeResult {
    let p = init_gammas.len();
    let mut point: Vec<f64> = init_gammas.iter().chain(init_betas).copied().collect();
    let shot_based = params.shot_based;
    let shots = params.shots.max(1);
    let eval = |x: &[f64], rng: &mut ChaCha8Rng, observe: &mut Option<&mut dyn FnMut(u64)>| {
        let psi = run_circuit(table, &x[..p], &x[p..]);
        if shot_based {
            let drawn = sample(&psi, shots, rng);
            let mut total = 0.0;
            for &s in &drawn {
                total += table.values[s as usize];
                if let Some(cb) = observe.as_mut() {
                    cb(s);
                }
            }
            total / drawn.len() as f64
        } else {
            expectation(&psi, table)
        }
    };
    let mut history = Vec::with_capacity(params.iters + 1);
    history.push(eval(&point, rng, &mut observe));
    for _ in 0..params.iters {
        let grad = {
            let mut objective = |x: &[f64]| eval(x, rng, &mut observe);
            grad_central(&mut objective, &point, params.fd_step)
        };
        for (xi, gi) in point.iter_mut().zip(&grad) {
            *xi -= params.eta * gi;
        }
        history.push(eval(&point, rng, &mut observe));
    }
    OptimizeResult {
        gammas: point[..p].to_vec(),
        betas: point[p..].to_vec(),
        history,
    }
}

/// Random initial angles: gamma in [0, pi), beta in [0, pi/2).
pub fn init_params(p: usize, rng: &mut impl Rng) -> (Vec<f64>, Vec<f64>) {
    let gammas = (0..p).map(|_| rng.random_range(0.0..std::f64::consts::PI)).collect();
    let betas = (0..p)
        .map(|_| rng.random_range(0.0..std::f64::consts::FRAC_PI_2))
        .collect();
    (gammas, betas)
}

/// Sampled QAOA solve for a size-`k` independent set.
///
/// Builds the penalized cost table, optimizes the angles, then keeps the
/// lowest-cost bitstring over all drawn samples (ties toward the lower
/// basis-state index) and decodes it as a vertex set. The result is a
/// candidate: it is never claimed to be independent or of size `k`.
pub fn modified_qaoa_mis_solver(
    g: &Graph,
    k: usize,
    params: &QaoaParams,
) -> Result<SolveOutcome, QaoaError> {
    let q = qubo::build_qubo(g);
    let cfg = PenaltyConfig { lambda: params.lambda, k };
    let table = build_cost_table(&q, &cfg, params.qubit_cap)?;
    let n = q.n();
    let p = params.p.unwrap_or_else(|| default_layers(n));
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let (gammas, betas) = init_params(p, &mut rng);

    let mut best: Option<(f64, u64)> = None;
    let mut consider = |index: u64, table: &CostTable| {
        let cost = table.values[index as usize];
        let better = match best {
            None => true,
            Some((c, i)) => cost < c || (cost == c && index < i),
        };
        if better {
            best = Some((cost, index));
        }
    };

    let result = {
        let mut observe = |index: u64| consider(index, &table);
        optimize(
            &table,
            &gammas,
            &betas,
            params,
            &mut rng,
            if params.shot_based { Some(&mut observe) } else { None },
        )
    };
    let psi = run_circuit(&table, &result.gammas, &result.betas);
    for index in sample(&psi, params.shots.max(1), &mut rng) {
        consider(index, &table);
    }
    let (_, index) = best.expect("at least one shot");
    let set: VertexSet = BitVector::from_index(index, n).ones().collect();
    Ok(SolveOutcome { size: set.len(), set, exact: false })
}

//! End-to-end inference: build the characteristic graph, find a size-k
//! independent set with one of the backends, extract the production rules,
//! and verify the result by re-derivation.

use serde_json::json;
use std::collections::BTreeMap;
use std::time::{Duration, Instant};
use thiserror::Error;

use crate::chargraph::{self, CharacteristicGraph, GraphStats};
use crate::lsystem::{serialize_system, D0LSystem, Symbol, Word, WordSequence};
use crate::mis::{self, VertexSet};
use crate::qaoa::{self, QaoaError, QaoaParams};
use crate::sat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PipelineError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Qaoa(#[from] QaoaError),
    #[error("resource cap: {0}")]
    ResourceCap(String),
    #[error("incompatible model: {0}")]
    IncompatibleModel(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtractError {
    #[error("selection carries {got} vertices for position ({i}, {j}); expected exactly one")]
    NotOnePerClique { i: u32, j: u32, got: usize },
    #[error("conflicting successors for symbol '{0}'")]
    ConflictingProduction(char),
}

/// Which solver produced a result; reporting only.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BackendKind {
    ExactStructured,
    ExactGeneric,
    Qaoa,
    SatInternal,
    SatModel,
}

impl std::fmt::Display for BackendKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            BackendKind::ExactStructured => "exact-structured",
            BackendKind::ExactGeneric => "exact-generic",
            BackendKind::Qaoa => "qaoa",
            BackendKind::SatInternal => "sat-internal",
            BackendKind::SatModel => "sat-model",
        };
        f.write_str(name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ExactBackend {
    /// Clique-wise backtracking over the characteristic graph.
    #[default]
    Structured,
    /// Generic branch-and-bound MIS on the materialized graph.
    GenericMis,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    System(D0LSystem),
    Infeasible,
    /// Non-exact backends only: the best candidate failed verification (or no
    /// candidate could be extracted at all).
    Unverified { candidate: Option<D0LSystem>, reason: String },
}

#[derive(Clone, Debug)]
pub struct InferenceResult {
    pub outcome: Outcome,
    pub backend: BackendKind,
    pub stats: GraphStats,
    pub wall_time: Duration,
}

impl InferenceResult {
    pub fn to_json(&self) -> String {
        let outcome = match &self.outcome {
            Outcome::System(sys) => json!({
                "kind": "system",
                "system": serialize_system(sys),
            }),
            Outcome::Infeasible => json!({ "kind": "infeasible" }),
            Outcome::Unverified { candidate, reason } => json!({
                "kind": "unverified",
                "candidate": candidate.as_ref().map(serialize_system),
                "reason": reason,
            }),
        };
        serde_json::to_string_pretty(&json!({
            "outcome": outcome,
            "backend": self.backend.to_string(),
            "stats": self.stats,
            "wall_time_ms": self.wall_time.as_secs_f64() * 1000.0,
        }))
        .expect("serializable")
            + "\n"
    }
}

/// Compatibility of a candidate system with the observed sequence.
pub fn verify(theta: &WordSequence, sys: &D0LSystem) -> bool {
    sys.is_compatible(theta)
}

/// Production extraction: each selected vertex `(i, j, s, e)` contributes the
/// rule `w_i[j] -> w_{i+1}[s:e]`; the axiom is `w_0`.
///
/// The selection must pick exactly one vertex per clique. Conflicting
/// successors for one symbol cannot arise from a genuine independent set
/// (same-symbol vertices with different slices are adjacent).
pub fn extract_system(
    g: &CharacteristicGraph,
    set: &VertexSet,
) -> Result<D0LSystem, ExtractError> {
    let mut per_clique: Vec<Vec<usize>> = vec![Vec::new(); g.cliques().len()];
    for &v in set {
        per_clique[g.clique_of(v)].push(v);
    }
    let mut productions: BTreeMap<Symbol, Word> = BTreeMap::new();
    for (ci, clique) in g.cliques().iter().enumerate() {
        let members = &per_clique[ci];
        if members.len() != 1 {
            return Err(ExtractError::NotOnePerClique {
                i: clique.id.i,
                j: clique.id.j,
                got: members.len(),
            });
        }
        let v = g.vertices()[members[0]];
        let succ = g
            .theta()
            .word(v.i as usize + 1)
            .slice(v.start as usize, v.end as usize)
            .expect("valid vertex");
        match productions.get(&clique.symbol) {
            Some(existing) if *existing != succ => {
                return Err(ExtractError::ConflictingProduction(clique.symbol.0));
            }
            _ => {
                productions.insert(clique.symbol, succ);
            }
        }
    }
    Ok(D0LSystem::new(g.theta().word(0).clone(), productions))
}

/// Stats computable without a graph, for instances screened before
/// construction; `n` and `m_edges` are reported as zero.
fn theta_stats(theta: &WordSequence) -> GraphStats {
    let m = theta.steps();
    GraphStats {
        n: 0,
        m_edges: 0,
        k: chargraph::target_k(theta),
        l: (0..m).map(|i| theta.word(i + 1).len()).max().unwrap_or(0),
        h: 0,
        v: theta.occurring_symbols().len(),
    }
}

enum Screened {
    Graph(Box<CharacteristicGraph>),
    /// Some `w_i = ε` precedes a nonempty word: infeasible by the derivation
    /// semantics, invisible to the graph (no vertices exist for that step).
    DegenerateInfeasible,
}

fn screen(theta: &WordSequence) -> Result<Screened, PipelineError> {
    let m = theta.steps();
    if m == 0 {
        return Err(PipelineError::InvalidInput(
            "sequence must contain at least two words (m >= 1)".into(),
        ));
    }
    for i in 0..m {
        if theta.word(i).is_empty() && !theta.word(i + 1).is_empty() {
            return Ok(Screened::DegenerateInfeasible);
        }
    }
    let g = CharacteristicGraph::build(theta).expect("screened sequence");
    Ok(Screened::Graph(Box::new(g)))
}

fn finish(
    theta: &WordSequence,
    g: &CharacteristicGraph,
    set: Option<VertexSet>,
    backend: BackendKind,
    start: Instant,
) -> InferenceResult {
    let outcome = match set {
        None => Outcome::Infeasible,
        Some(set) => {
            let sys = extract_system(g, &set).expect("exact solver returned a size-k IS");
            assert!(verify(theta, &sys), "extracted system must re-derive the sequence");
            Outcome::System(sys)
        }
    };
    InferenceResult { outcome, backend, stats: g.stats(), wall_time: start.elapsed() }
}

/// Exact inference: solve the size-k independent-set problem, extract, and
/// verify. Returns `Infeasible` when no size-k independent set exists.
pub fn classical_d0l_solver(
    theta: &WordSequence,
    backend: ExactBackend,
) -> Result<InferenceResult, PipelineError> {
    let start = Instant::now();
    let kind = match backend {
        ExactBackend::Structured => BackendKind::ExactStructured,
        ExactBackend::GenericMis => BackendKind::ExactGeneric,
    };
    let g = match screen(theta)? {
        Screened::DegenerateInfeasible => {
            return Ok(InferenceResult {
                outcome: Outcome::Infeasible,
                backend: kind,
                stats: theta_stats(theta),
                wall_time: start.elapsed(),
            });
        }
        Screened::Graph(g) => g,
    };
    let set = match backend {
        ExactBackend::Structured => mis::find_k_is_structured(&g),
        ExactBackend::GenericMis => {
            let out = mis::mis_exact(&g.to_graph(), None).expect("no budget configured");
            if out.size == g.k() {
                Some(out.set)
            } else {
                None
            }
        }
    };
    Ok(finish(theta, &g, set, kind, start))
}

/// QAOA inference: sample a candidate selection, extract when it picks one
/// vertex per clique, and verify by re-derivation. Never claims
/// infeasibility; failures surface as `Unverified`.
pub fn quant_infer_d0l(
    theta: &WordSequence,
    params: &QaoaParams,
) -> Result<InferenceResult, PipelineError> {
    let start = Instant::now();
    let g = match screen(theta)? {
        Screened::DegenerateInfeasible => {
            return Ok(InferenceResult {
                outcome: Outcome::Infeasible,
                backend: BackendKind::Qaoa,
                stats: theta_stats(theta),
                wall_time: start.elapsed(),
            });
        }
        Screened::Graph(g) => g,
    };
    if g.vertex_count() > params.qubit_cap {
        return Err(QaoaError::QubitCapExceeded { n: g.vertex_count(), cap: params.qubit_cap }.into());
    }
    let sampled = qaoa::modified_qaoa_mis_solver(&g.to_graph(), g.k(), params)?;
    let outcome = match extract_system(&g, &sampled.set) {
        Ok(candidate) => {
            if verify(theta, &candidate) {
                Outcome::System(candidate)
            } else {
                Outcome::Unverified {
                    candidate: Some(candidate),
                    reason: "best sampled candidate does not re-derive the sequence".into(),
                }
            }
        }
        Err(e) => Outcome::Unverified { candidate: None, reason: e.to_string() },
    };
    Ok(InferenceResult {
        outcome,
        backend: BackendKind::Qaoa,
        stats: g.stats(),
        wall_time: start.elapsed(),
    })
}

/// Where a SAT model comes from.
#[derive(Clone, Copy, Debug)]
pub enum SatSource<'a> {
    /// Self-contained exhaustive assignment sweep (small instances only).
    Internal,
    /// Text of an external solver's model file.
    Model(&'a str),
}

/// SAT-route inference: encode, obtain a model (internally or from a file),
/// validate it as a size-k independent set, extract, and verify.
pub fn sat_infer_d0l(
    theta: &WordSequence,
    source: SatSource<'_>,
) -> Result<InferenceResult, PipelineError> {
    let start = Instant::now();
    let kind = match source {
        SatSource::Internal => BackendKind::SatInternal,
        SatSource::Model(_) => BackendKind::SatModel,
    };
    let g = match screen(theta)? {
        Screened::DegenerateInfeasible => {
            return Ok(InferenceResult {
                outcome: Outcome::Infeasible,
                backend: kind,
                stats: theta_stats(theta),
                wall_time: start.elapsed(),
            });
        }
        Screened::Graph(g) => g,
    };
    let (formula, map) = sat::encode(&g);
    let set = match source {
        SatSource::Internal => match sat::sat_sweep(&formula) {
            Ok(Some(assignment)) => Some(
                (0..formula.var_count)
                    .filter(|v| assignment >> v & 1 == 1)
                    .collect::<VertexSet>(),
            ),
            Ok(None) => None,
            Err(e) => return Err(PipelineError::ResourceCap(e.to_string())),
        },
        SatSource::Model(text) => {
            let model = sat::parse_model(text)
                .map_err(|e| PipelineError::IncompatibleModel(e.to_string()))?;
            match model {
                sat::SolverModel::Unsat => None,
                sat::SolverModel::Assignment(assignment) => {
                    let set = sat::decode_model(&map, &assignment)
                        .map_err(|e| PipelineError::IncompatibleModel(e.to_string()))?;
                    validate_selection(&g, &set)?;
                    Some(set)
                }
            }
        }
    };
    Ok(finish(theta, &g, set, kind, start))
}

/// Reject external models that do not describe a size-k independent set.
fn validate_selection(g: &CharacteristicGraph, set: &VertexSet) -> Result<(), PipelineError> {
    if set.len() != g.k() {
        return Err(PipelineError::IncompatibleModel(format!(
            "model selects {} vertices; expected k = {}",
            set.len(),
            g.k()
        )));
    }
    let members: Vec<usize> = set.iter().copied().collect();
    for (idx, &u) in members.iter().enumerate() {
        for &v in &members[idx + 1..] {
            if g.adjacent(u, v) {
                return Err(PipelineError::IncompatibleModel(format!(
                    "model selects adjacent vertices {u} and {v}"
                )));
            }
        }
    }
    Ok(())
}

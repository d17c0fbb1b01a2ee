//! CNF encoding of "the characteristic graph has an independent set of size
//! k", DIMACS output, and model decoding.
//!
//! One variable per vertex. Every edge contributes a binary clause forbidding
//! both endpoints; every clique contributes an at-least-one clause. The
//! clique partition has exactly k parts and within-clique edges cap each part
//! at one vertex, so satisfying assignments are exactly the size-k
//! independent sets.

use std::collections::HashMap;
use thiserror::Error;

use crate::chargraph::CharacteristicGraph;
use crate::mis::VertexSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("model misses an assignment for variable {0}")]
    IncompleteModel(usize),
    #[error("formula has {n} variables, above the sweep cap of {cap}")]
    InstanceTooLarge { n: usize, cap: usize },
}

pub const SWEEP_CAP: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    pub var_count: usize,
    pub clauses: Vec<Vec<i64>>,
}

/// Vertices map to variables `1..=n` in canonical vertex order.
#[derive(Clone, Debug)]
pub struct VarMap {
    n: usize,
}

impl VarMap {
    pub fn var(&self, vertex: usize) -> i64 {
        assert!(vertex < self.n);
        vertex as i64 + 1
    }

    pub fn vertex(&self, var: i64) -> usize {
        let v = var.unsigned_abs() as usize;
        assert!(v >= 1 && v <= self.n);
        v - 1
    }

    pub fn var_count(&self) -> usize {
        self.n
    }
}

pub fn encode(g: &CharacteristicGraph) -> (CnfFormula, VarMap) {
    let map = VarMap { n: g.vertex_count() };
    let mut clauses = Vec::new();
    for (u, v) in g.edges() {
        clauses.push(vec![-map.var(u), -map.var(v)]);
    }
    for clique in g.cliques() {
        clauses.push(clique.range.clone().map(|v| map.var(v)).collect());
    }
    (CnfFormula { var_count: map.n, clauses }, map)
}

pub fn write_dimacs(f: &CnfFormula) -> String {
    let mut out = String::from("c independent-set-of-size-k encoding\n");
    out.push_str(&format!("p cnf {} {}\n", f.var_count, f.clauses.len()));
    for clause in &f.clauses {
        for lit in clause {
            out.push_str(&lit.to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    out
}

pub fn parse_dimacs(text: &str) -> Result<CnfFormula, SatError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("p cnf ") {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(SatError::Parse { line: line_no, msg: "bad header".into() });
            }
            let vars = parts[0].parse().map_err(|_| SatError::Parse {
                line: line_no,
                msg: "bad variable count".into(),
            })?;
            let count = parts[1].parse().map_err(|_| SatError::Parse {
                line: line_no,
                msg: "bad clause count".into(),
            })?;
            header = Some((vars, count));
            continue;
        }
        let mut clause = Vec::new();
        for tok in line.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| SatError::Parse {
                line: line_no,
                msg: format!("bad literal '{tok}'"),
            })?;
            if lit == 0 {
                break;
            }
            clause.push(lit);
        }
        clauses.push(clause);
    }
    let (var_count, expected) =
        header.ok_or(SatError::Parse { line: 1, msg: "missing 'p cnf' header".into() })?;
    if clauses.len() != expected {
        return Err(SatError::Parse {
            line: 1,
            msg: format!("header promises {expected} clauses, found {}", clauses.len()),
        });
    }
    Ok(CnfFormula { var_count, clauses })
}

/// A solver's answer: UNSAT, or a (possibly partial) assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolverModel {
    Unsat,
    Assignment(HashMap<usize, bool>),
}

/// Accepts `s UNSATISFIABLE`, `v `-prefixed literal lines, and bare lines of
/// signed literals terminated by 0; `c` lines and `s SATISFIABLE` are skipped.
pub fn parse_model(text: &str) -> Result<SolverModel, SatError> {
    let mut assignment = HashMap::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('s') {
            if line.contains("UNSATISFIABLE") {
                return Ok(SolverModel::Unsat);
            }
            continue;
        }
        let body = line.strip_prefix("v ").unwrap_or(line);
        for tok in body.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| SatError::Parse {
                line: line_no,
                msg: format!("bad literal '{tok}'"),
            })?;
            if lit == 0 {
                continue;
            }
            assignment.insert(lit.unsigned_abs() as usize, lit > 0);
        }
    }
    Ok(SolverModel::Assignment(assignment))
}

/// Vertices whose variables are assigned true; the assignment must be total.
pub fn decode_model(
    map: &VarMap,
    assignment: &HashMap<usize, bool>,
) -> Result<VertexSet, SatError> {
    let mut set = VertexSet::new();
    for var in 1..=map.var_count() {
        match assignment.get(&var) {
            Some(true) => {
                set.insert(map.vertex(var as i64));
            }
            Some(false) => {}
            None => return Err(SatError::IncompleteModel(var)),
        }
    }
    Ok(set)
}

fn clause_masks(f: &CnfFormula) -> Vec<(u64, u64)> {
    f.clauses
        .iter()
        .map(|clause| {
            let mut pos = 0u64;
            let mut neg = 0u64;
            for &lit in clause {
                let bit = 1u64 << (lit.unsigned_abs() - 1);
                if lit > 0 {
                    pos |= bit;
                } else {
                    neg |= bit;
                }
            }
            (pos, neg)
        })
        .collect()
}

fn satisfies_masks(masks: &[(u64, u64)], assignment: u64) -> bool {
    masks.iter().all(|&(pos, neg)| pos & assignment != 0 || neg & !assignment != 0)
}

/// Exhaustive satisfiability sweep; returns the lowest satisfying assignment
/// as a variable bitmask (bit `v-1` for variable `v`).
pub fn sat_sweep(f: &CnfFormula) -> Result<Option<u64>, SatError> {
    if f.var_count > SWEEP_CAP {
        return Err(SatError::InstanceTooLarge { n: f.var_count, cap: SWEEP_CAP });
    }
    let masks = clause_masks(f);
    Ok((0u64..1 << f.var_count).find(|&a| satisfies_masks(&masks, a)))
}

/// All satisfying assignments, for model-counting checks.
pub fn sat_sweep_all(f: &CnfFormula) -> Result<Vec<u64>, SatError> {
    if f.var_count > SWEEP_CAP {
        return Err(SatError::InstanceTooLarge { n: f.var_count, cap: SWEEP_CAP });
    }
    let masks = clause_masks(f);
    Ok((0u64..1 << f.var_count).filter(|&a| satisfies_masks(&masks, a)).collect())
}

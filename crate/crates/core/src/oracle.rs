//! Direct backtracking inference over split points.
//!
//! This solver deliberately shares no code with the graph-based pipeline: it
//! searches left-to-right over ways of splitting each `w_{i+1}` into `|w_i|`
//! consecutive blocks, carrying a global symbol-to-successor binding map and
//! failing fast on binding conflicts. It serves as the independent feasibility
//! oracle for the graph route.

use std::collections::BTreeMap;
use thiserror::Error;

use crate::lsystem::{D0LSystem, Symbol, Word, WordSequence};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("search budget of {0} nodes exceeded")]
    InstanceTooLarge(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleOutcome {
    System(D0LSystem),
    Infeasible,
}

pub const DEFAULT_BUDGET: u64 = 20_000_000;

struct Search<'a> {
    theta: &'a WordSequence,
    bindings: BTreeMap<Symbol, Word>,
    budget: u64,
    nodes: u64,
    solutions: Vec<BTreeMap<Symbol, Word>>,
    want_all: bool,
}

impl<'a> Search<'a> {
    /// Returns true to stop the search (first solution found, unless
    /// enumerating all of them).
    fn step(&mut self, i: usize, j: usize, offset: usize) -> Result<bool, OracleError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(OracleError::InstanceTooLarge(self.budget));
        }
        let m = self.theta.steps();
        if i == m {
            self.solutions.push(self.bindings.clone());
            return Ok(!self.want_all);
        }
        let w = self.theta.word(i);
        let next = self.theta.word(i + 1);
        if j > w.len() {
            // All blocks of this step placed; they must cover w_{i+1} exactly.
            if offset == next.len() + 1 {
                return self.step(i + 1, 1, 1);
            }
            return Ok(false);
        }
        let sym = w.at(j).expect("position in range");
        let last = j == w.len();
        if let Some(bound) = self.bindings.get(&sym).cloned() {
            let end = offset + bound.len();
            if end > next.len() + 1 || (last && end != next.len() + 1) {
                return Ok(false);
            }
            if next.slice(offset, end).expect("checked range") != bound {
                return Ok(false);
            }
            return self.step(i, j + 1, end);
        }
        let ends: Vec<usize> = if last {
            vec![next.len() + 1]
        } else {
            (offset..=next.len() + 1).collect()
        };
        for end in ends {
            if end < offset {
                continue;
            }
            let block = next.slice(offset, end).expect("checked range");
            self.bindings.insert(sym, block);
            let done = self.step(i, j + 1, end)?;
            self.bindings.remove(&sym);
            if done {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn run(theta: &WordSequence, budget: u64, want_all: bool) -> Result<Vec<D0LSystem>, OracleError> {
    assert!(theta.steps() >= 1, "inference needs at least one step");
    let mut search = Search {
        theta,
        bindings: BTreeMap::new(),
        budget,
        nodes: 0,
        solutions: Vec::new(),
        want_all,
    };
    search.step(0, 1, 1)?;
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for map in search.solutions {
        if seen.insert(map.clone()) {
            out.push(D0LSystem::new(theta.word(0).clone(), map));
        }
    }
    Ok(out)
}

/// Find any compatible system by backtracking, or certify infeasibility.
pub fn infer(theta: &WordSequence, budget: u64) -> Result<OracleOutcome, OracleError> {
    let mut found = run(theta, budget, false)?;
    Ok(match found.pop() {
        Some(sys) => OracleOutcome::System(sys),
        None => OracleOutcome::Infeasible,
    })
}

/// All distinct compatible systems (distinct production maps over the symbols
/// of `w_0 ... w_{m-1}`).
pub fn enumerate_all(theta: &WordSequence, budget: u64) -> Result<Vec<D0LSystem>, OracleError> {
    run(theta, budget, true)
}

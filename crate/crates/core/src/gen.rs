//! Seeded random instance generation.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use thiserror::Error;

use crate::lsystem::{D0LSystem, Symbol, Word, WordSequence};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("no acceptable instance after {0} attempts")]
    GenerationFailed(u32),
}

const MAX_ATTEMPTS: u32 = 1000;
const MAX_AXIOM_LEN: usize = 3;

/// Sample a total D0L-system and its trace.
///
/// Successor lengths are uniform in `0..=max_succ_len`; the axiom is a random
/// word of length `1..=3`. A draw is rejected and retried when any word of the
/// trace exceeds `word_cap` or collapses to the empty word before step
/// `steps`. Deterministic for a fixed seed.
pub fn gen_random_instance(
    alphabet_size: usize,
    max_succ_len: usize,
    steps: usize,
    word_cap: usize,
    seed: u64,
) -> Result<(D0LSystem, WordSequence), GenError> {
    assert!(alphabet_size >= 1 && alphabet_size <= 26);
    assert!(steps >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphabet: Vec<Symbol> = (0..alphabet_size)
        .map(|i| Symbol((b'a' + i as u8) as char))
        .collect();

    let random_word = |rng: &mut ChaCha8Rng, len: usize| -> Word {
        Word::new((0..len).map(|_| alphabet[rng.random_range(0..alphabet.len())]).collect())
    };

    for _ in 0..MAX_ATTEMPTS {
        let axiom_len = rng.random_range(1..=MAX_AXIOM_LEN);
        let axiom = random_word(&mut rng, axiom_len);
        let mut productions = BTreeMap::new();
        for &a in &alphabet {
            let len = rng.random_range(0..=max_succ_len);
            productions.insert(a, random_word(&mut rng, len));
        }
        let sys = D0LSystem::new(axiom, productions);
        let trace = sys.derive_trace(steps).expect("total production map");
        let within_cap = trace.words().iter().all(|w| w.len() <= word_cap);
        let collapses_early = trace.words()[..steps].iter().any(|w| w.is_empty());
        if within_cap && !collapses_early {
            return Ok((sys, trace));
        }
    }
    Err(GenError::GenerationFailed(MAX_ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unary_alphabet() {
        // Over {a} with successor length <= 1, the map is a -> "" or a -> "a";
        // a -> "" collapses the trace before the final step only when steps > 1.
        let (sys, theta) = gen_random_instance(1, 1, 1, 10, 3).unwrap();
        assert_eq!(theta.words().len(), 2);
        let succ = sys.successor(Symbol('a')).unwrap();
        assert!(succ.len() <= 1);
        assert!(sys.is_compatible(&theta));
    }

    #[test]
    fn generated_instances_are_compatible() {
        for seed in 0..50 {
            let (sys, theta) = gen_random_instance(2, 3, 3, 60, seed).unwrap();
            assert!(sys.is_compatible(&theta), "seed {seed}");
            assert!(theta.words().iter().all(|w| w.len() <= 60));
            assert!(theta.words()[..3].iter().all(|w| !w.is_empty()));
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let a = gen_random_instance(3, 2, 2, 40, 99).unwrap();
        let b = gen_random_instance(3, 2, 2, 40, 99).unwrap();
        assert_eq!(a, b);
    }
}

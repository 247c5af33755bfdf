//! Brute-force oracles and random inputs shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use posfo::alphabet::{words_up_to, Letter, OrderedAlphabet};
use posfo::Nfa;
use rand::Rng;

/// A random NFA with up to `max_states` states, each transition present
/// with probability `density`.
pub fn random_nfa<R: Rng>(rng: &mut R, alphabet: &Arc<OrderedAlphabet>, max_states: usize, density: f64) -> Nfa {
    let n = rng.random_range(1..=max_states);
    let mut trans = Vec::new();
    for p in 0..n {
        for a in alphabet.letters() {
            for q in 0..n {
                if rng.random_bool(density) {
                    trans.push((p, a, q));
                }
            }
        }
    }
    let initial: Vec<usize> = (0..n).filter(|&q| q == 0 || rng.random_bool(0.2)).collect();
    let accepting: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.4)).collect();
    Nfa::new(alphabet.clone(), n, &initial, &accepting, &trans).expect("states in range")
}

/// Every word letter-wise below `w`.
pub fn words_below(alphabet: &OrderedAlphabet, w: &[Letter]) -> Vec<Vec<Letter>> {
    let mut out = vec![Vec::new()];
    for &a in w {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                alphabet.downset(a).iter().map(move |&b| {
                    let mut p = prefix.clone();
                    p.push(b);
                    p
                })
            })
            .collect();
    }
    out
}

/// `w ∈ L↑` by enumerating the words below `w`.
pub fn in_upward_closure(nfa: &Nfa, w: &[Letter]) -> bool {
    words_below(nfa.alphabet(), w).iter().any(|u| nfa.accepts_letters(u))
}

/// Monotonicity restricted to words of length at most `max_len`.
pub fn monotone_up_to(nfa: &Nfa, max_len: usize) -> bool {
    words_up_to(nfa.alphabet().len(), max_len)
        .all(|v| !in_upward_closure(nfa, &v) || nfa.accepts_letters(&v))
}

pub fn universal_up_to(nfa: &Nfa, max_len: usize) -> bool {
    words_up_to(nfa.alphabet().len(), max_len).all(|w| nfa.accepts_letters(&w))
}

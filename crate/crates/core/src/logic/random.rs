//! Seeded random formulas for property and coherence tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Formula;
use crate::alphabet::OrderedAlphabet;

/// Shape parameters for random formulas. Bound variables are named `x0`,
/// `x1`, ... by nesting depth.
#[derive(Clone, Debug)]
pub struct FormulaGen {
    /// Letters usable in `[a](x)` atoms.
    pub letters: Vec<String>,
    /// Predicates usable in `p(x)` atoms.
    pub predicates: Vec<String>,
    /// Whether `x<=y`, `x<y` may appear (words only).
    pub order_atoms: bool,
    /// Whether `E(x,y)` may appear (graphs only).
    pub edge_atoms: bool,
    pub equality_atoms: bool,
    pub negation: bool,
    pub max_rank: usize,
    /// Maximum nesting of binary connectives between quantifiers.
    pub max_width: usize,
}

impl FormulaGen {
    /// FO⁺ over words on `alphabet`.
    pub fn for_words(alphabet: &OrderedAlphabet, max_rank: usize) -> FormulaGen {
        FormulaGen {
            letters: alphabet.names().to_vec(),
            predicates: alphabet.predicates().map(<[String]>::to_vec).unwrap_or_default(),
            order_atoms: true,
            edge_atoms: false,
            equality_atoms: false,
            negation: false,
            max_rank,
            max_width: 2,
        }
    }

    pub fn sentence<R: Rng>(&self, rng: &mut R) -> Formula {
        self.gen(rng, &mut Vec::new(), self.max_rank, self.max_width)
    }

    /// A formula whose free variables are among `free`.
    pub fn with_free<R: Rng>(&self, rng: &mut R, free: &[&str]) -> Formula {
        let mut vars: Vec<String> = free.iter().map(|s| s.to_string()).collect();
        self.gen(rng, &mut vars, self.max_rank, self.max_width)
    }

    fn gen<R: Rng>(&self, rng: &mut R, vars: &mut Vec<String>, rank: usize, width: usize) -> Formula {
        let roll: f64 = rng.random();
        if rank > 0 && (vars.is_empty() || roll < 0.4) {
            let x = format!("x{}", vars.len());
            vars.push(x.clone());
            let body = self.gen(rng, vars, rank - 1, self.max_width);
            vars.pop();
            return if rng.random_bool(0.5) {
                Formula::Exists(x, Box::new(body))
            } else {
                Formula::Forall(x, Box::new(body))
            };
        }
        if width > 0 && roll < 0.75 {
            let arity = rng.random_range(2..=3);
            let parts = (0..arity).map(|_| self.gen(rng, vars, rank, width - 1)).collect();
            return if rng.random_bool(0.5) { Formula::And(parts) } else { Formula::Or(parts) };
        }
        if self.negation && roll < 0.85 {
            return Formula::not(self.gen(rng, vars, rank, width.saturating_sub(1)));
        }
        self.atom(rng, vars)
    }

    fn atom<R: Rng>(&self, rng: &mut R, vars: &[String]) -> Formula {
        if vars.is_empty() {
            return if rng.random_bool(0.5) { Formula::True } else { Formula::False };
        }
        let pick = |rng: &mut R| vars[rng.random_range(0..vars.len())].clone();
        let mut kinds: Vec<u8> = Vec::new();
        if !self.letters.is_empty() {
            kinds.extend([0, 0]);
        }
        if !self.predicates.is_empty() {
            kinds.extend([1, 1]);
        }
        if self.order_atoms {
            kinds.extend([2, 3]);
        }
        if self.edge_atoms {
            kinds.extend([4, 4, 4]);
        }
        if self.equality_atoms {
            kinds.extend([5, 6]);
        }
        if kinds.is_empty() {
            return Formula::True;
        }
        match kinds[rng.random_range(0..kinds.len())] {
            0 => Formula::LetterUp(self.letters[rng.random_range(0..self.letters.len())].clone(), pick(rng)),
            1 => Formula::Pred(
                self.predicates[rng.random_range(0..self.predicates.len())].clone(),
                pick(rng),
            ),
            2 => Formula::Le(pick(rng), pick(rng)),
            3 => Formula::Lt(pick(rng), pick(rng)),
            4 => Formula::Edge(pick(rng), pick(rng)),
            5 => Formula::EqVar(pick(rng), pick(rng)),
            _ => Formula::NeqVar(pick(rng), pick(rng)),
        }
    }
}

/// A random FO⁺ sentence over `alphabet` of quantifier rank at most `rank`.
pub fn random_formula(alphabet: &OrderedAlphabet, rank: usize, seed: u64) -> Formula {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    FormulaGen::for_words(alphabet, rank).sentence(&mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Mode;

    #[test]
    fn deterministic_and_bounded() {
        let alph = OrderedAlphabet::powerset(&["a", "b"]).unwrap();
        for seed in 0..50 {
            let f = random_formula(&alph, 3, seed);
            assert_eq!(f, random_formula(&alph, 3, seed));
            assert!(f.quantifier_rank() <= 3);
            assert!(f.is_positive());
            assert!(f.is_sentence());
            assert_eq!(Formula::parse(&f.to_string(), Mode::FoPlus).unwrap(), f);
        }
    }
}

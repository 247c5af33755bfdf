use std::sync::Arc;

use posfo::alphabet::{words_up_to, OrderedAlphabet, Word};
use posfo::logic::{eval_word, FormulaGen, Valuation};
use posfo::{Formula, Mode};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn powerset2() -> Arc<OrderedAlphabet> {
    Arc::new(OrderedAlphabet::powerset(&["p", "q"]).unwrap())
}

/// A random pair `u ≤ v` with `|u| = |v| ≤ max_len`.
fn random_pair<R: Rng>(rng: &mut R, alph: &Arc<OrderedAlphabet>, max_len: usize) -> (Word, Word) {
    let len = rng.random_range(0..=max_len);
    let v: Vec<_> = (0..len).map(|_| posfo::Letter(rng.random_range(0..alph.len() as u32))).collect();
    let u = v
        .iter()
        .map(|&b| {
            let down = alph.downset(b);
            down[rng.random_range(0..down.len())]
        })
        .collect();
    (Word::new(alph.clone(), u), Word::new(alph.clone(), v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn positive_formulas_transfer_upwards(seed in any::<u64>()) {
        let alph = powerset2();
        let mut rng = StdRng::seed_from_u64(seed);
        let f = FormulaGen::for_words(&alph, 3).sentence(&mut rng);
        prop_assert!(f.is_positive() && f.quantifier_rank() <= 3);
        let (u, v) = random_pair(&mut rng, &alph, 5);
        let none = Valuation::new();
        if eval_word(&f, &u, &none).unwrap() {
            prop_assert!(eval_word(&f, &v, &none).unwrap(), "{} on {} / {}", f, u, v);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn render_then_parse_is_identity(seed in any::<u64>()) {
        let alph = powerset2();
        let mut gen = FormulaGen::for_words(&alph, 3);
        gen.equality_atoms = true;
        let f = gen.sentence(&mut StdRng::seed_from_u64(seed));
        prop_assert_eq!(Formula::parse(&f.to_string(), Mode::FoPlus).unwrap(), f);
    }

    #[test]
    fn positivization_preserves_meaning(seed in any::<u64>()) {
        let alph = Arc::new(OrderedAlphabet::trivial(&["a", "b", "c"]).unwrap());
        let mut gen = FormulaGen::for_words(&alph, 2);
        gen.negation = true;
        let f = gen.sentence(&mut StdRng::seed_from_u64(seed));
        let g = f.positivize_trivial_order(&alph).unwrap();
        prop_assert!(g.is_positive());
        prop_assert!(g.quantifier_rank() <= f.quantifier_rank());
        for w in words_up_to(alph.len(), 3) {
            let w = Word::new(alph.clone(), w);
            prop_assert_eq!(eval_word(&f, &w, &Valuation::new()).unwrap(), eval_word(&g, &w, &Valuation::new()).unwrap());
        }
    }
}

#[test]
fn parser_examples() {
    let f = Formula::parse("exists x y . [a](x) & x < y & ([b](y) | p(y))", Mode::FoPlus).unwrap();
    assert_eq!(f.quantifier_rank(), 2);
    assert!(f.is_positive());
    assert!(Formula::parse("exists x . ![a](x)", Mode::FoPlus).is_err());
    let g = Formula::parse("forall x . !(x = x) | E(x, x)", Mode::Fo).unwrap();
    assert!(!g.is_positive());
    assert!(Formula::parse("exists x . [a](y)", Mode::Fo).unwrap().free_vars().contains("y"));
}

#[test]
fn evaluation_examples() {
    let alph = Arc::new(OrderedAlphabet::new(&["a", "b"], &[("a", "b")]).unwrap());
    // "some b": true on b-containing words and, being positive, upward closed.
    let some_b = Formula::parse("exists x . [b](x)", Mode::FoPlus).unwrap();
    let some_a = Formula::parse("exists x . [a](x)", Mode::FoPlus).unwrap();
    let none = Valuation::new();
    let w = |s: &str| alph.parse_word(s).unwrap();
    assert!(eval_word(&some_b, &w("a b"), &none).unwrap());
    assert!(!eval_word(&some_b, &w("a a"), &none).unwrap());
    // `[a](x)` reads a↑, so it also holds on b.
    assert!(eval_word(&some_a, &w("b"), &none).unwrap());
    let free = Formula::parse("[b](x)", Mode::FoPlus).unwrap();
    assert!(eval_word(&free, &w("a"), &none).is_err());
    let at = Valuation::from([("x".to_string(), 1)]);
    assert!(eval_word(&free, &w("a b"), &at).unwrap());
}

use std::sync::Arc;

use posfo::alphabet::{OrderedAlphabet, Word};
use posfo::games::{
    best_duplicator_response, best_spoiler_move, distinguishing_formula, duplicator_wins, find_witness_pairs,
};
use posfo::logic::{eval_word, FormulaGen, Valuation};
use posfo::{klang, Letter, SpoilerMove, WordGamePosition};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn powerset2() -> Arc<OrderedAlphabet> {
    Arc::new(OrderedAlphabet::powerset(&["p", "q"]).unwrap())
}

fn random_word<R: Rng>(rng: &mut R, alph: &Arc<OrderedAlphabet>, max_len: usize) -> Word {
    let len = rng.random_range(1..=max_len);
    Word::new(alph.clone(), (0..len).map(|_| Letter(rng.random_range(0..alph.len() as u32))).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn solver_agrees_with_formulas(seed in any::<u64>()) {
        let alph = powerset2();
        let mut rng = StdRng::seed_from_u64(seed);
        let u = random_word(&mut rng, &alph, 4);
        let v = random_word(&mut rng, &alph, 4);
        let n = rng.random_range(1..=2);
        let none = Valuation::new();
        if duplicator_wins(&u, &v, n).unwrap() {
            prop_assert!(distinguishing_formula(&u, &v, n).unwrap().is_none());
            let gen = FormulaGen::for_words(&alph, n);
            for _ in 0..40 {
                let f = gen.sentence(&mut rng);
                if eval_word(&f, &u, &none).unwrap() {
                    prop_assert!(eval_word(&f, &v, &none).unwrap(), "{}", f);
                }
            }
        } else {
            let f = distinguishing_formula(&u, &v, n).unwrap().expect("Spoiler wins");
            prop_assert!(f.is_positive() && f.quantifier_rank() <= n);
            prop_assert!(eval_word(&f, &u, &none).unwrap());
            prop_assert!(!eval_word(&f, &v, &none).unwrap());
        }
    }
}

#[test]
fn game_basics() {
    let alph = klang::alphabet();
    let w = |s: &str| alph.parse_word(s).unwrap();
    assert!(duplicator_wins(&w("{a}"), &w("{a,b}"), 3).unwrap());
    assert!(!duplicator_wins(&w("{a,b}"), &w("{a}"), 1).unwrap());
    assert!(duplicator_wins(&w("{a}"), &w("{b}"), 0).unwrap());
    assert!(duplicator_wins(&w("{a}"), &w("{a}"), 7).is_err());

    let (u, v) = klang::long_pair(1);
    let p = WordGamePosition::new(u.clone(), v.clone());
    assert!(p.is_valid());
    assert_eq!(best_spoiler_move(&p, 1).unwrap(), None);
    let reply = best_duplicator_response(&p, SpoilerMove::left(0), 1).unwrap();
    assert_eq!(reply, Some(0));
    let bad = WordGamePosition { pairs: vec![(0, 1), (1, 0)], ..p };
    assert!(!bad.is_valid());
}

#[test]
fn witness_pairs_for_k() {
    let k = klang::build_k();
    let pairs = find_witness_pairs(&k, 1, 3, 5).unwrap();
    assert!(!pairs.is_empty());
    for (u, v) in &pairs {
        assert!(k.accepts(u) && !k.accepts(v));
        assert!(duplicator_wins(u, v, 1).unwrap());
        assert!(u.len() <= 3 && v.len() <= 3);
    }
    // A monotone language definable at rank 1 has no rank-1 witnesses.
    let alph = klang::alphabet();
    let some_a = posfo::Regex::parse(r#"(concat (star any) (up "{a}") (star any))"#).unwrap().to_nfa(&alph).unwrap();
    assert!(find_witness_pairs(&some_a, 1, 2, 5).unwrap().is_empty());
}

use posfo::alphabet::{words_up_to, Word};
use posfo::graphs::directed::{
    check_digraph, decode_digraph, encode_digraph, is_gw_digraph, phi_digraph, psi_digraph, translate_digraph,
    DiRule, SOURCE_VARS,
};
use posfo::graphs::undirected::{
    decode_ugraph, encode_ugraph, halved_budget, is_gw_ugraph, source_vars, translate_ugraph,
};
use posfo::graphs::{ef_game_graph, Graph};
use posfo::logic::{eval_word, Compiled, FormulaGen, Valuation};
use posfo::{klang, Letter};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn words(max_len: usize, allow_empty_letter: bool) -> Vec<Word> {
    let alph = klang::alphabet();
    words_up_to(alph.len(), max_len)
        .filter(|w| !w.is_empty() && w[0] != Letter(0) && (allow_empty_letter || !w.contains(&Letter(0))))
        .map(|w| Word::new(alph.clone(), w))
        .collect()
}

fn directed_sources() -> Valuation {
    SOURCE_VARS.iter().enumerate().map(|(i, s)| (s.to_string(), i)).collect()
}

#[test]
fn directed_round_trip_up_to_3() {
    for u in words(3, true) {
        let g = encode_digraph(&u).unwrap();
        assert!(is_gw_digraph(&g), "{u}");
        assert_eq!(decode_digraph(&g).unwrap(), u);
        // Membership does not depend on vertex names.
        let n = g.vertex_count();
        let perm: Vec<usize> = (0..n).map(|i| (i + 2) % n).collect();
        let moved = g.relabel(&perm);
        assert_eq!(decode_digraph(&moved).unwrap(), u);
    }
}

#[test]
fn directed_rules_and_psi() {
    let (minus, plus) = psi_digraph();
    let minus = Compiled::for_graphs(&minus).unwrap();
    let plus = Compiled::for_graphs(&plus).unwrap();
    let src = directed_sources();
    let mut rng = StdRng::seed_from_u64(5);
    for u in words(3, true) {
        let g = encode_digraph(&u).unwrap();
        assert!(minus.eval(&g, &src).unwrap() && !plus.eval(&g, &src).unwrap());
        let n = g.vertex_count();
        for _ in 0..6 {
            let mut h = g.clone();
            let (x, y) = (rng.random_range(0..n), rng.random_range(0..n));
            if h.has_edge(x, y) {
                h.remove_edge(x, y);
            } else {
                h.add_edge(x, y);
            }
            let by_rules = check_digraph(&h).is_none();
            let by_psi = minus.eval(&h, &src).unwrap() && !plus.eval(&h, &src).unwrap();
            assert_eq!(by_rules, by_psi, "{u} with ({x},{y}) toggled");
        }
    }
    let mut loopy = encode_digraph(&klang::alphabet().parse_word("{a} {b}").unwrap()).unwrap();
    loopy.add_edge(3, 3);
    assert_eq!(check_digraph(&loopy), Some(DiRule::Cycle));
    assert!(plus.eval(&loopy, &src).unwrap());
}

#[test]
fn directed_translation_agrees() {
    let alph = klang::alphabet();
    let mut gen = FormulaGen::for_words(&alph, 2);
    gen.negation = true;
    let mut rng = StdRng::seed_from_u64(510);
    let corpus = words(4, true);
    let graphs: Vec<Graph> = corpus.iter().map(|u| encode_digraph(u).unwrap()).collect();
    let src = directed_sources();
    for _ in 0..100 {
        let f = gen.sentence(&mut rng);
        let g_f = Compiled::for_graphs(&translate_digraph(&f).unwrap()).unwrap();
        for (u, g) in corpus.iter().zip(&graphs) {
            assert_eq!(g_f.eval(g, &src).unwrap(), eval_word(&f, u, &Valuation::new()).unwrap(), "{f} on {u}");
        }
    }
}

#[test]
fn directed_phi_defines_k_and_is_monotone() {
    let phi = Compiled::for_graphs(&phi_digraph()).unwrap();
    let k = klang::build_k();
    let corpus = words(3, true);
    for u in &corpus {
        assert_eq!(phi.holds(&encode_digraph(u).unwrap()), k.accepts(u), "{u}");
    }
    let mut rng = StdRng::seed_from_u64(512);
    for _ in 0..200 {
        let u = &corpus[rng.random_range(0..corpus.len())];
        let g = encode_digraph(u).unwrap();
        let mut h = g.clone();
        let n = h.vertex_count();
        h.add_edge(rng.random_range(0..n), rng.random_range(0..n));
        if phi.holds(&g) {
            assert!(phi.holds(&h), "{u}");
        }
    }
}

#[test]
fn undirected_round_trip_up_to_3() {
    for u in words(3, false) {
        let g = encode_ugraph(&u).unwrap();
        assert!(is_gw_ugraph(&g), "{u}");
        assert_eq!(decode_ugraph(&g).unwrap(), u);
    }
    assert!(encode_ugraph(&klang::alphabet().parse_word("{a} {}").unwrap()).is_err());
}

#[test]
fn undirected_translation_agrees() {
    let alph = klang::alphabet();
    let mut gen = FormulaGen::for_words(&alph, 2);
    gen.negation = true;
    let mut rng = StdRng::seed_from_u64(54);
    let corpus = words(2, false);
    let graphs: Vec<Graph> = corpus.iter().map(|u| encode_ugraph(u).unwrap()).collect();
    let src: Valuation = source_vars().into_iter().enumerate().map(|(i, s)| (s, i)).collect();
    for _ in 0..30 {
        let f = gen.sentence(&mut rng);
        let g_f = Compiled::for_graphs(&translate_ugraph(&f).unwrap()).unwrap();
        for (u, g) in corpus.iter().zip(&graphs) {
            assert_eq!(g_f.eval(g, &src).unwrap(), eval_word(&f, u, &Valuation::new()).unwrap(), "{f} on {u}");
        }
    }
}

#[test]
fn games_on_encodings() {
    let single = Graph::new(1, false);
    let double = Graph::new(2, false);
    assert!(ef_game_graph(&single, &double, 1).unwrap());
    assert!(!ef_game_graph(&single, &double, 2).unwrap());
    assert!(ef_game_graph(&double, &double, 3).unwrap());
    assert!(ef_game_graph(&single, &Graph::new(1, true), 1).is_err());

    for n in 1..=2u32 {
        let (u, v) = klang::long_pair(n);
        let (gu, gv) = (encode_digraph(&u).unwrap(), encode_digraph(&v).unwrap());
        assert!(ef_game_graph(&gu, &gv, n as usize).unwrap(), "directed n = {n}");
    }
    let (u, v) = klang::long_pair(2);
    let (gu, gv) = (encode_ugraph(&u).unwrap(), encode_ugraph(&v).unwrap());
    assert_eq!(halved_budget(2), 1);
    assert!(ef_game_graph(&gu, &gv, halved_budget(2)).unwrap());
}

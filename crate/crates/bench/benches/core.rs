use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use posfo::alphabet::words_up_to;
use posfo::logic::{Compiled, WordModel};
use posfo::{games, intgame, klang, OrderedAlphabet, Regex};

fn automata(c: &mut Criterion) {
    let ab = Arc::new(OrderedAlphabet::powerset(&["p", "q"]).unwrap());
    let nfa = Regex::parse("(concat (star any) (lit {p}) (star any) (lit {q}) (star any))")
        .unwrap()
        .to_nfa(&ab)
        .unwrap();
    c.bench_function("monotone_closure", |b| b.iter(|| black_box(&nfa).monotone_closure()));
    c.bench_function("canonical_dfa", |b| b.iter(|| black_box(&nfa).canonical_dfa()));
    let k = klang::build_k();
    c.bench_function("k_is_monotone", |b| b.iter(|| black_box(&k).is_monotone()));
}

fn word_games(c: &mut Criterion) {
    let mut group = c.benchmark_group("long_pair_game");
    for n in 1..=3 {
        let (u, v) = klang::long_pair(n);
        group.bench_function(format!("n{n}"), |b| {
            b.iter(|| games::duplicator_wins(black_box(&u), black_box(&v), n as usize).unwrap())
        });
    }
    group.finish();
}

fn phi_k(c: &mut Criterion) {
    let ab = klang::alphabet();
    let compiled = Compiled::for_words(&klang::phi_k(), &ab).unwrap();
    let words: Vec<_> = words_up_to(ab.len(), 4).collect();
    c.bench_function("phi_k_words_up_to_4", |b| {
        b.iter(|| {
            words
                .iter()
                .filter(|w| compiled.holds(&WordModel { alphabet: &ab, letters: w }))
                .count()
        })
    });
}

fn integer_games(c: &mut Criterion) {
    c.bench_function("intgame_sweep_n1_len4", |b| b.iter(|| intgame::sweep(1, black_box(4))));
}

criterion_group!(benches, automata, word_games, phi_k, integer_games);
criterion_main!(benches);

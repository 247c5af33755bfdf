use posfo::intgame::{all_arenas, solve_int_game, spoiler_rounds, sweep, verify_lemma_strategy, IntArena, Orientation};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[test]
fn n1_arenas_fall_in_two_rounds() {
    for orientation in [Orientation::Standard, Orientation::Mirrored] {
        for arena in all_arenas(1, 5, orientation) {
            assert_eq!(spoiler_rounds(&arena, 2), Some(2), "{arena}");
            assert_eq!(verify_lemma_strategy(&arena), Ok(2), "{arena}");
        }
    }
}

#[test]
fn n2_exhaustive_sweep() {
    let rep = sweep(2, 6);
    assert!(rep.failures.is_empty(), "{:?}", rep.failures);
    println!("arenas {} exact {:?} lemma {:?}", rep.arenas, rep.exact_rounds, rep.lemma_rounds);
    // Observed: the exact minimum never exceeds the statement bound 2n.
    assert!(rep.exact_rounds[5..].iter().all(|&c| c == 0));
}

#[test]
fn n3_sampled_arenas() {
    let mut rng = StdRng::seed_from_u64(622);
    let mut checked = 0;
    while checked < 40 {
        let ulen = rng.random_range(2..=8);
        let vlen = rng.random_range(1..=8);
        let u: Vec<u8> = (0..ulen).map(|_| rng.random_range(0..=3)).collect();
        let v: Vec<u8> = (0..vlen).map(|_| rng.random_range(1..=3)).collect();
        let orientation = if rng.random_bool(0.5) { Orientation::Standard } else { Orientation::Mirrored };
        let Ok(arena) = IntArena::new(3, u, v, orientation) else { continue };
        checked += 1;
        let lemma = verify_lemma_strategy(&arena).unwrap_or_else(|f| panic!("{arena}: {f:?}"));
        assert!(lemma <= 8, "{arena}: {lemma}");
        let exact = spoiler_rounds(&arena, 8).expect("Spoiler wins");
        assert!(exact <= lemma);
    }
}

#[test]
fn principal_line_is_legal() {
    let arena = IntArena::parse(2, "2 2 1 0 1", "(2,1) (1,0) (2,1)", Orientation::Standard).unwrap();
    let out = solve_int_game(&arena, 6).unwrap();
    assert!(!out.duplicator_wins);
    let (last, rest) = out.line.split_last().unwrap();
    assert_eq!(last.1, None);
    let pairs: Vec<_> = rest.iter().map(|&(mv, q)| mv.pair(q.unwrap())).collect();
    assert!(arena.is_legal(&pairs));
}

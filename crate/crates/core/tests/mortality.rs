use posfo::mortality::{
    check_superposition, local_factor_scan, normalize_types, segment_analysis, witness_words, Config, RawMachine,
    Reduction, TuringMachine, WitnessOutcome,
};
use posfo::Letter;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn machines() -> Vec<TuringMachine> {
    vec![TuringMachine::right_mover(), TuringMachine::bounce()]
}

#[test]
fn config_automata_on_length_5() {
    let r = Reduction::new(TuringMachine::right_mover());
    // Every base letter except `#` can occur in a configuration.
    let letters: Vec<Letter> = (0..r.base_len() as u32).map(Letter).filter(|&a| a != r.hash()).collect();
    let k = letters.len();
    for code in 0..k.pow(5) {
        let w: Vec<Letter> = (0..5).map(|i| letters[code / k.pow(i) % k]).collect();
        let ty = r.is_config_word(&w).map(|t| t.0);
        for i in 1..=3 {
            assert_eq!(r.config_nfa(i).accepts_letters(&w), ty == Some(i));
        }
    }
    for i in 1..=3 {
        assert!(!r.config_nfa(i).accepts_letters(&[]));
    }
}

#[test]
fn heights_behave() {
    for tm in machines() {
        let r = Reduction::new(tm);
        for len in 1..=5 {
            for c in r.configs_of_length(len) {
                let Some(h) = r.height(&c, 20) else {
                    // Only an immortal machine can outrun the fuel, and not
                    // on such short tapes.
                    panic!("height beyond fuel on tape {len}");
                };
                if let Some(next) = r.step_config(&c) {
                    assert_eq!(r.height(&next, 20), Some(h - 1));
                } else {
                    assert_eq!(h, 0);
                }
                // A run of `h` steps reads cells up to distance `h + 1` from the head.
                for n in h + 1..=h + 3 {
                    assert_eq!(r.height(&r.n_approx(&c, n), 20), Some(h), "radius {n}");
                }
                let mut padded = c.clone();
                padded.tape.insert(0, 0);
                padded.tape.push(0);
                padded.head += 1;
                assert!(r.height(&padded, 20).unwrap() >= h);
            }
        }
    }
    let bounce = Reduction::new(TuringMachine::bounce());
    let tallest = (1..=5).flat_map(|len| bounce.configs_of_length(len)).map(|c| bounce.height(&c, 20).unwrap()).max();
    assert_eq!(tallest, Some(2));
    let mover = Reduction::new(TuringMachine::right_mover());
    let c = &mover.configs_of_length(12)[0];
    assert_eq!(mover.height(c, 5), None);
}

#[test]
fn superposition_lemmas() {
    for tm in machines() {
        let r = Reduction::new(tm);
        let rep = check_superposition(&r, 4, 4);
        assert!(rep.violations.is_empty(), "{:?}", rep.violations);
        assert!(rep.configs > 0);
        for c in r.configs_of_length(3) {
            let w = r.encode_config(&c);
            assert_eq!(r.superpose(&w, &w).unwrap(), Some(w.clone()));
        }
    }
}

/// Random base words `C_{t}#C_{t+1}#...` from tape-3 configurations.
fn random_base_word(r: &Reduction, rng: &mut StdRng, segments: usize, start: u8) -> Vec<Letter> {
    let configs = r.configs_of_length(3);
    let mut out = Vec::new();
    let mut t = start;
    for i in 0..segments {
        let pool: Vec<&Config> = configs.iter().filter(|c| r.config_type(c) == t).collect();
        if i > 0 {
            out.push(r.hash());
        }
        out.extend(r.encode_config(pool[rng.random_range(0..pool.len())]));
        t = t % 3 + 1;
    }
    out
}

#[test]
fn l_base_follows_the_type_cycle() {
    let mut rng = StdRng::seed_from_u64(63);
    for tm in machines() {
        let r = Reduction::new(tm);
        assert!(r.l_m().is_monotone());
        for _ in 0..60 {
            let k = rng.random_range(1..=5);
            let types: Vec<u8> = (0..k).map(|_| rng.random_range(1..=3)).collect();
            let configs = r.configs_of_length(2 + rng.random_range(0..2));
            let mut w = Vec::new();
            for &t in &types {
                let pool: Vec<&Config> = configs.iter().filter(|c| r.config_type(c) == t).collect();
                if pool.is_empty() {
                    continue;
                }
                if !w.is_empty() {
                    w.push(r.hash());
                }
                w.extend(r.encode_config(pool[rng.random_range(0..pool.len())]));
            }
            if w.is_empty() {
                continue;
            }
            let segs: Vec<u8> = w
                .split(|&a| a == r.hash())
                .map(|s| r.is_config_word(s).expect("configuration").0)
                .collect();
            let cyclic = segs.windows(2).all(|p| p[1] == p[0] % 3 + 1) && segs.contains(&1);
            assert_eq!(r.l_base().accepts_letters(&w), cyclic, "{segs:?}");
        }
        let w = random_base_word(&r, &mut rng, 4, 1);
        assert!(r.l_m().accepts_letters(&w));
        assert!(local_factor_scan(&r, &w).is_empty());
        let rep = segment_analysis(&r, &w, true).unwrap();
        assert!(rep.ambiguous.is_empty());
        assert_eq!(rep.anchors.len(), 4);
    }
}

#[test]
fn witness_pair_for_right_mover() {
    let r = Reduction::new(TuringMachine::right_mover());
    let WitnessOutcome::Found { u, v, start } = witness_words(&r, 1, 12).unwrap() else {
        panic!("expected a witness");
    };
    assert_eq!(start.tape.len(), 8);
    assert!(r.l_m().accepts(&u) && !r.l_m().accepts(&v));
    assert!(posfo::games::duplicator_wins(&u, &v, 1).unwrap());
    let rep = segment_analysis(&r, v.letters(), true).unwrap();
    assert_eq!(rep.incoherent().count(), 1);
    // Without anchored endpoints the outer segments are still single-typed.
    assert_eq!(segment_analysis(&r, v.letters(), false).unwrap().ambiguous, rep.ambiguous);
}

#[test]
fn normalization_preserves_runs() {
    let raw = RawMachine::new(
        &["0", "1"],
        &["s", "t"],
        &[["s", "0", "t", "1", "R"], ["t", "0", "s", "1", "R"], ["t", "1", "s", "0", "L"], ["s", "1", "t", "0", "L"]],
    )
    .unwrap();
    let typed = normalize_types(&raw).unwrap();
    assert_eq!(typed.states().len(), 6);
    let mut rng = StdRng::seed_from_u64(20);
    for _ in 0..50 {
        let len = rng.random_range(1..=6);
        let tape: Vec<usize> = (0..len).map(|_| rng.random_range(0..2)).collect();
        let head = rng.random_range(0..len);
        let state = rng.random_range(0..2);
        assert_eq!(raw.run_length(&tape, head, state, 20), typed.run_length(&tape, head, state, 20));
    }
    let nondet = RawMachine::new(&["0"], &["s"], &[["s", "0", "s", "0", "R"], ["s", "0", "s", "0", "L"]]);
    assert!(nondet.is_err() || normalize_types(&nondet.unwrap()).is_err());
}

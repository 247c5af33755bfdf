//! Acceptance suite: one line per criterion, with pinned sizes and time
//! budgets. Run with `cargo test -p posfo-core --test acceptance -- --nocapture`.

mod common;

use std::collections::HashSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::random_nfa;
use posfo::alphabet::{words_up_to, Letter, OrderedAlphabet, Word};
use posfo::games::{distinguishing_formula, duplicator_wins, verify_duplicator_strategy};
use posfo::graphs::directed::{decode_digraph, encode_digraph, is_gw_digraph, phi_digraph, translate_digraph, SOURCE_VARS};
use posfo::graphs::undirected::{encode_ugraph, halved_budget};
use posfo::graphs::ef_game_graph;
use posfo::intgame::{all_arenas, spoiler_rounds, verify_lemma_strategy, Orientation};
use posfo::klang::{self, closest_token_strategy, long_pair, phi_k};
use posfo::logic::{eval_word, Compiled, FormulaGen, Valuation, WordModel};
use posfo::mortality::{check_superposition, powerset_accepts, to_powerset, witness_words, Config, Reduction, TuringMachine, WitnessOutcome};
use posfo::{Monoid, Regex};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

struct Criterion {
    id: usize,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn powerset2() -> Arc<OrderedAlphabet> {
    Arc::new(OrderedAlphabet::powerset(&["p", "q"]).unwrap())
}

fn closure_oracle() -> Outcome {
    let alph = powerset2();
    let k = alph.len();
    let mut rng = StdRng::seed_from_u64(1);
    let mut words_checked = 0;
    for i in 0..100 {
        let nfa = random_nfa(&mut rng, &alph, 5, 0.15);
        let closed = nfa.monotone_closure();
        let all: Vec<Vec<Letter>> = words_up_to(k, 6).collect();
        let accepted: HashSet<&Vec<Letter>> = all.iter().filter(|w| nfa.accepts_letters(w)).collect();
        for w in &all {
            let oracle = common::words_below(&alph, w).iter().any(|u| accepted.contains(u));
            ensure(closed.accepts_letters(w) == oracle, || format!("NFA #{i}, word {w:?}"))?;
            words_checked += 1;
        }
    }
    Ok(format!("100 NFAs, {words_checked} word checks"))
}

fn monotonicity_verdicts() -> Outcome {
    let ab = Arc::new(OrderedAlphabet::new(&["a", "b"], &[("a", "b")]).unwrap());
    let re = |s: &str| Regex::parse(s).unwrap().to_nfa(&ab).unwrap();
    ensure(re("(concat (star any) (lit b) (star any))").is_monotone(), || "A*bA* not monotone".into())?;
    ensure(!re("(star (lit a))").is_monotone(), || "a* monotone".into())?;
    ensure(klang::build_k().is_monotone(), || "K not monotone".into())?;
    let trivial = Arc::new(OrderedAlphabet::trivial(&["a", "b"]).unwrap());
    let mut rng = StdRng::seed_from_u64(2);
    let mut universal = 0;
    for i in 0..50 {
        let nfa = random_nfa(&mut rng, &trivial, 3, 0.45);
        // A 3-state NFA that rejects something rejects a word shorter than 2^3.
        let brute = common::universal_up_to(&nfa, 7);
        universal += brute as usize;
        let gadget = nfa.universality_gadget().map_err(|e| e.to_string())?;
        ensure(gadget.is_monotone() == brute, || format!("gadget #{i} disagrees"))?;
    }
    Ok(format!("4 fixed verdicts, 50 gadgets ({universal} universal)"))
}

fn k_structure() -> Outcome {
    let k = klang::build_k();
    let m = Monoid::syntactic(&k);
    ensure(m.is_aperiodic(), || "monoid not aperiodic".into())?;
    ensure(m.green().h_classes_trivial(), || "non-trivial H-class".into())?;
    ensure(k.is_counter_free(), || "not counter-free".into())?;
    Ok(format!("syntactic monoid of size {}", m.len()))
}

fn lemma44() -> Outcome {
    let dfa = klang::build_k().canonical_dfa();
    for n in 1..=3u32 {
        let (u, v) = long_pair(n);
        ensure(dfa.accepts(&u) && !dfa.accepts(&v), || format!("membership at n = {n}"))?;
        ensure(duplicator_wins(&u, &v, n as usize).unwrap(), || format!("solver at n = {n}"))?;
        let verdict = verify_duplicator_strategy(&u, &v, n as usize, closest_token_strategy).unwrap();
        ensure(verdict.is_ok(), || format!("strategy at n = {n}: {verdict:?}"))?;
    }
    Ok("n = 1, 2, 3 (|u| = 6, 12, 24)".into())
}

fn random_word<R: Rng>(rng: &mut R, alph: &Arc<OrderedAlphabet>, max_len: usize) -> Word {
    let len = rng.random_range(1..=max_len);
    Word::new(alph.clone(), (0..len).map(|_| Letter(rng.random_range(0..alph.len() as u32))).collect())
}

fn solver_logic_coherence() -> Outcome {
    let alph = powerset2();
    let mut rng = StdRng::seed_from_u64(5);
    let none = Valuation::new();
    let (mut spoiler, mut duplicator) = (0, 0);
    for _ in 0..300 {
        let u = random_word(&mut rng, &alph, 5);
        let v = random_word(&mut rng, &alph, 5);
        let n = rng.random_range(1..=3);
        if duplicator_wins(&u, &v, n).unwrap() {
            duplicator += 1;
            let gen = FormulaGen::for_words(&alph, n);
            for _ in 0..200 {
                let f = gen.sentence(&mut rng);
                if eval_word(&f, &u, &none).unwrap() {
                    ensure(eval_word(&f, &v, &none).unwrap(), || format!("{f} separates {u} / {v}"))?;
                }
            }
        } else {
            spoiler += 1;
            let f = distinguishing_formula(&u, &v, n).unwrap().ok_or("no formula")?;
            ensure(f.is_positive() && f.quantifier_rank() <= n, || format!("bad formula {f}"))?;
            ensure(eval_word(&f, &u, &none).unwrap() && !eval_word(&f, &v, &none).unwrap(), || {
                format!("{f} does not separate {u} / {v}")
            })?;
        }
    }
    Ok(format!("{spoiler} Spoiler wins with formulas, {duplicator} Duplicator wins × 200 formulas"))
}

fn monotone_transfer() -> Outcome {
    let alph = powerset2();
    let mut rng = StdRng::seed_from_u64(6);
    let none = Valuation::new();
    let gen = FormulaGen::for_words(&alph, 3);
    let mut fired = 0;
    for _ in 0..500 {
        let f = gen.sentence(&mut rng);
        let len = rng.random_range(0..=5);
        let v: Vec<Letter> = (0..len).map(|_| Letter(rng.random_range(0..alph.len() as u32))).collect();
        let u: Vec<Letter> = v.iter().map(|&b| {
            let down = alph.downset(b);
            down[rng.random_range(0..down.len())]
        }).collect();
        let (u, v) = (Word::new(alph.clone(), u), Word::new(alph.clone(), v));
        if eval_word(&f, &u, &none).unwrap() {
            fired += 1;
            ensure(eval_word(&f, &v, &none).unwrap(), || format!("{f} on {u} / {v}"))?;
        }
    }
    Ok(format!("500 samples, {fired} with the premise true"))
}

fn phi_k_equivalence() -> Outcome {
    let alph = klang::alphabet();
    let phi = Compiled::for_words(&phi_k(), &alph).map_err(|e| e.to_string())?;
    let dfa = klang::build_k().canonical_dfa();
    let mut count = 0;
    for w in words_up_to(alph.len(), 6) {
        let model = WordModel { alphabet: &alph, letters: &w };
        ensure(phi.holds(&model) == dfa.accepts_letters(&w), || format!("{w:?}"))?;
        count += 1;
    }
    Ok(format!("{count} words"))
}

fn integer_game() -> Outcome {
    let mut arenas = 0;
    let mut worst_exact = 0;
    let mut worst_lemma = 0;
    for (n, max_len) in [(1u8, 5), (2, 6)] {
        let cap = 2 * n as usize + 2;
        for orientation in [Orientation::Standard, Orientation::Mirrored] {
            for arena in all_arenas(n, max_len, orientation) {
                arenas += 1;
                let exact = spoiler_rounds(&arena, cap).ok_or_else(|| format!("{arena}: solver finds no win"))?;
                let lemma = verify_lemma_strategy(&arena).map_err(|f| format!("{arena}: {f:?}"))?;
                ensure(lemma <= cap, || format!("{arena}: strategy needs {lemma}"))?;
                worst_exact = worst_exact.max(exact);
                worst_lemma = worst_lemma.max(lemma);
            }
        }
    }
    Ok(format!("{arenas} arenas, exact ≤ {worst_exact} rounds, strategy ≤ {worst_lemma} rounds"))
}

/// `C_t#C_{t+1}#...` from random tape-3 configurations.
fn random_base_word(r: &Reduction, rng: &mut StdRng, segments: usize) -> Vec<Letter> {
    let configs = r.configs_of_length(3);
    let mut t = rng.random_range(1..=3u8);
    let mut out = Vec::new();
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

/// Membership of `u ∈ L_M` and `v ∉ L_M` survives the powerset view.
fn carries_over(r: &Reduction, u: &Word, v: &Word) -> bool {
    let lift = |w: &Word| w.letters().iter().map(|&a| to_powerset(r, a)).collect::<Vec<_>>();
    powerset_accepts(r, &lift(u)) && !powerset_accepts(r, &lift(v))
}

fn mortality() -> Outcome {
    let mut notes = Vec::new();
    for tm in [TuringMachine::right_mover(), TuringMachine::bounce()] {
        let r = Reduction::new(tm);
        let rep = check_superposition(&r, 4, 4);
        ensure(rep.violations.is_empty(), || format!("superposition: {:?}", rep.violations))?;
        notes.push(format!("{} pairs/{} triples", rep.pairs, rep.triples));
    }

    let mover = Reduction::new(TuringMachine::right_mover());
    let WitnessOutcome::Found { u, v, .. } = witness_words(&mover, 1, 12).map_err(|e| e.to_string())? else {
        return Err("right mover: no witness".into());
    };
    ensure(mover.l_m().accepts(&u) && !mover.l_m().accepts(&v), || "witness membership".into())?;
    ensure(duplicator_wins(&u, &v, 1).unwrap(), || "witness game at n = 1".into())?;
    ensure(carries_over(&mover, &u, &v), || "witness under the powerset view".into())?;

    let bounce = Reduction::new(TuringMachine::bounce());
    let letters = bounce.alphabet().len() as u32;
    let mut rng = StdRng::seed_from_u64(9);
    let mut pairs = 0;
    let mut worst = 0;
    while pairs < 50 {
        let segments = rng.random_range(3..=6);
        let base = random_base_word(&bounce, &mut rng, segments);
        ensure(bounce.l_m().accepts_letters(&base), || "sampled base word outside L_M".into())?;
        let mut w = base.clone();
        let mut tries = 0;
        while bounce.l_m().accepts_letters(&w) && tries < 20 {
            let i = rng.random_range(0..w.len());
            w[i] = Letter(rng.random_range(0..letters));
            tries += 1;
        }
        if bounce.l_m().accepts_letters(&w) {
            continue;
        }
        pairs += 1;
        let (u, v) = (bounce.word(base), bounce.word(w));
        let rounds = (1..=6).find(|&k| !duplicator_wins(&u, &v, k).unwrap());
        let rounds = rounds.ok_or_else(|| format!("Duplicator survives 6 rounds on {u} / {v}"))?;
        worst = worst.max(rounds);
        ensure(carries_over(&bounce, &u, &v), || format!("powerset view of {u} / {v}"))?;
    }
    Ok(format!(
        "superposition {}; witness ok; 50 mortal pairs, Spoiler ≤ {worst} rounds; powerset view agrees",
        notes.join(", ")
    ))
}

fn graphs() -> Outcome {
    let alph = klang::alphabet();
    let words = |max_len: usize| -> Vec<Word> {
        words_up_to(alph.len(), max_len)
            .filter(|w| !w.is_empty() && w[0] != Letter(0))
            .map(|w| Word::new(alph.clone(), w))
            .collect()
    };
    let short = words(3);
    for u in &short {
        let g = encode_digraph(u).map_err(|e| e.to_string())?;
        ensure(is_gw_digraph(&g) && decode_digraph(&g).ok().as_ref() == Some(u), || format!("round trip {u}"))?;
    }

    let src: Valuation = SOURCE_VARS.iter().enumerate().map(|(i, s)| (s.to_string(), i)).collect();
    let corpus = words(4);
    let encoded: Vec<_> = corpus.iter().map(|u| encode_digraph(u).unwrap()).collect();
    let mut gen = FormulaGen::for_words(&alph, 2);
    gen.negation = true;
    let mut rng = StdRng::seed_from_u64(10);
    for _ in 0..100 {
        let f = gen.sentence(&mut rng);
        let tf = Compiled::for_graphs(&translate_digraph(&f).unwrap()).unwrap();
        for (u, g) in corpus.iter().zip(&encoded) {
            ensure(tf.eval(g, &src).unwrap() == eval_word(&f, u, &Valuation::new()).unwrap(), || {
                format!("translation of {f} on {u}")
            })?;
        }
    }

    let phi = Compiled::for_graphs(&phi_digraph()).unwrap();
    let mut held = 0;
    for _ in 0..200 {
        let u = &short[rng.random_range(0..short.len())];
        let g = encode_digraph(u).unwrap();
        let mut h = g.clone();
        let n = h.vertex_count();
        h.add_edge(rng.random_range(0..n), rng.random_range(0..n));
        if phi.holds(&g) {
            held += 1;
            ensure(phi.holds(&h), || format!("φ lost after adding an edge to G_{u}"))?;
        }
    }

    let (u, v) = long_pair(1);
    let directed = ef_game_graph(&encode_digraph(&u).unwrap(), &encode_digraph(&v).unwrap(), 1).unwrap();
    ensure(directed, || "directed game at n = 1".into())?;
    let mut undirected = Vec::new();
    for n in 1..=2u32 {
        let (u, v) = long_pair(n);
        let budget = halved_budget(n as usize);
        let ok = ef_game_graph(&encode_ugraph(&u).unwrap(), &encode_ugraph(&v).unwrap(), budget).unwrap();
        ensure(ok, || format!("undirected game at n = {n}"))?;
        undirected.push(format!("n={n}: {budget} round(s)"));
    }
    Ok(format!(
        "{} round trips, 100 formulas × {} words, 200 perturbations ({held} with φ), undirected {}",
        short.len(),
        corpus.len(),
        undirected.join(", ")
    ))
}

#[test]
fn acceptance_criteria() {
    let criteria = [
        Criterion { id: 1, name: "closure oracle", budget: Duration::from_secs(60), run: closure_oracle },
        Criterion { id: 2, name: "monotonicity verdicts", budget: Duration::from_secs(60), run: monotonicity_verdicts },
        Criterion { id: 3, name: "K structure", budget: Duration::from_secs(10), run: k_structure },
        Criterion { id: 4, name: "K game pairs", budget: Duration::from_secs(300), run: lemma44 },
        Criterion { id: 5, name: "solver/logic coherence", budget: Duration::from_secs(300), run: solver_logic_coherence },
        Criterion { id: 6, name: "monotone transfer", budget: Duration::from_secs(60), run: monotone_transfer },
        Criterion { id: 7, name: "φ_K equivalence", budget: Duration::from_secs(600), run: phi_k_equivalence },
        Criterion { id: 8, name: "integer game", budget: Duration::from_secs(300), run: integer_game },
        Criterion { id: 9, name: "mortality reduction", budget: Duration::from_secs(900), run: mortality },
        Criterion { id: 10, name: "graphs", budget: Duration::from_secs(600), run: graphs },
    ];
    let mut failed = Vec::new();
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > c.budget => Err(format!("{detail}; over budget")),
            other => other,
        };
        let (verdict, detail) = match &outcome {
            Ok(d) => ("PASS", d.clone()),
            Err(e) => ("FAIL", e.clone()),
        };
        println!(
            "criterion {:>2} {verdict} {}: {detail} ({:.1?} of {:?})",
            c.id, c.name, took, c.budget
        );
        if outcome.is_err() {
            failed.push(c.id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}


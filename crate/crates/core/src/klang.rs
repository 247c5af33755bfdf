//! The language `K = (a↑b↑c↑)* + A*⊤A*` over `P({a,b,c})`.
//!
//! `K` is monotone and counter-free, hence FO-definable, yet not definable in
//! FO⁺: the words of [`long_pair`] separate it at every quantifier rank.

use std::sync::Arc;

use crate::alphabet::{Letter, OrderedAlphabet, Word};
use crate::automata::{Nfa, Regex};
use crate::games::{Side, SpoilerMove, WordGamePosition};
use crate::logic::Formula;

pub const K_REGEX: &str = r#"(union (star (concat (up "{a}") (up "{b}") (up "{c}"))) (concat (star any) (lit "{a,b,c}") (star any)))"#;

pub fn alphabet() -> Arc<OrderedAlphabet> {
    Arc::new(OrderedAlphabet::powerset(&["a", "b", "c"]).expect("valid predicates"))
}

/// An automaton for `K` over [`alphabet`].
pub fn build_k() -> Nfa {
    build_k_over(&alphabet())
}

pub fn build_k_over(alphabet: &Arc<OrderedAlphabet>) -> Nfa {
    Regex::parse(K_REGEX)
        .expect("static regex")
        .to_nfa(alphabet)
        .expect("letters exist")
}

/// Letters cycling through `a, b, c`: letter `i` is predicate `i mod 3`.
fn cyclic(i: usize) -> u32 {
    1 << (i % 3)
}

/// The pair `(u, v)` with `u = (abc)^N` and `v[i] = {w(i), w(i+1)}` where
/// `w = (abc)^ω` and `|v| = 3N - 1`, for `N = 2^n`. `u ∈ K`, `v ∉ K`, and
/// Duplicator wins the `n`-round game on them.
pub fn long_pair(n: u32) -> (Word, Word) {
    let alph = alphabet();
    let big_n = 1usize << n;
    let u = (0..3 * big_n).map(|i| Letter(cyclic(i))).collect();
    let v = (0..3 * big_n - 1).map(|i| Letter(cyclic(i) | cyclic(i + 1))).collect();
    (Word::new(alph.clone(), u), Word::new(alph, v))
}

/// Duplicator's answer: copy the signed distance from the nearest token,
/// the first and last positions counting as tokens paired together.
/// Ties go to the token on the right.
pub fn closest_token_strategy(p: &WordGamePosition, mv: SpoilerMove) -> usize {
    let (ul, vl) = (p.u.len(), p.v.len());
    let mut tokens: Vec<(usize, usize)> = p.pairs.clone();
    if ul > 0 && vl > 0 {
        tokens.push((0, 0));
        tokens.push((ul - 1, vl - 1));
    }
    let other_len = if mv.side == Side::Left { vl } else { ul };
    let best = tokens
        .iter()
        .map(|&(l, r)| if mv.side == Side::Left { (l, r) } else { (r, l) })
        .min_by_key(|&(pos, _)| (pos.abs_diff(mv.pos), std::cmp::Reverse(pos)))
        .expect("non-empty words");
    let target = best.1 as i64 + mv.pos as i64 - best.0 as i64;
    target.clamp(0, other_len.saturating_sub(1) as i64) as usize
}

/// Unordered pairs of predicates in cyclic order: `ab`, `bc`, `ca`. For pair
/// `i` the "top" reading is predicate `i` and the "bottom" one `i + 1`.
const PAIRS: [(usize, usize); 3] = [(0, 1), (1, 2), (2, 0)];
const PREDS: [&str; 3] = ["a", "b", "c"];

fn has(p: usize, x: &str) -> Formula {
    Formula::pred(PREDS[p], x)
}

/// The letter at `x` is exactly the pair `i`.
fn is_pair(i: usize, x: &str) -> Formula {
    let (p, q) = PAIRS[i];
    let r = 3 - p - q;
    Formula::and(vec![has(p, x), has(q, x), Formula::not(has(r, x))])
}

fn is_any_pair(x: &str) -> Formula {
    Formula::or((0..3).map(|i| is_pair(i, x)).collect())
}

/// `y` is the position right after `x`.
fn succ(x: &str, y: &str, z: &str) -> Formula {
    Formula::and(vec![
        Formula::lt(x, y),
        Formula::not(Formula::exists(z, Formula::and(vec![Formula::lt(x, z), Formula::lt(z, y)]))),
    ])
}

fn first(x: &str, z: &str) -> Formula {
    Formula::not(Formula::exists(z, Formula::lt(z, x)))
}

fn last(x: &str, z: &str) -> Formula {
    Formula::not(Formula::exists(z, Formula::lt(x, z)))
}

/// `x` and `y` carry consecutive pairs in cyclic order (`ab` then `bc`, ...),
/// so the phase of one determines the other in two consistent ways.
fn linked(x: &str, y: &str) -> Formula {
    Formula::or((0..3).map(|i| Formula::and(vec![is_pair(i, x), is_pair((i + 1) % 3, y)])).collect())
}

/// Some phase assignment fits the letters at `x` and its successor `y`.
fn compatible(x: &str, y: &str) -> Formula {
    Formula::or((0..3).map(|p| Formula::and(vec![has(p, x), has((p + 1) % 3, y)])).collect())
}

/// `x` holds pair `i` and is forced to its top (or bottom) reading by its
/// left context: the first position must read `a`, otherwise the unlinked
/// predecessor pins the phase.
fn left_forced(i: usize, top: bool, x: &str, y: &str, z: &str) -> Formula {
    let (t, b) = PAIRS[i];
    let reading = if top { t } else { b };
    let at_start = Formula::and(vec![first(x, z), Formula::Pred(PREDS[0].into(), x.into())]);
    let at_start = if reading == 0 { at_start } else { Formula::False };
    Formula::and(vec![
        is_pair(i, x),
        Formula::or(vec![
            at_start,
            Formula::exists(
                y,
                Formula::and(vec![succ(y, x, z), has((reading + 2) % 3, y)]),
            ),
        ]),
    ])
}

/// Mirror of [`left_forced`] on the right: the last position must read `c`.
fn right_forced(i: usize, top: bool, x: &str, y: &str, z: &str) -> Formula {
    let (t, b) = PAIRS[i];
    let reading = if top { t } else { b };
    let at_end = if reading == 2 { last(x, z) } else { Formula::False };
    Formula::and(vec![
        is_pair(i, x),
        Formula::or(vec![
            at_end,
            Formula::exists(y, Formula::and(vec![succ(x, y, z), has((reading + 1) % 3, y)])),
        ]),
    ])
}

/// No link crosses the left boundary of `x`.
fn chain_start(x: &str, y: &str, z: &str) -> Formula {
    Formula::not(Formula::exists(y, Formula::and(vec![succ(y, x, z), linked(y, x)])))
}

fn chain_end(x: &str, y: &str, z: &str) -> Formula {
    Formula::not(Formula::exists(y, Formula::and(vec![succ(x, y, z), linked(x, y)])))
}

/// A first-order sentence defining `K`.
///
/// Outside `A*⊤A*` a word is in `K` iff positions can be given phases
/// `0, 1, 2, 0, ...` matching `a, b, c` with the first in phase 0 and the last
/// in phase 2. Singletons and unlinked pairs fix their phase locally; a
/// maximal chain of linked pairs admits exactly two readings (all top or all
/// bottom), so the word is in `K` iff the reading forced at the left end of
/// each chain agrees with the one forced at its right end.
pub fn phi_k() -> Formula {
    let top = Formula::exists("x", Formula::and((0..3).map(|p| has(p, "x")).collect()));
    let nonempty = Formula::forall("x", Formula::or((0..3).map(|p| has(p, "x")).collect()));
    let ends = Formula::forall(
        "x",
        Formula::and(vec![
            Formula::implies(first("x", "z"), has(0, "x")),
            Formula::implies(last("x", "z"), has(2, "x")),
        ]),
    );
    let local = Formula::forall_many(
        &["x", "y"],
        Formula::implies(succ("x", "y", "z"), compatible("x", "y")),
    );
    // Inside a chain every step is a link.
    let all_linked = Formula::forall_many(
        &["z", "w"],
        Formula::implies(
            Formula::and(vec![Formula::le("x", "z"), Formula::le("w", "y"), succ("z", "w", "t")]),
            linked("z", "w"),
        ),
    );
    let agree = Formula::or(
        (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .flat_map(|(i, j)| {
                [true, false].into_iter().map(move |t| {
                    Formula::and(vec![
                        left_forced(i, t, "x", "z", "t"),
                        right_forced(j, t, "y", "z", "t"),
                    ])
                })
            })
            .collect(),
    );
    let chains = Formula::forall_many(
        &["x", "y"],
        Formula::implies(
            Formula::and(vec![
                Formula::le("x", "y"),
                is_any_pair("x"),
                chain_start("x", "z", "t"),
                chain_end("y", "z", "t"),
                all_linked,
            ]),
            agree,
        ),
    );
    Formula::or(vec![top, Formula::and(vec![nonempty, ends, local, chains])])
}

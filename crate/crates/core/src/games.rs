//! Ehrenfeucht–Fraïssé games for FO⁺.
//!
//! A game is played on two structures, left (`u`) and right (`v`). Each round
//! Spoiler places a token on either side and Duplicator answers on the other;
//! Duplicator must keep the set of token pairs a valid position. Validity is
//! supplied by an [`Arena`], so the same minimax solver serves words, graphs
//! and the integer game. `u ⪯ₙ v` holds iff Duplicator survives `n` rounds,
//! iff every FO⁺ sentence of rank `n` true in `u` is true in `v`.

use std::cmp::Ordering;
use std::ops::Range;
use std::sync::Arc;

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::alphabet::{words_up_to, Letter, OrderedAlphabet, Word};
use crate::automata::Nfa;
use crate::error::{Error, Result};
use crate::logic::Formula;

/// Default bound on the number of rounds the solver accepts.
pub const DEFAULT_ROUND_CAP: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpoilerMove {
    pub side: Side,
    pub pos: usize,
}

impl SpoilerMove {
    pub fn left(pos: usize) -> Self {
        SpoilerMove { side: Side::Left, pos }
    }

    pub fn right(pos: usize) -> Self {
        SpoilerMove { side: Side::Right, pos }
    }

    /// The token pair produced by this move and a reply.
    pub fn pair(self, reply: usize) -> (usize, usize) {
        match self.side {
            Side::Left => (self.pos, reply),
            Side::Right => (reply, self.pos),
        }
    }
}

/// The clause a position breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Violation {
    /// The left letter is not below the right one.
    Label,
    /// Tokens are not in the same relative order on both sides.
    Order,
    /// Equal tokens on one side map to distinct tokens on the other.
    Equality,
    /// An edge between tokens on the left has no counterpart on the right.
    Edge,
    /// Adjacent tokens are not matched with adjacent tokens (integer game).
    Neighbouring,
    /// A position outside the structure.
    Bounds,
}

impl Violation {
    pub fn name(self) -> &'static str {
        match self {
            Violation::Label => "label",
            Violation::Order => "order",
            Violation::Equality => "equality",
            Violation::Edge => "edge",
            Violation::Neighbouring => "neighbouring",
            Violation::Bounds => "bounds",
        }
    }
}

/// The two structures of a game and what makes a position valid.
pub trait Arena {
    fn size(&self, side: Side) -> usize;

    /// Whether adding the pair `(l, r)` to the valid position `pairs` keeps it
    /// valid. Pairs are `(left, right)`.
    fn check(&self, pairs: &[(usize, usize)], l: usize, r: usize) -> std::result::Result<(), Violation>;

    /// Positions worth trying as replies to `mv`; anything outside must fail
    /// [`Arena::check`].
    fn reply_window(&self, _pairs: &[(usize, usize)], mv: SpoilerMove) -> Range<usize> {
        0..self.size(mv.side.other())
    }

    fn check_position(&self, pairs: &[(usize, usize)]) -> std::result::Result<(), Violation> {
        for (i, &(l, r)) in pairs.iter().enumerate() {
            if l >= self.size(Side::Left) || r >= self.size(Side::Right) {
                return Err(Violation::Bounds);
            }
            self.check(&pairs[..i], l, r)?;
        }
        Ok(())
    }
}

/// The reply window forced by order preservation, for arenas whose
/// positions must be order-preserving.
pub fn ordered_window(pairs: &[(usize, usize)], mv: SpoilerMove, other_len: usize) -> Range<usize> {
    let (mut lo, mut hi) = (0usize, other_len);
    for &(l, r) in pairs {
        let (mine, theirs) = match mv.side {
            Side::Left => (l, r),
            Side::Right => (r, l),
        };
        match mine.cmp(&mv.pos) {
            Ordering::Less => lo = lo.max(theirs + 1),
            Ordering::Greater => hi = hi.min(theirs),
            Ordering::Equal => return theirs..theirs + 1,
        }
    }
    lo..hi.max(lo)
}

type MemoKey = (SmallVec<[u32; 8]>, u8);

/// Exact minimax solver with memoisation on (sorted pairs, rounds left).
pub struct Solver<'a, A: Arena + ?Sized> {
    arena: &'a A,
    memo: FxHashMap<MemoKey, bool>,
}

impl<'a, A: Arena + ?Sized> Solver<'a, A> {
    pub fn new(arena: &'a A) -> Self {
        Solver { arena, memo: FxHashMap::default() }
    }

    pub fn arena(&self) -> &'a A {
        self.arena
    }

    fn key(pairs: &[(usize, usize)], rounds: usize) -> MemoKey {
        let mut packed: SmallVec<[u32; 8]> =
            pairs.iter().map(|&(l, r)| ((l as u32) << 16) | r as u32).collect();
        packed.sort_unstable();
        packed.dedup();
        (packed, rounds as u8)
    }

    fn moves(&self, pairs: &[(usize, usize)]) -> impl Iterator<Item = SpoilerMove> + '_ {
        let lefts: SmallVec<[usize; 8]> = pairs.iter().map(|p| p.0).collect();
        let rights: SmallVec<[usize; 8]> = pairs.iter().map(|p| p.1).collect();
        let left = (0..self.arena.size(Side::Left))
            .filter(move |p| !lefts.contains(p))
            .map(SpoilerMove::left);
        let right = (0..self.arena.size(Side::Right))
            .filter(move |p| !rights.contains(p))
            .map(SpoilerMove::right);
        left.chain(right)
    }

    /// Valid replies to `mv`, in increasing position order.
    pub fn legal_replies(&self, pairs: &[(usize, usize)], mv: SpoilerMove) -> Vec<usize> {
        self.arena
            .reply_window(pairs, mv)
            .filter(|&q| {
                let (l, r) = mv.pair(q);
                self.arena.check(pairs, l, r).is_ok()
            })
            .collect()
    }

    /// Duplicator survives `rounds` more rounds from the valid position `pairs`.
    pub fn duplicator_wins(&mut self, pairs: &[(usize, usize)], rounds: usize) -> bool {
        if rounds == 0 {
            return true;
        }
        let key = Self::key(pairs, rounds);
        if let Some(&r) = self.memo.get(&key) {
            return r;
        }
        let moves: Vec<SpoilerMove> = self.moves(pairs).collect();
        let result = moves.into_iter().all(|mv| self.saving_reply(pairs, mv, rounds).is_some());
        self.memo.insert(key, result);
        result
    }

    /// The smallest reply to `mv` after which Duplicator survives the
    /// remaining `rounds - 1` rounds.
    pub fn saving_reply(&mut self, pairs: &[(usize, usize)], mv: SpoilerMove, rounds: usize) -> Option<usize> {
        let mut next: Vec<(usize, usize)> = pairs.to_vec();
        for q in self.arena.reply_window(pairs, mv) {
            let (l, r) = mv.pair(q);
            if self.arena.check(pairs, l, r).is_err() {
                continue;
            }
            if rounds <= 1 {
                return Some(q);
            }
            next.push((l, r));
            let ok = self.duplicator_wins(&next, rounds - 1);
            next.pop();
            if ok {
                return Some(q);
            }
        }
        None
    }

    /// A Spoiler move that wins within `rounds`, preferring the smallest
    /// position and the left structure on ties.
    pub fn winning_move(&mut self, pairs: &[(usize, usize)], rounds: usize) -> Option<SpoilerMove> {
        if rounds == 0 {
            return None;
        }
        let moves: Vec<SpoilerMove> = self.moves(pairs).collect();
        let mut ordered = moves;
        ordered.sort_by_key(|m| (m.pos, m.side));
        ordered.into_iter().find(|&mv| self.saving_reply(pairs, mv, rounds).is_none())
    }

    /// Fewest rounds in which Spoiler wins, up to `max_rounds`.
    pub fn spoiler_rounds(&mut self, pairs: &[(usize, usize)], max_rounds: usize) -> Option<usize> {
        (1..=max_rounds).find(|&k| !self.duplicator_wins(pairs, k))
    }

    pub fn memo_size(&self) -> usize {
        self.memo.len()
    }
}

/// Outcome of checking a strategy against every Spoiler play.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyFailure {
    /// The Spoiler moves leading to the failure, the last one unanswered.
    pub moves: Vec<SpoilerMove>,
    pub violation: Violation,
}

/// Exhaustively plays `rounds` rounds against every Spoiler sequence, with
/// Duplicator answering by `strategy(pairs, move)`.
pub fn verify_strategy<A, F>(arena: &A, rounds: usize, strategy: F) -> std::result::Result<(), StrategyFailure>
where
    A: Arena + ?Sized,
    F: Fn(&[(usize, usize)], SpoilerMove) -> usize,
{
    fn go<A: Arena + ?Sized, F: Fn(&[(usize, usize)], SpoilerMove) -> usize>(
        arena: &A,
        pairs: &mut Vec<(usize, usize)>,
        history: &mut Vec<SpoilerMove>,
        rounds: usize,
        strategy: &F,
    ) -> std::result::Result<(), StrategyFailure> {
        if rounds == 0 {
            return Ok(());
        }
        let moves: Vec<SpoilerMove> = (0..arena.size(Side::Left))
            .map(SpoilerMove::left)
            .chain((0..arena.size(Side::Right)).map(SpoilerMove::right))
            .collect();
        for mv in moves {
            history.push(mv);
            let q = strategy(pairs, mv);
            let (l, r) = mv.pair(q);
            let verdict = if q >= arena.size(mv.side.other()) {
                Err(Violation::Bounds)
            } else {
                arena.check(pairs, l, r)
            };
            if let Err(violation) = verdict {
                return Err(StrategyFailure { moves: history.clone(), violation });
            }
            pairs.push((l, r));
            go(arena, pairs, history, rounds - 1, strategy)?;
            pairs.pop();
            history.pop();
        }
        Ok(())
    }
    go(arena, &mut Vec::new(), &mut Vec::new(), rounds, &strategy)
}

/// The game on two words over the same alphabet.
pub struct WordArena<'a> {
    pub alphabet: &'a OrderedAlphabet,
    pub u: &'a [Letter],
    pub v: &'a [Letter],
}

impl<'a> WordArena<'a> {
    pub fn new(u: &'a Word, v: &'a Word) -> Result<Self> {
        if u.alphabet() != v.alphabet() {
            return Err(Error::AlphabetMismatch);
        }
        Ok(WordArena { alphabet: u.alphabet(), u: u.letters(), v: v.letters() })
    }
}

impl Arena for WordArena<'_> {
    fn size(&self, side: Side) -> usize {
        match side {
            Side::Left => self.u.len(),
            Side::Right => self.v.len(),
        }
    }

    fn check(&self, pairs: &[(usize, usize)], l: usize, r: usize) -> std::result::Result<(), Violation> {
        if !self.alphabet.leq(self.u[l], self.v[r]) {
            return Err(Violation::Label);
        }
        if pairs.iter().any(|&(a, b)| l.cmp(&a) != r.cmp(&b)) {
            return Err(Violation::Order);
        }
        Ok(())
    }

    fn reply_window(&self, pairs: &[(usize, usize)], mv: SpoilerMove) -> Range<usize> {
        ordered_window(pairs, mv, self.size(mv.side.other()))
    }
}

/// A position of the word game: token pairs in the order they were played.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordGamePosition {
    pub u: Word,
    pub v: Word,
    pub pairs: Vec<(usize, usize)>,
}

impl WordGamePosition {
    pub fn new(u: Word, v: Word) -> Self {
        WordGamePosition { u, v, pairs: Vec::new() }
    }

    pub fn violation(&self) -> Option<Violation> {
        let arena = WordArena { alphabet: self.u.alphabet(), u: self.u.letters(), v: self.v.letters() };
        arena.check_position(&self.pairs).err()
    }

    pub fn is_valid(&self) -> bool {
        self.violation().is_none()
    }
}

fn check_rounds(rounds: usize, cap: usize) -> Result<()> {
    if rounds > cap {
        Err(Error::CapExceeded { rounds, cap })
    } else {
        Ok(())
    }
}

/// `u ⪯ₙ v`, with the default round cap.
pub fn duplicator_wins(u: &Word, v: &Word, rounds: usize) -> Result<bool> {
    duplicator_wins_capped(u, v, rounds, DEFAULT_ROUND_CAP)
}

pub fn duplicator_wins_capped(u: &Word, v: &Word, rounds: usize, cap: usize) -> Result<bool> {
    check_rounds(rounds, cap)?;
    let arena = WordArena::new(u, v)?;
    Ok(Solver::new(&arena).duplicator_wins(&[], rounds))
}

/// A Spoiler move winning within `rounds_left` from `p`, if one exists.
pub fn best_spoiler_move(p: &WordGamePosition, rounds_left: usize) -> Result<Option<SpoilerMove>> {
    check_rounds(rounds_left, DEFAULT_ROUND_CAP)?;
    let arena = WordArena::new(&p.u, &p.v)?;
    Ok(Solver::new(&arena).winning_move(&p.pairs, rounds_left))
}

/// A reply to `mv` that lets Duplicator survive the rest, if one exists.
/// `rounds_left` counts the current round.
pub fn best_duplicator_response(
    p: &WordGamePosition,
    mv: SpoilerMove,
    rounds_left: usize,
) -> Result<Option<usize>> {
    check_rounds(rounds_left, DEFAULT_ROUND_CAP)?;
    let arena = WordArena::new(&p.u, &p.v)?;
    Ok(Solver::new(&arena).saving_reply(&p.pairs, mv, rounds_left))
}

/// Checks a Duplicator strategy for `n` rounds against every Spoiler play.
pub fn verify_duplicator_strategy<F>(u: &Word, v: &Word, n: usize, strategy: F) -> Result<std::result::Result<(), StrategyFailure>>
where
    F: Fn(&WordGamePosition, SpoilerMove) -> usize,
{
    let arena = WordArena::new(u, v)?;
    let mut scratch = WordGamePosition::new(u.clone(), v.clone());
    let adapter = |pairs: &[(usize, usize)], mv: SpoilerMove| {
        scratch.pairs.clear();
        scratch.pairs.extend_from_slice(pairs);
        strategy(&scratch, mv)
    };
    // `adapter` mutates a local buffer; wrap it so the verifier sees `Fn`.
    let cell = std::cell::RefCell::new(adapter);
    Ok(verify_strategy(&arena, n, |pairs, mv| (cell.borrow_mut())(pairs, mv)))
}

/// An FO⁺ sentence of rank at most `n` true in `u` and false in `v`, read off
/// Spoiler's winning strategy; `None` when Duplicator wins.
pub fn distinguishing_formula(u: &Word, v: &Word, n: usize) -> Result<Option<Formula>> {
    check_rounds(n, DEFAULT_ROUND_CAP)?;
    let arena = WordArena::new(u, v)?;
    let mut solver = Solver::new(&arena);
    if solver.duplicator_wins(&[], n) {
        return Ok(None);
    }
    Ok(Some(distinguish(&mut solver, &mut Vec::new(), n)))
}

fn var(i: usize) -> String {
    format!("x{}", i + 1)
}

/// An atom that holds in `u` at `l` and fails in `v` at `r`, for a pair
/// breaking validity against `pairs`.
fn violated_atom(arena: &WordArena<'_>, pairs: &[(usize, usize)], l: usize, r: usize) -> Formula {
    let x = var(pairs.len());
    if !arena.alphabet.leq(arena.u[l], arena.v[r]) {
        return Formula::LetterUp(arena.alphabet.name(arena.u[l]).to_string(), x);
    }
    let (i, &(a, b)) = pairs
        .iter()
        .enumerate()
        .find(|&(_, &(a, b))| l.cmp(&a) != r.cmp(&b))
        .expect("pair is invalid");
    let xi = var(i);
    match l.cmp(&a) {
        Ordering::Less => Formula::Lt(x, xi),
        Ordering::Greater => Formula::Lt(xi, x),
        Ordering::Equal if r < b => Formula::Le(xi, x),
        Ordering::Equal => Formula::Le(x, xi),
    }
}

fn distinguish(solver: &mut Solver<'_, WordArena<'_>>, pairs: &mut Vec<(usize, usize)>, rounds: usize) -> Formula {
    let arena = solver.arena();
    let mv = solver.winning_move(pairs, rounds).expect("Spoiler wins here");
    let x = var(pairs.len());
    let mut parts: Vec<Formula> = Vec::new();
    let push_unique = |parts: &mut Vec<Formula>, f: Formula| {
        if !parts.contains(&f) {
            parts.push(f);
        }
    };
    match mv.side {
        Side::Left => {
            let p = mv.pos;
            parts.push(Formula::LetterUp(arena.alphabet.name(arena.u[p]).to_string(), x.clone()));
            for (i, &(a, _)) in pairs.iter().enumerate() {
                let atom = match p.cmp(&a) {
                    Ordering::Less => Formula::Lt(x.clone(), var(i)),
                    Ordering::Greater => Formula::Lt(var(i), x.clone()),
                    Ordering::Equal => Formula::EqVar(x.clone(), var(i)),
                };
                parts.push(atom);
            }
            for q in 0..arena.v.len() {
                if arena.check(pairs, p, q).is_ok() {
                    pairs.push((p, q));
                    let sub = distinguish(solver, pairs, rounds - 1);
                    pairs.pop();
                    push_unique(&mut parts, sub);
                }
            }
            Formula::Exists(x, Box::new(Formula::and(parts)))
        }
        Side::Right => {
            let q = mv.pos;
            for p in 0..arena.u.len() {
                let sub = if arena.check(pairs, p, q).is_ok() {
                    pairs.push((p, q));
                    let sub = distinguish(solver, pairs, rounds - 1);
                    pairs.pop();
                    sub
                } else {
                    violated_atom(arena, pairs, p, q)
                };
                push_unique(&mut parts, sub);
            }
            Formula::Forall(x, Box::new(Formula::or(parts)))
        }
    }
}

/// Pairs `u ∈ L`, `v ∉ L` with `u ⪯ₙ v` and both of length at most
/// `max_len`, at most `limit` of them, shortest `u` first.
pub fn find_witness_pairs(language: &Nfa, n: usize, max_len: usize, limit: usize) -> Result<Vec<(Word, Word)>> {
    check_rounds(n, DEFAULT_ROUND_CAP)?;
    let alphabet: &Arc<OrderedAlphabet> = language.alphabet();
    let dfa = language.canonical_dfa();
    let (mut inside, mut outside) = (Vec::new(), Vec::new());
    for w in words_up_to(alphabet.len(), max_len) {
        if dfa.accepts_letters(&w) {
            inside.push(w);
        } else {
            outside.push(w);
        }
    }
    let mut out = Vec::new();
    for u in &inside {
        for v in &outside {
            if out.len() >= limit {
                return Ok(out);
            }
            if !one_round_compatible(alphabet, u, v) {
                continue;
            }
            let arena = WordArena { alphabet, u, v };
            if Solver::new(&arena).duplicator_wins(&[], n) {
                out.push((Word::new(alphabet.clone(), u.clone()), Word::new(alphabet.clone(), v.clone())));
            }
        }
    }
    Ok(out)
}

/// Necessary condition for `u ⪯₁ v`: every letter of `u` lies below some
/// letter of `v` and every letter of `v` above some letter of `u`.
fn one_round_compatible(alphabet: &OrderedAlphabet, u: &[Letter], v: &[Letter]) -> bool {
    u.iter().all(|&a| v.iter().any(|&b| alphabet.leq(a, b)))
        && v.iter().all(|&b| u.iter().any(|&a| alphabet.leq(a, b)))
}

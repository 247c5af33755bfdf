//! The `n`-integer game: an abstraction of the game on the mortality
//! witnesses where each configuration is replaced by its height.
//!
//! `U` is a word over `[0, n]` and `V` a word of pairs `(i, i-1)`, written
//! here by their top `i`. Besides the usual order and label clauses,
//! Duplicator must keep adjacent tokens adjacent, and two adjacent tokens of
//! `V` labelled `(i, i-1)(j, j-1)` must face `i, j` or `i-1, j-1` in `U`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::games::{ordered_window, Arena, Side, Solver, SpoilerMove, Violation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// `V` starts with `(U[0], U[0]-1)` and ends with `(U[last]+1, U[last])`.
    Standard,
    /// The mirror image: `V` starts with `(U[0]+1, U[0])` and ends with
    /// `(U[last], U[last]-1)`.
    Mirrored,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntArena {
    n: u8,
    u: Vec<u8>,
    v: Vec<u8>,
    orientation: Orientation,
}

impl IntArena {
    /// `v` holds the tops of the pairs.
    pub fn new(n: u8, u: Vec<u8>, v: Vec<u8>, orientation: Orientation) -> Result<IntArena> {
        if n == 0 {
            return Err(Error::Invalid("n must be at least 1".into()));
        }
        if u.len() < 2 || v.is_empty() {
            return Err(Error::Invalid("U needs two letters and V one".into()));
        }
        if let Some(&a) = u.iter().find(|&&a| a > n) {
            return Err(Error::Invalid(format!("U letter {a} exceeds n = {n}")));
        }
        if let Some(&a) = v.iter().find(|&&a| a == 0 || a > n) {
            return Err(Error::Invalid(format!("V letter ({a},{}) is not a pair in [0, {n}]", a as i32 - 1)));
        }
        let (first, last) = (u[0], u[u.len() - 1]);
        let (want_first, want_last) = match orientation {
            Orientation::Standard => (first, last + 1),
            Orientation::Mirrored => (first + 1, last),
        };
        if v[0] != want_first || v[v.len() - 1] != want_last {
            return Err(Error::Invalid(format!(
                "{orientation:?} arena needs V to start with ({want_first},{}) and end with ({want_last},{})",
                want_first as i32 - 1,
                want_last as i32 - 1
            )));
        }
        Ok(IntArena { n, u, v, orientation })
    }

    /// Parses `U` as `"2 1 0"` and `V` as `"(2,1) (1,0)"`.
    pub fn parse(n: u8, u: &str, v: &str, orientation: Orientation) -> Result<IntArena> {
        let bad = |s: &str| Error::Parse { pos: 0, msg: format!("bad letter `{s}`") };
        let u = u.split_whitespace().map(|s| s.parse::<u8>().map_err(|_| bad(s))).collect::<Result<Vec<_>>>()?;
        let v = v
            .split_whitespace()
            .map(|s| {
                let inner = s.strip_prefix('(').and_then(|s| s.strip_suffix(')')).ok_or_else(|| bad(s))?;
                let (top, bottom) = inner.split_once(',').ok_or_else(|| bad(s))?;
                let top: u8 = top.trim().parse().map_err(|_| bad(s))?;
                let bottom: i32 = bottom.trim().parse().map_err(|_| bad(s))?;
                if bottom != top as i32 - 1 {
                    return Err(bad(s));
                }
                Ok(top)
            })
            .collect::<Result<Vec<_>>>()?;
        IntArena::new(n, u, v, orientation)
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn u(&self) -> &[u8] {
        &self.u
    }

    pub fn v(&self) -> &[u8] {
        &self.v
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// The reversed arena, with the other orientation.
    pub fn mirror(&self) -> IntArena {
        let flip = match self.orientation {
            Orientation::Standard => Orientation::Mirrored,
            Orientation::Mirrored => Orientation::Standard,
        };
        IntArena {
            n: self.n,
            u: self.u.iter().rev().copied().collect(),
            v: self.v.iter().rev().copied().collect(),
            orientation: flip,
        }
    }

    pub fn is_legal(&self, pairs: &[(usize, usize)]) -> bool {
        self.check_position(pairs).is_ok()
    }
}

impl fmt::Display for IntArena {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u: Vec<String> = self.u.iter().map(|a| a.to_string()).collect();
        let v: Vec<String> = self.v.iter().map(|&a| format!("({a},{})", a - 1)).collect();
        write!(f, "U = {} / V = {}", u.join(" "), v.join(" "))
    }
}

impl Arena for IntArena {
    fn size(&self, side: Side) -> usize {
        match side {
            Side::Left => self.u.len(),
            Side::Right => self.v.len(),
        }
    }

    fn check(&self, pairs: &[(usize, usize)], l: usize, r: usize) -> std::result::Result<(), Violation> {
        if l >= self.u.len() || r >= self.v.len() {
            return Err(Violation::Bounds);
        }
        let top = |r: usize| self.v[r];
        if self.u[l] != top(r) && self.u[l] + 1 != top(r) {
            return Err(Violation::Label);
        }
        for &(pl, pr) in pairs {
            match (l.cmp(&pl), r.cmp(&pr)) {
                (Ordering::Equal, Ordering::Equal) => continue,
                (Ordering::Equal, _) | (_, Ordering::Equal) => return Err(Violation::Equality),
                (a, b) if a != b => return Err(Violation::Order),
                _ => {}
            }
            let (dl, dr) = (l.abs_diff(pl), r.abs_diff(pr));
            if (dl == 1 || dr == 1) && dl != dr {
                return Err(Violation::Neighbouring);
            }
            if dr == 1 {
                let ((ul, vl), (uh, vh)) = if r < pr { ((l, r), (pl, pr)) } else { ((pl, pr), (l, r)) };
                if (self.u[ul] == top(vl)) != (self.u[uh] == top(vh)) {
                    return Err(Violation::Neighbouring);
                }
            }
        }
        Ok(())
    }

    fn reply_window(&self, pairs: &[(usize, usize)], mv: SpoilerMove) -> Range<usize> {
        ordered_window(pairs, mv, self.size(mv.side.other()))
    }
}

/// A play of the game: Spoiler's moves and Duplicator's replies, the last
/// move unanswered when Spoiler wins.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntOutcome {
    pub duplicator_wins: bool,
    pub line: Vec<(SpoilerMove, Option<usize>)>,
}

/// Exact solution of the `rounds`-round game, with a principal line when
/// Spoiler wins: the fastest win against Duplicator's longest defence.
pub fn solve_int_game(arena: &IntArena, rounds: usize) -> Result<IntOutcome> {
    let cap = 2 * arena.n as usize + 2;
    if rounds > cap {
        return Err(Error::CapExceeded { rounds, cap });
    }
    let mut solver = Solver::new(arena);
    if solver.duplicator_wins(&[], rounds) {
        return Ok(IntOutcome { duplicator_wins: true, line: Vec::new() });
    }
    let mut pairs = Vec::new();
    let mut line = Vec::new();
    let mut left = solver.spoiler_rounds(&[], rounds).expect("Spoiler wins");
    loop {
        let mv = solver.winning_move(&pairs, left).expect("Spoiler still wins");
        let replies = solver.legal_replies(&pairs, mv);
        // The reply after which Spoiler needs the most rounds.
        let best = replies
            .into_iter()
            .map(|q| {
                let mut next = pairs.clone();
                next.push(mv.pair(q));
                let need = solver.spoiler_rounds(&next, left - 1).expect("winning move");
                (need, q)
            })
            .max_by_key(|&(need, q)| (need, std::cmp::Reverse(q)));
        match best {
            None => {
                line.push((mv, None));
                break;
            }
            Some((need, q)) => {
                line.push((mv, Some(q)));
                pairs.push(mv.pair(q));
                left = need;
            }
        }
    }
    Ok(IntOutcome { duplicator_wins: false, line })
}

/// Fewest rounds Spoiler needs, if at most `max_rounds`.
pub fn spoiler_rounds(arena: &IntArena, max_rounds: usize) -> Option<usize> {
    Solver::new(arena).spoiler_rounds(&[], max_rounds)
}

fn first_in(word: &[u8], range: Range<usize>, a: u8) -> Option<usize> {
    range.clone().find(|&i| word[i] == a)
}

fn last_in(word: &[u8], range: Range<usize>, a: u8) -> Option<usize> {
    range.rev().find(|&i| word[i] == a)
}

/// Spoiler's next move under the inductive strategy, given the moves and
/// replies so far; `None` if the strategy has nothing to play.
///
/// A move Duplicator cannot answer at all is always played first. Otherwise
/// Spoiler works on a window, initially the whole arena, and the largest
/// letter `m` present in it: if `m` occurs in `U` Spoiler plays its last
/// occurrence and continues right of the two tokens; else it plays the
/// first `(m, m-1)` in `V` and continues left of them with `m - 1`. At
/// `m = 1` Spoiler plays the last `1` of `U` and the position after it.
pub fn lemma_move(arena: &IntArena, history: &[(SpoilerMove, usize)]) -> Option<SpoilerMove> {
    if arena.orientation == Orientation::Mirrored {
        let mirror = arena.mirror();
        let (ul, vl) = (arena.u.len(), arena.v.len());
        let flip = |mv: SpoilerMove, len_same: usize| SpoilerMove { side: mv.side, pos: len_same - 1 - mv.pos };
        let side_len = |s: Side| if s == Side::Left { ul } else { vl };
        let history: Vec<(SpoilerMove, usize)> = history
            .iter()
            .map(|&(mv, q)| (flip(mv, side_len(mv.side)), side_len(mv.side.other()) - 1 - q))
            .collect();
        return lemma_move(&mirror, &history).map(|mv| flip(mv, side_len(mv.side)));
    }
    let solver = Solver::new(arena);
    let pairs: Vec<(usize, usize)> = history.iter().map(|&(mv, q)| mv.pair(q)).collect();
    let all_moves = (0..arena.u.len()).map(SpoilerMove::left).chain((0..arena.v.len()).map(SpoilerMove::right));
    for mv in all_moves {
        if solver.legal_replies(&pairs, mv).is_empty() {
            return Some(mv);
        }
    }

    let (mut us, mut vs) = (0..arena.u.len(), 0..arena.v.len());
    let mut m = arena.n;
    let mut played = history.iter();
    loop {
        while m > 1 && last_in(&arena.u, us.clone(), m).is_none() && first_in(&arena.v, vs.clone(), m).is_none() {
            m -= 1;
        }
        if m <= 1 {
            let x = last_in(&arena.u, us.clone(), 1)?;
            for planned in [SpoilerMove::left(x), SpoilerMove::left(x + 1)] {
                match played.next() {
                    None => return Some(planned),
                    Some(&(mv, _)) if mv == planned => {}
                    Some(_) => return None,
                }
            }
            return None;
        }
        if let Some(x) = last_in(&arena.u, us.clone(), m) {
            let planned = SpoilerMove::left(x);
            match played.next() {
                None => return Some(planned),
                Some(&(mv, y)) if mv == planned => {
                    us = x + 1..us.end;
                    vs = y + 1..vs.end;
                }
                Some(_) => return None,
            }
        } else {
            let y = first_in(&arena.v, vs.clone(), m).expect("m occurs in the window");
            let planned = SpoilerMove::right(y);
            match played.next() {
                None => return Some(planned),
                Some(&(mv, x)) if mv == planned => {
                    us = us.start..x;
                    vs = vs.start..y;
                    m -= 1;
                }
                Some(_) => return None,
            }
        }
    }
}

/// Why the inductive strategy failed on an arena.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaFailure {
    pub history: Vec<(SpoilerMove, usize)>,
    pub reason: String,
}

/// Plays [`lemma_move`] against every legal Duplicator reply and returns
/// the most rounds it ever needs.
pub fn verify_lemma_strategy(arena: &IntArena) -> std::result::Result<usize, LemmaFailure> {
    let limit = 2 * arena.n as usize + 4;
    let solver = Solver::new(arena);
    fn go(
        arena: &IntArena,
        solver: &Solver<'_, IntArena>,
        history: &mut Vec<(SpoilerMove, usize)>,
        limit: usize,
    ) -> std::result::Result<usize, LemmaFailure> {
        if history.len() >= limit {
            return Err(LemmaFailure { history: history.clone(), reason: format!("no win within {limit} rounds") });
        }
        let Some(mv) = lemma_move(arena, history) else {
            return Err(LemmaFailure { history: history.clone(), reason: "strategy has no move".into() });
        };
        let pairs: Vec<(usize, usize)> = history.iter().map(|&(m, q)| m.pair(q)).collect();
        let mut worst = history.len() + 1;
        for q in solver.legal_replies(&pairs, mv) {
            history.push((mv, q));
            let r = go(arena, solver, history, limit);
            history.pop();
            worst = worst.max(r?);
        }
        Ok(worst)
    }
    go(arena, &solver, &mut Vec::new(), limit)
}

/// Every arena with `|U|, |V| ≤ max_len` in the given orientation.
pub fn all_arenas(n: u8, max_len: usize, orientation: Orientation) -> Vec<IntArena> {
    let words = |alphabet: &[u8], min: usize| {
        let mut out: Vec<Vec<u8>> = Vec::new();
        for len in min..=max_len {
            let k = alphabet.len();
            for code in 0..k.pow(len as u32) {
                out.push((0..len).map(|i| alphabet[code / k.pow(i as u32) % k]).collect());
            }
        }
        out
    };
    let us = words(&(0..=n).collect::<Vec<_>>(), 2);
    let vs = words(&(1..=n).collect::<Vec<_>>(), 1);
    let mut out = Vec::new();
    for u in &us {
        for v in &vs {
            if let Ok(a) = IntArena::new(n, u.clone(), v.clone(), orientation) {
                out.push(a);
            }
        }
    }
    out
}

/// Exhaustive comparison of the inductive strategy with the exact solver.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepReport {
    pub arenas: usize,
    /// `histogram[k]`: arenas on which Spoiler's fastest win takes `k` rounds.
    pub exact_rounds: Vec<usize>,
    /// `histogram[k]`: arenas on which the inductive strategy needs `k`.
    pub lemma_rounds: Vec<usize>,
    pub failures: Vec<String>,
}

pub fn sweep(n: u8, max_len: usize) -> SweepReport {
    let cap = 2 * n as usize + 2;
    let mut rep = SweepReport {
        exact_rounds: vec![0; cap + 1],
        lemma_rounds: vec![0; cap + 3],
        ..SweepReport::default()
    };
    for orientation in [Orientation::Standard, Orientation::Mirrored] {
        for arena in all_arenas(n, max_len, orientation) {
            rep.arenas += 1;
            match spoiler_rounds(&arena, cap) {
                Some(k) => rep.exact_rounds[k] += 1,
                None => rep.failures.push(format!("{arena}: Duplicator survives {cap} rounds")),
            }
            match verify_lemma_strategy(&arena) {
                Ok(k) if k <= cap => rep.lemma_rounds[k] += 1,
                Ok(k) => rep.failures.push(format!("{arena}: strategy needs {k} rounds")),
                Err(f) => rep.failures.push(format!("{arena}: {} after {:?}", f.reason, f.history)),
            }
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arena_validation() {
        assert!(IntArena::parse(1, "1 0", "(1,0)", Orientation::Standard).is_ok());
        assert!(IntArena::parse(1, "0 1", "(1,0)", Orientation::Mirrored).is_ok());
        assert!(IntArena::parse(1, "0 0", "(1,0)", Orientation::Standard).is_err());
        assert!(IntArena::parse(2, "2 1 0", "(2,1) (1,0)", Orientation::Standard).is_ok());
        assert!(IntArena::parse(2, "2 1 0", "(2,0)", Orientation::Standard).is_err());
        assert!(IntArena::parse(1, "1", "(1,0)", Orientation::Standard).is_err());
    }

    #[test]
    fn legality_clauses() {
        let a = IntArena::parse(2, "2 1 1 0", "(2,1) (2,1) (1,0)", Orientation::Standard).unwrap();
        assert!(a.is_legal(&[]));
        assert_eq!(a.check(&[], 0, 0), Ok(()));
        assert_eq!(a.check(&[], 3, 0), Err(Violation::Label));
        // (2,1)(2,1) facing 2 then 1 mixes the readings.
        assert_eq!(a.check(&[(0, 0)], 1, 1), Err(Violation::Neighbouring));
        assert_eq!(a.check(&[(1, 0)], 2, 1), Ok(()));
        assert_eq!(a.check(&[(0, 0)], 2, 1), Err(Violation::Neighbouring));
        assert_eq!(a.check(&[(1, 1)], 2, 0), Err(Violation::Order));
    }

    #[test]
    fn base_case() {
        let a = IntArena::parse(1, "1 0", "(1,0)", Orientation::Standard).unwrap();
        assert!(solve_int_game(&a, 0).unwrap().duplicator_wins);
        assert!(solve_int_game(&a, 1).unwrap().duplicator_wins);
        let out = solve_int_game(&a, 2).unwrap();
        assert!(!out.duplicator_wins);
        assert_eq!(out.line.len(), 2);
        assert_eq!(out.line[1].1, None);
        assert_eq!(verify_lemma_strategy(&a), Ok(2));
        assert!(solve_int_game(&a, 5).is_err());
    }

    #[test]
    fn small_sweeps() {
        for n in 1..=2 {
            let rep = sweep(n, 4);
            assert!(rep.failures.is_empty(), "{:?}", rep.failures);
            assert!(rep.arenas > 0);
        }
    }
}

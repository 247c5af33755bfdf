//! Finite automata over ordered alphabets.
//!
//! [`Nfa`] is the working representation; [`Dfa`] is always complete and is
//! what [`Nfa::canonical_dfa`] returns (minimal, states numbered in BFS order
//! over letters in alphabet order). Language inclusion and monotonicity are
//! decided on the fly without building full determinizations.

mod monoid;
mod regex;

use std::collections::VecDeque;
use std::sync::Arc;

use rustc_hash::FxHashMap;

use crate::alphabet::{Letter, OrderedAlphabet, Word};
use crate::error::{Error, Result};

pub use monoid::{GreenClasses, Monoid};
pub use regex::Regex;

#[derive(Clone, Debug)]
pub struct Nfa {
    alphabet: Arc<OrderedAlphabet>,
    initial: Vec<u32>,
    accepting: Vec<bool>,
    /// Outgoing transitions per state, sorted by `(letter, target)`.
    trans: Vec<Vec<(Letter, u32)>>,
}

impl Nfa {
    pub fn new(
        alphabet: Arc<OrderedAlphabet>,
        states: usize,
        initial: &[usize],
        accepting: &[usize],
        transitions: &[(usize, Letter, usize)],
    ) -> Result<Self> {
        let check = |s: usize| {
            if s < states {
                Ok(s as u32)
            } else {
                Err(Error::Invalid(format!("state {s} out of range (have {states})")))
            }
        };
        let mut trans = vec![Vec::new(); states];
        for &(p, a, q) in transitions {
            if a.index() >= alphabet.len() {
                return Err(Error::Invalid(format!("letter index {} out of range", a.0)));
            }
            let (p, q) = (check(p)?, check(q)?);
            trans[p as usize].push((a, q));
        }
        let mut acc = vec![false; states];
        for &f in accepting {
            acc[check(f)? as usize] = true;
        }
        let initial = initial.iter().map(|&s| check(s)).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_parts(alphabet, initial, acc, trans))
    }

    fn from_parts(
        alphabet: Arc<OrderedAlphabet>,
        mut initial: Vec<u32>,
        accepting: Vec<bool>,
        mut trans: Vec<Vec<(Letter, u32)>>,
    ) -> Self {
        initial.sort_unstable();
        initial.dedup();
        for t in &mut trans {
            t.sort_unstable();
            t.dedup();
        }
        Nfa { alphabet, initial, accepting, trans }
    }

    /// The empty language.
    pub fn empty(alphabet: Arc<OrderedAlphabet>) -> Self {
        Self::from_parts(alphabet, vec![0], vec![false], vec![Vec::new()])
    }

    /// `{ε}`.
    pub fn epsilon(alphabet: Arc<OrderedAlphabet>) -> Self {
        Self::from_parts(alphabet, vec![0], vec![true], vec![Vec::new()])
    }

    /// One-letter words whose letter lies in `set`.
    pub fn letter_set(alphabet: Arc<OrderedAlphabet>, set: &[Letter]) -> Self {
        let trans = vec![set.iter().map(|&a| (a, 1)).collect(), Vec::new()];
        Self::from_parts(alphabet, vec![0], vec![false, true], trans)
    }

    /// `A*`.
    pub fn universal(alphabet: Arc<OrderedAlphabet>) -> Self {
        let trans = vec![alphabet.letters().map(|a| (a, 0)).collect()];
        Self::from_parts(alphabet, vec![0], vec![true], trans)
    }

    /// The single word `w`.
    pub fn word(alphabet: Arc<OrderedAlphabet>, w: &[Letter]) -> Self {
        let n = w.len();
        let trans = (0..=n)
            .map(|i| if i < n { vec![(w[i], i as u32 + 1)] } else { Vec::new() })
            .collect();
        let mut acc = vec![false; n + 1];
        acc[n] = true;
        Self::from_parts(alphabet, vec![0], acc, trans)
    }

    pub fn alphabet(&self) -> &Arc<OrderedAlphabet> {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.trans.len()
    }

    pub fn initial(&self) -> &[u32] {
        &self.initial
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = usize> + '_ {
        self.accepting.iter().enumerate().filter(|(_, &f)| f).map(|(q, _)| q)
    }

    pub fn transitions(&self) -> impl Iterator<Item = (usize, Letter, usize)> + '_ {
        self.trans
            .iter()
            .enumerate()
            .flat_map(|(p, ts)| ts.iter().map(move |&(a, q)| (p, a, q as usize)))
    }

    pub fn transition_count(&self) -> usize {
        self.trans.iter().map(Vec::len).sum()
    }

    pub fn out(&self, p: usize) -> &[(Letter, u32)] {
        &self.trans[p]
    }

    fn require_same_alphabet(&self, other: &Nfa) -> Result<()> {
        if Arc::ptr_eq(&self.alphabet, &other.alphabet) || *self.alphabet == *other.alphabet {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch)
        }
    }

    /// States reachable from `set` by reading `a`, as a sorted set.
    pub fn post(&self, set: &[u32], a: Letter) -> Vec<u32> {
        let mut out = Vec::new();
        for &p in set {
            let ts = &self.trans[p as usize];
            let start = ts.partition_point(|&(b, _)| b < a);
            out.extend(ts[start..].iter().take_while(|&&(b, _)| b == a).map(|&(_, q)| q));
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Like [`Nfa::post`] but any letter in `set_of_letters` may be read.
    fn post_any(&self, set: &[u32], letters: &[Letter]) -> Vec<u32> {
        let mut out = Vec::new();
        for &p in set {
            for &(b, q) in &self.trans[p as usize] {
                if letters.binary_search(&b).is_ok() {
                    out.push(q);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn accepts_letters(&self, w: &[Letter]) -> bool {
        let mut cur = self.initial.clone();
        for &a in w {
            if cur.is_empty() {
                return false;
            }
            cur = self.post(&cur, a);
        }
        cur.iter().any(|&q| self.accepting[q as usize])
    }

    pub fn accepts(&self, w: &Word) -> bool {
        self.accepts_letters(w.letters())
    }

    /// Whether some word `w' ≤ w` (letter-wise) is accepted.
    pub fn accepts_some_below(&self, w: &[Letter]) -> bool {
        let mut cur = self.initial.clone();
        for &a in w {
            if cur.is_empty() {
                return false;
            }
            cur = self.post_any(&cur, self.alphabet.downset(a));
        }
        cur.iter().any(|&q| self.accepting[q as usize])
    }

    fn accepts_epsilon(&self) -> bool {
        self.initial.iter().any(|&q| self.accepting[q as usize])
    }

    fn shifted(&self, offset: u32) -> impl Iterator<Item = Vec<(Letter, u32)>> + '_ {
        self.trans.iter().map(move |ts| ts.iter().map(|&(a, q)| (a, q + offset)).collect())
    }

    pub fn union(&self, other: &Nfa) -> Result<Nfa> {
        self.require_same_alphabet(other)?;
        let off = self.state_count() as u32;
        let trans = self.shifted(0).chain(other.shifted(off)).collect();
        let mut initial = self.initial.clone();
        initial.extend(other.initial.iter().map(|q| q + off));
        let accepting = self.accepting.iter().chain(&other.accepting).copied().collect();
        Ok(Self::from_parts(self.alphabet.clone(), initial, accepting, trans))
    }

    pub fn concat(&self, other: &Nfa) -> Result<Nfa> {
        self.require_same_alphabet(other)?;
        let off = self.state_count() as u32;
        let mut trans: Vec<Vec<(Letter, u32)>> =
            self.shifted(0).chain(other.shifted(off)).collect();
        for (p, out) in self.trans.iter().enumerate() {
            let extra: Vec<(Letter, u32)> = out
                .iter()
                .filter(|&&(_, q)| self.accepting[q as usize])
                .flat_map(|&(a, _)| other.initial.iter().map(move |&i| (a, i + off)))
                .collect();
            trans[p].extend(extra);
        }
        let mut initial = self.initial.clone();
        if self.accepts_epsilon() {
            initial.extend(other.initial.iter().map(|q| q + off));
        }
        let keep_first = other.accepts_epsilon();
        let accepting = self
            .accepting
            .iter()
            .map(|&f| f && keep_first)
            .chain(other.accepting.iter().copied())
            .collect();
        Ok(Self::from_parts(self.alphabet.clone(), initial, accepting, trans))
    }

    pub fn star(&self) -> Nfa {
        let n = self.state_count() as u32;
        let mut trans: Vec<Vec<(Letter, u32)>> = self.shifted(0).collect();
        let mut fresh: Vec<(Letter, u32)> = Vec::new();
        for &i in &self.initial {
            fresh.extend(self.trans[i as usize].iter().copied());
        }
        trans.push(fresh);
        for ts in &mut trans {
            let restart: Vec<(Letter, u32)> = ts
                .iter()
                .filter(|&&(_, q)| self.accepting[q as usize])
                .flat_map(|&(a, _)| self.initial.iter().map(move |&i| (a, i)))
                .collect();
            ts.extend(restart);
        }
        let mut accepting = self.accepting.clone();
        accepting.push(true);
        Self::from_parts(self.alphabet.clone(), vec![n], accepting, trans)
    }

    /// Keeps only states that are reachable and co-reachable.
    pub fn trim(&self) -> Nfa {
        let n = self.state_count();
        let mut fwd = vec![false; n];
        let mut stack: Vec<usize> = self.initial.iter().map(|&q| q as usize).collect();
        for &q in &stack {
            fwd[q] = true;
        }
        while let Some(p) = stack.pop() {
            for &(_, q) in &self.trans[p] {
                if !fwd[q as usize] {
                    fwd[q as usize] = true;
                    stack.push(q as usize);
                }
            }
        }
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (p, _, q) in self.transitions() {
            rev[q].push(p);
        }
        let mut bwd = vec![false; n];
        let mut stack: Vec<usize> = self.accepting_states().collect();
        for &q in &stack {
            bwd[q] = true;
        }
        while let Some(q) = stack.pop() {
            for &p in &rev[q] {
                if !bwd[p] {
                    bwd[p] = true;
                    stack.push(p);
                }
            }
        }
        let mut map = vec![u32::MAX; n];
        let mut next = 0u32;
        for q in 0..n {
            if fwd[q] && bwd[q] {
                map[q] = next;
                next += 1;
            }
        }
        if next == 0 {
            return Nfa::empty(self.alphabet.clone());
        }
        let mut trans = vec![Vec::new(); next as usize];
        let mut accepting = vec![false; next as usize];
        for q in 0..n {
            if map[q] == u32::MAX {
                continue;
            }
            accepting[map[q] as usize] = self.accepting[q];
            trans[map[q] as usize] = self.trans[q]
                .iter()
                .filter(|&&(_, t)| map[t as usize] != u32::MAX)
                .map(|&(a, t)| (a, map[t as usize]))
                .collect();
        }
        let initial = self
            .initial
            .iter()
            .filter(|&&q| map[q as usize] != u32::MAX)
            .map(|&q| map[q as usize])
            .collect();
        Self::from_parts(self.alphabet.clone(), initial, accepting, trans)
    }

    /// Every state becomes initial and accepting: the language of factors.
    /// Only meaningful on a trimmed automaton.
    pub fn factor_automaton(&self) -> Nfa {
        let t = self.trim();
        let n = t.state_count();
        let accepting = vec![true; n];
        let initial = (0..n as u32).collect();
        Self::from_parts(t.alphabet.clone(), initial, accepting, t.trans)
    }

    pub fn is_empty(&self) -> bool {
        let mut seen = vec![false; self.state_count()];
        let mut stack: Vec<usize> = self.initial.iter().map(|&q| q as usize).collect();
        for &q in &stack {
            seen[q] = true;
        }
        while let Some(p) = stack.pop() {
            if self.accepting[p] {
                return false;
            }
            for &(_, q) in &self.trans[p] {
                if !seen[q as usize] {
                    seen[q as usize] = true;
                    stack.push(q as usize);
                }
            }
        }
        true
    }

    /// Product automaton for `L(self) ∩ L(other)`, reachable part only.
    pub fn intersect(&self, other: &Nfa) -> Result<Nfa> {
        self.require_same_alphabet(other)?;
        let mut ids: FxHashMap<(u32, u32), u32> = FxHashMap::default();
        let mut queue = VecDeque::new();
        let mut initial = Vec::new();
        for &p in &self.initial {
            for &q in &other.initial {
                let id = ids.len() as u32;
                ids.insert((p, q), id);
                queue.push_back((p, q));
                initial.push(id);
            }
        }
        let mut trans: Vec<Vec<(Letter, u32)>> = Vec::new();
        let mut accepting = Vec::new();
        while let Some((p, q)) = queue.pop_front() {
            let mut out = Vec::new();
            for &(a, p2) in &self.trans[p as usize] {
                let tq = &other.trans[q as usize];
                let start = tq.partition_point(|&(b, _)| b < a);
                for &(_, q2) in tq[start..].iter().take_while(|&&(b, _)| b == a) {
                    let next = ids.len() as u32;
                    let id = *ids.entry((p2, q2)).or_insert_with(|| {
                        queue.push_back((p2, q2));
                        next
                    });
                    out.push((a, id));
                }
            }
            trans.push(out);
            accepting.push(self.accepting[p as usize] && other.accepting[q as usize]);
        }
        Ok(Self::from_parts(self.alphabet.clone(), initial, accepting, trans))
    }

    /// Subset construction, completed with a sink when needed.
    pub fn determinize(&self) -> Dfa {
        let k = self.alphabet.len();
        let mut ids: FxHashMap<Vec<u32>, u32> = FxHashMap::default();
        let mut sets: Vec<Vec<u32>> = Vec::new();
        let start = self.initial.clone();
        ids.insert(start.clone(), 0);
        sets.push(start);
        let mut delta: Vec<u32> = Vec::new();
        let mut i = 0;
        while i < sets.len() {
            let set = sets[i].clone();
            let mut buckets: Vec<(Letter, u32)> = Vec::new();
            for &p in &set {
                buckets.extend_from_slice(&self.trans[p as usize]);
            }
            buckets.sort_unstable();
            buckets.dedup();
            let mut row = vec![u32::MAX; k];
            let mut j = 0;
            while j < buckets.len() {
                let a = buckets[j].0;
                let mut target = Vec::new();
                while j < buckets.len() && buckets[j].0 == a {
                    target.push(buckets[j].1);
                    j += 1;
                }
                let next = sets.len() as u32;
                let id = *ids.entry(target.clone()).or_insert_with(|| {
                    sets.push(target);
                    next
                });
                row[a.index()] = id;
            }
            delta.extend(row);
            i += 1;
        }
        let mut accepting: Vec<bool> = sets
            .iter()
            .map(|s| s.iter().any(|&q| self.accepting[q as usize]))
            .collect();
        let empty_id = ids.get(&Vec::new()).copied();
        if delta.contains(&u32::MAX) {
            let sink = match empty_id {
                Some(id) => id,
                None => {
                    accepting.push(false);
                    delta.extend(std::iter::repeat_n(sets.len() as u32, k));
                    sets.len() as u32
                }
            };
            for d in &mut delta {
                if *d == u32::MAX {
                    *d = sink;
                }
            }
        }
        Dfa { alphabet: self.alphabet.clone(), initial: 0, accepting, delta }
    }

    /// Minimal complete DFA with BFS state numbering.
    pub fn canonical_dfa(&self) -> Dfa {
        self.determinize().minimize()
    }

    /// `L(other) ⊆ L(self)`, decided on the fly over pairs
    /// (state of `other`, subset of `self`).
    pub fn includes(&self, other: &Nfa) -> Result<bool> {
        Ok(self.inclusion_counterexample(other)?.is_none())
    }

    /// A shortest word of `L(other) \ L(self)`, if any.
    pub fn inclusion_counterexample(&self, other: &Nfa) -> Result<Option<Vec<Letter>>> {
        self.require_same_alphabet(other)?;
        let mut subsets: FxHashMap<Vec<u32>, u32> = FxHashMap::default();
        let mut subset_list: Vec<Vec<u32>> = Vec::new();
        let mut intern = |s: Vec<u32>, list: &mut Vec<Vec<u32>>| -> u32 {
            let next = list.len() as u32;
            *subsets.entry(s.clone()).or_insert_with(|| {
                list.push(s);
                next
            })
        };
        let start = intern(self.initial.clone(), &mut subset_list);
        // Each reached pair remembers the pair and letter it was reached from.
        type Parents = FxHashMap<(u32, u32), Option<((u32, u32), Letter)>>;
        let mut parent = Parents::default();
        let mut queue = VecDeque::new();
        for &q in &other.initial {
            parent.insert((q, start), None);
            queue.push_back((q, start));
        }
        while let Some((q, s)) = queue.pop_front() {
            let s_accepts = subset_list[s as usize].iter().any(|&p| self.accepting[p as usize]);
            if other.accepting[q as usize] && !s_accepts {
                let mut word = Vec::new();
                let mut cur = (q, s);
                while let Some(Some((prev, a))) = parent.get(&cur) {
                    word.push(*a);
                    cur = *prev;
                }
                word.reverse();
                return Ok(Some(word));
            }
            for &(a, q2) in &other.trans[q as usize] {
                let s2 = self.post(&subset_list[s as usize], a);
                let s2 = intern(s2, &mut subset_list);
                if let std::collections::hash_map::Entry::Vacant(e) = parent.entry((q2, s2)) {
                    e.insert(Some(((q, s), a)));
                    queue.push_back((q2, s2));
                }
            }
        }
        Ok(None)
    }

    pub fn equivalent(&self, other: &Nfa) -> Result<bool> {
        Ok(self.includes(other)? && other.includes(self)?)
    }

    /// Replaces every transition letter `a` by all letters of `a↑`.
    pub fn monotone_closure(&self) -> Nfa {
        let trans = self
            .trans
            .iter()
            .map(|ts| {
                ts.iter()
                    .flat_map(|&(a, q)| self.alphabet.upset(a).iter().map(move |&b| (b, q)))
                    .collect()
            })
            .collect();
        Self::from_parts(self.alphabet.clone(), self.initial.clone(), self.accepting.clone(), trans)
    }

    /// Whether the syntactic monoid is aperiodic, i.e. no word induces a
    /// non-trivial cycle on the minimal DFA.
    pub fn is_counter_free(&self) -> bool {
        Monoid::syntactic(self).is_aperiodic()
    }

    /// Whether `L` is upward closed: `u ∈ L` and `u ≤ v` imply `v ∈ L`.
    pub fn is_monotone(&self) -> bool {
        self.includes(&self.monotone_closure()).expect("same alphabet")
    }

    /// A pair `u ≤ v` with `u ∈ L`, `v ∉ L`, when the language is not monotone.
    pub fn monotonicity_counterexample(&self) -> Option<(Vec<Letter>, Vec<Letter>)> {
        let v = self.inclusion_counterexample(&self.monotone_closure()).expect("same alphabet")?;
        // Layered forward sets over letters below v, then walk back.
        let mut layers = vec![self.initial.clone()];
        for &a in &v {
            let next = self.post_any(layers.last().unwrap(), self.alphabet.downset(a));
            layers.push(next);
        }
        let mut q = *layers[v.len()]
            .iter()
            .find(|&&q| self.accepting[q as usize])
            .expect("closure accepts v");
        let mut u = vec![Letter(0); v.len()];
        for i in (0..v.len()).rev() {
            let down = self.alphabet.downset(v[i]);
            let (p, b) = layers[i]
                .iter()
                .find_map(|&p| {
                    self.trans[p as usize]
                        .iter()
                        .find(|&&(b, t)| t == q && down.binary_search(&b).is_ok())
                        .map(|&(b, _)| (p, b))
                })
                .expect("layered run exists");
            u[i] = b;
            q = p;
        }
        Some((u, v))
    }

    /// The reduction from universality: over `{a ≤ b}`, the language
    /// `a·A* + b·L(B)` is monotone iff `L(B) = A*`. Expects a two-letter
    /// alphabet with the trivial order; its first letter plays `a`.
    pub fn universality_gadget(&self) -> Result<Nfa> {
        let alph = &self.alphabet;
        if alph.len() != 2 || !alph.is_trivial() {
            return Err(Error::Invalid(
                "universality gadget needs a two-letter trivially ordered alphabet".into(),
            ));
        }
        let names = alph.names();
        let ordered = Arc::new(OrderedAlphabet::new(names, &[(names[0].clone(), names[1].clone())])?);
        let (a, b) = (Letter(0), Letter(1));
        let n = self.state_count() as u32;
        let (start, top) = (n, n + 1);
        let mut trans: Vec<Vec<(Letter, u32)>> = self.trans.clone();
        trans.push(
            std::iter::once((a, top))
                .chain(self.initial.iter().map(|&q| (b, q)))
                .collect(),
        );
        trans.push(vec![(a, top), (b, top)]);
        let mut accepting = self.accepting.clone();
        accepting.push(false);
        accepting.push(true);
        Ok(Self::from_parts(ordered, vec![start], accepting, trans))
    }

    /// Same states and transitions over another alphabet with identical
    /// letter names (used to reinterpret a language under a new order).
    pub fn with_alphabet(&self, alphabet: Arc<OrderedAlphabet>) -> Result<Nfa> {
        if alphabet.names() != self.alphabet.names() {
            return Err(Error::AlphabetMismatch);
        }
        let mut out = self.clone();
        out.alphabet = alphabet;
        Ok(out)
    }
}

/// Complete deterministic automaton.
#[derive(Clone, Debug)]
pub struct Dfa {
    alphabet: Arc<OrderedAlphabet>,
    initial: u32,
    accepting: Vec<bool>,
    delta: Vec<u32>,
}

impl PartialEq for Dfa {
    fn eq(&self, other: &Self) -> bool {
        *self.alphabet == *other.alphabet
            && self.initial == other.initial
            && self.accepting == other.accepting
            && self.delta == other.delta
    }
}

impl Eq for Dfa {}

impl Dfa {
    pub fn alphabet(&self) -> &Arc<OrderedAlphabet> {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> usize {
        self.initial as usize
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn step(&self, q: usize, a: Letter) -> usize {
        self.delta[q * self.alphabet.len() + a.index()] as usize
    }

    pub fn run(&self, w: &[Letter]) -> usize {
        w.iter().fold(self.initial(), |q, &a| self.step(q, a))
    }

    pub fn accepts_letters(&self, w: &[Letter]) -> bool {
        self.accepting[self.run(w)]
    }

    pub fn accepts(&self, w: &Word) -> bool {
        self.accepts_letters(w.letters())
    }

    pub fn complement(&self) -> Dfa {
        let mut out = self.clone();
        for f in &mut out.accepting {
            *f = !*f;
        }
        out
    }

    pub fn to_nfa(&self) -> Nfa {
        let k = self.alphabet.len();
        let trans = (0..self.state_count())
            .map(|q| {
                (0..k)
                    .map(|a| (Letter(a as u32), self.delta[q * k + a]))
                    .collect()
            })
            .collect();
        Nfa::from_parts(self.alphabet.clone(), vec![self.initial], self.accepting.clone(), trans)
    }

    /// Moore partition refinement on the reachable part, then BFS renumbering.
    pub fn minimize(&self) -> Dfa {
        let k = self.alphabet.len();
        let reach = self.bfs_order();
        let mut class: Vec<u32> = vec![u32::MAX; self.state_count()];
        for &q in &reach {
            class[q] = self.accepting[q] as u32;
        }
        let mut count = {
            let mut c = class.clone();
            c.retain(|&x| x != u32::MAX);
            c.sort_unstable();
            c.dedup();
            c.len()
        };
        loop {
            let mut sig_ids: FxHashMap<Vec<u32>, u32> = FxHashMap::default();
            let mut next = class.clone();
            for &q in &reach {
                let mut sig = Vec::with_capacity(k + 1);
                sig.push(class[q]);
                for a in 0..k {
                    sig.push(class[self.delta[q * k + a] as usize]);
                }
                let id = sig_ids.len() as u32;
                next[q] = *sig_ids.entry(sig).or_insert(id);
            }
            let new_count = sig_ids.len();
            class = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        // Quotient, then renumber by BFS from the initial class.
        let mut rep: Vec<usize> = vec![usize::MAX; count];
        for &q in &reach {
            if rep[class[q] as usize] == usize::MAX {
                rep[class[q] as usize] = q;
            }
        }
        let mut order: Vec<u32> = vec![u32::MAX; count];
        let mut queue = VecDeque::new();
        let c0 = class[self.initial()] as usize;
        order[c0] = 0;
        queue.push_back(c0);
        let mut seq = vec![c0];
        while let Some(c) = queue.pop_front() {
            let q = rep[c];
            for a in 0..k {
                let d = class[self.delta[q * k + a] as usize] as usize;
                if order[d] == u32::MAX {
                    order[d] = seq.len() as u32;
                    seq.push(d);
                    queue.push_back(d);
                }
            }
        }
        let mut delta = Vec::with_capacity(seq.len() * k);
        let mut accepting = Vec::with_capacity(seq.len());
        for &c in &seq {
            let q = rep[c];
            accepting.push(self.accepting[q]);
            for a in 0..k {
                delta.push(order[class[self.delta[q * k + a] as usize] as usize]);
            }
        }
        Dfa { alphabet: self.alphabet.clone(), initial: 0, accepting, delta }
    }

    fn bfs_order(&self) -> Vec<usize> {
        let k = self.alphabet.len();
        let mut seen = vec![false; self.state_count()];
        let mut out = vec![self.initial()];
        seen[self.initial()] = true;
        let mut i = 0;
        while i < out.len() {
            let q = out[i];
            for a in 0..k {
                let d = self.delta[q * k + a] as usize;
                if !seen[d] {
                    seen[d] = true;
                    out.push(d);
                }
            }
            i += 1;
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        !self.bfs_order().iter().any(|&q| self.accepting[q])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Arc<OrderedAlphabet> {
        Arc::new(OrderedAlphabet::trivial(&["a", "b"]).unwrap())
    }

    fn ordered_ab() -> Arc<OrderedAlphabet> {
        Arc::new(OrderedAlphabet::new(&["a", "b"], &[("a", "b")]).unwrap())
    }

    #[test]
    fn combinators() {
        let alph = ab();
        let a = Nfa::letter_set(alph.clone(), &[Letter(0)]);
        let b = Nfa::letter_set(alph.clone(), &[Letter(1)]);
        let ab_star = a.concat(&b).unwrap().star();
        assert!(ab_star.accepts_letters(&[]));
        assert!(ab_star.accepts_letters(&[Letter(0), Letter(1), Letter(0), Letter(1)]));
        assert!(!ab_star.accepts_letters(&[Letter(0), Letter(1), Letter(0)]));
        let u = a.union(&b).unwrap();
        assert!(u.accepts_letters(&[Letter(1)]));
        assert!(!u.accepts_letters(&[]));
        let eps_then_a = Nfa::epsilon(alph.clone()).concat(&a).unwrap();
        assert!(eps_then_a.accepts_letters(&[Letter(0)]));
    }

    #[test]
    fn canonical_sizes() {
        let alph = ab();
        let a_star = Nfa::letter_set(alph.clone(), &[Letter(0)]).star();
        let d = a_star.canonical_dfa();
        assert_eq!(d.state_count(), 2);
        assert!(d.accepts_letters(&[Letter(0), Letter(0)]));
        assert!(!d.accepts_letters(&[Letter(1)]));
        assert_eq!(Nfa::empty(alph.clone()).canonical_dfa().state_count(), 1);
        assert_eq!(Nfa::universal(alph).canonical_dfa().state_count(), 1);
    }

    #[test]
    fn monotone_closure_of_a_star() {
        let alph = ordered_ab();
        let a_star = Nfa::letter_set(alph.clone(), &[Letter(0)]).star();
        assert!(!a_star.is_monotone());
        let closed = a_star.monotone_closure();
        assert!(closed.equivalent(&Nfa::universal(alph)).unwrap());
        let (u, v) = a_star.monotonicity_counterexample().unwrap();
        assert!(a_star.accepts_letters(&u) && !a_star.accepts_letters(&v));
        assert_eq!(u.len(), v.len());
    }

    #[test]
    fn gadget_detects_universality() {
        let alph = ab();
        let universal = Nfa::universal(alph.clone());
        assert!(universal.universality_gadget().unwrap().is_monotone());
        let a_star = Nfa::letter_set(alph, &[Letter(0)]).star();
        assert!(!a_star.universality_gadget().unwrap().is_monotone());
    }

    #[test]
    fn trim_and_factors() {
        let alph = ab();
        let nfa = Nfa::new(alph, 3, &[0], &[1], &[(0, Letter(0), 1), (0, Letter(1), 2)]).unwrap();
        assert_eq!(nfa.trim().state_count(), 2);
        let f = nfa.factor_automaton();
        assert!(f.accepts_letters(&[]));
        assert!(f.accepts_letters(&[Letter(0)]));
        assert!(!f.accepts_letters(&[Letter(1)]));
    }
}

//! The reduction alphabet, configuration words and the languages built on
//! them.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use super::machine::{Dir, TuringMachine};
use crate::alphabet::{Letter, OrderedAlphabet, Word};
use crate::automata::Nfa;
use crate::error::{Error, Result};

/// A letter of the base alphabet. Transitions are indices into the
/// machine's transition list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseLetter {
    Plain(usize),
    /// `a_δ`: the head just left this cell through `δ`, which wrote `a`.
    Sub(usize, usize),
    /// `a^δ′`: the head enters this cell next through `δ′`.
    Sup(usize, usize),
    /// `a_δ^δ′`: both at once.
    SubSup(usize, usize, usize),
    /// `[q.a]`: the head, in state `q`, reading `a`.
    Head(usize, usize),
    Hash,
}

impl BaseLetter {
    /// The tape letter under this cell, if any.
    pub fn tape(self) -> Option<usize> {
        match self {
            BaseLetter::Plain(a)
            | BaseLetter::Sub(_, a)
            | BaseLetter::Sup(a, _)
            | BaseLetter::SubSup(_, a, _)
            | BaseLetter::Head(_, a) => Some(a),
            BaseLetter::Hash => None,
        }
    }
}

/// A configuration with its incoming and outgoing transitions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Config {
    pub tape: Vec<usize>,
    pub head: usize,
    pub state: usize,
    pub incoming: usize,
    pub outgoing: usize,
}

fn shift(pos: usize, dir: Dir, len: usize) -> Option<usize> {
    let p = pos as isize + dir.offset();
    (p >= 0 && (p as usize) < len).then_some(p as usize)
}

/// The alphabet `A = A_base ∪ A_amb` of a machine and everything built on
/// it.
pub struct Reduction {
    tm: TuringMachine,
    alphabet: Arc<OrderedAlphabet>,
    base: Vec<BaseLetter>,
    index: BTreeMap<BaseLetter, usize>,
    /// `(predecessor, successor)` for each amb letter, after the base ones.
    amb: Vec<(Letter, Letter)>,
    amb_index: BTreeMap<(Letter, Letter), Letter>,
    configs: [OnceLock<Nfa>; 3],
    l_base: OnceLock<Nfa>,
    l_m: OnceLock<Nfa>,
}

impl PartialOrd for BaseLetter {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BaseLetter {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let key = |b: &BaseLetter| match *b {
            BaseLetter::Plain(a) => (0, 0, a, 0),
            BaseLetter::Sub(d, a) => (1, d, a, 0),
            BaseLetter::Sup(a, d) => (2, d, a, 0),
            BaseLetter::SubSup(d, a, e) => (3, d, a, e),
            BaseLetter::Head(q, a) => (4, q, a, 0),
            BaseLetter::Hash => (5, 0, 0, 0),
        };
        key(self).cmp(&key(other))
    }
}

impl Reduction {
    pub fn new(tm: TuringMachine) -> Reduction {
        let g = tm.gamma().len();
        let d = tm.delta().len();
        let mut base = Vec::new();
        base.extend((0..g).map(BaseLetter::Plain));
        base.extend((0..d).flat_map(|t| (0..g).map(move |a| BaseLetter::Sub(t, a))));
        base.extend((0..d).flat_map(|t| (0..g).map(move |a| BaseLetter::Sup(a, t))));
        base.extend(
            (0..d).flat_map(|t| (0..g).flat_map(move |a| (0..d).map(move |u| BaseLetter::SubSup(t, a, u)))),
        );
        base.extend((0..tm.states().len()).flat_map(|q| (0..g).map(move |a| BaseLetter::Head(q, a))));
        base.push(BaseLetter::Hash);
        let index: BTreeMap<BaseLetter, usize> = base.iter().enumerate().map(|(i, &b)| (b, i)).collect();
        let letter = |b: BaseLetter| Letter(index[&b] as u32);

        let delta = tm.delta();
        let mut pairs: Vec<(Letter, Letter)> = Vec::new();
        for a in 0..g {
            for (t, dt) in delta.iter().enumerate() {
                pairs.push((letter(BaseLetter::Sub(t, a)), letter(BaseLetter::Plain(a))));
                pairs.push((letter(BaseLetter::Plain(a)), letter(BaseLetter::Sup(a, t))));
                pairs.push((letter(BaseLetter::Sup(a, t)), letter(BaseLetter::Head(dt.to, a))));
            }
        }
        for (t, dt) in delta.iter().enumerate() {
            for (u, du) in delta.iter().enumerate() {
                if du.from == dt.to && du.dir == dt.dir.opposite() {
                    pairs.push((letter(BaseLetter::SubSup(t, dt.write, u)), letter(BaseLetter::Head(du.to, dt.write))));
                }
            }
            pairs.push((letter(BaseLetter::Head(dt.from, dt.read)), letter(BaseLetter::Sub(t, dt.write))));
            for (u, du) in delta.iter().enumerate() {
                if du.from == dt.to && du.dir == dt.dir.opposite() {
                    pairs.push((
                        letter(BaseLetter::Head(dt.from, dt.read)),
                        letter(BaseLetter::SubSup(t, dt.write, u)),
                    ));
                }
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        pairs.retain(|&(p, s)| seen.insert((p.min(s), p.max(s))));

        let name_of = |b: &BaseLetter| -> String {
            let gm = tm.gamma();
            match *b {
                BaseLetter::Plain(a) => gm[a].clone(),
                BaseLetter::Sub(t, a) => format!("{}_d{}", gm[a], t + 1),
                BaseLetter::Sup(a, t) => format!("{}^d{}", gm[a], t + 1),
                BaseLetter::SubSup(t, a, u) => format!("{}_d{}^d{}", gm[a], t + 1, u + 1),
                BaseLetter::Head(q, a) => format!("[{}.{}]", tm.states()[q], gm[a]),
                BaseLetter::Hash => "#".to_string(),
            }
        };
        let mut names: Vec<String> = base.iter().map(name_of).collect();
        let base_names = names.clone();
        let mut order = Vec::new();
        for &(p, s) in &pairs {
            let name = format!("{{{}|{}}}", base_names[p.index()], base_names[s.index()]);
            order.push((base_names[p.index()].clone(), name.clone()));
            order.push((base_names[s.index()].clone(), name.clone()));
            names.push(name);
        }
        let alphabet = Arc::new(OrderedAlphabet::new(&names, &order).expect("names are distinct and order acyclic"));
        let amb_index = pairs
            .iter()
            .enumerate()
            .flat_map(|(i, &(p, s))| {
                let l = Letter((base.len() + i) as u32);
                [((p, s), l), ((s, p), l)]
            })
            .collect();
        Reduction {
            tm,
            alphabet,
            base,
            index,
            amb: pairs,
            amb_index,
            configs: Default::default(),
            l_base: OnceLock::new(),
            l_m: OnceLock::new(),
        }
    }

    pub fn machine(&self) -> &TuringMachine {
        &self.tm
    }

    pub fn alphabet(&self) -> &Arc<OrderedAlphabet> {
        &self.alphabet
    }

    pub fn base_len(&self) -> usize {
        self.base.len()
    }

    /// `(predecessor, successor)` members of each amb letter, in letter order.
    pub fn amb_pairs(&self) -> &[(Letter, Letter)] {
        &self.amb
    }

    pub fn base_letter(&self, a: Letter) -> Option<BaseLetter> {
        self.base.get(a.index()).copied()
    }

    pub fn letter(&self, b: BaseLetter) -> Letter {
        Letter(self.index[&b] as u32)
    }

    pub fn hash(&self) -> Letter {
        self.letter(BaseLetter::Hash)
    }

    pub fn amb_letter(&self, a: Letter, b: Letter) -> Option<Letter> {
        self.amb_index.get(&(a, b)).copied()
    }

    pub fn word(&self, letters: Vec<Letter>) -> Word {
        Word::new(self.alphabet.clone(), letters)
    }

    /// Whether `c` is a configuration with both decorations in range.
    pub fn is_valid_config(&self, c: &Config) -> bool {
        let delta = self.tm.delta();
        let len = c.tape.len();
        if c.head >= len || c.incoming >= delta.len() || c.tape.iter().any(|&a| a >= self.tm.gamma().len()) {
            return false;
        }
        let inc = delta[c.incoming];
        if inc.to != c.state || self.tm.transition(c.state, c.tape[c.head]) != Some(c.outgoing) {
            return false;
        }
        let Some(back) = shift(c.head, inc.dir.opposite(), len) else { return false };
        c.tape[back] == inc.write && shift(c.head, delta[c.outgoing].dir, len).is_some()
    }

    pub fn encode_config(&self, c: &Config) -> Vec<Letter> {
        let delta = self.tm.delta();
        let len = c.tape.len();
        let mut cells: Vec<BaseLetter> = c.tape.iter().map(|&a| BaseLetter::Plain(a)).collect();
        cells[c.head] = BaseLetter::Head(c.state, c.tape[c.head]);
        let back = shift(c.head, delta[c.incoming].dir.opposite(), len).expect("valid config");
        let next = shift(c.head, delta[c.outgoing].dir, len).expect("valid config");
        cells[back] = BaseLetter::Sub(c.incoming, c.tape[back]);
        cells[next] = if next == back {
            BaseLetter::SubSup(c.incoming, c.tape[next], c.outgoing)
        } else {
            BaseLetter::Sup(c.tape[next], c.outgoing)
        };
        cells.into_iter().map(|b| self.letter(b)).collect()
    }

    /// Reads a configuration off a base word, if it is a configuration word.
    pub fn decode_config(&self, w: &[Letter]) -> Option<Config> {
        let cells: Vec<BaseLetter> = w.iter().map(|&a| self.base_letter(a)).collect::<Option<_>>()?;
        let mut head = None;
        let (mut incoming, mut outgoing) = (None, None);
        for (i, b) in cells.iter().enumerate() {
            let (sub, sup) = match *b {
                BaseLetter::Hash => return None,
                BaseLetter::Head(q, _) => {
                    if head.replace((i, q)).is_some() {
                        return None;
                    }
                    (None, None)
                }
                BaseLetter::Plain(_) => (None, None),
                BaseLetter::Sub(t, _) => (Some(t), None),
                BaseLetter::Sup(_, t) => (None, Some(t)),
                BaseLetter::SubSup(t, _, u) => (Some(t), Some(u)),
            };
            if sub.is_some() && incoming.replace(sub).is_some() {
                return None;
            }
            if sup.is_some() && outgoing.replace(sup).is_some() {
                return None;
            }
        }
        let (head, state) = head?;
        let c = Config {
            tape: cells.iter().map(|b| b.tape().expect("no hash")).collect(),
            head,
            state,
            incoming: incoming??,
            outgoing: outgoing??,
        };
        (self.is_valid_config(&c) && self.encode_config(&c) == w).then_some(c)
    }

    /// `Some((type, head))` iff `w` is a configuration word.
    pub fn is_config_word(&self, w: &[Letter]) -> Option<(u8, usize)> {
        self.decode_config(w).map(|c| (self.tm.state_type(c.state), c.head))
    }

    pub fn config_type(&self, c: &Config) -> u8 {
        self.tm.state_type(c.state)
    }

    /// Every configuration on a tape of length `len`, in a fixed order.
    pub fn configs_of_length(&self, len: usize) -> Vec<Config> {
        let g = self.tm.gamma().len();
        let mut out = Vec::new();
        let total = g.checked_pow(len as u32).expect("tape small enough");
        for code in 0..total {
            let tape: Vec<usize> = (0..len).map(|i| code / g.pow(i as u32) % g).collect();
            for head in 0..len {
                for state in 0..self.tm.states().len() {
                    let Some(outgoing) = self.tm.transition(state, tape[head]) else { continue };
                    for incoming in 0..self.tm.delta().len() {
                        let c = Config { tape: tape.clone(), head, state, incoming, outgoing };
                        if self.is_valid_config(&c) {
                            out.push(c);
                        }
                    }
                }
            }
        }
        out
    }

    /// One machine step, keeping decorations. `None` if the successor has no
    /// decorated successor of its own on this tape.
    pub fn step_config(&self, c: &Config) -> Option<Config> {
        let t = self.tm.delta()[c.outgoing];
        let head = shift(c.head, t.dir, c.tape.len())?;
        let mut tape = c.tape.clone();
        tape[c.head] = t.write;
        let outgoing = self.tm.transition(t.to, tape[head])?;
        let next = Config { tape, head, state: t.to, incoming: c.outgoing, outgoing };
        self.is_valid_config(&next).then_some(next)
    }

    pub fn step_word(&self, w: &[Letter]) -> Option<Vec<Letter>> {
        let c = self.decode_config(w)?;
        self.step_config(&c).map(|n| self.encode_config(&n))
    }

    /// The least common upper bound of base words of equal length.
    pub fn superpose_all(&self, words: &[&[Letter]]) -> Result<Option<Vec<Letter>>> {
        let Some(first) = words.first() else { return Ok(Some(Vec::new())) };
        if words.iter().any(|w| w.len() != first.len()) {
            return Err(Error::Invalid("superposed words must have the same length".into()));
        }
        let mut out = Vec::with_capacity(first.len());
        for i in 0..first.len() {
            let mut here: Vec<Letter> = words.iter().map(|w| w[i]).collect();
            here.sort_unstable();
            here.dedup();
            out.push(match here[..] {
                [a] => a,
                [a, b] => match self.amb_letter(a, b) {
                    Some(l) => l,
                    None => return Ok(None),
                },
                _ => return Ok(None),
            });
        }
        Ok(Some(out))
    }

    pub fn superpose(&self, u1: &[Letter], u2: &[Letter]) -> Result<Option<Vec<Letter>>> {
        self.superpose_all(&[u1, u2])
    }

    pub fn can_superpose(&self, u1: &[Letter], u2: &[Letter]) -> Result<bool> {
        Ok(self.superpose(u1, u2)?.is_some())
    }

    /// Steps before [`Reduction::step_config`] fails, or `None` past `fuel`.
    pub fn height(&self, c: &Config, fuel: usize) -> Option<usize> {
        let mut cur = c.clone();
        for h in 0..=fuel {
            match self.step_config(&cur) {
                Some(next) => cur = next,
                None => return Some(h),
            }
        }
        None
    }

    /// The configuration cut down to the cells within distance `n` of the
    /// head.
    pub fn n_approx(&self, c: &Config, n: usize) -> Config {
        let lo = c.head.saturating_sub(n);
        let hi = (c.head + n + 1).min(c.tape.len());
        Config { tape: c.tape[lo..hi].to_vec(), head: c.head - lo, ..c.clone() }
    }

    /// `Γ* w Γ*` for each core `w` of a configuration of type `i`.
    pub fn config_nfa(&self, i: u8) -> &Nfa {
        self.configs[i as usize - 1].get_or_init(|| self.build_config_nfa(i))
    }

    fn build_config_nfa(&self, i: u8) -> Nfa {
        let delta = self.tm.delta();
        let g = self.tm.gamma().len();
        let plain: Vec<Letter> = (0..g).map(|a| self.letter(BaseLetter::Plain(a))).collect();
        let mut cores: Vec<Vec<Letter>> = Vec::new();
        for q in (0..self.tm.states().len()).filter(|&q| self.tm.state_type(q) == i) {
            for c in 0..g {
                let Some(out) = self.tm.transition(q, c) else { continue };
                let head = self.letter(BaseLetter::Head(q, c));
                for (inc, t) in delta.iter().enumerate().filter(|(_, t)| t.to == q) {
                    let a = t.write;
                    if delta[out].dir == t.dir {
                        for b in 0..g {
                            let sub = self.letter(BaseLetter::Sub(inc, a));
                            let sup = self.letter(BaseLetter::Sup(b, out));
                            cores.push(match t.dir {
                                Dir::R => vec![sub, head, sup],
                                Dir::L => vec![sup, head, sub],
                            });
                        }
                    } else {
                        let both = self.letter(BaseLetter::SubSup(inc, a, out));
                        cores.push(match t.dir {
                            Dir::R => vec![both, head],
                            Dir::L => vec![head, both],
                        });
                    }
                }
            }
        }
        let mut trans = Vec::new();
        for &p in &plain {
            trans.push((0, p, 0));
            trans.push((1, p, 1));
        }
        let mut next = 2;
        for core in &cores {
            let mut from = 0;
            for (k, &a) in core.iter().enumerate() {
                let to = if k + 1 == core.len() { 1 } else { next };
                if to == next {
                    next += 1;
                }
                trans.push((from, a, to));
                from = to;
            }
        }
        Nfa::new(self.alphabet.clone(), next, &[0], &[1], &trans).expect("well-formed")
    }

    /// `(ε + C3# + C2#C3#)(C1#C2#C3#)*(C1 + C1#C2 + C1#C2#C3)`.
    pub fn l_base(&self) -> &Nfa {
        self.l_base.get_or_init(|| {
            let alph = self.alphabet.clone();
            let h = Nfa::letter_set(alph.clone(), &[self.hash()]);
            let c = |i: u8| self.config_nfa(i).clone();
            let cat = |parts: &[&Nfa]| {
                parts[1..].iter().fold(parts[0].clone(), |acc, p| acc.concat(p).expect("same alphabet"))
            };
            let union = |parts: &[Nfa]| {
                parts[1..].iter().fold(parts[0].clone(), |acc, p| acc.union(p).expect("same alphabet"))
            };
            let (c1, c2, c3) = (c(1), c(2), c(3));
            let prefix = union(&[Nfa::epsilon(alph), cat(&[&c3, &h]), cat(&[&c2, &h, &c3, &h])]);
            let middle = cat(&[&c1, &h, &c2, &h, &c3, &h]).star();
            let suffix = union(&[c1.clone(), cat(&[&c1, &h, &c2]), cat(&[&c1, &h, &c2, &h, &c3])]);
            cat(&[&prefix, &middle, &suffix]).trim()
        })
    }

    /// The monotone closure of [`Reduction::l_base`].
    pub fn l_m(&self) -> &Nfa {
        self.l_m.get_or_init(|| self.l_base().monotone_closure().trim())
    }
}

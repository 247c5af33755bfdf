//! Deterministic Turing machines with states split into three types.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    L,
    R,
}

impl Dir {
    pub fn offset(self) -> isize {
        match self {
            Dir::L => -1,
            Dir::R => 1,
        }
    }

    pub fn opposite(self) -> Dir {
        match self {
            Dir::L => Dir::R,
            Dir::R => Dir::L,
        }
    }

    pub fn parse(s: &str) -> Result<Dir> {
        match s {
            "L" => Ok(Dir::L),
            "R" => Ok(Dir::R),
            _ => Err(Error::Invalid(format!("direction must be L or R, got `{s}`"))),
        }
    }
}

/// `(from, read, to, write, dir)` over state and tape-letter indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub from: usize,
    pub read: usize,
    pub to: usize,
    pub write: usize,
    pub dir: Dir,
}

/// A machine whose states are not yet split into types.
#[derive(Clone, Debug)]
pub struct RawMachine {
    pub gamma: Vec<String>,
    pub states: Vec<String>,
    pub delta: Vec<Transition>,
}

/// A deterministic machine whose transitions go from type 1 to 2, 2 to 3 and
/// 3 to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TuringMachine {
    gamma: Vec<String>,
    states: Vec<String>,
    types: Vec<u8>,
    delta: Vec<Transition>,
}

/// Characters reserved by letter names of the reduction alphabet.
const RESERVED: &[char] = &['[', ']', '{', '}', '|', '#', '_', '^', '.', ',', '(', ')', '"'];

fn check_name(kind: &str, name: &str) -> Result<()> {
    if name.is_empty() || name.chars().any(|c| c.is_whitespace() || RESERVED.contains(&c)) {
        return Err(Error::Invalid(format!("{kind} name `{name}` is empty or uses a reserved character")));
    }
    Ok(())
}

fn lookup(names: &[String], kind: &str, name: &str) -> Result<usize> {
    names
        .iter()
        .position(|n| n == name)
        .ok_or_else(|| Error::Invalid(format!("unknown {kind} `{name}`")))
}

fn check_deterministic(delta: &[Transition]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for t in delta {
        if !seen.insert((t.from, t.read)) {
            return Err(Error::Invalid(format!("two transitions from state {} reading {}", t.from, t.read)));
        }
    }
    Ok(())
}

fn parse_transitions<S: AsRef<str>>(
    gamma: &[String],
    states: &[String],
    delta: &[[S; 5]],
) -> Result<Vec<Transition>> {
    delta
        .iter()
        .map(|[p, a, q, b, d]| {
            Ok(Transition {
                from: lookup(states, "state", p.as_ref())?,
                read: lookup(gamma, "tape letter", a.as_ref())?,
                to: lookup(states, "state", q.as_ref())?,
                write: lookup(gamma, "tape letter", b.as_ref())?,
                dir: Dir::parse(d.as_ref())?,
            })
        })
        .collect()
}

impl RawMachine {
    pub fn new<S: AsRef<str>>(gamma: &[S], states: &[S], delta: &[[S; 5]]) -> Result<RawMachine> {
        let gamma: Vec<String> = gamma.iter().map(|s| s.as_ref().to_string()).collect();
        let states: Vec<String> = states.iter().map(|s| s.as_ref().to_string()).collect();
        for g in &gamma {
            check_name("tape letter", g)?;
        }
        for s in &states {
            check_name("state", s)?;
        }
        let delta = parse_transitions(&gamma, &states, delta)?;
        check_deterministic(&delta)?;
        Ok(RawMachine { gamma, states, delta })
    }

    pub fn transition(&self, state: usize, read: usize) -> Option<&Transition> {
        self.delta.iter().find(|t| t.from == state && t.read == read)
    }

    /// Steps taken from a configuration before halting or leaving the tape,
    /// capped at `fuel`.
    pub fn run_length(&self, tape: &[usize], head: usize, state: usize, fuel: usize) -> usize {
        run_length(tape, head, state, fuel, |q, a| self.transition(q, a).copied())
    }
}

fn run_length(
    tape: &[usize],
    mut head: usize,
    mut state: usize,
    fuel: usize,
    trans: impl Fn(usize, usize) -> Option<Transition>,
) -> usize {
    let mut tape = tape.to_vec();
    for steps in 0..fuel {
        let Some(t) = trans(state, tape[head]) else { return steps };
        let next = head as isize + t.dir.offset();
        if next < 0 || next as usize >= tape.len() {
            return steps;
        }
        tape[head] = t.write;
        head = next as usize;
        state = t.to;
    }
    fuel
}

/// Splits every state into three typed copies `p/1`, `p/2`, `p/3`, each
/// transition moving to the next copy. Run lengths are unchanged.
pub fn normalize_types(m: &RawMachine) -> Result<TuringMachine> {
    check_deterministic(&m.delta)?;
    let k = m.states.len();
    let states = (1..=3).flat_map(|i| m.states.iter().map(move |s| format!("{s}/{i}"))).collect();
    let types = (1..=3u8).flat_map(|i| std::iter::repeat_n(i, k)).collect();
    let delta = (0..3)
        .flat_map(|i| {
            m.delta.iter().map(move |t| Transition {
                from: t.from + i * k,
                to: t.to + ((i + 1) % 3) * k,
                ..*t
            })
        })
        .collect();
    TuringMachine::from_parts(m.gamma.clone(), states, types, delta)
}

impl TuringMachine {
    /// A typed machine from names; `types[i]` lists the states of type `i + 1`.
    pub fn new<S: AsRef<str>>(gamma: &[S], types: [&[S]; 3], delta: &[[S; 5]]) -> Result<TuringMachine> {
        let gamma: Vec<String> = gamma.iter().map(|s| s.as_ref().to_string()).collect();
        let mut states = Vec::new();
        let mut state_types = Vec::new();
        for (i, qs) in types.iter().enumerate() {
            for q in *qs {
                states.push(q.as_ref().to_string());
                state_types.push(i as u8 + 1);
            }
        }
        let delta = parse_transitions(&gamma, &states, delta)?;
        TuringMachine::from_parts(gamma, states, state_types, delta)
    }

    fn from_parts(gamma: Vec<String>, states: Vec<String>, types: Vec<u8>, delta: Vec<Transition>) -> Result<Self> {
        for g in &gamma {
            check_name("tape letter", g)?;
        }
        for s in &states {
            check_name("state", s)?;
        }
        let distinct: BTreeSet<&String> = states.iter().chain(&gamma).collect();
        if distinct.len() != states.len() + gamma.len() {
            return Err(Error::Invalid("state and tape letter names must all be distinct".into()));
        }
        check_deterministic(&delta)?;
        for t in &delta {
            if types[t.to] != types[t.from] % 3 + 1 {
                return Err(Error::Invalid(format!(
                    "transition from {} (type {}) to {} (type {}) breaks the type cycle",
                    states[t.from], types[t.from], states[t.to], types[t.to]
                )));
            }
        }
        Ok(TuringMachine { gamma, states, types, delta })
    }

    pub fn gamma(&self) -> &[String] {
        &self.gamma
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn delta(&self) -> &[Transition] {
        &self.delta
    }

    /// Type in `1..=3` of a state.
    pub fn state_type(&self, q: usize) -> u8 {
        self.types[q]
    }

    pub fn transition(&self, state: usize, read: usize) -> Option<usize> {
        self.delta.iter().position(|t| t.from == state && t.read == read)
    }

    pub fn run_length(&self, tape: &[usize], head: usize, state: usize, fuel: usize) -> usize {
        run_length(tape, head, state, fuel, |q, a| self.transition(q, a).map(|i| self.delta[i]))
    }

    /// `δ_i = (q_i, 0, q_{i+1}, 0, R)` over `Γ = {0}`: runs right until the
    /// tape ends, so it is not mortal.
    pub fn right_mover() -> TuringMachine {
        TuringMachine::new(
            &["0"],
            [&["q1"], &["q2"], &["q3"]],
            &[["q1", "0", "q2", "0", "R"], ["q2", "0", "q3", "0", "R"], ["q3", "0", "q1", "0", "R"]],
        )
        .expect("valid machine")
    }

    /// A mortal machine over `{0, 1}` that bounces once and halts on the 1
    /// it wrote: no run is longer than four steps.
    pub fn bounce() -> TuringMachine {
        TuringMachine::new(
            &["0", "1"],
            [&["p"], &["q"], &["r"]],
            &[
                ["p", "0", "q", "1", "R"],
                ["q", "0", "r", "1", "L"],
                ["q", "1", "r", "1", "L"],
                ["r", "1", "p", "1", "R"],
            ],
        )
        .expect("valid machine")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_state_machine_triples() {
        let raw = RawMachine::new(&["0"], &["s"], &[["s", "0", "s", "0", "R"]]).unwrap();
        let tm = normalize_types(&raw).unwrap();
        assert_eq!(tm.states(), ["s/1", "s/2", "s/3"]);
        let cycle: Vec<(usize, usize)> = tm.delta().iter().map(|t| (t.from, t.to)).collect();
        assert_eq!(cycle, vec![(0, 1), (1, 2), (2, 0)]);
    }

    #[test]
    fn typing_preserves_run_lengths() {
        let raw = RawMachine::new(
            &["0", "1"],
            &["s", "t"],
            &[["s", "0", "t", "1", "R"], ["t", "0", "s", "0", "L"], ["s", "1", "s", "0", "R"]],
        )
        .unwrap();
        let tm = normalize_types(&raw).unwrap();
        for len in 1..=5usize {
            for bits in 0..1u32 << len {
                let tape: Vec<usize> = (0..len).map(|i| (bits >> i) as usize & 1).collect();
                for head in 0..len {
                    for state in 0..2 {
                        assert_eq!(raw.run_length(&tape, head, state, 20), tm.run_length(&tape, head, state, 20));
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_bad_machines() {
        assert!(RawMachine::new(&["0"], &["s"], &[["s", "0", "s", "0", "R"], ["s", "0", "s", "0", "L"]]).is_err());
        assert!(TuringMachine::new(&["0"], [&["p"], &["q"], &[]], &[["p", "0", "p", "0", "R"]]).is_err());
        assert!(TuringMachine::new(&["#"], [&["p"], &[], &[]], &[]).is_err());
    }

    #[test]
    fn bounce_is_mortal() {
        let tm = TuringMachine::bounce();
        let mut longest = 0;
        for len in 1..=7usize {
            for bits in 0..1u32 << len {
                let tape: Vec<usize> = (0..len).map(|i| (bits >> i) as usize & 1).collect();
                for head in 0..len {
                    for state in 0..3 {
                        longest = longest.max(tm.run_length(&tape, head, state, 50));
                    }
                }
            }
        }
        assert_eq!(longest, 4);
    }
}

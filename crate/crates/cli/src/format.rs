//! JSON file formats and loaders that report the failing path and position.

use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use posfo::graphs::Graph;
use posfo::mortality::{normalize_types, RawMachine, TuringMachine};
use posfo::{klang, Formula, Mode, Nfa, OrderedAlphabet, Word};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

/// Version stamped on every JSON document the tool writes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlphabetSpec {
    Powerset {
        powerset_of: Vec<String>,
    },
    Explicit {
        letters: Vec<String>,
        /// Pairs `[a, b]` meaning `a ≤ b`.
        #[serde(default)]
        order: Vec<(String, String)>,
    },
}

impl AlphabetSpec {
    pub fn build(&self) -> Result<Arc<OrderedAlphabet>> {
        let alphabet = match self {
            AlphabetSpec::Powerset { powerset_of } => OrderedAlphabet::powerset(powerset_of)?,
            AlphabetSpec::Explicit { letters, order } => OrderedAlphabet::new(letters, order)?,
        };
        Ok(Arc::new(alphabet))
    }

    pub fn of(alphabet: &OrderedAlphabet) -> AlphabetSpec {
        match alphabet.predicates() {
            Some(p) => AlphabetSpec::Powerset { powerset_of: p.to_vec() },
            None => AlphabetSpec::Explicit { letters: alphabet.names().to_vec(), order: alphabet.cover_pairs() },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NfaSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<u32>,
    pub alphabet: AlphabetSpec,
    pub states: usize,
    pub initial: Vec<usize>,
    #[serde(rename = "final")]
    pub accepting: Vec<usize>,
    pub transitions: Vec<(usize, String, usize)>,
}

impl NfaSpec {
    pub fn build(&self) -> Result<Nfa> {
        let alphabet = self.alphabet.build()?;
        let transitions = self
            .transitions
            .iter()
            .map(|(p, a, q)| Ok((*p, alphabet.letter(a)?, *q)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Nfa::new(alphabet, self.states, &self.initial, &self.accepting, &transitions)?)
    }

    pub fn of(nfa: &Nfa) -> NfaSpec {
        let alphabet = nfa.alphabet();
        NfaSpec {
            v: Some(SCHEMA_VERSION),
            alphabet: AlphabetSpec::of(alphabet),
            states: nfa.state_count(),
            initial: nfa.initial().iter().map(|&q| q as usize).collect(),
            accepting: nfa.accepting_states().collect(),
            transitions: nfa.transitions().map(|(p, a, q)| (p, alphabet.name(a).to_string(), q)).collect(),
        }
    }
}

/// A word file: a bare array of letter names, or one bundled with its
/// alphabet.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WordSpec {
    Names(Vec<String>),
    WithAlphabet { alphabet: AlphabetSpec, word: Vec<String> },
}

impl WordSpec {
    /// The word, over its own alphabet, `fallback`, or `P({a,b,c})`.
    pub fn build(&self, fallback: Option<&Arc<OrderedAlphabet>>) -> Result<Word> {
        match self {
            WordSpec::Names(names) => {
                let alphabet = fallback.cloned().unwrap_or_else(klang::alphabet);
                Ok(Word::from_names(&alphabet, names)?)
            }
            WordSpec::WithAlphabet { alphabet, word } => Ok(Word::from_names(&alphabet.build()?, word)?),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<u32>,
    pub directed: bool,
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(default)]
    pub sources: Vec<usize>,
}

impl GraphSpec {
    pub fn build(&self) -> Result<Graph> {
        let mut g = Graph::from_edges(self.vertices, self.directed, &self.edges)?;
        if let Some(&s) = self.sources.iter().find(|&&s| s >= self.vertices) {
            bail!("source {s} is not a vertex");
        }
        g.set_sources(self.sources.clone());
        Ok(g)
    }

    pub fn of(g: &Graph) -> GraphSpec {
        GraphSpec {
            v: Some(SCHEMA_VERSION),
            directed: g.is_directed(),
            vertices: g.vertex_count(),
            edges: g.edges(),
            sources: g.sources().to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypedStates {
    #[serde(rename = "Q1")]
    pub q1: Vec<String>,
    #[serde(rename = "Q2")]
    pub q2: Vec<String>,
    #[serde(rename = "Q3")]
    pub q3: Vec<String>,
}

/// States split into the three types, or a flat list to be split
/// automatically.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StatesSpec {
    Typed(TypedStates),
    Flat(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MachineSpec {
    pub gamma: Vec<String>,
    pub states: StatesSpec,
    /// `[p, a, q, b, "L" | "R"]`.
    pub delta: Vec<[String; 5]>,
}

impl MachineSpec {
    pub fn build(&self) -> Result<TuringMachine> {
        Ok(match &self.states {
            StatesSpec::Typed(t) => TuringMachine::new(&self.gamma, [&t.q1, &t.q2, &t.q3], &self.delta)?,
            StatesSpec::Flat(states) => normalize_types(&RawMachine::new(&self.gamma, states, &self.delta)?)?,
        })
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("{}: cannot read", path.display()))
}

/// Parses a JSON file, naming the file, line and column on failure.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| anyhow!("{}:{}:{}: {e}", path.display(), e.line(), e.column()))
}

/// `line:column` of a byte offset.
fn line_col(text: &str, pos: usize) -> (usize, usize) {
    let before = &text[..pos.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

pub fn read_formula(path: &Path, mode: Mode) -> Result<Formula> {
    let text = read(path)?;
    Formula::parse(&text, mode).map_err(|e| match e {
        posfo::Error::Parse { pos, msg } => {
            let (line, col) = line_col(&text, pos);
            anyhow!("{}:{line}:{col}: {msg}", path.display())
        }
        other => anyhow!("{}: {other}", path.display()),
    })
}

pub fn read_regex(path: &Path, alphabet: &Arc<OrderedAlphabet>) -> Result<Nfa> {
    let text = read(path)?;
    let regex = posfo::Regex::parse(&text).map_err(|e| match e {
        posfo::Error::Parse { pos, msg } => {
            let (line, col) = line_col(&text, pos);
            anyhow!("{}:{line}:{col}: {msg}", path.display())
        }
        other => anyhow!("{}: {other}", path.display()),
    })?;
    regex.to_nfa(alphabet).with_context(|| path.display().to_string())
}

/// Loads a file and builds its value, prefixing build errors with the path.
pub fn load<S: DeserializeOwned, T>(path: &Path, build: impl FnOnce(S) -> Result<T>) -> Result<T> {
    build(read_json(path)?).with_context(|| path.display().to_string())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text + "\n").with_context(|| format!("{}: cannot write", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_col_counts_from_one() {
        assert_eq!(line_col("ab\ncd", 0), (1, 1));
        assert_eq!(line_col("ab\ncd", 4), (2, 2));
    }

    #[test]
    fn nfa_spec_round_trips() {
        let k = klang::build_k();
        let spec = NfaSpec::of(&k);
        let text = serde_json::to_string(&spec).unwrap();
        let back: NfaSpec = serde_json::from_str(&text).unwrap();
        assert!(back.build().unwrap().equivalent(&k).unwrap());
    }

    #[test]
    fn alphabet_forms() {
        let p: AlphabetSpec = serde_json::from_str(r#"{"powerset_of":["a","b"]}"#).unwrap();
        assert_eq!(p.build().unwrap().len(), 4);
        let e: AlphabetSpec = serde_json::from_str(r#"{"letters":["a","b"],"order":[["a","b"]]}"#).unwrap();
        let alph = e.build().unwrap();
        assert!(alph.leq(alph.letter("a").unwrap(), alph.letter("b").unwrap()));
        assert_eq!(AlphabetSpec::of(&alph), e);
    }
}

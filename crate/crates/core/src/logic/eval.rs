//! Evaluation. Formulas are compiled to a slot-indexed tree once, then
//! evaluated against any [`Model`] with short-circuiting connectives.

use std::collections::BTreeMap;

use super::Formula;
use crate::alphabet::{Letter, OrderedAlphabet, Word};
use crate::error::{Error, Result};

/// Values of free variables.
pub type Valuation = BTreeMap<String, usize>;

/// A finite structure formulas can be evaluated in. Atoms a model does not
/// support are rejected when compiling.
pub trait Model {
    fn size(&self) -> usize;
    fn letter_up(&self, _pos: usize, _letter: Letter) -> bool {
        false
    }
    fn has_pred(&self, _pos: usize, _pred: usize) -> bool {
        false
    }
    fn edge(&self, _x: usize, _y: usize) -> bool {
        false
    }
}

pub struct WordModel<'a> {
    pub alphabet: &'a OrderedAlphabet,
    pub letters: &'a [Letter],
}

impl Model for WordModel<'_> {
    fn size(&self) -> usize {
        self.letters.len()
    }
    fn letter_up(&self, pos: usize, letter: Letter) -> bool {
        self.alphabet.leq(letter, self.letters[pos])
    }
    fn has_pred(&self, pos: usize, pred: usize) -> bool {
        self.alphabet.has_predicate(self.letters[pos], pred)
    }
}

#[derive(Clone, Debug)]
enum Node {
    Const(bool),
    Up(usize, Letter),
    Pred(usize, usize),
    Le(usize, usize),
    Lt(usize, usize),
    Eq(usize, usize),
    Neq(usize, usize),
    Edge(usize, usize),
    And(Vec<Node>),
    Or(Vec<Node>),
    Not(Box<Node>),
    Exists(usize, Box<Node>),
    Forall(usize, Box<Node>),
}

/// A formula resolved against a signature, ready for repeated evaluation.
#[derive(Clone, Debug)]
pub struct Compiled {
    root: Node,
    slots: Vec<String>,
    free: Vec<String>,
}

/// What the target structures provide.
#[derive(Clone, Copy)]
enum Signature<'a> {
    Word(&'a OrderedAlphabet),
    Graph,
}

impl Compiled {
    pub fn for_words(f: &Formula, alphabet: &OrderedAlphabet) -> Result<Compiled> {
        Self::build(f, Signature::Word(alphabet))
    }

    pub fn for_graphs(f: &Formula) -> Result<Compiled> {
        Self::build(f, Signature::Graph)
    }

    fn build(f: &Formula, sig: Signature<'_>) -> Result<Compiled> {
        let mut slots = Vec::new();
        let root = compile(f, sig, &mut slots)?;
        let free = f.free_vars().into_iter().collect();
        Ok(Compiled { root, slots, free })
    }

    pub fn eval<M: Model>(&self, model: &M, valuation: &Valuation) -> Result<bool> {
        let mut env = vec![usize::MAX; self.slots.len()];
        for x in &self.free {
            let value = *valuation.get(x).ok_or_else(|| Error::FreeVariable(x.clone()))?;
            if value >= model.size() {
                return Err(Error::Invalid(format!("`{x}` = {value} is out of range")));
            }
            env[self.slot(x)] = value;
        }
        Ok(eval(&self.root, model, &mut env))
    }

    /// Evaluation of a sentence.
    pub fn holds<M: Model>(&self, model: &M) -> bool {
        debug_assert!(self.free.is_empty());
        let mut env = vec![usize::MAX; self.slots.len()];
        eval(&self.root, model, &mut env)
    }

    fn slot(&self, x: &str) -> usize {
        self.slots.iter().position(|s| s == x).expect("slot exists")
    }
}

fn slot_of(slots: &mut Vec<String>, x: &str) -> usize {
    match slots.iter().position(|s| s == x) {
        Some(i) => i,
        None => {
            slots.push(x.to_string());
            slots.len() - 1
        }
    }
}

fn compile(f: &Formula, sig: Signature<'_>, slots: &mut Vec<String>) -> Result<Node> {
    let word_only = |what: &str| Error::Unsupported(format!("{what} is not available on graphs"));
    Ok(match f {
        Formula::True => Node::Const(true),
        Formula::False => Node::Const(false),
        Formula::LetterUp(a, x) => match sig {
            Signature::Word(alph) => Node::Up(slot_of(slots, x), alph.letter(a)?),
            Signature::Graph => return Err(word_only("a letter atom")),
        },
        Formula::Pred(p, x) => match sig {
            Signature::Word(alph) => Node::Pred(slot_of(slots, x), alph.predicate_index(p)?),
            Signature::Graph => return Err(word_only("a predicate atom")),
        },
        Formula::Le(x, y) | Formula::Lt(x, y) => {
            if matches!(sig, Signature::Graph) {
                return Err(word_only("the position order"));
            }
            let (x, y) = (slot_of(slots, x), slot_of(slots, y));
            if matches!(f, Formula::Le(..)) {
                Node::Le(x, y)
            } else {
                Node::Lt(x, y)
            }
        }
        Formula::EqVar(x, y) => Node::Eq(slot_of(slots, x), slot_of(slots, y)),
        Formula::NeqVar(x, y) => Node::Neq(slot_of(slots, x), slot_of(slots, y)),
        Formula::Edge(x, y) => match sig {
            Signature::Graph => Node::Edge(slot_of(slots, x), slot_of(slots, y)),
            Signature::Word(_) => {
                return Err(Error::Unsupported("the edge relation is not available on words".into()))
            }
        },
        Formula::And(ps) => {
            Node::And(ps.iter().map(|p| compile(p, sig, slots)).collect::<Result<_>>()?)
        }
        Formula::Or(ps) => {
            Node::Or(ps.iter().map(|p| compile(p, sig, slots)).collect::<Result<_>>()?)
        }
        Formula::Not(g) => Node::Not(Box::new(compile(g, sig, slots)?)),
        Formula::Exists(x, g) => {
            let s = slot_of(slots, x);
            Node::Exists(s, Box::new(compile(g, sig, slots)?))
        }
        Formula::Forall(x, g) => {
            let s = slot_of(slots, x);
            Node::Forall(s, Box::new(compile(g, sig, slots)?))
        }
    })
}

fn eval<M: Model>(node: &Node, m: &M, env: &mut [usize]) -> bool {
    match node {
        Node::Const(b) => *b,
        Node::Up(x, a) => m.letter_up(env[*x], *a),
        Node::Pred(x, p) => m.has_pred(env[*x], *p),
        Node::Le(x, y) => env[*x] <= env[*y],
        Node::Lt(x, y) => env[*x] < env[*y],
        Node::Eq(x, y) => env[*x] == env[*y],
        Node::Neq(x, y) => env[*x] != env[*y],
        Node::Edge(x, y) => m.edge(env[*x], env[*y]),
        Node::And(ps) => ps.iter().all(|p| eval(p, m, env)),
        Node::Or(ps) => ps.iter().any(|p| eval(p, m, env)),
        Node::Not(p) => !eval(p, m, env),
        Node::Exists(x, p) => {
            let saved = env[*x];
            let mut found = false;
            for i in 0..m.size() {
                env[*x] = i;
                if eval(p, m, env) {
                    found = true;
                    break;
                }
            }
            env[*x] = saved;
            found
        }
        Node::Forall(x, p) => {
            let saved = env[*x];
            let mut all = true;
            for i in 0..m.size() {
                env[*x] = i;
                if !eval(p, m, env) {
                    all = false;
                    break;
                }
            }
            env[*x] = saved;
            all
        }
    }
}

/// Evaluates `f` on a word under a valuation of its free variables.
pub fn eval_word(f: &Formula, w: &Word, valuation: &Valuation) -> Result<bool> {
    let c = Compiled::for_words(f, w.alphabet())?;
    c.eval(&WordModel { alphabet: w.alphabet(), letters: w.letters() }, valuation)
}

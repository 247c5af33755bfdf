//! First-order formulas over words and graphs.
//!
//! Atoms are `[a](x)` (the letter at `x` lies in `a↑`), `p(x)` (the letter at
//! `x`, a set of predicates, contains `p`), the order atoms `x<=y`, `x<y`,
//! equality `x=y` / `x!=y` and the edge relation `E(x,y)`. FO⁺ forbids
//! negation; on graphs negation is tolerated above edge-free subformulas.

mod eval;
mod parse;
mod random;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::alphabet::OrderedAlphabet;
use crate::error::{Error, Result};

pub use eval::{eval_word, Compiled, Model, Valuation, WordModel};
pub use random::{random_formula, FormulaGen};

/// Which syntax a parser accepts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Fo,
    FoPlus,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    LetterUp(String, String),
    Pred(String, String),
    Le(String, String),
    Lt(String, String),
    EqVar(String, String),
    NeqVar(String, String),
    Edge(String, String),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Not(Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

use Formula::*;

pub(crate) fn v(s: &str) -> String {
    s.to_string()
}

impl Formula {
    pub fn parse(src: &str, mode: Mode) -> Result<Formula> {
        parse::parse(src, mode)
    }

    pub fn exists(var: &str, body: Formula) -> Formula {
        Exists(v(var), Box::new(body))
    }

    pub fn forall(var: &str, body: Formula) -> Formula {
        Forall(v(var), Box::new(body))
    }

    pub fn exists_many(vars: &[&str], body: Formula) -> Formula {
        vars.iter().rev().fold(body, |acc, x| Formula::exists(x, acc))
    }

    pub fn forall_many(vars: &[&str], body: Formula) -> Formula {
        vars.iter().rev().fold(body, |acc, x| Formula::forall(x, acc))
    }

    pub fn edge(x: &str, y: &str) -> Formula {
        Edge(v(x), v(y))
    }

    pub fn eq(x: &str, y: &str) -> Formula {
        EqVar(v(x), v(y))
    }

    pub fn neq(x: &str, y: &str) -> Formula {
        NeqVar(v(x), v(y))
    }

    pub fn le(x: &str, y: &str) -> Formula {
        Le(v(x), v(y))
    }

    pub fn lt(x: &str, y: &str) -> Formula {
        Lt(v(x), v(y))
    }

    pub fn pred(p: &str, x: &str) -> Formula {
        Pred(v(p), v(x))
    }

    pub fn up(letter: &str, x: &str) -> Formula {
        LetterUp(v(letter), v(x))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Not(Box::new(f))
    }

    /// Conjunction with flattening and unit simplification.
    pub fn and(parts: Vec<Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                True => {}
                False => return False,
                And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => True,
            1 => out.pop().unwrap(),
            _ => And(out),
        }
    }

    /// Disjunction with flattening and unit simplification.
    pub fn or(parts: Vec<Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                False => {}
                True => return True,
                Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => False,
            1 => out.pop().unwrap(),
            _ => Or(out),
        }
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::or(vec![Formula::not(a), b])
    }

    pub fn quantifier_rank(&self) -> usize {
        match self {
            And(ps) | Or(ps) => ps.iter().map(Formula::quantifier_rank).max().unwrap_or(0),
            Not(f) => f.quantifier_rank(),
            Exists(_, f) | Forall(_, f) => 1 + f.quantifier_rank(),
            _ => 0,
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            And(ps) | Or(ps) => 1 + ps.iter().map(Formula::size).sum::<usize>(),
            Not(f) | Exists(_, f) | Forall(_, f) => 1 + f.size(),
            _ => 1,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut see = |x: &String| {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        };
        match self {
            True | False => {}
            LetterUp(_, x) | Pred(_, x) => see(x),
            Le(x, y) | Lt(x, y) | EqVar(x, y) | NeqVar(x, y) | Edge(x, y) => {
                see(x);
                see(y);
            }
            And(ps) | Or(ps) => {
                for p in ps {
                    p.collect_free(bound, out);
                }
            }
            Not(f) => f.collect_free(bound, out),
            Exists(x, f) | Forall(x, f) => {
                bound.push(x.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// FO⁺ over words: no negation at all.
    pub fn is_positive(&self) -> bool {
        match self {
            Not(_) => false,
            And(ps) | Or(ps) => ps.iter().all(Formula::is_positive),
            Exists(_, f) | Forall(_, f) => f.is_positive(),
            _ => true,
        }
    }

    /// FO⁺ over graphs: negation only above edge-free subformulas.
    pub fn is_positive_graph(&self) -> bool {
        match self {
            Not(f) => !f.mentions_edge(),
            And(ps) | Or(ps) => ps.iter().all(Formula::is_positive_graph),
            Exists(_, f) | Forall(_, f) => f.is_positive_graph(),
            _ => true,
        }
    }

    fn mentions_edge(&self) -> bool {
        match self {
            Edge(..) => true,
            And(ps) | Or(ps) => ps.iter().any(Formula::mentions_edge),
            Not(f) | Exists(_, f) | Forall(_, f) => f.mentions_edge(),
            _ => false,
        }
    }

    /// Negation normal form: negations pushed to atoms, `!(x=y)` becomes
    /// `x!=y` and vice versa.
    pub fn nnf(&self) -> Formula {
        self.push_neg(false)
    }

    fn push_neg(&self, neg: bool) -> Formula {
        match (self, neg) {
            (Not(f), _) => f.push_neg(!neg),
            (And(ps), false) => Formula::and(ps.iter().map(|p| p.push_neg(false)).collect()),
            (And(ps), true) => Formula::or(ps.iter().map(|p| p.push_neg(true)).collect()),
            (Or(ps), false) => Formula::or(ps.iter().map(|p| p.push_neg(false)).collect()),
            (Or(ps), true) => Formula::and(ps.iter().map(|p| p.push_neg(true)).collect()),
            (Exists(x, f), false) => Exists(x.clone(), Box::new(f.push_neg(false))),
            (Exists(x, f), true) => Forall(x.clone(), Box::new(f.push_neg(true))),
            (Forall(x, f), false) => Forall(x.clone(), Box::new(f.push_neg(false))),
            (Forall(x, f), true) => Exists(x.clone(), Box::new(f.push_neg(true))),
            (True, true) => False,
            (False, true) => True,
            (EqVar(x, y), true) => NeqVar(x.clone(), y.clone()),
            (NeqVar(x, y), true) => EqVar(x.clone(), y.clone()),
            (atom, false) => atom.clone(),
            (atom, true) => Formula::not(atom.clone()),
        }
    }

    /// Rewrites an FO formula into an equivalent FO⁺ formula, valid over a
    /// trivially ordered alphabet where `¬a(x)` is the disjunction of the
    /// other letters and the order on positions is total.
    pub fn positivize_trivial_order(&self, alphabet: &Arc<OrderedAlphabet>) -> Result<Formula> {
        if !alphabet.is_trivial() {
            return Err(Error::Unsupported("alphabet order is not trivial".into()));
        }
        self.nnf().positivize_atoms(alphabet)
    }

    fn positivize_atoms(&self, alphabet: &Arc<OrderedAlphabet>) -> Result<Formula> {
        Ok(match self {
            Not(atom) => match atom.as_ref() {
                LetterUp(a, x) => {
                    let a = alphabet.letter(a)?;
                    Formula::or(
                        alphabet
                            .letters()
                            .filter(|&b| b != a)
                            .map(|b| LetterUp(alphabet.name(b).to_string(), x.clone()))
                            .collect(),
                    )
                }
                Le(x, y) => Lt(y.clone(), x.clone()),
                Lt(x, y) => Le(y.clone(), x.clone()),
                other => {
                    return Err(Error::Unsupported(format!("cannot positivize negated `{other}`")))
                }
            },
            NeqVar(x, y) => Formula::or(vec![Lt(x.clone(), y.clone()), Lt(y.clone(), x.clone())]),
            And(ps) => Formula::and(
                ps.iter().map(|p| p.positivize_atoms(alphabet)).collect::<Result<Vec<_>>>()?,
            ),
            Or(ps) => Formula::or(
                ps.iter().map(|p| p.positivize_atoms(alphabet)).collect::<Result<Vec<_>>>()?,
            ),
            Exists(x, f) => Exists(x.clone(), Box::new(f.positivize_atoms(alphabet)?)),
            Forall(x, f) => Forall(x.clone(), Box::new(f.positivize_atoms(alphabet)?)),
            atom => atom.clone(),
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Exists(..) | Forall(..) => 0,
            Or(ps) if ps.len() >= 2 => 1,
            And(ps) if ps.len() >= 2 => 2,
            And(ps) | Or(ps) if ps.len() == 1 => ps[0].precedence(),
            _ => 3,
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            True => f.write_str("true"),
            False => f.write_str("false"),
            LetterUp(a, x) => write!(f, "[{a}]({x})"),
            Pred(p, x) => write!(f, "{p}({x})"),
            Le(x, y) => write!(f, "{x}<={y}"),
            Lt(x, y) => write!(f, "{x}<{y}"),
            EqVar(x, y) => write!(f, "{x}={y}"),
            NeqVar(x, y) => write!(f, "{x}!={y}"),
            Edge(x, y) => write!(f, "E({x},{y})"),
            And(ps) | Or(ps) if ps.is_empty() => {
                f.write_str(if matches!(self, And(_)) { "true" } else { "false" })
            }
            And(ps) | Or(ps) if ps.len() == 1 => write!(f, "{}", ps[0]),
            And(ps) | Or(ps) => {
                let (sep, level) = if matches!(self, And(_)) { (" & ", 3) } else { (" | ", 2) };
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    p.fmt_child(f, level)?;
                }
                Ok(())
            }
            Not(g) => {
                f.write_str("!")?;
                g.fmt_child(f, 3)
            }
            Exists(x, g) | Forall(x, g) => {
                let q = if matches!(self, Exists(..)) { "exists" } else { "forall" };
                write!(f, "{q} {x}. {g}")
            }
        }
    }
}

//! Words as directed graphs.
//!
//! Three sources `x_a, x_b, x_c` induce the edges `x_a→x_b`, `x_b→x_c`,
//! `x_c→x_b`. Every other vertex is a square; squares form a transitive
//! tournament giving the word order, and `x_α→s` means `α` holds at `s`.

use super::{Graph, Translation};
use crate::alphabet::{Letter, Word};
use crate::error::{Error, Result};
use crate::logic::Formula;

/// Variable names of the sources in the formulas of this module.
pub const SOURCE_VARS: [&str; 3] = ["xa", "xb", "xc"];

/// Source-to-source edges, as indices into the source triple.
const SOURCE_EDGES: [(usize, usize); 3] = [(0, 1), (1, 2), (2, 1)];

/// A membership rule for the encodable graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiRule {
    Sources,
    InEdge,
    Cycle,
    Order,
    Direction,
}

impl DiRule {
    pub fn name(self) -> &'static str {
        match self {
            DiRule::Sources => "sources",
            DiRule::InEdge => "in-edge",
            DiRule::Cycle => "cycle",
            DiRule::Order => "order",
            DiRule::Direction => "direction",
        }
    }
}

fn abc_alphabet_check(u: &Word) -> Result<()> {
    match u.alphabet().predicates() {
        Some(p) if p == ["a", "b", "c"] => Ok(()),
        _ => Err(Error::AlphabetMismatch),
    }
}

/// The canonical encoding: sources `0, 1, 2`, then one square per position.
pub fn encode_digraph(u: &Word) -> Result<Graph> {
    abc_alphabet_check(u)?;
    if u.letters().first().is_some_and(|a| a.0 == 0) {
        return Err(Error::Invalid("the first letter must not be {}".into()));
    }
    let n = 3 + u.len();
    let mut g = Graph::new(n, true);
    for (x, y) in SOURCE_EDGES {
        g.add_edge(x, y);
    }
    for (i, &a) in u.letters().iter().enumerate() {
        for k in 0..3 {
            if a.0 & (1 << k) != 0 {
                g.add_edge(k, 3 + i);
            }
        }
        for j in i + 1..u.len() {
            g.add_edge(3 + i, 3 + j);
        }
    }
    g.set_sources(vec![0, 1, 2]);
    Ok(g)
}

/// The designated sources, or the unique triple the rules allow: `x_a` has
/// no in-edge and `x_b, x_c` form the only 2-cycle, `x_b` being the one
/// `x_a` points to.
pub fn find_sources(g: &Graph) -> Option<[usize; 3]> {
    if let [a, b, c] = *g.sources() {
        return Some([a, b, c]);
    }
    let n = g.vertex_count();
    let no_in: Vec<usize> = (0..n).filter(|&y| (0..n).all(|x| !g.has_edge(x, y))).collect();
    let [xa] = no_in[..] else { return None };
    let xb = g.neighbours(xa).find(|&y| y != xa)?;
    let xc = g.neighbours(xb).find(|&z| z != xb && g.has_edge(z, xb))?;
    Some([xa, xb, xc])
}

/// The first rule `g` breaks with the given sources, if any.
pub fn check_digraph_with(g: &Graph, src: [usize; 3]) -> Option<DiRule> {
    let n = g.vertex_count();
    if !g.is_directed() || src.iter().any(|&s| s >= n) || src[0] == src[1] || src[1] == src[2] || src[0] == src[2]
    {
        return Some(DiRule::Sources);
    }
    for i in 0..3 {
        for j in 0..3 {
            if g.has_edge(src[i], src[j]) != SOURCE_EDGES.contains(&(i, j)) {
                return Some(DiRule::Sources);
            }
        }
    }
    for y in 0..n {
        let has_in = (0..n).any(|x| g.has_edge(x, y));
        if has_in == (y == src[0]) {
            return Some(DiRule::InEdge);
        }
    }
    let is_source = |x: usize| src.contains(&x);
    for x in 0..n {
        if g.has_edge(x, x) {
            return Some(DiRule::Cycle);
        }
        for y in 0..n {
            if !g.has_edge(x, y) {
                continue;
            }
            let bc = [src[1], src[2]];
            if g.has_edge(y, x) && !(bc.contains(&x) && bc.contains(&y)) {
                return Some(DiRule::Cycle);
            }
            if (0..n).any(|z| g.has_edge(y, z) && g.has_edge(z, x)) {
                return Some(DiRule::Cycle);
            }
        }
    }
    for x in (0..n).filter(|&x| !is_source(x)) {
        for y in (0..n).filter(|&y| !is_source(y) && y != x) {
            if !g.has_edge(x, y) && !g.has_edge(y, x) {
                return Some(DiRule::Order);
            }
        }
    }
    for x in (0..n).filter(|&x| !is_source(x)) {
        if src.iter().any(|&s| g.has_edge(x, s)) {
            return Some(DiRule::Direction);
        }
    }
    None
}

/// The first rule `g` breaks, locating the sources first if none are
/// designated.
pub fn check_digraph(g: &Graph) -> Option<DiRule> {
    match find_sources(g) {
        Some(src) => check_digraph_with(g, src),
        None => Some(DiRule::Sources),
    }
}

pub fn is_gw_digraph(g: &Graph) -> bool {
    check_digraph(g).is_none()
}

/// The word a graph of the class encodes. Squares are ordered by how many
/// squares they point to.
pub fn decode_digraph(g: &Graph) -> Result<Word> {
    let src = find_sources(g).ok_or_else(|| Error::Invalid("no valid choice of sources".into()))?;
    if let Some(rule) = check_digraph_with(g, src) {
        return Err(Error::Invalid(format!("graph breaks rule ({})", rule.name())));
    }
    let mut squares: Vec<usize> = (0..g.vertex_count()).filter(|x| !src.contains(x)).collect();
    squares.sort_by_key(|&x| std::cmp::Reverse(g.neighbours(x).count()));
    let letters = squares
        .iter()
        .map(|&x| Letter((0..3).filter(|&k| g.has_edge(src[k], x)).map(|k| 1u32 << k).sum()))
        .collect();
    Ok(Word::new(crate::klang::alphabet(), letters))
}

fn source(x: &str) -> Formula {
    Formula::or(SOURCE_VARS.iter().map(|s| Formula::eq(x, s)).collect())
}

fn square(x: &str) -> Formula {
    Formula::and(SOURCE_VARS.iter().map(|s| Formula::neq(x, s)).collect())
}

/// Squares or `x_a`.
fn square_or_a(x: &str) -> Formula {
    Formula::and(vec![Formula::neq(x, "xb"), Formula::neq(x, "xc")])
}

/// `(ψ₋, ψ₊)` with the sources free: a graph with designated sources is in
/// the class iff it satisfies `ψ₋` and not `ψ₊`.
pub fn psi_digraph() -> (Formula, Formula) {
    let e = Formula::edge;
    let mut minus = Vec::new();
    let mut plus = Vec::new();

    let mut off = Vec::new();
    for (i, x) in SOURCE_VARS.into_iter().enumerate() {
        for (j, y) in SOURCE_VARS.into_iter().enumerate() {
            if SOURCE_EDGES.contains(&(i, j)) {
                minus.push(Formula::and(vec![e(x, y), Formula::neq(x, y)]));
            } else {
                off.push(e(x, y));
            }
        }
    }
    plus.push(Formula::or(off));

    minus.push(Formula::forall(
        "y",
        Formula::or(vec![Formula::eq("y", "xa"), Formula::exists("x", e("x", "y"))]),
    ));
    plus.push(Formula::exists("x", e("x", "xa")));

    plus.push(Formula::or(vec![
        Formula::exists("x", e("x", "x")),
        Formula::exists_many(
            &["x", "y"],
            Formula::and(vec![
                Formula::or(vec![square_or_a("x"), square_or_a("y")]),
                e("x", "y"),
                e("y", "x"),
            ]),
        ),
        Formula::exists_many(&["x", "y", "z"], Formula::and(vec![e("x", "y"), e("y", "z"), e("z", "x")])),
    ]));

    minus.push(Formula::forall_many(
        &["x", "y"],
        Formula::or(vec![source("x"), source("y"), Formula::eq("x", "y"), e("x", "y"), e("y", "x")]),
    ));

    plus.push(Formula::exists_many(&["x", "y"], Formula::and(vec![square("x"), source("y"), e("x", "y")])));

    (Formula::and(minus), Formula::or(plus))
}

/// Relativises a word formula over `P({a,b,c})` to the squares of an
/// encoding. Sources stay free.
pub fn translate_digraph(f: &Formula) -> Result<Formula> {
    Translation {
        pred: &|k, x| Formula::edge(SOURCE_VARS[k], x),
        lt: &|x, y| Formula::edge(x, y),
        exists_guard: &square,
        forall_escape: &source,
        reserved: &|x| SOURCE_VARS.contains(&x),
    }
    .apply(f)
}

/// `∃x_a x_b x_c. ψ₋ ∧ ((φ_K)^G ∨ ψ₊)`: a monotone graph property that
/// agrees with `K` on encodings.
pub fn phi_digraph() -> Formula {
    let (minus, plus) = psi_digraph();
    let phi_k = translate_digraph(&crate::klang::phi_k()).expect("φ_K is a word formula");
    Formula::exists_many(&SOURCE_VARS, Formula::and(vec![minus, Formula::or(vec![phi_k, plus])]))
}

//! Words as undirected graphs.
//!
//! Sources form three disjoint cycles of lengths 3, 4 and 5 for `a`, `b`
//! and `c`, and are the only cycles of length at most 5. Squares are the
//! non-sources next to a source. The order is carried by meta-edges: a
//! meta-edge from `x` to `y` is a path `x - d1 - d2 - d3 - y` through fresh
//! diamonds plus a pendant diamond `d4` on `d1` marking the tail.

use super::{cyclic_distance, Graph, Translation};
use crate::alphabet::{Letter, Word};
use crate::error::{Error, Result};
use crate::logic::Formula;

/// Cycle lengths of the `a`, `b`, `c` sources.
pub const CYCLE_LENGTHS: [usize; 3] = [3, 4, 5];
pub const SOURCE_COUNT: usize = 12;

/// Vertex id of the first source of each letter in canonical encodings.
const CYCLE_START: [usize; 3] = [0, 3, 7];

/// Variable names of the sources: `sa0..sa2`, `sb0..sb3`, `sc0..sc4`.
pub fn source_vars() -> Vec<String> {
    (0..3)
        .flat_map(|k| (0..CYCLE_LENGTHS[k]).map(move |i| format!("s{}{i}", ["a", "b", "c"][k])))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum URule {
    Sources,
    Partition,
    Cycle,
    Order,
    Diamonds,
}

impl URule {
    pub fn name(self) -> &'static str {
        match self {
            URule::Sources => "sources",
            URule::Partition => "partition",
            URule::Cycle => "cycle",
            URule::Order => "order",
            URule::Diamonds => "diamonds",
        }
    }
}

/// For each square and letter, the index of its source within that letter's
/// cycle. Squares sharing letters `α ≠ β` through sources at cyclic
/// distances `dα`, `dβ` close a cycle of length `4 + dα + dβ`, so the sum
/// must be at least 2.
fn assign_sources(letters: &[Letter]) -> Option<Vec<[usize; 3]>> {
    fn fits(assigned: &[[usize; 3]], letters: &[Letter], i: usize, cand: &[usize; 3]) -> bool {
        (0..i).all(|j| {
            let shared: Vec<usize> = (0..3).filter(|&k| (letters[i].0 & letters[j].0) & (1 << k) != 0).collect();
            shared.iter().enumerate().all(|(s, &p)| {
                shared[s + 1..].iter().all(|&q| {
                    cyclic_distance(cand[p], assigned[j][p], CYCLE_LENGTHS[p])
                        + cyclic_distance(cand[q], assigned[j][q], CYCLE_LENGTHS[q])
                        >= 2
                })
            })
        })
    }
    fn go(assigned: &mut Vec<[usize; 3]>, letters: &[Letter]) -> bool {
        let i = assigned.len();
        if i == letters.len() {
            return true;
        }
        let range = |k: usize| if letters[i].0 & (1 << k) != 0 { CYCLE_LENGTHS[k] } else { 1 };
        for p in 0..range(0) {
            for q in 0..range(1) {
                for r in 0..range(2) {
                    let cand = [p, q, r];
                    if fits(assigned, letters, i, &cand) {
                        assigned.push(cand);
                        if go(assigned, letters) {
                            return true;
                        }
                        assigned.pop();
                    }
                }
            }
        }
        false
    }
    let mut assigned = Vec::with_capacity(letters.len());
    go(&mut assigned, letters).then_some(assigned)
}

/// The canonical encoding: sources `0..12`, squares in word order, then four
/// diamonds per meta-edge for every pair `i < j`. Fails on `{}` letters and
/// on words whose shared letters cannot be spread over the source cycles
/// without short cycles.
pub fn encode_ugraph(u: &Word) -> Result<Graph> {
    match u.alphabet().predicates() {
        Some(p) if p == ["a", "b", "c"] => {}
        _ => return Err(Error::AlphabetMismatch),
    }
    if u.letters().iter().any(|a| a.0 == 0) {
        return Err(Error::Invalid("the letter {} cannot be encoded".into()));
    }
    let sources = assign_sources(u.letters())
        .ok_or_else(|| Error::Invalid(format!("no source attachment avoids short cycles for `{u}`")))?;
    let len = u.len();
    let n = SOURCE_COUNT + len + 4 * len * len.saturating_sub(1) / 2;
    let mut g = Graph::new(n, false);
    for k in 0..3 {
        for i in 0..CYCLE_LENGTHS[k] {
            g.add_edge(CYCLE_START[k] + i, CYCLE_START[k] + (i + 1) % CYCLE_LENGTHS[k]);
        }
    }
    for (i, a) in u.letters().iter().enumerate() {
        for k in (0..3).filter(|&k| a.0 & (1 << k) != 0) {
            g.add_edge(CYCLE_START[k] + sources[i][k], SOURCE_COUNT + i);
        }
    }
    let mut next = SOURCE_COUNT + len;
    for i in 0..len {
        for j in i + 1..len {
            let (x, y) = (SOURCE_COUNT + i, SOURCE_COUNT + j);
            let d = [next, next + 1, next + 2, next + 3];
            next += 4;
            for (p, q) in [(x, d[0]), (d[0], d[1]), (d[1], d[2]), (d[2], y), (d[0], d[3])] {
                g.add_edge(p, q);
            }
        }
    }
    g.set_sources((0..SOURCE_COUNT).collect());
    Ok(g)
}

/// Vertex roles computed from designated sources.
struct Roles {
    source: Vec<bool>,
    square: Vec<bool>,
    diamond: Vec<bool>,
}

fn roles(g: &Graph, src: &[usize]) -> Roles {
    let n = g.vertex_count();
    let mut source = vec![false; n];
    for &s in src {
        source[s] = true;
    }
    let square: Vec<bool> = (0..n).map(|x| !source[x] && src.iter().any(|&s| g.has_edge(s, x))).collect();
    let diamond = (0..n)
        .map(|x| {
            !source[x]
                && g.neighbours(x).any(|m| square[m] || (!source[m] && g.neighbours(m).any(|z| z != x && square[z])))
        })
        .collect();
    Roles { source, square, diamond }
}

/// All embeddings `(x, y, [d1, d2, d3, d4])` of the meta-edge pattern
/// between squares, the diamonds being distinct and neither sources nor
/// squares.
fn meta_edges(g: &Graph, r: &Roles) -> Vec<(usize, usize, [usize; 4])> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    for x in (0..n).filter(|&x| r.square[x]) {
        let free = |d: usize, used: &[usize]| !r.source[d] && !r.square[d] && !used.contains(&d);
        for d1 in g.neighbours(x).filter(|&d| free(d, &[])) {
            for d2 in g.neighbours(d1).filter(|&d| free(d, &[d1])) {
                for d3 in g.neighbours(d2).filter(|&d| free(d, &[d1, d2])) {
                    for d4 in g.neighbours(d1).filter(|&d| free(d, &[d1, d2, d3])) {
                        for y in g.neighbours(d3).filter(|&y| r.square[y]) {
                            out.push((x, y, [d1, d2, d3, d4]));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Whether the meta-edge pattern from `x` to `y` occurs in `g`.
pub fn meta_edge(g: &Graph, x: usize, y: usize) -> bool {
    let r = roles(g, g.sources());
    meta_edges(g, &r).iter().any(|&(a, b, _)| (a, b) == (x, y))
}

pub fn check_ugraph_with(g: &Graph, src: &[usize]) -> Option<URule> {
    let n = g.vertex_count();
    if g.is_directed() || src.len() != SOURCE_COUNT || src.iter().any(|&s| s >= n) {
        return Some(URule::Sources);
    }
    let mut seen = src.to_vec();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != SOURCE_COUNT {
        return Some(URule::Sources);
    }
    for i in 0..SOURCE_COUNT {
        for j in 0..SOURCE_COUNT {
            if g.has_edge(src[i], src[j]) != cycle_edge(i, j) {
                return Some(URule::Sources);
            }
        }
    }
    let r = roles(g, src);
    if (0..n).any(|x| !(r.source[x] || r.square[x] || r.diamond[x]) || (r.square[x] && r.diamond[x])) {
        return Some(URule::Partition);
    }
    if (0..n).any(|x| g.has_edge(x, x)) || (0..n).any(|x| !r.source[x] && short_cycle_from_any(g, x)) {
        return Some(URule::Cycle);
    }
    let metas = meta_edges(g, &r);
    let squares: Vec<usize> = (0..n).filter(|&x| r.square[x]).collect();
    let m = |x: usize, y: usize| metas.iter().any(|&(a, b, _)| (a, b) == (x, y));
    for &x in &squares {
        if m(x, x) {
            return Some(URule::Order);
        }
        for &y in &squares {
            if x != y && (m(x, y) == m(y, x)) {
                return Some(URule::Order);
            }
            for &z in &squares {
                if m(x, y) && m(y, z) && m(z, x) {
                    return Some(URule::Order);
                }
            }
        }
    }
    for (i, a) in metas.iter().enumerate() {
        for b in &metas[i + 1..] {
            if a.2.iter().any(|d| b.2.contains(d)) {
                return Some(URule::Diamonds);
            }
        }
    }
    None
}

/// A short cycle through `x`, whatever its least vertex.
fn short_cycle_from_any(g: &Graph, x: usize) -> bool {
    fn go(g: &Graph, start: usize, path: &mut Vec<usize>) -> bool {
        let last = *path.last().unwrap();
        if path.len() >= 3 && g.has_edge(last, start) {
            return true;
        }
        if path.len() == 5 {
            return false;
        }
        for next in g.neighbours(last) {
            if next != start && !path.contains(&next) {
                path.push(next);
                if go(g, start, path) {
                    return true;
                }
                path.pop();
            }
        }
        false
    }
    go(g, x, &mut vec![x])
}

/// Whether source slots `i`, `j` (in [`source_vars`] order) are consecutive
/// on their cycle.
fn cycle_edge(i: usize, j: usize) -> bool {
    let (ki, ii) = slot(i);
    let (kj, jj) = slot(j);
    ki == kj && cyclic_distance(ii, jj, CYCLE_LENGTHS[ki]) == 1
}

fn slot(i: usize) -> (usize, usize) {
    let k = CYCLE_START.iter().rposition(|&s| s <= i).expect("slot in range");
    (k, i - CYCLE_START[k])
}

pub fn check_ugraph(g: &Graph) -> Option<URule> {
    check_ugraph_with(g, g.sources())
}

/// Membership in the encodable class, for a graph with designated sources.
pub fn is_gw_ugraph(g: &Graph) -> bool {
    check_ugraph(g).is_none()
}

pub fn decode_ugraph(g: &Graph) -> Result<Word> {
    let src = g.sources();
    if let Some(rule) = check_ugraph_with(g, src) {
        return Err(Error::Invalid(format!("graph breaks rule ({})", rule.name())));
    }
    let r = roles(g, src);
    let metas = meta_edges(g, &r);
    let mut squares: Vec<usize> = (0..g.vertex_count()).filter(|&x| r.square[x]).collect();
    squares.sort_by_key(|&x| std::cmp::Reverse(metas.iter().filter(|m| m.0 == x).count()));
    let letters = squares
        .iter()
        .map(|&x| {
            Letter(
                (0..3)
                    .filter(|&k| {
                        (0..CYCLE_LENGTHS[k]).any(|i| g.has_edge(src[CYCLE_START[k] + i], x))
                    })
                    .map(|k| 1u32 << k)
                    .sum(),
            )
        })
        .collect();
    Ok(Word::new(crate::klang::alphabet(), letters))
}

fn is_source(x: &str) -> Formula {
    Formula::or(source_vars().iter().map(|s| Formula::eq(x, s)).collect())
}

fn is_source_of(k: usize, x: &str) -> Formula {
    let vars = source_vars();
    Formula::or(
        (0..CYCLE_LENGTHS[k]).map(|i| Formula::eq(x, &vars[CYCLE_START[k] + i])).collect(),
    )
}

fn non_source(x: &str) -> Formula {
    Formula::and(source_vars().iter().map(|s| Formula::neq(x, s)).collect())
}

/// `□(x)`: a non-source next to a source.
fn square(x: &str) -> Formula {
    let adjacent = Formula::or(source_vars().iter().map(|s| Formula::edge(s, x)).collect());
    Formula::and(vec![non_source(x), adjacent])
}

/// `◊(x)`: a non-source with another square at distance 1, or at distance 2
/// through a non-source.
fn diamond(x: &str) -> Formula {
    Formula::and(vec![
        non_source(x),
        Formula::exists(
            "g_m",
            Formula::and(vec![
                Formula::edge(x, "g_m"),
                Formula::or(vec![
                    square("g_m"),
                    Formula::and(vec![
                        non_source("g_m"),
                        Formula::exists(
                            "g_z",
                            Formula::and(vec![Formula::edge("g_m", "g_z"), Formula::neq("g_z", x), square("g_z")]),
                        ),
                    ]),
                ]),
            ]),
        ),
    ])
}

/// `¬□(x)`, positively, relying on rule (partition).
fn not_square(x: &str) -> Formula {
    Formula::or(vec![is_source(x), diamond(x)])
}

fn distinct(vars: &[&str]) -> Formula {
    let mut parts = Vec::new();
    for (i, x) in vars.iter().enumerate() {
        for y in &vars[i + 1..] {
            parts.push(Formula::neq(x, y));
        }
    }
    Formula::and(parts)
}

/// `∃v1. g1 ∧ ∃v2. g2 ∧ ... ∧ body`, guards placed as early as possible so
/// evaluation prunes.
fn chain(steps: Vec<(String, Formula)>, body: Formula) -> Formula {
    steps
        .into_iter()
        .rev()
        .fold(body, |inner, (v, guard)| Formula::exists(&v, Formula::and(vec![guard, inner])))
}

/// Quantifier steps for the meta-edge pattern from `x` to `y` over diamonds
/// named with `tag`. Endpoints listed in `bind` are quantified as squares
/// along the way.
fn meta_steps(x: &str, y: &str, tag: &str, bind: bool) -> (Vec<String>, Vec<(String, Formula)>) {
    let d: Vec<String> = (1..=4).map(|i| format!("g_{tag}{i}")).collect();
    let e = Formula::edge;
    // With `bind`, `y` is quantified after `d3`, so `d1..d3` are kept apart
    // from it in its own guard.
    let diamond = |i: usize, link: Formula| {
        let mut parts = vec![link, non_source(&d[i]), Formula::neq(&d[i], x)];
        if !bind || i == 3 {
            parts.push(Formula::neq(&d[i], y));
        }
        parts.extend(d[..i].iter().map(|p| Formula::neq(&d[i], p)));
        (d[i].clone(), Formula::and(parts))
    };
    let mut steps = Vec::new();
    if bind {
        steps.push((x.to_string(), square(x)));
    }
    steps.push(diamond(0, e(x, &d[0])));
    steps.push(diamond(1, e(&d[0], &d[1])));
    if bind {
        steps.push(diamond(2, e(&d[1], &d[2])));
        let mut guard = vec![square(y), e(&d[2], y)];
        guard.extend(d[..3].iter().map(|p| Formula::neq(y, p)));
        steps.push((y.to_string(), Formula::and(guard)));
    } else {
        steps.push(diamond(2, Formula::and(vec![e(&d[1], &d[2]), e(&d[2], y)])));
    }
    steps.push(diamond(3, e(&d[0], &d[3])));
    (d, steps)
}

/// `M(x, y)`.
pub fn meta(x: &str, y: &str) -> Formula {
    chain(meta_steps(x, y, "d", false).1, Formula::True)
}

fn exists_squares(vars: &[&str], body: Formula) -> Formula {
    chain(vars.iter().map(|v| (v.to_string(), square(v))).collect(), body)
}

/// `(ψ₋, ψ₊)` with the twelve sources free (see [`source_vars`]).
pub fn psi_ugraph() -> (Formula, Formula) {
    let vars = source_vars();
    let e = Formula::edge;
    let mut minus = Vec::new();
    let mut plus = Vec::new();

    let mut off = Vec::new();
    for i in 0..SOURCE_COUNT {
        for j in 0..SOURCE_COUNT {
            if cycle_edge(i, j) {
                if i < j {
                    minus.push(e(&vars[i], &vars[j]));
                }
            } else if i <= j {
                off.push(e(&vars[i], &vars[j]));
            }
        }
    }
    let refs: Vec<&str> = vars.iter().map(String::as_str).collect();
    minus.push(distinct(&refs));
    plus.push(Formula::or(off));

    minus.push(Formula::forall(
        "x",
        Formula::or(vec![is_source("x"), square("x"), diamond("x")]),
    ));
    plus.push(Formula::exists("x", Formula::and(vec![square("x"), diamond("x")])));

    // A cycle of length 3, 4 or 5 with a non-source vertex `v1`.
    let walk = ["v1", "v2", "v3", "v4", "v5"];
    let mut cycles = vec![Formula::exists("x", e("x", "x"))];
    for len in 3..=5 {
        let mut steps = vec![("v1".to_string(), non_source("v1"))];
        for i in 1..len {
            let mut guard = vec![e(walk[i - 1], walk[i])];
            guard.extend(walk[..i].iter().map(|p| Formula::neq(walk[i], p)));
            steps.push((walk[i].to_string(), Formula::and(guard)));
        }
        cycles.push(chain(steps, e(walk[len - 1], "v1")));
    }
    plus.push(Formula::or(cycles));

    minus.push(Formula::forall_many(
        &["x", "y"],
        Formula::or(vec![
            not_square("x"),
            not_square("y"),
            Formula::eq("x", "y"),
            meta("x", "y"),
            meta("y", "x"),
        ]),
    ));
    plus.push(Formula::or(vec![
        exists_squares(&["x"], meta("x", "x")),
        exists_squares(&["x", "y"], Formula::and(vec![meta("x", "y"), meta("y", "x")])),
        exists_squares(
            &["x", "y", "z"],
            Formula::and(vec![meta("x", "y"), meta("y", "z"), meta("z", "x")]),
        ),
    ]));

    // Two different embeddings of the pattern sharing a diamond.
    let (d, mut steps) = meta_steps("x", "y", "d", true);
    let (f, second) = meta_steps("z", "w", "f", true);
    steps.extend(second);
    let differ = Formula::or(
        [("x", "z"), ("y", "w")]
            .into_iter()
            .map(|(a, b)| Formula::neq(a, b))
            .chain(d.iter().zip(&f).map(|(a, b)| Formula::neq(a, b)))
            .collect(),
    );
    let share = Formula::or(d.iter().flat_map(|a| f.iter().map(move |b| Formula::eq(a, b))).collect());
    plus.push(chain(steps, Formula::and(vec![share, differ])));

    (Formula::and(minus), Formula::or(plus))
}

/// Relativises a word formula to squares, reading the order off
/// meta-edges. Sources stay free.
pub fn translate_ugraph(f: &Formula) -> Result<Formula> {
    let vars = source_vars();
    Translation {
        pred: &|k, x| {
            Formula::exists("g_s", Formula::and(vec![is_source_of(k, "g_s"), Formula::edge("g_s", x)]))
        },
        lt: &meta,
        exists_guard: &square,
        forall_escape: &not_square,
        reserved: &|x| x.starts_with("g_") || vars.iter().any(|s| s == x),
    }
    .apply(f)
}

/// `∃ sources. ψ₋ ∧ ((φ_K)^G ∨ ψ₊)`.
pub fn phi_ugraph() -> Formula {
    let (minus, plus) = psi_ugraph();
    let phi_k = translate_ugraph(&crate::klang::phi_k()).expect("φ_K is a word formula");
    let vars = source_vars();
    let refs: Vec<&str> = vars.iter().map(String::as_str).collect();
    Formula::exists_many(&refs, Formula::and(vec![minus, Formula::or(vec![phi_k, plus])]))
}

/// Rounds of the undirected game backed by `n` rounds of the word game:
/// answering a diamond costs two word moves.
pub fn halved_budget(n: usize) -> usize {
    n / 2
}

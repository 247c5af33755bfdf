//! Graphs, the FO⁺ game on graphs, and encodings of words into graphs.
//!
//! Words over `P({a,b,c})` are encoded as graphs whose only relation is the
//! edge relation: a few *source* vertices stand for the predicates, *square*
//! vertices for positions. [`directed`] uses three sources and a tournament
//! on squares; [`undirected`] uses three disjoint short cycles as sources and
//! order gadgets made of *diamond* vertices.

pub mod directed;
pub mod undirected;

use crate::error::{Error, Result};
use crate::games::{Arena, Side, Solver, Violation, DEFAULT_ROUND_CAP};
use crate::logic::{Compiled, Formula, Model, Valuation};

/// A finite simple graph with an adjacency matrix. Undirected graphs store
/// both orientations of every edge. Designated sources are optional metadata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    directed: bool,
    n: usize,
    adj: Vec<bool>,
    sources: Vec<usize>,
}

impl Graph {
    pub fn new(n: usize, directed: bool) -> Graph {
        Graph { directed, n, adj: vec![false; n * n], sources: Vec::new() }
    }

    pub fn from_edges(n: usize, directed: bool, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut g = Graph::new(n, directed);
        for &(x, y) in edges {
            if x >= n || y >= n {
                return Err(Error::Invalid(format!("edge ({x},{y}) out of range")));
            }
            g.add_edge(x, y);
        }
        Ok(g)
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, x: usize, y: usize) {
        self.adj[x * self.n + y] = true;
        if !self.directed {
            self.adj[y * self.n + x] = true;
        }
    }

    pub fn remove_edge(&mut self, x: usize, y: usize) {
        self.adj[x * self.n + y] = false;
        if !self.directed {
            self.adj[y * self.n + x] = false;
        }
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        self.adj[x * self.n + y]
    }

    /// Edges as pairs; undirected edges once, with `x <= y`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.n {
            for y in 0..self.n {
                if self.has_edge(x, y) && (self.directed || x <= y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn neighbours(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&y| self.has_edge(x, y))
    }

    pub fn sources(&self) -> &[usize] {
        &self.sources
    }

    pub fn set_sources(&mut self, sources: Vec<usize>) {
        self.sources = sources;
    }

    /// The same graph with vertex `x` renamed to `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        let mut g = Graph::new(self.n, self.directed);
        for (x, y) in self.edges() {
            g.add_edge(perm[x], perm[y]);
        }
        g.sources = self.sources.iter().map(|&s| perm[s]).collect();
        g
    }

    /// Valuation binding `names[i]` to the i-th designated source.
    pub fn source_valuation(&self, names: &[String]) -> Valuation {
        names.iter().cloned().zip(self.sources.iter().copied()).collect()
    }

    pub fn eval(&self, f: &Formula, valuation: &Valuation) -> Result<bool> {
        Compiled::for_graphs(f)?.eval(self, valuation)
    }
}

impl Model for Graph {
    fn size(&self) -> usize {
        self.n
    }

    fn edge(&self, x: usize, y: usize) -> bool {
        self.has_edge(x, y)
    }
}

/// The FO⁺ game on graphs: edges must be preserved from left to right and
/// equality in both directions.
pub struct GraphArena<'a> {
    pub left: &'a Graph,
    pub right: &'a Graph,
}

impl Arena for GraphArena<'_> {
    fn size(&self, side: Side) -> usize {
        match side {
            Side::Left => self.left.n,
            Side::Right => self.right.n,
        }
    }

    fn check(&self, pairs: &[(usize, usize)], l: usize, r: usize) -> std::result::Result<(), Violation> {
        if self.left.has_edge(l, l) && !self.right.has_edge(r, r) {
            return Err(Violation::Edge);
        }
        for &(a, b) in pairs {
            if (a == l) != (b == r) {
                return Err(Violation::Equality);
            }
            if (self.left.has_edge(l, a) && !self.right.has_edge(r, b))
                || (self.left.has_edge(a, l) && !self.right.has_edge(b, r))
            {
                return Err(Violation::Edge);
            }
        }
        Ok(())
    }
}

/// Whether Duplicator survives `rounds` rounds on `(left, right)`.
pub fn ef_game_graph(left: &Graph, right: &Graph, rounds: usize) -> Result<bool> {
    if rounds > DEFAULT_ROUND_CAP {
        return Err(Error::CapExceeded { rounds, cap: DEFAULT_ROUND_CAP });
    }
    if left.directed != right.directed {
        return Err(Error::Invalid("cannot play between a directed and an undirected graph".into()));
    }
    let arena = GraphArena { left, right };
    Ok(Solver::new(&arena).duplicator_wins(&[], rounds))
}

/// How word atoms and quantifiers are rewritten by a graph translation.
pub(crate) struct Translation<'a> {
    /// `p(x)` for predicate index `p` (0, 1, 2 for `a`, `b`, `c`).
    pub pred: &'a dyn Fn(usize, &str) -> Formula,
    /// `x < y`.
    pub lt: &'a dyn Fn(&str, &str) -> Formula,
    /// Guard conjoined under `∃x`.
    pub exists_guard: &'a dyn Fn(&str) -> Formula,
    /// Escape disjoined under `∀x`.
    pub forall_escape: &'a dyn Fn(&str) -> Formula,
    /// Names the translation uses for its own variables.
    pub reserved: &'a dyn Fn(&str) -> bool,
}

impl Translation<'_> {
    pub fn apply(&self, f: &Formula) -> Result<Formula> {
        let alph = crate::klang::alphabet();
        let check = |x: &str| {
            if (self.reserved)(x) {
                Err(Error::Invalid(format!("variable `{x}` is reserved by the graph translation")))
            } else {
                Ok(())
            }
        };
        Ok(match f {
            Formula::True | Formula::False => f.clone(),
            Formula::Pred(p, x) => {
                check(x)?;
                (self.pred)(alph.predicate_index(p)?, x)
            }
            Formula::LetterUp(name, x) => {
                check(x)?;
                let letter = alph.letter(name)?;
                Formula::and(
                    (0..3).filter(|&k| alph.has_predicate(letter, k)).map(|k| (self.pred)(k, x)).collect(),
                )
            }
            Formula::Le(x, y) => {
                check(x)?;
                check(y)?;
                Formula::or(vec![(self.lt)(x, y), Formula::eq(x, y)])
            }
            Formula::Lt(x, y) => {
                check(x)?;
                check(y)?;
                (self.lt)(x, y)
            }
            Formula::EqVar(x, y) | Formula::NeqVar(x, y) => {
                check(x)?;
                check(y)?;
                f.clone()
            }
            Formula::Edge(..) => {
                return Err(Error::Unsupported("the input of a graph translation must be a word formula".into()))
            }
            Formula::And(ps) => Formula::and(ps.iter().map(|p| self.apply(p)).collect::<Result<_>>()?),
            Formula::Or(ps) => Formula::or(ps.iter().map(|p| self.apply(p)).collect::<Result<_>>()?),
            Formula::Not(g) => Formula::not(self.apply(g)?),
            Formula::Exists(x, g) => {
                check(x)?;
                Formula::exists(x, Formula::and(vec![(self.exists_guard)(x), self.apply(g)?]))
            }
            Formula::Forall(x, g) => {
                check(x)?;
                Formula::forall(x, Formula::or(vec![(self.forall_escape)(x), self.apply(g)?]))
            }
        })
    }
}

/// Cyclic distance on `Z_len`.
pub(crate) fn cyclic_distance(a: usize, b: usize, len: usize) -> usize {
    let d = a.abs_diff(b) % len;
    d.min(len - d)
}

//! Ordered alphabets and words over them.
//!
//! An alphabet is a finite set of named letters with a partial order. Powerset
//! alphabets `P(Σ)` are ordered by inclusion; their letters are indexed by the
//! bitmask of the predicates they contain, so letter `i` holds predicate `k`
//! iff bit `k` of `i` is set.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Index of a letter inside its alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub u32);

impl Letter {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone)]
pub struct OrderedAlphabet {
    names: Vec<String>,
    index: HashMap<String, Letter>,
    leq: Vec<bool>,
    up: Vec<Vec<Letter>>,
    down: Vec<Vec<Letter>>,
    predicates: Option<Vec<String>>,
}

impl OrderedAlphabet {
    /// Builds an alphabet from letter names and generator pairs `(a, b)`
    /// meaning `a ≤ b`. The order is the reflexive-transitive closure.
    pub fn new<S: AsRef<str>>(letters: &[S], order: &[(S, S)]) -> Result<Self> {
        let names: Vec<String> = letters.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            check_name(name)?;
            if index.insert(name.clone(), Letter(i as u32)).is_some() {
                return Err(Error::DuplicateLetter(name.clone()));
            }
        }
        let n = names.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for (a, b) in order {
            let a = lookup(&index, a.as_ref())?;
            let b = lookup(&index, b.as_ref())?;
            leq[a.index() * n + b.index()] = true;
        }
        // Floyd-Warshall style transitive closure.
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i * n + j] && leq[j * n + i] {
                    return Err(Error::CyclicOrder(names[i].clone()));
                }
            }
        }
        Ok(Self::assemble(names, index, leq, None))
    }

    /// Alphabet with the trivial (equality) order.
    pub fn trivial<S: AsRef<str>>(letters: &[S]) -> Result<Self> {
        Self::new(letters, &[])
    }

    /// The powerset `P(Σ)` ordered by inclusion. Predicates are sorted.
    pub fn powerset<S: AsRef<str>>(predicates: &[S]) -> Result<Self> {
        let mut preds: Vec<String> = predicates.iter().map(|s| s.as_ref().to_string()).collect();
        preds.sort();
        for w in preds.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateLetter(w[0].clone()));
            }
        }
        for p in &preds {
            if p.is_empty() || p.chars().any(|c| !(c.is_alphanumeric() || c == '_')) {
                return Err(Error::Invalid(format!("bad predicate name `{p}`")));
            }
        }
        if preds.len() > 16 {
            return Err(Error::Invalid("at most 16 predicates are supported".into()));
        }
        let n = 1usize << preds.len();
        let names: Vec<String> = (0..n).map(|mask| mask_name(&preds, mask)).collect();
        let index = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), Letter(i as u32)))
            .collect();
        let mut leq = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[a * n + b] = a & b == a;
            }
        }
        Ok(Self::assemble(names, index, leq, Some(preds)))
    }

    fn assemble(
        names: Vec<String>,
        index: HashMap<String, Letter>,
        leq: Vec<bool>,
        predicates: Option<Vec<String>>,
    ) -> Self {
        let n = names.len();
        let up = (0..n)
            .map(|a| (0..n).filter(|&b| leq[a * n + b]).map(|b| Letter(b as u32)).collect())
            .collect();
        let down = (0..n)
            .map(|b| (0..n).filter(|&a| leq[a * n + b]).map(|a| Letter(a as u32)).collect())
            .collect();
        OrderedAlphabet { names, index, leq, up, down, predicates }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.names.len() as u32).map(Letter)
    }

    pub fn name(&self, a: Letter) -> &str {
        &self.names[a.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// The letter with this name. Powerset letters may list their
    /// predicates in any order and with spaces: `{c, a}` is `{a,c}`.
    pub fn letter(&self, name: &str) -> Result<Letter> {
        if let (Some(preds), Some(inner)) = (&self.predicates, name.strip_prefix('{').and_then(|s| s.strip_suffix('}'))) {
            let mut mask = 0u32;
            for p in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                let i = preds.iter().position(|q| q == p).ok_or_else(|| Error::UnknownLetter(name.to_string()))?;
                mask |= 1 << i;
            }
            return Ok(Letter(mask));
        }
        lookup(&self.index, name)
    }

    pub fn leq(&self, a: Letter, b: Letter) -> bool {
        self.leq[a.index() * self.names.len() + b.index()]
    }

    pub fn lt(&self, a: Letter, b: Letter) -> bool {
        a != b && self.leq(a, b)
    }

    /// `a↑`, sorted by letter index.
    pub fn upset(&self, a: Letter) -> &[Letter] {
        &self.up[a.index()]
    }

    /// `a↓`, sorted by letter index.
    pub fn downset(&self, a: Letter) -> &[Letter] {
        &self.down[a.index()]
    }

    pub fn is_trivial(&self) -> bool {
        self.up.iter().all(|u| u.len() == 1)
    }

    /// All pairs `a < b`.
    pub fn strict_pairs(&self) -> Vec<(Letter, Letter)> {
        let mut out = Vec::new();
        for a in self.letters() {
            for &b in self.upset(a) {
                if a != b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// The generating predicates when this is a powerset alphabet.
    pub fn predicates(&self) -> Option<&[String]> {
        self.predicates.as_deref()
    }

    pub fn predicate_index(&self, name: &str) -> Result<usize> {
        self.predicates
            .as_ref()
            .and_then(|ps| ps.iter().position(|p| p == name))
            .ok_or_else(|| Error::UnknownPredicate(name.to_string()))
    }

    /// Whether powerset letter `a` contains predicate number `pred`.
    pub fn has_predicate(&self, a: Letter, pred: usize) -> bool {
        a.0 >> pred & 1 == 1
    }

    /// Parses a whitespace separated list of letter names.
    pub fn parse_word(self: &Arc<Self>, text: &str) -> Result<Word> {
        let letters = text
            .split_whitespace()
            .map(|t| self.letter(t))
            .collect::<Result<Vec<_>>>()?;
        Ok(Word::new(self.clone(), letters))
    }

    /// Generator pairs of the order (its Hasse diagram), as names.
    pub fn cover_pairs(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for (a, b) in self.strict_pairs() {
            let covered = self.upset(a).iter().any(|&c| c != a && c != b && self.lt(c, b));
            if !covered {
                out.push((self.name(a).to_string(), self.name(b).to_string()));
            }
        }
        out
    }
}

impl PartialEq for OrderedAlphabet {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.leq == other.leq
    }
}

impl Eq for OrderedAlphabet {}

impl fmt::Debug for OrderedAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OrderedAlphabet")
            .field("letters", &self.names)
            .field("order", &self.cover_pairs())
            .finish()
    }
}

fn lookup(index: &HashMap<String, Letter>, name: &str) -> Result<Letter> {
    index.get(name).copied().ok_or_else(|| Error::UnknownLetter(name.to_string()))
}

fn check_name(name: &str) -> Result<()> {
    if name.is_empty() || name.chars().any(char::is_whitespace) || name.contains("](") {
        return Err(Error::Invalid(format!("bad letter name `{name}`")));
    }
    Ok(())
}

fn mask_name(preds: &[String], mask: usize) -> String {
    let inner: Vec<&str> = preds
        .iter()
        .enumerate()
        .filter(|(k, _)| mask >> k & 1 == 1)
        .map(|(_, p)| p.as_str())
        .collect();
    format!("{{{}}}", inner.join(","))
}

/// A finite word, tied to the alphabet it is written over.
#[derive(Clone, PartialEq, Eq)]
pub struct Word {
    alphabet: Arc<OrderedAlphabet>,
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(alphabet: Arc<OrderedAlphabet>, letters: Vec<Letter>) -> Self {
        debug_assert!(letters.iter().all(|l| l.index() < alphabet.len()));
        Word { alphabet, letters }
    }

    pub fn from_names<S: AsRef<str>>(alphabet: &Arc<OrderedAlphabet>, names: &[S]) -> Result<Self> {
        let letters = names
            .iter()
            .map(|n| alphabet.letter(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Word::new(alphabet.clone(), letters))
    }

    pub fn alphabet(&self) -> &Arc<OrderedAlphabet> {
        &self.alphabet
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn at(&self, i: usize) -> Letter {
        self.letters[i]
    }

    pub fn names(&self) -> Vec<String> {
        self.letters.iter().map(|&l| self.alphabet.name(l).to_string()).collect()
    }

    /// Letter-wise order: same length and `self[i] ≤ other[i]` everywhere.
    pub fn leq(&self, other: &Word) -> bool {
        self.len() == other.len()
            && self.letters.iter().zip(&other.letters).all(|(&a, &b)| self.alphabet.leq(a, b))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.names().join(" "))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word[{self}]")
    }
}

/// Iterates all words of length exactly `len`, in lexicographic letter order.
pub fn words_of_length(size: usize, len: usize) -> impl Iterator<Item = Vec<Letter>> {
    let total = (size as u128).checked_pow(len as u32).unwrap_or(u128::MAX);
    let mut current = if size == 0 && len > 0 { None } else { Some(vec![Letter(0); len]) };
    let mut emitted: u128 = 0;
    std::iter::from_fn(move || {
        let out = current.clone()?;
        emitted += 1;
        if emitted >= total {
            current = None;
        } else if let Some(cur) = current.as_mut() {
            for slot in cur.iter_mut().rev() {
                if slot.index() + 1 < size {
                    slot.0 += 1;
                    break;
                }
                slot.0 = 0;
            }
        }
        Some(out)
    })
}

/// Iterates all words of length at most `max_len`, shortest first.
pub fn words_up_to(size: usize, max_len: usize) -> impl Iterator<Item = Vec<Letter>> {
    (0..=max_len).flat_map(move |len| words_of_length(size, len))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powerset_lookup_ignores_listing_order() {
        let a = OrderedAlphabet::powerset(&["a", "b", "c"]).unwrap();
        assert_eq!(a.letter("{c, a}").unwrap(), a.letter("{a,c}").unwrap());
        assert_eq!(a.name(a.letter("{}").unwrap()), "{}");
        assert!(a.letter("{a,d}").is_err());
    }

    #[test]
    fn powerset_names_and_order() {
        let a = OrderedAlphabet::powerset(&["c", "a", "b"]).unwrap();
        assert_eq!(a.len(), 8);
        assert_eq!(a.name(Letter(0)), "{}");
        assert_eq!(a.name(Letter(3)), "{a,b}");
        assert_eq!(a.strict_pairs().len(), 19);
        let ab = a.letter("{a,b}").unwrap();
        let abc = a.letter("{a,b,c}").unwrap();
        assert!(a.lt(ab, abc));
        assert!(a.has_predicate(ab, 1));
        assert!(!a.has_predicate(ab, 2));
    }

    #[test]
    fn closure_and_cycles() {
        let a = OrderedAlphabet::new(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        assert!(a.leq(Letter(0), Letter(2)));
        assert_eq!(a.upset(Letter(0)).len(), 3);
        assert_eq!(a.cover_pairs().len(), 2);
        let err = OrderedAlphabet::new(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap_err();
        assert!(matches!(err, Error::CyclicOrder(_)));
        assert!(matches!(
            OrderedAlphabet::trivial(&["a", "a"]),
            Err(Error::DuplicateLetter(_))
        ));
    }

    #[test]
    fn word_enumeration_counts() {
        assert_eq!(words_of_length(3, 0).count(), 1);
        assert_eq!(words_of_length(3, 4).count(), 81);
        assert_eq!(words_up_to(2, 3).count(), 15);
        assert_eq!(words_of_length(0, 2).count(), 0);
    }

    #[test]
    fn parse_words() {
        let a = Arc::new(OrderedAlphabet::powerset(&["a", "b"]).unwrap());
        let w = a.parse_word("{a} {a,b} {}").unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(w.to_string(), "{a} {a,b} {}");
        assert!(a.parse_word("{c}").is_err());
    }
}

//! Transition monoids, aperiodicity and Green's relations.

use std::fmt::Write as _;
use std::sync::Arc;

use rustc_hash::FxHashMap;

use super::{Dfa, Nfa};
use crate::alphabet::{Letter, OrderedAlphabet};

/// The transition monoid of a complete DFA. Element 0 is the identity.
/// Elements are transformations of the state set; `x·y` applies `x` first.
#[derive(Clone, Debug)]
pub struct Monoid {
    alphabet: Arc<OrderedAlphabet>,
    elements: Vec<Vec<u32>>,
    /// A shortest word representing each element.
    words: Vec<Vec<Letter>>,
    letter_images: Vec<usize>,
    accepting: Vec<bool>,
    table: Vec<u32>,
}

impl Monoid {
    pub fn transition_monoid(dfa: &Dfa) -> Monoid {
        let n = dfa.state_count();
        let k = dfa.alphabet().len();
        let identity: Vec<u32> = (0..n as u32).collect();
        let mut ids: FxHashMap<Vec<u32>, usize> = FxHashMap::default();
        ids.insert(identity.clone(), 0);
        let mut elements = vec![identity];
        let mut words: Vec<Vec<Letter>> = vec![Vec::new()];
        let mut i = 0;
        while i < elements.len() {
            for a in 0..k {
                let a = Letter(a as u32);
                let next: Vec<u32> =
                    elements[i].iter().map(|&q| dfa.step(q as usize, a) as u32).collect();
                if !ids.contains_key(&next) {
                    ids.insert(next.clone(), elements.len());
                    let mut w = words[i].clone();
                    w.push(a);
                    words.push(w);
                    elements.push(next);
                }
            }
            i += 1;
        }
        let identity_of = |t: &[u32]| ids[t];
        let letter_images = (0..k)
            .map(|a| {
                let t: Vec<u32> = (0..n).map(|q| dfa.step(q, Letter(a as u32)) as u32).collect();
                identity_of(&t)
            })
            .collect();
        let m = elements.len();
        let mut table = vec![0u32; m * m];
        for x in 0..m {
            for y in 0..m {
                let t: Vec<u32> =
                    elements[x].iter().map(|&q| elements[y][q as usize]).collect();
                table[x * m + y] = ids[&t] as u32;
            }
        }
        let accepting = elements
            .iter()
            .map(|t| dfa.is_accepting(t[dfa.initial()] as usize))
            .collect();
        Monoid {
            alphabet: dfa.alphabet().clone(),
            elements,
            words,
            letter_images,
            accepting,
            table,
        }
    }

    /// Syntactic monoid: the transition monoid of the minimal DFA.
    pub fn syntactic(nfa: &Nfa) -> Monoid {
        Self::transition_monoid(&nfa.canonical_dfa())
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.len() + y] as usize
    }

    pub fn letter_image(&self, a: Letter) -> usize {
        self.letter_images[a.index()]
    }

    pub fn image_of(&self, w: &[Letter]) -> usize {
        w.iter().fold(0, |x, &a| self.mul(x, self.letter_image(a)))
    }

    pub fn is_accepting(&self, x: usize) -> bool {
        self.accepting[x]
    }

    pub fn accepting_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.accepting[x]).collect()
    }

    pub fn transformation(&self, x: usize) -> &[u32] {
        &self.elements[x]
    }

    pub fn representative(&self, x: usize) -> &[Letter] {
        &self.words[x]
    }

    /// Shortest representative written as concatenated letter names, `1` for
    /// the identity.
    pub fn element_name(&self, x: usize) -> String {
        if self.words[x].is_empty() {
            "1".to_string()
        } else {
            self.words[x].iter().map(|&a| self.alphabet.name(a)).collect()
        }
    }

    /// Every element satisfies `x^k = x^(k+1)` for some `k`.
    pub fn is_aperiodic(&self) -> bool {
        (0..self.len()).all(|x| self.aperiodicity_index(x).is_some())
    }

    /// Smallest `k ≥ 1` with `x^k = x^(k+1)`, if any.
    pub fn aperiodicity_index(&self, x: usize) -> Option<usize> {
        let mut p = x;
        for k in 1..=self.len() {
            let q = self.mul(p, x);
            if q == p {
                return Some(k);
            }
            p = q;
        }
        None
    }

    pub fn green(&self) -> GreenClasses {
        let m = self.len();
        let right: Vec<Vec<bool>> = (0..m)
            .map(|x| {
                let mut s = vec![false; m];
                for y in 0..m {
                    s[self.mul(x, y)] = true;
                }
                s
            })
            .collect();
        let left: Vec<Vec<bool>> = (0..m)
            .map(|x| {
                let mut s = vec![false; m];
                for y in 0..m {
                    s[self.mul(y, x)] = true;
                }
                s
            })
            .collect();
        let two: Vec<Vec<bool>> = (0..m)
            .map(|x| {
                let mut s = vec![false; m];
                for (z, &inside) in right[x].iter().enumerate() {
                    if inside {
                        for y in 0..m {
                            s[self.mul(y, z)] = true;
                        }
                    }
                }
                s
            })
            .collect();
        let r = classes(&right);
        let l = classes(&left);
        let j = classes(&two);
        let h = classes(
            &(0..m)
                .map(|x| {
                    let mut key = right[x].clone();
                    key.extend_from_slice(&left[x]);
                    key
                })
                .collect::<Vec<_>>(),
        );
        GreenClasses { r, l, j, h }
    }

    /// Text rendering of the eggbox diagrams, one box per J-class: rows are
    /// R-classes, columns L-classes, accepting elements are starred.
    pub fn eggbox(&self) -> String {
        let g = self.green();
        let mut out = String::new();
        let jcount = g.j.iter().max().map_or(0, |&c| c + 1);
        for jc in 0..jcount {
            let members: Vec<usize> = (0..self.len()).filter(|&x| g.j[x] == jc).collect();
            let mut rows: Vec<usize> = members.iter().map(|&x| g.r[x]).collect();
            rows.sort_unstable();
            rows.dedup();
            let mut cols: Vec<usize> = members.iter().map(|&x| g.l[x]).collect();
            cols.sort_unstable();
            cols.dedup();
            let cell = |r: usize, c: usize| -> String {
                let names: Vec<String> = members
                    .iter()
                    .filter(|&&x| g.r[x] == r && g.l[x] == c)
                    .map(|&x| {
                        let star = if self.accepting[x] { "*" } else { "" };
                        format!("{star}{}", self.element_name(x))
                    })
                    .collect();
                names.join(" ")
            };
            let cells: Vec<Vec<String>> =
                rows.iter().map(|&r| cols.iter().map(|&c| cell(r, c)).collect()).collect();
            let width = cells.iter().flatten().map(|s| s.chars().count()).max().unwrap_or(0);
            let _ = writeln!(out, "J-class {jc} ({} elements)", members.len());
            let rule = format!("+{}", format!("{}+", "-".repeat(width + 2)).repeat(cols.len()));
            out.push_str(&rule);
            out.push('\n');
            for row in &cells {
                out.push('|');
                for c in row {
                    let _ = write!(out, " {c:<width$} |");
                }
                out.push('\n');
                out.push_str(&rule);
                out.push('\n');
            }
        }
        out
    }
}

/// Class index of every element for each of Green's relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreenClasses {
    pub r: Vec<usize>,
    pub l: Vec<usize>,
    pub j: Vec<usize>,
    pub h: Vec<usize>,
}

impl GreenClasses {
    pub fn h_classes_trivial(&self) -> bool {
        let mut seen = self.h.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len() == self.h.len()
    }
}

fn classes(keys: &[Vec<bool>]) -> Vec<usize> {
    let mut ids: FxHashMap<&[bool], usize> = FxHashMap::default();
    keys.iter()
        .map(|k| {
            let next = ids.len();
            *ids.entry(k.as_slice()).or_insert(next)
        })
        .collect()
}

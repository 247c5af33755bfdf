//! Witness words and the diagnostics used against candidate members of
//! `L_M`: forbidden local factors, set-types, anchors and ambiguous factors.

use super::reduction::{Config, Reduction};
use crate::alphabet::{Letter, Word};
use crate::automata::Nfa;
use crate::error::{Error, Result};

/// Result of [`witness_words`].
#[derive(Clone, Debug)]
pub enum WitnessOutcome {
    /// `u ∈ L_M` and `v ∉ L_M`, built from the run starting at `start`.
    Found { u: Word, v: Word, start: Config },
    /// No run of the required length exists on any tape: a run of `N` steps
    /// only touches `N + 1` cells on either side of its start, and every
    /// tape up to that width was searched.
    NoLongRun { required: usize, longest: usize },
    /// The tape budget ran out before the search was conclusive.
    BudgetExhausted { required: usize, longest: usize, max_tape: usize },
}

/// `N = 2^{n+1} + 1`.
pub fn run_target(n: u32) -> usize {
    (1usize << (n + 1)) + 1
}

/// The configurations `c, step(c), ..., step^len(c)`.
pub fn run_from(r: &Reduction, start: &Config, len: usize) -> Option<Vec<Config>> {
    let mut run = vec![start.clone()];
    for _ in 0..len {
        let next = r.step_config(run.last().expect("non-empty"))?;
        run.push(next);
    }
    Some(run)
}

fn join(r: &Reduction, segments: &[Vec<Letter>]) -> Word {
    let mut out = Vec::new();
    for (i, s) in segments.iter().enumerate() {
        if i > 0 {
            out.push(r.hash());
        }
        out.extend_from_slice(s);
    }
    r.word(out)
}

/// Searches tapes of increasing length for a run `u_0 ... u_N` and returns
/// `u = u_0#...#u_N` with `v = u_0#v_1#...#v_{N-2}#u_N`, where `v_i`
/// superposes `u_i` and `u_{i+1}`.
pub fn witness_words(r: &Reduction, n: u32, max_tape: usize) -> Result<WitnessOutcome> {
    let big_n = run_target(n);
    let conclusive = 2 * big_n + 3;
    let mut longest = 0;
    for len in 1..=max_tape.min(conclusive) {
        for c in r.configs_of_length(len) {
            match r.height(&c, big_n) {
                Some(h) if h < big_n => longest = longest.max(h),
                _ => {
                    let run = run_from(r, &c, big_n).expect("height is at least N");
                    let us: Vec<Vec<Letter>> = run.iter().map(|c| r.encode_config(c)).collect();
                    let mut vs = vec![us[0].clone()];
                    for i in 1..=big_n - 2 {
                        let v = r.superpose(&us[i], &us[i + 1])?.expect("successive configurations superpose");
                        vs.push(v);
                    }
                    vs.push(us[big_n].clone());
                    return Ok(WitnessOutcome::Found { u: join(r, &us), v: join(r, &vs), start: c });
                }
            }
        }
    }
    Ok(if max_tape >= conclusive {
        WitnessOutcome::NoLongRun { required: big_n, longest }
    } else {
        WitnessOutcome::BudgetExhausted { required: big_n, longest, max_tape }
    })
}

/// A factor `w[start..end]` with at most two `#` that is not a factor of any
/// word of `L_M`, minimal for inclusion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForbiddenFactor {
    pub start: usize,
    pub end: usize,
}

pub fn local_factor_scan(r: &Reduction, w: &[Letter]) -> Vec<ForbiddenFactor> {
    let factors = r.l_m().factor_automaton();
    let hash = r.hash();
    // For each start, the shortest end at which the factor leaves the
    // factor language.
    let first_bad: Vec<Option<usize>> = (0..w.len())
        .map(|i| {
            let mut cur = factors.initial().to_vec();
            for (j, &a) in w.iter().enumerate().skip(i) {
                cur = factors.post(&cur, a);
                if cur.is_empty() {
                    return Some(j + 1);
                }
            }
            None
        })
        .collect();
    let mut out = Vec::new();
    for i in 0..w.len() {
        let Some(end) = first_bad[i] else { continue };
        // Minimal only if dropping the first letter repairs it.
        if i + 1 < end && first_bad[i + 1].is_some_and(|e| e <= end) {
            continue;
        }
        if w[i..end].iter().filter(|&&a| a == hash).count() <= 2 {
            out.push(ForbiddenFactor { start: i, end });
        }
    }
    out
}

/// Segment diagnostics for a word over `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentReport {
    /// Letter ranges of the `#`-delimited segments.
    pub segments: Vec<(usize, usize)>,
    /// Types each segment is compatible with, ascending.
    pub set_types: Vec<Vec<u8>>,
    /// `(segment, anchor type)` for every anchor; the type is `None` when the
    /// neighbours do not pin one down.
    pub anchors: Vec<(usize, Option<u8>)>,
    pub ambiguous: Vec<AmbiguousFactor>,
}

/// Segments `first..=last`, each compatible with two types in cycle order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmbiguousFactor {
    pub first: usize,
    pub last: usize,
    pub coherent: bool,
}

impl SegmentReport {
    pub fn incoherent(&self) -> impl Iterator<Item = &AmbiguousFactor> {
        self.ambiguous.iter().filter(|f| !f.coherent)
    }
}

fn next_type(t: u8) -> u8 {
    t % 3 + 1
}

fn prev_type(t: u8) -> u8 {
    (t + 1) % 3 + 1
}

/// Whether two 2-element set-types succeed each other:
/// `{1,2} → {2,3} → {3,1} → {1,2}`.
fn succeeds(a: &[u8], b: &[u8]) -> bool {
    let lead = |s: &[u8]| match s {
        [1, 2] => Some(1),
        [2, 3] => Some(2),
        [1, 3] => Some(3),
        _ => None,
    };
    matches!((lead(a), lead(b)), (Some(x), Some(y)) if next_type(x) == y)
}

/// The only type of `cur` consistent with both neighbours, if unique.
pub fn anchor_type(prev: Option<&[u8]>, cur: &[u8], next: Option<&[u8]>) -> Option<u8> {
    let mut fits = cur.iter().copied().filter(|&t| {
        prev.is_none_or(|p| p.contains(&prev_type(t))) && next.is_none_or(|n| n.contains(&next_type(t)))
    });
    let t = fits.next()?;
    fits.next().is_none().then_some(t)
}

/// Set-types, anchors and maximal ambiguous factors of `v`.
///
/// With `endpoints_anchored` the first and last segments are anchors and
/// never part of an ambiguous factor, and an extended factor touching an end
/// of `v` must be a prefix (or suffix) of a word of `L_M` to be coherent.
pub fn segment_analysis(r: &Reduction, v: &[Letter], endpoints_anchored: bool) -> Result<SegmentReport> {
    let bad = local_factor_scan(r, v);
    if let Some(f) = bad.first() {
        return Err(Error::Invalid(format!(
            "forbidden local factor at {}..{} ({} in total)",
            f.start,
            f.end,
            bad.len()
        )));
    }
    let hash = r.hash();
    let mut segments = Vec::new();
    let mut start = 0;
    for (i, &a) in v.iter().enumerate() {
        if a == hash {
            segments.push((start, i));
            start = i + 1;
        }
    }
    segments.push((start, v.len()));
    let set_types: Vec<Vec<u8>> = segments
        .iter()
        .map(|&(s, e)| (1..=3).filter(|&j| r.config_nfa(j).accepts_some_below(&v[s..e])).collect())
        .collect();
    let last = segments.len() - 1;
    let two = |i: usize| set_types[i].len() == 2;
    let triple_ambiguous = |i: usize| {
        i > 0
            && i < last
            && (i - 1..=i + 1).all(two)
            && succeeds(&set_types[i - 1], &set_types[i])
            && succeeds(&set_types[i], &set_types[i + 1])
    };
    let neighbour_types = |i: usize| {
        anchor_type(
            i.checked_sub(1).map(|p| set_types[p].as_slice()),
            &set_types[i],
            (i < last).then(|| set_types[i + 1].as_slice()),
        )
    };
    let anchors: Vec<(usize, Option<u8>)> = (0..=last)
        .filter(|&i| (endpoints_anchored && (i == 0 || i == last)) || !triple_ambiguous(i))
        .map(|i| (i, neighbour_types(i)))
        .collect();

    let eligible = |i: usize| two(i) && !(endpoints_anchored && (i == 0 || i == last));
    let lm = r.l_m();
    let trimmed = lm.trim();
    let mut ambiguous = Vec::new();
    let mut i = 0;
    while i <= last {
        if !eligible(i) {
            i += 1;
            continue;
        }
        let mut j = i;
        while j < last && eligible(j + 1) && succeeds(&set_types[j], &set_types[j + 1]) {
            j += 1;
        }
        let lo = i.saturating_sub(1);
        let hi = (j + 1).min(last);
        let text = &v[segments[lo].0..segments[hi].1];
        let nfa = variant(&trimmed, lo == 0, hi == last);
        ambiguous.push(AmbiguousFactor { first: i, last: j, coherent: nfa.accepts_letters(text) });
        i = j + 1;
    }
    Ok(SegmentReport { segments, set_types, anchors, ambiguous })
}

/// `L_M` itself, or its prefixes, suffixes or infixes.
fn variant(trimmed: &Nfa, prefix: bool, suffix: bool) -> Nfa {
    let n = trimmed.state_count();
    let all: Vec<usize> = (0..n).collect();
    let initial: Vec<usize> = if prefix { trimmed.initial().iter().map(|&q| q as usize).collect() } else { all.clone() };
    let accepting: Vec<usize> = if suffix { trimmed.accepting_states().collect() } else { all };
    let trans: Vec<(usize, Letter, usize)> = trimmed.transitions().collect();
    Nfa::new(trimmed.alphabet().clone(), n, &initial, &accepting, &trans).expect("same states")
}

/// Rounds Spoiler needs on the witness of size `n`:
/// `2n + ceil(log2 n) + 7`.
pub fn round_budget(n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::Invalid("round budget needs n ≥ 1".into()));
    }
    let log = (usize::BITS - (n - 1).leading_zeros()) as usize;
    Ok(2 * n + log + 7)
}

/// Counts from [`check_superposition`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuperpositionReport {
    pub configs: usize,
    pub pairs: usize,
    pub triples: usize,
    pub violations: Vec<String>,
}

/// Exhaustive check, on tapes up to `max_tape`, that two configurations
/// superpose exactly when they are equal or successive, and that no three
/// distinct ones share an upper bound (on tapes up to `max_triple_tape`).
pub fn check_superposition(r: &Reduction, max_tape: usize, max_triple_tape: usize) -> SuperpositionReport {
    let mut rep = SuperpositionReport::default();
    for len in 1..=max_tape {
        let configs = r.configs_of_length(len);
        let words: Vec<Vec<Letter>> = configs.iter().map(|c| r.encode_config(c)).collect();
        rep.configs += configs.len();
        let succ: Vec<Option<usize>> = configs
            .iter()
            .map(|c| r.step_config(c).map(|n| configs.iter().position(|d| *d == n).expect("same tape length")))
            .collect();
        let mut compatible = vec![Vec::new(); configs.len()];
        for a in 0..configs.len() {
            for b in a + 1..configs.len() {
                rep.pairs += 1;
                let can = r.superpose(&words[a], &words[b]).expect("equal length").is_some();
                let consecutive = succ[a] == Some(b) || succ[b] == Some(a);
                if can != consecutive {
                    rep.violations.push(format!(
                        "{} and {}: superpose {can}, successive {consecutive}",
                        r.word(words[a].clone()),
                        r.word(words[b].clone())
                    ));
                }
                if can {
                    compatible[a].push(b);
                }
            }
        }
        if len > max_triple_tape {
            continue;
        }
        for a in 0..configs.len() {
            for b in a + 1..configs.len() {
                for c in b + 1..configs.len() {
                    rep.triples += 1;
                    // Pairwise incompatibility already rules out a common bound.
                    if !(compatible[a].contains(&b) && compatible[a].contains(&c) && compatible[b].contains(&c)) {
                        continue;
                    }
                    let bound = r.superpose_all(&[&words[a], &words[b], &words[c]]).expect("equal length");
                    if bound.is_some() {
                        rep.violations.push(format!("three configurations share a bound on tape {len}"));
                    }
                }
            }
        }
    }
    rep
}

/// Membership in the powerset form of `L_M`: letters are sets of base
/// letters, singletons and amb pairs keep their meaning, a word with any
/// other non-empty set is accepted, and otherwise a word with `∅` is
/// rejected.
pub fn powerset_accepts(r: &Reduction, w: &[Vec<Letter>]) -> bool {
    let mut mapped = Vec::with_capacity(w.len());
    let mut has_empty = false;
    for set in w {
        let mut s = set.clone();
        s.sort_unstable();
        s.dedup();
        match s[..] {
            [] => has_empty = true,
            [a] if a.index() < r.base_len() => mapped.push(a),
            [a, b] if b.index() < r.base_len() && r.amb_letter(a, b).is_some() => {
                mapped.push(r.amb_letter(a, b).expect("checked"))
            }
            _ => return true,
        }
    }
    !has_empty && r.l_m().accepts_letters(&mapped)
}

/// The powerset letter of a letter of `A`.
pub fn to_powerset(r: &Reduction, a: Letter) -> Vec<Letter> {
    match a.index().checked_sub(r.base_len()) {
        None => vec![a],
        Some(i) => {
            let (p, s) = r.amb_pairs()[i];
            let mut v = vec![p, s];
            v.sort_unstable();
            v
        }
    }
}

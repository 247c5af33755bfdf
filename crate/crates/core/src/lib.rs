//! Positive first-order logic over ordered alphabets.
//!
//! The crate is organised bottom-up: [`alphabet`] defines ordered alphabets and
//! words, [`automata`] the regular-language toolbox (monotone closure,
//! transition monoids), [`logic`] FO / FO⁺ formulas, and [`games`] the
//! Ehrenfeucht–Fraïssé game for FO⁺. The remaining modules build concrete
//! constructions on top: the counter-free language `K` ([`klang`]), its
//! encoding into graphs ([`graphs`]), the reduction from Turing machine
//! mortality ([`mortality`]) and the abstract integer game ([`intgame`]).

pub mod alphabet;
pub mod automata;
mod error;
pub mod games;
pub mod graphs;
pub mod intgame;
pub mod klang;
pub mod logic;
pub mod mortality;

pub use alphabet::{Letter, OrderedAlphabet, Word};
pub use automata::{Dfa, Monoid, Nfa, Regex};
pub use error::{Error, Result};


pub use logic::{Formula, Mode};
pub use games::{Arena, Side, Solver, SpoilerMove, Violation, WordGamePosition};

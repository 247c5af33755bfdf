//! Interactive game sessions: one human side against the exact solver.

use std::sync::Arc;

use anyhow::{bail, Result};
use posfo::games::{Arena, Side, Solver, SpoilerMove, Violation, WordArena};
use posfo::graphs::{Graph, GraphArena};
use posfo::intgame::{IntArena, Orientation};
use posfo::{OrderedAlphabet, Word};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::format::{AlphabetSpec, GraphSpec, SCHEMA_VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Word,
    Graph,
    Integer,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Spoiler,
    Duplicator,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ongoing,
    SpoilerWon,
    DuplicatorWon,
}

/// The two structures a session is played on.
#[derive(Clone, Debug)]
pub enum Board {
    Word { u: Word, v: Word },
    Graph { left: Graph, right: Graph },
    Integer(IntArena),
}

/// Arena payloads as they appear in requests and preset files.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BoardSpec {
    Word {
        u: Vec<String>,
        v: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alphabet: Option<AlphabetSpec>,
    },
    Graph {
        left: GraphSpec,
        right: GraphSpec,
    },
    Integer {
        n: u8,
        u: String,
        v: String,
        #[serde(default)]
        mirrored: bool,
    },
}

impl Board {
    pub fn kind(&self) -> Kind {
        match self {
            Board::Word { .. } => Kind::Word,
            Board::Graph { .. } => Kind::Graph,
            Board::Integer(_) => Kind::Integer,
        }
    }

    pub fn from_spec(kind: Kind, spec: &BoardSpec) -> Result<Board> {
        Ok(match (kind, spec) {
            (Kind::Word, BoardSpec::Word { u, v, alphabet }) => {
                let alphabet: Arc<OrderedAlphabet> = match alphabet {
                    Some(a) => a.build()?,
                    None => posfo::klang::alphabet(),
                };
                Board::Word { u: Word::from_names(&alphabet, u)?, v: Word::from_names(&alphabet, v)? }
            }
            (Kind::Graph, BoardSpec::Graph { left, right }) => {
                let (left, right) = (left.build()?, right.build()?);
                if left.is_directed() != right.is_directed() {
                    bail!("both graphs must be directed or both undirected");
                }
                Board::Graph { left, right }
            }
            (Kind::Integer, BoardSpec::Integer { n, u, v, mirrored }) => {
                let orientation = if *mirrored { Orientation::Mirrored } else { Orientation::Standard };
                Board::Integer(IntArena::parse(*n, u, v, orientation)?)
            }
            (kind, _) => bail!("arena does not match kind {kind:?}"),
        })
    }

    /// Runs `f` on the game arena of this board.
    pub fn with_arena<R>(&self, f: impl FnOnce(&dyn Arena) -> R) -> R {
        match self {
            Board::Word { u, v } => f(&WordArena::new(u, v).expect("words share an alphabet")),
            Board::Graph { left, right } => f(&GraphArena { left, right }),
            Board::Integer(arena) => f(arena),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Board::Word { u, v } => json!({
                "u": u.names(),
                "v": v.names(),
                "alphabet": AlphabetSpec::of(u.alphabet()),
            }),
            Board::Graph { left, right } => json!({ "left": GraphSpec::of(left), "right": GraphSpec::of(right) }),
            Board::Integer(a) => {
                let u: Vec<String> = a.u().iter().map(|t| t.to_string()).collect();
                let v: Vec<String> = a.v().iter().map(|&t| format!("({t},{})", t - 1)).collect();
                json!({
                    "n": a.n(),
                    "u": u.join(" "),
                    "v": v.join(" "),
                    "mirrored": a.orientation() == Orientation::Mirrored,
                })
            }
        }
    }
}

/// A move as named on the wire: `u`/`U` is the left structure, `v`/`V` the
/// right one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireMove {
    pub word: String,
    pub position: usize,
}

pub fn side_of(word: &str) -> Option<Side> {
    match word {
        "u" | "U" | "left" => Some(Side::Left),
        "v" | "V" | "right" => Some(Side::Right),
        _ => None,
    }
}

fn side_name(kind: Kind, side: Side) -> &'static str {
    match (kind, side) {
        (Kind::Integer, Side::Left) => "U",
        (Kind::Integer, Side::Right) => "V",
        (_, Side::Left) => "u",
        (_, Side::Right) => "v",
    }
}

/// One round: Spoiler's move and Duplicator's reply, if any yet.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Round {
    pub spoiler: SpoilerMove,
    pub reply: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct GameSession {
    pub id: String,
    pub board: Board,
    pub human: Role,
    pub rounds: usize,
    pub history: Vec<Round>,
    pub status: Status,
    /// The clause broken by the last reply, if that ended the game.
    pub violation: Option<Violation>,
}

/// Why a move was not applied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MoveError {
    /// The game is over or it is the engine's turn.
    NotYourTurn,
    /// Duplicator must answer in the structure Spoiler did not play in.
    WrongStructure,
    OutOfBounds,
    UnknownStructure(String),
}

impl std::fmt::Display for MoveError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MoveError::NotYourTurn => write!(f, "not the human's turn"),
            MoveError::WrongStructure => write!(f, "Duplicator must reply in the other structure"),
            MoveError::OutOfBounds => write!(f, "position out of bounds"),
            MoveError::UnknownStructure(s) => write!(f, "unknown structure `{s}`, expected u or v"),
        }
    }
}

/// What a successful call to [`GameSession::play`] did.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveOutcome {
    pub engine_reply: Option<WireMove>,
    /// The clause the human's reply broke; the game is then lost.
    pub violation: Option<Violation>,
}

/// The best move for the side to play, as far as the solver can tell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Hint {
    Move(WireMove),
    /// The side to play loses against best play.
    NoSavingMove,
    /// Beyond the solver cap.
    Unknown,
    /// Not the human's turn.
    None,
}

fn pairs_of(history: &[Round]) -> Vec<(usize, usize)> {
    history.iter().filter_map(|r| r.reply.map(|q| r.spoiler.pair(q))).collect()
}

/// Spoiler's engine move: a winning one if the solver finds it, else the
/// first move of the structure.
fn engine_spoiler(arena: &dyn Arena, pairs: &[(usize, usize)], left: usize, cap: usize) -> SpoilerMove {
    let best = (left <= cap).then(|| Solver::new(arena).winning_move(pairs, left)).flatten();
    best.unwrap_or_else(|| {
        if arena.size(Side::Left) > 0 {
            SpoilerMove::left(0)
        } else {
            SpoilerMove::right(0)
        }
    })
}

/// Duplicator's engine reply: a saving one if it exists, else the first
/// legal one.
fn engine_duplicator(arena: &dyn Arena, pairs: &[(usize, usize)], mv: SpoilerMove, left: usize, cap: usize) -> Option<usize> {
    let mut solver = Solver::new(arena);
    let saving = if left <= cap { solver.saving_reply(pairs, mv, left) } else { None };
    saving.or_else(|| solver.legal_replies(pairs, mv).first().copied())
}

impl GameSession {
    /// A fresh session. When the human plays Duplicator the engine opens.
    pub fn new(id: String, board: Board, human: Role, rounds: usize, cap: usize) -> GameSession {
        let mut s = GameSession { id, board, human, rounds, history: Vec::new(), status: Status::Ongoing, violation: None };
        s.advance(cap);
        s
    }

    pub fn rounds_left(&self) -> usize {
        self.rounds - self.history.len()
    }

    fn pending(&self) -> Option<SpoilerMove> {
        self.history.last().filter(|r| r.reply.is_none()).map(|r| r.spoiler)
    }

    fn wire(&self, side: Side, position: usize) -> WireMove {
        WireMove { word: side_name(self.board.kind(), side).to_string(), position }
    }

    /// Ends the game if the budget is spent, and lets the engine open the
    /// next round when it plays Spoiler.
    fn advance(&mut self, cap: usize) -> Option<WireMove> {
        if self.status != Status::Ongoing || self.pending().is_some() {
            return None;
        }
        if self.history.len() >= self.rounds {
            self.status = Status::DuplicatorWon;
            return None;
        }
        if self.human == Role::Spoiler {
            return None;
        }
        let pairs = pairs_of(&self.history);
        let left = self.rounds_left();
        let (mv, stuck) = self.board.with_arena(|a| {
            let mv = engine_spoiler(a, &pairs, left, cap);
            (mv, Solver::new(a).legal_replies(&pairs, mv).is_empty())
        });
        self.history.push(Round { spoiler: mv, reply: None });
        if stuck {
            self.status = Status::SpoilerWon;
        }
        Some(self.wire(mv.side, mv.pos))
    }

    /// Applies a human move and the engine's answer to it.
    pub fn play(&mut self, mv: &WireMove, cap: usize) -> std::result::Result<MoveOutcome, MoveError> {
        if self.status != Status::Ongoing {
            return Err(MoveError::NotYourTurn);
        }
        let side = side_of(&mv.word).ok_or_else(|| MoveError::UnknownStructure(mv.word.clone()))?;
        let size = self.board.with_arena(|a| a.size(side));
        if mv.position >= size {
            return Err(MoveError::OutOfBounds);
        }
        let pairs = pairs_of(&self.history);
        match self.human {
            Role::Spoiler => {
                let spoiler = SpoilerMove { side, pos: mv.position };
                let left = self.rounds_left();
                let reply = self.board.with_arena(|a| engine_duplicator(a, &pairs, spoiler, left, cap));
                self.history.push(Round { spoiler, reply });
                match reply {
                    None => self.status = Status::SpoilerWon,
                    Some(_) => {
                        self.advance(cap);
                    }
                }
                let engine_reply = reply.map(|q| self.wire(side.other(), q));
                Ok(MoveOutcome { engine_reply, violation: None })
            }
            Role::Duplicator => {
                let spoiler = self.pending().ok_or(MoveError::NotYourTurn)?;
                if side != spoiler.side.other() {
                    return Err(MoveError::WrongStructure);
                }
                let (l, r) = spoiler.pair(mv.position);
                let verdict = self.board.with_arena(|a| a.check(&pairs, l, r));
                self.history.last_mut().expect("pending round").reply = Some(mv.position);
                if let Err(v) = verdict {
                    self.status = Status::SpoilerWon;
                    self.violation = Some(v);
                    return Ok(MoveOutcome { engine_reply: None, violation: Some(v) });
                }
                let engine_reply = self.advance(cap);
                Ok(MoveOutcome { engine_reply, violation: None })
            }
        }
    }

    /// The solver's recommendation for the human's current turn.
    pub fn hint(&self, cap: usize) -> Hint {
        if self.status != Status::Ongoing {
            return Hint::None;
        }
        let left = self.rounds_left();
        if left > cap {
            return Hint::Unknown;
        }
        let pairs = pairs_of(&self.history);
        match (self.human, self.pending()) {
            (Role::Spoiler, None) => match self.board.with_arena(|a| Solver::new(a).winning_move(&pairs, left)) {
                Some(mv) => Hint::Move(self.wire(mv.side, mv.pos)),
                None => Hint::NoSavingMove,
            },
            (Role::Duplicator, Some(mv)) => match self.board.with_arena(|a| Solver::new(a).saving_reply(&pairs, mv, left)) {
                Some(q) => Hint::Move(self.wire(mv.side.other(), q)),
                None => Hint::NoSavingMove,
            },
            _ => Hint::None,
        }
    }

    pub fn to_json(&self) -> Value {
        let kind = self.board.kind();
        let turn = match (self.status, self.pending()) {
            (Status::Ongoing, Some(_)) => Some(Role::Duplicator),
            (Status::Ongoing, None) => Some(Role::Spoiler),
            _ => None,
        };
        let history: Vec<Value> = self
            .history
            .iter()
            .map(|r| {
                json!({
                    "spoiler": self.wire(r.spoiler.side, r.spoiler.pos),
                    "reply": r.reply.map(|q| self.wire(r.spoiler.side.other(), q)),
                })
            })
            .collect();
        json!({
            "v": SCHEMA_VERSION,
            "id": self.id,
            "kind": kind,
            "human_side": self.human,
            "rounds": self.rounds,
            "round": self.history.len(),
            "status": self.status,
            "turn": turn,
            "violation": self.violation.map(|v| v.name()),
            "arena": self.board.to_json(),
            "history": history,
        })
    }
}

/// The status a history reaches under the game rules alone, independent of
/// who played which side.
pub fn replay_status(board: &Board, rounds: usize, history: &[Round]) -> Status {
    board.with_arena(|a| {
        let mut pairs = Vec::new();
        for (i, r) in history.iter().enumerate() {
            let Some(q) = r.reply else {
                let stuck = Solver::new(a).legal_replies(&pairs, r.spoiler).is_empty();
                return if stuck || i + 1 < history.len() { Status::SpoilerWon } else { Status::Ongoing };
            };
            let (l, rr) = r.spoiler.pair(q);
            if l >= a.size(Side::Left) || rr >= a.size(Side::Right) || a.check(&pairs, l, rr).is_err() {
                return Status::SpoilerWon;
            }
            pairs.push((l, rr));
        }
        if history.len() >= rounds {
            Status::DuplicatorWon
        } else {
            Status::Ongoing
        }
    })
}

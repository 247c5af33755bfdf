//! Regular expressions written as prefix s-expressions.
//!
//! ```text
//! eps | empty | any
//! (lit "{a}")          a single letter
//! (up "{a}")           any letter of the upset
//! (concat r ...)  (union r ...)  (star r)
//! ```
//! Letter names may be quoted or bare.

use std::fmt;
use std::sync::Arc;

use super::Nfa;
use crate::alphabet::OrderedAlphabet;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Regex {
    Empty,
    Epsilon,
    Any,
    Lit(String),
    Up(String),
    Concat(Vec<Regex>),
    Union(Vec<Regex>),
    Star(Box<Regex>),
}

impl Regex {
    pub fn parse(src: &str) -> Result<Regex> {
        let tokens = tokenize(src)?;
        let mut pos = 0;
        let r = parse_expr(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(Error::Parse { pos: tokens[pos].0, msg: "trailing input".into() });
        }
        Ok(r)
    }

    pub fn to_nfa(&self, alphabet: &Arc<OrderedAlphabet>) -> Result<Nfa> {
        Ok(match self {
            Regex::Empty => Nfa::empty(alphabet.clone()),
            Regex::Epsilon => Nfa::epsilon(alphabet.clone()),
            Regex::Any => {
                let all: Vec<_> = alphabet.letters().collect();
                Nfa::letter_set(alphabet.clone(), &all)
            }
            Regex::Lit(name) => Nfa::letter_set(alphabet.clone(), &[alphabet.letter(name)?]),
            Regex::Up(name) => {
                let a = alphabet.letter(name)?;
                Nfa::letter_set(alphabet.clone(), alphabet.upset(a))
            }
            Regex::Concat(parts) => {
                let mut acc = Nfa::epsilon(alphabet.clone());
                for p in parts {
                    acc = acc.concat(&p.to_nfa(alphabet)?)?.trim();
                }
                acc
            }
            Regex::Union(parts) => {
                let mut acc = Nfa::empty(alphabet.clone());
                for p in parts {
                    acc = acc.union(&p.to_nfa(alphabet)?)?;
                }
                acc.trim()
            }
            Regex::Star(inner) => inner.to_nfa(alphabet)?.star().trim(),
        })
    }
}

impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regex::Empty => f.write_str("empty"),
            Regex::Epsilon => f.write_str("eps"),
            Regex::Any => f.write_str("any"),
            Regex::Lit(a) => write!(f, "(lit {a:?})"),
            Regex::Up(a) => write!(f, "(up {a:?})"),
            Regex::Concat(ps) | Regex::Union(ps) => {
                let head = if matches!(self, Regex::Concat(_)) { "concat" } else { "union" };
                write!(f, "({head}")?;
                for p in ps {
                    write!(f, " {p}")?;
                }
                f.write_str(")")
            }
            Regex::Star(r) => write!(f, "(star {r})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Atom(String),
    Quoted(String),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let bytes: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < bytes.len() {
        let (pos, c) = bytes[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '(' => {
                out.push((pos, Tok::Open));
                i += 1;
            }
            ')' => {
                out.push((pos, Tok::Close));
                i += 1;
            }
            '"' => {
                let mut s = String::new();
                i += 1;
                loop {
                    match bytes.get(i) {
                        None => return Err(Error::Parse { pos, msg: "unterminated string".into() }),
                        Some((_, '"')) => break,
                        Some((_, '\\')) if i + 1 < bytes.len() => {
                            s.push(bytes[i + 1].1);
                            i += 2;
                        }
                        Some(&(_, ch)) => {
                            s.push(ch);
                            i += 1;
                        }
                    }
                }
                i += 1;
                out.push((pos, Tok::Quoted(s)));
            }
            _ => {
                let mut s = String::new();
                while let Some(&(_, ch)) = bytes.get(i) {
                    if ch.is_whitespace() || ch == '(' || ch == ')' || ch == '"' {
                        break;
                    }
                    s.push(ch);
                    i += 1;
                }
                out.push((pos, Tok::Atom(s)));
            }
        }
    }
    Ok(out)
}

fn parse_expr(tokens: &[(usize, Tok)], pos: &mut usize) -> Result<Regex> {
    let end = tokens.last().map_or(0, |t| t.0 + 1);
    let Some((at, tok)) = tokens.get(*pos) else {
        return Err(Error::Parse { pos: end, msg: "unexpected end of input".into() });
    };
    let at = *at;
    *pos += 1;
    match tok {
        Tok::Atom(a) => match a.as_str() {
            "eps" => Ok(Regex::Epsilon),
            "empty" => Ok(Regex::Empty),
            "any" => Ok(Regex::Any),
            other => Err(Error::Parse { pos: at, msg: format!("unknown atom `{other}`") }),
        },
        Tok::Quoted(_) => Err(Error::Parse { pos: at, msg: "letter outside lit/up".into() }),
        Tok::Close => Err(Error::Parse { pos: at, msg: "unexpected `)`".into() }),
        Tok::Open => {
            let head = match tokens.get(*pos) {
                Some((_, Tok::Atom(h))) => h.clone(),
                _ => return Err(Error::Parse { pos: at, msg: "expected an operator".into() }),
            };
            *pos += 1;
            let r = match head.as_str() {
                "lit" | "up" => {
                    let name = match tokens.get(*pos) {
                        Some((_, Tok::Quoted(s))) | Some((_, Tok::Atom(s))) => s.clone(),
                        _ => return Err(Error::Parse { pos: at, msg: "expected a letter".into() }),
                    };
                    *pos += 1;
                    if head == "lit" {
                        Regex::Lit(name)
                    } else {
                        Regex::Up(name)
                    }
                }
                "concat" | "union" | "star" => {
                    let mut args = Vec::new();
                    while !matches!(tokens.get(*pos), Some((_, Tok::Close)) | None) {
                        args.push(parse_expr(tokens, pos)?);
                    }
                    match head.as_str() {
                        "concat" => Regex::Concat(args),
                        "union" => Regex::Union(args),
                        _ => {
                            if args.len() != 1 {
                                return Err(Error::Parse {
                                    pos: at,
                                    msg: "star takes exactly one argument".into(),
                                });
                            }
                            Regex::Star(Box::new(args.pop().unwrap()))
                        }
                    }
                }
                other => {
                    return Err(Error::Parse { pos: at, msg: format!("unknown operator `{other}`") })
                }
            };
            match tokens.get(*pos) {
                Some((_, Tok::Close)) => {
                    *pos += 1;
                    Ok(r)
                }
                _ => Err(Error::Parse { pos: at, msg: "missing `)`".into() }),
            }
        }
    }
}

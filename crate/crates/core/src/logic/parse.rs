//! Recursive-descent parser. Precedence: `!` binds tightest, then `&`, then
//! `|`; a quantifier body extends as far right as possible.

use super::{Formula, Mode};
use crate::error::{Error, Result};

pub(super) fn parse(src: &str, mode: Mode) -> Result<Formula> {
    let mut p = Parser { src, pos: 0, mode };
    let f = p.formula()?;
    p.skip_ws();
    if p.pos < src.len() {
        return Err(p.error("trailing input"));
    }
    Ok(f)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    mode: Mode,
}

const KEYWORDS: [&str; 4] = ["exists", "forall", "true", "false"];

impl<'a> Parser<'a> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{tok}`")))
        }
    }

    fn peek_ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = self.rest();
        let mut chars = rest.char_indices();
        match chars.next() {
            Some((_, c)) if c.is_alphabetic() || c == '_' => {}
            _ => return None,
        }
        let end = chars
            .find(|&(_, c)| !(c.is_alphanumeric() || c == '_' || c == '\''))
            .map_or(rest.len(), |(i, _)| i);
        Some(&rest[..end])
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek_ident() {
            Some(id) => {
                self.pos += id.len();
                Ok(id.to_string())
            }
            None => Err(self.error("expected an identifier")),
        }
    }

    fn var(&mut self) -> Result<String> {
        let start = self.pos;
        let id = self.ident()?;
        if KEYWORDS.contains(&id.as_str()) {
            self.pos = start;
            return Err(self.error(&format!("`{id}` is a keyword")));
        }
        Ok(id)
    }

    fn formula(&mut self) -> Result<Formula> {
        let mut parts = vec![self.conjunction()?];
        while self.eat("|") {
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::Or(parts) })
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut parts = vec![self.unary()?];
        while self.eat("&") {
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::And(parts) })
    }

    fn unary(&mut self) -> Result<Formula> {
        self.skip_ws();
        if self.rest().starts_with('!') && !self.rest().starts_with("!=") {
            if self.mode == Mode::FoPlus {
                return Err(self.error("negation is not allowed in FO+"));
            }
            self.pos += 1;
            return Ok(Formula::not(self.unary()?));
        }
        if self.eat("(") {
            let f = self.formula()?;
            self.expect(")")?;
            return Ok(f);
        }
        if self.rest().starts_with('[') {
            return self.letter_atom();
        }
        match self.peek_ident() {
            Some(q @ ("exists" | "forall")) => {
                self.pos += q.len();
                let mut vars = vec![self.var()?];
                while !self.eat(".") {
                    vars.push(self.var()?);
                }
                let body = self.formula()?;
                let refs: Vec<&str> = vars.iter().map(String::as_str).collect();
                Ok(if q == "exists" {
                    Formula::exists_many(&refs, body)
                } else {
                    Formula::forall_many(&refs, body)
                })
            }
            Some("true") => {
                self.pos += 4;
                Ok(Formula::True)
            }
            Some("false") => {
                self.pos += 5;
                Ok(Formula::False)
            }
            Some(_) => self.ident_atom(),
            None => Err(self.error("expected a formula")),
        }
    }

    fn letter_atom(&mut self) -> Result<Formula> {
        let start = self.pos;
        self.pos += 1;
        let Some(end) = self.rest().find("](") else {
            self.pos = start;
            return Err(self.error("unterminated letter atom"));
        };
        let letter = self.rest()[..end].to_string();
        if letter.is_empty() {
            return Err(self.error("empty letter name"));
        }
        self.pos += end + 2;
        let x = self.var()?;
        self.expect(")")?;
        Ok(Formula::LetterUp(letter, x))
    }

    fn ident_atom(&mut self) -> Result<Formula> {
        let name = self.ident()?;
        self.skip_ws();
        if self.eat("(") {
            let x = self.var()?;
            if self.eat(",") {
                let y = self.var()?;
                self.expect(")")?;
                if name != "E" {
                    return Err(self.error("only `E` is a binary relation"));
                }
                return Ok(Formula::Edge(x, y));
            }
            self.expect(")")?;
            return Ok(Formula::Pred(name, x));
        }
        if KEYWORDS.contains(&name.as_str()) {
            return Err(self.error(&format!("`{name}` is a keyword")));
        }
        let x = name;
        let op = ["<=", "!=", "<", "="].into_iter().find(|op| self.eat(op));
        let Some(op) = op else {
            return Err(self.error("expected a comparison after a variable"));
        };
        let y = self.var()?;
        Ok(match op {
            "<=" => Formula::Le(x, y),
            "<" => Formula::Lt(x, y),
            "=" => Formula::EqVar(x, y),
            _ => Formula::NeqVar(x, y),
        })
    }
}

use crate::error::{Error, Result};

use super::{join, meet, star, Term};

/// Parses the ASCII syntax: `|` binds loosest, then `&`, then postfix `*`.
///
/// Binary operators associate to the left. Positions in errors are character
/// offsets.
pub fn parse(text: &str) -> Result<Term> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
    };
    let t = p.or()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.unexpected());
    }
    Ok(t)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn unexpected(&self) -> Error {
        match self.chars.get(self.pos) {
            Some(c) => Error::Syntax {
                pos: self.pos,
                msg: format!("unexpected `{c}`"),
            },
            None => Error::Syntax {
                pos: self.pos,
                msg: "unexpected end of input".into(),
            },
        }
    }

    fn or(&mut self) -> Result<Term> {
        let mut t = self.and()?;
        while self.peek() == Some('|') {
            self.pos += 1;
            t = join(t, self.and()?);
        }
        Ok(t)
    }

    fn and(&mut self) -> Result<Term> {
        let mut t = self.starred()?;
        while self.peek() == Some('&') {
            self.pos += 1;
            t = meet(t, self.starred()?);
        }
        Ok(t)
    }

    fn starred(&mut self) -> Result<Term> {
        let mut t = self.primary()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            t = star(t);
        }
        Ok(t)
    }

    fn primary(&mut self) -> Result<Term> {
        let start = match self.peek() {
            None => return Err(self.unexpected()),
            Some(_) => self.pos,
        };
        let c = self.chars[start];
        if c == '(' {
            self.pos += 1;
            let t = self.or()?;
            if self.peek() != Some(')') {
                return Err(self.unexpected());
            }
            self.pos += 1;
            return Ok(t);
        }
        if c.is_ascii_alphanumeric() || c == '_' {
            let mut end = start;
            while end < self.chars.len() && (self.chars[end].is_ascii_alphanumeric() || self.chars[end] == '_') {
                end += 1;
            }
            let word: String = self.chars[start..end].iter().collect();
            self.pos = end;
            return match word.as_str() {
                "0" => Ok(Term::Zero),
                "1" => Ok(Term::One),
                w => variable(w).ok_or(Error::UnknownIdentifier { pos: start, name: word }),
            };
        }
        Err(self.unexpected())
    }
}

fn variable(word: &str) -> Option<Term> {
    let digits = word.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
        return None;
    }
    digits.parse::<u32>().ok().map(Term::Var)
}

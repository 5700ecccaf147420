//! Text form: `{e1, e2} ∪ (a1 mod b1) ∪ (a2 mod b2) [two-sided]`.
//!
//! `∅` stands for an empty finite part (or the empty set), `Z` for all integers.
//! The sidedness tag is optional on input and defaults to two-sided.

use std::fmt;
use std::str::FromStr;

use super::{Progression, SemilinearError, SemilinearSet, Sidedness};

impl fmt::Display for Sidedness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sidedness::OneSided => "one-sided",
            Sidedness::TwoSided => "two-sided",
        })
    }
}

impl fmt::Display for Progression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} mod {})", self.offset(), self.modulus())
    }
}

impl fmt::Display for SemilinearSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exceptional.is_empty() && self.progressions.len() == 1 && self.progressions[0].modulus() == 1 {
            return write!(f, "Z [{}]", self.sidedness);
        }
        if self.exceptional.is_empty() {
            f.write_str("∅")?;
        } else {
            f.write_str("{")?;
            for (i, e) in self.exceptional.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{e}")?;
            }
            f.write_str("}")?;
        }
        for p in &self.progressions {
            write!(f, " ∪ {p}")?;
        }
        write!(f, " [{}]", self.sidedness)
    }
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, msg: impl Into<String>) -> SemilinearError {
        SemilinearError::Parse { pos: self.pos, msg: msg.into() }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), SemilinearError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{token}`")))
        }
    }

    fn integer(&mut self) -> Result<i64, SemilinearError> {
        self.skip_ws();
        let rest = self.rest();
        let len = rest
            .char_indices()
            .take_while(|&(i, c)| c.is_ascii_digit() || (i == 0 && (c == '-' || c == '+')))
            .count();
        let text = &rest[..len];
        let v = text.parse().map_err(|_| self.err("expected an integer"))?;
        self.pos += len;
        Ok(v)
    }
}

enum Term {
    Empty,
    Full,
    Finite(Vec<i64>),
    Class(i64, i64),
}

fn term(c: &mut Cursor<'_>) -> Result<Term, SemilinearError> {
    if c.eat("∅") {
        return Ok(Term::Empty);
    }
    if c.eat("Z") || c.eat("ℤ") {
        return Ok(Term::Full);
    }
    if c.eat("{") {
        let mut items = Vec::new();
        if !c.eat("}") {
            loop {
                items.push(c.integer()?);
                if c.eat("}") {
                    break;
                }
                c.expect(",")?;
            }
        }
        return Ok(Term::Finite(items));
    }
    if c.eat("(") {
        let a = c.integer()?;
        c.expect("mod")?;
        let at = c.pos;
        let b = c.integer()?;
        if b < 1 {
            return Err(SemilinearError::Parse { pos: at, msg: "modulus must be positive".into() });
        }
        c.expect(")")?;
        return Ok(Term::Class(a, b));
    }
    Err(c.err("expected `∅`, `Z`, `{...}` or `(a mod b)`"))
}

impl FromStr for SemilinearSet {
    type Err = SemilinearError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut c = Cursor { src: s, pos: 0 };
        let mut terms = vec![term(&mut c)?];
        while c.eat("∪") || c.eat("U ") || c.eat("|") {
            terms.push(term(&mut c)?);
        }
        let sidedness = if c.eat("[") {
            let side = if c.eat("two-sided") {
                Sidedness::TwoSided
            } else if c.eat("one-sided") {
                Sidedness::OneSided
            } else {
                return Err(c.err("expected `one-sided` or `two-sided`"));
            };
            c.expect("]")?;
            side
        } else {
            Sidedness::TwoSided
        };
        c.skip_ws();
        if !c.rest().is_empty() {
            return Err(c.err("trailing input"));
        }
        let mut exceptional = Vec::new();
        let mut progressions = Vec::new();
        for t in terms {
            match t {
                Term::Empty => {}
                Term::Full => progressions.push(Progression::new(0, 1)?),
                Term::Finite(items) => exceptional.extend(items),
                Term::Class(a, b) => progressions.push(Progression::new(a, b)?),
            }
        }
        SemilinearSet::new(sidedness, exceptional, progressions)
    }
}

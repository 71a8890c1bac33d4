//! Action-based LTL: an atom holds at a position iff the action taken there
//! is that symbol.
//!
//! Concrete syntax, from tightest to loosest binding:
//!
//! | level | operators |
//! |-------|-----------|
//! | unary | `!` `X` `F` `G` |
//! | binary, right associative | `U` `R` |
//! | conjunction | `&` |
//! | disjunction | `\|` |
//!
//! Constants are `tt`/`true` and `ff`/`false`. Atoms are identifiers made of
//! letters, digits, `_` and `.`; the one-letter words `X F G U R` are
//! reserved and cannot be atoms.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LtlFormula {
    True,
    False,
    Atom(String),
    Not(Box<LtlFormula>),
    And(Box<LtlFormula>, Box<LtlFormula>),
    Or(Box<LtlFormula>, Box<LtlFormula>),
    Next(Box<LtlFormula>),
    Until(Box<LtlFormula>, Box<LtlFormula>),
    Release(Box<LtlFormula>, Box<LtlFormula>),
    Eventually(Box<LtlFormula>),
    Globally(Box<LtlFormula>),
}

use LtlFormula::*;

impl LtlFormula {
    pub fn atom(name: impl Into<String>) -> Self {
        Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: LtlFormula) -> Self {
        Not(Box::new(f))
    }

    pub fn and(a: LtlFormula, b: LtlFormula) -> Self {
        And(Box::new(a), Box::new(b))
    }

    pub fn or(a: LtlFormula, b: LtlFormula) -> Self {
        Or(Box::new(a), Box::new(b))
    }

    pub fn next(f: LtlFormula) -> Self {
        Next(Box::new(f))
    }

    pub fn until(a: LtlFormula, b: LtlFormula) -> Self {
        Until(Box::new(a), Box::new(b))
    }

    pub fn release(a: LtlFormula, b: LtlFormula) -> Self {
        Release(Box::new(a), Box::new(b))
    }

    pub fn eventually(f: LtlFormula) -> Self {
        Eventually(Box::new(f))
    }

    pub fn globally(f: LtlFormula) -> Self {
        Globally(Box::new(f))
    }

    /// Number of operators, constants and atoms.
    pub fn size(&self) -> usize {
        match self {
            True | False | Atom(_) => 1,
            Not(f) | Next(f) | Eventually(f) | Globally(f) => 1 + f.size(),
            And(a, b) | Or(a, b) | Until(a, b) | Release(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            True | False => {}
            Atom(a) => {
                out.insert(a.clone());
            }
            Not(f) | Next(f) | Eventually(f) | Globally(f) => f.collect_atoms(out),
            And(a, b) | Or(a, b) | Until(a, b) | Release(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Negation normal form: negations only on atoms, `F`/`G` rewritten as
    /// `tt U _` and `ff R _`.
    pub fn nnf(&self) -> LtlFormula {
        self.nnf_polarity(true)
    }

    fn nnf_polarity(&self, positive: bool) -> LtlFormula {
        let p = |f: &LtlFormula| f.nnf_polarity(positive);
        match (self, positive) {
            (True, true) | (False, false) => True,
            (True, false) | (False, true) => False,
            (Atom(a), true) => Atom(a.clone()),
            (Atom(a), false) => Self::not(Atom(a.clone())),
            (Not(f), _) => f.nnf_polarity(!positive),
            (And(a, b), true) | (Or(a, b), false) => Self::and(p(a), p(b)),
            (Or(a, b), true) | (And(a, b), false) => Self::or(p(a), p(b)),
            (Next(f), _) => Self::next(p(f)),
            (Until(a, b), true) | (Release(a, b), false) => Self::until(p(a), p(b)),
            (Release(a, b), true) | (Until(a, b), false) => Self::release(p(a), p(b)),
            (Eventually(f), true) | (Globally(f), false) => Self::until(True, p(f)),
            (Globally(f), true) | (Eventually(f), false) => Self::release(False, p(f)),
        }
    }
}

// Binding strength used by Display to place parentheses.
fn strength(f: &LtlFormula) -> u8 {
    match f {
        Or(..) => 0,
        And(..) => 1,
        Until(..) | Release(..) => 2,
        _ => 3,
    }
}

impl fmt::Display for LtlFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |g: &LtlFormula, min: u8, f: &mut fmt::Formatter<'_>| {
            if strength(g) < min {
                write!(f, "({g})")
            } else {
                write!(f, "{g}")
            }
        };
        match self {
            True => write!(f, "tt"),
            False => write!(f, "ff"),
            Atom(a) => write!(f, "{a}"),
            Not(g) | Next(g) | Eventually(g) | Globally(g) => {
                let op = match self {
                    Not(_) => "!",
                    Next(_) => "X ",
                    Eventually(_) => "F ",
                    _ => "G ",
                };
                write!(f, "{op}")?;
                wrap(g, 3, f)
            }
            And(a, b) | Or(a, b) => {
                let (op, s) = if matches!(self, And(..)) {
                    (" & ", 1)
                } else {
                    (" | ", 0)
                };
                wrap(a, s, f)?;
                write!(f, "{op}")?;
                wrap(b, s, f)
            }
            Until(a, b) | Release(a, b) => {
                let op = if matches!(self, Until(..)) {
                    " U "
                } else {
                    " R "
                };
                // right associative: the left operand needs to bind tighter
                wrap(a, 3, f)?;
                write!(f, "{op}")?;
                wrap(b, 2, f)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Ident(String),
    Bang,
    Amp,
    Bar,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Token)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let column = text[..pos].chars().count() + 1;
        match c {
            c if c.is_whitespace() => {}
            '!' | '¬' => out.push((column, Token::Bang)),
            '&' | '∧' => out.push((column, Token::Amp)),
            '|' | '∨' => out.push((column, Token::Bar)),
            '(' => out.push((column, Token::LParen)),
            ')' => out.push((column, Token::RParen)),
            c if c.is_alphanumeric() || c == '_' || c == '.' => {
                let start = pos;
                while i + 1 < chars.len() && {
                    let d = chars[i + 1].1;
                    d.is_alphanumeric() || d == '_' || d == '.'
                } {
                    i += 1;
                }
                let end = chars.get(i + 1).map_or(text.len(), |&(p, _)| p);
                out.push((column, Token::Ident(text[start..end].to_string())));
            }
            other => {
                return Err(Error::Syntax {
                    line: 1,
                    column,
                    message: format!("unexpected character '{other}'"),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end_column: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn column(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map_or(self.end_column, |(c, _)| *c)
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            line: 1,
            column: self.column(),
            message: message.into(),
        }
    }

    fn is_keyword(&self, word: &str) -> bool {
        matches!(self.peek(), Some(Token::Ident(w)) if w == word)
    }

    fn disjunction(&mut self) -> Result<LtlFormula> {
        let mut left = self.conjunction()?;
        while self.peek() == Some(&Token::Bar) {
            self.pos += 1;
            left = LtlFormula::or(left, self.conjunction()?);
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<LtlFormula> {
        let mut left = self.binary_temporal()?;
        while self.peek() == Some(&Token::Amp) {
            self.pos += 1;
            left = LtlFormula::and(left, self.binary_temporal()?);
        }
        Ok(left)
    }

    fn binary_temporal(&mut self) -> Result<LtlFormula> {
        let left = self.unary()?;
        if self.is_keyword("U") {
            self.pos += 1;
            return Ok(LtlFormula::until(left, self.binary_temporal()?));
        }
        if self.is_keyword("R") {
            self.pos += 1;
            return Ok(LtlFormula::release(left, self.binary_temporal()?));
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<LtlFormula> {
        let token = self
            .peek()
            .cloned()
            .ok_or_else(|| self.error("unexpected end of formula"))?;
        self.pos += 1;
        match token {
            Token::Bang => Ok(LtlFormula::not(self.unary()?)),
            Token::LParen => {
                let inner = self.disjunction()?;
                if self.peek() != Some(&Token::RParen) {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Token::Ident(word) => match word.as_str() {
                "X" => Ok(LtlFormula::next(self.unary()?)),
                "F" => Ok(LtlFormula::eventually(self.unary()?)),
                "G" => Ok(LtlFormula::globally(self.unary()?)),
                "tt" | "true" => Ok(True),
                "ff" | "false" => Ok(False),
                "U" | "R" => {
                    self.pos -= 1;
                    Err(self.error(format!("'{word}' needs a left operand")))
                }
                _ => Ok(Atom(word)),
            },
            _ => {
                self.pos -= 1;
                Err(self.error("expected a formula"))
            }
        }
    }
}

impl FromStr for LtlFormula {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let tokens = lex(text)?;
        let mut parser = Parser {
            tokens,
            pos: 0,
            end_column: text.chars().count() + 1,
        };
        let formula = parser.disjunction()?;
        if parser.pos != parser.tokens.len() {
            return Err(parser.error("unexpected trailing input"));
        }
        Ok(formula)
    }
}

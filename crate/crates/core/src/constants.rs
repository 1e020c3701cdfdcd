//! Parser for symbolic real-number expressions on the command line.
//!
//! Sequence parameters are often algebraic numbers — `sqrt(2)`,
//! `cbrt(4),cbrt(2)`, `sqrt(2)+1/2` — and forcing users to paste decimal
//! expansions would both lose precision and hide intent. This module
//! evaluates a small expression grammar to f64:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | number | name | name '(' expr ')'
//! ```
//!
//! Names: functions `sqrt`, `cbrt`; constants `pi`, `e`, `golden` (alias
//! `phi`). Numbers accept decimal and scientific notation. Vectors and
//! matrices are comma-separated lists of expressions; commas inside
//! parentheses belong to the enclosed expression.

use crate::error::{Error, Result};
use crate::lattice_space::Mat2;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Open,
    Close,
}

fn tokenize(input: &str) -> Result<Vec<Token>> {
    let bytes = input.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                tokens.push(Token::Plus);
                i += 1;
            }
            '-' => {
                tokens.push(Token::Minus);
                i += 1;
            }
            '*' => {
                tokens.push(Token::Star);
                i += 1;
            }
            '/' => {
                tokens.push(Token::Slash);
                i += 1;
            }
            '(' => {
                tokens.push(Token::Open);
                i += 1;
            }
            ')' => {
                tokens.push(Token::Close);
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && matches!(bytes[i] as char, '0'..='9' | '.') {
                    i += 1;
                }
                // scientific suffix: e or E, optional sign, digits
                if i < bytes.len()
                    && matches!(bytes[i] as char, 'e' | 'E')
                    && i + 1 < bytes.len()
                    && (bytes[i + 1].is_ascii_digit()
                        || (matches!(bytes[i + 1] as char, '+' | '-')
                            && i + 2 < bytes.len()
                            && bytes[i + 2].is_ascii_digit()))
                {
                    i += 2;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                let text = &input[start..i];
                let v: f64 = text.parse().map_err(|_| {
                    Error::Parse(format!("bad number {text:?} at byte {start} of {input:?}"))
                })?;
                tokens.push(Token::Num(v));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && matches!(bytes[i] as char, 'a'..='z' | 'A'..='Z' | '0'..='9' | '_')
                {
                    i += 1;
                }
                tokens.push(Token::Ident(input[start..i].to_ascii_lowercase()));
            }
            other => {
                return Err(Error::Parse(format!(
                    "unexpected character {other:?} at byte {i} of {input:?}"
                )));
            }
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    input: &'a str,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<&Token> {
        let t = self.tokens.get(self.pos);
        self.pos += 1;
        t
    }

    fn fail(&self, what: &str) -> Error {
        Error::Parse(format!("{what} in {:?}", self.input))
    }

    fn expr(&mut self) -> Result<f64> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc += self.term()?;
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc -= self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<f64> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    acc *= self.factor()?;
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    let d = self.factor()?;
                    if d == 0.0 {
                        return Err(self.fail("division by zero"));
                    }
                    acc /= d;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<f64> {
        match self.bump().cloned() {
            Some(Token::Minus) => Ok(-self.factor()?),
            Some(Token::Num(v)) => Ok(v),
            Some(Token::Open) => {
                let v = self.expr()?;
                match self.bump() {
                    Some(Token::Close) => Ok(v),
                    _ => Err(self.fail("expected ')'")),
                }
            }
            Some(Token::Ident(name)) => {
                if self.peek() == Some(&Token::Open) {
                    self.pos += 1;
                    let arg = self.expr()?;
                    let v = match self.bump() {
                        Some(Token::Close) => self.apply(&name, arg)?,
                        _ => return Err(self.fail("expected ')'")),
                    };
                    Ok(v)
                } else {
                    self.constant(&name)
                }
            }
            _ => Err(self.fail("expected a number, constant or function")),
        }
    }

    fn apply(&self, name: &str, arg: f64) -> Result<f64> {
        match name {
            "sqrt" => {
                if arg < 0.0 {
                    Err(self.fail("sqrt of a negative number"))
                } else {
                    Ok(arg.sqrt())
                }
            }
            "cbrt" => Ok(arg.cbrt()),
            other => Err(self.fail(&format!("unknown function {other:?}"))),
        }
    }

    fn constant(&self, name: &str) -> Result<f64> {
        match name {
            "pi" => Ok(std::f64::consts::PI),
            "e" => Ok(std::f64::consts::E),
            "golden" | "phi" => Ok(0.5 * (1.0 + 5.0_f64.sqrt())),
            other => Err(self.fail(&format!("unknown constant {other:?}"))),
        }
    }
}

/// Evaluate one symbolic real expression.
pub fn parse_real(input: &str) -> Result<f64> {
    let tokens = tokenize(input)?;
    if tokens.is_empty() {
        return Err(Error::Parse(format!("empty expression {input:?}")));
    }
    let mut p = Parser {
        tokens: &tokens,
        pos: 0,
        input,
    };
    let v = p.expr()?;
    if p.pos != tokens.len() {
        return Err(Error::Parse(format!(
            "trailing input after a complete expression in {input:?}"
        )));
    }
    if !v.is_finite() {
        return Err(Error::Parse(format!("{input:?} evaluates to {v}")));
    }
    Ok(v)
}

/// Split on top-level commas (commas inside parentheses stay put) and
/// evaluate each piece.
pub fn parse_components(input: &str) -> Result<Vec<f64>> {
    let mut parts = Vec::new();
    let mut depth: i32 = 0;
    let mut start = 0;
    for (i, c) in input.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&input[start..i]);
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(Error::Parse(format!("unbalanced ')' in {input:?}")));
        }
    }
    parts.push(&input[start..]);
    parts.iter().map(|p| parse_real(p)).collect()
}

/// Parse exactly two comma-separated expressions, e.g. `cbrt(4),cbrt(2)`.
pub fn parse_pair(input: &str) -> Result<[f64; 2]> {
    let v = parse_components(input)?;
    if v.len() != 2 {
        return Err(Error::Parse(format!(
            "expected two comma-separated values, got {} in {input:?}",
            v.len()
        )));
    }
    Ok([v[0], v[1]])
}

/// Parse a row-major 2×2 matrix `a,b,c,d`.
pub fn parse_mat2(input: &str) -> Result<Mat2> {
    let v = parse_components(input)?;
    if v.len() != 4 {
        return Err(Error::Parse(format!(
            "expected four comma-separated entries a,b,c,d, got {} in {input:?}",
            v.len()
        )));
    }
    Ok(Mat2 {
        a: v[0],
        b: v[1],
        c: v[2],
        d: v[3],
    })
}

//! Input grammar:
//!
//! ```text
//! input   := "ring" (name ":" int)+ ";" "ideal" poly ("," poly)* ";" [options]
//! options := "options" (key "=" int)* [";"]
//! poly    := ["+" | "-"] term (("+" | "-") term)*
//! term    := factor (["*"] factor)*
//! factor  := int ["/" int] | name ["^" int] | "(" poly ")" ["^" int]
//! ```
//!
//! Option keys are `depth`, `order`, `weights` (the weight bound) and `jet`.
//! `#` starts a comment that runs to the end of the line.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use thiserror::Error;

use crate::algebra::{mul, Generator, Poly, Rational};
use crate::resolvent::{is_reserved_name, InputIdeal};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("invalid input: {0}")]
    Semantic(String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InputOptions {
    pub depth: Option<u32>,
    pub order: Option<u32>,
    pub weight_bound: Option<i64>,
    pub jet: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedInput {
    pub ideal: InputIdeal,
    pub options: InputOptions,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, column);
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            Tok::Int(s.parse().expect("digits"))
        } else if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if ":;,^*+-/()=".contains(c) {
            i += 1;
            Tok::Sym(c)
        } else {
            return Err(ParseError::Syntax { line, column, message: format!("unexpected character '{c}'") });
        };
        column += i - start;
        out.push(Token { tok, line: l0, column: c0 });
    }
    out.push(Token { tok: Tok::End, line, column });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    vars: BTreeMap<String, Generator>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let t = &self.toks[self.pos];
        Err(ParseError::Syntax { line: t.line, column: t.column, message: message.into() })
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Int(n) => format!("'{n}'"),
            Tok::Sym(c) => format!("'{c}'"),
            Tok::End => "end of input".into(),
        }
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            self.error(format!("expected '{c}', found {}", self.describe()))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        if *self.peek() == Tok::Ident(kw.into()) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected '{kw}', found {}", self.describe()))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.pos += 1;
                Ok(s)
            }
            _ => self.error(format!("expected a name, found {}", self.describe())),
        }
    }

    fn int(&mut self) -> Result<BigInt, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.pos += 1;
                Ok(n)
            }
            _ => self.error(format!("expected an integer, found {}", self.describe())),
        }
    }

    fn small_int<T: TryFrom<BigInt>>(&mut self) -> Result<T, ParseError> {
        let n = self.int()?;
        self.pos -= 1;
        match T::try_from(n) {
            Ok(v) => {
                self.pos += 1;
                Ok(v)
            }
            Err(_) => self.error("integer out of range"),
        }
    }

    fn ring(&mut self) -> Result<Vec<Generator>, ParseError> {
        self.expect_keyword("ring")?;
        let mut vars = Vec::new();
        while let Tok::Ident(_) = self.peek() {
            let name = self.ident()?;
            if is_reserved_name(&name) || name == "ring" || name == "ideal" || name == "options" {
                return Err(ParseError::Semantic(format!("variable name '{name}' is reserved")));
            }
            if self.vars.contains_key(&name) {
                return Err(ParseError::Semantic(format!("variable '{name}' declared twice")));
            }
            self.expect_sym(':')?;
            let negative = self.eat_sym('-');
            let w: i64 = self.small_int()?;
            let w = if negative { -w } else { w };
            if w <= 0 {
                return Err(ParseError::Semantic(format!("variable '{name}' has non-positive weight {w}")));
            }
            let g = Generator::new(vars.len() as u32, name.clone(), 0, w, 0);
            self.vars.insert(name, g.clone());
            vars.push(g);
        }
        if vars.is_empty() {
            return self.error("expected at least one variable");
        }
        self.expect_sym(';')?;
        Ok(vars)
    }

    fn poly(&mut self) -> Result<Poly, ParseError> {
        let mut negative = if self.eat_sym('-') {
            true
        } else {
            self.eat_sym('+');
            false
        };
        let mut acc = Poly::zero();
        loop {
            let t = self.term()?;
            acc = if negative { &acc - &t } else { &acc + &t };
            if self.eat_sym('+') {
                negative = false;
            } else if self.eat_sym('-') {
                negative = true;
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Tok::Int(_) | Tok::Ident(_) | Tok::Sym('('))
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat_sym('*') {
                acc = mul(&acc, &self.factor()?);
            } else if self.starts_factor() {
                acc = mul(&acc, &self.factor()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self, base: Poly) -> Result<Poly, ParseError> {
        if !self.eat_sym('^') {
            return Ok(base);
        }
        let e: u32 = self.small_int()?;
        let mut out = Poly::one();
        for _ in 0..e {
            out = mul(&out, &base);
        }
        Ok(out)
    }

    fn factor(&mut self) -> Result<Poly, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.pos += 1;
                let mut q = Rational::from_integer(n);
                if self.eat_sym('/') {
                    let d = self.int()?;
                    if d == BigInt::from(0) {
                        self.pos -= 1;
                        return self.error("division by zero");
                    }
                    q /= Rational::from_integer(d);
                }
                self.power(Poly::constant(q))
            }
            Tok::Ident(name) => {
                let Some(g) = self.vars.get(&name) else {
                    return Err(ParseError::Semantic(format!("unknown variable '{name}'")));
                };
                let p = Poly::var(g.var);
                self.pos += 1;
                self.power(p)
            }
            Tok::Sym('(') => {
                self.pos += 1;
                let p = self.poly()?;
                self.expect_sym(')')?;
                self.power(p)
            }
            _ => self.error(format!("expected a coefficient, variable or '(', found {}", self.describe())),
        }
    }

    fn options(&mut self) -> Result<InputOptions, ParseError> {
        let mut opts = InputOptions::default();
        if *self.peek() != Tok::Ident("options".into()) {
            return Ok(opts);
        }
        self.pos += 1;
        while let Tok::Ident(key) = self.peek().clone() {
            self.pos += 1;
            self.expect_sym('=')?;
            match key.as_str() {
                "depth" => opts.depth = Some(self.small_int()?),
                "order" => opts.order = Some(self.small_int()?),
                "weights" => opts.weight_bound = Some(self.small_int()?),
                "jet" => opts.jet = Some(self.small_int()?),
                _ => {
                    self.pos -= 2;
                    return self.error(format!("unknown option '{key}'"));
                }
            }
        }
        self.eat_sym(';');
        Ok(opts)
    }
}

pub fn parse_input(text: &str) -> Result<ParsedInput, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, vars: BTreeMap::new() };
    let variables = p.ring()?;
    p.expect_keyword("ideal")?;
    let mut generators = vec![p.poly()?];
    while p.eat_sym(',') {
        generators.push(p.poly()?);
    }
    p.expect_sym(';')?;
    let options = p.options()?;
    if *p.peek() != Tok::End {
        return p.error(format!("expected end of input, found {}", p.describe()));
    }
    let ideal = match options.jet {
        Some(n) => InputIdeal::from_jet(variables, generators, n),
        None => InputIdeal::new(variables, generators),
    }
    .map_err(|e| ParseError::Semantic(e.to_string()))?;
    Ok(ParsedInput { ideal, options })
}

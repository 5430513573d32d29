//! Lexer and recursive-descent parser for the expression DSL.
//!
//! Precedence, tightest first:
//! * sets: `~` complement, then `&`, then `|` and `\` at the same level;
//! * sequences: `on` restriction, then `conj`/unary minus, then `*`,
//!   then `+` and `-`;
//! * points: `n=5`, `+inf mod M == r`, `-inf mod M == r`.
//!
//! Errors carry line and column plus an expected-token hint.

use crate::ast::*;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at line {}, column {}: {}",
            self.line, self.col, self.message
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    EqEq,
    Eq,
    Amp,
    Pipe,
    Backslash,
    Tilde,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Semi,
    DotDot,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "integer {}", n),
            Tok::Ident(s) => write!(f, "'{}'", s),
            Tok::Plus => write!(f, "'+'"),
            Tok::Minus => write!(f, "'-'"),
            Tok::Star => write!(f, "'*'"),
            Tok::Slash => write!(f, "'/'"),
            Tok::Caret => write!(f, "'^'"),
            Tok::EqEq => write!(f, "'=='"),
            Tok::Eq => write!(f, "'='"),
            Tok::Amp => write!(f, "'&'"),
            Tok::Pipe => write!(f, "'|'"),
            Tok::Backslash => write!(f, "'\\'"),
            Tok::Tilde => write!(f, "'~'"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::LBrace => write!(f, "'{{'"),
            Tok::RBrace => write!(f, "'}}'"),
            Tok::LBracket => write!(f, "'['"),
            Tok::RBracket => write!(f, "']'"),
            Tok::Comma => write!(f, "','"),
            Tok::Semi => write!(f, "';'"),
            Tok::DotDot => write!(f, "'..'"),
        }
    }
}

#[derive(Debug, Clone)]
struct SpannedTok {
    tok: Tok,
    span: Span,
}

fn lex(text: &str) -> Result<Vec<SpannedTok>, ParseError> {
    let mut out = vec![];
    let bytes = text.as_bytes();
    let mut i = 0;
    let mut line = 1u32;
    let mut col = 1u32;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let (start, sl, sc) = (i, line, col);
        let mut push = |tok: Tok, len: usize| {
            out.push(SpannedTok {
                tok,
                span: Span {
                    start,
                    end: start + len,
                    line: sl,
                    col: sc,
                },
            });
        };
        match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            c if c.is_whitespace() => {
                col += 1;
                i += 1;
                continue;
            }
            '0'..='9' => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                let lit = &text[i..j];
                let n: i64 = lit.parse().map_err(|_| ParseError {
                    line: sl,
                    col: sc,
                    message: format!("integer literal '{}' out of range", lit),
                })?;
                push(Tok::Int(n), j - i);
                col += (j - i) as u32;
                i = j;
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < bytes.len()
                    && ((bytes[j] as char).is_ascii_alphanumeric() || bytes[j] == b'_')
                {
                    j += 1;
                }
                push(Tok::Ident(text[i..j].to_string()), j - i);
                col += (j - i) as u32;
                i = j;
                continue;
            }
            '=' => {
                if i + 1 < bytes.len() && bytes[i + 1] == b'=' {
                    push(Tok::EqEq, 2);
                    col += 2;
                    i += 2;
                } else {
                    push(Tok::Eq, 1);
                    col += 1;
                    i += 1;
                }
                continue;
            }
            '.' => {
                if i + 1 < bytes.len() && bytes[i + 1] == b'.' {
                    push(Tok::DotDot, 2);
                    col += 2;
                    i += 2;
                    continue;
                }
                return Err(ParseError {
                    line: sl,
                    col: sc,
                    message: "unexpected '.'; did you mean '..'?".into(),
                });
            }
            _ => {
                let tok = match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '&' => Tok::Amp,
                    '|' => Tok::Pipe,
                    '\\' => Tok::Backslash,
                    '~' => Tok::Tilde,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    ',' => Tok::Comma,
                    ';' => Tok::Semi,
                    other => {
                        return Err(ParseError {
                            line: sl,
                            col: sc,
                            message: format!("unexpected character '{}'", other),
                        })
                    }
                };
                push(tok, 1);
                col += 1;
                i += 1;
                continue;
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<SpannedTok>,
    pos: usize,
    text_len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (u32, u32) {
        match self.toks.get(self.pos) {
            Some(t) => (t.span.line, t.span.col),
            None => match self.toks.last() {
                Some(t) => (t.span.line, t.span.col + (t.span.end - t.span.start) as u32),
                None => (1, 1),
            },
        }
    }

    fn span_here(&self) -> Span {
        match self.toks.get(self.pos) {
            Some(t) => t.span,
            None => {
                let (line, col) = self.here();
                Span {
                    start: self.text_len,
                    end: self.text_len,
                    line,
                    col,
                }
            }
        }
    }

    fn err(&self, expected: &str) -> ParseError {
        let (line, col) = self.here();
        let found = match self.peek() {
            Some(t) => format!("{}", t),
            None => "end of input".into(),
        };
        ParseError {
            line,
            col,
            message: format!("expected {}, found {}", expected, found),
        }
    }

    fn advance(&mut self) -> Option<SpannedTok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Span, ParseError> {
        match self.peek() {
            Some(t) if *t == tok => Ok(self.advance().unwrap().span),
            _ => Err(self.err(what)),
        }
    }

    fn expect_ident(&mut self, name: &str) -> Result<Span, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == name => Ok(self.advance().unwrap().span),
            _ => Err(self.err(&format!("'{}'", name))),
        }
    }

    fn expect_int(&mut self, what: &str) -> Result<(i64, Span), ParseError> {
        match self.peek() {
            Some(Tok::Int(_)) => {
                let t = self.advance().unwrap();
                match t.tok {
                    Tok::Int(n) => Ok((n, t.span)),
                    _ => unreachable!(),
                }
            }
            _ => Err(self.err(what)),
        }
    }

    /// Signed integer literal.
    fn signed_int(&mut self, what: &str) -> Result<(i64, Span), ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            let s1 = self.advance().unwrap().span;
            let (n, s2) = self.expect_int(what)?;
            Ok((-n, s1.join(s2)))
        } else {
            self.expect_int(what)
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    // ---- sets ----

    fn set_expr(&mut self) -> Result<SetAst, ParseError> {
        let mut lhs = self.set_inter()?;
        loop {
            match self.peek() {
                Some(Tok::Pipe) => {
                    self.advance();
                    let rhs = self.set_inter()?;
                    let span = lhs.span.join(rhs.span);
                    lhs = Spanned::new(SetExpr::Union(Box::new(lhs), Box::new(rhs)), span);
                }
                Some(Tok::Backslash) => {
                    self.advance();
                    let rhs = self.set_inter()?;
                    let span = lhs.span.join(rhs.span);
                    lhs = Spanned::new(SetExpr::Difference(Box::new(lhs), Box::new(rhs)), span);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn set_inter(&mut self) -> Result<SetAst, ParseError> {
        let mut lhs = self.set_atom()?;
        while self.peek() == Some(&Tok::Amp) {
            self.advance();
            let rhs = self.set_atom()?;
            let span = lhs.span.join(rhs.span);
            lhs = Spanned::new(SetExpr::Intersect(Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn set_atom(&mut self) -> Result<SetAst, ParseError> {
        match self.peek() {
            Some(Tok::Tilde) => {
                let s1 = self.advance().unwrap().span;
                let inner = self.set_atom()?;
                let span = s1.join(inner.span);
                Ok(Spanned::new(SetExpr::Complement(Box::new(inner)), span))
            }
            Some(Tok::LParen) => {
                let s1 = self.advance().unwrap().span;
                let inner = self.set_expr()?;
                let s2 = self.expect(Tok::RParen, "')'")?;
                Ok(Spanned::new(inner.node, s1.join(s2)))
            }
            Some(Tok::Ident(s)) if s == "mod" => {
                let s1 = self.advance().unwrap().span;
                let (m, _) = self.expect_int("a modulus")?;
                self.expect(Tok::EqEq, "'=='")?;
                let (r, s2) = self.signed_int("a residue")?;
                Ok(Spanned::new(
                    SetExpr::Residue {
                        modulus: m,
                        residue: r,
                    },
                    s1.join(s2),
                ))
            }
            Some(Tok::Ident(s)) if s == "all" => {
                let span = self.advance().unwrap().span;
                Ok(Spanned::new(SetExpr::All, span))
            }
            Some(Tok::LBrace) => {
                let s1 = self.advance().unwrap().span;
                let mut ns = vec![];
                if self.peek() != Some(&Tok::RBrace) {
                    loop {
                        let (n, _) = self.signed_int("an integer")?;
                        ns.push(n);
                        if self.peek() == Some(&Tok::Comma) {
                            self.advance();
                        } else {
                            break;
                        }
                    }
                }
                let s2 = self.expect(Tok::RBrace, "'}'")?;
                Ok(Spanned::new(SetExpr::Finite(ns), s1.join(s2)))
            }
            Some(Tok::LBracket) => {
                let s1 = self.advance().unwrap().span;
                let lo = if self.peek() == Some(&Tok::DotDot) {
                    None
                } else {
                    Some(self.signed_int("an interval endpoint")?.0)
                };
                self.expect(Tok::DotDot, "'..'")?;
                let hi = if self.peek() == Some(&Tok::RBracket) {
                    None
                } else {
                    Some(self.signed_int("an interval endpoint")?.0)
                };
                if lo.is_none() && hi.is_none() {
                    return Err(self.err("at least one interval endpoint"));
                }
                let s2 = self.expect(Tok::RBracket, "']'")?;
                Ok(Spanned::new(SetExpr::Interval(lo, hi), s1.join(s2)))
            }
            _ => Err(self.err("a set expression")),
        }
    }

    // ---- sequences ----

    fn seq_expr(&mut self) -> Result<SeqAst, ParseError> {
        let mut lhs = self.seq_mul()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.advance();
                    let rhs = self.seq_mul()?;
                    let span = lhs.span.join(rhs.span);
                    lhs = Spanned::new(SeqExpr::Add(Box::new(lhs), Box::new(rhs)), span);
                }
                Some(Tok::Minus) => {
                    self.advance();
                    let rhs = self.seq_mul()?;
                    let span = lhs.span.join(rhs.span);
                    lhs = Spanned::new(SeqExpr::Sub(Box::new(lhs), Box::new(rhs)), span);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn seq_mul(&mut self) -> Result<SeqAst, ParseError> {
        let mut lhs = self.seq_unary()?;
        while self.peek() == Some(&Tok::Star) {
            self.advance();
            let rhs = self.seq_unary()?;
            let span = lhs.span.join(rhs.span);
            lhs = Spanned::new(SeqExpr::Mul(Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn seq_unary(&mut self) -> Result<SeqAst, ParseError> {
        match self.peek() {
            Some(Tok::Minus) => {
                let s1 = self.advance().unwrap().span;
                let inner = self.seq_unary()?;
                let span = s1.join(inner.span);
                Ok(Spanned::new(SeqExpr::Neg(Box::new(inner)), span))
            }
            Some(Tok::Ident(s)) if s == "conj" => {
                let s1 = self.advance().unwrap().span;
                self.expect(Tok::LParen, "'('")?;
                let inner = self.seq_expr()?;
                let s2 = self.expect(Tok::RParen, "')'")?;
                Ok(Spanned::new(
                    SeqExpr::Conj(Box::new(inner)),
                    s1.join(s2),
                ))
            }
            _ => self.seq_postfix(),
        }
    }

    fn seq_postfix(&mut self) -> Result<SeqAst, ParseError> {
        let mut base = self.seq_atom()?;
        while matches!(self.peek(), Some(Tok::Ident(s)) if s == "on") {
            self.advance();
            let set = self.set_atom()?;
            let span = base.span.join(set.span);
            base = Spanned::new(SeqExpr::On(Box::new(base), set), span);
        }
        Ok(base)
    }

    fn seq_atom(&mut self) -> Result<SeqAst, ParseError> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                let s1 = self.advance().unwrap().span;
                let inner = self.seq_expr()?;
                let s2 = self.expect(Tok::RParen, "')'")?;
                Ok(Spanned::new(inner.node, s1.join(s2)))
            }
            Some(Tok::Int(_)) => {
                let (num, s1) = self.expect_int("a number")?;
                let (den, mut span) = if self.peek() == Some(&Tok::Slash) {
                    self.advance();
                    let (d, s2) = self.expect_int("a denominator")?;
                    (d, s1.join(s2))
                } else {
                    (1, s1)
                };
                let imaginary = if matches!(self.peek(), Some(Tok::Ident(s)) if s == "i") {
                    span = span.join(self.advance().unwrap().span);
                    true
                } else {
                    false
                };
                Ok(Spanned::new(
                    SeqExpr::Rational {
                        num,
                        den,
                        imaginary,
                    },
                    span,
                ))
            }
            Some(Tok::Ident(s)) if s == "i" => {
                let span = self.advance().unwrap().span;
                Ok(Spanned::new(SeqExpr::ImaginaryUnit, span))
            }
            Some(Tok::Ident(s)) if s == "ind" => {
                let s1 = self.advance().unwrap().span;
                self.expect(Tok::LParen, "'('")?;
                let set = self.set_expr()?;
                let s2 = self.expect(Tok::RParen, "')'")?;
                Ok(Spanned::new(SeqExpr::Indicator(set), s1.join(s2)))
            }
            Some(Tok::Ident(s)) if s == "rat" => {
                let s1 = self.advance().unwrap().span;
                self.expect(Tok::LParen, "'('")?;
                let numer = self.poly()?;
                self.expect(Tok::Semi, "';' between numerator and denominator")?;
                let denom = self.poly()?;
                let s2 = self.expect(Tok::RParen, "')'")?;
                Ok(Spanned::new(
                    SeqExpr::RationalFn { numer, denom },
                    s1.join(s2),
                ))
            }
            Some(Tok::Ident(s)) if s == "geo" => {
                let s1 = self.advance().unwrap().span;
                self.expect(Tok::LParen, "'('")?;
                let (num, _) = self.expect_int("a rate numerator")?;
                let den = if self.peek() == Some(&Tok::Slash) {
                    self.advance();
                    self.expect_int("a rate denominator")?.0
                } else {
                    1
                };
                let s2 = self.expect(Tok::RParen, "')'")?;
                Ok(Spanned::new(SeqExpr::Geometric { num, den }, s1.join(s2)))
            }
            _ => Err(self.err("a sequence expression")),
        }
    }

    /// Integer polynomial in n: sum of terms `c`, `c*n^k`, `n^k`, `n`.
    fn poly(&mut self) -> Result<PolyAst, ParseError> {
        let start = self.span_here();
        let mut terms = vec![];
        let mut first = true;
        loop {
            let negative = match self.peek() {
                Some(Tok::Minus) => {
                    self.advance();
                    true
                }
                Some(Tok::Plus) if !first => {
                    self.advance();
                    false
                }
                _ if first => false,
                _ => break,
            };
            let (coeff, power) = self.poly_term()?;
            terms.push((if negative { -coeff } else { coeff }, power));
            first = false;
            match self.peek() {
                Some(Tok::Plus) | Some(Tok::Minus) => continue,
                _ => break,
            }
        }
        if terms.is_empty() {
            return Err(self.err("a polynomial in n"));
        }
        let end = self.toks[self.pos - 1].span;
        Ok(PolyAst {
            terms,
            span: start.join(end),
        })
    }

    fn poly_term(&mut self) -> Result<(i64, u32), ParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(_)) => {
                let (c, _) = self.expect_int("a coefficient")?;
                if self.peek() == Some(&Tok::Star) {
                    self.advance();
                    let p = self.poly_var_power()?;
                    Ok((c, p))
                } else {
                    Ok((c, 0))
                }
            }
            Some(Tok::Ident(s)) if s == "n" => {
                let p = self.poly_var_power()?;
                Ok((1, p))
            }
            _ => Err(self.err("a polynomial term (like 3, n, 2*n^2)")),
        }
    }

    fn poly_var_power(&mut self) -> Result<u32, ParseError> {
        self.expect_ident("n")?;
        if self.peek() == Some(&Tok::Caret) {
            self.advance();
            let (p, span) = self.expect_int("an exponent")?;
            u32::try_from(p).map_err(|_| ParseError {
                line: span.line,
                col: span.col,
                message: format!("exponent {} out of range", p),
            })
        } else {
            Ok(1)
        }
    }

    // ---- points ----

    fn point_expr(&mut self) -> Result<PointAst, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(s)) if s == "n" => {
                let s1 = self.advance().unwrap().span;
                self.expect(Tok::Eq, "'='")?;
                let (v, s2) = self.signed_int("an integer")?;
                Ok(Spanned::new(PointExpr::Principal(v), s1.join(s2)))
            }
            Some(Tok::Plus) | Some(Tok::Minus) => {
                let sign_tok = self.advance().unwrap();
                let sign = if sign_tok.tok == Tok::Plus {
                    PointSign::Plus
                } else {
                    PointSign::Minus
                };
                self.expect_ident("inf")?;
                self.expect_ident("mod")?;
                let (m, _) = self.expect_int("a modulus")?;
                self.expect(Tok::EqEq, "'=='")?;
                let (r, s2) = self.signed_int("a residue")?;
                Ok(Spanned::new(
                    PointExpr::Direction {
                        sign,
                        modulus: m,
                        residue: r,
                    },
                    sign_tok.span.join(s2),
                ))
            }
            _ => Err(self.err("a point ('n=5' or '+inf mod M == r')")),
        }
    }

    fn finish<T>(&self, value: T) -> Result<T, ParseError> {
        if self.at_end() {
            Ok(value)
        } else {
            Err(self.err("end of input"))
        }
    }
}

fn parser_for(text: &str) -> Result<Parser, ParseError> {
    Ok(Parser {
        toks: lex(text)?,
        pos: 0,
        text_len: text.len(),
    })
}

pub fn parse_set(text: &str) -> Result<SetAst, ParseError> {
    let mut p = parser_for(text)?;
    let ast = p.set_expr()?;
    p.finish(ast)
}

pub fn parse_seq(text: &str) -> Result<SeqAst, ParseError> {
    let mut p = parser_for(text)?;
    let ast = p.seq_expr()?;
    p.finish(ast)
}

pub fn parse_point(text: &str) -> Result<PointAst, ParseError> {
    let mut p = parser_for(text)?;
    let ast = p.point_expr()?;
    p.finish(ast)
}

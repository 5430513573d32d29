//! Abstract syntax for the three expression sorts: sets, sequences, and
//! points. Every node carries its source span; the pretty printer emits a
//! canonical text that reparses to the same tree.

use std::fmt;

#[derive(Debug, Copy, Clone, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn join(self, other: Span) -> Span {
        Span {
            start: self.start.min(other.start),
            end: self.end.max(other.end),
            line: self.line.min(other.line),
            col: if other.line < self.line || (other.line == self.line && other.col < self.col) {
                other.col
            } else {
                self.col
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spanned<T> {
    pub node: T,
    pub span: Span,
}

impl<T> Spanned<T> {
    pub fn new(node: T, span: Span) -> Self {
        Spanned { node, span }
    }
}

pub type SetAst = Spanned<SetExpr>;
pub type SeqAst = Spanned<SeqExpr>;
pub type PointAst = Spanned<PointExpr>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetExpr {
    /// `all`: the whole line of integers.
    All,
    /// `{a, b, c}` (possibly empty).
    Finite(Vec<i64>),
    /// `[a..b]`, `[a..]`, `[..b]`.
    Interval(Option<i64>, Option<i64>),
    /// `mod M == r`.
    Residue { modulus: i64, residue: i64 },
    Union(Box<SetAst>, Box<SetAst>),
    Difference(Box<SetAst>, Box<SetAst>),
    Intersect(Box<SetAst>, Box<SetAst>),
    Complement(Box<SetAst>),
}

/// Integer polynomial in `n`, as written: a list of (coefficient, power).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyAst {
    pub terms: Vec<(i64, u32)>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeqExpr {
    /// `a/b` or `a/b i` (an imaginary literal when `imaginary`).
    Rational { num: i64, den: i64, imaginary: bool },
    /// Bare `i`.
    ImaginaryUnit,
    /// `ind(<set>)`.
    Indicator(SetAst),
    /// `rat(p ; q)`: p(n)/q(n) on all of Z.
    RationalFn { numer: PolyAst, denom: PolyAst },
    /// `geo(a/b)`: (a/b)^|n| on all of Z.
    Geometric { num: i64, den: i64 },
    /// `<seq> on <set>`: restriction.
    On(Box<SeqAst>, SetAst),
    Neg(Box<SeqAst>),
    Conj(Box<SeqAst>),
    Add(Box<SeqAst>, Box<SeqAst>),
    Sub(Box<SeqAst>, Box<SeqAst>),
    Mul(Box<SeqAst>, Box<SeqAst>),
}

#[derive(Debug, Copy, Clone, PartialEq, Eq)]
pub enum PointSign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointExpr {
    /// `n=5`.
    Principal(i64),
    /// `+inf mod M == r` / `-inf mod M == r`.
    Direction {
        sign: PointSign,
        modulus: i64,
        residue: i64,
    },
}

impl fmt::Display for SetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetExpr::All => write!(f, "all"),
            SetExpr::Finite(ns) => {
                write!(f, "{{")?;
                for (i, n) in ns.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}", n)?;
                }
                write!(f, "}}")
            }
            SetExpr::Interval(a, b) => match (a, b) {
                (Some(a), Some(b)) => write!(f, "[{}..{}]", a, b),
                (Some(a), None) => write!(f, "[{}..]", a),
                (None, Some(b)) => write!(f, "[..{}]", b),
                (None, None) => write!(f, "all"),
            },
            SetExpr::Residue { modulus, residue } => {
                write!(f, "mod {} == {}", modulus, residue)
            }
            SetExpr::Union(a, b) => write!(f, "({}) | ({})", a.node, b.node),
            SetExpr::Difference(a, b) => write!(f, "({}) \\ ({})", a.node, b.node),
            SetExpr::Intersect(a, b) => write!(f, "({}) & ({})", a.node, b.node),
            SetExpr::Complement(a) => write!(f, "~({})", a.node),
        }
    }
}

impl fmt::Display for PolyAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, p)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "{}", if *c < 0 { " - " } else { " + " })?;
            } else if *c < 0 {
                write!(f, "-")?;
            }
            let mag = c.unsigned_abs();
            match p {
                0 => write!(f, "{}", mag)?,
                _ => {
                    if mag != 1 {
                        write!(f, "{}*", mag)?;
                    }
                    write!(f, "n")?;
                    if *p > 1 {
                        write!(f, "^{}", p)?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for SeqExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeqExpr::Rational {
                num,
                den,
                imaginary,
            } => {
                if *den == 1 {
                    write!(f, "{}", num)?;
                } else {
                    write!(f, "{}/{}", num, den)?;
                }
                if *imaginary {
                    write!(f, " i")?;
                }
                Ok(())
            }
            SeqExpr::ImaginaryUnit => write!(f, "i"),
            SeqExpr::Indicator(s) => write!(f, "ind({})", s.node),
            SeqExpr::RationalFn { numer, denom } => write!(f, "rat({} ; {})", numer, denom),
            SeqExpr::Geometric { num, den } => write!(f, "geo({}/{})", num, den),
            SeqExpr::On(seq, set) => write!(f, "({}) on ({})", seq.node, set.node),
            SeqExpr::Neg(a) => write!(f, "-({})", a.node),
            SeqExpr::Conj(a) => write!(f, "conj({})", a.node),
            SeqExpr::Add(a, b) => write!(f, "({}) + ({})", a.node, b.node),
            SeqExpr::Sub(a, b) => write!(f, "({}) - ({})", a.node, b.node),
            SeqExpr::Mul(a, b) => write!(f, "({}) * ({})", a.node, b.node),
        }
    }
}

impl fmt::Display for PointExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointExpr::Principal(n) => write!(f, "n={}", n),
            PointExpr::Direction {
                sign,
                modulus,
                residue,
            } => {
                let s = match sign {
                    PointSign::Plus => "+inf",
                    PointSign::Minus => "-inf",
                };
                write!(f, "{} mod {} == {}", s, modulus, residue)
            }
        }
    }
}

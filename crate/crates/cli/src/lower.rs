//! Lowering from syntax trees to exact library values, with source
//! positions on every rejection.

use crate::ast::*;
use betaz::filters::UltrafilterSpec;
use betaz::num::{rat, GaussianRational};
use betaz::poly::IntPoly;
use betaz::setalg::Sign;
use betaz::{DefinableSet, SymbolicSequence};
use num_bigint::BigInt;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerError {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl fmt::Display for LowerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "error at line {}, column {}: {}",
            self.line, self.col, self.message
        )
    }
}

impl std::error::Error for LowerError {}

fn at(span: Span, message: impl fmt::Display) -> LowerError {
    LowerError {
        line: span.line,
        col: span.col,
        message: message.to_string(),
    }
}

pub fn lower_set(ast: &SetAst) -> Result<DefinableSet, LowerError> {
    match &ast.node {
        SetExpr::All => Ok(DefinableSet::integers()),
        SetExpr::Finite(ns) => Ok(DefinableSet::finite(ns)),
        SetExpr::Interval(Some(a), Some(b)) => {
            DefinableSet::interval(*a, *b).map_err(|e| at(ast.span, e))
        }
        SetExpr::Interval(Some(a), None) => Ok(DefinableSet::ray_ge(*a)),
        SetExpr::Interval(None, Some(b)) => Ok(DefinableSet::ray_le(*b)),
        SetExpr::Interval(None, None) => Ok(DefinableSet::integers()),
        SetExpr::Residue { modulus, residue } => {
            DefinableSet::residue_class(*modulus, *residue).map_err(|e| at(ast.span, e))
        }
        SetExpr::Union(a, b) => Ok(lower_set(a)?.union(&lower_set(b)?)),
        SetExpr::Difference(a, b) => Ok(lower_set(a)?.difference(&lower_set(b)?)),
        SetExpr::Intersect(a, b) => Ok(lower_set(a)?.intersect(&lower_set(b)?)),
        SetExpr::Complement(a) => Ok(lower_set(a)?.complement()),
    }
}

fn poly_from_ast(p: &PolyAst) -> IntPoly {
    let max_pow = p.terms.iter().map(|(_, k)| *k).max().unwrap_or(0) as usize;
    let mut coeffs = vec![BigInt::from(0); max_pow + 1];
    for (c, k) in &p.terms {
        coeffs[*k as usize] += BigInt::from(*c);
    }
    IntPoly::new(coeffs)
}

pub fn lower_seq(ast: &SeqAst) -> Result<SymbolicSequence, LowerError> {
    match &ast.node {
        SeqExpr::Rational {
            num,
            den,
            imaginary,
        } => {
            if *den == 0 {
                return Err(at(ast.span, "zero denominator in rational literal"));
            }
            let v = rat(*num, *den);
            let z = if *imaginary {
                GaussianRational::new(rat(0, 1), v)
            } else {
                GaussianRational::real(v)
            };
            Ok(SymbolicSequence::constant(z))
        }
        SeqExpr::ImaginaryUnit => Ok(SymbolicSequence::constant(GaussianRational::i())),
        SeqExpr::Indicator(set) => Ok(SymbolicSequence::indicator(lower_set(set)?)),
        SeqExpr::RationalFn { numer, denom } => {
            let p = poly_from_ast(numer);
            let q = poly_from_ast(denom);
            if q.is_zero() {
                return Err(at(denom.span, "denominator polynomial is zero"));
            }
            SymbolicSequence::rational_fn(p, q).map_err(|e| at(ast.span, e))
        }
        SeqExpr::Geometric { num, den } => {
            if *den == 0 {
                return Err(at(ast.span, "zero denominator in rate"));
            }
            SymbolicSequence::geometric(rat(*num, *den))
                .map_err(|_| at(ast.span, "rate must be in (0,1]"))
        }
        SeqExpr::On(seq, set) => {
            let base = lower_seq(seq)?;
            let support = lower_set(set)?;
            Ok(base.mul(&SymbolicSequence::indicator(support)))
        }
        SeqExpr::Neg(a) => Ok(lower_seq(a)?.neg()),
        SeqExpr::Conj(a) => Ok(lower_seq(a)?.conj()),
        SeqExpr::Add(a, b) => Ok(lower_seq(a)?.add(&lower_seq(b)?)),
        SeqExpr::Sub(a, b) => Ok(lower_seq(a)?.sub(&lower_seq(b)?)),
        SeqExpr::Mul(a, b) => Ok(lower_seq(a)?.mul(&lower_seq(b)?)),
    }
}

pub fn lower_point(ast: &PointAst) -> Result<UltrafilterSpec, LowerError> {
    match &ast.node {
        PointExpr::Principal(n) => Ok(UltrafilterSpec::principal(*n)),
        PointExpr::Direction {
            sign,
            modulus,
            residue,
        } => {
            let s = match sign {
                PointSign::Plus => Sign::Pos,
                PointSign::Minus => Sign::Neg,
            };
            UltrafilterSpec::direction(s, *modulus, *residue).map_err(|e| at(ast.span, e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_point, parse_seq, parse_set};
    use betaz::num::rat_int;

    #[test]
    fn lowered_intersection_matches_setalg() {
        let ast = parse_set("(mod 2 == 0) & (mod 3 == 0)").unwrap();
        let s = lower_set(&ast).unwrap();
        assert_eq!(s, DefinableSet::residue_class(6, 0).unwrap());
    }

    #[test]
    fn lowered_sequence_evaluates() {
        let ast = parse_seq("ind(mod 2 == 0) + rat(1 ; n^2+1)").unwrap();
        let f = lower_seq(&ast).unwrap();
        assert_eq!(f.eval(0), GaussianRational::real(rat_int(2)));
        assert_eq!(f.eval(1), GaussianRational::real(rat(1, 2)));
    }

    #[test]
    fn geo_rate_validation() {
        let ast = parse_seq("geo(3/2)").unwrap();
        let e = lower_seq(&ast).unwrap_err();
        assert!(e.message.contains("(0,1]"), "{}", e.message);
    }

    #[test]
    fn restriction_is_indicator_product() {
        let whole = lower_seq(&parse_seq("geo(1/2)").unwrap()).unwrap();
        let even = lower_seq(&parse_seq("geo(1/2) on (mod 2 == 0)").unwrap()).unwrap();
        for n in -10..=10 {
            if n % 2 == 0 {
                assert_eq!(even.eval(n), whole.eval(n));
            } else {
                assert!(even.eval(n).is_zero());
            }
        }
    }

    #[test]
    fn gaussian_constant() {
        let f = lower_seq(&parse_seq("1/2 + 3/4 i").unwrap()).unwrap();
        let v = f.eval(7);
        assert_eq!(v.re(), &rat(1, 2));
        assert_eq!(v.im(), &rat(3, 4));
    }

    #[test]
    fn point_lowering() {
        let p = lower_point(&parse_point("+inf mod 6 == 5").unwrap()).unwrap();
        assert_eq!(p, UltrafilterSpec::direction(Sign::Pos, 6, 5).unwrap());
        let bad = parse_point("+inf mod 6 == 7").unwrap();
        assert!(lower_point(&bad).is_err());
    }

    #[test]
    fn vanishing_denominator_positioned() {
        let ast = parse_seq("rat(1 ; n^2-4)").unwrap();
        let e = lower_seq(&ast).unwrap_err();
        assert!(e.message.contains("vanishes"), "{}", e.message);
        assert_eq!(e.line, 1);
    }
}

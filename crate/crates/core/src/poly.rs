//! Integer polynomials, rational-coefficient polynomials, and reduced
//! rational functions in one variable `n`.
//!
//! The rational-function layer carries the certified asymptotic facts the
//! rest of the crate leans on: Cauchy root bounds, monotone zones (no
//! critical points and no poles beyond a computable cutoff), stabilized
//! signs, and ratio-test starts for geometric envelopes. Everything here
//! is exact BigInt/BigRational arithmetic; no floats.

use crate::num::rat_pow;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Polynomial with integer coefficients, ascending powers, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `n`.
    pub fn var() -> Self {
        Self::from_i64(&[0, 1])
    }

    /// The monomial `n^k`.
    pub fn var_pow(k: usize) -> Self {
        Self::one().mul_var_pow(k)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn eval(&self, n: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * n + c;
        }
        acc
    }

    pub fn eval_i64(&self, n: i64) -> BigInt {
        self.eval(&BigInt::from(n))
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(len);
        for k in 0..len {
            let a = self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero);
            let b = other.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero);
            out.push(a + b);
        }
        IntPoly::new(out)
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiply by `n^k`.
    pub fn mul_var_pow(&self, k: usize) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); k];
        out.extend(self.coeffs.iter().cloned());
        IntPoly::new(out)
    }

    pub fn derivative(&self) -> IntPoly {
        if self.coeffs.len() <= 1 {
            return IntPoly::zero();
        }
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    /// Exact evaluation at a rational point.
    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// `p(-n)`.
    pub fn reflect(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 0 { c.clone() } else { -c.clone() })
                .collect(),
        )
    }

    /// `p(n+1)`, via binomial expansion.
    pub fn shift_one(&self) -> IntPoly {
        let mut out = IntPoly::zero();
        // Horner on p(x) with x := (n+1)
        let shift = IntPoly::from_i64(&[1, 1]);
        for c in self.coeffs.iter().rev() {
            out = out.mul(&shift).add(&IntPoly::constant(c.clone()));
        }
        out
    }

    /// gcd of all coefficients, non-negative.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = num_integer::Integer::gcd(&g, c);
        }
        g
    }

    /// Divides out the content, keeping the sign.
    fn primitive_keep_sign(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let c = self.content();
        IntPoly::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    /// Version with a positive leading coefficient (same roots, and the
    /// same division remainders up to quotient sign).
    fn positive_lead(&self) -> IntPoly {
        match self.leading() {
            Some(l) if l.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }

    /// Exact division by a known factor.
    fn div_exact(&self, g: &IntPoly) -> IntPoly {
        let (q, r) = self.to_qpoly().divrem(&g.to_qpoly());
        debug_assert!(r.is_zero(), "div_exact with a non-factor");
        IntPoly::new(
            q.coeffs
                .iter()
                .map(|c| {
                    debug_assert!(c.is_integer(), "exact quotient has integer coefficients");
                    c.to_integer()
                })
                .collect(),
        )
    }

    /// Pseudo-remainder against a divisor with positive leading
    /// coefficient: proportional to the true remainder by a positive
    /// factor. Integer arithmetic throughout.
    fn pseudo_rem(&self, div: &IntPoly) -> IntPoly {
        let dd = div.degree().expect("nonzero divisor");
        debug_assert!(div.leading().unwrap().is_positive());
        let lc = div.leading().unwrap().clone();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let top = r.leading().unwrap().clone();
            r = r.scale(&lc).sub(&div.mul_var_pow(dr - dd).scale(&top));
            // the leading terms cancel exactly; trim happens in new()
            r = r.primitive_keep_sign();
        }
        r
    }

    /// Writes `self = factor * prim` with `prim` of content 1 and positive
    /// leading coefficient. The zero polynomial maps to (0, 0).
    pub fn primitive_pos(&self) -> (BigRational, IntPoly) {
        if self.is_zero() {
            return (BigRational::zero(), IntPoly::zero());
        }
        let mut c = self.content();
        if self.leading().unwrap().is_negative() {
            c = -c;
        }
        let prim = IntPoly::new(self.coeffs.iter().map(|a| a / &c).collect());
        (BigRational::from_integer(c), prim)
    }

    /// Cauchy bound: every real root has |x| < 1 + max|a_i|/|a_d|.
    /// Returns a positive integer B with no roots at |n| >= B.
    /// Constants (including zero) get bound 1.
    pub fn root_bound(&self) -> i64 {
        let d = match self.degree() {
            None | Some(0) => return 1,
            Some(d) => d,
        };
        let lead = self.coeffs[d].magnitude().clone();
        let max_low = self.coeffs[..d]
            .iter()
            .map(|c| c.magnitude().clone())
            .max()
            .unwrap();
        // ceil(1 + max/lead) + 1 keeps the bound strictly clear of roots.
        let bound = (&max_low + &lead - 1u32) / &lead + 2u32;
        i64::try_from(BigInt::from(bound)).expect("root bound fits in i64")
    }

    /// Root bound that prefers the cheap Cauchy bracket and falls back to
    /// Sturm counting only when the bracket explodes (near-cancelling
    /// leading coefficients).
    pub fn smart_root_bound(&self) -> i64 {
        let cauchy = self.root_bound();
        if cauchy <= 64 {
            cauchy
        } else {
            self.tight_root_bound()
        }
    }

    /// Smallest B >= 1 with no real roots at |x| >= B, by Sturm counting
    /// bisected under the Cauchy bracket. Tight even when leading
    /// coefficients nearly cancel, where the Cauchy bound explodes.
    pub fn tight_root_bound(&self) -> i64 {
        if self.degree().unwrap_or(0) == 0 {
            return 1;
        }
        let sturm = Sturm::of(self);
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let clear = |b: i64| {
            let bq = BigRational::from_integer(BigInt::from(b));
            sturm.roots_above(&(&bq - &half)) == 0 && sturm.roots_below_or_at(&-bq) == 0
        };
        let mut hi = self.root_bound().max(1);
        if !clear(hi) {
            // Cauchy is an upper bracket in exact arithmetic; never happens,
            // but stay safe rather than loop.
            return hi;
        }
        let mut lo = 1i64;
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if clear(mid) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        hi
    }

    /// Any integer root, found by Sturm bisection rather than scanning the
    /// whole Cauchy interval.
    pub fn integer_root(&self) -> Option<i64> {
        if self.is_zero() {
            return Some(0);
        }
        if self.degree().unwrap() == 0 {
            return None;
        }
        let sturm = Sturm::of(self);
        let b = BigRational::from_integer(BigInt::from(self.root_bound().max(1)));
        let mut stack = vec![(-b.clone(), b.clone())];
        while let Some((lo, hi)) = stack.pop() {
            let count = sturm.roots_in(&lo, &hi);
            if count == 0 {
                continue;
            }
            if &hi - &lo <= BigRational::one() {
                let first = lo.ceil().to_integer();
                let last = hi.floor().to_integer();
                let mut k = first;
                while k <= last {
                    if self.eval(&k).is_zero() {
                        return i64::try_from(k).ok();
                    }
                    k += BigInt::one();
                }
                continue;
            }
            let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
            stack.push((lo, mid.clone()));
            stack.push((mid, hi));
        }
        None
    }

    pub fn to_qpoly(&self) -> QPoly {
        QPoly::new(
            self.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.magnitude();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            match k {
                0 => write!(f, "{}", mag)?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{}*", mag)?;
                    }
                    write!(f, "n")?;
                    if k > 1 {
                        write!(f, "^{}", k)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Polynomial with rational coefficients; working type for division and gcd.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        QPoly {
            coeffs: vec![BigRational::one()],
        }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &BigRational) -> QPoly {
        if c.is_zero() {
            return QPoly::zero();
        }
        QPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(len);
        for k in 0..len {
            let a = self
                .coeffs
                .get(k)
                .cloned()
                .unwrap_or_else(BigRational::zero);
            let b = other
                .coeffs
                .get(k)
                .cloned()
                .unwrap_or_else(BigRational::zero);
            out.push(a + b);
        }
        QPoly::new(out)
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    /// Euclidean division: `self = q * div + r` with deg r < deg div.
    pub fn divrem(&self, div: &QPoly) -> (QPoly, QPoly) {
        assert!(!div.is_zero(), "polynomial division by zero");
        let dd = div.degree().unwrap();
        let lead = div.leading().unwrap().clone();
        let mut rem = self.clone();
        let mut quot = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(dr) = rem.degree() {
            if dr < dd {
                break;
            }
            let factor = rem.leading().unwrap() / &lead;
            let shift = dr - dd;
            quot[shift] = factor.clone();
            let mut sub = vec![BigRational::zero(); shift];
            sub.extend(div.coeffs.iter().map(|c| c * &factor));
            rem = rem.sub(&QPoly::new(sub));
        }
        (QPoly::new(quot), rem)
    }

    /// Monic gcd, computed through the integer primitive remainder
    /// sequence to avoid rational coefficient blowup.
    pub fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        let (_, pa) = a.to_int_primitive();
        let (_, pb) = b.to_int_primitive();
        prs_gcd(&pa, &pb).to_qpoly().monic()
    }

    fn monic(&self) -> QPoly {
        match self.leading() {
            None => QPoly::zero(),
            Some(l) => self.scale(&(BigRational::one() / l.clone())),
        }
    }

    /// Writes `self = factor * prim` with `prim` an integer polynomial of
    /// content 1 and positive leading coefficient.
    pub fn to_int_primitive(&self) -> (BigRational, IntPoly) {
        if self.is_zero() {
            return (BigRational::zero(), IntPoly::zero());
        }
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            den_lcm = num_integer::Integer::lcm(&den_lcm, c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(den_lcm.clone())).to_integer())
            .collect();
        let p = IntPoly::new(ints);
        let (factor, prim) = p.primitive_pos();
        (factor / BigRational::from_integer(den_lcm), prim)
    }

    pub fn derivative(&self) -> QPoly {
        if self.coeffs.len() <= 1 {
            return QPoly::zero();
        }
        QPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

/// Where a Sturm chain is sampled.
enum SturmPoint {
    Value(BigRational),
    PosInf,
    NegInf,
}

/// Sturm chain of the squarefree part; counts distinct real roots.
/// Built with an integer primitive pseudo-remainder sequence to keep
/// coefficients small.
struct Sturm {
    chain: Vec<IntPoly>,
}

fn prs_gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut x = a.primitive_keep_sign();
    let mut y = b.primitive_keep_sign();
    while !y.is_zero() {
        let r = x.pseudo_rem(&y.positive_lead());
        x = y;
        y = r;
    }
    x.positive_lead()
}

impl Sturm {
    fn of(p: &IntPoly) -> Sturm {
        // squarefree part: p / gcd(p, p'), up to a harmless constant
        let dp = p.derivative();
        let g = prs_gcd(p, &dp);
        let sf = if g.degree().unwrap_or(0) > 0 {
            let (quot, rem) = p.to_qpoly().divrem(&g.to_qpoly());
            debug_assert!(rem.is_zero(), "gcd divides exactly");
            quot.to_int_primitive().1
        } else {
            p.primitive_keep_sign()
        };
        let mut chain = vec![sf.clone(), sf.derivative().primitive_keep_sign()];
        loop {
            let k = chain.len();
            if chain[k - 1].is_zero() {
                chain.pop();
                break;
            }
            if chain[k - 1].degree().unwrap_or(0) == 0 {
                break;
            }
            let r = chain[k - 2].pseudo_rem(&chain[k - 1].positive_lead());
            if r.is_zero() {
                break;
            }
            chain.push(r.neg());
        }
        Sturm { chain }
    }

    fn variations(&self, at: SturmPoint) -> usize {
        let mut signs: Vec<i8> = vec![];
        for q in &self.chain {
            let s: i8 = match &at {
                SturmPoint::Value(x) => {
                    let v = q.eval_rational(x);
                    if v.is_zero() {
                        0
                    } else if v.is_positive() {
                        1
                    } else {
                        -1
                    }
                }
                SturmPoint::PosInf => match q.leading() {
                    None => 0,
                    Some(l) => {
                        if l.is_positive() {
                            1
                        } else {
                            -1
                        }
                    }
                },
                SturmPoint::NegInf => match q.degree() {
                    None => 0,
                    Some(d) => {
                        let l = q.leading().unwrap();
                        let pos = l.is_positive() == (d % 2 == 0);
                        if pos {
                            1
                        } else {
                            -1
                        }
                    }
                },
            };
            if s != 0 {
                signs.push(s);
            }
        }
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Distinct real roots in the open interval (a, b], a < b.
    fn roots_in(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations(SturmPoint::Value(a.clone()))
            .saturating_sub(self.variations(SturmPoint::Value(b.clone())))
    }

    fn roots_above(&self, a: &BigRational) -> usize {
        self.variations(SturmPoint::Value(a.clone()))
            .saturating_sub(self.variations(SturmPoint::PosInf))
    }

    fn roots_below_or_at(&self, a: &BigRational) -> usize {
        self.variations(SturmPoint::NegInf)
            .saturating_sub(self.variations(SturmPoint::Value(a.clone())))
    }
}

/// How a rational function behaves at infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LimitKind {
    Zero,
    Finite(BigRational),
    Infinite,
}

/// A reduced rational function `scale * num / den`.
///
/// Canonical form: `num` and `den` are primitive integer polynomials with
/// positive leading coefficients and no common factor; `den` is never the
/// zero polynomial. The zero function is `scale = 0, num = 0, den = 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatFn {
    scale: BigRational,
    num: IntPoly,
    den: IntPoly,
}

impl RatFn {
    pub fn zero() -> Self {
        RatFn {
            scale: BigRational::zero(),
            num: IntPoly::zero(),
            den: IntPoly::one(),
        }
    }

    pub fn constant(c: BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFn {
            scale: c,
            num: IntPoly::one(),
            den: IntPoly::one(),
        }
    }

    /// Reduce `num/den` to canonical form.
    pub fn from_qpolys(num: &QPoly, den: &QPoly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let (fn_, pn) = num.to_int_primitive();
        let (fd, pd) = den.to_int_primitive();
        let g = prs_gcd(&pn, &pd);
        let (pn, pd) = if g.degree().unwrap_or(0) > 0 {
            (pn.div_exact(&g), pd.div_exact(&g))
        } else {
            (pn, pd)
        };
        RatFn {
            scale: fn_ / fd,
            num: pn,
            den: pd,
        }
    }

    pub fn from_int_parts(num: &IntPoly, den: &IntPoly) -> Self {
        Self::from_qpolys(&num.to_qpoly(), &den.to_qpoly())
    }

    pub fn is_zero(&self) -> bool {
        self.scale.is_zero()
    }

    pub fn scale_part(&self) -> &BigRational {
        &self.scale
    }

    pub fn num(&self) -> &IntPoly {
        &self.num
    }

    pub fn den(&self) -> &IntPoly {
        &self.den
    }

    pub fn numer_qpoly(&self) -> QPoly {
        self.num.to_qpoly().scale(&self.scale)
    }

    pub fn eval(&self, n: i64) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        let nn = BigInt::from(n);
        let d = self.den.eval(&nn);
        assert!(!d.is_zero(), "evaluated rational function at a pole");
        &self.scale * BigRational::new(self.num.eval(&nn), d)
    }

    pub fn add(&self, other: &RatFn) -> RatFn {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let n = self
            .numer_qpoly()
            .mul(&other.den.to_qpoly())
            .add(&other.numer_qpoly().mul(&self.den.to_qpoly()));
        let d = self.den.to_qpoly().mul(&other.den.to_qpoly());
        Self::from_qpolys(&n, &d)
    }

    pub fn sub(&self, other: &RatFn) -> RatFn {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFn {
        RatFn {
            scale: -self.scale.clone(),
            num: self.num.clone(),
            den: self.den.clone(),
        }
    }

    /// Product. Each factor is already reduced, so only cross-factors can
    /// cancel; two small gcds beat one on the full product.
    pub fn mul(&self, other: &RatFn) -> RatFn {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let g1 = prs_gcd(&self.num, &other.den);
        let g2 = prs_gcd(&other.num, &self.den);
        let reduce = |p: &IntPoly, g: &IntPoly| {
            if g.degree().unwrap_or(0) > 0 {
                p.div_exact(g)
            } else {
                p.clone()
            }
        };
        RatFn {
            scale: &self.scale * &other.scale,
            num: reduce(&self.num, &g1).mul(&reduce(&other.num, &g2)),
            den: reduce(&self.den, &g2).mul(&reduce(&other.den, &g1)),
        }
    }

    /// Division; caller guarantees `other` is not the zero function.
    pub fn div(&self, other: &RatFn) -> RatFn {
        assert!(!other.is_zero(), "division by the zero rational function");
        let inv = RatFn {
            scale: BigRational::one() / other.scale.clone(),
            num: other.den.clone(),
            den: other.num.clone(),
        };
        self.mul(&inv)
    }

    /// Square: numerator and denominator stay coprime and primitive, so no
    /// reduction is needed.
    pub fn square(&self) -> RatFn {
        if self.is_zero() {
            return Self::zero();
        }
        RatFn {
            scale: &self.scale * &self.scale,
            num: self.num.mul(&self.num),
            den: self.den.mul(&self.den),
        }
    }

    pub fn scaled(&self, c: &BigRational) -> RatFn {
        if c.is_zero() || self.is_zero() {
            return Self::zero();
        }
        RatFn {
            scale: &self.scale * c,
            num: self.num.clone(),
            den: self.den.clone(),
        }
    }

    pub fn add_const(&self, c: &BigRational) -> RatFn {
        self.add(&RatFn::constant(c.clone()))
    }

    pub fn mul_poly(&self, p: &IntPoly) -> RatFn {
        self.mul(&RatFn::from_int_parts(p, &IntPoly::one()))
    }

    /// `f(-n)`.
    pub fn reflect(&self) -> RatFn {
        let n = self.num.reflect().to_qpoly().scale(&self.scale);
        let d = self.den.reflect().to_qpoly();
        Self::from_qpolys(&n, &d)
    }

    /// deg den - deg num; positive means the function decays at infinity.
    /// The zero function reports `None`.
    pub fn degree_gap(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(self.den.degree().unwrap() as i64 - self.num.degree().unwrap() as i64)
    }

    pub fn limit_kind(&self) -> LimitKind {
        match self.degree_gap() {
            None => LimitKind::Zero,
            Some(g) if g > 0 => LimitKind::Zero,
            Some(0) => {
                let ratio = BigRational::new(
                    self.num.leading().unwrap().clone(),
                    self.den.leading().unwrap().clone(),
                );
                LimitKind::Finite(&self.scale * ratio)
            }
            _ => LimitKind::Infinite,
        }
    }

    pub fn is_strictly_proper(&self) -> bool {
        match self.degree_gap() {
            None => true,
            Some(g) => g >= 1,
        }
    }

    /// For a function with a finite limit, split off the limit:
    /// `self = limit + proper` with `proper -> 0`.
    pub fn split_limit(&self) -> (BigRational, RatFn) {
        match self.limit_kind() {
            LimitKind::Zero => (BigRational::zero(), self.clone()),
            LimitKind::Finite(l) => {
                let proper = self.sub(&RatFn::constant(l.clone()));
                (l, proper)
            }
            LimitKind::Infinite => panic!("split_limit on a function unbounded at infinity"),
        }
    }

    /// Start of the zone `|n| >= B` with no poles and no critical points;
    /// the function is monotone on each side of the zone.
    pub fn monotone_from(&self) -> i64 {
        if self.is_zero() {
            return 1;
        }
        thread_local! {
            static MEMO: std::cell::RefCell<std::collections::HashMap<RatFn, i64>> =
                std::cell::RefCell::new(std::collections::HashMap::new());
        }
        if let Some(b) = MEMO.with(|m| m.borrow().get(self).copied()) {
            return b;
        }
        let crit = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        let b = self
            .den
            .smart_root_bound()
            .max(crit.smart_root_bound())
            .max(1);
        MEMO.with(|m| m.borrow_mut().insert(self.clone(), b));
        b
    }

    /// Start of the zone `|n| >= B` where numerator and denominator have
    /// stable sign, so the function itself does.
    pub fn sign_stable_from(&self) -> i64 {
        if self.is_zero() {
            return 1;
        }
        self.num
            .smart_root_bound()
            .max(self.den.smart_root_bound())
            .max(1)
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "{}*({})/({})", self.scale, self.num, self.den)
    }
}

/// Certified start for the decay of `n |-> |f(n)| * r^n` on the positive
/// axis: beyond the returned `B`, the map is nonincreasing in `n`.
///
/// Requires `0 < r < 1` and `f` nonzero. With P/Q the reduced parts of f,
/// nonincrease at n means `num_r |P(n+1) Q(n)| <= den_r |P(n) Q(n+1)|`.
/// Beyond the sign-stable zone both products share one sign, so the
/// condition is a polynomial inequality `W(n) >= 0` (up to that sign) with
/// `W = den_r P(n)Q(n+1) - num_r P(n+1)Q(n)`; its leading coefficient has
/// the right sign because den_r > num_r, so any root bound for W closes
/// the certificate.
pub fn geometric_decay_start(f: &RatFn, r: &BigRational) -> i64 {
    assert!(
        r.is_positive() && r < &BigRational::one(),
        "rate must be in (0,1)"
    );
    assert!(!f.is_zero(), "decay start of the zero function");

    // The certificate depends only on (f, r) and gets recomputed for every
    // direction and expansion level; a per-thread memo pays off.
    thread_local! {
        static MEMO: std::cell::RefCell<std::collections::HashMap<(RatFn, BigRational), i64>> =
            std::cell::RefCell::new(std::collections::HashMap::new());
    }
    let key = (f.clone(), r.clone());
    if let Some(b) = MEMO.with(|m| m.borrow().get(&key).copied()) {
        return b;
    }

    let u = f.num.shift_one().mul(&f.den);
    let v = f.num.mul(&f.den.shift_one());
    let w = v.scale(r.denom()).sub(&u.scale(r.numer()));
    let b = f.sign_stable_from().max(w.smart_root_bound()).max(1);
    MEMO.with(|m| m.borrow_mut().insert(key, b));
    b
}

/// Comparison of two rationals by absolute value.
pub fn cmp_abs(a: &BigRational, b: &BigRational) -> Ordering {
    a.abs().cmp(&b.abs())
}

/// `r^|n|` for any integer n.
pub fn rate_pow_abs(r: &BigRational, n: i64) -> BigRational {
    rat_pow(r, n.unsigned_abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{rat, rat_int};

    fn p(coeffs: &[i64]) -> IntPoly {
        IntPoly::from_i64(coeffs)
    }

    #[test]
    fn poly_basics() {
        let q = p(&[1, 0, 1]); // n^2 + 1
        assert_eq!(q.eval_i64(3), BigInt::from(10));
        assert_eq!(q.degree(), Some(2));
        assert_eq!(q.derivative(), p(&[0, 2]));
        assert_eq!(q.reflect(), q);
        assert_eq!(p(&[0, 1]).reflect(), p(&[0, -1]));
        assert_eq!(p(&[0, 1]).shift_one(), p(&[1, 1]));
        assert_eq!(q.integer_root(), None);
        let root = p(&[-4, 0, 1]).integer_root().unwrap();
        assert!(root == 2 || root == -2);
    }

    #[test]
    fn ratfn_reduction() {
        // (n^3 + n) / (n^2 + 1) reduces to n.
        let f = RatFn::from_int_parts(&p(&[0, 1, 0, 1]), &p(&[1, 0, 1]));
        assert_eq!(f.num(), &p(&[0, 1]));
        assert_eq!(f.den(), &p(&[1]));
        assert_eq!(f.eval(7), rat_int(7));
    }

    #[test]
    fn ratfn_limits() {
        let f = RatFn::from_int_parts(&p(&[0, 0, 2]), &p(&[1, 0, 1])); // 2n^2/(n^2+1)
        assert_eq!(f.limit_kind(), LimitKind::Finite(rat_int(2)));
        let (l, proper) = f.split_limit();
        assert_eq!(l, rat_int(2));
        // 2n^2/(n^2+1) - 2 = -2/(n^2+1)
        assert_eq!(proper.eval(0), rat_int(-2));
        assert_eq!(proper.eval(1), rat_int(-1));
        assert!(proper.degree_gap().unwrap() >= 1);
    }

    #[test]
    fn monotone_zone_is_sound() {
        // f = (n^2 - 5n)/(n^2+1) has critical points; beyond the zone the
        // sampled differences must not change sign.
        let f = RatFn::from_int_parts(&p(&[0, -5, 1]), &p(&[1, 0, 1]));
        let b = f.monotone_from();
        let mut signs = vec![];
        for n in b..b + 50 {
            let d = f.eval(n + 1) - f.eval(n);
            if !d.is_zero() {
                signs.push(d.is_positive());
            }
        }
        assert!(signs.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn decay_start_is_sound() {
        // m(n) = |n^5| * (9/10)^n must be nonincreasing beyond the start.
        let f = RatFn::from_int_parts(&p(&[0, 0, 0, 0, 0, 1]), &IntPoly::one());
        let r = rat(9, 10);
        let b = geometric_decay_start(&f, &r);
        let m = |n: i64| f.eval(n).abs() * rat_pow(&r, n as u64);
        for n in b..b + 100 {
            assert!(m(n + 1) <= m(n), "not decreasing at n = {}", n);
        }
        // and it really does decay from there
        assert!(m(b + 100) < m(b));
    }

    #[test]
    fn qpoly_gcd() {
        let a = p(&[-1, 0, 1]).to_qpoly(); // n^2 - 1
        let b = p(&[1, 1]).to_qpoly(); // n + 1
        let g = QPoly::gcd(&a, &b);
        assert_eq!(g.degree(), Some(1));
        let (factor, prim) = g.to_int_primitive();
        assert_eq!(prim, p(&[1, 1]));
        assert_eq!(factor, rat_int(1));
    }
}

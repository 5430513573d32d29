//! Exact scalars: arbitrary-precision rationals, Gaussian rationals, and
//! certified rational square-root brackets.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Shorthand for an exact rational from an integer pair.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an exact rational from an integer.
pub fn rat_int(num: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(num))
}

/// `r^e` with a non-negative exponent, exactly.
pub fn rat_pow(r: &BigRational, e: u64) -> BigRational {
    let e = u32::try_from(e).expect("exponent fits in u32");
    BigRational::new_raw(r.numer().pow(e), r.denom().pow(e))
}

/// Parses "a" or "a/b" into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => {
            let n: BigInt = text.parse().ok()?;
            Some(BigRational::from_integer(n))
        }
    }
}

/// Serialized form of a rational: numerator and denominator as decimal
/// strings, so arbitrary precision survives JSON round-trips.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatRepr {
    pub num: String,
    pub den: String,
}

impl RatRepr {
    pub fn of(r: &BigRational) -> Self {
        RatRepr {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        let n: BigInt = self.num.parse().ok()?;
        let d: BigInt = self.den.parse().ok()?;
        if d.is_zero() {
            None
        } else {
            Some(BigRational::new(n, d))
        }
    }
}

/// A complex number with exact rational real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussianRational {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(rat_int(n))
    }

    pub fn zero() -> Self {
        Self::real(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::real(BigRational::one())
    }

    pub fn i() -> Self {
        GaussianRational {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `|z|^2`, always an exact rational.
    pub fn abs_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        GaussianRational {
            re: &self.re * r,
            im: &self.im * r,
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl Add for GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: Self) -> Self {
        GaussianRational {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl<'a> Add<&'a GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &'a GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: Self) -> Self {
        GaussianRational {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl<'a> Sub<&'a GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &'a GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: Self) -> Self {
        (&self).mul(&rhs)
    }
}

impl<'a> Mul<&'a GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &'a GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> Self {
        GaussianRational {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            return write!(f, "{}i", self.im);
        }
        if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -self.im.clone())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

/// Serialized Gaussian rational: `{re: {num, den}, im: {num, den}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GaussianRepr {
    pub re: RatRepr,
    pub im: RatRepr,
}

impl GaussianRepr {
    pub fn of(z: &GaussianRational) -> Self {
        GaussianRepr {
            re: RatRepr::of(z.re()),
            im: RatRepr::of(z.im()),
        }
    }

    pub fn to_gaussian(&self) -> Option<GaussianRational> {
        Some(GaussianRational::new(
            self.re.to_rational()?,
            self.im.to_rational()?,
        ))
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GaussianRepr::of(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = GaussianRepr::deserialize(d)?;
        repr.to_gaussian()
            .ok_or_else(|| serde::de::Error::custom("malformed rational"))
    }
}

/// Floor of the square root of a non-negative integer.
pub fn sqrt_floor(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "sqrt of negative integer");
    n.sqrt()
}

/// `sqrt(x)` when it is exactly rational.
pub fn rational_sqrt_exact(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let sn = sqrt_floor(x.numer());
    let sd = sqrt_floor(x.denom());
    if &(&sn * &sn) == x.numer() && &(&sd * &sd) == x.denom() {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

/// A certified bracket `[lo, hi]` around `sqrt(x)` with `hi - lo <= tol`.
pub fn rational_sqrt_bounds(x: &BigRational, tol: &BigRational) -> (BigRational, BigRational) {
    assert!(!x.is_negative(), "sqrt of negative rational");
    assert!(tol.is_positive(), "tolerance must be positive");
    if let Some(s) = rational_sqrt_exact(x) {
        return (s.clone(), s);
    }
    // sqrt(x) in [ floor(sqrt(floor(x S^2)))/S, (floor(sqrt(ceil(x S^2)))+1)/S ]
    // with width <= 2/S.
    let scale_int = (rat_int(2) / tol).ceil().to_integer();
    let scale = BigRational::from_integer(scale_int.clone());
    let scaled = x * &scale * &scale;
    let lo_int = sqrt_floor(&scaled.floor().to_integer());
    let hi_int = sqrt_floor(&scaled.ceil().to_integer()) + BigInt::one();
    (
        BigRational::new(lo_int, scale_int.clone()),
        BigRational::new(hi_int, scale_int),
    )
}

/// gcd of two non-negative machine integers.
pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// lcm of two positive machine integers.
pub fn lcm_i64(a: i64, b: i64) -> i64 {
    a.lcm(&b)
}

//! Exact symbolic representation of bounded complex sequences on Z.
//!
//! A `SymbolicSequence` is a finite sum of step terms `c * 1_S` plus tail
//! terms `coeff * p(n)/q(n) * r^|n|` restricted to eventually-periodic
//! supports. The family is closed under pointwise addition, multiplication
//! and conjugation, and every element is bounded.
//!
//! Normal form (maintained by every constructor and operation):
//! * step supports are pairwise disjoint, constants distinct and nonzero,
//!   terms sorted by constant;
//! * tail supports are infinite (finite-support tails fold into steps);
//! * rate-1 tails are strictly proper (deg p < deg q) with the limit part
//!   absorbed into steps, so every tail decays to 0 along its support;
//! * per support cell and rate, tails are combined into one reduced
//!   rational function, split into real and imaginary parts;
//! * a sequence is zero iff both term lists are empty.

mod cells;
mod seminorm;
mod threshold;

pub use seminorm::{SeminormRepr, SeminormValue};
pub(crate) use cells::{class_members, signed_member, CellStructure};

use crate::error::{Error, Result};
use crate::num::{lcm_i64, rat_pow, GaussianRational, GaussianRepr, RatRepr};
use crate::poly::{IntPoly, RatFn};
use crate::setalg::{DefinableSet, DefinableSetRepr};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Asymptotic behavior of a single tail term on its support.
#[derive(Debug, Copy, Clone, PartialEq, Eq)]
pub enum DecayClass {
    /// r < 1 (or p = 0): decays faster than any polynomial.
    Rapid,
    /// r = 1 and deg p < deg q: decays like n^(deg p - deg q).
    PolynomialDecay,
    /// r = 1 and deg p = deg q: converges to the leading-coefficient ratio.
    ConvergesToConstant,
}

/// One decaying summand `coeff * p(n)/q(n) * r^|n|` on a definable support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailTerm {
    support: DefinableSet,
    coeff: GaussianRational,
    numer: IntPoly,
    denom: IntPoly,
    rate: BigRational,
}

impl TailTerm {
    /// Validating constructor: `q` must not vanish on Z, the rate must lie
    /// in (0, 1], and the term must be bounded.
    pub fn new(
        support: DefinableSet,
        coeff: GaussianRational,
        numer: IntPoly,
        denom: IntPoly,
        rate: BigRational,
    ) -> Result<Self> {
        if !rate.is_positive() || rate > BigRational::one() {
            return Err(Error::RateOutOfRange(rate.to_string()));
        }
        if let Some(n) = denom.integer_root() {
            return Err(Error::VanishingDenominator(n));
        }
        if rate.is_one() && numer.degree().unwrap_or(0) > denom.degree().unwrap_or(0) {
            return Err(Error::UnboundedTail);
        }
        Ok(TailTerm {
            support,
            coeff,
            numer,
            denom,
            rate,
        })
    }

    pub fn support(&self) -> &DefinableSet {
        &self.support
    }

    pub fn coeff(&self) -> &GaussianRational {
        &self.coeff
    }

    pub fn numer(&self) -> &IntPoly {
        &self.numer
    }

    pub fn denom(&self) -> &IntPoly {
        &self.denom
    }

    pub fn rate(&self) -> &BigRational {
        &self.rate
    }

    pub fn decay_class(&self) -> DecayClass {
        if !self.rate.is_one() || self.numer.is_zero() {
            return DecayClass::Rapid;
        }
        let dp = self.numer.degree().unwrap();
        let dq = self.denom.degree().unwrap_or(0);
        if dp < dq {
            DecayClass::PolynomialDecay
        } else {
            DecayClass::ConvergesToConstant
        }
    }

    pub fn is_rapid(&self) -> bool {
        self.decay_class() == DecayClass::Rapid
    }

    /// Exact value at one integer.
    pub fn value_at(&self, n: i64) -> GaussianRational {
        if !self.support.contains(n) {
            return GaussianRational::zero();
        }
        let nn = BigInt::from(n);
        let ratio = BigRational::new(self.numer.eval(&nn), self.denom.eval(&nn));
        let decay = rat_pow(&self.rate, n.unsigned_abs());
        self.coeff.scale(&(ratio * decay))
    }

    /// Limit along either direction inside the support: zero unless the
    /// term converges to a constant, in which case the leading ratio.
    pub fn direction_limit(&self) -> GaussianRational {
        match self.decay_class() {
            DecayClass::ConvergesToConstant => {
                let ratio = BigRational::new(
                    self.numer.leading().unwrap().clone(),
                    self.denom.leading().unwrap().clone(),
                );
                self.coeff.scale(&ratio)
            }
            _ => GaussianRational::zero(),
        }
    }
}

/// A bounded complex sequence in step + decaying-tail normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicSequence {
    steps: Vec<(GaussianRational, DefinableSet)>,
    tails: Vec<TailTerm>,
}

impl SymbolicSequence {
    pub fn zero() -> Self {
        SymbolicSequence {
            steps: vec![],
            tails: vec![],
        }
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::step(c, DefinableSet::integers())
    }

    pub fn constant_rational(c: BigRational) -> Self {
        Self::constant(GaussianRational::real(c))
    }

    pub fn indicator(set: DefinableSet) -> Self {
        Self::step(GaussianRational::one(), set)
    }

    pub fn step(c: GaussianRational, set: DefinableSet) -> Self {
        Self::from_parts(vec![(c, set)], vec![])
    }

    pub fn from_tail(term: TailTerm) -> Self {
        Self::from_parts(vec![], vec![term])
    }

    /// `p(n)/q(n)` on all of Z.
    pub fn rational_fn(numer: IntPoly, denom: IntPoly) -> Result<Self> {
        Ok(Self::from_tail(TailTerm::new(
            DefinableSet::integers(),
            GaussianRational::one(),
            numer,
            denom,
            BigRational::one(),
        )?))
    }

    /// `r^|n|` on all of Z.
    pub fn geometric(rate: BigRational) -> Result<Self> {
        Ok(Self::from_tail(TailTerm::new(
            DefinableSet::integers(),
            GaussianRational::one(),
            IntPoly::one(),
            IntPoly::one(),
            rate,
        )?))
    }

    /// Builds and normalizes a sequence from arbitrary step and tail terms.
    pub fn from_parts(steps: Vec<(GaussianRational, DefinableSet)>, tails: Vec<TailTerm>) -> Self {
        normalize(steps, tails)
    }

    pub fn steps(&self) -> &[(GaussianRational, DefinableSet)] {
        &self.steps
    }

    pub fn tails(&self) -> &[TailTerm] {
        &self.tails
    }

    pub fn is_zero(&self) -> bool {
        self.steps.is_empty() && self.tails.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.steps.iter().all(|(c, _)| c.is_real())
            && self.tails.iter().all(|t| t.coeff.is_real())
    }

    /// Exact pointwise evaluation.
    pub fn eval(&self, n: i64) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for (c, s) in &self.steps {
            if s.contains(n) {
                acc = &acc + c;
            }
        }
        for t in &self.tails {
            acc = &acc + &t.value_at(n);
        }
        acc
    }

    /// Double-precision evaluation, for numeric windows and nets.
    pub fn eval_f64(&self, n: i64) -> (f64, f64) {
        let (mut re, mut im) = (0.0f64, 0.0f64);
        for (c, s) in &self.steps {
            if s.contains(n) {
                let (cr, ci) = c.to_f64_pair();
                re += cr;
                im += ci;
            }
        }
        for t in &self.tails {
            if !t.support.contains(n) {
                continue;
            }
            let x = n as f64;
            let num = t
                .numer
                .coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| c.to_f64().unwrap_or(f64::NAN) * x.powi(k as i32))
                .sum::<f64>();
            let den = t
                .denom
                .coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| c.to_f64().unwrap_or(f64::NAN) * x.powi(k as i32))
                .sum::<f64>();
            let rate = t.rate.to_f64().unwrap_or(f64::NAN);
            let decay = rate.powi(n.unsigned_abs().min(i32::MAX as u64) as i32);
            let scale = num / den * decay;
            let (cr, ci) = t.coeff.to_f64_pair();
            re += cr * scale;
            im += ci * scale;
        }
        (re, im)
    }

    pub fn add(&self, other: &SymbolicSequence) -> SymbolicSequence {
        let mut steps = self.steps.clone();
        steps.extend(other.steps.iter().cloned());
        let mut tails = self.tails.clone();
        tails.extend(other.tails.iter().cloned());
        normalize(steps, tails)
    }

    pub fn neg(&self) -> SymbolicSequence {
        self.scale(&GaussianRational::from_int(-1))
    }

    pub fn sub(&self, other: &SymbolicSequence) -> SymbolicSequence {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &GaussianRational) -> SymbolicSequence {
        let steps = self
            .steps
            .iter()
            .map(|(v, s)| (c * v, s.clone()))
            .collect();
        let tails = self
            .tails
            .iter()
            .map(|t| TailTerm {
                coeff: c * &t.coeff,
                ..t.clone()
            })
            .collect();
        normalize(steps, tails)
    }

    pub fn conj(&self) -> SymbolicSequence {
        let steps = self
            .steps
            .iter()
            .map(|(v, s)| (v.conj(), s.clone()))
            .collect();
        let tails = self
            .tails
            .iter()
            .map(|t| TailTerm {
                coeff: t.coeff.conj(),
                ..t.clone()
            })
            .collect();
        normalize(steps, tails)
    }

    /// Pointwise product; both operands are refined to a common cell
    /// decomposition and multiplied term by term.
    pub fn mul(&self, other: &SymbolicSequence) -> SymbolicSequence {
        let mut steps = vec![];
        let mut tails = vec![];
        for (a, s) in &self.steps {
            for (b, t) in &other.steps {
                steps.push((a * b, s.intersect(t)));
            }
        }
        for (a, s) in &self.steps {
            for tt in &other.tails {
                tails.push(TailTerm {
                    support: s.intersect(&tt.support),
                    coeff: a * &tt.coeff,
                    ..tt.clone()
                });
            }
        }
        for (b, t) in &other.steps {
            for tt in &self.tails {
                tails.push(TailTerm {
                    support: t.intersect(&tt.support),
                    coeff: b * &tt.coeff,
                    ..tt.clone()
                });
            }
        }
        for ta in &self.tails {
            for tb in &other.tails {
                tails.push(TailTerm {
                    support: ta.support.intersect(&tb.support),
                    coeff: &ta.coeff * &tb.coeff,
                    numer: ta.numer.mul(&tb.numer),
                    denom: ta.denom.mul(&tb.denom),
                    rate: &ta.rate * &tb.rate,
                });
            }
        }
        normalize(steps, tails)
    }

    /// lcm of every modulus appearing in the normal form.
    pub fn cell_modulus(&self) -> i64 {
        let mut l = 1;
        for (_, s) in &self.steps {
            l = lcm_i64(l, s.modulus());
        }
        for t in &self.tails {
            l = lcm_i64(l, t.support.modulus());
        }
        l
    }

    /// Largest window threshold among the supports.
    pub fn max_threshold(&self) -> i64 {
        self.steps
            .iter()
            .map(|(_, s)| s.threshold())
            .chain(self.tails.iter().map(|t| t.support.threshold()))
            .max()
            .unwrap_or(0)
    }

    /// The set { n : phi(n) >= t } for a real sequence and t > 0.
    pub fn threshold_set(&self, t: &BigRational) -> Result<DefinableSet> {
        if !self.is_real() {
            return Err(Error::NonRealSequence);
        }
        if !t.is_positive() {
            return Err(Error::NonPositiveThreshold(t.to_string()));
        }
        threshold::set_where_ge(self, t)
    }

    /// Splits a real sequence into its positive and negative parts:
    /// `phi = pos - neg`, both nonnegative, with disjoint supports.
    pub fn split_pos_neg(&self) -> Result<(SymbolicSequence, SymbolicSequence)> {
        if !self.is_real() {
            return Err(Error::NonRealSequence);
        }
        let nonneg = threshold::set_where_ge(self, &BigRational::zero())?;
        let pos = self.mul(&SymbolicSequence::indicator(nonneg.clone()));
        let neg = self
            .neg()
            .mul(&SymbolicSequence::indicator(nonneg.complement()));
        Ok((pos, neg))
    }

    /// `sup_n |n^d phi(n)|` with the default tolerance 1e-9.
    pub fn schwartz_seminorm(&self, d: u32) -> SeminormValue {
        self.schwartz_seminorm_with_tol(d, &crate::num::rat(1, 1_000_000_000))
    }

    pub fn schwartz_seminorm_with_tol(&self, d: u32, tol: &BigRational) -> SeminormValue {
        seminorm::schwartz_seminorm(self, d, tol)
    }

    /// Sup norm, as the d = 0 seminorm.
    pub fn sup_norm(&self) -> SeminormValue {
        self.schwartz_seminorm(0)
    }

    pub(crate) fn cells(&self) -> CellStructure {
        cells::cell_structure(self)
    }
}

/// Threshold engine without the public-API sign restriction on t; the
/// decomposition and range checks need t = 0 and negative bounds.
pub(crate) fn set_where_ge_internal(
    seq: &SymbolicSequence,
    t: &BigRational,
) -> Result<DefinableSet> {
    if !seq.is_real() {
        return Err(Error::NonRealSequence);
    }
    threshold::set_where_ge(seq, t)
}

impl fmt::Display for SymbolicSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (c, s) in &self.steps {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if s == &DefinableSet::integers() {
                write!(f, "{}", c)?;
            } else {
                write!(f, "({})*ind{}", c, s)?;
            }
        }
        for t in &self.tails {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})*({})/({})", t.coeff, t.numer, t.denom)?;
            if !t.rate.is_one() {
                write!(f, "*({})^|n|", t.rate)?;
            }
            if t.support != DefinableSet::integers() {
                write!(f, " on {}", t.support)?;
            }
        }
        Ok(())
    }
}

/// Full normalization: the only way sequences are ever built.
fn normalize(
    raw_steps: Vec<(GaussianRational, DefinableSet)>,
    raw_tails: Vec<TailTerm>,
) -> SymbolicSequence {
    let mut step_terms: Vec<(GaussianRational, DefinableSet)> = vec![];
    for (c, s) in raw_steps {
        if !c.is_zero() && !s.is_empty() {
            step_terms.push((c, s));
        }
    }

    // Tails: fold finite supports into point steps, group the rest by rate.
    let mut by_rate: BTreeMap<BigRational, Vec<TailTerm>> = BTreeMap::new();
    for t in raw_tails {
        if t.coeff.is_zero() || t.numer.is_zero() || t.support.is_empty() {
            continue;
        }
        if t.support.is_finite() {
            let w = t.support.threshold();
            for n in t.support.enumerate_window(-w, w).unwrap() {
                let v = t.value_at(n);
                if !v.is_zero() {
                    step_terms.push((v, DefinableSet::finite(&[n])));
                }
            }
            continue;
        }
        by_rate.entry(t.rate.clone()).or_default().push(t);
    }

    // Per rate: refine supports to atoms, combine each atom's terms into a
    // single reduced rational function, split real/imaginary parts, and for
    // rate 1 absorb the limit into the step layer.
    let mut tail_out: BTreeMap<(BigRational, GaussianRational, IntPoly, IntPoly), DefinableSet> =
        BTreeMap::new();
    for (rate, terms) in by_rate {
        let mut atoms: Vec<(DefinableSet, Vec<usize>)> = vec![(DefinableSet::integers(), vec![])];
        for (i, t) in terms.iter().enumerate() {
            let mut next = vec![];
            for (a, idxs) in atoms {
                let inside = a.intersect(&t.support);
                let outside = a.difference(&t.support);
                if !inside.is_empty() {
                    let mut with = idxs.clone();
                    with.push(i);
                    next.push((inside, with));
                }
                if !outside.is_empty() {
                    next.push((outside, idxs));
                }
            }
            atoms = next;
        }
        for (atom, idxs) in atoms {
            if idxs.is_empty() {
                continue;
            }
            let mut f_re = RatFn::zero();
            let mut f_im = RatFn::zero();
            for &i in &idxs {
                let t = &terms[i];
                let base = RatFn::from_int_parts(&t.numer, &t.denom);
                f_re = f_re.add(&base.scaled(t.coeff.re()));
                f_im = f_im.add(&base.scaled(t.coeff.im()));
            }
            let (f_re, f_im) = if rate.is_one() {
                let (lim_re, prop_re) = f_re.split_limit();
                let (lim_im, prop_im) = f_im.split_limit();
                let lim = GaussianRational::new(lim_re, lim_im);
                if !lim.is_zero() {
                    step_terms.push((lim, atom.clone()));
                }
                (prop_re, prop_im)
            } else {
                (f_re, f_im)
            };
            for (part, imag) in [(f_re, false), (f_im, true)] {
                if part.is_zero() {
                    continue;
                }
                let coeff = if imag {
                    GaussianRational::new(BigRational::zero(), part.scale_part().clone())
                } else {
                    GaussianRational::real(part.scale_part().clone())
                };
                let key = (rate.clone(), coeff, part.num().clone(), part.den().clone());
                tail_out
                    .entry(key)
                    .and_modify(|s| *s = s.union(&atom))
                    .or_insert_with(|| atom.clone());
            }
        }
    }

    // Steps: maintain a disjoint partition, grouping equal values.
    let mut parts: Vec<(GaussianRational, DefinableSet)> = vec![];
    for (c, s) in step_terms {
        let mut rem = s;
        let mut next: Vec<(GaussianRational, DefinableSet)> = vec![];
        for (v, t) in parts {
            if rem.is_empty() {
                next.push((v, t));
                continue;
            }
            let both = t.intersect(&rem);
            if both.is_empty() {
                next.push((v, t));
                continue;
            }
            let only_t = t.difference(&rem);
            if !only_t.is_empty() {
                next.push((v.clone(), only_t));
            }
            rem = rem.difference(&both);
            next.push((&v + &c, both));
        }
        if !rem.is_empty() {
            next.push((c, rem));
        }
        // group equal values, drop zeros
        let mut grouped: BTreeMap<GaussianRational, DefinableSet> = BTreeMap::new();
        for (v, t) in next {
            if v.is_zero() {
                continue;
            }
            grouped
                .entry(v)
                .and_modify(|u| *u = u.union(&t))
                .or_insert(t);
        }
        parts = grouped.into_iter().collect();
    }

    SymbolicSequence {
        steps: parts,
        tails: tail_out
            .into_iter()
            .map(|((rate, coeff, numer, denom), support)| TailTerm {
                support,
                coeff,
                numer,
                denom,
                rate,
            })
            .collect(),
    }
}

/// Wire form per the published schema.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StepRepr {
    pub re: RatRepr,
    pub im: RatRepr,
    pub set: DefinableSetRepr,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TailRepr {
    pub coeff: GaussianRepr,
    pub p: Vec<String>,
    pub q: Vec<String>,
    pub r: RatRepr,
    pub set: DefinableSetRepr,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SequenceRepr {
    pub steps: Vec<StepRepr>,
    pub tails: Vec<TailRepr>,
}

fn poly_strings(p: &IntPoly) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

fn poly_from_strings(v: &[String]) -> Option<IntPoly> {
    let coeffs: Option<Vec<BigInt>> = v.iter().map(|s| s.parse().ok()).collect();
    Some(IntPoly::new(coeffs?))
}

impl SequenceRepr {
    pub fn of(seq: &SymbolicSequence) -> Self {
        SequenceRepr {
            steps: seq
                .steps
                .iter()
                .map(|(c, s)| StepRepr {
                    re: RatRepr::of(c.re()),
                    im: RatRepr::of(c.im()),
                    set: DefinableSetRepr::of(s),
                })
                .collect(),
            tails: seq
                .tails
                .iter()
                .map(|t| TailRepr {
                    coeff: GaussianRepr::of(&t.coeff),
                    p: poly_strings(&t.numer),
                    q: poly_strings(&t.denom),
                    r: RatRepr::of(&t.rate),
                    set: DefinableSetRepr::of(&t.support),
                })
                .collect(),
        }
    }

    pub fn to_sequence(&self) -> Result<SymbolicSequence> {
        let mut steps = vec![];
        for s in &self.steps {
            let re = s.re.to_rational().ok_or(Error::NonRealSequence)?;
            let im = s.im.to_rational().ok_or(Error::NonRealSequence)?;
            steps.push((GaussianRational::new(re, im), s.set.to_set()?));
        }
        let mut tails = vec![];
        for t in &self.tails {
            let coeff = t.coeff.to_gaussian().ok_or(Error::NonRealSequence)?;
            let p = poly_from_strings(&t.p).ok_or(Error::NonRealSequence)?;
            let q = poly_from_strings(&t.q).ok_or(Error::NonRealSequence)?;
            let r = t.r.to_rational().ok_or(Error::NonRealSequence)?;
            tails.push(TailTerm::new(t.set.to_set()?, coeff, p, q, r)?);
        }
        Ok(SymbolicSequence::from_parts(steps, tails))
    }
}

impl Serialize for SymbolicSequence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SequenceRepr::of(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymbolicSequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = SequenceRepr::deserialize(d)?;
        repr.to_sequence().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{rat, rat_int};
    use crate::setalg::DefinableSet;

    pub fn inv_n2_plus_1() -> SymbolicSequence {
        SymbolicSequence::rational_fn(IntPoly::one(), IntPoly::from_i64(&[1, 0, 1])).unwrap()
    }

    fn evens() -> DefinableSet {
        DefinableSet::residue_class(2, 0).unwrap()
    }

    fn odds() -> DefinableSet {
        DefinableSet::residue_class(2, 1).unwrap()
    }

    #[test]
    fn eval_examples() {
        let f = inv_n2_plus_1();
        assert_eq!(f.eval(0), GaussianRational::real(rat_int(1)));
        assert_eq!(f.eval(1), GaussianRational::real(rat(1, 2)));
        assert_eq!(f.eval(-3), GaussianRational::real(rat(1, 10)));

        let g = SymbolicSequence::indicator(evens()).add(&SymbolicSequence::step(
            GaussianRational::from_int(3),
            DefinableSet::finite(&[5]),
        ));
        assert_eq!(g.eval(5), GaussianRational::from_int(3));
        assert_eq!(g.eval(4), GaussianRational::from_int(1));
        assert_eq!(g.eval(3), GaussianRational::zero());
    }

    #[test]
    fn indicator_product_is_intersection_indicator() {
        let e = SymbolicSequence::indicator(evens());
        let m3 = SymbolicSequence::indicator(DefinableSet::residue_class(3, 0).unwrap());
        let p = e.mul(&m3);
        assert_eq!(
            p,
            SymbolicSequence::indicator(DefinableSet::residue_class(6, 0).unwrap())
        );
    }

    #[test]
    fn add_negative_cancels() {
        let f = inv_n2_plus_1().add(&SymbolicSequence::indicator(evens()));
        let z = f.add(&f.scale(&GaussianRational::from_int(-1)));
        assert!(z.is_zero());
    }

    #[test]
    fn geometric_product_multiplies_rates() {
        let g = SymbolicSequence::geometric(rat(1, 2)).unwrap();
        let p = g.mul(&g);
        let expected = SymbolicSequence::geometric(rat(1, 4)).unwrap();
        assert_eq!(p, expected);
        for n in -20..=20 {
            assert_eq!(p.eval(n), g.eval(n) * g.eval(n));
        }
    }

    #[test]
    fn ones_on_both_parities_fold_to_constant() {
        let f = SymbolicSequence::indicator(evens()).add(&SymbolicSequence::indicator(odds()));
        assert_eq!(f, SymbolicSequence::constant(GaussianRational::one()));
        assert_eq!(f.steps().len(), 1);
        assert!(f.tails().is_empty());
    }

    #[test]
    fn constant_ratio_tail_folds_to_step() {
        // (n^2+1)/(n^2+1) with rate 1 is the constant 1.
        let t = TailTerm::new(
            DefinableSet::integers(),
            GaussianRational::one(),
            IntPoly::from_i64(&[1, 0, 1]),
            IntPoly::from_i64(&[1, 0, 1]),
            rat_int(1),
        )
        .unwrap();
        let f = SymbolicSequence::from_tail(t);
        assert_eq!(f, SymbolicSequence::constant(GaussianRational::one()));
    }

    #[test]
    fn opposite_tails_cancel() {
        let f = inv_n2_plus_1();
        let g = f.scale(&GaussianRational::from_int(-1));
        assert!(f.add(&g).is_zero());
    }

    #[test]
    fn converging_tail_splits_into_step_plus_proper_part() {
        // n^2/(n^2+1) = 1 - 1/(n^2+1)
        let f = SymbolicSequence::rational_fn(IntPoly::from_i64(&[0, 0, 1]), IntPoly::from_i64(&[1, 0, 1]))
            .unwrap();
        assert_eq!(f.steps().len(), 1);
        assert_eq!(f.steps()[0].0, GaussianRational::one());
        assert_eq!(f.tails().len(), 1);
        assert_eq!(f.tails()[0].decay_class(), DecayClass::PolynomialDecay);
        // pointwise identity check
        let g = SymbolicSequence::constant(GaussianRational::one()).sub(&inv_n2_plus_1());
        assert_eq!(f, g);
    }

    #[test]
    fn phantom_tail_cancellation_across_denominators() {
        // 1/(n^2+1) + 1/(n^2+2) - (2n^2+3)/((n^2+1)(n^2+2)) = 0
        let a = SymbolicSequence::rational_fn(IntPoly::one(), IntPoly::from_i64(&[1, 0, 1])).unwrap();
        let b = SymbolicSequence::rational_fn(IntPoly::one(), IntPoly::from_i64(&[2, 0, 1])).unwrap();
        let c = SymbolicSequence::rational_fn(
            IntPoly::from_i64(&[3, 0, 2]),
            IntPoly::from_i64(&[1, 0, 1]).mul(&IntPoly::from_i64(&[2, 0, 1])),
        )
        .unwrap();
        let sum = a.add(&b).sub(&c);
        assert!(sum.is_zero());
    }

    #[test]
    fn unbounded_tail_rejected() {
        let err = SymbolicSequence::rational_fn(IntPoly::var(), IntPoly::one());
        assert_eq!(err.unwrap_err(), Error::UnboundedTail);
    }

    #[test]
    fn vanishing_denominator_rejected() {
        let err = TailTerm::new(
            DefinableSet::integers(),
            GaussianRational::one(),
            IntPoly::one(),
            IntPoly::from_i64(&[-4, 0, 1]),
            rat_int(1),
        );
        match err.unwrap_err() {
            Error::VanishingDenominator(n) => assert!(n == 2 || n == -2),
            other => panic!("expected vanishing denominator, got {:?}", other),
        }
    }

    #[test]
    fn rate_validation() {
        assert!(SymbolicSequence::geometric(rat(3, 2)).is_err());
        assert!(SymbolicSequence::geometric(rat_int(0)).is_err());
        assert!(SymbolicSequence::geometric(rat_int(1)).is_ok());
    }

    #[test]
    fn conjugation() {
        let z = GaussianRational::new(rat(1, 2), rat(3, 4));
        let f = SymbolicSequence::constant(z.clone());
        assert_eq!(f.conj().eval(0), z.conj());
    }

    #[test]
    fn serde_round_trip() {
        let f = inv_n2_plus_1().add(&SymbolicSequence::indicator(evens()));
        let json = serde_json::to_string(&f).unwrap();
        let back: SymbolicSequence = serde_json::from_str(&json).unwrap();
        assert_eq!(f, back);
    }

    #[test]
    fn normalize_is_idempotent_and_preserves_eval() {
        let f = inv_n2_plus_1()
            .add(&SymbolicSequence::indicator(evens()))
            .mul(&SymbolicSequence::geometric(rat(1, 2)).unwrap());
        let again = SymbolicSequence::from_parts(f.steps().to_vec(), f.tails().to_vec());
        assert_eq!(f, again);
    }

    #[test]
    fn add_then_subtract_restores_the_normal_form() {
        use rand::rngs::StdRng;
        use rand::SeedableRng;
        let mut rng = StdRng::seed_from_u64(0xADD5);
        for _ in 0..40 {
            let phi = crate::sample::sample_bounded_sequence(&mut rng);
            let psi = crate::sample::sample_bounded_sequence(&mut rng);
            let round_trip = phi.add(&psi).sub(&psi);
            assert_eq!(round_trip, phi, "canonical form drifted for {}", phi);
        }
    }

    #[test]
    fn operations_agree_pointwise_on_the_test_window() {
        use rand::rngs::StdRng;
        use rand::SeedableRng;
        let mut rng = StdRng::seed_from_u64(0x0b5);
        for _ in 0..15 {
            let a = crate::sample::sample_bounded_sequence(&mut rng);
            let b = crate::sample::sample_bounded_sequence(&mut rng);
            let c = crate::sample::small_gaussian(&mut rng);
            let sum = a.add(&b);
            let prod = a.mul(&b);
            let scaled = a.scale(&c);
            let conj = a.conj();
            for n in -200..=200 {
                let (va, vb) = (a.eval(n), b.eval(n));
                assert_eq!(sum.eval(n), &va + &vb, "sum at {}", n);
                assert_eq!(prod.eval(n), &va * &vb, "product at {}", n);
                assert_eq!(scaled.eval(n), &c * &va, "scale at {}", n);
                assert_eq!(conj.eval(n), va.conj(), "conj at {}", n);
            }
        }
    }
}

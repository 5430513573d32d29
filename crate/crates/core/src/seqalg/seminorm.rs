//! Certified Schwartz seminorms `sup_n |n^d phi(n)|`.
//!
//! Per direction, `|n^d phi(n)|^2` splits into a rational function (the
//! step constant plus rate-1 part, squared) and geometric corrections. The
//! rational part is monotone beyond its critical-point bound, so its exact
//! supremum over the class is the value at the first class member or the
//! limit at infinity, whichever is larger. Geometric corrections are
//! bounded by their certified-decreasing values at the zone start, which
//! pushes the bracket below any requested tolerance.

use crate::num::{rational_sqrt_bounds, rational_sqrt_exact, RatRepr};
use crate::poly::{geometric_decay_start, rate_pow_abs, IntPoly, LimitKind, RatFn};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use super::cells::{class_members, directional, signed_member};
use super::SymbolicSequence;

/// Result of a seminorm computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeminormValue {
    /// `sup |n^d phi(n)| = infinity`, decided from the cell structure.
    Infinite,
    /// The supremum, attained and exactly rational.
    Exact(BigRational),
    /// A certified bracket: the supremum lies in [lo, hi].
    Interval { lo: BigRational, hi: BigRational },
}

impl SeminormValue {
    pub fn upper(&self) -> Option<&BigRational> {
        match self {
            SeminormValue::Infinite => None,
            SeminormValue::Exact(v) => Some(v),
            SeminormValue::Interval { hi, .. } => Some(hi),
        }
    }

    pub fn lower(&self) -> Option<&BigRational> {
        match self {
            SeminormValue::Infinite => None,
            SeminormValue::Exact(v) => Some(v),
            SeminormValue::Interval { lo, .. } => Some(lo),
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, SeminormValue::Infinite)
    }
}

impl fmt::Display for SeminormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeminormValue::Infinite => write!(f, "infinite"),
            SeminormValue::Exact(v) => write!(f, "{}", v),
            SeminormValue::Interval { lo, hi } => write!(f, "[{}, {}]", lo, hi),
        }
    }
}

/// Wire form of a seminorm value.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SeminormRepr {
    Infinite,
    Exact { value: RatRepr },
    Interval { lo: RatRepr, hi: RatRepr },
}

impl SeminormRepr {
    pub fn of(v: &SeminormValue) -> Self {
        match v {
            SeminormValue::Infinite => SeminormRepr::Infinite,
            SeminormValue::Exact(x) => SeminormRepr::Exact {
                value: RatRepr::of(x),
            },
            SeminormValue::Interval { lo, hi } => SeminormRepr::Interval {
                lo: RatRepr::of(lo),
                hi: RatRepr::of(hi),
            },
        }
    }
}

struct ZoneEstimate {
    /// Exact lower bound for the squared zone supremum.
    lo_sq: BigRational,
    /// Upper bound for the (unsquared) zone supremum.
    hi: BigRational,
    /// The zone supremum is exactly sqrt(lo_sq).
    tight: bool,
    /// The zone supremum is attained at an integer.
    attained: bool,
}

/// Analysis shared by every direction with the same cell data.
struct Analysis {
    a_re: RatFn,
    a_im: RatFn,
    m_sq: RatFn,
    rho_sq: BigRational,
    rapids: Vec<(BigRational, RatFn)>,
    /// Crude-envelope validity start; small, never Sturm-derived.
    cheap_start: i64,
    /// Unsquared upper bound for the class supremum beyond `cheap_start`.
    crude_hi: BigRational,
    /// Monotone-zone start, computed only for zones that can matter.
    refined_start: Option<i64>,
}

pub(crate) fn schwartz_seminorm(
    seq: &SymbolicSequence,
    d: u32,
    tol: &BigRational,
) -> SeminormValue {
    let cells = seq.cells();
    let xd = IntPoly::var_pow(d as usize);
    let budget = tol / BigRational::from_integer(4.into());

    // Phase 1: one cheap analysis per distinct cell structure. The crude
    // envelope bound lets the expensive monotone-zone certificates run
    // only for zones that can actually carry the supremum.
    type ZoneKey = (
        crate::setalg::Sign,
        crate::num::GaussianRational,
        RatFn,
        RatFn,
        Vec<(BigRational, RatFn, RatFn)>,
    );
    let mut keys: Vec<ZoneKey> = vec![];
    let mut analyses: Vec<Analysis> = vec![];
    let mut zones: Vec<(crate::setalg::Sign, i64, usize)> = vec![];
    for (&(sign, r), data) in &cells.data {
        let key: ZoneKey = (
            sign,
            data.constant.clone(),
            data.proper_re.clone(),
            data.proper_im.clone(),
            data.rapid
                .iter()
                .map(|g| (g.rate.clone(), g.re.clone(), g.im.clone()))
                .collect(),
        );
        let idx = match keys.iter().position(|k| k == &key) {
            Some(i) => i,
            None => {
                let a_re = directional(&data.proper_re, sign)
                    .add_const(data.constant.re())
                    .mul_poly(&xd);
                let a_im = directional(&data.proper_im, sign)
                    .add_const(data.constant.im())
                    .mul_poly(&xd);
                let m_sq = a_re.square().add(&a_im.square());
                let rho_sq = match m_sq.limit_kind() {
                    LimitKind::Zero => BigRational::zero(),
                    LimitKind::Finite(v) => v,
                    LimitKind::Infinite => return SeminormValue::Infinite,
                };
                let rapids: Vec<(BigRational, RatFn)> = data
                    .rapid
                    .iter()
                    .flat_map(|g| {
                        [(g.rate.clone(), g.re.clone()), (g.rate.clone(), g.im.clone())]
                    })
                    .filter(|(_, f)| !f.is_zero())
                    .map(|(rate, f)| (rate, directional(&f, sign).mul_poly(&xd)))
                    .collect();
                let deviation = m_sq.sub(&RatFn::constant(rho_sq.clone()));
                let mut cheap_start = seq
                    .max_threshold()
                    .max(1)
                    .max(envelope_start(&deviation));
                for (rate, g) in &rapids {
                    cheap_start = cheap_start.max(geometric_decay_start(g, rate));
                }
                let crude_hi_sq = &rho_sq + envelope_at(&deviation, cheap_start);
                let crude_hi =
                    upper_sqrt(&crude_hi_sq, &budget) + rapid_sum_at(&rapids, cheap_start);
                keys.push(key);
                analyses.push(Analysis {
                    a_re,
                    a_im,
                    m_sq,
                    rho_sq,
                    rapids,
                    cheap_start,
                    crude_hi,
                    refined_start: None,
                });
                keys.len() - 1
            }
        };
        zones.push((sign, r, idx));
    }

    // Phase 2: exact lower candidates — a small window plus each zone's
    // first class member beyond its cheap start.
    let base_window = seq.max_threshold().max(4);
    let mut best_lo_sq = BigRational::zero();
    for n in -base_window..=base_window {
        let weight = BigRational::from_integer(BigInt::from(n).pow(2 * d));
        let v = seq.eval(n).abs_sq() * weight;
        if v > best_lo_sq {
            best_lo_sq = v;
        }
    }
    for &(sign, r, idx) in &zones {
        let a = &analyses[idx];
        let m_star = class_members(sign, cells.modulus, r, a.cheap_start)
            .next()
            .expect("arithmetic progression is infinite");
        let n_star = signed_member(sign, m_star);
        let weight = BigRational::from_integer(BigInt::from(m_star).pow(2 * d));
        let v = seq.eval(n_star).abs_sq() * weight;
        best_lo_sq = best_lo_sq.max(v).max(a.rho_sq.clone());
    }

    // Phase 3: refine the zones whose crude bound beats the best exact
    // lower candidate; the rest provably sit below the supremum.
    let domination_bar = rational_sqrt_bounds(&best_lo_sq, &budget).0;
    for a in &mut analyses {
        if a.crude_hi <= domination_bar {
            continue;
        }
        let mut start = a.cheap_start.max(monotone_start(&a.a_re, &a.a_im, &a.m_sq));
        while rapid_sum_at(&a.rapids, start) > budget {
            start *= 2;
        }
        a.refined_start = Some(start);
    }

    // Window scan: cover every zone's gap up to its certificate start,
    // plus one period so each zone's first member lands inside.
    let cutoff = analyses
        .iter()
        .map(|a| a.refined_start.unwrap_or(a.cheap_start))
        .max()
        .unwrap_or(1)
        .max(base_window)
        + cells.modulus;
    let mut window_max_sq = BigRational::zero();
    for n in -cutoff..=cutoff {
        let weight = BigRational::from_integer(BigInt::from(n).pow(2 * d));
        let v = seq.eval(n).abs_sq() * weight;
        if v > window_max_sq {
            window_max_sq = v;
        }
    }

    let mut estimates: Vec<ZoneEstimate> = vec![];
    for &(sign, r, idx) in &zones {
        let a = &analyses[idx];
        let Some(start) = a.refined_start else {
            // Dominated: supremum over this zone is at most crude_hi,
            // itself at most the global lower bound.
            continue;
        };
        let m_star = class_members(sign, cells.modulus, r, start.max(cutoff))
            .next()
            .expect("arithmetic progression is infinite");
        let a_sq_star = if a.m_sq.is_zero() {
            BigRational::zero()
        } else {
            a.m_sq.eval(m_star)
        };
        if a.rapids.is_empty() {
            // Purely rational: sup over the class is exactly
            // max(value at first member, limit), by monotonicity.
            let attained = a_sq_star >= a.rho_sq;
            let lo_sq = a_sq_star.max(a.rho_sq.clone());
            let hi = upper_sqrt(&lo_sq, &budget);
            estimates.push(ZoneEstimate {
                lo_sq,
                hi,
                tight: true,
                attained,
            });
            continue;
        }
        let n_star = signed_member(sign, m_star);
        let value_sq_star = {
            let weight = BigRational::from_integer(BigInt::from(m_star).pow(2 * d));
            seq.eval(n_star).abs_sq() * weight
        };
        if a.m_sq.is_zero() && a.rapids.len() == 1 {
            // One geometric term, certified nonincreasing: the first class
            // member attains the zone supremum.
            let hi = upper_sqrt(&value_sq_star, &budget);
            estimates.push(ZoneEstimate {
                lo_sq: value_sq_star,
                hi,
                tight: true,
                attained: true,
            });
            continue;
        }
        // Mixed: bracket by the rational part's exact supremum plus the
        // correction budget.
        let zone_a_sq = a_sq_star.max(a.rho_sq.clone());
        let lo_sq = value_sq_star.max(a.rho_sq.clone());
        let hi = upper_sqrt(&zone_a_sq, &budget) + rapid_sum_at(&a.rapids, m_star);
        estimates.push(ZoneEstimate {
            lo_sq,
            hi,
            tight: false,
            attained: false,
        });
    }

    // Assemble the global bracket.
    let mut best_lo_sq = window_max_sq.clone();
    let mut winner_attained = true; // window maxima are attained
    for e in &estimates {
        if e.lo_sq > best_lo_sq {
            best_lo_sq = e.lo_sq.clone();
            winner_attained = e.attained;
        }
    }
    let all_tight = estimates.iter().all(|e| e.tight);

    if all_tight {
        // The supremum is exactly sqrt(best_lo_sq).
        if winner_attained {
            if let Some(s) = rational_sqrt_exact(&best_lo_sq) {
                return SeminormValue::Exact(s);
            }
        }
        let (lo, hi) = rational_sqrt_bounds(&best_lo_sq, &budget);
        return SeminormValue::Interval { lo, hi };
    }

    let mut best_hi = upper_sqrt(&window_max_sq, &budget);
    for e in &estimates {
        if e.hi > best_hi {
            best_hi = e.hi.clone();
        }
    }
    let (lo, _) = rational_sqrt_bounds(&best_lo_sq, &budget);
    SeminormValue::Interval { lo, hi: best_hi }
}

/// `M = A^2` is monotone wherever A is monotone with stable sign; for
/// pure-real or pure-imaginary parts this halves the Sturm degree.
fn monotone_start(a_re: &RatFn, a_im: &RatFn, m_sq: &RatFn) -> i64 {
    if m_sq.is_zero() {
        1
    } else if a_im.is_zero() {
        a_re.monotone_from().max(a_re.sign_stable_from())
    } else if a_re.is_zero() {
        a_im.monotone_from().max(a_im.sign_stable_from())
    } else {
        m_sq.monotone_from()
    }
}

/// Validity start for the coefficient envelope of a strictly proper
/// function: beyond it the denominator's leading term dominates.
fn envelope_start(h: &RatFn) -> i64 {
    if h.is_zero() {
        return 1;
    }
    let den = h.den();
    let lead = den.leading().unwrap().magnitude().clone();
    let rest: num_bigint::BigUint = den.coeffs()[..den.coeffs().len() - 1]
        .iter()
        .map(|c| c.magnitude().clone())
        .sum();
    let bound = (rest / lead) + 2u32;
    i64::try_from(BigInt::from(bound)).expect("envelope start fits in i64")
}

/// Coefficient envelope: `sup over m >= b of |h(m)| <= envelope_at(h, b)`
/// for strictly proper h and b at least `envelope_start(h)`; the bound is
/// nonincreasing in b.
fn envelope_at(h: &RatFn, b: i64) -> BigRational {
    if h.is_zero() {
        return BigRational::zero();
    }
    debug_assert!(h.is_strictly_proper());
    let num_sum: BigInt = h.num().coeffs().iter().map(|c| c.abs()).sum();
    let den = h.den();
    let lead = den.leading().unwrap();
    let rest: BigInt = den.coeffs()[..den.coeffs().len() - 1]
        .iter()
        .map(|c| c.abs())
        .sum();
    let dn = h.num().degree().unwrap() as u32;
    let dd = den.degree().unwrap() as u32;
    let bb = BigInt::from(b);
    let top = h.scale_part().abs() * BigRational::from_integer(num_sum * bb.pow(dn));
    let bottom =
        BigRational::from_integer(lead * bb.pow(dd) - rest * bb.pow(dd.saturating_sub(1)));
    debug_assert!(bottom.is_positive());
    top / bottom
}

fn rapid_sum_at(rapids: &[(BigRational, RatFn)], m: i64) -> BigRational {
    rapids
        .iter()
        .map(|(rate, g)| g.eval(m).abs() * rate_pow_abs(rate, m))
        .sum()
}

fn upper_sqrt(x_sq: &BigRational, tol: &BigRational) -> BigRational {
    if x_sq.is_zero() {
        return BigRational::zero();
    }
    rational_sqrt_bounds(x_sq, tol).1
}

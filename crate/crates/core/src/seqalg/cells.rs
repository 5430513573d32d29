//! Directional cell structure of a normalized sequence.
//!
//! For a fixed modulus L (the lcm of every support modulus), each direction
//! `(sign, residue mod L)` sees the sequence as
//! `constant + proper(n) + sum_j rapid_j(n) * r_j^|n|`,
//! where `proper` collects the rate-1 tails (strictly proper, so it decays
//! to 0) and each rapid group collects the tails of one rate < 1. All
//! downstream analysis (thresholds, seminorms, smoothness) happens on this
//! structure.

use crate::num::GaussianRational;
use crate::poly::RatFn;
use crate::setalg::Sign;
use num_rational::BigRational;
use std::collections::BTreeMap;

use super::SymbolicSequence;

#[derive(Debug, Clone)]
pub(crate) struct RapidGroup {
    pub rate: BigRational,
    pub re: RatFn,
    pub im: RatFn,
}

#[derive(Debug, Clone)]
pub(crate) struct DirectionData {
    /// Sum of the step constants whose supports contain the direction.
    pub constant: GaussianRational,
    /// Combined rate-1 tail, real part; strictly proper or zero.
    pub proper_re: RatFn,
    /// Combined rate-1 tail, imaginary part.
    pub proper_im: RatFn,
    /// One entry per rate < 1 present on this direction.
    pub rapid: Vec<RapidGroup>,
}

#[derive(Debug, Clone)]
pub(crate) struct CellStructure {
    pub modulus: i64,
    pub data: BTreeMap<(Sign, i64), DirectionData>,
}

pub(crate) fn cell_structure(seq: &SymbolicSequence) -> CellStructure {
    let modulus = seq.cell_modulus();
    // Reduce each tail's rational function once, not once per direction.
    let tail_fns: Vec<(RatFn, RatFn)> = seq
        .tails()
        .iter()
        .map(|t| {
            let base = RatFn::from_int_parts(t.numer(), t.denom());
            (base.scaled(t.coeff().re()), base.scaled(t.coeff().im()))
        })
        .collect();
    let one = BigRational::from_integer(1.into());
    let mut data = BTreeMap::new();
    for sign in [Sign::Pos, Sign::Neg] {
        for r in 0..modulus {
            let mut constant = GaussianRational::zero();
            for (c, s) in seq.steps() {
                if s.direction_contains(sign, modulus, r).expect("lcm modulus") {
                    constant = &constant + c;
                }
            }
            let mut proper_re = RatFn::zero();
            let mut proper_im = RatFn::zero();
            let mut rapid: BTreeMap<BigRational, (RatFn, RatFn)> = BTreeMap::new();
            for (t, (re, im)) in seq.tails().iter().zip(&tail_fns) {
                if !t
                    .support()
                    .direction_contains(sign, modulus, r)
                    .expect("lcm modulus")
                {
                    continue;
                }
                if t.rate() == &one {
                    proper_re = proper_re.add(re);
                    proper_im = proper_im.add(im);
                } else {
                    let entry = rapid
                        .entry(t.rate().clone())
                        .or_insert_with(|| (RatFn::zero(), RatFn::zero()));
                    entry.0 = entry.0.add(re);
                    entry.1 = entry.1.add(im);
                }
            }
            let rapid = rapid
                .into_iter()
                .filter(|(_, (re, im))| !re.is_zero() || !im.is_zero())
                .map(|(rate, (re, im))| RapidGroup { rate, re, im })
                .collect();
            data.insert(
                (sign, r),
                DirectionData {
                    constant,
                    proper_re,
                    proper_im,
                    rapid,
                },
            );
        }
    }
    CellStructure { modulus, data }
}

/// A rational function as seen walking out along a direction: identity for
/// +inf, reflected for -inf, so the walk variable m = |n| is always >= 0.
pub(crate) fn directional(f: &RatFn, sign: Sign) -> RatFn {
    match sign {
        Sign::Pos => f.clone(),
        Sign::Neg => f.reflect(),
    }
}

/// Members of the direction's residue class with |n| >= from, as the walk
/// values m = |n| (ascending). The actual integer is `sign * m`.
pub(crate) fn class_members(
    sign: Sign,
    modulus: i64,
    residue: i64,
    from: i64,
) -> impl Iterator<Item = i64> {
    let target = match sign {
        Sign::Pos => residue.rem_euclid(modulus),
        Sign::Neg => (-residue).rem_euclid(modulus),
    };
    let start = from + (target - from).rem_euclid(modulus);
    (0..).map(move |k| start + k * modulus)
}

/// Converts a walk value m back to the signed integer on the class.
pub(crate) fn signed_member(sign: Sign, m: i64) -> i64 {
    match sign {
        Sign::Pos => m,
        Sign::Neg => -m,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{rat, rat_int};
    use crate::poly::IntPoly;
    use crate::setalg::DefinableSet;
    use crate::seqalg::TailTerm;

    #[test]
    fn structure_of_mixed_sequence() {
        // 1_evens + 1/(n^2+1) on odds + (1/2)^|n| everywhere
        let evens = DefinableSet::residue_class(2, 0).unwrap();
        let odds = DefinableSet::residue_class(2, 1).unwrap();
        let seq = SymbolicSequence::indicator(evens)
            .add(&SymbolicSequence::from_tail(
                TailTerm::new(
                    odds,
                    GaussianRational::one(),
                    IntPoly::one(),
                    IntPoly::from_i64(&[1, 0, 1]),
                    rat_int(1),
                )
                .unwrap(),
            ))
            .add(&SymbolicSequence::geometric(rat(1, 2)).unwrap());
        let cs = seq.cells();
        assert_eq!(cs.modulus, 2);
        let even_dir = &cs.data[&(Sign::Pos, 0)];
        assert_eq!(even_dir.constant, GaussianRational::one());
        assert!(even_dir.proper_re.is_zero());
        assert_eq!(even_dir.rapid.len(), 1);
        let odd_dir = &cs.data[&(Sign::Neg, 1)];
        assert!(odd_dir.constant.is_zero());
        assert!(!odd_dir.proper_re.is_zero());
    }

    #[test]
    fn class_member_walks() {
        // class n = 1 mod 3 toward -inf: members -2, -5, -8, ...
        let ms: Vec<i64> = class_members(Sign::Neg, 3, 1, 1).take(3).collect();
        assert_eq!(ms, vec![2, 5, 8]);
        assert_eq!(signed_member(Sign::Neg, 2), -2);
        let ps: Vec<i64> = class_members(Sign::Pos, 3, 1, 5).take(3).collect();
        assert_eq!(ps, vec![7, 10, 13]);
    }
}

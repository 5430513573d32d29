//! The two projection expansions: the greedy dyadic series with a
//! geometric remainder bound, and the unique disjoint level-set form for
//! step functions.

use crate::error::{Error, Result};
use crate::num::{rat_pow, GaussianRational, RatRepr};
use crate::seqalg::{SeminormValue, SymbolicSequence};
use crate::setalg::{DefinableSet, DefinableSetRepr};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// One level of a dyadic expansion: weight `2^-q` on a projection support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyadicLevel {
    pub weight: BigRational,
    pub support: DefinableSet,
}

/// Greedy dyadic expansion of a [0, 1]-valued sequence to depth N, with a
/// certified remainder bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyadicExpansion {
    pub levels: Vec<DyadicLevel>,
    pub depth: u32,
    /// `sup |phi - recomposition| <= remainder_bound`, always <= 2^-N.
    pub remainder_bound: BigRational,
    /// Exact sup of the remainder when it is a pure step function.
    pub remainder_sup: Option<BigRational>,
}

/// The unique disjoint-projection form of a step function: pairwise
/// disjoint supports, distinct nonzero constants, sorted by constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelExpansion {
    pub terms: Vec<(GaussianRational, DefinableSet)>,
}

/// Certifies `lo <= phi(n) <= hi` for every n, or names a violating n.
pub fn check_range(
    seq: &SymbolicSequence,
    lo: &BigRational,
    hi: &BigRational,
) -> Result<()> {
    if !seq.is_real() {
        return Err(Error::NonRealSequence);
    }
    let below = crate::seqalg::set_where_ge_internal(seq, lo)?.complement();
    let above = crate::seqalg::set_where_ge_internal(&seq.neg(), &-hi.clone())?.complement();
    for bad in [below, above] {
        if let Some(n) = bad.witness() {
            return Err(Error::RangeViolation {
                n,
                value: seq.eval(n).to_string(),
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
    }
    Ok(())
}

/// Greedy dyadic decomposition per the threshold rule: at step q the level
/// support is `{ n : remainder(n) >= 2^-q }`, which halves the remainder
/// range.
pub fn dyadic_decompose(seq: &SymbolicSequence, depth: u32) -> Result<DyadicExpansion> {
    if depth < 1 {
        return Err(Error::InvalidDepth);
    }
    check_range(seq, &BigRational::zero(), &BigRational::one())?;
    let half = crate::num::rat(1, 2);
    let mut remainder = seq.clone();
    let mut levels = vec![];
    let mut weight = BigRational::one();
    for _ in 1..=depth {
        weight *= &half;
        let support = crate::seqalg::set_where_ge_internal(&remainder, &weight)?;
        let taken = SymbolicSequence::indicator(support.clone())
            .scale(&GaussianRational::real(weight.clone()));
        remainder = remainder.sub(&taken);
        levels.push(DyadicLevel {
            weight: weight.clone(),
            support,
        });
    }
    let bound_from_depth = rat_pow(&half, depth as u64);
    let remainder_sup = if remainder.tails().is_empty() {
        match remainder.sup_norm() {
            SeminormValue::Exact(v) => Some(v),
            _ => None,
        }
    } else {
        None
    };
    let remainder_bound = match &remainder_sup {
        Some(v) if v < &bound_from_depth => v.clone(),
        _ => bound_from_depth,
    };
    Ok(DyadicExpansion {
        levels,
        depth,
        remainder_bound,
        remainder_sup,
    })
}

/// The symbolic remainder after subtracting the expansion from the input.
pub fn dyadic_remainder(seq: &SymbolicSequence, exp: &DyadicExpansion) -> SymbolicSequence {
    seq.sub(&recompose_dyadic(exp))
}

pub fn recompose_dyadic(exp: &DyadicExpansion) -> SymbolicSequence {
    let steps = exp
        .levels
        .iter()
        .map(|l| {
            (
                GaussianRational::real(l.weight.clone()),
                l.support.clone(),
            )
        })
        .collect();
    SymbolicSequence::from_parts(steps, vec![])
}

/// Level-set form of a step function. The normal form already groups equal
/// values on disjoint supports, so this validates and reads it off.
pub fn level_decompose(seq: &SymbolicSequence) -> Result<LevelExpansion> {
    if !seq.tails().is_empty() {
        return Err(Error::TailsInLevelForm);
    }
    Ok(LevelExpansion {
        terms: seq.steps().to_vec(),
    })
}

pub fn recompose_level(exp: &LevelExpansion) -> SymbolicSequence {
    SymbolicSequence::from_parts(exp.terms.clone(), vec![])
}

/// Wire forms.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DyadicLevelRepr {
    pub weight: RatRepr,
    pub set: DefinableSetRepr,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DyadicExpansionRepr {
    pub levels: Vec<DyadicLevelRepr>,
    pub depth: u32,
    pub remainder_bound: RatRepr,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub remainder_sup: Option<RatRepr>,
}

impl DyadicExpansionRepr {
    pub fn of(e: &DyadicExpansion) -> Self {
        DyadicExpansionRepr {
            levels: e
                .levels
                .iter()
                .map(|l| DyadicLevelRepr {
                    weight: RatRepr::of(&l.weight),
                    set: DefinableSetRepr::of(&l.support),
                })
                .collect(),
            depth: e.depth,
            remainder_bound: RatRepr::of(&e.remainder_bound),
            remainder_sup: e.remainder_sup.as_ref().map(RatRepr::of),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LevelTermRepr {
    pub constant: crate::num::GaussianRepr,
    pub set: DefinableSetRepr,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LevelExpansionRepr {
    pub terms: Vec<LevelTermRepr>,
}

impl LevelExpansionRepr {
    pub fn of(e: &LevelExpansion) -> Self {
        LevelExpansionRepr {
            terms: e
                .terms
                .iter()
                .map(|(c, s)| LevelTermRepr {
                    constant: crate::num::GaussianRepr::of(c),
                    set: DefinableSetRepr::of(s),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{rat, rat_int};
    use crate::poly::IntPoly;
    use num_traits::Signed;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn evens() -> DefinableSet {
        DefinableSet::residue_class(2, 0).unwrap()
    }

    #[test]
    fn constant_three_quarters_terminates() {
        let c = SymbolicSequence::constant_rational(rat(3, 4));
        let e = dyadic_decompose(&c, 3).unwrap();
        assert_eq!(e.levels[0].support, DefinableSet::integers());
        assert_eq!(e.levels[1].support, DefinableSet::integers());
        assert!(e.levels[2].support.is_empty());
        assert_eq!(e.remainder_bound, rat_int(0));
        assert_eq!(e.remainder_sup, Some(rat_int(0)));
        assert_eq!(recompose_dyadic(&e), c);
    }

    #[test]
    fn indicator_repeats_forever() {
        let f = SymbolicSequence::indicator(evens());
        let e = dyadic_decompose(&f, 4).unwrap();
        for l in &e.levels {
            assert_eq!(l.support, evens());
        }
        assert_eq!(e.remainder_sup, Some(rat(1, 16)));
    }

    #[test]
    fn peak_function_levels() {
        // 1/(n^2+1): p_{1/2} = {-1, 0, 1}; after subtracting, the remainder
        // at 0 is 1/2 and at +-1 is 0, so p_{1/4} = {-1, 0, 1} intersected
        // with { remainder >= 1/4 } = {0}.
        let f = SymbolicSequence::rational_fn(IntPoly::one(), IntPoly::from_i64(&[1, 0, 1]))
            .unwrap();
        let e = dyadic_decompose(&f, 2).unwrap();
        assert_eq!(e.levels[0].support, DefinableSet::finite(&[-1, 0, 1]));
        // brute-force greedy oracle on [-10, 10]
        let mut rem: Vec<BigRational> = (-10..=10)
            .map(|n| f.eval(n).re().clone())
            .collect();
        for (q, level) in e.levels.iter().enumerate() {
            let w = rat_pow(&rat(1, 2), (q + 1) as u64);
            for (idx, n) in (-10i64..=10).enumerate() {
                let member = rem[idx] >= w;
                assert_eq!(
                    level.support.contains(n),
                    member,
                    "level {} at n = {}",
                    q + 1,
                    n
                );
                if member {
                    rem[idx] -= &w;
                }
            }
        }
    }

    #[test]
    fn range_violation_names_witness() {
        let c = SymbolicSequence::constant_rational(rat(5, 4));
        match dyadic_decompose(&c, 2) {
            Err(Error::RangeViolation { n, .. }) => {
                assert_eq!(c.eval(n).re(), &rat(5, 4));
            }
            other => panic!("expected range violation, got {:?}", other),
        }
    }

    #[test]
    fn greedy_invariant_certified() {
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..10 {
            let phi = crate::sample::sample_unit_range_sequence(&mut rng);
            let mut remainder = phi.clone();
            let mut weight = rat_int(1);
            for _ in 1..=6 {
                weight = weight * rat(1, 2);
                let support =
                    crate::seqalg::set_where_ge_internal(&remainder, &weight).unwrap();
                remainder = remainder.sub(
                    &SymbolicSequence::indicator(support)
                        .scale(&GaussianRational::real(weight.clone())),
                );
                check_range(&remainder, &rat_int(0), &weight).unwrap();
            }
        }
    }

    #[test]
    fn level_form_basics() {
        // disjoint pieces group by value directly
        let f = SymbolicSequence::step(GaussianRational::from_int(2), evens())
            .add(&SymbolicSequence::step(
                GaussianRational::from_int(2),
                DefinableSet::finite(&[3]),
            ))
            .add(&SymbolicSequence::step(
                GaussianRational::from_int(5),
                DefinableSet::finite(&[9]),
            ));
        let e = level_decompose(&f).unwrap();
        assert_eq!(e.terms.len(), 2);
        assert_eq!(e.terms[0].0, GaussianRational::from_int(2));
        assert_eq!(e.terms[0].1, evens().union(&DefinableSet::finite(&[3])));
        assert_eq!(e.terms[1].0, GaussianRational::from_int(5));
        assert_eq!(recompose_level(&e), f);

        // overlapping pieces combine pointwise before grouping: the value
        // at 8 is 2 + 5 = 7
        let g = SymbolicSequence::step(GaussianRational::from_int(2), evens()).add(
            &SymbolicSequence::step(GaussianRational::from_int(5), DefinableSet::finite(&[8])),
        );
        let eg = level_decompose(&g).unwrap();
        assert_eq!(eg.terms.len(), 2);
        assert_eq!(eg.terms[0].0, GaussianRational::from_int(2));
        assert_eq!(eg.terms[0].1, evens().difference(&DefinableSet::finite(&[8])));
        assert_eq!(eg.terms[1].0, GaussianRational::from_int(7));
        assert_eq!(recompose_level(&eg), g);

        assert_eq!(
            level_decompose(&SymbolicSequence::zero()).unwrap().terms,
            vec![]
        );

        let with_tail = SymbolicSequence::rational_fn(
            IntPoly::one(),
            IntPoly::from_i64(&[1, 0, 1]),
        )
        .unwrap();
        assert_eq!(
            level_decompose(&with_tail).unwrap_err(),
            Error::TailsInLevelForm
        );
    }

    #[test]
    fn level_form_matches_value_grouping_oracle() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..50 {
            let f = crate::sample::sample_step_sequence(&mut rng, 4);
            let e = level_decompose(&f).unwrap();
            // pairwise disjoint, distinct constants
            for i in 0..e.terms.len() {
                for j in (i + 1)..e.terms.len() {
                    assert!(e.terms[i].1.intersect(&e.terms[j].1).is_empty());
                    assert_ne!(e.terms[i].0, e.terms[j].0);
                }
            }
            // value-grouping oracle on [-60, 60]
            for n in -60..=60 {
                let v = f.eval(n);
                let from_terms = e
                    .terms
                    .iter()
                    .find(|(_, s)| s.contains(n))
                    .map(|(c, _)| c.clone())
                    .unwrap_or_else(GaussianRational::zero);
                assert_eq!(v, from_terms);
            }
        }
    }

    #[test]
    fn level_output_invariant_under_permutation() {
        let mut rng = StdRng::seed_from_u64(29);
        for _ in 0..50 {
            let terms: Vec<(GaussianRational, DefinableSet)> = (0..4)
                .map(|_| {
                    (
                        crate::sample::small_gaussian(&mut rng),
                        crate::setalg::sample_set(&mut rng, 6, 3),
                    )
                })
                .collect();
            let forward = SymbolicSequence::from_parts(terms.clone(), vec![]);
            let mut shuffled = terms.clone();
            shuffled.reverse();
            shuffled.rotate_left(1);
            let backward = SymbolicSequence::from_parts(shuffled, vec![]);
            assert_eq!(
                level_decompose(&forward).unwrap(),
                level_decompose(&backward).unwrap()
            );
        }
    }

    #[test]
    fn dyadic_rate_on_peak() {
        let f = SymbolicSequence::rational_fn(IntPoly::one(), IntPoly::from_i64(&[1, 0, 1]))
            .unwrap();
        let e = dyadic_decompose(&f, 8).unwrap();
        let approx = recompose_dyadic(&e);
        let bound = rat_pow(&rat(1, 2), 8);
        for n in -100..=100 {
            let err = (f.eval(n).re() - approx.eval(n).re()).abs();
            assert!(err <= bound, "error {} at n = {}", err, n);
        }
    }
}

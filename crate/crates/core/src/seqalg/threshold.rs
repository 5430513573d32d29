//! Exact computation of threshold sets { n : phi(n) >= t }.
//!
//! Beyond a certified cutoff the verdict on each direction is periodic; the
//! cutoff comes from monotone zones of the rate-1 part and certified decay
//! starts of the geometric parts, never from sampling alone. Inside the
//! cutoff, membership is decided by exact evaluation.

use crate::poly::{geometric_decay_start, RatFn};
use crate::setalg::{DefinableSet, Sign};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::collections::BTreeSet;

use super::cells::{directional, DirectionData};
use super::SymbolicSequence;
use crate::error::Result;

/// Eventual verdict for one direction, plus the walk cutoff from which the
/// verdict is certified.
struct DirectionVerdict {
    member: bool,
    from: i64,
}

/// The set { n : phi(n) >= t } for a real normalized sequence; t may be any
/// rational here (public API restricts to t > 0, the sign split uses t = 0).
pub(crate) fn set_where_ge(seq: &SymbolicSequence, t: &BigRational) -> Result<DefinableSet> {
    debug_assert!(seq.is_real());
    let cells = seq.cells();
    let modulus = cells.modulus;
    let mut cutoff: i64 = seq.max_threshold().max(1);
    let mut pos = BTreeSet::new();
    let mut neg = BTreeSet::new();
    // The verdict depends only on the direction's cell data, which many
    // residues share; compute each distinct case once.
    type Key = (Sign, BigRational, RatFn, Vec<(BigRational, RatFn)>);
    let mut memo: std::collections::HashMap<Key, (bool, i64)> = std::collections::HashMap::new();
    for (&(sign, r), data) in &cells.data {
        let key: Key = (
            sign,
            data.constant.re().clone(),
            data.proper_re.clone(),
            data.rapid
                .iter()
                .map(|g| (g.rate.clone(), g.re.clone()))
                .collect(),
        );
        let (member, from) = match memo.get(&key) {
            Some(&v) => v,
            None => {
                let v = direction_verdict(data, sign, t);
                memo.insert(key, (v.member, v.from));
                (v.member, v.from)
            }
        };
        cutoff = cutoff.max(from);
        if member {
            match sign {
                Sign::Pos => pos.insert(r),
                Sign::Neg => neg.insert(r),
            };
        }
    }
    let w = cutoff;
    let window = ((-w)..w)
        .map(|n| seq.eval(n).re() >= t)
        .collect();
    Ok(DefinableSet::from_parts(modulus, pos, neg, w, window).expect("engine parts are valid"))
}

fn direction_verdict(data: &DirectionData, sign: Sign, t: &BigRational) -> DirectionVerdict {
    let diff = data.constant.re() - t;
    let proper = directional(&data.proper_re, sign);
    let rapids: Vec<(BigRational, RatFn)> = data
        .rapid
        .iter()
        .filter(|g| !g.re.is_zero())
        .map(|g| (g.rate.clone(), directional(&g.re, sign)))
        .collect();

    if !diff.is_zero() {
        // The tail part decays to 0; find a certified start where its
        // magnitude stays below |constant - t|.
        let gap = diff.abs();
        let mut b = tail_decay_start(&proper, &rapids);
        loop {
            if tail_bound_at(&proper, &rapids, b) < gap {
                return DirectionVerdict {
                    member: diff.is_positive(),
                    from: b,
                };
            }
            b *= 2;
        }
    }

    // Exactly at the threshold: membership is the eventual sign of the tail.
    if !proper.is_zero() {
        // The proper part dominates every geometric part eventually; the
        // certificate is that each ratio |rapid_j / proper| * r^m decays and
        // their sum drops below 1.
        let mut b = proper.sign_stable_from().max(proper.monotone_from());
        let mut starts = vec![];
        for (rate, g) in &rapids {
            let ratio = g.div(&proper);
            starts.push(geometric_decay_start(&ratio, rate));
        }
        b = b.max(starts.iter().copied().max().unwrap_or(1));
        loop {
            let total: BigRational = rapids
                .iter()
                .map(|(rate, g)| {
                    g.div(&proper).eval(b).abs() * crate::poly::rate_pow_abs(rate, b)
                })
                .sum();
            if total < BigRational::from_integer(1.into()) {
                return DirectionVerdict {
                    member: proper.eval(b).is_positive(),
                    from: b,
                };
            }
            b *= 2;
        }
    }

    if rapids.is_empty() {
        // Tail part is identically zero on this direction: 0 >= 0.
        return DirectionVerdict {
            member: true,
            from: 1,
        };
    }

    // Geometric parts only: the largest rate dominates.
    let (top_rate, top) = rapids
        .iter()
        .max_by(|a, b| a.0.cmp(&b.0))
        .cloned()
        .unwrap();
    let lower: Vec<(BigRational, RatFn)> = rapids
        .iter()
        .filter(|(r, _)| r != &top_rate)
        .cloned()
        .collect();
    let mut b = top.sign_stable_from();
    for (rate, g) in &lower {
        let ratio = g.div(&top);
        b = b.max(geometric_decay_start(&ratio, &(rate / &top_rate)));
    }
    loop {
        let total: BigRational = lower
            .iter()
            .map(|(rate, g)| {
                g.div(&top).eval(b).abs() * crate::poly::rate_pow_abs(&(rate / &top_rate), b)
            })
            .sum();
        if total < BigRational::from_integer(1.into()) {
            return DirectionVerdict {
                member: top.eval(b).is_positive(),
                from: b,
            };
        }
        b *= 2;
    }
}

/// A start beyond which `tail_bound_at` is nonincreasing.
fn tail_decay_start(proper: &RatFn, rapids: &[(BigRational, RatFn)]) -> i64 {
    let mut b = 1;
    if !proper.is_zero() {
        b = b.max(proper.monotone_from());
    }
    for (rate, g) in rapids {
        b = b.max(geometric_decay_start(g, rate));
    }
    b
}

/// Upper bound for the tail magnitude at every walk value >= b: the proper
/// part is monotone toward 0 there and each geometric part is nonincreasing.
fn tail_bound_at(proper: &RatFn, rapids: &[(BigRational, RatFn)], b: i64) -> BigRational {
    let mut total = BigRational::zero();
    if !proper.is_zero() {
        total += proper.eval(b).abs();
    }
    for (rate, g) in rapids {
        total += g.eval(b).abs() * crate::poly::rate_pow_abs(rate, b);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{rat, rat_int, GaussianRational};
    use crate::poly::IntPoly;
    use crate::seqalg::SymbolicSequence;

    fn inv_n2p1() -> SymbolicSequence {
        SymbolicSequence::rational_fn(IntPoly::one(), IntPoly::from_i64(&[1, 0, 1])).unwrap()
    }

    #[test]
    fn threshold_of_peak() {
        // { n : 1/(n^2+1) >= 1/2 } = {-1, 0, 1}; the boundary value 1/2 at
        // n = +-1 is included.
        let s = inv_n2p1().threshold_set(&rat(1, 2)).unwrap();
        assert_eq!(s, DefinableSet::finite(&[-1, 0, 1]));
    }

    #[test]
    fn threshold_of_constant() {
        let c = SymbolicSequence::constant_rational(rat(3, 4));
        assert_eq!(c.threshold_set(&rat(1, 2)).unwrap(), DefinableSet::integers());
        assert_eq!(
            c.threshold_set(&rat(7, 8)).unwrap(),
            DefinableSet::empty()
        );
    }

    #[test]
    fn threshold_of_indicator() {
        let evens = DefinableSet::residue_class(2, 0).unwrap();
        let f = SymbolicSequence::indicator(evens.clone());
        assert_eq!(f.threshold_set(&rat(1, 2)).unwrap(), evens);
    }

    #[test]
    fn threshold_rejects_bad_inputs() {
        assert!(inv_n2p1().threshold_set(&rat_int(0)).is_err());
        let complex = SymbolicSequence::constant(GaussianRational::i());
        assert!(complex.threshold_set(&rat(1, 2)).is_err());
    }

    #[test]
    fn boundary_with_positive_rapid_tail() {
        // phi = 1/2 on evens + (1/8) * (1/2)^|n| everywhere; at t = 1/2 the
        // even direction sits exactly on the boundary and the positive
        // geometric tail keeps every even n a member.
        let evens = DefinableSet::residue_class(2, 0).unwrap();
        let phi = SymbolicSequence::step(GaussianRational::real(rat(1, 2)), evens.clone()).add(
            &SymbolicSequence::geometric(rat(1, 2))
                .unwrap()
                .scale(&GaussianRational::real(rat(1, 8))),
        );
        let s = phi.threshold_set(&rat(1, 2)).unwrap();
        for n in -40..=40 {
            assert_eq!(s.contains(n), n % 2 == 0, "at n = {}", n);
        }
    }

    #[test]
    fn boundary_with_negative_proper_tail() {
        // phi = 1/2 - 1/(n^2+1): approaches 1/2 from below, so no n beyond
        // the window reaches 1/2.
        let phi = SymbolicSequence::constant_rational(rat(1, 2)).sub(&inv_n2p1());
        let s = phi.threshold_set(&rat(1, 2)).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn boundary_with_mixed_rates() {
        // phi = (1/2)^|n| - (1/3)^|n|: zero at n = 0, positive elsewhere.
        let phi = SymbolicSequence::geometric(rat(1, 2))
            .unwrap()
            .sub(&SymbolicSequence::geometric(rat(1, 3)).unwrap());
        let s = set_where_ge(&phi, &BigRational::zero()).unwrap();
        assert_eq!(s, DefinableSet::integers());
        let strict = set_where_ge(&phi.neg(), &BigRational::zero()).unwrap();
        // -phi >= 0 only at n = 0
        assert_eq!(strict, DefinableSet::finite(&[0]));
    }

    #[test]
    fn threshold_matches_pointwise_oracle_on_random_inputs() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(0x7423);
        for case in 0..60 {
            // real-valued random sequence: real steps plus real tails
            let steps = (0..rng.random_range(0..=3))
                .map(|_| {
                    (
                        GaussianRational::real(crate::sample::small_rational(&mut rng)),
                        crate::setalg::sample_set(&mut rng, 6, 3),
                    )
                })
                .collect::<Vec<_>>();
            let mut tails = vec![];
            for _ in 0..rng.random_range(0..=2) {
                let t = if rng.random_bool(0.5) {
                    crate::sample::sample_rapid_tail(&mut rng)
                } else {
                    crate::sample::sample_polynomial_tail(&mut rng)
                };
                if t.coeff().is_real() {
                    tails.push(t);
                }
            }
            let phi = SymbolicSequence::from_parts(steps, tails);
            let t = crate::sample::small_rational(&mut rng)
                .abs()
                + rat(1, rng.random_range(1..=9));
            let set = phi.threshold_set(&t).unwrap();
            for n in -300..=300 {
                let expected = phi.eval(n).re() >= &t;
                assert_eq!(
                    set.contains(n),
                    expected,
                    "case {}: disagreement at n = {} (phi = {}, t = {})",
                    case,
                    n,
                    phi,
                    t
                );
            }
        }
    }

    #[test]
    fn split_pos_neg_identities() {
        let evens = DefinableSet::residue_class(2, 0).unwrap();
        let odds = DefinableSet::residue_class(2, 1).unwrap();
        let phi = SymbolicSequence::indicator(evens.clone())
            .sub(&SymbolicSequence::indicator(odds.clone()));
        let (p, m) = phi.split_pos_neg().unwrap();
        assert_eq!(p, SymbolicSequence::indicator(evens));
        assert_eq!(m, SymbolicSequence::indicator(odds));

        let c = SymbolicSequence::constant_rational(rat_int(-2));
        let (p, m) = c.split_pos_neg().unwrap();
        assert!(p.is_zero());
        assert_eq!(m, SymbolicSequence::constant_rational(rat_int(2)));
    }

    #[test]
    fn split_odd_tail_by_sign() {
        // n/(n^3+2) * (1/2)^|n| changes sign with n (n^3+2 > 0 for n >= 0,
        // < 0 for n <= -2); check the three split identities pointwise.
        let t = crate::seqalg::TailTerm::new(
            DefinableSet::integers(),
            GaussianRational::one(),
            IntPoly::var(),
            IntPoly::from_i64(&[2, 0, 0, 1]),
            rat(1, 2),
        )
        .unwrap();
        let phi = SymbolicSequence::from_tail(t);
        let (p, m) = phi.split_pos_neg().unwrap();
        for n in -60..=60 {
            let v = phi.eval(n);
            let pv = p.eval(n);
            let mv = m.eval(n);
            assert_eq!(&pv - &mv, v, "difference at {}", n);
            assert!(!pv.re().is_negative(), "pos part negative at {}", n);
            assert!(!mv.re().is_negative(), "neg part negative at {}", n);
            assert!((&pv * &mv).is_zero(), "overlap at {}", n);
        }
    }
}

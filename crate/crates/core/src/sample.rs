//! Random generators for sequences and sets, used by the axiom and
//! structure harnesses and by the test suites.

use crate::num::{rat, rat_int, GaussianRational};
use crate::poly::IntPoly;
use crate::setalg::{sample_set, DefinableSet};
use crate::seqalg::{SymbolicSequence, TailTerm};
use num_rational::BigRational;
use rand::Rng;

/// A small rational with numerator in [-9, 9] and denominator in [1, 9].
pub fn small_rational(rng: &mut impl Rng) -> BigRational {
    rat(rng.random_range(-9..=9), rng.random_range(1..=9))
}

pub fn small_nonzero_rational(rng: &mut impl Rng) -> BigRational {
    loop {
        let r = small_rational(rng);
        if !num_traits::Zero::is_zero(&r) {
            return r;
        }
    }
}

pub fn small_gaussian(rng: &mut impl Rng) -> GaussianRational {
    if rng.random_bool(0.7) {
        GaussianRational::real(small_rational(rng))
    } else {
        GaussianRational::new(small_rational(rng), small_rational(rng))
    }
}

/// Denominator polynomials known to be nonvanishing on Z.
fn safe_denominator(rng: &mut impl Rng) -> IntPoly {
    match rng.random_range(0..5) {
        0 => IntPoly::from_i64(&[1, 0, 1]),       // n^2 + 1
        1 => IntPoly::from_i64(&[2, 0, 1]),       // n^2 + 2
        2 => IntPoly::from_i64(&[3, 1, 2]),       // 2n^2 + n + 3
        3 => IntPoly::from_i64(&[1, 0, 0, 0, 1]), // n^4 + 1
        _ => IntPoly::from_i64(&[5, 0, 0, 2]).mul(&IntPoly::from_i64(&[1, 0, 1])),
    }
}

fn small_numerator(rng: &mut impl Rng, max_degree: usize) -> IntPoly {
    let deg = rng.random_range(0..=max_degree);
    let coeffs: Vec<i64> = (0..=deg).map(|_| rng.random_range(-5..=5)).collect();
    IntPoly::from_i64(&coeffs)
}

/// A geometric rate strictly below 1.
pub fn rapid_rate(rng: &mut impl Rng) -> BigRational {
    match rng.random_range(0..4) {
        0 => rat(1, 2),
        1 => rat(1, 3),
        2 => rat(2, 3),
        _ => rat(1, 5),
    }
}

/// Tail with rate < 1: decays faster than any polynomial.
pub fn sample_rapid_tail(rng: &mut impl Rng) -> TailTerm {
    let support = infinite_support(rng);
    let denom = safe_denominator(rng);
    let numer = loop {
        let p = small_numerator(rng, 2);
        if !p.is_zero() {
            break p;
        }
    };
    TailTerm::new(
        support,
        small_gaussian(rng),
        numer,
        denom,
        rapid_rate(rng),
    )
    .expect("rapid tail parts are valid")
}

/// Tail with rate 1 and deg p <= deg q: polynomial decay or convergence.
pub fn sample_polynomial_tail(rng: &mut impl Rng) -> TailTerm {
    let support = infinite_support(rng);
    let denom = safe_denominator(rng);
    let max_deg = denom.degree().unwrap();
    let numer = loop {
        let p = small_numerator(rng, max_deg);
        if !p.is_zero() {
            break p;
        }
    };
    TailTerm::new(
        support,
        small_gaussian(rng),
        numer,
        denom,
        rat_int(1),
    )
    .expect("polynomial tail parts are valid")
}

fn infinite_support(rng: &mut impl Rng) -> DefinableSet {
    loop {
        let s = sample_set(rng, 6, 3);
        if s.is_infinite() {
            return s;
        }
    }
}

/// A step function: finitely many constants on definable supports.
pub fn sample_step_sequence(rng: &mut impl Rng, max_terms: usize) -> SymbolicSequence {
    let k = rng.random_range(1..=max_terms.max(1));
    let steps = (0..k)
        .map(|_| (small_gaussian(rng), sample_set(rng, 6, 3)))
        .collect();
    SymbolicSequence::from_parts(steps, vec![])
}

/// A real step function.
pub fn sample_real_step_sequence(rng: &mut impl Rng, max_terms: usize) -> SymbolicSequence {
    let k = rng.random_range(1..=max_terms.max(1));
    let steps = (0..k)
        .map(|_| {
            (
                GaussianRational::real(small_rational(rng)),
                sample_set(rng, 6, 3),
            )
        })
        .collect();
    SymbolicSequence::from_parts(steps, vec![])
}

/// Steps plus rapid tails: a representable smooth sequence.
pub fn sample_smooth_sequence(rng: &mut impl Rng) -> SymbolicSequence {
    let steps = (0..rng.random_range(0..=3))
        .map(|_| (small_gaussian(rng), sample_set(rng, 6, 3)))
        .collect();
    let tails = (0..rng.random_range(0..=2))
        .map(|_| sample_rapid_tail(rng))
        .collect();
    SymbolicSequence::from_parts(steps, tails)
}

/// Finite-support steps plus rapid tails: a representable Schwartz sequence.
pub fn sample_schwartz_sequence(rng: &mut impl Rng) -> SymbolicSequence {
    let steps = (0..rng.random_range(0..=2))
        .map(|_| {
            let points: Vec<i64> = (0..rng.random_range(1..=3))
                .map(|_| rng.random_range(-8..=8))
                .collect();
            (small_gaussian(rng), DefinableSet::finite(&points))
        })
        .collect();
    let tails = (0..rng.random_range(1..=2))
        .map(|_| sample_rapid_tail(rng))
        .collect();
    SymbolicSequence::from_parts(steps, tails)
}

/// Any representable bounded sequence: steps plus mixed tails.
pub fn sample_bounded_sequence(rng: &mut impl Rng) -> SymbolicSequence {
    let steps = (0..rng.random_range(0..=3))
        .map(|_| (small_gaussian(rng), sample_set(rng, 6, 3)))
        .collect();
    let mut tails = vec![];
    for _ in 0..rng.random_range(0..=2) {
        if rng.random_bool(0.5) {
            tails.push(sample_rapid_tail(rng));
        } else {
            tails.push(sample_polynomial_tail(rng));
        }
    }
    SymbolicSequence::from_parts(steps, tails)
}

/// A real sequence with range certified inside [0, 1]: a convex-style
/// combination of indicators and a nonnegative rapid tail.
pub fn sample_unit_range_sequence(rng: &mut impl Rng) -> SymbolicSequence {
    let parts = rng.random_range(1..=3);
    let mut weights: Vec<BigRational> = (0..parts)
        .map(|_| rat(rng.random_range(1..=9), rng.random_range(9..=24)))
        .collect();
    let mut total: BigRational = weights.iter().sum();
    let one = rat_int(1);
    if total > one {
        // renormalize to keep the sum at most 1
        for w in &mut weights {
            *w = &*w * &one / &total;
        }
        total = weights.iter().sum();
    }
    let mut seq = SymbolicSequence::zero();
    for w in &weights {
        let set = sample_set(rng, 6, 3);
        seq = seq.add(&SymbolicSequence::step(
            GaussianRational::real(w.clone()),
            set,
        ));
    }
    let headroom = one - total;
    if !num_traits::Zero::is_zero(&headroom) && rng.random_bool(0.5) {
        // 0 <= headroom * r^|n| <= headroom keeps the sum inside [0, 1]
        let tail = SymbolicSequence::geometric(rapid_rate(rng))
            .unwrap()
            .scale(&GaussianRational::real(headroom));
        seq = seq.add(&tail);
    }
    seq
}

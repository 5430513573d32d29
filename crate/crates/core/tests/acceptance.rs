//! Acceptance suite: one test per criterion, each printing a PASS line
//! with the scale it ran at. Every comparison here is exact rational
//! arithmetic unless the criterion itself is about numeric sampling.

use betaz::decomp::{dyadic_decompose, level_decompose, recompose_level};
use betaz::filters::{
    check_filter_axioms, check_point_axioms, limit_at, point_from_trace, trace_of, FilterBase,
    UltrafilterSpec,
};
use betaz::num::{rat, rat_int, GaussianRational};
use betaz::poly::IntPoly;
use betaz::sample::{
    sample_bounded_sequence, sample_real_step_sequence, sample_smooth_sequence,
    sample_unit_range_sequence, small_gaussian,
};
use betaz::setalg::{sample_set, DefinableSet, Sign};
use betaz::smooth::{
    chain_divergence, check_schwartz_ideal, classify, is_smooth, chain_certificate,
    unital_non_ideal_witness, DivergenceKind,
};
use betaz::windows::{empirical_profile, exp_i_schwartz, Trend};
use betaz::SymbolicSequence;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::time::Instant;

fn peak() -> SymbolicSequence {
    SymbolicSequence::rational_fn(IntPoly::one(), IntPoly::from_i64(&[1, 0, 1])).unwrap()
}

/// Dyadic expansion rate: for 100 random [0,1]-valued sequences and every
/// depth N in 1..=12, the windowed sup distance on [-200, 200] is at most
/// 2^-N, by exact rational comparison. The greedy construction is
/// prefix-consistent, so one depth-12 run covers all twelve depths.
#[test]
fn dyadic_rate() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xD1AD1C);
    let window: Vec<i64> = (-200..=200).collect();
    for case in 0..100 {
        let phi = sample_unit_range_sequence(&mut rng);
        let expansion = dyadic_decompose(&phi, 12).unwrap();
        // The exact per-depth bound |phi(n) - approx_q(n)| <= 2^-q, scaled
        // by den(phi(n)) * 2^q, becomes the integer invariant |N| <= den
        // under the update N <- 2N - [member] * den, with N starting at
        // the numerator of phi(n).
        let mut nums: Vec<BigInt> = vec![];
        let mut dens: Vec<BigInt> = vec![];
        for &n in &window {
            let v = phi.eval(n);
            assert!(v.im().is_zero());
            nums.push(v.re().numer().clone());
            dens.push(v.re().denom().clone());
        }
        for (q, level) in expansion.levels.iter().enumerate() {
            assert_eq!(level.weight, rat_pow_check(q as u32 + 1));
            for (i, &n) in window.iter().enumerate() {
                nums[i] = &nums[i] * 2;
                if level.support.contains(n) {
                    nums[i] -= &dens[i];
                }
                assert!(
                    nums[i].abs() <= dens[i],
                    "case {}: depth {} exceeds 2^-{} at n = {}",
                    case,
                    q + 1,
                    q + 1,
                    n
                );
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 10.0,
        "runtime target exceeded: {:?}",
        elapsed
    );
    println!(
        "ACCEPT dyadic-rate: PASS (100 sequences x 12 depths on [-200,200], exact; {:?})",
        elapsed
    );
}

fn rat_pow_check(q: u32) -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(2).pow(q))
}

/// Level form: disjoint projections, distinct constants, exact round trip,
/// and invariance under permutation of the input terms.
#[test]
fn level_form() {
    let mut rng = StdRng::seed_from_u64(0x1EBE1);
    for case in 0..100 {
        let phi = sample_real_step_sequence(&mut rng, 5);
        let e = level_decompose(&phi).unwrap();
        for i in 0..e.terms.len() {
            assert!(!e.terms[i].1.is_empty());
            assert!(!e.terms[i].0.is_zero());
            for j in (i + 1)..e.terms.len() {
                assert!(
                    e.terms[i].1.intersect(&e.terms[j].1).is_empty(),
                    "case {}: projections overlap",
                    case
                );
                assert_ne!(e.terms[i].0, e.terms[j].0, "case {}: equal constants", case);
            }
        }
        assert_eq!(recompose_level(&e), phi, "case {}: round trip", case);

        // permutation invariance, checked on serialized forms
        let mut shuffled = phi.steps().to_vec();
        shuffled.reverse();
        if shuffled.len() > 1 {
            shuffled.rotate_left(1);
        }
        let again = level_decompose(&SymbolicSequence::from_parts(shuffled, vec![])).unwrap();
        assert_eq!(
            serde_json::to_string(&recompose_level(&again)).unwrap(),
            serde_json::to_string(&recompose_level(&e)).unwrap(),
            "case {}: permutation changed the expansion",
            case
        );
    }
    println!("ACCEPT level-form: PASS (100 random step functions)");
}

/// Hierarchy: the peak 1/(n^2+1) lands in c0 minus schwartz minus smooth
/// with an exact degree-2 witness, and the unit-modulus exponential of a
/// rapid sequence profiles as smooth against limit 1 numerically.
#[test]
fn hierarchy_proper_inclusions() {
    let report = classify(&peak());
    assert!(report.vanishes_at_infinity);
    assert!(!report.schwartz);
    assert!(!report.smooth);
    let w = report.smooth_witness.expect("witness");
    assert_eq!(w.failing_degree, 2);
    match &w.kind {
        DivergenceKind::NonzeroLimit { value } => assert_eq!(value, &GaussianRational::one()),
        other => panic!("expected a nonzero limit, got {:?}", other),
    }
    // every sampled inequality value is exact and at least 1
    assert!(w.inequality_samples.len() >= 3);
    for s in &w.inequality_samples {
        let claimed = s.abs_sq.to_rational().unwrap();
        let recomputed = peak().eval(s.n).abs_sq()
            * BigRational::from_integer(BigInt::from(s.n).pow(2 * s.degree).abs());
        assert_eq!(claimed, recomputed);
        assert!(claimed >= rat_int(1));
    }
    // limit samples approach 1 exactly as displayed
    assert_eq!(w.limit_samples[2].1, GaussianRational::real(rat(1_000_000, 1_000_001)));

    // numeric face: e^{i psi} with rapid psi, window 1000, limit 1
    let psi = SymbolicSequence::geometric(rat(1, 2))
        .unwrap()
        .scale(&GaussianRational::real(rat(22, 7)));
    let window = exp_i_schwartz(&psi, 1000).unwrap();
    for d in 0..=5 {
        let profile = empirical_profile(
            &window,
            Sign::Pos,
            None,
            d,
            num_complex::Complex64::new(1.0, 0.0),
        )
        .unwrap();
        assert_eq!(
            profile.trend,
            Trend::DecreasingToZero,
            "degree {} profile should vanish",
            d
        );
    }
    println!("ACCEPT hierarchy: PASS (exact witness at d=2; exp(i*rapid) profile vanishes for d <= 5)");
}

/// Smoothness closure: 1000 random pairs of smooth sequences have smooth
/// product, sum, and conjugate, with zero failures.
#[test]
fn smoothness_closure() {
    let mut rng = StdRng::seed_from_u64(0x5400);
    let mut checked = 0;
    for _ in 0..1000 {
        let a = sample_smooth_sequence(&mut rng);
        let b = sample_smooth_sequence(&mut rng);
        assert!(is_smooth(&a.mul(&b)).smooth, "product of {} and {}", a, b);
        assert!(is_smooth(&a.add(&b)).smooth, "sum of {} and {}", a, b);
        assert!(is_smooth(&a.conj()).smooth, "conjugate of {}", a);
        checked += 1;
    }
    println!(
        "ACCEPT smoothness-closure: PASS ({} random pairs, zero failures)",
        checked
    );
}

/// Filter axioms and trace round trips: 1000 sampled sets per harness,
/// dichotomy for direction points with canonical auto-extension, and
/// trace/point round trips on 100 random families.
#[test]
fn filter_axioms_and_traces() {
    let mut rng = StdRng::seed_from_u64(0xF117);

    let base = FilterBase::from_sets(vec![
        DefinableSet::residue_class(2, 0).unwrap(),
        DefinableSet::residue_class(3, 0).unwrap(),
        DefinableSet::cofinite(&[0, 6]),
    ])
    .unwrap();
    for r in check_filter_axioms(&base, 1000, &mut rng).unwrap() {
        assert!(r.passed(), "{}: {:?}", r.axiom, r.counterexample);
    }

    let points = [
        UltrafilterSpec::principal(7),
        UltrafilterSpec::direction(Sign::Pos, 2, 0).unwrap(),
        UltrafilterSpec::direction(Sign::Neg, 6, 5).unwrap(),
        UltrafilterSpec::direction(Sign::Pos, 1, 0).unwrap(),
    ];
    for pt in &points {
        for r in check_point_axioms(pt, 1000, &mut rng).unwrap() {
            assert!(r.passed(), "{} at {}: {:?}", r.axiom, pt, r.counterexample);
        }
    }

    // trace round trips on 100 random families
    for i in 0..100 {
        let pt = if i % 3 == 0 {
            UltrafilterSpec::principal(rng.random_range(-30..=30))
        } else {
            let m = rng.random_range(1..=8);
            let sign = if rng.random_bool(0.5) { Sign::Pos } else { Sign::Neg };
            UltrafilterSpec::direction(sign, m, rng.random_range(0..m)).unwrap()
        };
        let sets: Vec<DefinableSet> = (0..rng.random_range(1..=5))
            .map(|_| sample_set(&mut rng, 6, 3))
            .collect();
        let decisions = trace_of(&pt, &sets).unwrap();
        let resolution = point_from_trace(&decisions).unwrap();
        assert!(
            resolution.admits(&pt),
            "family {}: resolution rejects the generating point {}",
            i,
            pt
        );
        // and every admissible completion reproduces the decisions
        let mut candidates = resolution.directions.clone();
        if let Some(w) = resolution.principal_domain.witness() {
            candidates.push(UltrafilterSpec::principal(w));
        }
        for cand in candidates {
            assert_eq!(trace_of(&cand, &sets).unwrap(), decisions);
        }
    }
    println!("ACCEPT filter-axioms: PASS (1000 samples per harness; 100 trace families)");
}

/// Limits: numeric net values converge to the exact limit within 1e-6 by
/// t = 10^4, and the limit functional is exactly linear and
/// multiplicative.
#[test]
fn limits_along_directions() {
    let mut rng = StdRng::seed_from_u64(0x11111);

    for case in 0..100 {
        let phi = sample_smooth_sequence(&mut rng);
        let m = phi.cell_modulus() * rng.random_range(1..=3);
        let r = rng.random_range(0..m);
        let sign = if rng.random_bool(0.5) { Sign::Pos } else { Sign::Neg };
        let pt = UltrafilterSpec::direction(sign, m, r).unwrap();
        let exact = limit_at(&phi, &pt).unwrap();
        let (lr, li) = exact.to_f64_pair();
        for t in [9_998i64, 9_999, 10_000] {
            let n = match sign {
                Sign::Pos => r + m * t,
                Sign::Neg => r - m * t,
            };
            let (vr, vi) = phi.eval_f64(n);
            let dist = ((vr - lr).powi(2) + (vi - li).powi(2)).sqrt();
            assert!(
                dist < 1e-6,
                "case {}: net value at t = {} off by {}",
                case,
                t,
                dist
            );
        }
    }

    for case in 0..100 {
        let a = sample_bounded_sequence(&mut rng);
        let b = sample_bounded_sequence(&mut rng);
        let m = betaz::num::lcm_i64(
            betaz::num::lcm_i64(a.cell_modulus(), b.cell_modulus()),
            betaz::num::lcm_i64(a.mul(&b).cell_modulus(), a.add(&b).cell_modulus()),
        );
        let r = rng.random_range(0..m);
        let sign = if rng.random_bool(0.5) { Sign::Pos } else { Sign::Neg };
        let pt = UltrafilterSpec::direction(sign, m, r).unwrap();
        let la = limit_at(&a, &pt).unwrap();
        let lb = limit_at(&b, &pt).unwrap();
        assert_eq!(
            limit_at(&a.mul(&b), &pt).unwrap(),
            &la * &lb,
            "case {}: multiplicativity",
            case
        );
        assert_eq!(
            limit_at(&a.add(&b), &pt).unwrap(),
            &la + &lb,
            "case {}: additivity",
            case
        );
        let c = small_gaussian(&mut rng);
        assert_eq!(
            limit_at(&a.scale(&c), &pt).unwrap(),
            &c * &la,
            "case {}: homogeneity",
            case
        );
    }
    println!("ACCEPT limits: PASS (100 numeric nets to t=10^4 within 1e-6; 100 exact algebra pairs)");
}

/// Chain mechanism: the five-term example yields a strictly decreasing
/// chain of nonempty sets, one exact witness per degree 2..=5, and the
/// certified step function is non-vanishing along the chain at every one
/// of those degrees (so no refining point can satisfy the limit).
#[test]
fn chain_certificate_mechanism() {
    let spec: Vec<(BigRational, DefinableSet)> = (1..=5)
        .map(|q| {
            let m = 1i64 << q;
            let r = 1i64 << (q - 1);
            (rat(1, q as i64), DefinableSet::residue_class(m, r).unwrap())
        })
        .collect();
    let cert = chain_certificate(&spec, &rat_int(0), 5).unwrap();
    assert!(cert.chain_nonempty);
    assert!(cert.chain_strictly_decreasing);
    assert_eq!(cert.degree_witnesses.len(), 4);
    for w in &cert.degree_witnesses {
        let lhs = w.lhs.to_rational().unwrap();
        let lower = w.lower_bound.to_rational().unwrap();
        assert!(lhs >= lower && lower >= rat_int(1), "degree {}", w.degree);
        // independent recomputation of the witness inequality
        let gap = (&spec[w.component].0 - rat_int(0)).abs();
        assert_eq!(
            lhs,
            BigRational::from_integer(BigInt::from(w.n).pow(w.degree)) * gap
        );
    }
    for d in 2..=5 {
        let div = chain_divergence(&cert, d);
        assert!(div.non_vanishing, "chain vanishes at degree {}", d);
        for (n, v) in &div.element_values {
            // re-verify each element value by exact evaluation
            let delta = cert.step_function.eval(*n).re().abs();
            assert_eq!(
                v.to_rational().unwrap(),
                BigRational::from_integer(BigInt::from(*n).pow(d)) * delta
            );
        }
    }
    println!("ACCEPT chain-certificate: PASS (5-term chain; exact witnesses for d in 2..=5)");
}

/// Ideal structure: the rapid class absorbs smooth multiplication over
/// 1000 samples, and the unital witness shows the step and smooth algebras
/// are not ideals in the bounded algebra.
#[test]
fn ideal_structure() {
    let mut rng = StdRng::seed_from_u64(0x51DEA1);
    let report = check_schwartz_ideal(1000, &mut rng).unwrap();
    assert!(
        report.passed(),
        "schwartz ideal failures: {:?}",
        report.counterexample
    );
    let w = unital_non_ideal_witness();
    assert!(w.unit_report.step_function && w.unit_report.smooth);
    assert!(!w.partner_report.step_function && !w.partner_report.smooth);
    assert!(w.product_equals_partner);
    assert!(w.steps_not_ideal);
    assert!(w.smooth_not_ideal);
    println!("ACCEPT ideal-structure: PASS (1000 samples; unital witness verified by classify)");
}

/// Sanity net for the windowed seminorm bound used by the numeric module:
/// empirical seminorms never exceed the certified upper bound.
#[test]
fn empirical_vs_certified_seminorms() {
    let mut rng = StdRng::seed_from_u64(0x5EE);
    let mut finite_cases = 0;
    for _ in 0..50 {
        let f = sample_bounded_sequence(&mut rng);
        for d in 0..=2u32 {
            match f.schwartz_seminorm(d) {
                betaz::SeminormValue::Infinite => continue,
                v => {
                    finite_cases += 1;
                    let hi = v.upper().unwrap().to_f64().unwrap();
                    let w = betaz::windows::window_eval(&f, 150).unwrap();
                    let e = betaz::windows::empirical_seminorm(&w, d);
                    assert!(e <= hi + 1e-9, "empirical {} above certified {}", e, hi);
                }
            }
        }
    }
    assert!(finite_cases > 0);
    println!(
        "ACCEPT seminorm-consistency: PASS ({} finite seminorms dominated their windows)",
        finite_cases
    );
}

//! The rapid-vanishing smoothness criterion, the function-space hierarchy
//! classifier, chain certificates for the finitely-many-infinite-
//! projections argument, and the ideal/non-ideal structure checks.
//!
//! On the representable class the smoothness decision is closed-form:
//! after normalization, the deviation from the limit on a direction is a
//! strictly proper rational function plus geometric terms, and the
//! criterion holds at the direction exactly when the rational part is
//! absent. A nonzero rational part decaying like n^-k yields a nonzero
//! limit of `n^k (phi(n) - phi(pt))` and unbounded growth for every
//! higher power, which the witness demonstrates with exact samples.

use crate::error::{Error, Result};
use crate::filters::{limit_at, UltrafilterSpec};
use crate::num::{GaussianRational, RatRepr};
use crate::poly::{IntPoly, LimitKind, RatFn};
use crate::sample::{sample_schwartz_sequence, sample_smooth_sequence};
use crate::seqalg::SymbolicSequence;
use crate::setalg::{DefinableSet, Sign};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;

/// How the smoothness limit fails at the witness degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DivergenceKind {
    /// `n^d (phi(n) - phi(pt))` tends to this nonzero value.
    NonzeroLimit { value: GaussianRational },
    /// The quantity is unbounded at this degree.
    Unbounded,
}

/// An exactly verified sample of `|n^d (phi(n) - phi(pt))|^2 >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InequalitySample {
    pub n: i64,
    pub degree: u32,
    /// `|n^d (phi(n) - phi(pt))|^2`, exact; at least 1.
    pub abs_sq: RatRepr,
}

/// Evidence that a sequence is not smooth at a direction point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonSmoothWitness {
    pub point: UltrafilterSpec,
    /// Smallest degree at which the limit fails.
    pub failing_degree: u32,
    pub kind: DivergenceKind,
    /// `n^k (phi(n) - phi(pt))` at growing |n|, approaching the limit.
    pub limit_samples: Vec<(i64, GaussianRational)>,
    /// Exact demonstrations of the displayed inequality one degree up.
    pub inequality_samples: Vec<InequalitySample>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmoothnessVerdict {
    pub smooth: bool,
    pub witness: Option<NonSmoothWitness>,
}

impl SmoothnessVerdict {
    fn smooth() -> Self {
        SmoothnessVerdict {
            smooth: true,
            witness: None,
        }
    }
}

/// Decides the smoothness limit at one point.
pub fn smooth_at(seq: &SymbolicSequence, pt: &UltrafilterSpec) -> Result<SmoothnessVerdict> {
    match pt {
        // Nets at an isolated integer are eventually constant.
        UltrafilterSpec::Principal(_) => Ok(SmoothnessVerdict::smooth()),
        UltrafilterSpec::Direction {
            sign,
            modulus,
            residue,
        } => {
            let required = seq.cell_modulus();
            if modulus % required != 0 {
                return Err(Error::RefinePoint {
                    have: *modulus,
                    required: crate::num::lcm_i64(*modulus, required),
                });
            }
            let cells = seq.cells();
            let data = &cells.data[&(*sign, residue.rem_euclid(cells.modulus))];
            direction_verdict(seq, pt, *sign, cells.modulus, *residue, &data.proper_re, &data.proper_im)
        }
    }
}

fn direction_verdict(
    seq: &SymbolicSequence,
    pt: &UltrafilterSpec,
    sign: Sign,
    modulus: i64,
    residue: i64,
    proper_re: &RatFn,
    proper_im: &RatFn,
) -> Result<SmoothnessVerdict> {
    if proper_re.is_zero() && proper_im.is_zero() {
        return Ok(SmoothnessVerdict::smooth());
    }
    let gap = |f: &RatFn| f.degree_gap().map(|g| g as u32);
    let k = [gap(proper_re), gap(proper_im)]
        .into_iter()
        .flatten()
        .min()
        .expect("some part is nonzero");
    let xk = IntPoly::var_pow(k as usize);
    let limit_of = |f: &RatFn| match f.mul_poly(&xk).limit_kind() {
        LimitKind::Zero => BigRational::zero(),
        LimitKind::Finite(v) => v,
        LimitKind::Infinite => unreachable!("k is the minimal gap"),
    };
    // lim n^k * proper(n) is the leading-coefficient ratio, the same value
    // along both directions since the degrees match after weighting.
    let lambda = GaussianRational::new(limit_of(proper_re), limit_of(proper_im));
    let value_at_point = limit_at(seq, pt)?;

    let mut limit_samples = vec![];
    for scale in [10i64, 100, 1000] {
        let m = crate::seqalg::class_members(sign, modulus, residue, scale)
            .next()
            .unwrap();
        let n = crate::seqalg::signed_member(sign, m);
        let delta = &seq.eval(n) - &value_at_point;
        let weight = BigRational::from_integer(BigInt::from(n).pow(k));
        limit_samples.push((n, delta.scale(&weight)));
    }

    let d_up = k + 1;
    let mut inequality_samples = vec![];
    let mut walk = crate::seqalg::class_members(sign, modulus, residue, 1);
    while inequality_samples.len() < 3 {
        let m = walk.next().unwrap();
        if m == 0 {
            continue;
        }
        let n = crate::seqalg::signed_member(sign, m);
        let delta = &seq.eval(n) - &value_at_point;
        let weight = BigRational::from_integer(BigInt::from(m).pow(2 * d_up));
        let abs_sq = delta.abs_sq() * weight;
        if abs_sq >= BigRational::one() {
            inequality_samples.push(InequalitySample {
                n,
                degree: d_up,
                abs_sq: RatRepr::of(&abs_sq),
            });
        }
    }

    Ok(SmoothnessVerdict {
        smooth: false,
        witness: Some(NonSmoothWitness {
            point: pt.clone(),
            failing_degree: k,
            kind: DivergenceKind::NonzeroLimit { value: lambda },
            limit_samples,
            inequality_samples,
        }),
    })
}

/// Quantifies the criterion over every representable point: principal
/// points are automatic, so the decision runs over the finitely many
/// directions of the cell decomposition.
pub fn is_smooth(seq: &SymbolicSequence) -> SmoothnessVerdict {
    let cells = seq.cells();
    for (&(sign, r), data) in &cells.data {
        if data.proper_re.is_zero() && data.proper_im.is_zero() {
            continue;
        }
        let pt = UltrafilterSpec::direction(sign, cells.modulus, r).expect("valid direction");
        return direction_verdict(
            seq,
            &pt,
            sign,
            cells.modulus,
            r,
            &data.proper_re,
            &data.proper_im,
        )
        .expect("point modulus matches by construction");
    }
    SmoothnessVerdict::smooth()
}

/// Membership flags across the function-space hierarchy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HierarchyReport {
    /// Finite support.
    #[serde(rename = "c_c")]
    pub finite_support: bool,
    /// Rapid decay: finite-support steps and rapid tails only.
    pub schwartz: bool,
    /// Vanishes at infinity.
    #[serde(rename = "c0")]
    pub vanishes_at_infinity: bool,
    /// Finite span of projections (pure step function).
    #[serde(rename = "linf_c")]
    pub step_function: bool,
    /// Step part plus a rapid tail.
    #[serde(rename = "linf_c_plus_schwartz")]
    pub step_plus_schwartz: bool,
    /// Satisfies the vanishing criterion at every point.
    #[serde(rename = "smooth")]
    pub smooth: bool,
    /// Bounded; true for every representable sequence.
    #[serde(rename = "linf")]
    pub bounded: bool,
    pub lattice_consistent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub smooth_witness: Option<NonSmoothWitness>,
}

/// Decides every membership from the normal form.
pub fn classify(seq: &SymbolicSequence) -> HierarchyReport {
    let steps_all_finite = seq.steps().iter().all(|(_, s)| s.is_finite());
    let tails_all_rapid = seq.tails().iter().all(|t| t.is_rapid());
    let verdict = is_smooth(seq);

    let finite_support = steps_all_finite && seq.tails().is_empty();
    let schwartz = steps_all_finite && tails_all_rapid;
    // Normalized tails all decay to zero along their supports, so
    // vanishing at infinity is the absence of infinite step cells.
    let vanishes_at_infinity = steps_all_finite;
    let step_function = seq.tails().is_empty();
    let step_plus_schwartz = tails_all_rapid;
    let smooth = verdict.smooth;
    let bounded = true;

    let implies = |a: bool, b: bool| !a || b;
    let lattice_consistent = implies(finite_support, schwartz)
        && implies(finite_support, step_function)
        && implies(schwartz, vanishes_at_infinity)
        && implies(schwartz, step_plus_schwartz)
        && implies(step_function, step_plus_schwartz)
        && implies(step_plus_schwartz, smooth)
        && implies(smooth, bounded);

    HierarchyReport {
        finite_support,
        schwartz,
        vanishes_at_infinity,
        step_function,
        step_plus_schwartz,
        smooth,
        bounded,
        lattice_consistent,
        smooth_witness: verdict.witness,
    }
}

/// Exact per-degree witness in a chain certificate.
#[derive(Debug, Clone, Serialize)]
pub struct DegreeWitness {
    pub degree: u32,
    pub n: i64,
    pub component: usize,
    /// `|n^d (c_q - c0)|`, exact.
    pub lhs: RatRepr,
    /// `n^(d-1)`, the displayed lower bound; at least 1.
    pub lower_bound: RatRepr,
}

/// Per-component justification: on `S_q` beyond the ray start,
/// `|phi - c0| = |c_q - c0| >= 1/n` holds pointwise.
#[derive(Debug, Clone, Serialize)]
pub struct ComponentBound {
    pub component: usize,
    pub ray_start: i64,
    pub gap: RatRepr,
}

/// The mechanism of the finitely-many-infinite-projections argument at a
/// finite depth: the decreasing chain, nonemptiness, and the displayed
/// inequality, all by exact arithmetic.
#[derive(Debug, Clone, Serialize)]
pub struct ChainCertificate {
    pub chain: Vec<DefinableSet>,
    pub chain_nonempty: bool,
    pub chain_strictly_decreasing: bool,
    pub component_bounds: Vec<ComponentBound>,
    pub degree_witnesses: Vec<DegreeWitness>,
    #[serde(skip)]
    pub step_function: SymbolicSequence,
    pub limit_constant: RatRepr,
}

/// Builds and verifies the chain certificate from a projection spec with
/// constants accumulating at `c0`.
pub fn chain_certificate(
    spec: &[(BigRational, DefinableSet)],
    c0: &BigRational,
    d_max: u32,
) -> Result<ChainCertificate> {
    if spec.is_empty() {
        return Err(Error::CertificateSpec("spec must be nonempty".into()));
    }
    if d_max < 2 {
        return Err(Error::CertificateSpec("d_max must be at least 2".into()));
    }
    for (i, (c, s)) in spec.iter().enumerate() {
        if s.is_finite() {
            return Err(Error::CertificateSpec(format!(
                "projection {} has finite support; every support must be infinite",
                i
            )));
        }
        if c == c0 {
            return Err(Error::CertificateSpec(format!(
                "constant {} equals the accumulation value",
                i
            )));
        }
        for (j, (c2, s2)) in spec.iter().enumerate().skip(i + 1) {
            if c == c2 {
                return Err(Error::CertificateSpec(format!(
                    "constants {} and {} are equal; distinct constants required",
                    i, j
                )));
            }
            if !s.intersect(s2).is_empty() {
                return Err(Error::CertificateSpec(format!(
                    "supports {} and {} overlap; pairwise disjoint supports required",
                    i, j
                )));
            }
        }
    }
    for w in spec.windows(2) {
        let (g1, g2) = ((&w[0].0 - c0).abs(), (&w[1].0 - c0).abs());
        if g2 >= g1 {
            return Err(Error::CertificateSpec(
                "|c_q - c0| must decrease strictly along the spec".into(),
            ));
        }
    }

    // Ray starts: smallest integer a_q with a_q >= 1/|c_q - c0|.
    let mut ray_starts = vec![];
    let mut component_bounds = vec![];
    for (q, (c, _)) in spec.iter().enumerate() {
        let gap = (c - c0).abs();
        let a = (BigRational::one() / &gap).ceil().to_integer();
        let a = i64::try_from(a).map_err(|_| {
            Error::CertificateSpec(format!("ray start for component {} exceeds i64", q))
        })?;
        let a = a.max(1);
        // the pointwise justification: a * gap >= 1
        debug_assert!(BigRational::from_integer(a.into()) * &gap >= BigRational::one());
        ray_starts.push(a);
        component_bounds.push(ComponentBound {
            component: q,
            ray_start: a,
            gap: RatRepr::of(&gap),
        });
    }

    let pieces: Vec<DefinableSet> = spec
        .iter()
        .zip(&ray_starts)
        .map(|((_, s), &a)| s.intersect(&DefinableSet::ray_ge(a)))
        .collect();
    let mut chain = vec![];
    for n in 0..spec.len() {
        let mut u = DefinableSet::empty();
        for piece in &pieces[n..] {
            u = u.union(piece);
        }
        chain.push(u);
    }
    let chain_nonempty = chain.iter().all(|u| !u.is_empty());
    let chain_strictly_decreasing = chain
        .windows(2)
        .all(|w| w[1].is_subset(&w[0]) && w[1] != w[0]);

    let step_function = SymbolicSequence::from_parts(
        spec.iter()
            .map(|(c, s)| (GaussianRational::real(c.clone()), s.clone()))
            .collect(),
        vec![],
    );

    let mut degree_witnesses = vec![];
    for d in 2..=d_max {
        // a witness from the first component: its smallest ray member
        let n = pieces[0]
            .members_from(ray_starts[0])
            .next()
            .ok_or_else(|| Error::CertificateSpec("component became empty".into()))?;
        let gap = (&spec[0].0 - c0).abs();
        let lhs = BigRational::from_integer(BigInt::from(n).pow(d)) * &gap;
        let lower = BigRational::from_integer(BigInt::from(n).pow(d - 1));
        if lhs < lower || lower < BigRational::one() {
            return Err(Error::CertificateSpec(
                "displayed inequality failed; ray bound too small".into(),
            ));
        }
        degree_witnesses.push(DegreeWitness {
            degree: d,
            n,
            component: 0,
            lhs: RatRepr::of(&lhs),
            lower_bound: RatRepr::of(&lower),
        });
    }

    Ok(ChainCertificate {
        chain,
        chain_nonempty,
        chain_strictly_decreasing,
        component_bounds,
        degree_witnesses,
        step_function,
        limit_constant: RatRepr::of(c0),
    })
}

/// Divergence of the criterion quantity along the certified chain: on
/// every chain element the quantity stays at least 1, verified by exact
/// evaluation of the step function at each element's smallest member, so
/// no point refining the chain can satisfy the limit.
#[derive(Debug, Clone, Serialize)]
pub struct ChainDivergence {
    pub degree: u32,
    /// Per chain element: (smallest member, exact |n^d (phi(n)-c0)|).
    pub element_values: Vec<(i64, RatRepr)>,
    /// Every element value is >= 1: the limit cannot be 0 along the chain.
    pub non_vanishing: bool,
}

pub fn chain_divergence(cert: &ChainCertificate, degree: u32) -> ChainDivergence {
    let c0 = cert.limit_constant.to_rational().expect("stored rational");
    let mut element_values = vec![];
    let mut non_vanishing = true;
    for u in &cert.chain {
        let n = u.members_from(1).next().expect("verified nonempty");
        let delta = cert.step_function.eval(n).re() - &c0;
        let v = BigRational::from_integer(BigInt::from(n).pow(degree)) * delta.abs();
        non_vanishing &= v >= BigRational::one();
        element_values.push((n, RatRepr::of(&v)));
    }
    ChainDivergence {
        degree,
        element_values,
        non_vanishing,
    }
}

/// Report from a structure harness.
#[derive(Debug, Clone, Serialize)]
pub struct StructureReport {
    pub check: String,
    pub samples: u32,
    pub failures: u32,
    pub counterexample: Option<String>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Random Schwartz partners times random smooth sequences stay Schwartz.
pub fn check_schwartz_ideal(samples: u32, rng: &mut impl Rng) -> Result<StructureReport> {
    if samples == 0 {
        return Err(Error::NoSamples);
    }
    let mut failures = 0;
    let mut counterexample = None;
    for _ in 0..samples {
        let psi = sample_schwartz_sequence(rng);
        let phi = sample_smooth_sequence(rng);
        let product = phi.mul(&psi);
        let report = classify(&product);
        if !report.schwartz {
            failures += 1;
            if counterexample.is_none() {
                counterexample = Some(format!("psi = {}, phi = {}", psi, phi));
            }
        }
    }
    Ok(StructureReport {
        check: "schwartz ideal: smooth * schwartz stays schwartz".into(),
        samples,
        failures,
        counterexample,
    })
}

/// The unital witness that the step algebra and the smooth algebra are not
/// ideals in the bounded algebra: multiplying the constant 1 by a bounded
/// partner leaves the partner unchanged, so membership cannot improve.
#[derive(Debug, Clone, Serialize)]
pub struct NonIdealWitness {
    pub unit_report: HierarchyReport,
    pub partner_report: HierarchyReport,
    pub product_report: HierarchyReport,
    pub product_equals_partner: bool,
    /// 1 is a step function but the product is not: the step algebra
    /// absorbs nothing.
    pub steps_not_ideal: bool,
    /// 1 is smooth but the product is not: the smooth algebra is not an
    /// ideal in the bounded algebra either.
    pub smooth_not_ideal: bool,
}

pub fn unital_non_ideal_witness() -> NonIdealWitness {
    let one = SymbolicSequence::constant(GaussianRational::one());
    let partner = SymbolicSequence::rational_fn(IntPoly::one(), IntPoly::from_i64(&[1, 0, 1]))
        .expect("1/(n^2+1) is a valid tail");
    let product = one.mul(&partner);
    let unit_report = classify(&one);
    let partner_report = classify(&partner);
    let product_report = classify(&product);
    let product_equals_partner = product == partner;
    let steps_not_ideal =
        unit_report.step_function && !product_report.step_function && product_equals_partner;
    let smooth_not_ideal = unit_report.smooth && !product_report.smooth && product_equals_partner;
    NonIdealWitness {
        unit_report,
        partner_report,
        product_report,
        product_equals_partner,
        steps_not_ideal,
        smooth_not_ideal,
    }
}

//! Filters and ultrafilter traces on the definable algebra, and limits of
//! symbolic sequences along boundary points.
//!
//! Points come in two computable flavors: `Principal(n)` for the integers
//! themselves, and `Direction(sign, M, r)` for the residue-class direction
//! points that remain after compactifying the eventually-periodic algebra.
//! A direction answers membership for every set whose modulus divides M;
//! finer questions demand an explicit extension, which is a genuine choice
//! and is never made silently by the library.

use crate::error::{Error, Result};
use crate::num::{lcm_i64, GaussianRational};
use crate::setalg::{sample_set, DefinableSet, Sign};
use crate::seqalg::SymbolicSequence;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fmt;

/// A finite filter base of definable sets; the generated filter is the
/// family of supersets of the base's total intersection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterBase {
    base: Vec<DefinableSet>,
    core: DefinableSet,
}

impl FilterBase {
    pub fn from_sets(base: Vec<DefinableSet>) -> Result<Self> {
        if base.is_empty() {
            return Err(Error::NoBaseSets);
        }
        let mut core = DefinableSet::integers();
        for s in &base {
            core = core.intersect(s);
            if core.is_empty() {
                return Err(Error::EmptyFilterBase);
            }
        }
        Ok(FilterBase { base, core })
    }

    pub fn base(&self) -> &[DefinableSet] {
        &self.base
    }

    /// The total intersection of the base.
    pub fn core(&self) -> &DefinableSet {
        &self.core
    }

    /// Membership in the generated filter.
    pub fn contains(&self, set: &DefinableSet) -> bool {
        self.core.is_subset(set)
    }
}

/// A computable trace of a boundary point: either an integer or a
/// direction given by a sign and a residue class.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum UltrafilterSpec {
    Principal(i64),
    Direction { sign: Sign, modulus: i64, residue: i64 },
}

impl UltrafilterSpec {
    pub fn principal(n: i64) -> Self {
        UltrafilterSpec::Principal(n)
    }

    pub fn direction(sign: Sign, modulus: i64, residue: i64) -> Result<Self> {
        if modulus < 1 {
            return Err(Error::InvalidModulus(modulus));
        }
        if !(0..modulus).contains(&residue) {
            return Err(Error::InvalidResidue { residue, modulus });
        }
        Ok(UltrafilterSpec::Direction {
            sign,
            modulus,
            residue,
        })
    }

    pub fn is_principal(&self) -> bool {
        matches!(self, UltrafilterSpec::Principal(_))
    }

    /// Whether the set belongs to the point's ultrafilter trace. Direction
    /// points require the set's modulus to divide theirs.
    pub fn contains(&self, set: &DefinableSet) -> Result<bool> {
        match self {
            UltrafilterSpec::Principal(n) => Ok(set.contains(*n)),
            UltrafilterSpec::Direction {
                sign,
                modulus,
                residue,
            } => set.direction_contains(*sign, *modulus, *residue),
        }
    }

    /// Explicit refinement of a direction to a finer modulus and a chosen
    /// compatible residue.
    pub fn extend(&self, new_modulus: i64, new_residue: i64) -> Result<Self> {
        match self {
            UltrafilterSpec::Principal(_) => Err(Error::IncompatibleExtension(
                "principal points cannot be extended".into(),
            )),
            UltrafilterSpec::Direction {
                sign,
                modulus,
                residue,
            } => {
                if new_modulus % modulus != 0 {
                    return Err(Error::IncompatibleExtension(format!(
                        "{} does not divide {}",
                        modulus, new_modulus
                    )));
                }
                if new_residue.rem_euclid(*modulus) != *residue {
                    return Err(Error::IncompatibleExtension(format!(
                        "residue {} is not congruent to {} mod {}",
                        new_residue, residue, modulus
                    )));
                }
                UltrafilterSpec::direction(*sign, new_modulus, new_residue)
            }
        }
    }

    /// The canonical refinement keeping the residue value itself. This is
    /// one choice among `new_modulus / modulus` admissible ones.
    pub fn extend_canonical(&self, new_modulus: i64) -> Result<Self> {
        match self {
            UltrafilterSpec::Principal(_) => Ok(self.clone()),
            UltrafilterSpec::Direction { residue, .. } => self.extend(new_modulus, *residue),
        }
    }

    pub fn modulus(&self) -> i64 {
        match self {
            UltrafilterSpec::Principal(_) => 1,
            UltrafilterSpec::Direction { modulus, .. } => *modulus,
        }
    }

    /// A definable set that the point is guaranteed to lie in: the
    /// singleton for principal points, the residue class for directions.
    pub fn home_set(&self) -> DefinableSet {
        match self {
            UltrafilterSpec::Principal(n) => DefinableSet::finite(&[*n]),
            UltrafilterSpec::Direction {
                modulus, residue, ..
            } => DefinableSet::residue_class(*modulus, *residue).expect("valid direction"),
        }
    }
}

impl fmt::Display for UltrafilterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UltrafilterSpec::Principal(n) => write!(f, "n={}", n),
            UltrafilterSpec::Direction {
                sign,
                modulus,
                residue,
            } => write!(f, "{} mod {} == {}", sign, modulus, residue),
        }
    }
}

/// Wire form of a point.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PointRepr {
    Principal { n: i64 },
    Direction { sign: Sign, modulus: i64, residue: i64 },
}

impl PointRepr {
    pub fn of(p: &UltrafilterSpec) -> Self {
        match p {
            UltrafilterSpec::Principal(n) => PointRepr::Principal { n: *n },
            UltrafilterSpec::Direction {
                sign,
                modulus,
                residue,
            } => PointRepr::Direction {
                sign: *sign,
                modulus: *modulus,
                residue: *residue,
            },
        }
    }

    pub fn to_point(&self) -> Result<UltrafilterSpec> {
        match self {
            PointRepr::Principal { n } => Ok(UltrafilterSpec::Principal(*n)),
            PointRepr::Direction {
                sign,
                modulus,
                residue,
            } => UltrafilterSpec::direction(*sign, *modulus, *residue),
        }
    }
}

impl Serialize for UltrafilterSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PointRepr::of(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for UltrafilterSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        PointRepr::deserialize(d)?
            .to_point()
            .map_err(serde::de::Error::custom)
    }
}

/// Outcome of resolving a finite trace back into a point.
///
/// The decisions cut out a definable set of consistent integers and a
/// finite list of consistent directions. `resolved` carries the forced
/// completion when one exists: the pinned integer, or the unique
/// admissible direction. Possible principal completions always remain
/// listed through `principal_domain`, because choosing between them is the
/// caller's business.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceResolution {
    pub resolved: Option<UltrafilterSpec>,
    pub directions: Vec<UltrafilterSpec>,
    pub principal_domain: DefinableSet,
}

impl TraceResolution {
    /// Whether the point is among the admissible completions. A direction
    /// point is admitted when its canonical extension (residue value kept)
    /// reduces to an admissible direction at the resolution modulus.
    pub fn admits(&self, pt: &UltrafilterSpec) -> bool {
        match pt {
            UltrafilterSpec::Principal(n) => self.principal_domain.contains(*n),
            UltrafilterSpec::Direction {
                sign: s2, residue: r2, ..
            } => self.directions.iter().any(|cand| match cand {
                UltrafilterSpec::Direction {
                    sign: s1,
                    modulus: m1,
                    residue: r1,
                } => s1 == s2 && r2.rem_euclid(*m1) == *r1,
                UltrafilterSpec::Principal(_) => false,
            }),
        }
    }
}

/// Resolves a list of (set, in-or-out) decisions into the coarsest point
/// data consistent with all of them.
pub fn point_from_trace(decisions: &[(DefinableSet, bool)]) -> Result<TraceResolution> {
    let mut core = DefinableSet::integers();
    let mut modulus = 1i64;
    for (s, keep) in decisions {
        modulus = lcm_i64(modulus, s.modulus());
        let side = if *keep { s.clone() } else { s.complement() };
        core = core.intersect(&side);
        if core.is_empty() {
            return Err(Error::InconsistentTrace);
        }
    }
    let mut directions = vec![];
    for sign in [Sign::Pos, Sign::Neg] {
        for r in 0..modulus {
            if core.direction_contains(sign, modulus, r)? {
                directions.push(UltrafilterSpec::direction(sign, modulus, r)?);
            }
        }
    }
    let resolved = if core.is_finite() && core.cardinality_if_finite()? == 1 {
        Some(UltrafilterSpec::Principal(core.witness().unwrap()))
    } else if directions.len() == 1 {
        Some(directions[0].clone())
    } else {
        None
    };
    Ok(TraceResolution {
        resolved,
        directions,
        principal_domain: core,
    })
}

/// The trace of a point over a finite family of sets, with canonical
/// auto-extension for direction points.
pub fn trace_of(pt: &UltrafilterSpec, sets: &[DefinableSet]) -> Result<Vec<(DefinableSet, bool)>> {
    let mut out = vec![];
    for s in sets {
        let needed = lcm_i64(pt.modulus(), s.modulus());
        let p = pt.extend_canonical(needed)?;
        out.push((s.clone(), p.contains(s)?));
    }
    Ok(out)
}

/// Exact limit of a sequence at a boundary point.
///
/// Principal points evaluate; direction points sum the step constants
/// whose supports contain the direction plus each applicable tail's
/// directional limit. The point must be at least as fine as the sequence's
/// cell modulus.
pub fn limit_at(seq: &SymbolicSequence, pt: &UltrafilterSpec) -> Result<GaussianRational> {
    match pt {
        UltrafilterSpec::Principal(n) => Ok(seq.eval(*n)),
        UltrafilterSpec::Direction {
            sign,
            modulus,
            residue,
        } => {
            let required = seq.cell_modulus();
            if modulus % required != 0 {
                return Err(Error::RefinePoint {
                    have: *modulus,
                    required: lcm_i64(*modulus, required),
                });
            }
            let mut acc = GaussianRational::zero();
            for (c, s) in seq.steps() {
                if s.direction_contains(*sign, *modulus, *residue)? {
                    acc = &acc + c;
                }
            }
            for t in seq.tails() {
                if t.support().direction_contains(*sign, *modulus, *residue)? {
                    acc = &acc + &t.direction_limit();
                }
            }
            Ok(acc)
        }
    }
}

/// Report from one axiom harness run.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub axiom: String,
    pub samples: u32,
    pub failures: u32,
    pub counterexample: Option<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn new(axiom: &str, samples: u32) -> Self {
        AxiomReport {
            axiom: axiom.to_string(),
            samples,
            failures: 0,
            counterexample: None,
        }
    }

    fn fail(&mut self, witness: String) {
        self.failures += 1;
        if self.counterexample.is_none() {
            self.counterexample = Some(witness);
        }
    }
}

/// Checks closure under intersections and supersets for a filter base.
pub fn check_filter_axioms(
    filter: &FilterBase,
    samples: u32,
    rng: &mut impl Rng,
) -> Result<Vec<AxiomReport>> {
    if samples == 0 {
        return Err(Error::NoSamples);
    }
    let mut inter = AxiomReport::new("closure under finite intersections", samples);
    let mut sup = AxiomReport::new("closure under supersets", samples);
    for _ in 0..samples {
        let s = filter.core().union(&sample_set(rng, 8, 4));
        let t = filter.core().union(&sample_set(rng, 8, 4));
        debug_assert!(filter.contains(&s) && filter.contains(&t));
        if !filter.contains(&s.intersect(&t)) {
            inter.fail(format!("S = {}, T = {}", s, t));
        }
        let sup_set = s.union(&sample_set(rng, 8, 4));
        if !filter.contains(&sup_set) {
            sup.fail(format!("S = {}, T = {}", s, sup_set));
        }
    }
    Ok(vec![inter, sup])
}

/// Checks the filter axioms plus the dichotomy for an ultrafilter point,
/// auto-extending direction points canonically when a sampled set needs a
/// finer modulus.
pub fn check_point_axioms(
    pt: &UltrafilterSpec,
    samples: u32,
    rng: &mut impl Rng,
) -> Result<Vec<AxiomReport>> {
    if samples == 0 {
        return Err(Error::NoSamples);
    }
    let member = |s: &DefinableSet| -> bool {
        let needed = lcm_i64(pt.modulus(), s.modulus());
        pt.extend_canonical(needed)
            .and_then(|p| p.contains(s))
            .expect("canonical extension always applies")
    };
    let mut reports = check_membership_axioms(&member, pt, samples, rng);
    reports.push(check_dichotomy_with(&member, samples, rng));
    Ok(reports)
}

fn check_membership_axioms(
    member: &impl Fn(&DefinableSet) -> bool,
    pt: &UltrafilterSpec,
    samples: u32,
    rng: &mut impl Rng,
) -> Vec<AxiomReport> {
    let home = pt.home_set();
    let mut inter = AxiomReport::new("closure under finite intersections", samples);
    let mut sup = AxiomReport::new("closure under supersets", samples);
    for _ in 0..samples {
        let s = home.union(&sample_set(rng, 8, 4));
        let t = home.union(&sample_set(rng, 8, 4));
        if member(&s) && member(&t) && !member(&s.intersect(&t)) {
            inter.fail(format!("S = {}, T = {}", s, t));
        }
        let u = s.union(&sample_set(rng, 8, 4));
        if member(&s) && !member(&u) {
            sup.fail(format!("S = {}, T = {}", s, u));
        }
    }
    vec![inter, sup]
}

/// The dichotomy check on its own, over any membership oracle; a broken
/// oracle yields a concrete witness set.
pub fn check_dichotomy_with(
    member: &impl Fn(&DefinableSet) -> bool,
    samples: u32,
    rng: &mut impl Rng,
) -> AxiomReport {
    let mut dich = AxiomReport::new("dichotomy: exactly one of S, complement(S)", samples);
    for _ in 0..samples {
        let s = sample_set(rng, 8, 4);
        let a = member(&s);
        let b = member(&s.complement());
        if a == b {
            dich.fail(format!("S = {} (S: {}, S^c: {})", s, a, b));
        }
    }
    dich
}

//! The computable Boolean algebra of eventually-periodic subsets of Z.
//!
//! A `DefinableSet` fixes a modulus M, a threshold W, per-sign residue
//! rules, and an explicit membership window for n in [-W, W-1]:
//!
//! * n >= W      : member iff n mod M is in `residues_pos`
//! * n <  -W     : member iff n mod M is in `residues_neg`
//! * -W <= n < W : looked up in `window`
//!
//! Values are canonical after construction (minimal modulus, minimal
//! threshold), so structural equality decides set equality.

use crate::error::{Error, Result};
use crate::num::lcm_i64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// A direction toward +infinity or -infinity.
#[derive(Debug, Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+inf")]
    Pos,
    #[serde(rename = "-inf")]
    Neg,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Pos => write!(f, "+inf"),
            Sign::Neg => write!(f, "-inf"),
        }
    }
}

/// An eventually-periodic subset of Z in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DefinableSet {
    modulus: i64,
    residues_pos: BTreeSet<i64>,
    residues_neg: BTreeSet<i64>,
    threshold: i64,
    window: Vec<bool>,
}

fn rem_euclid(n: i64, m: i64) -> i64 {
    n.rem_euclid(m)
}

impl DefinableSet {
    /// Builds a set from raw parts and canonicalizes.
    pub fn from_parts(
        modulus: i64,
        residues_pos: BTreeSet<i64>,
        residues_neg: BTreeSet<i64>,
        threshold: i64,
        window: Vec<bool>,
    ) -> Result<Self> {
        if modulus < 1 {
            return Err(Error::InvalidModulus(modulus));
        }
        if threshold < 0 || window.len() != (2 * threshold) as usize {
            return Err(Error::WindowEntryOutOfRange(window.len() as i64, threshold));
        }
        for &r in residues_pos.iter().chain(residues_neg.iter()) {
            if !(0..modulus).contains(&r) {
                return Err(Error::InvalidResidue {
                    residue: r,
                    modulus,
                });
            }
        }
        Ok(DefinableSet {
            modulus,
            residues_pos,
            residues_neg,
            threshold,
            window,
        }
        .canonicalize())
    }

    /// The empty set.
    pub fn empty() -> Self {
        DefinableSet {
            modulus: 1,
            residues_pos: BTreeSet::new(),
            residues_neg: BTreeSet::new(),
            threshold: 0,
            window: vec![],
        }
    }

    /// All of Z.
    pub fn integers() -> Self {
        DefinableSet {
            modulus: 1,
            residues_pos: BTreeSet::from([0]),
            residues_neg: BTreeSet::from([0]),
            threshold: 0,
            window: vec![],
        }
    }

    /// Periodic set with the same residues in both directions.
    pub fn residue_class(modulus: i64, residue: i64) -> Result<Self> {
        let rs = BTreeSet::from([residue]);
        Self::periodic(modulus, rs.clone(), rs)
    }

    /// Periodic set with separate positive- and negative-direction rules.
    pub fn periodic(
        modulus: i64,
        residues_pos: BTreeSet<i64>,
        residues_neg: BTreeSet<i64>,
    ) -> Result<Self> {
        Self::from_parts(modulus, residues_pos, residues_neg, 0, vec![])
    }

    /// Finite set from an explicit list.
    pub fn finite(elements: &[i64]) -> Self {
        if elements.is_empty() {
            return Self::empty();
        }
        let w = elements
            .iter()
            .map(|&n| if n < 0 { -n } else { n + 1 })
            .max()
            .unwrap();
        let mut window = vec![false; (2 * w) as usize];
        for &n in elements {
            window[(n + w) as usize] = true;
        }
        DefinableSet {
            modulus: 1,
            residues_pos: BTreeSet::new(),
            residues_neg: BTreeSet::new(),
            threshold: w,
            window,
        }
        .canonicalize()
    }

    /// Complement of a finite set.
    pub fn cofinite(excluded: &[i64]) -> Self {
        Self::finite(excluded).complement()
    }

    /// The integer interval [a, b].
    pub fn interval(a: i64, b: i64) -> Result<Self> {
        if a > b {
            return Err(Error::EmptyInterval { a, b });
        }
        Ok(Self::finite(&(a..=b).collect::<Vec<_>>()))
    }

    /// The ray { n : n >= a }.
    pub fn ray_ge(a: i64) -> Self {
        let w = a.abs();
        let window = ((-w)..w).map(|n| n >= a).collect();
        DefinableSet {
            modulus: 1,
            residues_pos: BTreeSet::from([0]),
            residues_neg: BTreeSet::new(),
            threshold: w,
            window,
        }
        .canonicalize()
    }

    /// The ray { n : n <= a }.
    pub fn ray_le(a: i64) -> Self {
        Self::ray_ge(-a).reflect()
    }

    /// Mirror image { -n : n in self }.
    pub fn reflect(&self) -> Self {
        let m = self.modulus;
        let flip = |set: &BTreeSet<i64>| set.iter().map(|&r| rem_euclid(-r, m)).collect();
        // The asymmetric window convention shifts by one under reflection,
        // so widen the threshold before reading memberships off the mirror.
        let w = self.threshold + 1;
        DefinableSet {
            modulus: m,
            residues_pos: flip(&self.residues_neg),
            residues_neg: flip(&self.residues_pos),
            threshold: w,
            window: ((-w)..w).map(|n| self.contains(-n)).collect(),
        }
        .canonicalize()
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn threshold(&self) -> i64 {
        self.threshold
    }

    pub fn residues_pos(&self) -> &BTreeSet<i64> {
        &self.residues_pos
    }

    pub fn residues_neg(&self) -> &BTreeSet<i64> {
        &self.residues_neg
    }

    /// Exact membership test.
    pub fn contains(&self, n: i64) -> bool {
        if n >= self.threshold {
            self.residues_pos.contains(&rem_euclid(n, self.modulus))
        } else if n < -self.threshold {
            self.residues_neg.contains(&rem_euclid(n, self.modulus))
        } else {
            self.window[(n + self.threshold) as usize]
        }
    }

    fn canonicalize(mut self) -> Self {
        // Minimal modulus: smallest divisor d of M with both residue rules
        // d-periodic. The set of valid periods is closed under gcd, so the
        // smallest divisor that works is the canonical one.
        let m = self.modulus;
        for d in 1..=m {
            if m % d != 0 {
                continue;
            }
            let periodic = |set: &BTreeSet<i64>| (0..m).all(|r| set.contains(&r) == set.contains(&(r % d)));
            if periodic(&self.residues_pos) && periodic(&self.residues_neg) {
                if d < m {
                    self.residues_pos = self.residues_pos.iter().map(|&r| r % d).collect();
                    self.residues_neg = self.residues_neg.iter().map(|&r| r % d).collect();
                    self.modulus = d;
                }
                break;
            }
        }
        // Minimal threshold: drop window boundary entries that agree with
        // the periodic rules.
        let m = self.modulus;
        while self.threshold > 0 {
            let w = self.threshold;
            let left = self.window[0];
            let right = self.window[(2 * w - 1) as usize];
            let left_rule = self.residues_neg.contains(&rem_euclid(-w, m));
            let right_rule = self.residues_pos.contains(&rem_euclid(w - 1, m));
            if left == left_rule && right == right_rule {
                self.window.pop();
                self.window.remove(0);
                self.threshold -= 1;
            } else {
                break;
            }
        }
        self
    }

    /// Re-expresses the set at a coarser-grained view: modulus a multiple
    /// of the current one, threshold at least the current one.
    fn aligned(&self, modulus: i64, threshold: i64) -> DefinableSet {
        debug_assert!(modulus % self.modulus == 0 && threshold >= self.threshold);
        let lift = |set: &BTreeSet<i64>| {
            (0..modulus)
                .filter(|&r| set.contains(&(r % self.modulus)))
                .collect()
        };
        DefinableSet {
            modulus,
            residues_pos: lift(&self.residues_pos),
            residues_neg: lift(&self.residues_neg),
            threshold,
            window: ((-threshold)..threshold).map(|n| self.contains(n)).collect(),
        }
    }

    fn zip(&self, other: &DefinableSet, op: impl Fn(bool, bool) -> bool) -> DefinableSet {
        let m = lcm_i64(self.modulus, other.modulus);
        let w = self.threshold.max(other.threshold);
        let a = self.aligned(m, w);
        let b = other.aligned(m, w);
        let combine = |x: &BTreeSet<i64>, y: &BTreeSet<i64>| {
            (0..m).filter(|r| op(x.contains(r), y.contains(r))).collect()
        };
        DefinableSet {
            modulus: m,
            residues_pos: combine(&a.residues_pos, &b.residues_pos),
            residues_neg: combine(&a.residues_neg, &b.residues_neg),
            threshold: w,
            window: a
                .window
                .iter()
                .zip(b.window.iter())
                .map(|(&x, &y)| op(x, y))
                .collect(),
        }
        .canonicalize()
    }

    pub fn union(&self, other: &DefinableSet) -> DefinableSet {
        self.zip(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &DefinableSet) -> DefinableSet {
        self.zip(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &DefinableSet) -> DefinableSet {
        self.zip(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> DefinableSet {
        let all: BTreeSet<i64> = (0..self.modulus).collect();
        DefinableSet {
            modulus: self.modulus,
            residues_pos: all.difference(&self.residues_pos).cloned().collect(),
            residues_neg: all.difference(&self.residues_neg).cloned().collect(),
            threshold: self.threshold,
            window: self.window.iter().map(|&b| !b).collect(),
        }
        .canonicalize()
    }

    pub fn is_empty(&self) -> bool {
        self.residues_pos.is_empty()
            && self.residues_neg.is_empty()
            && self.window.iter().all(|&b| !b)
    }

    /// A set is finite exactly when both periodic rules are empty.
    pub fn is_finite(&self) -> bool {
        self.residues_pos.is_empty() && self.residues_neg.is_empty()
    }

    pub fn cardinality_if_finite(&self) -> Result<u64> {
        if !self.is_finite() {
            return Err(Error::InfiniteCardinality);
        }
        Ok(self.window.iter().filter(|&&b| b).count() as u64)
    }

    pub fn is_subset(&self, other: &DefinableSet) -> bool {
        self.difference(other).is_empty()
    }

    /// Members within [a, b], ascending.
    pub fn enumerate_window(&self, a: i64, b: i64) -> Result<Vec<i64>> {
        if a > b {
            return Err(Error::EmptyInterval { a, b });
        }
        Ok((a..=b).filter(|&n| self.contains(n)).collect())
    }

    /// Some member, if any; the witness with the smallest |n|.
    pub fn witness(&self) -> Option<i64> {
        let reach = self.threshold + self.modulus;
        (0..=reach).flat_map(|k| [k, -k]).find(|&n| self.contains(n))
    }

    /// Ascending members starting at `from`.
    pub fn members_from(&self, from: i64) -> impl Iterator<Item = i64> + '_ {
        (from..).filter(move |&n| self.contains(n))
    }

    /// Whether the direction `(sign, residue mod point_modulus)` eventually
    /// lies inside this set. Requires the set's modulus to divide the
    /// point's, so the answer is well-defined.
    pub fn direction_contains(&self, sign: Sign, point_modulus: i64, residue: i64) -> Result<bool> {
        if point_modulus % self.modulus != 0 {
            return Err(Error::RefinePoint {
                have: point_modulus,
                required: lcm_i64(point_modulus, self.modulus),
            });
        }
        let r = rem_euclid(residue, self.modulus);
        Ok(match sign {
            Sign::Pos => self.residues_pos.contains(&r),
            Sign::Neg => self.residues_neg.contains(&r),
        })
    }

    /// True if some direction lies in the set (equivalently, the set is
    /// infinite).
    pub fn is_infinite(&self) -> bool {
        !self.is_finite()
    }
}

impl fmt::Display for DefinableSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "{{}}");
        }
        if self == &DefinableSet::integers() {
            return write!(f, "Z");
        }
        if self.is_finite() {
            let members: Vec<String> = self
                .enumerate_window(-self.threshold, self.threshold)
                .unwrap()
                .iter()
                .map(|n| n.to_string())
                .collect();
            return write!(f, "{{{}}}", members.join(", "));
        }
        let fmt_set = |s: &BTreeSet<i64>| {
            let v: Vec<String> = s.iter().map(|r| r.to_string()).collect();
            v.join(",")
        };
        write!(
            f,
            "<mod {}: +inf {{{}}} -inf {{{}}}",
            self.modulus,
            fmt_set(&self.residues_pos),
            fmt_set(&self.residues_neg)
        )?;
        if self.threshold > 0 {
            let inside = self
                .enumerate_window(-self.threshold, self.threshold - 1)
                .unwrap();
            let listed: Vec<String> = inside.iter().map(|n| n.to_string()).collect();
            write!(
                f,
                "; window [{}, {}) members {{{}}}",
                -self.threshold,
                self.threshold,
                listed.join(",")
            )?;
        }
        write!(f, ">")
    }
}

/// Wire form: window serialized as the list of member integers.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DefinableSetRepr {
    pub modulus: i64,
    pub residues_pos: Vec<i64>,
    pub residues_neg: Vec<i64>,
    pub threshold: i64,
    pub window: Vec<i64>,
}

impl DefinableSetRepr {
    pub fn of(s: &DefinableSet) -> Self {
        DefinableSetRepr {
            modulus: s.modulus,
            residues_pos: s.residues_pos.iter().cloned().collect(),
            residues_neg: s.residues_neg.iter().cloned().collect(),
            threshold: s.threshold,
            window: s
                .enumerate_window(-s.threshold, s.threshold - 1)
                .unwrap_or_default(),
        }
    }

    pub fn to_set(&self) -> Result<DefinableSet> {
        let w = self.threshold;
        let mut window = vec![false; (2 * w).max(0) as usize];
        for &n in &self.window {
            if n < -w || n >= w {
                return Err(Error::WindowEntryOutOfRange(n, w));
            }
            window[(n + w) as usize] = true;
        }
        DefinableSet::from_parts(
            self.modulus,
            self.residues_pos.iter().cloned().collect(),
            self.residues_neg.iter().cloned().collect(),
            w,
            window,
        )
    }
}

impl Serialize for DefinableSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DefinableSetRepr::of(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for DefinableSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = DefinableSetRepr::deserialize(d)?;
        repr.to_set().map_err(serde::de::Error::custom)
    }
}

/// Random eventually-periodic set, for property harnesses.
pub fn sample_set(rng: &mut impl Rng, max_modulus: i64, max_threshold: i64) -> DefinableSet {
    let m = rng.random_range(1..=max_modulus);
    let w = rng.random_range(0..=max_threshold);
    let pick = |rng: &mut dyn rand::RngCore| -> BTreeSet<i64> {
        (0..m).filter(|_| rng.random_bool(0.5)).collect()
    };
    let residues_pos = pick(rng);
    let residues_neg = pick(rng);
    let window = (0..2 * w).map(|_| rng.random_bool(0.5)).collect();
    DefinableSet::from_parts(m, residues_pos, residues_neg, w, window)
        .expect("sampled parts are valid")
}

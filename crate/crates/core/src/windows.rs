//! Numeric windowed evaluation for sequences outside the exact
//! representation: empirical seminorms, directional profiles, and the
//! unit-modulus exponential of a real Schwartz sequence.
//!
//! Windows prove nothing about boundary points; every output here is
//! diagnostic. The exact modules stay authoritative.

use crate::error::{Error, Result};
use crate::seqalg::SymbolicSequence;
use crate::setalg::Sign;
use crate::smooth::classify;
use num_complex::Complex64;
use serde::Serialize;

/// Trend thresholds for profile classification. Crude but reproducible;
/// see `Profile::trend`.
pub const ZERO_TREND_EPS: f64 = 1e-6;
pub const TREND_JITTER: f64 = 0.10;

/// Where a window's values came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    SampledFromSymbolic,
    External,
    Builtin { name: String, params: String },
}

/// Complex values on the window [-N, N].
#[derive(Debug, Clone)]
pub struct WindowSequence {
    half_width: i64,
    values: Vec<Complex64>,
    pub provenance: Provenance,
}

impl WindowSequence {
    pub fn from_values(values: Vec<Complex64>, provenance: Provenance) -> Result<Self> {
        if values.len().is_multiple_of(2) || values.len() < 3 {
            return Err(Error::InvalidHalfWidth((values.len() as i64 - 1) / 2));
        }
        let half_width = (values.len() as i64 - 1) / 2;
        for v in &values {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::InvalidHalfWidth(half_width));
            }
        }
        Ok(WindowSequence {
            half_width,
            values,
            provenance,
        })
    }

    pub fn half_width(&self) -> i64 {
        self.half_width
    }

    pub fn value(&self, n: i64) -> Complex64 {
        self.values[(n + self.half_width) as usize]
    }

    pub fn indices(&self) -> impl Iterator<Item = i64> {
        -self.half_width..=self.half_width
    }

    /// CSV rows `n,value_re,value_im`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,value_re,value_im\n");
        for n in self.indices() {
            let v = self.value(n);
            out.push_str(&format!("{},{},{}\n", n, v.re, v.im));
        }
        out
    }
}

/// Exact-to-float evaluation of a symbolic sequence on [-N, N].
pub fn window_eval(seq: &SymbolicSequence, half_width: i64) -> Result<WindowSequence> {
    if half_width < 1 {
        return Err(Error::InvalidHalfWidth(half_width));
    }
    let values = (-half_width..=half_width)
        .map(|n| {
            let (re, im) = seq.eval_f64(n);
            Complex64::new(re, im)
        })
        .collect();
    WindowSequence::from_values(values, Provenance::SampledFromSymbolic)
}

/// `e^{i psi(n)}` for a real Schwartz sequence psi: unit-modulus values
/// that differ from 1 by at most |psi(n)|.
pub fn exp_i_schwartz(psi: &SymbolicSequence, half_width: i64) -> Result<WindowSequence> {
    if half_width < 1 {
        return Err(Error::InvalidHalfWidth(half_width));
    }
    if !psi.is_real() {
        return Err(Error::NotRealSchwartz("imaginary part present".into()));
    }
    if !classify(psi).schwartz {
        return Err(Error::NotRealSchwartz(
            "sequence is not rapidly decaying".into(),
        ));
    }
    let values = (-half_width..=half_width)
        .map(|n| {
            let (re, _) = psi.eval_f64(n);
            Complex64::new(re.cos(), re.sin())
        })
        .collect();
    WindowSequence::from_values(
        values,
        Provenance::Builtin {
            name: "exp_i_schwartz".into(),
            params: format!("psi = {}", psi),
        },
    )
}

/// The builtin peak 1/(n^2+1).
pub fn inv_n2_plus_1(half_width: i64) -> Result<WindowSequence> {
    if half_width < 1 {
        return Err(Error::InvalidHalfWidth(half_width));
    }
    let values = (-half_width..=half_width)
        .map(|n| Complex64::new(1.0 / (n as f64 * n as f64 + 1.0), 0.0))
        .collect();
    WindowSequence::from_values(
        values,
        Provenance::Builtin {
            name: "inv_n2_plus_1".into(),
            params: String::new(),
        },
    )
}

/// Monotone-trend summary of a profile.
#[derive(Debug, Copy, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    DecreasingToZero,
    Bounded,
    Growing,
}

/// The filtered sequence `|n^d (w(n) - limit)|` along one direction.
#[derive(Debug, Clone, Serialize)]
pub struct Profile {
    pub direction: Sign,
    pub residue_filter: Option<(i64, i64)>,
    pub degree: u32,
    pub points: Vec<(i64, f64)>,
    pub trend: Trend,
}

/// Computes the profile of `|n^d (w(n) - candidate_limit)|` along the
/// direction, optionally restricted to a residue class.
pub fn empirical_profile(
    w: &WindowSequence,
    direction: Sign,
    residue_filter: Option<(i64, i64)>,
    degree: u32,
    candidate_limit: Complex64,
) -> Result<Profile> {
    if let Some((m, r)) = residue_filter {
        if m < 1 {
            return Err(Error::InvalidModulus(m));
        }
        if !(0..m).contains(&r) {
            return Err(Error::InvalidResidue {
                residue: r,
                modulus: m,
            });
        }
    }
    let mut points = vec![];
    for m in 1..=w.half_width() {
        let n = match direction {
            Sign::Pos => m,
            Sign::Neg => -m,
        };
        if let Some((modulus, residue)) = residue_filter {
            if n.rem_euclid(modulus) != residue {
                continue;
            }
        }
        let v = (w.value(n) - candidate_limit).norm() * (m as f64).powi(degree as i32);
        points.push((n, v));
    }
    let trend = classify_trend(&points);
    Ok(Profile {
        direction,
        residue_filter,
        degree,
        points,
        trend,
    })
}

/// Trend rule: "decreasing to zero" wants the last quarter below the eps
/// threshold and nonincreasing up to the jitter allowance; "growing" wants
/// the last quarter's minimum above the first quarter's maximum and the
/// last quarter itself rising by more than the jitter factor, so profiles
/// converging to a finite value from below stay "bounded".
fn classify_trend(points: &[(i64, f64)]) -> Trend {
    if points.is_empty() {
        return Trend::Bounded;
    }
    let quarter = (points.len() / 4).max(1);
    let last = &points[points.len() - quarter..];
    let first = &points[..quarter];
    let last_small = last.iter().all(|(_, v)| *v < ZERO_TREND_EPS);
    let monotone_within_jitter = last
        .windows(2)
        .all(|p| p[1].1 <= p[0].1 * (1.0 + TREND_JITTER) + f64::MIN_POSITIVE);
    if last_small && monotone_within_jitter {
        return Trend::DecreasingToZero;
    }
    let last_min = last.iter().map(|(_, v)| *v).fold(f64::INFINITY, f64::min);
    let last_max = last.iter().map(|(_, v)| *v).fold(0.0, f64::max);
    let first_max = first.iter().map(|(_, v)| *v).fold(0.0, f64::max);
    if last_min > first_max && last_max > last_min * (1.0 + TREND_JITTER) {
        Trend::Growing
    } else {
        Trend::Bounded
    }
}

/// `max over the window of |n^d w(n)|`.
pub fn empirical_seminorm(w: &WindowSequence, degree: u32) -> f64 {
    w.indices()
        .map(|n| w.value(n).norm() * (n.abs() as f64).powi(degree as i32))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{rat, GaussianRational};
    use crate::poly::IntPoly;
    use crate::seqalg::SeminormValue;
    use num_traits::ToPrimitive;

    fn peak() -> SymbolicSequence {
        SymbolicSequence::rational_fn(IntPoly::one(), IntPoly::from_i64(&[1, 0, 1])).unwrap()
    }

    #[test]
    fn window_of_peak() {
        let w = window_eval(&peak(), 3).unwrap();
        let expected = [0.1, 0.2, 0.5, 1.0, 0.5, 0.2, 0.1];
        for (n, e) in (-3..=3).zip(expected) {
            assert!((w.value(n).re - e).abs() < 1e-12);
        }
        assert_eq!(w.value(2).im, 0.0);
    }

    #[test]
    fn window_matches_exact_eval() {
        let f = peak()
            .add(&SymbolicSequence::geometric(rat(1, 2)).unwrap())
            .scale(&GaussianRational::new(rat(1, 3), rat(1, 7)));
        let w = window_eval(&f, 1000).unwrap();
        for n in w.indices() {
            let exact = f.eval(n);
            let er = exact.re().to_f64().unwrap();
            let ei = exact.im().to_f64().unwrap();
            let v = w.value(n);
            let scale = v.norm().max(1.0);
            assert!(
                ((v.re - er).powi(2) + (v.im - ei).powi(2)).sqrt() / scale < 1e-12,
                "mismatch at {}",
                n
            );
        }
    }

    #[test]
    fn exp_i_unit_modulus() {
        let psi = SymbolicSequence::geometric(rat(1, 2)).unwrap();
        let w = exp_i_schwartz(&psi, 100).unwrap();
        for n in w.indices() {
            assert!((w.value(n).norm() - 1.0).abs() < 1e-12);
        }
        // exp(i*0) = 1
        let zero = SymbolicSequence::zero();
        let w0 = exp_i_schwartz(&zero, 5).unwrap();
        for n in w0.indices() {
            assert!((w0.value(n) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn exp_i_rejects_bad_inputs() {
        let complex = SymbolicSequence::constant(GaussianRational::i());
        assert!(exp_i_schwartz(&complex, 5).is_err());
        let not_schwartz = peak();
        assert!(matches!(
            exp_i_schwartz(&not_schwartz, 5),
            Err(Error::NotRealSchwartz(_))
        ));
    }

    #[test]
    fn profile_trends() {
        // rapid decay: n^3 * (1/2)^|n| -> 0
        let g = SymbolicSequence::geometric(rat(1, 2)).unwrap();
        let w = window_eval(&g, 200).unwrap();
        let p = empirical_profile(&w, Sign::Pos, None, 3, Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(p.trend, Trend::DecreasingToZero);

        // n^2/(n^2+1) -> 1, so against limit 0 at degree 2 it approaches 1
        let w2 = window_eval(&peak(), 400).unwrap();
        let p2 = empirical_profile(&w2, Sign::Pos, None, 2, Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(p2.trend, Trend::Bounded);
        let last = p2.points.last().unwrap().1;
        assert!((last - 1.0).abs() < 1e-2);

        // n^3/(n^2+1) style growth: degree 3 against limit 0 grows
        let p3 = empirical_profile(&w2, Sign::Neg, None, 3, Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(p3.trend, Trend::Growing);
    }

    #[test]
    fn exp_i_profile_against_one() {
        // |e^{i psi} - 1| <= |psi| decays rapidly, so every degree <= 5
        // trends to zero against the limit 1.
        let psi = SymbolicSequence::geometric(rat(1, 2)).unwrap();
        let w = exp_i_schwartz(&psi, 1000).unwrap();
        for d in 0..=5 {
            let p = empirical_profile(&w, Sign::Pos, None, d, Complex64::new(1.0, 0.0)).unwrap();
            assert_eq!(p.trend, Trend::DecreasingToZero, "degree {}", d);
        }
    }

    #[test]
    fn empirical_seminorm_matches_exact() {
        let g = SymbolicSequence::geometric(rat(1, 2)).unwrap();
        let w = window_eval(&g, 50).unwrap();
        let e = empirical_seminorm(&w, 1);
        assert!((e - 0.5).abs() < 1e-12);

        // all-ones window at degree 0
        let ones = SymbolicSequence::constant(GaussianRational::one());
        let w1 = window_eval(&ones, 10).unwrap();
        assert_eq!(empirical_seminorm(&w1, 0), 1.0);
    }

    #[test]
    fn empirical_seminorm_below_certified_bound() {
        use rand::SeedableRng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(97);
        for _ in 0..50 {
            let f = crate::sample::sample_bounded_sequence(&mut rng);
            match f.schwartz_seminorm(1) {
                SeminormValue::Infinite => continue,
                v => {
                    let hi = v.upper().unwrap().to_f64().unwrap();
                    let w = window_eval(&f, 100).unwrap();
                    let e = empirical_seminorm(&w, 1);
                    assert!(e <= hi + 1e-9, "empirical {} above certified {}", e, hi);
                }
            }
        }
    }

    #[test]
    fn csv_export() {
        let w = window_eval(&peak(), 2).unwrap();
        let csv = w.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "n,value_re,value_im");
        assert_eq!(lines.len(), 6);
        assert!(lines[3].starts_with("0,1,"));
    }
}

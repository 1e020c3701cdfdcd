//! Generators for the point sequences on the torus [0,1) that the statistics
//! modules consume: fractional parts of √n, several arithmetic families,
//! seeded uniform random baselines, and directions of affine lattice points.

use std::fmt;
use std::str::FromStr;

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice_space::{
    for_each_lattice_point, AffineGroupElement, Mat2, Region, DEFAULT_ENUM_CAP,
};

/// Tolerance on |det m0 − 1| for lattice bases.
pub const BASIS_DET_TOL: f64 = 1e-12;

/// 2⁻⁵³, the spacing of the uniform grid produced by the seeded generator.
const U64_TO_UNIT: f64 = 1.0 / 9007199254740992.0;

/// An ordered finite list of points in [0,1) with provenance metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusSequence {
    points: Vec<f64>,
    meta: GeneratorDescriptor,
}

impl TorusSequence {
    /// Wrap raw points; every point must lie in [0,1).
    pub fn from_parts(points: Vec<f64>, meta: GeneratorDescriptor) -> Result<Self> {
        for (i, &p) in points.iter().enumerate() {
            if !(0.0..1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!(
                    "point {i} = {p} is outside [0,1)"
                )));
            }
        }
        Ok(Self { points, meta })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn n_count(&self) -> usize {
        self.points.len()
    }

    pub fn meta(&self) -> &GeneratorDescriptor {
        &self.meta
    }

    /// Points sorted ascending (the sequence itself is kept in generation
    /// order; gap statistics want the sorted copy).
    pub fn sorted_points(&self) -> Vec<f64> {
        let mut v = self.points.clone();
        v.sort_by(|a, b| a.partial_cmp(b).expect("points are finite"));
        v
    }
}

/// Arithmetic sequence families: the formula applied to n = 1..n_max.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArithmeticKind {
    /// nα mod 1.
    Linear,
    /// n²α mod 1.
    Quadratic,
    /// n^α log^β n mod 1 (natural log).
    Power,
    /// 2ⁿα mod 1.
    Doubling,
    /// αⁿ mod 1, α > 1.
    Geometric,
}

impl fmt::Display for ArithmeticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ArithmeticKind::Linear => "linear",
            ArithmeticKind::Quadratic => "quadratic",
            ArithmeticKind::Power => "power",
            ArithmeticKind::Doubling => "doubling",
            ArithmeticKind::Geometric => "geometric",
        };
        f.write_str(s)
    }
}

impl FromStr for ArithmeticKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(ArithmeticKind::Linear),
            "quadratic" => Ok(ArithmeticKind::Quadratic),
            "power" => Ok(ArithmeticKind::Power),
            "doubling" => Ok(ArithmeticKind::Doubling),
            "geometric" => Ok(ArithmeticKind::Geometric),
            other => Err(Error::Parse(format!(
                "unknown arithmetic kind {other:?}; expected linear, quadratic, power, doubling or geometric"
            ))),
        }
    }
}

/// Covolume-one basis M₀ plus shift ξ describing the affine lattice
/// (Z² + ξ)·M₀.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineLatticeSpec {
    pub m0: Mat2,
    pub xi: [f64; 2],
}

impl AffineLatticeSpec {
    pub fn new(m0: Mat2, xi: [f64; 2]) -> Result<Self> {
        let excess = (m0.det() - 1.0).abs();
        if excess > BASIS_DET_TOL {
            return Err(Error::NotUnimodular {
                excess,
                tol: BASIS_DET_TOL,
            });
        }
        Ok(Self { m0, xi })
    }

    pub fn identity_with_shift(xi: [f64; 2]) -> Self {
        Self {
            m0: Mat2::IDENTITY,
            xi,
        }
    }

    /// The group element g with Z²g equal to this affine lattice:
    /// g = (M₀, ξM₀).
    pub fn element(&self) -> AffineGroupElement {
        AffineGroupElement {
            m: self.m0,
            xi: self.m0.apply_row(self.xi),
        }
    }
}

/// Provenance of a [`TorusSequence`]; regenerating from an identical
/// descriptor yields bit-identical points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorDescriptor {
    Sqrt {
        t_max: u64,
    },
    Arithmetic {
        family: ArithmeticKind,
        alpha: f64,
        beta: f64,
        n_max: u64,
    },
    Iud {
        n_count: u64,
        seed: u64,
    },
    Directions {
        m0: Mat2,
        xi: [f64; 2],
        t_radius: f64,
    },
    /// Points loaded from a file or supplied by a caller; not regenerable.
    External {
        label: String,
    },
}

/// Rebuild the sequence a descriptor came from.
pub fn regenerate(meta: &GeneratorDescriptor) -> Result<TorusSequence> {
    match meta {
        GeneratorDescriptor::Sqrt { t_max } => gen_sqrt(*t_max),
        GeneratorDescriptor::Arithmetic {
            family,
            alpha,
            beta,
            n_max,
        } => gen_arithmetic(*family, *alpha, *beta, *n_max),
        GeneratorDescriptor::Iud { n_count, seed } => gen_iud(*n_count, *seed),
        GeneratorDescriptor::Directions { m0, xi, t_radius } => {
            gen_directions(&AffineLatticeSpec::new(*m0, *xi)?, *t_radius)
        }
        GeneratorDescriptor::External { label } => Err(Error::InvalidParameter(format!(
            "sequence {label:?} has no generator to replay"
        ))),
    }
}

/// Fractional part mapped into [0,1) (guards the x ↦ x mod 1 rounding edge
/// where a tiny negative input would otherwise land exactly on 1).
fn frac(x: f64) -> f64 {
    let p = x.rem_euclid(1.0);
    if p >= 1.0 {
        0.0
    } else {
        p
    }
}

/// √n mod 1 for the non-squares n ≤ t_max, in order of n.
///
/// Perfect squares are removed by exact integer square root; the emitted
/// length is t_max − ⌊√t_max⌋. For non-squares, ⌊√n⌋ is the integer root, so
/// the fractional part is the single correctly-rounded subtraction
/// sqrt(n) − isqrt(n).
pub fn gen_sqrt(t_max: u64) -> Result<TorusSequence> {
    if t_max == 0 {
        return Err(Error::InvalidParameter("t_max must be at least 1".into()));
    }
    let root = t_max.isqrt();
    let mut points = Vec::with_capacity((t_max - root) as usize);
    for n in 1..=t_max {
        let r = n.isqrt();
        if r * r == n {
            continue;
        }
        points.push((n as f64).sqrt() - r as f64);
    }
    TorusSequence::from_parts(points, GeneratorDescriptor::Sqrt { t_max })
}

/// The arithmetic families nα, n²α, n^α log^β n, 2ⁿα and αⁿ, all mod 1,
/// for n = 1..n_max.
pub fn gen_arithmetic(
    kind: ArithmeticKind,
    alpha: f64,
    beta: f64,
    n_max: u64,
) -> Result<TorusSequence> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    if !alpha.is_finite() || !beta.is_finite() {
        return Err(Error::InvalidParameter(
            "alpha and beta must be finite".into(),
        ));
    }
    if kind == ArithmeticKind::Geometric && alpha <= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "geometric sequences need alpha > 1, got {alpha}"
        )));
    }
    let mut points = Vec::with_capacity(n_max as usize);
    match kind {
        ArithmeticKind::Linear => {
            for n in 1..=n_max {
                points.push(frac(n as f64 * alpha));
            }
        }
        ArithmeticKind::Quadratic => {
            for n in 1..=n_max {
                let nf = n as f64;
                points.push(frac(nf * nf * alpha));
            }
        }
        ArithmeticKind::Power => {
            for n in 1..=n_max {
                if n == 1 && beta != 0.0 {
                    // log 1 = 0, so the value is 0 for any log exponent.
                    points.push(0.0);
                    continue;
                }
                let nf = n as f64;
                let logpart = if beta == 0.0 { 1.0 } else { nf.ln().powf(beta) };
                points.push(frac(nf.powf(alpha) * logpart));
            }
        }
        ArithmeticKind::Doubling => {
            // frac(2^{n+1} α) = frac(2·frac(2ⁿα)): doubling then reducing is
            // exact in binary floating point, so iterate on the reduced value.
            let mut x = frac(2.0 * alpha);
            for _ in 1..=n_max {
                points.push(x);
                x *= 2.0;
                if x >= 1.0 {
                    x -= 1.0; // exact: 2x ∈ [1,2) so the subtraction is lossless
                }
            }
        }
        ArithmeticKind::Geometric => {
            let mut p = 1.0f64;
            for _ in 1..=n_max {
                p *= alpha;
                points.push(frac(p));
            }
        }
    }
    TorusSequence::from_parts(
        points,
        GeneratorDescriptor::Arithmetic {
            family: kind,
            alpha,
            beta,
            n_max,
        },
    )
}

/// Seeded uniform points: ChaCha20 keyed by the little-endian seed in the
/// first 8 bytes of the 256-bit key (remaining bytes zero, zero stream
/// position), each point the top 53 bits of one `next_u64` scaled by 2⁻⁵³.
/// Identical seeds give identical points on every platform.
pub fn gen_iud(n_count: u64, seed: u64) -> Result<TorusSequence> {
    if n_count == 0 {
        return Err(Error::InvalidParameter("n_count must be at least 1".into()));
    }
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    let mut rng = ChaCha20Rng::from_seed(key);
    let points = (0..n_count)
        .map(|_| (rng.next_u64() >> 11) as f64 * U64_TO_UNIT)
        .collect();
    TorusSequence::from_parts(points, GeneratorDescriptor::Iud { n_count, seed })
}

/// Directions (in turns, i.e. angle / 2π mod 1) of the nonzero points of the
/// affine lattice (Z² + ξ)M₀ inside the open disc of radius t_radius,
/// with multiplicity, ordered by the integer coordinates (n1, n2) of the
/// source lattice point.
pub fn gen_directions(spec: &AffineLatticeSpec, t_radius: f64) -> Result<TorusSequence> {
    if !(t_radius > 0.0) || !t_radius.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "t_radius must be positive and finite, got {t_radius}"
        )));
    }
    let g = spec.element();
    let region = Region::disc(t_radius)?;
    let mut points = Vec::new();
    for_each_lattice_point(&g, &region, DEFAULT_ENUM_CAP, |_, _, y| {
        if y[0] == 0.0 && y[1] == 0.0 {
            return; // the lattice point at the origin has no direction
        }
        points.push(frac(f64::atan2(y[1], y[0]) / std::f64::consts::TAU));
    })?;
    TorusSequence::from_parts(
        points,
        GeneratorDescriptor::Directions {
            m0: spec.m0,
            xi: spec.xi,
            t_radius,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_small_cases() {
        let s = gen_sqrt(4).unwrap();
        assert_eq!(s.n_count(), 2);
        assert!((s.points()[0] - (2.0f64.sqrt() - 1.0)).abs() < 1e-15);
        assert!((s.points()[1] - (3.0f64.sqrt() - 1.0)).abs() < 1e-15);
        assert_eq!(gen_sqrt(100).unwrap().n_count(), 90);
        assert_eq!(gen_sqrt(1).unwrap().n_count(), 0);
    }

    #[test]
    fn sqrt_distance_to_integers() {
        let t = 100_000u64;
        let s = gen_sqrt(t).unwrap();
        let bound = 0.5 / ((t + 1) as f64).sqrt();
        for &p in s.points() {
            let d = p.min(1.0 - p);
            assert!(d >= bound, "point {p} too close to an integer");
            assert!(p != 0.0);
        }
    }

    #[test]
    fn power_exact_cube() {
        let s = gen_arithmetic(ArithmeticKind::Power, 1.0 / 3.0, 0.0, 8).unwrap();
        assert_eq!(s.points()[7], 0.0);
    }

    #[test]
    fn linear_integer_alpha_is_zero() {
        let s = gen_arithmetic(ArithmeticKind::Linear, 3.0, 0.0, 5).unwrap();
        assert!(s.points().iter().all(|&p| p == 0.0));
    }

    #[test]
    fn power_half_matches_sqrt() {
        let pow = gen_arithmetic(ArithmeticKind::Power, 0.5, 0.0, 100).unwrap();
        let kept: Vec<f64> = pow.points().iter().copied().filter(|&p| p != 0.0).collect();
        let sq = gen_sqrt(100).unwrap();
        assert_eq!(kept.len(), sq.n_count());
        for (a, b) in kept.iter().zip(sq.points()) {
            assert_eq!(a, b, "power(1/2) and the square-root generator differ");
        }
    }

    #[test]
    fn power_log_at_one() {
        let s = gen_arithmetic(ArithmeticKind::Power, 1.0, -2.0, 3).unwrap();
        assert_eq!(s.points()[0], 0.0);
        assert!(s.points()[1].is_finite());
    }

    #[test]
    fn geometric_rejects_small_alpha() {
        assert!(gen_arithmetic(ArithmeticKind::Geometric, 1.0, 0.0, 5).is_err());
        assert!(gen_arithmetic(ArithmeticKind::Geometric, 1.5, 0.0, 5).is_ok());
    }

    #[test]
    fn iud_deterministic_and_in_range() {
        let a = gen_iud(1000, 7).unwrap();
        let b = gen_iud(1000, 7).unwrap();
        assert_eq!(a.points(), b.points());
        assert!(a.points().iter().all(|&p| (0.0..1.0).contains(&p)));
        let c = gen_iud(1000, 8).unwrap();
        assert_ne!(a.points(), c.points());
    }

    #[test]
    fn iud_interval_frequency() {
        let s = gen_iud(100_000, 1).unwrap();
        let hits = s
            .points()
            .iter()
            .filter(|&&p| (0.25..0.5).contains(&p))
            .count();
        let freq = hits as f64 / s.n_count() as f64;
        assert!((freq - 0.25).abs() < 0.01, "freq = {freq}");
    }

    #[test]
    fn directions_unit_lattice_small_disc() {
        let spec = AffineLatticeSpec::identity_with_shift([0.0, 0.0]);
        let s = gen_directions(&spec, 1.5).unwrap();
        let mut angles = s.sorted_points();
        assert_eq!(angles.len(), 8);
        for (i, a) in angles.drain(..).enumerate() {
            assert!((a - i as f64 / 8.0).abs() < 1e-12);
        }
    }

    #[test]
    fn directions_count_growth() {
        let spec = AffineLatticeSpec::identity_with_shift([0.0, 0.0]);
        let s = gen_directions(&spec, 100.0).unwrap();
        let expect = std::f64::consts::PI * 1e4;
        let got = s.n_count() as f64;
        assert!(
            (got - expect).abs() / expect < 0.02,
            "count {got} vs πT² = {expect}"
        );
    }

    #[test]
    fn directions_empty_when_disc_misses() {
        let spec = AffineLatticeSpec::identity_with_shift([0.5, 0.5]);
        let s = gen_directions(&spec, 0.5).unwrap();
        assert_eq!(s.n_count(), 0);
    }

    #[test]
    fn directions_central_symmetry_at_zero_shift() {
        let m0 = Mat2::new(1.0, 0.25, 0.0, 1.0);
        let spec = AffineLatticeSpec::new(m0, [0.0, 0.0]).unwrap();
        let s = gen_directions(&spec, 9.0).unwrap();
        let sorted = s.sorted_points();
        let mut flipped: Vec<f64> = s
            .points()
            .iter()
            .map(|&a| {
                let b = a + 0.5;
                if b >= 1.0 {
                    b - 1.0
                } else {
                    b
                }
            })
            .collect();
        flipped.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(sorted.len(), flipped.len());
        for (a, b) in sorted.iter().zip(&flipped) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn regenerate_round_trips() {
        let orig = gen_sqrt(500).unwrap();
        let again = regenerate(orig.meta()).unwrap();
        assert_eq!(orig.points(), again.points());

        let orig = gen_iud(64, 99).unwrap();
        let again = regenerate(orig.meta()).unwrap();
        assert_eq!(orig.points(), again.points());

        let spec = AffineLatticeSpec::identity_with_shift([0.3, 0.7]);
        let orig = gen_directions(&spec, 20.0).unwrap();
        let again = regenerate(orig.meta()).unwrap();
        assert_eq!(orig.points(), again.points());
    }

    #[test]
    fn doubling_matches_direct_evaluation_early() {
        // While 2^n alpha is still exactly representable the iteration must
        // agree with the direct formula.
        let alpha = 0.3251953125; // dyadic: 1332/4096
        let s = gen_arithmetic(ArithmeticKind::Doubling, alpha, 0.0, 10).unwrap();
        for (i, &p) in s.points().iter().enumerate() {
            let n = (i + 1) as u32;
            let direct = (2f64.powi(n as i32) * alpha).rem_euclid(1.0);
            assert_eq!(p, direct, "n = {n}");
        }
    }

    #[test]
    fn lattice_spec_rejects_bad_determinant() {
        assert!(AffineLatticeSpec::new(Mat2::new(2.0, 0.0, 0.0, 1.0), [0.0, 0.0]).is_err());
    }
}

//! Inequalities that dominate the fine-scale counting statistics of a torus
//! sequence by lattice-point counts in plane regions: a cone-in-triangle
//! bound for direction sequences, a parabola-sheet bound for √n mod 1 with
//! its zero window near integer x, and a cusp bound controlling counts when
//! the lattice degenerates vertically.

use super::{
    compose, iwasawa, lattice_count, AffineGroupElement, Mat2, Region, TriangleRegion,
    TriangleVariant,
};
use crate::error::{Error, Result};
use crate::sequences::{gen_directions, gen_sqrt, AffineLatticeSpec};
use crate::statistics::{count_stat, IntervalSet};

/// Default smallest scale parameter at which the cone and parabola bounds
/// are asserted; below it the linearizations they rest on degrade.
pub const DEFAULT_SCALE_FLOOR: f64 = 100.0;

/// #((Z + offset) ∩ [lo, hi]) for a closed interval.
pub fn integers_in_interval(offset: f64, lo: f64, hi: f64) -> u64 {
    let top = (hi - offset).floor();
    let bottom = (lo - offset).ceil();
    if top < bottom {
        0
    } else {
        (top - bottom) as u64 + 1
    }
}

/// Both sides of the cone-in-triangle comparison for a direction sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeBoundReport {
    /// Window count X_N(x, I) on the direction sequence.
    pub lhs: u64,
    /// Lattice points of the rotated, renormalized lattice in the padded
    /// triangle.
    pub rhs: u64,
    pub holds: bool,
    /// Number of sequence points N(T).
    pub n_count: usize,
}

/// Compare the window count of a direction sequence at x against the number
/// of lattice points in a triangle.
///
/// A direction with angle within (I/N) of x corresponds to a lattice point
/// y, ‖y‖ ≤ T = e^{t/2}, whose image under k(2πx)Φᵗ has coordinates
/// (ρcos(ε)/T, ρT·sin(ε)) with ε the angle offset; the ratio
/// second/(2·first) = (T²/2)tan(ε) ≈ N·(angle − x) since N ≈ πT². Every
/// counted direction therefore lands in the triangle over I once I is
/// widened by `vartheta`, which absorbs the tan linearization and the
/// N-versus-πT² mismatch. The padding requirement shrinks as T grows; at
/// small T choose `vartheta` of order T·|I|_max/N.
pub fn cone_bound_check(
    spec: &AffineLatticeSpec,
    x: f64,
    interval: (f64, f64),
    t: f64,
    vartheta: f64,
    scale_floor: f64,
) -> Result<ConeBoundReport> {
    if !(vartheta >= 0.0) || !vartheta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "vartheta must be a nonnegative real, got {vartheta}"
        )));
    }
    let t_scale = (t / 2.0).exp();
    if !(t_scale >= scale_floor) {
        return Err(Error::InvalidParameter(format!(
            "cone bound needs e^(t/2) = {t_scale} >= scale floor {scale_floor}"
        )));
    }
    let (lo, hi) = interval;
    let seq = gen_directions(spec, t_scale)?;
    let lhs = count_stat(&seq, x, &IntervalSet::interval(lo, hi)?)?;

    let rot = AffineGroupElement::from_matrix(Mat2::k(2.0 * std::f64::consts::PI * x))?;
    let flow = AffineGroupElement::from_matrix(Mat2::phi_flow(t))?;
    let g = compose(&compose(&spec.element(), &rot), &flow);
    let triangle = TriangleRegion::new(lo - vartheta, hi + vartheta, TriangleVariant::Directions)?;
    let rhs = lattice_count(&g, &Region::Triangle(triangle))?;
    Ok(ConeBoundReport {
        lhs,
        rhs,
        holds: lhs <= rhs,
        n_count: seq.n_count(),
    })
}

/// Both sides of the parabola-sheet comparison for √n mod 1, plus the
/// zero-window check near integer x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqrtBoundReport {
    pub lhs: u64,
    /// Contribution of the sheet at +2x.
    pub rhs_pos: u64,
    /// Contribution of the sheet at −2x.
    pub rhs_neg: u64,
    /// rhs_pos + rhs_neg.
    pub rhs: u64,
    /// True when |x| ≤ ⅓·T^{−1/2}, where the window count must vanish
    /// because dist(√n, Z) ≥ ½(T+1)^{−1/2} for non-square n ≤ T.
    pub zero_window: bool,
    pub holds: bool,
    pub n_count: usize,
}

/// Compare the window count of √n mod 1 at x ∈ [−½, ½] against lattice
/// points of the two parabola sheets in a triangle.
///
/// The orbit of Z² under ñ(u) is {(a, a² − j) : a ∈ u/2 + Z, j ∈ Z}. A
/// sequence hit √n = k + x + δ with N·δ ∈ I maps, on the u = 2x sheet with
/// a = k + x and j = n, to a point with a² − n = −2aδ − δ²; after the
/// diagonal flow with e^t = N the triangle ratio second/(2·first) equals
/// −N·δ(1 + δ/(2a)). The window is therefore reflected: the count is taken
/// against y/(2x) ∈ [−hi, −lo], which makes the inequality hold exactly
/// rather than only for symmetric intervals.
pub fn sqrt_bound_check(
    x: f64,
    interval: (f64, f64),
    t_max: u64,
    scale_floor: f64,
) -> Result<SqrtBoundReport> {
    if !(-0.5..=0.5).contains(&x) {
        return Err(Error::InvalidParameter(format!(
            "x must lie in [-1/2, 1/2], got {x}"
        )));
    }
    let t_pop = t_max as f64;
    if !(t_pop >= scale_floor) {
        return Err(Error::InvalidParameter(format!(
            "parabola bound needs t_max = {t_max} >= scale floor {scale_floor}"
        )));
    }
    let (lo, hi) = interval;
    let seq = gen_sqrt(t_max)?;
    let n_count = seq.n_count();
    let lhs = count_stat(&seq, x, &IntervalSet::interval(lo, hi)?)?;

    let t_flow = (n_count as f64).ln();
    let flow = AffineGroupElement::from_matrix(Mat2::phi_flow(t_flow))?;
    let triangle = TriangleRegion::new(-hi, -lo, TriangleVariant::Sqrt)?;
    let region = Region::Triangle(triangle);
    let rhs_pos = lattice_count(
        &compose(&AffineGroupElement::n_tilde(2.0 * x), &flow),
        &region,
    )?;
    let rhs_neg = lattice_count(
        &compose(&AffineGroupElement::n_tilde(-2.0 * x), &flow),
        &region,
    )?;
    let rhs = rhs_pos + rhs_neg;

    let zero_window = x.abs() <= t_pop.powf(-0.5) / 3.0;
    let holds = lhs <= rhs && (!zero_window || lhs == 0);
    Ok(SqrtBoundReport {
        lhs,
        rhs_pos,
        rhs_neg,
        rhs,
        zero_window,
        holds,
        n_count,
    })
}

/// The power-of-count variant of the cusp bound, available when v > 4r².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CuspPowerBound {
    pub exponent: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Both sides of the cusp bound
/// X(g, S) ≤ (2r·v^{1/2} + 1)·#((Z + ξ¹) ∩ [−r·v^{−1/2}, r·v^{−1/2}]),
/// r the Euclidean supremum over S.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CuspBoundReport {
    pub lhs: u64,
    pub rhs: f64,
    pub holds: bool,
    /// #((Z + ξ¹) ∩ [−r·v^{−1/2}, r·v^{−1/2}]); binary when v > 4r².
    pub count_factor: u64,
    pub v: f64,
    pub radius: f64,
    /// The exponentiated variant; present when v > 4r² and the exponent is
    /// positive (at exponent zero the comparison degenerates: an empty count
    /// makes the right side vanish while 0⁰ = 1 on the left).
    pub power: Option<CuspPowerBound>,
}

/// Check the cusp bound for g = (1, ξ)(M, 0) with Iwasawa height v(M) ≥ 1.
///
/// High in the cusp the lattice collapses to widely separated verticals:
/// a column survives in S only when some ξ¹ + n is within r·v^{−1/2} of
/// zero, and each surviving column carries at most 2r·v^{1/2} + 1 points.
pub fn cusp_bound_check(
    g: &AffineGroupElement,
    s_region: &Region,
    s_exponent: f64,
) -> Result<CuspBoundReport> {
    if !(s_exponent >= 0.0) || !s_exponent.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "exponent must be a nonnegative real, got {s_exponent}"
        )));
    }
    let coords = iwasawa(&g.m)?;
    let v = coords.v;
    if !(v >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "cusp bound requires Iwasawa height v >= 1, got {v}"
        )));
    }
    let r = s_region.sup_norm();
    let xi1 = g.lattice_offset()[0];
    let half = r / v.sqrt();
    let count_factor = integers_in_interval(xi1, -half, half);
    let lhs = lattice_count(g, s_region)?;
    let column = 2.0 * r * v.sqrt() + 1.0;
    let rhs = column * count_factor as f64;
    let power = if v > 4.0 * r * r && s_exponent > 0.0 {
        let plhs = (lhs as f64).powf(s_exponent);
        let prhs = column.powf(s_exponent) * count_factor as f64;
        Some(CuspPowerBound {
            exponent: s_exponent,
            lhs: plhs,
            rhs: prhs,
            holds: plhs <= prhs,
        })
    } else {
        None
    };
    Ok(CuspBoundReport {
        lhs,
        rhs,
        holds: (lhs as f64) <= rhs,
        count_factor,
        v,
        radius: r,
        power,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::ChaCha20Rng;
    use rand_core::{RngCore, SeedableRng};

    fn unit(rng: &mut ChaCha20Rng) -> f64 {
        (rng.next_u64() >> 11) as f64 / 9007199254740992.0
    }

    fn square_lattice(xi: [f64; 2]) -> AffineLatticeSpec {
        AffineLatticeSpec::new(Mat2::IDENTITY, xi).unwrap()
    }

    #[test]
    fn integer_interval_counts() {
        assert_eq!(integers_in_interval(0.0, -0.1, 0.1), 1);
        assert_eq!(integers_in_interval(0.5, -0.1, 0.1), 0);
        assert_eq!(integers_in_interval(0.0, -2.0, 2.0), 5);
        assert_eq!(integers_in_interval(0.25, -1.0, 1.0), 2);
        assert_eq!(integers_in_interval(0.0, 0.3, 0.2), 0);
    }

    #[test]
    fn cone_bound_symmetric_example() {
        let spec = square_lattice([0.0, 0.0]);
        let t = 2.0 * 50.0f64.ln();
        let rep = cone_bound_check(&spec, 0.0, (-0.1, 0.1), t, 0.05, 1.0).unwrap();
        assert!(rep.holds, "lhs={} rhs={}", rep.lhs, rep.rhs);
        assert!(rep.n_count > 7000);
    }

    #[test]
    fn cone_bound_random_sweep() {
        let mut rng = ChaCha20Rng::seed_from_u64(41);
        let t = 2.0 * 50.0f64.ln();
        for _ in 0..25 {
            let spec = square_lattice([unit(&mut rng), unit(&mut rng)]);
            let x = unit(&mut rng);
            let rep = cone_bound_check(&spec, x, (-0.1, 0.1), t, 1e-3, 1.0).unwrap();
            assert!(rep.holds, "x={x} lhs={} rhs={}", rep.lhs, rep.rhs);
        }
    }

    #[test]
    fn cone_bound_enforces_scale_floor() {
        let spec = square_lattice([0.0, 0.0]);
        assert!(cone_bound_check(&spec, 0.0, (-0.1, 0.1), 2.0, 1e-3, 100.0).is_err());
    }

    #[test]
    fn sqrt_bound_example() {
        let rep = sqrt_bound_check(0.3, (0.0, 1.0), 10_000, 1.0).unwrap();
        assert!(rep.holds, "lhs={} rhs={}", rep.lhs, rep.rhs);
        assert!(!rep.zero_window);
    }

    #[test]
    fn sqrt_bound_zero_window() {
        let t_max = 10_000u64;
        let x = 0.25 * (t_max as f64).powf(-0.5);
        let rep = sqrt_bound_check(x, (-1.0, 1.0), t_max, 1.0).unwrap();
        assert!(rep.zero_window);
        assert_eq!(rep.lhs, 0);
        assert!(rep.holds);
    }

    #[test]
    fn sqrt_bound_random_sweep() {
        let mut rng = ChaCha20Rng::seed_from_u64(59);
        for _ in 0..25 {
            let x = unit(&mut rng) - 0.5;
            let rep = sqrt_bound_check(x, (0.0, 1.0), 10_000, 1.0).unwrap();
            assert!(rep.holds, "x={x} lhs={} rhs={}", rep.lhs, rep.rhs);
        }
    }

    #[test]
    fn sqrt_bound_rejects_x_outside_half() {
        assert!(sqrt_bound_check(0.7, (0.0, 1.0), 1000, 1.0).is_err());
    }

    #[test]
    fn cusp_bound_diagonal_example() {
        let g = AffineGroupElement::from_matrix(Mat2::a(100.0)).unwrap();
        let rep = cusp_bound_check(&g, &Region::disc(1.0).unwrap(), 0.0).unwrap();
        // columns at x = 10 n1 miss the open unit disc except n1 = 0, which
        // carries n2/10 for |n2| <= 9
        assert_eq!(rep.lhs, 19);
        assert_eq!(rep.count_factor, 1);
        assert!((rep.rhs - 21.0).abs() < 1e-12);
        assert!(rep.holds);
    }

    #[test]
    fn cusp_bound_shifted_offset_vanishes() {
        let g = AffineGroupElement::new(Mat2::a(100.0), [5.0, 0.0]).unwrap();
        assert_eq!(g.lattice_offset()[0], 0.5);
        let rep = cusp_bound_check(&g, &Region::disc(1.0).unwrap(), 0.0).unwrap();
        assert_eq!(rep.count_factor, 0);
        assert_eq!(rep.lhs, 0);
        assert_eq!(rep.rhs, 0.0);
        assert!(rep.holds);
    }

    #[test]
    fn cusp_bound_rejects_low_height() {
        let g = AffineGroupElement::from_matrix(Mat2::a(0.5)).unwrap();
        assert!(cusp_bound_check(&g, &Region::disc(1.0).unwrap(), 0.0).is_err());
    }

    #[test]
    fn cusp_power_bound_binary_factor() {
        // v = 100 > 4 r^2 = 4: the integer-translate factor is 0 or 1 and
        // the exponentiated inequality holds
        let mut rng = ChaCha20Rng::seed_from_u64(23);
        for _ in 0..50 {
            let xi1 = unit(&mut rng);
            let g = AffineGroupElement::new(Mat2::a(100.0), [xi1 * 10.0, 0.0]).unwrap();
            let rep = cusp_bound_check(&g, &Region::disc(1.0).unwrap(), 2.5).unwrap();
            assert!(rep.count_factor <= 1);
            let p = rep.power.expect("v > 4r^2 and s > 0");
            assert!(p.holds, "xi1={xi1} lhs={} rhs={}", p.lhs, p.rhs);
            assert!(rep.holds);
        }
    }

    #[test]
    fn cusp_power_bound_gated_at_zero_exponent() {
        let g = AffineGroupElement::from_matrix(Mat2::a(100.0)).unwrap();
        let rep = cusp_bound_check(&g, &Region::disc(1.0).unwrap(), 0.0).unwrap();
        assert!(rep.power.is_none());
    }
}

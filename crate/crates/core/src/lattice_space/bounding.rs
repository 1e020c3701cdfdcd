//! The cusp-excursion bounding function: a sum over cusp cosets of a test
//! function evaluated along the first lattice-offset coordinate, weighted by
//! a power of the coset height and sharply cut off below a height threshold.
//! Integrating it along horocycle segments measures how much counting mass
//! can escape into the cusp; the library evaluates the integral on a grid as
//! a diagnostic.

use super::IwasawaCoords;
use crate::error::{Error, Result};
use crate::statistics::TestFunction;

/// Exact value of the truncated coset sum together with its completeness
/// status.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingValue {
    pub value: f64,
    /// True when the enumeration stopped before the completeness
    /// certificate was reached (never the case for values returned by
    /// [`bounding_function`], which rejects insufficient budgets instead).
    pub truncated: bool,
    /// Cosets whose height cleared the cutoff and contributed terms.
    pub cosets: u64,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Sum of f((base + m)·√h)·h^β over the integer shifts m whose argument
/// meets the support of f.
fn shift_sum(f: &TestFunction, base: f64, height: f64, beta: f64) -> f64 {
    let scale = height.sqrt();
    let (slo, shi) = f.support();
    let m_lo = (slo / scale - base).ceil() as i64;
    let m_hi = (shi / scale - base).floor() as i64;
    let mut total = 0.0;
    for m in m_lo..=m_hi {
        total += f.eval((base + m as f64) * scale);
    }
    total * height.powf(beta)
}

/// Evaluate the coset sum
/// Σ_{(c,d) coprime} Σ_m f((d·ξ¹ − c·ξ² + m)·√v_cd)·v_cd^β·[v_cd ≥ R],
/// v_cd = v / ((cu+d)² + (cv)²), at τ = u + iv and offset ξ from `coords`.
///
/// Cosets come in ± pairs: (c, d) and (−c, −d) share the height v_cd and
/// negate the ξ-argument, so rows are enumerated with c ≥ 0 and both signs
/// added (c = 0 contributes exactly the pair d = ±1). The cutoff gives a
/// finite certificate: any c > 1/√(R·v) has v_cd ≤ 1/(c²v) < R, and for a
/// surviving c only |cu + d| ≤ √(v/R − c²v²) can pass, so the sum below the
/// budget `c_max` is the exact value, not a truncation.
pub fn bounding_function(
    coords: &IwasawaCoords,
    f: &TestFunction,
    r_cut: f64,
    beta: f64,
    c_max: u32,
) -> Result<BoundingValue> {
    if !(r_cut >= 1.0) || !r_cut.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "height cutoff must be >= 1, got {r_cut}"
        )));
    }
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "height exponent must be a nonnegative real, got {beta}"
        )));
    }
    if c_max == 0 {
        return Err(Error::InvalidParameter(
            "coset budget must be at least 1".into(),
        ));
    }
    let (u, v) = (coords.u, coords.v);
    let (xi1, xi2) = (coords.xi[0], coords.xi[1]);

    // completeness certificate: rows and shifts that can clear the cutoff
    let c_star = (1.0 / (r_cut * v).sqrt()).floor() as i64;
    let d_star = if c_star >= 1 {
        (c_star as f64 * u.abs() + (v / r_cut).sqrt()).ceil() as i64
    } else {
        1
    };
    let needed = c_star.max(d_star).max(1);
    if i64::from(c_max) < needed {
        return Err(Error::TruncationInsufficient {
            needed,
            got: i64::from(c_max),
        });
    }

    let mut value = 0.0;
    let mut cosets = 0u64;

    // c = 0: the pair (0, 1) and (0, -1), both at height v
    if v >= r_cut {
        value += shift_sum(f, xi1, v, beta) + shift_sum(f, -xi1, v, beta);
        cosets += 2;
    }

    for c in 1..=c_star {
        let room = v / r_cut - (c as f64 * v) * (c as f64 * v);
        if room < 0.0 {
            continue;
        }
        let w = room.sqrt();
        let d_lo = (-(c as f64) * u - w).ceil() as i64;
        let d_hi = (-(c as f64) * u + w).floor() as i64;
        for d in d_lo..=d_hi {
            if gcd(c, d) != 1 {
                continue;
            }
            let denom = {
                let a = c as f64 * u + d as f64;
                let b = c as f64 * v;
                a * a + b * b
            };
            let height = v / denom;
            if height < r_cut {
                continue;
            }
            let base = d as f64 * xi1 - c as f64 * xi2;
            value += shift_sum(f, base, height, beta) + shift_sum(f, -base, height, beta);
            cosets += 2;
        }
    }
    Ok(BoundingValue {
        value,
        truncated: false,
        cosets,
    })
}

/// Which horocycle family the mass experiment integrates over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HorocycleVariant {
    /// Straight horocycle at fixed offset ξ: g(u) = (1, ξ)n(u)a(v),
    /// integrated over u ∈ [−1, 1].
    Linear,
    /// Parabola lift: the offset rides along as ξ + (u/2, −u²/4). For
    /// height exponents β ≥ 1 a window [−θv^η, θv^η] around u = 0 is
    /// excluded (the counting function it models vanishes there anyway).
    Nonlinear,
}

/// Midpoint-rule mass of the bounding function along a horocycle segment
/// family at height v: a diagnostic for escape of mass. The cutoff is
/// pointwise nonincreasing in `r_cut`, so on a fixed grid the reported mass
/// is monotone in `r_cut` exactly.
#[allow(clippy::too_many_arguments)]
pub fn horocycle_mass_experiment(
    xi: [f64; 2],
    f: &TestFunction,
    beta: f64,
    r_cut: f64,
    v: f64,
    variant: HorocycleVariant,
    u_grid: usize,
    theta: f64,
    eta: f64,
) -> Result<f64> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "horocycle height must be positive, got {v}"
        )));
    }
    if u_grid == 0 {
        return Err(Error::InvalidParameter(
            "quadrature grid must have at least one point".into(),
        ));
    }
    let segments: Vec<(f64, f64)> = match variant {
        HorocycleVariant::Linear => vec![(-1.0, 1.0)],
        HorocycleVariant::Nonlinear if beta < 1.0 => vec![(-1.0, 1.0)],
        HorocycleVariant::Nonlinear => {
            if !(0.0 < theta && theta < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "window factor theta must lie in (0, 1), got {theta}"
                )));
            }
            if !(eta >= 0.0) || !eta.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "window exponent eta must be >= 0, got {eta}"
                )));
            }
            if beta > 1.0 {
                let eta_max = beta / (2.0 * (beta - 1.0));
                if eta >= eta_max {
                    return Err(Error::InvalidParameter(format!(
                        "window exponent eta = {eta} must be < beta/(2(beta-1)) = {eta_max}"
                    )));
                }
            }
            let w = theta * v.powf(eta);
            if w >= 1.0 {
                Vec::new()
            } else {
                vec![(-1.0, -w), (w, 1.0)]
            }
        }
    };

    // the coset budget the certificate demands at this (R, v), |u| <= 1
    let c_star = (1.0 / (r_cut * v).sqrt()).floor();
    let d_star = (c_star + (v / r_cut).sqrt()).ceil();
    let budget = c_star.max(d_star).max(1.0) as u32;

    let mut mass = 0.0;
    for (a, b) in segments {
        let h = (b - a) / u_grid as f64;
        for i in 0..u_grid {
            let u = a + (i as f64 + 0.5) * h;
            let xi_eff = match variant {
                HorocycleVariant::Linear => xi,
                HorocycleVariant::Nonlinear => [xi[0] + u / 2.0, xi[1] - u * u / 4.0],
            };
            let coords = IwasawaCoords::new(u, v, 0.0, xi_eff)?;
            mass += bounding_function(&coords, f, r_cut, beta, budget)?.value * h;
        }
    }
    Ok(mass)
}

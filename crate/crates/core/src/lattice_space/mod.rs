//! The group G′ = SL(2,R) ⋉ R² acting on the plane by x ↦ xM + ξ (row
//! vectors), its Iwasawa coordinates on the associated homogeneous space, and
//! exact counting of affine-lattice points in plane regions, together with
//! the counting inequalities used to dominate the sequence statistics.

mod bounding;
mod bounds;
mod regions;

pub use bounding::{bounding_function, horocycle_mass_experiment, BoundingValue, HorocycleVariant};
pub use bounds::{
    cone_bound_check, cusp_bound_check, integers_in_interval, sqrt_bound_check, ConeBoundReport,
    CuspBoundReport, CuspPowerBound, SqrtBoundReport, DEFAULT_SCALE_FLOOR,
};
pub(crate) use regions::for_each_lattice_point;
pub use regions::{
    lattice_count, lattice_count_brute, lattice_count_capped, Region, TriangleRegion,
    TriangleVariant, DEFAULT_ENUM_CAP,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on |det - 1| for matrices that must lie in SL(2,R).
pub const UNIMODULAR_TOL: f64 = 1e-10;

/// 2×2 real matrix, rows (a b / c d), acting on row vectors from the right.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inv(&self) -> Mat2 {
        let det = self.det();
        Mat2 {
            a: self.d / det,
            b: -self.b / det,
            c: -self.c / det,
            d: self.a / det,
        }
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, x: [f64; 2]) -> [f64; 2] {
        [x[0] * self.a + x[1] * self.c, x[0] * self.b + x[1] * self.d]
    }

    /// Upper-triangular horocycle generator n(u) = (1 u / 0 1).
    pub fn n(u: f64) -> Mat2 {
        Mat2::new(1.0, u, 0.0, 1.0)
    }

    /// Diagonal a(v) = (√v 0 / 0 1/√v), v > 0.
    pub fn a(v: f64) -> Mat2 {
        let s = v.sqrt();
        Mat2::new(s, 0.0, 0.0, 1.0 / s)
    }

    /// Rotation k(φ) = (cos φ, −sin φ / sin φ, cos φ).
    pub fn k(phi: f64) -> Mat2 {
        let (s, c) = phi.sin_cos();
        Mat2::new(c, -s, s, c)
    }

    /// Geodesic flow Φᵗ = diag(e^{−t/2}, e^{t/2}).
    pub fn phi_flow(t: f64) -> Mat2 {
        Mat2::new((-t / 2.0).exp(), 0.0, 0.0, (t / 2.0).exp())
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.a
            .abs()
            .max(self.b.abs())
            .max(self.c.abs())
            .max(self.d.abs())
    }

    fn check_unimodular(&self) -> Result<()> {
        let excess = (self.det() - 1.0).abs();
        if excess > UNIMODULAR_TOL {
            return Err(Error::NotUnimodular {
                excess,
                tol: UNIMODULAR_TOL,
            });
        }
        Ok(())
    }
}

/// Element (M, ξ) of SL(2,R) ⋉ R², acting on the plane by x ↦ xM + ξ.
///
/// The affine lattice it generates is Z²g = Z²M + ξ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineGroupElement {
    pub m: Mat2,
    pub xi: [f64; 2],
}

impl AffineGroupElement {
    /// Validated constructor: the matrix part must have det 1 within 1e-10.
    pub fn new(m: Mat2, xi: [f64; 2]) -> Result<Self> {
        m.check_unimodular()?;
        Ok(Self { m, xi })
    }

    pub fn from_matrix(m: Mat2) -> Result<Self> {
        Self::new(m, [0.0, 0.0])
    }

    pub fn identity() -> Self {
        Self {
            m: Mat2::IDENTITY,
            xi: [0.0, 0.0],
        }
    }

    /// The sheared horocycle element ñ(u) = (n(u), (u/2, u²/4)).
    pub fn n_tilde(u: f64) -> Self {
        Self {
            m: Mat2::n(u),
            xi: [u / 2.0, u * u / 4.0],
        }
    }

    /// Group inverse: (M, ξ)⁻¹ = (M⁻¹, −ξM⁻¹).
    pub fn inverse(&self) -> Self {
        let mi = self.m.inv();
        let t = mi.apply_row(self.xi);
        Self {
            m: mi,
            xi: [-t[0], -t[1]],
        }
    }

    /// Offset ξ_L with Z²g = (Z² + ξ_L)·M, i.e. the translation part of the
    /// decomposition g = (1, ξ_L)(M, 0). Equals ξ·M⁻¹.
    pub fn lattice_offset(&self) -> [f64; 2] {
        self.m.inv().apply_row(self.xi)
    }
}

/// Composition law (M, ξ)(M′, ξ′) = (MM′, ξM′ + ξ′).
pub fn compose(g: &AffineGroupElement, h: &AffineGroupElement) -> AffineGroupElement {
    let m = g.m.mul(&h.m);
    let t = h.m.apply_row(g.xi);
    AffineGroupElement {
        m,
        xi: [t[0] + h.xi[0], t[1] + h.xi[1]],
    }
}

/// The affine action x ↦ xM + ξ.
pub fn apply_point(x: [f64; 2], g: &AffineGroupElement) -> [f64; 2] {
    let y = g.m.apply_row(x);
    [y[0] + g.xi[0], y[1] + g.xi[1]]
}

/// Iwasawa coordinates (u, v, φ) of M = n(u) a(v) k(φ), plus the plane offset
/// ξ carried alongside on the homogeneous space of affine lattices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IwasawaCoords {
    pub u: f64,
    /// Height; always positive.
    pub v: f64,
    /// Rotation angle in [0, 2π).
    pub phi: f64,
    pub xi: [f64; 2],
}

impl IwasawaCoords {
    pub fn new(u: f64, v: f64, phi: f64, xi: [f64; 2]) -> Result<Self> {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Iwasawa height v must be positive and finite, got {v}"
            )));
        }
        if !u.is_finite() || !phi.is_finite() {
            return Err(Error::InvalidParameter(
                "Iwasawa coordinates must be finite".into(),
            ));
        }
        Ok(Self {
            u,
            v,
            phi: normalize_angle(phi),
            xi,
        })
    }

    /// Recompose the matrix n(u) a(v) k(φ).
    pub fn matrix(&self) -> Mat2 {
        Mat2::n(self.u)
            .mul(&Mat2::a(self.v))
            .mul(&Mat2::k(self.phi))
    }

    /// Recompose the full group element (1, ξ)(n(u)a(v)k(φ), 0).
    pub fn element(&self) -> AffineGroupElement {
        let m = self.matrix();
        AffineGroupElement {
            m,
            xi: m.apply_row(self.xi),
        }
    }
}

fn normalize_angle(phi: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut p = phi.rem_euclid(two_pi);
    if p >= two_pi {
        p = 0.0;
    }
    p
}

/// Iwasawa decomposition M = n(u) a(v) k(φ).
///
/// Derived from the bottom row: (c, d) = (sin φ, cos φ)/√v, so v = 1/(c²+d²)
/// and φ = atan2(c, d); u is the real part of the point M·i in the upper
/// half-plane, u = (ac + bd)·v.
pub fn iwasawa(m: &Mat2) -> Result<IwasawaCoords> {
    m.check_unimodular()?;
    let norm2 = m.c * m.c + m.d * m.d;
    if norm2 == 0.0 {
        return Err(Error::InvalidParameter(
            "bottom row of an SL(2,R) matrix cannot vanish".into(),
        ));
    }
    let v = 1.0 / norm2;
    let u = (m.a * m.c + m.b * m.d) * v;
    let phi = normalize_angle(f64::atan2(m.c, m.d));
    IwasawaCoords::new(u, v, phi, [0.0, 0.0])
}

/// Left multiplication by g = (M_g, t) expressed in the coordinates
/// (τ = u + iv, φ; ξ) of the homogeneous space.
///
/// Writing g = (1, m)(A, 0) with A = (a b / c d) and m = t·A⁻¹, the action is
/// τ ↦ (aτ+b)/(cτ+d), φ ↦ φ + arg(cτ+d), ξ ↦ (dξ¹−cξ², −bξ¹+aξ²) − m.
/// Intended for elements of Γ′ (integer data), but the formulas are valid on
/// all of G′.
pub fn coordinate_action(g: &AffineGroupElement, coords: &IwasawaCoords) -> Result<IwasawaCoords> {
    g.m.check_unimodular()?;
    let (a, b, c, d) = (g.m.a, g.m.b, g.m.c, g.m.d);
    let (u, v) = (coords.u, coords.v);
    let re = c * u + d;
    let im = c * v;
    let denom = re * re + im * im;
    if denom == 0.0 {
        return Err(Error::InvalidParameter(
            "coordinate action undefined: cτ + d = 0".into(),
        ));
    }
    let u_new = ((a * u + b) * re + a * c * v * v) / denom;
    let v_new = v / denom;
    let phi_new = coords.phi + f64::atan2(im, re);
    let mvec = g.lattice_offset();
    let (x1, x2) = (coords.xi[0], coords.xi[1]);
    let xi_new = [d * x1 - c * x2 - mvec[0], -b * x1 + a * x2 - mvec[1]];
    IwasawaCoords::new(u_new, v_new, phi_new, xi_new)
}

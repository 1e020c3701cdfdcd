//! Plane regions and exact enumeration of affine-lattice points inside them.
//!
//! The enumerator inverts the affine map once, walks the integer rows that
//! meet the preimage of the region's bounding box, and solves a pair of
//! linear inequalities per row, so its cost is proportional to the number of
//! candidate rows plus the number of points actually inside the box — even
//! for strongly sheared or stretched matrices whose naive bounding boxes in
//! the integer plane would be astronomically larger than the hit count.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice_space::AffineGroupElement;

/// Default candidate budget for lattice enumeration.
pub const DEFAULT_ENUM_CAP: u64 = 200_000_000;

/// Which open x-slab a triangle region lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TriangleVariant {
    /// 0 < x < 1 (direction statistics).
    Directions,
    /// 0 < x < 2 (square-root statistics).
    Sqrt,
}

/// Triangle △(I) = { (x, y) : x in the variant's slab, y ∈ 2xI } for an
/// interval I = [lo, hi].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangleRegion {
    pub lo: f64,
    pub hi: f64,
    pub variant: TriangleVariant,
}

impl TriangleRegion {
    pub fn new(lo: f64, hi: f64, variant: TriangleVariant) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "triangle interval must satisfy lo < hi and be finite, got [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi, variant })
    }

    fn x_max(&self) -> f64 {
        match self.variant {
            TriangleVariant::Directions => 1.0,
            TriangleVariant::Sqrt => 2.0,
        }
    }

    /// Widen the interval by ±pad (used to absorb perturbation radii).
    pub fn padded(&self, pad: f64) -> Result<Self> {
        Self::new(self.lo - pad, self.hi + pad, self.variant)
    }
}

/// A plane region with exact membership, a finite bounding box, and a finite
/// supremum of the Euclidean norm over it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Region {
    Triangle(TriangleRegion),
    /// Open disc ‖y‖ < radius centred at the origin.
    Disc {
        radius: f64,
    },
    /// Closed axis-aligned rectangle.
    Rect {
        x: (f64, f64),
        y: (f64, f64),
    },
}

impl Region {
    pub fn disc(radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "disc radius must be positive and finite, got {radius}"
            )));
        }
        Ok(Region::Disc { radius })
    }

    pub fn rect(x: (f64, f64), y: (f64, f64)) -> Result<Self> {
        if !(x.0 <= x.1) || !(y.0 <= y.1) {
            return Err(Error::InvalidParameter(
                "rectangle bounds must be ordered".into(),
            ));
        }
        Ok(Region::Rect { x, y })
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        match self {
            Region::Triangle(t) => {
                let (x, y) = (p[0], p[1]);
                x > 0.0 && x < t.x_max() && y >= 2.0 * x * t.lo && y <= 2.0 * x * t.hi
            }
            Region::Disc { radius } => p[0] * p[0] + p[1] * p[1] < radius * radius,
            Region::Rect { x, y } => p[0] >= x.0 && p[0] <= x.1 && p[1] >= y.0 && p[1] <= y.1,
        }
    }

    /// Bounding box ([x0, x1], [y0, y1]) containing the region.
    pub fn bbox(&self) -> ((f64, f64), (f64, f64)) {
        match self {
            Region::Triangle(t) => {
                let xm = t.x_max();
                let ylo = (2.0 * xm * t.lo).min(0.0);
                let yhi = (2.0 * xm * t.hi).max(0.0);
                ((0.0, xm), (ylo, yhi))
            }
            Region::Disc { radius } => ((-radius, *radius), (-radius, *radius)),
            Region::Rect { x, y } => (*x, *y),
        }
    }

    /// sup { ‖y‖ : y in the region } (supremum over the closure).
    pub fn sup_norm(&self) -> f64 {
        match self {
            Region::Triangle(t) => {
                // Convex hull of (0,0), (xm, 2 xm lo), (xm, 2 xm hi).
                let xm = t.x_max();
                let n = |y: f64| (xm * xm + y * y).sqrt();
                n(2.0 * xm * t.lo).max(n(2.0 * xm * t.hi))
            }
            Region::Disc { radius } => *radius,
            Region::Rect { x, y } => {
                let mut best = 0.0f64;
                for &px in &[x.0, x.1] {
                    for &py in &[y.0, y.1] {
                        best = best.max((px * px + py * py).sqrt());
                    }
                }
                best
            }
        }
    }
}

/// Solve lo ≤ coef·n ≤ hi over the reals; `None` means all of R.
/// Returns `Err(())` when infeasible.
fn scaled_interval(coef: f64, lo: f64, hi: f64) -> std::result::Result<Option<(f64, f64)>, ()> {
    if coef == 0.0 {
        if lo <= 0.0 && 0.0 <= hi {
            Ok(None)
        } else {
            Err(())
        }
    } else if coef > 0.0 {
        Ok(Some((lo / coef, hi / coef)))
    } else {
        Ok(Some((hi / coef, lo / coef)))
    }
}

fn intersect(a: Option<(f64, f64)>, b: Option<(f64, f64)>) -> Option<(f64, f64)> {
    match (a, b) {
        (None, x) => x,
        (x, None) => x,
        (Some((l1, h1)), Some((l2, h2))) => Some((l1.max(l2), h1.min(h2))),
    }
}

/// Visit every integer pair n = (n1, n2) whose image n·M + ξ lies in
/// `region`, in lexicographic (n1, n2) order, calling `visit(n1, n2, image)`.
///
/// Fails with `ResourceExhausted` if more than `cap` candidates would need to
/// be examined.
pub(crate) fn for_each_lattice_point<F: FnMut(i64, i64, [f64; 2])>(
    g: &AffineGroupElement,
    region: &Region,
    cap: u64,
    mut visit: F,
) -> Result<()> {
    let ((x0, x1), (y0, y1)) = region.bbox();
    // Slack absorbs round-off in the preimage computation only; exact
    // membership below makes the final decision.
    let slack = 1e-9 * (1.0 + x1.abs().max(x0.abs()).max(y1.abs()).max(y0.abs()));
    let (x0, x1, y0, y1) = (x0 - slack, x1 + slack, y0 - slack, y1 + slack);

    let minv = g.m.inv();
    let mut n1_min = f64::INFINITY;
    let mut n1_max = f64::NEG_INFINITY;
    for &cx in &[x0, x1] {
        for &cy in &[y0, y1] {
            let n = minv.apply_row([cx - g.xi[0], cy - g.xi[1]]);
            n1_min = n1_min.min(n[0]);
            n1_max = n1_max.max(n[0]);
        }
    }
    if !(n1_min.is_finite() && n1_max.is_finite()) {
        return Err(Error::InvalidParameter(
            "lattice enumeration produced a non-finite row range".into(),
        ));
    }
    let row_lo = n1_min.floor() as i64;
    let row_hi = n1_max.ceil() as i64;
    let rows = (row_hi - row_lo + 1).max(0) as u64;
    let mut budget = cap;
    if rows > budget {
        return Err(Error::ResourceExhausted(format!(
            "lattice enumeration needs {rows} rows, cap is {cap}"
        )));
    }
    budget -= rows;

    let (ma, mb, mc, md) = (g.m.a, g.m.b, g.m.c, g.m.d);
    for n1 in row_lo..=row_hi {
        let n1f = n1 as f64;
        let fx = n1f * ma + g.xi[0];
        let fy = n1f * mb + g.xi[1];
        let ix = match scaled_interval(mc, x0 - fx, x1 - fx) {
            Ok(i) => i,
            Err(()) => continue,
        };
        let iy = match scaled_interval(md, y0 - fy, y1 - fy) {
            Ok(i) => i,
            Err(()) => continue,
        };
        // det M = 1 forbids mc = md = 0, so the intersection is bounded.
        let (lo, hi) = match intersect(ix, iy) {
            Some(b) => b,
            None => unreachable!("singular matrix slipped past validation"),
        };
        if lo > hi {
            continue;
        }
        let n2_lo = lo.ceil() as i64;
        let n2_hi = hi.floor() as i64;
        if n2_hi < n2_lo {
            continue;
        }
        let count = (n2_hi - n2_lo + 1) as u64;
        if count > budget {
            return Err(Error::ResourceExhausted(format!(
                "lattice enumeration exceeded the candidate cap {cap}"
            )));
        }
        budget -= count;
        for n2 in n2_lo..=n2_hi {
            let n2f = n2 as f64;
            let p = [fx + n2f * mc, fy + n2f * md];
            if region.contains(p) {
                visit(n1, n2, p);
            }
        }
    }
    Ok(())
}

/// Number of points of the affine lattice Z²g = Z²M + ξ inside `region`.
pub fn lattice_count(g: &AffineGroupElement, region: &Region) -> Result<u64> {
    lattice_count_capped(g, region, DEFAULT_ENUM_CAP)
}

/// As [`lattice_count`] with an explicit candidate budget.
pub fn lattice_count_capped(g: &AffineGroupElement, region: &Region, cap: u64) -> Result<u64> {
    let mut n = 0u64;
    for_each_lattice_point(g, region, cap, |_, _, _| n += 1)?;
    Ok(n)
}

/// Slow cross-check: test every integer pair in [−n_bound, n_bound]²
/// directly. Only correct when the box covers the whole preimage; meant for
/// validating [`lattice_count`] on small instances.
pub fn lattice_count_brute(g: &AffineGroupElement, region: &Region, n_bound: i64) -> u64 {
    let mut n = 0u64;
    for n1 in -n_bound..=n_bound {
        for n2 in -n_bound..=n_bound {
            let p = apply(g, n1, n2);
            if region.contains(p) {
                n += 1;
            }
        }
    }
    n
}

fn apply(g: &AffineGroupElement, n1: i64, n2: i64) -> [f64; 2] {
    let x = [n1 as f64, n2 as f64];
    let y = g.m.apply_row(x);
    [y[0] + g.xi[0], y[1] + g.xi[1]]
}

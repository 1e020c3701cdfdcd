use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Width of the steep linear shoulders used when a sharp indicator has to be
/// approximated by a continuous function.
pub const INDICATOR_SHOULDER: f64 = 1e-6;

/// Nonnegative, continuous, compactly supported piecewise-linear test
/// function: linear between consecutive knots, zero outside the knot range.
///
/// The first and last knot values are required to be zero so the function is
/// continuous on all of R.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    knots: Vec<f64>,
    values: Vec<f64>,
}

impl TestFunction {
    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::InvalidParameter(
                "test function needs at least 2 knots".into(),
            ));
        }
        if knots.len() != values.len() {
            return Err(Error::InvalidParameter(format!(
                "knot/value length mismatch: {} vs {}",
                knots.len(),
                values.len()
            )));
        }
        for w in knots.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::InvalidParameter(format!(
                    "knots must be strictly increasing, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        for &v in &values {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "test function values must be finite and >= 0, got {v}"
                )));
            }
        }
        if values[0] != 0.0 || values[values.len() - 1] != 0.0 {
            return Err(Error::InvalidParameter(
                "test function must vanish at the first and last knot (compact support)".into(),
            ));
        }
        Ok(Self { knots, values })
    }

    /// Triangular "hat" of the given height, peaking at `center`, supported on
    /// `[center - halfwidth, center + halfwidth]`.
    pub fn hat(center: f64, halfwidth: f64, height: f64) -> Result<Self> {
        if !(halfwidth > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "hat halfwidth must be positive, got {halfwidth}"
            )));
        }
        Self::new(
            vec![center - halfwidth, center, center + halfwidth],
            vec![0.0, height, 0.0],
        )
    }

    /// The unit hat on [-1, 1]: peak 1 at 0, integral 1.
    pub fn unit_hat() -> Self {
        Self::hat(0.0, 1.0, 1.0).expect("static parameters")
    }

    /// Continuous approximation of the indicator of `[lo, hi]`: constant
    /// `height` on `[lo, hi]`, dropping linearly to 0 over shoulders of the
    /// given width on each side.
    pub fn plateau(lo: f64, hi: f64, shoulder: f64, height: f64) -> Result<Self> {
        if !(hi > lo) {
            return Err(Error::InvalidParameter(format!(
                "plateau needs lo < hi, got ({lo}, {hi})"
            )));
        }
        if !(shoulder > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "plateau shoulder must be positive, got {shoulder}"
            )));
        }
        Self::new(
            vec![lo - shoulder, lo, hi, hi + shoulder],
            vec![0.0, height, height, 0.0],
        )
    }

    /// Indicator of `[lo, hi]` softened by the standard steep shoulder width.
    pub fn indicator_approx(lo: f64, hi: f64) -> Result<Self> {
        Self::plateau(lo, hi, INDICATOR_SHOULDER, 1.0)
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Support interval (smallest closed interval outside which f = 0).
    pub fn support(&self) -> (f64, f64) {
        (self.knots[0], self.knots[self.knots.len() - 1])
    }

    /// Evaluate by linear interpolation; zero outside the support.
    pub fn eval(&self, t: f64) -> f64 {
        let k = &self.knots;
        if t <= k[0] || t >= k[k.len() - 1] {
            return 0.0;
        }
        // partition_point returns the first knot index with knot > t
        let i = k.partition_point(|&x| x <= t);
        let (a, b) = (k[i - 1], k[i]);
        let (va, vb) = (self.values[i - 1], self.values[i]);
        va + (vb - va) * (t - a) / (b - a)
    }

    /// Exact integral over R (trapezoid rule is exact on the pieces).
    pub fn integral(&self) -> f64 {
        let mut total = 0.0;
        for i in 1..self.knots.len() {
            total +=
                0.5 * (self.values[i] + self.values[i - 1]) * (self.knots[i] - self.knots[i - 1]);
        }
        total
    }

    /// Breakpoints of the pointwise product f·g: the union of both knot sets
    /// restricted to the closed intersection of supports. Empty when the
    /// supports do not overlap.
    pub fn product_knots(&self, other: &TestFunction) -> Vec<f64> {
        let (alo, ahi) = self.support();
        let (blo, bhi) = other.support();
        let lo = alo.max(blo);
        let hi = ahi.min(bhi);
        if hi <= lo {
            return Vec::new();
        }
        let mut ks: Vec<f64> = self
            .knots
            .iter()
            .chain(other.knots.iter())
            .copied()
            .filter(|&t| t >= lo && t <= hi)
            .collect();
        ks.push(lo);
        ks.push(hi);
        ks.sort_by(|a, b| a.partial_cmp(b).expect("finite knots"));
        ks.dedup();
        ks
    }
}

/// The off-diagonal convolution (f ∗′ g)(w) = ∫ f(w+t) g(t) dt, evaluated
/// exactly at a single point.
///
/// On each overlap of a shifted f-segment with a g-segment the integrand is a
/// quadratic polynomial in t, so a three-point Simpson evaluation of the
/// piece is exact. The result is a piecewise-cubic function of w; evaluating
/// it pointwise like this avoids carrying polynomial coefficients around.
pub fn conv_prime_eval(f: &TestFunction, g: &TestFunction, w: f64) -> f64 {
    let mut total = 0.0;
    let fk = f.knots();
    let gk = g.knots();
    for i in 1..fk.len() {
        // shifted f-segment in the t variable: t in [fk[i-1]-w, fk[i]-w]
        let slo = fk[i - 1] - w;
        let shi = fk[i] - w;
        for j in 1..gk.len() {
            let lo = slo.max(gk[j - 1]);
            let hi = shi.min(gk[j]);
            if hi <= lo {
                continue;
            }
            let mid = 0.5 * (lo + hi);
            let p = |t: f64| f.eval(w + t) * g.eval(t);
            total += (hi - lo) / 6.0 * (p(lo) + 4.0 * p(mid) + p(hi));
        }
    }
    total
}

/// Support of f ∗′ g: it vanishes outside [f.lo - g.hi, f.hi - g.lo].
pub fn conv_prime_support(f: &TestFunction, g: &TestFunction) -> (f64, f64) {
    let (flo, fhi) = f.support();
    let (glo, ghi) = g.support();
    (flo - ghi, fhi - glo)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_shape() {
        assert!(TestFunction::new(vec![0.0], vec![0.0]).is_err());
        assert!(TestFunction::new(vec![0.0, 0.0], vec![0.0, 0.0]).is_err());
        assert!(TestFunction::new(vec![0.0, 1.0], vec![0.0, 1.0]).is_err());
        assert!(TestFunction::new(vec![0.0, 1.0, 2.0], vec![0.0, -1.0, 0.0]).is_err());
        assert!(TestFunction::new(vec![0.0, 1.0, 2.0], vec![0.0, 3.0, 0.0]).is_ok());
    }

    #[test]
    fn hat_eval_and_integral() {
        let h = TestFunction::unit_hat();
        assert_eq!(h.eval(0.0), 1.0);
        assert_eq!(h.eval(0.5), 0.5);
        assert_eq!(h.eval(-0.5), 0.5);
        assert_eq!(h.eval(1.0), 0.0);
        assert_eq!(h.eval(2.0), 0.0);
        assert!((h.integral() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn plateau_integral() {
        let p = TestFunction::plateau(0.0, 2.0, 0.5, 3.0).unwrap();
        // 3 * (2 + 0.5) = 7.5 (plateau plus two half shoulders)
        assert!((p.integral() - 7.5).abs() < 1e-12);
    }

    // ∗′-convolution of two unit boxes softened to near-indicators would be a
    // near-triangle; with exact hats we can check against a hand value.
    #[test]
    fn conv_prime_of_unit_hats_at_zero() {
        // (h ∗′ h)(0) = ∫ h(t)^2 dt = 2 ∫_0^1 (1-t)^2 dt = 2/3
        let h = TestFunction::unit_hat();
        let v = conv_prime_eval(&h, &h, 0.0);
        assert!((v - 2.0 / 3.0).abs() < 1e-14, "got {v}");
    }

    #[test]
    fn conv_prime_matches_riemann_sum() {
        let f = TestFunction::hat(0.3, 0.8, 2.0).unwrap();
        let g = TestFunction::plateau(-1.0, 0.5, 0.25, 1.5).unwrap();
        for &w in &[-0.7, 0.0, 0.4, 1.3] {
            let exact = conv_prime_eval(&f, &g, w);
            let m = 200_000;
            let (lo, hi) = g.support();
            let dt = (hi - lo) / m as f64;
            let riemann: f64 = (0..m)
                .map(|i| {
                    let t = lo + (i as f64 + 0.5) * dt;
                    f.eval(w + t) * g.eval(t) * dt
                })
                .sum();
            assert!(
                (exact - riemann).abs() < 1e-6,
                "w={w}: exact {exact} vs riemann {riemann}"
            );
        }
    }

    #[test]
    fn conv_support_bounds() {
        let f = TestFunction::hat(0.0, 1.0, 1.0).unwrap();
        let g = TestFunction::hat(2.0, 0.5, 1.0).unwrap();
        let (lo, hi) = conv_prime_support(&f, &g);
        assert_eq!((lo, hi), (-3.5, -0.5));
        assert_eq!(conv_prime_eval(&f, &g, 0.0), 0.0);
        assert!(conv_prime_eval(&f, &g, -2.0) > 0.0);
    }
}

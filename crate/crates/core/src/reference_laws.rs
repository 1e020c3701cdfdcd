//! Closed-form limit laws that the empirical statistics are compared
//! against: Poisson count probabilities, exponential and Erlang spacing
//! CDFs, and the second-moment values of the Poisson point process.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statistics::{IntervalSet, TestFunction};

/// Poisson law with the given intensity (the interval length |I|).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoissonLaw {
    intensity: f64,
}

impl PoissonLaw {
    pub fn new(intensity: f64) -> Result<Self> {
        if !(intensity > 0.0) || !intensity.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Poisson intensity must be positive and finite, got {intensity}"
            )));
        }
        Ok(Self { intensity })
    }

    pub fn intensity(&self) -> f64 {
        self.intensity
    }

    pub fn pmf(&self, r: u64) -> f64 {
        poisson_pmf(r, self.intensity).expect("intensity validated at construction")
    }

    /// E[X²] = |I| + |I|².
    pub fn second_moment(&self) -> f64 {
        self.intensity + self.intensity * self.intensity
    }
}

/// e^{−length} length^r / r!, in log space for large r so that neither the
/// power nor the factorial overflows.
pub fn poisson_pmf(r: u64, length: f64) -> Result<f64> {
    if !(length > 0.0) || !length.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "Poisson parameter must be positive and finite, got {length}"
        )));
    }
    if r <= 20 {
        let mut factorial = 1.0f64;
        for k in 2..=r {
            factorial *= k as f64;
        }
        Ok((-length).exp() * length.powi(r as i32) / factorial)
    } else {
        let mut log_factorial = 0.0f64;
        for k in 2..=r {
            log_factorial += (k as f64).ln();
        }
        Ok((-length + r as f64 * length.ln() - log_factorial).exp())
    }
}

/// Limiting gap CDF of a unit Poisson process: 1 − e^{−a}.
pub fn exponential_gap_cdf(a: f64) -> Result<f64> {
    if !(a >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "gap CDF argument must be nonnegative, got {a}"
        )));
    }
    Ok(-(-a).exp_m1())
}

/// CDF of the distance to the k-th neighbor in a unit Poisson process
/// (Erlang(k,1) law): 1 − e^{−a} Σ_{j<k} a^j/j!.
pub fn neighbor_spacing_cdf(k: usize, a: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter(
            "neighbor order k must be ≥ 1".into(),
        ));
    }
    if !(a >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "spacing CDF argument must be nonnegative, got {a}"
        )));
    }
    let mut term = 1.0f64;
    let mut partial = 1.0f64;
    for j in 1..k {
        term *= a / j as f64;
        partial += term;
    }
    Ok(1.0 - (-a).exp() * partial)
}

/// Limit of the pair correlation for Poisson-like sequences: ∫ f.
pub fn poisson_pair_value(f: &TestFunction) -> f64 {
    f.integral()
}

/// Limit of the mixed second moment ∫X(x,I₁)X(x,I₂)dx for Poisson-like
/// sequences: |I₁∩I₂| + |I₁|·|I₂|.
pub fn poisson_mixed_second(i1: &IntervalSet, i2: &IntervalSet) -> f64 {
    i1.intersection_measure(i2) + i1.measure() * i2.measure()
}

/// Whether the s-th moment of the limiting counting process is finite:
/// the threshold is s < 2 when the direction data has the rational
/// (collinear) obstruction and s < 3 otherwise, both strict.
pub fn moment_exists(s: f64, rational_obstruction: bool) -> bool {
    if rational_obstruction {
        s < 2.0
    } else {
        s < 3.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pmf_small_values() {
        let e_inv = (-1.0f64).exp();
        assert!((poisson_pmf(0, 1.0).unwrap() - e_inv).abs() < 1e-15);
        assert!((poisson_pmf(1, 1.0).unwrap() - e_inv).abs() < 1e-15);
        assert!((poisson_pmf(2, 1.0).unwrap() - e_inv / 2.0).abs() < 1e-15);
    }

    #[test]
    fn pmf_normalizes() {
        for length in [0.25, 1.0, 3.0] {
            let total: f64 = (0..=50).map(|r| poisson_pmf(r, length).unwrap()).sum();
            assert!((total - 1.0).abs() < 1e-12, "length {length}: {total}");
        }
    }

    #[test]
    fn pmf_log_space_consistent() {
        // direct formula still works at r = 25 with a large parameter
        let direct =
            (-9.0f64).exp() * 9.0f64.powi(25) / (2..=25u64).map(|k| k as f64).product::<f64>();
        let log_space = poisson_pmf(25, 9.0).unwrap();
        assert!((direct - log_space).abs() / direct < 1e-12);
        // far out in the tail the log-space path keeps producing mass
        let tail = poisson_pmf(200, 3.0).unwrap();
        assert!(tail > 0.0 && tail < 1e-250);
        // and past the representable range it underflows to zero, not NaN
        assert_eq!(poisson_pmf(400, 3.0).unwrap(), 0.0);
    }

    #[test]
    fn gap_cdf_values() {
        assert_eq!(exponential_gap_cdf(0.0).unwrap(), 0.0);
        assert!((exponential_gap_cdf(1.0).unwrap() - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        assert!((exponential_gap_cdf(50.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(exponential_gap_cdf(-0.1).is_err());
    }

    #[test]
    fn gap_cdf_monotone() {
        let mut prev = -1.0;
        for i in 0..=100 {
            let v = exponential_gap_cdf(i as f64 * 0.1).unwrap();
            assert!(v >= prev && v < 1.0);
            prev = v;
        }
    }

    #[test]
    fn erlang_matches_exponential_at_k1() {
        for a in [0.0, 0.3, 1.7, 4.0] {
            assert!(
                (neighbor_spacing_cdf(1, a).unwrap() - exponential_gap_cdf(a).unwrap()).abs()
                    < 1e-15
            );
        }
        let v = neighbor_spacing_cdf(2, 1.0).unwrap();
        assert!((v - (1.0 - (-1.0f64).exp() * 2.0)).abs() < 1e-15);
    }

    #[test]
    fn pair_value_is_integral() {
        assert!((poisson_pair_value(&TestFunction::unit_hat()) - 1.0).abs() < 1e-15);
        let z = TestFunction::new(vec![-1.0, 1.0], vec![0.0, 0.0]).unwrap();
        assert_eq!(poisson_pair_value(&z), 0.0);
        let p = TestFunction::indicator_approx(0.0, 0.25).unwrap();
        assert!((poisson_pair_value(&p) - 0.25).abs() < 2e-6);
    }

    #[test]
    fn mixed_second_examples() {
        let unit = IntervalSet::interval(0.0, 1.0).unwrap();
        assert!((poisson_mixed_second(&unit, &unit) - 2.0).abs() < 1e-15);
        let a = IntervalSet::interval(0.0, 1.0).unwrap();
        let b = IntervalSet::interval(2.0, 3.0).unwrap();
        assert!((poisson_mixed_second(&a, &b) - 1.0).abs() < 1e-15);
        let c = IntervalSet::interval(0.0, 2.0).unwrap();
        let d = IntervalSet::interval(1.0, 3.0).unwrap();
        assert!((poisson_mixed_second(&c, &d) - 5.0).abs() < 1e-15);
        // symmetry
        assert_eq!(poisson_mixed_second(&c, &d), poisson_mixed_second(&d, &c));
    }

    #[test]
    fn moment_thresholds() {
        assert!(moment_exists(1.9, true));
        assert!(!moment_exists(2.0, true));
        assert!(moment_exists(2.9, false));
        assert!(!moment_exists(3.0, false));
    }
}

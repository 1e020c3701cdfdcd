//! Pair correlation R²_N(f) = (1/N) Σ_{n₁≠n₂, m} f(N(ξ_{n₁} − ξ_{n₂} + m))
//! and the identity tying it to products of counting variables:
//!
//!   R²_N(f₁ ∗′ f₂) = ∫ X_N(x,f₁) X_N(x,f₂) dx − ∫ X_N(x, f₁·f₂) dx,
//!
//! where (f₁ ∗′ f₂)(w) = ∫ f₁(w+t) f₂(t) dt. Both sides admit exact
//! evaluation: the left by per-argument exact convolution values, the right
//! by splitting x at the finitely many kinks of the piecewise-polynomial
//! integrand and applying Simpson's rule on each piece (exact through
//! cubics, and the pieces are at most quadratic).

use crate::error::{Error, Result};
use crate::sequences::TorusSequence;
use crate::statistics::counting::WindowCounter;
use crate::statistics::histogram::{HistogramReport, Normalization};
use crate::statistics::testfn::{conv_prime_eval, conv_prime_support, TestFunction};

/// Visit every scaled signed difference N(ξ_a − ξ_b + m), a ≠ b, with
/// absolute value at most r_scaled. Requires 2·r_scaled < N so that each
/// unordered pair is reached from exactly one side.
fn scan_pairs<F: FnMut(f64)>(sorted: &[f64], r_scaled: f64, mut visit: F) {
    let n = sorted.len();
    let nf = n as f64;
    let rd = r_scaled / nf;
    for i in 0..n {
        for step in 1..n {
            let j = i + step;
            let (k, wrap) = if j < n { (j, 0.0) } else { (j - n, 1.0) };
            let delta = sorted[k] + wrap - sorted[i];
            if delta > rd {
                break;
            }
            let t = nf * delta;
            visit(t);
            visit(-t);
        }
    }
}

fn require_pairs(seq: &TorusSequence) -> Result<usize> {
    let n = seq.n_count();
    if n < 2 {
        return Err(Error::SequenceTooShort(format!(
            "pair statistics need at least 2 points, got {n}"
        )));
    }
    Ok(n)
}

/// Pair correlation of a piecewise-linear test function, via the sorted
/// window scan (O(N log N + pairs in range)); falls back to the quadratic
/// loop when the support is too wide for the scan to be valid.
pub fn pair_correlation(seq: &TorusSequence, f: &TestFunction) -> Result<f64> {
    let n = require_pairs(seq)?;
    let (slo, shi) = f.support();
    let r = slo.abs().max(shi.abs());
    if 2.0 * r >= n as f64 {
        return pair_correlation_naive(seq, f);
    }
    let sorted = seq.sorted_points();
    let mut sum = 0.0;
    scan_pairs(&sorted, r, |t| sum += f.eval(t));
    Ok(sum / n as f64)
}

/// Direct double loop over ordered pairs with the full shift sum; the
/// reference implementation the scan is checked against.
pub fn pair_correlation_naive(seq: &TorusSequence, f: &TestFunction) -> Result<f64> {
    let n = require_pairs(seq)?;
    let nf = n as f64;
    let (slo, shi) = f.support();
    let pts = seq.points();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let base = pts[i] - pts[j];
            let m_lo = (slo / nf - base).ceil() as i64;
            let m_hi = (shi / nf - base).floor() as i64;
            for m in m_lo..=m_hi {
                sum += f.eval(nf * (base + m as f64));
            }
        }
    }
    Ok(sum / nf)
}

/// Histogram of scaled pair differences over [lo, hi), normalized so that a
/// Poisson-like sequence has mass ≈ 1 per unit length (R² density).
pub fn pair_correlation_histogram(
    seq: &TorusSequence,
    lo: f64,
    hi: f64,
    bins: usize,
) -> Result<HistogramReport> {
    let n = require_pairs(seq)?;
    if bins == 0 || !(lo < hi) {
        return Err(Error::InvalidParameter(
            "histogram needs bins ≥ 1 and lo < hi".into(),
        ));
    }
    let r = lo.abs().max(hi.abs());
    if 2.0 * r >= n as f64 {
        return Err(Error::SupportTooWide {
            n,
            detail: format!("pair histogram range radius {r} must be < N/2"),
        });
    }
    let nf = n as f64;
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0u64; bins];
    let sorted = seq.sorted_points();
    scan_pairs(&sorted, r, |t| {
        if t >= lo && t < hi {
            let mut idx = ((t - lo) / width) as usize;
            if idx >= bins {
                idx = bins - 1;
            }
            counts[idx] += 1;
        }
    });
    let bin_edges: Vec<f64> = (0..=bins).map(|i| lo + i as f64 * width).collect();
    let masses: Vec<f64> = counts.iter().map(|&c| c as f64 / (nf * width)).collect();
    Ok(HistogramReport {
        bin_edges,
        masses,
        normalization: Normalization::Density,
        overlay: None,
        out_of_range: false,
    })
}

fn conv_radius(f1: &TestFunction, f2: &TestFunction) -> f64 {
    let (lo, hi) = conv_prime_support(f1, f2);
    lo.abs().max(hi.abs())
}

fn check_supports(n: usize, f1: &TestFunction, f2: &TestFunction) -> Result<()> {
    let r = conv_radius(f1, f2);
    if 2.0 * r >= n as f64 {
        return Err(Error::SupportTooWide {
            n,
            detail: format!(
                "combined support radius {r} must be below N/2 = {} for the identity to hold",
                n as f64 / 2.0
            ),
        });
    }
    Ok(())
}

/// Left side: R²_N(f₁ ∗′ f₂) with exact convolution values.
fn identity_lhs(seq: &TorusSequence, f1: &TestFunction, f2: &TestFunction) -> f64 {
    let n = seq.n_count() as f64;
    let r = conv_radius(f1, f2);
    let (clo, chi) = conv_prime_support(f1, f2);
    let sorted = seq.sorted_points();
    let mut sum = 0.0;
    scan_pairs(&sorted, r, |t| {
        // the convolution vanishes at (and outside) its support endpoints;
        // excluding them avoids manufacturing round-off dust there
        if t > clo && t < chi {
            sum += conv_prime_eval(f1, f2, t);
        }
    });
    sum / n
}

/// Exact ∫ (f₁·f₂)(t) dt: the product is quadratic between union knots, so
/// Simpson per segment is exact.
fn product_integral(f1: &TestFunction, f2: &TestFunction) -> f64 {
    let knots = f1.product_knots(f2);
    let mut total = 0.0;
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        let g = |t: f64| f1.eval(t) * f2.eval(t);
        let h = b - a;
        total += h / 6.0 * (g(a) + 4.0 * g(0.5 * (a + b)) + g(b));
    }
    total
}

/// Both sides of the counting identity; the right side by midpoint
/// quadrature on an x-grid of the given size.
pub fn lemma1_check(
    seq: &TorusSequence,
    f1: &TestFunction,
    f2: &TestFunction,
    x_grid_size: usize,
) -> Result<(f64, f64)> {
    let n = require_pairs(seq)?;
    check_supports(n, f1, f2)?;
    if x_grid_size == 0 {
        return Err(Error::InvalidParameter("x grid must be nonempty".into()));
    }
    let lhs = identity_lhs(seq, f1, f2);
    let wc = WindowCounter::new(seq)?;
    let g = x_grid_size as f64;
    let mut mean_prod = 0.0;
    let mut mean_cross = 0.0;
    for i in 0..x_grid_size {
        let x = (i as f64 + 0.5) / g;
        mean_prod += wc.smooth_stat_at(x, f1) * wc.smooth_stat_at(x, f2);
        mean_cross += product_stat(&wc, x, f1, f2);
    }
    Ok((lhs, (mean_prod - mean_cross) / g))
}

/// X_N(x, f₁·f₂) evaluated directly (the product is not piecewise linear, so
/// it cannot be represented as a TestFunction).
fn product_stat(wc: &WindowCounter, x: f64, f1: &TestFunction, f2: &TestFunction) -> f64 {
    let (lo1, hi1) = f1.support();
    let (lo2, hi2) = f2.support();
    let (lo, hi) = (lo1.max(lo2), hi1.min(hi2));
    if lo >= hi {
        return 0.0;
    }
    wc.weighted_sum_at(x, (lo, hi), |t| f1.eval(t) * f2.eval(t))
}

/// Both sides of the counting identity, the right side integrated exactly:
/// x-kinks of X_N(·,f₁)·X_N(·,f₂) occur only where some N(ξ−x+m) crosses a
/// knot, and between kinks the integrand is at most quadratic.
pub fn lemma1_check_exact(
    seq: &TorusSequence,
    f1: &TestFunction,
    f2: &TestFunction,
) -> Result<(f64, f64)> {
    let n = require_pairs(seq)?;
    check_supports(n, f1, f2)?;
    let lhs = identity_lhs(seq, f1, f2);
    let wc = WindowCounter::new(seq)?;
    let nf = n as f64;

    let mut breaks: Vec<f64> = Vec::with_capacity(n * (f1.knots().len() + f2.knots().len()) + 2);
    for &p in seq.points() {
        for &k in f1.knots().iter().chain(f2.knots()) {
            breaks.push((p - k / nf).rem_euclid(1.0));
        }
    }
    breaks.push(0.0);
    breaks.push(1.0);
    breaks.sort_unstable_by(f64::total_cmp);
    breaks.dedup();

    let field = |x: f64| wc.smooth_stat_at(x, f1) * wc.smooth_stat_at(x, f2);
    let mut cross = 0.0;
    let mut left = field(breaks[0]);
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let right = field(b);
        let mid = field(0.5 * (a + b));
        cross += (b - a) / 6.0 * (left + 4.0 * mid + right);
        left = right;
    }
    let rhs = cross - product_integral(f1, f2);
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::{gen_iud, GeneratorDescriptor};

    fn seq_of(points: Vec<f64>) -> TorusSequence {
        TorusSequence::from_parts(
            points,
            GeneratorDescriptor::External {
                label: "test".into(),
            },
        )
        .unwrap()
    }

    fn lattice(n: usize) -> TorusSequence {
        seq_of((0..n).map(|k| k as f64 / n as f64).collect())
    }

    #[test]
    fn lattice_narrow_hat_is_zero() {
        let seq = lattice(64);
        let f = TestFunction::hat(0.0, 0.5, 1.0).unwrap();
        assert_eq!(pair_correlation(&seq, &f).unwrap(), 0.0);
        assert_eq!(pair_correlation_naive(&seq, &f).unwrap(), 0.0);
    }

    #[test]
    fn lattice_plateau_counts_two_neighbors() {
        let seq = lattice(50);
        let f = TestFunction::plateau(-1.1, 1.1, 0.1, 1.0).unwrap();
        let v = pair_correlation(&seq, &f).unwrap();
        assert!((v - 2.0).abs() < 1e-12, "v = {v}");
    }

    #[test]
    fn scan_matches_naive() {
        let seq = gen_iud(300, 21).unwrap();
        for (c, w, h) in [(0.0, 1.0, 1.0), (0.7, 2.3, 0.8), (-1.2, 0.9, 2.0)] {
            let f = TestFunction::hat(c, w, h).unwrap();
            let fast = pair_correlation(&seq, &f).unwrap();
            let slow = pair_correlation_naive(&seq, &f).unwrap();
            let scale = fast.abs().max(slow.abs()).max(1e-30);
            assert!(
                (fast - slow).abs() / scale < 1e-10,
                "fast {fast} slow {slow}"
            );
        }
    }

    #[test]
    fn iud_histogram_density_near_one() {
        let seq = gen_iud(20_000, 13).unwrap();
        let h = pair_correlation_histogram(&seq, 0.0, 4.0, 8).unwrap();
        for &m in &h.masses {
            assert!((m - 1.0).abs() < 0.1, "density {m}");
        }
    }

    #[test]
    fn identity_zero_function() {
        let seq = gen_iud(100, 5).unwrap();
        let f1 = TestFunction::unit_hat();
        let f2 = TestFunction::new(vec![-1.0, 1.0], vec![0.0, 0.0]).unwrap();
        let (lhs, rhs) = lemma1_check_exact(&seq, &f1, &f2).unwrap();
        assert_eq!(lhs, 0.0);
        assert!(rhs.abs() < 1e-12);
    }

    #[test]
    fn identity_lattice_hats() {
        // dyadic size: the points k/64 and all their scaled differences are
        // exactly representable, so both sides vanish identically
        let seq = lattice(64);
        let f = TestFunction::hat(0.0, 0.5, 1.0).unwrap();
        let (lhs, rhs) = lemma1_check_exact(&seq, &f, &f).unwrap();
        assert_eq!(lhs, 0.0);
        assert!(rhs.abs() < 1e-10, "rhs = {rhs}");
    }

    #[test]
    fn identity_random_hats_exact_path() {
        let seq = gen_iud(200, 3).unwrap();
        let cases = [
            (
                TestFunction::hat(0.3, 1.2, 1.0).unwrap(),
                TestFunction::hat(-0.5, 0.8, 0.7).unwrap(),
            ),
            (
                TestFunction::unit_hat(),
                TestFunction::hat(0.0, 2.0, 1.3).unwrap(),
            ),
        ];
        for (f1, f2) in cases {
            let (lhs, rhs) = lemma1_check_exact(&seq, &f1, &f2).unwrap();
            assert!(
                (lhs - rhs).abs() <= 1e-8 * lhs.abs().max(rhs.abs()).max(1.0),
                "lhs {lhs} rhs {rhs}"
            );
        }
    }

    #[test]
    fn identity_quadrature_is_close() {
        let seq = gen_iud(150, 17).unwrap();
        let f1 = TestFunction::unit_hat();
        let f2 = TestFunction::hat(0.2, 1.5, 1.0).unwrap();
        let (lhs, rhs) = lemma1_check(&seq, &f1, &f2, 20_000).unwrap();
        assert!((lhs - rhs).abs() < 0.05, "lhs {lhs} rhs {rhs}");
    }

    #[test]
    fn support_too_wide_is_rejected() {
        let seq = gen_iud(4, 1).unwrap();
        let f = TestFunction::hat(0.0, 3.0, 1.0).unwrap();
        match lemma1_check_exact(&seq, &f, &f) {
            Err(Error::SupportTooWide { .. }) => {}
            other => panic!("expected SupportTooWide, got {other:?}"),
        }
    }

    #[test]
    fn too_short_sequence_rejected() {
        let seq = seq_of(vec![0.5]);
        let f = TestFunction::unit_hat();
        assert!(pair_correlation(&seq, &f).is_err());
    }
}

//! Gap and k-th-neighbor distance distributions of a torus sequence, and the
//! route from no-visit probabilities of the counting variable back to the
//! limiting gap law.

use crate::error::{Error, Result};
use crate::sequences::TorusSequence;
use crate::statistics::histogram::HistogramReport;

/// Scaled circular distances N·(ξ′_{n+k} − ξ′_n) from each point of the
/// sorted sequence to its k-th neighbor, wrapping past 1. There are exactly
/// N of them; for k=1 they are the N gaps and their unscaled sum is 1.
pub fn scaled_neighbor_gaps(seq: &TorusSequence, k: usize) -> Result<Vec<f64>> {
    let n = seq.n_count();
    if k == 0 {
        return Err(Error::InvalidParameter(
            "neighbor order k must be ≥ 1".into(),
        ));
    }
    if n < k + 1 {
        return Err(Error::SequenceTooShort(format!(
            "k-th neighbor distances need at least k+1 = {} points, got {n}",
            k + 1
        )));
    }
    let sorted = seq.sorted_points();
    let nf = n as f64;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let j = i + k;
        let (j, wrap) = if j < n { (j, 0.0) } else { (j - n, 1.0) };
        out.push(nf * (sorted[j] + wrap - sorted[i]));
    }
    Ok(out)
}

fn cdf_of_gaps(gaps: &mut Vec<f64>, a_grid: &[f64]) -> Result<HistogramReport> {
    gaps.sort_unstable_by(f64::total_cmp);
    let n = gaps.len() as f64;
    let values: Vec<f64> = a_grid
        .iter()
        .map(|&a| gaps.partition_point(|&g| g < a) as f64 / n)
        .collect();
    HistogramReport::cdf_on_grid(a_grid, &values)
}

/// λ_N sampled on a_grid: λ_N(a) is the fraction of gaps strictly shorter
/// than a/N. Includes the circular wrap gap, so exactly N gaps enter.
pub fn gap_distribution(seq: &TorusSequence, a_grid: &[f64]) -> Result<HistogramReport> {
    k_neighbor_distribution(seq, 1, a_grid)
}

/// CDF of scaled k-th-neighbor distances sampled on a_grid.
pub fn k_neighbor_distribution(
    seq: &TorusSequence,
    k: usize,
    a_grid: &[f64],
) -> Result<HistogramReport> {
    let mut gaps = scaled_neighbor_gaps(seq, k)?;
    cdf_of_gaps(&mut gaps, a_grid)
}

/// Estimate the gap law from no-visit probabilities: given samples of
/// A ↦ P(X_N(x, [0,A]) = 0) on an increasing grid, the law is
/// λ(A) ≈ 1 + dP/dA, taken by central differences at interior grid points.
/// Returns (A, λ estimate) pairs, two fewer than the input grid.
pub fn gap_law_from_counting(a_grid: &[f64], zero_probs: &[f64]) -> Result<Vec<(f64, f64)>> {
    if a_grid.len() < 3 {
        return Err(Error::InvalidParameter(
            "gap-law estimation needs at least 3 grid points".into(),
        ));
    }
    if a_grid.len() != zero_probs.len() {
        return Err(Error::InvalidParameter(format!(
            "grid has {} points but {} probabilities were supplied",
            a_grid.len(),
            zero_probs.len()
        )));
    }
    if a_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParameter(
            "the A-grid must be strictly increasing".into(),
        ));
    }
    Ok((1..a_grid.len() - 1)
        .map(|i| {
            let slope = (zero_probs[i + 1] - zero_probs[i - 1]) / (a_grid[i + 1] - a_grid[i - 1]);
            (a_grid[i], 1.0 + slope)
        })
        .collect())
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

    fn dyadic_lattice(n: usize) -> TorusSequence {
        seq_of((0..n).map(|k| k as f64 / n as f64).collect())
    }

    #[test]
    fn lattice_gaps_step_at_one() {
        let seq = dyadic_lattice(64);
        let grid = [0.5, 1.0, 1.0 + 1e-9, 2.0];
        let h = gap_distribution(&seq, &grid).unwrap();
        assert_eq!(h.masses, vec![0.0, 0.0, 1.0, 1.0]);
    }

    #[test]
    fn lattice_third_neighbor_steps_at_three() {
        let seq = dyadic_lattice(64);
        let grid = [2.9, 3.0, 3.0 + 1e-9, 4.0];
        let h = k_neighbor_distribution(&seq, 3, &grid).unwrap();
        assert_eq!(h.masses, vec![0.0, 0.0, 1.0, 1.0]);
    }

    #[test]
    fn k1_equals_gap_distribution_bitwise() {
        let seq = gen_iud(5000, 11).unwrap();
        let grid: Vec<f64> = (0..100).map(|i| i as f64 * 0.05).collect();
        let a = gap_distribution(&seq, &grid).unwrap();
        let b = k_neighbor_distribution(&seq, 1, &grid).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unscaled_gaps_sum_to_one() {
        let seq = gen_iud(10_000, 4).unwrap();
        let scaled = scaled_neighbor_gaps(&seq, 1).unwrap();
        let n = seq.n_count() as f64;
        // Kahan sum of the unscaled gaps
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for g in scaled {
            let y = g / n - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        assert!((sum - 1.0).abs() < 1e-12, "sum = {sum}");
    }

    #[test]
    fn repeated_points_give_zero_gaps() {
        let seq = seq_of(vec![0.3, 0.3, 0.7]);
        let gaps = scaled_neighbor_gaps(&seq, 1).unwrap();
        assert!(gaps.contains(&0.0));
    }

    #[test]
    fn iud_gaps_near_exponential_law() {
        let seq = gen_iud(100_000, 11).unwrap();
        let grid: Vec<f64> = (0..=100).map(|i| i as f64 * 0.05).collect();
        let h = gap_distribution(&seq, &grid).unwrap();
        let sup = h
            .masses
            .iter()
            .zip(&grid)
            .map(|(m, &a)| (m - (1.0 - (-a).exp())).abs())
            .fold(0.0, f64::max);
        assert!(sup <= 0.02, "sup distance {sup}");
    }

    #[test]
    fn gap_law_recovers_exponential() {
        let grid: Vec<f64> = (0..=500).map(|i| i as f64 * 0.01).collect();
        let probs: Vec<f64> = grid.iter().map(|&a| (-a).exp()).collect();
        let law = gap_law_from_counting(&grid, &probs).unwrap();
        for (a, lam) in law {
            let expect = 1.0 - (-a).exp();
            assert!((lam - expect).abs() < 1e-4, "a={a} lam={lam}");
        }
    }

    #[test]
    fn gap_law_constant_input() {
        let grid = [0.0, 0.5, 1.0, 1.5];
        let probs = [1.0, 1.0, 1.0, 1.0];
        let law = gap_law_from_counting(&grid, &probs).unwrap();
        assert!(law.iter().all(|&(_, l)| l == 1.0));
    }

    #[test]
    fn rejects_bad_inputs() {
        let seq = seq_of(vec![0.1, 0.2]);
        assert!(scaled_neighbor_gaps(&seq, 2).is_err());
        assert!(scaled_neighbor_gaps(&seq, 0).is_err());
        assert!(gap_law_from_counting(&[0.0, 1.0], &[1.0, 0.5]).is_err());
        assert!(gap_law_from_counting(&[0.0, 1.0, 0.5], &[1.0, 0.5, 0.2]).is_err());
    }
}

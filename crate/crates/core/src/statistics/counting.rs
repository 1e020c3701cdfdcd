//! Counting variables: the number of sequence points (with all their integer
//! translates) falling in a window of scaled length |I|/N around x, and the
//! smooth-weight analogue.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequences::TorusSequence;
use crate::statistics::intervals::IntervalSet;
use crate::statistics::testfn::TestFunction;

/// Sorted view of a sequence supporting O(log N) window counts. Build once,
/// query at many x.
#[derive(Debug, Clone)]
pub struct WindowCounter {
    sorted: Vec<f64>,
}

impl WindowCounter {
    pub fn new(seq: &TorusSequence) -> Result<Self> {
        if seq.n_count() == 0 {
            return Err(Error::EmptyInput(
                "counting statistics need at least one point".into(),
            ));
        }
        Ok(Self {
            sorted: seq.sorted_points(),
        })
    }

    pub fn n_count(&self) -> usize {
        self.sorted.len()
    }

    /// Number of points strictly below t.
    fn rank(&self, t: f64) -> usize {
        self.sorted.partition_point(|&p| p < t)
    }

    /// Number of points at or below t.
    fn rank_closed(&self, t: f64) -> usize {
        self.sorted.partition_point(|&p| p <= t)
    }

    /// Number of pairs (point p, integer m) with p + m in the half-open
    /// window [a, b). Handles windows of any width, including ≥ 1.
    pub fn count_translates_in(&self, a: f64, b: f64) -> u64 {
        let w = b - a;
        if w <= 0.0 {
            return 0;
        }
        let n = self.sorted.len() as u64;
        let full = w.floor();
        let mut total = full as u64 * n;
        let rem = w - full;
        if rem > 0.0 {
            let a0 = a.rem_euclid(1.0);
            let b0 = a0 + rem;
            if b0 <= 1.0 {
                total += (self.rank(b0) - self.rank(a0)) as u64;
            } else {
                total += (self.sorted.len() - self.rank(a0) + self.rank(b0 - 1.0)) as u64;
            }
        }
        total
    }

    /// X_N(x, I) = Σ_{n ≤ N, m ∈ Z} 1[N(ξ_n − x + m) ∈ I], components
    /// half-open on the right.
    pub fn count_stat_at(&self, x: f64, iv: &IntervalSet) -> u64 {
        let n = self.sorted.len() as f64;
        iv.components()
            .iter()
            .map(|&(lo, hi)| self.count_translates_in(x + lo / n, x + hi / n))
            .sum()
    }

    /// X_N(x, f) = Σ_{n ≤ N, m ∈ Z} f(N(ξ_n − x + m)).
    pub fn smooth_stat_at(&self, x: f64, f: &TestFunction) -> f64 {
        self.weighted_sum_at(x, f.support(), |t| f.eval(t))
    }

    /// Σ_{n ≤ N, m ∈ Z} w(N(ξ_n − x + m)) for an arbitrary weight supported
    /// in [support.0, support.1].
    pub fn weighted_sum_at<W: Fn(f64) -> f64>(
        &self,
        x: f64,
        support: (f64, f64),
        weight: W,
    ) -> f64 {
        let n = self.sorted.len() as f64;
        let a = x + support.0 / n;
        let b = x + support.1 / n;
        if !(a < b) {
            return 0.0;
        }
        let mut total = 0.0;
        let mut lo = a;
        loop {
            let hi = (lo.floor() + 1.0).min(b);
            let m = lo.floor();
            let i0 = self.rank(lo - m);
            let i1 = self.rank_closed((hi - m).min(1.0));
            for &p in &self.sorted[i0..i1] {
                total += weight(n * (p + m - x));
            }
            if hi >= b {
                break;
            }
            lo = hi;
        }
        total
    }
}

/// One-shot X_N(x, I); build a [`WindowCounter`] instead when querying many x.
pub fn count_stat(seq: &TorusSequence, x: f64, iv: &IntervalSet) -> Result<u64> {
    Ok(WindowCounter::new(seq)?.count_stat_at(x, iv))
}

/// One-shot X_N(x, f).
pub fn smooth_stat(seq: &TorusSequence, x: f64, f: &TestFunction) -> Result<f64> {
    Ok(WindowCounter::new(seq)?.smooth_stat_at(x, f))
}

/// Counting variable sampled on a uniform midpoint grid over the torus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountField {
    pub x_grid: Vec<f64>,
    pub counts: Vec<f64>,
    pub n_count: usize,
}

impl CountField {
    pub fn mean(&self) -> f64 {
        self.counts.iter().sum::<f64>() / self.counts.len() as f64
    }
}

fn midpoint_grid(size: usize) -> Result<Vec<f64>> {
    if size == 0 {
        return Err(Error::InvalidParameter("x grid must be nonempty".into()));
    }
    Ok((0..size).map(|i| (i as f64 + 0.5) / size as f64).collect())
}

/// Sample X_N(·, I) on a uniform midpoint grid of the given size.
pub fn count_field(
    seq: &TorusSequence,
    iv: &IntervalSet,
    x_grid_size: usize,
) -> Result<CountField> {
    let wc = WindowCounter::new(seq)?;
    let x_grid = midpoint_grid(x_grid_size)?;
    let counts: Vec<f64> = x_grid
        .par_iter()
        .map(|&x| wc.count_stat_at(x, iv) as f64)
        .collect();
    Ok(CountField {
        x_grid,
        counts,
        n_count: wc.n_count(),
    })
}

/// Sample X_N(·, f) on a uniform midpoint grid of the given size.
pub fn smooth_field(
    seq: &TorusSequence,
    f: &TestFunction,
    x_grid_size: usize,
) -> Result<CountField> {
    let wc = WindowCounter::new(seq)?;
    let x_grid = midpoint_grid(x_grid_size)?;
    let counts: Vec<f64> = x_grid
        .par_iter()
        .map(|&x| wc.smooth_stat_at(x, f))
        .collect();
    Ok(CountField {
        x_grid,
        counts,
        n_count: wc.n_count(),
    })
}

/// Per-interval empirical frequency and deviation from the interval length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformityRow {
    pub lo: f64,
    pub hi: f64,
    pub frequency: f64,
    pub deviation: f64,
}

/// Empirical visit frequency of each interval vs. its length.
pub fn uniformity_check(seq: &TorusSequence, iv: &IntervalSet) -> Result<Vec<UniformityRow>> {
    let wc = WindowCounter::new(seq)?;
    let n = wc.n_count() as f64;
    Ok(iv
        .components()
        .iter()
        .map(|&(lo, hi)| {
            let frequency = wc.count_translates_in(lo, hi) as f64 / n;
            UniformityRow {
                lo,
                hi,
                frequency,
                deviation: (frequency - (hi - lo)).abs(),
            }
        })
        .collect())
}

//! Binned summaries of empirical data, with optional reference-law overlays.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the `masses` of a [`HistogramReport`] are scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Mass per bin; sums to 1 unless samples fell outside the range.
    Probability,
    /// Mass per bin divided by bin width.
    Density,
    /// Cumulative values sampled at `bin_edges` (same length as the edges).
    Cdf,
}

/// Histogram or sampled-CDF report.
///
/// For `Probability`/`Density` there are `bin_edges.len() - 1` masses, one
/// per half-open bin [e_i, e_{i+1}); for `Cdf` the masses are values at the
/// edges themselves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramReport {
    pub bin_edges: Vec<f64>,
    pub masses: Vec<f64>,
    pub normalization: Normalization,
    /// Reference-law values, same shape as `masses`.
    pub overlay: Option<Vec<f64>>,
    /// True when some samples fell outside the binned range.
    pub out_of_range: bool,
}

fn check_increasing(edges: &[f64]) -> Result<()> {
    if edges.len() < 2 {
        return Err(Error::InvalidParameter(
            "need at least two bin edges".into(),
        ));
    }
    if edges.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParameter(
            "bin edges must be strictly increasing".into(),
        ));
    }
    Ok(())
}

impl HistogramReport {
    /// Bin `samples` into `bins` equal-width half-open bins on [lo, hi).
    pub fn from_samples(
        samples: &[f64],
        lo: f64,
        hi: f64,
        bins: usize,
        normalization: Normalization,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyInput("histogram needs samples".into()));
        }
        if bins == 0 || !(lo < hi) {
            return Err(Error::InvalidParameter(
                "histogram needs bins ≥ 1 and lo < hi".into(),
            ));
        }
        if normalization == Normalization::Cdf {
            return Err(Error::InvalidParameter(
                "CDF reports are built from sampled values, not binned samples".into(),
            ));
        }
        let width = (hi - lo) / bins as f64;
        let bin_edges: Vec<f64> = (0..=bins).map(|i| lo + i as f64 * width).collect();
        let mut counts = vec![0u64; bins];
        let mut outside = 0u64;
        for &s in samples {
            if s < lo || s >= hi {
                outside += 1;
                continue;
            }
            let mut idx = ((s - lo) / width) as usize;
            if idx >= bins {
                idx = bins - 1; // guards the roundoff edge at hi
            }
            counts[idx] += 1;
        }
        let total = samples.len() as f64;
        let masses = counts
            .iter()
            .map(|&c| match normalization {
                Normalization::Probability => c as f64 / total,
                Normalization::Density => c as f64 / (total * width),
                Normalization::Cdf => unreachable!(),
            })
            .collect();
        Ok(Self {
            bin_edges,
            masses,
            normalization,
            overlay: None,
            out_of_range: outside > 0,
        })
    }

    /// Wrap cumulative values sampled on an increasing grid.
    pub fn cdf_on_grid(grid: &[f64], values: &[f64]) -> Result<Self> {
        check_increasing(grid)?;
        if grid.len() != values.len() {
            return Err(Error::InvalidParameter(format!(
                "grid has {} points but {} values were supplied",
                grid.len(),
                values.len()
            )));
        }
        Ok(Self {
            bin_edges: grid.to_vec(),
            masses: values.to_vec(),
            normalization: Normalization::Cdf,
            overlay: None,
            out_of_range: false,
        })
    }

    /// Attach reference-law values of the same shape as `masses`.
    pub fn with_overlay(mut self, overlay: Vec<f64>) -> Result<Self> {
        if overlay.len() != self.masses.len() {
            return Err(Error::InvalidParameter(format!(
                "overlay has {} entries, masses have {}",
                overlay.len(),
                self.masses.len()
            )));
        }
        self.overlay = Some(overlay);
        Ok(self)
    }

    /// Largest |mass − overlay| across bins, if an overlay is attached.
    pub fn sup_distance_to_overlay(&self) -> Option<f64> {
        let overlay = self.overlay.as_ref()?;
        Some(
            self.masses
                .iter()
                .zip(overlay)
                .map(|(m, o)| (m - o).abs())
                .fold(0.0, f64::max),
        )
    }

    /// Total mass (only meaningful for probability normalization).
    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite union of bounded half-open intervals `[lo, hi)` on the real line.
///
/// Used as the window `I` of the counting variable: a point contributes when
/// the rescaled coordinate lands in the set. Components are canonicalized at
/// construction (sorted, overlapping/touching components merged), so
/// membership and measure treat the set as a set — a value covered by two
/// raw components is counted once.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalSet {
    components: Vec<(f64, f64)>,
}

impl IntervalSet {
    /// Build from raw components. Rejects empty lists, non-finite endpoints,
    /// and components with `lo >= hi`.
    pub fn new(raw: &[(f64, f64)]) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptyInput("interval set has no components".into()));
        }
        for &(lo, hi) in raw {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "interval endpoints must be finite, got ({lo}, {hi})"
                )));
            }
            if lo >= hi {
                return Err(Error::InvalidParameter(format!(
                    "interval must satisfy lo < hi, got ({lo}, {hi})"
                )));
            }
        }
        let mut sorted: Vec<(f64, f64)> = raw.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite endpoints"));
        let mut components: Vec<(f64, f64)> = Vec::with_capacity(sorted.len());
        for (lo, hi) in sorted {
            match components.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                _ => components.push((lo, hi)),
            }
        }
        Ok(Self { components })
    }

    /// Single interval `[lo, hi)`.
    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::new(&[(lo, hi)])
    }

    /// Canonical disjoint components, sorted.
    pub fn components(&self) -> &[(f64, f64)] {
        &self.components
    }

    /// Total Lebesgue measure.
    pub fn measure(&self) -> f64 {
        self.components.iter().map(|&(lo, hi)| hi - lo).sum()
    }

    /// Smallest and largest endpoint of the set.
    pub fn span(&self) -> (f64, f64) {
        (
            self.components[0].0,
            self.components[self.components.len() - 1].1,
        )
    }

    /// Membership with half-open components.
    pub fn contains(&self, t: f64) -> bool {
        // components are few in practice; linear scan keeps this branch-simple
        self.components.iter().any(|&(lo, hi)| lo <= t && t < hi)
    }

    /// Measure of the intersection with another set.
    pub fn intersection_measure(&self, other: &IntervalSet) -> f64 {
        let mut total = 0.0;
        for &(a, b) in &self.components {
            for &(c, d) in &other.components {
                let lo = a.max(c);
                let hi = b.min(d);
                if hi > lo {
                    total += hi - lo;
                }
            }
        }
        total
    }
}

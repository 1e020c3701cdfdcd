//! Empirical Diophantine-type estimation for scalars and plane vectors, and
//! detection of the rational-line obstruction for direction statistics.
//!
//! The type exponent κ of ω is defined through |kω + ℓ| ≥ C/|k|^κ. A finite
//! search can only estimate it, and the raw pointwise ratio
//! log(1/dist)/log|k| is badly biased at small k (any k with dist ≈ 1/k²
//! already scores ≈ 2 even for golden-ratio-like ω). The estimator used here
//! reads the exponent as a slope instead: among the running records of
//! dist(k·ξ, Z) (strict improvements while scanning ‖k‖ upward), take the
//! first record that beats the trivial bound (dist < ¼) and the deepest
//! record, and report
//!
//!   κ̂ = [log(1/d_deep) − log(1/d_first)] / [log ‖k_deep‖ − log ‖k_first‖].
//!
//! For quadratic irrationals the records follow dist ≈ C/k and the slope
//! settles near 1; for badly approximable pairs it settles near the true
//! exponent; Liouville-like numbers with huge partial quotients score large.
//! A single usable record falls back to the direct log ratio at that record.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distances below this are treated as exact rational relations at machine
/// precision.
pub const RATIONAL_CUTOFF: f64 = 1e-13;

/// A record is "informative" once it beats the distance ¼, which any k
/// achieves against SOME integer grid — below it the record says something
/// about ω rather than about pigeonholing.
const INFORMATIVE_DIST: f64 = 0.25;

/// Residual tolerance for rational-line witnesses.
pub const LINE_TOL: f64 = 1e-10;

/// Largest reliable continued-fraction depth in double precision.
pub const MAX_CF_DEPTH: usize = 60;

fn dist_to_int(x: f64) -> f64 {
    (x - x.round()).abs()
}

/// Continued-fraction expansion [a₀; a₁, a₂, …].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CfExpansion {
    pub quotients: Vec<i64>,
    /// True when the remainder dropped below 10⁻¹² before the requested
    /// depth — the input is rational to machine precision.
    pub terminated_early: bool,
}

/// Standard continued-fraction algorithm, stopping early when the remainder
/// falls below 10⁻¹².
pub fn continued_fraction(omega: f64, depth: usize) -> Result<CfExpansion> {
    if !omega.is_finite() {
        return Err(Error::InvalidParameter("omega must be finite".into()));
    }
    if depth == 0 || depth > MAX_CF_DEPTH {
        return Err(Error::InvalidParameter(format!(
            "depth must be in 1..={MAX_CF_DEPTH}, got {depth}"
        )));
    }
    let mut quotients = Vec::with_capacity(depth);
    let a0 = omega.floor();
    quotients.push(a0 as i64);
    let mut x = omega - a0;
    let mut terminated_early = false;
    for _ in 1..depth {
        if x < 1e-12 {
            terminated_early = true;
            break;
        }
        x = 1.0 / x;
        let a = x.floor();
        quotients.push(a as i64);
        x -= a;
    }
    if !terminated_early && x < 1e-12 {
        terminated_early = true;
    }
    Ok(CfExpansion {
        quotients,
        terminated_early,
    })
}

/// The integer data achieving the reported minimum distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Scalar { k: i64, ell: i64 },
    Vector { k: [i64; 2], ell: i64 },
}

/// Outcome of a finite Diophantine-type search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiophantineReport {
    /// Record-slope estimate of the type exponent.
    pub kappa_estimate: f64,
    /// Deepest record: the k (and nearest integer ℓ) achieving the smallest
    /// distance seen, with that distance.
    pub worst_witness: Witness,
    pub min_distance: f64,
    /// The ‖k‖ ceiling that was searched.
    pub search_bound: u64,
}

#[derive(Debug, Clone, Copy)]
struct Record {
    norm: u64,
    dist: f64,
    witness: Witness,
}

fn kappa_from_records(records: &[Record]) -> (f64, Record) {
    let last = *records.last().expect("scan always yields a first record");
    let first = records
        .iter()
        .copied()
        .find(|r| r.dist < INFORMATIVE_DIST)
        .unwrap_or(last);
    let kappa = if first.norm == last.norm {
        (1.0 / last.dist).ln() / (last.norm as f64).ln()
    } else {
        ((1.0 / last.dist).ln() - (1.0 / first.dist).ln())
            / ((last.norm as f64).ln() - (first.norm as f64).ln())
    };
    (kappa, last)
}

/// Record chain of dist(kω, Z) for 2 ≤ k ≤ k_max, in scan order.
fn scalar_records(omega: f64, k_max: u64) -> Result<Vec<Record>> {
    let mut records = Vec::new();
    let mut best = f64::INFINITY;
    for k in 2..=k_max {
        let v = k as f64 * omega;
        let d = dist_to_int(v);
        if d < RATIONAL_CUTOFF {
            return Err(Error::RationalInput(format!(
                "k = {k} brings kω within {d:e} of an integer; the type exponent is undefined"
            )));
        }
        if d < best {
            best = d;
            records.push(Record {
                norm: k,
                dist: d,
                witness: Witness::Scalar {
                    k: k as i64,
                    ell: -(v.round() as i64),
                },
            });
        }
    }
    Ok(records)
}

/// Estimate the Diophantine type of a scalar by scanning 2 ≤ k ≤ k_max.
/// Rejects rationals (detected by continued-fraction termination).
pub fn scalar_type_estimate(omega: f64, k_max: u64) -> Result<DiophantineReport> {
    if k_max < 2 {
        return Err(Error::InvalidParameter("k_max must be at least 2".into()));
    }
    let cf = continued_fraction(omega, MAX_CF_DEPTH)?;
    if cf.terminated_early {
        return Err(Error::RationalInput(format!(
            "omega = {omega} is rational to machine precision (continued fraction terminates)"
        )));
    }
    let records = scalar_records(omega, k_max)?;
    let (kappa_estimate, deep) = kappa_from_records(&records);
    Ok(DiophantineReport {
        kappa_estimate,
        worst_witness: deep.witness,
        min_distance: deep.dist,
        search_bound: k_max,
    })
}

/// Visit the half-plane representatives (k₁, k₂) ≠ 0 with |k₁| + |k₂| = norm
/// in lexicographic order. Only one of ±k is visited since both give the
/// same distance.
fn for_each_rep(norm: i64, mut f: impl FnMut(i64, i64) -> Result<()>) -> Result<()> {
    f(0, norm)?;
    for k1 in 1..=norm {
        let k2 = norm - k1;
        if k2 > 0 {
            f(k1, -k2)?;
            f(k1, k2)?;
        } else {
            f(k1, 0)?;
        }
    }
    Ok(())
}

/// Record chain of dist(k·ξ, Z) over 2 ≤ |k₁|+|k₂| ≤ k_max (norm-1 vectors
/// are still checked for exact relations but cannot anchor the slope).
fn vector_records(xi: [f64; 2], k_max: u64) -> Result<Vec<Record>> {
    let mut records = Vec::new();
    let mut best = f64::INFINITY;
    for norm in 1..=k_max as i64 {
        for_each_rep(norm, |k1, k2| {
            let v = k1 as f64 * xi[0] + k2 as f64 * xi[1];
            let d = dist_to_int(v);
            if d < RATIONAL_CUTOFF {
                return Err(Error::RationalInput(format!(
                    "k = ({k1}, {k2}) brings k·ξ within {d:e} of an integer; \
                     the vector is rationally dependent at machine precision"
                )));
            }
            if norm >= 2 && d < best {
                best = d;
                records.push(Record {
                    norm: norm as u64,
                    dist: d,
                    witness: Witness::Vector {
                        k: [k1, k2],
                        ell: -(v.round() as i64),
                    },
                });
            }
            Ok(())
        })?;
    }
    Ok(records)
}

/// Estimate the Diophantine type of a plane vector by scanning
/// 2 ≤ |k₁|+|k₂| ≤ k_max.
pub fn vector_type_estimate(xi: [f64; 2], k_max: u64) -> Result<DiophantineReport> {
    if k_max < 2 {
        return Err(Error::InvalidParameter("k_max must be at least 2".into()));
    }
    let records = vector_records(xi, k_max)?;
    let (kappa_estimate, deep) = kappa_from_records(&records);
    Ok(DiophantineReport {
        kappa_estimate,
        worst_witness: deep.witness,
        min_distance: deep.dist,
        search_bound: k_max,
    })
}

/// A rational line k·x = −m passing through ξ (within [`LINE_TOL`]).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RationalLineWitness {
    pub k: [i64; 2],
    pub m: i64,
    /// |k·ξ + m| actually achieved.
    pub residual: f64,
    /// Whether the line contains integer points (k₁x + k₂y = −m is solvable
    /// over Z exactly when gcd(k₁,k₂) divides m).
    pub meets_integer_lattice: bool,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Search for an integer vector k, |k₁|+|k₂| ≤ 2·bound with |kᵢ| ≤ bound,
/// and integer m, |m| ≤ bound, with k·ξ + m ≈ 0; the first witness in
/// norm-then-lexicographic order is returned, or None up to the bound.
pub fn rational_line_check(xi: [f64; 2], bound: u64) -> Result<Option<RationalLineWitness>> {
    if bound == 0 {
        return Err(Error::InvalidParameter("bound must be at least 1".into()));
    }
    let b = bound as i64;
    let mut found: Option<RationalLineWitness> = None;
    for norm in 1..=2 * b {
        for_each_rep(norm, |k1, k2| {
            if found.is_some() || k1.abs() > b || k2.abs() > b {
                return Ok(());
            }
            let v = k1 as f64 * xi[0] + k2 as f64 * xi[1];
            let m = -v.round();
            let residual = (v + m).abs();
            if residual <= LINE_TOL && m.abs() <= b as f64 {
                let m = m as i64;
                found = Some(RationalLineWitness {
                    k: [k1, k2],
                    m,
                    residual,
                    meets_integer_lattice: gcd(k1, k2) != 0 && m % gcd(k1, k2) == 0,
                });
            }
            Ok(())
        })?;
        if found.is_some() {
            break;
        }
    }
    Ok(found)
}

//! Mixed moments ∫ Π_j X_N(x, I_j)^{s_j} dx of the counting variables, their
//! capped (restricted) versions, and the empirical distribution of the count
//! vector — each by midpoint quadrature and by an exact sweep.
//!
//! The exact path uses the fact that x ↦ X_N(x, I) is piecewise constant:
//! each (point, component) pair switches the count on at x = ξ − hi/N and
//! off at x = ξ − lo/N (mod 1), so a single sorted sweep over these events
//! integrates any function of the counts in closed form. This is what makes
//! moments reliable: the count spikes live on x-sets of width 1/N, which a
//! fixed quadrature grid can miss entirely.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sequences::TorusSequence;
use crate::statistics::counting::WindowCounter;
use crate::statistics::intervals::IntervalSet;

/// Joint distribution of the count vector: probability (or exact measure)
/// per observed count tuple.
pub type CountDistribution = BTreeMap<Vec<u64>, f64>;

const QUAD_CHUNK: usize = 4096;

fn validate_boxes(boxes: &[IntervalSet], s: &[f64]) -> Result<()> {
    if boxes.is_empty() {
        return Err(Error::EmptyInput("moments need at least one box".into()));
    }
    if boxes.len() != s.len() {
        return Err(Error::InvalidParameter(format!(
            "{} boxes but {} exponents",
            boxes.len(),
            s.len()
        )));
    }
    for &e in s {
        if !(e >= 0.0) || !e.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "exponents must be finite and nonnegative, got {e}"
            )));
        }
    }
    Ok(())
}

/// c^s with the 0⁰ = 1 convention.
fn pow_count(c: u64, s: f64) -> f64 {
    if s == 0.0 {
        1.0
    } else if s == 1.0 {
        c as f64
    } else {
        (c as f64).powf(s)
    }
}

/// Switch-on/off positions of one box's count function on the torus.
struct EventSet {
    base: u64,
    ups: Vec<f64>,
    downs: Vec<f64>,
}

fn build_events(points: &[f64], iv: &IntervalSet) -> EventSet {
    let n = points.len() as f64;
    let mut base = 0u64;
    let mut ups = Vec::with_capacity(points.len() * iv.components().len());
    let mut downs = Vec::with_capacity(points.len() * iv.components().len());
    for &p in points {
        for &(lo, hi) in iv.components() {
            let w = (hi - lo) / n;
            let full = w.floor();
            base += full as u64;
            let rem = w - full;
            if rem <= 0.0 {
                continue;
            }
            // active exactly for x in the arc (p − hi/N, p − lo/N] mod 1
            let a = (p - hi / n).rem_euclid(1.0);
            let b = (p - lo / n).rem_euclid(1.0);
            if a < b {
                ups.push(a);
                downs.push(b);
            } else if a > b {
                // arc wraps through 0: active at the sweep start
                base += 1;
                downs.push(b);
                ups.push(a);
            } else if rem > 0.5 {
                // positions collide by rounding; arc is a full turn
                base += 1;
            }
        }
    }
    EventSet { base, ups, downs }
}

/// Sweep x across [0,1), emitting (count vector, segment length) for every
/// maximal segment on which all counts are constant.
fn sweep<F: FnMut(&[u64], f64)>(events: &mut [EventSet], mut emit: F) {
    for e in events.iter_mut() {
        e.ups.sort_unstable_by(f64::total_cmp);
        e.downs.sort_unstable_by(f64::total_cmp);
    }
    let b = events.len();
    let mut counts: Vec<u64> = events.iter().map(|e| e.base).collect();
    let mut iu = vec![0usize; b];
    let mut id = vec![0usize; b];
    let mut prev = 0.0f64;
    loop {
        let mut pos = f64::INFINITY;
        for j in 0..b {
            if let Some(&u) = events[j].ups.get(iu[j]) {
                pos = pos.min(u);
            }
            if let Some(&d) = events[j].downs.get(id[j]) {
                pos = pos.min(d);
            }
        }
        if !pos.is_finite() || pos >= 1.0 {
            break;
        }
        if pos > prev {
            emit(&counts, pos - prev);
        }
        for j in 0..b {
            while events[j].ups.get(iu[j]) == Some(&pos) {
                counts[j] += 1;
                iu[j] += 1;
            }
            while events[j].downs.get(id[j]) == Some(&pos) {
                counts[j] -= 1;
                id[j] += 1;
            }
        }
        prev = pos;
    }
    if prev < 1.0 {
        emit(&counts, 1.0 - prev);
    }
}

fn sweep_over(
    seq: &TorusSequence,
    boxes: &[IntervalSet],
    emit: impl FnMut(&[u64], f64),
) -> Result<()> {
    if seq.n_count() == 0 {
        return Err(Error::EmptyInput("moments need a nonempty sequence".into()));
    }
    let mut events: Vec<EventSet> = boxes
        .iter()
        .map(|iv| build_events(seq.points(), iv))
        .collect();
    sweep(&mut events, emit);
    Ok(())
}

/// Exact ∫₀¹ Π_j X_N(x, I_j)^{s_j} dx by the event sweep.
pub fn moments_exact(seq: &TorusSequence, boxes: &[IntervalSet], s: &[f64]) -> Result<f64> {
    restricted_moments_exact(seq, boxes, s, u64::MAX)
}

/// Exact restricted moment: the integrand is zeroed wherever any count
/// exceeds `cap`.
pub fn restricted_moments_exact(
    seq: &TorusSequence,
    boxes: &[IntervalSet],
    s: &[f64],
    cap: u64,
) -> Result<f64> {
    validate_boxes(boxes, s)?;
    let mut sum = 0.0f64;
    let mut comp = 0.0f64; // Kahan compensation
    sweep_over(seq, boxes, |counts, len| {
        if counts.iter().any(|&c| c > cap) {
            return;
        }
        let mut v = len;
        for (j, &c) in counts.iter().enumerate() {
            v *= pow_count(c, s[j]);
        }
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    })?;
    Ok(sum)
}

/// Midpoint-quadrature mixed moment over a uniform x-grid.
pub fn moments(
    seq: &TorusSequence,
    boxes: &[IntervalSet],
    s: &[f64],
    x_grid_size: usize,
) -> Result<f64> {
    restricted_moments(seq, boxes, s, u64::MAX, x_grid_size)
}

/// Midpoint-quadrature restricted moment.
pub fn restricted_moments(
    seq: &TorusSequence,
    boxes: &[IntervalSet],
    s: &[f64],
    cap: u64,
    x_grid_size: usize,
) -> Result<f64> {
    validate_boxes(boxes, s)?;
    if x_grid_size == 0 {
        return Err(Error::InvalidParameter("x grid must be nonempty".into()));
    }
    let wc = WindowCounter::new(seq)?;
    let g = x_grid_size as f64;
    // fixed-size chunks summed in index order keep the result independent of
    // the worker count
    let partials: Vec<f64> = (0..x_grid_size)
        .collect::<Vec<_>>()
        .par_chunks(QUAD_CHUNK)
        .map(|chunk| {
            let mut acc = 0.0;
            'outer: for &i in chunk {
                let x = (i as f64 + 0.5) / g;
                let mut v = 1.0;
                for (iv, &e) in boxes.iter().zip(s) {
                    let c = wc.count_stat_at(x, iv);
                    if c > cap {
                        continue 'outer;
                    }
                    v *= pow_count(c, e);
                }
                acc += v;
            }
            acc
        })
        .collect();
    Ok(partials.iter().sum::<f64>() / g)
}

/// Empirical joint distribution of (X_N(x, I₁), …, X_N(x, I_m)) over a
/// uniform midpoint x-grid of at least 10³ points.
pub fn empirical_counting_distribution(
    seq: &TorusSequence,
    boxes: &[IntervalSet],
    x_grid_size: usize,
) -> Result<CountDistribution> {
    if boxes.is_empty() {
        return Err(Error::EmptyInput("need at least one box".into()));
    }
    if x_grid_size < 1000 {
        return Err(Error::InvalidParameter(format!(
            "count distributions need an x grid of at least 1000 points, got {x_grid_size}"
        )));
    }
    let wc = WindowCounter::new(seq)?;
    let g = x_grid_size as f64;
    let partials: Vec<BTreeMap<Vec<u64>, u64>> = (0..x_grid_size)
        .collect::<Vec<_>>()
        .par_chunks(QUAD_CHUNK)
        .map(|chunk| {
            let mut table: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
            for &i in chunk {
                let x = (i as f64 + 0.5) / g;
                let key: Vec<u64> = boxes.iter().map(|iv| wc.count_stat_at(x, iv)).collect();
                *table.entry(key).or_insert(0) += 1;
            }
            table
        })
        .collect();
    let mut merged: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    for t in partials {
        for (k, v) in t {
            *merged.entry(k).or_insert(0) += v;
        }
    }
    Ok(merged.into_iter().map(|(k, v)| (k, v as f64 / g)).collect())
}

/// Exact Lebesgue measure of {x : count vector = r} for every observed r.
pub fn counting_distribution_exact(
    seq: &TorusSequence,
    boxes: &[IntervalSet],
) -> Result<CountDistribution> {
    if boxes.is_empty() {
        return Err(Error::EmptyInput("need at least one box".into()));
    }
    let mut table: CountDistribution = BTreeMap::new();
    sweep_over(seq, boxes, |counts, len| {
        *table.entry(counts.to_vec()).or_insert(0.0) += len;
    })?;
    Ok(table)
}

/// Exact measure of {x : X_N(x, I) = 0} — the no-visit probability that the
/// gap law is read off from.
pub fn zero_count_probability(seq: &TorusSequence, iv: &IntervalSet) -> Result<f64> {
    let mut mass = 0.0;
    sweep_over(seq, std::slice::from_ref(iv), |counts, len| {
        if counts[0] == 0 {
            mass += len;
        }
    })?;
    Ok(mass)
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

    #[test]
    fn first_moment_is_exact() {
        let seq = gen_iud(200, 4).unwrap();
        for iv in [
            IntervalSet::interval(0.0, 1.0).unwrap(),
            IntervalSet::interval(-0.3, 2.2).unwrap(),
            IntervalSet::new(&[(-1.0, -0.25), (0.5, 1.75)]).unwrap(),
        ] {
            let m = moments_exact(&seq, &[iv.clone()], &[1.0]).unwrap();
            assert!(
                (m - iv.measure()).abs() < 1e-10,
                "measure {} got {m}",
                iv.measure()
            );
        }
    }

    #[test]
    fn lattice_points_half_window() {
        let n = 10usize;
        let seq = seq_of((0..n).map(|k| k as f64 / n as f64).collect());
        let iv = IntervalSet::interval(0.0, 0.5).unwrap();
        let dist = counting_distribution_exact(&seq, &[iv]).unwrap();
        assert!((dist[&vec![0u64]] - 0.5).abs() < 1e-12);
        assert!((dist[&vec![1u64]] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn empirical_grid_matches_exact_on_lattice() {
        let n = 8usize;
        let seq = seq_of((0..n).map(|k| k as f64 / n as f64).collect());
        let iv = IntervalSet::interval(0.0, 0.5).unwrap();
        let dist = empirical_counting_distribution(&seq, &[iv], 10_000).unwrap();
        assert!((dist[&vec![0u64]] - 0.5).abs() < 1e-3);
        assert!((dist[&vec![1u64]] - 0.5).abs() < 1e-3);
    }

    #[test]
    fn quadrature_close_to_exact() {
        let seq = gen_iud(500, 12).unwrap();
        let iv = IntervalSet::interval(0.0, 1.0).unwrap();
        let exact = moments_exact(&seq, &[iv.clone()], &[2.0]).unwrap();
        let quad = moments(&seq, &[iv], &[2.0], 200_000).unwrap();
        assert!((exact - quad).abs() < 0.02, "exact {exact} quad {quad}");
    }

    #[test]
    fn restricted_cap_inactive_when_large() {
        let seq = gen_iud(300, 6).unwrap();
        let iv = IntervalSet::interval(0.0, 2.0).unwrap();
        let full = moments_exact(&seq, &[iv.clone()], &[2.0]).unwrap();
        let capped = restricted_moments_exact(&seq, &[iv], &[2.0], 300).unwrap();
        assert_eq!(full, capped);
    }

    #[test]
    fn restricted_cap_zero_kills_positive_exponents() {
        let seq = gen_iud(300, 6).unwrap();
        let iv = IntervalSet::interval(0.0, 2.0).unwrap();
        let v = restricted_moments_exact(&seq, &[iv], &[2.0], 0).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn zero_exponent_gives_total_measure() {
        // 0^0 = 1 everywhere, so the integral is 1.
        let seq = gen_iud(100, 3).unwrap();
        let iv = IntervalSet::interval(0.0, 0.5).unwrap();
        let v = moments_exact(&seq, &[iv], &[0.0]).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mixed_moment_two_boxes() {
        // On the lattice {k/4} with windows [0, 0.5]/N and its shift by 0.5,
        // exactly one of the two counts is 1 at a.e. x, and products vanish.
        let seq = seq_of(vec![0.0, 0.25, 0.5, 0.75]);
        let i1 = IntervalSet::interval(0.0, 0.5).unwrap();
        let i2 = IntervalSet::interval(0.5, 1.0).unwrap();
        let prod = moments_exact(&seq, &[i1.clone(), i2.clone()], &[1.0, 1.0]).unwrap();
        let m1 = moments_exact(&seq, &[i1], &[1.0]).unwrap();
        let m2 = moments_exact(&seq, &[i2], &[1.0]).unwrap();
        assert!((m1 - 0.5).abs() < 1e-12);
        assert!((m2 - 0.5).abs() < 1e-12);
        assert!(prod.abs() < 1e-12, "windows are disjoint, product is 0");
    }

    #[test]
    fn zero_probability_plus_coverage() {
        let seq = gen_iud(1000, 9).unwrap();
        let iv = IntervalSet::interval(0.0, 1.0).unwrap();
        let p0 = zero_count_probability(&seq, &iv).unwrap();
        // for |I| = 1 the Poisson heuristic gives e^{-1} ≈ 0.368
        assert!(p0 > 0.25 && p0 < 0.5, "p0 = {p0}");
    }

    #[test]
    fn wide_window_base_counts() {
        // |I|/N = 1.25: count is 1 plus an arc of length 0.25 per point.
        let seq = seq_of(vec![0.2, 0.6]);
        let iv = IntervalSet::interval(0.0, 2.5).unwrap();
        let m = moments_exact(&seq, &[iv.clone()], &[1.0]).unwrap();
        assert!((m - iv.measure()).abs() < 1e-12);
        let dist = counting_distribution_exact(&seq, &[iv]).unwrap();
        // counts are 2 + (0, 1 or 2) depending on arc overlap
        let total: f64 = dist.values().sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(dist.keys().all(|k| k[0] >= 2));
    }
}

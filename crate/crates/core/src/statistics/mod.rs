//! Local statistics of torus sequences: counting variables, pair
//! correlation, gap and k-neighbor distributions, mixed moments, and the
//! empirical distribution of counts.

mod counting;
mod gaps;
mod histogram;
mod intervals;
mod moments;
mod pair;
mod testfn;

pub use counting::{
    count_field, count_stat, smooth_field, smooth_stat, uniformity_check, CountField,
    UniformityRow, WindowCounter,
};
pub use gaps::{
    gap_distribution, gap_law_from_counting, k_neighbor_distribution, scaled_neighbor_gaps,
};
pub use histogram::{HistogramReport, Normalization};
pub use intervals::IntervalSet;
pub use moments::{
    counting_distribution_exact, empirical_counting_distribution, moments, moments_exact,
    restricted_moments, restricted_moments_exact, zero_count_probability, CountDistribution,
};
pub use pair::{
    lemma1_check, lemma1_check_exact, pair_correlation, pair_correlation_histogram,
    pair_correlation_naive,
};
pub use testfn::{conv_prime_eval, conv_prime_support, TestFunction, INDICATOR_SHOULDER};

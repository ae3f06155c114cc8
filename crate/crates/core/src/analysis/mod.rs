//! Corpus-level statistics, class aggregation and ranking, rank agreement and
//! outlier isolation.

mod classes;
mod kendall;
mod outliers;
mod stats;

pub use classes::{aggregate_by_class, rank_classes, ClassScore, MemberScore, RankTable, RankedClass};
pub use kendall::{kendall_tau, tau_b};
pub use outliers::{detect_outliers, Outlier, OutlierReport, OutlierRule};
pub use stats::{descriptive_stats, quantile_sorted, Stats};

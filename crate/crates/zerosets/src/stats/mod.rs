//! Estimators and hypothesis tests that confront simulation output with the
//! quantitative laws the constructions are expected to satisfy.

pub mod experiments;
pub mod htest;
pub mod report;
pub mod special;

pub use experiments::*;
pub use htest::{chi_square_independence, ks_two_sample, quantile_edges};
pub use report::{
    binomial_stderr, mean_stderr, EstimatorReport, LadderPoint, LadderReport, TestReport,
};

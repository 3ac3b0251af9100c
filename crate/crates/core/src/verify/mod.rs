//! Convergence in law: characteristic functionals, goodness of fit, and the
//! λ-ladder study.

mod bank;
mod cf;
mod gof;
mod study;

pub use bank::{bump, bump_derivative, TestFunction, TestFunctionBank, DERIVATIVE_BANK_AMPLITUDE};
pub use cf::{
    analytic_cf, cf_from_pairings, empirical_cf, pairing, psd_min_eigenvalue, weighted, AnalyticCf, CfEstimate,
    MIN_ENSEMBLE, TAIL_TOLERANCE,
};
pub use gof::{
    compound_sum_draws, gof, kolmogorov_tail, ks_pvalue, ks_test, ks_two_sample, marginal_gof, marginal_values,
    poisson_count_gof, variance_with_se, KsResult, TargetLaw,
};
pub use study::{
    convergence_study, self_consistency, CFReport, CfRow, RungSummary, BIAS_THRESHOLD_SE, MONOTONE_SLACK_SE,
};

//! Optimal distortionary taxation in a one-period economy where the
//! government converts revenue into a public good only with probability
//! `theta`, and diverts it otherwise.
//!
//! The pipeline runs bottom-up:
//!
//! * [`economy`]: preferences, technology, trust.
//! * [`equilibrium`]: the private allocation induced by a tax rate.
//! * [`statistics`]: expected welfare and the sufficient statistics
//!   (marginal revenue, marginal excess burden, trust-adjusted marginal
//!   value of public funds).
//! * [`planner`]: the trust threshold, the optimal tax and a brute-force
//!   oracle.
//! * [`isoelastic`]: closed forms for the log/linear specialization.
//! * [`cli`]: configuration files, reports and schedules.
//!
//! Batch work (welfare scans, oracle grids, trust sweeps) runs on rayon when
//! the default `parallel` feature is enabled and sequentially otherwise;
//! results are identical either way.

// `!(x > 0.0)` style guards are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod economy;
pub mod equilibrium;
pub mod error;
pub mod isoelastic;
pub mod numerics;
pub mod par;
pub mod planner;
pub mod statistics;

pub use economy::{
    build_economy, eval_production, eval_utility, Economy, EconomyParams, ProductionSpec, TaxMode, UtilitySpec,
};
pub use equilibrium::{revenue_curve, solve_household, Equilibrium};
pub use error::{Error, Result};
pub use isoelastic::{iso_crosscheck, iso_solution, iso_threshold, IsoClosedForm};
pub use planner::{
    brute_force_oracle, regime_boundary_scan, solve_optimal_tax, trust_threshold, PlannerSolution, Regime,
    ThresholdResult,
};
pub use statistics::{check_decomposition, expected_welfare, sufficient_stats, SufficientStats};

//! Statistical and rate experiments built on the engine.

pub mod lojasiewicz;
pub mod montecarlo;
pub mod rates;

pub use lojasiewicz::{check_lojasiewicz, LojasiewiczCertificate};
pub use montecarlo::{
    assign_basin, monte_carlo, monte_carlo_with, trial_rng, write_trials_csv, BasinInfo, BasinLabel,
    MonteCarloOptions, MonteCarloReport, TrialSummary, BASIN_TOL,
};
pub use rates::{
    fit_linear_rate, fit_linear_rate_window, fit_power_rate, fit_power_rate_window, path_length_check,
    select_rate_model, tail_path_lengths, PathLengthReport, RateFit, RateRegime,
};

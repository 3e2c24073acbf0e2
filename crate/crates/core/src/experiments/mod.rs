//! Experiment drivers: the global/blowup classifier and its confirmation
//! runs, Lemma 7 fixed points, scattering probes and parameter sweeps.

mod classify;
mod dichotomy;
mod scattering;
mod sweep;

pub use classify::{
    classify, classify_values, lemma7_roots, verdict, Classification, Lemma7Roots, Thresholds, Verdict,
    INDETERMINATE_BAND,
};
pub use dichotomy::{confirm_dichotomy, lemma8_horizon, DichotomyConfig, DichotomyReport, DichotomyStatus};
pub use scattering::{scattering_probe, ScatteringConfig, ScatteringReport, ScatteringWindow, RADIAL_TOLERANCE};
pub use sweep::{
    initial_data, sweep, write_sweep_csv, Profile, SweepCell, SweepRow, SweepSpec, SWEEP_HEADER,
};

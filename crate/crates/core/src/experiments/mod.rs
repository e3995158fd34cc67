//! Sweeps, fits and rasters that turn the model into tables.

pub mod convergence;
pub mod fit;
pub mod phase;
pub mod saturation;
pub mod sweep;

pub use convergence::{bulk_convergence, CURVE_SAMPLES};
pub use fit::{fit_linear_regime, fit_linear_regime_with, FitResult, FitWindow};
pub use phase::{phase_grid, Axis, MaskReason, PhaseGrid, PhaseQuantity, PhaseSpec};
pub use saturation::{detect_saturation, NumericSaturation, SaturationCriterion, DEFAULT_IM_TOL};
pub use sweep::{nsweep, nsweep_sizes, parse_n_range, prediction_law, unidirectional_sweeps, SweepResult};

//! Closed-form predictions: linear law, saturation point, bulk curves.

pub mod bulk;
pub mod lambert;
pub mod linear;
pub mod saturation;

pub use bulk::{bulk_curves, BulkCurve, CurveKind};
pub use lambert::lambert_w0;
pub use linear::{linear_law, topology_signs, unidirectional_law, zero_limit_condition, LinearLaw};
pub use saturation::{
    saturation_prediction, taylor_ln_beta2, SaturationBranch, SaturationCoefficients, SaturationPrediction,
};

//! Straight-line law for `ln|E_min|` against `N` below saturation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::beta::theta_of;
use crate::model::topology::{classify_topology, zero_energy_moduli};
use crate::model::{ChainParams, Side, TopologySigns};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearLaw {
    pub slope: f64,
    /// Value of `ln|E_min|` extrapolated to `N = 0`.
    pub intercept: f64,
    pub s_t: i32,
    pub s_g: i32,
    pub lambda_used: f64,
    pub side: Side,
}

impl LinearLaw {
    pub fn predict_ln_abs(&self, n: usize) -> f64 {
        self.slope * n as f64 + self.intercept
    }
}

/// Discrete signs entering the law; errors on the LG/PG boundaries and on
/// the lines where `s_t` vanishes.
pub fn topology_signs(params: &ChainParams) -> Result<TopologySigns> {
    classify_topology(params)
}

fn law_with(params: &ChainParams, s_t: i32, s_g: i32, side: Side) -> Result<LinearLaw> {
    let (t1, t2, g) = (params.t1, params.t2, params.gamma);
    let lambda = params.lambda(side);
    if lambda == 0.0 {
        return Err(Error::Precondition(format!(
            "the selected terminal coupling lambda_{side:?} is zero"
        )));
    }
    let d = t1 * t1 - g * g - t2 * t2;
    if d == 0.0 {
        return Err(Error::DivergentIntercept);
    }
    let (st, sg) = (s_t as f64, s_g as f64);
    let slope = st * (t2 / (t1 + st * sg * g)).abs().ln();
    let intercept = lambda.abs().ln() + (d / (t2 * (t1 - sg * g))).abs().ln();
    Ok(LinearLaw {
        slope,
        intercept,
        s_t,
        s_g,
        lambda_used: lambda,
        side,
    })
}

/// Bidirectional law: the terminal coupling on the side selected by `s_g`
/// governs.
pub fn linear_law(params: &ChainParams) -> Result<LinearLaw> {
    let signs = topology_signs(params)?;
    law_with(params, signs.s_t, signs.s_g, signs.lambda_selected)
}

/// Law when only one terminal coupling survives; the effective `s_g` is
/// fixed by which side remains.
pub fn unidirectional_law(params: &ChainParams, zeroed_side: Side) -> Result<LinearLaw> {
    if params.lambda_l != 0.0 && params.lambda_r != 0.0 {
        return Err(Error::Precondition(
            "unidirectional law needs exactly one nonzero terminal coupling".into(),
        ));
    }
    if params.lambda(zeroed_side) != 0.0 {
        return Err(Error::Precondition(format!(
            "lambda_{zeroed_side:?} is nonzero but declared zeroed"
        )));
    }
    let signs = topology_signs(params)?;
    let s_g = match zeroed_side {
        Side::R => -1,
        Side::L => 1,
    };
    law_with(params, signs.s_t, s_g, zeroed_side.other())
}

/// Whether `|E_min| → 0` as `N → ∞`: exactly one of the zero-energy factors
/// lies inside the unit circle.
pub fn zero_limit_condition(params: &ChainParams) -> Result<bool> {
    let (rb, ra) = zero_energy_moduli(params)?;
    if ra == 1.0 || rb == 1.0 {
        return Err(Error::BoundaryDegenerate(
            "a zero-energy non-Bloch factor has unit modulus".into(),
        ));
    }
    Ok((ra < 1.0) != (rb < 1.0))
}

/// The per-cell growth factor and the `N`-independent amplitude of the law,
/// each computed two ways: from `θ` at `E = 0`, and in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroEnergyFactors {
    /// `exp(s_g g − iθ⁰)`.
    pub growth_from_theta: Complex64,
    /// `(−t2 / (t1 + s_t s_g γ))^{s_t}`.
    pub growth_closed: f64,
    /// `exp(−s_g g) · 2i sin θ⁰`.
    pub amplitude_from_theta: Complex64,
    /// `−s_t (t1² − γ² − t2²) / (t2 (t1 − s_g γ))`.
    pub amplitude_closed: f64,
}

pub fn zero_energy_factors(params: &ChainParams) -> Result<ZeroEnergyFactors> {
    let signs = topology_signs(params)?;
    let th = theta_of(params, Complex64::new(0.0, 0.0))?;
    let (st, sg) = (signs.s_t as f64, signs.s_g as f64);
    let (t1, t2, g) = (params.t1, params.t2, params.gamma);
    let z = th.exp_i_theta;
    Ok(ZeroEnergyFactors {
        growth_from_theta: (sg * signs.g).exp() / z,
        growth_closed: (-t2 / (t1 + st * sg * g)).powi(signs.s_t),
        amplitude_from_theta: (-sg * signs.g).exp() * (z - 1.0 / z),
        amplitude_closed: -st * (t1 * t1 - g * g - t2 * t2) / (t2 * (t1 - sg * g)),
    })
}

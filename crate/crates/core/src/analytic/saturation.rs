//! Critical size and energy at which `|E_min|` stops growing in the point-gap
//! phase.
//!
//! Near `E = 0` the leading consistency condition takes the form
//! `exp((b0 + b2 E²) μ) = c0 / E` with `μ = N − 2` (or `N − 1` for the
//! `|β| > 1` branch). The saturation point is the turning point
//! `dμ/dE = 0` of this curve, which gives
//!
//! ```text
//! E_c² = b0 / (b2 W(b0 / (b2 c0² e))),    μ_c = −1 / (2 b2 E_c²).
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::lambert::lambert_w0;
use crate::error::{Error, Result};
use crate::model::beta::{beta_exact, beta_taylor_slopes, TaylorMatch};
use crate::model::topology::{classify_topology, GapClass};
use crate::model::ChainParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SaturationBranch {
    /// `|β1| < |β2| < 1`, governed by `λL`.
    BetaLt1,
    /// `1 < |β1| < |β2|`, governed by `λR`.
    BetaGt1,
}

impl SaturationBranch {
    pub fn as_str(self) -> &'static str {
        match self {
            SaturationBranch::BetaLt1 => "beta_lt_1",
            SaturationBranch::BetaGt1 => "beta_gt_1",
        }
    }

    /// `N_c − μ_c`.
    pub fn size_offset(self) -> f64 {
        match self {
            SaturationBranch::BetaLt1 => 2.0,
            SaturationBranch::BetaGt1 => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaturationPrediction {
    pub e_c: f64,
    pub n_c: f64,
    pub branch: SaturationBranch,
    pub lambert_arg: f64,
}

/// Coefficients of `exp((b0 + b2 E²) μ) = c0 / E`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaturationCoefficients {
    pub b0: f64,
    pub b2: f64,
    pub c0: f64,
    pub branch: SaturationBranch,
}

/// Point-gap branch from the zero-energy factors.
pub fn saturation_branch(params: &ChainParams) -> Result<SaturationBranch> {
    let signs = classify_topology(params)?;
    if signs.cls != GapClass::PG {
        return Err(Error::Precondition(
            "saturation is predicted only in the point-gap phase".into(),
        ));
    }
    Ok(if signs.winding == 1 {
        SaturationBranch::BetaLt1
    } else {
        SaturationBranch::BetaGt1
    })
}

impl SaturationCoefficients {
    /// Coefficients as they appear in the closed-form critical energy.
    pub fn closed_form(params: &ChainParams) -> Result<Self> {
        let branch = saturation_branch(params)?;
        let s_t = classify_topology(params)?.s_t;
        let (t1, t2, g) = (params.t1, params.t2, params.gamma);
        let st = s_t as f64;
        let d = t1 * t1 - t2 * t2 - g * g;
        if d == 0.0 {
            return Err(Error::SingularExpansion);
        }
        Ok(match branch {
            SaturationBranch::BetaLt1 => SaturationCoefficients {
                b0: ((st * g - t1) / t2).powi(s_t).abs().ln(),
                b2: -(1.0 / d).abs(),
                c0: ((t1 * t1 - t2 * t2 + g * g) * params.lambda_l / (t2 * (t1 - g))).abs(),
                branch,
            },
            SaturationBranch::BetaGt1 => SaturationCoefficients {
                b0: ((st * g + t1) / t2).powi(-s_t).abs().ln(),
                b2: (1.0 / d).abs(),
                c0: (d * params.lambda_r / (t1 * t1 - g * g)).abs(),
                branch,
            },
        })
    }

    /// Coefficients from the actual second-order expansion of `ln|β2|` and
    /// the `1/E` coefficient of the right-hand side, scaled by `|λL|`.
    pub fn taylor(params: &ChainParams) -> Result<Self> {
        let (b0, b2, c0) = taylor_ln_beta2(params)?;
        Ok(SaturationCoefficients {
            b0,
            b2,
            c0: c0 * params.lambda_l.abs(),
            branch: SaturationBranch::BetaLt1,
        })
    }

    pub fn turning_point(&self) -> Result<SaturationPrediction> {
        let (e_c, mu_c, arg) = lambert_turning_point(self.b0, self.b2, self.c0)?;
        Ok(SaturationPrediction {
            e_c,
            n_c: self.branch.size_offset() + mu_c.abs(),
            branch: self.branch,
            lambert_arg: arg,
        })
    }
}

/// `(E_c, μ_c, W argument)` for `exp((b0 + b2 E²) μ) = c0 / E`.
pub fn lambert_turning_point(b0: f64, b2: f64, c0: f64) -> Result<(f64, f64, f64)> {
    if b2 == 0.0 || c0 == 0.0 || !b0.is_finite() {
        return Err(Error::FormulaDomain(format!(
            "degenerate coefficients b0 = {b0}, b2 = {b2}, c0 = {c0}"
        )));
    }
    let ratio = (b0 / b2).abs();
    let arg = ratio / (c0 * c0 * std::f64::consts::E);
    if !(arg > 0.0) || !arg.is_finite() {
        return Err(Error::FormulaDomain(format!("Lambert argument {arg:e}")));
    }
    let w = lambert_w0(arg)?;
    if !(w > 0.0) {
        return Err(Error::FormulaDomain(format!("W({arg:e}) = {w} is not positive")));
    }
    let e_c = (ratio / w).sqrt();
    let mu_c = -1.0 / (2.0 * b2 * e_c * e_c);
    Ok((e_c, mu_c, arg))
}

/// Closed-form critical point, picking the branch from the topology.
pub fn saturation_prediction(params: &ChainParams) -> Result<SaturationPrediction> {
    SaturationCoefficients::closed_form(params)?.turning_point()
}

/// The critical energy written out term by term, with principal complex
/// square roots. Used to check the absolute-value evaluation.
pub fn critical_energy_literal(params: &ChainParams) -> Result<Complex64> {
    let branch = saturation_branch(params)?;
    let s_t = classify_topology(params)?.s_t;
    let (t1, t2, g) = (params.t1, params.t2, params.gamma);
    let st = s_t as f64;
    let d = t1 * t1 - t2 * t2 - g * g;
    let e = std::f64::consts::E;
    let c = |x: f64| Complex64::new(x, 0.0);
    let (l, inv, arg) = match branch {
        SaturationBranch::BetaLt1 => {
            let l = ((st * g - t1) / t2).powi(s_t).abs().ln();
            let s = t1 * t1 - t2 * t2 + g * g;
            let arg = t2 * t2 * (t1 - g).powi(2) * d.abs() * l / (-e * s * s * params.lambda_l.powi(2));
            (l, -(1.0 / d).abs(), arg)
        }
        SaturationBranch::BetaGt1 => {
            let l = ((st * g + t1) / t2).powi(-s_t).abs().ln();
            let arg = ((t1 * t1 - g * g).powi(2) * l / (-e * d * params.lambda_r.powi(2))).abs();
            (l, (1.0 / d).abs(), arg)
        }
    };
    let w = lambert_w0(arg)?;
    Ok(c(l).sqrt() / (c(inv).sqrt() * c(w).sqrt()))
}

/// `(b0, b2, c0)`: `ln|β2|` and `d ln|β2| / dE²` at `E = 0`, and the modulus
/// of the `1/E` coefficient per unit `λL`.
pub fn taylor_ln_beta2(params: &ChainParams) -> Result<(f64, f64, f64)> {
    if saturation_branch(params)? != SaturationBranch::BetaLt1 {
        return Err(Error::Precondition(
            "taylor_ln_beta2 applies to the |beta| < 1 branch".into(),
        ));
    }
    let d = params.taylor_denominator();
    if d == 0.0 {
        return Err(Error::SingularExpansion);
    }
    let pair = beta_exact(params, Complex64::new(0.0, 0.0))?;
    let beta2 = pair.beta2.re;
    let (da, db) = beta_taylor_slopes(params)?;
    let dbeta2 = match pair.taylor_match {
        TaylorMatch::AIsBeta1 => db,
        TaylorMatch::BIsBeta1 => da,
    };
    Ok((
        beta2.abs().ln(),
        dbeta2 / beta2,
        (d / (params.t2 * params.t_ba())).abs(),
    ))
}

//! Two-wave consistency condition of the finite chain.
//!
//! An eigenstate with energy `E` is written as `β1ⁿ(1, χ1) + c β2ⁿ(1, χ2)`.
//! The two boundary equations at the terminal A sites each fix `c`; the
//! difference of the two values is the consistency function `D_full`. The
//! trigonometric form `D_trig` rewrites the same condition through
//! `β1,2 = e^g e^{∓iθ}`. The two share their zeros and differ by the
//! nonvanishing factor returned by [`full_over_trig`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::beta::{beta_exact, exp_g, s_factor, BetaPair};
use crate::model::{ChainParams, SystemSize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConsistencyForm {
    Full,
    Trig,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsistencyPoint {
    pub e: Complex64,
    pub n: usize,
    pub d_full: Complex64,
    pub d_trig: Complex64,
    /// Approximate consistency modulus used for the `(N, E)` map; `None`
    /// when `E = 0`.
    pub delta: Option<f64>,
}

/// Value of the chosen form together with its largest single term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluated {
    pub value: Complex64,
    pub scale: f64,
}

impl Evaluated {
    /// `|value| / scale`; scale-free measure of how close `E` is to a root.
    pub fn normalized(&self) -> f64 {
        if self.scale == 0.0 {
            self.value.norm()
        } else {
            self.value.norm() / self.scale
        }
    }
}

fn nondegenerate(params: &ChainParams, e: Complex64) -> Result<BetaPair> {
    let pair = beta_exact(params, e)?;
    if pair.degenerate {
        return Err(Error::Singular(format!(
            "beta1 = beta2 = {} at E = {e}",
            pair.beta1
        )));
    }
    Ok(pair)
}

/// Numerators and denominators of the two boundary ratios.
struct Ratios {
    p1: Complex64,
    p2: Complex64,
    q1: Complex64,
    q2: Complex64,
}

fn ratios(params: &ChainParams, n: usize, e: Complex64, pair: &BetaPair) -> Ratios {
    let nn = n as i32;
    let tab = params.t_ab();
    let p = |b: Complex64| {
        let s = s_factor(params, e, b);
        b * (s * params.lambda_l - e * b.powi(nn) * tab)
    };
    let q = |b: Complex64| {
        let s = s_factor(params, e, b);
        e * params.t2 * b - b.powi(nn) * s * params.lambda_r
    };
    Ratios {
        p1: p(pair.beta1),
        p2: p(pair.beta2),
        q1: q(pair.beta1),
        q2: q(pair.beta2),
    }
}

/// `D_full = P1/P2 − Q1/Q2`.
pub fn d_full(params: &ChainParams, size: SystemSize, e: Complex64) -> Result<Evaluated> {
    let pair = nondegenerate(params, e)?;
    let r = ratios(params, size.n(), e, &pair);
    if r.p2.norm() == 0.0 || r.q2.norm() == 0.0 {
        return Err(Error::Pole(format!("boundary denominator vanishes at E = {e}")));
    }
    let a = r.p1 / r.p2;
    let b = r.q1 / r.q2;
    Ok(Evaluated {
        value: a - b,
        scale: a.norm().max(b.norm()),
    })
}

/// Cross-multiplied determinant `P1 Q2 − P2 Q1`; free of poles.
pub fn boundary_determinant(params: &ChainParams, size: SystemSize, e: Complex64) -> Result<Evaluated> {
    let pair = nondegenerate(params, e)?;
    let r = ratios(params, size.n(), e, &pair);
    let a = r.p1 * r.q2;
    let b = r.p2 * r.q1;
    Ok(Evaluated {
        value: a - b,
        scale: a.norm().max(b.norm()),
    })
}

/// `sin(kθ)` from `z = e^{iθ}`.
fn sin_k(z: Complex64, k: i32) -> Complex64 {
    (z.powi(k) - z.powi(-k)) / (2.0 * Complex64::i())
}

/// Trigonometric form in `θ`, with `e^{iθ} = β2 / e^g`.
pub fn d_trig(params: &ChainParams, size: SystemSize, e: Complex64) -> Result<Evaluated> {
    let pair = nondegenerate(params, e)?;
    let eg = exp_g(params)?;
    let n = size.n() as i32;
    let z = pair.beta2 / eg;
    let ll = params.lambda_l * params.lambda_r;
    let denom = e * e - ll;
    if denom.norm() == 0.0 {
        return Err(Error::Pole(format!("E^2 = lambda_L lambda_R at E = {e}")));
    }
    let nm1 = (n - 1) as f64;
    let lam = params.lambda_l * (-nm1 * eg.ln()).exp() + params.lambda_r * (nm1 * eg.ln()).exp();
    let hop = params.t2 / (eg * params.t_ab()) + eg * params.t_ab() / params.t2;
    let terms = [
        sin_k(z, n),
        -e * lam / denom * sin_k(z, 1),
        -ll / denom * sin_k(z, n - 2),
        -hop * ll / denom * sin_k(z, n - 1),
    ];
    Ok(Evaluated {
        value: terms.iter().sum(),
        scale: terms.iter().map(|t| t.norm()).fold(0.0, f64::max),
    })
}

/// Raw value of the chosen form.
pub fn consistency_residual(
    params: &ChainParams,
    size: SystemSize,
    e: Complex64,
    form: ConsistencyForm,
) -> Result<Complex64> {
    Ok(consistency_evaluated(params, size, e, form)?.value)
}

pub fn consistency_evaluated(
    params: &ChainParams,
    size: SystemSize,
    e: Complex64,
    form: ConsistencyForm,
) -> Result<Evaluated> {
    match form {
        ConsistencyForm::Full => d_full(params, size, e),
        ConsistencyForm::Trig => d_trig(params, size, e),
    }
}

/// `K` with `D_full = K · D_trig`:
/// `K = 2i t2 (t1+γ) e^{(N+2)g} (E² − λLλR) / (P2 Q2)`.
pub fn full_over_trig(params: &ChainParams, size: SystemSize, e: Complex64) -> Result<Complex64> {
    let pair = nondegenerate(params, e)?;
    let eg = exp_g(params)?;
    let r = ratios(params, size.n(), e, &pair);
    let ll = params.lambda_l * params.lambda_r;
    Ok(2.0 * Complex64::i() * params.t2 * params.t_ab() * eg.powi(size.n() as i32 + 2) * (e * e - ll)
        / (r.p2 * r.q2))
}

/// All consistency quantities at one `(N, E)`.
pub fn consistency_point(params: &ChainParams, size: SystemSize, e: Complex64) -> Result<ConsistencyPoint> {
    let delta = if e.norm() == 0.0 {
        None
    } else {
        Some(super::delta::delta_value(params, size, e)?)
    };
    Ok(ConsistencyPoint {
        e,
        n: size.n(),
        d_full: d_full(params, size, e)?.value,
        d_trig: d_trig(params, size, e)?.value,
        delta,
    })
}

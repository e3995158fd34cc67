//! Non-Bloch factors of the homogeneous chain.
//!
//! For an energy `E` the bulk Bloch-like solutions `beta^n (1, chi)` exist for
//! the two roots of
//!
//! ```text
//! t2 (t1+γ) β² + (t1² − γ² + t2² − E²) β + t2 (t1−γ) = 0
//! ```
//!
//! ordered so that `|beta1| <= |beta2|`. Their product is `(t1−γ)/(t1+γ)`
//! for every `E`, which defines the GBZ radius `exp(g)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::params::ChainParams;
use crate::error::{Error, Result};

/// Which of the two closed-form roots (`+` or `−` sign in front of the square
/// root) came out as the smaller-modulus `beta1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootAssignment {
    PlusIsSmall,
    MinusIsSmall,
}

/// Which Taylor form (`beta_a` or `beta_b`) tracks `beta1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TaylorMatch {
    AIsBeta1,
    BIsBeta1,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaPair {
    pub beta1: Complex64,
    pub beta2: Complex64,
    pub assignment: RootAssignment,
    pub taylor_match: TaylorMatch,
    /// Set when the two roots coincide to `1e-10 |beta2|`; the two-wave
    /// ansatz is not a complete basis there.
    pub degenerate: bool,
}

impl BetaPair {
    pub fn product(&self) -> Complex64 {
        self.beta1 * self.beta2
    }
}

/// `beta1 * beta2`, independent of `E`.
pub fn beta_product(params: &ChainParams) -> f64 {
    params.t_ba() / params.t_ab()
}

/// `exp(g) = sqrt((t1−γ)/(t1+γ))`, the GBZ radius. Requires `|t1| > |γ|`.
pub fn exp_g(params: &ChainParams) -> Result<f64> {
    params.require_real_g()?;
    Ok(beta_product(params).sqrt())
}

/// `g = ln exp(g)`.
pub fn g_of(params: &ChainParams) -> Result<f64> {
    Ok(exp_g(params)?.ln())
}

/// Left-hand side of the characteristic equation minus `E²`.
pub fn characteristic_residual(params: &ChainParams, e: Complex64, beta: Complex64) -> Complex64 {
    (params.t_ab() + params.t2 / beta) * (params.t_ba() + params.t2 * beta) - e * e
}

fn check_leading(params: &ChainParams) -> Result<()> {
    if params.t2 * params.t_ab() == 0.0 {
        return Err(Error::Precondition("t2 (t1 + gamma) must be nonzero".into()));
    }
    Ok(())
}

/// The literal `beta_±` of the closed form, principal square root.
pub fn beta_plus_minus(params: &ChainParams, e: Complex64) -> Result<(Complex64, Complex64)> {
    check_leading(params)?;
    let (t1, t2, g) = (params.t1, params.t2, params.gamma);
    let e2 = e * e;
    let disc = (t1 * t1 - (e - t2) * (e - t2) - g * g) * (t1 * t1 - (e + t2) * (e + t2) - g * g);
    let root = disc.sqrt();
    let base = e2 - (t1 * t1 + t2 * t2 - g * g);
    let denom = 2.0 * t2 * params.t_ab();
    Ok(((base + root) / denom, (base - root) / denom))
}

/// Both non-Bloch factors at energy `e`, sorted by modulus.
pub fn beta_exact(params: &ChainParams, e: Complex64) -> Result<BetaPair> {
    check_leading(params)?;
    let (t1, t2, g) = (params.t1, params.t2, params.gamma);
    let a = t2 * params.t_ab();
    let b = Complex64::new(t1 * t1 - g * g + t2 * t2, 0.0) - e * e;
    let c = t2 * params.t_ba();
    let disc = (b * b - 4.0 * a * c).sqrt();
    // cancellation-free pair: q = -(b + sgn(b) sqrt(disc)) / 2
    let q = if (b.conj() * disc).re >= 0.0 {
        -0.5 * (b + disc)
    } else {
        -0.5 * (b - disc)
    };
    let (r1, r2) = if q.norm() == 0.0 {
        (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    } else {
        (q / a, c / q)
    };
    let (beta1, beta2) = if r1.norm() <= r2.norm() { (r1, r2) } else { (r2, r1) };

    let (plus, minus) = beta_plus_minus(params, e)?;
    let assignment = if (beta1 - plus).norm() <= (beta1 - minus).norm() {
        RootAssignment::PlusIsSmall
    } else {
        RootAssignment::MinusIsSmall
    };

    let (beta_a, beta_b) = match beta_taylor(params, e) {
        Ok(ab) => ab,
        Err(_) => beta_taylor_leading(params),
    };
    let taylor_match = if (beta1 - beta_a).norm() <= (beta1 - beta_b).norm() {
        TaylorMatch::AIsBeta1
    } else {
        TaylorMatch::BIsBeta1
    };

    Ok(BetaPair {
        beta1,
        beta2,
        assignment,
        taylor_match,
        degenerate: (beta1 - beta2).norm() < 1e-10 * beta2.norm(),
    })
}

/// `beta_a`, `beta_b` at `E = 0`: `−(t1−γ)/t2` and `−t2/(t1+γ)`.
pub fn beta_taylor_leading(params: &ChainParams) -> (Complex64, Complex64) {
    (
        Complex64::new(-params.t_ba() / params.t2, 0.0),
        Complex64::new(-params.t2 / params.t_ab(), 0.0),
    )
}

/// Second-order expansions of the two roots around `E = 0`:
/// `β_a = β_a⁰ (1 − E²/d)` and `β_b = β_b⁰ (1 + E²/d)` with
/// `d = t1² − t2² − γ²`, `β_a⁰ = −(t1−γ)/t2`, `β_b⁰ = −t2/(t1+γ)`.
pub fn beta_taylor(params: &ChainParams, e: Complex64) -> Result<(Complex64, Complex64)> {
    let d = params.taylor_denominator();
    if d == 0.0 {
        return Err(Error::SingularExpansion);
    }
    let (a0, b0) = beta_taylor_leading(params);
    let shift = e * e / d;
    Ok((a0 * (1.0 - shift), b0 * (1.0 + shift)))
}

/// `d β / d(E²)` at `E = 0` for `(β_a, β_b)`.
pub fn beta_taylor_slopes(params: &ChainParams) -> Result<(f64, f64)> {
    let d = params.taylor_denominator();
    if d == 0.0 {
        return Err(Error::SingularExpansion);
    }
    let (a0, b0) = beta_taylor_leading(params);
    Ok((-a0.re / d, b0.re / d))
}

/// Sublattice ratio `chi = E beta / (t2 + beta (t1+γ))` of the bulk
/// eigenvector `(1, chi)`.
pub fn chi_component(params: &ChainParams, e: Complex64, beta: Complex64) -> Result<Complex64> {
    if e == Complex64::new(0.0, 0.0) {
        return Ok(e);
    }
    let denom = params.t2 + beta * params.t_ab();
    if denom.norm() < 1e-14 {
        return Err(Error::Pole(format!(
            "t2 + beta (t1+gamma) = {denom} at beta = {beta}"
        )));
    }
    Ok(e * beta / denom)
}

/// `t2 + beta (t1+γ)` for a root `beta` of the characteristic equation,
/// evaluated through whichever of the two equivalent forms avoids
/// cancellation. On the characteristic curve
/// `(t2 + β(t1+γ)) ((t1−γ) + t2 β) = E² β`.
pub fn s_factor(params: &ChainParams, e: Complex64, beta: Complex64) -> Complex64 {
    let direct = params.t2 + beta * params.t_ab();
    let partner = params.t_ba() + params.t2 * beta;
    if direct.norm() >= partner.norm() || partner.norm() == 0.0 {
        direct
    } else {
        e * e * beta / partner
    }
}

/// Complex angle `theta` with `beta1 = e^g e^{−iθ}` and `beta2 = e^g e^{iθ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theta {
    pub theta: Complex64,
    /// `exp(iθ) = beta2 / e^g`, modulus at least one.
    pub exp_i_theta: Complex64,
    pub exp_g: f64,
}

pub fn theta_of(params: &ChainParams, e: Complex64) -> Result<Theta> {
    let pair = beta_exact(params, e)?;
    if pair.beta1.norm() == 0.0 {
        return Err(Error::Singular("beta1 = 0".into()));
    }
    let eg = exp_g(params)?;
    let z = pair.beta2 / eg;
    Ok(Theta {
        theta: -Complex64::i() * z.ln(),
        exp_i_theta: z,
        exp_g: eg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(t1: f64, t2: f64, g: f64) -> ChainParams {
        ChainParams::new(t1, t2, g, 0.0, 0.0).unwrap()
    }

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn beta_at_zero_energy() {
        let b = beta_exact(&p(2.5, 2.8, 1.0), c(0.0)).unwrap();
        assert!((b.beta1 - c(-1.5 / 2.8)).norm() < 1e-14);
        assert!((b.beta2 - c(-0.8)).norm() < 1e-14);
        assert_eq!(b.taylor_match, TaylorMatch::AIsBeta1);

        let b = beta_exact(&p(2.8, 1.5, 1.0), c(0.0)).unwrap();
        assert!((b.beta1 - c(-1.5 / 3.8)).norm() < 1e-14);
        assert!((b.beta2 - c(-1.2)).norm() < 1e-14);
        assert_eq!(b.taylor_match, TaylorMatch::BIsBeta1);
    }

    #[test]
    fn assignment_follows_sign_of_taylor_denominator() {
        // t1^2 - t2^2 - γ^2 < 0 with t1^2 + t2^2 - γ^2 > 0: beta1 = beta_plus
        let b = beta_exact(&p(2.5, 2.8, 1.0), c(0.05)).unwrap();
        assert_eq!(b.assignment, RootAssignment::PlusIsSmall);
        // t1^2 - t2^2 - γ^2 > 0: beta1 = beta_plus as well, but tracks beta_b
        let b = beta_exact(&p(2.8, 1.5, 1.0), c(0.05)).unwrap();
        assert_eq!(b.assignment, RootAssignment::PlusIsSmall);
        assert_eq!(b.taylor_match, TaylorMatch::BIsBeta1);
    }

    #[test]
    fn taylor_values() {
        let (a, b) = beta_taylor(&p(2.5, 2.8, 1.0), c(0.0)).unwrap();
        assert!((a.re + 0.535_714_285_714_285_7).abs() < 1e-15);
        assert!((b.re + 0.8).abs() < 1e-15);
        let (a, _) = beta_taylor(&p(2.5, 2.8, 1.0), c(0.1)).unwrap();
        assert!((a.re + 0.537_782_6).abs() < 1e-7, "{a}");
        assert!(matches!(
            beta_taylor(&p(5.0, 4.0, 3.0), c(0.1)),
            Err(Error::SingularExpansion)
        ));
    }

    #[test]
    fn taylor_error_is_fourth_order() {
        for &(t1, t2) in &[(2.5, 2.8), (2.8, 1.5), (2.0, 1.5)] {
            let q = p(t1, t2, 1.0);
            let err = |e: f64| {
                let exact = beta_exact(&q, c(e)).unwrap();
                let (a, b) = beta_taylor(&q, c(e)).unwrap();
                let (t_1, t_2) = match exact.taylor_match {
                    TaylorMatch::AIsBeta1 => (a, b),
                    TaylorMatch::BIsBeta1 => (b, a),
                };
                (exact.beta1 - t_1).norm().max((exact.beta2 - t_2).norm())
            };
            let ratio = err(0.04) / err(0.02);
            assert!((ratio - 16.0).abs() < 0.5, "{t1} {t2}: {ratio}");
        }
    }

    #[test]
    fn chi_zero_energy_and_pole() {
        let q = p(2.5, 2.8, 1.0);
        assert_eq!(chi_component(&q, c(0.0), c(-0.8)).unwrap(), c(0.0));
        assert!(matches!(
            chi_component(&q, c(0.1), c(-0.8)),
            Err(Error::Pole(_))
        ));
    }

    #[test]
    fn theta_zero_energy_value() {
        let th = theta_of(&p(2.5, 2.8, 1.0), c(0.0)).unwrap();
        let e_minus = 1.0 / th.exp_i_theta;
        // −(t2/sqrt(t1²−γ²))^{s_t} with s_t = −1
        let expected = -(2.8 / 5.25f64.sqrt()).powi(-1);
        assert!((e_minus - c(expected)).norm() < 1e-14);
        assert!((expected + 0.818_317).abs() < 1e-6);
        assert!(th.exp_i_theta.norm() >= 1.0);
    }

    #[test]
    fn theta_is_even_in_real_energy() {
        let q = p(2.5, 2.8, 1.0);
        for &e in &[0.03, 0.2, 1.1, 3.0] {
            let a = theta_of(&q, c(e)).unwrap();
            let b = theta_of(&q, c(-e)).unwrap();
            assert!((a.theta - b.theta).norm() < 1e-12);
        }
    }

    #[test]
    fn theta_is_real_on_gbz() {
        // on the GBZ |beta1| = |beta2|; pick E from beta = e^g e^{i 0.7}
        let q = p(2.5, 2.8, 1.0);
        let eg = exp_g(&q).unwrap();
        let beta = Complex64::from_polar(eg, 0.7);
        let e = ((q.t_ab() + q.t2 / beta) * (q.t_ba() + q.t2 * beta)).sqrt();
        let th = theta_of(&q, e).unwrap();
        assert!(th.theta.im.abs() < 1e-10);
    }
}

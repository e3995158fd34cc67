//! Least-squares estimate of the straight-line regime of `ln|E_min|`.
//!
//! A point qualifies when `E_min` is real, above `1e-12`, past the start-up
//! transient of the two-wave solution and below the saturation shoulder. The
//! last two conditions replace a fixed upper cutoff on `|E_min|`, which would
//! leave too few points for large `λ`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::sweep::SweepResult;
use crate::analytic::LinearLaw;
use crate::error::{Error, Result};
use crate::model::beta::{beta_exact, g_of};
use crate::model::ChainParams;

pub const MIN_FIT_POINTS: usize = 6;
pub const MIN_ACCEPTED_R2: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitWindow {
    pub max_im_ratio: f64,
    pub min_abs: f64,
    pub max_transient: f64,
    pub max_shoulder: f64,
}

impl Default for FitWindow {
    fn default() -> Self {
        FitWindow {
            max_im_ratio: 1e-6,
            min_abs: 1e-12,
            max_transient: 1e-2,
            max_shoulder: 1e-2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub window: (usize, usize),
    pub r2: f64,
    pub points_used: usize,
}

impl FitResult {
    pub fn accepted(&self) -> bool {
        self.points_used >= MIN_FIT_POINTS && self.r2 >= MIN_ACCEPTED_R2
    }
}

/// Relative size of the terms the straight line ignores at size `n`: the
/// subdominant non-Bloch wave and the unselected terminal coupling.
pub fn transient_factor(params: &ChainParams, law: &LinearLaw, n: usize) -> Result<f64> {
    let pair = beta_exact(params, Complex64::new(0.0, 0.0))?;
    let wave = (pair.beta1.norm() / pair.beta2.norm()).powi(n as i32);
    let other = params.lambda(law.side.other()).abs() / law.lambda_used.abs();
    let g = g_of(params)?;
    Ok(wave.max(other * (-2.0 * g.abs() * (n as f64 - 1.0)).exp()))
}

/// First correction to the slope from the energy dependence of `β2`.
pub fn shoulder_factor(params: &ChainParams, e_abs: f64, n: usize) -> Result<f64> {
    let d = params.taylor_denominator();
    if d == 0.0 {
        return Err(Error::SingularExpansion);
    }
    Ok(e_abs * e_abs * (n as f64 - 2.0).max(0.0) / d.abs())
}

/// `(N, ln|E_min|)` pairs that pass the window.
pub fn qualifying_points(sweep: &SweepResult, window: &FitWindow) -> Result<Vec<(usize, f64)>> {
    let law = sweep
        .law
        .ok_or_else(|| Error::Precondition("no linear law applies to these couplings".into()))?;
    let mut out = Vec::new();
    for r in &sweep.records {
        let m = r.e_min.norm();
        if m <= window.min_abs || r.e_min.im.abs() >= window.max_im_ratio * m {
            continue;
        }
        if transient_factor(&sweep.params, &law, r.n)? > window.max_transient {
            continue;
        }
        if shoulder_factor(&sweep.params, m, r.n)? > window.max_shoulder {
            continue;
        }
        out.push((r.n, m.ln()));
    }
    Ok(out)
}

pub fn fit_linear_regime(sweep: &SweepResult) -> Result<FitResult> {
    fit_linear_regime_with(sweep, &FitWindow::default())
}

pub fn fit_linear_regime_with(sweep: &SweepResult, window: &FitWindow) -> Result<FitResult> {
    let pts = qualifying_points(sweep, window)?;
    if pts.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData(format!(
            "{} qualifying points, need {MIN_FIT_POINTS}",
            pts.len()
        )));
    }
    let (slope, intercept, r2) = least_squares(&pts);
    Ok(FitResult {
        slope,
        intercept,
        window: (pts[0].0, pts[pts.len() - 1].0),
        r2,
        points_used: pts.len(),
    })
}

fn least_squares(pts: &[(usize, f64)]) -> (f64, f64, f64) {
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0 as f64).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 as f64 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 as f64 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, intercept, r2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::sweep::nsweep;

    #[test]
    fn exact_line() {
        let pts: Vec<(usize, f64)> = (3..10).map(|n| (n, 0.5 * n as f64 - 2.0)).collect();
        let (s, b, r2) = least_squares(&pts);
        assert!((s - 0.5).abs() < 1e-14 && (b + 2.0).abs() < 1e-13 && (r2 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn point_gap_slope() {
        let p = ChainParams::symmetric(2.5, 2.8, 1.0, 1e-5).unwrap();
        let fit = fit_linear_regime(&nsweep(&p, 2, 50).unwrap()).unwrap();
        assert!(fit.accepted());
        assert!((fit.slope / 0.223_144 - 1.0).abs() < 0.02, "{fit:?}");
    }

    #[test]
    fn too_few_points() {
        let p = ChainParams::symmetric(2.5, 2.8, 1.0, 1e-5).unwrap();
        assert!(matches!(
            fit_linear_regime(&nsweep(&p, 2, 9).unwrap()),
            Err(Error::InsufficientData(_))
        ));
    }
}

//! Approximate consistency map `Δ(E, N)` on a real `(N, E)` grid.
//!
//! Keeping only the leading boundary terms when `|β1| < |β2| < 1` gives
//! `β2^{N−2} ≈ (β2 − β1)(t1+γ)λL / (E (t1−γ))`; `Δ` is the modulus of the
//! difference of the two sides. Its valley traces the small real
//! eigenvalues as a function of continuous `N`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::beta::beta_exact;
use crate::model::{ChainParams, SystemSize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DeltaForm {
    /// Principal complex power `β2^{N−2}`; only integer `N` can reach zero
    /// when `β2 < 0`.
    Signed,
    /// Moduli of both sides; continuous in `N`.
    Modulus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaMap {
    pub n_axis: Vec<f64>,
    pub e_axis: Vec<f64>,
    /// `ln Δ`, indexed `[i_n][i_e]`; `None` on the `E = 0` pole.
    pub ln_delta: Vec<Vec<Option<f64>>>,
    pub form: DeltaForm,
}

fn sides(params: &ChainParams, n: f64, e: f64) -> Result<(Complex64, Complex64)> {
    let pair = beta_exact(params, Complex64::new(e, 0.0))?;
    let lhs = pair.beta2.powf(n - 2.0);
    let rhs = (pair.beta2 - pair.beta1) * params.t_ab() * params.lambda_l / (e * params.t_ba());
    Ok((lhs, rhs))
}

fn delta_at(params: &ChainParams, n: f64, e: f64, form: DeltaForm) -> Result<f64> {
    let (lhs, rhs) = sides(params, n, e)?;
    Ok(match form {
        DeltaForm::Signed => (lhs - rhs).norm(),
        DeltaForm::Modulus => (lhs.norm() - rhs.norm()).abs(),
    })
}

/// Signed-form `Δ` at integer `N`.
pub fn delta_value(params: &ChainParams, size: SystemSize, e: Complex64) -> Result<f64> {
    let pair = beta_exact(params, e)?;
    let lhs = pair.beta2.powi(size.n() as i32 - 2);
    let rhs = (pair.beta2 - pair.beta1) * params.t_ab() * params.lambda_l / (e * params.t_ba());
    Ok((lhs - rhs).norm())
}

fn require_small_branch(params: &ChainParams) -> Result<()> {
    let pair = beta_exact(params, Complex64::new(0.0, 0.0))?;
    if !(pair.beta2.norm() < 1.0) {
        return Err(Error::Precondition(format!(
            "delta map needs |beta1| < |beta2| < 1 at E = 0, got |beta2| = {}",
            pair.beta2.norm()
        )));
    }
    Ok(())
}

fn axis(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    (0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect()
}

/// Sample `ln Δ` on `count_n × count_e` points.
pub fn delta_map(
    params: &ChainParams,
    n_range: (f64, f64),
    e_range: (f64, f64),
    grid: (usize, usize),
    form: DeltaForm,
) -> Result<DeltaMap> {
    require_small_branch(params)?;
    if grid.0 == 0 || grid.1 == 0 {
        return Err(Error::Precondition("delta grid needs at least one point per axis".into()));
    }
    let n_axis = axis(n_range.0, n_range.1, grid.0);
    let e_axis = axis(e_range.0, e_range.1, grid.1);
    let mut ln_delta = Vec::with_capacity(n_axis.len());
    for &n in &n_axis {
        let mut row = Vec::with_capacity(e_axis.len());
        for &e in &e_axis {
            row.push(if e == 0.0 {
                None
            } else {
                Some(delta_at(params, n, e, form)?.ln())
            });
        }
        ln_delta.push(row);
    }
    Ok(DeltaMap {
        n_axis,
        e_axis,
        ln_delta,
        form,
    })
}

impl DeltaMap {
    /// For each `E` column, the `N` at which `ln Δ` is smallest.
    pub fn valley(&self) -> Vec<(f64, f64)> {
        self.e_axis
            .iter()
            .enumerate()
            .filter_map(|(j, &e)| {
                self.n_axis
                    .iter()
                    .enumerate()
                    .filter_map(|(i, &n)| self.ln_delta[i][j].map(|v| (n, v)))
                    .min_by(|a, b| a.1.total_cmp(&b.1))
                    .map(|(n, _)| (e, n))
            })
            .collect()
    }

    /// Valley point of largest `N`, where `dN/dE = 0`. When the valley is
    /// flat at the grid resolution the middle of the plateau is returned.
    pub fn turning_point(&self) -> Option<(f64, f64)> {
        let valley = self.valley();
        let top = valley.iter().map(|v| v.1).max_by(f64::total_cmp)?;
        let plateau: Vec<f64> = valley.iter().filter(|v| v.1 == top).map(|v| v.0).collect();
        Some((plateau.iter().sum::<f64>() / plateau.len() as f64, top))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vanishes_at_root_of_the_approximate_condition() {
        // solve |β2|^{N-2} = |rhs| for N at fixed E, then check the modulus form
        let p = ChainParams::symmetric(2.5, 2.8, 1.0, 1e-5).unwrap();
        let e = 0.08;
        let (_, rhs) = sides(&p, 2.0, e).unwrap();
        let b2 = beta_exact(&p, Complex64::new(e, 0.0)).unwrap().beta2.norm();
        let n = 2.0 + rhs.norm().ln() / b2.ln();
        let d = delta_at(&p, n, e, DeltaForm::Modulus).unwrap();
        assert!(d < 1e-6 * b2.powf(n - 2.0), "{d:e}");
    }

    #[test]
    fn zero_energy_column_masked() {
        let p = ChainParams::symmetric(2.5, 2.8, 1.0, 1e-5).unwrap();
        let m = delta_map(&p, (10.0, 20.0), (0.0, 0.1), (3, 3), DeltaForm::Modulus).unwrap();
        assert!(m.ln_delta.iter().all(|row| row[0].is_none()));
        assert!(m.ln_delta.iter().all(|row| row[1].is_some()));
    }

    #[test]
    fn rejects_large_beta_branch() {
        let p = ChainParams::symmetric(-2.5, 2.8, 1.0, 1e-5).unwrap();
        assert!(delta_map(&p, (10.0, 20.0), (0.01, 0.1), (3, 3), DeltaForm::Modulus).is_err());
    }

    #[test]
    fn valley_turning_point_near_closed_form() {
        let p = ChainParams::symmetric(2.5, 2.8, 1.0, 1e-5).unwrap();
        let map = delta_map(&p, (2.0, 80.0), (0.005, 0.4), (781, 400), DeltaForm::Modulus).unwrap();
        let (e, n) = map.turning_point().unwrap();
        assert!((e / 0.161 - 1.0).abs() < 0.15, "{e}");
        assert!((n / 52.0 - 1.0).abs() < 0.15, "{n}");
        assert!((e - 0.178).abs() < 0.005 && (n - 45.8).abs() < 0.15, "({e}, {n})");
    }
}

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::dense::eig_dense_certified;
use super::extended::emin_root;
use crate::error::{Error, Result};
use crate::model::{build_hamiltonian, ChainParams, SystemSize};

/// Dense eigenvalues are trusted for `E_min` only above this fraction of
/// `‖H‖_F`.
pub const PRECISION_FLOOR: f64 = 1e-10;
const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EminSource {
    DenseEig,
    ConsistencyRoot,
}

impl EminSource {
    pub fn as_str(self) -> &'static str {
        match self {
            EminSource::DenseEig => "dense_eig",
            EminSource::ConsistencyRoot => "consistency_root",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRecord {
    pub n: usize,
    pub eigenvalues: Vec<Complex64>,
    pub e_min: Complex64,
    pub e_min_source: EminSource,
    pub max_residual: f64,
    /// Certified residual of the extended-precision root, when it supplied
    /// `e_min`.
    pub root_residual: Option<f64>,
    pub h_norm: f64,
}

/// Smallest-modulus value; near-ties go to `Im >= 0`, then `Re >= 0`.
pub fn select_emin(eigenvalues: &[Complex64]) -> Result<Complex64> {
    let m = eigenvalues
        .iter()
        .map(|e| e.norm())
        .min_by(f64::total_cmp)
        .ok_or_else(|| Error::Precondition("empty eigenvalue list".into()))?;
    let key = |e: &Complex64| (e.im < 0.0, e.re < 0.0);
    Ok(*eigenvalues
        .iter()
        .filter(|e| e.norm() <= m * (1.0 + TIE_TOL))
        .min_by(|a, b| key(a).cmp(&key(b)).then(a.norm().total_cmp(&b.norm())))
        .expect("minimum exists"))
}

/// Full spectrum at one `N`, with `E_min` taken from the extended-precision
/// root when the dense value sits below the precision floor.
pub fn spectrum_record(params: &ChainParams, size: SystemSize) -> Result<SpectrumRecord> {
    let h = build_hamiltonian(params, size);
    let h_norm = h.frobenius_norm();
    let dense = eig_dense_certified(&h)?;
    let e_dense = select_emin(&dense.eigenvalues)?;
    let floor = PRECISION_FLOOR * h_norm;
    let (e_min, e_min_source, root_residual) = if e_dense.norm() > floor {
        (e_dense, EminSource::DenseEig, None)
    } else {
        let radius = (10.0 * floor).max(10.0 * e_dense.norm());
        let root = emin_root(params, size, radius)?;
        (root.value(), EminSource::ConsistencyRoot, Some(root.residual))
    };
    Ok(SpectrumRecord {
        n: size.n(),
        max_residual: dense.max_residual(),
        eigenvalues: dense.eigenvalues,
        e_min,
        e_min_source,
        root_residual,
        h_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn selection_examples() {
        let r = 2.291_288;
        assert_eq!(select_emin(&[c(r, 0.0), c(0.0, 0.0), c(-r, 0.0)]).unwrap(), c(0.0, 0.0));
        assert_eq!(
            select_emin(&[c(0.1, -0.2), c(0.1, 0.2), c(3.0, 0.0)]).unwrap(),
            c(0.1, 0.2)
        );
        assert_eq!(select_emin(&[c(-0.5, 0.0), c(0.5, 0.0)]).unwrap(), c(0.5, 0.0));
        assert!(select_emin(&[]).is_err());
    }

    #[test]
    fn alternating_sign_in_linear_regime() {
        let p = ChainParams::symmetric(2.0, 1.5, 1.0, 1e-7).unwrap();
        let signs: Vec<f64> = (10..20)
            .map(|n| spectrum_record(&p, SystemSize::new(n).unwrap()).unwrap().e_min)
            .map(|e| {
                assert!(e.im.abs() < 1e-6 * e.norm());
                e.re.signum()
            })
            .collect();
        assert!(signs.windows(2).all(|w| w[0] == -w[1]), "{signs:?}");
    }

    #[test]
    fn floor_switches_source() {
        let p = ChainParams::symmetric(2.8, 1.5, 1.0, 1e-9).unwrap();
        let rec = spectrum_record(&p, SystemSize::new(60).unwrap()).unwrap();
        assert_eq!(rec.e_min_source, EminSource::ConsistencyRoot);
        assert!(rec.e_min.norm() < 1e-10 * rec.h_norm);
        assert!(rec.root_residual.unwrap() < 1e-20);
        let p = p.with_lambdas(1e-5, 1e-5);
        let rec = spectrum_record(&p, SystemSize::new(6).unwrap()).unwrap();
        assert_eq!(rec.e_min_source, EminSource::DenseEig);
    }
}

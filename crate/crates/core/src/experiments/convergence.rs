use num_complex::Complex64;

use crate::analytic::{bulk_curves, CurveKind};
use crate::eig::{eig_dense_certified, select_emin};
use crate::error::{Error, Result};
use crate::model::{build_hamiltonian, ChainParams, SystemSize};

/// Total number of points on the sampled target curve.
pub const CURVE_SAMPLES: usize = 2048;

/// Eigenvalues other than `E_min` and, when `E_min` is complex, its
/// conjugate partner.
pub fn bulk_eigenvalues(eigenvalues: &[Complex64]) -> Result<Vec<Complex64>> {
    let e = select_emin(eigenvalues)?;
    let nearest = |z: Complex64| {
        eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - z).norm().total_cmp(&(b.1 - z).norm()))
            .map(|(i, _)| i)
    };
    let own = nearest(e);
    let partner = if e.im.abs() > 1e-12 * e.norm().max(1.0) {
        let others: Vec<(usize, Complex64)> = eigenvalues
            .iter()
            .copied()
            .enumerate()
            .filter(|(i, _)| Some(*i) != own)
            .collect();
        others
            .iter()
            .min_by(|a, b| (a.1 - e.conj()).norm().total_cmp(&(b.1 - e.conj()).norm()))
            .map(|(i, _)| *i)
    } else {
        None
    };
    Ok(eigenvalues
        .iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != own && Some(*i) != partner)
        .map(|(_, v)| *v)
        .collect())
}

/// For each size, the largest distance from a bulk eigenvalue to the
/// sampled target curve.
pub fn bulk_convergence(params: &ChainParams, n_list: &[usize], target: CurveKind) -> Result<Vec<f64>> {
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("N list must be strictly increasing".into()));
    }
    let curve = bulk_curves(params, target, CURVE_SAMPLES / 2)?;
    n_list
        .iter()
        .map(|&n| {
            let h = build_hamiltonian(params, SystemSize::new(n)?);
            let eig = eig_dense_certified(&h)?;
            Ok(bulk_eigenvalues(&eig.eigenvalues)?
                .into_iter()
                .map(|e| curve.distance_to(e))
                .fold(0.0, f64::max))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn excludes_pair() {
        let c = |re, im| Complex64::new(re, im);
        let bulk = bulk_eigenvalues(&[c(3.0, 0.0), c(0.1, -0.2), c(0.1, 0.2), c(-2.0, 1.0)]).unwrap();
        assert_eq!(bulk, vec![c(3.0, 0.0), c(-2.0, 1.0)]);
        let bulk = bulk_eigenvalues(&[c(3.0, 0.0), c(0.1, 0.0), c(-2.0, 0.0)]).unwrap();
        assert_eq!(bulk.len(), 2);
    }

    #[test]
    fn point_gap_distances_shrink() {
        let p = ChainParams::symmetric(2.0, 1.5, 1.0, 1e-7).unwrap();
        let d = bulk_convergence(&p, &[20, 40, 60], CurveKind::Pbc).unwrap();
        assert!(d[0] > d[1] && d[1] > d[2], "{d:?}");
    }
}

use num_complex::Complex64;

use super::params::{ChainParams, SystemSize};
use crate::error::{Error, Result};

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Precondition("matrix rows must form a square".into()));
        }
        Ok(ComplexMatrix {
            dim,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        self.data
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn scaled(&self, s: f64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }
}

/// Basis index of `A_n` (1-based cell index).
#[inline]
pub fn a_site(n: usize) -> usize {
    2 * (n - 1)
}

/// Basis index of `B_n` (1-based cell index, `n <= N - 1`).
#[inline]
pub fn b_site(n: usize) -> usize {
    2 * (n - 1) + 1
}

/// Finite-chain Hamiltonian in the basis `A1, B1, ..., A_{N-1}, B_{N-1}, A_N`.
///
/// The terminal couplings follow the boundary equations: `H[A1, AN] = lambda_r`
/// and `H[AN, A1] = lambda_l`, so the eigenvalues are exactly the roots of the
/// two-wave consistency condition.
pub fn build_hamiltonian(params: &ChainParams, size: SystemSize) -> ComplexMatrix {
    let n = size.n();
    let mut h = ComplexMatrix::zeros(size.dim());
    let c = |x: f64| Complex64::new(x, 0.0);
    for cell in 1..n {
        h.set(a_site(cell), b_site(cell), c(params.t_ab()));
        h.set(b_site(cell), a_site(cell), c(params.t_ba()));
        h.set(a_site(cell + 1), b_site(cell), c(params.t2));
        h.set(b_site(cell), a_site(cell + 1), c(params.t2));
    }
    // terminal corners; N >= 2 keeps A1 and AN distinct
    h.set(a_site(1), a_site(n), c(params.lambda_r));
    h.set(a_site(n), a_site(1), c(params.lambda_l));
    h
}

/// Convenience wrapper taking a raw `N`.
pub fn hamiltonian_for(params: &ChainParams, n: usize) -> Result<ComplexMatrix> {
    Ok(build_hamiltonian(params, SystemSize::new(n)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(m: &ComplexMatrix) -> Vec<Vec<f64>> {
        (0..m.dim())
            .map(|i| (0..m.dim()).map(|j| m.get(i, j).re).collect())
            .collect()
    }

    #[test]
    fn n2_entries() {
        let p = ChainParams::new(2.0, 1.5, 1.0, 0.0, 0.0).unwrap();
        let h = hamiltonian_for(&p, 2).unwrap();
        assert_eq!(
            re(&h),
            vec![
                vec![0.0, 3.0, 0.0],
                vec![1.0, 0.0, 1.5],
                vec![0.0, 1.5, 0.0]
            ]
        );
    }

    #[test]
    fn corner_orientation() {
        let p = ChainParams::new(2.0, 1.5, 1.0, 0.25, 0.75).unwrap();
        let h = hamiltonian_for(&p, 4).unwrap();
        assert_eq!(h.get(0, 6).re, 0.75);
        assert_eq!(h.get(6, 0).re, 0.25);
    }

    #[test]
    fn dimension_and_trace() {
        let p = ChainParams::new(2.5, 2.8, 1.0, 1e-5, 1e-5).unwrap();
        let h = hamiltonian_for(&p, 10).unwrap();
        assert_eq!(h.dim(), 19);
        assert_eq!(h.trace(), Complex64::new(0.0, 0.0));
        assert!(hamiltonian_for(&p, 1).is_err());
    }
}

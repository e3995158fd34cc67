//! Dense nonsymmetric complex eigensolver.
//!
//! Balancing, Householder reduction to upper Hessenberg form and a complex
//! single-shift QR iteration with Wilkinson shifts. Each eigenvalue is then
//! certified by inverse iteration on the original matrix.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::ComplexMatrix;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Largest matrix dimension accepted by [`eig_dense`].
pub const MAX_DIM: usize = 1000;
/// Certification threshold on `‖Hv − Ev‖ / (‖H‖_F ‖v‖)`.
pub const CERT_TOL: f64 = 1e-8;
const MAX_SWEEPS_PER_EIGENVALUE: usize = 120;

#[derive(Debug, Clone)]
pub struct DenseEigen {
    pub eigenvalues: Vec<Complex64>,
    /// Per-eigenvalue certified residual, same order as `eigenvalues`.
    pub residuals: Vec<f64>,
}

impl DenseEigen {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Eigenvalues only, still certified.
pub fn eig_dense(matrix: &ComplexMatrix) -> Result<Vec<Complex64>> {
    Ok(eig_dense_certified(matrix)?.eigenvalues)
}

pub fn eig_dense_certified(matrix: &ComplexMatrix) -> Result<DenseEigen> {
    let n = matrix.dim();
    if n == 0 || n > MAX_DIM {
        return Err(Error::Precondition(format!(
            "dense eigensolver needs 1 <= dim <= {MAX_DIM}, got {n}"
        )));
    }
    let mut a = Dense::from_matrix(matrix);
    a.balance();
    a.hessenberg(None);
    let eigenvalues = hessenberg_qr(&mut a)?;

    let cert = Certifier::new(matrix);
    let mut residuals = Vec::with_capacity(n);
    for &e in &eigenvalues {
        let (_, res) = cert.eigenvector(e);
        if !(res < CERT_TOL) {
            return Err(Error::SolverFailure(format!(
                "eigenvalue {e} failed certification: residual {res:e} >= {CERT_TOL:e}"
            )));
        }
        residuals.push(res);
    }
    Ok(DenseEigen {
        eigenvalues,
        residuals,
    })
}

/// Row-major working copy.
#[derive(Clone)]
struct Dense {
    n: usize,
    a: Vec<Complex64>,
}

impl Dense {
    fn from_matrix(m: &ComplexMatrix) -> Self {
        Dense {
            n: m.dim(),
            a: m.as_slice().to_vec(),
        }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> Complex64 {
        self.a[i * self.n + j]
    }

    #[inline]
    fn at_mut(&mut self, i: usize, j: usize) -> &mut Complex64 {
        &mut self.a[i * self.n + j]
    }

    fn identity(n: usize) -> Self {
        let mut d = Dense {
            n,
            a: vec![ZERO; n * n],
        };
        for i in 0..n {
            *d.at_mut(i, i) = ONE;
        }
        d
    }

    /// Diagonal similarity `D⁻¹ A D` with power-of-two entries that
    /// equalizes row and column norms.
    fn balance(&mut self) {
        const RADIX: f64 = 2.0;
        let n = self.n;
        loop {
            let mut converged = true;
            for i in 0..n {
                let mut c = 0.0;
                let mut r = 0.0;
                for j in 0..n {
                    if j != i {
                        c += self.at(j, i).l1_norm();
                        r += self.at(i, j).l1_norm();
                    }
                }
                if c == 0.0 || r == 0.0 {
                    continue;
                }
                let s = c + r;
                let mut f = 1.0;
                let mut g = r / RADIX;
                while c < g {
                    f *= RADIX;
                    c *= RADIX * RADIX;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= RADIX * RADIX;
                }
                if (c + r) / f < 0.95 * s {
                    converged = false;
                    for j in 0..n {
                        *self.at_mut(i, j) /= f;
                        *self.at_mut(j, i) *= f;
                    }
                }
            }
            if converged {
                break;
            }
        }
    }

    /// In-place Householder reduction; if `q` is given it accumulates the
    /// orthogonal factor so that `A_in = Q H Q^H`.
    fn hessenberg(&mut self, mut q: Option<&mut Dense>) {
        let n = self.n;
        if n < 3 {
            return;
        }
        let mut v = vec![ZERO; n];
        for k in 0..n - 2 {
            let norm: f64 = (k + 1..n).map(|i| self.at(i, k).norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                continue;
            }
            let x0 = self.at(k + 1, k);
            let phase = if x0.norm() == 0.0 { ONE } else { x0 / x0.norm() };
            let alpha = -phase * norm;
            for i in 0..n {
                v[i] = if i > k { self.at(i, k) } else { ZERO };
            }
            v[k + 1] -= alpha;
            let vnorm: f64 = v[k + 1..].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if vnorm == 0.0 {
                continue;
            }
            for z in &mut v[k + 1..] {
                *z /= vnorm;
            }
            // left: A <- (I - 2vv^H) A on rows k+1.., columns k..
            for j in k..n {
                let dot: Complex64 = (k + 1..n).map(|i| v[i].conj() * self.at(i, j)).sum();
                let f = 2.0 * dot;
                for i in k + 1..n {
                    *self.at_mut(i, j) -= v[i] * f;
                }
            }
            // right: A <- A (I - 2vv^H) on all rows, columns k+1..
            for i in 0..n {
                let dot: Complex64 = (k + 1..n).map(|j| self.at(i, j) * v[j]).sum();
                let f = 2.0 * dot;
                for j in k + 1..n {
                    *self.at_mut(i, j) -= f * v[j].conj();
                }
            }
            for i in k + 2..n {
                *self.at_mut(i, k) = ZERO;
            }
            if let Some(q) = q.as_deref_mut() {
                for i in 0..n {
                    let dot: Complex64 = (k + 1..n).map(|j| q.at(i, j) * v[j]).sum();
                    let f = 2.0 * dot;
                    for j in k + 1..n {
                        *q.at_mut(i, j) -= f * v[j].conj();
                    }
                }
            }
        }
    }
}

/// Rotation `[c s; −s̄ c]` mapping `(a, b)` to `(r, 0)`.
#[inline]
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, ZERO);
    }
    let an = a.norm();
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    let nrm = an.hypot(bn);
    (an / nrm, (a / an) * b.conj() / nrm)
}

/// Eigenvalue of the 2×2 block `[a b; c d]` closer to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = 0.5 * (a - d);
    let disc = (half * half + b * c).sqrt();
    let mid = 0.5 * (a + d);
    let l1 = mid + disc;
    let l2 = mid - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

fn hessenberg_qr(h: &mut Dense) -> Result<Vec<Complex64>> {
    let n = h.n;
    let mut eig = vec![ZERO; n];
    let mut rot: Vec<(f64, Complex64)> = vec![(1.0, ZERO); n];
    let mut hi = n - 1;
    let mut iter = 0usize;
    loop {
        if hi == 0 {
            eig[0] = h.at(0, 0);
            break;
        }
        // find the start of the unreduced block ending at hi
        let mut lo = hi;
        while lo > 0 {
            let sub = h.at(lo, lo - 1).l1_norm();
            let mut diag = h.at(lo, lo).l1_norm() + h.at(lo - 1, lo - 1).l1_norm();
            if diag == 0.0 {
                diag = (lo.saturating_sub(1)..=hi)
                    .map(|k| h.at(k, k).l1_norm())
                    .sum::<f64>()
                    .max(f64::MIN_POSITIVE);
            }
            if sub <= f64::EPSILON * diag {
                *h.at_mut(lo, lo - 1) = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h.at(hi, hi);
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > MAX_SWEEPS_PER_EIGENVALUE {
            return Err(Error::SolverFailure(format!(
                "QR iteration did not deflate row {hi} of {n} after {MAX_SWEEPS_PER_EIGENVALUE} sweeps \
                 (subdiagonal {:e})",
                h.at(hi, hi - 1).norm()
            )));
        }
        let shift = if iter % 10 == 0 {
            // exceptional shift to break cycles
            let s = h.at(hi, hi - 1).l1_norm();
            h.at(hi, hi) + Complex64::new(0.75 * s, 0.4375 * s)
        } else {
            wilkinson_shift(
                h.at(hi - 1, hi - 1),
                h.at(hi - 1, hi),
                h.at(hi, hi - 1),
                h.at(hi, hi),
            )
        };

        for k in lo..=hi {
            *h.at_mut(k, k) -= shift;
        }
        for k in lo..hi {
            let (c, s) = givens(h.at(k, k), h.at(k + 1, k));
            rot[k] = (c, s);
            for j in k..=hi {
                let x = h.at(k, j);
                let y = h.at(k + 1, j);
                *h.at_mut(k, j) = c * x + s * y;
                *h.at_mut(k + 1, j) = -s.conj() * x + c * y;
            }
            *h.at_mut(k + 1, k) = ZERO;
        }
        for k in lo..hi {
            let (c, s) = rot[k];
            for i in lo..=(k + 1).min(hi) {
                let x = h.at(i, k);
                let y = h.at(i, k + 1);
                *h.at_mut(i, k) = c * x + s.conj() * y;
                *h.at_mut(i, k + 1) = -s * x + c * y;
            }
        }
        for k in lo..=hi {
            *h.at_mut(k, k) += shift;
        }
    }
    Ok(eig)
}

/// Inverse-iteration eigenvectors of a fixed matrix.
///
/// Holds a Hessenberg factorization `A = Q H Q^H` of the unbalanced input so
/// that each solve is `O(n²)`.
pub struct Certifier<'a> {
    original: &'a ComplexMatrix,
    hess: Dense,
    q: Dense,
    norm: f64,
}

impl<'a> Certifier<'a> {
    pub fn new(original: &'a ComplexMatrix) -> Self {
        let mut hess = Dense::from_matrix(original);
        let mut q = Dense::identity(original.dim());
        hess.hessenberg(Some(&mut q));
        Certifier {
            original,
            hess,
            q,
            norm: original.frobenius_norm(),
        }
    }

    /// Unit eigenvector estimate for `e` and its relative residual
    /// `‖Av − ev‖ / ‖A‖_F`.
    pub fn eigenvector(&self, e: Complex64) -> (Vec<Complex64>, f64) {
        let n = self.hess.n;
        let scale = if self.norm > 0.0 { self.norm } else { 1.0 };
        let lu = HessLu::factor(&self.hess, e, scale);
        let mut y: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new(1.0, 0.1 * ((i * 7 + 3) % 11) as f64 / 11.0))
            .collect();
        let mut best: (Vec<Complex64>, f64) = (Vec::new(), f64::INFINITY);
        for _ in 0..3 {
            lu.solve(&mut y);
            normalize(&mut y);
            let v = self.q_mul(&y);
            let res = relative_residual(self.original, &v, e, scale);
            if res < best.1 {
                best = (v, res);
            }
            if best.1 < 1e-14 {
                break;
            }
        }
        best
    }

    fn q_mul(&self, y: &[Complex64]) -> Vec<Complex64> {
        let n = self.q.n;
        (0..n)
            .map(|i| (0..n).map(|j| self.q.at(i, j) * y[j]).sum())
            .collect()
    }
}

fn normalize(v: &mut [Complex64]) {
    let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if nrm > 0.0 && nrm.is_finite() {
        for z in v.iter_mut() {
            *z /= nrm;
        }
    }
}

/// `‖Av − ev‖ / (scale ‖v‖)`.
pub fn relative_residual(a: &ComplexMatrix, v: &[Complex64], e: Complex64, scale: f64) -> f64 {
    let av = a.mul_vec(v);
    let r: f64 = av
        .iter()
        .zip(v)
        .map(|(x, y)| (x - e * y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    r / (scale * vn)
}

/// LU factors of `H − eI` for upper Hessenberg `H`, partial pivoting
/// between adjacent rows.
struct HessLu {
    n: usize,
    u: Vec<Complex64>,
    mult: Vec<Complex64>,
    swapped: Vec<bool>,
}

impl HessLu {
    fn factor(h: &Dense, e: Complex64, scale: f64) -> Self {
        let n = h.n;
        let mut u = h.a.clone();
        for i in 0..n {
            u[i * n + i] -= e;
        }
        let mut mult = vec![ZERO; n];
        let mut swapped = vec![false; n];
        let tiny = f64::EPSILON * scale;
        for k in 0..n.saturating_sub(1) {
            let p = u[k * n + k];
            let b = u[(k + 1) * n + k];
            if b.norm() > p.norm() {
                swapped[k] = true;
                for j in k..n {
                    u.swap(k * n + j, (k + 1) * n + j);
                }
            }
            let mut piv = u[k * n + k];
            if piv.norm() < tiny {
                piv = Complex64::new(tiny, 0.0);
                u[k * n + k] = piv;
            }
            let m = u[(k + 1) * n + k] / piv;
            mult[k] = m;
            u[(k + 1) * n + k] = ZERO;
            for j in k + 1..n {
                let ukj = u[k * n + j];
                u[(k + 1) * n + j] -= m * ukj;
            }
        }
        if u[(n - 1) * n + n - 1].norm() < tiny {
            u[(n - 1) * n + n - 1] = Complex64::new(tiny, 0.0);
        }
        HessLu {
            n,
            u,
            mult,
            swapped,
        }
    }

    fn solve(&self, b: &mut [Complex64]) {
        let n = self.n;
        for k in 0..n.saturating_sub(1) {
            if self.swapped[k] {
                b.swap(k, k + 1);
            }
            let bk = b[k];
            b[k + 1] -= self.mult[k] * bk;
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for j in i + 1..n {
                s -= self.u[i * n + j] * b[j];
            }
            b[i] = s / self.u[i * n + i];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{hamiltonian_for, ChainParams};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        v
    }

    #[test]
    fn three_by_three_chain() {
        let p = ChainParams::new(2.0, 1.5, 1.0, 0.0, 0.0).unwrap();
        let ev = sorted(eig_dense(&hamiltonian_for(&p, 2).unwrap()).unwrap());
        let r = (3.0f64 + 2.25).sqrt();
        let want = [c(-r, 0.0), c(0.0, 0.0), c(r, 0.0)];
        for (a, b) in ev.iter().zip(&want) {
            assert!((a - b).norm() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn rotation_generator() {
        let m = ComplexMatrix::from_rows(&[vec![c(0.0, 0.0), c(-1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]])
            .unwrap();
        let ev = sorted(eig_dense(&m).unwrap());
        assert!((ev[0] - c(0.0, -1.0)).norm() < 1e-14);
        assert!((ev[1] - c(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn triangular_matrix_keeps_diagonal() {
        let d = [c(1.0, 2.0), c(-3.0, 0.5), c(0.25, -1.0), c(4.0, 0.0)];
        let rows: Vec<Vec<Complex64>> = (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| if j == i { d[i] } else if j > i { c(0.3 * (i + j) as f64, 0.1) } else { c(0.0, 0.0) })
                    .collect()
            })
            .collect();
        let ev = eig_dense(&ComplexMatrix::from_rows(&rows).unwrap()).unwrap();
        for want in d {
            assert!(ev.iter().any(|e| (e - want).norm() < 1e-12), "{want} missing");
        }
    }

    #[test]
    fn zero_mode_without_terminal_coupling() {
        let p = ChainParams::new(2.5, 2.8, 1.0, 0.0, 0.0).unwrap();
        for n in [5, 20, 60] {
            let h = hamiltonian_for(&p, n).unwrap();
            let ev = eig_dense(&h).unwrap();
            let m = ev.iter().map(|e| e.norm()).fold(f64::INFINITY, f64::min);
            assert!(m < 1e-12 * h.frobenius_norm(), "N={n}: {m:e}");
        }
    }

    #[test]
    fn certified_residuals_and_trace() {
        let p = ChainParams::symmetric(2.0, 1.5, 1.0, 1e-7).unwrap();
        let h = hamiltonian_for(&p, 120).unwrap();
        let out = eig_dense_certified(&h).unwrap();
        assert_eq!(out.eigenvalues.len(), 239);
        assert!(out.max_residual() < CERT_TOL);
        let sum: Complex64 = out.eigenvalues.iter().sum();
        assert!(sum.norm() < 1e-8 * h.frobenius_norm());
    }

    #[test]
    fn rejects_oversized() {
        assert!(eig_dense(&ComplexMatrix::zeros(MAX_DIM + 1)).is_err());
    }
}

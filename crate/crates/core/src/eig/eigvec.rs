use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::beta::{beta_exact, beta_taylor_leading, chi_component};
use crate::model::hamiltonian::{a_site, b_site};
use crate::model::{ChainParams, SystemSize};

#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructedState {
    /// Amplitudes in basis order `A1, B1, ..., A_N`.
    pub psi: Vec<Complex64>,
    pub c: Complex64,
    /// Relative size of the denominator used to fix `c`; small values mean
    /// `c` is ill-conditioned.
    pub conditioning: f64,
}

/// Two-wave eigenvector `β1ⁿ(1, χ1) + c β2ⁿ(1, χ2)` with `c` fixed by the
/// better conditioned of the two terminal equations.
pub fn reconstruct_eigenvector(params: &ChainParams, size: SystemSize, e: Complex64) -> Result<ReconstructedState> {
    let n = size.n();
    if e.norm() == 0.0 {
        return Ok(zero_mode(params, size));
    }
    let pair = beta_exact(params, e)?;
    if pair.degenerate {
        return Err(Error::Singular(format!("degenerate beta at E = {e}")));
    }
    let (b1, b2) = (pair.beta1, pair.beta2);
    let x1 = chi_component(params, e, b1)?;
    let x2 = chi_component(params, e, b2)?;
    let ni = n as i32;
    let tab = params.t_ab();

    // left terminal row: (t1+γ)ψB(1) + λR ψA(N) = E ψA(1)
    let left = |b: Complex64, x: Complex64| tab * b * x + params.lambda_r * b.powi(ni) - e * b;
    // right terminal row: t2 ψB(N−1) + λL ψA(1) = E ψA(N)
    let right = |b: Complex64, x: Complex64| params.t2 * b.powi(ni - 1) * x + params.lambda_l * b - e * b.powi(ni);

    let candidates = [(left(b1, x1), left(b2, x2)), (right(b1, x1), right(b2, x2))];
    let (num, den) = candidates
        .into_iter()
        .max_by(|a, b| {
            let ra = a.1.norm() / a.0.norm().max(a.1.norm()).max(f64::MIN_POSITIVE);
            let rb = b.1.norm() / b.0.norm().max(b.1.norm()).max(f64::MIN_POSITIVE);
            ra.total_cmp(&rb)
        })
        .expect("two candidates");
    let conditioning = den.norm() / num.norm().max(den.norm()).max(f64::MIN_POSITIVE);
    if den.norm() == 0.0 {
        return Err(Error::Singular(format!("weight c undetermined at E = {e}")));
    }
    let c = -num / den;

    let mut psi = vec![Complex64::new(0.0, 0.0); size.dim()];
    for cell in 1..=n {
        let k = cell as i32;
        let w1 = b1.powi(k);
        let w2 = c * b2.powi(k);
        psi[a_site(cell)] = w1 + w2;
        if cell < n {
            psi[b_site(cell)] = w1 * x1 + w2 * x2;
        }
    }
    Ok(ReconstructedState { psi, c, conditioning })
}

/// `E = 0` without terminal coupling: a single wave on the A sublattice
/// with `β = −(t1−γ)/t2`.
fn zero_mode(params: &ChainParams, size: SystemSize) -> ReconstructedState {
    let (beta_a, _) = beta_taylor_leading(params);
    let mut psi = vec![Complex64::new(0.0, 0.0); size.dim()];
    for cell in 1..=size.n() {
        psi[a_site(cell)] = beta_a.powi(cell as i32);
    }
    ReconstructedState {
        psi,
        c: Complex64::new(0.0, 0.0),
        conditioning: 1.0,
    }
}

/// `|<u, v>| / (‖u‖ ‖v‖)`.
pub fn overlap(u: &[Complex64], v: &[Complex64]) -> f64 {
    let dot: Complex64 = u.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
    let nu = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    dot.norm() / (nu * nv)
}

/// Residuals of the two terminal rows, relative to the largest term in each.
pub fn boundary_residuals(params: &ChainParams, size: SystemSize, e: Complex64, psi: &[Complex64]) -> (f64, f64) {
    let n = size.n();
    let a1 = psi[a_site(1)];
    let an = psi[a_site(n)];
    let b1 = psi[b_site(1)];
    let bl = psi[b_site(n - 1)];
    let rel = |terms: [Complex64; 3]| {
        let s = terms[0] + terms[1] - terms[2];
        let m = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
        if m == 0.0 {
            0.0
        } else {
            s.norm() / m
        }
    };
    (
        rel([params.t_ab() * b1, params.lambda_r * an, e * a1]),
        rel([params.t2 * bl, params.lambda_l * a1, e * an]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eig::dense::Certifier;
    use crate::eig::spectrum::spectrum_record;
    use crate::model::hamiltonian::build_hamiltonian;

    #[test]
    fn matches_numeric_eigenvector() {
        let p = ChainParams::symmetric(2.5, 2.8, 1.0, 1e-5).unwrap();
        let size = SystemSize::new(12).unwrap();
        let e = spectrum_record(&p, size).unwrap().e_min;
        let rec = reconstruct_eigenvector(&p, size, e).unwrap();
        let h = build_hamiltonian(&p, size);
        let (v, res) = Certifier::new(&h).eigenvector(e);
        assert!(res < 1e-10);
        let ov = overlap(&rec.psi, &v);
        assert!(ov > 1.0 - 1e-6, "overlap {ov}");
        let (l, r) = boundary_residuals(&p, size, e, &rec.psi);
        assert!(l < 1e-8 && r < 1e-8, "{l:e} {r:e}");
    }

    #[test]
    fn zero_mode_sits_on_a_sublattice() {
        for &(t1, t2, left) in &[(2.5, 2.8, true), (2.8, 1.5, false)] {
            let p = ChainParams::symmetric(t1, t2, 1.0, 0.0).unwrap();
            let size = SystemSize::new(20).unwrap();
            let rec = reconstruct_eigenvector(&p, size, Complex64::new(0.0, 0.0)).unwrap();
            assert!((1..20).all(|c| rec.psi[b_site(c)].norm() == 0.0));
            let h = build_hamiltonian(&p, size);
            let hv = h.mul_vec(&rec.psi);
            let scale = rec.psi.iter().map(|z| z.norm()).fold(0.0, f64::max) * h.frobenius_norm();
            assert!(hv.iter().all(|z| z.norm() < 1e-14 * scale));
            let first = rec.psi[a_site(1)].norm();
            let last = rec.psi[a_site(20)].norm();
            assert_eq!(first > last, left);
        }
    }
}

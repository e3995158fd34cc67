//! Smallest real eigenvalue in double-double arithmetic.
//!
//! For real `E` inside the open-chain gap both non-Bloch factors are real and
//! the consistency condition reduces to the real function
//!
//! ```text
//! r(E) = E S_N − Λ S_1 − κ E S_{N−1},   S_k = (z^k − z^{−k}) / 2,   z = β2 / e^g
//! Λ = λL e^{−g(N−1)} + λR e^{g(N−1)},   κ = λL λR / (t2 (t1+γ) e^g)
//! ```
//!
//! which has neither poles nor a spurious root at `E = 0`. Its zeros are the
//! eigenvalues, so it reaches values far below the double-precision floor of
//! a dense solver.

use num_complex::Complex64;
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::model::{ChainParams, SystemSize};

/// Points per decade of the log-spaced bracket search.
const POINTS_PER_DECADE: usize = 40;
/// Decades scanned below the search radius.
const DECADES: usize = 60;
/// Certification bound on the normalized double-double residual.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtendedRoot {
    pub e: TwoFloat,
    /// `|r(E)|` divided by its largest term, evaluated in double-double.
    pub residual: f64,
    pub bracket: (f64, f64),
}

impl ExtendedRoot {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.e.hi() + self.e.lo(), 0.0)
    }
}

/// Energy below which both `β` stay real for real `E`.
pub fn real_beta_edge(params: &ChainParams) -> f64 {
    let a = (params.t1 * params.t1 - params.gamma * params.gamma).sqrt();
    (a - params.t2.abs()).abs()
}

struct RealConsistency {
    n: i32,
    a: TwoFloat,
    b0: TwoFloat,
    c: TwoFloat,
    eg: TwoFloat,
    big_lambda: TwoFloat,
    kappa: TwoFloat,
}

impl RealConsistency {
    fn new(params: &ChainParams, size: SystemSize) -> Result<Self> {
        params.require_real_g()?;
        let t1 = TwoFloat::from(params.t1);
        let t2 = TwoFloat::from(params.t2);
        let g = TwoFloat::from(params.gamma);
        let tab = t1 + g;
        let tba = t1 - g;
        let eg = (tba / tab).sqrt();
        let n = size.n() as i32;
        let egn = eg.powi(n - 1);
        let big_lambda = TwoFloat::from(params.lambda_l) / egn + TwoFloat::from(params.lambda_r) * egn;
        let kappa = TwoFloat::from(params.lambda_l) * TwoFloat::from(params.lambda_r) / (t2 * tab * eg);
        Ok(RealConsistency {
            n,
            a: t2 * tab,
            b0: t1 * t1 - g * g + t2 * t2,
            c: t2 * tba,
            eg,
            big_lambda,
            kappa,
        })
    }

    /// Larger-modulus root of `a β² + (b0 − E²) β + c = 0`.
    fn beta2(&self, e: TwoFloat) -> TwoFloat {
        let b = self.b0 - e * e;
        let disc = b * b - 4.0 * self.a * self.c;
        let sq = disc.sqrt();
        let q = if b.hi() >= 0.0 { -(b + sq) / 2.0 } else { -(b - sq) / 2.0 };
        let r1 = q / self.a;
        let r2 = self.c / q;
        if r1.abs() >= r2.abs() {
            r1
        } else {
            r2
        }
    }

    /// `(r(E), largest term)`.
    fn eval(&self, e: TwoFloat) -> (TwoFloat, f64) {
        let z = self.beta2(e) / self.eg;
        let s = |k: i32| (z.powi(k) - z.powi(-k)) / 2.0;
        let t1 = e * s(self.n);
        let t2 = self.big_lambda * s(1);
        let t3 = self.kappa * e * s(self.n - 1);
        let scale = t1.hi().abs().max(t2.hi().abs()).max(t3.hi().abs());
        (t1 - t2 - t3, scale)
    }

    fn sign(&self, e: f64) -> f64 {
        self.eval(TwoFloat::from(e)).0.hi().signum()
    }
}

/// Real root of the consistency function nearest `E = 0` within
/// `|E| <= search_radius`.
pub fn emin_root(params: &ChainParams, size: SystemSize, search_radius: f64) -> Result<ExtendedRoot> {
    emin_root_detailed(params, size, search_radius)
}

pub fn emin_root_detailed(params: &ChainParams, size: SystemSize, search_radius: f64) -> Result<ExtendedRoot> {
    if params.lambda_l == 0.0 && params.lambda_r == 0.0 {
        return Ok(ExtendedRoot {
            e: TwoFloat::from(0.0),
            residual: 0.0,
            bracket: (0.0, 0.0),
        });
    }
    if !(search_radius > 0.0) {
        return Err(Error::Precondition(format!(
            "search radius must be positive, got {search_radius}"
        )));
    }
    let f = RealConsistency::new(params, size)?;
    let radius = search_radius.min(0.999 * real_beta_edge(params));
    if !(radius > 0.0) {
        return Err(Error::NoRoot { radius: search_radius });
    }

    let steps = DECADES * POINTS_PER_DECADE;
    let grid: Vec<f64> = (0..=steps)
        .rev()
        .map(|i| radius * 10f64.powf(-(i as f64) / POINTS_PER_DECADE as f64))
        .collect();

    let first_change = |sgn: f64| -> Option<(f64, f64)> {
        let mut prev = f.sign(sgn * grid[0]);
        for w in grid.windows(2) {
            let cur = f.sign(sgn * w[1]);
            if cur != prev {
                return Some((sgn * w[0], sgn * w[1]));
            }
            prev = cur;
        }
        None
    };
    let bracket = match (first_change(1.0), first_change(-1.0)) {
        (Some(p), Some(m)) => {
            if p.0.abs() <= m.0.abs() {
                p
            } else {
                m
            }
        }
        (Some(p), None) => p,
        (None, Some(m)) => m,
        (None, None) => return Err(Error::NoRoot { radius }),
    };

    let mut lo = TwoFloat::from(bracket.0);
    let mut hi = TwoFloat::from(bracket.1);
    let s_lo = f.eval(lo).0.hi().signum();
    for _ in 0..200 {
        let mid = (lo + hi) / 2.0;
        if mid == lo || mid == hi {
            break;
        }
        let (v, _) = f.eval(mid);
        if v.hi() == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if v.hi().signum() == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
        if ((hi - lo).abs() / mid.abs()).hi() < 1e-31 {
            break;
        }
    }
    let e = (lo + hi) / 2.0;
    let (v, scale) = f.eval(e);
    let residual = if scale == 0.0 { v.hi().abs() } else { v.hi().abs() / scale };
    if !(residual < ROOT_RESIDUAL_TOL) {
        return Err(Error::SolverFailure(format!(
            "extended-precision root {} has residual {residual:e}",
            e.hi()
        )));
    }
    Ok(ExtendedRoot {
        e,
        residual,
        bracket,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eig::dense::eig_dense;
    use crate::eig::spectrum::select_emin;
    use crate::model::hamiltonian::build_hamiltonian;

    fn size(n: usize) -> SystemSize {
        SystemSize::new(n).unwrap()
    }

    #[test]
    fn matches_dense_solver() {
        for &(t1, t2, lam, n) in &[
            (2.5, 2.8, 1e-5, 10usize),
            (2.5, 2.8, 1e-5, 20),
            (2.8, 1.5, 1e-5, 12),
            (2.0, 1.5, 1e-7, 15),
        ] {
            let p = ChainParams::symmetric(t1, t2, 1.0, lam).unwrap();
            let dense = select_emin(&eig_dense(&build_hamiltonian(&p, size(n))).unwrap()).unwrap();
            let root = emin_root(&p, size(n), 10.0 * dense.norm()).unwrap();
            let rel = (root.value() - dense).norm() / dense.norm();
            assert!(rel < 1e-8, "{p:?} N={n}: {} vs {dense}", root.value());
        }
    }

    #[test]
    fn below_double_precision_floor() {
        let p = ChainParams::symmetric(2.8, 1.5, 1.0, 1e-9).unwrap();
        let root = emin_root(&p, size(80), 1e-6).unwrap();
        assert!(root.value().norm() < 1e-13);
        assert!(root.value().norm() > 0.0);
        assert!(root.residual < ROOT_RESIDUAL_TOL);
    }

    #[test]
    fn zero_without_terminal_coupling() {
        let p = ChainParams::symmetric(2.5, 2.8, 1.0, 0.0).unwrap();
        assert_eq!(emin_root(&p, size(30), 1e-3).unwrap().value(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn no_root_reported() {
        // E_min is complex past saturation
        let p = ChainParams::symmetric(2.5, 2.8, 1.0, 1e-5).unwrap();
        assert!(matches!(emin_root(&p, size(100), 1e-3), Err(Error::NoRoot { .. })));
    }
}

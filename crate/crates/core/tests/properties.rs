use num_complex::Complex64;
use proptest::prelude::*;

use ntos::analytic::linear::zero_energy_factors;
use ntos::analytic::linear_law;
use ntos::eig::{eig_dense, select_emin};
use ntos::experiments::phase::boundary_distance;
use ntos::model::beta::{beta_exact, beta_product, beta_taylor, characteristic_residual, TaylorMatch};
use ntos::model::topology::inequality_winding;
use ntos::model::{build_hamiltonian, winding_number, ChainParams, ComplexMatrix, SystemSize};

fn chain() -> impl Strategy<Value = ChainParams> {
    (-4.0..4.0f64, 0.2..4.0f64, 0.2..1.5f64, -1e-3..1e-3f64, -1e-3..1e-3f64)
        .prop_filter("t1 away from ±gamma", |(t1, _, g, _, _)| (t1.abs() - g).abs() > 0.05)
        .prop_map(|(t1, t2, g, l, r)| ChainParams::new(t1, t2, g, l, r).unwrap())
}

fn energy() -> impl Strategy<Value = Complex64> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

/// Determinant by partial-pivot LU.
fn det(m: &ComplexMatrix) -> Complex64 {
    let n = m.dim();
    let mut a: Vec<Vec<Complex64>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j)).collect()).collect();
    let mut d = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let piv = (k..n).max_by(|&i, &j| a[i][k].norm().total_cmp(&a[j][k].norm())).unwrap();
        if a[piv][k].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if piv != k {
            a.swap(piv, k);
            d = -d;
        }
        d *= a[k][k];
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                let v = a[k][j];
                a[i][j] -= f * v;
            }
        }
    }
    d
}

/// Characteristic polynomial coefficients (leading first) by
/// Faddeev-LeVerrier.
fn charpoly(m: &ComplexMatrix) -> Vec<Complex64> {
    let n = m.dim();
    let mul = |a: &[Vec<Complex64>], b: &[Vec<Complex64>]| -> Vec<Vec<Complex64>> {
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
            .collect()
    };
    let h: Vec<Vec<Complex64>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j)).collect()).collect();
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    let mut mk: Vec<Vec<Complex64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }).collect())
        .collect();
    for k in 1..=n {
        let am = mul(&h, &mk);
        let c = -(0..n).map(|i| am[i][i]).sum::<Complex64>() / k as f64;
        coeffs.push(c);
        mk = am;
        for (i, row) in mk.iter_mut().enumerate() {
            row[i] += c;
        }
    }
    coeffs
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn beta_product_is_energy_independent(p in chain(), e in energy()) {
        let b = beta_exact(&p, e).unwrap();
        let target = beta_product(&p);
        prop_assert!((b.product() - target).norm() <= 1e-12 * target.abs().max(1.0));
        prop_assert!(b.beta1.norm() <= b.beta2.norm() * (1.0 + 1e-12));
    }

    #[test]
    fn roots_solve_the_characteristic_equation(p in chain(), e in energy()) {
        let b = beta_exact(&p, e).unwrap();
        let scale = p.t2.abs() * p.t_ab().abs() + (p.t1 * p.t1 + p.t2 * p.t2 + p.gamma * p.gamma + e.norm_sqr());
        for beta in [b.beta1, b.beta2] {
            let r = characteristic_residual(&p, e, beta).norm();
            prop_assert!(r <= 1e-10 * scale * beta.norm().max(1.0).powi(2), "{r:e}");
        }
    }

    #[test]
    fn numeric_winding_matches_inequality_rule(t1 in -4.0..4.0f64, t2 in -4.0..4.0f64) {
        prop_assume!(boundary_distance(t1, t2, 1.0) > 0.02 && t2.abs() > 0.02 && (t1.abs() - 1.0).abs() > 0.02);
        let p = ChainParams::new(t1, t2, 1.0, 0.0, 0.0).unwrap();
        prop_assert_eq!(winding_number(&p, 64).unwrap(), inequality_winding(&p).unwrap());
    }

    #[test]
    fn taylor_error_is_fourth_order(t1 in 1.5..4.0f64, t2 in 0.5..4.0f64) {
        let p = ChainParams::new(t1, t2, 1.0, 0.0, 0.0).unwrap();
        let d = p.taylor_denominator();
        prop_assume!(d.abs() > 0.5 && (t2 - (t1 - 1.0)).abs() > 0.3 && (t2 - (t1 + 1.0)).abs() > 0.3);
        let err = |x: f64| {
            let e = Complex64::new(x, 0.0);
            let exact = beta_exact(&p, e).unwrap();
            let (a, b) = beta_taylor(&p, e).unwrap();
            let (small, large) = match exact.taylor_match {
                TaylorMatch::AIsBeta1 => (a, b),
                TaylorMatch::BIsBeta1 => (b, a),
            };
            (exact.beta1 - small).norm().max((exact.beta2 - large).norm())
        };
        let h = 0.01 * d.abs().sqrt();
        let ratio = err(2.0 * h) / err(h);
        prop_assert!((ratio - 16.0).abs() < 1.0, "ratio {ratio}");
    }

    #[test]
    fn zero_energy_identities(p in chain()) {
        prop_assume!(p.t1.abs() > p.gamma + 0.1);
        prop_assume!(boundary_distance(p.t1, p.t2, p.gamma) > 0.05 && p.taylor_denominator().abs() > 0.05);
        if let Ok(f) = zero_energy_factors(&p) {
            prop_assert!((f.growth_from_theta - f.growth_closed).norm() <= 1e-10 * f.growth_closed.abs());
            prop_assert!((f.amplitude_from_theta - f.amplitude_closed).norm() <= 1e-10 * f.amplitude_closed.abs());
        }
    }

    #[test]
    fn emin_selection_is_order_and_scale_invariant(
        vals in prop::collection::vec((-5.0..5.0f64, -5.0..5.0f64), 1..30),
        shift in 0usize..30,
        scale in 0.01..100.0f64,
    ) {
        let v: Vec<Complex64> = vals.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
        let e = select_emin(&v).unwrap();
        let mut rotated = v.clone();
        rotated.rotate_left(shift % v.len());
        prop_assert_eq!(select_emin(&rotated).unwrap(), e);
        let mut reversed = v.clone();
        reversed.reverse();
        prop_assert_eq!(select_emin(&reversed).unwrap(), e);
        let scaled: Vec<Complex64> = v.iter().map(|z| z * scale).collect();
        let es = select_emin(&scaled).unwrap();
        prop_assert!((es - e * scale).norm() <= 1e-12 * es.norm().max(1e-300));
    }

    #[test]
    fn intercept_shifts_by_ln_lambda(p in chain(), k in 1e-3..1e3f64) {
        prop_assume!(p.t1.abs() > p.gamma + 0.1 && p.lambda_l != 0.0 && p.lambda_r != 0.0);
        if let Ok(a) = linear_law(&p) {
            let b = linear_law(&p.with_lambdas(p.lambda_l * k, p.lambda_r * k)).unwrap();
            prop_assert!((b.intercept - a.intercept - k.ln()).abs() < 1e-12);
            prop_assert_eq!(a.slope, b.slope);
        }
    }

    #[test]
    fn eigenvalues_match_trace_and_determinant(p in chain(), n in 2usize..=6) {
        let h = build_hamiltonian(&p, SystemSize::new(n).unwrap());
        let ev = eig_dense(&h).unwrap();
        prop_assert_eq!(ev.len(), 2 * n - 1);
        let scale = h.frobenius_norm();
        prop_assert!((ev.iter().sum::<Complex64>() - h.trace()).norm() < 1e-10 * scale);
        let prod: Complex64 = ev.iter().product();
        let d = det(&h);
        prop_assert!((prod - d).norm() <= 1e-9 * scale.powi(2 * n as i32 - 1), "{prod} vs {d}");
    }

    #[test]
    fn eigenvalues_are_characteristic_roots(p in chain(), n in 2usize..=4) {
        let h = build_hamiltonian(&p, SystemSize::new(n).unwrap());
        let c = charpoly(&h);
        let scale = h.frobenius_norm().max(1.0);
        for e in eig_dense(&h).unwrap() {
            let (v, mag) = c.iter().fold((Complex64::new(0.0, 0.0), 0.0), |(v, m), ck| {
                (v * e + ck, m * e.norm() + ck.norm())
            });
            prop_assert!(v.norm() <= 1e-10 * mag.max(scale), "p({e}) = {v}");
        }
    }
}

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::beta::exp_g;
use crate::model::ChainParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveKind {
    /// `β = e^{ik}`.
    Pbc,
    /// `β = e^g e^{iθ}`.
    Gbz,
}

impl CurveKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CurveKind::Pbc => "PBC",
            CurveKind::Gbz => "GBZ",
        }
    }
}

/// Bulk spectrum of the homogeneous chain along a closed `β` contour.
///
/// `samples` holds one continuous branch `E(φ)` followed by its negative, so
/// together they trace both bands in order; `phases` repeats the contour
/// parameter for each half.
#[derive(Debug, Clone, PartialEq)]
pub struct BulkCurve {
    pub kind: CurveKind,
    pub samples: Vec<Complex64>,
    pub phases: Vec<f64>,
}

fn energy_squared(params: &ChainParams, beta: Complex64) -> Complex64 {
    (params.t_ab() + params.t2 / beta) * (params.t_ba() + params.t2 * beta)
}

pub fn bulk_curves(params: &ChainParams, kind: CurveKind, samples: usize) -> Result<BulkCurve> {
    if samples < 16 {
        return Err(Error::Precondition(format!("bulk curve needs >= 16 samples, got {samples}")));
    }
    let radius = match kind {
        CurveKind::Pbc => 1.0,
        CurveKind::Gbz => exp_g(params)?,
    };
    let phases: Vec<f64> = (0..samples)
        .map(|j| -PI + 2.0 * PI * j as f64 / samples as f64)
        .collect();
    let mut branch = Vec::with_capacity(samples);
    let mut prev: Option<Complex64> = None;
    for &phi in &phases {
        let e = energy_squared(params, Complex64::from_polar(radius, phi)).sqrt();
        // keep the square root continuous along the contour
        let e = match prev {
            Some(p) if (e + p).norm() < (e - p).norm() => -e,
            _ => e,
        };
        branch.push(e);
        prev = Some(e);
    }
    let mut all = branch.clone();
    all.extend(branch.iter().map(|e| -e));
    let mut ph = phases.clone();
    ph.extend_from_slice(&phases);
    Ok(BulkCurve {
        kind,
        samples: all,
        phases: ph,
    })
}

impl BulkCurve {
    /// Net winding of the sampled bands around `E = 0`.
    ///
    /// If one branch closes on its negative the two halves form a single
    /// loop; otherwise each half is its own loop. Loops are summed.
    pub fn winding_about_origin(&self) -> i32 {
        let half = self.samples.len() / 2;
        let a = &self.samples[..half];
        let last = a[half - 1];
        let joins_negative = (last + a[0]).norm() < (last - a[0]).norm();
        let loops: Vec<Vec<Complex64>> = if joins_negative {
            vec![self.samples.clone()]
        } else {
            vec![a.to_vec(), self.samples[half..].to_vec()]
        };
        loops
            .iter()
            .map(|l| {
                let total: f64 = (0..l.len())
                    .map(|i| (l[(i + 1) % l.len()] / l[i]).arg())
                    .sum();
                (total / (2.0 * PI)).round() as i32
            })
            .sum()
    }

    /// Smallest distance from `e` to any sample.
    pub fn distance_to(&self, e: Complex64) -> f64 {
        self.samples
            .iter()
            .map(|s| (s - e).norm())
            .fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::beta::beta_exact;

    #[test]
    fn hermitian_limit_is_real() {
        let p = ChainParams::symmetric(2.0, 1.0, 0.0, 0.0).unwrap();
        let c = bulk_curves(&p, CurveKind::Pbc, 64).unwrap();
        assert!(c.samples.iter().all(|e| e.im.abs() < 1e-12 && e.re.abs() <= 3.0 + 1e-12));
    }

    #[test]
    fn encloses_origin_only_in_point_gap() {
        let pg = bulk_curves(&ChainParams::symmetric(2.0, 1.5, 1.0, 0.0).unwrap(), CurveKind::Pbc, 256).unwrap();
        assert_eq!(pg.winding_about_origin().abs(), 1);
        let lg = bulk_curves(&ChainParams::symmetric(1.5, 2.8, 1.0, 0.0).unwrap(), CurveKind::Pbc, 256).unwrap();
        assert_eq!(lg.winding_about_origin(), 0);
    }

    #[test]
    fn contour_moduli() {
        let p = ChainParams::symmetric(2.5, 2.8, 1.0, 0.0).unwrap();
        for e in bulk_curves(&p, CurveKind::Pbc, 64).unwrap().samples {
            let b = beta_exact(&p, e).unwrap();
            let d = (b.beta1.norm() - 1.0).abs().min((b.beta2.norm() - 1.0).abs());
            assert!(d < 1e-8, "{e}: {d:e}");
        }
        for e in bulk_curves(&p, CurveKind::Gbz, 64).unwrap().samples {
            let b = beta_exact(&p, e).unwrap();
            // the band edges are double roots, known only to sqrt(eps)
            if (b.beta1 - b.beta2).norm() < 1e-6 {
                continue;
            }
            assert!((b.beta1.norm() - b.beta2.norm()).abs() < 1e-8, "{e}");
        }
    }
}

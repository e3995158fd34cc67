use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::params::{ChainParams, Side};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GapClass {
    /// Line gap: the PBC spectrum does not enclose `E = 0`.
    LG,
    /// Point gap: the PBC spectrum winds around `E = 0`.
    PG,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TopologySigns {
    pub cls: GapClass,
    pub winding: i32,
    pub s_t: i32,
    pub s_g: i32,
    pub lambda_selected: Side,
    pub g: f64,
    pub exp_g: f64,
}

impl TopologySigns {
    pub fn is_pg(&self) -> bool {
        self.cls == GapClass::PG
    }
}

fn sign_or_degenerate(x: f64, what: &str) -> Result<i32> {
    if x > 0.0 {
        Ok(1)
    } else if x < 0.0 {
        Ok(-1)
    } else {
        Err(Error::BoundaryDegenerate(format!("{what} vanishes")))
    }
}

/// `|t2/(t1+γ)|` and `|(t1−γ)/t2|`, the moduli of the two non-Bloch factors
/// at `E = 0` (`beta_b` and `beta_a`).
pub fn zero_energy_moduli(params: &ChainParams) -> Result<(f64, f64)> {
    if params.t2 == 0.0 || params.t_ab() == 0.0 {
        return Err(Error::Precondition("t2 and t1 + gamma must be nonzero".into()));
    }
    Ok((
        (params.t2 / params.t_ab()).abs(),
        (params.t_ba() / params.t2).abs(),
    ))
}

/// Winding number from the inequality rule alone, without needing `g`.
///
/// Both moduli below one gives `+1`, both above one `-1`, straddling gives `0`.
pub fn inequality_winding(params: &ChainParams) -> Result<i32> {
    let (rb, ra) = zero_energy_moduli(params)?;
    if rb == 1.0 || ra == 1.0 {
        return Err(Error::BoundaryDegenerate(format!(
            "|t2| = |t1 ± gamma| at t1 = {}, t2 = {}, gamma = {}",
            params.t1, params.t2, params.gamma
        )));
    }
    Ok(match (rb < 1.0, ra < 1.0) {
        (true, true) => 1,
        (false, false) => -1,
        _ => 0,
    })
}

pub fn classify_topology(params: &ChainParams) -> Result<TopologySigns> {
    let winding = inequality_winding(params)?;
    let (rb, ra) = zero_energy_moduli(params)?;
    let s_t = sign_or_degenerate(ra - rb, "|(t1-gamma)/t2| - |t2/(t1+gamma)|")?;
    params.require_real_g()?;
    let ratio = params.t_ba() / params.t_ab();
    let g = 0.5 * ratio.ln();
    let s_g = sign_or_degenerate(g, "g")?;
    Ok(TopologySigns {
        cls: if winding == 0 { GapClass::LG } else { GapClass::PG },
        winding,
        s_t,
        s_g,
        lambda_selected: if s_g < 0 { Side::L } else { Side::R },
        g,
        exp_g: ratio.sqrt(),
    })
}

/// `det H(k)` of the periodic chain.
pub fn bloch_determinant(params: &ChainParams, k: f64) -> Complex64 {
    let e = Complex64::from_polar(1.0, k);
    (params.t_ab() + params.t2 * e.conj()) * (params.t_ba() + params.t2 * e)
}

const MAX_WINDING_SAMPLES: usize = 1 << 22;

/// Winding of `det H(k)` around the origin as `k` runs over `[−π, π]`,
/// by phase unwrapping. The grid is doubled until every phase step is
/// below `π/2`.
pub fn winding_number(params: &ChainParams, resolution: usize) -> Result<i32> {
    if resolution < 64 {
        return Err(Error::Precondition(format!(
            "winding resolution {resolution} < 64"
        )));
    }
    let mut m = resolution;
    loop {
        match unwrap_phase(params, m)? {
            Some(total) => return Ok((total / (2.0 * PI)).round() as i32),
            None if m < MAX_WINDING_SAMPLES => m *= 2,
            None => {
                return Err(Error::SolverFailure(format!(
                    "phase steps of det H(k) stay >= pi/2 at {m} samples"
                )))
            }
        }
    }
}

fn unwrap_phase(params: &ChainParams, m: usize) -> Result<Option<f64>> {
    let k_at = |j: usize| -PI + 2.0 * PI * j as f64 / m as f64;
    let sample = |j: usize| -> Result<Complex64> {
        let k = k_at(j);
        let d = bloch_determinant(params, k);
        if d.norm() < 1e-12 {
            return Err(Error::GapClosed { k, value: d.norm() });
        }
        Ok(d)
    };
    let mut prev = sample(0)?;
    let mut total = 0.0;
    for j in 1..=m {
        let cur = sample(j)?;
        let step = (cur / prev).arg();
        if step.abs() >= PI / 2.0 {
            return Ok(None);
        }
        total += step;
        prev = cur;
    }
    Ok(Some(total))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(t1: f64, t2: f64, g: f64) -> ChainParams {
        ChainParams::new(t1, t2, g, 0.0, 0.0).unwrap()
    }

    #[test]
    fn reference_parameter_points() {
        let s = classify_topology(&p(2.0, 1.5, 1.0)).unwrap();
        assert_eq!((s.cls, s.winding, s.s_t, s.s_g), (GapClass::PG, 1, 1, -1));
        assert_eq!(s.lambda_selected, Side::L);

        let s = classify_topology(&p(1.5, 2.8, 1.0)).unwrap();
        assert_eq!((s.cls, s.winding), (GapClass::LG, 0));

        let s = classify_topology(&p(2.5, 2.8, 1.0)).unwrap();
        assert_eq!((s.cls, s.winding, s.s_t, s.s_g), (GapClass::PG, 1, -1, -1));
        assert!((s.exp_g - 0.654_654).abs() < 1e-6);
    }

    #[test]
    fn pg_sign_relation() {
        for &(t1, t2) in &[(2.0, 1.5), (-2.0, 1.5), (2.5, -2.8), (-2.5, 2.8), (3.0, 3.5)] {
            let s = classify_topology(&p(t1, t2, 1.0)).unwrap();
            if s.is_pg() {
                assert_eq!(s.s_g, -s.winding, "t1={t1} t2={t2}");
            }
        }
    }

    #[test]
    fn boundary_rejected() {
        assert!(matches!(
            classify_topology(&p(2.0, 3.0, 1.0)),
            Err(Error::BoundaryDegenerate(_))
        ));
        assert!(matches!(
            winding_number(&p(2.0, 3.0, 1.0), 64),
            Err(Error::GapClosed { .. })
        ));
    }

    #[test]
    fn numeric_winding() {
        assert_eq!(winding_number(&p(2.0, 1.5, 1.0), 64).unwrap(), 1);
        assert_eq!(winding_number(&p(-2.0, 1.5, 1.0), 64).unwrap(), -1);
        assert_eq!(winding_number(&p(1.5, 2.8, 1.0), 64).unwrap(), 0);
        assert_eq!(winding_number(&p(2.0, 1.0, 0.0), 64).unwrap(), 0);
        assert!(winding_number(&p(2.0, 1.0, 0.0), 10).is_err());
    }

    #[test]
    fn winding_refines_near_boundary() {
        // factor (t1-γ) + t2 e^{ik} passes within 1e-3 of the origin
        let q = p(2.0, 1.001, 1.0);
        assert_eq!(winding_number(&q, 64).unwrap(), inequality_winding(&q).unwrap());
    }
}

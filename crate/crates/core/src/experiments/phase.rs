use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{linear_law, saturation_prediction};
use crate::error::{Error, Result};
use crate::model::topology::inequality_winding;
use crate::model::{winding_number, ChainParams};

pub const MAX_AXIS_POINTS: usize = 512;
pub const DEFAULT_TUBE: f64 = 0.05;
const WINDING_RESOLUTION: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseQuantity {
    Slope,
    Intercept,
    Winding,
    NC,
    LnEC,
}

impl PhaseQuantity {
    pub fn as_str(self) -> &'static str {
        match self {
            PhaseQuantity::Slope => "slope",
            PhaseQuantity::Intercept => "intercept",
            PhaseQuantity::Winding => "winding",
            PhaseQuantity::NC => "n_c",
            PhaseQuantity::LnEC => "ln_e_c",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "slope" => PhaseQuantity::Slope,
            "intercept" => PhaseQuantity::Intercept,
            "winding" => PhaseQuantity::Winding,
            "n_c" | "N_c" => PhaseQuantity::NC,
            "ln_e_c" | "ln_E_c" => PhaseQuantity::LnEC,
            _ => return Err(Error::Config(format!("unknown phase quantity {s:?}"))),
        })
    }
}

/// Evenly spaced `count` points from `lo` to `hi` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Axis {
    /// Parse `lo:hi:count`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::Config(format!("grid axis must be lo:hi:count, got {text:?}"));
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let lo = parts[0].trim().parse().map_err(|_| bad())?;
        let hi = parts[1].trim().parse().map_err(|_| bad())?;
        let count = parts[2].trim().parse().map_err(|_| bad())?;
        Ok(Axis { lo, hi, count })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.lo];
        }
        let step = (self.hi - self.lo) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.lo + step * i as f64).collect()
    }

    fn validate(&self) -> Result<()> {
        if self.count == 0 || self.count > MAX_AXIS_POINTS {
            return Err(Error::Precondition(format!(
                "axis needs 1..={MAX_AXIS_POINTS} points, got {}",
                self.count
            )));
        }
        if !(self.lo.is_finite() && self.hi.is_finite()) || (self.count > 1 && self.lo >= self.hi) {
            return Err(Error::Precondition(format!("bad axis bounds {}..{}", self.lo, self.hi)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpec {
    pub t1: Axis,
    pub t2: Axis,
    pub gamma: f64,
    pub lambda_l: f64,
    pub lambda_r: f64,
    pub quantity: PhaseQuantity,
    /// Half-width of the excluded band around the phase boundaries and, for
    /// the analytic quantities, around `t1² = t2² ± γ²`.
    pub tube: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaskReason {
    BoundaryTube,
    RedLineTube,
    NotPointGap,
    FormulaDomain,
}

impl MaskReason {
    pub fn as_str(self) -> &'static str {
        match self {
            MaskReason::BoundaryTube => "boundary_tube",
            MaskReason::RedLineTube => "red_line_tube",
            MaskReason::NotPointGap => "not_point_gap",
            MaskReason::FormulaDomain => "formula_domain",
        }
    }
}

/// Cell `(i, j)` sits at `(t1_axis[i], t2_axis[j])`; `values[i][j]` is `None`
/// exactly when `mask[i][j]` is set.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseGrid {
    pub spec: PhaseSpec,
    pub t1_axis: Vec<f64>,
    pub t2_axis: Vec<f64>,
    pub values: Vec<Vec<Option<f64>>>,
    pub mask: Vec<Vec<Option<MaskReason>>>,
}

impl PhaseGrid {
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, Option<f64>, Option<MaskReason>)> + '_ {
        self.t1_axis.iter().enumerate().flat_map(move |(i, &t1)| {
            self.t2_axis
                .iter()
                .enumerate()
                .map(move |(j, &t2)| (t1, t2, self.values[i][j], self.mask[i][j]))
        })
    }

    pub fn unmasked(&self) -> usize {
        self.mask.iter().flatten().filter(|m| m.is_none()).count()
    }
}

/// Distance from `(t1, t2)` to the lines `|t2| = |t1 ± γ|`.
pub fn boundary_distance(t1: f64, t2: f64, gamma: f64) -> f64 {
    [t1 - gamma, t1 + gamma]
        .iter()
        .flat_map(|&c| [(t2 - c).abs(), (t2 + c).abs()])
        .fold(f64::INFINITY, f64::min)
        / std::f64::consts::SQRT_2
}

/// First-order distance to the curves `t1² − t2² = ±γ²`.
pub fn red_line_distance(t1: f64, t2: f64, gamma: f64) -> f64 {
    let r = 2.0 * (t1 * t1 + t2 * t2).sqrt();
    let base = t1 * t1 - t2 * t2;
    let g2 = gamma * gamma;
    (base - g2).abs().min((base + g2).abs()) / r
}

fn cell(spec: &PhaseSpec, t1: f64, t2: f64) -> std::result::Result<f64, MaskReason> {
    if boundary_distance(t1, t2, spec.gamma) < spec.tube {
        return Err(MaskReason::BoundaryTube);
    }
    let params = ChainParams::new(t1, t2, spec.gamma, spec.lambda_l, spec.lambda_r)
        .map_err(|_| MaskReason::FormulaDomain)?;
    if spec.quantity == PhaseQuantity::Winding {
        inequality_winding(&params).map_err(|_| MaskReason::FormulaDomain)?;
        return winding_number(&params, WINDING_RESOLUTION)
            .map(f64::from)
            .map_err(|_| MaskReason::FormulaDomain);
    }
    if red_line_distance(t1, t2, spec.gamma) < spec.tube {
        return Err(MaskReason::RedLineTube);
    }
    let analytic = match spec.quantity {
        PhaseQuantity::Slope => linear_law(&params).map(|l| l.slope),
        PhaseQuantity::Intercept => linear_law(&params).map(|l| l.intercept),
        PhaseQuantity::NC | PhaseQuantity::LnEC => {
            if inequality_winding(&params).map_err(|_| MaskReason::FormulaDomain)? == 0 {
                return Err(MaskReason::NotPointGap);
            }
            saturation_prediction(&params).map(|s| {
                if spec.quantity == PhaseQuantity::NC {
                    s.n_c
                } else {
                    s.e_c.ln()
                }
            })
        }
        PhaseQuantity::Winding => unreachable!(),
    };
    analytic
        .ok()
        .filter(|v| v.is_finite())
        .ok_or(MaskReason::FormulaDomain)
}

pub fn phase_grid(spec: &PhaseSpec) -> Result<PhaseGrid> {
    spec.t1.validate()?;
    spec.t2.validate()?;
    if !(spec.tube >= 0.0) || !spec.gamma.is_finite() {
        return Err(Error::Precondition("tube must be >= 0 and gamma finite".into()));
    }
    let t1_axis = spec.t1.values();
    let t2_axis = spec.t2.values();
    let rows: Vec<Vec<std::result::Result<f64, MaskReason>>> = t1_axis
        .par_iter()
        .map(|&t1| t2_axis.iter().map(|&t2| cell(spec, t1, t2)).collect())
        .collect();
    let values = rows
        .iter()
        .map(|r| r.iter().map(|c| c.ok()).collect())
        .collect();
    let mask = rows
        .iter()
        .map(|r| r.iter().map(|c| c.err()).collect())
        .collect();
    Ok(PhaseGrid {
        spec: *spec,
        t1_axis,
        t2_axis,
        values,
        mask,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(quantity: PhaseQuantity, count: usize) -> PhaseSpec {
        PhaseSpec {
            t1: Axis { lo: -4.0, hi: 4.0, count },
            t2: Axis { lo: -4.0, hi: 4.0, count },
            gamma: 1.0,
            lambda_l: 1e-7,
            lambda_r: 1e-7,
            quantity,
            tube: DEFAULT_TUBE,
        }
    }

    #[test]
    fn axes() {
        let a = Axis::parse("-4:4:161").unwrap();
        let v = a.values();
        assert_eq!(v.len(), 161);
        assert_eq!((v[0], v[160]), (-4.0, 4.0));
        assert!(Axis::parse("0:1").is_err());
        assert!(Axis { lo: 0.0, hi: 1.0, count: 513 }.validate().is_err());
    }

    #[test]
    fn winding_agrees_with_inequality() {
        let g = phase_grid(&spec(PhaseQuantity::Winding, 41)).unwrap();
        let mut checked = 0;
        for (t1, t2, v, _) in g.cells() {
            if let Some(w) = v {
                let p = ChainParams::new(t1, t2, 1.0, 0.0, 0.0).unwrap();
                assert_eq!(w as i32, inequality_winding(&p).unwrap(), "({t1}, {t2})");
                checked += 1;
            }
        }
        assert!(checked > 1200);
    }

    #[test]
    fn masked_cells_have_no_value() {
        let g = phase_grid(&spec(PhaseQuantity::NC, 33)).unwrap();
        for i in 0..33 {
            for j in 0..33 {
                assert_eq!(g.values[i][j].is_none(), g.mask[i][j].is_some());
            }
        }
        assert!(g.mask.iter().flatten().any(|m| *m == Some(MaskReason::NotPointGap)));
        assert!(g.values.iter().flatten().flatten().all(|v| *v > 2.0));
    }

    #[test]
    fn slope_sign_follows_phase() {
        let g = phase_grid(&spec(PhaseQuantity::Slope, 33)).unwrap();
        for (t1, t2, v, _) in g.cells() {
            if let Some(s) = v {
                let p = ChainParams::new(t1, t2, 1.0, 0.0, 0.0).unwrap();
                let w = inequality_winding(&p).unwrap();
                assert_eq!(s > 0.0, w != 0, "({t1}, {t2}): {s}");
            }
        }
    }
}

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{linear_law, unidirectional_law, LinearLaw};
use crate::eig::{spectrum_record, SpectrumRecord};
use crate::error::{Error, Result};
use crate::model::{ChainParams, Side, SystemSize};

pub const MAX_SWEEP_N: usize = 200;

/// A size at which the spectrum could not be certified.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepFailure {
    pub n: usize,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub params: ChainParams,
    /// Successful records, strictly increasing in `N`.
    pub records: Vec<SpectrumRecord>,
    /// Predicted `ln|E_min|`, aligned with `records`; `None` when no law
    /// applies to these couplings.
    pub predictions: Vec<Option<f64>>,
    pub law: Option<LinearLaw>,
    pub failures: Vec<SweepFailure>,
}

impl SweepResult {
    pub fn record(&self, n: usize) -> Option<&SpectrumRecord> {
        self.records
            .binary_search_by_key(&n, |r| r.n)
            .ok()
            .map(|i| &self.records[i])
    }

    pub fn is_complete(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The law that should describe a sweep: unidirectional when exactly one
/// terminal coupling vanishes, bidirectional otherwise.
pub fn prediction_law(params: &ChainParams) -> Result<LinearLaw> {
    match (params.lambda_l == 0.0, params.lambda_r == 0.0) {
        (true, false) => unidirectional_law(params, Side::L),
        (false, true) => unidirectional_law(params, Side::R),
        _ => linear_law(params),
    }
}

/// Parse `a:b[:step]`.
pub fn parse_n_range(text: &str) -> Result<Vec<usize>> {
    let bad = || Error::Config(format!("N range must be a:b[:step], got {text:?}"));
    let parts: Vec<usize> = text
        .split(':')
        .map(|s| s.trim().parse::<usize>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let (a, b, step) = match parts[..] {
        [a, b] => (a, b, 1),
        [a, b, s] if s > 0 => (a, b, s),
        _ => return Err(bad()),
    };
    Ok((a..=b).step_by(step).collect())
}

pub fn nsweep(params: &ChainParams, n_min: usize, n_max: usize) -> Result<SweepResult> {
    if n_min >= n_max {
        return Err(Error::Precondition(format!("need N_min < N_max, got {n_min}..{n_max}")));
    }
    nsweep_sizes(params, &(n_min..=n_max).collect::<Vec<_>>())
}

/// Sweep over an explicit, strictly increasing list of sizes.
pub fn nsweep_sizes(params: &ChainParams, sizes: &[usize]) -> Result<SweepResult> {
    params.validate()?;
    if sizes.is_empty() || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("sizes must be nonempty and strictly increasing".into()));
    }
    if sizes[0] < 2 || sizes[sizes.len() - 1] > MAX_SWEEP_N {
        return Err(Error::Precondition(format!("sizes must lie in 2..={MAX_SWEEP_N}")));
    }
    let outcomes: Vec<(usize, Result<SpectrumRecord>)> = sizes
        .par_iter()
        .map(|&n| (n, SystemSize::new(n).and_then(|s| spectrum_record(params, s))))
        .collect();
    let law = prediction_law(params).ok();
    let mut records = Vec::with_capacity(sizes.len());
    let mut failures = Vec::new();
    for (n, out) in outcomes {
        match out {
            Ok(r) => records.push(r),
            Err(e) => failures.push(SweepFailure {
                n,
                message: e.to_string(),
            }),
        }
    }
    let predictions = records
        .iter()
        .map(|r| law.map(|l| l.predict_ln_abs(r.n)))
        .collect();
    Ok(SweepResult {
        params: *params,
        records,
        predictions,
        law,
        failures,
    })
}

/// The two one-sided sweeps of the same chain: only `λL = lambda`, then only
/// `λR = lambda`.
pub fn unidirectional_sweeps(
    params: &ChainParams,
    lambda: f64,
    sizes: &[usize],
) -> Result<(SweepResult, SweepResult)> {
    if lambda == 0.0 {
        return Err(Error::Precondition("unidirectional sweeps need lambda != 0".into()));
    }
    let left = nsweep_sizes(&params.with_lambdas(lambda, 0.0), sizes)?;
    let right = nsweep_sizes(&params.with_lambdas(0.0, lambda), sizes)?;
    Ok((left, right))
}

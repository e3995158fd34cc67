use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which terminal coupling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    L,
    R,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::L => Side::R,
            Side::R => Side::L,
        }
    }
}

/// The five real couplings of one sensor chain.
///
/// `t1 ± gamma` is the nonreciprocal intra-cell hopping, `t2` the reciprocal
/// inter-cell hopping and `lambda_l`/`lambda_r` the weak terminal couplings
/// between the first and the last A site.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainParams {
    pub t1: f64,
    pub t2: f64,
    pub gamma: f64,
    pub lambda_l: f64,
    pub lambda_r: f64,
}

/// Terminal couplings must stay below this fraction of the bulk couplings
/// for the closed-form predictions to apply.
pub const WEAK_COUPLING_RATIO: f64 = 1e-2;

impl ChainParams {
    pub fn new(t1: f64, t2: f64, gamma: f64, lambda_l: f64, lambda_r: f64) -> Result<Self> {
        let p = ChainParams {
            t1,
            t2,
            gamma,
            lambda_l,
            lambda_r,
        };
        p.validate()?;
        Ok(p)
    }

    /// Same bulk couplings with `lambda_l = lambda_r = lambda`.
    pub fn symmetric(t1: f64, t2: f64, gamma: f64, lambda: f64) -> Result<Self> {
        Self::new(t1, t2, gamma, lambda, lambda)
    }

    pub fn with_lambdas(self, lambda_l: f64, lambda_r: f64) -> Self {
        ChainParams {
            lambda_l,
            lambda_r,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.t1, self.t2, self.gamma, self.lambda_l, self.lambda_r];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams(format!("non-finite coupling in {self:?}")));
        }
        if self.t1.abs() == self.gamma.abs() {
            return Err(Error::InvalidParams(
                "|t1| = |gamma| makes t1 + gamma or t1 - gamma vanish".into(),
            ));
        }
        Ok(())
    }

    pub fn lambda(&self, side: Side) -> f64 {
        match side {
            Side::L => self.lambda_l,
            Side::R => self.lambda_r,
        }
    }

    /// Intra-cell hopping A -> B direction, `t1 + gamma`.
    pub fn t_ab(&self) -> f64 {
        self.t1 + self.gamma
    }

    /// Intra-cell hopping B -> A direction, `t1 - gamma`.
    pub fn t_ba(&self) -> f64 {
        self.t1 - self.gamma
    }

    /// `t1^2 - t2^2 - gamma^2`, the quantity whose sign selects the Taylor
    /// branch of the non-Bloch factors.
    pub fn taylor_denominator(&self) -> f64 {
        self.t1 * self.t1 - self.t2 * self.t2 - self.gamma * self.gamma
    }

    /// Analytic operations need real `g`, i.e. `|t1| > |gamma|`.
    pub fn require_real_g(&self) -> Result<()> {
        if self.t1.abs() <= self.gamma.abs() {
            return Err(Error::Domain(format!(
                "|t1| = {} <= |gamma| = {}: (t1-gamma)/(t1+gamma) < 0 and g is complex",
                self.t1.abs(),
                self.gamma.abs()
            )));
        }
        Ok(())
    }

    /// Weak-coupling precondition of the closed-form predictions.
    pub fn require_weak_terminals(&self) -> Result<()> {
        let scale = self.t_ab().abs().min(self.t_ba().abs()).min(self.t2.abs());
        let lam = self.lambda_l.abs().max(self.lambda_r.abs());
        if lam >= WEAK_COUPLING_RATIO * scale {
            return Err(Error::Domain(format!(
                "terminal coupling {lam:e} is not small against bulk scale {scale}"
            )));
        }
        Ok(())
    }
}

/// Number of A sites; the chain has `n - 1` complete cells plus one extra A.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SystemSize(usize);

impl SystemSize {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSize(n));
        }
        Ok(SystemSize(n))
    }

    pub fn n(self) -> usize {
        self.0
    }

    /// Hamiltonian dimension `2N - 1`.
    pub fn dim(self) -> usize {
        2 * self.0 - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_bounds() {
        assert!(matches!(SystemSize::new(1), Err(Error::InvalidSize(1))));
        assert_eq!(SystemSize::new(10).unwrap().dim(), 19);
    }

    #[test]
    fn rejects_t1_equal_gamma() {
        assert!(ChainParams::new(1.0, 2.0, 1.0, 0.0, 0.0).is_err());
        assert!(ChainParams::new(-1.0, 2.0, 1.0, 0.0, 0.0).is_err());
        assert!(ChainParams::new(f64::NAN, 2.0, 1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn weak_terminal_check() {
        let p = ChainParams::symmetric(2.5, 2.8, 1.0, 1e-5).unwrap();
        assert!(p.require_weak_terminals().is_ok());
        let p = p.with_lambdas(0.1, 0.0);
        assert!(p.require_weak_terminals().is_err());
    }
}

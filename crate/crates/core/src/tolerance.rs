use crate::error::{AuerbachError, Result};

/// Every numerical threshold used by the verifiers and the solver.
#[derive(Clone, Debug, PartialEq)]
pub struct ToleranceConfig {
    /// Acceptance threshold for unit norms, biorthogonality and system residuals.
    pub residual_tol: f64,
    /// Minimum `|det|` of the row-normalized matrix for it to count as nonsingular.
    pub rank_tol: f64,
    /// Grid used to quantize entries before canonical comparison.
    pub quantization_step: f64,
    pub newton_max_iter: usize,
    /// Search window for the line-minimization orthogonality oracle.
    pub oracle_lambda_window: (f64, f64),
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            residual_tol: 1e-10,
            rank_tol: 1e-9,
            quantization_step: 1e-8,
            newton_max_iter: 200,
            oracle_lambda_window: (-4.0, 4.0),
        }
    }
}

impl ToleranceConfig {
    pub fn with_residual_tol(mut self, tol: f64) -> Self {
        self.residual_tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.oracle_lambda_window;
        let ok = self.residual_tol > 0.0
            && self.rank_tol > 0.0
            && self.quantization_step > 0.0
            && self.newton_max_iter > 0
            && lo < 0.0
            && hi > 0.0;
        if ok {
            Ok(())
        } else {
            Err(AuerbachError::Domain(format!(
                "all tolerances must be strictly positive and the oracle window must contain 0: {self:?}"
            )))
        }
    }
}

//! Ordinary least squares on a model matrix.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::evaluate::InfoMatrix;
use crate::linalg::{dot, Matrix};
use crate::modelmat::ModelMatrix;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub columns: Vec<String>,
    pub estimates: Vec<f64>,
    pub se: Vec<f64>,
    /// Residual standard deviation, `sqrt(RSS / (n - p))`.
    pub sigma_hat: f64,
    pub df_residual: usize,
    /// About the mean when the model has an intercept, about zero otherwise.
    pub r_squared: f64,
    pub residuals: Vec<f64>,
    pub fitted: Vec<f64>,
    #[serde(skip)]
    info_inverse: Matrix,
}

/// Least-squares fit of `y` on `x`.
pub fn ols_fit(x: &ModelMatrix, y: &[f64]) -> Result<FitResult> {
    let (n, p) = (x.n(), x.p());
    if y.len() != n {
        return Err(Error::Dimension(format!("{} responses for {n} runs", y.len())));
    }
    if n <= p {
        return Err(Error::InsufficientDf { n, p });
    }
    let info = InfoMatrix::new(x)?;
    let xty = x.data.tr_mul_vec(y)?;
    let estimates = info.inverse.mul_vec(&xty)?;
    let fitted = x.data.mul_vec(&estimates)?;
    let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(a, b)| a - b).collect();
    let rss = dot(&residuals, &residuals);
    let df_residual = n - p;
    let sigma_hat = (rss / df_residual as f64).sqrt();
    let mean = if x.has_intercept() {
        y.iter().sum::<f64>() / n as f64
    } else {
        0.0
    };
    let tss: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let r_squared = if tss > 0.0 { 1.0 - rss / tss } else { f64::NAN };
    let se = (0..p).map(|j| sigma_hat * info.inverse[(j, j)].sqrt()).collect();
    Ok(FitResult {
        columns: x.columns.clone(),
        estimates,
        se,
        sigma_hat,
        df_residual,
        r_squared,
        residuals,
        fitted,
        info_inverse: info.inverse,
    })
}

/// Predictions at new rows and their variances `σ̂²·vᵀ(XᵀX)⁻¹v`.
pub fn predict(fit: &FitResult, x_new: &ModelMatrix) -> Result<(Vec<f64>, Vec<f64>)> {
    if x_new.columns != fit.columns {
        return Err(Error::Schema(format!(
            "prediction columns [{}] differ from fitted columns [{}]",
            x_new.columns.join(", "),
            fit.columns.join(", ")
        )));
    }
    let values = x_new.data.mul_vec(&fit.estimates)?;
    let s2 = fit.sigma_hat * fit.sigma_hat;
    let variances = x_new
        .data
        .row_iter()
        .map(|r| Ok(s2 * dot(r, &fit.info_inverse.mul_vec(r)?)))
        .collect::<Result<Vec<f64>>>()?;
    Ok((values, variances))
}

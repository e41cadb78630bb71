use serde::Serialize;

use super::power::{power_table, PowerSettings};
use crate::error::{Error, Result};
use crate::linalg::{dependent_columns, dot, xtx, Lu, Matrix};
use crate::modelmat::ModelMatrix;

/// `XᵀX` of a full-rank model matrix together with its factorization.
#[derive(Debug, Clone)]
pub struct InfoMatrix {
    pub xtx: Matrix,
    pub inverse: Matrix,
    pub det: f64,
    pub ln_det: f64,
}

impl InfoMatrix {
    /// Fails with `SingularMatrix` naming the columns that depend on
    /// earlier ones.
    pub fn new(x: &ModelMatrix) -> Result<Self> {
        let g = xtx(&x.data);
        let lu = match Lu::factor(&g) {
            Ok(lu) => lu,
            Err(Error::SingularMatrix { columns }) => {
                let dep = dependent_columns(&x.data);
                let named: Vec<String> = if dep.is_empty() {
                    columns
                        .iter()
                        .filter_map(|c| c.trim_start_matches('#').parse::<usize>().ok())
                        .map(|k| x.columns[k].clone())
                        .collect()
                } else {
                    dep.iter().map(|&k| x.columns[k].clone()).collect()
                };
                return Err(Error::SingularMatrix { columns: named });
            }
            Err(e) => return Err(e),
        };
        Ok(InfoMatrix {
            inverse: lu.inverse(),
            det: lu.det(),
            ln_det: lu.ln_abs_det(),
            xtx: g,
        })
    }

    pub fn prediction_variance(&self, row: &[f64]) -> Result<f64> {
        prediction_variance(&self.inverse, row)
    }
}

/// `rowᵀ · info_inv · row`.
pub fn prediction_variance(info_inv: &Matrix, row: &[f64]) -> Result<f64> {
    let v = info_inv.mul_vec(row)?;
    Ok(dot(row, &v))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermStats {
    pub name: String,
    /// Standard error for σ = 1.
    pub se: f64,
    /// `None` for the intercept column.
    pub r_squared: Option<f64>,
    /// Two-sided t-test power for an effect of 2σ at α = 0.05; `None`
    /// without residual degrees of freedom.
    pub power_2sd: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub n: usize,
    pub p: usize,
    pub det_xtx: f64,
    pub ln_det_xtx: f64,
    /// `det(XᵀX)^(1/p) / n`.
    pub d_criterion: f64,
    /// `trace((XᵀX)⁻¹)`.
    pub a_criterion: f64,
    pub max_pv: f64,
    /// 0-based index of the row attaining `max_pv` in the evaluation set.
    pub max_pv_row: usize,
    pub avg_pv: f64,
    /// Percent.
    pub g_efficiency: f64,
    /// `design` or `points`.
    pub eval_set: &'static str,
    pub terms: Vec<TermStats>,
    pub notes: Vec<String>,
}

pub const REPORT_NOTES: [&str; 2] = [
    "power_2sd: two-sided t-test on one coefficient, effect = 2 sigma, alpha = 0.05, \
     df = n - p; power figures computed under other software conventions are not reproduced",
    "d_criterion = det(X'X)^(1/p) / n and det_xtx is the raw determinant; \
     other normalisations of D-efficiency are not reported",
];

/// Optimality criteria and per-term statistics for a full-rank model
/// matrix. Prediction variances are taken over the design rows unless
/// `eval_points` (rows in the same column layout) is given.
pub fn criteria_report(x: &ModelMatrix, eval_points: Option<&Matrix>) -> Result<EvalReport> {
    let (n, p) = (x.n(), x.p());
    if n == 0 || p == 0 {
        return Err(Error::EmptyDesign);
    }
    let info = InfoMatrix::new(x)?;
    let points = eval_points.unwrap_or(&x.data);
    if points.cols() != p {
        return Err(Error::Dimension(format!(
            "evaluation points have {} columns, model has {p}",
            points.cols()
        )));
    }
    if points.rows() == 0 {
        return Err(Error::Dimension("no evaluation points".into()));
    }
    let pvs = points
        .row_iter()
        .map(|r| info.prediction_variance(r))
        .collect::<Result<Vec<f64>>>()?;
    let (max_pv_row, max_pv) = pvs
        .iter()
        .cloned()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    let avg_pv = pvs.iter().sum::<f64>() / pvs.len() as f64;

    let r2 = if p >= 2 {
        r_squared_from(x, &info)
    } else {
        vec![None; p]
    };
    let power = if n > p {
        Some(power_table(x, PowerSettings::default())?)
    } else {
        None
    };
    let terms = (0..p)
        .map(|j| TermStats {
            name: x.columns[j].clone(),
            se: info.inverse[(j, j)].sqrt(),
            r_squared: r2[j],
            power_2sd: power.as_ref().map(|t| t[j].power),
        })
        .collect();

    Ok(EvalReport {
        n,
        p,
        det_xtx: info.det,
        ln_det_xtx: info.ln_det,
        d_criterion: (info.ln_det / p as f64).exp() / n as f64,
        a_criterion: info.inverse.trace(),
        max_pv,
        max_pv_row,
        avg_pv,
        g_efficiency: 100.0 * p as f64 / (n as f64 * max_pv),
        eval_set: if eval_points.is_some() { "points" } else { "design" },
        terms,
        notes: REPORT_NOTES.iter().map(|s| s.to_string()).collect(),
    })
}

fn r_squared_from(x: &ModelMatrix, info: &InfoMatrix) -> Vec<Option<f64>> {
    let centered = x.has_intercept();
    (0..x.p())
        .map(|j| {
            if x.columns[j] == "1" {
                return None;
            }
            let col = x.data.col(j);
            let mean = if centered {
                col.iter().sum::<f64>() / col.len() as f64
            } else {
                0.0
            };
            let tss: f64 = col.iter().map(|v| (v - mean).powi(2)).sum();
            if tss == 0.0 {
                return None;
            }
            // residual sum of squares of column j regressed on the others
            let rss = 1.0 / info.inverse[(j, j)];
            Some(1.0 - rss / tss)
        })
        .collect()
}

/// Squared multiple correlation of each column with all the others. The
/// total sum of squares is taken about the column mean when the model has
/// an intercept column and about zero otherwise; the intercept column
/// itself gets `None`.
pub fn term_r_squared(x: &ModelMatrix) -> Result<Vec<Option<f64>>> {
    if x.p() < 2 {
        return Err(Error::Dimension("term R² needs at least two columns".into()));
    }
    let info = InfoMatrix::new(x)?;
    Ok(r_squared_from(x, &info))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn named(data: Matrix) -> ModelMatrix {
        let cols = (0..data.cols()).map(|j| format!("c{j}")).collect();
        ModelMatrix::new(cols, data).unwrap()
    }

    #[test]
    fn identity_design() {
        let r = criteria_report(&named(Matrix::identity(4)), None).unwrap();
        assert_eq!(r.det_xtx, 1.0);
        assert_eq!(r.max_pv, 1.0);
        assert_eq!(r.avg_pv, 1.0);
        assert!((r.g_efficiency - 100.0).abs() < 1e-12);
        assert_eq!(r.a_criterion, 4.0);
        assert!(r.terms.iter().all(|t| t.power_2sd.is_none()));
    }

    #[test]
    fn pv_small() {
        let i3 = Matrix::identity(3);
        assert_eq!(prediction_variance(&i3, &[1.0, 0.0, 0.0]).unwrap(), 1.0);
        assert_eq!(prediction_variance(&i3, &[1.0, 1.0, 1.0]).unwrap(), 3.0);
        assert!(prediction_variance(&i3, &[1.0]).is_err());
    }

    #[test]
    fn orthogonal_columns_have_zero_r2() {
        let r2 = term_r_squared(&named(Matrix::identity(3))).unwrap();
        assert_eq!(r2, vec![Some(0.0); 3]);
    }

    #[test]
    fn duplicated_column_is_singular() {
        let x = named(Matrix::from_rows(&[[1.0, 1.0, 0.5], [2.0, 2.0, 0.1], [3.0, 3.0, 0.7], [1.0, 1.0, 0.0]]));
        match term_r_squared(&x) {
            Err(Error::SingularMatrix { columns }) => assert_eq!(columns, vec!["c1"]),
            other => panic!("expected singular, got {other:?}"),
        }
    }
}

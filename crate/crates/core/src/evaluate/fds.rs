use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::Serialize;

use super::criteria::InfoMatrix;
use crate::design::{BlockedDesign, DesignKind, Permutation};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::modelmat::{build_with_layout, ModelLayout, ModelMatrix, ModelSpec};
use crate::pwo::pwo_from_permutation;

/// Samples per random substream. Chunk `s` draws from a generator seeded
/// with `seed ^ s`, so the curve does not depend on how chunks are spread
/// over threads.
pub const FDS_CHUNK: usize = 1024;

/// Prediction variances sorted ascending, each paired with its cumulative
/// fraction of the sampled space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FdsCurve {
    /// `(fraction, variance)`; fractions are `(i + 0.5) / n`.
    pub points: Vec<(f64, f64)>,
    pub n_samples: usize,
    /// `None` when the curve was built from caller-supplied rows.
    pub seed: Option<u64>,
}

impl FdsCurve {
    pub fn from_variances(mut variances: Vec<f64>, seed: Option<u64>) -> Self {
        variances.sort_by(f64::total_cmp);
        let n = variances.len();
        let points = variances
            .into_iter()
            .enumerate()
            .map(|(i, v)| ((i as f64 + 0.5) / n as f64, v))
            .collect();
        FdsCurve {
            points,
            n_samples: n,
            seed,
        }
    }

    pub fn max(&self) -> Option<f64> {
        self.points.last().map(|p| p.1)
    }

    pub fn median(&self) -> Option<f64> {
        let n = self.points.len();
        match n {
            0 => None,
            _ if n % 2 == 1 => Some(self.points[n / 2].1),
            _ => Some(0.5 * (self.points[n / 2 - 1].1 + self.points[n / 2].1)),
        }
    }
}

/// FDS curve of `design` under `spec` from `n_samples` random points of the
/// design space: proportions uniform on the simplex (scaled by a total
/// amount drawn from the design's amount levels when amounts matter), a
/// uniformly random addition order and a uniformly random block.
pub fn fds_curve(design: &BlockedDesign, spec: &ModelSpec, n_samples: usize, seed: u64) -> Result<FdsCurve> {
    if n_samples == 0 {
        return Err(Error::Dimension("FDS needs at least one sample".into()));
    }
    let layout = ModelLayout::for_design(design, spec)?;
    let report = design.validate();
    if !report.is_valid() {
        return Err(Error::Invalid(report));
    }
    let x = build_with_layout(design, &layout)?;
    let info = InfoMatrix::new(&x)?;

    let m = design.m;
    let levels = design.amount_levels();
    let scale_values = design.kind == DesignKind::Amount;
    let needs_amount = scale_values || spec.family.uses_amount();
    if needs_amount && levels.is_empty() {
        return Err(Error::InvalidAmount("design has no total amounts to sample from".into()));
    }
    let n_blocks = design.n_blocks.max(1);

    let n_chunks = n_samples.div_ceil(FDS_CHUNK);
    let chunks: Vec<Vec<f64>> = (0..n_chunks)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ s as u64);
            let len = FDS_CHUNK.min(n_samples - s * FDS_CHUNK);
            let mut out = Vec::with_capacity(len);
            let mut order: Vec<usize> = (0..m).collect();
            for _ in 0..len {
                let mut values: Vec<f64> = (0..m).map(|_| rng.sample::<f64, _>(Exp1)).collect();
                let total: f64 = values.iter().sum();
                values.iter_mut().for_each(|v| *v /= total);
                let amount = if needs_amount {
                    Some(*levels.choose(&mut rng).expect("levels checked non-empty"))
                } else {
                    None
                };
                if scale_values {
                    let a = amount.expect("amount designs sample an amount");
                    values.iter_mut().for_each(|v| *v *= a);
                }
                order.shuffle(&mut rng);
                let pwo = pwo_from_permutation(&Permutation(order.clone()), m)?;
                let block = rng.random_range(1..=n_blocks);
                let row = layout.row(&values, &pwo, block, amount);
                out.push(info.prediction_variance(&row)?);
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(FdsCurve::from_variances(chunks.concat(), Some(seed)))
}

/// FDS curve over caller-supplied model rows (same column layout as `x`).
pub fn fds_curve_with_rows(x: &ModelMatrix, rows: &Matrix) -> Result<FdsCurve> {
    if rows.rows() == 0 {
        return Err(Error::Dimension("FDS needs at least one row".into()));
    }
    let info = InfoMatrix::new(x)?;
    let pvs = rows
        .row_iter()
        .map(|r| info.prediction_variance(r))
        .collect::<Result<Vec<f64>>>()?;
    Ok(FdsCurve::from_variances(pvs, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn single_sample_sits_at_one_half() {
        let spec = ModelSpec::named("scheffe-q").unwrap();
        let c = fds_curve(&catalog::czitrom_d_optimal(), &spec, 1, 7).unwrap();
        assert_eq!(c.points.len(), 1);
        assert_eq!(c.points[0].0, 0.5);
    }

    #[test]
    fn orthonormal_design_rows_give_flat_curve() {
        let x = ModelMatrix::new(vec!["a".into(), "b".into()], Matrix::identity(2)).unwrap();
        let c = fds_curve_with_rows(&x, &x.data).unwrap();
        assert!(c.points.iter().all(|p| p.1 == 1.0));
    }

    #[test]
    fn seeded_and_sorted() {
        let spec = ModelSpec::named("scheffe-q").unwrap().with_pwo();
        let d = catalog::czitrom_d_oofa();
        let a = fds_curve(&d, &spec, 3000, 11).unwrap();
        let b = fds_curve(&d, &spec, 3000, 11).unwrap();
        assert_eq!(a, b);
        assert!(a.points.windows(2).all(|w| w[0].1 <= w[1].1 && w[0].0 < w[1].0));
        assert_ne!(a, fds_curve(&d, &spec, 3000, 12).unwrap());
    }

    #[test]
    fn zero_samples_is_an_error() {
        let spec = ModelSpec::named("scheffe-q").unwrap();
        assert!(fds_curve(&catalog::czitrom_d_optimal(), &spec, 0, 0).is_err());
    }
}

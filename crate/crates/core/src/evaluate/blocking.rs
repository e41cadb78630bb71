use serde::Serialize;

use crate::design::BlockedDesign;
use crate::error::{Error, Result};
use crate::family::Monomial;
use crate::modelmat::{build_with_layout, ColumnRole, ModelLayout, ModelSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockingTolerance {
    /// For blending, interaction and intercept columns.
    pub mixture: f64,
    /// For the pure PWO columns, whose entries are exact integers.
    pub pwo: f64,
}

impl Default for BlockingTolerance {
    fn default() -> Self {
        BlockingTolerance {
            mixture: 5e-3,
            pwo: 0.0,
        }
    }
}

impl BlockingTolerance {
    pub fn uniform(tol: f64) -> Self {
        BlockingTolerance {
            mixture: tol,
            pwo: tol,
        }
    }
}

/// Per-block sums of one model column.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockingCondition {
    /// Condition family: `linear`, `pure_quadratic`, `cross_product`,
    /// `pwo`, `mixture_pwo` or `block_size`; amount-multiplied blending
    /// terms get an `_A<p>` suffix.
    pub condition: String,
    pub term: String,
    pub block_sums: Vec<f64>,
    /// max - min over the block sums.
    pub discrepancy: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockingReport {
    pub conditions: Vec<BlockingCondition>,
    pub pass: bool,
}

impl BlockingReport {
    pub fn failures(&self) -> impl Iterator<Item = &BlockingCondition> {
        self.conditions.iter().filter(|c| !c.pass)
    }

    pub fn condition(&self, term: &str) -> Option<&BlockingCondition> {
        self.conditions.iter().find(|c| c.term == term)
    }
}

fn condition_name(role: &ColumnRole) -> Option<String> {
    Some(match role {
        ColumnRole::Intercept => "block_size".into(),
        ColumnRole::Blend(t) => {
            let base = match t.monomial {
                Monomial::Linear(_) => "linear",
                Monomial::Square(_) => "pure_quadratic",
                Monomial::Cross(..) => "cross_product",
            };
            match t.amount_power {
                0 => base.to_string(),
                p => format!("{base}_A{p}"),
            }
        }
        ColumnRole::Pwo(..) => "pwo".into(),
        ColumnRole::Interaction(_) => "mixture_pwo".into(),
        ColumnRole::Block => return None,
    })
}

/// Orthogonal blocking holds when every model term has the same sum in
/// each block. Checks each non-block column of the model described by
/// `spec`.
pub fn check_orthogonal_blocking(
    design: &BlockedDesign,
    spec: &ModelSpec,
    tol: BlockingTolerance,
) -> Result<BlockingReport> {
    if design.n_blocks < 2 {
        return Err(Error::NothingToCheck);
    }
    let report = design.validate();
    if !report.is_valid() {
        return Err(Error::Invalid(report));
    }
    let mut spec = spec.clone();
    spec.include_block = false;
    let layout = ModelLayout::for_design(design, &spec)?;
    let x = build_with_layout(design, &layout)?;

    let mut conditions = Vec::new();
    for (j, role) in layout.roles().iter().enumerate() {
        let Some(condition) = condition_name(role) else {
            continue;
        };
        let mut sums = vec![0.0; design.n_blocks];
        for (run, row) in design.runs.iter().zip(x.data.row_iter()) {
            sums[run.block - 1] += row[j];
        }
        let max = sums.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = sums.iter().cloned().fold(f64::INFINITY, f64::min);
        let tolerance = match role {
            ColumnRole::Pwo(..) => tol.pwo,
            _ => tol.mixture,
        };
        let discrepancy = max - min;
        conditions.push(BlockingCondition {
            condition,
            term: x.columns[j].clone(),
            block_sums: sums,
            discrepancy,
            tolerance,
            pass: discrepancy <= tolerance,
        });
    }
    let pass = conditions.iter().all(|c| c.pass);
    Ok(BlockingReport { conditions, pass })
}

//! Domain types: runs, blocked designs, PWO vectors and permutations.
//!
//! Component indices are 0-based in code. Anything user-facing (column
//! names, CSV headers, `Display`) uses 1-based labels, matching the way
//! designs are usually written down (`x1`, `z12`, ...).

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Tolerance on row sums for proportion runs and on `amount` for amount runs.
pub const SUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DesignKind {
    /// Component proportions on the simplex.
    Proportion,
    /// Actual component amounts; the total amount varies across runs.
    Amount,
}

impl fmt::Display for DesignKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DesignKind::Proportion => f.write_str("proportion"),
            DesignKind::Amount => f.write_str("amount"),
        }
    }
}

/// Number of component pairs `(j, k)`, `j < k`, for `m` components.
pub fn pair_count(m: usize) -> usize {
    m * m.saturating_sub(1) / 2
}

/// Position of pair `(j, k)` (0-based, `j < k`) in lexicographic pair order.
pub fn pair_index(j: usize, k: usize, m: usize) -> usize {
    debug_assert!(j < k && k < m);
    j * m - j * (j + 1) / 2 + (k - j - 1)
}

/// All pairs `(j, k)` with `j < k < m` in lexicographic order.
pub fn pairs(m: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..m).flat_map(move |j| (j + 1..m).map(move |k| (j, k)))
}

/// Pair-wise ordering vector: one entry in {-1, 0, +1} per pair `(j, k)`,
/// `j < k`, in lexicographic order. `+1` means `j` is added before `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct Pwo(pub Vec<i8>);

impl Pwo {
    pub fn zeros(m: usize) -> Self {
        Pwo(vec![0; pair_count(m)])
    }

    pub fn get(&self, j: usize, k: usize, m: usize) -> i8 {
        self.0[pair_index(j, k, m)]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&z| z == 0)
    }

    pub fn negated(&self) -> Self {
        Pwo(self.0.iter().map(|z| -z).collect())
    }
}

impl std::ops::Deref for Pwo {
    type Target = [i8];

    fn deref(&self) -> &[i8] {
        &self.0
    }
}

impl From<Vec<i8>> for Pwo {
    fn from(v: Vec<i8>) -> Self {
        Pwo(v)
    }
}

/// An order of addition over a support set: `order[0]` is added first.
/// Entries are 0-based component indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    /// Build from 1-based component labels, e.g. `(2, 1, 3)`.
    pub fn from_labels(labels: &[usize]) -> Result<Self> {
        labels
            .iter()
            .map(|&l| {
                l.checked_sub(1)
                    .ok_or_else(|| Error::InvalidPermutation("component labels start at 1".into()))
            })
            .collect::<Result<Vec<_>>>()
            .map(Permutation)
    }

    pub fn labels(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Self {
        Permutation(self.0.iter().rev().copied().collect())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.labels().iter().map(|l| l.to_string()).collect();
        write!(f, "({})", labels.join(","))
    }
}

/// One experimental blend.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Run {
    /// Proportions `x_i` or amounts `a_i`.
    pub values: Vec<f64>,
    pub pwo: Pwo,
    /// 1-based block label.
    pub block: usize,
    /// Total amount `A`. Required for amount designs and for mixture-amount
    /// models; `None` for plain proportion runs.
    pub amount: Option<f64>,
}

impl Run {
    pub fn proportion(values: Vec<f64>, pwo: Pwo, block: usize) -> Self {
        Run {
            values,
            pwo,
            block,
            amount: None,
        }
    }

    /// Amount run with `A` set to the row sum.
    pub fn amounts(values: Vec<f64>, pwo: Pwo, block: usize) -> Self {
        let total = values.iter().sum();
        Run {
            values,
            pwo,
            block,
            amount: Some(total),
        }
    }

    pub fn m(&self) -> usize {
        self.values.len()
    }

    /// Indices of the nonzero components.
    pub fn support(&self) -> Vec<usize> {
        support_of(&self.values)
    }
}

pub(crate) fn support_of(values: &[f64]) -> Vec<usize> {
    values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != 0.0)
        .map(|(i, _)| i)
        .collect()
}

/// An ordered collection of runs partitioned into blocks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockedDesign {
    pub m: usize,
    pub kind: DesignKind,
    pub runs: Vec<Run>,
    pub n_blocks: usize,
}

impl BlockedDesign {
    /// `n_blocks` is taken as the largest block label present.
    pub fn new(m: usize, kind: DesignKind, runs: Vec<Run>) -> Self {
        let n_blocks = runs.iter().map(|r| r.block).max().unwrap_or(0);
        BlockedDesign {
            m,
            kind,
            runs,
            n_blocks,
        }
    }

    pub fn n(&self) -> usize {
        self.runs.len()
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.n_blocks];
        for r in &self.runs {
            if (1..=self.n_blocks).contains(&r.block) {
                sizes[r.block - 1] += 1;
            }
        }
        sizes
    }

    /// Largest total amount in the design (1 for plain proportion designs).
    pub fn max_amount(&self) -> f64 {
        match self.kind {
            DesignKind::Proportion => 1.0,
            DesignKind::Amount => self
                .runs
                .iter()
                .filter_map(|r| r.amount)
                .fold(0.0, f64::max),
        }
    }

    /// Distinct total amounts, ascending.
    pub fn amount_levels(&self) -> Vec<f64> {
        let mut levels: Vec<f64> = self.runs.iter().filter_map(|r| r.amount).collect();
        levels.sort_by(f64::total_cmp);
        levels.dedup_by(|a, b| (*a - *b).abs() <= SUM_TOL * b.abs().max(1.0));
        levels
    }

    pub fn validate(&self) -> ValidationReport {
        validate_design(self)
    }

    /// `Ok(self)` if the design passes validation.
    pub fn validated(self) -> Result<Self> {
        let report = self.validate();
        if report.is_valid() {
            Ok(self)
        } else {
            Err(Error::Invalid(report))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    /// 0-based run index, or `None` for design-level rules.
    pub run: Option<usize>,
    pub rule: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has_rule(&self, rule: &str) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }

    fn push(&mut self, run: Option<usize>, rule: &'static str, detail: String) {
        self.violations.push(Violation { run, rule, detail });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            match v.run {
                Some(i) => writeln!(f, "  run {}: {} ({})", i + 1, v.rule, v.detail)?,
                None => writeln!(f, "  design: {} ({})", v.rule, v.detail)?,
            }
        }
        Ok(())
    }
}

/// Check every structural invariant of a design. Violations are collected,
/// not raised; run order is preserved so the report is deterministic.
pub fn validate_design(design: &BlockedDesign) -> ValidationReport {
    let mut report = ValidationReport::default();
    let m = design.m;
    if m < 2 {
        report.push(None, "too_few_components", format!("m = {m}"));
    }
    if design.runs.is_empty() {
        report.push(None, "empty_design", "no runs".into());
    }

    for (i, run) in design.runs.iter().enumerate() {
        let at = Some(i);
        if run.values.len() != m {
            report.push(
                at,
                "values_length",
                format!("expected {m} values, found {}", run.values.len()),
            );
            continue;
        }
        if let Some(v) = run.values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            report.push(at, "negative_value", format!("value {v}"));
        }
        if run.pwo.len() != pair_count(m) {
            report.push(
                at,
                "pwo_length",
                format!("expected {} entries, found {}", pair_count(m), run.pwo.len()),
            );
        } else {
            if run.pwo.iter().any(|z| !(-1..=1).contains(z)) {
                report.push(at, "pwo_value", format!("{:?}", run.pwo.0));
            }
            for (j, k) in pairs(m) {
                let z = run.pwo.get(j, k, m);
                if z != 0 && (run.values[j] == 0.0 || run.values[k] == 0.0) {
                    report.push(
                        at,
                        "pwo_nonzero_for_zero_component",
                        format!("z{}{} = {z}", j + 1, k + 1),
                    );
                }
            }
        }
        let total: f64 = run.values.iter().sum();
        match design.kind {
            DesignKind::Proportion => {
                if (total - 1.0).abs() > SUM_TOL {
                    report.push(at, "proportion_sum", format!("sum = {total}"));
                }
            }
            DesignKind::Amount => match run.amount {
                None => report.push(at, "missing_amount", "amount design run without A".into()),
                Some(a) if a.is_nan() || a < 0.0 || (a - total).abs() > SUM_TOL * a.abs().max(1.0) => {
                    report.push(at, "amount_mismatch", format!("A = {a}, sum = {total}"))
                }
                Some(_) => {}
            },
        }
        if run.block == 0 || run.block > design.n_blocks {
            report.push(
                at,
                "block_out_of_range",
                format!("block {} not in 1..={}", run.block, design.n_blocks),
            );
        }
    }

    for (b, size) in design.block_sizes().iter().enumerate() {
        if *size == 0 {
            report.push(None, "empty_block", format!("block {} has no runs", b + 1));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_index_is_lexicographic() {
        let m = 4;
        for (expected, (j, k)) in pairs(m).enumerate() {
            assert_eq!(pair_index(j, k, m), expected);
        }
        assert_eq!(pair_count(4), 6);
        assert_eq!(pair_index(1, 2, 3), 2);
    }

    #[test]
    fn pwo_on_zero_component_is_flagged() {
        let run = Run::proportion(vec![0.5, 0.5, 0.0], Pwo(vec![0, 1, 0]), 1);
        let d = BlockedDesign::new(3, DesignKind::Proportion, vec![run]);
        let report = validate_design(&d);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].rule, "pwo_nonzero_for_zero_component");
        assert_eq!(report.violations[0].run, Some(0));
    }

    #[test]
    fn amount_mismatch_is_flagged() {
        let run = Run {
            values: vec![24.0, 0.0, 0.0],
            pwo: Pwo::zeros(3),
            block: 1,
            amount: Some(25.0),
        };
        let d = BlockedDesign::new(3, DesignKind::Amount, vec![run]);
        assert!(validate_design(&d).has_rule("amount_mismatch"));
    }

    #[test]
    fn structural_rules() {
        let runs = vec![
            Run::proportion(vec![0.5, 0.6, 0.0], Pwo::zeros(3), 1),
            Run::proportion(vec![1.0, 0.0], Pwo::zeros(2), 3),
            Run::proportion(vec![1.0, -0.0, 0.0], Pwo(vec![0, 0]), 1),
        ];
        let d = BlockedDesign::new(3, DesignKind::Proportion, runs);
        let r = validate_design(&d);
        assert!(r.has_rule("proportion_sum"));
        assert!(r.has_rule("values_length"));
        assert!(r.has_rule("pwo_length"));
        assert!(r.has_rule("empty_block"));
        // validation is a pure function of the design
        assert_eq!(r, validate_design(&d));
    }

    #[test]
    fn permutation_labels() {
        let p = Permutation::from_labels(&[2, 1, 3]).unwrap();
        assert_eq!(p.0, vec![1, 0, 2]);
        assert_eq!(p.to_string(), "(2,1,3)");
        assert!(Permutation::from_labels(&[0, 1]).is_err());
    }
}

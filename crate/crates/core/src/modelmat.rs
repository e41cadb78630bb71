//! Expansion of a blocked design into a model matrix.
//!
//! Column order is fixed: intercept `1`, the family's blending terms,
//! PWO columns `z<j><k>`, mixture-order interactions `x<i>*z<j><k>` (in the
//! order given by the spec), and finally the block column `blk`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::design::{pair_count, pair_index, pairs, BlockedDesign, DesignKind, Pwo};
use crate::error::{Error, Result};
use crate::family::{family, Intercept, ModelFamily, Term};
use crate::linalg::Matrix;

/// How component values enter the model columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorCoding {
    /// Use proportions or amounts as they are.
    #[default]
    Raw,
    /// Map `[0, upper]` onto `[-1, 1]` before forming products, where
    /// `upper` is 1 for proportions and the largest total amount for amount
    /// designs. This is the coded-unit convention under which published
    /// standard errors of mixture terms are usually reported. It does not
    /// change the column span for the built-in families, so prediction
    /// variances are unaffected.
    Symmetric,
}

impl FromStr for FactorCoding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(FactorCoding::Raw),
            "coded" | "symmetric" => Ok(FactorCoding::Symmetric),
            _ => Err(Error::UnknownName {
                name: s.into(),
                known: "raw, coded".into(),
            }),
        }
    }
}

/// Mixture-order interaction `x_i * z_kl` (0-based indices, `k < l`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct InteractionTerm {
    pub component: usize,
    pub pair: (usize, usize),
}

impl InteractionTerm {
    /// From 1-based labels: `InteractionTerm::labels(1, 1, 2)` is `x1*z12`.
    pub fn labels(i: usize, k: usize, l: usize) -> Self {
        InteractionTerm {
            component: i - 1,
            pair: (k - 1, l - 1),
        }
    }

    pub fn name(&self, symbol: char) -> String {
        format!(
            "{symbol}{}*z{}{}",
            self.component + 1,
            self.pair.0 + 1,
            self.pair.1 + 1
        )
    }
}

impl fmt::Display for InteractionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name('x'))
    }
}

impl FromStr for InteractionTerm {
    type Err = Error;

    /// Accepts `x1*z12`, `x1z12`, `a2*z23`; a pair written `z31` is
    /// normalised to `z13`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Spec(format!("cannot parse interaction term {s:?}"));
        let s = s.trim();
        let rest = s.strip_prefix(['x', 'a']).ok_or_else(bad)?;
        let (comp, pair) = rest.split_once('z').ok_or_else(bad)?;
        let comp = comp.trim_end_matches('*');
        let i: usize = comp.parse().map_err(|_| bad())?;
        let digits: Vec<usize> = pair
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as usize))
            .collect::<Option<_>>()
            .ok_or_else(bad)?;
        match digits[..] {
            [k, l] if i >= 1 && k >= 1 && l >= 1 && k != l => {
                Ok(InteractionTerm::labels(i, k.min(l), k.max(l)))
            }
            _ => Err(bad()),
        }
    }
}

/// The interaction subset reported for the three-component examples:
/// `x1*z12, x1*z13, x2*z23`.
pub fn default_interaction_subset(m: usize) -> Result<Vec<InteractionTerm>> {
    if m != 3 {
        return Err(Error::Unsupported(format!(
            "no default interaction subset for m = {m}; list the terms explicitly"
        )));
    }
    Ok(vec![
        InteractionTerm::labels(1, 1, 2),
        InteractionTerm::labels(1, 1, 3),
        InteractionTerm::labels(2, 2, 3),
    ])
}

/// The alternative subset `x1*z12, x2*z23, x3*z13`.
pub fn cyclic_interaction_subset(m: usize) -> Result<Vec<InteractionTerm>> {
    if m != 3 {
        return Err(Error::Unsupported(format!("no cyclic subset for m = {m}")));
    }
    Ok(vec![
        InteractionTerm::labels(1, 1, 2),
        InteractionTerm::labels(2, 2, 3),
        InteractionTerm::labels(3, 1, 3),
    ])
}

/// Every `x_i * z_kl` with `i ∈ {k, l}`.
pub fn all_interaction_terms(m: usize) -> Vec<InteractionTerm> {
    pairs(m)
        .flat_map(|(k, l)| {
            [k, l].map(|i| InteractionTerm {
                component: i,
                pair: (k, l),
            })
        })
        .collect()
}

/// Which columns to build from a design.
#[derive(Debug, Clone)]
pub struct ModelSpec {
    pub family: Arc<dyn ModelFamily>,
    pub include_pwo: bool,
    pub interaction_terms: Vec<InteractionTerm>,
    pub include_block: bool,
    /// Set from the family by [`ModelSpec::new`]; overriding it is a spec
    /// error.
    pub include_intercept: bool,
    pub coding: FactorCoding,
}

impl ModelSpec {
    pub fn new(family: Arc<dyn ModelFamily>) -> Self {
        let include_intercept = family.intercept() == Intercept::Required;
        ModelSpec {
            family,
            include_pwo: false,
            interaction_terms: Vec::new(),
            include_block: false,
            include_intercept,
            coding: FactorCoding::Raw,
        }
    }

    /// Spec for a built-in family by name.
    pub fn named(name: &str) -> Result<Self> {
        family(name).map(Self::new)
    }

    pub fn with_pwo(mut self) -> Self {
        self.include_pwo = true;
        self
    }

    pub fn with_interactions(mut self, terms: Vec<InteractionTerm>) -> Self {
        self.interaction_terms = terms;
        self
    }

    pub fn with_block(mut self) -> Self {
        self.include_block = true;
        self
    }

    pub fn with_coding(mut self, coding: FactorCoding) -> Self {
        self.coding = coding;
        self
    }

    pub fn check(&self, m: usize) -> Result<()> {
        match (self.family.intercept(), self.include_intercept) {
            (Intercept::Forbidden, true) => {
                return Err(Error::Spec(format!(
                    "{} has no intercept: its linear terms sum to one",
                    self.family.name()
                )))
            }
            (Intercept::Required, false) => {
                return Err(Error::Spec(format!("{} requires an intercept", self.family.name())))
            }
            _ => {}
        }
        if !self.interaction_terms.is_empty() && !self.include_pwo {
            return Err(Error::Spec("interaction terms need the PWO columns".into()));
        }
        for (n, t) in self.interaction_terms.iter().enumerate() {
            let (k, l) = t.pair;
            if !(k < l && l < m) {
                return Err(Error::Spec(format!("pair z{}{} is not a valid pair for m = {m}", k + 1, l + 1)));
            }
            if t.component != k && t.component != l {
                return Err(Error::Spec(format!(
                    "{t}: component must belong to its pair"
                )));
            }
            if self.interaction_terms[..n].contains(t) {
                return Err(Error::Spec(format!("{t} listed twice")));
            }
        }
        if self.family.uses_amount() && self.coding != FactorCoding::Raw {
            return Err(Error::Spec(format!(
                "{} supports only raw coding",
                self.family.name()
            )));
        }
        Ok(())
    }
}

/// What a model column represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnRole {
    Intercept,
    Blend(Term),
    Pwo(usize, usize),
    Interaction(InteractionTerm),
    Block,
}

/// A compiled spec: column names plus the rule to fill one row.
#[derive(Debug, Clone)]
pub struct ModelLayout {
    spec: ModelSpec,
    m: usize,
    terms: Vec<Term>,
    scale: f64,
    columns: Vec<String>,
    roles: Vec<ColumnRole>,
}

impl ModelLayout {
    /// `scale` is the upper end of the coded range (ignored for raw coding).
    pub fn new(spec: &ModelSpec, m: usize, scale: f64) -> Result<Self> {
        spec.check(m)?;
        let symbol = spec.family.symbol();
        let terms = spec.family.terms(m);
        let mut roles = Vec::new();
        if spec.include_intercept {
            roles.push(ColumnRole::Intercept);
        }
        roles.extend(terms.iter().map(|&t| ColumnRole::Blend(t)));
        if spec.include_pwo {
            roles.extend(pairs(m).map(|(j, k)| ColumnRole::Pwo(j, k)));
        }
        roles.extend(spec.interaction_terms.iter().map(|&t| ColumnRole::Interaction(t)));
        if spec.include_block {
            roles.push(ColumnRole::Block);
        }
        let columns = roles
            .iter()
            .map(|role| match role {
                ColumnRole::Intercept => "1".to_string(),
                ColumnRole::Blend(t) => t.name(symbol),
                ColumnRole::Pwo(j, k) => format!("z{}{}", j + 1, k + 1),
                ColumnRole::Interaction(t) => t.name(symbol),
                ColumnRole::Block => "blk".to_string(),
            })
            .collect();
        Ok(ModelLayout {
            spec: spec.clone(),
            m,
            terms,
            scale,
            columns,
            roles,
        })
    }

    /// Layout for a design: checks kind, amounts and block count.
    pub fn for_design(design: &BlockedDesign, spec: &ModelSpec) -> Result<Self> {
        if design.kind != spec.family.kind() {
            return Err(Error::KindMismatch {
                design: design.kind.to_string(),
                family: spec.family.name().to_string(),
            });
        }
        if spec.family.uses_amount() {
            if let Some(i) = design.runs.iter().position(|r| r.amount.is_none()) {
                return Err(Error::Spec(format!(
                    "{} needs the total amount A; run {} has none",
                    spec.family.name(),
                    i + 1
                )));
            }
        }
        if spec.include_block && design.n_blocks != 2 {
            return Err(Error::Spec(format!(
                "the block column needs exactly 2 blocks, design has {}",
                design.n_blocks
            )));
        }
        let scale = match design.kind {
            DesignKind::Proportion => 1.0,
            DesignKind::Amount => design.max_amount(),
        };
        Self::new(spec, design.m, scale)
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn roles(&self) -> &[ColumnRole] {
        &self.roles
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    /// One model row. `block` is the 1-based block label.
    pub fn row(&self, values: &[f64], pwo: &Pwo, block: usize, amount: Option<f64>) -> Vec<f64> {
        debug_assert_eq!(values.len(), self.m);
        debug_assert_eq!(pwo.len(), pair_count(self.m));
        let coded: Vec<f64> = match self.spec.coding {
            FactorCoding::Raw => values.to_vec(),
            FactorCoding::Symmetric => values.iter().map(|v| 2.0 * v / self.scale - 1.0).collect(),
        };
        let a = amount.unwrap_or(0.0);
        let mut row = Vec::with_capacity(self.columns.len());
        if self.spec.include_intercept {
            row.push(1.0);
        }
        row.extend(self.terms.iter().map(|t| t.eval(&coded, a)));
        if self.spec.include_pwo {
            row.extend(pwo.iter().map(|&z| z as f64));
        }
        for t in &self.spec.interaction_terms {
            let z = pwo[pair_index(t.pair.0, t.pair.1, self.m)] as f64;
            row.push(coded[t.component] * z);
        }
        if self.spec.include_block {
            row.push(if block == 1 { -1.0 } else { 1.0 });
        }
        row
    }
}

/// Dense model matrix with named columns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelMatrix {
    pub columns: Vec<String>,
    pub data: Matrix,
}

impl ModelMatrix {
    pub fn new(columns: Vec<String>, data: Matrix) -> Result<Self> {
        if columns.len() != data.cols() {
            return Err(Error::Dimension(format!(
                "{} names for {} columns",
                columns.len(),
                data.cols()
            )));
        }
        for (i, c) in columns.iter().enumerate() {
            if columns[..i].contains(c) {
                return Err(Error::Schema(format!("duplicate column {c}")));
            }
        }
        Ok(ModelMatrix { columns, data })
    }

    pub fn n(&self) -> usize {
        self.data.rows()
    }

    pub fn p(&self) -> usize {
        self.data.cols()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn has_intercept(&self) -> bool {
        self.column_index("1").is_some()
    }

    /// Same matrix without the named column.
    pub fn without(&self, name: &str) -> Result<ModelMatrix> {
        let idx = self
            .column_index(name)
            .ok_or_else(|| Error::Schema(format!("no column {name}")))?;
        let keep: Vec<usize> = (0..self.p()).filter(|&j| j != idx).collect();
        Ok(ModelMatrix {
            columns: keep.iter().map(|&j| self.columns[j].clone()).collect(),
            data: self.data.select_cols(&keep),
        })
    }
}

/// Expand `design` into the model matrix described by `spec`.
pub fn build_model_matrix(design: &BlockedDesign, spec: &ModelSpec) -> Result<ModelMatrix> {
    let layout = ModelLayout::for_design(design, spec)?;
    let report = design.validate();
    if !report.is_valid() {
        return Err(Error::Invalid(report));
    }
    build_with_layout(design, &layout)
}

pub fn build_with_layout(design: &BlockedDesign, layout: &ModelLayout) -> Result<ModelMatrix> {
    let mut data = Matrix::zeros(0, 0);
    for r in &design.runs {
        data.push_row(&layout.row(&r.values, &r.pwo, r.block, r.amount));
    }
    if design.runs.is_empty() {
        data = Matrix::zeros(0, layout.columns.len());
    }
    ModelMatrix::new(layout.columns.clone(), data)
}

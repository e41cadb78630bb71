//! Built-in blocked designs and the OofA expansion.
//!
//! Values are stored exactly as published (0.168, 0.832, 0.333, 0.334, ...)
//! rather than re-derived, so every metric computed from them can be
//! compared against the published numbers.

use crate::design::{BlockedDesign, DesignKind, Pwo, Run};
use crate::error::{Error, Result};
use crate::pwo::enumerate_orderings;

/// Which orderings a base run expands into, by size of its support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orders {
    /// One run per ordering of the support.
    #[default]
    All,
    /// Drop runs of this support size from the expanded design.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ExpansionPolicy {
    /// Single-component runs (always exactly one trivial ordering).
    pub vertex_orders: Orders,
    /// Two-component runs (two orderings).
    pub edge_orders: Orders,
    /// Runs with three or more components (`s!` orderings).
    pub interior_orders: Orders,
}

impl ExpansionPolicy {
    fn orders_for(&self, support: usize) -> Orders {
        match support {
            0 | 1 => self.vertex_orders,
            2 => self.edge_orders,
            _ => self.interior_orders,
        }
    }
}

/// Replace each base run by one run per ordering of its support, keeping
/// block labels and base order. Orderings follow [`enumerate_orderings`].
pub fn oofa_expand(base: &BlockedDesign, policy: ExpansionPolicy) -> Result<BlockedDesign> {
    let mut runs = Vec::new();
    for (i, run) in base.runs.iter().enumerate() {
        if !run.pwo.is_zero() {
            return Err(Error::AlreadyExpanded(i + 1));
        }
        let orderings = enumerate_orderings(&run.values)?;
        if policy.orders_for(run.support().len()) == Orders::None {
            continue;
        }
        for pwo in orderings {
            runs.push(Run {
                pwo,
                ..run.clone()
            });
        }
    }
    Ok(BlockedDesign {
        m: base.m,
        kind: base.kind,
        runs,
        n_blocks: base.n_blocks,
    })
}

fn proportion_design(rows: &[([f64; 3], [i8; 3], usize)]) -> BlockedDesign {
    let runs = rows
        .iter()
        .map(|(x, z, b)| Run::proportion(x.to_vec(), Pwo(z.to_vec()), *b))
        .collect();
    BlockedDesign::new(3, DesignKind::Proportion, runs)
}

const CENTROID: [f64; 3] = [0.333, 0.333, 0.334];
const NO_ORDER: [i8; 3] = [0, 0, 0];

/// Latin-square base design: rotations of `(lo, hi, 0)` plus the printed
/// centroid in each of two blocks.
fn latin_square_pair(lo: f64, hi: f64) -> BlockedDesign {
    proportion_design(&[
        ([lo, hi, 0.0], NO_ORDER, 1),
        ([hi, 0.0, lo], NO_ORDER, 1),
        ([0.0, lo, hi], NO_ORDER, 1),
        (CENTROID, NO_ORDER, 1),
        ([lo, 0.0, hi], NO_ORDER, 2),
        ([hi, lo, 0.0], NO_ORDER, 2),
        ([0.0, hi, lo], NO_ORDER, 2),
        (CENTROID, NO_ORDER, 2),
    ])
}

/// D-optimal design for the quadratic Scheffé model in two orthogonal
/// blocks (three components, 8 runs).
pub fn czitrom_d_optimal() -> BlockedDesign {
    latin_square_pair(0.168, 0.832)
}

/// A-optimal design for the quadratic K-model in two orthogonal blocks.
pub fn aggarwal_a_optimal() -> BlockedDesign {
    latin_square_pair(0.239, 0.761)
}

const CENTROID_ORDERS: [[i8; 3]; 6] = [
    [1, 1, 1],
    [1, 1, -1],
    [1, -1, -1],
    [-1, 1, 1],
    [-1, -1, 1],
    [-1, -1, -1],
];

/// 24-run OofA expansion exactly as published. Within some replicate
/// pairs the published row order is `(-1, +1)` rather than `(+1, -1)`;
/// that order is kept here.
fn oofa_latin_square_pair(lo: f64, hi: f64) -> BlockedDesign {
    let mut rows = vec![
        ([lo, hi, 0.0], [1, 0, 0], 1),
        ([lo, hi, 0.0], [-1, 0, 0], 1),
        ([hi, 0.0, lo], [0, -1, 0], 1),
        ([hi, 0.0, lo], [0, 1, 0], 1),
        ([0.0, lo, hi], [0, 0, 1], 1),
        ([0.0, lo, hi], [0, 0, -1], 1),
    ];
    rows.extend(CENTROID_ORDERS.iter().map(|z| (CENTROID, *z, 1)));
    rows.extend([
        ([lo, 0.0, hi], [0, 1, 0], 2),
        ([lo, 0.0, hi], [0, -1, 0], 2),
        ([hi, lo, 0.0], [-1, 0, 0], 2),
        ([hi, lo, 0.0], [1, 0, 0], 2),
        ([0.0, hi, lo], [0, 0, -1], 2),
        ([0.0, hi, lo], [0, 0, 1], 2),
    ]);
    rows.extend(CENTROID_ORDERS.iter().map(|z| (CENTROID, *z, 2)));
    proportion_design(&rows)
}

/// OofA expansion of [`czitrom_d_optimal`], as published (24 runs).
pub fn czitrom_d_oofa() -> BlockedDesign {
    oofa_latin_square_pair(0.168, 0.832)
}

/// OofA expansion of [`aggarwal_a_optimal`], as published (24 runs).
pub fn aggarwal_a_oofa() -> BlockedDesign {
    oofa_latin_square_pair(0.239, 0.761)
}

/// Amounts in hundredths of `A_max`, followed by `z12, z13, z23`.
/// The single-support run in block 2 has a blank `z12` in print; it is 0.
/// The block-2 row printed as "076" reads as 76.
#[rustfmt::skip]
const PROJECTION_ROWS: [([u32; 3], [i8; 3]); 36] = [
    // block 1
    ([0, 0, 24], [0, 0, 0]),
    ([0, 76, 0], [0, 0, 0]),
    ([24, 0, 76], [0, 1, 0]),
    ([24, 0, 76], [0, -1, 0]),
    ([76, 24, 0], [-1, 0, 0]),
    ([76, 24, 0], [1, 0, 0]),
    ([0, 0, 24], [0, 0, 0]),
    ([0, 24, 76], [0, 0, 1]),
    ([0, 24, 76], [0, 0, -1]),
    ([24, 76, 0], [1, 0, 0]),
    ([24, 76, 0], [-1, 0, 0]),
    ([76, 0, 0], [0, 0, 0]),
    ([25, 25, 25], [1, 1, 1]),
    ([25, 25, 25], [1, 1, -1]),
    ([25, 25, 25], [1, -1, -1]),
    ([25, 25, 25], [-1, 1, 1]),
    ([25, 25, 25], [-1, -1, 1]),
    ([25, 25, 25], [-1, -1, -1]),
    // block 2
    ([0, 24, 0], [0, 0, 0]),
    ([0, 0, 76], [0, 0, 0]),
    ([24, 76, 0], [1, 0, 0]),
    ([24, 76, 0], [-1, 0, 0]),
    ([76, 0, 24], [0, -1, 0]),
    ([76, 0, 24], [0, 1, 0]),
    ([0, 76, 24], [0, 0, -1]),
    ([0, 76, 24], [0, 0, 1]),
    ([0, 0, 76], [0, 0, 0]),
    ([24, 0, 0], [0, 0, 0]),
    ([76, 24, 0], [-1, 0, 0]),
    ([76, 24, 0], [1, 0, 0]),
    ([25, 25, 25], [1, 1, 1]),
    ([25, 25, 25], [1, 1, -1]),
    ([25, 25, 25], [1, -1, -1]),
    ([25, 25, 25], [-1, 1, 1]),
    ([25, 25, 25], [-1, -1, 1]),
    ([25, 25, 25], [-1, -1, -1]),
];

/// OofA component-amount design in two blocks of 18, obtained by projecting
/// a four-component blocked design; amounts scale with `a_max`.
pub fn component_amount_projection_design(a_max: f64) -> Result<BlockedDesign> {
    if !(a_max.is_finite() && a_max > 0.0) {
        return Err(Error::InvalidAmount(format!("a_max must be positive, got {a_max}")));
    }
    let runs = PROJECTION_ROWS
        .iter()
        .enumerate()
        .map(|(i, (hundredths, z))| {
            let values = hundredths.iter().map(|&h| h as f64 * a_max / 100.0).collect();
            Run::amounts(values, Pwo(z.to_vec()), if i < 18 { 1 } else { 2 })
        })
        .collect();
    Ok(BlockedDesign::new(3, DesignKind::Amount, runs))
}

pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    build: fn(f64) -> Result<BlockedDesign>,
}

impl CatalogEntry {
    /// `a_max` is ignored by proportion designs.
    pub fn build(&self, a_max: f64) -> Result<BlockedDesign> {
        (self.build)(a_max)
    }
}

pub static CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        name: "czitrom-d",
        description: "D-optimal Scheffé quadratic design, 2 orthogonal blocks, 8 runs",
        build: |_| Ok(czitrom_d_optimal()),
    },
    CatalogEntry {
        name: "aggarwal-a",
        description: "A-optimal K-model design, 2 orthogonal blocks, 8 runs",
        build: |_| Ok(aggarwal_a_optimal()),
    },
    CatalogEntry {
        name: "czitrom-d-oofa",
        description: "OofA expansion of czitrom-d, 24 runs",
        build: |_| Ok(czitrom_d_oofa()),
    },
    CatalogEntry {
        name: "aggarwal-a-oofa",
        description: "OofA expansion of aggarwal-a, 24 runs",
        build: |_| Ok(aggarwal_a_oofa()),
    },
    CatalogEntry {
        name: "ca-projection",
        description: "OofA component-amount projection design, 36 runs (scaled by --a-max)",
        build: component_amount_projection_design,
    },
];

pub fn lookup(name: &str) -> Result<&'static CatalogEntry> {
    CATALOG
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownName {
            name: name.to_string(),
            known: CATALOG.iter().map(|e| e.name).collect::<Vec<_>>().join(", "),
        })
}

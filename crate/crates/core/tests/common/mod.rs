//! Oracles shared by the integration tests. Nothing here calls into the
//! library's numerical code: designs are read from hand-transcribed CSV
//! files and the linear algebra is done by cofactor expansion or plain
//! Gauss-Jordan elimination.
#![allow(dead_code)]

use std::path::PathBuf;

/// One transcribed design row.
#[derive(Debug, Clone, PartialEq)]
pub struct GoldenRun {
    pub run: usize,
    pub values: Vec<f64>,
    pub pwo: Vec<i8>,
    pub block: usize,
    pub amount: Option<f64>,
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.csv"))
}

/// Reads `tests/golden/<name>.csv`; z columns absent from the file read as 0.
pub fn golden(name: &str) -> Vec<GoldenRun> {
    let text = std::fs::read_to_string(golden_path(name)).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = |n: &str| header.iter().position(|h| *h == n);
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            let num = |i: usize| f[i].parse::<f64>().unwrap();
            let values = (1..=3)
                .map(|i| num(col(&format!("x{i}")).or(col(&format!("a{i}"))).unwrap()))
                .collect();
            let pwo = ["z12", "z13", "z23"]
                .iter()
                .map(|z| col(z).map_or(0, |i| f[i].parse::<i8>().unwrap()))
                .collect();
            GoldenRun {
                run: f[0].parse().unwrap(),
                values,
                pwo,
                block: f[col("block").unwrap()].parse().unwrap(),
                amount: col("A").map(num),
            }
        })
        .collect()
}

pub type Dense = Vec<Vec<f64>>;

fn minor(a: &Dense, row: usize, col: usize) -> Dense {
    a.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| r.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, v)| *v).collect())
        .collect()
}

/// Laplace expansion along the first row.
pub fn cofactor_det(a: &Dense) -> f64 {
    match a.len() {
        0 => 1.0,
        1 => a[0][0],
        2 => a[0][0] * a[1][1] - a[0][1] * a[1][0],
        n => (0..n)
            .map(|j| {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * a[0][j] * cofactor_det(&minor(a, 0, j))
            })
            .sum(),
    }
}

/// Adjugate divided by the determinant.
pub fn cofactor_inverse(a: &Dense) -> Dense {
    let n = a.len();
    let d = cofactor_det(a);
    if n == 1 {
        return vec![vec![1.0 / d]];
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                    sign * cofactor_det(&minor(a, j, i)) / d
                })
                .collect()
        })
        .collect()
}

/// Gauss-Jordan inverse with partial pivoting.
pub fn gauss_jordan_inverse(a: &Dense) -> Dense {
    let n = a.len();
    let mut m: Dense = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| m[x][c].abs().total_cmp(&m[y][c].abs())).unwrap();
        m.swap(c, p);
        let piv = m[c][c];
        assert!(piv.abs() > 1e-300, "oracle matrix is singular");
        m[c].iter_mut().for_each(|v| *v /= piv);
        for r in 0..n {
            if r != c {
                let f = m[r][c];
                if f != 0.0 {
                    let pivot_row = m[c].clone();
                    m[r].iter_mut().zip(&pivot_row).for_each(|(v, p)| *v -= f * p);
                }
            }
        }
    }
    m.into_iter().map(|r| r[n..].to_vec()).collect()
}

pub fn gram(x: &Dense) -> Dense {
    let p = x[0].len();
    (0..p)
        .map(|i| (0..p).map(|j| x.iter().map(|r| r[i] * r[j]).sum()).collect())
        .collect()
}

pub fn quad_form(m: &Dense, v: &[f64]) -> f64 {
    m.iter()
        .zip(v)
        .map(|(row, vi)| vi * row.iter().zip(v).map(|(a, b)| a * b).sum::<f64>())
        .sum()
}

fn blk(block: usize) -> f64 {
    if block == 1 {
        -1.0
    } else {
        1.0
    }
}

/// Quadratic mixture-with-order row: Scheffé (`x_i`, `x_ix_j`) or K
/// (`x_i²`, `x_ix_j`) blending terms, then z12 z13 z23, x1z12 x1z13 x2z23,
/// block.
pub fn oofa_row(k_model: bool, x: &[f64], z: &[i8], block: usize) -> Vec<f64> {
    let z: Vec<f64> = z.iter().map(|&v| v as f64).collect();
    let mut r = if k_model {
        vec![x[0] * x[0], x[1] * x[1], x[2] * x[2]]
    } else {
        vec![x[0], x[1], x[2]]
    };
    r.extend([x[0] * x[1], x[0] * x[2], x[1] * x[2]]);
    r.extend(&z);
    r.extend([x[0] * z[0], x[0] * z[1], x[1] * z[2]]);
    r.push(blk(block));
    r
}

/// Quadratic component-amount row with intercept, order terms and block.
pub fn ca_row(a: &[f64], z: &[i8], block: usize) -> Vec<f64> {
    let z: Vec<f64> = z.iter().map(|&v| v as f64).collect();
    let mut r = vec![1.0, a[0], a[1], a[2], a[0] * a[0], a[1] * a[1], a[2] * a[2]];
    r.extend([a[0] * a[1], a[0] * a[2], a[1] * a[2]]);
    r.extend(&z);
    r.extend([a[0] * z[0], a[0] * z[1], a[1] * z[2]]);
    r.push(blk(block));
    r
}

/// Position-based order indicators for a full ordering of three components.
pub fn z_of_order(order: &[usize]) -> Vec<i8> {
    let pos = |c: usize| order.iter().position(|&o| o == c).unwrap();
    [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(j, k)| if pos(j) < pos(k) { 1 } else { -1 })
        .collect()
}

pub const ORDERS_3: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

//! Design files (CSV) and FDS plot output (CSV + SVG).
//!
//! A design file has the header `run, x1..xm | a1..am, z12..z(m-1)m, block`
//! followed by `A` for amount designs (and for proportion designs whose runs
//! carry a total amount).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::design::{pairs, BlockedDesign, DesignKind, Pwo, Run};
use crate::error::{Error, Result};
use crate::evaluate::FdsCurve;

/// Canonical number formatting: at most 6 significant digits, no trailing
/// zeros, integers without a decimal point.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let rounded: f64 = format!("{v:.5e}").parse().expect("formatted float parses");
    format!("{rounded}")
}

fn header(design: &BlockedDesign) -> Vec<String> {
    let symbol = match design.kind {
        DesignKind::Proportion => 'x',
        DesignKind::Amount => 'a',
    };
    let mut h = vec!["run".to_string()];
    h.extend((1..=design.m).map(|i| format!("{symbol}{i}")));
    h.extend(pairs(design.m).map(|(j, k)| format!("z{}{}", j + 1, k + 1)));
    h.push("block".into());
    if has_amount_column(design) {
        h.push("A".into());
    }
    h
}

fn has_amount_column(design: &BlockedDesign) -> bool {
    design.kind == DesignKind::Amount || design.runs.iter().any(|r| r.amount.is_some())
}

pub fn write_design_csv(design: &BlockedDesign) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let with_amount = has_amount_column(design);
    w.write_record(header(design)).map_err(csv_err)?;
    for (i, run) in design.runs.iter().enumerate() {
        let mut rec = vec![(i + 1).to_string()];
        rec.extend(run.values.iter().map(|&v| format_number(v)));
        rec.extend(run.pwo.iter().map(|z| z.to_string()));
        rec.push(run.block.to_string());
        if with_amount {
            let a = run.amount.ok_or_else(|| {
                Error::Schema(format!("run {} has no total amount but others do", i + 1))
            })?;
            rec.push(format_number(a));
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn write_design_file(design: &BlockedDesign, path: &Path) -> Result<()> {
    fs::write(path, write_design_csv(design)?)?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(io),
            _ => unreachable!(),
        }
    } else {
        Error::Schema(e.to_string())
    }
}

struct Layout {
    m: usize,
    kind: DesignKind,
    has_amount: bool,
}

fn parse_header(h: &csv::StringRecord) -> Result<Layout> {
    let names: Vec<&str> = h.iter().map(str::trim).collect();
    let unexpected = |i: usize, want: &str| {
        Error::Schema(match names.get(i) {
            Some(n) => format!("column {} is {n:?}, expected {want}", i + 1),
            None => format!("missing column {}: expected {want}", i + 1),
        })
    };
    if names.first() != Some(&"run") {
        return Err(unexpected(0, "\"run\""));
    }
    let kind = match names.get(1).and_then(|n| n.chars().next()) {
        Some('x') => DesignKind::Proportion,
        Some('a') => DesignKind::Amount,
        _ => return Err(unexpected(1, "\"x1\" or \"a1\"")),
    };
    let symbol = if kind == DesignKind::Proportion { 'x' } else { 'a' };
    let mut m = 0;
    while names.get(1 + m) == Some(&format!("{symbol}{}", m + 1).as_str()) {
        m += 1;
    }
    if m < 2 {
        return Err(unexpected(1 + m, &format!("\"{symbol}{}\"", m + 1)));
    }
    let mut col = 1 + m;
    for (j, k) in pairs(m) {
        let want = format!("z{}{}", j + 1, k + 1);
        if names.get(col) != Some(&want.as_str()) {
            return Err(unexpected(col, &format!("{want:?}")));
        }
        col += 1;
    }
    if names.get(col) != Some(&"block") {
        return Err(unexpected(col, "\"block\""));
    }
    col += 1;
    let has_amount = names.get(col) == Some(&"A");
    if has_amount {
        col += 1;
    } else if kind == DesignKind::Amount {
        return Err(unexpected(col, "\"A\" (amount designs need the total amount)"));
    }
    if col < names.len() {
        return Err(Error::Schema(format!("unexpected column {:?}", names[col])));
    }
    Ok(Layout { m, kind, has_amount })
}

/// Parse and validate a design file.
pub fn parse_design_csv(text: &str) -> Result<BlockedDesign> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let h = rdr.headers().map_err(csv_err)?.clone();
    let layout = parse_header(&h)?;
    let mut runs = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let field = |c: usize| -> Result<&str> {
            rec.get(c)
                .ok_or_else(|| Error::Schema(format!("data row {}: missing column {:?}", line + 1, &h[c])))
        };
        let num = |c: usize| -> Result<f64> {
            let s = field(c)?;
            s.parse::<f64>()
                .map_err(|_| Error::Schema(format!("data row {}, column {:?}: not a number: {s:?}", line + 1, &h[c])))
        };
        let int = |c: usize| -> Result<i64> {
            let s = field(c)?;
            s.parse::<i64>()
                .map_err(|_| Error::Schema(format!("data row {}, column {:?}: not an integer: {s:?}", line + 1, &h[c])))
        };
        let m = layout.m;
        let values = (1..=m).map(num).collect::<Result<Vec<f64>>>()?;
        let pwo = (m + 1..m + 1 + pairs(m).count())
            .map(|c| {
                let z = int(c)?;
                i8::try_from(z).map_err(|_| Error::Schema(format!("data row {}: z value {z} out of range", line + 1)))
            })
            .collect::<Result<Vec<i8>>>()?;
        let bcol = m + 1 + pwo.len();
        let block = int(bcol)?;
        let block = usize::try_from(block)
            .map_err(|_| Error::Schema(format!("data row {}: negative block {block}", line + 1)))?;
        let amount = if layout.has_amount { Some(num(bcol + 1)?) } else { None };
        runs.push(Run {
            values,
            pwo: Pwo(pwo),
            block,
            amount,
        });
    }
    if runs.is_empty() {
        return Err(Error::EmptyDesign);
    }
    BlockedDesign::new(layout.m, layout.kind, runs).validated()
}

pub fn read_design_file(path: &Path) -> Result<BlockedDesign> {
    parse_design_csv(&fs::read_to_string(path)?)
}

/// One numeric column read from a CSV file: the column named `column`, or
/// the only column when `column` is `None`.
pub fn read_numeric_column(text: &str, column: Option<&str>) -> Result<Vec<f64>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let h = rdr.headers().map_err(csv_err)?.clone();
    let idx = match column {
        Some(name) => h
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::Schema(format!("no column {name:?}")))?,
        None if h.len() == 1 => 0,
        None => return Err(Error::Schema(format!("expected one column, found {}", h.len()))),
    };
    rdr.records()
        .enumerate()
        .map(|(i, rec)| {
            let rec = rec.map_err(csv_err)?;
            let s = rec.get(idx).unwrap_or("");
            s.parse::<f64>()
                .map_err(|_| Error::Schema(format!("data row {}: not a number: {s:?}", i + 1)))
        })
        .collect()
}

/// `fraction,variance` rows at full (round-trip) precision.
pub fn fds_csv(curve: &FdsCurve) -> String {
    let mut s = String::from("fraction,variance\n");
    for (f, v) in &curve.points {
        writeln!(s, "{f},{v}").expect("write to string");
    }
    s
}

const SVG_W: f64 = 640.0;
const SVG_H: f64 = 420.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 30.0;
const MARGIN_B: f64 = 50.0;

/// A 1-2-5 step giving roughly `target` intervals over `span`.
fn nice_step(span: f64, target: f64) -> f64 {
    let raw = span / target;
    let mag = 10f64.powf(raw.log10().floor());
    let frac = raw / mag;
    let nice = if frac <= 1.0 {
        1.0
    } else if frac <= 2.0 {
        2.0
    } else if frac <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

pub fn fds_svg(curve: &FdsCurve) -> String {
    let vmax = curve.max().unwrap_or(1.0);
    let vmin = curve.points.first().map(|p| p.1).unwrap_or(0.0);
    let lo = if vmin >= 0.0 { 0.0 } else { vmin };
    let span = if vmax > lo { vmax - lo } else { 1.0 };
    let step = nice_step(span, 5.0);
    let y_lo = (lo / step).floor() * step;
    let y_hi = ((vmax / step).ceil() * step).max(y_lo + step);
    let decimals = (-step.log10().floor()).max(0.0) as usize;

    let pw = SVG_W - MARGIN_L - MARGIN_R;
    let ph = SVG_H - MARGIN_T - MARGIN_B;
    let sx = |f: f64| MARGIN_L + f * pw;
    let sy = |v: f64| MARGIN_T + (y_hi - v) / (y_hi - y_lo) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_W}" height="{SVG_H}" viewBox="0 0 {SVG_W} {SVG_H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="18" text-anchor="middle" font-size="14">Fraction of design space</text>"#,
        SVG_W / 2.0
    );
    // axes
    let (x0, x1, y0, y1) = (sx(0.0), sx(1.0), sy(y_lo), sy(y_hi));
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#);
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#);
    for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let x = sx(t);
        let _ = writeln!(s, r#"<line x1="{x}" y1="{y0}" x2="{x}" y2="{}" stroke="black"/>"#, y0 + 5.0);
        let _ = writeln!(
            s,
            r#"<text x="{x}" y="{}" text-anchor="middle">{t}</text>"#,
            y0 + 19.0
        );
    }
    let n_ticks = ((y_hi - y_lo) / step).round() as usize;
    for i in 0..=n_ticks {
        let v = y_lo + i as f64 * step;
        let y = sy(v);
        let _ = writeln!(s, r#"<line x1="{}" y1="{y}" x2="{x0}" y2="{y}" stroke="black"/>"#, x0 - 5.0);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end">{v:.decimals$}</text>"#,
            x0 - 8.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">Fraction</text>"#,
        MARGIN_L + pw / 2.0,
        SVG_H - 8.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">Prediction variance</text>"#,
        MARGIN_T + ph / 2.0,
        MARGIN_T + ph / 2.0
    );
    let pts: Vec<String> = curve
        .points
        .iter()
        .map(|&(f, v)| format!("{:.2},{:.2}", sx(f), sy(v)))
        .collect();
    let _ = writeln!(
        s,
        r#"<polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{}"/>"#,
        pts.join(" ")
    );
    s.push_str("</svg>\n");
    s
}

/// Writes `<base>.csv` and `<base>.svg`; returns both paths.
pub fn write_fds_outputs(curve: &FdsCurve, base: &Path) -> Result<(PathBuf, PathBuf)> {
    if curve.points.is_empty() {
        return Err(Error::Dimension("empty FDS curve".into()));
    }
    let csv_path = with_suffix(base, "csv");
    let svg_path = with_suffix(base, "svg");
    fs::write(&csv_path, fds_csv(curve))?;
    fs::write(&svg_path, fds_svg(curve))?;
    Ok((csv_path, svg_path))
}

fn with_suffix(base: &Path, ext: &str) -> PathBuf {
    let mut s = base.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

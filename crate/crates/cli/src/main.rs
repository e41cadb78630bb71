use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use oamix::catalog::{self, oofa_expand, ExpansionPolicy};
use oamix::evaluate::{
    check_orthogonal_blocking, criteria_report, fds_curve, power_table, BlockingReport, BlockingTolerance,
    EvalReport, PowerSettings, TermPower,
};
use oamix::fit::{ols_fit, FitResult};
use oamix::io::{read_design_file, read_numeric_column, write_design_csv, write_fds_outputs};
use oamix::linalg::Matrix;
use oamix::modelmat::{
    all_interaction_terms, build_model_matrix, cyclic_interaction_subset, default_interaction_subset,
    ModelLayout,
};
use oamix::{BlockedDesign, Error, FactorCoding, FamilyRegistry, InteractionTerm, ModelSpec};

/// Like `println!`, but a closed stdout (e.g. piping into `head`) is not
/// an error.
macro_rules! say {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

macro_rules! say_nolf {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = write!(std::io::stdout(), $($t)*);
    }};
}

const EXIT_USAGE: u8 = 2;
const EXIT_DATA: u8 = 3;
const EXIT_NUMERICAL: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "oamix", version, about = "Order-of-addition mixture designs in orthogonal blocks")]
struct Cli {
    /// Print results as one JSON object instead of tables.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a built-in design as CSV (lists the catalog without a name).
    Catalog {
        name: Option<String>,
        /// Maximum total amount for amount designs.
        #[arg(long, default_value_t = 1.0)]
        a_max: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Expand a base design into one run per addition order.
    Expand {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check equal per-block sums of every model column.
    CheckBlocks {
        #[arg(short, long)]
        input: PathBuf,
        #[command(flatten)]
        model: ModelArgs,
        /// Tolerance for every column (default 5e-3 for mixture columns, 0 for z columns).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Optimality criteria, prediction variance and per-term statistics.
    Eval {
        #[arg(short, long)]
        input: PathBuf,
        #[command(flatten)]
        model: ModelArgs,
        /// Design file whose runs are the prediction-variance evaluation set.
        #[arg(long)]
        eval_points: Option<PathBuf>,
    },
    /// Fraction-of-design-space curve: writes BASE.csv and BASE.svg.
    Fds {
        #[arg(short, long)]
        input: PathBuf,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Falls back to $OAMIX_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Standard errors and t-test power of each coefficient.
    Power {
        #[arg(short, long)]
        input: PathBuf,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Effect size in units of sigma.
        #[arg(long, default_value_t = 2.0)]
        effect_sd: f64,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
    },
    /// Least-squares fit of a response to the model.
    Fit {
        #[arg(short, long)]
        input: PathBuf,
        #[command(flatten)]
        model: ModelArgs,
        /// CSV with the response, one row per run.
        #[arg(long)]
        response: PathBuf,
        /// Response column name (default: the file's only column).
        #[arg(long)]
        column: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Model family: scheffe-l, scheffe-q, k-q, ma-l, ma-q, ca-l, ca-q.
    #[arg(long)]
    model: String,
    /// Include the PWO columns (default: when the design has any order).
    #[arg(long, overrides_with = "no_pwo")]
    pwo: bool,
    #[arg(long)]
    no_pwo: bool,
    /// Include the ±1 block column.
    #[arg(long, overrides_with = "no_block")]
    block: bool,
    #[arg(long)]
    no_block: bool,
    /// Mixture-order interactions: default, text, all, none, or a list such as x1z12,x2z23.
    #[arg(long)]
    interactions: Option<String>,
    /// raw or coded (2v/max - 1).
    #[arg(long, default_value = "raw")]
    coding: String,
}

impl ModelArgs {
    fn spec(&self, design: &BlockedDesign) -> oamix::Result<ModelSpec> {
        let family = FamilyRegistry::builtin().get(&self.model)?;
        let coding: FactorCoding = self.coding.parse()?;
        let terms = match self.interactions.as_deref() {
            None | Some("none") => Vec::new(),
            Some(list) => parse_interactions(list, design.m)?,
        };
        let pwo = if self.pwo {
            true
        } else if self.no_pwo {
            false
        } else {
            !terms.is_empty() || design.runs.iter().any(|r| !r.pwo.is_zero())
        };
        let mut spec = ModelSpec::new(family).with_coding(coding).with_interactions(terms);
        spec.include_pwo = pwo;
        spec.include_block = self.block && !self.no_block;
        Ok(spec)
    }
}

fn parse_interactions(list: &str, m: usize) -> oamix::Result<Vec<InteractionTerm>> {
    match list {
        "default" => default_interaction_subset(m),
        "text" => cyclic_interaction_subset(m),
        "all" => Ok(all_interaction_terms(m)),
        _ => list
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(str::parse)
            .collect(),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::SingularMatrix { .. } => EXIT_NUMERICAL,
        Error::UnknownName { .. } | Error::Spec(_) | Error::KindMismatch { .. } | Error::Unsupported(_) => {
            EXIT_USAGE
        }
        _ => EXIT_DATA,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn emit_text(text: &str, output: Option<&Path>) -> oamix::Result<()> {
    match output {
        Some(p) => std::fs::write(p, text)?,
        None => say_nolf!("{text}"),
    }
    Ok(())
}

fn print_json(value: &serde_json::Value) {
    say!("{}", serde_json::to_string_pretty(value).expect("json values serialize"));
}

fn run(cli: &Cli) -> oamix::Result<u8> {
    match &cli.command {
        Command::Catalog { name, a_max, output } => {
            let Some(name) = name else {
                for e in catalog::CATALOG {
                    say!("{:<18} {}", e.name, e.description);
                }
                return Ok(0);
            };
            let design = catalog::lookup(name)?.build(*a_max)?;
            emit_text(&write_design_csv(&design)?, output.as_deref())?;
        }
        Command::Expand { input, output } => {
            let base = read_design_file(input)?;
            let expanded = oofa_expand(&base, ExpansionPolicy::default())?;
            emit_text(&write_design_csv(&expanded)?, output.as_deref())?;
        }
        Command::CheckBlocks { input, model, tol } => {
            let design = read_design_file(input)?;
            let spec = model.spec(&design)?;
            let tol = tol.map(BlockingTolerance::uniform).unwrap_or_default();
            let report = check_orthogonal_blocking(&design, &spec, tol)?;
            if cli.json {
                print_json(&serde_json::to_value(&report).expect("report serializes"));
            } else {
                print_blocking(&report);
            }
            if !report.pass {
                return Ok(EXIT_DATA);
            }
        }
        Command::Eval {
            input,
            model,
            eval_points,
        } => {
            let design = read_design_file(input)?;
            let spec = model.spec(&design)?;
            let x = build_model_matrix(&design, &spec)?;
            let points = match eval_points {
                Some(p) => {
                    let pts = read_design_file(p)?;
                    let layout = ModelLayout::for_design(&design, &spec)?;
                    let mut m = Matrix::zeros(0, 0);
                    for r in &pts.runs {
                        if r.values.len() != design.m {
                            return Err(Error::Dimension(format!(
                                "evaluation point has {} components, design has {}",
                                r.values.len(),
                                design.m
                            )));
                        }
                        m.push_row(&layout.row(&r.values, &r.pwo, r.block, r.amount));
                    }
                    Some(m)
                }
                None => None,
            };
            let report = criteria_report(&x, points.as_ref())?;
            if cli.json {
                print_json(&serde_json::to_value(&report).expect("report serializes"));
            } else {
                print_eval(&report);
            }
        }
        Command::Fds {
            input,
            model,
            samples,
            seed,
            output,
        } => {
            let design = read_design_file(input)?;
            let spec = model.spec(&design)?;
            let seed = match seed {
                Some(s) => *s,
                None => match std::env::var("OAMIX_SEED") {
                    Ok(v) => v
                        .trim()
                        .parse()
                        .map_err(|_| Error::Spec(format!("OAMIX_SEED is not an integer: {v:?}")))?,
                    Err(_) => 0,
                },
            };
            let curve = fds_curve(&design, &spec, *samples, seed)?;
            let (csv, svg) = write_fds_outputs(&curve, output)?;
            let (median, max) = (curve.median().unwrap_or(f64::NAN), curve.max().unwrap_or(f64::NAN));
            if cli.json {
                print_json(&json!({
                    "samples": curve.n_samples,
                    "seed": seed,
                    "median": median,
                    "max": max,
                    "csv": csv,
                    "svg": svg,
                }));
            } else {
                say!("samples {}  seed {seed}  median pv {median:.6}  max pv {max:.6}", curve.n_samples);
                say!("wrote {} and {}", csv.display(), svg.display());
            }
        }
        Command::Power {
            input,
            model,
            alpha,
            effect_sd,
            sigma,
        } => {
            let design = read_design_file(input)?;
            let spec = model.spec(&design)?;
            let x = build_model_matrix(&design, &spec)?;
            let settings = PowerSettings {
                sigma: *sigma,
                alpha: *alpha,
                effect_sd: *effect_sd,
            };
            let table = power_table(&x, settings)?;
            if cli.json {
                print_json(&json!({ "settings": settings, "terms": table }));
            } else {
                print_power(&table, &settings);
            }
        }
        Command::Fit {
            input,
            model,
            response,
            column,
            output,
        } => {
            let design = read_design_file(input)?;
            let spec = model.spec(&design)?;
            let x = build_model_matrix(&design, &spec)?;
            let y = read_numeric_column(&std::fs::read_to_string(response)?, column.as_deref())?;
            let fit = ols_fit(&x, &y)?;
            if let Some(out) = output {
                std::fs::write(out, fit_csv(&fit))?;
            }
            if cli.json {
                print_json(&serde_json::to_value(&fit).expect("fit serializes"));
            } else {
                print_fit(&fit);
            }
        }
    }
    Ok(0)
}

fn print_blocking(r: &BlockingReport) {
    let w = r.conditions.iter().map(|c| c.term.len()).max().unwrap_or(4).max(4);
    let n_blocks = r.conditions.first().map_or(0, |c| c.block_sums.len());
    say_nolf!("{:<18} {:<w$}", "condition", "term");
    for b in 1..=n_blocks {
        say_nolf!(" {:>12}", format!("block {b}"));
    }
    say!(" {:>12} {:>10}  result", "discrepancy", "tolerance");
    for c in &r.conditions {
        say_nolf!("{:<18} {:<w$}", c.condition, c.term);
        for s in &c.block_sums {
            say_nolf!(" {s:>12.6}");
        }
        say!(
            " {:>12.3e} {:>10.1e}  {}",
            c.discrepancy,
            c.tolerance,
            if c.pass { "pass" } else { "FAIL" }
        );
    }
    say!("orthogonal blocking: {}", if r.pass { "pass" } else { "fail" });
}

fn opt(v: Option<f64>, digits: usize) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.digits$}"))
}

fn print_eval(r: &EvalReport) {
    say!("n {:>12}", r.n);
    say!("p {:>12}", r.p);
    say!("det_xtx      {:.6e}", r.det_xtx);
    say!("d_criterion  {:.6}", r.d_criterion);
    say!("a_criterion  {:.6}", r.a_criterion);
    say!("max_pv       {:.6}  (row {} of {} set)", r.max_pv, r.max_pv_row + 1, r.eval_set);
    say!("avg_pv       {:.6}", r.avg_pv);
    say!("g_efficiency {:.2}%", r.g_efficiency);
    say!();
    let w = r.terms.iter().map(|t| t.name.len()).max().unwrap_or(4).max(4);
    say!("{:<w$} {:>10} {:>10} {:>10}", "term", "se", "r_squared", "power_2sd");
    for t in &r.terms {
        say!(
            "{:<w$} {:>10.4} {:>10} {:>10}",
            t.name,
            t.se,
            opt(t.r_squared, 4),
            opt(t.power_2sd, 4)
        );
    }
    say!();
    for n in &r.notes {
        say!("note: {n}");
    }
}

fn print_power(table: &[TermPower], s: &PowerSettings) {
    say!(
        "alpha {}  effect {} sigma  sigma {}  df {}",
        s.alpha,
        s.effect_sd,
        s.sigma,
        table.first().map_or(0, |t| t.df)
    );
    let w = table.iter().map(|t| t.name.len()).max().unwrap_or(4).max(4);
    say!("{:<w$} {:>10} {:>10} {:>10}", "term", "se", "ncp", "power");
    for t in table {
        say!("{:<w$} {:>10.4} {:>10.4} {:>10.4}", t.name, t.se, t.noncentrality, t.power);
    }
}

fn print_fit(f: &FitResult) {
    say!("sigma_hat {:.6}  df {}  r_squared {:.6}", f.sigma_hat, f.df_residual, f.r_squared);
    let w = f.columns.iter().map(String::len).max().unwrap_or(4).max(4);
    say!("{:<w$} {:>14} {:>12}", "term", "estimate", "se");
    for ((c, b), s) in f.columns.iter().zip(&f.estimates).zip(&f.se) {
        say!("{c:<w$} {b:>14.6} {s:>12.6}");
    }
}

fn fit_csv(f: &FitResult) -> String {
    let mut s = String::from("term,estimate,se\n");
    for ((c, b), e) in f.columns.iter().zip(&f.estimates).zip(&f.se) {
        s.push_str(&format!("{c},{b},{e}\n"));
    }
    s
}

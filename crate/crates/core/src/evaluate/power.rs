use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};
use statrs::function::erf::erfc;
use statrs::function::gamma::ln_gamma;

use super::criteria::InfoMatrix;
use crate::error::{Error, Result};
use crate::modelmat::ModelMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerSettings {
    pub sigma: f64,
    pub alpha: f64,
    /// Effect size in units of sigma.
    pub effect_sd: f64,
}

impl Default for PowerSettings {
    fn default() -> Self {
        PowerSettings {
            sigma: 1.0,
            alpha: 0.05,
            effect_sd: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermPower {
    pub name: String,
    pub se: f64,
    pub noncentrality: f64,
    pub df: usize,
    pub power: f64,
}

/// Standard error and two-sided t-test power of every coefficient.
pub fn power_table(x: &ModelMatrix, settings: PowerSettings) -> Result<Vec<TermPower>> {
    let (n, p) = (x.n(), x.p());
    if n <= p {
        return Err(Error::InsufficientDf { n, p });
    }
    if !(settings.alpha > 0.0 && settings.alpha < 1.0) {
        return Err(Error::Spec(format!("alpha must lie in (0, 1), got {}", settings.alpha)));
    }
    if settings.sigma.is_nan() || settings.sigma <= 0.0 {
        return Err(Error::Spec(format!("sigma must be positive, got {}", settings.sigma)));
    }
    let info = InfoMatrix::new(x)?;
    let df = n - p;
    let crit = t_quantile(1.0 - settings.alpha / 2.0, df as f64);
    Ok((0..p)
        .map(|j| {
            let se = settings.sigma * info.inverse[(j, j)].sqrt();
            let ncp = settings.effect_sd * settings.sigma / se;
            TermPower {
                name: x.columns[j].clone(),
                se,
                noncentrality: ncp,
                df,
                power: noncentral_t_two_sided_power(df as f64, ncp, crit),
            }
        })
        .collect())
}

fn t_quantile(prob: f64, df: f64) -> f64 {
    StudentsT::new(0.0, 1.0, df)
        .expect("df > 0")
        .inverse_cdf(prob)
}

fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// `P(|T| > crit)` for `T` noncentral t with `df` degrees of freedom and
/// noncentrality `ncp`.
///
/// Writes `T = (Z + ncp) / S` with `S = sqrt(V / df)`, `V ~ χ²(df)`, and
/// integrates `P(|Z + ncp| > crit·s)` against the density of `S` by
/// adaptive Simpson quadrature.
pub fn noncentral_t_two_sided_power(df: f64, ncp: f64, crit: f64) -> f64 {
    let ln_norm = std::f64::consts::LN_2 + df.ln() - (df / 2.0) * std::f64::consts::LN_2
        - ln_gamma(df / 2.0);
    // density of S: 2·df·s·f_χ²(df·s²)
    let density = move |s: f64| -> f64 {
        if s <= 0.0 {
            return if df == 1.0 {
                (ln_norm).exp()
            } else {
                0.0
            };
        }
        let v = df * s * s;
        (ln_norm + s.ln() + (df / 2.0 - 1.0) * v.ln() - v / 2.0).exp()
    };
    let f = |s: f64| density(s) * (normal_cdf(ncp - crit * s) + normal_cdf(-ncp - crit * s));

    // χ² mass outside [df - 40·sd, df + 40·sd + 100] is negligible
    let spread = 40.0 * (2.0 * df).sqrt();
    let s_min = ((df - spread).max(0.0) / df).sqrt();
    let s_max = ((df + spread + 100.0) / df).sqrt();
    let panels = 256;
    let h = (s_max - s_min) / panels as f64;
    let mut total = 0.0;
    for i in 0..panels {
        let (a, b) = (s_min + i as f64 * h, s_min + (i + 1) as f64 * h);
        let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        // relative part absorbs roundoff in the log-density at large df
        let eps = (1e-9 * whole.abs()).max(1e-12);
        total += simpson(&f, a, b, fa, fm, fb, whole, eps, 30);
    }
    total.clamp(0.0, 1.0)
}

#[allow(clippy::too_many_arguments)]
fn simpson(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        return left + right + delta / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1)
        + simpson(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1)
}

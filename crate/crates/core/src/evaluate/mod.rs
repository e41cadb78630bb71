//! Design-quality computations.
//!
//! Prediction variance is the unscaled `vᵀ(XᵀX)⁻¹v`, in units of σ².
//! G-efficiency folds in the run count as `100·p / (n·max_pv)`.

mod blocking;
mod criteria;
mod fds;
mod power;

pub use blocking::{check_orthogonal_blocking, BlockingCondition, BlockingReport, BlockingTolerance};
pub use criteria::{
    criteria_report, prediction_variance, term_r_squared, EvalReport, InfoMatrix, TermStats,
};
pub use fds::{fds_curve, fds_curve_with_rows, FdsCurve, FDS_CHUNK};
pub use power::{noncentral_t_two_sided_power, power_table, PowerSettings, TermPower};

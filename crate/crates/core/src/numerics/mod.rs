//! Special functions and log-domain primitives shared by the analytic model.

mod erf;
pub mod extended;
mod gamma;
mod log;

pub use erf::{erf, erfc};
pub use extended::{CompensatedSum, DoubleDouble, ExtFloat};
pub use gamma::{
    ln_gamma, ln_lower_gamma_scaled, ln_power_factor, ln_reg_lower_gamma, log1pmx, reg_lower_gamma,
    MAX_ITERATIONS,
};
pub use log::{binomial_f64, log_binomial, log_sum_exp, LogValue};

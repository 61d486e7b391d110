//! Numerical kernel shared by every analytical evaluator.

mod double_double;
mod erf;
mod gamma;
mod quadrature;
mod series;
mod sum;

pub use double_double::DoubleDouble;
pub use erf::{erfc, erfcx};
pub use gamma::{
    binomial, ln_gamma, ln_gamma_complex, ln_pochhammer, pochhammer, pochhammer_checked,
    signed_ln_gamma, Pochhammer,
};
pub use quadrature::{
    gauss_laguerre_rule, laplace_quadrature, tanh_sinh, QuadratureOutcome, QuadratureScheme,
    QuadratureSpec, TanhSinhOutcome, LAGUERRE_NODE_CAP, TANH_SINH_UPPER_LIMIT,
};
pub use series::{series_mul, series_pow, PowerSeries};
pub use sum::CompensatedSum;

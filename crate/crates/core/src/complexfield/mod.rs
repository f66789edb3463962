//! Gamma function of the complex field, Mellin–Barnes quadrature, and `pG^C_p`.

pub mod gamma;
pub mod hypg;
pub mod quad;
pub mod suites;

pub use gamma::{double_power, gamma_c, ln_gamma, ln_gamma_c, GammaError, LogC};
pub use hypg::{hyp_g, hyp_g_quad, hyp_g_regularized, hyp_g_series, HypParams};
pub use quad::{gauss_legendre, mb_integrate, GVal, QuadConfig, QuadError, VMap};

//! Verification toolkit for Gelfand–Tsetlin bases of principal series
//! representations of `gl_n(ℂ)`.

pub mod complexfield;
pub mod eigenfun;
pub mod kernels;
pub mod report;
pub mod schemes;
pub mod weyl;
pub mod yangian;

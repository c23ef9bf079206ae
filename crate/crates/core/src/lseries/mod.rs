//! L-functions of GL(2) forms twisted by Hecke characters.

pub mod afe;
pub mod gamma;
pub mod kernel;
pub mod lav;
pub mod newform;
pub mod tau;

pub use afe::{afe_lvalue, direct_series, fe_residual, AFEConfig, AfePlan, DirectResult, LFunction, LValueResult, TwistData};
pub use gamma::GammaFactor;
pub use kernel::{Kernel, VFunction};
pub use lav::{dual_envelope, exponent_window, lav, LavResult};
pub use newform::{newform_load, Newform, NewformDoc};
pub use tau::tau_table;

//! Twisted central L-values of GL(2) newforms over number fields, with exact
//! ray class character machinery and cone lattice counting.

pub mod abelian;
pub mod character;
pub mod cones;
pub mod cyclotomic;
pub mod error;
pub mod experiment;
pub mod gauss;
pub mod linalg;
pub mod lseries;
pub mod modarith;
pub mod nf;
pub mod rayclass;
pub mod roots;
pub mod special;
pub mod verify;

pub use error::{Error, Result};

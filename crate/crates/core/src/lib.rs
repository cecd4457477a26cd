//! Exact-arithmetic Lie theory for cohomogeneity one actions on the rank-two
//! symmetric spaces `G₂ᶜ/G₂`, `SL₃(ℂ)/SU₃` and `SO⁰(2, n+2)/SO(2)SO(n+2)`.

pub mod error;
pub mod liealg;
pub mod linalg;
pub mod nilcons;
pub mod orbits;
pub mod parabolic;
pub mod rootsys;
pub mod scalar;
pub mod subspec;
pub mod verify;

pub use error::{Error, Result};

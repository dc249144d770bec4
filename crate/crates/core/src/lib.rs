//! Supercharacter theories of finite groups of triangular type `G = H + J`
//! over finite fields, computed exactly.

pub mod algebra;
pub mod error;
pub mod exactlin;
pub mod group;
pub mod io;
pub mod kirillov;
pub mod orbits;
pub mod supertheory;

pub use error::{Error, Result};
